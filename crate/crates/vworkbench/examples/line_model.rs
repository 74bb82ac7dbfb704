//! Isometries of the integer line, the model for axis displacement
//! estimates. When a translation and a reflection compose to another
//! reflection (an elliptic product), the reflection moves some vertex by
//! at most 1; mirrors sitting on a vertex move it not at all.

use vworkbench::hyplab::{line_model_check, LineModelIsometry};

fn main() {
    let g = LineModelIsometry::Translation { offset: 5 };
    // Reflections store doubled centers so half-integer mirrors stay
    // exact: center2 = 7 mirrors around 7/2, between two vertices.
    let h = LineModelIsometry::Reflection { center2: 7 };

    let hg = h.compose(&g);
    println!("h o g = {hg:?} (elliptic)");
    for x in 0..4 {
        println!("  h({x}) = {}", h.apply(x));
    }

    let check = line_model_check(&g, &h, 64);
    println!(
        "h moves vertex {} by {}, holds: {}",
        check.achieved_at, check.min_displacement, check.holds
    );

    // An even doubled center is a vertex-centered mirror: displacement 0.
    let centered = line_model_check(
        &LineModelIsometry::Translation { offset: 4 },
        &LineModelIsometry::Reflection { center2: 10 },
        64,
    );
    println!(
        "vertex-centered case: h fixes vertex {} (displacement {})",
        centered.achieved_at, centered.min_displacement
    );
}
