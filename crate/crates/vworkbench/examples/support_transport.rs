//! Conjugate an element so that its support lands inside a prescribed
//! cylinder. Works for any element that fixes at least one cylinder.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vworkbench::constructions::conjugate_support_into;
use vworkbench::dyadic::w;
use vworkbench::vcore::random_reducible_fixing;

fn main() {
    let target = w("110");
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // The construction needs the target cylinder to be fixed pointwise, so
    // sample an element that already fixes it.
    let g = random_reducible_fixing(&mut rng, &target, 12);
    println!("g supported on {}", g.support());
    println!("target cylinder [{target}]");

    let cert = conjugate_support_into(&g, &target).unwrap();
    cert.validate().unwrap();

    let moved = &cert.conjugated;
    println!("h g h^-1 supported on {}", moved.support());
    assert!(moved.support().is_subset_of(&vworkbench::dyadic::CylinderSet::from_words([target])));
    println!("containment verified exactly");
}
