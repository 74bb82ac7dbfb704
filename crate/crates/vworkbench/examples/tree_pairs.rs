//! Tour of the element workbench: build two prefix-exchange bijections,
//! compose them, reduce, and inspect supports. Everything is exact.

use vworkbench::dyadic::w;
use vworkbench::vcore::VElement;

fn main() {
    // Swap the halves of the Cantor set.
    let swap = VElement::from_pairs(&[(w("0"), w("1")), (w("1"), w("0"))]).unwrap();

    // A three-leaf rotation: 00 -> 01 -> 1 -> 00.
    let rot = VElement::from_pairs(&[
        (w("00"), w("01")),
        (w("01"), w("1")),
        (w("1"), w("00")),
    ])
    .unwrap();

    println!("swap: {swap}");
    println!("rot:  {rot}");
    println!("rot thickness: {}", rot.thickness());

    // compose(g) applies g first, then self.
    let both = swap.compose(&rot).unwrap();
    println!("swap . rot = {both}");
    println!("(swap . rot)^-1 . (swap . rot) is identity: {}",
        both.inverse().compose(&both).unwrap().is_identity());

    // Orbits of individual cylinders.
    for s in ["00", "01", "10", "11"] {
        let x = w(s);
        println!("rot sends {x} to {}", rot.apply_word(&x).unwrap());
    }

    // rot^3 is the identity even though the intermediate products grow.
    let cube = rot.pow(3).unwrap();
    println!("rot^3 is identity: {}", cube.is_identity());

    // Supports and fixed sets are exact cylinder unions.
    println!("swap support: {}", swap.support());
    println!("rot fixed set: {}", rot.pointwise_fixed());

    // Elements serialize as leaf lists plus a permutation.
    let json = serde_json::to_string_pretty(&rot).unwrap();
    let back: VElement = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rot);
    println!("serde round trip ok:\n{json}");
}
