//! Given two reducible elements sharing a fixed cylinder, produce a
//! conjugate of the first that commutes with both, and check the
//! commutators vanish exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vworkbench::constructions::commuting_conjugate;
use vworkbench::dyadic::w;
use vworkbench::vcore::random_reducible_fixing;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // A pair with a common fixed cylinder; pairs without one have no
    // common window and are rejected up front.
    let shared = w("01");
    let a = random_reducible_fixing(&mut rng, &shared, 14);
    let b = random_reducible_fixing(&mut rng, &shared, 14);
    println!("a supported on {}", a.support());
    println!("b supported on {}", b.support());

    let cert = commuting_conjugate(&a, &b).unwrap();
    cert.validate().unwrap();

    println!("window [{}]", cert.window);
    let x = &cert.conjugated;
    println!("x = g a g^-1 supported on {}", x.support());

    for (name, other) in [("a", &a), ("b", &b)] {
        let comm = x
            .compose(other)
            .unwrap()
            .compose(&x.inverse())
            .unwrap()
            .compose(&other.inverse())
            .unwrap();
        println!("[x, {name}] is identity: {}", comm.is_identity());
    }
}
