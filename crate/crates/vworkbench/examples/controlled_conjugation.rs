//! The finitely generated solving family: a fixed set of generators for a
//! target interval and a granularity, able to conjugate the support of any
//! thick-enough element into the interval using bounded exponents.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vworkbench::constructions::{big_f, solve_big_f};
use vworkbench::dyadic::{w, CylinderSet, DyadicRational};
use vworkbench::vcore::random_reducible;

fn main() {
    let interval = w("10");
    let eps = DyadicRational::pow2_neg(3);
    let family = big_f(&interval, &eps).unwrap();
    family.validate().unwrap();

    println!("interval [{}], epsilon {} (level {})", family.interval(), family.epsilon(), family.level());
    println!("{} generators", family.generators().len());

    let target = CylinderSet::from_words([interval]);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..5 {
        let g = random_reducible(&mut rng, 10);
        let cert = solve_big_f(&family, &g).unwrap();
        cert.validate().unwrap();
        let moved = cert
            .conjugator
            .compose(&g)
            .unwrap()
            .compose(&cert.conjugator.inverse())
            .unwrap()
            .reduce();
        assert!(moved.support().is_subset_of(&target));
        println!(
            "g{k}: thickness {}, exponents {:?}, support carried into [{}]",
            g.thickness(),
            cert.exponents,
            interval
        );
    }
}
