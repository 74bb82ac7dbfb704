//! Factor a random element into five reducible pieces, each fixing a
//! cylinder of depth at most three pointwise, and re-verify the product.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vworkbench::constructions::decompose_five;
use vworkbench::vcore::random_element;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let g = random_element(&mut rng, 24);
    println!("input ({} leaves, thickness {}):\n  {g}\n", g.domain_leaves().len(), g.thickness());

    let cert = decompose_five(&g).unwrap();
    cert.validate().unwrap();

    for (k, (f, wit)) in cert.factors.iter().zip(&cert.witnesses).enumerate() {
        println!(
            "factor {k}: fixes [{wit}] pointwise, thickness {}, {} leaves",
            f.thickness(),
            f.domain_leaves().len()
        );
    }
    let e = &cert.exponents;
    println!("\nexponents: n = {}, m = {}, p = {}", e.n, e.m, e.p);

    // The product of the factors, in order, is exactly the input.
    let mut prod = cert.factors[0].clone();
    for f in &cert.factors[1..] {
        prod = prod.compose(f).unwrap();
    }
    assert_eq!(prod.reduce(), g.reduce());
    println!("product of the five factors equals the input: ok");

    println!("\ncertificate JSON:\n{}", serde_json::to_string_pretty(&cert).unwrap());
}
