//! Build a handle for a pair of elements: one conjugator h and cylinders
//! I, J, A, B so that EVERY f supported in I makes fh, f h g1 and f h g2
//! reducible at once. Sampling f is only a spot check; the certificate
//! itself is verified exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vworkbench::constructions::{sample_supported_in, simultaneous_handle};
use vworkbench::vcore::random_element;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g1 = random_element(&mut rng, 10);
    let g2 = random_element(&mut rng, 10);

    let cert = simultaneous_handle(&g1, &g2).unwrap();
    cert.validate().unwrap();
    println!("pocket I = [{}], fixed pocket J = [{}]", cert.i, cert.j);
    println!("probe cylinders A = [{}], B = [{}]", cert.a, cert.b);
    println!("handle h: {} leaves", cert.h.domain_leaves().len());

    // Twenty random partners, each checked exactly.
    cert.check_sampled(&mut rng, 20).unwrap();
    println!("20 sampled partners: fh, fhg1, fhg2 all reducible");

    // One partner spelled out; redraw if the sampler hands back the identity.
    let f = loop {
        let f = sample_supported_in(&mut rng, &cert.i, 12).unwrap();
        if !f.is_identity() {
            break f;
        }
    };
    let fh = f.compose(&cert.h).unwrap().reduce();
    let fhg1 = fh.compose(&g1).unwrap().reduce();
    let fhg2 = fh.compose(&g2).unwrap().reduce();
    println!("one partner f supported on {}:", f.support());
    println!("  fh fixes [{}]: {}", cert.j, fh.pointwise_fixed().contains_word(&cert.j));
    println!("  fhg1 fixes [{}]: {}", cert.a, fhg1.pointwise_fixed().contains_word(&cert.a));
    println!("  fhg2 fixes [{}]: {}", cert.b, fhg2.pointwise_fixed().contains_word(&cert.b));
}
