//! Seeded samplers for elements. Callers pass the RNG, so every entry point
//! stays byte-deterministic for a fixed seed.

use crate::dyadic::{complement_code, BinaryWord};
use crate::vcore::VElement;
use rand::seq::SliceRandom;
use rand::Rng;

/// Depth budget for sampled leaves; keeps later compositions far from the
/// word depth cap.
const SAMPLE_DEPTH: u32 = 16;

/// Splits random leaves of `code` until it has `target` leaves.
fn grow_code<R: Rng>(rng: &mut R, mut code: Vec<BinaryWord>, target: usize) -> Vec<BinaryWord> {
    while code.len() < target {
        let i = rng.gen_range(0..code.len());
        if code[i].len() >= SAMPLE_DEPTH {
            continue;
        }
        let (c0, c1) = code[i].children().expect("below depth cap");
        code.swap_remove(i);
        code.push(c0);
        code.push(c1);
    }
    code.sort();
    code
}

/// Pairs two word lists of equal size by a random bijection.
fn pair_randomly<R: Rng>(
    rng: &mut R,
    domain: Vec<BinaryWord>,
    range: Vec<BinaryWord>,
) -> Vec<(BinaryWord, BinaryWord)> {
    let mut order: Vec<usize> = (0..domain.len()).collect();
    order.shuffle(rng);
    domain
        .into_iter()
        .zip(order.into_iter().map(|j| range[j]))
        .collect()
}

/// Uniform-ish random element: two independently grown codes with 2 to
/// `max_leaves` leaves and a random pairing.
pub fn random_element<R: Rng>(rng: &mut R, max_leaves: usize) -> VElement {
    let target = rng.gen_range(2..=max_leaves.max(2));
    let domain = grow_code(rng, vec![BinaryWord::root()], target);
    let range = grow_code(rng, vec![BinaryWord::root()], target);
    let pairs = pair_randomly(rng, domain, range);
    VElement::from_pairs(&pairs)
        .expect("grown codes are complete")
        .reduce()
}

/// Random element that is the identity on the cylinder of `fixed` (so its
/// thickness is at least 2^-|fixed|). The complement cylinders are refined
/// independently on the two sides and paired at random.
pub fn random_reducible_fixing<R: Rng>(
    rng: &mut R,
    fixed: &BinaryWord,
    max_extra_leaves: usize,
) -> VElement {
    let outside = complement_code(&[*fixed]);
    if outside.is_empty() {
        return VElement::identity();
    }
    let target = rng.gen_range(outside.len()..=outside.len().max(max_extra_leaves));
    let domain = grow_code(rng, outside.clone(), target);
    let range = grow_code(rng, outside, target);
    let mut pairs = pair_randomly(rng, domain, range);
    pairs.push((*fixed, *fixed));
    VElement::from_pairs(&pairs)
        .expect("complement plus fixed leaf is complete")
        .reduce()
}

/// Random element fixing some cylinder of depth 1 to 3 pointwise.
pub fn random_reducible<R: Rng>(rng: &mut R, max_extra_leaves: usize) -> VElement {
    let depth = rng.gen_range(1..=3u32);
    let value = rng.gen_range(0..1u64 << depth);
    let fixed = BinaryWord::from_value(depth, value).expect("depth <= 3");
    random_reducible_fixing(rng, &fixed, max_extra_leaves)
}
