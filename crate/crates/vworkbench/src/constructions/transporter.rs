//! Generic transporter: the smallest reusable piece of every construction.

use crate::constructions::ConstructionError;
use crate::dyadic::{check_prefix_free, complement_code, BinaryWord};
use crate::vcore::VElement;

/// Builds an element mapping each source cylinder affinely onto the target
/// cylinder in the same position, acting as the identity on every `fixed`
/// cylinder. The rest of [0,1] is filled canonically: both complements are
/// equalized by splitting the shallowest (lex-first) cylinder of the smaller
/// side, then matched in lexicographic order.
///
/// Requires `sources ∪ fixed` and `targets ∪ fixed` to each be prefix-free
/// and the two lists to have equal length.
pub fn transporter(
    sources: &[BinaryWord],
    targets: &[BinaryWord],
    fixed: &[BinaryWord],
) -> Result<VElement, ConstructionError> {
    if sources.len() != targets.len() {
        return Err(ConstructionError::InfeasibleTransport {
            reason: format!("{} sources vs {} targets", sources.len(), targets.len()),
        });
    }
    let side = |list: &[BinaryWord]| {
        let mut all: Vec<BinaryWord> = list.to_vec();
        all.extend_from_slice(fixed);
        all
    };
    let dom_used = side(sources);
    let rng_used = side(targets);
    for words in [&dom_used, &rng_used] {
        check_prefix_free(words).map_err(|e| ConstructionError::InfeasibleTransport {
            reason: e.to_string(),
        })?;
    }

    let mut pairs: Vec<(BinaryWord, BinaryWord)> = sources
        .iter()
        .zip(targets.iter())
        .map(|(s, t)| (*s, *t))
        .chain(fixed.iter().map(|f| (*f, *f)))
        .collect();

    let mut dom_rest = complement_code(&dom_used);
    let mut rng_rest = complement_code(&rng_used);
    while dom_rest.len() != rng_rest.len() {
        let smaller = if dom_rest.len() < rng_rest.len() {
            &mut dom_rest
        } else {
            &mut rng_rest
        };
        let i = smaller
            .iter()
            .enumerate()
            .min_by_key(|(_, w)| (w.len(), **w))
            .map(|(i, _)| i)
            .ok_or_else(|| ConstructionError::InfeasibleTransport {
                reason: "one side covers [0,1], the other does not".into(),
            })?;
        let (c0, c1) = smaller[i].children()?;
        smaller.swap_remove(i);
        smaller.push(c0);
        smaller.push(c1);
    }
    dom_rest.sort();
    rng_rest.sort();
    pairs.extend(dom_rest.into_iter().zip(rng_rest));

    Ok(VElement::from_pairs(&pairs)?.reduce())
}
