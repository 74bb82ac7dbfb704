//! Conjugating a thick element into a prescribed cylinder using only
//! powers of the eight family generators.
//!
//! The input must fix some cylinder at least as long as the family's
//! granularity. Write J for its thickest fixed cylinder; the support lives
//! in the complement of J, and three shapes can occur:
//!
//! * J at the bottom (all-0 word): the support sits above the repeller of
//!   the slot-1 push, which drives it into the top cell; the coarse
//!   down-shift then slides that cell into the interval. The slide count
//!   is exact grid arithmetic, no search.
//! * J at the top (all-1 word): the mirror image, slots 3 then 2.
//! * J interior (mixed word): the fine shift slides J to straddle 1/2
//!   strictly, so the transported support clears the split push's fixed
//!   point by at least a quarter cell on both sides; the split push then
//!   drives it into the two end pockets, the pocket insertion carries the
//!   pockets into [eps/2, eps], and the fine shift slides that band into
//!   the interval. Strict straddling matters: a support component pinned
//!   at 1/2 would never leave.

use serde::{Deserialize, Serialize};

use crate::constructions::family::{big_f, BigFFamily};
use crate::constructions::witnesses::{ones, zeros};
use crate::constructions::{ConstructionError, SCAN_CAP};
use crate::dyadic::{BinaryWord, CylinderSet, DyadicRational};
use crate::vcore::VElement;

/// A verified conjugation of `input` into the family's interval, recorded
/// as the eight generator exponents and their composed product.
#[derive(Clone, Serialize, Deserialize)]
pub struct SolveCertificate {
    pub interval: BinaryWord,
    pub requested_epsilon: DyadicRational,
    pub exponents: [i64; 8],
    pub conjugator: VElement,
    pub input: VElement,
}

impl SolveCertificate {
    /// Rebuilds the family from the stored parameters and re-checks
    /// everything: the conjugator is exactly the recorded exponent
    /// product, the input is thick enough, and the conjugated support
    /// lands inside the interval.
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let invalid =
            |reason: &str| ConstructionError::CertificateInvalid { reason: reason.into() };
        let family = big_f(&self.interval, &self.requested_epsilon)?;
        if self.input.thickness() < family.epsilon() {
            return Err(invalid("input is thinner than the family floor"));
        }
        if family.compose_exponents(&self.exponents)? != self.conjugator {
            return Err(invalid("conjugator is not the recorded exponent product"));
        }
        let moved = self
            .conjugator
            .compose(&self.input)?
            .compose(&self.conjugator.inverse())?;
        if !moved
            .support()
            .is_subset_of(&CylinderSet::from_words([self.interval]))
        {
            return Err(invalid("conjugated support leaks out of the interval"));
        }
        Ok(())
    }
}

/// x * 2^depth as an exact integer; callers only pass dyadics aligned to
/// the grid, which the family's level inequalities guarantee.
fn scaled(x: &DyadicRational, depth: u32) -> u128 {
    assert!(x.exponent() <= depth, "value finer than the grid");
    x.numerator() << (depth - x.exponent())
}

/// Applies `gen` to `set` until it is contained in `target`, returning the
/// application count and the final set.
fn push_until(
    gen: &VElement,
    mut set: CylinderSet,
    target: &CylinderSet,
    stage: &'static str,
) -> Result<(i64, CylinderSet), ConstructionError> {
    let mut count = 0i64;
    while !set.is_subset_of(target) {
        if count as u64 >= SCAN_CAP {
            return Err(ConstructionError::BudgetExhausted { stage, budget: SCAN_CAP });
        }
        set = gen.image_of_set(&set)?;
        count += 1;
    }
    Ok((count, set))
}

/// Computes generator exponents conjugating the support of `g` into the
/// family's interval, with the final containment checked exactly.
pub fn solve_big_f(
    family: &BigFFamily,
    g: &VElement,
) -> Result<SolveCertificate, ConstructionError> {
    let thickness = g.thickness();
    if thickness < family.epsilon() {
        return Err(ConstructionError::TooThin {
            found: thickness,
            need: family.epsilon(),
        });
    }
    let input = g.clone();
    let g = g.reduce();
    let e = family.level();
    let interval = *family.interval();
    let exponents = if g.is_identity() {
        [0i64; 8]
    } else {
        let anchor = *g
            .fixed_leaves()
            .iter()
            .min_by_key(|w| (w.len(), **w))
            .expect("thickness above the floor implies a fixed leaf");
        let support = g.support();
        let all_zero = anchor.iter_bits().all(|b| !b);
        let all_one = anchor.iter_bits().all(|b| b);
        if all_zero {
            // Support in [2^-|anchor|, 1], entirely above the push repeller.
            let top = CylinderSet::from_words([ones(e + 1)]);
            let (n, _) = push_until(&family.generators()[1], support, &top, "north push")?;
            let m = (1u128 << (e + 1)) - scaled(&interval.right_endpoint(), e + 1);
            [m as i64, n, 0, 0, 0, 0, 0, 0]
        } else if all_one {
            let bottom = CylinderSet::from_words([zeros(e + 1)]);
            let (n, _) = push_until(&family.generators()[3], support, &bottom, "south push")?;
            let m = scaled(&interval.left_endpoint(), e + 1);
            [0, 0, m as i64, n, 0, 0, 0, 0]
        } else {
            // Slide the anchor to straddle 1/2 strictly: one fine cell shy
            // of the endpoint hitting 1/2 leaves a quarter-cell margin.
            let half = DyadicRational::pow2_neg(1);
            let slide = if !anchor.bit(0) {
                scaled(&half.sub(&anchor.left_endpoint()), e + 2) as i64 - 1
            } else {
                1 - scaled(&anchor.right_endpoint().sub(&half), e + 2) as i64
            };
            let moved = family.slot_power(4, slide)?.image_of_set(&support)?;
            let pockets = CylinderSet::from_words([zeros(e + 1), ones(e + 1)]);
            let (m, parked) =
                push_until(&family.generators()[6], moved, &pockets, "split push")?;
            let _in_band = family.generators()[5].image_of_set(&parked)?;
            let p = scaled(&interval.left_endpoint(), e + 2) as i64 - 2;
            [0, 0, 0, 0, p, 1, m, slide]
        }
    };
    let conjugator = family.compose_exponents(&exponents)?;
    let landed = conjugator.image_of_set(&g.support())?;
    if !landed.is_subset_of(&CylinderSet::from_words([interval])) {
        return Err(ConstructionError::SelfCheckFailed {
            what: "conjugated support misses the interval".into(),
        });
    }
    Ok(SolveCertificate {
        interval,
        requested_epsilon: family.requested_epsilon(),
        exponents,
        conjugator,
        input,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::w;
    use crate::vcore::{random_reducible, random_reducible_fixing, VElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family() -> BigFFamily {
        big_f(&w("10"), &DyadicRational::new(1, 3)).unwrap()
    }

    fn lands_inside(cert: &SolveCertificate) {
        let moved = cert
            .conjugator
            .compose(&cert.input)
            .unwrap()
            .compose(&cert.conjugator.inverse())
            .unwrap();
        assert!(moved
            .support()
            .is_subset_of(&CylinderSet::from_words([cert.interval])));
    }

    #[test]
    fn identity_needs_no_exponents() {
        let cert = solve_big_f(&family(), &VElement::identity()).unwrap();
        assert_eq!(cert.exponents, [0; 8]);
        cert.validate().unwrap();
    }

    /// Cyclic rotation of the three complement cylinders of `fixed`; its
    /// only fixed leaf is `fixed` itself.
    fn rotation_fixing(fixed: &str) -> VElement {
        let kept = w(fixed);
        let moving: Vec<_> = CylinderSet::from_words([kept])
            .complement()
            .words()
            .to_vec();
        let mut pairs = vec![(kept, kept)];
        for (i, d) in moving.iter().enumerate() {
            pairs.push((*d, moving[(i + 1) % moving.len()]));
        }
        VElement::from_pairs(&pairs).unwrap()
    }

    #[test]
    fn bottom_anchor_uses_the_low_slots() {
        let cert = solve_big_f(&family(), &rotation_fixing("00")).unwrap();
        assert_eq!(&cert.exponents[2..], &[0; 6]);
        assert!(cert.exponents[0] > 0 && cert.exponents[1] > 0);
        lands_inside(&cert);
        cert.validate().unwrap();
    }

    #[test]
    fn top_anchor_uses_the_high_slots() {
        let cert = solve_big_f(&family(), &rotation_fixing("11")).unwrap();
        assert_eq!(&cert.exponents[..2], &[0; 2]);
        assert_eq!(&cert.exponents[4..], &[0; 4]);
        assert!(cert.exponents[2] > 0 && cert.exponents[3] > 0);
        lands_inside(&cert);
        cert.validate().unwrap();
    }

    #[test]
    fn planted_anchors_solve_wherever_the_thickest_leaf_lands() {
        let fam = family();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for fixed in [w("00"), w("11"), w("01"), w("10")] {
            for _ in 0..5 {
                let g = random_reducible_fixing(&mut rng, &fixed, 10);
                let cert = solve_big_f(&fam, &g).unwrap();
                lands_inside(&cert);
                cert.validate().unwrap();
            }
        }
    }

    #[test]
    fn interior_anchor_runs_the_full_chain() {
        let fam = family();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for fixed in [w("01"), w("10"), w("011"), w("100")] {
            let g = random_reducible_fixing(&mut rng, &fixed, 10);
            let cert = solve_big_f(&fam, &g).unwrap();
            lands_inside(&cert);
            cert.validate().unwrap();
        }
    }

    #[test]
    fn random_thick_elements_all_solve() {
        let fam = family();
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for _ in 0..50 {
            let g = random_reducible(&mut rng, 12);
            let cert = solve_big_f(&fam, &g).unwrap();
            lands_inside(&cert);
            cert.validate().unwrap();
        }
    }

    #[test]
    fn thin_inputs_are_rejected() {
        // Cyclic rotation of the five complement cylinders of 00000: the
        // only fixed leaf has depth 5, thinner than the family floor 1/16.
        let thin = VElement::from_pairs(&[
            (w("00000"), w("00000")),
            (w("00001"), w("0001")),
            (w("0001"), w("001")),
            (w("001"), w("01")),
            (w("01"), w("1")),
            (w("1"), w("00001")),
        ])
        .unwrap();
        assert!(matches!(
            solve_big_f(&family(), &thin),
            Err(ConstructionError::TooThin { .. })
        ));
    }

    #[test]
    fn certificate_round_trips_and_rejects_tampering() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let g = random_reducible_fixing(&mut rng, &w("01"), 8);
        let cert = solve_big_f(&family(), &g).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: SolveCertificate = serde_json::from_str(&text).unwrap();
        back.validate().unwrap();
        let mut broken = cert.clone();
        broken.exponents[4] += 1;
        assert!(matches!(
            broken.validate(),
            Err(ConstructionError::CertificateInvalid { .. })
        ));
    }
}
