//! Support-steering conjugations: pushing a support into a prescribed
//! cylinder, manufacturing commuting conjugates, and the simultaneous
//! handle that makes products with two arbitrary elements reducible.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::transporter::transporter;
use crate::constructions::witnesses::{zeros, WitnessSet};
use crate::constructions::{ConstructionError, SCAN_CAP};
use crate::dyadic::{w, BinaryWord, CylinderSet};
use crate::vcore::{random_reducible_fixing, VElement};

/// Leaf budget for the sampled partners in the handle check.
const SAMPLE_BUDGET: usize = 12;

/// How far below a fixed leaf the commuting construction searches for a
/// window cylinder clear of the partner's support.
const WINDOW_DESCENT: u32 = 3;

/// A verified conjugation pushing the support of `input` into the cylinder
/// of `target`.
#[derive(Clone, Serialize, Deserialize)]
pub struct SupportConjugation {
    pub input: VElement,
    pub target: BinaryWord,
    pub conjugator: VElement,
    pub conjugated: VElement,
}

impl SupportConjugation {
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let invalid =
            |reason: &str| ConstructionError::CertificateInvalid { reason: reason.into() };
        if !self.input.pointwise_fixed().contains_word(&self.target) {
            return Err(invalid("input does not fix the target cylinder"));
        }
        let recomputed = self
            .conjugator
            .compose(&self.input)?
            .compose(&self.conjugator.inverse())?;
        if recomputed != self.conjugated {
            return Err(invalid("stored conjugate disagrees with h g h^-1"));
        }
        let inside = CylinderSet::from_words([self.target]);
        if !self.conjugated.support().is_subset_of(&inside) {
            return Err(invalid("conjugated support leaks out of the target"));
        }
        Ok(())
    }
}

/// Conjugates `g` so that its support lands inside the cylinder of
/// `target`, which `g` must fix pointwise. The conjugator is a permutation
/// onto the upper half, a power of the sweep squeezing the complement into
/// 0^{n+1}, and a final permutation onto the target; it maps the target's
/// complement exactly onto the target, so the containment is immediate
/// from support covariance.
pub fn conjugate_support_into(
    g: &VElement,
    target: &BinaryWord,
) -> Result<SupportConjugation, ConstructionError> {
    if !g.pointwise_fixed().contains_word(target) {
        return Err(ConstructionError::TargetNotFixed(*target));
    }
    let conjugator = if target.is_empty() {
        // Fixing the whole interval means g is the identity; nothing moves.
        VElement::identity()
    } else {
        let up = transporter(&[*target], &[w("1")], &[])?;
        let squeeze = WitnessSet::standard().sweep.pow(target.len() as i64)?;
        let back = transporter(&[zeros(target.len() + 1)], &[*target], &[])?;
        back.compose(&squeeze)?.compose(&up)?.reduce()
    };
    let conjugated = conjugator
        .compose(g)?
        .compose(&conjugator.inverse())?
        .reduce();
    let certificate = SupportConjugation {
        input: g.clone(),
        target: *target,
        conjugator,
        conjugated,
    };
    certificate.validate()?;
    Ok(certificate)
}

/// A verified conjugate x = g a g^-1 commuting with both inputs, together
/// with the window cylinder that separates the supports.
#[derive(Clone, Serialize, Deserialize)]
pub struct CommutingCertificate {
    pub input_a: VElement,
    pub input_b: VElement,
    pub conjugator: VElement,
    pub window: BinaryWord,
    pub conjugated: VElement,
}

impl CommutingCertificate {
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let invalid =
            |reason: &str| ConstructionError::CertificateInvalid { reason: reason.into() };
        if !self.input_a.pointwise_fixed().contains_word(&self.window) {
            return Err(invalid("window is not fixed by the first input"));
        }
        let window_set = CylinderSet::from_words([self.window]);
        if !window_set.is_disjoint_from(&self.input_b.support()) {
            return Err(invalid("window meets the second input's support"));
        }
        let recomputed = self
            .conjugator
            .compose(&self.input_a)?
            .compose(&self.conjugator.inverse())?;
        if recomputed != self.conjugated {
            return Err(invalid("stored conjugate disagrees with g a g^-1"));
        }
        if !self.conjugated.support().is_subset_of(&window_set) {
            return Err(invalid("conjugate is not supported in the window"));
        }
        for other in [&self.input_a, &self.input_b] {
            let comm = self
                .conjugated
                .compose(other)?
                .compose(&self.conjugated.inverse())?
                .compose(&other.inverse())?;
            if !comm.is_identity() {
                return Err(invalid("a commutator fails to vanish"));
            }
        }
        Ok(())
    }
}

/// Finds g with x = g a g^-1 commuting with both `a` and `b`, by steering
/// the support of `a` into a cylinder that `a` fixes pointwise and that
/// misses the support of `b`. The window is searched among the fixed
/// leaves of `a` and their descendants a few levels down; inputs whose
/// fixed cylinders are all buried in the partner's support are rejected.
pub fn commuting_conjugate(
    a: &VElement,
    b: &VElement,
) -> Result<CommutingCertificate, ConstructionError> {
    if !a.is_reducible() || !b.is_reducible() {
        return Err(ConstructionError::NotReducible);
    }
    let support_b = b.support();
    let mut candidates = Vec::new();
    for leaf in a.fixed_leaves() {
        let mut layer = vec![leaf];
        for _ in 0..=WINDOW_DESCENT {
            candidates.extend_from_slice(&layer);
            layer = layer
                .iter()
                .filter_map(|p| p.children().ok())
                .flat_map(|(c0, c1)| [c0, c1])
                .collect();
        }
    }
    candidates.sort_by_key(|c| (c.len(), *c));
    let window = candidates
        .into_iter()
        .find(|c| CylinderSet::from_words([*c]).is_disjoint_from(&support_b))
        .ok_or(ConstructionError::NoAdmissibleTriple)?;
    let steering = conjugate_support_into(a, &window)?;
    let certificate = CommutingCertificate {
        input_a: a.clone(),
        input_b: b.clone(),
        conjugator: steering.conjugator,
        window,
        conjugated: steering.conjugated,
    };
    certificate.validate()?;
    Ok(certificate)
}

/// True when the cylinders of x and y are either identical or disjoint.
fn equal_or_disjoint(x: &BinaryWord, y: &BinaryWord) -> bool {
    x == y || !x.comparable(y)
}

/// Picks a one-letter extension of the leaf on which the affine image
/// diverges from the probe: extending by the complement of the first
/// letter the image word gains (or loses) makes probe and image cylinders
/// incomparable, and keeps them so under any further common extension.
/// When the leaf is fixed the probe and its image stay equal instead.
fn probe_inside(
    leaf: &BinaryWord,
    image: &BinaryWord,
    default_bit: bool,
) -> Result<BinaryWord, ConstructionError> {
    let bit = if let Some(gained) = image.strip_prefix(leaf) {
        if gained.is_empty() {
            default_bit
        } else {
            !gained.bit(0)
        }
    } else if let Some(lost) = leaf.strip_prefix(image) {
        !lost.bit(0)
    } else {
        default_bit
    };
    Ok(leaf.push(bit)?)
}

/// Produces disjoint cylinders A (in the lower half) and B (in the upper
/// half) on which g1 and g2 act affinely, with g1(A) and g2(B) disjoint
/// from each other and from A and B (allowing exact equality when an input
/// fixes its probe), and with at least one cylinder free of all four. The
/// probes start just inside the extreme leaves and both deepen, A by 0 and
/// B by 1, until every clash is resolved; that single move settles each of
/// the image comparability cases, the equal-image case among them.
pub fn disjoint_images(
    g1: &VElement,
    g2: &VElement,
) -> Result<(BinaryWord, BinaryWord), ConstructionError> {
    let g1 = g1.reduce();
    let g2 = g2.reduce();
    let low_leaf = g1.domain_leaves()[0];
    let high_leaf = *g2.domain_leaves().last().expect("codes are nonempty");
    let mut a = probe_inside(&low_leaf, &g1.apply_word(&low_leaf)?, false)?;
    let mut b = probe_inside(&high_leaf, &g2.apply_word(&high_leaf)?, true)?;
    for _ in 0..SCAN_CAP {
        let ia = g1.apply_word(&a)?;
        let ib = g2.apply_word(&b)?;
        let separated = equal_or_disjoint(&a, &ia)
            && equal_or_disjoint(&b, &ib)
            && !a.comparable(&b)
            && !a.comparable(&ib)
            && !b.comparable(&ia)
            && !ia.comparable(&ib);
        if separated && !CylinderSet::from_words([a, b, ia, ib]).is_full() {
            return Ok((a, b));
        }
        a = a.push(false)?;
        b = b.push(true)?;
    }
    Err(ConstructionError::BudgetExhausted {
        stage: "image separation",
        budget: SCAN_CAP,
    })
}

/// A random element supported inside the cylinder of `region`: a random
/// element of the copy of the group living on the lower half, carried into
/// the region by a transporter.
pub fn sample_supported_in<R: Rng>(
    rng: &mut R,
    region: &BinaryWord,
    budget: usize,
) -> Result<VElement, ConstructionError> {
    let seed = random_reducible_fixing(rng, &w("1"), budget);
    let carry = transporter(&[w("0")], &[*region], &[])?;
    Ok(carry.compose(&seed)?.compose(&carry.inverse())?.reduce())
}

/// The handle certificate: h carries the g1-image of A back onto A and the
/// g2-image of B back onto B while fixing the sibling cylinders I and J.
/// Any f supported in I then has f h fixing J, f h g1 fixing A and
/// f h g2 fixing B pointwise, so all three products are reducible.
#[derive(Clone, Serialize, Deserialize)]
pub struct HandleCertificate {
    pub g1: VElement,
    pub g2: VElement,
    pub h: VElement,
    #[serde(rename = "I")]
    pub i: BinaryWord,
    #[serde(rename = "A")]
    pub a: BinaryWord,
    #[serde(rename = "B")]
    pub b: BinaryWord,
    #[serde(rename = "J")]
    pub j: BinaryWord,
    pub g1_image: BinaryWord,
    pub g2_image: BinaryWord,
}

impl HandleCertificate {
    /// Structural re-validation: images recompute, the six cylinders are
    /// pairwise disjoint once exact duplicates are collapsed (an input
    /// fixing its probe repeats a word), h carries the images back onto
    /// the probes, and h fixes I and J pointwise.
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let invalid =
            |reason: &str| ConstructionError::CertificateInvalid { reason: reason.into() };
        let single = |word: &BinaryWord| CylinderSet::from_words([*word]);
        if self.g1.image_of_set(&single(&self.a))? != single(&self.g1_image) {
            return Err(invalid("stored g1 image is stale"));
        }
        if self.g2.image_of_set(&single(&self.b))? != single(&self.g2_image) {
            return Err(invalid("stored g2 image is stale"));
        }
        let mut words = vec![
            self.i,
            self.a,
            self.b,
            self.j,
            self.g1_image,
            self.g2_image,
        ];
        words.sort();
        words.dedup();
        for (k, x) in words.iter().enumerate() {
            for y in &words[k + 1..] {
                if x.comparable(y) {
                    return Err(invalid("two of the six cylinders overlap"));
                }
            }
        }
        if self.h.image_of_set(&single(&self.g1_image))? != single(&self.a) {
            return Err(invalid("h does not carry the g1 image onto A"));
        }
        if self.h.image_of_set(&single(&self.g2_image))? != single(&self.b) {
            return Err(invalid("h does not carry the g2 image onto B"));
        }
        let fixed = self.h.pointwise_fixed();
        if !fixed.contains_word(&self.i) || !fixed.contains_word(&self.j) {
            return Err(invalid("h moves I or J"));
        }
        Ok(())
    }

    /// Draws `samples` random partners f supported in I and checks the
    /// advertised reducibility of f h, f h g1 and f h g2 exactly, each
    /// with its promised fixed cylinder.
    pub fn check_sampled<R: Rng>(
        &self,
        rng: &mut R,
        samples: usize,
    ) -> Result<(), ConstructionError> {
        let failed = |what: &str| ConstructionError::SelfCheckFailed { what: what.into() };
        for _ in 0..samples {
            let f = sample_supported_in(rng, &self.i, SAMPLE_BUDGET)?;
            let fh = f.compose(&self.h)?.reduce();
            if !fh.pointwise_fixed().contains_word(&self.j) || !fh.is_reducible() {
                return Err(failed("a sampled f h does not fix J"));
            }
            let fhg1 = fh.compose(&self.g1)?.reduce();
            if !fhg1.pointwise_fixed().contains_word(&self.a) || !fhg1.is_reducible() {
                return Err(failed("a sampled f h g1 does not fix A"));
            }
            let fhg2 = fh.compose(&self.g2)?.reduce();
            if !fhg2.pointwise_fixed().contains_word(&self.b) || !fhg2.is_reducible() {
                return Err(failed("a sampled f h g2 does not fix B"));
            }
        }
        Ok(())
    }
}

/// Builds the handle for an arbitrary pair: separated probes from
/// `disjoint_images`, sibling pockets I and J inside a free cylinder, and
/// the transporter h sending each image back onto its probe while fixing
/// both pockets.
pub fn simultaneous_handle(
    g1: &VElement,
    g2: &VElement,
) -> Result<HandleCertificate, ConstructionError> {
    let (a, b) = disjoint_images(g1, g2)?;
    let ia = g1.apply_word(&a)?;
    let ib = g2.apply_word(&b)?;
    let free = CylinderSet::from_words([a, b, ia, ib]).complement();
    let shallowest = free
        .words()
        .iter()
        .min_by_key(|c| (c.len(), **c))
        .copied()
        .expect("separation loop leaves a free cylinder");
    // Step into a pure run so the pocket cylinder stays clear of both
    // endpoints of [0,1]; downstream consumers can then build the
    // generator family directly on its halves.
    let pocket = if shallowest.iter_bits().all(|bit| !bit) {
        shallowest.push(true)?
    } else if shallowest.iter_bits().all(|bit| bit) {
        shallowest.push(false)?
    } else {
        shallowest
    };
    let i = pocket.push(false)?;
    let j = pocket.push(true)?;
    let h = transporter(&[ia, ib], &[a, b], &[pocket])?;
    let certificate = HandleCertificate {
        g1: g1.clone(),
        g2: g2.clone(),
        h,
        i,
        a,
        b,
        j,
        g1_image: ia,
        g2_image: ib,
    };
    certificate.validate()?;
    Ok(certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vcore::{random_element, random_reducible};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn support_lands_in_the_target() {
        let g = VElement::from_pairs(&[(w("00"), w("01")), (w("01"), w("00")), (w("1"), w("1"))])
            .unwrap();
        let cert = conjugate_support_into(&g, &w("11")).unwrap();
        cert.validate().unwrap();
        assert!(cert
            .conjugated
            .support()
            .is_subset_of(&CylinderSet::from_words([w("11")])));
    }

    #[test]
    fn identity_input_yields_identity_conjugator() {
        let cert = conjugate_support_into(&VElement::identity(), &BinaryWord::root()).unwrap();
        assert!(cert.conjugator.is_identity());
        assert!(cert.conjugated.is_identity());
    }

    #[test]
    fn rejects_unfixed_targets() {
        let swap = VElement::from_pairs(&[(w("0"), w("1")), (w("1"), w("0"))]).unwrap();
        assert!(matches!(
            conjugate_support_into(&swap, &w("0")),
            Err(ConstructionError::TargetNotFixed(_))
        ));
    }

    #[test]
    fn random_supports_transport_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let g = random_reducible(&mut rng, 12);
            let target = g.fixed_leaves()[0];
            let cert = conjugate_support_into(&g, &target).unwrap();
            cert.validate().unwrap();
        }
    }

    #[test]
    fn commuting_conjugate_on_separated_pair() {
        // a is supported in [1/2, 3/4] and fixes two disjoint cylinders;
        // b is supported in the lower half, clear of a's window at 11.
        let a = VElement::from_pairs(&[
            (w("0"), w("0")),
            (w("100"), w("101")),
            (w("101"), w("100")),
            (w("11"), w("11")),
        ])
        .unwrap();
        let b = VElement::from_pairs(&[(w("00"), w("01")), (w("01"), w("00")), (w("1"), w("1"))])
            .unwrap();
        let cert = commuting_conjugate(&a, &b).unwrap();
        cert.validate().unwrap();
        assert_eq!(cert.window, w("11"));
    }

    #[test]
    fn commuting_conjugate_accepts_identity() {
        let b = VElement::from_pairs(&[(w("00"), w("01")), (w("01"), w("00")), (w("1"), w("1"))])
            .unwrap();
        let cert = commuting_conjugate(&VElement::identity(), &b).unwrap();
        cert.validate().unwrap();
    }

    #[test]
    fn commuting_conjugate_rejects_buried_windows() {
        // a only fixes the lower half while b is supported on exactly that
        // half, so every window near a fixed leaf of a meets supp(b).
        let a = VElement::from_pairs(&[(w("0"), w("0")), (w("10"), w("11")), (w("11"), w("10"))])
            .unwrap();
        let b = VElement::from_pairs(&[(w("00"), w("01")), (w("01"), w("00")), (w("1"), w("1"))])
            .unwrap();
        assert!(matches!(
            commuting_conjugate(&a, &b),
            Err(ConstructionError::NoAdmissibleTriple)
        ));
    }

    #[test]
    fn commuting_conjugate_on_planted_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for round in 0..100u64 {
            let shared = BinaryWord::from_value(3, round % 8).unwrap();
            let a = random_reducible_fixing(&mut rng, &shared, 10);
            let b = random_reducible_fixing(&mut rng, &shared, 10);
            let cert = commuting_conjugate(&a, &b).unwrap();
            cert.validate().unwrap();
        }
    }

    #[test]
    fn disjoint_images_identity_pair_matches_first_depth() {
        let id = VElement::identity();
        let (a, b) = disjoint_images(&id, &id).unwrap();
        assert_eq!((a, b), (w("00"), w("11")));
    }

    #[test]
    fn disjoint_images_resolves_fixed_overlapping_probes() {
        // The sweep maps its extreme leaves onto comparable words; the probe
        // choice steps off the shared ray on both sides.
        let d = WitnessSet::standard().sweep;
        let (a, b) = disjoint_images(&d, &d).unwrap();
        assert_eq!((a, b), (w("01"), w("110")));
        let ia = d.apply_word(&a).unwrap();
        let ib = d.apply_word(&b).unwrap();
        assert!(!a.comparable(&ia) && !b.comparable(&ib));
        assert!(!CylinderSet::from_words([a, b, ia, ib]).is_full());
    }

    #[test]
    fn disjoint_images_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        for _ in 0..100 {
            let g1 = random_element(&mut rng, 12);
            let g2 = random_element(&mut rng, 12);
            let (a, b) = disjoint_images(&g1, &g2).unwrap();
            let ia = g1.apply_word(&a).unwrap();
            let ib = g2.apply_word(&b).unwrap();
            assert!(!a.comparable(&b));
            assert!(!ia.comparable(&ib));
            assert!(equal_or_disjoint(&a, &ia) && equal_or_disjoint(&b, &ib));
            assert!(!CylinderSet::from_words([a, b, ia, ib]).is_full());
        }
    }

    #[test]
    fn handle_for_the_identity_pair_is_trivial() {
        let id = VElement::identity();
        let cert = simultaneous_handle(&id, &id).unwrap();
        cert.validate().unwrap();
        assert!(cert.h.is_identity());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        cert.check_sampled(&mut rng, 5).unwrap();
    }

    #[test]
    fn handle_for_witness_pair_passes_sampling() {
        let ws = WitnessSet::standard();
        let cert = simultaneous_handle(&ws.funnel, &ws.shift).unwrap();
        cert.validate().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        cert.check_sampled(&mut rng, 10).unwrap();
    }

    #[test]
    fn handles_for_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17_29);
        for _ in 0..25 {
            let g1 = random_element(&mut rng, 10);
            let g2 = random_element(&mut rng, 10);
            let cert = simultaneous_handle(&g1, &g2).unwrap();
            cert.validate().unwrap();
            cert.check_sampled(&mut rng, 3).unwrap();
        }
    }

    #[test]
    fn handle_validate_rejects_tampering() {
        // The sweep pair needs a genuinely moving h, so erasing it breaks
        // the image-restoring checks.
        let d = WitnessSet::standard().sweep;
        let mut cert = simultaneous_handle(&d, &d).unwrap();
        assert!(!cert.h.is_identity());
        cert.h = VElement::identity();
        assert!(matches!(
            cert.validate(),
            Err(ConstructionError::CertificateInvalid { .. })
        ));
    }

    #[test]
    fn sampled_elements_stay_in_their_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for region in [w("01"), w("110"), w("0010")] {
            for _ in 0..20 {
                let f = sample_supported_in(&mut rng, &region, 10).unwrap();
                assert!(f
                    .support()
                    .is_subset_of(&CylinderSet::from_words([region])));
                assert!(f.is_reducible());
            }
        }
    }
}
