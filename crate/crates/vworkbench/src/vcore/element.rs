//! Tree-pair elements and their exact operations.

use crate::dyadic::{
    check_complete_code, common_refinement, BinaryWord, CylinderSet, DyadicError, DyadicRational,
};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VError {
    #[error("{side} code invalid: {source}")]
    InvalidCode { side: &'static str, source: DyadicError },
    #[error("domain has {domain} leaves but range has {range}")]
    MismatchedLeafCounts { domain: usize, range: usize },
    #[error("perm is not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error("word {0} does not reach a domain leaf; refine it first")]
    WordTooShallow(BinaryWord),
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
}

/// An element given by paired complete prefix codes. `domain` and `range`
/// are each sorted; leaf `domain[i]` maps onto leaf `range[perm[i]]`.
#[derive(Clone)]
pub struct VElement {
    domain: Vec<BinaryWord>,
    range: Vec<BinaryWord>,
    perm: Vec<usize>,
    reduced: bool,
}

impl VElement {
    pub fn identity() -> Self {
        VElement {
            domain: vec![BinaryWord::root()],
            range: vec![BinaryWord::root()],
            perm: vec![0],
            reduced: true,
        }
    }

    /// Builds an element from (domain leaf, range leaf) pairs. Both sides
    /// must form complete prefix codes.
    pub fn from_pairs(pairs: &[(BinaryWord, BinaryWord)]) -> Result<Self, VError> {
        let mut by_domain: Vec<(BinaryWord, BinaryWord)> = pairs.to_vec();
        by_domain.sort_by_key(|p| p.0);
        let domain: Vec<BinaryWord> = by_domain.iter().map(|p| p.0).collect();
        let mut range: Vec<BinaryWord> = by_domain.iter().map(|p| p.1).collect();
        range.sort();
        check_complete_code(&domain)
            .map_err(|source| VError::InvalidCode { side: "domain", source })?;
        check_complete_code(&range)
            .map_err(|source| VError::InvalidCode { side: "range", source })?;
        // Range words are distinct after the code check, so the positions of
        // the paired words define the permutation.
        let perm: Vec<usize> = by_domain
            .iter()
            .map(|p| range.binary_search(&p.1).expect("paired word is in range code"))
            .collect();
        Ok(VElement::assemble(domain, range, perm))
    }

    /// Validating constructor from the serialized field layout.
    pub fn from_parts(
        domain: Vec<BinaryWord>,
        range: Vec<BinaryWord>,
        perm: Vec<usize>,
    ) -> Result<Self, VError> {
        if domain.len() != range.len() {
            return Err(VError::MismatchedLeafCounts {
                domain: domain.len(),
                range: range.len(),
            });
        }
        if perm.len() != domain.len() {
            return Err(VError::BadPermutation(domain.len()));
        }
        let mut seen = vec![false; perm.len()];
        for &j in &perm {
            if j >= perm.len() || seen[j] {
                return Err(VError::BadPermutation(perm.len()));
            }
            seen[j] = true;
        }
        let mut sd = domain.clone();
        sd.sort();
        if sd != domain {
            return Err(VError::InvalidCode {
                side: "domain",
                source: DyadicError::NotPrefixFree(sd[0], sd[0]),
            });
        }
        let mut sr = range.clone();
        sr.sort();
        if sr != range {
            return Err(VError::InvalidCode {
                side: "range",
                source: DyadicError::NotPrefixFree(sr[0], sr[0]),
            });
        }
        check_complete_code(&domain)
            .map_err(|source| VError::InvalidCode { side: "domain", source })?;
        check_complete_code(&range)
            .map_err(|source| VError::InvalidCode { side: "range", source })?;
        Ok(VElement::assemble(domain, range, perm))
    }

    fn assemble(domain: Vec<BinaryWord>, range: Vec<BinaryWord>, perm: Vec<usize>) -> Self {
        let mut el = VElement { domain, range, perm, reduced: false };
        el.reduced = el.find_mergeable().is_none();
        el
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.len()
    }

    pub fn domain_leaves(&self) -> &[BinaryWord] {
        &self.domain
    }

    pub fn range_leaves(&self) -> &[BinaryWord] {
        &self.range
    }

    /// Pairs (domain leaf, its image leaf) in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (BinaryWord, BinaryWord)> + '_ {
        self.domain
            .iter()
            .zip(self.perm.iter())
            .map(move |(d, &j)| (*d, self.range[j]))
    }

    /// Index of the first mergeable adjacent pair, if any. Siblings are
    /// adjacent in a sorted complete code, so a linear scan suffices.
    fn find_mergeable(&self) -> Option<usize> {
        (0..self.domain.len().saturating_sub(1)).find(|&i| self.mergeable_at(i))
    }

    fn mergeable_at(&self, i: usize) -> bool {
        let d0 = self.domain[i];
        let d1 = self.domain[i + 1];
        if d0.last() != Some(false) || d0.sibling() != Some(d1) {
            return false;
        }
        let r0 = self.range[self.perm[i]];
        let r1 = self.range[self.perm[i + 1]];
        r0.last() == Some(false) && r0.sibling() == Some(r1)
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// The unique reduced form: merges sibling pairs carried to sibling
    /// pairs until none remain.
    pub fn reduce(&self) -> Self {
        if self.reduced {
            return self.clone();
        }
        let mut pairs: Vec<(BinaryWord, BinaryWord)> = self.pairs().collect();
        let mut i = 0;
        while i + 1 < pairs.len() {
            let (d0, r0) = pairs[i];
            let (d1, r1) = pairs[i + 1];
            let merge = d0.last() == Some(false)
                && d0.sibling() == Some(d1)
                && r0.last() == Some(false)
                && r0.sibling() == Some(r1);
            if merge {
                let p = (d0.parent().unwrap(), r0.parent().unwrap());
                pairs.splice(i..i + 2, [p]);
                // A merge can expose a new sibling pair just before it.
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        VElement::from_pairs(&pairs).expect("merging preserves code completeness")
    }

    /// Leaf of the sorted complete code containing the cylinder of `x`
    /// (requires |leaf| <= |x|): the lexicographic predecessor.
    fn leaf_index(code: &[BinaryWord], x: &BinaryWord) -> Option<usize> {
        let i = code.partition_point(|c| c <= x);
        if i == 0 {
            return None;
        }
        code[i - 1].is_prefix_of(x).then_some(i - 1)
    }

    /// Image of the cylinder of `x` as a cylinder word. Errors when `x` is
    /// too shallow to lie inside a single domain leaf.
    pub fn apply_word(&self, x: &BinaryWord) -> Result<BinaryWord, VError> {
        let i = Self::leaf_index(&self.domain, x).ok_or(VError::WordTooShallow(*x))?;
        let suffix = x.strip_prefix(&self.domain[i]).expect("leaf is a prefix");
        Ok(self.range[self.perm[i]].concat(&suffix)?)
    }

    /// Preimage of the cylinder of `y`; errors when `y` is too shallow to
    /// lie inside a single range leaf.
    pub fn invert_word(&self, y: &BinaryWord) -> Result<BinaryWord, VError> {
        let j = Self::leaf_index(&self.range, y).ok_or(VError::WordTooShallow(*y))?;
        let i = self.perm.iter().position(|&k| k == j).expect("perm is onto");
        let suffix = y.strip_prefix(&self.range[j]).expect("leaf is a prefix");
        Ok(self.domain[i].concat(&suffix)?)
    }

    /// Exact image of a cylinder set; shallow cylinders are refined into the
    /// domain leaves below them first.
    pub fn image_of_set(&self, s: &CylinderSet) -> Result<CylinderSet, VError> {
        let mut images = Vec::new();
        for word in s.words() {
            if Self::leaf_index(&self.domain, word).is_some() {
                images.push(self.apply_word(word)?);
            } else {
                for d in &self.domain {
                    if word.is_prefix_of(d) {
                        images.push(self.apply_word(d)?);
                    }
                }
            }
        }
        Ok(CylinderSet::from_words(images))
    }

    pub fn inverse(&self) -> Self {
        let pairs: Vec<(BinaryWord, BinaryWord)> =
            self.pairs().map(|(d, r)| (r, d)).collect();
        VElement::from_pairs(&pairs).expect("swapping sides preserves validity")
    }

    /// Function composition: `(f.compose(g))(x) = f(g(x))`.
    pub fn compose(&self, g: &VElement) -> Result<Self, VError> {
        let mid = common_refinement(&g.range, &self.domain);
        let mut pairs = Vec::with_capacity(mid.len());
        for m in &mid {
            pairs.push((g.invert_word(m)?, self.apply_word(m)?));
        }
        Ok(VElement::from_pairs(&pairs).expect("refinement pullback/pushforward stays complete"))
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, n: i64) -> Result<Self, VError> {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = VElement::identity();
        for _ in 0..n.unsigned_abs() {
            acc = base.compose(&acc)?.reduce();
        }
        Ok(acc)
    }

    /// Conjugate `h g h^-1` (apply h last).
    pub fn conjugate_by(&self, h: &VElement) -> Result<Self, VError> {
        h.compose(self)?.compose(&h.inverse())
    }

    pub fn is_identity(&self) -> bool {
        let r = self.reduce();
        r.domain.len() == 1 && r.domain[0] == r.range[0]
    }

    /// Reduced-form leaves mapped to themselves, as (word, 2^-len) pairs.
    /// The element is the identity on exactly these cylinders.
    pub fn fixed_leaves(&self) -> Vec<BinaryWord> {
        self.reduce().pairs().filter(|(d, r)| d == r).map(|(d, _)| d).collect()
    }

    /// Union of the pointwise-fixed cylinders.
    pub fn pointwise_fixed(&self) -> CylinderSet {
        CylinderSet::from_words(self.fixed_leaves())
    }

    /// Closed support: the complement of the pointwise-fixed cylinders.
    pub fn support(&self) -> CylinderSet {
        self.pointwise_fixed().complement()
    }

    /// True if some cylinder is fixed pointwise.
    pub fn is_reducible(&self) -> bool {
        !self.fixed_leaves().is_empty()
    }

    /// Largest length of a pointwise-fixed cylinder: max 2^-|w| over fixed
    /// reduced leaves, 1 for the identity, 0 when nothing is fixed.
    pub fn thickness(&self) -> DyadicRational {
        self.fixed_leaves()
            .iter()
            .map(|w| w.interval_length())
            .max()
            .unwrap_or_else(DyadicRational::zero)
    }

    /// Maximum leaf depth over both codes.
    pub fn depth(&self) -> u32 {
        self.domain
            .iter()
            .chain(self.range.iter())
            .map(|w| w.len())
            .max()
            .unwrap_or(0)
    }
}

impl PartialEq for VElement {
    fn eq(&self, other: &Self) -> bool {
        let a = self.reduce();
        let b = other.reduce();
        a.domain == b.domain && a.range == b.range && a.perm == b.perm
    }
}

impl Eq for VElement {}

impl fmt::Debug for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .pairs()
            .map(|(d, r)| format!("{} -> {}", d, r))
            .collect();
        write!(f, "{{{}}}", body.join(", "))
    }
}

impl fmt::Display for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct Encoded {
    domain: Vec<BinaryWord>,
    range: Vec<BinaryWord>,
    perm: Vec<usize>,
}

impl Serialize for VElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Encoded {
            domain: self.domain.clone(),
            range: self.range.clone(),
            perm: self.perm.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let e = Encoded::deserialize(d)?;
        VElement::from_parts(e.domain, e.range, e.perm).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::w;
    use crate::vcore::random_element;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(pairs: &[(&str, &str)]) -> VElement {
        let pairs: Vec<(BinaryWord, BinaryWord)> =
            pairs.iter().map(|(d, r)| (w(d), w(r))).collect();
        VElement::from_pairs(&pairs).unwrap()
    }

    /// The one-sided shrink map: 0 -> 00, 10 -> 01, 11 -> 1.
    fn shrink() -> VElement {
        el(&[("0", "00"), ("10", "01"), ("11", "1")])
    }

    /// Swap of the two halves.
    fn swap() -> VElement {
        el(&[("0", "1"), ("1", "0")])
    }

    #[test]
    fn identity_basics() {
        let id = VElement::identity();
        assert!(id.is_identity());
        assert!(id.is_reducible());
        assert_eq!(id.thickness(), DyadicRational::one());
        assert!(id.support().is_empty());
    }

    #[test]
    fn apply_and_invert() {
        let d = shrink();
        assert_eq!(d.apply_word(&w("0")).unwrap(), w("00"));
        assert_eq!(d.apply_word(&w("011")).unwrap(), w("0011"));
        assert_eq!(d.apply_word(&w("10")).unwrap(), w("01"));
        assert_eq!(d.invert_word(&w("01")).unwrap(), w("10"));
        assert!(matches!(
            d.apply_word(&w("1")),
            Err(VError::WordTooShallow(_))
        ));
        assert_eq!(d.invert_word(&w("1")).unwrap(), w("11"));
    }

    #[test]
    fn reduce_merges_cascading_siblings() {
        let g = el(&[("00", "10"), ("01", "11"), ("1", "0")]);
        let r = g.reduce();
        assert_eq!(r.leaf_count(), 2);
        assert_eq!(r, el(&[("0", "1"), ("1", "0")]));
        // Already-reduced elements come back unchanged.
        assert!(shrink().is_reduced());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let f = swap();
        let g = shrink();
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.apply_word(&w("0")).unwrap(), w("10"));
        assert_eq!(fg.apply_word(&w("10")).unwrap(), w("11"));
        let gf = g.compose(&f).unwrap();
        assert_eq!(gf.apply_word(&w("1")).unwrap(), w("00"));
    }

    #[test]
    fn inverse_cancels() {
        let d = shrink();
        assert!(d.compose(&d.inverse()).unwrap().is_identity());
        assert!(d.inverse().compose(&d).unwrap().is_identity());
    }

    #[test]
    fn powers_of_the_half_swap() {
        let s = swap();
        assert!(s.pow(2).unwrap().is_identity());
        assert_eq!(s.pow(-1).unwrap(), s);
        assert_eq!(s.pow(3).unwrap(), s);
    }

    #[test]
    fn shrink_map_pushes_the_zero_ray() {
        let d = shrink();
        let mut x = w("0");
        for _ in 0..5 {
            x = d.apply_word(&x).unwrap();
        }
        assert_eq!(x, w("000000"));
        assert!(!d.is_reducible());
        assert_eq!(d.thickness(), DyadicRational::zero());
        assert!(d.support().is_full());
    }

    #[test]
    fn fixed_leaves_and_thickness() {
        // Identity on [0,1/2], swaps the two quarters of [1/2,1].
        let g = el(&[("0", "0"), ("10", "11"), ("11", "10")]);
        assert_eq!(g.fixed_leaves(), vec![w("0")]);
        assert_eq!(g.thickness(), DyadicRational::new(1, 1));
        assert_eq!(g.support().words(), &[w("1")]);
        assert!(g.is_reducible());
    }

    #[test]
    fn image_of_set_refines_shallow_words() {
        let d = shrink();
        let s = CylinderSet::from_words([w("1")]);
        // 1 splits into leaves 10, 11; images 01 and 1.
        let img = d.image_of_set(&s).unwrap();
        assert_eq!(img.words(), &[w("01"), w("1")]);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let d = shrink();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(
            text,
            r#"{"domain":["0","10","11"],"range":["00","01","1"],"perm":[0,1,2]}"#
        );
        let back: VElement = serde_json::from_str(&text).unwrap();
        assert_eq!(d, back);
        // Mangled permutation is rejected.
        let bad = r#"{"domain":["0","10","11"],"range":["00","01","1"],"perm":[0,0,2]}"#;
        assert!(serde_json::from_str::<VElement>(bad).is_err());
        // Incomplete range code is rejected.
        let bad = r#"{"domain":["0","1"],"range":["00","01"],"perm":[0,1]}"#;
        assert!(serde_json::from_str::<VElement>(bad).is_err());
    }

    fn arb_element() -> impl Strategy<Value = VElement> {
        (0u64..1 << 48).prop_map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_element(&mut rng, 12)
        })
    }

    fn arb_deep_word(depth: u32) -> impl Strategy<Value = BinaryWord> {
        prop::collection::vec(any::<bool>(), depth as usize).prop_map(|bits| {
            let mut x = BinaryWord::root();
            for b in bits {
                x = x.push(b).unwrap();
            }
            x
        })
    }

    proptest! {
        #[test]
        fn reduction_preserves_the_action(g in arb_element(), x in arb_deep_word(24)) {
            prop_assert_eq!(g.reduce().apply_word(&x).unwrap(), g.apply_word(&x).unwrap());
        }

        #[test]
        fn inverse_is_two_sided(g in arb_element()) {
            prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
            prop_assert!(g.inverse().compose(&g).unwrap().is_identity());
        }

        #[test]
        fn composition_is_associative(
            f in arb_element(),
            g in arb_element(),
            h in arb_element(),
        ) {
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn apply_then_invert_round_trips(g in arb_element(), x in arb_deep_word(24)) {
            let y = g.apply_word(&x).unwrap();
            prop_assert_eq!(g.invert_word(&y).unwrap(), x);
        }

        #[test]
        fn conjugation_transports_support(g in arb_element(), h in arb_element()) {
            let c = g.conjugate_by(&h).unwrap();
            let expect = h.image_of_set(&g.support()).unwrap();
            prop_assert_eq!(c.support(), expect);
        }

        #[test]
        fn json_round_trips(g in arb_element()) {
            let text = serde_json::to_string(&g).unwrap();
            let back: VElement = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(g, back);
        }
    }
}
