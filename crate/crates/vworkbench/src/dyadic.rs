//! Binary words and standard dyadic intervals.
//!
//! A binary word w over {0,1} names the cylinder of all infinite sequences
//! extending w; under binary expansion that cylinder is the standard dyadic
//! interval [0.w, 0.w + 2^-|w|]. Complete prefix codes name the dyadic
//! decompositions of [0,1]. Words are capped at depth 64 and packed into a
//! u64, so all arithmetic here is exact and allocation-free.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Hard depth cap. Words never exceed this length; operations that would
/// produce deeper words fail with [`DyadicError::DepthCapExceeded`].
pub const MAX_DEPTH: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DyadicError {
    #[error("depth cap exceeded: word of length {0} (cap {MAX_DEPTH})")]
    DepthCapExceeded(u32),
    #[error("invalid character {0:?} in binary word")]
    InvalidCharacter(char),
    #[error("code is not prefix-free: {0} is a prefix of {1}")]
    NotPrefixFree(BinaryWord, BinaryWord),
    #[error("code does not cover [0,1]: total measure {num}/2^{exp}")]
    IncompleteCode { num: u128, exp: u32 },
    #[error("interval [{lo}, {hi}] is not a standard dyadic interval")]
    NotStandard { lo: DyadicRational, hi: DyadicRational },
    #[error("rational {0} is not representable at depth <= {MAX_DEPTH}")]
    NotRepresentable(String),
}

/// A binary word of length <= 64, bit i stored at position 63-i of `bits`.
///
/// Lexicographic order (prefixes first) coincides with the derived order on
/// (bits, len) because unused low bits are kept zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BinaryWord {
    bits: u64,
    len: u8,
}

impl BinaryWord {
    /// The empty word, naming the whole interval [0,1].
    pub const fn root() -> Self {
        BinaryWord { bits: 0, len: 0 }
    }

    /// Builds a word from its length and the bits packed little-endian in
    /// value order (bit 0 of `value` is the LAST letter).
    pub fn from_value(len: u32, value: u64) -> Result<Self, DyadicError> {
        if len > MAX_DEPTH {
            return Err(DyadicError::DepthCapExceeded(len));
        }
        debug_assert!(len == 64 || value < (1u64 << len));
        let bits = if len == 0 { 0 } else { value << (64 - len) };
        Ok(BinaryWord { bits, len: len as u8 })
    }

    /// The word as an integer: its bits read as a base-2 numeral.
    /// `[0.w, 0.w + 2^-|w|]` has left endpoint `value() / 2^len()`.
    pub fn value(&self) -> u64 {
        if self.len == 0 {
            0
        } else {
            self.bits >> (64 - self.len as u32)
        }
    }

    pub fn len(&self) -> u32 {
        self.len as u32
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at position i (0-indexed); false = '0', true = '1'.
    pub fn bit(&self, i: u32) -> bool {
        debug_assert!(i < self.len());
        self.bits & (1u64 << (63 - i)) != 0
    }

    pub fn push(&self, one: bool) -> Result<Self, DyadicError> {
        if self.len() >= MAX_DEPTH {
            return Err(DyadicError::DepthCapExceeded(self.len() + 1));
        }
        let mut w = *self;
        w.len += 1;
        if one {
            w.bits |= 1u64 << (64 - w.len as u32);
        }
        Ok(w)
    }

    /// Children in lexicographic order: (w0, w1).
    pub fn children(&self) -> Result<(Self, Self), DyadicError> {
        Ok((self.push(false)?, self.push(true)?))
    }

    pub fn parent(&self) -> Option<Self> {
        if self.len == 0 {
            return None;
        }
        let len = self.len - 1;
        let bits = if len == 0 {
            0
        } else {
            self.bits & (u64::MAX << (64 - len as u32))
        };
        Some(BinaryWord { bits, len })
    }

    /// Sibling under the common parent; None for the root.
    pub fn sibling(&self) -> Option<Self> {
        if self.len == 0 {
            return None;
        }
        let mut w = *self;
        w.bits ^= 1u64 << (64 - self.len as u32);
        Some(w)
    }

    /// Last letter; None for the root.
    pub fn last(&self) -> Option<bool> {
        if self.len == 0 {
            None
        } else {
            Some(self.bit(self.len() - 1))
        }
    }

    pub fn is_prefix_of(&self, other: &Self) -> bool {
        if self.len > other.len {
            return false;
        }
        if self.len == 0 {
            return true;
        }
        let mask = u64::MAX << (64 - self.len as u32);
        (self.bits ^ other.bits) & mask == 0
    }

    /// True if one word is a prefix of the other (the cylinders are nested).
    pub fn comparable(&self, other: &Self) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The suffix of `self` after a prefix; None if `prefix` is not one.
    pub fn strip_prefix(&self, prefix: &Self) -> Option<Self> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        let len = self.len - prefix.len;
        let bits = if len == 0 { 0 } else { self.bits << prefix.len as u32 };
        Some(BinaryWord { bits, len })
    }

    pub fn concat(&self, suffix: &Self) -> Result<Self, DyadicError> {
        let len = self.len as u32 + suffix.len as u32;
        if len > MAX_DEPTH {
            return Err(DyadicError::DepthCapExceeded(len));
        }
        let bits = self.bits | (suffix.bits >> self.len as u32);
        Ok(BinaryWord { bits, len: len as u8 })
    }

    /// `self` followed by `count` copies of the given letter.
    pub fn extend_run(&self, one: bool, count: u32) -> Result<Self, DyadicError> {
        let mut w = *self;
        for _ in 0..count {
            w = w.push(one)?;
        }
        Ok(w)
    }

    /// Word with every letter flipped; realizes the mirror x -> 1-x.
    pub fn mirror(&self) -> Self {
        if self.len == 0 {
            return *self;
        }
        let mask = u64::MAX << (64 - self.len as u32);
        BinaryWord { bits: !self.bits & mask, len: self.len }
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.bit(i))
    }

    /// Left endpoint of the named interval, `value / 2^len`.
    pub fn left_endpoint(&self) -> DyadicRational {
        DyadicRational::new(self.value() as u128, self.len())
    }

    /// Right endpoint, `(value + 1) / 2^len`.
    pub fn right_endpoint(&self) -> DyadicRational {
        DyadicRational::new(self.value() as u128 + 1, self.len())
    }

    /// Interval length `2^-len`.
    pub fn interval_length(&self) -> DyadicRational {
        DyadicRational::new(1, self.len())
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for BinaryWord {
    type Err = DyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut w = BinaryWord::root();
        for c in s.chars() {
            match c {
                '0' => w = w.push(false)?,
                '1' => w = w.push(true)?,
                other => return Err(DyadicError::InvalidCharacter(other)),
            }
        }
        Ok(w)
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Parses a word, panicking on malformed input. Test and table helper.
pub fn w(s: &str) -> BinaryWord {
    s.parse().unwrap_or_else(|e| panic!("bad word {:?}: {}", s, e))
}

/// A nonnegative dyadic rational `num / 2^exp`, normalized so that `num` is
/// odd or `exp` is zero. Values stay below 2^64 in all uses here (lengths,
/// endpoints, diameters), so `num` fits in u128 with headroom at depth 64.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    num: u128,
    exp: u32,
}

impl DyadicRational {
    pub fn new(num: u128, exp: u32) -> Self {
        let mut r = DyadicRational { num, exp };
        r.normalize();
        r
    }

    pub const fn zero() -> Self {
        DyadicRational { num: 0, exp: 0 }
    }

    pub const fn one() -> Self {
        DyadicRational { num: 1, exp: 0 }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        DyadicRational { num: 1, exp: k }
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True if the value is exactly 2^-k for some k >= 0 (including 1).
    pub fn is_pow2_neg(&self) -> bool {
        self.num == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let exp = self.exp.max(other.exp);
        let a = self.num << (exp - self.exp);
        let b = other.num << (exp - other.exp);
        DyadicRational::new(a + b, exp)
    }

    /// Saturating difference; exact when `self >= other`.
    pub fn sub(&self, other: &Self) -> Self {
        let exp = self.exp.max(other.exp);
        let a = self.num << (exp - self.exp);
        let b = other.num << (exp - other.exp);
        DyadicRational::new(a.saturating_sub(b), exp)
    }

    pub fn mul_pow2(&self, k: i32) -> Self {
        if k >= 0 {
            let k = k as u32;
            if self.exp >= k {
                DyadicRational::new(self.num, self.exp - k)
            } else {
                DyadicRational::new(self.num << (k - self.exp), 0)
            }
        } else {
            DyadicRational::new(self.num, self.exp + (-k) as u32)
        }
    }

    fn cmp_key(&self, other: &Self) -> (u128, u128) {
        let exp = self.exp.max(other.exp);
        (self.num << (exp - self.exp), other.num << (exp - other.exp))
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b) = self.cmp_key(other);
        a.cmp(&b)
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u128 << self.exp)
        }
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for DyadicRational {
    type Err = DyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DyadicError::NotRepresentable(s.to_string());
        match s.split_once('/') {
            None => {
                let num: u128 = s.parse().map_err(|_| bad())?;
                Ok(DyadicRational::new(num, 0))
            }
            Some((n, d)) => {
                let num: u128 = n.parse().map_err(|_| bad())?;
                let den: u128 = d.parse().map_err(|_| bad())?;
                if !den.is_power_of_two() {
                    return Err(bad());
                }
                let exp = den.trailing_zeros();
                if exp > MAX_DEPTH {
                    return Err(bad());
                }
                Ok(DyadicRational::new(num, exp))
            }
        }
    }
}

impl Serialize for DyadicRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyadicRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// The standard dyadic interval named by a word: [0.w, 0.w + 2^-|w|].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicInterval {
    word: BinaryWord,
}

impl DyadicInterval {
    pub fn from_word(word: BinaryWord) -> Self {
        DyadicInterval { word }
    }

    /// Recovers the word from endpoints; errors unless [lo,hi] is standard,
    /// i.e. hi - lo = 2^-m and lo = j * 2^-m.
    pub fn from_endpoints(lo: DyadicRational, hi: DyadicRational) -> Result<Self, DyadicError> {
        let err = || DyadicError::NotStandard { lo, hi };
        if hi <= lo {
            return Err(err());
        }
        let len = hi.sub(&lo);
        if !len.is_pow2_neg() || len.exponent() > MAX_DEPTH {
            return Err(err());
        }
        let m = len.exponent();
        // lo must be j/2^m exactly.
        if lo.exponent() > m {
            return Err(err());
        }
        let j = lo.numerator() << (m - lo.exponent());
        if m < 64 && j >= (1u128 << m) || m == 64 && j > u64::MAX as u128 {
            return Err(err());
        }
        let word = BinaryWord::from_value(m, j as u64)?;
        Ok(DyadicInterval { word })
    }

    pub fn word(&self) -> BinaryWord {
        self.word
    }

    pub fn left(&self) -> DyadicRational {
        self.word.left_endpoint()
    }

    pub fn right(&self) -> DyadicRational {
        self.word.right_endpoint()
    }

    pub fn length(&self) -> DyadicRational {
        self.word.interval_length()
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left(), self.right())
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.word, self)
    }
}

impl Serialize for DyadicInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.word.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DyadicInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(DyadicInterval { word: BinaryWord::deserialize(d)? })
    }
}

/// Measure of the cylinder of a length-n word, in units of 2^-64.
fn measure_units(len: u32) -> u128 {
    1u128 << (64 - len)
}

/// Checks that the words are pairwise incomparable (no cylinder contains
/// another). The slice need not be sorted.
pub fn check_prefix_free(words: &[BinaryWord]) -> Result<(), DyadicError> {
    let mut sorted: Vec<BinaryWord> = words.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] || pair[0].is_prefix_of(&pair[1]) {
            return Err(DyadicError::NotPrefixFree(pair[0], pair[1]));
        }
    }
    Ok(())
}

/// Checks that the words form a complete prefix code: pairwise incomparable
/// and of total measure 1 (their cylinders decompose [0,1]).
pub fn check_complete_code(words: &[BinaryWord]) -> Result<(), DyadicError> {
    check_prefix_free(words)?;
    let total: u128 = words.iter().map(|w| measure_units(w.len())).sum();
    if total != measure_units(0) {
        let mut r = DyadicRational { num: total, exp: 64 };
        r.normalize();
        return Err(DyadicError::IncompleteCode { num: r.num, exp: r.exp });
    }
    Ok(())
}

/// Coarsest common refinement of two complete prefix codes: the deeper word
/// of every comparable pair survives. Linear merge walk; descendants of a
/// word form a contiguous run in sorted order, so one pass suffices.
pub fn common_refinement(p: &[BinaryWord], q: &[BinaryWord]) -> Vec<BinaryWord> {
    let sorted = |ws: &[BinaryWord]| {
        let mut v = ws.to_vec();
        v.sort();
        v
    };
    let (ps, qs) = (sorted(p), sorted(q));
    let mut out = Vec::with_capacity(ps.len().max(qs.len()));
    let (mut i, mut j) = (0, 0);
    while i < ps.len() && j < qs.len() {
        let (a, b) = (ps[i], qs[j]);
        if b.is_prefix_of(&a) {
            out.push(a);
            i += 1;
            if a == b {
                j += 1;
            }
        } else if a.is_prefix_of(&b) {
            out.push(b);
            j += 1;
        } else if a < b {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Maximal cylinders disjoint from every word in `words` (which must be
/// prefix-free). Together with `words` the result decomposes [0,1].
pub fn complement_code(words: &[BinaryWord]) -> Vec<BinaryWord> {
    let mut out = Vec::new();
    let mut stack = vec![BinaryWord::root()];
    while let Some(p) = stack.pop() {
        if words.iter().any(|w| w.is_prefix_of(&p)) {
            continue;
        }
        if words.iter().any(|w| p.is_prefix_of(w)) {
            let (c0, c1) = p.children().expect("complement recursion exceeded depth cap");
            stack.push(c1);
            stack.push(c0);
        } else {
            out.push(p);
        }
    }
    out.sort();
    out
}

/// A finite union of cylinders in canonical form: sorted, pairwise
/// incomparable, with no two sibling cylinders both present (full sibling
/// pairs are merged into their parent).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CylinderSet {
    words: Vec<BinaryWord>,
}

impl CylinderSet {
    pub fn empty() -> Self {
        CylinderSet { words: Vec::new() }
    }

    pub fn full() -> Self {
        CylinderSet { words: vec![BinaryWord::root()] }
    }

    /// Builds the canonical form of the union of the given cylinders.
    pub fn from_words(words: impl IntoIterator<Item = BinaryWord>) -> Self {
        let mut ws: Vec<BinaryWord> = words.into_iter().collect();
        ws.sort();
        // Drop cylinders contained in an earlier one (prefix precedes in lex order).
        let mut kept: Vec<BinaryWord> = Vec::with_capacity(ws.len());
        for w in ws {
            match kept.last() {
                Some(prev) if prev.is_prefix_of(&w) => {}
                _ => kept.push(w),
            }
        }
        // Merge complete sibling pairs until stable; merging can cascade upward.
        let mut i = 0;
        while i + 1 < kept.len() {
            let a = kept[i];
            let b = kept[i + 1];
            if a.sibling() == Some(b) && a.last() == Some(false) {
                let p = a.parent().expect("sibling implies nonroot");
                kept.splice(i..i + 2, [p]);
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        CylinderSet { words: kept }
    }

    pub fn words(&self) -> &[BinaryWord] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.words.as_slice() == [BinaryWord::root()]
    }

    pub fn contains_word(&self, w: &BinaryWord) -> bool {
        self.words.iter().any(|c| c.is_prefix_of(w))
    }

    pub fn union(&self, other: &Self) -> Self {
        CylinderSet::from_words(self.words.iter().chain(other.words.iter()).copied())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.words.iter().all(|w| other.contains_word(w))
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.words
            .iter()
            .all(|a| other.words.iter().all(|b| !a.comparable(b)))
    }

    pub fn complement(&self) -> Self {
        CylinderSet { words: complement_code(&self.words) }
    }

    /// Total measure as an exact rational.
    pub fn measure(&self) -> DyadicRational {
        let units: u128 = self.words.iter().map(|w| measure_units(w.len())).sum();
        DyadicRational::new(units, 64)
    }

    pub fn min_left(&self) -> Option<DyadicRational> {
        self.words.first().map(|w| w.left_endpoint())
    }

    pub fn max_right(&self) -> Option<DyadicRational> {
        self.words.iter().map(|w| w.right_endpoint()).max()
    }

    /// Diameter sup - inf of the underlying point set; zero when empty.
    pub fn diameter(&self) -> DyadicRational {
        match (self.min_left(), self.max_right()) {
            (Some(lo), Some(hi)) => hi.sub(&lo),
            _ => DyadicRational::zero(),
        }
    }
}

impl fmt::Debug for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.words.iter()).finish()
    }
}

/// Prints the union of cylinders as `[00] u [01] u [1]`; the empty set
/// prints as `{}` and the whole space as `[.]`.
impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            if w.is_empty() {
                write!(f, "[.]")?;
            } else {
                write!(f, "[{w}]")?;
            }
        }
        Ok(())
    }
}

impl Serialize for CylinderSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.words.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CylinderSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let words = Vec::<BinaryWord>::deserialize(d)?;
        Ok(CylinderSet::from_words(words))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn word_order_is_lexicographic() {
        let mut ws = vec![w("1"), w("0"), w(""), w("01"), w("00"), w("10"), w("011")];
        ws.sort();
        let shown: Vec<String> = ws.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["", "0", "00", "01", "011", "1", "10"]);
    }

    #[test]
    fn word_interval_endpoints() {
        // "10" names [1/2, 3/4].
        let word = w("10");
        assert_eq!(word.left_endpoint(), DyadicRational::new(1, 1));
        assert_eq!(word.right_endpoint(), DyadicRational::new(3, 2));
        assert_eq!(word.interval_length(), DyadicRational::new(1, 2));
        // "0110" names [3/8, 7/16].
        let word = w("0110");
        assert_eq!(word.left_endpoint(), DyadicRational::new(3, 3));
        assert_eq!(word.right_endpoint(), DyadicRational::new(7, 4));
    }

    #[test]
    fn interval_round_trip_and_rejection() {
        let iv = DyadicInterval::from_endpoints(
            DyadicRational::new(3, 3),
            DyadicRational::new(7, 4),
        )
        .unwrap();
        assert_eq!(iv.word(), w("0110"));
        // [1/4, 3/4] has dyadic endpoints but is not standard.
        let err = DyadicInterval::from_endpoints(
            DyadicRational::new(1, 2),
            DyadicRational::new(3, 2),
        )
        .unwrap_err();
        assert!(matches!(err, DyadicError::NotStandard { .. }));
        // [3/8, 1/2] is misaligned for its length 1/8: 3/8 = 3 * 2^-3, fine;
        // but [1/8, 3/8] has length 1/4 with lo not a multiple of 1/4.
        let err = DyadicInterval::from_endpoints(
            DyadicRational::new(1, 3),
            DyadicRational::new(3, 3),
        )
        .unwrap_err();
        assert!(matches!(err, DyadicError::NotStandard { .. }));
    }

    #[test]
    fn depth_cap_is_explicit() {
        let deep = BinaryWord::from_value(64, u64::MAX).unwrap();
        assert_eq!(deep.len(), 64);
        assert_eq!(deep.push(true), Err(DyadicError::DepthCapExceeded(65)));
        assert_eq!(
            w("1").concat(&deep).unwrap_err(),
            DyadicError::DepthCapExceeded(65)
        );
    }

    #[test]
    fn complete_code_checks() {
        check_complete_code(&[w("0"), w("10"), w("11")]).unwrap();
        check_complete_code(&[w("")]).unwrap();
        let err = check_complete_code(&[w("0"), w("10")]).unwrap_err();
        assert!(matches!(err, DyadicError::IncompleteCode { .. }));
        let err = check_complete_code(&[w("0"), w("01"), w("1")]).unwrap_err();
        assert!(matches!(err, DyadicError::NotPrefixFree(..)));
    }

    /// Brute-force oracle: a word is a leaf of the common refinement iff both
    /// codes have an ancestor-or-equal word for it and its parent does not
    /// have that property in both codes simultaneously as a leaf candidate.
    fn refinement_oracle(p: &[BinaryWord], q: &[BinaryWord]) -> Vec<BinaryWord> {
        let max_len = p
            .iter()
            .chain(q.iter())
            .map(|x| x.len())
            .max()
            .unwrap_or(0);
        let covered = |set: &[BinaryWord], x: &BinaryWord| set.iter().any(|s| s.is_prefix_of(x));
        let mut out = Vec::new();
        let mut stack = vec![BinaryWord::root()];
        while let Some(x) = stack.pop() {
            if covered(p, &x) && covered(q, &x) {
                out.push(x);
            } else if x.len() < max_len {
                let (c0, c1) = x.children().unwrap();
                stack.push(c1);
                stack.push(c0);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn common_refinement_matches_oracle_on_known_pair() {
        let p = [w("0"), w("10"), w("11")];
        let q = [w("00"), w("01"), w("1")];
        let expect = [w("00"), w("01"), w("10"), w("11")];
        assert_eq!(common_refinement(&p, &q), expect);
        assert_eq!(refinement_oracle(&p, &q), expect);
    }

    #[test]
    fn complement_code_examples() {
        assert_eq!(complement_code(&[w("10")]), vec![w("0"), w("11")]);
        assert_eq!(complement_code(&[BinaryWord::root()]), Vec::<BinaryWord>::new());
        assert_eq!(
            complement_code(&[w("00"), w("11")]),
            vec![w("01"), w("10")]
        );
    }

    #[test]
    fn cylinder_set_canonical_form() {
        let s = CylinderSet::from_words([w("00"), w("01"), w("10")]);
        assert_eq!(s.words(), &[w("0"), w("10")]);
        let t = CylinderSet::from_words([w("0"), w("01"), w("011")]);
        assert_eq!(t.words(), &[w("0")]);
        assert!(CylinderSet::from_words([w("0"), w("1")]).is_full());
        assert_eq!(s.diameter(), DyadicRational::new(3, 2));
        assert!(s.contains_word(&w("0111")));
        assert!(!s.contains_word(&w("11")));
    }

    #[test]
    fn rational_parsing_and_display() {
        let r: DyadicRational = "3/8".parse().unwrap();
        assert_eq!(r, DyadicRational::new(3, 3));
        assert_eq!(r.to_string(), "3/8");
        assert_eq!(DyadicRational::new(4, 3).to_string(), "1/2");
        assert_eq!(DyadicRational::zero().to_string(), "0");
        assert!("3/6".parse::<DyadicRational>().is_err());
    }

    fn arb_word(max_len: u32) -> impl Strategy<Value = BinaryWord> {
        (0..=max_len).prop_flat_map(|len| {
            prop::collection::vec(any::<bool>(), len as usize).prop_map(|bits| {
                let mut w = BinaryWord::root();
                for b in bits {
                    w = w.push(b).unwrap();
                }
                w
            })
        })
    }

    /// Random complete code: start at the root and split random leaves.
    fn arb_complete_code(splits: usize) -> impl Strategy<Value = Vec<BinaryWord>> {
        prop::collection::vec(any::<prop::sample::Index>(), splits).prop_map(|picks| {
            let mut code = vec![BinaryWord::root()];
            for pick in picks {
                let i = pick.index(code.len());
                if code[i].len() < 20 {
                    let (c0, c1) = code[i].children().unwrap();
                    code.swap_remove(i);
                    code.push(c0);
                    code.push(c1);
                }
            }
            code.sort();
            code
        })
    }

    proptest! {
        #[test]
        fn word_roundtrip_display_parse(word in arb_word(24)) {
            let back: BinaryWord = word.to_string().parse().unwrap();
            prop_assert_eq!(word, back);
        }

        #[test]
        fn children_partition_parent(word in arb_word(20)) {
            let (c0, c1) = word.children().unwrap();
            prop_assert_eq!(c0.left_endpoint(), word.left_endpoint());
            prop_assert_eq!(c0.right_endpoint(), c1.left_endpoint());
            prop_assert_eq!(c1.right_endpoint(), word.right_endpoint());
            let half = c0.interval_length();
            prop_assert_eq!(half.add(&half), word.interval_length());
        }

        #[test]
        fn generated_codes_are_complete(code in arb_complete_code(12)) {
            check_complete_code(&code).unwrap();
        }

        #[test]
        fn refinement_refines_both_and_matches_oracle(
            p in arb_complete_code(10),
            q in arb_complete_code(10),
        ) {
            let r = common_refinement(&p, &q);
            check_complete_code(&r).unwrap();
            for x in &r {
                prop_assert!(p.iter().any(|a| a.is_prefix_of(x)));
                prop_assert!(q.iter().any(|b| b.is_prefix_of(x)));
            }
            prop_assert_eq!(r, refinement_oracle(&p, &q));
        }

        #[test]
        fn complement_decomposes_unit_interval(words in prop::collection::vec(arb_word(10), 0..6)) {
            let set = CylinderSet::from_words(words);
            let comp = set.complement();
            prop_assert!(set.is_disjoint_from(&comp));
            let mut all: Vec<BinaryWord> = set.words().to_vec();
            all.extend_from_slice(comp.words());
            check_complete_code(&all).unwrap();
        }
    }
}
