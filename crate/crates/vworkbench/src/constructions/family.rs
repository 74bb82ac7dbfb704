//! The eight-generator family used to push an arbitrary thick support into
//! a prescribed cylinder, together with its bounded self-checks.
//!
//! A family is parametrized by a target cylinder word I (strictly inside
//! (0,1)) and a granularity eps = 2^-e, with e at least |I|+2 so four whole
//! eps-cells fit on each side of I. The generator slots, composed left to
//! right with the rightmost factor applied first, are:
//!
//! * 0: downward shift by eps/2 at grid depth e+1, fixing [0, eps/2];
//! * 1: north-south push fixing [0, eps/2], attracting toward 1;
//! * 2: upward shift by eps/2, mirror of slot 0, fixing [1-eps/2, 1];
//! * 3: mirror of slot 1, attracting toward 0;
//! * 4: fine shift by eps/4 at grid depth e+2, fixing both end cells;
//! * 5: pocket insertion carrying [0,eps/2] and [1-eps/2,1] into the two
//!   halves of [eps/2, eps] while fixing the bands [1-2^-j, 1-2^-j-...];
//! * 6: split push fixing [0,eps/4] and [1-eps/4,1], repelling from 1/2;
//! * 7: the fine shift of slot 4 again.
//!
//! Exponent vectors are always length 8 and indexed by these slots. Shift
//! slots take huge exponents, so their powers go through cycle arithmetic
//! on the cell permutation instead of repeated composition.

use crate::constructions::transporter::transporter;
use crate::constructions::witnesses::{
    iterate_until, mirror_element, ones, test_words, zeros, CellPerm, N_MAX, TEST_DEPTH, TOL_EXP,
};
use crate::constructions::ConstructionError;
use crate::dyadic::{BinaryWord, CylinderSet, DyadicError, DyadicRational, MAX_DEPTH};
use crate::vcore::VElement;

/// Deepest leaf any generator uses: e+3 (inside the split push).
const GENERATOR_HEADROOM: u32 = 3;

#[derive(Clone)]
pub struct BigFFamily {
    interval: BinaryWord,
    requested_epsilon: DyadicRational,
    epsilon: DyadicRational,
    level: u32,
    generators: [VElement; 8],
    step_low: CellPerm,
    step_high: CellPerm,
    step_fine: CellPerm,
}

/// Builds the family for `interval` at granularity `epsilon`. The interval
/// word must contain both letters (so its cylinder avoids 0 and 1), and
/// `epsilon` must be a power of 1/2. When `epsilon` is too coarse for the
/// interval the family is built at the finest of 2^-(|I|+2) and `epsilon`;
/// the effective value is recorded in the result.
pub fn big_f(
    interval: &BinaryWord,
    epsilon: &DyadicRational,
) -> Result<BigFFamily, ConstructionError> {
    let has0 = interval.iter_bits().any(|b| !b);
    let has1 = interval.iter_bits().any(|b| b);
    if !(has0 && has1) {
        return Err(ConstructionError::IntervalTouchesBoundary(*interval));
    }
    if !epsilon.is_pow2_neg() {
        return Err(ConstructionError::EpsilonNotPowerOfHalf(*epsilon));
    }
    let level = epsilon.exponent().max(interval.len() + 2);
    if level + GENERATOR_HEADROOM > MAX_DEPTH {
        return Err(DyadicError::DepthCapExceeded(level + GENERATOR_HEADROOM).into());
    }
    let step_low = shift_low(level);
    let step_high = shift_high(level);
    let step_fine = shift_fine(level);
    let push_low = north_south_low(level);
    let push_high = mirror_element(&push_low);
    let pocket = pocket_insert(level)?;
    let split = split_push(level);
    let generators = [
        step_low.to_element(),
        push_low,
        step_high.to_element(),
        push_high,
        step_fine.to_element(),
        pocket,
        split,
        step_fine.to_element(),
    ];
    Ok(BigFFamily {
        interval: *interval,
        requested_epsilon: *epsilon,
        epsilon: DyadicRational::pow2_neg(level),
        level,
        generators,
        step_low,
        step_high,
        step_fine,
    })
}

/// Concatenation of constant runs, e.g. `[(false, e), (true, 1)]` is 0^e 1.
fn runs(pattern: &[(bool, u32)]) -> BinaryWord {
    let mut word = BinaryWord::root();
    for &(bit, count) in pattern {
        word = word.extend_run(bit, count).expect("family words fit the depth cap");
    }
    word
}

/// Slot 0: cell c of the depth-(e+1) grid goes to c-1, cell 1 wraps to the
/// top, cell 0 stays. Translation by -eps/2 on [eps, 1].
fn shift_low(e: u32) -> CellPerm {
    let size = 1usize << (e + 1);
    let mut sigma: Vec<usize> = (0..size).map(|i| i.saturating_sub(1)).collect();
    sigma[0] = 0;
    sigma[1] = size - 1;
    CellPerm::new(e + 1, sigma)
}

/// Slot 2: mirror of `shift_low`. Translation by +eps/2 on [0, 1-eps].
fn shift_high(e: u32) -> CellPerm {
    let size = 1usize << (e + 1);
    let mut sigma: Vec<usize> = (0..size).map(|i| i + 1).collect();
    sigma[size - 1] = size - 1;
    sigma[size - 2] = 0;
    CellPerm::new(e + 1, sigma)
}

/// Slots 4 and 7: on the depth-(e+2) grid both end cells stay, every other
/// cell moves up by one, and the second-to-top cell wraps to cell 1.
/// Translation by +eps/4 on [eps/4, 1-eps/2].
fn shift_fine(e: u32) -> CellPerm {
    let size = 1usize << (e + 2);
    let mut sigma: Vec<usize> = (0..size).map(|i| i + 1).collect();
    sigma[0] = 0;
    sigma[size - 1] = size - 1;
    sigma[size - 2] = 1;
    CellPerm::new(e + 2, sigma)
}

/// Slot 1: identity on [0, eps/2]; everything in (eps/2, 1) climbs the two
/// ladders 0^k 1 -> 0^{k-1} 1 and 1^j 0 -> 1^{j+1} 0 toward the attracting
/// endpoint 1, with the top cylinder [1-eps/2, 1] halving toward 1.
fn north_south_low(e: u32) -> VElement {
    let mut pairs = vec![
        (zeros(e + 1), zeros(e + 1)),
        (runs(&[(false, e), (true, 1), (false, 1)]), runs(&[(false, e), (true, 1)])),
        (runs(&[(false, e), (true, 2)]), runs(&[(false, e - 1), (true, 1)])),
        (runs(&[(false, 1), (true, 1)]), runs(&[(true, 1), (false, 1)])),
        (ones(e + 1), ones(e + 2)),
    ];
    for k in 2..e {
        pairs.push((runs(&[(false, k), (true, 1)]), runs(&[(false, k - 1), (true, 1)])));
    }
    for j in 1..=e {
        pairs.push((runs(&[(true, j), (false, 1)]), runs(&[(true, j + 1), (false, 1)])));
    }
    VElement::from_pairs(&pairs).expect("north-south leaf table is complete")
}

/// Slot 5: carries [0, eps/2] and [1-eps/2, 1] onto the lower and upper
/// halves of the pocket [eps/2, eps] while fixing every band 1^j 0 with
/// 1 <= j <= e, i.e. all of [1/2, 1-eps/2].
fn pocket_insert(e: u32) -> Result<VElement, ConstructionError> {
    let sources = [zeros(e + 1), ones(e + 1)];
    let targets = [
        runs(&[(false, e), (true, 1), (false, 1)]),
        runs(&[(false, e), (true, 2)]),
    ];
    let fixed: Vec<BinaryWord> = (1..=e).map(|j| runs(&[(true, j), (false, 1)])).collect();
    transporter(&sources, &targets, &fixed)
}

/// Slot 6: fixes [0, eps/4] and [1-eps/4, 1] and repels from 1/2, pushing
/// the upper half up the ladder 1^j 0 -> 1^{j+1} 0 (entered from 100 -> 10,
/// 101 -> 110) and the lower half down its mirror image.
fn split_push(e: u32) -> VElement {
    let mut upper = vec![
        (runs(&[(true, 1), (false, 2)]), runs(&[(true, 1), (false, 1)])),
        (runs(&[(true, 1), (false, 1), (true, 1)]), runs(&[(true, 2), (false, 1)])),
        (runs(&[(true, e), (false, 1)]), runs(&[(true, e + 1), (false, 2)])),
        (runs(&[(true, e + 1), (false, 1)]), runs(&[(true, e + 1), (false, 1), (true, 1)])),
    ];
    for j in 2..e {
        upper.push((runs(&[(true, j), (false, 1)]), runs(&[(true, j + 1), (false, 1)])));
    }
    let mut pairs = vec![(zeros(e + 2), zeros(e + 2)), (ones(e + 2), ones(e + 2))];
    for (d, r) in upper {
        pairs.push((d.mirror(), r.mirror()));
        pairs.push((d, r));
    }
    VElement::from_pairs(&pairs).expect("split-push leaf table is complete")
}

impl BigFFamily {
    pub fn interval(&self) -> &BinaryWord {
        &self.interval
    }

    /// The granularity the caller asked for.
    pub fn requested_epsilon(&self) -> DyadicRational {
        self.requested_epsilon
    }

    /// The granularity actually used: min(requested, 2^-(|I|+2)).
    pub fn epsilon(&self) -> DyadicRational {
        self.epsilon
    }

    /// e with epsilon = 2^-e.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[VElement; 8] {
        &self.generators
    }

    /// The `slot`-th generator raised to the `n`-th power. Shift slots go
    /// through cycle arithmetic on the cell permutation, so exponents of
    /// order 2^e cost no more than small ones.
    pub fn slot_power(&self, slot: usize, n: i64) -> Result<VElement, ConstructionError> {
        match slot {
            0 => Ok(self.step_low.pow(n).to_element()),
            2 => Ok(self.step_high.pow(n).to_element()),
            4 | 7 => Ok(self.step_fine.pow(n).to_element()),
            1 | 3 | 5 | 6 => Ok(self.generators[slot].pow(n)?),
            _ => panic!("exponent slot {} out of range", slot),
        }
    }

    /// The product of all eight slot powers, rightmost factor applied
    /// first: slot_power(0, n[0]) dot ... dot slot_power(7, n[7]).
    pub fn compose_exponents(&self, exponents: &[i64; 8]) -> Result<VElement, ConstructionError> {
        let mut acc = VElement::identity();
        for (slot, &n) in exponents.iter().enumerate() {
            if n == 0 {
                continue;
            }
            acc = acc.compose(&self.slot_power(slot, n)?)?.reduce();
        }
        Ok(acc)
    }

    /// Iteration budget for the dynamic self-checks: ladder traversals take
    /// about one step per level, so the budget scales with e.
    fn check_budget(&self) -> u32 {
        N_MAX.max(4 * self.level + 16)
    }

    /// Re-derives every stated property of the family from scratch:
    /// structural inequalities, exact cell arithmetic of the three shifts,
    /// the mirror pairings, the pocket insertion's images, and the
    /// north-south dynamics of the push and split slots under bounded
    /// iteration.
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let fail =
            |what: String| Err(ConstructionError::SelfCheckFailed { what });
        let e = self.level;
        if self.epsilon != DyadicRational::pow2_neg(e) {
            return fail("stored epsilon disagrees with the level".into());
        }
        if e < self.interval.len() + 2 {
            return fail("level leaves fewer than four cells beside the interval".into());
        }
        if self.epsilon > self.requested_epsilon {
            return fail("effective epsilon exceeds the requested bound".into());
        }
        let four_eps = self.epsilon.mul_pow2(2);
        if self.interval.left_endpoint() < four_eps
            || self.interval.right_endpoint() > DyadicRational::one().sub(&four_eps)
        {
            return fail("interval does not leave a four-cell margin at both ends".into());
        }
        for (slot, g) in self.generators.iter().enumerate() {
            if !g.is_reducible() {
                return fail(format!("generator {} fixes no cylinder", slot));
            }
        }
        if self.generators[3] != mirror_element(&self.generators[1]) {
            return fail("slot 3 is not the mirror of slot 1".into());
        }
        if self.generators[2] != mirror_element(&self.generators[0]) {
            return fail("slot 2 is not the mirror of slot 0".into());
        }
        if self.generators[7] != self.generators[4] {
            return fail("slots 4 and 7 differ".into());
        }
        for (slot, perm) in [
            (0, &self.step_low),
            (2, &self.step_high),
            (4, &self.step_fine),
        ] {
            if self.generators[slot] != perm.to_element() {
                return fail(format!("slot {} disagrees with its cell table", slot));
            }
        }

        // Exact cell arithmetic of the three shifts.
        let coarse = 1u64 << (e + 1);
        for c in 0..coarse {
            let cell = BinaryWord::from_value(e + 1, c)?;
            let down = match c {
                0 => 0,
                1 => coarse - 1,
                _ => c - 1,
            };
            if self.generators[0].apply_word(&cell)? != BinaryWord::from_value(e + 1, down)? {
                return fail(format!("coarse down-shift moves cell {} wrongly", c));
            }
            let up = match c {
                _ if c == coarse - 1 => c,
                _ if c == coarse - 2 => 0,
                _ => c + 1,
            };
            if self.generators[2].apply_word(&cell)? != BinaryWord::from_value(e + 1, up)? {
                return fail(format!("coarse up-shift moves cell {} wrongly", c));
            }
        }
        let fine = 1u64 << (e + 2);
        for c in 0..fine {
            let cell = BinaryWord::from_value(e + 2, c)?;
            let to = match c {
                0 => 0,
                _ if c == fine - 1 => c,
                _ if c == fine - 2 => 1,
                _ => c + 1,
            };
            if self.generators[4].apply_word(&cell)? != BinaryWord::from_value(e + 2, to)? {
                return fail(format!("fine shift moves cell {} wrongly", c));
            }
        }

        // Pocket insertion: exact corner images, fixed middle bands.
        let pocket = &self.generators[5];
        if pocket.apply_word(&zeros(e + 1))? != runs(&[(false, e), (true, 1), (false, 1)]) {
            return fail("pocket insertion misplaces the low corner".into());
        }
        if pocket.apply_word(&ones(e + 1))? != runs(&[(false, e), (true, 2)]) {
            return fail("pocket insertion misplaces the high corner".into());
        }
        let pocket_fixed = pocket.pointwise_fixed();
        for j in 1..=e {
            if !pocket_fixed.contains_word(&runs(&[(true, j), (false, 1)])) {
                return fail(format!("pocket insertion moves the band 1^{} 0", j));
            }
        }

        // North-south push: fixes the low pocket, contracts everything with
        // left endpoint beyond the repeller eps/2 into [1 - 2^-10, 1].
        let budget = self.check_budget();
        let push = &self.generators[1];
        if !push.pointwise_fixed().contains_word(&zeros(e + 1)) {
            return fail("north-south push moves its fixed pocket".into());
        }
        let eps_half = DyadicRational::pow2_neg(e + 1);
        let top = CylinderSet::from_words([ones(TOL_EXP)]);
        for word in test_words(TEST_DEPTH, |w| w.left_endpoint() > eps_half) {
            iterate_until(
                push,
                CylinderSet::from_words([word]),
                "north-south contraction",
                budget,
                |s| s.is_subset_of(&top),
            )?;
        }

        // Split push: fixes both end pockets; any cylinder pair straddling
        // 1/2 expands to essentially the whole repelling interval.
        let split = &self.generators[6];
        let split_fixed = split.pointwise_fixed();
        if !split_fixed.contains_word(&zeros(e + 2)) || !split_fixed.contains_word(&ones(e + 2)) {
            return fail("split push moves an end pocket".into());
        }
        let spread = DyadicRational::one()
            .sub(&eps_half)
            .sub(&DyadicRational::pow2_neg(TOL_EXP));
        for s in 1..=5u32 {
            for t in 1..=5u32 {
                let low = runs(&[(false, 1), (true, s - 1)]);
                let high = runs(&[(true, 1), (false, t - 1)]);
                iterate_until(
                    split,
                    CylinderSet::from_words([low, high]),
                    "split-push expansion",
                    budget,
                    |set| set.diameter() >= spread,
                )?;
            }
        }
        Ok(())
    }
}
