//! The three fixed witness elements and small combinatorial helpers shared
//! by the constructions: mirrored elements, grid-cell permutations with fast
//! powers, and the bounded-iteration self-checks.

use crate::constructions::ConstructionError;
use crate::dyadic::{BinaryWord, CylinderSet, DyadicRational};
use crate::vcore::VElement;

/// Iteration cap for the dynamic self-checks.
pub(crate) const N_MAX: u32 = 64;
/// Contraction / expansion target for the self-checks: 2^-10.
pub(crate) const TOL_EXP: u32 = 10;
/// Depth of the enumerated test cylinders.
pub(crate) const TEST_DEPTH: u32 = 6;

pub(crate) fn zeros(n: u32) -> BinaryWord {
    BinaryWord::root()
        .extend_run(false, n)
        .expect("run within depth cap")
}

pub(crate) fn ones(n: u32) -> BinaryWord {
    BinaryWord::root()
        .extend_run(true, n)
        .expect("run within depth cap")
}

/// The element conjugate to `g` under the mirror x -> 1-x: every leaf word
/// on both sides has its letters flipped.
pub(crate) fn mirror_element(g: &VElement) -> VElement {
    let pairs: Vec<(BinaryWord, BinaryWord)> =
        g.pairs().map(|(d, r)| (d.mirror(), r.mirror())).collect();
    VElement::from_pairs(&pairs).expect("mirroring preserves completeness")
}

/// A permutation of the 2^depth equal cells of [0,1]. Powers are computed by
/// cycle decomposition, so translations-by-a-cell stay cheap at exponents
/// where repeated composition would blow up.
#[derive(Clone)]
pub(crate) struct CellPerm {
    depth: u32,
    sigma: Vec<usize>,
}

impl CellPerm {
    pub(crate) fn new(depth: u32, sigma: Vec<usize>) -> Self {
        debug_assert_eq!(sigma.len(), 1usize << depth);
        let mut seen = vec![false; sigma.len()];
        for &j in &sigma {
            assert!(!seen[j], "cell map must be a permutation");
            seen[j] = true;
        }
        CellPerm { depth, sigma }
    }

    pub(crate) fn pow(&self, n: i64) -> Self {
        let size = self.sigma.len();
        let mut out = vec![usize::MAX; size];
        let mut visited = vec![false; size];
        for start in 0..size {
            if visited[start] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut cur = self.sigma[start];
            while cur != start {
                visited[cur] = true;
                cycle.push(cur);
                cur = self.sigma[cur];
            }
            let len = cycle.len() as i64;
            let shift = n.rem_euclid(len) as usize;
            for (i, &c) in cycle.iter().enumerate() {
                out[c] = cycle[(i + shift) % cycle.len()];
            }
        }
        CellPerm { depth: self.depth, sigma: out }
    }

    pub(crate) fn to_element(&self) -> VElement {
        let pairs: Vec<(BinaryWord, BinaryWord)> = self
            .sigma
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                (
                    BinaryWord::from_value(self.depth, i as u64).expect("cell in range"),
                    BinaryWord::from_value(self.depth, j as u64).expect("cell in range"),
                )
            })
            .collect();
        VElement::from_pairs(&pairs).expect("cell permutation is complete")
    }
}

/// All words of depth 1..=max_depth satisfying the predicate.
pub(crate) fn test_words(max_depth: u32, keep: impl Fn(&BinaryWord) -> bool) -> Vec<BinaryWord> {
    let mut out = Vec::new();
    for depth in 1..=max_depth {
        for value in 0..(1u64 << depth) {
            let word = BinaryWord::from_value(depth, value).expect("within cap");
            if keep(&word) {
                out.push(word);
            }
        }
    }
    out
}

/// Iterates the set image of `start` under `g` until `done` holds; errors
/// with the stage name after `budget` steps.
pub(crate) fn iterate_until(
    g: &VElement,
    start: CylinderSet,
    stage: &'static str,
    budget: u32,
    done: impl Fn(&CylinderSet) -> bool,
) -> Result<u32, ConstructionError> {
    let mut s = start;
    for n in 0..=budget {
        if done(&s) {
            return Ok(n);
        }
        s = g.image_of_set(&s)?;
    }
    Err(ConstructionError::BudgetExhausted { stage, budget: budget as u64 })
}

/// The three standard witness elements.
///
/// * `funnel`: identity on [0,1/2]; on [1/2,1] a piecewise-affine map with
///   repelling fixed points 1/2 and 1 and attracting fixed point 3/4
///   (slopes 2, 1, 1/2, 1/2, 1, 2 across six pieces). Iterates contract
///   every cylinder strictly inside (1/2,1) toward 3/4.
/// * `shift`: translation by 1/8 on [0,3/4], wrapping [3/4,7/8] to [0,1/8],
///   identity on [7/8,1]; a 7-cycle on the first seven depth-3 cells.
/// * `sweep`: moves every point down ([0,1/2]→[0,1/4], [1/2,3/4]→[1/4,1/2],
///   [3/4,1]→[1/2,1]); iterated images of any neighborhood of 1 sweep out
///   all of (0,1].
#[derive(Clone)]
pub struct WitnessSet {
    pub funnel: VElement,
    pub shift: VElement,
    pub sweep: VElement,
}

impl WitnessSet {
    pub fn standard() -> Self {
        let p = |d: &str, r: &str| {
            (
                d.parse::<BinaryWord>().unwrap(),
                r.parse::<BinaryWord>().unwrap(),
            )
        };
        let funnel = VElement::from_pairs(&[
            p("0", "0"),
            p("1000", "100"),
            p("1001", "1010"),
            p("101", "1011"),
            p("110", "1100"),
            p("1110", "1101"),
            p("1111", "111"),
        ])
        .expect("funnel codes are complete");
        let shift_pairs: Vec<(BinaryWord, BinaryWord)> = (0u64..8)
            .map(|i| {
                let image = if i == 7 { 7 } else { (i + 1) % 7 };
                (
                    BinaryWord::from_value(3, i).unwrap(),
                    BinaryWord::from_value(3, image).unwrap(),
                )
            })
            .collect();
        let shift = VElement::from_pairs(&shift_pairs).expect("cell cycle is complete");
        let sweep = VElement::from_pairs(&[p("0", "00"), p("10", "01"), p("11", "1")])
            .expect("sweep codes are complete");
        WitnessSet { funnel, shift, sweep }
    }

    /// Bounded-iteration self-check of every stated property. Cheap enough
    /// to run in tests and at CLI startup of the commands that rely on it.
    pub fn verify(&self) -> Result<(), ConstructionError> {
        let fail = |what: &str| ConstructionError::SelfCheckFailed { what: what.into() };
        let wd = |s: &str| s.parse::<BinaryWord>().unwrap();
        let tol = DyadicRational::pow2_neg(TOL_EXP);

        // funnel: identity on "0", fixes 3/4, thickness >= 1/8.
        if !self.funnel.pointwise_fixed().contains_word(&wd("0")) {
            return Err(fail("funnel is not the identity on [0,1/2]"));
        }
        if self.funnel.apply_word(&wd("110")).unwrap().left_endpoint()
            != DyadicRational::new(3, 2)
        {
            return Err(fail("funnel does not fix the point 3/4"));
        }
        if self.funnel.thickness() < DyadicRational::new(1, 3) {
            return Err(fail("funnel thickness below 1/8"));
        }
        // funnel contracts every test cylinder strictly inside (1/2,1).
        let half = DyadicRational::new(1, 1);
        let interior = test_words(TEST_DEPTH, |w| {
            w.left_endpoint() > half && w.right_endpoint() < DyadicRational::one()
        });
        for word in interior {
            iterate_until(
                &self.funnel,
                CylinderSet::from_words([word]),
                "funnel contraction",
                N_MAX,
                |s| s.diameter() <= tol,
            )?;
        }

        // shift: exact translation by one depth-3 cell, wrap at [3/4,7/8].
        for i in 0u64..7 {
            let from = BinaryWord::from_value(3, i).unwrap();
            let to = BinaryWord::from_value(3, (i + 1) % 7).unwrap();
            if self.shift.apply_word(&from).unwrap() != to {
                return Err(fail("shift does not translate depth-3 cells by 1/8"));
            }
        }
        if self.shift.thickness() < DyadicRational::new(1, 3) {
            return Err(fail("shift fixes no interval of length 1/8"));
        }

        // sweep: images of [1-2^-j, 1] grow to length >= 1 - 2^-10.
        let full = DyadicRational::one().sub(&tol);
        for j in 1..=TEST_DEPTH {
            iterate_until(
                &self.sweep,
                CylinderSet::from_words([ones(j)]),
                "sweep expansion",
                N_MAX,
                |s| s.diameter() >= full,
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::w;

    #[test]
    fn witnesses_pass_their_self_checks() {
        WitnessSet::standard().verify().unwrap();
    }

    #[test]
    fn funnel_pushes_the_attracting_ray() {
        let ws = WitnessSet::standard();
        let mut x = w("110");
        for _ in 0..7 {
            x = ws.funnel.apply_word(&x).unwrap();
        }
        // Seven applications: [3/4, 7/8] has shrunk to length 2^-10 at 3/4.
        assert_eq!(x, w("1100000000"));
        assert!(x.interval_length() <= DyadicRational::pow2_neg(10));
    }

    #[test]
    fn shift_has_order_seven() {
        let ws = WitnessSet::standard();
        assert!(ws.shift.pow(7).unwrap().is_identity());
        assert!(!ws.shift.pow(3).unwrap().is_identity());
    }

    #[test]
    fn mirror_conjugates_by_the_flip() {
        let ws = WitnessSet::standard();
        let m = mirror_element(&ws.sweep);
        // sweep sends "0" to "00"; its mirror sends "1" to "11".
        assert_eq!(m.apply_word(&w("1")).unwrap(), w("11"));
        assert_eq!(mirror_element(&m), ws.sweep);
    }

    #[test]
    fn cell_perm_powers_match_repeated_composition() {
        // Cyclic shift of the 8 depth-3 cells.
        let sigma: Vec<usize> = (0..8).map(|i| (i + 1) % 8).collect();
        let cp = CellPerm::new(3, sigma);
        let el = cp.to_element();
        for n in [-5i64, -1, 0, 1, 3, 11] {
            assert_eq!(cp.pow(n).to_element(), el.pow(n).unwrap(), "power {}", n);
        }
    }
}
