//! Instance generators and randomized sweeps.
//!
//! Each sweep draws graphs from a rotating family (trees, grids, sparse
//! connected graphs), attaches a geodesic witness line, and tallies one
//! validator across many trials. Trees appear twice in the rotation on
//! purpose: they have delta2 = 0 and witness constant 0, so the gated
//! checks (which skip instances whose projection gap sits under a
//! delta-dependent threshold) actually get eligible inputs. Skipped
//! instances are always counted, never dropped.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use num_rational::Ratio;

use crate::hyplab::checks::{
    check_broken_geodesic, check_distproj, check_foot, check_projection_window,
    check_quasigeodesic_fact, project, LineWitness,
};
use crate::hyplab::graph::{FiniteMetricSpace, HypGraph};
use crate::hyplab::line::{line_model_check, LineModelIsometry};
use crate::hyplab::Outcome;

pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> HypGraph {
    assert!(n >= 1);
    let edges: Vec<(u32, u32)> = (1..n as u32)
        .map(|i| (rng.gen_range(0..i), i))
        .collect();
    HypGraph::from_edges(n, &edges).expect("random attachment trees are connected")
}

pub fn grid_graph(rows: usize, cols: usize) -> HypGraph {
    assert!(rows >= 1 && cols >= 1);
    let at = |r: usize, c: usize| (r * cols + c) as u32;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((at(r, c), at(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    HypGraph::from_edges(rows * cols, &edges).expect("grids are connected")
}

/// Random tree plus a few chords.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra: usize) -> HypGraph {
    let mut edges: Vec<(u32, u32)> = (1..n as u32)
        .map(|i| (rng.gen_range(0..i), i))
        .collect();
    let mut have: HashSet<(u32, u32)> = edges.iter().copied().collect();
    let mut budget = 8 * extra;
    while have.len() < n - 1 + extra && budget > 0 {
        budget -= 1;
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        let (u, v) = (u.min(v), u.max(v));
        if u != v && have.insert((u, v)) {
            edges.push((u, v));
        }
    }
    HypGraph::from_edges(n, &edges).expect("chords keep the tree connected")
}

/// Random point configuration: short random distances pushed through
/// the min-plus closure, which restores the triangle inequality while
/// keeping every entry positive.
pub fn random_metric_space<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let mut d = vec![vec![Ratio::new(0, 1); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = Ratio::new(rng.gen_range(2..=8), 4);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::new(d).expect("min-plus closure of positive entries is a metric")
}

/// Tally of one validator over a sweep of random instances. `passed`
/// demands zero violations over a nonempty eligible set, so a sweep
/// whose gate filtered everything out does not count as evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub seed: u64,
    pub instances: u32,
    pub eligible: u32,
    pub skipped_ineligible: u32,
    pub skipped_budget: u32,
    pub violations: u32,
    pub max_delta2: i64,
    pub max_witness_k: u32,
}

impl CheckReport {
    fn new(check: &str, seed: u64) -> Self {
        CheckReport {
            check: check.to_string(),
            seed,
            instances: 0,
            eligible: 0,
            skipped_ineligible: 0,
            skipped_budget: 0,
            violations: 0,
            max_delta2: 0,
            max_witness_k: 0,
        }
    }

    fn tally(&mut self, outcome: Outcome<bool>) {
        self.instances += 1;
        match outcome {
            Outcome::Ineligible => self.skipped_ineligible += 1,
            Outcome::Budget => self.skipped_budget += 1,
            Outcome::Checked(ok) => {
                self.eligible += 1;
                if !ok {
                    self.violations += 1;
                }
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.eligible > 0
    }
}

fn sample_graph(rng: &mut ChaCha8Rng, idx: u32) -> HypGraph {
    match idx % 4 {
        0 => {
            let n = rng.gen_range(8..28);
            random_tree(rng, n)
        }
        1 => {
            let rows = rng.gen_range(2..4);
            let cols = rng.gen_range(2..7);
            grid_graph(rows, cols)
        }
        2 => {
            let n = rng.gen_range(8..20);
            let extra = rng.gen_range(1..4);
            random_connected_graph(rng, n, extra)
        }
        // Second helping of trees keeps the gated sweeps fed.
        _ => {
            let n = rng.gen_range(12..32);
            random_tree(rng, n)
        }
    }
}

/// Geodesic between two random distinct vertices, as a witness line.
fn sample_witness(rng: &mut ChaCha8Rng, g: &HypGraph, cap: u64) -> LineWitness {
    let n = g.len() as u32;
    let u = rng.gen_range(0..n);
    let mut v = rng.gen_range(0..n);
    if v == u {
        v = (v + 1) % n;
    }
    LineWitness::new(g, g.first_geodesic(u, v), cap)
        .expect("a first_geodesic is a simple adjacent path")
}

fn note_constants(rep: &mut CheckReport, g: &HypGraph, w: &LineWitness) {
    rep.max_delta2 = rep.max_delta2.max(g.delta2());
    rep.max_witness_k = rep.max_witness_k.max(w.k());
}

struct Sweep {
    rng: ChaCha8Rng,
    rep: CheckReport,
    cap: u64,
}

impl Sweep {
    fn new(check: &str, seed: u64, cap: u64) -> Self {
        Sweep { rng: ChaCha8Rng::seed_from_u64(seed), rep: CheckReport::new(check, seed), cap }
    }

    /// Draw a graph and witness; a witness whose constant is only a
    /// lower bound (pairs skipped under the geodesic cap) makes every
    /// threshold untrustworthy, so the whole trial is a budget skip.
    fn draw(&mut self, idx: u32) -> Option<(HypGraph, LineWitness)> {
        let g = sample_graph(&mut self.rng, idx);
        let w = sample_witness(&mut self.rng, &g, self.cap);
        if w.skipped_pairs() > 0 {
            self.rep.tally(Outcome::Budget);
            return None;
        }
        note_constants(&mut self.rep, &g, &w);
        Some((g, w))
    }
}

/// Every geodesic between a point and a point on the line passes within
/// the measured Hausdorff width of the projection.
pub fn sweep_projection_window(seed: u64, trials: u32, cap: u64) -> CheckReport {
    let mut s = Sweep::new("projection window", seed, cap);
    for idx in 0..trials {
        let Some((g, w)) = s.draw(idx) else { continue };
        let x1 = s.rng.gen_range(0..g.len() as u32);
        let x2 = w.path()[s.rng.gen_range(0..w.path().len())];
        let outcome = check_projection_window(&g, x1, x2, &w, s.cap)
            .expect("x2 is drawn from the witness path");
        s.rep.tally(match outcome {
            Outcome::Checked(res) => Outcome::Checked(res.holds),
            Outcome::Ineligible => Outcome::Ineligible,
            Outcome::Budget => Outcome::Budget,
        });
    }
    s.rep
}

/// Concatenating [a, proj(a)] with a run along the line loses at most
/// 2(4 delta + K) against the geodesic bound.
pub fn sweep_quasigeodesic(seed: u64, trials: u32, cap: u64) -> CheckReport {
    let mut s = Sweep::new("projection concatenation is a quasigeodesic", seed, cap);
    for idx in 0..trials {
        let Some((g, w)) = s.draw(idx) else { continue };
        let a = s.rng.gen_range(0..g.len() as u32);
        let p = project(&g, a, &w);
        let b = w.path()[s.rng.gen_range(0..w.path().len())];
        let res = check_quasigeodesic_fact(&g, a, p, b, &w)
            .expect("p and b satisfy the preconditions by construction");
        s.rep.tally(Outcome::Checked(res.holds));
    }
    s.rep
}

/// With projections far apart, the detour through both feet measures
/// the distance to within 4(6 delta + K).
pub fn sweep_broken_geodesic(seed: u64, trials: u32, cap: u64) -> CheckReport {
    let mut s = Sweep::new("broken geodesic additivity", seed, cap);
    for idx in 0..trials {
        let Some((g, w)) = s.draw(idx) else { continue };
        let x = s.rng.gen_range(0..g.len() as u32);
        let y = s.rng.gen_range(0..g.len() as u32);
        s.rep.tally(match check_broken_geodesic(&g, x, y, &w) {
            Outcome::Checked(res) => Outcome::Checked(res.holds),
            Outcome::Ineligible => Outcome::Ineligible,
            Outcome::Budget => Outcome::Budget,
        });
    }
    s.rep
}

/// The entry foot of a geodesic lands near the projection, measured
/// against twice the broken path's own Hausdorff deviation.
pub fn sweep_foot(seed: u64, trials: u32, cap: u64) -> CheckReport {
    let mut s = Sweep::new("nearest-point foot", seed, cap);
    for idx in 0..trials {
        let Some((g, w)) = s.draw(idx) else { continue };
        let x = s.rng.gen_range(0..g.len() as u32);
        let y = s.rng.gen_range(0..g.len() as u32);
        s.rep.tally(match check_foot(&g, x, y, &w, s.cap) {
            Outcome::Checked(res) => Outcome::Checked(res.holds),
            Outcome::Ineligible => Outcome::Ineligible,
            Outcome::Budget => Outcome::Budget,
        });
    }
    s.rep
}

/// Projection expands distances by at most an additive constant.
pub fn sweep_projection_gap(seed: u64, trials: u32, cap: u64) -> CheckReport {
    let mut s = Sweep::new("projection distance bound", seed, cap);
    for idx in 0..trials {
        let Some((g, w)) = s.draw(idx) else { continue };
        let x = s.rng.gen_range(0..g.len() as u32);
        let y = s.rng.gen_range(0..g.len() as u32);
        let res = check_distproj(&g, x, y, &w);
        s.rep.tally(Outcome::Checked(res.holds));
    }
    s.rep
}

/// Translation-plus-reflection pairs on the integer line: some vertex
/// near the reflection center moves by at most 1, exactly 0 when the
/// center is a vertex.
pub fn sweep_line_model(seed: u64, trials: u32) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CheckReport::new("line model displacement", seed);
    for _ in 0..trials {
        let mut offset = 0;
        while offset == 0 {
            offset = rng.gen_range(-40..=40);
        }
        let center2 = rng.gen_range(-80..=80i64);
        let g = LineModelIsometry::Translation { offset };
        let h = LineModelIsometry::Reflection { center2 };
        let window = center2.abs() / 2 + 4;
        let res = line_model_check(&g, &h, window);
        rep.tally(Outcome::Checked(res.holds));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyplab::graph::graphify;
    use crate::hyplab::GEODESIC_CAP;

    #[test]
    fn generators_produce_connected_graphs_of_the_right_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = random_tree(&mut rng, 17);
        assert_eq!(t.len(), 17);
        assert_eq!(t.edges().len(), 16);
        assert_eq!(t.delta2(), 0);
        let g = grid_graph(2, 5);
        assert_eq!(g.len(), 10);
        assert_eq!(g.delta2(), 2);
        let c = random_connected_graph(&mut rng, 12, 3);
        assert_eq!(c.len(), 12);
        assert!(c.edges().len() >= 11);
    }

    #[test]
    fn random_metrics_survive_the_closure_and_often_graphify() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut embedded = 0;
        for _ in 0..10 {
            let m = random_metric_space(&mut rng, 7);
            assert_eq!(m.len(), 7);
            if graphify(&m).is_ok() {
                embedded += 1;
            }
        }
        assert!(embedded > 0, "no sampled metric embedded into a graph");
    }

    #[test]
    fn sweeps_run_clean_and_account_for_every_trial() {
        let runs = [
            sweep_projection_window(21, 32, GEODESIC_CAP),
            sweep_quasigeodesic(22, 32, GEODESIC_CAP),
            sweep_broken_geodesic(23, 48, GEODESIC_CAP),
            sweep_foot(24, 48, GEODESIC_CAP),
            sweep_projection_gap(25, 32, GEODESIC_CAP),
            sweep_line_model(26, 32),
        ];
        for rep in &runs {
            assert_eq!(
                rep.instances,
                rep.eligible + rep.skipped_ineligible + rep.skipped_budget,
                "{} lost trials",
                rep.check
            );
            assert_eq!(rep.violations, 0, "{} found violations", rep.check);
            assert!(rep.passed(), "{} had no eligible instances", rep.check);
        }
    }

    #[test]
    fn sweeps_are_deterministic_in_the_seed() {
        assert_eq!(
            sweep_broken_geodesic(9, 24, GEODESIC_CAP),
            sweep_broken_geodesic(9, 24, GEODESIC_CAP)
        );
        assert_ne!(
            sweep_broken_geodesic(9, 40, GEODESIC_CAP).eligible,
            0,
            "gated sweep never fired"
        );
    }
}
