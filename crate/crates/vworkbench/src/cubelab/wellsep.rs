//! Well-separation and the chain metrics delta_L.
//!
//! delta_L(x, y) is the largest number of walls separating x from y
//! that are pairwise L-well-separated. The implementation runs a DP
//! over separators in crossing order, linking consecutive well-separated
//! pairs; that computes the same value because a chain's consecutive
//! pairs being well-separated forces every pair to be:
//! consecutive separated pairs are non-transverse, hence nested in
//! crossing order, and a wall transverse to an outer pair of a nested
//! triple is transverse to the middle wall, so the transversal set of a
//! distant pair embeds into that of a consecutive one. The subset brute
//! force is kept alongside as a cross-check.

use serde::{Deserialize, Serialize};

use crate::cubelab::bits::BitSet;
use crate::cubelab::complex::CubeComplex;
use crate::cubelab::CubeError;

/// Cap on candidate subsets enumerated by one well-separation query.
pub const SUBSET_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WsVerdict {
    Separated,
    /// Not L-well-separated. An empty witness means the pair itself is
    /// transverse (or equal); otherwise the witness is a facing-triple-
    /// free family of L+1 walls transverse to both.
    NotSeparated { witness: Vec<usize> },
    Budget { subsets: u128 },
}

/// Row w = set of walls transverse to w.
pub fn transverse_matrix(c: &CubeComplex) -> Vec<BitSet> {
    let m = c.walls().len();
    let mut rows = vec![BitSet::new(m); m];
    for i in 0..m {
        for j in i + 1..m {
            if c.transverse(i, j) {
                rows[i].insert(j);
                rows[j].insert(i);
            }
        }
    }
    rows
}

/// Which side of wall `w` carries wall `u`. Meaningful only for
/// non-transverse distinct walls, where the carrier lies entirely on
/// one side; debug builds verify that.
fn carrier_side(c: &CubeComplex, w: usize, u: usize) -> bool {
    let (a, _) = c.walls()[u].edges[0];
    let side = c.walls()[w].on_positive_side(a);
    debug_assert!(
        c.walls()[u]
            .edges
            .iter()
            .all(|&(x, y)| c.walls()[w].on_positive_side(x) == side
                && c.walls()[w].on_positive_side(y) == side),
        "carrier of a non-transverse wall straddles"
    );
    side
}

fn facing_with(c: &CubeComplex, tm: &[BitSet], i: usize, j: usize, k: usize) -> bool {
    if i == j || j == k || i == k {
        return false;
    }
    if tm[i].contains(j) || tm[j].contains(k) || tm[i].contains(k) {
        return false;
    }
    for (mid, a, b) in [(i, j, k), (j, i, k), (k, i, j)] {
        if carrier_side(c, mid, a) != carrier_side(c, mid, b) {
            return false;
        }
    }
    true
}

/// Pairwise non-transverse, and none of the three separates the other
/// two.
pub fn facing_triple(c: &CubeComplex, i: usize, j: usize, k: usize) -> bool {
    facing_with(c, &transverse_matrix(c), i, j, k)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if r > 4 * SUBSET_CAP {
            return r;
        }
    }
    r
}

/// DFS over size-`size` subsets of `t`; returns a subset containing no
/// facing triple if one exists.
fn triple_free_subset(
    c: &CubeComplex,
    tm: &[BitSet],
    t: &[usize],
    size: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if chosen.len() == size {
        for a in 0..size {
            for b in a + 1..size {
                for d in b + 1..size {
                    if facing_with(c, tm, chosen[a], chosen[b], chosen[d]) {
                        return None;
                    }
                }
            }
        }
        return Some(chosen.clone());
    }
    for idx in start..t.len() {
        if t.len() - idx < size - chosen.len() {
            break;
        }
        chosen.push(t[idx]);
        if let Some(w) = triple_free_subset(c, tm, t, size, idx + 1, chosen) {
            return Some(w);
        }
        chosen.pop();
    }
    None
}

fn ws_with(c: &CubeComplex, tm: &[BitSet], i: usize, j: usize, l: u32) -> WsVerdict {
    if i == j || tm[i].contains(j) {
        return WsVerdict::NotSeparated { witness: vec![] };
    }
    let t: Vec<usize> = tm[i].and(&tm[j]).iter().collect();
    let size = l as usize + 1;
    if t.len() < size {
        return WsVerdict::Separated;
    }
    let subsets = binomial(t.len(), size);
    if subsets > SUBSET_CAP {
        return WsVerdict::Budget { subsets };
    }
    match triple_free_subset(c, tm, &t, size, 0, &mut Vec::new()) {
        Some(witness) => WsVerdict::NotSeparated { witness },
        None => WsVerdict::Separated,
    }
}

/// Are walls i and j L-well-separated: not transverse, and every
/// family of walls transverse to both, L+1 or more of them, contains a
/// facing triple.
pub fn well_separated(c: &CubeComplex, i: usize, j: usize, l: u32) -> WsVerdict {
    ws_with(c, &transverse_matrix(c), i, j, l)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdditivityCheck {
    pub triples: u64,
    pub worst_upper: i64,
    pub worst_lower: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MedianCheck {
    pub triples: u64,
    pub worst: i64,
    pub holds: bool,
}

/// delta_L distances on one complex: the pairwise well-separation
/// relation is computed once up front.
pub struct DeltaL<'a> {
    c: &'a CubeComplex,
    l: u32,
    ws: Vec<BitSet>,
}

impl<'a> DeltaL<'a> {
    pub fn new(c: &'a CubeComplex, l: u32) -> Result<Self, CubeError> {
        let tm = transverse_matrix(c);
        let m = c.walls().len();
        let mut ws = vec![BitSet::new(m); m];
        for i in 0..m {
            for j in i + 1..m {
                match ws_with(c, &tm, i, j, l) {
                    WsVerdict::Separated => {
                        ws[i].insert(j);
                        ws[j].insert(i);
                    }
                    WsVerdict::NotSeparated { .. } => {}
                    WsVerdict::Budget { subsets } => {
                        return Err(CubeError::Budget {
                            what: format!(
                                "well-separation search over {subsets} subsets"
                            ),
                        })
                    }
                }
            }
        }
        Ok(DeltaL { c, l, ws })
    }

    pub fn level(&self) -> u32 {
        self.l
    }

    pub fn complex(&self) -> &CubeComplex {
        self.c
    }

    pub fn pair_separated(&self, i: usize, j: usize) -> bool {
        i != j && self.ws[i].contains(j)
    }

    /// Longest chain of separators whose consecutive pairs are
    /// well-separated, walked in crossing order.
    pub fn distance(&self, x: u32, y: u32) -> u32 {
        let seps = self.c.separators_in_order(x, y);
        let mut best = 0u32;
        let mut dp = vec![1u32; seps.len()];
        for b in 0..seps.len() {
            for a in 0..b {
                if self.ws[seps[a]].contains(seps[b]) {
                    dp[b] = dp[b].max(dp[a] + 1);
                }
            }
            best = best.max(dp[b]);
        }
        best
    }

    /// Largest pairwise well-separated subset of the separators, by
    /// branch-and-bound. The definitional form of the metric; must agree
    /// with the DP.
    pub fn bruteforce(&self, x: u32, y: u32) -> u32 {
        let seps = self.c.separators_in_order(x, y);
        assert!(seps.len() <= 20, "subset brute force is for small separator sets");
        let mut best = 0;
        let mut chosen = Vec::new();
        self.clique(&seps, 0, &mut chosen, &mut best);
        best
    }

    fn clique(&self, seps: &[usize], start: usize, chosen: &mut Vec<usize>, best: &mut u32) {
        *best = (*best).max(chosen.len() as u32);
        for i in start..seps.len() {
            if chosen.len() + (seps.len() - i) <= *best as usize {
                return;
            }
            if chosen.iter().all(|&j| self.ws[j].contains(seps[i])) {
                chosen.push(seps[i]);
                self.clique(seps, i + 1, chosen, best);
                chosen.pop();
            }
        }
    }

    /// Full distance matrix, with the metric axioms verified along the
    /// way: symmetry (computed independently in both directions),
    /// positivity off the diagonal, and the triangle inequality.
    pub fn metric_matrix(&self) -> Result<Vec<Vec<u32>>, CubeError> {
        let n = self.c.len();
        let mut d = vec![vec![0u32; n]; n];
        for x in 0..n {
            for y in 0..n {
                d[x][y] = self.distance(x as u32, y as u32);
            }
        }
        for x in 0..n {
            if d[x][x] != 0 {
                return Err(CubeError::Axiom { what: format!("delta_L({x}, {x}) != 0") });
            }
            for y in x + 1..n {
                if d[x][y] != d[y][x] {
                    return Err(CubeError::Axiom {
                        what: format!("delta_L asymmetric at ({x}, {y})"),
                    });
                }
                if d[x][y] == 0 {
                    return Err(CubeError::Axiom {
                        what: format!("delta_L({x}, {y}) = 0 for distinct vertices"),
                    });
                }
            }
        }
        for x in 0..n {
            for z in x + 1..n {
                for y in 0..n {
                    if d[x][z] > d[x][y] + d[y][z] {
                        return Err(CubeError::Axiom {
                            what: format!("triangle fails at ({x}, {y}, {z})"),
                        });
                    }
                }
            }
        }
        Ok(d)
    }

    /// Splitting at any point of a geodesic interval changes delta_L by
    /// at most 2(L+3) downward and never upward.
    pub fn geodesic_additivity(&self, d: &[Vec<u32>]) -> AdditivityCheck {
        let n = self.c.len();
        let slack = 2 * (self.l as i64 + 3);
        let mut triples = 0u64;
        let mut worst_upper = i64::MIN;
        let mut worst_lower = i64::MIN;
        for x in 0..n {
            for y in x..n {
                let dxy = d[x][y] as i64;
                for z in self.c.interval(x as u32, y as u32).iter() {
                    triples += 1;
                    let split = d[x][z] as i64 + d[z][y] as i64;
                    worst_upper = worst_upper.max(dxy - split);
                    worst_lower = worst_lower.max(split - slack - dxy);
                }
            }
        }
        AdditivityCheck {
            triples,
            worst_upper,
            worst_lower,
            holds: worst_upper <= 0 && worst_lower <= 0,
        }
    }

    /// The doubled delta_L Gromov product of x, y at z stays within
    /// 6(L+3) of twice the delta_L distance from z to the median.
    pub fn median_product(&self, d: &[Vec<u32>]) -> MedianCheck {
        let n = self.c.len();
        let slack = 6 * (self.l as i64 + 3);
        let mut triples = 0u64;
        let mut worst = i64::MIN;
        for z in 0..n {
            for x in 0..n {
                for y in x + 1..n {
                    triples += 1;
                    let m = self.c.median(x as u32, y as u32, z as u32) as usize;
                    let prod2 = d[z][x] as i64 + d[z][y] as i64 - d[x][y] as i64;
                    let defect = (prod2 - 2 * d[z][m] as i64).abs() - slack;
                    worst = worst.max(defect);
                }
            }
        }
        MedianCheck { triples, worst, holds: worst <= 0 }
    }
}

/// Doubled four-point constant of an arbitrary integer metric matrix.
pub fn four_point_of_matrix(d: &[Vec<u32>]) -> i64 {
    let n = d.len();
    let p = |w: usize, a: usize, b: usize| d[w][a] as i64 + d[w][b] as i64 - d[a][b] as i64;
    let mut best = 0i64;
    for w in 0..n {
        for x in 0..n {
            if x == w {
                continue;
            }
            for y in x + 1..n {
                if y == w {
                    continue;
                }
                for z in y + 1..n {
                    if z == w {
                        continue;
                    }
                    for (a, b, cc) in [(x, y, z), (y, z, x), (x, z, y)] {
                        let gap = p(w, a, cc).min(p(w, cc, b)) - p(w, a, b);
                        best = best.max(gap);
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubelab::instances::{cube_q, path_complex, product, random_staircase};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn path_walls_are_all_well_separated_at_level_zero() {
        let p = path_complex(6);
        for i in 0..5 {
            for j in i + 1..5 {
                assert_eq!(well_separated(&p, i, j, 0), WsVerdict::Separated);
            }
        }
        let dl = DeltaL::new(&p, 0).unwrap();
        assert_eq!(dl.distance(0, 5), 5);
        assert_eq!(dl.bruteforce(0, 5), 5);
    }

    #[test]
    fn cube_antipodes_collapse_to_one() {
        let q = cube_q(3);
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(q.transverse(i, j));
                assert!(matches!(
                    well_separated(&q, i, j, 2),
                    WsVerdict::NotSeparated { witness } if witness.is_empty()
                ));
            }
        }
        let dl = DeltaL::new(&q, 0).unwrap();
        assert_eq!(dl.distance(0, 7), 1);
        assert_eq!(dl.bruteforce(0, 7), 1);
    }

    #[test]
    fn grid_walls_separate_at_level_one_but_not_zero() {
        // 2 x 5 grid: one long wall, four short parallel walls.
        let g = product(&path_complex(2), &path_complex(5));
        let long_wall = (0..g.walls().len())
            .find(|&w| g.walls()[w].edges.len() == 5)
            .expect("the row wall has five edges");
        let shorts: Vec<usize> =
            (0..g.walls().len()).filter(|&w| w != long_wall).collect();
        assert_eq!(shorts.len(), 4);
        for (a, &i) in shorts.iter().enumerate() {
            assert!(g.transverse(long_wall, i));
            for &j in &shorts[a + 1..] {
                match well_separated(&g, i, j, 0) {
                    WsVerdict::NotSeparated { witness } => {
                        assert_eq!(witness, vec![long_wall]);
                    }
                    other => panic!("expected a witness family, got {other:?}"),
                }
                assert_eq!(well_separated(&g, i, j, 1), WsVerdict::Separated);
            }
        }
        // Corner to corner: level 0 collapses, level 1 counts the short
        // walls.
        let dl0 = DeltaL::new(&g, 0).unwrap();
        let dl1 = DeltaL::new(&g, 1).unwrap();
        let far = (g.len() - 1) as u32;
        assert_eq!(g.dist(0, far), 5);
        assert_eq!(dl0.distance(0, far), 1);
        assert_eq!(dl1.distance(0, far), 4);
    }

    #[test]
    fn dp_matches_subset_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for trial in 0..6 {
            let c = if trial % 2 == 0 {
                random_staircase(&mut rng, 6, 6)
            } else {
                product(&path_complex(2), &path_complex(2 + trial))
            };
            for l in 0..=2 {
                let dl = DeltaL::new(&c, l).unwrap();
                for x in 0..c.len() as u32 {
                    for y in x + 1..c.len() as u32 {
                        if c.dist(x, y) <= 12 {
                            assert_eq!(
                                dl.distance(x, y),
                                dl.bruteforce(x, y),
                                "complex {trial}, level {l}, pair ({x}, {y})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn delta_is_a_metric_bounded_by_graph_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let c = random_staircase(&mut rng, 7, 7);
        for l in 0..=2 {
            let dl = DeltaL::new(&c, l).unwrap();
            let d = dl.metric_matrix().unwrap();
            for x in 0..c.len() {
                for y in 0..c.len() {
                    assert!(d[x][y] <= c.dist(x as u32, y as u32));
                }
            }
        }
    }

    #[test]
    fn interval_splits_and_median_products_stay_within_slack() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let complexes = [
            random_staircase(&mut rng, 6, 8),
            product(&path_complex(3), &path_complex(4)),
            cube_q(3),
        ];
        for c in &complexes {
            for l in 0..=2 {
                let dl = DeltaL::new(c, l).unwrap();
                let d = dl.metric_matrix().unwrap();
                let add = dl.geodesic_additivity(&d);
                assert!(add.holds, "additivity worst {:?}", (add.worst_lower, add.worst_upper));
                let med = dl.median_product(&d);
                assert!(med.holds, "median product worst {}", med.worst);
            }
        }
    }

    #[test]
    fn relabeling_preserves_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let c = random_staircase(&mut rng, 5, 5);
        let n = c.len();
        // Rotate labels: v -> v + 1 mod n.
        let relabel = |v: u32| ((v as usize + 1) % n) as u32;
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for &v in c.neighbors(u) {
                if u < v {
                    edges.push((relabel(u), relabel(v)));
                }
            }
        }
        let r = CubeComplex::from_edges(n, &edges).unwrap();
        let dl = DeltaL::new(&c, 1).unwrap();
        let dr = DeltaL::new(&r, 1).unwrap();
        for x in 0..n as u32 {
            for y in 0..n as u32 {
                assert_eq!(dl.distance(x, y), dr.distance(relabel(x), relabel(y)));
            }
        }
    }

    #[test]
    fn path_delta_reproduces_the_path_metric() {
        let p = path_complex(7);
        let dl = DeltaL::new(&p, 0).unwrap();
        let d = dl.metric_matrix().unwrap();
        for x in 0..7u32 {
            for y in 0..7u32 {
                assert_eq!(d[x as usize][y as usize], p.dist(x, y));
            }
        }
        assert_eq!(four_point_of_matrix(&d), 0);
    }
}
