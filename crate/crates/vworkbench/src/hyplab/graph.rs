//! Finite metric spaces, their unit-edge graphs, and exact four-point
//! constants.

use num_rational::Ratio;
use num_traits::Zero;

use crate::hyplab::HypError;

/// Exact finite metric: symmetric rational matrix, zero diagonal,
/// triangle inequality verified at construction.
#[derive(Clone)]
pub struct FiniteMetricSpace {
    d: Vec<Vec<Ratio<i64>>>,
}

impl FiniteMetricSpace {
    pub fn new(d: Vec<Vec<Ratio<i64>>>) -> Result<Self, HypError> {
        let n = d.len();
        let bad = |reason: &str| HypError::MetricInvalid { reason: reason.into() };
        if d.iter().any(|row| row.len() != n) {
            return Err(bad("matrix is not square"));
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(bad("nonzero diagonal"));
            }
            for j in 0..i {
                if d[i][j] != d[j][i] {
                    return Err(bad("asymmetric"));
                }
                if d[i][j] <= Ratio::zero() {
                    return Err(bad("non-positive off-diagonal distance"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][j] > d[i][k] + d[k][j] {
                        return Err(bad("triangle inequality fails"));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { d })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> Ratio<i64> {
        self.d[i][j]
    }
}

/// Connected graph with cached hop distances and its four-point constant,
/// stored doubled so it stays an integer.
#[derive(Clone)]
pub struct HypGraph {
    adj: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    dist: Vec<Vec<u32>>,
    delta2: i64,
}

impl HypGraph {
    pub fn from_edges(n: usize, raw: &[(u32, u32)]) -> Result<Self, HypError> {
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in raw {
            if u as usize >= n {
                return Err(HypError::VertexRange(u));
            }
            if v as usize >= n {
                return Err(HypError::VertexRange(v));
            }
            if u == v {
                return Err(HypError::MetricInvalid { reason: "self-loop".into() });
            }
            let e = (u.min(v), u.max(v));
            if !edges.contains(&e) {
                edges.push(e);
                adj[e.0 as usize].push(e.1);
                adj[e.1 as usize].push(e.0);
            }
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        let dist = all_pairs(&adj)?;
        let delta2 = four_point_doubled(&dist);
        Ok(HypGraph { adj, edges, dist, delta2 })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn dist(&self, u: u32, v: u32) -> u32 {
        self.dist[u as usize][v as usize]
    }

    /// Doubled four-point constant; the rational value is `delta2 / 2`.
    pub fn delta2(&self) -> i64 {
        self.delta2
    }

    pub fn is_geodesic(&self, path: &[u32]) -> bool {
        !path.is_empty()
            && path
                .windows(2)
                .all(|w| self.neighbors(w[0]).binary_search(&w[1]).is_ok())
            && path.len() as u32 == self.dist(path[0], path[path.len() - 1]) + 1
    }

    /// Number of geodesics from x to y, saturating.
    pub fn geodesic_count(&self, x: u32, y: u32) -> u128 {
        let total = self.dist(x, y);
        let mut order: Vec<u32> = (0..self.len() as u32)
            .filter(|&v| self.dist(x, v) + self.dist(v, y) == total)
            .collect();
        order.sort_unstable_by_key(|&v| self.dist(x, v));
        let mut count = vec![0u128; self.len()];
        count[x as usize] = 1;
        for &v in order.iter().skip(1) {
            let mut c = 0u128;
            for &u in self.neighbors(v) {
                if self.dist(x, u) + 1 == self.dist(x, v)
                    && self.dist(x, u) + self.dist(u, y) == total
                {
                    c = c.saturating_add(count[u as usize]);
                }
            }
            count[v as usize] = c;
        }
        count[y as usize]
    }

    /// All geodesics from x to y, or None when there are more than `cap`.
    pub fn enumerate_geodesics(&self, x: u32, y: u32, cap: u64) -> Option<Vec<Vec<u32>>> {
        if self.geodesic_count(x, y) > cap as u128 {
            return None;
        }
        let total = self.dist(x, y);
        let mut out = Vec::new();
        let mut stack = vec![x];
        self.geodesic_dfs(y, total, &mut stack, &mut out);
        Some(out)
    }

    fn geodesic_dfs(&self, y: u32, total: u32, stack: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let v = *stack.last().unwrap();
        if v == y {
            out.push(stack.clone());
            return;
        }
        for &u in self.neighbors(v) {
            if self.dist(stack[0], u) == stack.len() as u32
                && self.dist(stack[0], u) + self.dist(u, y) == total
            {
                stack.push(u);
                self.geodesic_dfs(y, total, stack, out);
                stack.pop();
            }
        }
    }

    /// The lexicographically first geodesic from x to y; deterministic.
    pub fn first_geodesic(&self, x: u32, y: u32) -> Vec<u32> {
        let mut path = vec![x];
        let mut v = x;
        while v != y {
            let next = self
                .neighbors(v)
                .iter()
                .copied()
                .find(|&u| self.dist(x, u) == path.len() as u32 && self.dist(u, y) + 1 == self.dist(v, y))
                .expect("connected graph always has a next geodesic step");
            path.push(next);
            v = next;
        }
        path
    }
}

fn all_pairs(adj: &[Vec<u32>]) -> Result<Vec<Vec<u32>>, HypError> {
    let n = adj.len();
    let mut dist = vec![vec![u32::MAX; n]; n];
    for s in 0..n {
        let row = &mut dist[s];
        row[s] = 0;
        let mut queue = std::collections::VecDeque::from([s as u32]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v as usize] {
                if row[u as usize] == u32::MAX {
                    row[u as usize] = row[v as usize] + 1;
                    queue.push_back(u);
                }
            }
        }
        if row.iter().any(|&d| d == u32::MAX) {
            return Err(HypError::Disconnected);
        }
    }
    Ok(dist)
}

/// max over quadruples of min((x,y)_w, (y,z)_w) - (x,z)_w, doubled; the
/// three choices of middle point are all scanned, so the result is the
/// least constant making every quadruple inequality hold.
fn four_point_doubled(dist: &[Vec<u32>]) -> i64 {
    let n = dist.len();
    let mut worst = 0i64;
    for w in 0..n {
        let dw = &dist[w];
        let p = |a: usize, b: usize| dw[a] as i64 + dw[b] as i64 - dist[a][b] as i64;
        for x in 0..n {
            for y in x + 1..n {
                let pxy = p(x, y);
                for z in y + 1..n {
                    if w == x || w == y || w == z {
                        continue;
                    }
                    let pyz = p(y, z);
                    let pxz = p(x, z);
                    worst = worst
                        .max(pxy.min(pyz) - pxz)
                        .max(pxy.min(pxz) - pyz)
                        .max(pyz.min(pxz) - pxy);
                }
            }
        }
    }
    worst.max(0)
}

/// Four-point constant as an exact rational.
pub fn four_point_delta(g: &HypGraph) -> Ratio<i64> {
    Ratio::new(g.delta2(), 2)
}

/// Unit-edge graph of a finite metric space: vertices are the points,
/// edges join pairs at distance at most one. The embedding must distort
/// distances by at most an additive 1 in both directions, which is
/// checked pair by pair; metrics routing all short hops around long
/// detours fail here rather than corrupting later estimates.
pub fn graphify(m: &FiniteMetricSpace) -> Result<HypGraph, HypError> {
    let n = m.len();
    let mut edges = Vec::new();
    let one = Ratio::from_integer(1);
    for i in 0..n {
        for j in i + 1..n {
            if m.distance(i, j) <= one {
                edges.push((i as u32, j as u32));
            }
        }
    }
    let g = HypGraph::from_edges(n, &edges)?;
    for i in 0..n {
        for j in i + 1..n {
            let hops = Ratio::from_integer(g.dist(i as u32, j as u32) as i64);
            if m.distance(i, j) > hops || hops > m.distance(i, j) + one {
                return Err(HypError::Distorted { u: i as u32, v: j as u32 });
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyplab::GEODESIC_CAP;

    pub fn path_graph(n: usize) -> HypGraph {
        let edges: Vec<_> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        HypGraph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle_graph(n: usize) -> HypGraph {
        let mut edges: Vec<_> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        edges.push((n as u32 - 1, 0));
        HypGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn paths_and_stars_have_zero_delta() {
        assert_eq!(four_point_delta(&path_graph(9)), Ratio::from_integer(0));
        let star = HypGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert_eq!(star.delta2(), 0);
    }

    #[test]
    fn four_cycle_delta_is_one() {
        // w=0, x=1, y=2, z=3: products (1,2)_0 = (2,3)_0 = 1, (1,3)_0 = 0,
        // so the defect reaches 1; no quadruple does worse.
        assert_eq!(four_point_delta(&cycle_graph(4)), Ratio::from_integer(1));
    }

    #[test]
    fn grid_delta_grows_with_size() {
        let grid = |k: usize| {
            let mut edges = Vec::new();
            let id = |r: usize, c: usize| (r * k + c) as u32;
            for r in 0..k {
                for c in 0..k {
                    if c + 1 < k {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < k {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            HypGraph::from_edges(k * k, &edges).unwrap()
        };
        let deltas: Vec<i64> = [2, 3, 4].iter().map(|&k| grid(k).delta2()).collect();
        assert!(deltas.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(deltas[0], 2);
    }

    #[test]
    fn geodesic_enumeration_matches_count() {
        let g = cycle_graph(6);
        assert_eq!(g.geodesic_count(0, 3), 2);
        let all = g.enumerate_geodesics(0, 3, 10).unwrap();
        assert_eq!(all.len(), 2);
        for p in &all {
            assert!(g.is_geodesic(p));
        }
        assert!(g.is_geodesic(&g.first_geodesic(0, 3)));
        let grid22 = HypGraph::from_edges(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        assert_eq!(grid22.geodesic_count(0, 3), 2);
    }

    #[test]
    fn enumeration_respects_the_cap() {
        // Stacked squares: 2^k geodesics between the ends.
        let mut edges = Vec::new();
        let k = 20u32;
        for i in 0..k {
            let base = 3 * i;
            edges.extend([
                (base, base + 1),
                (base, base + 2),
                (base + 1, base + 3),
                (base + 2, base + 3),
            ]);
        }
        let g = HypGraph::from_edges(3 * k as usize + 1, &edges).unwrap();
        assert_eq!(g.geodesic_count(0, 3 * k), 1u128 << k);
        assert!(g.enumerate_geodesics(0, 3 * k, GEODESIC_CAP).is_none());
    }

    #[test]
    fn triangle_and_path_metrics_graphify() {
        let one = Ratio::from_integer(1);
        let zero = Ratio::from_integer(0);
        let m = FiniteMetricSpace::new(vec![
            vec![zero, one, one],
            vec![one, zero, one],
            vec![one, one, zero],
        ])
        .unwrap();
        let g = graphify(&m).unwrap();
        assert_eq!(g.edges().len(), 3);

        let two = Ratio::from_integer(2);
        let m = FiniteMetricSpace::new(vec![
            vec![zero, one, two],
            vec![one, zero, one],
            vec![two, one, zero],
        ])
        .unwrap();
        let g = graphify(&m).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn far_apart_points_disconnect() {
        let zero = Ratio::from_integer(0);
        let five = Ratio::from_integer(5);
        let m = FiniteMetricSpace::new(vec![vec![zero, five], vec![five, zero]]).unwrap();
        assert!(matches!(graphify(&m), Err(HypError::Disconnected)));
    }

    #[test]
    fn detour_metrics_are_rejected_as_distorted() {
        // Shortest-path closure of the weighted graph u-v (3/2) plus the
        // unit chain u-a-w-b-v. Only the chain edges survive the unit
        // cutoff, so hops(u,v) = 4 while d(u,v) = 3/2.
        let q = |n: i64, d: i64| Ratio::new(n, d);
        let entries: [(usize, usize, Ratio<i64>); 10] = [
            (0, 1, q(1, 1)),
            (0, 2, q(2, 1)),
            (0, 3, q(5, 2)),
            (0, 4, q(3, 2)),
            (1, 2, q(1, 1)),
            (1, 3, q(2, 1)),
            (1, 4, q(5, 2)),
            (2, 3, q(1, 1)),
            (2, 4, q(2, 1)),
            (3, 4, q(1, 1)),
        ];
        let mut d = vec![vec![Ratio::from_integer(0); 5]; 5];
        for (i, j, v) in entries {
            d[i][j] = v;
            d[j][i] = v;
        }
        let m = FiniteMetricSpace::new(d).unwrap();
        assert!(matches!(graphify(&m), Err(HypError::Distorted { u: 0, v: 4 })));
    }

    #[test]
    fn invalid_metrics_are_rejected() {
        let zero = Ratio::from_integer(0);
        let one = Ratio::from_integer(1);
        let ten = Ratio::from_integer(10);
        assert!(FiniteMetricSpace::new(vec![
            vec![zero, one, ten],
            vec![one, zero, one],
            vec![ten, one, zero],
        ])
        .is_err());
        assert!(FiniteMetricSpace::new(vec![vec![one]]).is_err());
    }
}
