//! Median complex generators and randomized sweeps.
//!
//! Staircases are downward-closed sets of lattice squares under a
//! monotone column profile; their vertex graphs are median (in two
//! dimensions the coordinatewise median of three points is always
//! dominated by one of them, hence stays in the region). Products of
//! median graphs are median, which yields the three-dimensional
//! instances. Every generator still routes through full validation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cubelab::complex::CubeComplex;
use crate::cubelab::wellsep::DeltaL;
use crate::cubelab::CubeError;

pub fn path_complex(n: usize) -> CubeComplex {
    let edges: Vec<_> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
    CubeComplex::from_edges(n, &edges).expect("paths are median")
}

/// The d-cube: vertices are bit patterns, edges flip one bit.
pub fn cube_q(d: usize) -> CubeComplex {
    assert!(d >= 1 && d <= 6);
    let n = 1usize << d;
    let mut edges = Vec::new();
    for v in 0..n as u32 {
        for b in 0..d {
            let w = v ^ (1 << b);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    CubeComplex::from_edges(n, &edges).expect("hypercubes are median")
}

/// Cartesian product of vertex graphs; products of median graphs are
/// median.
pub fn product(a: &CubeComplex, b: &CubeComplex) -> CubeComplex {
    let (na, nb) = (a.len(), b.len());
    let at = |i: u32, j: u32| i * nb as u32 + j;
    let mut edges = Vec::new();
    for i in 0..na as u32 {
        for j in 0..nb as u32 {
            for &i2 in a.neighbors(i) {
                if i < i2 {
                    edges.push((at(i, j), at(i2, j)));
                }
            }
            for &j2 in b.neighbors(j) {
                if j < j2 {
                    edges.push((at(i, j), at(i, j2)));
                }
            }
        }
    }
    CubeComplex::from_edges(na * nb, &edges).expect("products of median graphs are median")
}

/// Lattice points under a random non-increasing column profile, with
/// grid edges: a random Young-diagram region.
pub fn random_staircase<R: Rng>(rng: &mut R, max_cols: usize, max_height: usize) -> CubeComplex {
    let cols = rng.gen_range(2..=max_cols.max(2));
    let mut heights = Vec::with_capacity(cols);
    let mut h = rng.gen_range(2..=max_height.max(2));
    for _ in 0..cols {
        heights.push(h);
        h = rng.gen_range(1..=h);
    }
    // Vertices: (col, row) with row <= heights[col]; the profile counts
    // squares, so vertices run one past it.
    let mut index = std::collections::HashMap::new();
    let mut points = Vec::new();
    for (c, &hc) in heights.iter().enumerate() {
        for r in 0..=hc {
            index.insert((c, r), points.len() as u32);
            points.push((c, r));
        }
    }
    // One extra column of plain vertices closes the right edge of the
    // last stair column.
    for r in 0..=*heights.last().unwrap() {
        index.insert((cols, r), points.len() as u32);
        points.push((cols, r));
    }
    let mut edges = Vec::new();
    for (&(c, r), &i) in &index {
        for (nc, nr) in [(c + 1, r), (c, r + 1)] {
            if let Some(&j) = index.get(&(nc, nr)) {
                edges.push((i, j));
            }
        }
    }
    CubeComplex::from_edges(points.len(), &edges).expect("staircase regions are median")
}

pub fn random_tree_complex<R: Rng>(rng: &mut R, n: usize) -> CubeComplex {
    let edges: Vec<(u32, u32)> = (1..n as u32)
        .map(|i| (rng.gen_range(0..i), i))
        .collect();
    CubeComplex::from_edges(n, &edges).expect("trees are median")
}

/// Rotating instance family for sweeps: staircases, staircase x path
/// (dimension 3), trees, grids, small cubes, paths.
pub fn random_median_complex<R: Rng>(rng: &mut R, idx: u32) -> CubeComplex {
    match idx % 6 {
        0 => random_staircase(rng, 7, 7),
        1 => {
            let s = random_staircase(rng, 5, 5);
            product(&s, &path_complex(rng.gen_range(2..4)))
        }
        2 => {
            let n = rng.gen_range(10..30);
            random_tree_complex(rng, n)
        }
        3 => {
            let a = rng.gen_range(2..5);
            let b = rng.gen_range(2..7);
            product(&path_complex(a), &path_complex(b))
        }
        4 => cube_q(rng.gen_range(2..4)),
        _ => path_complex(rng.gen_range(6..16)),
    }
}

/// Aggregate of one delta_L law checked across random complexes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeSweep {
    pub check: String,
    pub seed: u64,
    pub complexes: u32,
    pub checks: u64,
    pub violations: u32,
    pub skipped_budget: u32,
    pub worst_slack: i64,
}

impl CubeSweep {
    fn new(check: &str, seed: u64) -> Self {
        CubeSweep {
            check: check.to_string(),
            seed,
            complexes: 0,
            checks: 0,
            violations: 0,
            skipped_budget: 0,
            worst_slack: i64::MIN,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checks > 0
    }
}

fn sweep_delta_law(
    check: &str,
    seed: u64,
    trials: u32,
    law: impl Fn(&DeltaL, &[Vec<u32>]) -> (u64, i64, bool),
) -> CubeSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CubeSweep::new(check, seed);
    for idx in 0..trials {
        let c = random_median_complex(&mut rng, idx);
        let l = idx % 3;
        rep.complexes += 1;
        let dl = match DeltaL::new(&c, l) {
            Ok(dl) => dl,
            Err(CubeError::Budget { .. }) => {
                rep.skipped_budget += 1;
                continue;
            }
            Err(e) => panic!("validated complex rejected: {e}"),
        };
        let d = match dl.metric_matrix() {
            Ok(d) => d,
            Err(_) => {
                // A failed metric axiom is itself a violation of the law
                // under test's standing hypotheses.
                rep.violations += 1;
                continue;
            }
        };
        let (count, worst, holds) = law(&dl, &d);
        rep.checks += count;
        rep.worst_slack = rep.worst_slack.max(worst);
        if !holds {
            rep.violations += 1;
        }
    }
    rep
}

/// delta_L changes by at most 2(L+3) when split at an interval point.
pub fn sweep_geodesic_additivity(seed: u64, trials: u32) -> CubeSweep {
    sweep_delta_law("interval splits of delta_L", seed, trials, |dl, d| {
        let r = dl.geodesic_additivity(d);
        (r.triples, r.worst_upper.max(r.worst_lower), r.holds)
    })
}

/// The delta_L Gromov product tracks the distance to the median.
pub fn sweep_median_product(seed: u64, trials: u32) -> CubeSweep {
    sweep_delta_law("median point of delta_L products", seed, trials, |dl, d| {
        let r = dl.median_product(d);
        (r.triples, r.worst, r.holds)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_families_validate_and_vary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for idx in 0..12 {
            let c = random_median_complex(&mut rng, idx);
            assert!(c.len() >= 2);
            assert!(!c.walls().is_empty());
        }
    }

    #[test]
    fn staircase_shapes_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..6 {
            let s = random_staircase(&mut rng, 6, 6);
            // Degree in a 2-dimensional complex never exceeds 4.
            for v in 0..s.len() as u32 {
                assert!(s.neighbors(v).len() <= 4);
            }
        }
    }

    #[test]
    fn three_dimensional_products_have_cubes() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s = random_staircase(&mut rng, 4, 4);
        let p = product(&s, &path_complex(3));
        assert_eq!(p.len(), s.len() * 3);
        // Some vertex sees three independent directions.
        assert!((0..p.len() as u32).any(|v| p.neighbors(v).len() >= 3));
    }

    #[test]
    fn sweeps_pass_and_are_deterministic() {
        let a = sweep_geodesic_additivity(100, 8);
        assert!(a.passed(), "{a:?}");
        assert_eq!(a, sweep_geodesic_additivity(100, 8));
        let m = sweep_median_product(101, 8);
        assert!(m.passed(), "{m:?}");
        assert_eq!(m.complexes, 8);
    }
}
