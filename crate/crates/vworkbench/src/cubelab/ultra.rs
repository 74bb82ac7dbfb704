//! Ultrafilters on the wall system.
//!
//! An ultrafilter picks one halfspace per wall, pairwise intersecting.
//! On a finite median graph each ultrafilter is principal: the chosen
//! halfspaces intersect in exactly one vertex. The enumeration walks
//! walls in order, keeping the running intersection as a bitset and
//! pruning orientations that empty it; each surviving leaf is forced to
//! be a singleton and the leaves are forced to count the vertices.

use crate::cubelab::bits::BitSet;
use crate::cubelab::complex::CubeComplex;
use crate::cubelab::CubeError;

/// Enumeration is exponential in walls in the worst case; past this
/// many, refuse rather than stall.
pub const ULTRA_WALL_CAP: usize = 25;

/// The principal vertex of every consistent orientation, sorted. A
/// validated complex yields each vertex exactly once; any other outcome
/// is reported as an error, not papered over.
pub fn enumerate_ultrafilters(c: &CubeComplex) -> Result<Vec<u32>, CubeError> {
    let m = c.walls().len();
    if m > ULTRA_WALL_CAP {
        return Err(CubeError::Budget {
            what: format!("{m} hyperplanes against the ultrafilter cap {ULTRA_WALL_CAP}"),
        });
    }
    let halves: Vec<[BitSet; 2]> = c
        .walls()
        .iter()
        .map(|w| [w.halfspace(false), w.halfspace(true)])
        .collect();
    let mut principal = Vec::new();
    let mut stack = vec![(0usize, BitSet::full(c.len()))];
    while let Some((k, cur)) = stack.pop() {
        if k == m {
            let count = cur.count();
            if count != 1 {
                return Err(CubeError::Axiom {
                    what: format!("an orientation of all walls cut out {count} vertices"),
                });
            }
            principal.push(cur.first().unwrap() as u32);
            continue;
        }
        for side in [false, true] {
            let next = cur.and(&halves[k][side as usize]);
            if !next.is_empty() {
                stack.push((k + 1, next));
            }
        }
    }
    principal.sort_unstable();
    if principal.len() != c.len()
        || principal.iter().enumerate().any(|(i, &v)| v != i as u32)
    {
        return Err(CubeError::Axiom {
            what: format!(
                "{} ultrafilters against {} vertices",
                principal.len(),
                c.len()
            ),
        });
    }
    Ok(principal)
}
