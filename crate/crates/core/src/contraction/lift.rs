//! The contraction of `W_3` restricted to the arcs of a cube's basis pairs
//! agrees with the contraction of the Serre tree.

use serde::Serialize;

use super::w2::{orient_pair, PairOrientation};
use crate::complex::soule::{CellStore, Cube};
use crate::complex::Cell;
use crate::error::Result;

/// The three basis pairs of a cube chart with the bits of their difference
/// and sum hexagons.
pub const PAIRS: [((usize, usize), usize, usize); 3] = [((1, 2), 0, 1), ((0, 2), 2, 3), ((0, 1), 4, 5)];

#[derive(Clone, Debug, Serialize)]
pub struct LiftMismatch {
    pub cube: Cell<3>,
    pub pair: (usize, usize),
    pub tree: PairOrientation,
    pub minimal_hexagons: Vec<usize>,
}

/// What the minimal hexagons of a cube say about the pair `(i, j)`.
pub fn hexagon_orientation(bits: &[usize], diff: usize, sum: usize) -> Option<PairOrientation> {
    match (bits.contains(&diff), bits.contains(&sum)) {
        (true, false) => Some(PairOrientation::Difference),
        (false, true) => Some(PairOrientation::Sum),
        (false, false) => Some(PairOrientation::Fundamental),
        (true, true) => None,
    }
}

/// Pairs of `cube` whose tree orientation disagrees with its minimal set.
pub fn lift_mismatches(store: &CellStore, cube: &Cell<3>) -> Result<Vec<LiftMismatch>> {
    let chart = Cube::from_cell(cube)?;
    let bits = store.xi_set(cube)?.face_bits();
    let b = chart.basis();
    let mut out = Vec::new();
    for ((i, j), diff, sum) in PAIRS {
        let tree = orient_pair(&b[i], &b[j])?;
        if hexagon_orientation(&bits, diff, sum) != Some(tree) {
            out.push(LiftMismatch { cube: cube.clone(), pair: (i, j), tree, minimal_hexagons: bits.clone() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::distance::distance_fixpoint_with;

    #[test]
    fn lifts_agree_near_the_fundamental_cube() {
        let store = CellStore::new();
        let rec = distance_fixpoint_with(1, &store).unwrap();
        let cubes = rec.tops_with(|d| d <= 1);
        assert!(cubes.len() > 1);
        for c in cubes {
            assert!(lift_mismatches(&store, &c).unwrap().is_empty(), "{c:?}");
        }
    }
}
