//! Dyadic cubes and Whitney decompositions driven by a distance oracle.

use crate::error::{Error, Result};

/// The cube `Π_j [l_j 2^k, (l_j + 1) 2^k]` with integer corner `l` and
/// level `k`. All geometry below is exact: corners are integers and side
/// lengths are powers of two, so containment and disjointness are integer
/// arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCube {
    pub level: i32,
    pub corner: Vec<i64>,
}

impl DyadicCube {
    pub fn new(level: i32, corner: Vec<i64>) -> Self {
        DyadicCube { level, corner }
    }

    pub fn dim(&self) -> usize {
        self.corner.len()
    }

    /// Side length `2^level`.
    pub fn side(&self) -> f64 {
        (self.level as f64).exp2()
    }

    pub fn lo(&self, axis: usize) -> f64 {
        self.corner[axis] as f64 * self.side()
    }

    pub fn hi(&self, axis: usize) -> f64 {
        (self.corner[axis] + 1) as f64 * self.side()
    }

    pub fn center(&self) -> Vec<f64> {
        self.corner
            .iter()
            .map(|&l| (l as f64 + 0.5) * self.side())
            .collect()
    }

    pub fn as_box(&self) -> Vec<(f64, f64)> {
        (0..self.dim()).map(|k| (self.lo(k), self.hi(k))).collect()
    }

    pub fn parent(&self) -> DyadicCube {
        DyadicCube {
            level: self.level + 1,
            corner: self.corner.iter().map(|&l| l.div_euclid(2)).collect(),
        }
    }

    /// The `2^dim` children one level down.
    pub fn children(&self) -> Vec<DyadicCube> {
        let d = self.dim();
        (0..(1usize << d))
            .map(|mask| {
                let corner = self
                    .corner
                    .iter()
                    .enumerate()
                    .map(|(k, &l)| 2 * l + ((mask >> k) & 1) as i64)
                    .collect();
                DyadicCube {
                    level: self.level - 1,
                    corner,
                }
            })
            .collect()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        (0..self.dim()).all(|k| x[k] >= self.lo(k) && x[k] <= self.hi(k))
    }

    /// Strict interior membership.
    pub fn interior_contains(&self, x: &[f64]) -> bool {
        (0..self.dim()).all(|k| x[k] > self.lo(k) && x[k] < self.hi(k))
    }

    /// True if `self ⊆ other` (integer arithmetic, exact).
    pub fn contained_in(&self, other: &DyadicCube) -> bool {
        if other.level < self.level || self.dim() != other.dim() {
            return false;
        }
        let shift = (other.level - self.level) as u32;
        self.corner
            .iter()
            .zip(&other.corner)
            .all(|(&a, &b)| a.div_euclid(1i64 << shift) == b)
    }

    /// Exact interior-disjointness: two dyadic cubes either nest or have
    /// disjoint interiors.
    pub fn interiors_disjoint(&self, other: &DyadicCube) -> bool {
        !(self.contained_in(other) || other.contained_in(self))
    }

    /// Euclidean distance between two cubes as sets.
    pub fn distance_to(&self, other: &DyadicCube) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.dim() {
            let gap = (self.lo(k) - other.hi(k))
                .max(other.lo(k) - self.hi(k))
                .max(0.0);
            acc += gap * gap;
        }
        acc.sqrt()
    }
}

/// Pair of equal-level factors of a product cube in `R^{2m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubePair {
    pub omega1: DyadicCube,
    pub omega2: DyadicCube,
}

impl CubePair {
    /// Split a cube in `R^{2m}` into its first/second factor cubes.
    pub fn from_product(cube: &DyadicCube) -> Result<Self> {
        let d = cube.dim();
        if d % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                got: d,
            });
        }
        let m = d / 2;
        Ok(CubePair {
            omega1: DyadicCube::new(cube.level, cube.corner[..m].to_vec()),
            omega2: DyadicCube::new(cube.level, cube.corner[m..].to_vec()),
        })
    }

    pub fn side(&self) -> f64 {
        self.omega1.side()
    }

    /// Distance between the two factor cubes.
    pub fn separation(&self) -> f64 {
        self.omega1.distance_to(&self.omega2)
    }
}

/// Acceptance predicate factor: a cube is kept when the oracle distance at
/// its center is at least `ACCEPT_FACTOR` times its side. With halfwidth
/// corrections this pins the emitted cubes inside the two-sided distance
/// band `[4 l, 50 l]` for dimensions up to 8.
pub const ACCEPT_FACTOR: f64 = 6.0;

/// Result of a truncated Whitney decomposition.
#[derive(Debug, Clone)]
pub struct WhitneyDecomposition {
    /// Emitted cubes, pairwise interior-disjoint, sorted by level then
    /// corner.
    pub cubes: Vec<DyadicCube>,
    /// Truncation level: cells at this level are never subdivided.
    pub k_min: i32,
    /// Bottom-level cells that stayed too close to the set; together with
    /// `cubes` they partition the box exactly.
    pub uncovered: Vec<DyadicCube>,
    /// Every uncovered point `x` satisfies
    /// `d(x, S) < margin_constant * 2^k_min`.
    pub margin_constant: f64,
}

/// Whitney decomposition of `box ∖ S` from a 1-Lipschitz distance oracle.
///
/// A cell is kept when `d(center) >= 6 * side` and its parent is not;
/// cells that fail are subdivided down to `k_min`. Kept cubes then satisfy
/// `4 l(Ω) <= d(Ω, S) <= 50 l(Ω)` whenever the parent chain stays inside
/// the box, the emitted set has pairwise disjoint interiors, and the union
/// of emitted cubes plus `uncovered` cells tiles the box exactly.
pub fn whitney_decompose<F>(
    oracle: F,
    boxes: &[(f64, f64)],
    k_min: i32,
) -> Result<WhitneyDecomposition>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = boxes.len();
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    for (k, &(lo, hi)) in boxes.iter().enumerate() {
        if !(lo < hi) {
            return Err(Error::DegenerateBox { axis: k, lo, hi });
        }
    }
    let k_root = alignment_level(boxes, k_min)?;
    spot_check_lipschitz(&oracle, boxes)?;

    // root cells of level k_root tiling the box
    let side = (k_root as f64).exp2();
    let mut level_cells: Vec<DyadicCube> = Vec::new();
    let ranges: Vec<(i64, i64)> = boxes
        .iter()
        .map(|&(lo, hi)| ((lo / side).round() as i64, (hi / side).round() as i64))
        .collect();
    let mut stack: Vec<Vec<i64>> = vec![vec![]];
    for &(lo, hi) in &ranges {
        let mut next = Vec::new();
        for partial in &stack {
            for c in lo..hi {
                let mut p: Vec<i64> = Vec::with_capacity(dim);
                p.extend_from_slice(partial);
                p.push(c);
                next.push(p);
            }
        }
        stack = next;
    }
    for corner in stack {
        level_cells.push(DyadicCube::new(k_root, corner));
    }

    let accepts =
        |cube: &DyadicCube| -> bool { oracle(&cube.center()) >= ACCEPT_FACTOR * cube.side() };

    let mut emitted: Vec<DyadicCube> = Vec::new();
    let mut uncovered: Vec<DyadicCube> = Vec::new();
    let mut current = level_cells;
    while !current.is_empty() {
        let verdicts = crate::exec::par_map_indexed(current.len(), |i| accepts(&current[i]));
        let mut next = Vec::new();
        for (cube, ok) in current.into_iter().zip(verdicts) {
            if ok {
                emitted.push(cube);
            } else if cube.level > k_min {
                next.extend(cube.children());
            } else {
                uncovered.push(cube);
            }
        }
        current = next;
    }
    emitted.sort();
    uncovered.sort();
    Ok(WhitneyDecomposition {
        cubes: emitted,
        k_min,
        uncovered,
        margin_constant: ACCEPT_FACTOR + 0.5 * (dim as f64).sqrt(),
    })
}

/// Diagonal decomposition of `[-1,1]^{2m} ∖ {(ξ,ξ)}` emitted as factor
/// pairs; the oracle is the exact diagonal distance `|ξ1 - ξ2| / sqrt 2`.
pub fn diagonal_decompose(m: usize, k_min: i32) -> Result<(WhitneyDecomposition, Vec<CubePair>)> {
    let boxes = vec![(-1.0, 1.0); 2 * m];
    let oracle = move |x: &[f64]| -> f64 {
        let mut acc = 0.0;
        for k in 0..m {
            let d = x[k] - x[m + k];
            acc += d * d;
        }
        (acc / 2.0).sqrt()
    };
    let dec = whitney_decompose(oracle, &boxes, k_min)?;
    let pairs = dec
        .cubes
        .iter()
        .map(CubePair::from_product)
        .collect::<Result<Vec<_>>>()?;
    Ok((dec, pairs))
}

/// Largest dyadic level at which every box bound is an integer multiple
/// of the cell side, capped by the box width.
fn alignment_level(boxes: &[(f64, f64)], k_min: i32) -> Result<i32> {
    let min_width = boxes
        .iter()
        .map(|&(lo, hi)| hi - lo)
        .fold(f64::INFINITY, f64::min);
    let mut k = min_width.log2().floor() as i32;
    while k >= k_min {
        let side = (k as f64).exp2();
        let aligned = boxes.iter().all(|&(lo, hi)| {
            (lo / side - (lo / side).round()).abs() < 1e-9
                && (hi / side - (hi / side).round()).abs() < 1e-9
        });
        if aligned {
            return Ok(k);
        }
        k -= 1;
    }
    Err(Error::NotDyadic { level: k_min })
}

fn spot_check_lipschitz<F>(oracle: &F, boxes: &[(f64, f64)]) -> Result<()>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = boxes.len();
    let mut prev: Option<(Vec<f64>, f64)> = None;
    for t in 0..32 {
        let x: Vec<f64> = (0..dim)
            .map(|k| {
                let (lo, hi) = boxes[k];
                lo + (hi - lo) * crate::rng::counter_uniform(0x11a5, &[t, k as u64])
            })
            .collect();
        let d = oracle(&x);
        if !d.is_finite() || d < 0.0 {
            return Err(Error::NotLipschitz { jump: d, dist: 0.0 });
        }
        if let Some((px, pd)) = prev {
            let dist: f64 = px
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let jump = (pd - d).abs();
            if jump > dist * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::NotLipschitz { jump, dist });
            }
        }
        prev = Some((x, d));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_geometry_is_exact() {
        let c = DyadicCube::new(-2, vec![3, -5]);
        assert_eq!(c.side(), 0.25);
        assert_eq!(c.lo(0), 0.75);
        assert_eq!(c.hi(0), 1.0);
        assert_eq!(c.lo(1), -1.25);
        assert_eq!(c.center(), vec![0.875, -1.125]);
        assert_eq!(c.parent(), DyadicCube::new(-1, vec![1, -3]));
        let kids = c.children();
        assert_eq!(kids.len(), 4);
        for kid in &kids {
            assert!(kid.contained_in(&c));
            assert!(!c.contained_in(kid));
        }
    }

    #[test]
    fn interior_disjointness_integer_arithmetic() {
        let a = DyadicCube::new(0, vec![0]);
        let b = DyadicCube::new(0, vec![1]);
        assert!(a.interiors_disjoint(&b));
        let child = DyadicCube::new(-1, vec![1]);
        assert!(!a.interiors_disjoint(&child));
        let negside = DyadicCube::new(-1, vec![-1]);
        assert!(a.interiors_disjoint(&negside));
        assert!(negside.contained_in(&DyadicCube::new(0, vec![-1])));
    }

    #[test]
    fn point_ladder_bounds_hold() {
        let dec = whitney_decompose(|x| x[0].abs(), &[(-1.0, 1.0)], -10).unwrap();
        assert!(!dec.cubes.is_empty());
        let oracle = |x: &[f64]| x[0].abs();
        for cube in &dec.cubes {
            let l = cube.side();
            // certified bounds from a fine net plus the Lipschitz property
            let net = 64;
            let mut dmin = f64::INFINITY;
            for j in 0..net {
                let x = cube.lo(0) + (j as f64 + 0.5) / net as f64 * l;
                dmin = dmin.min(oracle(&[x]));
            }
            let radius = 0.5 * l / net as f64;
            assert!(dmin - radius >= 4.0 * l, "lower bound fails: {dmin} vs {l}");
            assert!(dmin <= 50.0 * l, "upper bound fails: {dmin} vs {l}");
        }
        // pairwise disjoint interiors
        for i in 0..dec.cubes.len() {
            for j in i + 1..dec.cubes.len() {
                assert!(dec.cubes[i].interiors_disjoint(&dec.cubes[j]));
            }
        }
    }

    #[test]
    fn set_covering_box_yields_empty() {
        let dec = whitney_decompose(|_| 0.0, &[(-1.0, 1.0), (-1.0, 1.0)], -4).unwrap();
        assert!(dec.cubes.is_empty());
        assert!(!dec.uncovered.is_empty());
    }

    #[test]
    fn exact_tiling_of_box() {
        let dec = whitney_decompose(|x| x[0].abs().min(1.0), &[(-1.0, 1.0)], -6).unwrap();
        // every probe point is in exactly one emitted cube or uncovered cell
        for t in 0..2000 {
            let x = -1.0 + 2.0 * (t as f64 + 0.5) / 2000.0;
            let hits = dec
                .cubes
                .iter()
                .chain(&dec.uncovered)
                .filter(|c| c.interior_contains(&[x]))
                .count();
            // points on cube faces may land in zero interiors
            assert!(hits <= 1, "x = {x} covered {hits} times");
            let on_face = dec
                .cubes
                .iter()
                .chain(&dec.uncovered)
                .any(|c| c.contains_point(&[x]) && !c.interior_contains(&[x]));
            assert!(hits == 1 || on_face, "x = {x} not covered");
        }
        // uncovered cells are close to the set
        for cell in &dec.uncovered {
            let d = cell.center()[0].abs();
            assert!(d < ACCEPT_FACTOR * cell.side());
        }
    }

    #[test]
    fn diagonal_pairs_satisfy_separation_band() {
        let (dec, pairs) = diagonal_decompose(1, -8).unwrap();
        assert!(!pairs.is_empty());
        for pair in &pairs {
            let l = pair.side();
            let d = pair.separation();
            assert!(d >= 4.0 * l, "separation {d} below 4l = {}", 4.0 * l);
            assert!(d <= 100.0 * l, "separation {d} above 100l");
        }
        for i in 0..dec.cubes.len() {
            for j in i + 1..dec.cubes.len() {
                assert!(dec.cubes[i].interiors_disjoint(&dec.cubes[j]));
            }
        }
    }

    #[test]
    fn non_lipschitz_oracle_detected() {
        let r = whitney_decompose(|x| 10.0 * x[0].abs(), &[(-1.0, 1.0)], -4);
        assert!(matches!(r, Err(Error::NotLipschitz { .. })));
    }

    #[test]
    fn unalignable_box_rejected() {
        let r = whitney_decompose(|x| x[0].abs(), &[(-0.3, 0.77)], -2);
        assert!(matches!(r, Err(Error::NotDyadic { .. })));
    }
}
