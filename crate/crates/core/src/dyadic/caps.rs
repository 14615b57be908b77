//! Parabolic caps, difference-set separation, separated interval
//! partitions, and Fourier projection onto caps.

use rand::Rng;

use crate::error::{Error, Result};
use crate::spectral::{transform, transform_onto, Direction, SampledField};
use crate::Complex64;

/// The cap `{(ξ, ξ² + t) : ξ ∈ [a, a+δ], |t| <= σ}` around the parabola.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicCap {
    pub lo: f64,
    pub hi: f64,
    pub thickness: f64,
}

impl ParabolicCap {
    pub fn new(lo: f64, hi: f64, thickness: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::DegenerateBox { axis: 0, lo, hi });
        }
        if !(thickness > 0.0) {
            return Err(Error::Unresolvable {
                reason: format!("cap thickness must be positive, got {thickness}"),
            });
        }
        Ok(ParabolicCap { lo, hi, thickness })
    }

    /// Standard cap over `[a, a+δ]` of thickness `δ²`.
    pub fn standard(a: f64, delta: f64) -> Result<Self> {
        ParabolicCap::new(a, a + delta, delta * delta)
    }

    pub fn delta(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Geometric membership (closed conditions).
    pub fn contains(&self, xi: f64, eta: f64) -> bool {
        xi >= self.lo && xi <= self.hi && (eta - xi * xi).abs() <= self.thickness
    }

    /// Frequency-mask membership: half-open in the base coordinate so a
    /// partition of an interval into caps tiles its bins exactly once.
    pub fn mask_contains(&self, xi: f64, eta: f64) -> bool {
        xi >= self.lo && xi < self.hi && (eta - xi * xi).abs() <= self.thickness
    }

    /// Radius of the smallest ball around `(c, c²)`, `c` the midpoint,
    /// containing the cap; maximized over corners and a parameter scan.
    pub fn bounding_radius(&self) -> f64 {
        let c = self.midpoint();
        let c2 = c * c;
        let mut worst: f64 = 0.0;
        let scan = 128;
        for i in 0..=scan {
            let xi = self.lo + (self.hi - self.lo) * i as f64 / scan as f64;
            for sign in [-1.0, 1.0] {
                let eta = xi * xi + sign * self.thickness;
                let d = ((xi - c).powi(2) + (eta - c2).powi(2)).sqrt();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// Difference set `N_I(σ) - N_{I'}(σ)` of two equal-thickness caps,
/// described exactly: for each admissible base difference
/// `v = ξ - ξ' ∈ [a - b', b - a']` the second coordinates form the
/// interval `v·(2ξ - v)` over `ξ ∈ [max(a, a'+v), min(b, b'+v)]`,
/// thickened by `2σ`.
#[derive(Debug, Clone)]
struct DiffSet {
    a: f64,
    b: f64,
    ap: f64,
    bp: f64,
    sigma: f64,
}

impl DiffSet {
    fn v_range(&self) -> (f64, f64) {
        (self.a - self.bp, self.b - self.ap)
    }

    /// Range of the second coordinate at base difference `v`.
    fn y_range(&self, v: f64) -> Option<(f64, f64)> {
        let alpha = self.a.max(self.ap + v);
        let beta = self.b.min(self.bp + v);
        if alpha > beta {
            return None;
        }
        let y1 = v * (2.0 * alpha - v);
        let y2 = v * (2.0 * beta - v);
        let (lo, hi) = if y1 <= y2 { (y1, y2) } else { (y2, y1) };
        Some((lo - 2.0 * self.sigma, hi + 2.0 * self.sigma))
    }

    fn contains(&self, v: f64, y: f64) -> bool {
        match self.y_range(v) {
            Some((lo, hi)) => y >= lo && y <= hi,
            None => false,
        }
    }
}

/// How the interval configuration matches the separation hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HypothesisShape {
    /// First pair coincides and the second pair is `Nδ`-separated.
    pub fixed_first: bool,
    /// Both pairs are `Nδ`-separated.
    pub both_separated: bool,
    /// At least one pair is `Nδ`-separated.
    pub max_separated: bool,
}

/// Outcome of the cap difference-set disjointness test.
#[derive(Debug, Clone)]
pub struct CapSeparation {
    /// Analytic verdict: the two difference sets are disjoint.
    pub disjoint: bool,
    /// On intersection, a point lying in both difference sets.
    pub witness: Option<(f64, f64)>,
    /// Signed gap between the sets along the base sweep: positive means
    /// separated, negative means overlapping by that depth.
    pub gap: f64,
    /// Which separation hypotheses the input satisfies.
    pub hypothesis: HypothesisShape,
    /// Monte Carlo cross-validation found a point of one set inside the
    /// other.
    pub mc_witness: Option<(f64, f64)>,
    /// False exactly when the analytic verdict says disjoint but sampling
    /// found a common point.
    pub mc_agrees: bool,
}

fn interval_distance(i: (f64, f64), j: (f64, f64)) -> f64 {
    (i.0 - j.1).max(j.0 - i.1).max(0.0)
}

/// Disjointness test for `(N_{I1}(δ²) - N_{I1'}(δ²))` against
/// `(N_{I2}(δ²) - N_{I2'}(δ²))`.
///
/// The analytic test minimizes the vertical gap between the two
/// difference-set slabs over the shared base range; the functions are
/// piecewise quadratic in the base difference, so a breakpoint scan plus
/// local refinement resolves the sign. The verdict is cross-validated by
/// sampling `samples` random points of each set and testing membership in
/// the other.
#[allow(clippy::too_many_arguments)]
pub fn cap_separation_test(
    i1: (f64, f64),
    i1p: (f64, f64),
    i2: (f64, f64),
    i2p: (f64, f64),
    delta: f64,
    n_sep: f64,
    samples: usize,
    seed: u64,
) -> Result<CapSeparation> {
    if !(delta > 0.0) || delta > 1.0 / 16.0 {
        return Err(Error::Unresolvable {
            reason: format!("cap length must lie in (0, 1/16], got {delta}"),
        });
    }
    for iv in [i1, i1p, i2, i2p] {
        let len = iv.1 - iv.0;
        if (len - delta).abs() > 1e-12 {
            return Err(Error::IntervalLength {
                expected: delta,
                got: len,
            });
        }
    }
    let sigma = delta * delta;
    let d1 = DiffSet {
        a: i1.0,
        b: i1.1,
        ap: i1p.0,
        bp: i1p.1,
        sigma,
    };
    let d2 = DiffSet {
        a: i2.0,
        b: i2.1,
        ap: i2p.0,
        bp: i2p.1,
        sigma,
    };

    let hypothesis = HypothesisShape {
        fixed_first: i1 == i1p && interval_distance(i2, i2p) >= n_sep * delta,
        both_separated: interval_distance(i1, i1p) >= n_sep * delta
            && interval_distance(i2, i2p) >= n_sep * delta,
        max_separated: interval_distance(i1, i1p)
            .max(interval_distance(i2, i2p))
            >= n_sep * delta,
    };

    // vertical gap between the slabs at base difference v; negative on
    // overlap
    let gap_at = |v: f64| -> f64 {
        match (d1.y_range(v), d2.y_range(v)) {
            (Some((l1, h1)), Some((l2, h2))) => l1.max(l2) - h1.min(h2),
            _ => f64::INFINITY,
        }
    };

    let (v1lo, v1hi) = d1.v_range();
    let (v2lo, v2hi) = d2.v_range();
    let vlo = v1lo.max(v2lo);
    let vhi = v1hi.min(v2hi);
    let mut best = (f64::INFINITY, f64::NAN);
    if vlo <= vhi {
        // breakpoints of the piecewise-quadratic pieces
        let mut knots = vec![
            vlo,
            vhi,
            0.0,
            i1.0 - i1p.0,
            i1.1 - i1p.1,
            i2.0 - i2p.0,
            i2.1 - i2p.1,
        ];
        knots.retain(|&v| (vlo..=vhi).contains(&v));
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        // dense scan between knots, then golden-section refinement
        let mut candidates: Vec<f64> = Vec::new();
        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let steps = 256;
            for s in 0..=steps {
                candidates.push(lo + (hi - lo) * s as f64 / steps as f64);
            }
        }
        if knots.len() == 1 {
            candidates.push(knots[0]);
        }
        for &v in &candidates {
            let g = gap_at(v);
            if g < best.0 {
                best = (g, v);
            }
        }
        // refine around the best candidate
        let span = (vhi - vlo).max(1e-12) / 256.0;
        let (mut lo, mut hi) = ((best.1 - span).max(vlo), (best.1 + span).min(vhi));
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if gap_at(m1) <= gap_at(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let v = 0.5 * (lo + hi);
        let g = gap_at(v);
        if g < best.0 {
            best = (g, v);
        }
    }
    let disjoint = !(best.0 <= 0.0);

    let witness = if disjoint {
        None
    } else {
        let v = best.1;
        // prefer the origin when both sets contain it
        if d1.contains(0.0, 0.0) && d2.contains(0.0, 0.0) {
            Some((0.0, 0.0))
        } else {
            let (l1, h1) = d1.y_range(v).expect("overlap implies admissible v");
            let (l2, h2) = d2.y_range(v).expect("overlap implies admissible v");
            Some((v, 0.5 * (l1.max(l2) + h1.min(h2))))
        }
    };

    // Monte Carlo cross-validation
    let mut rng = crate::rng::stream_rng(seed, &[0x5ca9]);
    let mut mc_witness = None;
    for _ in 0..samples {
        let (src, dst) = if rng.gen_bool(0.5) {
            (&d1, &d2)
        } else {
            (&d2, &d1)
        };
        let xi = rng.gen_range(src.a..=src.b);
        let xip = rng.gen_range(src.ap..=src.bp);
        let t = rng.gen_range(-sigma..=sigma);
        let tp = rng.gen_range(-sigma..=sigma);
        let v = xi - xip;
        let y = xi * xi + t - xip * xip - tp;
        if dst.contains(v, y) {
            mc_witness = Some((v, y));
            break;
        }
    }
    let mc_agrees = !(disjoint && mc_witness.is_some());
    Ok(CapSeparation {
        disjoint,
        witness,
        gap: best.0,
        hypothesis,
        mc_witness,
        mc_agrees,
    })
}

/// Partition of an interval into length-`δ` pieces together with
/// `n_sep + 1` families whose members are pairwise `n_sep·δ`-separated.
#[derive(Debug, Clone)]
pub struct IntervalPartition {
    pub intervals: Vec<(f64, f64)>,
    /// `families[k]` lists indices into `intervals`; family `k` collects
    /// the pieces with index ≡ k (mod n_sep + 1).
    pub families: Vec<Vec<usize>>,
    /// True when the interval length was not a multiple of `δ` and the
    /// last piece was shortened.
    pub shortened_last: bool,
}

pub fn partition_interval(
    j: (f64, f64),
    delta: f64,
    n_sep: usize,
) -> Result<IntervalPartition> {
    let len = j.1 - j.0;
    if !(len > 0.0) {
        return Err(Error::DegenerateBox {
            axis: 0,
            lo: j.0,
            hi: j.1,
        });
    }
    if !(delta > 0.0) || delta >= len {
        return Err(Error::BadPartitionStep { delta, len });
    }
    let exact = len / delta;
    let mut count = exact.round();
    let shortened_last = if (exact - count).abs() < 1e-9 {
        false
    } else {
        count = exact.ceil();
        true
    };
    let count = count as usize;
    let mut intervals = Vec::with_capacity(count);
    for i in 0..count {
        let lo = j.0 + i as f64 * delta;
        let hi = if i + 1 == count { j.1 } else { lo + delta };
        intervals.push((lo, hi));
    }
    let nf = n_sep + 1;
    let mut families = vec![Vec::new(); nf];
    for i in 0..count {
        families[i % nf].push(i);
    }
    Ok(IntervalPartition {
        intervals,
        families,
        shortened_last,
    })
}

/// Fourier projection of a 2-D field onto a parabolic cap: forward
/// transform, zero outside the cap's frequency mask, inverse transform
/// back onto the original grid. Mask membership is decided by bin
/// centers, half-open in the base coordinate.
pub fn cap_project(field: &SampledField, cap: &ParabolicCap) -> Result<SampledField> {
    if field.grid().dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: field.grid().dim(),
        });
    }
    let recip = field.grid().reciprocal();
    let fx = (recip.axis(0).lo, recip.axis(0).hi);
    let fy = (recip.axis(1).lo, recip.axis(1).hi);
    let eta_min = (0.0f64).min(cap.lo * cap.lo).min(cap.hi * cap.hi) - cap.thickness;
    let eta_max = cap.lo.powi(2).max(cap.hi.powi(2)) + cap.thickness;
    if cap.lo < fx.0 || cap.hi > fx.1 || eta_min < fy.0 || eta_max > fy.1 {
        return Err(Error::CapOutsideBox);
    }
    let mut spectrum = transform(field, Direction::Forward)?;
    let grid = spectrum.grid().clone();
    for (i, v) in spectrum.values_mut().iter_mut().enumerate() {
        let p = grid.point_at(i);
        if !cap.mask_contains(p[0], p[1]) {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    transform_onto(&spectrum, Direction::Inverse, field.grid())
}

/// Spectrum bins (flat indices of the reciprocal grid) inside a cap mask.
pub fn cap_mask_indices(field_grid: &crate::spectral::Grid, cap: &ParabolicCap) -> Vec<usize> {
    let recip = field_grid.reciprocal();
    (0..recip.len())
        .filter(|&i| {
            let p = recip.point_at(i);
            cap.mask_contains(p[0], p[1])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{lp_norm, Grid};

    #[test]
    fn cap_contained_in_two_delta_ball() {
        for a in [-0.9f64, -0.3, 0.0, 0.5, 0.93] {
            let cap = ParabolicCap::standard(a, 1.0 / 16.0).unwrap();
            assert!(
                cap.bounding_radius() <= 2.0 * cap.delta(),
                "radius {} at a = {a}",
                cap.bounding_radius()
            );
        }
    }

    #[test]
    fn far_pairs_are_disjoint() {
        // second pair separated by >= N delta, first coincident
        let r = cap_separation_test(
            (0.0, 0.01),
            (0.0, 0.01),
            (0.5, 0.51),
            (0.8, 0.81),
            0.01,
            10.0,
            100_000,
            7,
        )
        .unwrap();
        assert!(r.disjoint);
        assert!(r.hypothesis.fixed_first);
        assert!(r.mc_agrees);
        assert!(r.mc_witness.is_none());
    }

    #[test]
    fn identical_intervals_intersect_at_origin() {
        let iv = (0.2, 0.2 + 1.0 / 32.0);
        let r = cap_separation_test(iv, iv, iv, iv, 1.0 / 32.0, 10.0, 10_000, 3).unwrap();
        assert!(!r.disjoint);
        assert_eq!(r.witness, Some((0.0, 0.0)));
        assert!(r.mc_agrees);
    }

    #[test]
    fn four_way_separated_disjoint() {
        let d = 0.01;
        let r = cap_separation_test(
            (-0.8, -0.8 + d),
            (-0.4, -0.4 + d),
            (0.3, 0.3 + d),
            (0.65, 0.65 + d),
            d,
            10.0,
            100_000,
            11,
        )
        .unwrap();
        assert!(r.hypothesis.both_separated);
        assert!(r.disjoint);
        assert!(r.mc_agrees);
    }

    #[test]
    fn rejects_wrong_lengths() {
        let r = cap_separation_test(
            (0.0, 0.02),
            (0.0, 0.01),
            (0.5, 0.51),
            (0.8, 0.81),
            0.01,
            10.0,
            10,
            0,
        );
        assert!(matches!(r, Err(Error::IntervalLength { .. })));
    }

    #[test]
    fn partition_unit_interval() {
        let p = partition_interval((0.0, 1.0), 0.125, 3).unwrap();
        assert_eq!(p.intervals.len(), 8);
        assert!(!p.shortened_last);
        assert_eq!(p.families.len(), 4);
        // families are pairwise separated by at least 3 * 0.125
        for fam in &p.families {
            for (i, &a) in fam.iter().enumerate() {
                for &b in fam.iter().skip(i + 1) {
                    let d = interval_distance(p.intervals[a], p.intervals[b]);
                    assert!(d >= 3.0 * 0.125 - 1e-12, "family gap {d}");
                }
            }
        }
    }

    #[test]
    fn partition_rejects_large_step() {
        assert!(matches!(
            partition_interval((0.0, 1.0), 1.5, 2),
            Err(Error::BadPartitionStep { .. })
        ));
    }

    #[test]
    fn shortened_tail_flagged() {
        let p = partition_interval((0.0, 1.0), 0.3, 1).unwrap();
        assert!(p.shortened_last);
        assert_eq!(p.intervals.len(), 4);
        let last = p.intervals.last().unwrap();
        assert!((last.1 - 1.0).abs() < 1e-12);
    }

    fn cap_test_field(seed: u64) -> SampledField {
        // frequency box must cover [-1,1] x [-y..]; spatial box [-16,16]
        // gives frequency extent [-2, 2) at 128 samples
        let g = Grid::centered(2, 16.0, 128).unwrap();
        let recip = g.reciprocal();
        let mut rng = crate::rng::stream_rng(seed, &[0]);
        let mut spec = SampledField::zeros(recip.clone());
        let caps: Vec<ParabolicCap> = (0..8)
            .map(|i| ParabolicCap::standard(-0.5 + i as f64 * 0.125, 0.125).unwrap())
            .collect();
        for (i, v) in spec.values_mut().iter_mut().enumerate() {
            let p = recip.point_at(i);
            if caps.iter().any(|c| c.mask_contains(p[0], p[1])) {
                *v = crate::rng::complex_gaussian(&mut rng);
            }
        }
        transform_onto(&spec, Direction::Inverse, &g).unwrap()
    }

    #[test]
    fn cap_partition_tiles_field() {
        let f = cap_test_field(21);
        let whole = ParabolicCap::new(-0.5, 0.5, 0.125 * 0.125).unwrap();
        let f_whole = cap_project(&f, &whole).unwrap();
        let mut sum = SampledField::zeros(f.grid().clone());
        for i in 0..8 {
            let cap = ParabolicCap::standard(-0.5 + i as f64 * 0.125, 0.125).unwrap();
            let fi = cap_project(&f, &cap).unwrap();
            sum = sum.add(&fi).unwrap();
        }
        let diff: f64 = sum
            .values()
            .iter()
            .zip(f_whole.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale = lp_norm(&f_whole, 2.0).unwrap();
        assert!(diff <= 1e-10 * scale.max(1.0), "tiling defect {diff}");
    }

    #[test]
    fn disjoint_caps_are_orthogonal_and_energy_splits() {
        let f = cap_test_field(22);
        let c1 = ParabolicCap::standard(-0.5, 0.125).unwrap();
        let c2 = ParabolicCap::standard(0.25, 0.125).unwrap();
        let f1 = cap_project(&f, &c1).unwrap();
        let f2 = cap_project(&f, &c2).unwrap();
        let w = f.grid().cell_volume();
        let inner: Complex64 = f1
            .values()
            .iter()
            .zip(f2.values())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * w;
        let n1 = lp_norm(&f1, 2.0).unwrap();
        let n2 = lp_norm(&f2, 2.0).unwrap();
        assert!(inner.norm() <= 1e-10 * n1 * n2, "inner product {inner}");

        // energy identity over the full partition
        let whole = ParabolicCap::new(-0.5, 0.5, 0.125 * 0.125).unwrap();
        let f_whole = cap_project(&f, &whole).unwrap();
        let total = lp_norm(&f_whole, 2.0).unwrap().powi(2);
        let mut parts = 0.0;
        for i in 0..8 {
            let cap = ParabolicCap::standard(-0.5 + i as f64 * 0.125, 0.125).unwrap();
            let fi = cap_project(&f, &cap).unwrap();
            parts += lp_norm(&fi, 2.0).unwrap().powi(2);
        }
        assert!((total - parts).abs() <= 1e-10 * total, "{total} vs {parts}");
    }

    #[test]
    fn projection_is_idempotent() {
        let f = cap_test_field(23);
        let cap = ParabolicCap::standard(-0.125, 0.125).unwrap();
        let once = cap_project(&f, &cap).unwrap();
        let twice = cap_project(&once, &cap).unwrap();
        let diff = once
            .values()
            .iter()
            .zip(twice.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(diff <= 1e-12 * once.max_abs().max(1e-30), "defect {diff}");
    }

    #[test]
    fn cap_outside_frequency_box_rejected() {
        let g = Grid::centered(2, 4.0, 16).unwrap();
        let f = SampledField::zeros(g);
        // frequency box is [-2, 2); a cap at base 5 is outside
        let cap = ParabolicCap::standard(5.0, 0.125).unwrap();
        assert!(matches!(
            cap_project(&f, &cap),
            Err(Error::CapOutsideBox)
        ));
    }
}
