//! Geometric realization of the digit system: anchor clouds approximating
//! the self-affine tile, exact refinement checks, raster and CSV emission,
//! and a Monte Carlo area diagnostic.
//!
//! Anchors are computed in exact rational arithmetic (integer numerators
//! over the common denominator `m^depth`, via adjugate powers) and converted
//! to floating point only at the geometry boundary. That makes the
//! refinement identity an exact set comparison rather than a float one.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::intlinalg::big_to_f64;
use crate::system::MSystem;

/// Default cap on `m^depth`, overridable through the CLI environment.
pub const DEFAULT_POINT_BUDGET: u64 = 1 << 20;

/// The depth-`n` anchor cloud `{M^-n gamma_[k] : 0 <= k < m^n}`, exact and
/// as floating-point points, with its bounding box and a reported (not
/// asserted) bound on the distance to the true attractor.
#[derive(Debug, Clone)]
pub struct TileCloud {
    depth: u32,
    dim: usize,
    numerators: Vec<Vec<BigInt>>,
    denominator: BigInt,
    points: Vec<Vec<f64>>,
    bbox_min: Vec<f64>,
    bbox_max: Vec<f64>,
    hausdorff_gap: f64,
}

impl TileCloud {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Floating-point anchors, indexed by the m-adic index `k`.
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Exact anchors as `(numerators, denominator)` with `denominator = m^depth`.
    pub fn exact(&self) -> (&[Vec<BigInt>], &BigInt) {
        (&self.numerators, &self.denominator)
    }

    pub fn bbox(&self) -> (&[f64], &[f64]) {
        (&self.bbox_min, &self.bbox_max)
    }

    /// Reported upper-bound estimate on the Hausdorff distance between the
    /// cloud and the attractor it truncates.
    pub fn hausdorff_gap(&self) -> f64 {
        self.hausdorff_gap
    }

    /// Number of anchors that coincide with an earlier anchor, as exact
    /// rationals. Always 0 for a valid digit set; reported rather than
    /// hidden so degenerate inputs stay visible.
    pub fn coincident_count(&self) -> usize {
        let distinct: BTreeSet<_> =
            self.numerators.iter().map(|num| reduced(num, &self.denominator)).collect();
        self.numerators.len() - distinct.len()
    }

    /// CSV: one point per line, coordinates comma-joined, 17 significant
    /// digits. Byte-exact for fixed inputs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let line: Vec<String> = p.iter().map(|c| format!("{c:.16e}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Generate the depth-`n` anchor cloud by the refinement recursion
/// `cloud(j+1) = union over digits s of M^-1 (cloud(j) + s)`, which places
/// index `k' + i m^j` at `M^-1 (anchor_j(k') + s_i)` and so reproduces the
/// m-adic anchor order exactly.
pub fn tile_points(sys: &MSystem, depth: u32, budget: u64) -> Result<TileCloud> {
    let m = sys.m();
    let requested = (m as u128)
        .checked_pow(depth)
        .unwrap_or(u128::MAX);
    if requested > budget as u128 {
        return Err(Error::DepthTooLarge { requested, budget: budget as u128 });
    }
    let dim = sys.dim();
    let matrix = sys.matrix();
    let negate = matrix.sign() < 0;

    let mut numerators: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); dim]];
    let mut denominator = BigInt::one();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(numerators.len() * m as usize);
        for s in sys.digits().digits() {
            for v in &numerators {
                let shifted: Vec<BigInt> = v
                    .iter()
                    .zip(s.iter())
                    .map(|(c, &d)| c + &denominator * BigInt::from(d))
                    .collect();
                let mut num = matrix.adj_mul_vec(&shifted);
                if negate {
                    for c in num.iter_mut() {
                        *c = -&*c;
                    }
                }
                next.push(num);
            }
        }
        numerators = next;
        denominator *= BigInt::from(m);
    }

    let den_f = big_to_f64(&denominator);
    let points: Vec<Vec<f64>> = numerators
        .iter()
        .map(|num| num.iter().map(|c| big_to_f64(c) / den_f).collect())
        .collect();

    let mut bbox_min = vec![f64::INFINITY; dim];
    let mut bbox_max = vec![f64::NEG_INFINITY; dim];
    for p in &points {
        for (c, (lo, hi)) in p.iter().zip(bbox_min.iter_mut().zip(bbox_max.iter_mut())) {
            *lo = lo.min(*c);
            *hi = hi.max(*c);
        }
    }

    let hausdorff_gap = inverse_power_norm(sys, depth) * attractor_radius_bound(sys);
    Ok(TileCloud {
        depth,
        dim,
        numerators,
        denominator,
        points,
        bbox_min,
        bbox_max,
        hausdorff_gap,
    })
}

/// Frobenius norm of `M^-depth`.
fn inverse_power_norm(sys: &MSystem, depth: u32) -> f64 {
    let inv = sys.matrix().inverse_f64();
    let mut p = DMatrix::<f64>::identity(sys.dim(), sys.dim());
    for _ in 0..depth {
        p = &p * &inv;
    }
    p.norm()
}

/// Upper bound on the radius of the attractor: `sum_j ‖M^-j‖ max|s|`,
/// truncated once the terms are negligible.
fn attractor_radius_bound(sys: &MSystem) -> f64 {
    let max_digit = sys
        .digits()
        .digits()
        .iter()
        .map(|s| s.iter().map(|&c| (c as f64).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let inv = sys.matrix().inverse_f64();
    let mut term = DMatrix::<f64>::identity(sys.dim(), sys.dim());
    let mut total = 0.0;
    for _ in 0..512 {
        term = &term * &inv;
        let t = term.norm() * max_digit;
        total += t;
        if t < 1e-14 * (1.0 + total) {
            break;
        }
    }
    total
}

fn reduced(num: &[BigInt], den: &BigInt) -> (Vec<BigInt>, BigInt) {
    let mut g = den.clone();
    for c in num {
        g = g.gcd(c);
    }
    if g.is_zero() {
        g = BigInt::one();
    }
    ((num.iter().map(|c| c / &g).collect()), den / &g)
}

/// Exact refinement check: the depth-`n` anchors coincide, as a set of
/// rationals, with the union over digits `s` of `M^-1 (depth-(n-1) anchors + s)`.
///
/// The comparison is exact (reduced integer rationals), so it validates the
/// adjugate-power plumbing rather than floating-point rendering.
pub fn self_similarity_check(sys: &MSystem, cloud: &TileCloud) -> Result<bool> {
    if cloud.depth == 0 {
        return Err(Error::ScaleContract("refinement check needs depth >= 1".into()));
    }
    let parent = tile_points(sys, cloud.depth - 1, u64::MAX)?;
    Ok(refine_exact(sys, &parent) == cloud_set(cloud))
}

fn cloud_set(cloud: &TileCloud) -> BTreeSet<(Vec<BigInt>, BigInt)> {
    cloud
        .numerators
        .iter()
        .map(|num| reduced(num, &cloud.denominator))
        .collect()
}

/// `union over s of M^-1 (anchors + s)` as a set of reduced rationals.
fn refine_exact(sys: &MSystem, parent: &TileCloud) -> BTreeSet<(Vec<BigInt>, BigInt)> {
    let matrix = sys.matrix();
    let negate = matrix.sign() < 0;
    let den = BigInt::from(sys.m()) * &parent.denominator;
    let mut out = BTreeSet::new();
    for s in sys.digits().digits() {
        for num in &parent.numerators {
            let shifted: Vec<BigInt> = num
                .iter()
                .zip(s.iter())
                .map(|(c, &d)| c + &parent.denominator * BigInt::from(d))
                .collect();
            let mut v = matrix.adj_mul_vec(&shifted);
            if negate {
                for c in v.iter_mut() {
                    *c = -&*c;
                }
            }
            out.insert(reduced(&v, &den));
        }
    }
    out
}

/// Residuals `‖M^2 s - sum_{k<=K} M^-2k s‖` for `K = 1..=k_max`, where `s`
/// is the first nonzero digit.
///
/// For matrices with `M^2 = m I` (the twindragon one among them) the series
/// telescopes to `M^2 s` exactly and the residuals decay geometrically like
/// `m^-K`; the returned residuals let callers verify that decay.
pub fn dilation_series_residuals(sys: &MSystem, k_max: u32) -> Vec<f64> {
    let dim = sys.dim();
    let s = DMatrix::from_iterator(dim, 1, sys.digits().digit(1).iter().map(|&c| c as f64));
    let mf = sys.matrix().to_f64();
    let target = &mf * &mf * &s;
    let inv = sys.matrix().inverse_f64();
    let inv2 = &inv * &inv;
    let mut out = Vec::with_capacity(k_max as usize);
    let mut power = DMatrix::<f64>::identity(dim, dim);
    let mut partial = DMatrix::<f64>::zeros(dim, 1);
    for k in 0..=k_max {
        partial += &power * &s;
        power = &power * &inv2;
        if k >= 1 {
            out.push((&target - &partial).norm());
        }
    }
    out
}

/// Monte Carlo estimate of the attractor's Lebesgue measure.
///
/// Membership is approximated by proximity to the depth-`depth` anchor
/// cloud with radius `2 ‖M^-depth‖ diam(digit hull)`, which sandwiches the
/// attractor between the cloud dilate and its own dilate. Returns
/// `(estimate, uncertainty)` where the uncertainty combines the binomial
/// standard error with a worst-case boundary-shell bias bound. Diagnostic
/// only: the proximity test has a documented bias of the order of the
/// dilated boundary shell, which does not vanish quickly when the boundary
/// is fractal. Meant to be run with at least 10^4 samples.
pub fn measure_estimate(
    sys: &MSystem,
    depth: u32,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<(f64, f64)> {
    let cloud = tile_points(sys, depth, budget)?;
    let dim = cloud.dim;
    let digits = sys.digits().digits();
    let mut hull_diam = 0.0f64;
    for a in digits {
        for b in digits {
            let d2: f64 = a.iter().zip(b.iter()).map(|(&x, &y)| ((x - y) as f64).powi(2)).sum();
            hull_diam = hull_diam.max(d2.sqrt());
        }
    }
    let radius = (2.0 * inverse_power_norm(sys, depth) * hull_diam).max(1e-12);

    // spatial hash over the bounding box with cell size = radius
    let mut grid_dims = vec![0usize; dim];
    let mut total_cells = 1usize;
    for a in 0..dim {
        let w = cloud.bbox_max[a] - cloud.bbox_min[a];
        let cells = ((w / radius).ceil() as usize + 1).max(1);
        grid_dims[a] = cells;
        total_cells = total_cells.saturating_mul(cells);
    }
    if total_cells > (1 << 26) {
        return Err(Error::DepthTooLarge { requested: total_cells as u128, budget: 1 << 26 });
    }
    let cell_of = |p: &[f64]| -> usize {
        let mut idx = 0usize;
        for a in 0..dim {
            let c = (((p[a] - cloud.bbox_min[a]) / radius).floor() as isize)
                .clamp(0, grid_dims[a] as isize - 1) as usize;
            idx = idx * grid_dims[a] + c;
        }
        idx
    };
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); total_cells];
    for (i, p) in cloud.points.iter().enumerate() {
        buckets[cell_of(p)].push(i as u32);
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let r2 = radius * radius;
    let mut hits = 0u64;
    let mut sample = vec![0.0f64; dim];
    let mut neighbor = vec![0isize; dim];
    for _ in 0..samples {
        for a in 0..dim {
            sample[a] = rng.random_range(cloud.bbox_min[a]..=cloud.bbox_max[a]);
        }
        let mut found = false;
        // scan the 3^d neighborhood of the sample's grid cell
        let base: Vec<isize> = (0..dim)
            .map(|a| ((sample[a] - cloud.bbox_min[a]) / radius).floor() as isize)
            .collect();
        neighbor.fill(-1);
        'offsets: loop {
            let mut idx = 0usize;
            let mut valid = true;
            for a in 0..dim {
                let c = base[a] + neighbor[a];
                if c < 0 || c >= grid_dims[a] as isize {
                    valid = false;
                    break;
                }
                idx = idx * grid_dims[a] + c as usize;
            }
            if valid {
                for &pi in &buckets[idx] {
                    let p = &cloud.points[pi as usize];
                    let d2: f64 =
                        p.iter().zip(sample.iter()).map(|(a, b)| (a - b).powi(2)).sum();
                    if d2 <= r2 {
                        found = true;
                        break;
                    }
                }
            }
            if found {
                break;
            }
            let mut axis = 0;
            loop {
                if axis == dim {
                    break 'offsets;
                }
                neighbor[axis] += 1;
                if neighbor[axis] <= 1 {
                    break;
                }
                neighbor[axis] = -1;
                axis += 1;
            }
        }
        if found {
            hits += 1;
        }
    }

    let volume: f64 = (0..dim).map(|a| cloud.bbox_max[a] - cloud.bbox_min[a]).product();
    let p_hat = hits as f64 / samples as f64;
    let estimate = volume * p_hat;
    let statistical = volume * (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
    let shell: f64 = {
        let grown: f64 = (0..dim)
            .map(|a| cloud.bbox_max[a] - cloud.bbox_min[a] + 2.0 * radius)
            .product();
        let shrunk: f64 = (0..dim)
            .map(|a| (cloud.bbox_max[a] - cloud.bbox_min[a] - 2.0 * radius).max(0.0))
            .product();
        grown - shrunk
    };
    let uncertainty = (statistical.powi(2) + (shell / 2.0).powi(2)).sqrt();
    Ok((estimate, uncertainty))
}

/// A row-major occupancy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

/// Rasterize a planar cloud into a binary occupancy grid (0 or 255); the
/// bounding box is affinely fitted to the pixel grid. Deterministic.
pub fn raster(cloud: &TileCloud, width: usize, height: usize) -> Result<Raster> {
    raster_impl(cloud, width, height, None)
}

/// Rasterize with pixels colored by the coarse-scale cell index of each
/// anchor: anchor `k` at depth `n` belongs to cell `k / m^(n - coarse_depth)`
/// of depth `coarse_depth`, and that index picks the gray level.
pub fn raster_cells(
    cloud: &TileCloud,
    width: usize,
    height: usize,
    coarse_depth: u32,
    m: u64,
) -> Result<Raster> {
    if coarse_depth > cloud.depth {
        return Err(Error::ScaleContract("coarse depth exceeds cloud depth".into()));
    }
    let divisor = (m as u128).pow(cloud.depth - coarse_depth);
    raster_impl(cloud, width, height, Some(divisor))
}

fn raster_impl(
    cloud: &TileCloud,
    width: usize,
    height: usize,
    cell_divisor: Option<u128>,
) -> Result<Raster> {
    if cloud.dim != 2 {
        return Err(Error::DimensionUnsupported { dim: cloud.dim });
    }
    assert!(width >= 1 && height >= 1, "raster must have at least one pixel");
    let (lo, hi) = (&cloud.bbox_min, &cloud.bbox_max);
    let span = |a: usize| -> f64 {
        let w = hi[a] - lo[a];
        if w > 0.0 {
            w
        } else {
            1.0
        }
    };
    let mut pixels = vec![0u8; width * height];
    for (k, p) in cloud.points.iter().enumerate() {
        let col = (((p[0] - lo[0]) / span(0)) * (width - 1) as f64).round() as usize;
        let row = (((p[1] - lo[1]) / span(1)) * (height - 1) as f64).round() as usize;
        let col = col.min(width - 1);
        let row = row.min(height - 1);
        let value = match cell_divisor {
            None => 255,
            Some(div) => {
                let cell = (k as u128) / div;
                ((cell % 255) + 1) as u8
            }
        };
        pixels[row * width + col] = value;
    }
    Ok(Raster { width, height, pixels })
}

/// Portable graymap bytes: `P5` binary or `P2` ASCII, maxval 255.
/// Byte-exact for fixed inputs.
pub fn pgm_bytes(raster: &Raster, binary: bool) -> Vec<u8> {
    let mut out = Vec::new();
    if binary {
        out.extend_from_slice(format!("P5\n{} {}\n255\n", raster.width, raster.height).as_bytes());
        out.extend_from_slice(&raster.pixels);
    } else {
        out.extend_from_slice(format!("P2\n{} {}\n255\n", raster.width, raster.height).as_bytes());
        for row in raster.pixels.chunks(raster.width) {
            let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::Space;
    use num_bigint::BigUint;

    fn dyadic() -> MSystem {
        MSystem::with_digits(&[vec![2]], Some(&[vec![0], vec![1]]), Some(&[vec![0], vec![1]]), None)
            .unwrap()
    }

    fn twindragon() -> MSystem {
        MSystem::with_digits(&[vec![1, 1], vec![1, -1]], Some(&[vec![0, 0], vec![1, 0]]), None, None)
            .unwrap()
    }

    #[test]
    fn depth_zero_is_origin() {
        let cloud = tile_points(&dyadic(), 0, 16).unwrap();
        assert_eq!(cloud.points(), &[vec![0.0]]);
    }

    #[test]
    fn dyadic_depth_three_anchors() {
        let cloud = tile_points(&dyadic(), 3, 16).unwrap();
        let expect: Vec<Vec<f64>> = (0..8).map(|k| vec![k as f64 / 8.0]).collect();
        assert_eq!(cloud.points(), expect.as_slice());
    }

    #[test]
    fn budget_is_enforced() {
        let err = tile_points(&dyadic(), 5, 16).unwrap_err();
        assert_eq!(err, Error::DepthTooLarge { requested: 32, budget: 16 });
    }

    #[test]
    fn refinement_holds_for_corpus() {
        for (sys, max_depth) in [(dyadic(), 8u32), (twindragon(), 10)] {
            for depth in 1..=max_depth {
                let cloud = tile_points(&sys, depth, 1 << 20).unwrap();
                assert!(self_similarity_check(&sys, &cloud).unwrap(), "depth {depth}");
            }
        }
    }

    /// Negative control with a genuinely mismatched refinement: anchors of
    /// one digit system against the refinement map of another.
    #[test]
    fn refinement_fails_for_mismatched_digits() {
        let sys = dyadic();
        let other = MSystem::with_digits(
            &[vec![2]],
            Some(&[vec![0], vec![-1]]),
            Some(&[vec![0], vec![1]]),
            None,
        )
        .unwrap();
        let cloud = tile_points(&sys, 3, 64).unwrap();
        // refine under the other system's digits, compare against this cloud
        let parent = tile_points(&other, 2, 64).unwrap();
        assert_ne!(refine_exact(&other, &parent), cloud_set(&cloud));
    }

    /// Anchors truncated by one digit land exactly on the parent anchors:
    /// appending a zero digit maps parent index k to child index k*m.
    #[test]
    fn anchors_truncate_onto_parent_anchors() {
        let sys = twindragon();
        let m = sys.m() as usize;
        let child = tile_points(&sys, 6, 1 << 10).unwrap();
        let parent = tile_points(&sys, 5, 1 << 10).unwrap();
        let child_set = cloud_set(&child);
        for p in cloud_set(&parent) {
            assert!(child_set.contains(&p));
        }
        for k in 0..parent.points().len() {
            let a = reduced(&child.exact().0[k * m], child.exact().1);
            let b = reduced(&parent.exact().0[k], parent.exact().1);
            assert_eq!(a, b);
        }
    }

    /// Bounding boxes grow by at most the refinement step:
    /// box(n+1) is inside box(n) inflated by `‖M^-(n+1)‖ max|s|`.
    #[test]
    fn bounding_boxes_nearly_monotone() {
        let sys = twindragon();
        let max_digit = 1.0; // digits are 0 and (1,0)
        for depth in 1..=8u32 {
            let parent = tile_points(&sys, depth - 1, 1 << 12).unwrap();
            let child = tile_points(&sys, depth, 1 << 12).unwrap();
            let inflate = inverse_power_norm(&sys, depth) * max_digit + 1e-12;
            for a in 0..2 {
                assert!(child.bbox().0[a] >= parent.bbox().0[a] - inflate);
                assert!(child.bbox().1[a] <= parent.bbox().1[a] + inflate);
            }
        }
    }

    /// Coarse cell indices from the rendering path agree with the cell
    /// arithmetic on points.
    #[test]
    fn raster_cell_indices_match_cell_arithmetic() {
        let sys = twindragon();
        let depth = 6u32;
        let coarse = 2u32;
        let m = sys.m();
        let divisor = m.pow(depth - coarse);
        for k in 0..m.pow(depth) {
            let anchor = sys.digits().anchor_point(depth as i64, &BigUint::from(k));
            let cell = sys.digits().cell_of_point(&anchor, coarse as i64).unwrap();
            assert_eq!(BigUint::from(k / divisor), cell);
        }
        // and the anchor is primal-side
        assert_eq!(sys.digits().space(), Space::Primal);
    }

    #[test]
    fn series_identity_residuals_halve() {
        let sys = twindragon();
        let residuals = dilation_series_residuals(&sys, 20);
        assert!((residuals[0] - 0.5).abs() < 1e-12, "two-term partial sum residual");
        for (k, r) in residuals.iter().enumerate() {
            let expect = 0.5f64.powi(k as i32 + 1);
            assert!((r - expect).abs() < 1e-9 * (1.0 + expect), "residual at K={}", k + 1);
        }
    }

    #[test]
    fn measure_of_unit_interval() {
        let (est, err) = measure_estimate(&dyadic(), 12, 100_000, 7, 1 << 20).unwrap();
        assert!((est - 1.0).abs() < 3.0 * err, "estimate {est} err {err}");
        assert!((est - 1.0).abs() < 0.02);
    }

    #[test]
    fn single_point_raster_sets_one_pixel() {
        let cloud = tile_points(&twindragon(), 0, 16).unwrap();
        let r = raster(&cloud, 8, 8).unwrap();
        assert_eq!(r.pixels.iter().filter(|&&p| p > 0).count(), 1);
    }

    #[test]
    fn raster_rejects_other_dimensions() {
        let cloud = tile_points(&dyadic(), 2, 16).unwrap();
        assert_eq!(
            raster(&cloud, 8, 8).unwrap_err(),
            Error::DimensionUnsupported { dim: 1 }
        );
    }

    #[test]
    fn raster_cells_colors_by_coarse_index() {
        let sys = twindragon();
        let cloud = tile_points(&sys, 4, 64).unwrap();
        let r = raster_cells(&cloud, 32, 32, 1, sys.m()).unwrap();
        let mut seen: Vec<u8> = r.pixels.iter().copied().filter(|&p| p > 0).collect();
        seen.sort_unstable();
        seen.dedup();
        // two depth-1 cells, gray levels 1 and 2
        assert_eq!(seen, vec![1, 2]);
    }

    #[test]
    fn pgm_headers() {
        let cloud = tile_points(&twindragon(), 2, 16).unwrap();
        let r = raster(&cloud, 4, 4).unwrap();
        let ascii = pgm_bytes(&r, false);
        assert!(ascii.starts_with(b"P2\n4 4\n255\n"));
        let binary = pgm_bytes(&r, true);
        assert!(binary.starts_with(b"P5\n4 4\n255\n"));
        assert_eq!(binary.len(), "P5\n4 4\n255\n".len() + 16);
    }

    #[test]
    fn csv_is_deterministic() {
        let cloud = tile_points(&twindragon(), 4, 64).unwrap();
        assert_eq!(cloud.to_csv(), cloud.to_csv());
        assert_eq!(cloud.to_csv().lines().count(), 16);
    }

    #[test]
    fn valid_systems_have_no_coincident_anchors() {
        for sys in [dyadic(), twindragon()] {
            let cloud = tile_points(&sys, 6, 128).unwrap();
            assert_eq!(cloud.coincident_count(), 0);
        }
    }
}
