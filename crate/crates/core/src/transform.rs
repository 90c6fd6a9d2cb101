//! Vilenkin-Chrestenson transforms and the Fourier transform on compactly
//! supported step functions.
//!
//! The transform kernel at depth `n` is `chi(M^-n gamma_[k], gamma*_[alpha])`,
//! whose exponent is `sum_j ec(k_j, alpha_{n-1-j})` over the base-m digits of
//! `k` and `alpha` (`ec` is the digit-character exponent table). The kernel
//! is a pure tensor product with one index digit-reversed, so the fast path
//! is `n` stages of independent m-point butterflies followed by a single
//! digit-reversal permutation - no twiddle factors. For scalar radix 2 the
//! kernel matrix is the Sylvester-Hadamard matrix with a bit-reversed
//! frequency index.
//!
//! Normalization convention: both the analysis ([`vc_forward_naive`]) and the
//! synthesis ([`vc_inverse_naive`]) sums carry the symmetric `m^-n` factor.
//! Composing the two therefore scales the input by `m^-n` instead of
//! returning it; [`vc_round_trip_factor`] reports that constant and the
//! tests pin it at depth 1. The step-function Fourier layer compensates with
//! its support-scale factors, which is why [`fourier_step`] followed by
//! [`inverse_fourier_step`] is an exact identity.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;

use crate::digits::{base_m_len, MPoint, Space};
use crate::error::{Error, Result};
use crate::system::MSystem;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Which grid a coefficient family is indexed by: the time side runs over
/// scale-n anchors of the primal grid, the frequency side over the dual grid.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Time,
    Frequency,
}

/// A length-`m^scale` coefficient vector indexed by m-adic grid index.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVector {
    side: Side,
    scale: u32,
    values: Vec<Complex64>,
}

impl SpectrumVector {
    pub fn new(sys: &MSystem, side: Side, scale: u32, values: Vec<Complex64>) -> Result<Self> {
        let expected = sys.cell_count(scale)?;
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, got: values.len() });
        }
        Ok(Self { side, scale, values })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Round-trip constant of the symmetric transform pair: applying the
/// analysis sum and then the synthesis sum multiplies the input by `m^-n`.
pub fn vc_round_trip_factor(m: u64, scale: u32) -> f64 {
    (m as f64).powi(-(scale as i32))
}

/// Little-endian fixed-width base-m digits of every index below `m^n`.
fn digit_lists(m: usize, n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(len);
    for mut idx in 0..len {
        let mut digits = vec![0usize; n];
        for d in digits.iter_mut() {
            *d = idx % m;
            idx /= m;
        }
        out.push(digits);
    }
    out
}

/// Kernel exponent for a (time index, frequency index) pair: digit `j` of
/// the time index pairs with digit `n-1-j` of the frequency index.
fn kernel_exponent(sys: &MSystem, kd: &[usize], ad: &[usize]) -> u64 {
    let n = kd.len();
    let mut e = 0u64;
    for j in 0..n {
        e += sys.digit_char_exponent(kd[j], ad[n - 1 - j]);
    }
    e % sys.m()
}

/// Analysis sum, evaluated by the direct double loop:
/// `a_alpha = m^-n sum_k b_k conj(kernel(k, alpha))`.
///
/// This is the oracle the fast path is tested against.
pub fn vc_forward_naive(sys: &MSystem, input: &SpectrumVector) -> Result<SpectrumVector> {
    if input.side != Side::Time {
        return Err(Error::ScaleContract("forward transform expects time-side input".into()));
    }
    let m = sys.m() as usize;
    let n = input.scale as usize;
    let len = input.values.len();
    let digits = digit_lists(m, n, len);
    let norm = vc_round_trip_factor(sys.m(), input.scale);
    let mut out = vec![Complex64::zero(); len];
    for (alpha, out_a) in out.iter_mut().enumerate() {
        let mut acc = Complex64::zero();
        for k in 0..len {
            let e = kernel_exponent(sys, &digits[k], &digits[alpha]);
            acc += input.values[k] * sys.root(e).conj();
        }
        *out_a = acc * norm;
    }
    SpectrumVector::new(sys, Side::Frequency, input.scale, out)
}

/// Synthesis sum, evaluated by the direct double loop:
/// `b_k = m^-n sum_alpha a_alpha kernel(k, alpha)`.
///
/// Carries the same symmetric `m^-n` factor as the analysis sum; see the
/// module docs for the resulting round-trip constant.
pub fn vc_inverse_naive(sys: &MSystem, input: &SpectrumVector) -> Result<SpectrumVector> {
    if input.side != Side::Frequency {
        return Err(Error::ScaleContract("inverse transform expects frequency-side input".into()));
    }
    let m = sys.m() as usize;
    let n = input.scale as usize;
    let len = input.values.len();
    let digits = digit_lists(m, n, len);
    let norm = vc_round_trip_factor(sys.m(), input.scale);
    let mut out = vec![Complex64::zero(); len];
    for (k, out_k) in out.iter_mut().enumerate() {
        let mut acc = Complex64::zero();
        for alpha in 0..len {
            let e = kernel_exponent(sys, &digits[k], &digits[alpha]);
            acc += input.values[alpha] * sys.root(e);
        }
        *out_k = acc * norm;
    }
    SpectrumVector::new(sys, Side::Time, input.scale, out)
}

/// The base-m digit-reversal permutation on `m^n` indices.
///
/// Computed once per `(m, n)`; it is an involution relating the stage output
/// order of the fast path to the m-adic index order of the coefficients.
pub fn digit_reversal_permutation(m: u64, n: u32) -> Vec<usize> {
    let m = m as usize;
    let len = m.pow(n);
    let mut perm = Vec::with_capacity(len);
    for mut idx in 0..len {
        let mut rev = 0usize;
        for _ in 0..n {
            rev = rev * m + idx % m;
            idx /= m;
        }
        perm.push(rev);
    }
    perm
}

/// Fast transform: `n` stages of m-point butterflies (the digit-character
/// matrix), one digit-reversal permutation, and the `m^-n` normalization.
/// Output agrees with the naive path on every input.
///
/// Butterflies within a stage are independent; the whole pass is
/// `O(n m^(n+1))` complex operations.
pub fn vc_fast(sys: &MSystem, input: &SpectrumVector, direction: Direction) -> Result<SpectrumVector> {
    let expected_side = match direction {
        Direction::Forward => Side::Time,
        Direction::Inverse => Side::Frequency,
    };
    if input.side != expected_side {
        return Err(Error::ScaleContract("transform input is on the wrong side".into()));
    }
    let m = sys.m() as usize;
    let n = input.scale;
    let len = input.values.len();

    // Stage matrix, laid out as [output digit * m + input digit].
    // Forward contracts a time digit i against a frequency digit t with
    // conj(root(ec(i, t))); inverse contracts a frequency digit against a
    // time digit with root(ec(t, i)).
    let mut stage = vec![Complex64::zero(); m * m];
    for t in 0..m {
        for i in 0..m {
            stage[t * m + i] = match direction {
                Direction::Forward => sys.root(sys.digit_char_exponent(i, t)).conj(),
                Direction::Inverse => sys.root(sys.digit_char_exponent(t, i)),
            };
        }
    }

    let mut data = input.values.clone();
    let mut lane = vec![Complex64::zero(); m];
    let mut stride = 1usize;
    for _ in 0..n {
        let block = stride * m;
        for base in (0..len).step_by(block) {
            for off in 0..stride {
                let start = base + off;
                for (t, l) in lane.iter_mut().enumerate() {
                    *l = data[start + t * stride];
                }
                for t in 0..m {
                    let mut acc = Complex64::zero();
                    for (i, l) in lane.iter().enumerate() {
                        acc += stage[t * m + i] * l;
                    }
                    data[start + t * stride] = acc;
                }
            }
        }
        stride *= m;
    }

    let perm = digit_reversal_permutation(sys.m(), n);
    let norm = vc_round_trip_factor(sys.m(), n);
    let out: Vec<Complex64> = perm.iter().map(|&src| data[src] * norm).collect();
    let side = match direction {
        Direction::Forward => Side::Frequency,
        Direction::Inverse => Side::Time,
    };
    SpectrumVector::new(sys, side, n, out)
}

/// A step function: constant on scale-`value_scale` cells and supported in
/// the `support_scale`-fold dilate of the tile, so it is determined by
/// `m^(value_scale + support_scale)` cell values indexed by the m-adic
/// anchor index.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    space: Space,
    value_scale: i64,
    support_scale: i64,
    coeffs: Vec<Complex64>,
}

/// Checked conversion of a scale sum into a tree depth.
pub(crate) fn depth_u32(depth: i64) -> Result<u32> {
    u32::try_from(depth)
        .map_err(|_| Error::ScaleContract(format!("depth {depth} out of range")))
}

impl StepFunction {
    pub fn new(
        sys: &MSystem,
        space: Space,
        value_scale: i64,
        support_scale: i64,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        let depth = value_scale + support_scale;
        if depth < 0 {
            return Err(Error::ScaleContract(format!(
                "value scale {value_scale} + support scale {support_scale} must be >= 0"
            )));
        }
        let expected = sys.cell_count(depth_u32(depth)?)?;
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch { expected, got: coeffs.len() });
        }
        Ok(Self { space, value_scale, support_scale, coeffs })
    }

    /// The indicator of the fundamental tile (or dual tile): one cell,
    /// value 1, scales (0, 0).
    pub fn tile_indicator(sys: &MSystem, space: Space) -> Self {
        Self::new(sys, space, 0, 0, vec![Complex64::new(1.0, 0.0)])
            .expect("single-cell step function is always valid")
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn value_scale(&self) -> i64 {
        self.value_scale
    }

    pub fn support_scale(&self) -> i64 {
        self.support_scale
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn cell_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Evaluate at a point: the value of the scale-`value_scale` cell
    /// containing `x`, or 0 outside the support.
    pub fn eval_at(&self, sys: &MSystem, x: &MPoint) -> Result<Complex64> {
        if x.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        let set = sys.digit_set(self.space);
        let cell = set.cell_of_point(x, self.value_scale)?;
        Ok(match usize::try_from(&cell) {
            Ok(idx) if idx < self.coeffs.len() => self.coeffs[idx],
            _ => Complex64::zero(),
        })
    }

    /// Cell-measure-weighted energy `m^-value_scale sum |coeff|^2`.
    pub fn energy(&self, sys: &MSystem) -> f64 {
        let weight = (sys.m() as f64).powi(-(self.value_scale as i32));
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * weight
    }

    /// Cell-measure-weighted inner product of two step functions on the
    /// same cell grid.
    pub fn inner_product(&self, sys: &MSystem, other: &StepFunction) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.value_scale != other.value_scale || self.support_scale != other.support_scale {
            return Err(Error::ScaleContract(
                "inner product requires matching value and support scales".into(),
            ));
        }
        let weight = (sys.m() as f64).powi(-(self.value_scale as i32));
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * weight)
    }
}

/// Fourier transform of a step function, in closed form.
///
/// For `f` constant on scale-`n` cells and supported in the `p`-fold dilated
/// tile, the transform is again a step function with the scales swapped:
/// value scale `p`, support scale `n`. Its anchor values are the depth-
/// `(n+p)` analysis transform of the cell values times `m^p`; the tile
/// measure cancels throughout, so none is ever computed.
pub fn fourier_step(sys: &MSystem, f: &StepFunction) -> Result<StepFunction> {
    if f.space != Space::Primal {
        return Err(Error::SpaceMismatch);
    }
    transform_step(sys, f, Direction::Forward)
}

/// Inverse Fourier transform; exact two-sided inverse of [`fourier_step`]
/// at the step-function level.
pub fn inverse_fourier_step(sys: &MSystem, g: &StepFunction) -> Result<StepFunction> {
    if g.space != Space::Dual {
        return Err(Error::SpaceMismatch);
    }
    transform_step(sys, g, Direction::Inverse)
}

fn transform_step(sys: &MSystem, f: &StepFunction, direction: Direction) -> Result<StepFunction> {
    let depth = depth_u32(f.value_scale + f.support_scale)?;
    let side = match direction {
        Direction::Forward => Side::Time,
        Direction::Inverse => Side::Frequency,
    };
    let sv = SpectrumVector::new(sys, side, depth, f.coeffs.clone())?;
    let transformed = vc_fast(sys, &sv, direction)?;
    let factor = (sys.m() as f64).powi(f.support_scale as i32);
    let coeffs = transformed.into_values().into_iter().map(|c| c * factor).collect();
    StepFunction::new(sys, f.space.opposite(), f.support_scale, f.value_scale, coeffs)
}

/// Translate a step function by the grid element `gamma_[shift_index]`
/// under the carry-free addition: returns `x -> f(x oplus gamma)`.
///
/// Translation permutes scale-`n` cells (anchors move by `oplus`), so the
/// result is a step function on the same value scale with the support scale
/// enlarged just enough to hold the translated support.
pub fn shift_step(sys: &MSystem, f: &StepFunction, shift_index: &BigUint) -> Result<StepFunction> {
    if f.space != Space::Primal {
        return Err(Error::SpaceMismatch);
    }
    let set = sys.digits();
    let gamma = set.gamma_point(shift_index);
    let support_scale = f.support_scale.max(base_m_len(shift_index, sys.m()) as i64);
    let count = sys.cell_count(depth_u32(f.value_scale + support_scale)?)?;
    let mut coeffs = Vec::with_capacity(count);
    for k in 0..count {
        let anchor = set.anchor_point(f.value_scale, &BigUint::from(k));
        let x = set.oplus(&anchor, &gamma)?;
        coeffs.push(f.eval_at(sys, &x)?);
    }
    StepFunction::new(sys, Space::Primal, f.value_scale, support_scale, coeffs)
}

/// Both sides of the grid summation identity: the sum of `f` over the
/// primal grid points in its support equals the sum of its Fourier
/// transform over the dual grid points. Both sums are finite because the
/// supports are compact.
pub fn poisson_check(sys: &MSystem, f: &StepFunction) -> Result<(Complex64, Complex64)> {
    let fhat = fourier_step(sys, f)?;
    let lhs = grid_sum(sys, f)?;
    let rhs = grid_sum(sys, &fhat)?;
    Ok((lhs, rhs))
}

fn grid_sum(sys: &MSystem, f: &StepFunction) -> Result<Complex64> {
    let set = sys.digit_set(f.space);
    let bound = sys.cell_count(depth_u32(f.support_scale.max(0))?)?;
    let mut acc = Complex64::zero();
    for l in 0..bound {
        let gamma = set.gamma_point(&BigUint::from(l));
        acc += f.eval_at(sys, &gamma)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dyadic() -> MSystem {
        MSystem::with_digits(&[vec![2]], Some(&[vec![0], vec![1]]), Some(&[vec![0], vec![1]]), None)
            .unwrap()
    }

    fn corpus() -> Vec<MSystem> {
        vec![
            dyadic(),
            MSystem::new(&[vec![2, 0], vec![0, 2]]).unwrap(),
            MSystem::with_digits(&[vec![1, 1], vec![1, -1]], Some(&[vec![0, 0], vec![1, 0]]), None, None)
                .unwrap(),
            MSystem::new(&[vec![0, 0, 3], vec![1, 0, 0], vec![0, 1, 0]]).unwrap(),
        ]
    }

    fn random_values(rng: &mut StdRng, len: usize) -> Vec<Complex64> {
        (0..len)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn depth_zero_is_identity() {
        let sys = dyadic();
        let v = SpectrumVector::new(&sys, Side::Time, 0, vec![Complex64::new(3.0, -1.0)]).unwrap();
        let a = vc_forward_naive(&sys, &v).unwrap();
        assert_eq!(a.values(), v.values());
        let f = SpectrumVector::new(&sys, Side::Frequency, 0, vec![Complex64::new(3.0, -1.0)]).unwrap();
        let b = vc_inverse_naive(&sys, &f).unwrap();
        assert_eq!(b.values(), f.values());
    }

    /// Depth-1 scalar radix 2: the kernel is the 2x2 Hadamard matrix and
    /// the analysis sum halves it.
    #[test]
    fn hadamard_base_case() {
        let sys = dyadic();
        let b = SpectrumVector::new(
            &sys,
            Side::Time,
            1,
            vec![Complex64::new(1.0, 0.0), Complex64::zero()],
        )
        .unwrap();
        let a = vc_forward_naive(&sys, &b).unwrap();
        assert_eq!(a.values(), &[Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)]);

        let b = SpectrumVector::new(
            &sys,
            Side::Time,
            1,
            vec![Complex64::zero(), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let a = vc_forward_naive(&sys, &b).unwrap();
        assert_eq!(a.values(), &[Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)]);
    }

    /// Normalization oracle: with the symmetric m^-n convention the
    /// synthesis applied to the analysis output returns the input scaled by
    /// 1/m, not the input itself. This pins the round-trip constant that
    /// every later layer relies on.
    #[test]
    fn symmetric_pair_round_trip_constant_pinned() {
        let sys = dyadic();
        let a = SpectrumVector::new(
            &sys,
            Side::Frequency,
            1,
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)],
        )
        .unwrap();
        let b = vc_inverse_naive(&sys, &a).unwrap();
        // the synthesis of the analysis of (1, 0) comes back as (1/2, 0)
        assert_eq!(b.values(), &[Complex64::new(0.5, 0.0), Complex64::zero()]);
        assert_eq!(vc_round_trip_factor(2, 1), 0.5);
    }

    /// The same constant governs every depth: round trip = m^-n times id.
    #[test]
    fn round_trip_constant_uniform_in_depth() {
        let mut rng = StdRng::seed_from_u64(7);
        for sys in corpus() {
            for n in 1..=3u32 {
                let len = sys.cell_count(n).unwrap();
                let values = random_values(&mut rng, len);
                let b = SpectrumVector::new(&sys, Side::Time, n, values.clone()).unwrap();
                let round =
                    vc_inverse_naive(&sys, &vc_forward_naive(&sys, &b).unwrap()).unwrap();
                let c = vc_round_trip_factor(sys.m(), n);
                let expected: Vec<Complex64> = values.iter().map(|v| v * c).collect();
                assert!(max_abs_diff(round.values(), &expected) < 1e-12);
            }
        }
    }

    #[test]
    fn constant_input_concentrates_at_zero_frequency() {
        for sys in corpus() {
            let n = 2;
            let len = sys.cell_count(n).unwrap();
            let b = SpectrumVector::new(
                &sys,
                Side::Time,
                n,
                vec![Complex64::new(1.0, 0.0); len],
            )
            .unwrap();
            let a = vc_forward_naive(&sys, &b).unwrap();
            assert!((a.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            for v in &a.values()[1..] {
                assert!(v.norm() < 1e-12, "nonzero frequency must cancel");
            }
        }
    }

    #[test]
    fn delta_input_has_flat_magnitude() {
        for sys in corpus() {
            let n = 2;
            let len = sys.cell_count(n).unwrap();
            let mut values = vec![Complex64::zero(); len];
            values[1] = Complex64::new(1.0, 0.0);
            let b = SpectrumVector::new(&sys, Side::Time, n, values).unwrap();
            let a = vc_fast(&sys, &b, Direction::Forward).unwrap();
            let want = vc_round_trip_factor(sys.m(), n);
            for v in a.values() {
                assert!((v.norm() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fast_matches_naive_both_directions() {
        let mut rng = StdRng::seed_from_u64(11);
        for sys in corpus() {
            for n in 0..=3u32 {
                let len = sys.cell_count(n).unwrap();
                for _ in 0..5 {
                    let values = random_values(&mut rng, len);
                    let b = SpectrumVector::new(&sys, Side::Time, n, values.clone()).unwrap();
                    let fast = vc_fast(&sys, &b, Direction::Forward).unwrap();
                    let naive = vc_forward_naive(&sys, &b).unwrap();
                    assert!(max_abs_diff(fast.values(), naive.values()) < 1e-10);

                    let a = SpectrumVector::new(&sys, Side::Frequency, n, values).unwrap();
                    let fast = vc_fast(&sys, &a, Direction::Inverse).unwrap();
                    let naive = vc_inverse_naive(&sys, &a).unwrap();
                    assert!(max_abs_diff(fast.values(), naive.values()) < 1e-10);
                }
            }
        }
    }

    /// The base-2 depth-3 digit reversal, determined empirically once and
    /// frozen: it maps stage order to m-adic coefficient order.
    #[test]
    fn digit_reversal_frozen_for_radix_two_depth_three() {
        assert_eq!(digit_reversal_permutation(2, 3), vec![0, 4, 2, 6, 1, 5, 3, 7]);
        // involution
        let perm = digit_reversal_permutation(3, 4);
        for (i, &p) in perm.iter().enumerate() {
            assert_eq!(perm[p], i);
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let sys = dyadic();
        let err =
            SpectrumVector::new(&sys, Side::Time, 2, vec![Complex64::zero(); 3]).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { expected: 4, got: 3 });
    }

    #[test]
    fn tile_indicator_transforms_to_dual_tile_indicator() {
        for sys in corpus() {
            let f = StepFunction::tile_indicator(&sys, Space::Primal);
            let fhat = fourier_step(&sys, &f).unwrap();
            assert_eq!(fhat.space(), Space::Dual);
            assert_eq!(fhat.value_scale(), 0);
            assert_eq!(fhat.support_scale(), 0);
            assert_eq!(fhat.coeffs(), &[Complex64::new(1.0, 0.0)]);
            let back = inverse_fourier_step(&sys, &fhat).unwrap();
            assert_eq!(back, f);
        }
    }

    /// Scalar radix 2 cell indicators: the transform of 1 on [k/2, (k+1)/2)
    /// is 1/2 times a sign pattern on the two dual cells.
    #[test]
    fn scalar_cell_indicator_closed_form() {
        let sys = dyadic();
        for k in 0..2usize {
            let mut coeffs = vec![Complex64::zero(); 2];
            coeffs[k] = Complex64::new(1.0, 0.0);
            let f = StepFunction::new(&sys, Space::Primal, 1, 0, coeffs).unwrap();
            let fhat = fourier_step(&sys, &f).unwrap();
            assert_eq!(fhat.value_scale(), 0);
            assert_eq!(fhat.support_scale(), 1);
            let sign = if k == 0 { 1.0 } else { -1.0 };
            assert!((fhat.coeffs()[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
            assert!((fhat.coeffs()[1] - Complex64::new(sign * 0.5, 0.0)).norm() < 1e-15);
        }
    }

    /// Scale duality: value and support scales swap, and the round trip is
    /// exact to 1e-12 per coefficient.
    #[test]
    fn fourier_round_trip_and_shape() {
        let mut rng = StdRng::seed_from_u64(23);
        for sys in corpus() {
            for (n, p) in [(0i64, 0i64), (1, 0), (0, 1), (2, 1), (1, 2), (-1, 2), (2, -1)] {
                let len = sys.cell_count((n + p) as u32).unwrap();
                let f = StepFunction::new(&sys, Space::Primal, n, p, random_values(&mut rng, len))
                    .unwrap();
                let fhat = fourier_step(&sys, &f).unwrap();
                assert_eq!(fhat.space(), Space::Dual);
                assert_eq!(fhat.value_scale(), p);
                assert_eq!(fhat.support_scale(), n);
                let back = inverse_fourier_step(&sys, &fhat).unwrap();
                assert_eq!(back.space(), Space::Primal);
                assert_eq!(back.value_scale(), n);
                assert_eq!(back.support_scale(), p);
                assert!(max_abs_diff(back.coeffs(), f.coeffs()) < 1e-12);
                // and the other composition order
                let again = fourier_step(&sys, &inverse_fourier_step(&sys, &fhat).unwrap()).unwrap();
                assert!(max_abs_diff(again.coeffs(), fhat.coeffs()) < 1e-12);
            }
        }
    }

    #[test]
    fn fourier_is_linear() {
        let mut rng = StdRng::seed_from_u64(31);
        let sys = dyadic();
        let len = sys.cell_count(3).unwrap();
        let a = random_values(&mut rng, len);
        let b = random_values(&mut rng, len);
        let fa = StepFunction::new(&sys, Space::Primal, 2, 1, a.clone()).unwrap();
        let fb = StepFunction::new(&sys, Space::Primal, 2, 1, b.clone()).unwrap();
        let sum: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let fsum = StepFunction::new(&sys, Space::Primal, 2, 1, sum).unwrap();
        let lhs = fourier_step(&sys, &fsum).unwrap();
        let rhs: Vec<Complex64> = fourier_step(&sys, &fa)
            .unwrap()
            .coeffs()
            .iter()
            .zip(fourier_step(&sys, &fb).unwrap().coeffs())
            .map(|(x, y)| x + y)
            .collect();
        assert!(max_abs_diff(lhs.coeffs(), &rhs) < 1e-12);
    }

    #[test]
    fn shift_by_zero_is_identity() {
        let mut rng = StdRng::seed_from_u64(37);
        for sys in corpus() {
            let len = sys.cell_count(2).unwrap();
            let f = StepFunction::new(&sys, Space::Primal, 1, 1, random_values(&mut rng, len))
                .unwrap();
            let g = shift_step(&sys, &f, &BigUint::zero()).unwrap();
            assert_eq!(g, f);
        }
    }

    /// Translating the tile indicator by the grid element 1 moves its mass
    /// to the cell anchored at 1 and enlarges the support scale to hold it.
    #[test]
    fn shift_moves_tile_indicator() {
        let sys = dyadic();
        let f = StepFunction::tile_indicator(&sys, Space::Primal);
        let g = shift_step(&sys, &f, &BigUint::from(1u32)).unwrap();
        assert_eq!(g.value_scale(), 0);
        assert_eq!(g.support_scale(), 1);
        assert_eq!(g.coeffs(), &[Complex64::zero(), Complex64::new(1.0, 0.0)]);
    }

    /// For nonnegative value scales the shift is the digitwise index
    /// permutation `k -> k oplus (shift << n digits)`.
    #[test]
    fn shift_is_index_permutation_on_nonnegative_scales() {
        let mut rng = StdRng::seed_from_u64(41);
        for sys in corpus() {
            let m = sys.m() as usize;
            let (n, p) = (1i64, 1i64);
            let len = sys.cell_count((n + p) as u32).unwrap();
            let f = StepFunction::new(&sys, Space::Primal, n, p, random_values(&mut rng, len))
                .unwrap();
            for l in 0..m {
                let g = shift_step(&sys, &f, &BigUint::from(l)).unwrap();
                assert_eq!(g.cell_count(), len);
                for k in 0..len {
                    // index arithmetic oracle: add digit l at place n
                    let hi = k / m.pow(n as u32);
                    let lo = k % m.pow(n as u32);
                    let hi_digit0 = hi % m;
                    let shifted_hi = hi - hi_digit0 + sys.digits().add(hi_digit0, l);
                    let src = shifted_hi * m.pow(n as u32) + lo;
                    assert_eq!(g.coeffs()[k], f.coeffs()[src]);
                }
            }
        }
    }

    /// Spectral form of translation: the transform of the translate equals
    /// the transform times the character of the translation.
    #[test]
    fn shift_theorem_at_dual_anchors() {
        let mut rng = StdRng::seed_from_u64(43);
        for sys in corpus() {
            let (n, p) = (1i64, 1i64);
            let len = sys.cell_count((n + p) as u32).unwrap();
            let f = StepFunction::new(&sys, Space::Primal, n, p, random_values(&mut rng, len))
                .unwrap();
            for l in [0u32, 1, sys.m() as u32 - 1] {
                let l = BigUint::from(l);
                let g = shift_step(&sys, &f, &l).unwrap();
                let ghat = fourier_step(&sys, &g).unwrap();
                let fhat = fourier_step(&sys, &f).unwrap();
                let gamma = sys.digits().gamma_point(&l);
                for j in 0..ghat.cell_count() {
                    let omega = sys
                        .dual_digits()
                        .anchor_point(ghat.value_scale(), &BigUint::from(j));
                    let character = sys.chi(&gamma, &omega).unwrap().to_complex();
                    let expected = fhat.eval_at(&sys, &omega).unwrap() * character;
                    let got = ghat.coeffs()[j];
                    assert!((got - expected).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn poisson_tile_indicator() {
        for sys in corpus() {
            let f = StepFunction::tile_indicator(&sys, Space::Primal);
            let (lhs, rhs) = poisson_check(&sys, &f).unwrap();
            assert!((lhs - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            assert!((rhs - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn poisson_on_random_step_functions() {
        let mut rng = StdRng::seed_from_u64(47);
        for sys in corpus() {
            for (n, p) in [(2i64, 2i64), (1, 2), (2, 1), (-1, 2), (1, -1)] {
                let len = sys.cell_count((n + p) as u32).unwrap();
                let f = StepFunction::new(&sys, Space::Primal, n, p, random_values(&mut rng, len))
                    .unwrap();
                let (lhs, rhs) = poisson_check(&sys, &f).unwrap();
                assert!((lhs - rhs).norm() < 1e-10, "poisson gap {}", (lhs - rhs).norm());
            }
        }
    }

    /// A single off-origin cell contains no grid point, so both grid sums
    /// vanish.
    #[test]
    fn poisson_single_cell_off_origin() {
        let sys = dyadic();
        let mut coeffs = vec![Complex64::zero(); 4];
        coeffs[3] = Complex64::new(1.0, 0.0);
        let f = StepFunction::new(&sys, Space::Primal, 2, 0, coeffs).unwrap();
        let (lhs, rhs) = poisson_check(&sys, &f).unwrap();
        assert_eq!(lhs, Complex64::zero());
        assert!(rhs.norm() < 1e-12);
    }

    #[test]
    fn energy_of_indicators() {
        let sys = dyadic();
        let f = StepFunction::tile_indicator(&sys, Space::Primal);
        assert_eq!(f.energy(&sys), 1.0);
        let mut coeffs = vec![Complex64::zero(); 4];
        coeffs[2] = Complex64::new(1.0, 0.0);
        let single = StepFunction::new(&sys, Space::Primal, 2, 0, coeffs).unwrap();
        assert_eq!(single.energy(&sys), 0.25);
    }

    /// Energy is preserved by the transform, and the polarized identity
    /// holds for inner products.
    #[test]
    fn plancherel_energy_and_polarization() {
        let mut rng = StdRng::seed_from_u64(53);
        for sys in corpus() {
            for (n, p) in [(2i64, 1i64), (1, 2), (0, 2), (-1, 2)] {
                let len = sys.cell_count((n + p) as u32).unwrap();
                let f = StepFunction::new(&sys, Space::Primal, n, p, random_values(&mut rng, len))
                    .unwrap();
                let g = StepFunction::new(&sys, Space::Primal, n, p, random_values(&mut rng, len))
                    .unwrap();
                let fhat = fourier_step(&sys, &f).unwrap();
                let ghat = fourier_step(&sys, &g).unwrap();
                assert!((f.energy(&sys) - fhat.energy(&sys)).abs() < 1e-12);
                let lhs = f.inner_product(&sys, &g).unwrap();
                let rhs = fhat.inner_product(&sys, &ghat).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }
}
