//! The runnable identity suite: every structural identity the library rests
//! on, checked against one system at a chosen depth, with one outcome per
//! identity.
//!
//! Level 1 caps grid depths at 3, level 2 at 6 (transform sizes permitting).
//! All randomness is seeded, so a run is reproducible bit for bit.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::characters::{ExponentHistogram, RootSum};
use crate::digits::Space;
use crate::system::MSystem;
use crate::transform::{
    fourier_step, inverse_fourier_step, poisson_check, shift_step, vc_fast, vc_forward_naive,
    vc_inverse_naive, vc_round_trip_factor, Direction, Side, SpectrumVector, StepFunction,
};

#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl IdentityOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

/// Depth cap for a suite level: level 1 is the quick gate, level 2 pushes
/// the transforms to depth 6.
fn depth_cap(level: u8) -> u32 {
    if level >= 2 {
        6
    } else {
        3
    }
}

/// Naive-oracle comparisons are quadratic; skip them past this many
/// kernel entries and fall back to round-trip self-consistency.
const NAIVE_WORK_CAP: usize = 1 << 22;

/// Run the full identity suite against `sys`. Returns one outcome per
/// identity; the suite passes iff every outcome does.
pub fn run_suite(sys: &MSystem, level: u8) -> Vec<IdentityOutcome> {
    let cap = depth_cap(level);
    vec![
        check_char_sums(sys),
        check_digit_matrix_unitary(sys),
        check_kernel_partition(sys, cap.min(3)),
        check_walsh_orthogonality(sys, cap.min(3)),
        check_vc_normalization(sys, cap),
        check_fast_vs_naive(sys, cap),
        check_fourier_round_trip(sys, cap.min(3)),
        check_poisson(sys, cap.min(3)),
        check_plancherel(sys, cap.min(3)),
        check_shift(sys, cap.min(3)),
    ]
}

/// Digit character sums over `l` in the depth-2 grid and its `M`-translates:
/// exactly `m` when `l = 0 (mod M)`, exactly `0` otherwise.
fn check_char_sums(sys: &MSystem) -> IdentityOutcome {
    let m = sys.m();
    let dim = sys.dim();
    let mut shifts: Vec<Vec<BigInt>> = vec![vec![BigInt::from(0); dim]];
    for axis in 0..dim {
        for delta in [1i64, -1] {
            let mut w = vec![BigInt::from(0); dim];
            w[axis] = BigInt::from(delta);
            shifts.push(w);
        }
    }
    let mut w = vec![BigInt::from(7); dim];
    if dim > 1 {
        w[1] = BigInt::from(-3);
    }
    shifts.push(w);

    let mut checked = 0u64;
    for k in 0..m * m {
        let gamma = sys.digits().gamma_vector(&BigUint::from(k));
        let congruent_zero = k % m == 0;
        for shift in &shifts {
            let l: Vec<BigInt> = gamma
                .iter()
                .zip(sys.matrix().mul_vec(shift).iter())
                .map(|(a, b)| a + b)
                .collect();
            let expected = if congruent_zero { Complex64::new(m as f64, 0.0) } else { Complex64::ZERO };
            if sys.char_sum(&l) != expected {
                return IdentityOutcome::new(
                    "char_sums",
                    false,
                    format!("sum over digits differs from {expected} at grid index {k}"),
                );
            }
            checked += 1;
        }
    }
    IdentityOutcome::new("char_sums", true, format!("{checked} vectors, all exact"))
}

/// The `m x m` digit character matrix has orthogonal rows with squared norm
/// `m`: its Gram entries are digit character sums, evaluated exactly.
fn check_digit_matrix_unitary(sys: &MSystem) -> IdentityOutcome {
    let m = sys.m() as usize;
    for i in 0..m {
        for j in 0..m {
            let mut hist = ExponentHistogram::new(sys.m());
            for t in 0..m {
                let a = sys.digit_char_exponent(i, t);
                let b = sys.digit_char_exponent(j, t);
                hist.add((a + sys.m() - b) % sys.m());
            }
            let ok = match hist.classify(sys) {
                RootSum::Total(total) => i == j && total == sys.m(),
                RootSum::Zero => i != j,
                RootSum::Inexact(_) => false,
            };
            if !ok {
                return IdentityOutcome::new(
                    "digit_matrix_unitary",
                    false,
                    format!("Gram entry ({i},{j}) is not exactly m*delta"),
                );
            }
        }
    }
    IdentityOutcome::new("digit_matrix_unitary", true, format!("{m}x{m} Gram exact"))
}

/// Kernel indicator sums recognize cells exactly at every grid point two
/// scales finer, and the per-cell indicators partition the tile.
fn check_kernel_partition(sys: &MSystem, cap: u32) -> IdentityOutcome {
    let m = sys.m();
    let mut checked = 0u64;
    for n in 1..=cap {
        let fine = n + 2;
        if sys.cell_count(fine).is_err() {
            break;
        }
        for kf in 0..m.pow(fine) {
            let x = sys.digits().anchor_point(fine as i64, &BigUint::from(kf));
            let truth = sys.digits().cell_of_point(&x, n as i64).unwrap();
            let mut hits = 0u32;
            for k in 0..m.pow(n) {
                let k = BigUint::from(k);
                let got = match sys.kernel_cell_sum(&x, n, &k) {
                    Ok(v) => v,
                    Err(e) => {
                        return IdentityOutcome::new(
                            "kernel_partition",
                            false,
                            format!("kernel sum failed at depth {n}: {e}"),
                        )
                    }
                };
                if (got == 1) != (k == truth) {
                    return IdentityOutcome::new(
                        "kernel_partition",
                        false,
                        format!("cell {k} misclassified grid point {kf} at depth {n}"),
                    );
                }
                hits += u32::from(got);
            }
            if hits != 1 {
                return IdentityOutcome::new(
                    "kernel_partition",
                    false,
                    format!("indicators at grid point {kf} sum to {hits}, not 1"),
                );
            }
            checked += 1;
        }
    }
    IdentityOutcome::new("kernel_partition", true, format!("{checked} grid points, all exact"))
}

/// Discrete orthogonality of the Walsh family on scale-n anchors, via exact
/// exponent arithmetic: the normalized Gram matrix is the identity.
fn check_walsh_orthogonality(sys: &MSystem, cap: u32) -> IdentityOutcome {
    let m = sys.m();
    for n in 1..=cap {
        let count = m.pow(n);
        // exponent of chi(anchor_k, gamma*_alpha) for all pairs
        let mut exponents = vec![0u64; (count * count) as usize];
        for k in 0..count {
            let anchor = sys.digits().anchor_point(n as i64, &BigUint::from(k));
            for alpha in 0..count {
                let omega = sys.dual_digits().gamma_point(&BigUint::from(alpha));
                exponents[(k * count + alpha) as usize] =
                    sys.chi_exponent(&anchor, &omega).unwrap();
            }
        }
        for alpha in 0..count {
            for beta in 0..count {
                let mut hist = ExponentHistogram::new(m);
                for k in 0..count {
                    let a = exponents[(k * count + alpha) as usize];
                    let b = exponents[(k * count + beta) as usize];
                    hist.add((a + m - b) % m);
                }
                let ok = match hist.classify(sys) {
                    RootSum::Total(total) => alpha == beta && total == count,
                    RootSum::Zero => alpha != beta,
                    RootSum::Inexact(_) => false,
                };
                if !ok {
                    return IdentityOutcome::new(
                        "walsh_orthogonality",
                        false,
                        format!("Gram entry ({alpha},{beta}) at depth {n} is not delta"),
                    );
                }
            }
        }
    }
    IdentityOutcome::new(
        "walsh_orthogonality",
        true,
        format!("Gram = identity up to depth {cap}, exact"),
    )
}

/// The symmetric transform pair composes to `m^-n` times the identity; the
/// constant is pinned at depth 1 and reused at every depth.
fn check_vc_normalization(sys: &MSystem, cap: u32) -> IdentityOutcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for n in 1..=cap {
        let len = match sys.cell_count(n) {
            Ok(l) => l,
            Err(_) => break,
        };
        let values: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let b = SpectrumVector::new(sys, Side::Time, n, values.clone()).unwrap();
        let round = vc_inverse_naive(sys, &vc_forward_naive(sys, &b).unwrap()).unwrap();
        let c = vc_round_trip_factor(sys.m(), n);
        let gap = round
            .values()
            .iter()
            .zip(values.iter())
            .map(|(r, v)| (r - v * c).norm())
            .fold(0.0, f64::max);
        if gap > 1e-12 {
            return IdentityOutcome::new(
                "vc_normalization",
                false,
                format!("round trip at depth {n} misses m^-n * id by {gap:.3e}"),
            );
        }
    }
    IdentityOutcome::new(
        "vc_normalization",
        true,
        format!("round trip = m^-n * id up to depth {cap}, gap < 1e-12"),
    )
}

/// The fast butterfly path reproduces the naive double loop in both
/// directions (falling back to round-trip consistency past the work cap).
fn check_fast_vs_naive(sys: &MSystem, cap: u32) -> IdentityOutcome {
    let mut rng = StdRng::seed_from_u64(0xfa57);
    let mut compared = 0u32;
    for n in 0..=cap {
        let len = match sys.cell_count(n) {
            Ok(l) => l,
            Err(_) => break,
        };
        let values: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if len.saturating_mul(len) <= NAIVE_WORK_CAP {
            let b = SpectrumVector::new(sys, Side::Time, n, values.clone()).unwrap();
            let fast = vc_fast(sys, &b, Direction::Forward).unwrap();
            let naive = vc_forward_naive(sys, &b).unwrap();
            let gap = fast
                .values()
                .iter()
                .zip(naive.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if gap > 1e-10 {
                return IdentityOutcome::new(
                    "vc_fast_matches_naive",
                    false,
                    format!("forward gap {gap:.3e} at depth {n}"),
                );
            }
            let a = SpectrumVector::new(sys, Side::Frequency, n, values.clone()).unwrap();
            let fast = vc_fast(sys, &a, Direction::Inverse).unwrap();
            let naive = vc_inverse_naive(sys, &a).unwrap();
            let gap = fast
                .values()
                .iter()
                .zip(naive.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if gap > 1e-10 {
                return IdentityOutcome::new(
                    "vc_fast_matches_naive",
                    false,
                    format!("inverse gap {gap:.3e} at depth {n}"),
                );
            }
            compared += 1;
        } else {
            // past the oracle budget: the fast pair must still compose to
            // the pinned constant
            let b = SpectrumVector::new(sys, Side::Time, n, values.clone()).unwrap();
            let round =
                vc_fast(sys, &vc_fast(sys, &b, Direction::Forward).unwrap(), Direction::Inverse)
                    .unwrap();
            let c = vc_round_trip_factor(sys.m(), n);
            let gap = round
                .values()
                .iter()
                .zip(values.iter())
                .map(|(r, v)| (r - v * c).norm())
                .fold(0.0, f64::max);
            if gap > 1e-10 {
                return IdentityOutcome::new(
                    "vc_fast_matches_naive",
                    false,
                    format!("fast round trip gap {gap:.3e} at depth {n}"),
                );
            }
        }
    }
    IdentityOutcome::new(
        "vc_fast_matches_naive",
        true,
        format!("oracle-checked at {compared} depths, gap < 1e-10"),
    )
}

fn random_step(sys: &MSystem, rng: &mut StdRng, n: i64, p: i64) -> StepFunction {
    let len = sys.cell_count((n + p) as u32).unwrap();
    let coeffs = (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StepFunction::new(sys, Space::Primal, n, p, coeffs).unwrap()
}

fn scale_pairs(cap: u32) -> Vec<(i64, i64)> {
    let c = cap as i64;
    vec![(0, 0), (1, 0), (0, 1), (c, c - 1), (c - 1, c), (-1, c), (c, -1)]
}

/// Fourier transforms of step functions swap the value and support scales
/// and invert exactly.
fn check_fourier_round_trip(sys: &MSystem, cap: u32) -> IdentityOutcome {
    let mut rng = StdRng::seed_from_u64(0xf00d);
    let mut checked = 0u32;
    for (n, p) in scale_pairs(cap) {
        for _ in 0..8 {
            let f = random_step(sys, &mut rng, n, p);
            let fhat = match fourier_step(sys, &f) {
                Ok(v) => v,
                Err(e) => {
                    return IdentityOutcome::new(
                        "fourier_round_trip",
                        false,
                        format!("transform failed at scales ({n},{p}): {e}"),
                    )
                }
            };
            if fhat.value_scale() != p || fhat.support_scale() != n {
                return IdentityOutcome::new(
                    "fourier_round_trip",
                    false,
                    format!(
                        "shape law broken: ({n},{p}) -> ({},{})",
                        fhat.value_scale(),
                        fhat.support_scale()
                    ),
                );
            }
            let back = inverse_fourier_step(sys, &fhat).unwrap();
            let gap = back
                .coeffs()
                .iter()
                .zip(f.coeffs())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if gap > 1e-12 {
                return IdentityOutcome::new(
                    "fourier_round_trip",
                    false,
                    format!("round trip gap {gap:.3e} at scales ({n},{p})"),
                );
            }
            checked += 1;
        }
    }
    IdentityOutcome::new(
        "fourier_round_trip",
        true,
        format!("{checked} functions, shape law + round trip < 1e-12"),
    )
}

/// Grid sums of a step function and of its transform agree.
fn check_poisson(sys: &MSystem, cap: u32) -> IdentityOutcome {
    let mut rng = StdRng::seed_from_u64(0x9015);
    let mut worst = 0.0f64;
    for (n, p) in scale_pairs(cap) {
        for _ in 0..8 {
            let f = random_step(sys, &mut rng, n, p);
            let (lhs, rhs) = poisson_check(sys, &f).unwrap();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    IdentityOutcome::new(
        "poisson_summation",
        worst < 1e-10,
        format!("max |lhs - rhs| = {worst:.3e}"),
    )
}

/// Energy and inner products are preserved by the transform.
fn check_plancherel(sys: &MSystem, cap: u32) -> IdentityOutcome {
    let mut rng = StdRng::seed_from_u64(0x91a2);
    let mut worst = 0.0f64;
    for (n, p) in scale_pairs(cap) {
        for _ in 0..8 {
            let f = random_step(sys, &mut rng, n, p);
            let g = random_step(sys, &mut rng, n, p);
            let fhat = fourier_step(sys, &f).unwrap();
            let ghat = fourier_step(sys, &g).unwrap();
            worst = worst.max((f.energy(sys) - fhat.energy(sys)).abs());
            let lhs = f.inner_product(sys, &g).unwrap();
            let rhs = fhat.inner_product(sys, &ghat).unwrap();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    IdentityOutcome::new("plancherel", worst < 1e-12, format!("max gap = {worst:.3e}"))
}

/// Translating by a grid element multiplies the transform by the character
/// of the translation, checked at every dual anchor.
fn check_shift(sys: &MSystem, cap: u32) -> IdentityOutcome {
    let mut rng = StdRng::seed_from_u64(0x5417);
    let mut worst = 0.0f64;
    let m = sys.m();
    for (n, p) in scale_pairs(cap) {
        if p < 0 {
            continue;
        }
        let f = random_step(sys, &mut rng, n, p);
        for l in [0u64, 1, m - 1, m] {
            let l = BigUint::from(l);
            let g = shift_step(sys, &f, &l).unwrap();
            let ghat = fourier_step(sys, &g).unwrap();
            let fhat = fourier_step(sys, &f).unwrap();
            let gamma = sys.digits().gamma_point(&l);
            for j in 0..ghat.cell_count() {
                let omega =
                    sys.dual_digits().anchor_point(ghat.value_scale(), &BigUint::from(j));
                let character = sys.chi(&gamma, &omega).unwrap().to_complex();
                let expected = fhat.eval_at(sys, &omega).unwrap() * character;
                worst = worst.max((ghat.coeffs()[j] - expected).norm());
            }
        }
    }
    IdentityOutcome::new("shift_theorem", worst < 1e-12, format!("max gap = {worst:.3e}"))
}
