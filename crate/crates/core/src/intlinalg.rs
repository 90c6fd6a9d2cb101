//! Exact integer linear algebra: determinants, adjugates, residue decomposition,
//! and the expanding-matrix certificate.
//!
//! Everything that feeds digit or character arithmetic is computed over
//! [`BigInt`] so that no intermediate result is ever rounded. Floating point
//! appears only in the eigenvalue certificate, which is a yes/no gate with an
//! explicit tolerance, never a source of values used downstream.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An eigenvalue modulus must clear `1 + EXPANSION_MARGIN` to be accepted.
///
/// The expansion condition is open, so borderline matrices are rejected
/// loudly instead of being silently mis-handled.
pub const EXPANSION_MARGIN: f64 = 1e-6;

/// Exponent for the `‖M^-N‖ < 1` power check that backs the eigenvalue test.
pub const POWER_CHECK_EXPONENT: u32 = 64;

/// Radix cap: digit tables are dense `m x m` arrays, so a huge determinant
/// is rejected up front instead of exhausting memory.
pub const MAX_RADIX: u64 = 1 << 16;

/// Determinant and adjugate of a square integer matrix, both exact.
///
/// The adjugate satisfies `entries * adjugate = det * I` as an integer
/// identity; `det = 0` is a valid return (the caller rejects it).
pub fn det_adjugate(dim: usize, entries: &[i64]) -> (BigInt, Vec<BigInt>) {
    assert_eq!(entries.len(), dim * dim, "entries must be a dim x dim matrix");
    let big: Vec<BigInt> = entries.iter().map(|&e| BigInt::from(e)).collect();
    let det = det_big(dim, &big);
    let mut adjugate = vec![BigInt::zero(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let minor = minor_matrix(dim, &big, i, j);
            let cof = det_big(dim - 1, &minor);
            let cof = if (i + j) % 2 == 0 { cof } else { -cof };
            // adj = transpose of the cofactor matrix
            adjugate[j * dim + i] = cof;
        }
    }
    (det, adjugate)
}

fn det_big(dim: usize, a: &[BigInt]) -> BigInt {
    match dim {
        0 => BigInt::one(),
        1 => a[0].clone(),
        2 => &a[0] * &a[3] - &a[1] * &a[2],
        _ => {
            let mut det = BigInt::zero();
            for col in 0..dim {
                if a[col].is_zero() {
                    continue;
                }
                let minor = minor_matrix(dim, a, 0, col);
                let term = &a[col] * det_big(dim - 1, &minor);
                if col % 2 == 0 {
                    det += term;
                } else {
                    det -= term;
                }
            }
            det
        }
    }
}

fn minor_matrix(dim: usize, a: &[BigInt], row: usize, col: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity((dim - 1) * (dim - 1));
    for r in 0..dim {
        if r == row {
            continue;
        }
        for c in 0..dim {
            if c == col {
                continue;
            }
            out.push(a[r * dim + c].clone());
        }
    }
    out
}

/// An integer matrix whose eigenvalues all have modulus greater than 1,
/// with its determinant, adjugate and certificate cached.
///
/// The adjugate is what lets `M^-1 v` be evaluated without rounding:
/// `M^-1 v = adjugate(M) v / det`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationMatrix {
    dim: usize,
    entries: Vec<i64>,
    det: BigInt,
    m: u64,
    sign: i64,
    adjugate: Vec<BigInt>,
    min_eigenvalue_modulus: f64,
}

impl DilationMatrix {
    /// Validate `rows` as an expanding integer matrix.
    ///
    /// Rejects non-square input, a zero determinant, and any matrix whose
    /// eigenvalue certificate fails (see [`check_dilation`]).
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        for r in rows {
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, cols: r.len() });
            }
        }
        let entries: Vec<i64> = rows.iter().flatten().copied().collect();
        let (det, adjugate) = det_adjugate(dim, &entries);
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let min_eigenvalue_modulus = check_dilation(dim, &entries, &det, &adjugate)?;
        let m = det
            .abs()
            .to_u64()
            .filter(|&m| m <= MAX_RADIX)
            .ok_or(Error::UnsupportedRadix { m: u64::MAX })?;
        let sign = if det.is_negative() { -1 } else { 1 };
        Ok(Self {
            dim,
            entries,
            det,
            m,
            sign,
            adjugate,
            min_eigenvalue_modulus,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// The radix `m = |det|`.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// `det / |det|`, so `det = sign * m`.
    pub fn sign(&self) -> i64 {
        self.sign
    }

    /// Row-major adjugate; `entries * adjugate = det * I` exactly.
    pub fn adjugate(&self) -> &[BigInt] {
        &self.adjugate
    }

    /// Smallest eigenvalue modulus found by the certificate.
    pub fn min_eigenvalue_modulus(&self) -> f64 {
        self.min_eigenvalue_modulus
    }

    /// The transposed matrix, as a fully built `DilationMatrix`.
    ///
    /// Shares the determinant and certificate; the adjugate transposes.
    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![0i64; d * d];
        let mut adjugate = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j];
                adjugate[j * d + i] = self.adjugate[i * d + j].clone();
            }
        }
        Self {
            dim: d,
            entries,
            det: self.det.clone(),
            m: self.m,
            sign: self.sign,
            adjugate,
            min_eigenvalue_modulus: self.min_eigenvalue_modulus,
        }
    }

    /// `M v` over exact integers.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        let d = self.dim;
        (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| BigInt::from(self.entries[r * d + c]) * &v[c])
                    .sum()
            })
            .collect()
    }

    /// `adjugate(M) v` over exact integers, i.e. `det * M^-1 v`.
    pub fn adj_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        let d = self.dim;
        (0..d)
            .map(|r| (0..d).map(|c| &self.adjugate[r * d + c] * &v[c]).sum())
            .collect()
    }

    /// Canonical label of the residue class of `v` mod `M Z^d`.
    ///
    /// `v = w (mod M)` iff `M^-1 (v - w)` is integral iff
    /// `adjugate * v = adjugate * w (mod det)` componentwise, so the
    /// componentwise residue of `adjugate * v` mod `m` is a complete
    /// coset invariant.
    pub fn coset_key(&self, v: &[BigInt]) -> Vec<u64> {
        let modulus = BigInt::from(self.m);
        self.adj_mul_vec(v)
            .iter()
            .map(|c| c.mod_floor(&modulus).to_u64().expect("residue fits in u64"))
            .collect()
    }

    /// Whether `v = 0 (mod M)`, i.e. `M^-1 v` is integral.
    pub fn divides(&self, v: &[BigInt]) -> bool {
        self.adj_mul_vec(v).iter().all(|c| (c % &self.det).is_zero())
    }

    /// Split `v = s_i + M q` against an ordered digit list.
    ///
    /// Scans the digits and solves `M q = v - s_i` by exact rational
    /// elimination (`q = adjugate (v - s_i) / det`), keeping `q` only when it
    /// is integral. Exactly one digit must match; zero or several matches
    /// mean the list is not a complete residue system.
    pub fn residue_decompose(
        &self,
        v: &[BigInt],
        digits: &[Vec<i64>],
    ) -> Result<(usize, Vec<BigInt>)> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let mut found: Option<(usize, Vec<BigInt>)> = None;
        for (i, s) in digits.iter().enumerate() {
            let w: Vec<BigInt> = v
                .iter()
                .zip(s.iter())
                .map(|(vc, &sc)| vc - BigInt::from(sc))
                .collect();
            let num = self.adj_mul_vec(&w);
            if num.iter().all(|c| (c % &self.det).is_zero()) {
                if found.is_some() {
                    return Err(Error::InvalidDigitSet);
                }
                let q = num.iter().map(|c| c / &self.det).collect();
                found = Some((i, q));
            }
        }
        found.ok_or(Error::InvalidDigitSet)
    }

    /// The matrix as floating point, for geometry and diagnostics.
    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_row_iterator(self.dim, self.dim, self.entries.iter().map(|&e| e as f64))
    }

    /// `M^-1` as floating point.
    pub fn inverse_f64(&self) -> DMatrix<f64> {
        let det = big_to_f64(&self.det);
        DMatrix::from_row_iterator(self.dim, self.dim, self.adjugate.iter().map(big_to_f64)) / det
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Expansion certificate: every eigenvalue modulus must exceed
/// `1 + EXPANSION_MARGIN`, and `‖M^-64‖` must already be below 1.
///
/// Returns the smallest eigenvalue modulus on acceptance.
fn check_dilation(dim: usize, entries: &[i64], det: &BigInt, adjugate: &[BigInt]) -> Result<f64> {
    let mf = DMatrix::from_row_iterator(dim, dim, entries.iter().map(|&e| e as f64));
    let min_modulus = mf
        .complex_eigenvalues()
        .iter()
        .map(|ev| ev.norm())
        .fold(f64::INFINITY, f64::min);
    if min_modulus.is_nan() || min_modulus < 1.0 + EXPANSION_MARGIN {
        return Err(Error::NotExpanding { modulus: min_modulus });
    }
    // Belt-and-braces: the inverse iterated POWER_CHECK_EXPONENT times must
    // contract below operator norm 1 (checked via the Frobenius bound).
    let detf = big_to_f64(det);
    let mut p = DMatrix::from_row_iterator(dim, dim, adjugate.iter().map(big_to_f64)) / detf;
    let mut e = POWER_CHECK_EXPONENT;
    debug_assert!(e.is_power_of_two());
    while e > 1 {
        p = &p * &p;
        e /= 2;
    }
    let contracted = p.norm();
    if contracted.is_nan() || contracted >= 1.0 {
        return Err(Error::NotExpanding { modulus: min_modulus });
    }
    Ok(min_modulus)
}
