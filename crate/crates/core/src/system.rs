//! The validated triple `(M, D, D*)` with its precomputed character tables.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::digits::{DigitSet, Space};
use crate::error::{Error, Result};
use crate::intlinalg::DilationMatrix;

/// A digit system: an expanding matrix `M`, a digit set `D` for `M`, and a
/// digit set `D*` for the transpose `M*`.
///
/// Construction validates everything and precomputes the `m x m` table of
/// character exponents together with the `m`-th roots of unity, so that all
/// character arithmetic downstream is table lookups on exact residues.
/// Immutable after construction; safe for unrestricted concurrent use.
#[derive(Debug)]
pub struct MSystem {
    matrix: Arc<DilationMatrix>,
    dual_matrix: Arc<DilationMatrix>,
    digits: Arc<DigitSet>,
    dual_digits: Arc<DigitSet>,
    char_exponents: Vec<u64>,
    roots: Vec<Complex64>,
    label: Option<String>,
}

impl MSystem {
    /// Build a system from matrix rows with canonical digit sets on both sides.
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        Self::with_digits(rows, None, None, None)
    }

    /// Build a system from matrix rows and optional explicit digit sets.
    /// Omitted digit sets are generated canonically.
    pub fn with_digits(
        rows: &[Vec<i64>],
        digits: Option<&[Vec<i64>]>,
        dual_digits: Option<&[Vec<i64>]>,
        label: Option<String>,
    ) -> Result<Self> {
        let matrix = Arc::new(DilationMatrix::new(rows)?);
        let dual_matrix = Arc::new(matrix.transpose());
        let digits = Arc::new(match digits {
            Some(d) => DigitSet::validate(matrix.clone(), Space::Primal, d)?,
            None => DigitSet::canonical(matrix.clone(), Space::Primal),
        });
        let dual_digits = Arc::new(match dual_digits {
            Some(d) => DigitSet::validate(dual_matrix.clone(), Space::Dual, d)?,
            None => DigitSet::canonical(dual_matrix.clone(), Space::Dual),
        });

        let m = matrix.m();
        let mu = m as usize;
        let modulus = BigInt::from(m);
        let mut char_exponents = vec![0u64; mu * mu];
        for i in 0..mu {
            let adj_s = matrix.adj_mul_vec(
                &digits.digit(i).iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(),
            );
            for t in 0..mu {
                let dot: BigInt = adj_s
                    .iter()
                    .zip(dual_digits.digit(t).iter())
                    .map(|(a, &b)| a * BigInt::from(b))
                    .sum();
                let signed = if matrix.sign() < 0 { -dot } else { dot };
                char_exponents[i * mu + t] =
                    signed.mod_floor(&modulus).to_u64().expect("exponent fits in u64");
            }
        }
        let roots = (0..m).map(|e| crate::characters::unit_root(e, m)).collect();

        Ok(Self { matrix, dual_matrix, digits, dual_digits, char_exponents, roots, label })
    }

    pub fn matrix(&self) -> &Arc<DilationMatrix> {
        &self.matrix
    }

    pub fn dual_matrix(&self) -> &Arc<DilationMatrix> {
        &self.dual_matrix
    }

    pub fn digits(&self) -> &Arc<DigitSet> {
        &self.digits
    }

    pub fn dual_digits(&self) -> &Arc<DigitSet> {
        &self.dual_digits
    }

    pub fn digit_set(&self, space: Space) -> &Arc<DigitSet> {
        match space {
            Space::Primal => &self.digits,
            Space::Dual => &self.dual_digits,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// The radix `m = |det M|`.
    pub fn m(&self) -> u64 {
        self.matrix.m()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// The root of unity `exp(2 pi i e / m)` for a reduced exponent.
    pub fn root(&self, exponent: u64) -> Complex64 {
        self.roots[(exponent % self.m()) as usize]
    }

    /// Character exponent of the digit pair `(s_i, s*_t)`; see
    /// [`crate::characters`].
    pub fn digit_char_exponent(&self, i: usize, t: usize) -> u64 {
        self.char_exponents[i * self.m() as usize + t]
    }

    /// `m^n` as a checked cell/coefficient count.
    pub fn cell_count(&self, depth: u32) -> Result<usize> {
        let m = self.m() as u128;
        let count = m
            .checked_pow(depth)
            .filter(|&c| c <= (isize::MAX as u128))
            .ok_or(Error::DepthTooLarge { requested: u128::MAX, budget: isize::MAX as u128 })?;
        usize::try_from(count)
            .map_err(|_| Error::DepthTooLarge { requested: count, budget: isize::MAX as u128 })
    }
}
