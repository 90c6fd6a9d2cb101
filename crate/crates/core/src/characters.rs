//! Exact character and Walsh-function evaluation.
//!
//! For a digit `s` of `D` and a digit `t` of `D*`, the pairing
//! `<M^-1 s, t> = <adjugate(M) s, t> / det` is a rational with denominator
//! dividing `det`, so `exp(2 pi i <M^-1 s, t>)` is always an `m`-th root of
//! unity. Characters are therefore tracked as exact residues mod `m`
//! ([`CharValue`]); floating point enters only at the final root-of-unity
//! lookup.
//!
//! The character of a point pair is
//! `chi(x, w) = exp(2 pi i sum_j <M^-1 x_j, w_{1-j}>)`:
//! digit `j` of `x` pairs with digit `1-j` of `w`. The pairing index is
//! load-bearing; `tests` pin it with scalar radix-2 values.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::digits::{MPoint, Space};
use crate::error::{Error, Result};
use crate::system::MSystem;

/// An `m`-th root of unity `exp(2 pi i exponent / order)`, stored exactly.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharValue {
    exponent: u64,
    order: u64,
}

impl CharValue {
    pub fn new(exponent: u64, order: u64) -> Self {
        debug_assert!(order >= 1);
        Self { exponent: exponent % order, order }
    }

    pub fn one(order: u64) -> Self {
        Self { exponent: 0, order }
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Complex conjugate: negates the exponent mod `order`.
    pub fn conj(self) -> Self {
        Self { exponent: (self.order - self.exponent) % self.order, order: self.order }
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }

    pub fn to_complex(&self) -> Complex64 {
        unit_root(self.exponent, self.order)
    }
}

/// `exp(2 pi i exponent / order)`, with quarter-turn angles snapped to
/// their exact values so radix-2 and radix-4 patterns stay bit-exact.
pub(crate) fn unit_root(exponent: u64, order: u64) -> Complex64 {
    let e = exponent % order;
    if (4 * e).is_multiple_of(order) {
        match (4 * e) / order {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / order as f64)
    }
}

/// Multiplication of character values is addition of exponents mod `m`.
impl std::ops::Mul for CharValue {
    type Output = CharValue;

    fn mul(self, rhs: CharValue) -> CharValue {
        assert_eq!(self.order, rhs.order, "character values of different order");
        CharValue::new(self.exponent + rhs.exponent, self.order)
    }
}

/// A multiset of exponents in `Z/m`, used to evaluate sums of roots of unity
/// exactly where the structure allows it.
///
/// The exponent maps arising from digit sums are group homomorphisms into
/// `Z/m`, so their value multisets are uniform over a subgroup: the sum is
/// the total count when every exponent is zero, and exactly zero when the
/// support is a nontrivial subgroup hit uniformly. Anything else falls back
/// to floating point (and signals a broken digit set to the caller).
#[derive(Debug, Clone)]
pub struct ExponentHistogram {
    counts: Vec<u64>,
}

/// Exact classification of a root-of-unity sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootSum {
    /// All exponents are zero: the sum is the total count.
    Total(u64),
    /// Uniform over a nontrivial subgroup of `Z/m`: the sum cancels exactly.
    Zero,
    /// No exact structure detected; the floating-point value is reported.
    Inexact(Complex64),
}

impl ExponentHistogram {
    pub fn new(order: u64) -> Self {
        Self { counts: vec![0; order as usize] }
    }

    pub fn add(&mut self, exponent: u64) {
        let m = self.counts.len() as u64;
        self.counts[(exponent % m) as usize] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn classify(&self, sys: &MSystem) -> RootSum {
        let m = self.counts.len();
        let total = self.total();
        if self.counts[0] == total {
            return RootSum::Total(total);
        }
        let support: Vec<usize> =
            (0..m).filter(|&e| self.counts[e] > 0).collect();
        let uniform = support.iter().all(|&e| self.counts[e] == self.counts[support[0]]);
        if uniform && is_subgroup(&support, m) {
            return RootSum::Zero;
        }
        let mut acc = Complex64::zero();
        for (e, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                acc += sys.root(e as u64) * c as f64;
            }
        }
        RootSum::Inexact(acc)
    }

    /// The sum as a complex number, exact in the structured cases.
    pub fn evaluate(&self, sys: &MSystem) -> Complex64 {
        match self.classify(sys) {
            RootSum::Total(n) => Complex64::new(n as f64, 0.0),
            RootSum::Zero => Complex64::zero(),
            RootSum::Inexact(z) => z,
        }
    }
}

fn is_subgroup(support: &[usize], m: usize) -> bool {
    if support.is_empty() || support[0] != 0 {
        return false;
    }
    let member: Vec<bool> = {
        let mut v = vec![false; m];
        for &e in support {
            v[e] = true;
        }
        v
    };
    support
        .iter()
        .all(|&a| support.iter().all(|&b| member[(a + b) % m]))
}

impl MSystem {
    /// Character of a digit pair: `exp(2 pi i <M^-1 s_i, s*_t>)` with
    /// exponent `sign(det) * <adjugate(M) s_i, s*_t> mod m`, computed exactly.
    pub fn digit_char(&self, i: usize, t: usize) -> CharValue {
        CharValue::new(self.digit_char_exponent(i, t), self.m())
    }

    /// Exponent of `chi(x, omega)`: digit `j` of `x` pairs with digit `1-j`
    /// of `omega`, each pair contributing its digit-character exponent.
    pub fn chi_exponent(&self, x: &MPoint, omega: &MPoint) -> Result<u64> {
        if x.space() != Space::Primal || omega.space() != Space::Dual {
            return Err(Error::SpaceMismatch);
        }
        let mut e = 0u64;
        for &(pos, di) in x.digits() {
            let t = omega.digit_at(1 - pos);
            if t != 0 {
                e += self.digit_char_exponent(di, t);
            }
        }
        Ok(e % self.m())
    }

    /// The character `chi(x, omega)` as an exact root of unity.
    ///
    /// Multiplicative in both arguments under the carry-free addition:
    /// `chi(x oplus y, w) = chi(x, w) chi(y, w)`, and compatible with
    /// rescaling: `chi(M x, w) = chi(x, M* w)`.
    pub fn chi(&self, x: &MPoint, omega: &MPoint) -> Result<CharValue> {
        Ok(CharValue::new(self.chi_exponent(x, omega)?, self.m()))
    }

    /// Walsh function `W_alpha(x) = chi(x, gamma*_[alpha])`.
    ///
    /// `W_0 = 1`; for `alpha < m^n` the value only depends on the scale-`n`
    /// cell of `x`, and the function is invariant under `oplus` with grid
    /// elements.
    pub fn walsh_eval(&self, alpha: &BigUint, x: &MPoint) -> Result<CharValue> {
        let omega = self.dual_digits().gamma_point(alpha);
        self.chi(x, &omega)
    }

    /// The digit character sum `sum_{t in D*} exp(2 pi i <M^-1 l, t>)` for an
    /// arbitrary integer vector `l`.
    ///
    /// Returns exactly `m` when `l = 0 (mod M)` and exactly `0` otherwise;
    /// the cancellation is detected structurally, not by rounding. A value
    /// that is neither signals a digit list that is not a complete residue
    /// system.
    pub fn char_sum(&self, l: &[BigInt]) -> Complex64 {
        let m = self.m();
        let modulus = BigInt::from(m);
        let adj_l = self.matrix().adj_mul_vec(l);
        let mut hist = ExponentHistogram::new(m);
        for t in 0..m as usize {
            let dot: BigInt = adj_l
                .iter()
                .zip(self.dual_digits().digit(t).iter())
                .map(|(a, &b)| a * BigInt::from(b))
                .sum();
            let signed = if self.matrix().sign() < 0 { -dot } else { dot };
            hist.add(signed.mod_floor(&modulus).to_u64().expect("exponent fits in u64"));
        }
        hist.evaluate(self)
    }

    /// Normalized kernel sum `m^-n sum_{gamma* in H*_n} chi(x, gamma*)`,
    /// evaluated exactly: 1 when `x` lies in the scale-`n` cell at the
    /// origin, 0 on the rest of the tile.
    pub fn kernel_partition_sum(&self, x: &MPoint, n: u32) -> Result<u8> {
        self.kernel_cell_sum(x, n, &BigUint::zero())
    }

    /// Weighted kernel sum recognizing the scale-`n` cell with index `k`:
    /// `m^-n sum_{gamma*} conj(chi(M^-n gamma_[k], gamma*)) chi(x, gamma*)`.
    ///
    /// The anchor weights shift the plain kernel sum onto cell `k`, so the
    /// result is the indicator of that cell, again evaluated exactly.
    pub fn kernel_cell_sum(&self, x: &MPoint, n: u32, k: &BigUint) -> Result<u8> {
        if x.space() != Space::Primal {
            return Err(Error::SpaceMismatch);
        }
        if x.min_position().is_some_and(|p| p <= 0) {
            return Err(Error::ScaleTooCoarse { scale: 0 });
        }
        let m = self.m();
        let count = self.cell_count(n)?;
        let anchor = self.digits().anchor_point(n as i64, k);
        let mut hist = ExponentHistogram::new(m);
        for j in 0..count {
            let gamma_star = self.dual_digits().gamma_point(&BigUint::from(j));
            let ex = self.chi_exponent(x, &gamma_star)?;
            let ea = self.chi_exponent(&anchor, &gamma_star)?;
            hist.add((ex + m - ea) % m);
        }
        match hist.classify(self) {
            RootSum::Total(_) => Ok(1),
            RootSum::Zero => Ok(0),
            RootSum::Inexact(_) => Err(Error::InvalidDigitSet),
        }
    }
}
