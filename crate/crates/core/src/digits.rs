//! Digit sets, the carry-free group algebra, and m-adic grid indexing.
//!
//! A digit set `D = {s_0 = 0, s_1, ..., s_{m-1}}` is a complete residue
//! system of `Z^d mod M Z^d`. Under addition-with-discarded-carry it is an
//! abelian group; applying that group law digitwise to expansions
//! `x = sum_j M^-j x_j` gives the carry-free operations `oplus`/`ominus`.
//!
//! Points are kept as sparse digit expansions ([`MPoint`]), grid elements of
//! `H = {gamma_[k]}` are indexed by ordinary integers in base `m`
//! ([`GridPoint`]), and scale-`n` cells are indexed by the m-adic index of
//! their anchor `M^-n gamma_[k]`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::DilationMatrix;

/// Which of the two paired spaces a value lives in: the primal space built
/// from `M` and `D`, or the dual space built from the transpose and `D*`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Primal,
    Dual,
}

impl Space {
    pub fn opposite(self) -> Space {
        match self {
            Space::Primal => Space::Dual,
            Space::Dual => Space::Primal,
        }
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Space::Primal => write!(f, "X"),
            Space::Dual => write!(f, "X*"),
        }
    }
}

/// An ordered complete residue system mod `M`, with precomputed group tables.
///
/// `add(i, j)` is the index of the digit congruent to `s_i + s_j`
/// (the carry is discarded), `neg(i)` the index of the digit congruent to
/// `-s_i`. Tables are built once at validation time; afterwards the set is
/// immutable and safe to share across threads.
#[derive(Debug)]
pub struct DigitSet {
    matrix: Arc<DilationMatrix>,
    space: Space,
    digits: Vec<Vec<i64>>,
    add_table: Vec<usize>,
    neg_table: Vec<usize>,
}

impl DigitSet {
    /// Validate `candidates` as a digit set for `matrix`.
    ///
    /// Requires `candidates[0] = 0`, exactly `m` digits, and pairwise
    /// non-congruence mod `M`; builds the addition and negation tables.
    pub fn validate(
        matrix: Arc<DilationMatrix>,
        space: Space,
        candidates: &[Vec<i64>],
    ) -> Result<Self> {
        let m = matrix.m() as usize;
        let dim = matrix.dim();
        if candidates.len() != m {
            return Err(Error::WrongDigitCount { expected: m, got: candidates.len() });
        }
        for c in candidates {
            if c.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: c.len() });
            }
        }
        if !candidates[0].iter().all(|&c| c == 0) {
            return Err(Error::MissingZero);
        }
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        for (i, c) in candidates.iter().enumerate() {
            let key = matrix.coset_key(&to_big(c));
            if let Some(&j) = seen.get(&key) {
                return Err(Error::NotAResidueSystem { i: j, j: i });
            }
            seen.insert(key, i);
        }

        let digits: Vec<Vec<i64>> = candidates.to_vec();
        let mut add_table = vec![0usize; m * m];
        for i in 0..m {
            for j in 0..=i {
                let sum: Vec<BigInt> = digits[i]
                    .iter()
                    .zip(digits[j].iter())
                    .map(|(&a, &b)| BigInt::from(a) + BigInt::from(b))
                    .collect();
                let (k, _carry) = matrix.residue_decompose(&sum, &digits)?;
                add_table[i * m + j] = k;
                add_table[j * m + i] = k;
            }
        }
        let mut neg_table = vec![0usize; m];
        for (i, digit) in digits.iter().enumerate() {
            let negated: Vec<BigInt> = digit.iter().map(|&a| BigInt::from(-a)).collect();
            let (k, _carry) = matrix.residue_decompose(&negated, &digits)?;
            neg_table[i] = k;
        }

        Ok(Self { matrix, space, digits, add_table, neg_table })
    }

    /// Generate the canonical digit set for `matrix`.
    ///
    /// Enumerates integer vectors in growing max-norm shells, ordered by
    /// (max-norm, number of negative entries, lexicographic order), and keeps
    /// the first representative seen for each residue class. The shell radius
    /// doubles whenever classes are still missing; every class has a bounded
    /// representative, so this terminates. The kept representative per class
    /// does not depend on the radius schedule, which makes the output
    /// reproducible across runs and implementations.
    pub fn canonical(matrix: Arc<DilationMatrix>, space: Space) -> Self {
        let m = matrix.m() as usize;
        let dim = matrix.dim();
        let mut reps: HashMap<Vec<u64>, Vec<i64>> = HashMap::new();
        reps.insert(matrix.coset_key(&vec![BigInt::zero(); dim]), vec![0; dim]);

        let mut radius: i64 = 1;
        let mut scanned: i64 = 0;
        while reps.len() < m {
            let mut shell: Vec<Vec<i64>> = Vec::new();
            for v in box_points(dim, radius) {
                let norm = v.iter().map(|&c| c.abs()).max().unwrap_or(0);
                if norm > scanned {
                    shell.push(v);
                }
            }
            shell.sort_by_key(|v| {
                let norm = v.iter().map(|&c| c.abs()).max().unwrap_or(0);
                let negatives = v.iter().filter(|&&c| c < 0).count();
                (norm, negatives, v.clone())
            });
            for v in shell {
                let key = matrix.coset_key(&to_big(&v));
                reps.entry(key).or_insert(v);
                if reps.len() == m {
                    break;
                }
            }
            scanned = radius;
            radius *= 2;
        }

        let mut digits: Vec<Vec<i64>> = reps.into_values().collect();
        digits.sort_by_key(|v| {
            let norm = v.iter().map(|&c| c.abs()).max().unwrap_or(0);
            let negatives = v.iter().filter(|&&c| c < 0).count();
            (norm, negatives, v.clone())
        });
        debug_assert!(digits[0].iter().all(|&c| c == 0));
        Self::validate(matrix, space, &digits)
            .expect("canonical residue representatives always form a digit set")
    }

    pub fn matrix(&self) -> &Arc<DilationMatrix> {
        &self.matrix
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Number of digits, `m = |det M|`.
    pub fn m(&self) -> usize {
        self.digits.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn digit(&self, i: usize) -> &[i64] {
        &self.digits[i]
    }

    pub fn digits(&self) -> &[Vec<i64>] {
        &self.digits
    }

    /// Group addition on digit indices (carry discarded).
    pub fn add(&self, i: usize, j: usize) -> usize {
        self.add_table[i * self.digits.len() + j]
    }

    /// Group negation on digit indices.
    pub fn neg(&self, i: usize) -> usize {
        self.neg_table[i]
    }

    /// Split `v = s_i + M q`; see [`DilationMatrix::residue_decompose`].
    pub fn decompose(&self, v: &[BigInt]) -> Result<(usize, Vec<BigInt>)> {
        self.matrix.residue_decompose(v, &self.digits)
    }

    /// The grid vector `gamma_[k] = sum_j M^j s_{k_j}` for the base-m
    /// digits `k_j` of `k`.
    pub fn gamma_vector(&self, k: &BigUint) -> Vec<BigInt> {
        let m = self.digits.len() as u64;
        let digits_le = base_m_digits(k, m);
        let mut v = vec![BigInt::zero(); self.dim()];
        for &d in digits_le.iter().rev() {
            v = self.matrix.mul_vec(&v);
            for (c, &s) in v.iter_mut().zip(self.digits[d].iter()) {
                *c += BigInt::from(s);
            }
        }
        v
    }

    /// Inverse of [`Self::gamma_vector`]: recover `k` from a grid vector by
    /// greedy digit extraction. Vectors outside `H` enter a nonzero cycle,
    /// which is detected and reported as [`Error::NotInH`].
    pub fn index_of_gamma(&self, gamma: &[BigInt]) -> Result<BigUint> {
        let m = BigUint::from(self.digits.len());
        let mut v: Vec<BigInt> = gamma.to_vec();
        let mut k = BigUint::zero();
        let mut place = BigUint::from(1u32);
        let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
        while !v.iter().all(|c| c.is_zero()) {
            if !seen.insert(v.clone()) {
                return Err(Error::NotInH);
            }
            let (i, q) = self.decompose(&v).map_err(|_| Error::NotInH)?;
            k += &place * BigUint::from(i);
            place *= &m;
            v = q;
        }
        Ok(k)
    }

    /// `gamma_[k]` as a sparse point (digits at positions `<= 0`).
    pub fn gamma_point(&self, k: &BigUint) -> MPoint {
        self.anchor_point(0, k)
    }

    /// The cell anchor `M^-scale gamma_[k]` as a sparse point: the j-th
    /// base-m digit of `k` sits at position `scale - j`.
    pub fn anchor_point(&self, scale: i64, k: &BigUint) -> MPoint {
        let m = self.digits.len() as u64;
        let mut digits: Vec<(i64, usize)> = base_m_digits(k, m)
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d != 0)
            .map(|(j, d)| (scale - j as i64, d))
            .collect();
        digits.reverse(); // ascending position order
        MPoint { space: self.space, digits }
    }

    /// Digitwise group addition of two expansions; no carries propagate.
    pub fn oplus(&self, x: &MPoint, y: &MPoint) -> Result<MPoint> {
        if x.space != self.space || y.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut digits = Vec::with_capacity(x.digits.len() + y.digits.len());
        let (mut i, mut j) = (0, 0);
        while i < x.digits.len() || j < y.digits.len() {
            let xp = x.digits.get(i).map(|&(p, _)| p);
            let yp = y.digits.get(j).map(|&(p, _)| p);
            match (xp, yp) {
                (Some(p), Some(q)) if p == q => {
                    let d = self.add(x.digits[i].1, y.digits[j].1);
                    if d != 0 {
                        digits.push((p, d));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(p), Some(q)) if p < q => {
                    digits.push(x.digits[i]);
                    i += 1;
                    let _ = p;
                }
                (Some(_), Some(_)) => {
                    digits.push(y.digits[j]);
                    j += 1;
                }
                (Some(_), None) => {
                    digits.push(x.digits[i]);
                    i += 1;
                }
                (None, Some(_)) => {
                    digits.push(y.digits[j]);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(MPoint { space: self.space, digits })
    }

    /// `x ominus y`, the unique `z` with `z oplus y = x`.
    pub fn ominus(&self, x: &MPoint, y: &MPoint) -> Result<MPoint> {
        let negated = MPoint {
            space: y.space,
            digits: y.digits.iter().map(|&(p, d)| (p, self.neg(d))).collect(),
        };
        self.oplus(x, &negated)
    }

    /// Index of the scale-`scale` cell containing `x`.
    ///
    /// The cell is determined by the digits of `x` at positions `<= scale`;
    /// deeper digits locate `x` within the cell and are dropped. Consistent
    /// under refinement: the index at scale `n` determines the index at every
    /// coarser scale `n' <= n` by discarding low base-m digits.
    pub fn cell_of_point(&self, x: &MPoint, scale: i64) -> Result<BigUint> {
        if x.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let m = BigUint::from(self.digits.len());
        let mut k = BigUint::zero();
        for &(pos, d) in &x.digits {
            if pos <= scale {
                k += BigUint::from(d) * m.pow_big(scale - pos);
            }
        }
        Ok(k)
    }
}

trait PowBig {
    fn pow_big(&self, e: i64) -> BigUint;
}

impl PowBig for BigUint {
    fn pow_big(&self, e: i64) -> BigUint {
        debug_assert!(e >= 0);
        let mut out = BigUint::from(1u32);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                out *= &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }
}

/// A point of the digit space, stored as its (unique) finite expansion
/// `x = sum_j M^-j x_j`: a sorted sparse list of `(position, digit index)`
/// pairs with all stored digits nonzero.
///
/// Positions `>= 1` are the fractional part (inside the tile for points of
/// `U`), positions `<= 0` the grid part (elements of `H`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPoint {
    space: Space,
    digits: Vec<(i64, usize)>,
}

impl MPoint {
    pub fn zero(space: Space) -> Self {
        Self { space, digits: Vec::new() }
    }

    /// Build from `(position, digit index)` pairs. Zero digits are dropped,
    /// duplicate positions are rejected, and indices must be below `m`.
    pub fn from_digits(space: Space, pairs: &[(i64, usize)], m: usize) -> Result<Self> {
        let mut digits: Vec<(i64, usize)> =
            pairs.iter().copied().filter(|&(_, d)| d != 0).collect();
        digits.sort_unstable();
        for w in digits.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::ScaleContract(format!(
                    "duplicate digit position {}",
                    w[0].0
                )));
            }
        }
        for &(_, d) in &digits {
            if d >= m {
                return Err(Error::InvalidDigitSet);
            }
        }
        Ok(Self { space, digits })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Sorted `(position, digit index)` pairs, all nonzero.
    pub fn digits(&self) -> &[(i64, usize)] {
        &self.digits
    }

    /// Digit index at `position` (0 when absent).
    pub fn digit_at(&self, position: i64) -> usize {
        match self.digits.binary_search_by_key(&position, |&(p, _)| p) {
            Ok(i) => self.digits[i].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn min_position(&self) -> Option<i64> {
        self.digits.first().map(|&(p, _)| p)
    }

    pub fn max_position(&self) -> Option<i64> {
        self.digits.last().map(|&(p, _)| p)
    }

    /// `x -> M^t x`: multiplying by `M` shifts every digit one position up
    /// toward the grid side, so positions move by `-t`.
    pub fn scaled(&self, t: i64) -> MPoint {
        MPoint {
            space: self.space,
            digits: self.digits.iter().map(|&(p, d)| (p - t, d)).collect(),
        }
    }

    /// Concatenate two expansions with disjoint digit support.
    ///
    /// For such operands the vector sum and the carry-free sum agree
    /// (no digit position receives two contributions), e.g. `u + h = u oplus h`
    /// for `u` in the tile and `h` in the grid.
    pub fn concat_disjoint(&self, other: &MPoint) -> Result<MPoint> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        digits.sort_unstable();
        for w in digits.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::ScaleContract(format!(
                    "digit supports overlap at position {}",
                    w[0].0
                )));
            }
        }
        Ok(MPoint { space: self.space, digits })
    }

    /// The point as an exact rational vector `(numerators, denominator)` with
    /// positive denominator `m^J`, where `J` is the deepest digit position.
    pub fn to_rational(&self, set: &DigitSet) -> (Vec<BigInt>, BigInt) {
        let mat = set.matrix();
        let scale = self.max_position().unwrap_or(0).max(0);
        // M^scale x is an integer vector; evaluate it by Horner over positions.
        let shifted = self.scaled(scale);
        let mut v = vec![BigInt::zero(); set.dim()];
        let min = shifted.min_position().unwrap_or(0).min(0);
        for pos in min..=0 {
            v = mat.mul_vec(&v);
            let d = shifted.digit_at(pos);
            if d != 0 {
                for (c, &s) in v.iter_mut().zip(set.digit(d).iter()) {
                    *c += BigInt::from(s);
                }
            }
        }
        // x = M^-scale v = sign^scale adj^scale v / m^scale.
        let mut num = v;
        for _ in 0..scale {
            num = mat.adj_mul_vec(&num);
            if mat.sign() < 0 {
                for c in num.iter_mut() {
                    *c = -&*c;
                }
            }
        }
        let den = BigInt::from(mat.m()).pow(scale as u32);
        (num, den)
    }
}

/// A grid point `M^-scale gamma_[index]`: the anchor of cell
/// `U_{scale, index}`. Scale 0 gives the grid `H` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoint {
    pub scale: i64,
    pub index: BigUint,
}

impl GridPoint {
    pub fn new(scale: i64, index: BigUint) -> Self {
        Self { scale, index }
    }

    /// The anchor as a sparse digit expansion.
    pub fn to_point(&self, set: &DigitSet) -> MPoint {
        set.anchor_point(self.scale, &self.index)
    }

    /// Lossless inverse of [`Self::to_point`]; fails with `ScaleTooCoarse`
    /// if `x` carries digits at positions beyond `scale`.
    pub fn from_point(set: &DigitSet, x: &MPoint, scale: i64) -> Result<GridPoint> {
        if let Some(max) = x.max_position() {
            if max > scale {
                return Err(Error::ScaleTooCoarse { scale });
            }
        }
        let index = set.cell_of_point(x, scale)?;
        Ok(GridPoint { scale, index })
    }
}

/// Little-endian base-`m` digits of `k` (empty for zero).
pub fn base_m_digits(k: &BigUint, m: u64) -> Vec<usize> {
    let mut digits = Vec::new();
    let m = BigUint::from(m);
    let mut k = k.clone();
    while !k.is_zero() {
        let (q, r) = num_integer::Integer::div_rem(&k, &m);
        digits.push(r.to_usize().expect("base-m digit fits in usize"));
        k = q;
    }
    digits
}

/// Number of base-`m` digits of `k` (0 for `k = 0`).
pub fn base_m_len(k: &BigUint, m: u64) -> u32 {
    base_m_digits(k, m).len() as u32
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// All integer vectors in the box `max-norm <= radius`.
fn box_points(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-radius; dim];
    loop {
        out.push(v.clone());
        let mut axis = 0;
        loop {
            if axis == dim {
                return out;
            }
            v[axis] += 1;
            if v[axis] <= radius {
                break;
            }
            v[axis] = -radius;
            axis += 1;
        }
    }
}
