//! Python bindings: a single `System` class wrapping the validated triple
//! `(M, D, D*)` with the transforms, characters, and tile operations.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use mpos_core::{
    fourier_step, inverse_fourier_step, poisson_check, shift_step, tile_points, vc_fast,
    vc_forward_naive, vc_inverse_naive, Direction, Error as CoreError, MSystem, Side, Space,
    SpectrumVector, StepFunction, DEFAULT_POINT_BUDGET,
};

fn core_err(e: CoreError) -> PyErr {
    PyValueError::new_err(format!("{}: {}", e.code(), e))
}

fn parse_space(token: &str) -> PyResult<Space> {
    match token {
        "X" => Ok(Space::Primal),
        "X*" => Ok(Space::Dual),
        other => Err(PyValueError::new_err(format!("unknown space `{other}`, expected X or X*"))),
    }
}

fn space_token(space: Space) -> &'static str {
    match space {
        Space::Primal => "X",
        Space::Dual => "X*",
    }
}

/// A validated digit system: expanding integer matrix, digit set, dual
/// digit set, with exact character arithmetic behind every operation.
#[pyclass(frozen)]
struct System {
    inner: MSystem,
}

impl System {
    fn depth_for_len(&self, len: usize) -> PyResult<u32> {
        let m = self.inner.m() as usize;
        let mut size = 1usize;
        let mut depth = 0u32;
        while size < len {
            size = size.checked_mul(m).ok_or_else(|| {
                PyValueError::new_err(format!("length {len} is not a power of m = {m}"))
            })?;
            depth += 1;
        }
        if size != len {
            return Err(PyValueError::new_err(format!("length {len} is not a power of m = {m}")));
        }
        Ok(depth)
    }
}

#[pymethods]
impl System {
    #[new]
    #[pyo3(signature = (matrix, digits=None, dual_digits=None, label=None))]
    fn new(
        matrix: Vec<Vec<i64>>,
        digits: Option<Vec<Vec<i64>>>,
        dual_digits: Option<Vec<Vec<i64>>>,
        label: Option<String>,
    ) -> PyResult<Self> {
        let inner = MSystem::with_digits(&matrix, digits.as_deref(), dual_digits.as_deref(), label)
            .map_err(core_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// The radix `m = |det M|`.
    #[getter]
    fn m(&self) -> u64 {
        self.inner.m()
    }

    #[getter]
    fn det_sign(&self) -> i64 {
        self.inner.matrix().sign()
    }

    #[getter]
    fn label(&self) -> Option<String> {
        self.inner.label().map(str::to_owned)
    }

    fn digits(&self) -> Vec<Vec<i64>> {
        self.inner.digits().digits().to_vec()
    }

    fn dual_digits(&self) -> Vec<Vec<i64>> {
        self.inner.dual_digits().digits().to_vec()
    }

    /// The grid vector indexed by `k` (base-m digits of `k` weighted by
    /// powers of the matrix).
    fn gamma(&self, k: u64) -> PyResult<Vec<i64>> {
        let v = self.inner.digits().gamma_vector(&BigUint::from(k));
        v.iter()
            .map(|c| c.to_i64().ok_or_else(|| PyValueError::new_err("grid vector exceeds i64")))
            .collect()
    }

    /// Inverse of `gamma`: the index of a grid vector.
    fn index_of_gamma(&self, v: Vec<i64>) -> PyResult<u64> {
        let big: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
        let k = self.inner.digits().index_of_gamma(&big).map_err(core_err)?;
        k.to_u64().ok_or_else(|| PyValueError::new_err("grid index exceeds u64"))
    }

    /// Carry-free addition on grid indices (digitwise group law in base m).
    fn oplus_index(&self, a: u64, b: u64) -> PyResult<u64> {
        let set = self.inner.digits();
        let x = set.gamma_point(&BigUint::from(a));
        let y = set.gamma_point(&BigUint::from(b));
        let sum = set.oplus(&x, &y).map_err(core_err)?;
        set.cell_of_point(&sum, 0)
            .map_err(core_err)?
            .to_u64()
            .ok_or_else(|| PyValueError::new_err("grid index exceeds u64"))
    }

    /// Character of the grid anchor pair: `chi(M^-xs gamma_[xk], (M*)^-ws gamma*_[wk])`.
    fn chi(&self, xs: i64, xk: u64, ws: i64, wk: u64) -> PyResult<Complex64> {
        let x = self.inner.digits().anchor_point(xs, &BigUint::from(xk));
        let omega = self.inner.dual_digits().anchor_point(ws, &BigUint::from(wk));
        Ok(self.inner.chi(&x, &omega).map_err(core_err)?.to_complex())
    }

    /// Walsh function `W_alpha` at the scale-`scale` anchor of index `k`.
    fn walsh(&self, alpha: u64, scale: i64, k: u64) -> PyResult<Complex64> {
        let x = self.inner.digits().anchor_point(scale, &BigUint::from(k));
        Ok(self.inner.walsh_eval(&BigUint::from(alpha), &x).map_err(core_err)?.to_complex())
    }

    /// Digit character sum for an integer vector: exactly m when the vector
    /// is congruent to zero mod M, exactly 0 otherwise.
    fn char_sum(&self, l: Vec<i64>) -> Complex64 {
        let big: Vec<BigInt> = l.iter().map(|&c| BigInt::from(c)).collect();
        self.inner.char_sum(&big)
    }

    /// Analysis transform of `m^n` coefficients (depth inferred from the
    /// length), normalized by `m^-n`.
    #[pyo3(signature = (values, fast=true))]
    fn vc_forward(&self, values: Vec<Complex64>, fast: bool) -> PyResult<Vec<Complex64>> {
        let depth = self.depth_for_len(values.len())?;
        let sv = SpectrumVector::new(&self.inner, Side::Time, depth, values).map_err(core_err)?;
        let out = if fast {
            vc_fast(&self.inner, &sv, Direction::Forward)
        } else {
            vc_forward_naive(&self.inner, &sv)
        }
        .map_err(core_err)?;
        Ok(out.into_values())
    }

    /// Exact inverse of `vc_forward` (synthesis sum rescaled so the round
    /// trip is the identity).
    #[pyo3(signature = (values, fast=true))]
    fn vc_inverse(&self, values: Vec<Complex64>, fast: bool) -> PyResult<Vec<Complex64>> {
        let depth = self.depth_for_len(values.len())?;
        let sv =
            SpectrumVector::new(&self.inner, Side::Frequency, depth, values).map_err(core_err)?;
        let out = if fast {
            vc_fast(&self.inner, &sv, Direction::Inverse)
        } else {
            vc_inverse_naive(&self.inner, &sv)
        }
        .map_err(core_err)?;
        let undo = (self.inner.m() as f64).powi(depth as i32);
        Ok(out.into_values().into_iter().map(|v| v * undo).collect())
    }

    /// Fourier transform of a step function given as
    /// `(space, value_scale, support_scale, coefficients)`; primal input is
    /// transformed forward, dual input inversely. Returns the transformed
    /// quadruple; the scales swap.
    fn fourier(
        &self,
        space: &str,
        value_scale: i64,
        support_scale: i64,
        coeffs: Vec<Complex64>,
    ) -> PyResult<(String, i64, i64, Vec<Complex64>)> {
        let space = parse_space(space)?;
        let f = StepFunction::new(&self.inner, space, value_scale, support_scale, coeffs)
            .map_err(core_err)?;
        let out = match space {
            Space::Primal => fourier_step(&self.inner, &f),
            Space::Dual => inverse_fourier_step(&self.inner, &f),
        }
        .map_err(core_err)?;
        Ok((
            space_token(out.space()).to_owned(),
            out.value_scale(),
            out.support_scale(),
            out.coeffs().to_vec(),
        ))
    }

    /// Both sides of the grid-sum identity for a primal step function.
    fn poisson(
        &self,
        value_scale: i64,
        support_scale: i64,
        coeffs: Vec<Complex64>,
    ) -> PyResult<(Complex64, Complex64)> {
        let f = StepFunction::new(&self.inner, Space::Primal, value_scale, support_scale, coeffs)
            .map_err(core_err)?;
        poisson_check(&self.inner, &f).map_err(core_err)
    }

    /// Translate a primal step function by the grid element of index
    /// `shift`; returns `(value_scale, support_scale, coefficients)`.
    fn shift(
        &self,
        value_scale: i64,
        support_scale: i64,
        coeffs: Vec<Complex64>,
        shift: u64,
    ) -> PyResult<(i64, i64, Vec<Complex64>)> {
        let f = StepFunction::new(&self.inner, Space::Primal, value_scale, support_scale, coeffs)
            .map_err(core_err)?;
        let g = shift_step(&self.inner, &f, &BigUint::from(shift)).map_err(core_err)?;
        Ok((g.value_scale(), g.support_scale(), g.coeffs().to_vec()))
    }

    /// The depth-`depth` anchor cloud as a list of coordinate lists.
    #[pyo3(signature = (depth, budget=DEFAULT_POINT_BUDGET))]
    fn tile_points(&self, depth: u32, budget: u64) -> PyResult<Vec<Vec<f64>>> {
        let cloud = tile_points(&self.inner, depth, budget).map_err(core_err)?;
        Ok(cloud.points().to_vec())
    }

    /// Exact refinement check of the depth-`depth` cloud.
    #[pyo3(signature = (depth, budget=DEFAULT_POINT_BUDGET))]
    fn self_similarity(&self, depth: u32, budget: u64) -> PyResult<bool> {
        let cloud = tile_points(&self.inner, depth, budget).map_err(core_err)?;
        mpos_core::self_similarity_check(&self.inner, &cloud).map_err(core_err)
    }

    /// Monte Carlo area diagnostic; returns `(estimate, uncertainty)`.
    #[pyo3(signature = (depth, samples, seed=0, budget=DEFAULT_POINT_BUDGET))]
    fn measure_estimate(
        &self,
        depth: u32,
        samples: u64,
        seed: u64,
        budget: u64,
    ) -> PyResult<(f64, f64)> {
        mpos_core::measure_estimate(&self.inner, depth, samples, seed, budget).map_err(core_err)
    }

    /// Residuals of the even-power inverse series against `M^2 s`.
    fn dilation_series_residuals(&self, k_max: u32) -> Vec<f64> {
        mpos_core::dilation_series_residuals(&self.inner, k_max)
    }

    /// Run the identity suite; returns `(name, passed, detail)` triples.
    #[pyo3(signature = (level=1))]
    fn verify(&self, level: u8) -> Vec<(String, bool, String)> {
        mpos_core::run_suite(&self.inner, level)
            .into_iter()
            .map(|o| (o.name.to_owned(), o.passed, o.detail))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "System(dim={}, m={}, label={:?})",
            self.inner.dim(),
            self.inner.m(),
            self.inner.label()
        )
    }
}

#[pymodule]
fn mpos_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<System>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
