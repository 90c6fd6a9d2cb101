//! Exact harmonic analysis on matrix digit systems.
//!
//! Given an expanding integer matrix `M` with `m = |det M|` and a complete
//! residue system `D` of `Z^d mod M Z^d` containing zero, the vectors with
//! finite expansions `x = sum_j M^-j x_j` (digits `x_j` in `D`) carry a
//! carry-free group structure, a family of characters valued in the `m`-th
//! roots of unity, generalized Walsh functions, fast Vilenkin-Chrestenson
//! transforms, and a Fourier transform under which compactly supported step
//! functions map to compactly supported step functions. The geometric side
//! is a self-affine tile playing the role of the unit interval.
//!
//! Character and digit arithmetic is exact throughout: characters are
//! residues mod `m`, grid vectors are arbitrary-precision integers, tile
//! anchors are integer rationals. Floating point enters only in transform
//! coefficients, rendered geometry, and the expansion certificate.
//!
//! All values are immutable after construction and every operation is pure,
//! so everything here is safe for unrestricted concurrent use.

pub mod characters;
pub mod config;
pub mod digits;
pub mod error;
pub mod intlinalg;
pub mod system;
pub mod tile;
pub mod transform;
pub mod verify;

pub use characters::{CharValue, ExponentHistogram, RootSum};
pub use config::SystemConfig;
pub use digits::{DigitSet, GridPoint, MPoint, Space};
pub use error::{Error, Result};
pub use intlinalg::{det_adjugate, DilationMatrix};
pub use system::MSystem;
pub use tile::{
    dilation_series_residuals, measure_estimate, pgm_bytes, raster, raster_cells,
    self_similarity_check, tile_points, Raster, TileCloud, DEFAULT_POINT_BUDGET,
};
pub use transform::{
    digit_reversal_permutation, fourier_step, inverse_fourier_step, poisson_check, shift_step,
    vc_fast, vc_forward_naive, vc_inverse_naive, vc_round_trip_factor, Direction, Side,
    SpectrumVector, StepFunction,
};
pub use verify::{run_suite, IdentityOutcome};
