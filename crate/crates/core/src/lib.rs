//! Massive-MIMO uplink detection with instrumented matrix arithmetic.
//!
//! * [`cplx`]: complex vectors/matrices and the [`OpCount`] accounting convention
//! * [`decomp`]: Gram-Schmidt QR, Cholesky, LDLᴴ and triangular solvers
//! * [`detect`]: ZF/MMSE backends, Neumann / Gauss-Seidel / CG, ADMIN, SIMO bound
//! * [`phy`]: Gray QAM, Rayleigh channels, noise, per-trial RNG streams
//! * [`montecarlo`]: deterministic parallel BER sweeps and SNR-gap summaries
//! * [`complexity`]: closed-form real-multiplication model vs. measured counts
//! * [`presets`]: the reference experiment configurations

pub mod complexity;
pub mod cplx;
pub mod decomp;
pub mod detect;
pub mod error;
pub mod montecarlo;
pub mod phy;
pub mod presets;

#[cfg(test)]
mod testutil;

pub use cplx::{CMatrix, CVector, Complex, OpCount};
pub use detect::{Backend, Beta, DetectResult, DetectorSpec, GsInit};
pub use error::{Error, Result};
pub use montecarlo::{BerRecord, Curve, SweepConfig};
pub use phy::{Constellation, Modulation};
