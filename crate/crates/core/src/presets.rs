//! Reference experiment configurations.
//!
//! BER presets run 2000 trials per SNR point with early stop at 200 bit
//! errors; the master seed is always supplied by the caller.

use std::fmt;
use std::str::FromStr;

use crate::complexity::{DEFAULT_ITERATIONS, DEFAULT_USERS};
use crate::detect::{Backend, Beta, DetectorSpec, GsInit};
use crate::error::{Error, Result};
use crate::montecarlo::{Curve, SweepConfig};
use crate::phy::Modulation;

pub const DEFAULT_TRIALS: u64 = 2000;
pub const DEFAULT_STOP_AT_ERRORS: u64 = 200;

/// BER at which the approximate detectors are compared with MMSE.
pub const APPROX_TARGET_BER: f64 = 1e-2;
/// BER at which ADMIN is compared with MMSE for 64-QAM, above the MMSE floor.
pub const ADMIN_TARGET_BER_64QAM: f64 = 3e-2;
/// BER at which ADMIN is compared with MMSE and the SIMO bound for QPSK.
pub const ADMIN_TARGET_BER_QPSK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Preset::Fig2 => "256x16 64-QAM: MMSE vs NSA/GS/CG, t=3",
            Preset::Fig3 => "32x16 64-QAM: MMSE vs NSA/GS/CG, t=3",
            Preset::Fig4 => "64x16 64-QAM: MMSE vs NSA/GS/CG, t=3",
            Preset::Fig5 => "32x32 64-QAM: MMSE vs ADMIN(t=5) vs SIMO bound",
            Preset::Fig6 => "32x32 QPSK: MMSE vs ADMIN(t=5) vs SIMO bound",
            Preset::Fig7 => "real multiplications vs U, t=3",
        }
    }

    /// Sweep configuration, or `None` for the complexity preset.
    pub fn sweep(self, master_seed: u64) -> Option<SweepConfig> {
        let (n, u, modulation, snr_db, curves) = match self {
            Preset::Fig2 => (256, 16, Modulation::Qam64, grid(0.0, 1.0, 16.0), approx_curves()),
            Preset::Fig3 => (32, 16, Modulation::Qam64, grid(0.0, 2.0, 40.0), approx_curves()),
            Preset::Fig4 => (64, 16, Modulation::Qam64, grid(0.0, 1.0, 30.0), approx_curves()),
            Preset::Fig5 => (32, 32, Modulation::Qam64, grid(0.0, 2.5, 40.0), admin_curves()),
            Preset::Fig6 => (32, 32, Modulation::Qpsk, grid(-10.0, 2.0, 30.0), admin_curves()),
            Preset::Fig7 => return None,
        };
        Some(SweepConfig {
            n,
            u,
            modulation,
            snr_db,
            curves,
            trials: DEFAULT_TRIALS,
            master_seed,
            stop_at_errors: Some(DEFAULT_STOP_AT_ERRORS),
        })
    }

    /// BER level used for the gap summary of a sweep preset.
    pub fn target_ber(self) -> f64 {
        match self {
            Preset::Fig5 => ADMIN_TARGET_BER_64QAM,
            Preset::Fig6 => ADMIN_TARGET_BER_QPSK,
            _ => APPROX_TARGET_BER,
        }
    }

    /// `(U values, t)` for the complexity preset.
    pub fn complexity(self) -> Option<(Vec<u64>, u64)> {
        (self == Preset::Fig7).then(|| (DEFAULT_USERS.to_vec(), DEFAULT_ITERATIONS))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown preset `{s}`")))
    }
}

/// `start, start+step, …` up to and including `stop` (to within 1e-9).
pub fn grid(start: f64, step: f64, stop: f64) -> Vec<f64> {
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|k| start + k as f64 * step).collect()
}

pub fn mmse_reference() -> Curve {
    Curve::Detector(DetectorSpec::Mmse {
        backend: Backend::Cholesky,
    })
}

pub fn approx_curves() -> Vec<Curve> {
    vec![
        mmse_reference(),
        Curve::Detector(DetectorSpec::Nsa { iterations: 3 }),
        Curve::Detector(DetectorSpec::Gs {
            iterations: 3,
            init: GsInit::Zero,
        }),
        Curve::Detector(DetectorSpec::Cg { iterations: 3 }),
    ]
}

pub fn admin_curves() -> Vec<Curve> {
    vec![
        Curve::Detector(DetectorSpec::Mmse {
            backend: Backend::Qr,
        }),
        Curve::Detector(DetectorSpec::Admin {
            iterations: 5,
            beta: Beta::default(),
        }),
        Curve::SimoBound,
    ]
}
