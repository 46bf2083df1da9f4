//! Monte-Carlo BER sweeps.
//!
//! Trial `k` draws its bits, channel and unit-variance noise from stream `k`
//! of the master seed, in that order. Every curve and every SNR point of a
//! sweep sees the same realization for trial `k`; only the noise scaling
//! changes with SNR. Trials are evaluated in fixed-size chunks so that early
//! stopping happens at the same trial count for any thread count.

use std::fmt;

use rayon::prelude::*;

use crate::cplx::{matvec, CMatrix, CVector, OpCount};
use crate::detect::{detect, simo_equalize, DetectorSpec};
use crate::error::{Error, Result};
use crate::phy::{
    draw_channel, modulate, random_bits, sigma2_from_snr, slice, standard_complex_normal,
    trial_rng, Constellation, Modulation,
};

/// Trials per scheduling unit. Early stopping is checked between chunks.
pub const CHUNK: u64 = 50;

/// One BER curve of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    Detector(DetectorSpec),
    /// Interference-free single-user bound, evaluated on user 0 of each trial.
    SimoBound,
}

impl Curve {
    pub fn name(&self) -> &'static str {
        match self {
            Curve::Detector(spec) => spec.name(),
            Curve::SimoBound => "simo",
        }
    }

    pub fn params(&self) -> String {
        match self {
            Curve::Detector(spec) => spec.params(),
            Curve::SimoBound => "mrc".to_string(),
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params())
    }
}

impl From<DetectorSpec> for Curve {
    fn from(spec: DetectorSpec) -> Self {
        Curve::Detector(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub u: usize,
    pub modulation: Modulation,
    pub snr_db: Vec<f64>,
    pub curves: Vec<Curve>,
    pub trials: u64,
    pub master_seed: u64,
    /// Stop a curve at an SNR point once it has this many bit errors.
    pub stop_at_errors: Option<u64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.u == 0 || self.u > self.n {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= U <= N, got N={} U={}",
                self.n, self.u
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("SNR grid must be non-empty and finite".into()));
        }
        if self.snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("SNR grid must be increasing".into()));
        }
        if self.curves.is_empty() {
            return Err(Error::InvalidParameter("no curves selected".into()));
        }
        if self.stop_at_errors == Some(0) {
            return Err(Error::InvalidParameter("stop-at-errors must be >= 1".into()));
        }
        for curve in &self.curves {
            if let Curve::Detector(spec) = curve {
                spec.validate()?;
            }
        }
        Ok(())
    }

    /// `ber_<N>x<U>_<mod>.csv`
    pub fn csv_name(&self) -> String {
        format!("ber_{}x{}_{}.csv", self.n, self.u, self.modulation.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub n: usize,
    pub u: usize,
    pub modulation: Modulation,
    pub curve: Curve,
    pub snr_db: f64,
    pub trials_run: u64,
    pub bit_errors: u64,
    pub bits_total: u64,
    /// Trials whose detector returned an error; all their bits count as errors.
    pub failures: u64,
}

impl BerRecord {
    pub fn ber(&self) -> f64 {
        if self.bits_total == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits_total as f64
        }
    }

    /// Binomial standard error `√(p(1−p)/bits)`.
    pub fn stderr(&self) -> f64 {
        if self.bits_total == 0 {
            return 0.0;
        }
        let p = self.ber();
        (p * (1.0 - p) / self.bits_total as f64).sqrt()
    }
}

/// Everything random about one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub bits: Vec<u8>,
    pub x: CVector,
    pub h: CMatrix,
    /// Unit-variance noise, scaled by `√σ²` at each SNR point.
    pub noise: CVector,
}

impl Realization {
    pub fn draw(
        n: usize,
        u: usize,
        constellation: &Constellation,
        master_seed: u64,
        trial_index: u64,
    ) -> Result<Self> {
        let mut rng = trial_rng(master_seed, trial_index);
        let bits = random_bits(u * constellation.bits_per_symbol(), &mut rng);
        let x = modulate(&bits, constellation)?;
        let h = draw_channel(n, u, &mut rng).h;
        let noise = CVector::from_fn(n, |_| standard_complex_normal(&mut rng));
        Ok(Realization { bits, x, h, noise })
    }

    /// `Hx + √σ²·n`.
    pub fn received(&self, sigma2: f64) -> Result<CVector> {
        let clean = matvec(&self.h, &self.x, &mut OpCount::new())?;
        let s = sigma2.sqrt();
        Ok(CVector::from_fn(clean.len(), |i| clean[i] + self.noise[i] * s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialOutcome {
    pub bit_errors: u64,
    pub bits: u64,
    pub failed: bool,
}

fn count_errors(sent: &[u8], got: &[u8]) -> u64 {
    sent.iter().zip(got).filter(|(a, b)| a != b).count() as u64
}

/// Evaluates one curve on one realization.
pub fn evaluate(
    realization: &Realization,
    snr_db: f64,
    users: usize,
    curve: &Curve,
    constellation: &Constellation,
) -> TrialOutcome {
    let sigma2 = sigma2_from_snr(snr_db, users);
    let m = constellation.bits_per_symbol();
    let (sent, decided) = match curve {
        Curve::Detector(spec) => {
            let bits = &realization.bits[..];
            let decided = realization
                .received(sigma2)
                .and_then(|y| detect(&realization.h, &y, sigma2, spec, constellation))
                .map(|r| slice(&r.x_soft, constellation).bits);
            (bits, decided)
        }
        Curve::SimoBound => {
            let h0 = realization.h.col(0);
            let s = realization.x[0];
            let sd = sigma2.sqrt();
            let y = CVector::from_fn(h0.len(), |i| h0[i] * s + realization.noise[i] * sd);
            let decided = simo_equalize(&h0, &y, &mut OpCount::new())
                .map(|z| slice(&CVector::new(vec![z]), constellation).bits);
            (&realization.bits[..m], decided)
        }
    };
    let bits = sent.len() as u64;
    match decided {
        Ok(got) => TrialOutcome {
            bit_errors: count_errors(sent, &got),
            bits,
            failed: false,
        },
        Err(_) => TrialOutcome {
            bit_errors: bits,
            bits,
            failed: true,
        },
    }
}

/// One trial of one curve, drawn from scratch.
pub fn run_trial(
    config: &SweepConfig,
    snr_db: f64,
    curve: &Curve,
    trial_index: u64,
) -> Result<TrialOutcome> {
    let cst = Constellation::new(config.modulation);
    let r = Realization::draw(config.n, config.u, &cst, config.master_seed, trial_index)?;
    Ok(evaluate(&r, snr_db, config.u, curve, &cst))
}

/// Runs the sweep on the current rayon pool. Records are ordered by curve,
/// then SNR.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<BerRecord>> {
    run_sweep_observed(config, |_, _, _, _| {})
}

/// [`run_sweep`] with a hook called as `(curve, snr_db, trial, realization)`
/// for every evaluation.
pub fn run_sweep_observed<F>(config: &SweepConfig, observe: F) -> Result<Vec<BerRecord>>
where
    F: Fn(&Curve, f64, u64, &Realization) + Sync,
{
    config.validate()?;
    let cst = Constellation::new(config.modulation);
    let ncurves = config.curves.len();
    let mut grid = vec![Vec::with_capacity(config.snr_db.len()); ncurves];

    for &snr in &config.snr_db {
        let mut totals = vec![TrialOutcome::default(); ncurves];
        let mut trials_run = vec![0u64; ncurves];
        let mut failures = vec![0u64; ncurves];
        let mut active = vec![true; ncurves];
        let mut start = 0;
        while start < config.trials && active.iter().any(|&a| a) {
            let end = (start + CHUNK).min(config.trials);
            let chunk: Vec<Result<Vec<Option<TrialOutcome>>>> = (start..end)
                .into_par_iter()
                .map(|trial| {
                    let r = Realization::draw(config.n, config.u, &cst, config.master_seed, trial)?;
                    Ok(config
                        .curves
                        .iter()
                        .zip(&active)
                        .map(|(curve, &on)| {
                            on.then(|| {
                                observe(curve, snr, trial, &r);
                                evaluate(&r, snr, config.u, curve, &cst)
                            })
                        })
                        .collect())
                })
                .collect();
            for outcomes in chunk {
                for (k, o) in outcomes?.into_iter().enumerate() {
                    if let Some(o) = o {
                        totals[k].bit_errors += o.bit_errors;
                        totals[k].bits += o.bits;
                        trials_run[k] += 1;
                        failures[k] += o.failed as u64;
                    }
                }
            }
            if let Some(limit) = config.stop_at_errors {
                for k in 0..ncurves {
                    if totals[k].bit_errors >= limit {
                        active[k] = false;
                    }
                }
            }
            start = end;
        }
        for k in 0..ncurves {
            grid[k].push(BerRecord {
                n: config.n,
                u: config.u,
                modulation: config.modulation,
                curve: config.curves[k],
                snr_db: snr,
                trials_run: trials_run[k],
                bit_errors: totals[k].bit_errors,
                bits_total: totals[k].bits,
                failures: failures[k],
            });
        }
    }
    Ok(grid.into_iter().flatten().collect())
}

pub const CSV_HEADER: &str = "n,u,mod,detector,params,snr_db,trials,bit_errors,bits,ber,stderr";

pub fn records_csv(records: &[BerRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:e},{:e}\n",
            r.n,
            r.u,
            r.modulation.name(),
            r.curve.name(),
            r.curve.params(),
            r.snr_db,
            r.trials_run,
            r.bit_errors,
            r.bits_total,
            r.ber(),
            r.stderr()
        ));
    }
    out
}

/// Points of one curve, in SNR order.
pub fn curve_points<'a>(records: &'a [BerRecord], curve: &Curve) -> Vec<&'a BerRecord> {
    let mut pts: Vec<&BerRecord> = records.iter().filter(|r| r.curve == *curve).collect();
    pts.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    pts
}

/// First SNR at which `ber` falls through `target`, by linear interpolation
/// of `log10 BER` between the bracketing grid points. Zero-error points are
/// floored at half an error.
pub fn crossing_snr(points: &[(f64, f64, u64)], target: f64) -> Option<f64> {
    let log = |ber: f64, bits: u64| {
        let floor = 0.5 / bits.max(1) as f64;
        ber.max(floor).log10()
    };
    let lt = target.log10();
    for w in points.windows(2) {
        let (s0, b0, n0) = w[0];
        let (s1, b1, n1) = w[1];
        let (l0, l1) = (log(b0, n0), log(b1, n1));
        if l0 >= lt && l1 < lt {
            return Some(s0 + (l0 - lt) / (l0 - l1) * (s1 - s0));
        }
    }
    None
}

fn crossing_of(records: &[BerRecord], curve: &Curve, target: f64, shift: f64) -> Option<f64> {
    let pts: Vec<(f64, f64, u64)> = curve_points(records, curve)
        .iter()
        .map(|r| (r.snr_db, (r.ber() + shift * r.stderr()).max(0.0), r.bits_total))
        .collect();
    crossing_snr(&pts, target)
}

/// SNR gap with an uncertainty from moving both curves by one standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    /// `snr(reference) − snr(other)`: positive when `other` is better.
    pub gain_db: f64,
    pub uncertainty_db: f64,
}

/// Gain of `other` over `reference` at BER `target`.
pub fn snr_gap(records: &[BerRecord], reference: &Curve, other: &Curve, target: f64) -> Result<Gap> {
    let undefined = |c: &Curve| Error::GapUndefined(format!("{c} at {target:e}"));
    let r = crossing_of(records, reference, target, 0.0).ok_or_else(|| undefined(reference))?;
    let o = crossing_of(records, other, target, 0.0).ok_or_else(|| undefined(other))?;
    let gain_db = r - o;
    let mut uncertainty_db: f64 = 0.0;
    for (sr, so) in [(1.0, -1.0), (-1.0, 1.0)] {
        if let (Some(r2), Some(o2)) = (
            crossing_of(records, reference, target, sr),
            crossing_of(records, other, target, so),
        ) {
            uncertainty_db = uncertainty_db.max((r2 - o2 - gain_db).abs());
        }
    }
    Ok(Gap {
        gain_db,
        uncertainty_db,
    })
}

/// Per-SNR table of every curve followed by the gap of each curve over the
/// first one at `target`.
pub fn summarize(records: &[BerRecord], target: f64) -> String {
    let mut curves: Vec<Curve> = Vec::new();
    for r in records {
        if !curves.contains(&r.curve) {
            curves.push(r.curve);
        }
    }
    let mut out = String::new();
    for curve in &curves {
        out.push_str(&format!("{curve}\n"));
        for r in curve_points(records, curve) {
            out.push_str(&format!(
                "  {:>6.1} dB  ber {:.3e} ± {:.1e}  ({} trials, {} errors{})\n",
                r.snr_db,
                r.ber(),
                r.stderr(),
                r.trials_run,
                r.bit_errors,
                if r.failures > 0 {
                    format!(", {} failures", r.failures)
                } else {
                    String::new()
                }
            ));
        }
    }
    if let Some(reference) = curves.first() {
        for other in &curves[1..] {
            match snr_gap(records, reference, other, target) {
                Ok(g) => out.push_str(&format!(
                    "gain of {other} over {reference} at {target:e}: {:+.2} ± {:.2} dB\n",
                    g.gain_db, g.uncertainty_db
                )),
                Err(e) => out.push_str(&format!("gain of {other} over {reference}: {e}\n")),
            }
        }
    }
    out
}
