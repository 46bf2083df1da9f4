//! Gray-mapped square QAM, i.i.d. Rayleigh channels and circular Gaussian noise.
//!
//! Bit labels are split evenly between the axes: the high half of a label
//! selects the in-phase level, the low half the quadrature level, each through
//! a reflected binary Gray code over the levels sorted from most negative to
//! most positive. For 16-QAM the per-axis map is
//!
//! | bits | level |
//! |------|-------|
//! | 00   | -3    |
//! | 01   | -1    |
//! | 11   | +1    |
//! | 10   | +3    |
//!
//! and the full tables can be dumped with `mimo-sim constellation`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cplx::{c, CMatrix, CVector, Complex};
use crate::error::{Error, Result};

/// Counter-based generator used for every random draw in a simulation.
pub type SimRng = ChaCha8Rng;

/// Private substream for one Monte-Carlo trial. Depends only on the master
/// seed and the trial index, never on scheduling.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub fn order(self) -> usize {
        match self {
            Modulation::Qpsk => 4,
            Modulation::Qam16 => 16,
            Modulation::Qam64 => 64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "16qam",
            Modulation::Qam64 => "64qam",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "qpsk" | "4qam" => Ok(Modulation::Qpsk),
            "16qam" | "qam16" => Ok(Modulation::Qam16),
            "64qam" | "qam64" => Ok(Modulation::Qam64),
            other => Err(Error::InvalidParameter(format!("unknown modulation `{other}`"))),
        }
    }
}

fn gray(k: u32) -> u32 {
    k ^ (k >> 1)
}

fn gray_inverse(mut g: u32) -> u32 {
    let mut k = g;
    while g > 0 {
        g >>= 1;
        k ^= g;
    }
    k
}

/// Square QAM alphabet with unit average energy; `points[label]` is the
/// symbol carrying `label`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    modulation: Modulation,
    bits_per_symbol: usize,
    levels: usize,
    spacing: f64,
    points: Vec<Complex>,
}

impl Constellation {
    pub fn new(modulation: Modulation) -> Self {
        let order = modulation.order();
        let bits_per_symbol = order.trailing_zeros() as usize;
        let levels = 1usize << (bits_per_symbol / 2);
        // levels ±1, ±3, … have mean energy 2(M−1)/3 per symbol
        let spacing = (3.0 / (2.0 * (order as f64 - 1.0))).sqrt();
        let half = bits_per_symbol / 2;
        let mask = (1u32 << half) - 1;
        let coord = |g: u32| (2.0 * gray_inverse(g) as f64 - (levels as f64 - 1.0)) * spacing;
        let points = (0..order as u32)
            .map(|label| c(coord(label >> half), coord(label & mask)))
            .collect();
        Self {
            modulation,
            bits_per_symbol,
            levels,
            spacing,
            points,
        }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    /// Largest per-axis coordinate magnitude.
    pub fn max_coordinate(&self) -> f64 {
        (self.levels as f64 - 1.0) * self.spacing
    }

    pub fn point(&self, label: u32) -> Complex {
        self.points[label as usize]
    }

    /// Nearest per-axis level index; exact midpoints resolve to the lower level.
    fn axis_index(&self, v: f64) -> u32 {
        let pos = (v / self.spacing + (self.levels as f64 - 1.0)) / 2.0;
        let idx = (pos - 0.5).ceil();
        idx.clamp(0.0, self.levels as f64 - 1.0) as u32
    }

    /// Label of the nearest point (ties go to smaller real, then smaller imaginary part).
    pub fn nearest_label(&self, z: Complex) -> u32 {
        let half = self.bits_per_symbol / 2;
        (gray(self.axis_index(z.re)) << half) | gray(self.axis_index(z.im))
    }

    /// Table rows `label,re,im` with binary labels, one point per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,re,im\n");
        for (label, p) in self.points.iter().enumerate() {
            out.push_str(&format!(
                "{:0width$b},{},{}\n",
                label,
                p.re,
                p.im,
                width = self.bits_per_symbol
            ));
        }
        out
    }
}

/// Maps groups of `log2(M)` bits (MSB first, values 0/1) to symbols.
pub fn modulate(bits: &[u8], constellation: &Constellation) -> Result<CVector> {
    let m = constellation.bits_per_symbol();
    if bits.is_empty() || !bits.len().is_multiple_of(m) {
        return Err(Error::DimensionMismatch(format!(
            "{} bits is not a positive multiple of {m}",
            bits.len()
        )));
    }
    let symbols = bits
        .chunks(m)
        .map(|group| {
            let label = group.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b & 1));
            constellation.point(label)
        })
        .collect();
    Ok(CVector::new(symbols))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decisions {
    pub symbols: CVector,
    pub labels: Vec<u32>,
    pub bits: Vec<u8>,
}

/// Hard decision: nearest constellation point per component.
pub fn slice(x_soft: &CVector, constellation: &Constellation) -> Decisions {
    let m = constellation.bits_per_symbol();
    let labels: Vec<u32> = x_soft.iter().map(|z| constellation.nearest_label(*z)).collect();
    let symbols = CVector::new(labels.iter().map(|&l| constellation.point(l)).collect());
    let bits = labels
        .iter()
        .flat_map(|&l| (0..m).rev().map(move |k| ((l >> k) & 1) as u8))
        .collect();
    Decisions {
        symbols,
        labels,
        bits,
    }
}

pub fn random_bits(count: usize, rng: &mut SimRng) -> Vec<u8> {
    (0..count).map(|_| rng.random::<bool>() as u8).collect()
}

/// `(g1 + i·g2)/√2` with independent standard normals: unit-variance CN(0,1).
pub fn standard_complex_normal(rng: &mut SimRng) -> Complex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelInstance {
    pub h: CMatrix,
}

/// `N×U` matrix of i.i.d. CN(0,1) entries, drawn row-major.
pub fn draw_channel(n: usize, u: usize, rng: &mut SimRng) -> ChannelInstance {
    assert!(n >= 1 && u >= 1);
    ChannelInstance {
        h: CMatrix::from_fn(n, u, |_, _| standard_complex_normal(rng)),
    }
}

/// Adds i.i.d. CN(0, σ²) noise. Draws are consumed even when σ² = 0 so that
/// streams stay aligned across noise levels.
pub fn add_noise(y_clean: &CVector, sigma2: f64, rng: &mut SimRng) -> Result<CVector> {
    if !(sigma2 >= 0.0) || !sigma2.is_finite() {
        return Err(Error::InvalidParameter(format!("noise variance {sigma2}")));
    }
    let s = sigma2.sqrt();
    Ok(CVector::from_fn(y_clean.len(), |i| {
        y_clean[i] + standard_complex_normal(rng) * s
    }))
}

/// Noise variance for an average per-receive-antenna SNR, given unit-energy
/// symbols and unit-variance channel entries (`E‖Hx‖²/N = U`).
pub fn sigma2_from_snr(snr_db: f64, users: usize) -> f64 {
    users as f64 / 10f64.powf(snr_db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::{matmul, OpCount};

    const ALL: [Modulation; 3] = [Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64];

    #[test]
    fn unit_average_energy() {
        for m in ALL {
            let c = Constellation::new(m);
            let e = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / c.order() as f64;
            assert!((e - 1.0).abs() <= 1e-12, "{m}");
        }
    }

    #[test]
    fn gray_adjacency_per_axis() {
        for m in ALL {
            let cst = Constellation::new(m);
            let d = 2.0 * cst.spacing;
            for (a, pa) in cst.points().iter().enumerate() {
                for (b, pb) in cst.points().iter().enumerate() {
                    let dre = (pa.re - pb.re).abs();
                    let dim = (pa.im - pb.im).abs();
                    let adjacent = (dre < 1e-12 && (dim - d).abs() < 1e-12)
                        || (dim < 1e-12 && (dre - d).abs() < 1e-12);
                    if adjacent {
                        assert_eq!((a ^ b).count_ones(), 1, "{m}: {a:b} vs {b:b}");
                    }
                }
            }
        }
    }

    #[test]
    fn qpsk_defining_table() {
        let q = Constellation::new(Modulation::Qpsk);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = modulate(&[0, 0, 0, 1, 1, 1, 1, 0], &q).unwrap();
        assert_eq!(x.as_slice(), &[c(-s, -s), c(-s, s), c(s, s), c(s, -s)]);
    }

    #[test]
    fn qam64_zero_label() {
        let q = Constellation::new(Modulation::Qam64);
        let x = modulate(&[0; 6], &q).unwrap();
        let corner = -7.0 / 42f64.sqrt();
        assert!((x[0] - c(corner, corner)).norm() < 1e-15);
        assert!((q.max_coordinate() + corner).abs() < 1e-15);
    }

    #[test]
    fn round_trip_all_labels() {
        for m in ALL {
            let cst = Constellation::new(m);
            let bps = cst.bits_per_symbol();
            let bits: Vec<u8> = (0..cst.order() as u32)
                .flat_map(|l| (0..bps).rev().map(move |k| ((l >> k) & 1) as u8))
                .collect();
            let x = modulate(&bits, &cst).unwrap();
            assert_eq!(slice(&x, &cst).bits, bits, "{m}");
        }
    }

    #[test]
    fn modulate_rejects_partial_symbols() {
        let q = Constellation::new(Modulation::Qam16);
        assert!(modulate(&[1, 0, 1], &q).is_err());
        assert!(modulate(&[], &q).is_err());
    }

    #[test]
    fn slice_tie_breaks_low() {
        let q = Constellation::new(Modulation::Qpsk);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = slice(&CVector::new(vec![c(0.0, 0.0)]), &q);
        assert_eq!(d.symbols[0], c(-s, -s));
        assert_eq!(d.bits, vec![0, 0]);
    }

    #[test]
    fn slice_tolerates_small_perturbations() {
        let cst = Constellation::new(Modulation::Qam64);
        let mut rng = trial_rng(3, 0);
        let bits = random_bits(6 * 32, &mut rng);
        let x = modulate(&bits, &cst).unwrap();
        let noisy = CVector::from_fn(x.len(), |i| x[i] + c(1e-6, -1e-6));
        assert_eq!(slice(&noisy, &cst).bits, bits);
        // far outside the grid clamps to the corner
        let far = slice(&CVector::new(vec![c(50.0, -50.0)]), &cst);
        assert!((far.symbols[0] - c(cst.max_coordinate(), -cst.max_coordinate())).norm() < 1e-15);
    }

    #[test]
    fn channel_statistics() {
        let mut rng = trial_rng(11, 0);
        let draws = 100_000;
        let h = draw_channel(draws, 2, &mut rng).h;
        let mean: Complex = (0..draws).map(|i| h[(i, 0)]).sum::<Complex>() / draws as f64;
        let var = (0..draws).map(|i| h[(i, 0)].norm_sqr()).sum::<f64>() / draws as f64;
        assert!(mean.norm() < 0.02);
        assert!((var - 1.0).abs() <= 0.02, "variance {var}");
        let corr: Complex =
            (0..draws).map(|i| h[(i, 0)] * h[(i, 1)].conj()).sum::<Complex>() / draws as f64;
        assert!(corr.norm() <= 0.02, "correlation {}", corr.norm());
    }

    #[test]
    fn channel_is_seed_deterministic() {
        let a = draw_channel(8, 4, &mut trial_rng(5, 9)).h;
        let b = draw_channel(8, 4, &mut trial_rng(5, 9)).h;
        assert_eq!(a, b);
        let other = draw_channel(8, 4, &mut trial_rng(5, 10)).h;
        assert_ne!(a, other);
    }

    #[test]
    fn noise_statistics() {
        let y = CVector::from_fn(7, |i| c(i as f64, -1.0));
        assert_eq!(add_noise(&y, 0.0, &mut trial_rng(1, 1)).unwrap(), y);
        assert!(add_noise(&y, -1.0, &mut trial_rng(1, 1)).is_err());

        let n = 100_000;
        let noise = add_noise(&CVector::zeros(n), 2.0, &mut trial_rng(2, 2)).unwrap();
        let total = noise.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        let re = noise.iter().map(|z| z.re * z.re).sum::<f64>() / n as f64;
        let im = noise.iter().map(|z| z.im * z.im).sum::<f64>() / n as f64;
        assert!((total - 2.0).abs() <= 0.05, "{total}");
        assert!((re - 1.0).abs() <= 0.03, "{re}");
        assert!((im - 1.0).abs() <= 0.03, "{im}");
    }

    #[test]
    fn snr_convention() {
        assert_eq!(sigma2_from_snr(0.0, 1), 1.0);
        assert!((sigma2_from_snr(10.0, 16) - 1.6).abs() < 1e-15);
        assert!((sigma2_from_snr(7.3, 32) - 2.0 * sigma2_from_snr(7.3, 16)).abs() < 1e-15);
    }

    /// Every entry of `HᴴH/N − I` has variance `1/N`, so the normalized
    /// Frobenius deviation concentrates at `√(U/N)` and the per-entry RMS
    /// deviation at `1/√N`.
    #[test]
    fn channel_hardening() {
        let (n, u, draws) = (256, 16, 100);
        let mut rel = 0.0;
        let mut rms = 0.0;
        for t in 0..draws {
            let h = draw_channel(n, u, &mut trial_rng(77, t)).h;
            let g = matmul(&h.hermitian(), &h, &mut OpCount::new()).unwrap().scale(1.0 / n as f64);
            let dev = g.minus(&CMatrix::identity(u)).frobenius();
            rel += dev / (u as f64).sqrt();
            rms += dev / u as f64;
        }
        let (rel, rms) = (rel / draws as f64, rms / draws as f64);
        let expected = (u as f64 / n as f64).sqrt();
        assert!((rel - expected).abs() <= 0.05 * expected, "relative deviation {rel}");
        assert!(rms <= 0.15 && (rms - 1.0 / (n as f64).sqrt()).abs() <= 0.005, "rms {rms}");
        let small = draw_channel(32, u, &mut trial_rng(77, 0)).h;
        let gs = matmul(&small.hermitian(), &small, &mut OpCount::new()).unwrap().scale(1.0 / 32.0);
        assert!(gs.minus(&CMatrix::identity(u)).frobenius() / 4.0 > rel);
    }

    #[test]
    fn modulation_parsing() {
        assert_eq!("QPSK".parse::<Modulation>().unwrap(), Modulation::Qpsk);
        assert_eq!("64-QAM".parse::<Modulation>().unwrap(), Modulation::Qam64);
        assert!("8psk".parse::<Modulation>().is_err());
    }

    #[test]
    fn csv_table() {
        let csv = Constellation::new(Modulation::Qpsk).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "label,re,im");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("00,-0.7071067811865"));
    }
}
