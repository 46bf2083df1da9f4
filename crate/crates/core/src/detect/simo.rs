use crate::cplx::{dot_h, norm_sq, rcmul, recip, CVector, Complex, OpCount};
use crate::error::Result;
use crate::phy::{
    add_noise, draw_channel, modulate, random_bits, sigma2_from_snr, slice, trial_rng,
    Constellation,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerEstimate {
    pub bit_errors: u64,
    pub bits: u64,
}

impl BerEstimate {
    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits as f64
        }
    }
}

/// Maximum-ratio combining for one user: `hᴴy / ‖h‖²`.
pub fn simo_equalize(h: &CVector, y: &CVector, acc: &mut OpCount) -> Result<Complex> {
    let num = dot_h(h, y, acc)?;
    let energy = norm_sq(h, acc)?;
    Ok(rcmul(recip(energy, acc), num, acc))
}

/// Single-user, `n`-antenna error rate: the interference-free bound.
///
/// `users` only fixes the noise level through [`sigma2_from_snr`], so that
/// the bound can be plotted against a `users`-stream system at equal SNR.
pub fn simo_bound(
    n: usize,
    constellation: &Constellation,
    snr_db: f64,
    users: usize,
    trials: u64,
    seed: u64,
) -> Result<BerEstimate> {
    let sigma2 = sigma2_from_snr(snr_db, users);
    let m = constellation.bits_per_symbol();
    let mut bit_errors = 0;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let bits = random_bits(m, &mut rng);
        let s = modulate(&bits, constellation)?[0];
        let h = draw_channel(n, 1, &mut rng).h.col(0);
        let clean = CVector::from_fn(n, |i| h[i] * s);
        let y = add_noise(&clean, sigma2, &mut rng)?;
        let soft = simo_equalize(&h, &y, &mut OpCount::new())?;
        let decided = slice(&CVector::new(vec![soft]), constellation);
        bit_errors += bits
            .iter()
            .zip(&decided.bits)
            .filter(|(a, b)| a != b)
            .count() as u64;
    }
    Ok(BerEstimate {
        bit_errors,
        bits: trials * m as u64,
    })
}
