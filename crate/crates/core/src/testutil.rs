use crate::cplx::{matmul, CMatrix, OpCount};
use crate::phy::{draw_channel, trial_rng};

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
    draw_channel(rows, cols, &mut trial_rng(seed, 0xA11CE)).h
}

/// `HᴴH + reg·I` for a Gaussian `n×u` channel.
pub fn random_gramian(n: usize, u: usize, reg: f64, seed: u64) -> CMatrix {
    let h = random_matrix(n, u, seed);
    let mut g = matmul(&h.hermitian(), &h, &mut OpCount::new()).unwrap();
    for i in 0..u {
        g[(i, i)].re += reg;
        g[(i, i)].im = 0.0;
    }
    // exact Hermitian symmetry for the factorization prechecks
    for i in 0..u {
        for j in 0..i {
            g[(i, j)] = g[(j, i)].conj();
        }
    }
    g
}
