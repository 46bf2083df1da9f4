//! Fast invariant checks: op counts, decomposition residuals, backend agreement.

use mimo_core::complexity::{decomposition_rm, measure_rm, Algorithm};
use mimo_core::cplx::{matmul, Convention, OpCount};
use mimo_core::decomp::{cholesky, gram_schmidt_qr, ldl};
use mimo_core::detect::{detect_linear, gramian};
use mimo_core::phy::{draw_channel, trial_rng};
use mimo_core::{Backend, CMatrix, DetectorSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

fn count_check(algorithm: Algorithm, u: u64, convention: Convention) -> Check {
    let expected = decomposition_rm(algorithm, u, convention).expect("decomposition");
    let got = measure_rm(algorithm, u as usize, 11).map(|c| c.real_mul);
    Check {
        name: format!("{algorithm} U={u} real_mul"),
        expected: expected.to_string(),
        got: got.as_ref().map_or_else(|e| e.to_string(), |g| g.to_string()),
        pass: got == Ok(expected),
    }
}

fn residual_check() -> Check {
    let mut worst: f64 = 0.0;
    let mut error = None;
    for k in 0..60u64 {
        let u = [2, 4, 8, 16, 32][(k % 5) as usize];
        let h = draw_channel(2 * u, u, &mut trial_rng(5, k)).h;
        let g = gramian(&h, 0.1, &mut OpCount::new()).unwrap().g;
        let mut acc = OpCount::new();
        let result = (|| -> mimo_core::Result<f64> {
            let qr = gram_schmidt_qr(&g, &mut acc)?;
            let ch = cholesky(&g, &mut acc)?;
            let ld = ldl(&g, &mut acc)?;
            let dl = CMatrix::from_fn(u, u, |i, j| ld.l[(i, j)] * ld.d[j]);
            let recs = [
                matmul(&qr.q, &qr.r, &mut acc)?,
                matmul(&ch.l, &ch.l.hermitian(), &mut acc)?,
                matmul(&dl, &ld.l.hermitian(), &mut acc)?,
            ];
            Ok(recs.iter().map(|r| r.rel_diff(&g)).fold(0.0, f64::max))
        })();
        match result {
            Ok(r) => worst = worst.max(r),
            Err(e) => error = Some(e.to_string()),
        }
    }
    Check {
        name: "QR/Cholesky/LDL reconstruction".into(),
        expected: "<= 1e-10".into(),
        got: error.clone().unwrap_or_else(|| format!("{worst:.1e}")),
        pass: error.is_none() && worst <= 1e-10,
    }
}

fn backend_check() -> Check {
    let mut worst: f64 = 0.0;
    let mut error = None;
    for k in 0..60u64 {
        let u = [2, 4, 8, 16][(k % 4) as usize];
        let mut rng = trial_rng(6, k);
        let h = draw_channel(2 * u, u, &mut rng).h;
        let y = draw_channel(2 * u, 1, &mut rng).h.col(0);
        let solve = |backend| detect_linear(&h, &y, 0.05, &DetectorSpec::Mmse { backend });
        let reference = match solve(Backend::Direct) {
            Ok(r) => r.x_soft,
            Err(e) => {
                error = Some(e.to_string());
                continue;
            }
        };
        for backend in [Backend::Qr, Backend::Cholesky, Backend::Ldl] {
            match solve(backend) {
                Ok(r) => worst = worst.max(r.x_soft.minus(&reference).norm() / reference.norm()),
                Err(e) => error = Some(e.to_string()),
            }
        }
    }
    Check {
        name: "MMSE backend agreement".into(),
        expected: "<= 1e-8".into(),
        got: error.clone().unwrap_or_else(|| format!("{worst:.1e}")),
        pass: error.is_none() && worst <= 1e-8,
    }
}

/// Runs every check. Expected op counts come from the structural product
/// counts under `convention`; pass a non-standard one as a negative control.
pub fn run(convention: Convention) -> Vec<Check> {
    let mut checks = Vec::new();
    for u in [8, 16, 32] {
        checks.push(count_check(Algorithm::Cholesky, u, convention));
    }
    for u in [8, 16, 32] {
        checks.push(count_check(Algorithm::Ldl, u, convention));
    }
    for u in [2, 8, 16, 32, 64] {
        checks.push(count_check(Algorithm::Qr, u, convention));
    }
    checks.push(residual_check());
    checks.push(backend_check());
    checks
}

pub fn render(checks: &[Check]) -> String {
    let w = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = format!("{:<w$}  {:>10}  {:>10}  result\n", "check", "expected", "got");
    for c in checks {
        out.push_str(&format!(
            "{:<w$}  {:>10}  {:>10}  {}\n",
            c.name,
            c.expected,
            c.got,
            if c.pass { "ok" } else { "FAIL" }
        ));
    }
    out
}
