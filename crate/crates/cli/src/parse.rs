//! Text forms of detector selections, SNR grids and user lists.

use mimo_core::montecarlo::Curve;
use mimo_core::presets::grid;
use mimo_core::{Backend, Beta, DetectorSpec, GsInit};

fn backend(s: &str) -> Result<Backend, String> {
    match s.to_ascii_lowercase().as_str() {
        "qr" => Ok(Backend::Qr),
        "chol" | "cholesky" => Ok(Backend::Cholesky),
        "ldl" => Ok(Backend::Ldl),
        "direct" | "inv" => Ok(Backend::Direct),
        other => Err(format!("unknown backend `{other}` (qr, chol, ldl, direct)")),
    }
}

fn iterations(s: Option<&str>, what: &str) -> Result<usize, String> {
    let s = s.ok_or_else(|| format!("{what} needs an iteration count, e.g. `{what}:3`"))?;
    match s.parse::<usize>() {
        Ok(t) if t >= 1 => Ok(t),
        _ => Err(format!("bad iteration count `{s}` for {what}")),
    }
}

/// Parses `mmse[:backend]`, `zf[:backend]`, `nsa:t`, `gs:t[:diag]`, `cg:t`,
/// `admin:t[:scale | :beta=value]` or `simo`.
pub fn curve(s: &str) -> Result<Curve, String> {
    let mut parts = s.trim().split(':');
    let kind = parts.next().unwrap_or_default().to_ascii_lowercase();
    let (a, b) = (parts.next(), parts.next());
    if parts.next().is_some() {
        return Err(format!("too many fields in detector `{s}`"));
    }
    let no_extra = |x: Option<&str>| match x {
        Some(x) => Err(format!("unexpected field `{x}` in detector `{s}`")),
        None => Ok(()),
    };
    let spec = match kind.as_str() {
        "mmse" | "zf" => {
            no_extra(b)?;
            let backend = a.map(backend).transpose()?.unwrap_or(Backend::Cholesky);
            if kind == "mmse" {
                DetectorSpec::Mmse { backend }
            } else {
                DetectorSpec::Zf { backend }
            }
        }
        "nsa" => {
            no_extra(b)?;
            DetectorSpec::Nsa {
                iterations: iterations(a, "nsa")?,
            }
        }
        "cg" => {
            no_extra(b)?;
            DetectorSpec::Cg {
                iterations: iterations(a, "cg")?,
            }
        }
        "gs" => {
            let init = match b {
                None | Some("zero") => GsInit::Zero,
                Some("diag") => GsInit::Diagonal,
                Some(x) => return Err(format!("unknown GS init `{x}` (zero, diag)")),
            };
            DetectorSpec::Gs {
                iterations: iterations(a, "gs")?,
                init,
            }
        }
        "admin" => {
            let beta = match b {
                None => Beta::default(),
                Some(x) => match x.strip_prefix("beta=") {
                    Some(v) => Beta::Fixed(v.parse().map_err(|_| format!("bad beta `{v}`"))?),
                    None => Beta::NoiseScaled(x.parse().map_err(|_| format!("bad beta scale `{x}`"))?),
                },
            };
            DetectorSpec::Admin {
                iterations: iterations(a, "admin")?,
                beta,
            }
        }
        "simo" => {
            no_extra(a)?;
            return Ok(Curve::SimoBound);
        }
        other => return Err(format!("unknown detector `{other}`")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(Curve::Detector(spec))
}

/// `start:step:stop` (inclusive), or a comma-separated list of values.
pub fn snr_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad SNR value `{x}`"))
    };
    let fields: Vec<&str> = s.split(':').collect();
    let values = match fields.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 || stop < start {
                return Err(format!("SNR range `{s}` needs step > 0 and stop >= start"));
            }
            grid(start, step, stop)
        }
        [list] => list.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err(format!("SNR range `{s}` is not start:step:stop")),
    };
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("SNR values in `{s}` must be increasing"));
    }
    Ok(values)
}

/// Comma-separated user counts, each at least 1.
pub fn user_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|x| match x.trim().parse::<u64>() {
            Ok(u) if (1..=4096).contains(&u) => Ok(u),
            _ => Err(format!("bad user count `{x}` (expected 1..=4096)")),
        })
        .collect()
}
