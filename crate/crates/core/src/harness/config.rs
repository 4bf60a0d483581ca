use crate::controller::Gains;
use crate::error::{Error, Result};
use crate::plant::{Disturbance, Phase, SimConfig, Sinusoid};

/// Parses flat `key = value` text. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got {raw:?}", n + 1)))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn real(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?} as a number")))
}

fn reals<const N: usize>(key: &str, v: &str) -> Result<[f64; N]> {
    let parts: Vec<f64> = v.split(',').map(|p| real(key, p)).collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|p: Vec<f64>| Error::Config(format!("{key}: expected {N} comma-separated values, got {}", p.len())))
}

/// `amp:freq:sin|cos` terms separated by `;`, e.g. `0.6:2:cos; 0.4:3.1622776601683795:sin`.
fn sinusoids(key: &str, v: &str) -> Result<Vec<Sinusoid<f64>>> {
    v.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty() && *s != "none")
        .map(|term| {
            let f: Vec<&str> = term.split(':').map(str::trim).collect();
            let [amp, freq, phase] = f.as_slice() else {
                return Err(Error::Config(format!("{key}: expected amp:freq:sin|cos, got {term:?}")));
            };
            let phase = match *phase {
                "sin" => Phase::Sin,
                "cos" => Phase::Cos,
                other => return Err(Error::Config(format!("{key}: unknown phase {other:?}"))),
            };
            Ok(Sinusoid { amplitude: real(key, amp)?, frequency: real(key, freq)?, phase })
        })
        .collect()
}

/// Applies one override to a configuration. Keys mirror the configuration fields:
/// `method`, `h`, `t_final`, `kp1`..`kp4`, `L`, `gains` (4 values), `z1_0`, `z2_0`,
/// `eta_0`, `init` (3 values), `delta_const`, `delta_terms`, `disturbance` (`paper`|`zero`).
pub fn apply_override(cfg: &mut SimConfig<f64>, key: &str, value: &str) -> Result<()> {
    match key {
        "method" => cfg.method = value.parse()?,
        "h" => cfg.h = real(key, value)?,
        "t_final" | "t-final" => cfg.t_final = real(key, value)?,
        "kp1" => cfg.gains.kp1 = real(key, value)?,
        "kp2" => cfg.gains.kp2 = real(key, value)?,
        "kp3" => cfg.gains.kp3 = real(key, value)?,
        "kp4" => cfg.gains.kp4 = real(key, value)?,
        "L" | "scale" => cfg.gains.scale = real(key, value)?,
        "gains" => {
            let [kp1, kp2, kp3, kp4] = reals::<4>(key, value)?;
            cfg.gains = Gains { kp1, kp2, kp3, kp4, scale: cfg.gains.scale };
        }
        "z1_0" => cfg.z1_0 = real(key, value)?,
        "z2_0" => cfg.z2_0 = real(key, value)?,
        "eta_0" => cfg.eta_0 = real(key, value)?,
        "init" => [cfg.z1_0, cfg.z2_0, cfg.eta_0] = reals::<3>(key, value)?,
        "delta_const" => cfg.disturbance.constant = real(key, value)?,
        "delta_terms" => cfg.disturbance.sinusoids = sinusoids(key, value)?,
        "disturbance" => {
            cfg.disturbance = match value {
                "paper" => Disturbance::paper(),
                "zero" => Disturbance::zero(),
                other => return Err(Error::Config(format!("disturbance: unknown signal {other:?}"))),
            }
        }
        other => return Err(Error::Config(format!("unknown configuration key {other:?}"))),
    }
    Ok(())
}

pub fn apply_overrides<K: AsRef<str>, V: AsRef<str>>(cfg: &mut SimConfig<f64>, overrides: &[(K, V)]) -> Result<()> {
    for (k, v) in overrides {
        apply_override(cfg, k.as_ref(), v.as_ref())?;
    }
    Ok(())
}
