//! `key = value` sweep configuration files.
//!
//! ```text
//! # power budgets: a comma list or start:step:stop
//! p_dbm = -20:2:30
//! omega = 0.95
//! realizations = 1000
//! strategies = tp, htee, gee
//! ```

use std::str::FromStr;
use std::time::Duration;

use super::sweep::{RelativePower, SweepConfig};
use super::Strategy;
use crate::error::{Error, Result};

pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key = value`, got {content:?}"),
        })?;
        apply(&mut cfg, key.trim(), value.trim()).map_err(|msg| Error::Parse { line, msg })?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn num<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("{key}: invalid value {value:?}: {e}"))
}

fn power_list(value: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    if let [start, step, stop] = parts[..] {
        let (start, step, stop): (f64, f64, f64) = (num("p_dbm", start)?, num("p_dbm", step)?, num("p_dbm", stop)?);
        if !(step > 0.0) || stop < start {
            return Err(format!("p_dbm: bad range {value:?}"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|k| start + step * k as f64).collect());
    }
    value.split(',').map(|t| num("p_dbm", t.trim())).collect()
}

fn apply(cfg: &mut SweepConfig, key: &str, value: &str) -> std::result::Result<(), String> {
    let sc = &mut cfg.scenario;
    match key {
        "p_dbm" => cfg.p_dbm = power_list(value)?,
        "omega" => cfg.omega = num(key, value)?,
        "realizations" => cfg.realizations = num(key, value)?,
        "master_seed" => cfg.master_seed = num(key, value)?,
        "strategies" => {
            cfg.strategies = value
                .split(',')
                .map(|s| s.parse::<Strategy>().map_err(|e| e.to_string()))
                .collect::<std::result::Result<_, _>>()?
        }
        "eta" => cfg.eta = num(key, value)?,
        "eps" => cfg.eps = num(key, value)?,
        "r_min" => cfg.r_min = num(key, value)?,
        "node_budget" => cfg.node_budget = num(key, value)?,
        "sit_node_budget" => cfg.sit_node_budget = num(key, value)?,
        "time_budget_s" => cfg.time_budget = Some(Duration::from_secs_f64(num(key, value)?)),
        "threads" => cfg.threads = Some(num(key, value)?),
        "reuse_gee" => cfg.reuse_gee = num(key, value)?,
        "relative_power" => {
            cfg.relative_power = match value {
                "ratio_of_averages" => RelativePower::RatioOfAverages,
                "average_of_ratios" => RelativePower::AverageOfRatios,
                _ => return Err(format!("relative_power: unknown mode {value:?}")),
            }
        }
        "n_cells" => sc.n_cells = num(key, value)?,
        "area_edge" => sc.area_edge = num(key, value)?,
        "carrier_freq_mhz" => sc.carrier_freq_mhz = num(key, value)?,
        "bs_height" => sc.bs_height = num(key, value)?,
        "ue_height" => sc.ue_height = num(key, value)?,
        "shadowing_sigma_db" => sc.shadowing_sigma_db = num(key, value)?,
        "noise_density_dbm_hz" => sc.noise_density_dbm_hz = num(key, value)?,
        "noise_figure_db" => sc.noise_figure_db = num(key, value)?,
        "bandwidth" => sc.bandwidth = num(key, value)?,
        "pa_efficiency" => sc.pa_efficiency = num(key, value)?,
        "p_static" => sc.p_static = num(key, value)?,
        "static_power_per_ue" => sc.static_power_per_ue = num(key, value)?,
        "min_distance" => sc.min_distance = num(key, value)?,
        _ => return Err(format!("unknown key {key:?}")),
    }
    Ok(())
}
