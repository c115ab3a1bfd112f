use std::fmt::Write as _;
use std::path::Path;

use super::sweep::SweepRecord;
use super::Strategy;
use crate::error::Result;

/// Plain decimal (or exponent form for very large/small magnitudes) with 9
/// significant digits and trailing zeros removed, like C's `%.9g`.
pub fn format_sig(v: f64) -> String {
    const DIGITS: i32 = 9;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn table<F>(records: &[SweepRecord], header: &[&str], row: F) -> String
where
    F: Fn(&SweepRecord) -> Vec<f64>,
{
    let mut out = header.join(",");
    out.push('\n');
    for r in records {
        let mut line = format_sig(r.p_dbm);
        for v in row(r) {
            let _ = write!(line, ",{}", format_sig(v));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn per_strategy(r: &SweepRecord, f: impl Fn(&super::StrategyStats) -> f64) -> Vec<f64> {
    Strategy::ALL.iter().map(|&s| r.get(s).map_or(f64::NAN, &f)).collect()
}

/// Writes `throughput.csv` (Mbit/s), `gee.csv` (Mbit/J), `power.csv`
/// (relative % and absolute W) and `stats.csv` (counts and mean node
/// counts) into `dir`.
pub fn write_csvs(records: &[SweepRecord], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let tp = table(records, &["p_dbm", "tp_tp", "tp_htee", "tp_gee"], |r| {
        per_strategy(r, |s| s.throughput_mbps)
    });
    let gee = table(records, &["p_dbm", "gee_tp", "gee_htee", "gee_gee"], |r| {
        per_strategy(r, |s| s.gee_mbit_per_j)
    });
    let power = table(
        records,
        &[
            "p_dbm",
            "prel_tp",
            "prel_htee",
            "prel_gee",
            "pabs_tp",
            "pabs_htee",
            "pabs_gee",
        ],
        |r| {
            let mut v = per_strategy(r, |s| s.relative_power_pct);
            v.extend(per_strategy(r, |s| s.total_power_w));
            v
        },
    );
    let stats = table(
        records,
        &["p_dbm", "used", "failed", "nodes_tp", "nodes_htee", "nodes_gee"],
        |r| {
            let mut v = vec![r.used as f64, r.failed as f64];
            v.extend(per_strategy(r, |s| s.mean_nodes));
            v
        },
    );
    std::fs::write(dir.join("throughput.csv"), tp)?;
    std::fs::write(dir.join("gee.csv"), gee)?;
    std::fs::write(dir.join("power.csv"), power)?;
    std::fs::write(dir.join("stats.csv"), stats)?;
    Ok(())
}
