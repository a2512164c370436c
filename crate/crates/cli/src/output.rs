use std::io::{self, Write};

use serde_json::json;

use crate::experiment::ExperimentRow;

pub const CSV_HEADER: &str = "n_r,algorithm,mean_throughput_bits,mean_ratio,infeasible,trials,wall_s";

/// `x` to `digits` significant digits, formatted like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format_sig(x, 12)).unwrap_or_default()
}

/// CSV with LF endings; `wall_s` stays empty unless `timing` is set so reruns compare byte-for-byte.
pub fn write_csv<W: Write>(out: &mut W, rows: &[ExperimentRow], timing: bool) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n_r,
            r.algorithm,
            cell(r.mean_throughput_bits),
            cell(r.mean_ratio),
            r.infeasible,
            r.trials,
            cell(timing.then_some(r.wall_s)),
        )?;
    }
    Ok(())
}

/// One JSON object per row with the CSV's keys.
pub fn write_jsonl<W: Write>(out: &mut W, rows: &[ExperimentRow], timing: bool) -> io::Result<()> {
    for r in rows {
        let obj = json!({
            "n_r": r.n_r,
            "algorithm": r.algorithm,
            "mean_throughput_bits": r.mean_throughput_bits,
            "mean_ratio": r.mean_ratio,
            "infeasible": r.infeasible,
            "trials": r.trials,
            "wall_s": timing.then_some(r.wall_s),
        });
        writeln!(out, "{obj}")?;
    }
    Ok(())
}

pub fn csv_string(rows: &[ExperimentRow], timing: bool) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows, timing).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is UTF-8")
}
