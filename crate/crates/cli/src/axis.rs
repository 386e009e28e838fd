//! Axis specifications on the command line.
//!
//! Counts: comma-separated integers or inclusive ranges, `2..10,20,50`.
//! Reals: comma-separated numbers or generated grids `log:LO:HI:COUNT`,
//! `lin:LO:HI:COUNT`, freely mixed.

use mbcoh_core::grid::{lin_space, log_space};

use crate::error::{CliError, CliResult};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_counts(spec: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let int = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("not a non-negative integer: {s:?}")))
        };
        if let Some((lo, hi)) = item.split_once("..") {
            let (lo, hi) = (int(lo)?, int(hi)?);
            if hi < lo {
                return Err(usage(format!("empty range {item:?}")));
            }
            out.extend(lo..=hi);
        } else {
            out.push(int(item)?);
        }
    }
    if out.is_empty() {
        return Err(usage(format!("empty axis {spec:?}")));
    }
    Ok(out)
}

pub fn parse_reals(spec: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let real = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("not a number: {s:?}")))
        };
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [kind @ ("log" | "lin"), lo, hi, count] => {
                let (lo, hi) = (real(lo)?, real(hi)?);
                let count = count
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("bad point count in {item:?}")))?;
                if *kind == "log" {
                    out.extend(log_space(lo, hi, count)?);
                } else {
                    out.extend(lin_space(lo, hi, count));
                }
            }
            [single] => out.push(real(single)?),
            _ => return Err(usage(format!("cannot parse axis item {item:?}"))),
        }
    }
    if out.is_empty() {
        return Err(usage(format!("empty axis {spec:?}")));
    }
    Ok(out)
}
