//! Cooperativity thresholds.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::transducer::{efficiency, ReducedParams, DIRECT_LINK_COOPERATIVITY, EPR_COOPERATIVITY};

/// Smallest cooperativity at which an `n`-client persistency-one state
/// survives direct distribution with probability one half, i.e.
/// `eta(C)^(2n) = 1/2` on the rising branch, found by bisection.
pub fn dmd_state_threshold(n_clients: usize, zeta_o: f64, zeta_m: f64) -> Result<f64> {
    if n_clients == 0 {
        return Err(Error::Domain("at least one client is required".into()));
    }
    let p = |c: f64| -> Result<f64> {
        let eta = efficiency(&ReducedParams::new(c, zeta_o, zeta_m)?);
        Ok((eta * eta).powi(n_clients as i32))
    };
    let max = p(1.0)?;
    if max < 0.5 {
        return Err(Error::NoSolution { target: 0.5, max });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid)? < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Plain-text threshold table, 12 significant digits.
pub fn thresholds_report(clients: &[usize], zeta_o: f64, zeta_m: f64) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "{:<44} {:.12}", "C_th  (eta = 1/2, 3 - 2*sqrt(2))", EPR_COOPERATIVITY);
    let _ = writeln!(
        out,
        "{:<44} {:.12}",
        "C_dmd (eta^2 = 1/2, one-way capacity > 0)", DIRECT_LINK_COOPERATIVITY
    );
    let _ = writeln!(out, "zeta_o = {zeta_o}, zeta_m = {zeta_m}, l = 0");
    for &n in clients {
        let label = format!("n = {n}: (eta^2)^n = 1/2 at C");
        match dmd_state_threshold(n, zeta_o, zeta_m) {
            Ok(c) => {
                let _ = writeln!(out, "{label:<44} {c:.12}");
            }
            Err(Error::NoSolution { max, .. }) => {
                let _ = writeln!(out, "{label:<44} unreachable (max {max:.12})");
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
