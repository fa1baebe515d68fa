//! Brute-force reference evaluations.
//!
//! Nothing here refines, memoizes or shares code with the optimizers it
//! checks beyond the basic matrix helpers: the broadcast oracle builds every
//! candidate covariance explicitly and scores it with [`dpc_sum_rate`], and the
//! max-min oracle is a plain scan.

use std::f64::consts::PI;

use crate::closed_forms::rho_x;
use crate::error::{Error, Result};
use crate::mimo_bc::{dpc_sum_rate, DpcAllocation, EncodingOrder};
use crate::model::{build_constraint, psd_sqrt, ChannelConfig, Interval, Psd2, Rho};

fn mul(x: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn dense(m: &Psd2) -> [[f64; 2]; 2] {
    [[m.m11, m.m12], [m.m12, m.m22]]
}

/// Exhaustive DPC search on `n_theta` angles in `[0, π)` and `n_q` levels per
/// eigenvalue of `Q` in `[0, 1]`, both encoding orders, with `B1 = K^½ Q K^½`
/// and `B2 = K − B1`.
pub fn grid_sum_capacity(rho: Rho, cfg: &ChannelConfig, resolution: (usize, usize)) -> Result<f64> {
    let (n_theta, n_q) = resolution;
    if n_theta < 3 || n_q < 3 {
        return Err(Error::Precondition(format!(
            "grid resolution must be at least (3, 3), got ({n_theta}, {n_q})"
        )));
    }
    let k = build_constraint(rho, cfg);
    let s = dense(&psd_sqrt(&k)?);
    let mut best = 0.0f64;
    for i in 0..n_theta {
        let theta = PI * i as f64 / n_theta as f64;
        let (sin, cos) = theta.sin_cos();
        let rot = [[cos, -sin], [sin, cos]];
        let rot_t = [[cos, sin], [-sin, cos]];
        for j in 0..n_q {
            for l in 0..n_q {
                let q1 = j as f64 / (n_q - 1) as f64;
                let q2 = l as f64 / (n_q - 1) as f64;
                let q = mul(mul(rot, [[q1, 0.0], [0.0, q2]]), rot_t);
                let b = mul(mul(s, q), s);
                let b1 = Psd2::new_unchecked(b[0][0], 0.5 * (b[0][1] + b[1][0]), b[1][1]);
                let b2 = k.sub(&b1);
                for order in EncodingOrder::BOTH {
                    let alloc = DpcAllocation::from_parts_unchecked(b1, b2, order);
                    best = best.max(dpc_sum_rate(&alloc, cfg));
                }
            }
        }
    }
    Ok(best)
}

/// Maximum of `min_i f_i` over `n` uniform points of `domain`.
pub fn grid_max_min(fns: &[&dyn Fn(Rho) -> f64], domain: Interval, n: usize) -> Result<(f64, Rho)> {
    if fns.is_empty() {
        return Err(Error::EmptyFunctionList);
    }
    if n < 3 {
        return Err(Error::Precondition(format!("grid_max_min needs n >= 3, got {n}")));
    }
    let mut best = (f64::NEG_INFINITY, Rho::clamped(domain.lo()));
    for rho in domain.grid(n) {
        let g = fns.iter().map(|f| f(rho)).fold(f64::INFINITY, f64::min);
        if g > best.0 {
            best = (g, rho);
        }
    }
    Ok(best)
}

/// Residual of the algebraic identity that turns the single-letter bound into
/// the averaged term `½(f_C(ρ) + C_MIMO(ρ))`.
///
/// With `N3 = b√(P1P2)(1/ρ − ρ) − 1` the bracketed log term
///
/// ```text
/// ½ log [((1−ρ²)b²P1 + 1 + N3)((1−ρ²)P2 + 1 + N3)
///        / ((1 + N3)(b²P1 + P2 + 2bρ√(P1P2) + 1 + N3))]
/// ```
///
/// collapses to `−½ log(1/(1−ρ²))`; the return value is the absolute gap.
/// `ρ` must lie in `(0, ρ_b]` for `b > 0` or `[ρ_b, 0)` for `b < 0`, which is
/// where `N3 ≥ 0`.
pub fn n3_identity_residual(rho: Rho, cfg: &ChannelConfig) -> Result<f64> {
    let b = cfg.b;
    let r = rho.value();
    let end = rho_x(b, cfg)
        .map_err(|e| Error::Precondition(format!("identity needs b != 0 and P1 P2 > 0 ({e})")))?
        .value();
    let admissible = if b > 0.0 {
        r > 0.0 && r <= end
    } else {
        r < 0.0 && r >= end
    };
    if !admissible {
        return Err(Error::Precondition(format!(
            "rho = {r} is outside the admissible set for b = {b} (endpoint {end})"
        )));
    }
    let root = (cfg.p1 * cfg.p2).sqrt();
    let one_minus = 1.0 - r * r;
    let n3 = (b * root * (1.0 / r - r) - 1.0).max(0.0);
    let num = (one_minus * b * b * cfg.p1 + 1.0 + n3) * (one_minus * cfg.p2 + 1.0 + n3);
    let den = (1.0 + n3) * (b * b * cfg.p1 + cfg.p2 + 2.0 * b * r * root + 1.0 + n3);
    let lhs = 0.5 * (num / den).log2();
    let rhs = -0.5 * (1.0 / one_minus).log2();
    Ok((lhs - rhs).abs())
}
