//! Closed-form scalar terms of the bounds.
//!
//! Every function returns bits per channel use as a plain `f64`. The backhaul
//! penalty [`f_c`] is `-inf` at `|ρ| = 1`; the min/max compositions in
//! [`crate::bounds`] absorb that value without special casing.

use crate::error::{Error, Result};
use crate::model::{ChannelConfig, Interval, Rho};

pub(crate) fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

/// Cross cut through relay 1: `C1 + ½ log(1 + max{a², 1}(1 − ρ²)P2)`.
pub fn f_a(rho: Rho, cfg: &ChannelConfig) -> f64 {
    let r = rho.value();
    cfg.c1 + half_log2(1.0 + (cfg.a * cfg.a).max(1.0) * (1.0 - r * r) * cfg.p2)
}

/// Cross cut through relay 2: `C2 + ½ log(1 + max{b², 1}(1 − ρ²)P1)`.
pub fn f_b(rho: Rho, cfg: &ChannelConfig) -> f64 {
    let r = rho.value();
    cfg.c2 + half_log2(1.0 + (cfg.b * cfg.b).max(1.0) * (1.0 - r * r) * cfg.p1)
}

/// Backhaul sum minus the cost of correlating the relay inputs:
/// `C1 + C2 − ½ log(1/(1 − ρ²))`.
pub fn f_c(rho: Rho, cfg: &ChannelConfig) -> f64 {
    let r = rho.value();
    // log2(1 - r^2) is -inf at |r| = 1
    cfg.c1 + cfg.c2 + half_log2(1.0 - r * r)
}

/// Endpoint `ρ_x = sgn(x)(√(1 + 1/(4x²P1P2)) − √(1/(4x²P1P2)))`.
///
/// Evaluated as `sgn(x) / (√(1 + q) + √q)` to avoid cancellation for small
/// `|x|`. Fails when `x = 0` or `P1 P2 = 0`.
pub fn rho_x(x: f64, cfg: &ChannelConfig) -> Result<Rho> {
    let power_product = cfg.p1 * cfg.p2;
    if x == 0.0 || power_product == 0.0 || !x.is_finite() {
        return Err(Error::DegenerateRhoX { x, power_product });
    }
    let q = 1.0 / (4.0 * x * x * power_product);
    let magnitude = 1.0 / ((1.0 + q).sqrt() + q.sqrt());
    Rho::new(magnitude.copysign(x))
}

/// `A_x = [0, ρ_x]` for `x ≥ 0`, `[ρ_x, 0]` otherwise; collapses to `[0, 0]`
/// when `ρ_x` is undefined (its limit there is 0).
pub fn interval_a_x(x: f64, cfg: &ChannelConfig) -> Interval {
    match rho_x(x, cfg) {
        Ok(end) if x > 0.0 => Interval::new(0.0, end.value()).unwrap_or(Interval::point(Rho::ZERO)),
        Ok(end) => Interval::new(end.value(), 0.0).unwrap_or(Interval::point(Rho::ZERO)),
        Err(_) => Interval::point(Rho::ZERO),
    }
}

/// Single-user rate toward destination 2 with full cooperation:
/// `½ log(b²P1 + P2 + 1 + 2bρ√(P1P2))`, equal to `½ log(1 + h2ᵀ K h2)`.
pub fn p2p_rate(rho: Rho, cfg: &ChannelConfig) -> f64 {
    let cross = 2.0 * cfg.b * rho.value() * (cfg.p1 * cfg.p2).sqrt();
    half_log2(cfg.b * cfg.b * cfg.p1 + cfg.p2 + 1.0 + cross)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(a: f64, b: f64, c1: f64, c2: f64) -> ChannelConfig {
        ChannelConfig::new(a, b, 10.0, 10.0, c1, c2).unwrap()
    }

    fn rho(v: f64) -> Rho {
        Rho::new(v).unwrap()
    }

    // Expected values below were evaluated with 40-digit arithmetic.

    #[test]
    fn f_a_examples() {
        for r in [1.0, -1.0] {
            assert_eq!(f_a(rho(r), &cfg(0.9, 0.9, 2.0, 0.0)), 2.0);
        }
        let v = f_a(Rho::ZERO, &cfg(0.9, 0.9, 2.0, 0.0));
        assert!((v - 3.729_715_809_318_648_6).abs() < 1e-12);
        let v = f_a(Rho::ZERO, &cfg(2.0, 0.9, 1.0, 0.0));
        assert!((v - 3.678_776_002_309_042).abs() < 1e-12);
    }

    #[test]
    fn f_b_examples() {
        assert_eq!(f_b(Rho::ONE, &cfg(0.9, 0.9, 0.0, 2.0)), 2.0);
        assert_eq!(f_b(Rho::MINUS_ONE, &cfg(0.9, 0.9, 0.0, 2.0)), 2.0);
        for b in [0.9, -0.9] {
            let v = f_b(Rho::ZERO, &cfg(0.9, b, 0.0, 2.0));
            assert!((v - 3.729_715_809_318_648_6).abs() < 1e-12);
        }
    }

    #[test]
    fn f_c_examples() {
        let c = cfg(0.9, 0.9, 2.0, 2.0);
        assert_eq!(f_c(Rho::ZERO, &c), 4.0);
        assert_eq!(f_c(Rho::ONE, &c), f64::NEG_INFINITY);
        assert_eq!(f_c(Rho::MINUS_ONE, &c), f64::NEG_INFINITY);
        assert!((f_c(rho(0.5), &c) - 3.792_481_250_360_578).abs() < 1e-12);
    }

    #[test]
    fn rho_x_examples() {
        let c = cfg(0.9, 0.9, 0.0, 0.0);
        let r = rho_x(0.9, &c).unwrap().value();
        assert!((r - 0.945_986_465_406_663_7).abs() < 1e-13);
        assert_eq!(rho_x(-0.9, &c).unwrap().value(), -r);
        assert!(rho_x(1e6, &c).unwrap().value() > 1.0 - 1e-6);
        assert!(rho_x(1e6, &c).unwrap().value() < 1.0);
        assert!(rho_x(0.0, &c).is_err());
        let no_power = ChannelConfig::new(0.9, 0.9, 0.0, 10.0, 0.0, 0.0).unwrap();
        assert!(rho_x(0.9, &no_power).is_err());
    }

    #[test]
    fn interval_examples() {
        let c = cfg(0.9, 0.9, 0.0, 0.0);
        let end = 0.945_986_465_406_663_7;
        let pos = interval_a_x(0.9, &c);
        assert_eq!(pos.lo(), 0.0);
        assert!((pos.hi() - end).abs() < 1e-13);
        let neg = interval_a_x(-0.9, &c);
        assert!((neg.lo() + end).abs() < 1e-13);
        assert_eq!(neg.hi(), 0.0);
        assert_eq!(interval_a_x(0.0, &c), Interval::point(Rho::ZERO));
    }

    #[test]
    fn p2p_examples() {
        let zero = ChannelConfig::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(p2p_rate(rho(0.3), &zero), 0.0);
        let c = cfg(0.9, 0.9, 0.0, 0.0);
        assert!((p2p_rate(Rho::ZERO, &c) - 2.127_750_366_574_193).abs() < 1e-12);
        assert!((p2p_rate(Rho::ONE, &c) - 2.606_673_640_866_720_5).abs() < 1e-12);
    }

    #[test]
    fn rho_x_solves_n3_boundary() {
        for &(b, p1, p2) in &[(0.9, 10.0, 10.0), (0.1, 1.0, 3.0), (3.0, 20.0, 0.5), (1e-3, 5.0, 5.0)] {
            let c = ChannelConfig::new(0.0, b, p1, p2, 0.0, 0.0).unwrap();
            let r = rho_x(b, &c).unwrap().value();
            let lhs = b * (p1 * p2).sqrt() * (1.0 / r - r) - 1.0;
            assert!(lhs.abs() < 1e-9, "b={b}: {lhs}");
        }
    }

    #[test]
    fn f_c_peaks_only_at_zero() {
        let c = cfg(0.9, 0.9, 1.3, 0.4);
        let peak = f_c(Rho::ZERO, &c);
        for i in 1..=200 {
            let r = i as f64 / 200.0;
            assert!(f_c(rho(r), &c) < peak);
            assert!(f_c(rho(-r), &c) < peak);
        }
    }

    #[test]
    fn f_a_nonincreasing_in_abs_rho() {
        let c = cfg(2.0, 0.9, 1.0, 0.0);
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let v = f_a(rho(i as f64 / 1000.0), &c);
            assert!(v <= prev);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn f_functions_are_even(r in -1.0f64..=1.0, a in -3.0f64..3.0, b in -3.0f64..3.0,
                                p1 in 0.0f64..30.0, p2 in 0.0f64..30.0) {
            let c = ChannelConfig::new(a, b, p1, p2, 1.5, 0.7).unwrap();
            prop_assert_eq!(f_a(rho(r), &c), f_a(rho(-r), &c));
            prop_assert_eq!(f_b(rho(r), &c), f_b(rho(-r), &c));
            prop_assert_eq!(f_c(rho(r), &c), f_c(rho(-r), &c));
        }

        #[test]
        fn rho_x_is_odd_and_inside(x in 1e-4f64..50.0, p1 in 1e-3f64..30.0, p2 in 1e-3f64..30.0) {
            let c = ChannelConfig::new(0.0, 0.0, p1, p2, 0.0, 0.0).unwrap();
            let pos = rho_x(x, &c).unwrap().value();
            let neg = rho_x(-x, &c).unwrap().value();
            prop_assert!(pos > 0.0 && pos < 1.0);
            prop_assert_eq!(neg, -pos);
            let larger = rho_x(2.0 * x, &c).unwrap().value();
            prop_assert!(larger >= pos);
        }
    }
}
