#![allow(dead_code)]

use diamond_bounds::model::build_constraint;
use diamond_bounds::{ChannelConfig, Rho};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gains in `[-2, 2]`, powers in `[0, 20]`, correlation in `[-0.99, 0.99]`.
pub fn random_channel(rng: &mut ChaCha8Rng) -> (ChannelConfig, Rho) {
    let cfg = ChannelConfig::new(
        rng.gen_range(-2.0..=2.0),
        rng.gen_range(-2.0..=2.0),
        rng.gen_range(0.0..=20.0),
        rng.gen_range(0.0..=20.0),
        0.0,
        0.0,
    )
    .unwrap();
    (cfg, Rho::new(rng.gen_range(-0.99..=0.99)).unwrap())
}

pub fn same_sign() -> ChannelConfig {
    ChannelConfig::new(0.9, 0.9, 10.0, 10.0, 0.0, 0.0).unwrap()
}

pub fn opposite_sign() -> ChannelConfig {
    ChannelConfig::new(0.9, -0.9, 10.0, 10.0, 0.0, 0.0).unwrap()
}

/// Minimax dual of the broadcast sum capacity: the cooperative receiver rate
/// `½ log2 det(H K Hᵀ + N_z) / det(N_z)` minimised over unit-diagonal noise
/// covariances `N_z = [[1, z], [z, 1]]`. Every `z` gives an upper bound and
/// the minimum equals the sum capacity. Shares no code with the DPC search.
pub fn noise_dual_bound(rho: Rho, cfg: &ChannelConfig) -> f64 {
    let k = build_constraint(rho, cfg);
    let [h11, h12] = cfg.h1();
    let [h21, h22] = cfg.h2();
    let q = |u1: f64, u2: f64, v1: f64, v2: f64| u1 * v1 * k.m11 + (u1 * v2 + u2 * v1) * k.m12 + u2 * v2 * k.m22;
    let s11 = q(h11, h12, h11, h12);
    let s12 = q(h11, h12, h21, h22);
    let s22 = q(h21, h22, h21, h22);
    let value = |z: f64| {
        let det = (s11 + 1.0) * (s22 + 1.0) - (s12 + z) * (s12 + z);
        0.5 * (det / (1.0 - z * z)).log2()
    };
    let n = 20_001;
    let mut best = (f64::INFINITY, 0.0);
    for i in 1..n - 1 {
        let z = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let v = value(z);
        if v < best.0 {
            best = (v, z);
        }
    }
    // ternary search inside the two cells around the grid minimum
    let h = 2.0 / (n - 1) as f64;
    let (mut lo, mut hi) = ((best.1 - h).max(-1.0 + 1e-15), (best.1 + h).min(1.0 - 1e-15));
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if value(m1) < value(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best.0.min(value(0.5 * (lo + hi)))
}
