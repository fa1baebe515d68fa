//! Sum capacity of the two-antenna Gaussian broadcast channel to two
//! single-antenna users under a transmit covariance constraint
//! `E[XXᵀ] ⪯ K(ρ)`.
//!
//! Dirty-paper coding achieves the sum capacity, so the optimum is searched
//! directly over DPC allocations. Both rate terms are nondecreasing in the
//! total covariance, which lets the search saturate the constraint:
//!
//! ```text
//! B1 = K^½ Q K^½,   B2 = K^½ (I − Q) K^½,   0 ⪯ Q ⪯ I
//! Q  = R(θ) diag(q1, q2) R(θ)ᵀ,   θ ∈ [0, π),   q1, q2 ∈ [0, 1]
//! ```
//!
//! A coarse grid over `(θ, q1, q2)` for each encoding order is followed by
//! coordinate-descent refinement of the best grid points.

use std::f64::consts::PI;

use crate::closed_forms::half_log2;
use crate::error::{Error, Result};
use crate::model::{build_constraint, psd_sqrt, quadratic_form, ChannelConfig, Psd2, Rho};

/// Numerical settings shared by the broadcast-channel optimizer and the outer
/// max-min search over ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOptions {
    /// Accuracy target for the sum capacity, in bits.
    pub tolerance: f64,
    pub theta_grid: usize,
    pub q_grid: usize,
    /// Grid points per order that seed a refinement.
    pub refine_starts: usize,
    pub refine_max_iter: usize,
    pub refine_shrink: f64,
    pub refine_min_step: f64,
    /// Uniform points for the outer search over ρ.
    pub rho_grid: usize,
    /// Bracket width at which golden-section refinement stops.
    pub golden_xtol: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            tolerance: 1e-4,
            theta_grid: 33,
            q_grid: 17,
            refine_starts: 4,
            refine_max_iter: 200,
            refine_shrink: 0.5,
            refine_min_step: 1e-6,
            rho_grid: 2001,
            golden_xtol: 1e-10,
        }
    }
}

impl OptimizerOptions {
    /// Defaults with a different accuracy target. The refinement stop step
    /// follows the target so that a looser tolerance also runs faster.
    pub fn with_tolerance(tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidConfig {
                field: "tol",
                value: tolerance,
                reason: "must be positive and finite",
            });
        }
        Ok(OptimizerOptions {
            tolerance,
            refine_min_step: tolerance * 1e-2,
            ..Self::default()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingOrder {
    /// User 1 is encoded first; user 2 is dirty-paper coded against it.
    User1First,
    /// User 2 is encoded first; user 1 is dirty-paper coded against it.
    User2First,
}

impl EncodingOrder {
    pub const BOTH: [EncodingOrder; 2] = [EncodingOrder::User1First, EncodingOrder::User2First];
}

/// Input covariances of the two DPC layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpcAllocation {
    b1: Psd2,
    b2: Psd2,
    order: EncodingOrder,
}

impl DpcAllocation {
    pub(crate) fn from_parts_unchecked(b1: Psd2, b2: Psd2, order: EncodingOrder) -> Self {
        DpcAllocation { b1, b2, order }
    }

    /// Checks `B1 ⪰ 0`, `B2 ⪰ 0` and `B1 + B2 ⪯ constraint`.
    pub fn new(b1: Psd2, b2: Psd2, order: EncodingOrder, constraint: &Psd2) -> Result<Self> {
        for m in [&b1, &b2] {
            if !m.is_psd() {
                return Err(Error::NotPsd {
                    m11: m.m11,
                    m12: m.m12,
                    m22: m.m22,
                });
            }
        }
        if !b1.add(&b2).loewner_le(constraint) {
            return Err(Error::AllocationExceedsConstraint);
        }
        Ok(DpcAllocation { b1, b2, order })
    }

    pub fn b1(&self) -> &Psd2 {
        &self.b1
    }

    pub fn b2(&self) -> &Psd2 {
        &self.b2
    }

    pub fn order(&self) -> EncodingOrder {
        self.order
    }
}

/// Sum rate of a DPC allocation with unit noise at both receivers.
pub fn dpc_sum_rate(alloc: &DpcAllocation, cfg: &ChannelConfig) -> f64 {
    let [h11, h12] = cfg.h1();
    let [h21, h22] = cfg.h2();
    let u1_b1 = quadratic_form(h11, h12, &alloc.b1).max(0.0);
    let u1_b2 = quadratic_form(h11, h12, &alloc.b2).max(0.0);
    let u2_b1 = quadratic_form(h21, h22, &alloc.b1).max(0.0);
    let u2_b2 = quadratic_form(h21, h22, &alloc.b2).max(0.0);
    match alloc.order {
        EncodingOrder::User2First => half_log2(1.0 + u1_b1) + half_log2(1.0 + u2_b2 / (1.0 + u2_b1)),
        EncodingOrder::User1First => half_log2(1.0 + u2_b2) + half_log2(1.0 + u1_b1 / (1.0 + u1_b2)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumCapacityResult {
    pub bits: f64,
    pub best_allocation: DpcAllocation,
    /// Refined optimum minus best grid value.
    pub optimizer_gap_estimate: f64,
}

/// Point in the saturated-constraint search space.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Params {
    theta: f64,
    q1: f64,
    q2: f64,
}

/// `K^½ h1` and `K^½ h2` for one constraint. With `g = K^½ h`,
/// `hᵀ B1 h = gᵀ Q g` and `hᵀ B2 h = |g|² − gᵀ Q g`, so each candidate costs a
/// handful of flops.
struct Projected {
    sqrt_k: Psd2,
    g1: [f64; 2],
    g2: [f64; 2],
    n1: f64,
    n2: f64,
}

impl Projected {
    fn new(rho: Rho, cfg: &ChannelConfig) -> Self {
        let k = build_constraint(rho, cfg);
        // K(ρ) is PSD for every ρ in [-1, 1]
        let sqrt_k = psd_sqrt(&k).unwrap_or(Psd2::ZERO);
        let apply = |h: [f64; 2]| {
            [
                sqrt_k.m11 * h[0] + sqrt_k.m12 * h[1],
                sqrt_k.m12 * h[0] + sqrt_k.m22 * h[1],
            ]
        };
        let g1 = apply(cfg.h1());
        let g2 = apply(cfg.h2());
        Projected {
            sqrt_k,
            g1,
            g2,
            n1: g1[0] * g1[0] + g1[1] * g1[1],
            n2: g2[0] * g2[0] + g2[1] * g2[1],
        }
    }

    /// Squared projections of `g1`, `g2` on the eigenvectors of `Q(θ)`.
    fn projections(&self, theta: f64) -> [f64; 4] {
        let (s, c) = theta.sin_cos();
        let x1 = self.g1[0] * c + self.g1[1] * s;
        let y1 = -self.g1[0] * s + self.g1[1] * c;
        let x2 = self.g2[0] * c + self.g2[1] * s;
        let y2 = -self.g2[0] * s + self.g2[1] * c;
        [x1 * x1, y1 * y1, x2 * x2, y2 * y2]
    }

    /// Monotone surrogate of the sum rate: `rate = ½ log2(objective · (1 + n))`
    /// where `n` is the full-constraint gain of the user encoded first.
    fn objective(&self, order: EncodingOrder, proj: &[f64; 4], q1: f64, q2: f64) -> f64 {
        let u1 = q1 * proj[0] + q2 * proj[1];
        let u2 = q1 * proj[2] + q2 * proj[3];
        match order {
            EncodingOrder::User2First => (1.0 + u1) / (1.0 + u2),
            EncodingOrder::User1First => {
                let w1 = (self.n1 - u1).max(0.0);
                let w2 = (self.n2 - u2).max(0.0);
                (1.0 + w2) / (1.0 + w1)
            }
        }
    }

    fn objective_at(&self, order: EncodingOrder, p: Params) -> f64 {
        self.objective(order, &self.projections(p.theta), p.q1, p.q2)
    }

    fn rate_from_objective(&self, order: EncodingOrder, objective: f64) -> f64 {
        let n = match order {
            EncodingOrder::User2First => self.n2,
            EncodingOrder::User1First => self.n1,
        };
        half_log2(objective * (1.0 + n))
    }

    fn allocation(&self, order: EncodingOrder, p: Params) -> DpcAllocation {
        let q = q_matrix(p);
        let b1 = sandwich(&self.sqrt_k, &q);
        let identity_minus_q = Psd2::new_unchecked(1.0 - q.m11, -q.m12, 1.0 - q.m22);
        let b2 = sandwich(&self.sqrt_k, &identity_minus_q);
        DpcAllocation { b1, b2, order }
    }
}

fn q_matrix(p: Params) -> Psd2 {
    let (s, c) = p.theta.sin_cos();
    Psd2::new_unchecked(
        p.q1 * c * c + p.q2 * s * s,
        (p.q1 - p.q2) * s * c,
        p.q1 * s * s + p.q2 * c * c,
    )
}

/// `S M S` for symmetric `S`, `M`.
fn sandwich(s: &Psd2, m: &Psd2) -> Psd2 {
    let sm = s.matmul(m);
    let m11 = sm[0][0] * s.m11 + sm[0][1] * s.m12;
    let m12 = sm[0][0] * s.m12 + sm[0][1] * s.m22;
    let m22 = sm[1][0] * s.m12 + sm[1][1] * s.m22;
    Psd2::new_unchecked(m11, m12, m22)
}

fn refine(
    proj: &Projected,
    order: EncodingOrder,
    start: Params,
    start_value: f64,
    opts: &OptimizerOptions,
) -> (Params, f64) {
    let base_theta = PI / opts.theta_grid.max(1) as f64;
    let base_q = 1.0 / (opts.q_grid.max(2) - 1) as f64;
    let mut scale = 1.0;
    let mut best = start;
    let mut best_value = start_value;

    for _ in 0..opts.refine_max_iter {
        if base_theta.max(base_q) * scale < opts.refine_min_step {
            break;
        }
        let mut moved = false;
        for coord in 0..3 {
            let step = if coord == 0 { base_theta } else { base_q } * scale;
            for dir in [1.0, -1.0] {
                let mut cand = best;
                match coord {
                    0 => cand.theta += dir * step,
                    1 => cand.q1 = (cand.q1 + dir * step).clamp(0.0, 1.0),
                    _ => cand.q2 = (cand.q2 + dir * step).clamp(0.0, 1.0),
                }
                let v = proj.objective_at(order, cand);
                if v > best_value {
                    best = cand;
                    best_value = v;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            scale *= opts.refine_shrink;
        }
    }
    best.theta = best.theta.rem_euclid(PI);
    (best, best_value)
}

/// The `keep` best grid points for one encoding order, best first.
fn grid_seeds(proj: &Projected, order: EncodingOrder, opts: &OptimizerOptions, keep: usize) -> Vec<(Params, f64)> {
    let n_theta = opts.theta_grid.max(1);
    let n_q = opts.q_grid.max(2);
    let mut seeds: Vec<(Params, f64)> = Vec::with_capacity(keep + 1);
    for i in 0..n_theta {
        let theta = PI * i as f64 / n_theta as f64;
        let pr = proj.projections(theta);
        for j in 0..n_q {
            let q1 = j as f64 / (n_q - 1) as f64;
            for k in 0..n_q {
                let q2 = k as f64 / (n_q - 1) as f64;
                let v = proj.objective(order, &pr, q1, q2);
                if seeds.len() < keep || v > seeds[seeds.len() - 1].1 {
                    let at = seeds.partition_point(|(_, s)| *s >= v);
                    seeds.insert(at, (Params { theta, q1, q2 }, v));
                    seeds.truncate(keep);
                }
            }
        }
    }
    seeds
}

/// Sum capacity `max R1 + R2` over the broadcast capacity region with
/// `E[XXᵀ] ⪯ K(ρ)`.
pub fn sum_capacity(rho: Rho, cfg: &ChannelConfig, opts: &OptimizerOptions) -> SumCapacityResult {
    let proj = Projected::new(rho, cfg);
    let keep = opts.refine_starts.max(1);

    let mut grid_best = f64::NEG_INFINITY;
    let mut best: Option<(EncodingOrder, Params, f64)> = None;
    for order in EncodingOrder::BOTH {
        let seeds = grid_seeds(&proj, order, opts, keep);
        grid_best = grid_best.max(proj.rate_from_objective(order, seeds[0].1));
        for (p, v) in seeds {
            let (rp, rv) = refine(&proj, order, p, v, opts);
            let bits = proj.rate_from_objective(order, rv);
            if best.is_none_or(|(_, _, b)| bits > b) {
                best = Some((order, rp, bits));
            }
        }
    }

    let (order, params, bits) = best.expect("search grid is never empty");
    SumCapacityResult {
        bits: bits.max(0.0),
        best_allocation: proj.allocation(order, params),
        optimizer_gap_estimate: (bits - grid_best).max(0.0),
    }
}

/// Capacity of the 2x2 channel with cooperating receivers and input
/// covariance `K(ρ)`: `½ log det(I + H K Hᵀ)`. Upper-bounds [`sum_capacity`].
pub fn coop_capacity(rho: Rho, cfg: &ChannelConfig) -> f64 {
    let k = build_constraint(rho, cfg);
    let [h11, h12] = cfg.h1();
    let [h21, h22] = cfg.h2();
    let d1 = quadratic_form(h11, h12, &k);
    let d2 = quadratic_form(h21, h22, &k);
    // det(I + M) = 1 + tr M + det M, and det(HKHᵀ) = det(H)² det(K)
    let det_h = h11 * h22 - h12 * h21;
    let det_hkh = (det_h * det_h * k.det()).max(0.0);
    half_log2(1.0 + d1 + d2 + det_hkh)
}
