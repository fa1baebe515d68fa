//! Sum-capacity upper bounds.
//!
//! * `simple_cutset`: `min{f_C(0), max_ρ C_MIMO(ρ)}` (backhaul cut and
//!   broadcast cut only).
//! * `cutset_102`: `max_{ρ ∈ [-1,1]} min{f_A, f_B, f_C(0), C_MIMO}`, which adds
//!   the two cross cuts.
//! * `bound_101_x`: `max_{ρ ∈ A_x} min{f_A, f_B, f_C(0), C_MIMO, ½(f_C + C_MIMO)}`
//!   for `x = a` and `x = b`.
//! * `theorem1`: the minimum of the three.
//!
//! `C_MIMO(ρ)` dominates the cost and does not depend on the backhaul, so a
//! [`BoundEvaluator`] memoizes it per channel and can be reused across
//! backhaul sweeps.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use crate::closed_forms::{f_a, f_b, f_c, interval_a_x};
use crate::error::{Error, Result};
use crate::mimo_bc::sum_capacity;
pub use crate::mimo_bc::OptimizerOptions;
use crate::model::{ChannelConfig, Interval, Rho};

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Maximizes `g(ρ) = min_i f_i(ρ)` over `domain`.
///
/// A uniform grid of `opts.rho_grid` points locates the best cell; golden
/// section then refines inside the two neighbouring cells. Ties on the grid
/// go to the point closest to zero. A degenerate domain `[c, c]` returns
/// `g(c)`.
pub fn maximize_min(fns: &[&dyn Fn(Rho) -> f64], domain: Interval, opts: &OptimizerOptions) -> Result<(f64, Rho)> {
    if fns.is_empty() {
        return Err(Error::EmptyFunctionList);
    }
    let g = |rho: Rho| fns.iter().map(|f| f(rho)).fold(f64::INFINITY, f64::min);

    let grid = domain.grid(opts.rho_grid.max(3));
    let mut best_idx = 0;
    let mut best = g(grid[0]);
    for (i, &rho) in grid.iter().enumerate().skip(1) {
        let v = g(rho);
        let closer = rho.value().abs() < grid[best_idx].value().abs();
        if v > best || (v == best && closer) {
            best = v;
            best_idx = i;
        }
    }
    if grid.len() == 1 {
        return Ok((best, grid[0]));
    }

    let lo = grid[best_idx.saturating_sub(1)].value();
    let hi = grid[(best_idx + 1).min(grid.len() - 1)].value();
    let (x, v) = golden_max(&g, lo, hi, opts.golden_xtol);
    if v > best {
        Ok((v, Rho::clamped(x)))
    } else {
        Ok((best, grid[best_idx]))
    }
}

fn golden_max(g: &dyn Fn(Rho) -> f64, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut g1 = g(Rho::clamped(x1));
    let mut g2 = g(Rho::clamped(x2));
    let mut best = if g1 >= g2 { (x1, g1) } else { (x2, g2) };
    while hi - lo > xtol.max(f64::EPSILON) {
        if g1 >= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - GOLDEN * (hi - lo);
            g1 = g(Rho::clamped(x1));
            if g1 > best.1 {
                best = (x1, g1);
            }
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + GOLDEN * (hi - lo);
            g2 = g(Rho::clamped(x2));
            if g2 > best.1 {
                best = (x2, g2);
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XSelector {
    UseA,
    UseB,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub simple_cutset: f64,
    pub cutset_102: f64,
    pub bound_101_a: f64,
    pub bound_101_b: f64,
    pub theorem1: f64,
    pub argmax_rho_102: Rho,
    pub argmax_rho_101_a: Rho,
    pub argmax_rho_101_b: Rho,
}

impl BoundReport {
    /// `theorem1 ≤ cutset_102 ≤ simple_cutset`, each up to `slack` bits.
    pub fn ordering_holds(&self, slack: f64) -> bool {
        self.theorem1 <= self.cutset_102 + slack && self.cutset_102 <= self.simple_cutset + slack
    }
}

/// Memoized `ρ ↦ C_MIMO(ρ)` for one channel (gains and powers).
#[derive(Debug)]
pub struct SumCapacityCache {
    channel: ChannelConfig,
    opts: OptimizerOptions,
    values: Mutex<HashMap<u64, f64>>,
}

impl SumCapacityCache {
    pub fn new(cfg: &ChannelConfig, opts: &OptimizerOptions) -> Self {
        SumCapacityCache {
            channel: cfg.with_backhaul(0.0, 0.0),
            opts: opts.clone(),
            values: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, rho: Rho) -> f64 {
        // normalise -0.0 so both zeros share an entry
        let key = (rho.value() + 0.0).to_bits();
        if let Some(v) = self.values.lock().unwrap().get(&key) {
            return *v;
        }
        let v = sum_capacity(rho, &self.channel, &self.opts).bits;
        self.values.lock().unwrap().insert(key, v);
        v
    }

    /// Evaluates every missing point in parallel.
    pub fn prefill(&self, rhos: &[Rho]) {
        let missing: Vec<Rho> = {
            let map = self.values.lock().unwrap();
            rhos.iter()
                .copied()
                .filter(|r| !map.contains_key(&(r.value() + 0.0).to_bits()))
                .collect()
        };
        let computed: Vec<(u64, f64)> = missing
            .par_iter()
            .map(|&r| {
                (
                    (r.value() + 0.0).to_bits(),
                    sum_capacity(r, &self.channel, &self.opts).bits,
                )
            })
            .collect();
        self.values.lock().unwrap().extend(computed);
    }

    pub fn len(&self) -> usize {
        self.values.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Evaluates all bounds for one channel at any backhaul pair.
#[derive(Debug)]
pub struct BoundEvaluator {
    channel: ChannelConfig,
    opts: OptimizerOptions,
    cache: SumCapacityCache,
    domain_a: Interval,
    domain_b: Interval,
    max_sum_capacity: OnceLock<(f64, Rho)>,
}

impl BoundEvaluator {
    pub fn new(cfg: &ChannelConfig, opts: &OptimizerOptions) -> Result<Self> {
        cfg.validate()?;
        let channel = cfg.with_backhaul(0.0, 0.0);
        Ok(BoundEvaluator {
            channel,
            opts: opts.clone(),
            cache: SumCapacityCache::new(&channel, opts),
            domain_a: interval_a_x(cfg.a, cfg),
            domain_b: interval_a_x(cfg.b, cfg),
            max_sum_capacity: OnceLock::new(),
        })
    }

    pub fn options(&self) -> &OptimizerOptions {
        &self.opts
    }

    pub fn cache(&self) -> &SumCapacityCache {
        &self.cache
    }

    /// `A_a` or `A_b`.
    pub fn domain(&self, x: XSelector) -> Interval {
        match x {
            XSelector::UseA => self.domain_a,
            XSelector::UseB => self.domain_b,
        }
    }

    /// Fills the sum-capacity cache on every grid the searches will visit.
    pub fn prefill(&self) {
        let n = self.opts.rho_grid.max(3);
        let mut points = Interval::FULL.grid(n);
        points.extend(self.domain_a.grid(n));
        points.extend(self.domain_b.grid(n));
        self.cache.prefill(&points);
    }

    pub fn sum_capacity(&self, rho: Rho) -> f64 {
        self.cache.get(rho)
    }

    fn config(&self, c1: f64, c2: f64) -> Result<ChannelConfig> {
        let cfg = self.channel.with_backhaul(c1, c2);
        cfg.validate()?;
        Ok(cfg)
    }

    /// `max_ρ C_MIMO(ρ)` over `[-1, 1]` and its maximizer.
    pub fn max_sum_capacity(&self) -> (f64, Rho) {
        *self.max_sum_capacity.get_or_init(|| {
            let cm = |r: Rho| self.cache.get(r);
            maximize_min(&[&cm], Interval::FULL, &self.opts).expect("one function")
        })
    }

    pub fn simple_cutset(&self, c1: f64, c2: f64) -> Result<f64> {
        let cfg = self.config(c1, c2)?;
        Ok(f_c(Rho::ZERO, &cfg).min(self.max_sum_capacity().0))
    }

    pub fn cutset_bound_102(&self, c1: f64, c2: f64) -> Result<(f64, Rho)> {
        let cfg = self.config(c1, c2)?;
        let fa = |r: Rho| f_a(r, &cfg);
        let fb = |r: Rho| f_b(r, &cfg);
        let fc0 = f_c(Rho::ZERO, &cfg);
        let fc = |_: Rho| fc0;
        let cm = |r: Rho| self.cache.get(r);
        maximize_min(&[&fa, &fb, &fc, &cm], Interval::FULL, &self.opts)
    }

    pub fn bound_101(&self, x: XSelector, c1: f64, c2: f64) -> Result<(f64, Rho)> {
        let cfg = self.config(c1, c2)?;
        let fa = |r: Rho| f_a(r, &cfg);
        let fb = |r: Rho| f_b(r, &cfg);
        let fc0 = f_c(Rho::ZERO, &cfg);
        let fc = |_: Rho| fc0;
        let cm = |r: Rho| self.cache.get(r);
        let averaged = |r: Rho| 0.5 * (f_c(r, &cfg) + self.cache.get(r));
        maximize_min(&[&fa, &fb, &fc, &cm, &averaged], self.domain(x), &self.opts)
    }

    pub fn report(&self, c1: f64, c2: f64) -> Result<BoundReport> {
        let (cutset_102, argmax_rho_102) = self.cutset_bound_102(c1, c2)?;
        let (bound_101_a, argmax_rho_101_a) = self.bound_101(XSelector::UseA, c1, c2)?;
        let (bound_101_b, argmax_rho_101_b) = self.bound_101(XSelector::UseB, c1, c2)?;

        // Every evaluated C_MIMO value lower-bounds its maximum over ρ, so the
        // maximizers of the other searches may sharpen the estimate.
        let max_cm = [argmax_rho_102, argmax_rho_101_a, argmax_rho_101_b]
            .iter()
            .map(|&r| self.cache.get(r))
            .fold(self.max_sum_capacity().0, f64::max);
        let cfg = self.config(c1, c2)?;
        let simple_cutset = f_c(Rho::ZERO, &cfg).min(max_cm);

        Ok(BoundReport {
            simple_cutset,
            cutset_102,
            bound_101_a,
            bound_101_b,
            theorem1: cutset_102.min(bound_101_a).min(bound_101_b),
            argmax_rho_102,
            argmax_rho_101_a,
            argmax_rho_101_b,
        })
    }
}

pub fn simple_cutset(cfg: &ChannelConfig, opts: &OptimizerOptions) -> Result<f64> {
    let ev = BoundEvaluator::new(cfg, opts)?;
    ev.cache.prefill(&Interval::FULL.grid(opts.rho_grid.max(3)));
    ev.simple_cutset(cfg.c1, cfg.c2)
}

pub fn cutset_bound_102(cfg: &ChannelConfig, opts: &OptimizerOptions) -> Result<(f64, Rho)> {
    let ev = BoundEvaluator::new(cfg, opts)?;
    ev.cache.prefill(&Interval::FULL.grid(opts.rho_grid.max(3)));
    ev.cutset_bound_102(cfg.c1, cfg.c2)
}

pub fn bound_101(x: XSelector, cfg: &ChannelConfig, opts: &OptimizerOptions) -> Result<(f64, Rho)> {
    let ev = BoundEvaluator::new(cfg, opts)?;
    ev.cache.prefill(&ev.domain(x).grid(opts.rho_grid.max(3)));
    ev.bound_101(x, cfg.c1, cfg.c2)
}

pub fn theorem1_bound(cfg: &ChannelConfig, opts: &OptimizerOptions) -> Result<BoundReport> {
    let ev = BoundEvaluator::new(cfg, opts)?;
    ev.prefill();
    ev.report(cfg.c1, cfg.c2)
}
