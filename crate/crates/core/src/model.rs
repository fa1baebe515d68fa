//! Channel configuration, the correlation-coefficient domain and the small
//! amount of 2x2 symmetric-matrix algebra the bounds need.
//!
//! The relays transmit `X1`, `X2`; the destinations observe
//!
//! ```text
//! Y1 = X1 + a X2 + U1
//! Y2 = b X1 + X2 + U2
//! ```
//!
//! with unit-variance Gaussian noise, so the receive vectors are
//! `h1 = [1, a]` and `h2 = [b, 1]`.

use std::fmt;

use crate::error::{Error, Result};

/// Relative PSD slack: `1e-12 * max(1, m11, m22)`.
pub const PSD_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Cross gain relay 1 -> destination 2 (enters `Y1` through `X2`).
    pub a: f64,
    /// Cross gain relay 2 -> destination 1 (enters `Y2` through `X1`).
    pub b: f64,
    pub p1: f64,
    pub p2: f64,
    /// Backhaul capacities in bits per channel use.
    pub c1: f64,
    pub c2: f64,
}

impl ChannelConfig {
    pub fn new(a: f64, b: f64, p1: f64, p2: f64, c1: f64, c2: f64) -> Result<Self> {
        let cfg = ChannelConfig { a, b, p1, p2, c1, c2 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("a", self.a, false),
            ("b", self.b, false),
            ("p1", self.p1, true),
            ("p2", self.p2, true),
            ("c1", self.c1, true),
            ("c2", self.c2, true),
        ];
        for (field, value, nonneg) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidConfig {
                    field,
                    value,
                    reason: "must be finite",
                });
            }
            if nonneg && value < 0.0 {
                return Err(Error::InvalidConfig {
                    field,
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        Ok(())
    }

    /// Same channel with different backhaul capacities.
    pub fn with_backhaul(&self, c1: f64, c2: f64) -> Self {
        ChannelConfig { c1, c2, ..*self }
    }

    /// Relabels relays and users: `(a, b, P1, P2, C1, C2) -> (b, a, P2, P1, C2, C1)`.
    pub fn swapped(&self) -> Self {
        ChannelConfig {
            a: self.b,
            b: self.a,
            p1: self.p2,
            p2: self.p1,
            c1: self.c2,
            c2: self.c1,
        }
    }

    pub fn h1(&self) -> [f64; 2] {
        [1.0, self.a]
    }

    pub fn h2(&self) -> [f64; 2] {
        [self.b, 1.0]
    }

    /// Whether two configurations describe the same second hop (gains and
    /// powers), irrespective of backhaul.
    pub fn same_channel(&self, other: &ChannelConfig) -> bool {
        self.a == other.a && self.b == other.b && self.p1 == other.p1 && self.p2 == other.p2
    }
}

/// Correlation coefficient between the two relay signals.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rho(f64);

impl Rho {
    pub const ZERO: Rho = Rho(0.0);
    pub const ONE: Rho = Rho(1.0);
    pub const MINUS_ONE: Rho = Rho(-1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (-1.0..=1.0).contains(&value) {
            Ok(Rho(value))
        } else {
            Err(Error::RhoOutOfRange(value))
        }
    }

    /// Clamps a finite value into `[-1, 1]`; used for grid points that drift
    /// past the boundary by rounding.
    pub(crate) fn clamped(value: f64) -> Self {
        Rho(value.clamp(-1.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Closed sub-interval of `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const FULL: Interval = Interval { lo: -1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let ok = lo.is_finite() && hi.is_finite() && lo <= hi && lo >= -1.0 && hi <= 1.0;
        if ok {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub fn point(c: Rho) -> Self {
        Interval {
            lo: c.value(),
            hi: c.value(),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, rho: Rho) -> bool {
        (self.lo..=self.hi).contains(&rho.value())
    }

    /// `n` uniformly spaced points including both endpoints exactly.
    pub fn grid(&self, n: usize) -> Vec<Rho> {
        if self.is_degenerate() || n < 2 {
            return vec![Rho::clamped(self.lo)];
        }
        let h = self.width() / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    Rho::clamped(self.hi)
                } else {
                    Rho::clamped(self.lo + i as f64 * h)
                }
            })
            .collect()
    }
}

/// Real symmetric 2x2 matrix `[[m11, m12], [m12, m22]]`, positive semidefinite
/// up to a relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Psd2 {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl Psd2 {
    pub const ZERO: Psd2 = Psd2 {
        m11: 0.0,
        m12: 0.0,
        m22: 0.0,
    };

    pub fn new(m11: f64, m12: f64, m22: f64) -> Result<Self> {
        let m = Psd2 { m11, m12, m22 };
        if m.is_psd() {
            Ok(m)
        } else {
            Err(Error::NotPsd { m11, m12, m22 })
        }
    }

    pub fn diag(m11: f64, m22: f64) -> Result<Self> {
        Psd2::new(m11, 0.0, m22)
    }

    pub(crate) fn new_unchecked(m11: f64, m12: f64, m22: f64) -> Self {
        Psd2 { m11, m12, m22 }
    }

    pub fn tolerance(&self) -> f64 {
        PSD_REL_TOL * 1f64.max(self.m11).max(self.m22)
    }

    pub fn is_psd(&self) -> bool {
        let tol = self.tolerance();
        [self.m11, self.m12, self.m22].iter().all(|v| v.is_finite())
            && self.m11 >= -tol
            && self.m22 >= -tol
            && self.det() >= -tol
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn add(&self, other: &Psd2) -> Psd2 {
        Psd2::new_unchecked(self.m11 + other.m11, self.m12 + other.m12, self.m22 + other.m22)
    }

    /// Entrywise difference; the result need not be PSD.
    pub fn sub(&self, other: &Psd2) -> Psd2 {
        Psd2::new_unchecked(self.m11 - other.m11, self.m12 - other.m12, self.m22 - other.m22)
    }

    /// `self * other` as a plain 2x2 array (not symmetric in general).
    pub fn matmul(&self, other: &Psd2) -> [[f64; 2]; 2] {
        [
            [
                self.m11 * other.m11 + self.m12 * other.m12,
                self.m11 * other.m12 + self.m12 * other.m22,
            ],
            [
                self.m12 * other.m11 + self.m22 * other.m12,
                self.m12 * other.m12 + self.m22 * other.m22,
            ],
        ]
    }

    /// `A ⪯ B` within the PSD tolerance of `B - A`.
    pub fn loewner_le(&self, other: &Psd2) -> bool {
        let d = other.sub(self);
        let tol = PSD_REL_TOL * 1f64.max(other.m11).max(other.m22).max(self.m11).max(self.m22);
        d.m11 >= -tol && d.m22 >= -tol && d.det() >= -tol
    }

    /// Eigenvalues (descending) and the rotation angle of the leading
    /// eigenvector.
    pub fn eigen(&self) -> (f64, f64, f64) {
        let mean = 0.5 * (self.m11 + self.m22);
        let half_diff = 0.5 * (self.m11 - self.m22);
        let radius = half_diff.hypot(self.m12);
        let angle = 0.5 * self.m12.atan2(half_diff);
        (mean + radius, mean - radius, angle)
    }

    pub fn frobenius(m: &[[f64; 2]; 2]) -> f64 {
        m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Covariance constraint `[[P1, ρ√(P1P2)], [ρ√(P1P2), P2]]`.
pub fn build_constraint(rho: Rho, cfg: &ChannelConfig) -> Psd2 {
    let off = rho.value() * (cfg.p1 * cfg.p2).sqrt();
    Psd2::new_unchecked(cfg.p1, off, cfg.p2)
}

/// Symmetric PSD square root by closed-form 2x2 eigendecomposition.
pub fn psd_sqrt(m: &Psd2) -> Result<Psd2> {
    if !m.is_psd() {
        return Err(Error::NotPsd {
            m11: m.m11,
            m12: m.m12,
            m22: m.m22,
        });
    }
    let (l1, l2, phi) = m.eigen();
    let s1 = l1.max(0.0).sqrt();
    let s2 = l2.max(0.0).sqrt();
    let (sin, cos) = phi.sin_cos();
    // V diag(s1, s2) V^T with V = [[cos, -sin], [sin, cos]]
    Ok(Psd2::new_unchecked(
        s1 * cos * cos + s2 * sin * sin,
        (s1 - s2) * sin * cos,
        s1 * sin * sin + s2 * cos * cos,
    ))
}

/// `hᵀ m h` for `h = [h1, h2]`.
pub fn quadratic_form(h1: f64, h2: f64, m: &Psd2) -> f64 {
    h1 * h1 * m.m11 + 2.0 * h1 * h2 * m.m12 + h2 * h2 * m.m22
}
