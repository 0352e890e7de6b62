//! Sampling windows and the stripe decomposition `S = S⁻ ∪ Λ ∪ S⁺`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[lo_1, hi_1) × … × [lo_d, hi_d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::Parameter(format!(
                "window bounds have dimensions {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        if lo.iter().chain(&hi).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("window bounds must be finite".into()));
        }
        Ok(Self { lo, hi })
    }

    /// The cube `[-half, half)^d`.
    pub fn centered_cube(dim: usize, half: f64) -> Result<Self> {
        Self::new(vec![-half; dim], vec![half; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l).max(0.0)).product()
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| !(h > l))
    }

    /// Closed-box membership, tolerant of points sitting on the upper faces.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| v >= l && v <= h)
    }

    pub fn scaled(&self, factor: f64) -> Window {
        Window {
            lo: self.lo.iter().map(|v| v * factor).collect(),
            hi: self.hi.iter().map(|v| v * factor).collect(),
        }
    }

    /// Sup-norm distance from `x` to the window boundary (0 outside).
    pub fn distance_to_boundary(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(v, (l, h))| (v - l).min(h - v))
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
    }
}

/// Where a point sits relative to a stripe of side `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `S⁻`: inside the stripe with `x₁ ≤ -ℓ/2`.
    Left,
    /// `Λ`: the open box `(-ℓ/2, ℓ/2)^d`.
    Box,
    /// `S⁺`: inside the stripe with `x₁ ≥ ℓ/2`.
    Right,
    /// Outside the stripe (`|x_k| ≥ ℓ/2` for some `k ≥ 2`).
    Outside,
}

impl Region {
    pub fn in_stripe(self) -> bool {
        !matches!(self, Region::Outside)
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, Region::Left | Region::Right)
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Left => "S-",
            Region::Box => "Lambda",
            Region::Right => "S+",
            Region::Outside => "outside",
        }
    }
}

/// The stripe `S_ℓ = ℝ × (-ℓ/2, ℓ/2)^{d-1}` split into `S⁻`, `Λ_ℓ`, `S⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripeGeometry {
    pub dim: usize,
    pub ell: f64,
}

impl StripeGeometry {
    pub fn new(dim: usize, ell: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        crate::error::ensure_positive("ell", ell)?;
        Ok(Self { dim, ell })
    }

    pub fn classify(&self, x: &[f64]) -> Region {
        debug_assert_eq!(x.len(), self.dim);
        let half = 0.5 * self.ell;
        if x[1..].iter().any(|v| v.abs() >= half) {
            return Region::Outside;
        }
        if x[0] <= -half {
            Region::Left
        } else if x[0] >= half {
            Region::Right
        } else {
            Region::Box
        }
    }

    /// Window covering the stripe truncated to `|x₁| ≤ ℓ/2 + pad`.
    pub fn padded_window(&self, pad: f64) -> Window {
        let half = 0.5 * self.ell;
        let mut lo = vec![-half; self.dim];
        let mut hi = vec![half; self.dim];
        lo[0] = -half - pad;
        hi[0] = half + pad;
        Window { lo, hi }
    }

    /// The stripe seen after the homothety `x ↦ x/ζ`.
    pub fn scaled(&self, factor: f64) -> StripeGeometry {
        StripeGeometry { dim: self.dim, ell: self.ell * factor }
    }
}
