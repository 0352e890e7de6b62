//! Energy-mark distributions.
//!
//! Two closed-form families cover the power laws `ν⁺_{C0,α}` (density
//! `(α+1) C0^{-α-1} E^α` on `[0, C0]`) and `ν_{C0,α}` (density
//! `(α+1) (2 C0^{α+1})^{-1} |E|^α` on `[-C0, C0]`). Anything else is a
//! piecewise-linear density on a user grid.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Sign structure of a power law near the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    Positive,
    Signed,
}

/// Declares that a law agrees with a power law on `[-ε, ε]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerClass {
    pub sign: SignMode,
    pub c0: f64,
    pub alpha: f64,
    pub epsilon: f64,
}

impl PowerClass {
    /// `min{C0, ε}`: below this radius the law is an exact power law.
    pub fn exact_radius(&self) -> f64 {
        self.c0.min(self.epsilon)
    }

    /// `C_* = lim ν([-γ,γ]) / γ^{α+1} = C0^{-α-1}`.
    pub fn c_star(&self) -> f64 {
        self.c0.powf(-self.alpha - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnergyLaw {
    PositivePower { c0: f64, alpha: f64 },
    SignedPower { c0: f64, alpha: f64 },
    GeneralTable(TableLaw),
}

impl EnergyLaw {
    pub fn positive_power(c0: f64, alpha: f64) -> Result<Self> {
        check_power(c0, alpha)?;
        Ok(Self::PositivePower { c0, alpha })
    }

    pub fn signed_power(c0: f64, alpha: f64) -> Result<Self> {
        check_power(c0, alpha)?;
        Ok(Self::SignedPower { c0, alpha })
    }

    pub fn power(sign: SignMode, c0: f64, alpha: f64) -> Result<Self> {
        match sign {
            SignMode::Positive => Self::positive_power(c0, alpha),
            SignMode::Signed => Self::signed_power(c0, alpha),
        }
    }

    /// Uniform law on `[-1, 1]` (`ν_{1,0}`).
    pub fn uniform_signed() -> Self {
        Self::SignedPower { c0: 1.0, alpha: 0.0 }
    }

    pub fn table(grid: Vec<f64>, density: Vec<f64>, class: Option<PowerClass>) -> Result<Self> {
        TableLaw::new(grid, density, class).map(Self::GeneralTable)
    }

    /// Checks parameters of a law obtained by deserialization.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PositivePower { c0, alpha } | Self::SignedPower { c0, alpha } => check_power(*c0, *alpha),
            Self::GeneralTable(_) => Ok(()),
        }
    }

    pub fn power_class(&self) -> Option<PowerClass> {
        match *self {
            Self::PositivePower { c0, alpha } => {
                Some(PowerClass { sign: SignMode::Positive, c0, alpha, epsilon: c0 })
            }
            Self::SignedPower { c0, alpha } => Some(PowerClass { sign: SignMode::Signed, c0, alpha, epsilon: c0 }),
            Self::GeneralTable(ref t) => t.class,
        }
    }

    /// Smallest `r` with `supp ν ⊆ [-r, r]`.
    pub fn support_radius(&self) -> f64 {
        match self {
            Self::PositivePower { c0, .. } | Self::SignedPower { c0, .. } => *c0,
            Self::GeneralTable(t) => t.grid[0].abs().max(t.grid[t.grid.len() - 1].abs()),
        }
    }

    pub fn density(&self, e: f64) -> f64 {
        match *self {
            Self::PositivePower { c0, alpha } => {
                if (0.0..=c0).contains(&e) {
                    (alpha + 1.0) * c0.powf(-alpha - 1.0) * e.powf(alpha)
                } else {
                    0.0
                }
            }
            Self::SignedPower { c0, alpha } => {
                if e.abs() <= c0 {
                    0.5 * (alpha + 1.0) * c0.powf(-alpha - 1.0) * e.abs().powf(alpha)
                } else {
                    0.0
                }
            }
            Self::GeneralTable(ref t) => t.density_at(e),
        }
    }

    /// `ν((-∞, e])`.
    pub fn cdf(&self, e: f64) -> f64 {
        match *self {
            Self::PositivePower { c0, alpha } => {
                if e <= 0.0 {
                    0.0
                } else {
                    (e.min(c0) / c0).powf(alpha + 1.0)
                }
            }
            Self::SignedPower { c0, alpha } => {
                let m = (e.abs().min(c0) / c0).powf(alpha + 1.0);
                if e >= 0.0 {
                    0.5 + 0.5 * m
                } else {
                    0.5 - 0.5 * m
                }
            }
            Self::GeneralTable(ref t) => t.cdf(e),
        }
    }

    /// `ν([-γ, γ])`.
    pub fn mass(&self, gamma: f64) -> f64 {
        match *self {
            Self::PositivePower { c0, alpha } | Self::SignedPower { c0, alpha } => {
                (gamma.min(c0) / c0).powf(alpha + 1.0)
            }
            Self::GeneralTable(ref t) => (t.cdf(gamma) - t.cdf(-gamma)).clamp(0.0, 1.0),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::PositivePower { c0, alpha } => {
                let u: f64 = rng.random();
                c0 * u.powf(1.0 / (alpha + 1.0))
            }
            Self::SignedPower { c0, alpha } => {
                let u: f64 = rng.random();
                let magnitude = c0 * u.powf(1.0 / (alpha + 1.0));
                if rng.random::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            }
            Self::GeneralTable(ref t) => t.inverse_cdf(rng.random()),
        }
    }

    /// `ν_γ`: the law conditioned on `[-γ, γ]`.
    pub fn conditioned(&self, gamma: f64) -> Result<EnergyLaw> {
        ensure_positive("gamma", gamma)?;
        match *self {
            Self::PositivePower { c0, alpha } => Ok(Self::PositivePower { c0: gamma.min(c0), alpha }),
            Self::SignedPower { c0, alpha } => Ok(Self::SignedPower { c0: gamma.min(c0), alpha }),
            Self::GeneralTable(ref t) => t.restricted(gamma).map(Self::GeneralTable),
        }
    }

    /// `ν_{⋆,γ}`: the law of `X/γ` given `|X| ≤ γ`, supported in `[-1, 1]`.
    pub fn star(&self, gamma: f64) -> Result<EnergyLaw> {
        ensure_positive("gamma", gamma)?;
        match *self {
            Self::PositivePower { c0, alpha } => Ok(Self::PositivePower { c0: gamma.min(c0) / gamma, alpha }),
            Self::SignedPower { c0, alpha } => Ok(Self::SignedPower { c0: gamma.min(c0) / gamma, alpha }),
            Self::GeneralTable(ref t) => {
                let r = t.restricted(gamma)?;
                let grid = r.grid.iter().map(|g| g / gamma).collect();
                let density = r.density.iter().map(|f| f * gamma).collect();
                TableLaw::new(grid, density, None).map(Self::GeneralTable)
            }
        }
    }
}

fn check_power(c0: f64, alpha: f64) -> Result<()> {
    ensure_positive("C0", c0)?;
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Parameter(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    Ok(())
}

/// Piecewise-linear density on `grid`, zero outside `[grid[0], grid[m]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct TableLaw {
    grid: Vec<f64>,
    density: Vec<f64>,
    cumulative: Vec<f64>,
    class: Option<PowerClass>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    grid: Vec<f64>,
    density: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<PowerClass>,
}

impl TryFrom<TableRepr> for TableLaw {
    type Error = Error;
    fn try_from(s: TableRepr) -> Result<Self> {
        TableLaw::new(s.grid, s.density, s.class)
    }
}

impl From<TableLaw> for TableRepr {
    fn from(t: TableLaw) -> Self {
        TableRepr { grid: t.grid, density: t.density, class: t.class }
    }
}

impl TableLaw {
    /// Builds the law, normalizing `density` to unit mass.
    pub fn new(grid: Vec<f64>, density: Vec<f64>, class: Option<PowerClass>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != density.len() {
            return Err(Error::Parameter("table needs >= 2 grid nodes and one density per node".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::Parameter("table grid must be finite and strictly increasing".into()));
        }
        if density.iter().any(|f| !(f.is_finite() && *f >= 0.0)) {
            return Err(Error::Parameter("table densities must be finite and nonnegative".into()));
        }
        let mut cumulative = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 1..grid.len() {
            acc += 0.5 * (density[k - 1] + density[k]) * (grid[k] - grid[k - 1]);
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::Parameter("table density has zero mass".into()));
        }
        let density = density.into_iter().map(|f| f / acc).collect();
        let cumulative = cumulative.into_iter().map(|c| c / acc).collect();
        Ok(Self { grid, density, cumulative, class })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn densities(&self) -> &[f64] {
        &self.density
    }

    fn segment(&self, e: f64) -> Option<usize> {
        let m = self.grid.len();
        if e < self.grid[0] || e > self.grid[m - 1] {
            return None;
        }
        let k = self.grid.partition_point(|g| *g <= e);
        Some(k.saturating_sub(1).min(m - 2))
    }

    fn density_at(&self, e: f64) -> f64 {
        match self.segment(e) {
            None => 0.0,
            Some(k) => {
                let t = (e - self.grid[k]) / (self.grid[k + 1] - self.grid[k]);
                self.density[k] + t * (self.density[k + 1] - self.density[k])
            }
        }
    }

    fn cdf(&self, e: f64) -> f64 {
        if e < self.grid[0] {
            return 0.0;
        }
        match self.segment(e) {
            None => 1.0,
            Some(k) => {
                let s = e - self.grid[k];
                let slope = (self.density[k + 1] - self.density[k]) / (self.grid[k + 1] - self.grid[k]);
                self.cumulative[k] + self.density[k] * s + 0.5 * slope * s * s
            }
        }
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        let m = self.grid.len();
        let k = self.cumulative.partition_point(|c| *c <= u).saturating_sub(1).min(m - 2);
        let rest = u - self.cumulative[k];
        let h = self.grid[k + 1] - self.grid[k];
        let f0 = self.density[k];
        let a = (self.density[k + 1] - f0) / h;
        let disc = (f0 * f0 + 2.0 * a * rest).max(0.0);
        let denom = f0 + disc.sqrt();
        let s = if denom > 0.0 { 2.0 * rest / denom } else { 0.0 };
        (self.grid[k] + s.clamp(0.0, h)).min(self.grid[k + 1])
    }

    fn restricted(&self, gamma: f64) -> Result<TableLaw> {
        let lo = (-gamma).max(self.grid[0]);
        let hi = gamma.min(self.grid[self.grid.len() - 1]);
        if !(hi > lo) {
            return Err(Error::Domain(format!("law has no mass in [-{gamma}, {gamma}]")));
        }
        let mut grid = vec![lo];
        grid.extend(self.grid.iter().copied().filter(|g| *g > lo && *g < hi));
        grid.push(hi);
        let density: Vec<f64> = grid.iter().map(|g| self.density_at(*g)).collect();
        TableLaw::new(grid, density, None)
            .map_err(|_| Error::Domain(format!("law has no mass in [-{gamma}, {gamma}]")))
    }
}
