//! Marked point configurations: sampling and point-level transformations.

use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::geometry::Window;
use crate::law::EnergyLaw;
use crate::rng::RngSeed;

/// A finite marked configuration `{(x, E_x)}` inside a window.
///
/// Coordinates are stored row-major (`coords[i*d..(i+1)*d]`), marks alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationJson", into = "ConfigurationJson")]
pub struct MarkedConfiguration {
    dim: usize,
    window: Window,
    coords: Vec<f64>,
    marks: Vec<f64>,
}

/// Borrowed view of one marked point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkedPoint<'a> {
    pub position: &'a [f64],
    pub energy: f64,
}

impl MarkedConfiguration {
    pub fn empty(window: Window) -> Self {
        Self { dim: window.dim(), window, coords: Vec::new(), marks: Vec::new() }
    }

    /// Validated constructor: every point inside `window`, finite, no repeats.
    pub fn new(window: Window, points: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let dim = window.dim();
        let mut coords = Vec::with_capacity(points.len() * dim);
        let mut marks = Vec::with_capacity(points.len());
        let mut seen = HashSet::with_capacity(points.len());
        for (x, e) in points {
            if x.len() != dim {
                return Err(Error::Parameter(format!("point of dimension {} in {dim}-dimensional window", x.len())));
            }
            if !e.is_finite() || x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parameter("point coordinates and marks must be finite".into()));
            }
            if !window.contains(&x) {
                return Err(Error::Parameter(format!("point {x:?} lies outside the window")));
            }
            let key: Vec<u64> = x.iter().map(|v| (v + 0.0).to_bits()).collect();
            if !seen.insert(key) {
                return Err(Error::Parameter(format!("two points share position {x:?}")));
            }
            coords.extend_from_slice(&x);
            marks.push(e);
        }
        Ok(Self { dim, window, coords, marks })
    }

    pub(crate) fn from_raw(window: Window, coords: Vec<f64>, marks: Vec<f64>) -> Self {
        let dim = window.dim();
        debug_assert_eq!(coords.len(), marks.len() * dim);
        Self { dim, window, coords, marks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn mark(&self, i: usize) -> f64 {
        self.marks[i]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn marks(&self) -> &[f64] {
        &self.marks
    }

    pub fn iter(&self) -> impl Iterator<Item = MarkedPoint<'_>> + '_ {
        self.coords
            .chunks_exact(self.dim)
            .zip(&self.marks)
            .map(|(position, &energy)| MarkedPoint { position, energy })
    }

    /// Indices of the points with `|E| ≤ γ`, in order.
    pub fn truncated_indices(&self, gamma: f64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.marks[i].abs() <= gamma).collect()
    }

    /// `ω_γ`: keeps exactly the points with `|E_x| ≤ γ`.
    pub fn truncate(&self, gamma: f64) -> MarkedConfiguration {
        self.select(&self.truncated_indices(gamma))
    }

    /// Sub-configuration on the given indices (same window, same order).
    pub fn select(&self, indices: &[usize]) -> MarkedConfiguration {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        let mut marks = Vec::with_capacity(indices.len());
        for &i in indices {
            coords.extend_from_slice(self.position(i));
            marks.push(self.marks[i]);
        }
        Self::from_raw(self.window.clone(), coords, marks)
    }

    /// `ω_{ζ,β} = {(x/ζ, βE_x/ζ) : |E_x| ≤ ζ/β}`, window rescaled by `1/ζ`.
    pub fn mott_rescale(&self, zeta: f64, beta: f64) -> Result<MarkedConfiguration> {
        ensure_positive("zeta", zeta)?;
        ensure_positive("beta", beta)?;
        let keep = self.truncated_indices(zeta / beta);
        let mut coords = Vec::with_capacity(keep.len() * self.dim);
        let mut marks = Vec::with_capacity(keep.len());
        for &i in &keep {
            coords.extend(self.position(i).iter().map(|v| v / zeta));
            marks.push(beta * self.marks[i] / zeta);
        }
        Ok(Self::from_raw(self.window.scaled(1.0 / zeta), coords, marks))
    }

    /// Adds a point at the origin with an independent mark drawn from `law`.
    ///
    /// For a Poisson configuration the result is a sample of the Palm law.
    pub fn palm_augment(&self, law: &EnergyLaw, seed: RngSeed) -> Result<MarkedConfiguration> {
        let origin = vec![0.0; self.dim];
        if !self.window.contains(&origin) {
            return Err(Error::Parameter("origin lies outside the window".into()));
        }
        let mut rng = seed.rng();
        let mut out = self.clone();
        out.coords.extend_from_slice(&origin);
        out.marks.push(law.sample(&mut rng));
        Ok(out)
    }
}

/// Samples `PPP[ρ, ν]` restricted to `window`.
///
/// The count is Poisson(`ρ·vol`), positions are i.i.d. uniform and marks i.i.d.
/// from `law`. `rho = 0` gives the empty configuration.
pub fn sample_marked_ppp(rho: f64, law: &EnergyLaw, window: &Window, seed: RngSeed) -> Result<MarkedConfiguration> {
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(Error::Parameter(format!("intensity must be nonnegative and finite, got {rho}")));
    }
    if window.is_degenerate() {
        return Err(Error::Parameter("window has zero volume".into()));
    }
    let mean = rho * window.volume();
    if mean == 0.0 {
        return Ok(MarkedConfiguration::empty(window.clone()));
    }
    let mut rng = seed.rng();
    let poisson = Poisson::new(mean).map_err(|e| Error::Parameter(format!("poisson mean {mean}: {e}")))?;
    let n = poisson.sample(&mut rng) as usize;
    Ok(fill_uniform(n, law, window, &mut rng))
}

pub(crate) fn fill_uniform<R: Rng>(n: usize, law: &EnergyLaw, window: &Window, rng: &mut R) -> MarkedConfiguration {
    let dim = window.dim();
    let mut coords = Vec::with_capacity(n * dim);
    let mut marks = Vec::with_capacity(n);
    for _ in 0..n {
        for k in 0..dim {
            let u: f64 = rng.random();
            coords.push(window.lo[k] + u * (window.hi[k] - window.lo[k]));
        }
        marks.push(law.sample(rng));
    }
    MarkedConfiguration::from_raw(window.clone(), coords, marks)
}

/// One point per lattice cell of side `spacing` fully inside `window`, each
/// displaced uniformly by at most `jitter·spacing` per coordinate.
pub fn sample_perturbed_lattice(
    spacing: f64,
    jitter: f64,
    law: &EnergyLaw,
    window: &Window,
    seed: RngSeed,
) -> Result<MarkedConfiguration> {
    ensure_positive("spacing", spacing)?;
    if !(0.0..=0.5).contains(&jitter) {
        return Err(Error::Parameter(format!("jitter must lie in [0, 1/2], got {jitter}")));
    }
    let dim = window.dim();
    let counts: Vec<usize> = (0..dim)
        .map(|k| ((window.hi[k] - window.lo[k]) / spacing + 1e-9).floor().max(0.0) as usize)
        .collect();
    let total: usize = counts.iter().product();
    let mut rng = seed.rng();
    let mut coords = Vec::with_capacity(total * dim);
    let mut marks = Vec::with_capacity(total);
    let mut cell = vec![0usize; dim];
    for _ in 0..total {
        for k in 0..dim {
            let centre = window.lo[k] + (cell[k] as f64 + 0.5) * spacing;
            let shift = if jitter > 0.0 { rng.random_range(-jitter..=jitter) * spacing } else { 0.0 };
            coords.push(centre + shift);
        }
        marks.push(law.sample(&mut rng));
        for k in 0..dim {
            cell[k] += 1;
            if cell[k] < counts[k] {
                break;
            }
            cell[k] = 0;
        }
    }
    Ok(MarkedConfiguration::from_raw(window.clone(), coords, marks))
}

/// `ℓ(β) = (λ/ρ)^{1/(α+1+d)} (C₀β)^{(α+1)/(α+1+d)}`: the length scale at which
/// `mott_rescale` of `PPP[ρ, ν_{C₀,α}]` has intensity `λ`.
pub fn mott_length(lambda: f64, rho: f64, c0: f64, alpha: f64, dim: usize, beta: f64) -> Result<f64> {
    ensure_positive("lambda", lambda)?;
    ensure_positive("rho", rho)?;
    ensure_positive("C0", c0)?;
    ensure_positive("beta", beta)?;
    if !(alpha >= 0.0 && alpha.is_finite()) || dim == 0 {
        return Err(Error::Parameter(format!("need alpha ≥ 0 and d ≥ 1, got alpha={alpha}, d={dim}")));
    }
    let k = alpha + 1.0 + dim as f64;
    Ok((lambda / rho).powf(1.0 / k) * (c0 * beta).powf((alpha + 1.0) / k))
}

#[derive(Serialize, Deserialize)]
struct ConfigurationJson {
    dimension: usize,
    window: Window,
    points: Vec<PointJson>,
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    x: Vec<f64>,
    e: f64,
}

impl From<MarkedConfiguration> for ConfigurationJson {
    fn from(c: MarkedConfiguration) -> Self {
        let points = c.iter().map(|p| PointJson { x: p.position.to_vec(), e: p.energy }).collect();
        ConfigurationJson { dimension: c.dim, window: c.window, points }
    }
}

impl TryFrom<ConfigurationJson> for MarkedConfiguration {
    type Error = Error;
    fn try_from(j: ConfigurationJson) -> Result<Self> {
        if j.dimension != j.window.dim() {
            return Err(Error::Parameter("dimension does not match window".into()));
        }
        MarkedConfiguration::new(j.window, j.points.into_iter().map(|p| (p.x, p.e)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Window {
        Window::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn zero_intensity_is_empty() {
        let c = sample_marked_ppp(0.0, &EnergyLaw::uniform_signed(), &unit_square(), RngSeed::new(1)).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn invalid_parameters_rejected() {
        let law = EnergyLaw::uniform_signed();
        assert!(sample_marked_ppp(-1.0, &law, &unit_square(), RngSeed::new(1)).is_err());
        let flat = Window::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert!(sample_marked_ppp(1.0, &law, &flat, RngSeed::new(1)).is_err());
    }

    #[test]
    fn truncate_filters_by_absolute_mark() {
        let w = Window::centered_cube(1, 5.0).unwrap();
        let c = MarkedConfiguration::new(w, vec![(vec![0.0], 0.2), (vec![1.0], -0.9), (vec![2.0], 0.5)]).unwrap();
        let t = c.truncate(0.5);
        assert_eq!(t.marks(), &[0.2, 0.5]);
        assert_eq!(t.coords(), &[0.0, 2.0]);
        assert_eq!(c.truncate(1.0), c);
    }

    #[test]
    fn mott_rescale_hand_example() {
        let w = Window::centered_cube(2, 4.0).unwrap();
        let c = MarkedConfiguration::new(w, vec![(vec![2.0, 0.0], 0.1)]).unwrap();
        let r = c.mott_rescale(2.0, 4.0).unwrap();
        assert_eq!(r.position(0), &[1.0, 0.0]);
        assert!((r.mark(0) - 0.2).abs() < 1e-15);
        assert_eq!(r.window().hi, vec![2.0, 2.0]);
    }

    #[test]
    fn mott_rescale_identity_at_unit_parameters() {
        let c = sample_marked_ppp(5.0, &EnergyLaw::uniform_signed(), &unit_square(), RngSeed::new(4)).unwrap();
        assert_eq!(c.mott_rescale(1.0, 1.0).unwrap(), c);
    }

    #[test]
    fn palm_augment_adds_origin() {
        let w = Window::centered_cube(2, 1.0).unwrap();
        let law = EnergyLaw::uniform_signed();
        let empty = MarkedConfiguration::empty(w.clone());
        let p = empty.palm_augment(&law, RngSeed::new(2)).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.position(0), &[0.0, 0.0]);
        let c = sample_marked_ppp(3.0, &law, &w, RngSeed::new(5)).unwrap();
        let p = c.palm_augment(&law, RngSeed::new(6)).unwrap();
        assert_eq!(p.len(), c.len() + 1);
        assert_eq!(p.position(c.len()), &[0.0, 0.0]);
        // the origin is a corner of the unit square, which still counts as inside
        assert!(MarkedConfiguration::empty(unit_square()).palm_augment(&law, RngSeed::new(1)).is_ok());
        let shifted = Window::new(vec![1.0, 1.0], vec![2.0, 2.0]).unwrap();
        assert!(MarkedConfiguration::empty(shifted).palm_augment(&law, RngSeed::new(1)).is_err());
    }

    #[test]
    fn mott_length_examples() {
        assert!((mott_length(1.0, 1.0, 1.0, 0.0, 2, 8.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((mott_length(8.0, 1.0, 1.0, 0.0, 2, 1.0).unwrap() - 2.0).abs() < 1e-12);
        for (alpha, d) in [(0.0, 1), (1.5, 2), (3.0, 3)] {
            assert!((mott_length(2.0, 2.0, 4.0, alpha, d, 0.25).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(mott_length(1.0, 0.0, 1.0, 0.0, 2, 1.0).is_err());
    }

    #[test]
    fn exact_lattice_without_jitter() {
        let w = Window::new(vec![0.0, 0.0], vec![3.0, 2.0]).unwrap();
        let c = sample_perturbed_lattice(1.0, 0.0, &EnergyLaw::uniform_signed(), &w, RngSeed::new(1)).unwrap();
        assert_eq!(c.len(), 6);
        let mut pts: Vec<(f64, f64)> = c.iter().map(|p| (p.position[0], p.position[1])).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pts, vec![(0.5, 0.5), (0.5, 1.5), (1.5, 0.5), (1.5, 1.5), (2.5, 0.5), (2.5, 1.5)]);
        let j = sample_perturbed_lattice(0.5, 0.5, &EnergyLaw::uniform_signed(), &w, RngSeed::new(1)).unwrap();
        assert_eq!(j.len(), 24);
        assert!(j.iter().all(|p| w.contains(p.position)));
    }

    #[test]
    fn constructor_rejects_duplicates_and_outside_points() {
        let w = unit_square();
        assert!(MarkedConfiguration::new(w.clone(), vec![(vec![0.5, 0.5], 0.0), (vec![0.5, 0.5], 1.0)]).is_err());
        assert!(MarkedConfiguration::new(w, vec![(vec![1.5, 0.5], 0.0)]).is_err());
    }

    #[test]
    fn json_layout_and_roundtrip() {
        let w = Window::new(vec![0.0], vec![2.0]).unwrap();
        let c = MarkedConfiguration::new(w, vec![(vec![0.5], -0.25)]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"dimension":1,"window":{"lo":[0.0],"hi":[2.0]},"points":[{"x":[0.5],"e":-0.25}]}"#);
        let back: MarkedConfiguration = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
