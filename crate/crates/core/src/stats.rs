//! Small statistical toolkit: goodness-of-fit tests, proportions, regression.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// Sample mean and standard error of the mean (0 for fewer than 2 values).
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Binomial standard error `sqrt(p(1−p)/n)` of a frequency.
pub fn binomial_stderr(hits: usize, n: usize) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    let p = hits as f64 / n as f64;
    (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    /// Degrees of freedom for chi-square tests, sample size for KS.
    pub dof: usize,
}

/// Chi-square goodness of fit of integer counts against Poisson(`mean`).
///
/// Classes are `0, 1, …, k` and a tail `> k`; adjacent classes are merged
/// until every expected count is at least 5.
pub fn poisson_chi_square(counts: &[u64], mean: f64) -> Result<TestOutcome> {
    if counts.is_empty() || !(mean > 0.0) {
        return Err(Error::Statistics("need counts and a positive mean".into()));
    }
    let n = counts.len() as f64;
    let max = *counts.iter().max().unwrap() as usize;
    let mut observed = vec![0.0; max + 2];
    for &c in counts {
        observed[c as usize] += 1.0;
    }
    let mut pmf = Vec::with_capacity(max + 2);
    let mut p = (-mean).exp();
    let mut acc = 0.0;
    for k in 0..=max {
        pmf.push(p);
        acc += p;
        p *= mean / (k + 1) as f64;
    }
    pmf.push((1.0 - acc).max(0.0));
    let mut classes: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for k in 0..pmf.len() {
        o += observed[k];
        e += pmf[k] * n;
        if e >= 5.0 {
            classes.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if let Some(last) = classes.last_mut() {
        last.0 += o;
        last.1 += e;
    }
    if classes.len() < 2 {
        return Err(Error::Statistics("too few classes for a chi-square test".into()));
    }
    let statistic: f64 = classes.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = classes.len() - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::Statistics(e.to_string()))?;
    Ok(TestOutcome { statistic, p_value: chi.sf(statistic), dof })
}

/// Chi-square test of equal cell probabilities for a vector of counts.
pub fn uniform_chi_square(counts: &[u64]) -> Result<TestOutcome> {
    if counts.len() < 2 {
        return Err(Error::Statistics("need at least two cells".into()));
    }
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    if e <= 0.0 {
        return Err(Error::Statistics("no observations".into()));
    }
    let statistic = counts.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    let dof = counts.len() - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::Statistics(e.to_string()))?;
    Ok(TestOutcome { statistic, p_value: chi.sf(statistic), dof })
}

/// Kolmogorov survival function `Q(t) = 2 Σ (−1)^{k−1} e^{−2k²t²}`.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 0.27 {
        return 1.0;
    }
    if t < 1.0 {
        // small-t form for fast convergence
        let s = (2.0 * std::f64::consts::PI).sqrt() / t;
        let q = (-std::f64::consts::PI.powi(2) / (8.0 * t * t)).exp();
        let cdf = s * (q + q.powi(9) + q.powi(25) + q.powi(49));
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * t * t).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<TestOutcome> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::Statistics("empty sample".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    let sq = nf.sqrt();
    let p_value = kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d);
    Ok(TestOutcome { statistic: d, p_value, dof: n })
}

/// Two-sided pooled two-proportion z-test.
pub fn two_proportion_z_test(hits_a: usize, n_a: usize, hits_b: usize, n_b: usize) -> Result<TestOutcome> {
    if n_a == 0 || n_b == 0 || hits_a > n_a || hits_b > n_b {
        return Err(Error::Statistics("invalid proportions".into()));
    }
    let (pa, pb) = (hits_a as f64 / n_a as f64, hits_b as f64 / n_b as f64);
    let pooled = (hits_a + hits_b) as f64 / (n_a + n_b) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n_a as f64 + 1.0 / n_b as f64)).sqrt();
    if se == 0.0 {
        return Ok(TestOutcome { statistic: 0.0, p_value: 1.0, dof: n_a + n_b });
    }
    let z = (pa - pb) / se;
    let normal = Normal::standard();
    Ok(TestOutcome { statistic: z, p_value: 2.0 * normal.sf(z.abs()), dof: n_a + n_b })
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub points: usize,
}

impl LinearFit {
    /// Two-sided confidence interval for the slope (Student t with n−2 dof).
    pub fn slope_interval(&self, level: f64) -> (f64, f64) {
        if self.points < 3 || !self.slope_stderr.is_finite() {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let t = StudentsT::new(0.0, 1.0, (self.points - 2) as f64)
            .map(|d| d.inverse_cdf(0.5 + level / 2.0))
            .unwrap_or(f64::INFINITY);
        (self.slope - t * self.slope_stderr, self.slope + t * self.slope_stderr)
    }
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len();
    if n != ys.len() || n < 2 {
        return Err(Error::Statistics("need at least two paired points".into()));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Statistics("abscissae are all equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if n > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (rss / (nf - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Ok(LinearFit { slope, intercept, slope_stderr, points: n })
}

/// Weighted isotonic (non-decreasing) regression by pool-adjacent-violators.
pub fn isotonic_fit(ys: &[f64], weights: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(ys.len());
    for (&y, &w) in ys.iter().zip(weights) {
        blocks.push((y, w, 1));
        while blocks.len() > 1 {
            let (y2, w2, c2) = blocks[blocks.len() - 1];
            let (y1, w1, c1) = blocks[blocks.len() - 2];
            if y1 <= y2 {
                break;
            }
            blocks.pop();
            let w = w1 + w2;
            *blocks.last_mut().unwrap() = ((y1 * w1 + y2 * w2) / w, w, c1 + c2);
        }
    }
    blocks.into_iter().flat_map(|(y, _, c)| std::iter::repeat_n(y, c)).collect()
}

/// Distribution-free confidence interval for the median from order
/// statistics of a sorted sample (normal approximation to Binomial(n, 1/2)).
pub fn median_interval(sorted: &[f64], level: f64) -> Option<(f64, f64)> {
    let n = sorted.len();
    if n < 6 {
        return None;
    }
    let z = Normal::standard().inverse_cdf(0.5 + level / 2.0);
    let half = z * (n as f64).sqrt() / 2.0;
    let lo = ((n as f64 / 2.0 - half).floor().max(1.0) as usize).min(n) - 1;
    let hi = ((n as f64 / 2.0 + half).ceil() as usize).clamp(1, n) - 1;
    Some((sorted[lo], sorted[hi]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::{Distribution, Poisson};

    #[test]
    fn kolmogorov_branches_agree() {
        for &t in &[0.6, 0.8, 0.95, 1.0, 1.05] {
            let mut sum = 0.0;
            for k in 1..200 {
                let term = (-2.0 * (k * k) as f64 * t * t).exp();
                sum += if k % 2 == 1 { term } else { -term };
            }
            assert!((kolmogorov_sf(t) - 2.0 * sum).abs() < 1e-9, "t={t}");
        }
        assert!((kolmogorov_sf(1.358) - 0.05).abs() < 1e-3);
    }

    #[test]
    fn ks_accepts_uniform_and_rejects_shift() {
        let mut rng = crate::rng::RngSeed::new(3).rng();
        let xs: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        assert!(ks_test(&xs, |x| x.clamp(0.0, 1.0)).unwrap().p_value > 0.01);
        let shifted: Vec<f64> = xs.iter().map(|x| x * 0.95).collect();
        assert!(ks_test(&shifted, |x| x.clamp(0.0, 1.0)).unwrap().p_value < 0.01);
    }

    #[test]
    fn poisson_chi_square_detects_wrong_mean() {
        let mut rng = crate::rng::RngSeed::new(4).rng();
        let pois = Poisson::new(1.0).unwrap();
        let counts: Vec<u64> = (0..20000).map(|_| pois.sample(&mut rng) as u64).collect();
        assert!(poisson_chi_square(&counts, 1.0).unwrap().p_value > 0.01);
        assert!(poisson_chi_square(&counts, 1.1).unwrap().p_value < 0.01);
    }

    #[test]
    fn z_test_symmetry_and_degenerate_case() {
        let a = two_proportion_z_test(40, 100, 60, 100).unwrap();
        let b = two_proportion_z_test(60, 100, 40, 100).unwrap();
        assert!((a.statistic + b.statistic).abs() < 1e-12);
        assert!((a.p_value - b.p_value).abs() < 1e-12);
        assert!(a.p_value < 0.01);
        assert_eq!(two_proportion_z_test(0, 10, 0, 20).unwrap().p_value, 1.0);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 0.5 * x).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.intercept - 2.0).abs() < 1e-12);
        assert!(f.slope_stderr.abs() < 1e-12);
    }

    #[test]
    fn isotonic_pools_violators() {
        let fit = isotonic_fit(&[0.1, 0.3, 0.2, 0.6, 0.5], &[1.0; 5]);
        assert_eq!(fit.len(), 5);
        assert!(fit.windows(2).all(|w| w[0] <= w[1]));
        assert!((fit[1] - 0.25).abs() < 1e-12 && (fit[3] - 0.55).abs() < 1e-12);
        assert_eq!(isotonic_fit(&[0.1, 0.2], &[1.0, 1.0]), vec![0.1, 0.2]);
    }

    #[test]
    fn median_interval_brackets_median() {
        let xs: Vec<f64> = (0..101).map(|i| i as f64).collect();
        let (lo, hi) = median_interval(&xs, 0.95).unwrap();
        assert!(lo < 50.0 && hi > 50.0);
        assert!(hi - lo < 25.0);
    }
}
