//! Three signed marks on `0, e₁, e₂ ∈ ℤ²` with edge rule
//! `|x−y| + |E_x| + |E_y| + |E_x−E_y| ≤ 4`: two events of the same
//! monotonicity that can never occur together.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::energy_term;
use crate::rng::RngSeed;
use crate::stats::binomial_stderr;

/// `A` = neither `{0,e₁}` nor `{e₁,e₂}` is an edge; `B` = `{0,e₂}` is not an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FkgEvents {
    pub a: bool,
    pub b: bool,
}

pub fn fkg_events(e0: f64, e1: f64, e2: f64) -> Result<FkgEvents> {
    if [e0, e1, e2].iter().any(|e| !(-1.0..=1.0).contains(e)) {
        return Err(Error::Domain("energies must lie in [−1, 1]".into()));
    }
    Ok(events_unchecked(e0, e1, e2))
}

#[inline]
fn events_unchecked(e0: f64, e1: f64, e2: f64) -> FkgEvents {
    FkgEvents {
        a: energy_term(e0, e1) > 3.0 && energy_term(e1, e2) > 4.0 - std::f64::consts::SQRT_2,
        b: energy_term(e0, e2) > 3.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FkgSummary {
    #[serde(rename = "PA")]
    pub pa: f64,
    #[serde(rename = "PB")]
    pub pb: f64,
    #[serde(rename = "PAB")]
    pub pab: f64,
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub stderr_ab: f64,
    pub hits_a: usize,
    pub hits_b: usize,
    pub hits_ab: usize,
    pub samples: usize,
    pub seed: RngSeed,
}

pub const MIN_SAMPLES: usize = 10_000;
const CHUNKS: usize = 64;

/// Monte-Carlo frequencies with `E₀, E₁, E₂` i.i.d. uniform on `[−1, 1]`.
pub fn fkg_probabilities(samples: usize, seed: RngSeed) -> Result<FkgSummary> {
    if samples < MIN_SAMPLES {
        return Err(Error::Parameter(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let counts = (0..CHUNKS)
        .into_par_iter()
        .map(|k| {
            let n = samples / CHUNKS + usize::from(k < samples % CHUNKS);
            let mut rng = seed.child(k as u64).rng();
            let mut c = [0usize; 3];
            for _ in 0..n {
                let e: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
                let ev = events_unchecked(e[0], e[1], e[2]);
                c[0] += usize::from(ev.a);
                c[1] += usize::from(ev.b);
                c[2] += usize::from(ev.a && ev.b);
            }
            c
        })
        .reduce(|| [0; 3], |x, y| [x[0] + y[0], x[1] + y[1], x[2] + y[2]]);
    let f = |h: usize| h as f64 / samples as f64;
    Ok(FkgSummary {
        pa: f(counts[0]),
        pb: f(counts[1]),
        pab: f(counts[2]),
        stderr_a: binomial_stderr(counts[0], samples),
        stderr_b: binomial_stderr(counts[1], samples),
        stderr_ab: binomial_stderr(counts[2], samples),
        hits_a: counts[0],
        hits_b: counts[1],
        hits_ab: counts[2],
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_examples() {
        assert_eq!(fkg_events(0.0, 0.0, 0.0).unwrap(), FkgEvents { a: false, b: false });
        assert_eq!(fkg_events(0.9, -0.9, 0.9).unwrap(), FkgEvents { a: true, b: false });
        assert!(fkg_events(0.9, 0.9, -0.9).unwrap().b);
        assert!(fkg_events(1.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn deterministic_and_sized() {
        let a = fkg_probabilities(20_000, RngSeed::new(5)).unwrap();
        assert_eq!(a, fkg_probabilities(20_000, RngSeed::new(5)).unwrap());
        assert!(fkg_probabilities(100, RngSeed::new(5)).is_err());
    }
}
