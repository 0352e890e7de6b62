//! Fixtures shared by the benchmarks.

use hopnet::{sample_marked_ppp, EnergyLaw, MarkedConfiguration, RngSeed, StripeGeometry, Window};

/// Uniform signed marks at intensity `rho` in the cube `[-half, half)^2`.
pub fn square(rho: f64, half: f64, seed: u64) -> MarkedConfiguration {
    let window = Window::centered_cube(2, half).expect("valid window");
    sample_marked_ppp(rho, &EnergyLaw::uniform_signed(), &window, RngSeed::new(seed)).expect("valid sample")
}

/// Stripe of side `ell` in `d = 2` with a sample padded by `pad`.
pub fn stripe(rho: f64, ell: f64, pad: f64, seed: u64) -> (StripeGeometry, MarkedConfiguration) {
    let geometry = StripeGeometry::new(2, ell).expect("valid geometry");
    let conf = sample_marked_ppp(rho, &EnergyLaw::uniform_signed(), &geometry.padded_window(pad), RngSeed::new(seed))
        .expect("valid sample");
    (geometry, conf)
}
