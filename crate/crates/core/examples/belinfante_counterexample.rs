//! With `p1(λ) = cos²λ` the convolution is `(π/8)(1 + 2cos²α)`: after
//! normalization it falls only to 1/3 at crossed polarizers, where the Malus
//! law gives 0.
//!
//!     cargo run --example belinfante_counterexample

use std::f64::consts::PI;

use malus_hv::convolution::{convolve_malus, curve, degree_grid, deviation};
use malus_hv::quadrature::QuadratureConfig;
use malus_hv::{Angle, P1};

fn main() -> malus_hv::Result<()> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for a in degree_grid(-90.0, 90.0, 1.0) {
        let raw = convolve_malus(&P1::Belinfante, a, &cfg, false)?.value;
        let exact = PI / 8.0 * (1.0 + 2.0 * a.radians().cos().powi(2));
        worst = worst.max((raw - exact).abs());
    }
    println!("max |quadrature - closed form| over 181 angles: {worst:.2e}");

    let right = convolve_malus(&P1::Belinfante, Angle::from_degrees(90.0), &cfg, true)?.value;
    println!("normalized M(90°) = {right:.9} (Malus: 0)");

    let c = curve(&P1::Belinfante, &degree_grid(0.0, 90.0, 1.0), &cfg, true)?;
    let d = deviation(&c, 0.0)?;
    println!(
        "deviation from cos²α: rms {:.6}, max {:.6}",
        d.rms, d.max_abs
    );
    Ok(())
}
