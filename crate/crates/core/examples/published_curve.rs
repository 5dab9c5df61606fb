//! The plateau distribution with a = 1.95, e = 3.56, c = 500, its normalized
//! self-convolution, and the gap to cos²α.
//!
//!     cargo run --example published_curve

use malus_hv::convolution::{curve, degree_grid, deviation};
use malus_hv::quadrature::QuadratureConfig;
use malus_hv::{P1Params, P1};

fn main() -> malus_hv::Result<()> {
    let p1 = P1::Parametric(P1Params::PUBLISHED);
    let c = curve(
        &p1,
        &degree_grid(0.0, 90.0, 1.0),
        &QuadratureConfig::default(),
        true,
    )?;

    println!("{:>5} {:>10} {:>10} {:>10}", "α°", "p1", "M(α)", "cos²α");
    for &(a, m) in c.points.iter().step_by(10) {
        println!(
            "{:>5.0} {:>10.6} {:>10.6} {:>10.6}",
            a.degrees(),
            p1.eval_angle(a),
            m,
            a.radians().cos().powi(2)
        );
    }
    let d = deviation(&c, 0.0)?;
    println!(
        "rms {:.6}, max {:.6} at {:.0}°, {} quadrature warnings",
        d.rms,
        d.max_abs,
        d.argmax.degrees(),
        c.warnings.len()
    );
    Ok(())
}
