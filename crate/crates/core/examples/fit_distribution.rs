//! Fit `p1` so that its self-convolution follows the Malus law, first with
//! the three-parameter plateau, then with a 10-knot monotone interpolant.
//!
//!     cargo run --release --example fit_distribution

use std::time::Instant;

use malus_hv::fitting::{fit_p1, objective_value, FitConfig, FitForm};
use malus_hv::{P1Params, P1};

fn main() -> malus_hv::Result<()> {
    let cfg = FitConfig {
        seed: 7,
        ..FitConfig::default()
    };
    let start = objective_value(&P1::Parametric(P1Params::PUBLISHED), &cfg);
    println!("published parameters: rms residual {start:.6}");

    for form in [FitForm::three_param(), FitForm::flexible(10)] {
        let t = Instant::now();
        let report = fit_p1(&form, &cfg)?;
        println!(
            "{:<12} rms {:.6}  max {:.6}  iterations {:>5}  converged {}  restart {}  ({:.1?})",
            report.form,
            report.residual_rms,
            report.residual_max,
            report.iterations,
            report.converged,
            report.restart,
            t.elapsed()
        );
        println!("{}", report.to_json()?);
    }
    Ok(())
}
