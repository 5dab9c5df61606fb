//! Largest CHSH expectation under three commutation structures: exhaustive
//! for commuting observables, see-saw search otherwise, with random sampling
//! as a sanity check on the ceilings.
//!
//!     cargo run --release --example bell_bounds

use malus_hv::bell::{chsh_classical_max, random_ceiling, seesaw_max, Regime, SeesawConfig};

fn main() -> malus_hv::Result<()> {
    let classical = chsh_classical_max();
    println!(
        "classical        attained {:.9}  limit {:.9}",
        classical.attained, classical.limit
    );

    let mut witness = None;
    for regime in [Regime::HiddenVariable, Regime::CopenhagenQm] {
        let mut cfg = SeesawConfig::new(regime);
        cfg.seed = 1;
        let est = seesaw_max(&cfg)?;
        let sampled = random_ceiling(regime, cfg.dimension, 1000, 1)?;
        println!(
            "{:<16} attained {:.9}  limit {:.9}  gap {:.3e}  random max {:.6}",
            regime.name(),
            est.attained,
            est.limit,
            est.limit - est.attained,
            sampled
        );
        witness.get_or_insert(est);
    }

    if let Some(est) = witness {
        println!("{}", est.to_json(true)?);
    }
    Ok(())
}
