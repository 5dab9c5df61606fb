//! Three polarizers at 0, α and β: for each α, the β that lets the least
//! light through, for ideal and leaky polarizers and for the hidden-variable
//! chaining rule.
//!
//!     cargo run --release --example cascade_sweep

use malus_hv::cascade::{beta_curve, BetaSearch, CascadeModel};
use malus_hv::convolution::degree_grid;
use malus_hv::{P1Params, P1};

fn main() -> malus_hv::Result<()> {
    let alphas = degree_grid(0.0, 90.0, 15.0);
    let models = [
        CascadeModel::IdealQm,
        CascadeModel::RealQm {
            epsilon: 0.02,
            offset: 0.01,
        },
        CascadeModel::hidden_variable(P1::Parametric(P1Params::PUBLISHED)),
    ];
    for model in &models {
        println!("model {}", model.name());
        for r in beta_curve(model, &alphas, &BetaSearch::default())? {
            println!(
                "  α {:>5.1}°  β_min {:>8.3}°  T_min {:.9}",
                r.alpha.degrees(),
                r.beta_min.degrees(),
                r.t_min
            );
        }
    }
    Ok(())
}
