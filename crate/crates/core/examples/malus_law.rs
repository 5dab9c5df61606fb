//! Transmission of polarized light through a second polarizer, for an ideal
//! polarizer and for two leaky ones.
//!
//!     cargo run --example malus_law

use malus_hv::{malus, wrap_axis, Angle, PolarizerSpec};

fn main() -> malus_hv::Result<()> {
    let specs = [0.0, 0.01, 0.05]
        .into_iter()
        .map(PolarizerSpec::new)
        .collect::<malus_hv::Result<Vec<_>>>()?;
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "α°", "ε=0", "ε=0.01", "ε=0.05"
    );
    for deg in (0..=90).step_by(15) {
        let a = Angle::from_degrees(deg as f64);
        print!("{deg:>6}");
        for spec in &specs {
            print!(" {:>10.6}", malus(a, *spec));
        }
        println!();
    }

    // Axes are undirected: 135° and -45° describe the same polarizer.
    let w = wrap_axis(Angle::from_degrees(135.0))?;
    println!("135° wraps to {:.1}°", w.degrees());
    Ok(())
}
