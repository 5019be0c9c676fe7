//! Closed-form spreading/vanishing radii, separation gap and speed-set
//! membership for a few parameter sets.
//!
//! cargo run --example thresholds

use stefan_pp::criteria::thresholds;
use stefan_pp::ModelParams;

fn main() -> stefan_pp::Result<()> {
    let sets = [
        ("benchmark", ModelParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 5.0, 5.0, 2.0, 2.0)?),
        ("coexistence", ModelParams::new(1.5, 1.0, 1.0, 1.0, 1.0, 5.0, 5.0, 2.0, 2.0)?),
        ("strong predation", ModelParams::new(0.5, 2.0, 1.0, 2.0, 1.0, 1.0, 10.0, 2.0, 2.0)?),
    ];
    for (name, p) in sets {
        println!("[{name}]");
        print!("{}", thresholds(&p, Some(1.0))?.to_text());
        println!();
    }
    Ok(())
}
