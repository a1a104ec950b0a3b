//! Complex structures on R²ⁿ near J₀: how many are compatible with ω₀, with
//! the metric, and what signature ω has for a given J.

use sixsphere::compat::{compatibility_space_dims, omega_index, standard_omega, LinearComplexStructure};
use sixsphere::field::Q;

pub fn run() -> sixsphere::Result<()> {
    for n in 1..=3 {
        let d = compatibility_space_dims(n)?;
        println!(
            "n = {n}: all {}, omega-compatible {}, metric-compatible {}",
            d.total, d.omega_compatible, d.metric_compatible
        );
    }
    let w = standard_omega::<Q>(3);
    let j = LinearComplexStructure::<Q>::standard(3);
    println!("omega-index of J0: {:?}", omega_index(&w, &j)?);
    println!("omega-index of -J0: {:?}", omega_index(&w, &j.neg())?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
