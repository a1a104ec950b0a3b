//! The Nijenhuis tensor of 𝕁 by finite differences in a stereographic
//! chart, compared with N(X, Y) = −4 𝕁((X × Y)ᵀ).

use sixsphere::sphere::{nijenhuis, nijenhuis_sweep, standard_j_matrix, StereoChart};

pub fn run() -> sixsphere::Result<()> {
    let e = |i: usize| sixsphere::matrix::unit_vector::<f64>(7, i - 1);
    let chart = StereoChart::new(&e(1))?;
    let field = |x: &[f64]| standard_j_matrix(x);
    let n = nijenhuis(&field, &chart, &e(1), &e(2), &e(4), 1e-3)?;
    println!("N(e2, e4) at e1 = {:?}", n.value.iter().map(|x| (x * 1e6).round() / 1e6).collect::<Vec<_>>());
    println!("|N| = {:.6}, step-halving change {:.1e}", n.norm, n.step_change);

    let sweep = nijenhuis_sweep(20, 1, 1e-3, 0.05)?;
    println!(
        "20 random triples: min |N| {:.3}, max relative change {:.1e}, max error against the identity {:.1e}",
        sweep.min_norm, sweep.max_relative_step_change, sweep.max_identity_error
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
