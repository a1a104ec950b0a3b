//! First-order invariants (r, s) of almost complex structures on S⁶, the
//! residual det s̄ − det r and the signature of H, for the named families
//! and for random residual-free ω-compatible structures.

use sixsphere::chern::{
    chern_residual, compute_rs_with_coframe, family_coframe, index_from_h, residual_free_sweep, upsilon_type_extremes,
    verdict_line, CandidateJ, FAMILIES,
};
use sixsphere::field::Q;
use sixsphere::g2::AdaptedFrame;

pub fn run() -> sixsphere::Result<()> {
    let frame = AdaptedFrame::<Q>::standard();
    for name in FAMILIES {
        let j = CandidateJ::family(name, &frame)?;
        let data = compute_rs_with_coframe(&j, &frame, &family_coframe(name)?, 0.0)?;
        let (u30, u03) = upsilon_type_extremes(&data);
        println!(
            "{name:<15} residual {} Upsilon^(3,0) {} Upsilon^(0,3) {} orientation {:+}",
            chern_residual(&data),
            u30,
            u03,
            data.orientation()
        );
        if let Ok(h) = index_from_h(&data, 0.0) {
            println!("{:<15} H signature ({}, {})", "", h.index.p, h.index.q);
        }
        println!("{:<15} {}", "", verdict_line(&data, 0.0));
    }

    let sweep = residual_free_sweep::<Q>(200, 11, &frame, 0.0);
    println!(
        "200 residual-free structures: {} valid, index (2,1) {}, index (1,2) {}, definite {}",
        sweep.valid, sweep.index_2_1, sweep.index_1_2, sweep.definite
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
