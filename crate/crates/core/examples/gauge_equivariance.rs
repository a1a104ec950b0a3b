//! How (r, s) change under a rotation g ∈ SU(3) of the adapted frame and a
//! change h ∈ GL(3, C) of the J-coframe: r' = g⁻¹rh, s' = g⁻¹sh̄.

use sixsphere::chern::equivariance_sweep;
use sixsphere::field::Q;
use sixsphere::g2::adapted_frame_at;
use sixsphere::sampling::{rng, Sample};

pub fn run() -> sixsphere::Result<()> {
    let u: Vec<Q> = Q::random_unit_vector(&mut rng(4), 7);
    let frame = adapted_frame_at(&u, 0.0)?;
    let reports = equivariance_sweep::<Q>(20, 9, &frame, 0.0)?;
    let passed = reports.iter().filter(|r| r.pass).count();
    println!("transformation law holds exactly in {passed} of {} random gauges", reports.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
