//! The invariant forms ω and Υ at points of S⁶ and the pointwise identity
//! dω = 3 Im Υ, exactly at rational points and in floating point.

use sixsphere::field::{cq, qi, Q};
use sixsphere::g2::adapted_frame_at;
use sixsphere::sampling::{rng, Sample};
use sixsphere::sphere::{
    d_omega_ambient, d_omega_defect_at, omega_at, phi_horizontal, upsilon_at, verify_d_omega_pointwise, SpherePoint,
};

pub fn run() -> sixsphere::Result<()> {
    let u = SpherePoint::<Q>::basis(1);
    let frame = adapted_frame_at(u.coords(), 0.0)?;
    println!("omega at e1 = {:?}", omega_at(&u));
    let ups = upsilon_at(&u, &frame, 0.0)?;
    assert_eq!(ups.coefficient(&[2, 4, 6]), cq(0, 1));
    assert_eq!(ups.im(), phi_horizontal(&u));
    println!("Upsilon at e1 has e246 coefficient i and Im Upsilon = phi restricted");

    let d_omega = d_omega_ambient();
    let mut r = rng(3);
    for _ in 0..3 {
        let p: Vec<Q> = Q::random_unit_vector(&mut r, 7);
        let f = adapted_frame_at(&p, 0.0)?;
        println!(
            "exact defect of d omega - 3 Im Upsilon at {:?}: {}",
            p.iter().map(ToString::to_string).collect::<Vec<_>>(),
            d_omega_defect_at(&f, &d_omega, qi(8))
        );
    }

    let rep = verify_d_omega_pointwise::<f64>(100, 7, 1e-10, 8.0)?;
    println!("float sweep: {} points, max defect {:.2e}, pass {}", rep.samples, rep.max_defect, rep.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
