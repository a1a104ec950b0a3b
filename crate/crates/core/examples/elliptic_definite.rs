//! The primitive decomposition dω = λ∧ω + π and the elliptic-definite test,
//! on S⁶ and on a toy structure of signature (1,2).

use sixsphere::field::{qi, Q};
use sixsphere::form::Form;
use sixsphere::g2::AdaptedFrame;
use sixsphere::symplectic::{elliptic_definite_check, primitive_decompose, sphere_elliptic_sweep, sphere_pair};

pub fn run() -> sixsphere::Result<()> {
    let (omega, domega) = sphere_pair(&AdaptedFrame::<Q>::standard())?;
    let dec = primitive_decompose(&omega, &domega)?;
    println!("S6 at e1: lambda = {:?}", dec.lambda);
    let r = elliptic_definite_check(&omega, &domega, None, 0.0)?;
    println!(
        "S6 at e1: tag {}, signature {:?}, elliptic definite {}",
        r.tag.as_str(),
        r.signature,
        r.elliptic_definite
    );

    let sweep = sphere_elliptic_sweep::<f64>(100, 5, 1e-10)?;
    println!("100 float points: {} definite, max defect {:.2e}", sweep.definite, sweep.max_defect);

    let toy_omega = Form::from_terms(6, 2, [(vec![1, 2], qi(1)), (vec![3, 4], qi(-1)), (vec![5, 6], qi(-1))])?;
    let toy_pi = Form::from_terms(
        6,
        3,
        [(vec![1, 3, 6], qi(1)), (vec![1, 4, 5], qi(1)), (vec![2, 3, 5], qi(1)), (vec![2, 4, 6], qi(-1))],
    )?;
    let t = elliptic_definite_check(&toy_omega, &toy_pi, None, 0.0)?;
    println!("toy: tag {}, signature {:?}, elliptic definite {}", t.tag.as_str(), t.signature, t.elliptic_definite);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
