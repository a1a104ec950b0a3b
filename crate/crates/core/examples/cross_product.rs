//! The G₂ cross product on R⁷ and the almost complex structure it induces
//! on the six-sphere.

use sixsphere::field::Q;
use sixsphere::g2::{cross, is_g2, AdaptedFrame};
use sixsphere::matrix::{dot, unit_vector};
use sixsphere::sampling::{random_vector, rng};
use sixsphere::sphere::{standard_j, SpherePoint};

pub fn run() -> sixsphere::Result<()> {
    let e = |i: usize| unit_vector::<Q>(7, i - 1);
    assert_eq!(cross(&e(1), &e(2)), e(3));
    println!("e1 x e2 = e3");

    let mut r = rng(1);
    for _ in 0..100 {
        let u: Vec<Q> = random_vector(&mut r, 7, 5);
        let v: Vec<Q> = random_vector(&mut r, 7, 5);
        let lhs = cross(&u, &cross(&u, &v));
        let rhs: Vec<Q> = u.iter().zip(&v).map(|(a, b)| dot(&u, &v) * a.clone() - dot(&u, &u) * b.clone()).collect();
        assert_eq!(lhs, rhs);
    }
    println!("u x (u x v) = (u.v)u - (u.u)v on 100 random pairs");

    let u = SpherePoint::<Q>::basis(1);
    let jv = standard_j(&u, &e(2), 0.0)?;
    let jjv = standard_j(&u, &jv, 0.0)?;
    assert_eq!(jjv, e(2).iter().map(|x| -x.clone()).collect::<Vec<_>>());
    println!("J(e2) = e3, J(J(e2)) = -e2 at e1");

    let verdict = is_g2(AdaptedFrame::<Q>::standard().matrix(), 0.0)?;
    println!("identity is in G2: {} (defect {})", verdict.is_g2, verdict.defect_norm);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
