//! Forms and matrices in the JSON exchange format, and a canonical report.

use serde_json::json;
use sixsphere::compat::standard_omega;
use sixsphere::field::Q;
use sixsphere::json::{form_from_json, form_to_json, matrix_to_json, to_canonical_string};
use sixsphere::matrix::Matrix;

pub fn run() -> sixsphere::Result<()> {
    let omega = standard_omega::<Q>(3);
    let v = form_to_json(&omega);
    print!("{}", to_canonical_string(&v));
    assert_eq!(form_from_json::<Q>(&v)?, omega);

    let as_float = form_to_json(&omega.map_coeffs(|x| sixsphere::field::q_to_f64(x) / 3.0));
    print!("{}", to_canonical_string(&as_float));

    let report = json!({ "identity": matrix_to_json(&Matrix::<Q>::identity(2)), "pass": true });
    print!("{}", to_canonical_string(&report));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
