#[path = "../examples/chern_identity.rs"]
mod chern_identity;

#[path = "../examples/classify_threeform.rs"]
mod classify_threeform;

#[path = "../examples/compatibility_dims.rs"]
mod compatibility_dims;

#[path = "../examples/cross_product.rs"]
mod cross_product;

#[path = "../examples/elliptic_definite.rs"]
mod elliptic_definite;

#[path = "../examples/gauge_equivariance.rs"]
mod gauge_equivariance;

#[path = "../examples/invariant_forms.rs"]
mod invariant_forms;

#[path = "../examples/json_reports.rs"]
mod json_reports;

#[path = "../examples/nijenhuis.rs"]
mod nijenhuis;

#[path = "../examples/structure_equations.rs"]
mod structure_equations;

#[test]
fn chern_identity_runs() {
    chern_identity::run().unwrap();
}

#[test]
fn classify_threeform_runs() {
    classify_threeform::run().unwrap();
}

#[test]
fn compatibility_dims_runs() {
    compatibility_dims::run().unwrap();
}

#[test]
fn cross_product_runs() {
    cross_product::run().unwrap();
}

#[test]
fn elliptic_definite_runs() {
    elliptic_definite::run().unwrap();
}

#[test]
fn gauge_equivariance_runs() {
    gauge_equivariance::run().unwrap();
}

#[test]
fn invariant_forms_runs() {
    invariant_forms::run().unwrap();
}

#[test]
fn json_reports_runs() {
    json_reports::run().unwrap();
}

#[test]
fn nijenhuis_runs() {
    nijenhuis::run().unwrap();
}

#[test]
fn structure_equations_runs() {
    structure_equations::run().unwrap();
}
