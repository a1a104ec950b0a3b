//! The Maurer-Cartan structure equations of G₂ as a differential graded
//! algebra: d² = 0, the invariant form identities, and a mutated rule set
//! that breaks them.

use sixsphere::dga::{
    frobenius_set, omega, upsilon, verify_closed_system, verify_d_squared, verify_invariant_form_identities,
    DgaElement, Generator, StructureRules, MUTATIONS,
};

pub fn run() -> sixsphere::Result<()> {
    let rules = StructureRules::standard();
    let t1 = DgaElement::theta(1);
    println!("d theta1 = {:?}", rules.d(&t1));

    let squares = verify_d_squared(&rules);
    println!("d^2 = 0 on {} generators: {}", squares.len(), squares.iter().all(|c| c.pass));

    for c in verify_invariant_form_identities(&rules) {
        println!("{:<28} pass = {}", c.check, c.pass);
    }
    println!("omega has degree {:?}, upsilon has degree {:?}", omega().degree(), upsilon().degree());

    let closed = verify_closed_system(&rules, &frobenius_set());
    println!("Frobenius system closed: {}", closed.iter().all(|c| c.pass));
    let control = verify_closed_system(&rules, &[Generator::theta(1)]);
    println!("{{theta1}} alone closed: {}", control.iter().all(|c| c.pass));

    for name in MUTATIONS {
        let m = StructureRules::mutated(name)?;
        let mut checks = verify_d_squared(&m);
        checks.extend(verify_invariant_form_identities(&m));
        let broken = checks.iter().filter(|c| !c.pass).count();
        println!("mutation {name:<18} fails {broken} of {} checks", checks.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
