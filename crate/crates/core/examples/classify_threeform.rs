//! Split and elliptic 3-forms on R⁶: the discriminant λ, the complex
//! structure of an elliptic form and its decomposable (3,0)-form.

use sixsphere::field::{qi, Q};
use sixsphere::form::Form;
use sixsphere::threeform::{classify_3form, recover_upsilon, RecoveredJ};

fn form(terms: &[(&[usize], i64)]) -> sixsphere::Result<Form<Q>> {
    Form::from_terms(6, 3, terms.iter().map(|(i, c)| (i.to_vec(), qi(*c))))
}

pub fn run() -> sixsphere::Result<()> {
    let vol = Form::basis(6, &[1, 2, 3, 4, 5, 6])?;
    let split = form(&[(&[1, 2, 3], 1), (&[4, 5, 6], 1)])?;
    let elliptic = form(&[(&[1, 3, 6], 1), (&[1, 4, 5], 1), (&[2, 3, 5], 1), (&[2, 4, 6], -1)])?;

    for (name, rho) in [("split", &split), ("elliptic", &elliptic), ("zero", &Form::zero(6, 3))] {
        let c = classify_3form(rho, &vol, 0.0)?;
        println!("{name:<9} tag {:<10} lambda {}", c.tag.as_str(), c.lambda);
        if let Some(RecoveredJ::Exact(j)) = &c.j {
            println!("J = {:?}", j.matrix());
            println!("Upsilon = {:?}", recover_upsilon(rho, j, 0.0)?);
        }
    }

    // λ = −8 is not minus a square: J is irrational
    let irrational = form(&[(&[1, 3, 5], 1), (&[1, 4, 6], -2), (&[2, 3, 6], -2), (&[2, 4, 5], -2)])?;
    let c = classify_3form(&irrational, &vol, 1e-12)?;
    println!(
        "irrational case: tag {}, lambda {}, exact J: {}",
        c.tag.as_str(),
        c.lambda,
        matches!(c.j, Some(RecoveredJ::Exact(_)))
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
