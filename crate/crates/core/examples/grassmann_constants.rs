//! Constants in the relatively free algebra of the Grassmann variety: the
//! generator families and the evaluation maps phi_alpha.

use nowicki::grassmann::{grass_derive, grassmann_generators_with, phi_alpha, GrassElement, ZRange};
use nowicki::Rational;

fn main() -> nowicki::Result<()> {
    let d = 2;
    for (g, e) in grassmann_generators_with(d, ZRange::Printed) {
        let tag = if grass_derive(&e).is_zero() { "constant" } else { "NOT constant" };
        println!("{g} = {e}  [{tag}]");
    }

    let alpha = [Rational::from_integer(3.into())];
    let f = nowicki::grassmann::grass_commutator(&GrassElement::x(d, 1), &GrassElement::y(d, 2))?;
    println!("phi_(3)({}) = {}", f.render(), phi_alpha(&f, &alpha)?.render());
    Ok(())
}
