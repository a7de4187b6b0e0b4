//! The embedding of the free metabelian algebra into the wreath product,
//! and recovery of commutators from their images.

use nowicki::metabelian::{comm, meta_mul, x};
use nowicki::wreath::{embed, is_commutator_image, pullback};

fn main() -> nowicki::Result<()> {
    let d = 2;
    let f = meta_mul(&x(d, 1), &comm(d, &[2, 4, 3]))?;
    let image = embed(&f)?;
    println!("f       = {}", f.render());
    println!("image   = {}", image.render());

    let m = image.module.clone();
    println!("commutator image: {}", is_commutator_image(&m));
    let back = pullback(&m)?;
    println!("pullback = {}", back.render());
    assert_eq!(back, f);

    let g = embed(&x(d, 3))?;
    println!("image of x3 = {}", g.render());
    Ok(())
}
