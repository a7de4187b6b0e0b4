//! Arithmetic in the free metabelian algebra: normal forms of products and
//! the induced derivation.

use nowicki::metabelian::{comm, meta_derive, meta_mul, x};

fn main() -> nowicki::Result<()> {
    let d = 2;
    let (x1, x2, x3) = (x(d, 1), x(d, 2), x(d, 3));
    let c12 = comm(d, &[1, 2]);

    // products of commutators vanish
    println!("[x1,x2]*[x1,x3] = {}", meta_mul(&c12, &comm(d, &[1, 3]))?.render());
    println!("[x1,x2]*x3 = {}", meta_mul(&c12, &x3)?.render());
    println!("x2*x1 = {}", meta_mul(&x2, &x1)?.render());

    let f = meta_mul(&meta_mul(&x2, &x2)?, &c12)?;
    println!("f = {}", f.render());
    println!("delta(f) = {}", meta_derive(&f).render());
    println!("delta(x2) = {}", meta_derive(&x2).render());
    Ok(())
}
