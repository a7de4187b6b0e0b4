//! Canonical basis of the constants of K[U,V] and straightening of products
//! of generators.

use nowicki::constants::{canonical_basis, straighten, uv_kernel_dim};
use nowicki::exprio::parse_constgen_product;

fn main() -> nowicki::Result<()> {
    let d = 2;
    let (pd, w) = ([1, 1, 1, 1], 0);
    let basis = canonical_basis(d, &pd, w);
    println!("canonical monomials with pair degrees {pd:?}, weight {w}:");
    for m in &basis {
        println!("  {m}");
    }
    println!("kernel dimension {}", uv_kernel_dim(&pd, w));

    for text in ["alpha(1,2)*beta(1,2)", "gamma(1,2)*gamma(2,1)", "u(2)*v(1)*gamma(1,2)"] {
        let product = parse_constgen_product(text, d)?;
        let combo = straighten(&product, d)?;
        let rendered: Vec<String> = combo.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        println!("{text} = {}", rendered.join(" + "));
    }
    Ok(())
}
