//! Constants of the Weitzenboeck derivation on K[x1..x4] (two Jordan blocks
//! of size 2), component by component, and the known generators.

use nowicki::commpoly::nowicki_generators;
use nowicki::kernel::{kernel_by_degree, span_check, Commutative, SpanMode};

fn main() -> nowicki::Result<()> {
    let alg = Commutative { d: 2 };
    for n in 1..=3 {
        for (c, basis) in kernel_by_degree(&alg, n)? {
            if basis.is_empty() {
                continue;
            }
            let shown: Vec<String> = basis.iter().map(|p| p.render()).collect();
            println!("{c}: {}", shown.join(", "));
        }
    }

    let gens: Vec<_> = nowicki_generators(2).into_iter().map(|g| (g.render(), g)).collect();
    println!("generators: {}", gens.iter().map(|g| g.0.as_str()).collect::<Vec<_>>().join(", "));
    let reports = span_check(&alg, &gens, 4, SpanMode::Products)?;
    let ok = reports.iter().filter(|r| r.verified()).count();
    println!("products of generators span the kernel in {ok} of {} components", reports.len());
    Ok(())
}
