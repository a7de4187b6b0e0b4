//! Component-wise comparison of kernels with the span generated by the
//! candidate generating sets. Components where the span is too small are
//! printed with a witness.

use nowicki::constants::IdealGen;
use nowicki::grassmann::{grassmann_generators_with, ZRange};
use nowicki::kernel::{module_span_check, span_check, Grassmann, SpanMode, SpanReport};

fn summary(name: &str, reports: &[SpanReport]) {
    let bad: Vec<_> = reports.iter().filter(|r| !r.verified()).collect();
    println!("{name}: {} components, {} short", reports.len(), bad.len());
    for r in bad {
        println!("  {} kernel {} span {}", r.component, r.kernel_dim, r.span_dim);
        for w in &r.missing_witnesses {
            println!("    e.g. {w}");
        }
    }
}

fn main() -> nowicki::Result<()> {
    let d = 2;
    let gens: Vec<_> = IdealGen::all(d).into_iter().map(|g| (g.to_string(), g.element(d))).collect();
    summary("metabelian commutator ideal", &module_span_check(d, &gens, 4)?);

    for zr in [ZRange::Printed, ZRange::Relaxed] {
        let gens: Vec<_> = grassmann_generators_with(d, zr).into_iter().map(|(g, e)| (g.to_string(), e)).collect();
        summary(&format!("grassmann, {zr:?} z range"), &span_check(&Grassmann { d }, &gens, 4, SpanMode::Products)?);
    }
    Ok(())
}
