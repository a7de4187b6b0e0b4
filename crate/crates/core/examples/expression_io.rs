//! Parsing, rendering and JSON round trips for every algebra.

use nowicki::exprio::{from_json, parse, to_json, AlgebraKind};

fn main() -> nowicki::Result<()> {
    let samples = [
        (AlgebraKind::Comm, "x1*x4 - x2*x3"),
        (AlgebraKind::Uv, "u1*v2 - 1/2*u2*v1"),
        (AlgebraKind::Meta, "x2*[x1,x2] + [x2,x1,x3]"),
        (AlgebraKind::Grass, "x1*y2 - [x1,y2]"),
    ];
    for (kind, text) in samples {
        let e = parse(text, kind, 2)?;
        let json = to_json(&e);
        let back = from_json(&json)?;
        assert_eq!(back, e);
        println!("{}: {} -> {}", kind.tag(), text, e.render());
        println!("  {json}");
    }
    Ok(())
}
