use nowicki::kernel::{components, kernel_basis, kernel_by_degree, Metabelian, WreathModule};
use nowicki::metabelian::{meta_derive, MetaElement, MetaMonomial};
use nowicki::wreath::{commutator_image, embed, is_commutator_image, is_constant, module_derive, pullback};
use nowicki::Rational;
use num_traits::One;

#[test]
fn pullback_inverts_commutator_images() {
    let d = 2;
    let alg = Metabelian::ideal(d);
    let mut seen = 0;
    for n in 2..=5 {
        for c in components(&alg, n) {
            for b in nowicki::kernel::component_basis(&alg, &c).unwrap() {
                assert!(matches!(b, MetaMonomial::Comm(_)));
                let m = commutator_image(&b, d).unwrap();
                assert!(is_commutator_image(&m));
                let back = pullback(&m).unwrap();
                assert_eq!(back, MetaElement::from_monomial(d, b.clone(), Rational::one()));
                assert_eq!(embed(&back).unwrap().module, m);
                seen += 1;
            }
        }
    }
    assert!(seen > 100, "only {seen} basis commutators");
}

#[test]
fn kernels_match_across_the_embedding() {
    let d = 2;
    let meta = Metabelian::ideal(d);
    let module = WreathModule { d };
    for n in 2..=4 {
        for (c, basis) in kernel_by_degree(&meta, n).unwrap() {
            for f in &basis {
                let image = embed(f).unwrap();
                assert!(image.poly.is_zero());
                assert!(is_constant(&image.module), "{} is not constant after embedding", f.render());
            }
            for b in nowicki::kernel::component_basis(&meta, &c).unwrap() {
                let f = MetaElement::from_monomial(d, b, Rational::one());
                let lhs = embed(&meta_derive(&f)).unwrap().module;
                assert_eq!(lhs, module_derive(&embed(&f).unwrap().module), "{}", f.render());
            }
            let images: Vec<_> = kernel_basis(&module, &c)
                .unwrap()
                .into_iter()
                .filter(is_commutator_image)
                .collect();
            assert!(images.len() <= basis.len(), "{c}");
            for m in &images {
                let f = pullback(m).unwrap();
                assert!(meta_derive(&f).is_zero(), "{c}");
            }
        }
    }
}
