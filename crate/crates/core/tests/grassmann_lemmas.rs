use nowicki::checks;
use nowicki::grassmann::ZRange;

#[test]
fn power_reduction_needs_the_wider_z_range() {
    let printed = checks::power_reduction(2, 3, ZRange::Printed).unwrap();
    assert!(!printed.passed);
    assert_eq!(&printed.details[1..], ["  x1^2*y2^2", "  x1^3*y2^3"]);
    assert!(checks::power_reduction(2, 3, ZRange::Relaxed).unwrap().passed);
}

#[test]
fn evaluation_kernel_witnesses() {
    let r = checks::ideal_lemmas(2, 2, 1).unwrap();
    assert!(!r.passed);
    let text = r.details.join("\n");
    assert!(text.contains("(1,1; w=1): kernel 2, ideal part 1, e.g. -x1*y2 + y1*x2 + [x1,y2]"), "{text}");
    assert!(text.contains("(1,1; w=0): kernel 1, ideal part 0, e.g. [x1,x2]"), "{text}");
}
