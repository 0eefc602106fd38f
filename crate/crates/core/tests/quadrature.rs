use fourphoton::quadrature::{self, coherence_ratio, Rule};
use fourphoton::{FilterSpec, QuadratureConfig, SpectralModel};

fn model() -> SpectralModel {
    SpectralModel::gaussian(0.5, 1.0, 1.5).unwrap()
}

#[test]
fn widening_a_filter_never_decreases_integrals() {
    let m = model();
    let fb = FilterSpec::gaussian(1.0, 0.0).unwrap();
    let cfg = QuadratureConfig::with_nodes(128);
    let mut prev = None;
    for w in [0.3, 0.6, 1.0, 2.0, 4.0] {
        let fa = FilterSpec::gaussian(w, 0.0).unwrap();
        let j = quadrature::compute_all(&m, &fa, &fb, &cfg).unwrap();
        if let Some((ja, jb, jab, j4)) = prev {
            assert!(
                j.j_a >= ja && j.j_b >= jb && j.j_ab >= jab && j.j4 >= j4,
                "width {w}"
            );
        }
        prev = Some((j.j_a, j.j_b, j.j_ab, j.j4));
    }
}

#[test]
fn doubling_nodes_stays_within_reported_error() {
    let m = model();
    let fa = FilterSpec::gaussian(0.8, 0.0).unwrap();
    let fb = FilterSpec::rectangular(2.0, 0.0).unwrap();
    let coarse = quadrature::compute_all(&m, &fa, &fb, &QuadratureConfig::with_nodes(128)).unwrap();
    let fine = quadrature::compute_all(&m, &fa, &fb, &QuadratureConfig::with_nodes(256)).unwrap();
    let tiny = 1e-13;
    assert!((coarse.j - fine.j).abs() <= coarse.err_j + tiny * coarse.j);
    assert!((coarse.j_a - fine.j_a).abs() <= coarse.err_j_a + tiny * coarse.j);
    assert!((coarse.j_b - fine.j_b).abs() <= coarse.err_j_b + tiny * coarse.j);
    assert!((coarse.j_ab - fine.j_ab).abs() <= coarse.err_j_ab + tiny * coarse.j);
    assert!((coarse.j4 - fine.j4).abs() <= coarse.err_j4 + tiny * coarse.j4);
}

#[test]
fn integral_ordering_and_j4_bounds() {
    let m = model();
    for (fa, fb) in [
        (FilterSpec::none(), FilterSpec::none()),
        (
            FilterSpec::gaussian(0.5, 0.0).unwrap(),
            FilterSpec::gaussian(3.0, 0.2).unwrap(),
        ),
        (
            FilterSpec::rectangular(1.0, -0.1).unwrap(),
            FilterSpec::none(),
        ),
    ] {
        let j = quadrature::compute_all(&m, &fa, &fb, &QuadratureConfig::with_nodes(128)).unwrap();
        let eps = 1e-12 * j.j;
        assert!(j.j_ab <= j.j_a + eps && j.j_a <= j.j + eps);
        assert!(j.j_ab <= j.j_b + eps && j.j_b <= j.j + eps);
        assert!(j.j4 >= 0.0 && j.j4 <= 2.0 * j.j * j.j_ab * (1.0 + 1e-12));
    }
}

#[test]
fn equal_widths_give_partial_coherence() {
    let m = SpectralModel::gaussian(1.0, 1.0, 1.0).unwrap();
    let none = FilterSpec::none();
    let j = quadrature::compute_all(&m, &none, &none, &QuadratureConfig::with_nodes(128)).unwrap();
    let c = coherence_ratio(&j).unwrap();
    assert!(c > 0.0 && c < 1.0, "{c}");
}

#[test]
fn narrow_pump_without_filters_is_incoherent() {
    let m = SpectralModel::gaussian(0.05, 1.0, 1.0).unwrap();
    let none = FilterSpec::none();
    let cfg = QuadratureConfig::with_nodes(1024);
    let j = quadrature::compute_all(&m, &none, &none, &cfg).unwrap();
    assert!(coherence_ratio(&j).unwrap() < 0.1);
}

#[test]
fn narrow_pump_filter_approximation() {
    let m = SpectralModel::gaussian(0.1, 1.0, 1.0).unwrap();
    let fa = FilterSpec::rectangular(1.0, 0.0).unwrap();
    let fb = FilterSpec::rectangular(1.6, 0.0).unwrap();
    let j = quadrature::compute_all(&m, &fa, &fb, &QuadratureConfig::with_nodes(512)).unwrap();
    let r = j.j_ab / j.j_a;
    assert!((0.99..=1.0).contains(&r), "{r}");
}

#[test]
fn trapezoid_rule_converges_to_the_same_values() {
    let m = model();
    let fa = FilterSpec::gaussian(1.0, 0.0).unwrap();
    let fb = FilterSpec::gaussian(2.0, 0.0).unwrap();
    let gl = quadrature::compute_all(&m, &fa, &fb, &QuadratureConfig::with_nodes(128)).unwrap();
    let cfg = QuadratureConfig {
        rule: Rule::Trapezoid,
        ..QuadratureConfig::with_nodes(128)
    };
    let tr = quadrature::compute_all(&m, &fa, &fb, &cfg).unwrap();
    assert!(((gl.j_ab - tr.j_ab) / gl.j_ab).abs() < 1e-10);
    assert!(((gl.j4 - tr.j4) / gl.j4).abs() < 1e-10);
}
