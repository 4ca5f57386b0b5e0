//! Floating-point witnesses for the exact minimal polynomials.

use modvals::basis::{BasisFamily, LevelConfig};
use modvals::exactfield::int;
use modvals::forms::build_form;
use modvals::minpoly::minimal_polynomial;
use modvals::numeric::{eval_series, locate_zeros, verify_minpoly, ZeroSearch};

#[test]
fn level11_values_solve_the_exact_quadratic() {
    let fam = BasisFamily::from_config(&LevelConfig::shipped(11).unwrap(), 80, 6).unwrap();
    let f = build_form("example6_1", 11, 80, None, &Default::default(), None).unwrap().input;
    let z = locate_zeros(&f.series, 11, 2, &ZeroSearch::default()).unwrap();
    for p in &z {
        assert!((p.re.abs() - 0.22727).abs() < 1e-4 && (p.im - 0.19813).abs() < 1e-4, "{p}");
        assert!(eval_series(&f.series, *p).unwrap().value.norm() < 1e-8);
    }
    let exact = minimal_polynomial(&f, &fam, 2, None).unwrap();
    let check = verify_minpoly(&z, &fam.element(2).unwrap(), &exact.coeffs, 1e-5).unwrap();
    assert!(check.ok, "{check:?}");
    // X² + 22X + 233 misses both values by 36
    let other = verify_minpoly(&z, &fam.element(2).unwrap(), &[int(233), int(22), int(1)], 1e-5).unwrap();
    assert!((other.max_residual - 36.0).abs() < 1e-6, "{other:?}");
}

#[test]
fn level27_values_are_cube_roots_of_nine() {
    // the zeros sit at Im τ ≈ 0.032, so the floor drops and the precision rises
    let prec = 1700;
    let fam = BasisFamily::from_config(&LevelConfig::shipped(27).unwrap(), prec, 3).unwrap();
    let f = build_form("example6_3", 27, prec, None, &Default::default(), None).unwrap().input;
    let z = locate_zeros(&f.series, 27, 3, &ZeroSearch { floor: 0.02, ..Default::default() }).unwrap();
    let c = verify_minpoly(&z, &fam.element(2).unwrap(), &[int(-9), int(0), int(0), int(1)], 1e-5).unwrap();
    assert!(c.ok, "{c:?}");
    let c = verify_minpoly(&z, &fam.element(3).unwrap(), &[int(0), int(0), int(0), int(1)], 1e-5).unwrap();
    assert!(c.ok, "{c:?}");
    // the default floor misses them
    assert!(locate_zeros(&f.series, 27, 3, &ZeroSearch::default()).is_err());
}
