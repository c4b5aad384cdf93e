use logarr::derivation::wedge;
use logarr::{CycNum, Field, Poly, RatFunc, VField};
use num_traits::One;

fn x(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

fn rf(p: Poly) -> RatFunc {
    RatFunc::from_poly(p)
}

#[test]
fn apply_examples() {
    let x1_d1 = VField::from_polys(vec![x(2, 0), Poly::zero(2)]);
    let cube = x(2, 0).pow(3);
    assert_eq!(x1_d1.apply_poly(&cube).unwrap(), rf(cube.scale(&CycNum::from_i64(3))));
    let e = VField::euler(3, CycNum::one());
    let f = &(&x(3, 0) * &x(3, 1)) + &x(3, 2).pow(2);
    assert_eq!(e.apply_poly(&f).unwrap(), rf(f.scale(&CycNum::from_i64(2))));
}

#[test]
fn connection_examples() {
    let h = CycNum::from_frac(1, 4);
    let e = VField::euler(2, h.clone());
    let d1 = VField::coordinate(2, 0);
    assert_eq!(d1.nabla(&e).unwrap(), d1.scale(&h));
    let x_dy = VField::from_polys(vec![Poly::zero(2), x(2, 0)]);
    assert_eq!(d1.nabla(&x_dy).unwrap(), VField::coordinate(2, 1));
    assert!(VField::coordinate(2, 1).nabla(&x_dy).unwrap().is_zero());
}

#[test]
fn wedge_examples() {
    let ds: Vec<VField> = (0..3).map(|i| VField::coordinate(3, i)).collect();
    assert_eq!(wedge(&ds).unwrap(), RatFunc::constant(3, CycNum::one()));
    let mut swapped = ds.clone();
    swapped.swap(0, 2);
    assert_eq!(wedge(&swapped).unwrap(), RatFunc::constant(3, CycNum::from_i64(-1)));
    let e = VField::euler(2, CycNum::one());
    let rot = VField::from_polys(vec![x(2, 1).scale(&CycNum::from_i64(-1)), x(2, 0)]);
    assert_eq!(wedge(&[e, rot]).unwrap(), rf(&x(2, 0).pow(2) + &x(2, 1).pow(2)));
}
