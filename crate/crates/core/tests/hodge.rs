mod common;

use common::{get, GROUPS, RANK2};
use logarr::derivation::{wedge, Frame};
use logarr::multiarr::saito_check;
use logarr::poly::matrix;
use logarr::{CycNum, Error, Field, FlatFrame, Poly, RatFunc, VField};
use rand::Rng;

fn x_frame(f: &FlatFrame, v: &VField) -> VField {
    f.chart.change_frame(v, Frame::X)
}

/// `D(g) = det d(t_1, ..., t_(l-1), g)/dx / det d(t)/dx`.
fn primitive_by_determinant(f: &FlatFrame, g: &Poly) -> RatFunc {
    let l = f.rank;
    let row = |p: &Poly| (0..l).map(|j| p.partial(j)).collect::<Vec<_>>();
    let mut num: Vec<Vec<Poly>> = f.invariants[..l - 1].iter().map(row).collect();
    num.push(row(g));
    let den: Vec<Vec<Poly>> = f.invariants.iter().map(row).collect();
    let alphas = f.alphas();
    RatFunc::from_poly(matrix::poly_det(&num))
        .try_div(&RatFunc::from_poly(matrix::poly_det(&den)), &alphas)
        .unwrap()
}

#[test]
fn primitive_field_is_d_dt_top() {
    for name in GROUPS {
        let f = &get(name).frame;
        let l = f.rank;
        for (i, t) in f.invariants.iter().enumerate() {
            let v = f.primitive.apply_poly(t).unwrap();
            let expect = if i == l - 1 { 1 } else { 0 };
            assert_eq!(v, RatFunc::constant(l, CycNum::from_i64(expect)), "{name} t_{}", i + 1);
        }
        let mut r = common::rng(3);
        for _ in 0..5 {
            let d = r.gen_range(1..=5);
            let g = common::rand_homogeneous(&mut r, l, d, 3);
            assert_eq!(f.primitive.apply_poly(&g).unwrap(), primitive_by_determinant(f, &g), "{name}");
        }
        assert_eq!(f.primitive.pdeg(), Some(1 - f.h as i64), "{name}");
    }
    assert_eq!(get("I2(4)").frame.primitive.pdeg(), Some(-3));
    assert_eq!(get("G4").frame.primitive.pdeg(), Some(-5));
}

#[test]
fn flat_shape() {
    for name in GROUPS {
        let f = &get(name).frame;
        let l = f.rank;
        let top = l - 1;
        assert!(f.shape_holds() && f.eta1_is_euler() && f.discriminant_monic(), "{name}");
        for (r, row) in f.m_eta.iter().enumerate() {
            for (m, p) in row.iter().enumerate() {
                let expect = if r == m { Poly::one(l) } else { Poly::zero(l) };
                assert_eq!(p.partial(top), expect, "{name}: D(M_eta) at ({r}, {m})");
                assert!(f.m_prime[r][m].terms().all(|(mono, _)| mono.0[top] == 0));
            }
        }
        let pd: Vec<i64> = f.eta.iter().map(|e| e.pdeg().unwrap()).collect();
        let expect: Vec<i64> = f.coexponents.iter().map(|&e| e as i64).collect();
        assert_eq!(pd, expect, "{name}");
        let euler = VField::euler(l, CycNum::from_frac(1, f.h as i64));
        assert_eq!(x_frame(f, &f.eta[0]), euler, "{name}");
    }
    let g4 = &get("G4").frame;
    assert!(g4.m_prime.iter().flatten().all(|p| p.terms().all(|(m, _)| m.0[1] == 0)));
}

#[test]
fn euler_in_t_frame() {
    for name in GROUPS {
        let f = &get(name).frame;
        let l = f.rank;
        let h = CycNum::from_frac(1, f.h as i64);
        let euler = VField::euler(l, h.clone());
        let coeffs = (0..l)
            .map(|i| RatFunc::from_poly(f.invariants[i].scale(&h.mul_ref(&CycNum::from_i64(f.degrees[i] as i64)))))
            .collect();
        let in_t = VField::new_t(coeffs, &f.degrees);
        assert_eq!(f.chart.change_frame(&euler, Frame::T), in_t, "{name}");
        assert_eq!(x_frame(f, &in_t), euler, "{name}");
    }
}

#[test]
fn xi_zero_is_eta_and_xi_one_is_dt() {
    for name in GROUPS {
        let f = &get(name).frame;
        let l = f.rank;
        let eta: Vec<VField> = f.eta.iter().map(|e| x_frame(f, e)).collect();
        assert_eq!(f.xi(0).fields, eta, "{name}");
        for (j, xi) in f.xi(1).fields.iter().enumerate() {
            let dt = x_frame(f, &f.chart.partial_t(l - 1 - j));
            let c = logarr::hodge::field_ratio(xi, &dt).expect("proportional");
            assert_eq!(*xi, dt.scale(&c));
        }
    }
}

#[test]
fn b2_and_g4_exponents() {
    let b2 = &get("I2(4)").frame;
    let xi = b2.xi(-1);
    let mut p = xi.pdegs.clone();
    p.sort_unstable();
    assert_eq!(p, [5, 7]);
    let nu = b2.hodge_mult(-1);
    assert!(nu.values().iter().all(|&v| v == 3));
    assert!(saito_check(&xi.fields, &nu).unwrap().is_basis());
    for k in -2..=2 {
        let cert = saito_check(&b2.xi(k).fields, &b2.hodge_mult(k)).unwrap();
        assert_eq!(cert.exponents().unwrap(), [1 - 4 * k, 3 - 4 * k]);
    }
    let g4 = &get("G4").frame;
    let cert = saito_check(&g4.xi(1).fields, &g4.hodge_mult(1)).unwrap();
    assert_eq!(cert.exponents().unwrap(), [-5, -3]);
}

#[test]
fn degree_sum_matches_multiplicity() {
    for name in GROUPS {
        let f = &get(name).frame;
        for k in -2..=2 {
            let sum: i64 = f.xi(k).pdegs.iter().sum();
            let l = f.rank as i64;
            assert_eq!(sum, -k * l * f.h as i64 + f.hyperplanes.len() as i64, "{name} k={k}");
            assert_eq!(sum, f.hodge_mult(k).size());
        }
    }
}

#[test]
fn wedge_of_eta_is_q() {
    let f = &get("I2(4)").frame;
    let w = wedge(&f.xi(0).fields).unwrap();
    let q = f.hyperplanes.iter().fold(Poly::one(2), |acc, h| &acc * &h.alpha.to_poly());
    let c = w.try_div(&RatFunc::from_poly(q), &f.alphas()).unwrap().constant_value();
    assert!(c.is_some_and(|c| !num_traits::Zero::is_zero(&c)));
}

#[test]
fn recursion_routes_agree() {
    for name in RANK2 {
        let f = &get(name).frame;
        for k in 1..=3 {
            assert_eq!(f.xi_direct(k).unwrap().fields, f.xi(k).fields, "{name} k={k}");
        }
    }
}

#[test]
fn nabla_d_steps_through_the_filtration() {
    for name in GROUPS {
        let f = &get(name).frame;
        for k in -2..2 {
            let next: Vec<VField> = f.xi(k).fields.iter().map(|x| f.primitive.nabla(x).unwrap()).collect();
            assert_eq!(next, f.xi(k + 1).fields, "{name} k={k}");
        }
    }
}

#[test]
fn decomposition_needs_the_previous_level() {
    let f = &get("I2(4)").frame;
    assert!(matches!(f.decompose(-2, -2, 2), Err(Error::WindowTooSmall { .. })));
    assert!(matches!(f.decompose(3, -2, 2), Err(Error::WindowTooSmall { .. })));
    let d = f.decompose(0, -2, 2).unwrap();
    assert!(d.verified && d.coeffs_in_t && d.depth == 1);
}
