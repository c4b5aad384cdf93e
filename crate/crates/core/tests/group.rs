mod common;

use common::{c, get, GROUPS};
use logarr::group::{reynolds, DEFAULT_ELEMENT_CAP};
use logarr::poly::matrix;
use logarr::{CycNum, Error, Field, Poly};

fn counts(name: &str) -> (usize, usize, usize) {
    let g = &get(name).group;
    // reflections counted directly: rank(w - 1) = 1
    let n = g.rank;
    let id: Vec<Vec<CycNum>> = matrix::identity(n);
    let refl = g
        .elements
        .iter()
        .filter(|w| {
            let d: Vec<Vec<CycNum>> =
                (0..n).map(|i| (0..n).map(|j| w[i][j].sub_ref(&id[i][j])).collect()).collect();
            matrix::rank(&d) == 1
        })
        .count();
    (g.order(), refl, g.hyperplanes.len())
}

#[test]
fn b2_elements_are_signed_permutations() {
    let g = &get("I2(4)").group;
    assert_eq!(counts("I2(4)"), (8, 4, 4));
    assert!(g.hyperplanes.iter().all(|h| h.e_h == 2));
    for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        for swap in [false, true] {
            let m = if swap {
                vec![vec![c(0), c(a)], vec![c(b), c(0)]]
            } else {
                vec![vec![c(a), c(0)], vec![c(0), c(b)]]
            };
            assert!(g.contains(&m), "missing {m:?}");
        }
    }
}

#[test]
fn g4_and_a2_counts() {
    assert_eq!(counts("G4"), (24, 8, 4));
    assert!(get("G4").group.hyperplanes.iter().all(|h| h.e_h == 3));
    let a2 = &get("I2(3)").group;
    assert_eq!(counts("I2(3)"), (6, 3, 3));
    assert_eq!((a2.reflections.len() + a2.hyperplanes.len()) / a2.rank, 3);
    assert_eq!(a2.h(), 3);
}

#[test]
fn degrees_match_counting_oracle() {
    // rank 2: d1 d2 = |W| and d1 + d2 = |R| + 2
    for name in ["I2(3)", "I2(4)", "I2(5)", "I2(6)", "G4"] {
        let (order, refl, _) = counts(name);
        let g = &get(name).group;
        let (d1, d2) = (g.degrees[0] as usize, g.degrees[1] as usize);
        assert_eq!(d1 * d2, order, "{name}");
        assert_eq!(d1 + d2, refl + 2, "{name}");
    }
    assert_eq!(get("I2(4)").group.degrees, [2, 4]);
    assert_eq!(get("G4").group.degrees, [4, 6]);
    assert_eq!(get("A3").group.degrees, [2, 3, 4]);
    let (order, refl, _) = counts("A3");
    assert_eq!((order, refl), (24, 6));
}

#[test]
fn coxeter_number_and_coexponents() {
    for name in GROUPS {
        let g = &get(name).group;
        assert_eq!(g.h() as usize * g.rank, g.reflections.len() + g.hyperplanes.len(), "{name}");
        assert_eq!(g.coexponents[0], 1, "{name}: Euler field gives coexponent 1");
        assert_eq!(g.coexponents.iter().sum::<u32>() as usize, g.hyperplanes.len(), "{name}");
        assert!(g.well_generated());
    }
    assert_eq!(get("I2(4)").group.coexponents, [1, 3]);
    assert_eq!(get("G4").group.coexponents, [1, 3]);
    assert_eq!(get("G4").group.exponents(), [3, 5]);
}

#[test]
fn hyperplanes_come_from_reflections() {
    for name in GROUPS {
        let g = &get(name).group;
        for h in &g.hyperplanes {
            assert!(h.e_h >= 2);
            let fixed = g.reflections.iter().any(|&i| {
                logarr::group::enumerate::reflecting_form(&g.elements[i]).is_some_and(|a| a.proportional(&h.alpha))
            });
            assert!(fixed, "{name}: {:?}", h.alpha);
        }
    }
}

#[test]
fn reynolds_examples() {
    let b2 = &get("I2(4)").group;
    let x1 = Poly::var(2, 0);
    let x2 = Poly::var(2, 1);
    let avg = reynolds(&b2.elements, &x1.pow(2));
    assert_eq!(avg, (&x1.pow(2) + &x2.pow(2)).scale(&CycNum::from_frac(1, 2)));
    for name in GROUPS {
        let g = &get(name).group;
        assert_eq!(reynolds(&g.elements, &Poly::one(g.rank)), Poly::one(g.rank));
    }
    assert!(reynolds(&get("I2(3)").group.elements, &x1).is_zero());
}

fn proportional(a: &Poly, b: &Poly) -> bool {
    let (_, la) = a.leading_term().unwrap();
    let (_, lb) = b.leading_term().unwrap();
    *a == b.scale(&la.div_ref(lb).unwrap())
}

#[test]
fn invariants_and_jacobian() {
    for name in GROUPS {
        let g = &get(name).group;
        let inv = g.invariants();
        for (t, d) in inv.iter().zip(&g.degrees) {
            assert_eq!(t.homogeneous_degree(), Some(*d), "{name}");
            for w in &g.generators {
                assert_eq!(t.substitute_linear(w).unwrap(), *t, "{name}");
            }
        }
        let jac: Vec<Vec<Poly>> = inv.iter().map(|t| (0..g.rank).map(|j| t.partial(j)).collect()).collect();
        let det = matrix::poly_det(&jac);
        let lines = g.hyperplanes.iter().fold(Poly::one(g.rank), |acc, h| &acc * &h.alpha.to_poly().pow(h.e_h - 1));
        assert!(proportional(&det, &lines), "{name}");
    }
    let g4 = &get("G4").group;
    let jac: Vec<Vec<Poly>> = g4.invariants().iter().map(|t| (0..2).map(|j| t.partial(j)).collect()).collect();
    assert_eq!(matrix::poly_det(&jac).homogeneous_degree(), Some(8));
}

#[test]
fn reality_follows_characters() {
    for name in GROUPS {
        assert_eq!(get(name).group.is_real(), name != "G4", "{name}");
    }
}

#[test]
fn unknown_group_is_reported() {
    assert!(matches!(logarr::group::load("H7", DEFAULT_ELEMENT_CAP), Err(Error::UnknownGroup(_))));
    assert!(matches!(
        logarr::group::load("A3", 5),
        Err(Error::NotClosedWithinBudget { .. })
    ));
}
