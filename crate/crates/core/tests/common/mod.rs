#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use logarr::derivation::{wedge, Frame};
use logarr::group::{self, enumerate};
use logarr::hodge::{self};
use logarr::multiarr::{strictness_witness, member, member_inf, normal_valuations, search_basis};
use logarr::poly::{matrix, monomials_of_degree, poly_valuation, weighted_monomials};
use logarr::universal::{check_universal, phi, TComb};
use logarr::{CycNum, Field, FlatFrame, GroupData, Mult, Poly, RatFunc, VField};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GROUPS: [&str; 6] = ["I2(3)", "I2(4)", "I2(5)", "I2(6)", "A3", "G4"];
pub const RANK2: [&str; 5] = ["I2(3)", "I2(4)", "I2(5)", "I2(6)", "G4"];

pub struct Loaded {
    pub group: GroupData,
    pub frame: FlatFrame,
}

static LOADED: OnceLock<HashMap<&'static str, Loaded>> = OnceLock::new();

pub fn all() -> &'static HashMap<&'static str, Loaded> {
    LOADED.get_or_init(|| {
        use rayon::prelude::*;
        GROUPS
            .par_iter()
            .map(|&name| {
                let group = group::load(name, group::DEFAULT_ELEMENT_CAP).expect("catalog group loads");
                let frame = hodge::flatten(&group).expect("flat frame exists");
                (name, Loaded { group, frame })
            })
            .collect()
    })
}

pub fn get(name: &str) -> &'static Loaded {
    &all()[name]
}

type BasisKey = (&'static str, Vec<i64>);
static BASES: OnceLock<Mutex<HashMap<BasisKey, Vec<VField>>>> = OnceLock::new();

/// Certified basis of `D(A, nu)` from the degree search, cached.
pub fn basis(name: &'static str, nu: &Mult) -> Vec<VField> {
    let key = (name, nu.values().to_vec());
    let cache = BASES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&key) {
        return b.clone();
    }
    let cert = search_basis(nu).expect("free multiplicity");
    assert!(cert.is_basis(), "degree search returned a non-basis for {:?}", nu.values());
    let b = cert.derivations.clone();
    cache.lock().unwrap().insert(key, b.clone());
    b
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pick_group(rng: &mut ChaCha8Rng) -> &'static str {
    // A3 is the slowest; keep it in the pool at a lower rate
    let pool = ["I2(3)", "I2(4)", "I2(5)", "I2(6)", "G4", "I2(4)", "A3"];
    pool.choose(rng).copied().unwrap()
}

pub fn c(n: i64) -> CycNum {
    CycNum::from_i64(n)
}

/// Random homogeneous polynomial with small integer coefficients.
pub fn rand_homogeneous(rng: &mut ChaCha8Rng, nvars: usize, deg: u32, terms: usize) -> Poly {
    let monos = monomials_of_degree(nvars, deg);
    let mut p = Poly::zero(nvars);
    for _ in 0..terms {
        let m = monos.choose(rng).unwrap().clone();
        let v = rng.gen_range(-3..=3);
        p = p + Poly::term(nvars, m, c(v));
    }
    if p.is_zero() {
        p = Poly::term(nvars, monos[0].clone(), c(1));
    }
    p
}

/// `sum_i f_i theta_i` with random homogeneous `f_i` of matching degree.
pub fn rand_member(rng: &mut ChaCha8Rng, basis: &[VField], extra: u32) -> VField {
    let n = basis[0].nvars();
    let top = basis.iter().map(|b| b.pdeg().unwrap()).max().unwrap() + extra as i64;
    let mut out = VField::zero(n);
    for b in basis {
        let d = (top - b.pdeg().unwrap()) as u32;
        let f = rand_homogeneous(rng, n, d, 2);
        out = out.add(&b.mul(&RatFunc::from_poly(f))).unwrap();
    }
    out
}

pub fn rand_omega_mult(rng: &mut ChaCha8Rng, g: &GroupData) -> (i64, i64, Mult) {
    let k = rng.gen_range(-1..=1);
    let s = rng.gen_range(-1..=1);
    (k, s, Mult::omega(&g.hyperplanes, k, s))
}

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// For `mu >= nu` with `mu(H) > nu(H)`, the witness at `H` separates
/// `D(A, mu)` from `D(A, nu)`.
pub fn prop_strictness(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let g = &get(name).group;
    let n = g.hyperplanes.len();
    let nu_vals: Vec<i64> = (0..n).map(|_| r.gen_range(-2..=2)).collect();
    let bump: Vec<i64> = (0..n).map(|_| if r.gen_bool(0.4) { r.gen_range(1..=2) } else { 0 }).collect();
    let nu = Mult::new(g.alphas(), nu_vals.clone()).unwrap();
    let mu = nu.map(|i, v| v + bump[i]);
    for h in 0..n {
        let w = strictness_witness(&nu, h);
        ensure(member(&w, &nu), || format!("{name}: witness {h} not in D(A, {nu_vals:?})"))?;
        if bump[h] > 0 {
            ensure(!member(&w, &mu), || format!("{name}: witness {h} lies in D(A, {:?})", mu.values()))?;
        }
    }
    Ok(())
}

/// `s(g) = eps^k g` forces `alpha_H^k | g`.
pub fn prop_eigen_divisibility(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let g = &get(name).group;
    let n = g.rank;
    let h = g.hyperplanes.choose(&mut r).unwrap().clone();
    if h.e_h < 2 {
        return Ok(());
    }
    // a reflection generating the pointwise stabilizer of H
    let s = g
        .reflections
        .iter()
        .map(|&i| &g.elements[i])
        .find(|w| {
            enumerate::reflecting_form(w).is_some_and(|a| a.proportional(&h.alpha))
                && enumerate::element_order(w, 64) == Some(h.e_h as usize)
        })
        .ok_or_else(|| format!("{name}: no generator of the stabilizer"))?;
    let act = |f: &Poly| f.substitute_linear(&matrix::inverse(s).unwrap()).unwrap();
    let alpha = h.alpha.to_poly();
    let eps = group::quotient_scalar(&act(&alpha), &alpha).ok_or("alpha is not an eigenvector")?;
    let k = r.gen_range(1..h.e_h);
    let deg = r.gen_range(k..=k + 4);
    let f = rand_homogeneous(&mut r, n, deg, 4);
    let eps_inv = eps.inv().unwrap();
    // g = sum_j eps^(-kj) s^j f
    let mut gsum = Poly::zero(n);
    let mut cur = f.clone();
    let mut weight = CycNum::from_i64(1);
    let step = (0..k).fold(CycNum::from_i64(1), |acc, _| acc.mul_ref(&eps_inv));
    for _ in 0..h.e_h {
        gsum = gsum + cur.scale(&weight);
        cur = act(&cur);
        weight = weight.mul_ref(&step);
    }
    let epsk = (0..k).fold(CycNum::from_i64(1), |acc, _| acc.mul_ref(&eps));
    ensure(act(&gsum) == gsum.scale(&epsk), || format!("{name}: averaging failed"))?;
    if gsum.is_zero() {
        return Ok(());
    }
    let v = poly_valuation(&gsum, &h.alpha).unwrap();
    ensure(v >= k, || format!("{name}: valuation {v} < {k}"))
}

/// `Q_- theta` has polynomial coefficients for `theta in D(A, nu)`.
pub fn prop_clearing_poles(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let g = &get(name).group;
    let (_, _, nu) = rand_omega_mult(&mut r, g);
    let b = basis(name, &nu);
    let extra = r.gen_range(0..=2);
    let theta = rand_member(&mut r, &b, extra);
    ensure(member(&theta, &nu), || format!("{name}: combination left D(A, nu)"))?;
    let qm = RatFunc::from_poly(nu.q_data().qminus);
    let cleared = theta.mul(&qm);
    ensure(cleared.has_polynomial_coeffs(), || format!("{name}: Q_- theta has a pole"))
}

/// `theta_1 ^ ... ^ theta_l` lies in `Q(A, nu) S`.
pub fn prop_wedge_divisibility(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let g = &get(name).group;
    let (_, _, nu) = rand_omega_mult(&mut r, g);
    let b = basis(name, &nu);
    let tuple: Vec<VField> = (0..g.rank)
        .map(|_| {
            let e = r.gen_range(0..=1);
            rand_member(&mut r, &b, e)
        })
        .collect();
    let w = wedge(&tuple).unwrap();
    if w.is_zero() {
        return Ok(());
    }
    for (alpha, &v) in nu.arrangement().iter().zip(nu.values()) {
        let val = w.valuation(alpha).unwrap();
        ensure(val >= v, || format!("{name}: wedge valuation {val} < {v}"))?;
    }
    Ok(())
}

/// Pool of fields in `D(A, infinity)`: `E_k`, `Xi^(k)` and witnesses with
/// poles.
pub fn rand_dinf(rng: &mut ChaCha8Rng, name: &'static str) -> VField {
    let l = get(name);
    let f = &l.frame;
    match rng.gen_range(0..3) {
        0 => TComb::euler(f, rng.gen_range(-2..=2)).to_field(f),
        1 => {
            let k = rng.gen_range(-1..=1);
            f.xi(k).fields.choose(rng).unwrap().clone()
        }
        _ => {
            let n = l.group.hyperplanes.len();
            let vals: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=1)).collect();
            let nu = Mult::new(l.group.alphas(), vals).unwrap();
            strictness_witness(&nu, rng.gen_range(0..n))
        }
    }
}

/// `nabla_theta(zeta) in D(A, infinity)` for polynomial `theta`.
pub fn prop_dinf_stability(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let g = &get(name).group;
    let n = g.rank;
    let zeta = rand_dinf(&mut r, name);
    ensure(member_inf(&zeta, &g.alphas()), || format!("{name}: pool field outside D(A, inf)"))?;
    let theta = VField::from_polys(
        (0..n)
            .map(|_| {
                let d = r.gen_range(0..=2);
                rand_homogeneous(&mut r, n, d, 2)
            })
            .collect(),
    );
    let img = phi(&zeta, &theta).unwrap();
    ensure(member_inf(&img, &g.alphas()), || format!("{name}: nabla_theta(zeta) left D(A, inf)"))
}

/// A certified `nu`-universal field has normal valuation exactly
/// `nu(H) + 1` along every hyperplane.
pub fn prop_exact_valuations(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let f = &get(name).frame;
    let k = r.gen_range(-2..=2);
    let scale = c(r.gen_range(1..=5) * if r.gen_bool(0.5) { 1 } else { -1 });
    let zeta = TComb::euler(f, k).to_field(f).scale(&scale);
    let nu = Mult::omega(&f.hyperplanes, -k, 0);
    let cert = check_universal(&zeta, &nu).unwrap();
    ensure(cert.is_universal(), || format!("{name}: E_{k} not universal"))?;
    let vals = normal_valuations(&zeta, nu.arrangement());
    for (v, m) in vals.iter().zip(nu.values()) {
        ensure(*v == Some(m + 1), || format!("{name}: valuation {v:?} vs {}", m + 1))?;
    }
    // and therefore not in D(A, nu + 2) anywhere
    ensure(!member(&zeta, &nu.shift(2)), || format!("{name}: E_{k} in D(A, nu + 2)"))
}

/// `zeta in D(A, nu + 1)` implies `Phi_zeta` maps a basis of `D(A, mu)`
/// into `D(A, nu + mu)`, for `mu = 0` and `mu = 1`. The converse is
/// required only when no normal valuation of `zeta` is exactly zero: at
/// such a hyperplane the leading term of `nabla_theta(zeta)(alpha_H)`
/// carries the factor `valuation` and vanishes (`zeta = d/dx_1` has
/// `Phi_zeta = 0`).
pub fn prop_universal_equivalence(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let l = get(name);
    let n = l.group.rank;
    let zeta = rand_dinf(&mut r, name);
    let shift = r.gen_range(-1..=1);
    // aim nu near the degree of zeta so both outcomes occur
    let base = zeta.pdeg().map_or(0, |p| p - 1);
    let nu = Mult::omega(&l.group.hyperplanes, 0, base + shift);
    let lhs = member(&zeta, &nu.shift(1));
    let use_one = r.gen_bool(0.5);
    let (mu, src): (Mult, Vec<VField>) = if use_one {
        let one = Mult::omega(&l.group.hyperplanes, 0, 1);
        let b = basis(name, &one);
        (one, b)
    } else {
        (Mult::omega(&l.group.hyperplanes, 0, 0), (0..n).map(|i| VField::coordinate(n, i)).collect())
    };
    let target = nu.plus(&mu);
    let rhs = src.iter().all(|t| member(&phi(&zeta, t).unwrap(), &target));
    let degenerate = normal_valuations(&zeta, nu.arrangement()).contains(&Some(0));
    let ok = if degenerate { !lhs || rhs } else { lhs == rhs };
    ensure(ok, || {
        format!("{name}: membership {lhs} but images {rhs} (mu = {})", if use_one { 1 } else { 0 })
    })
}

/// For `nu`-universal `E_k` and random `mu : A -> {0, 1}`, every element of
/// a basis of `D(A, nu + mu)` is a polynomial combination of the images of
/// a basis of `D(A, mu)`.
pub fn prop_surjectivity(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = *RANK2.choose(&mut r).unwrap();
    let l = get(name);
    let f = &l.frame;
    let k = r.gen_range(-1..=1);
    let zeta = TComb::euler(f, k).to_field(f);
    let nu = Mult::omega(&f.hyperplanes, -k, 0);
    let mu = Mult::new(f.alphas(), f.alphas().iter().map(|_| r.gen_range(0..=1)).collect()).unwrap();
    let src = search_basis(&mu).map_err(|e| e.to_string())?;
    ensure(src.is_basis(), || format!("{name}: no basis for Boolean {:?}", mu.values()))?;
    let images: Vec<VField> = src.derivations.iter().map(|t| phi(&zeta, t).unwrap()).collect();
    let target = search_basis(&nu.plus(&mu)).map_err(|e| e.to_string())?;
    let den = wedge(&images).unwrap();
    ensure(!den.is_zero(), || format!("{name}: images are dependent"))?;
    let alphas = f.alphas();
    for b in &target.derivations {
        for j in 0..images.len() {
            let mut cols = images.clone();
            cols[j] = b.clone();
            let c = wedge(&cols).unwrap().try_div(&den, &alphas).map_err(|e| e.to_string())?;
            ensure(c.is_polynomial(), || format!("{name}: coefficient {j} has a pole (k = {k}, mu = {:?})", mu.values()))?;
        }
    }
    Ok(())
}

/// `nabla_D` maps invariant elements of `D(A, -k omega + 1)` into the
/// invariant part of `D(A, -(k+1) omega + 1)`.
pub fn prop_nabla_d_step(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let l = get(name);
    let f = &l.frame;
    let k = r.gen_range(-2..=1);
    let xi = f.xi(k);
    let top = xi.pdegs.iter().max().unwrap() + r.gen_range(0..=f.h as i64);
    let mut theta = VField::zero(f.rank);
    for (field, &p) in xi.fields.iter().zip(&xi.pdegs) {
        let monos = weighted_monomials(&f.degrees, (top - p) as u32);
        let Some(m) = monos.choose(&mut r) else { continue };
        let coeff = f.ring.eval(&Poly::term(f.rank, m.clone(), c(r.gen_range(1..=4))));
        theta = theta.add(&field.mul(&RatFunc::from_poly(coeff))).unwrap();
    }
    if theta.is_zero() {
        return Ok(());
    }
    let next = f.primitive.nabla(&theta).unwrap();
    ensure(member(&next, &f.hodge_mult(k + 1)), || format!("{name}: nabla_D left the next module at k = {k}"))?;
    for g in &f.generators {
        ensure(next.act(g).unwrap() == next, || format!("{name}: nabla_D broke invariance at k = {k}"))?;
    }
    Ok(())
}

/// Leibniz rule for the flat connection.
pub fn prop_leibniz(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let g = &get(name).group;
    let n = g.rank;
    let theta = rand_dinf(&mut r, name);
    let phi_f = rand_dinf(&mut r, name);
    let d = r.gen_range(0..=3);
    let p = RatFunc::from_poly(rand_homogeneous(&mut r, n, d, 3));
    let lhs = theta.nabla(&phi_f.mul(&p)).unwrap();
    let rhs = phi_f.mul(&theta.apply(&p).unwrap()).add(&theta.nabla(&phi_f).unwrap().mul(&p)).unwrap();
    ensure(lhs == rhs, || format!("{name}: Leibniz rule fails"))
}

/// `pdeg(nabla_theta(phi)) = pdeg(theta) + pdeg(phi) - 1` and the stored
/// degree matches a fresh computation.
pub fn prop_pdeg(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let theta = rand_dinf(&mut r, name);
    let phi_f = rand_dinf(&mut r, name);
    let out = theta.nabla(&phi_f).unwrap();
    let degs = get(name).group.degrees.clone();
    ensure(out.pdeg_consistent(&degs), || format!("{name}: stored pdeg is stale"))?;
    if out.is_zero() {
        return Ok(());
    }
    let expect = theta.pdeg().unwrap() + phi_f.pdeg().unwrap() - 1;
    ensure(out.pdeg() == Some(expect), || format!("{name}: pdeg {:?} vs {expect}", out.pdeg()))
}

/// `nabla_(d/dt_i) nabla_(d/dt_j) = nabla_(d/dt_j) nabla_(d/dt_i)`.
pub fn prop_commute(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let l = get(name);
    let n = l.group.rank;
    let i = r.gen_range(0..n);
    let j = r.gen_range(0..n);
    let di = l.frame.chart.partial_t(i);
    let dj = l.frame.chart.partial_t(j);
    let phi_f = if r.gen_bool(0.5) {
        rand_dinf(&mut r, name)
    } else {
        let d = r.gen_range(1..=4);
        VField::from_polys((0..n).map(|_| rand_homogeneous(&mut r, n, d, 2)).collect())
    };
    let a = di.nabla(&dj.nabla(&phi_f).unwrap()).unwrap();
    let b = dj.nabla(&di.nabla(&phi_f).unwrap()).unwrap();
    ensure(a == b, || format!("{name}: d/dt_{i} and d/dt_{j} do not commute"))?;
    // frame round trip
    let back = l.frame.chart.change_frame(&l.frame.chart.change_frame(&phi_f, Frame::T), Frame::X);
    ensure(back == phi_f, || format!("{name}: frame round trip changed the field"))
}

/// The wedge is alternating and multilinear.
pub fn prop_wedge(seed: u64) -> Check {
    let mut r = rng(seed);
    let name = pick_group(&mut r);
    let n = get(name).group.rank;
    let mut fields: Vec<VField> = (0..n).map(|_| rand_dinf(&mut r, name)).collect();
    let w = wedge(&fields).unwrap();
    let extra = rand_dinf(&mut r, name);
    let d = r.gen_range(0..=2);
    let p = RatFunc::from_poly(rand_homogeneous(&mut r, n, d, 2));
    let i = r.gen_range(0..n);
    let mut mixed = fields.clone();
    mixed[i] = fields[i].mul(&p).add(&extra).unwrap();
    let mut only_extra = fields.clone();
    only_extra[i] = extra;
    let lin = &(&w * &p) + &wedge(&only_extra).unwrap();
    ensure(wedge(&mixed).unwrap() == lin, || format!("{name}: wedge not multilinear"))?;
    let j = (i + 1) % n;
    fields.swap(i, j);
    ensure(wedge(&fields).unwrap() == -&w, || format!("{name}: wedge not alternating"))?;
    fields[j] = fields[i].clone();
    ensure(wedge(&fields).unwrap().is_zero(), || format!("{name}: repeated field gives nonzero wedge"))
}

pub const PROPERTIES: [(&str, fn(u64) -> Check); 13] = [
    ("strictness witnesses", prop_strictness),
    ("eigen-averaging divisibility", prop_eigen_divisibility),
    ("Q_- clears poles", prop_clearing_poles),
    ("wedge divisibility", prop_wedge_divisibility),
    ("D(A,inf) stability", prop_dinf_stability),
    ("exact valuations", prop_exact_valuations),
    ("universality equivalence", prop_universal_equivalence),
    ("leibniz", prop_leibniz),
    ("pdeg additivity", prop_pdeg),
    ("d/dt commutation", prop_commute),
    ("wedge alternating", prop_wedge),
    ("Phi_zeta surjectivity", prop_surjectivity),
    ("nabla_D filtration step", prop_nabla_d_step),
];
