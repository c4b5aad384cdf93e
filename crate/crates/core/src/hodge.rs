//! Flat invariants and flat derivations, the primitive derivation `D`, the
//! fields `xi_j^(k) = nabla_D^k(eta_j)` and the Hodge filtration checks.
//!
//! Polynomials in the flat coordinates `t` are `Poly` values in `l`
//! variables; `t_l` has the top degree `h`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::derivation::{adjugate, Chart, Frame, VField};
use crate::error::{Error, Result};
use crate::group::{quotient_scalar, GroupData, Hyperplane, InvariantRing};
use crate::multiarr::{member, saito_check, BasisCert, Mult};
use crate::poly::{matrix, weighted_monomials, LinForm, Matrix, Monomial, Poly, RatFunc};
use crate::scalar::Field;

/// Flat coordinates and the flat system of invariant derivations.
#[derive(Clone, Debug)]
pub struct FlatFrame<K: Field> {
    pub name: String,
    pub rank: usize,
    pub h: u32,
    pub degrees: Vec<u32>,
    pub coexponents: Vec<u32>,
    /// `t_1, ..., t_l` in `x`; only `t_l` differs from the group invariants.
    pub invariants: Vec<Poly<K>>,
    /// `p(t')` with `t_l(flat) = t_l + p(t')`, in the original coordinates.
    pub correction: Poly<K>,
    pub ring: InvariantRing<K>,
    pub chart: Chart<K>,
    /// `eta_1, ..., eta_l` in the `x` frame, `eta_1` the scaled Euler field.
    pub eta: Vec<VField<K>>,
    /// Rows `eta_l(t), ..., eta_1(t)`, entries polynomials in `t`.
    pub m_eta: Matrix<Poly<K>>,
    /// `M_eta - t_l * 1`, free of `t_l`.
    pub m_prime: Matrix<Poly<K>>,
    /// Diagonal of `B_inf = (1/h) diag(e_i) - 1`.
    pub b_inf: Vec<K>,
    /// `Q(A, omega)` written in the flat coordinates.
    pub delta: Poly<K>,
    /// `delta = c * det M_eta`.
    pub delta_scalar: K,
    pub primitive: VField<K>,
    pub hyperplanes: Vec<Hyperplane<K>>,
    pub generators: Vec<Matrix<K>>,
}

/// `xi_1^(k), ..., xi_l^(k)` in the `x` frame.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct XiBasis<K: Field> {
    pub k: i64,
    pub fields: Vec<VField<K>>,
    pub pdegs: Vec<i64>,
}

enum Unknown {
    A { j: usize, i: usize, mono: Monomial },
    P { mono: Monomial },
}

/// Accumulates polynomial identities `sum_c x_c * poly_c = rhs` as scalar
/// rows, one per monomial.
struct Identities<K: Field> {
    rows: BTreeMap<(usize, Monomial), usize>,
    a: Vec<Vec<K>>,
    b: Vec<K>,
    ncols: usize,
    next_id: usize,
}

impl<K: Field> Identities<K> {
    fn new(ncols: usize) -> Self {
        Identities {
            rows: BTreeMap::new(),
            a: Vec::new(),
            b: Vec::new(),
            ncols,
            next_id: 0,
        }
    }

    fn row(&mut self, id: usize, m: &Monomial) -> usize {
        let key = (id, m.clone());
        if let Some(&r) = self.rows.get(&key) {
            return r;
        }
        self.a.push(vec![K::zero(); self.ncols]);
        self.b.push(K::zero());
        self.rows.insert(key, self.a.len() - 1);
        self.a.len() - 1
    }

    fn push(&mut self, lhs: &[(usize, Poly<K>)], rhs: &Poly<K>) {
        let id = self.next_id;
        self.next_id += 1;
        for (col, p) in lhs {
            for (m, c) in p.terms() {
                let r = self.row(id, m);
                self.a[r][*col] = self.a[r][*col].add_ref(c);
            }
        }
        for (m, c) in rhs.terms() {
            let r = self.row(id, m);
            self.b[r] = self.b[r].add_ref(c);
        }
    }
}

fn t_value<K: Field>(f: &RatFunc<K>, ring: &InvariantRing<K>) -> Result<Poly<K>> {
    ring.to_t(&f.to_poly().ok_or(Error::NotInvariant)?)
}

/// Values `theta(t_m)` of an `x`-frame field, as polynomials in `t`.
fn t_row<K: Field>(theta: &VField<K>, chart: &Chart<K>, ring: &InvariantRing<K>) -> Result<Vec<Poly<K>>> {
    chart
        .change_frame(theta, Frame::T)
        .coeffs()
        .iter()
        .map(|c| t_value(c, ring))
        .collect()
}

fn free_of<K: Field>(p: &Poly<K>, var: usize) -> bool {
    p.terms().all(|(m, _)| m.0[var] == 0)
}

/// Solves for the flat system. Unknowns are the invariant coefficients of
/// `eta_j` over the invariant field basis and the correction `p(t')` of
/// the top invariant; the equations are `D(M_eta) = 1` and
/// `nabla_D(eta_(l+1-i)) = -B_ii d/dt_i` in the corrected coordinates.
pub fn flatten<K: Field>(group: &GroupData<K>) -> Result<FlatFrame<K>> {
    if !group.well_generated() {
        return Err(Error::NoFlatSolution(format!("{} is not well-generated", group.name)));
    }
    let l = group.rank;
    let top = l - 1;
    let h = group.h();
    let degrees = group.degrees.clone();
    let coexp = group.coexponents.clone();
    let ring = &group.ring;
    let chart = &group.chart;
    let d_old = chart.partial_t(top);
    let sigma = &group.field_basis;
    let s: Vec<Vec<Poly<K>>> = sigma.iter().map(|f| t_row(f, chart, ring)).collect::<Result<_>>()?;
    let g: Vec<Vec<Poly<K>>> = sigma
        .iter()
        .map(|f| t_row(&d_old.nabla(f)?, chart, ring))
        .collect::<Result<_>>()?;

    let mut unknowns = Vec::new();
    for j in 1..l {
        for i in 0..l {
            if coexp[j] >= coexp[i] {
                for mono in weighted_monomials(&degrees, coexp[j] - coexp[i]) {
                    unknowns.push(Unknown::A { j, i, mono });
                }
            }
        }
    }
    for mono in weighted_monomials(&degrees, h) {
        if mono.0[top] == 0 {
            unknowns.push(Unknown::P { mono });
        }
    }
    let var_poly = |m: &Monomial| Poly::term(l, m.clone(), K::one());
    let hk = K::from_i64(h as i64);
    let mut sys = Identities::new(unknowns.len());
    for j in 1..l {
        let partner = l - 1 - j;
        let factor = K::one().sub_ref(&K::from_i64(degrees[partner] as i64 - 1).div_ref(&hk).unwrap());
        for m in 0..l {
            let mut lhs_a = Vec::new();
            let mut lhs_b = Vec::new();
            for (col, u) in unknowns.iter().enumerate() {
                match u {
                    Unknown::A { j: jj, i, mono } if *jj == j => {
                        let x = var_poly(mono);
                        lhs_a.push((col, (&x * &s[*i][m]).partial(top)));
                        lhs_b.push((col, &(&x.partial(top) * &s[*i][m]) + &(&x * &g[*i][m])));
                    }
                    Unknown::P { mono } if m == top => {
                        let dp = var_poly(mono).partial(partner);
                        lhs_a.push((col, dp.clone()));
                        lhs_b.push((col, dp.scale(&factor)));
                    }
                    _ => {}
                }
            }
            let delta = if m == partner { Poly::one(l) } else { Poly::zero(l) };
            sys.push(&lhs_a, &delta);
            sys.push(&lhs_b, &delta.scale(&factor));
        }
    }
    let (sol, kernel) = matrix::solve_affine(&sys.a, &sys.b, unknowns.len())
        .ok_or_else(|| Error::NoFlatSolution(format!("{}: inconsistent flatness equations", group.name)))?;
    if !kernel.is_empty() {
        return Err(Error::NonUniqueSolution(kernel.len()));
    }

    let mut a = vec![vec![Poly::zero(l); l]; l];
    let mut correction = Poly::zero(l);
    for (u, c) in unknowns.iter().zip(sol) {
        match u {
            Unknown::A { j, i, mono } => a[*j][*i] = &a[*j][*i] + &Poly::term(l, mono.clone(), c),
            Unknown::P { mono } => correction = &correction + &Poly::term(l, mono.clone(), c),
        }
    }
    let hinv = hk.inv().unwrap();
    let mut eta = vec![VField::euler(l, hinv.clone())];
    for row in a.iter().skip(1) {
        let mut f = VField::zero(l);
        for (coef, sig) in row.iter().zip(sigma) {
            if !coef.is_zero() {
                f = f.add(&sig.mul(&ring.eval_rat(coef)))?;
            }
        }
        eta.push(f);
    }
    let mut invariants = group.invariants().to_vec();
    invariants[top] = &invariants[top] + &ring.eval(&correction);
    let alphas: Vec<LinForm<K>> = group.alphas();
    let new_ring = InvariantRing::new(invariants.clone());
    let new_chart = Chart::new(invariants.clone(), &alphas)?;
    let m_eta: Matrix<Poly<K>> = (0..l)
        .map(|r| t_row(&eta[l - 1 - r], &new_chart, &new_ring))
        .collect::<Result<_>>()?;
    let t_top = Poly::var(l, top);
    let m_prime: Matrix<Poly<K>> = (0..l)
        .map(|r| (0..l).map(|m| if r == m { &m_eta[r][m] - &t_top } else { m_eta[r][m].clone() }).collect())
        .collect();
    if !m_prime.iter().flatten().all(|p| free_of(p, top)) {
        return Err(Error::NoFlatSolution(format!("{}: Saito matrix lacks the flat shape", group.name)));
    }
    let delta = new_ring.to_t(&group.q_omega())?;
    let det = matrix::poly_det(&m_eta);
    let delta_scalar = quotient_scalar(&delta, &det)
        .ok_or_else(|| Error::NoFlatSolution(format!("{}: det M_eta is not the discriminant", group.name)))?;
    let primitive = new_chart.partial_t(top);
    Ok(FlatFrame {
        name: group.name.clone(),
        rank: l,
        h,
        degrees,
        coexponents: coexp,
        invariants,
        correction,
        ring: new_ring,
        chart: new_chart,
        eta,
        m_eta,
        m_prime,
        b_inf: group.b_inf(),
        delta,
        delta_scalar,
        primitive,
        hyperplanes: group.hyperplanes.clone(),
        generators: group.generators.clone(),
    })
}

fn pmat_mul<K: Field>(a: &[Vec<Poly<K>>], b: &[Vec<Poly<K>>]) -> Matrix<Poly<K>> {
    let nv = a[0][0].nvars();
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(Poly::zero(nv), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

fn scale_rows<K: Field>(diag: &[K], m: &[Vec<Poly<K>>]) -> Matrix<Poly<K>> {
    m.iter().zip(diag).map(|(row, c)| row.iter().map(|p| p.scale(c)).collect()).collect()
}

impl<K: Field> FlatFrame<K> {
    pub fn alphas(&self) -> Vec<LinForm<K>> {
        self.hyperplanes.iter().map(|h| h.alpha.clone()).collect()
    }

    /// `eta` in the flat `t` frame.
    pub fn eta_t(&self) -> Vec<VField<K>> {
        self.eta.iter().map(|f| self.chart.change_frame(f, Frame::T)).collect()
    }

    /// `D(M_eta) = 1`.
    pub fn shape_holds(&self) -> bool {
        let top = self.rank - 1;
        (0..self.rank).all(|r| {
            (0..self.rank).all(|m| {
                let d = self.m_eta[r][m].partial(top);
                if r == m {
                    d.is_one()
                } else {
                    d.is_zero()
                }
            })
        })
    }

    /// `eta_1 = (1/h) sum d_i t_i d/dt_i` in the flat frame.
    pub fn eta1_is_euler(&self) -> bool {
        let l = self.rank;
        let hk = K::from_i64(self.h as i64);
        (0..l).all(|m| {
            let expect = Poly::var(l, m).scale(&K::from_i64(self.degrees[m] as i64).div_ref(&hk).unwrap());
            self.m_eta[l - 1][m] == expect
        })
    }

    /// `det M_eta` has leading coefficient 1 and degree `l` in `t_l`, and
    /// `delta` is a constant multiple of it.
    pub fn discriminant_monic(&self) -> bool {
        let top = self.rank - 1;
        let det = matrix::poly_det(&self.m_eta);
        let mut lead = vec![0u32; self.rank];
        lead[top] = self.rank as u32;
        det.terms().all(|(m, _)| m.0[top] <= self.rank as u32) && det.coefficient(&Monomial(lead)).is_one()
    }

    /// `B_inf + k` has no zero on its diagonal for `|k| <= bound`.
    pub fn shifts_invertible(&self, bound: i64) -> bool {
        (-bound..=bound).all(|k| self.b_inf.iter().all(|b| !b.add_ref(&K::from_i64(k)).is_zero()))
    }

    fn b_shift(&self, k: i64) -> Vec<K> {
        self.b_inf.iter().map(|b| b.add_ref(&K::from_i64(k))).collect()
    }

    /// `(P, s)` with `nabla_D^k(dt) = (P / det(M)^s) dt`.
    pub fn n_matrix(&self, k: i64) -> (Matrix<Poly<K>>, u32) {
        let l = self.rank;
        let mut p: Matrix<Poly<K>> =
            (0..l).map(|i| (0..l).map(|j| if i == j { Poly::one(l) } else { Poly::zero(l) }).collect()).collect();
        let mut s = 0;
        if k > 0 {
            let adj = adjugate(&self.m_eta);
            for step in 1..=k {
                let neg: Vec<K> = self.b_shift(step).iter().map(K::neg_ref).collect();
                p = pmat_mul(&adj, &scale_rows(&neg, &p));
                s += 1;
            }
        } else {
            for step in (k..0).rev() {
                let inv: Vec<K> = self.b_shift(step + 1).iter().map(|b| b.inv().unwrap().neg_ref()).collect();
                p = scale_rows(&inv, &pmat_mul(&self.m_eta, &p));
            }
        }
        (p, s)
    }

    /// Coefficients of `xi^(k)` (rows `xi_l, ..., xi_1`) on `dt`, over
    /// `det(M)^s`.
    pub fn xi_coefficients(&self, k: i64) -> (Matrix<Poly<K>>, u32) {
        let (p, s) = self.n_matrix(k - 1);
        let neg: Vec<K> = self.b_inf.iter().map(K::neg_ref).collect();
        (scale_rows(&neg, &p), s)
    }

    /// `1 / det(M_eta)(t(x))^s` as a rational function of `x`.
    pub(crate) fn det_power_inverse(&self, s: u32) -> RatFunc<K> {
        let l = self.rank;
        let den: Vec<(LinForm<K>, u32)> = self
            .hyperplanes
            .iter()
            .filter(|_| s > 0)
            .map(|h| (h.alpha.clone(), h.e_h * s))
            .collect();
        let mut c = K::one();
        for _ in 0..s {
            c = c.mul_ref(&self.delta_scalar);
        }
        RatFunc::new(Poly::constant(l, c), den)
    }

    /// Field `sum_m coeffs[m](t(x)) * scale * d/dt_m` in the `x` frame.
    pub(crate) fn combine(&self, coeffs: &[Poly<K>], scale: &RatFunc<K>) -> VField<K> {
        let l = self.rank;
        let mut out = vec![RatFunc::zero(l); l];
        for (m, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let f = &self.ring.eval_rat(c) * scale;
            let dt = self.chart.partial_t(m);
            for (o, d) in out.iter_mut().zip(dt.coeffs()) {
                *o = &*o + &(&f * d);
            }
        }
        VField::new(out)
    }

    /// `Xi^(k)` through the one-step matrices.
    pub fn xi(&self, k: i64) -> XiBasis<K> {
        let l = self.rank;
        let (c, s) = self.xi_coefficients(k);
        let scale = self.det_power_inverse(s);
        let mut fields: Vec<VField<K>> = (0..l).map(|r| self.combine(&c[r], &scale)).collect();
        fields.reverse();
        let pdegs = self.expected_pdegs(k);
        XiBasis { k, fields, pdegs }
    }

    /// `Xi^(k)` by iterating `nabla_D` on `eta`; `k >= 0`.
    pub fn xi_direct(&self, k: i64) -> Result<XiBasis<K>> {
        if k < 0 {
            return Err(Error::OutOfRange(format!("direct route needs k >= 0, got {k}")));
        }
        let mut fields = self.eta.clone();
        for _ in 0..k {
            fields = fields.iter().map(|f| self.primitive.nabla(f)).collect::<Result<_>>()?;
        }
        Ok(XiBasis {
            k,
            fields,
            pdegs: self.expected_pdegs(k),
        })
    }

    /// `e_j* - k h`.
    pub fn expected_pdegs(&self, k: i64) -> Vec<i64> {
        self.coexponents.iter().map(|&e| e as i64 - k * self.h as i64).collect()
    }

    /// `-k omega + 1`.
    pub fn hodge_mult(&self, k: i64) -> Mult<K> {
        Mult::omega(&self.hyperplanes, -k, 1)
    }

    /// `t_l * xi^(k)` over `xi^(k-1)` and `xi^(k)` with coefficients in `T`.
    pub fn decompose(&self, k: i64, k_min: i64, k_max: i64) -> Result<Decomposition<K>> {
        if k - 1 < k_min || k > k_max {
            return Err(Error::WindowTooSmall {
                k_min,
                k_max,
                required: if k > k_max { k } else { k - 1 },
            });
        }
        let l = self.rank;
        let top = l - 1;
        let prev: Vec<K> = self.b_shift(k - 1).iter().map(K::neg_ref).collect();
        // -B M' B^-1
        let same: Matrix<Poly<K>> = (0..l)
            .map(|r| {
                (0..l)
                    .map(|m| {
                        let c = self.b_inf[r].mul_ref(&self.b_inf[m].inv().unwrap()).neg_ref();
                        self.m_prime[r][m].scale(&c)
                    })
                    .collect()
            })
            .collect();
        let coeffs_in_t = same.iter().flatten().all(|p| free_of(p, top));
        let cur = self.xi(k).fields;
        let before = self.xi(k - 1).fields;
        // rows are indexed l..1, fields 1..l
        let row_field = |v: &[VField<K>], r: usize| v[l - 1 - r].clone();
        let t_top = self.ring.eval_rat(&Poly::var(l, top));
        let mut verified = true;
        for r in 0..l {
            let mut lhs = row_field(&cur, r).mul(&t_top);
            lhs = lhs.sub(&row_field(&before, r).scale(&prev[r]))?;
            for (m, c) in same[r].iter().enumerate() {
                if !c.is_zero() {
                    lhs = lhs.sub(&row_field(&cur, m).mul(&self.ring.eval_rat(c)))?;
                }
            }
            verified &= lhs.is_zero();
        }
        Ok(Decomposition {
            k,
            depth: 1,
            prev_coeffs: prev,
            same_coeffs: same,
            coeffs_in_t,
            verified,
        })
    }

    /// Stacks `Xi^(p)` for `p` in the window as vectors over `T` (powers of
    /// `t_l` split into separate columns) and returns a nonzero maximal
    /// minor when they are `T`-independent.
    pub fn t_independence_minor(&self, k_min: i64, k_max: i64) -> Option<Poly<K>> {
        let l = self.rank;
        let top = l - 1;
        let blocks: Vec<(Matrix<Poly<K>>, u32)> = (k_min..=k_max).map(|k| self.xi_coefficients(k)).collect();
        let smax = blocks.iter().map(|(_, s)| *s).max().unwrap_or(0);
        let det = matrix::poly_det(&self.m_eta);
        let rows: Vec<Vec<Poly<K>>> = blocks
            .iter()
            .flat_map(|(c, s)| {
                let f = det.pow(smax - s);
                c.iter().map(move |row| row.iter().map(|p| p * &f).collect::<Vec<_>>()).collect::<Vec<_>>()
            })
            .collect();
        let max_pow = rows
            .iter()
            .flatten()
            .flat_map(|p| p.terms().map(|(m, _)| m.0[top]))
            .max()
            .unwrap_or(0) as usize;
        let ncols = l * (max_pow + 1);
        let expanded: Vec<Vec<Poly<K>>> = rows
            .iter()
            .map(|row| {
                let mut out = vec![Poly::zero(l); ncols];
                for (m, p) in row.iter().enumerate() {
                    for (mono, c) in p.terms() {
                        let a = mono.0[top] as usize;
                        let mut e = mono.clone();
                        e.0[top] = 0;
                        let idx = m * (max_pow + 1) + a;
                        out[idx] = &out[idx] + &Poly::term(l, e, c.clone());
                    }
                }
                out
            })
            .collect();
        matrix::bareiss(expanded, ncols).1
    }
}

/// `t_l xi^(k) = prev * xi^(k-1) + same * xi^(k)` row-wise (rows indexed
/// `l, ..., 1`), checked exactly in the `x` frame.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct Decomposition<K: Field> {
    pub k: i64,
    pub depth: u32,
    /// Diagonal of the coefficient matrix on `xi^(k-1)`.
    pub prev_coeffs: Vec<K>,
    pub same_coeffs: Matrix<Poly<K>>,
    pub coeffs_in_t: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct HodgeRecord<K: Field> {
    pub k: i64,
    pub membership: Vec<bool>,
    pub invariance: Vec<bool>,
    pub basis_cert: BasisCert<K>,
    pub exponents: Vec<i64>,
    pub expected_exponents: Vec<i64>,
    /// Minor certifying `T`-independence of the window from `k_min` to `k`.
    pub t_independence_minor: Option<Poly<K>>,
    pub decomposition: Option<Decomposition<K>>,
    pub decomposition_depth: Option<u32>,
    /// `nabla_D(xi_j^(k)) = xi_j^(k+1)` and `xi^(k)` lies in the next module.
    pub filtration_step: Option<bool>,
    /// Direct iteration agrees with the matrix route (`k >= 1`).
    pub routes_agree: Option<bool>,
    /// `xi_j^(1) = c_j d/dt_(l+1-j)` with the recorded scalars.
    pub partial_t_scalars: Option<Vec<Option<K>>>,
}

impl<K: Field> HodgeRecord<K> {
    pub fn passed(&self) -> bool {
        self.membership.iter().all(|&b| b)
            && self.invariance.iter().all(|&b| b)
            && self.basis_cert.is_basis()
            && self.basis_cert.routes_agree()
            && self.exponents == self.expected_exponents
            && self.t_independence_minor.is_some()
            && self.decomposition.as_ref().map_or(true, |d| d.verified && d.coeffs_in_t)
            && self.filtration_step.unwrap_or(true)
            && self.routes_agree.unwrap_or(true)
            && self
                .partial_t_scalars
                .as_ref()
                .map_or(true, |v| v.iter().all(Option::is_some))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct HodgeReport<K: Field> {
    pub group: String,
    pub k_min: i64,
    pub k_max: i64,
    pub flat_shape: bool,
    pub eta1_euler: bool,
    pub discriminant_monic: bool,
    pub records: Vec<HodgeRecord<K>>,
}

impl<K: Field> HodgeReport<K> {
    pub fn all_pass(&self) -> bool {
        self.flat_shape && self.eta1_euler && self.discriminant_monic && self.records.iter().all(HodgeRecord::passed)
    }
}

/// The scalar `c` with `a = c * b`, if there is one.
pub fn field_ratio<K: Field>(a: &VField<K>, b: &VField<K>) -> Option<K> {
    if a.frame() != b.frame() {
        return None;
    }
    let (i, bi) = b.coeffs().iter().enumerate().find(|(_, c)| !c.is_zero())?;
    // reduced forms share denominators, so compare leading coefficients
    let (_, la) = a.coeffs()[i].num().leading_term()?;
    let (_, lb) = bi.num().leading_term()?;
    let c = la.div_ref(lb)?;
    (*a == b.scale(&c)).then_some(c)
}

fn hodge_record<K: Field>(frame: &FlatFrame<K>, k: i64, k_min: i64, k_max: i64) -> Result<HodgeRecord<K>> {
    let l = frame.rank;
    let xi = frame.xi(k);
    let nu = frame.hodge_mult(k);
    let membership = xi.fields.par_iter().map(|f| member(f, &nu)).collect();
    let invariance = xi
        .fields
        .iter()
        .map(|f| frame.generators.iter().all(|w| f.act(w).map_or(false, |g| g == *f)))
        .collect();
    let basis_cert = saito_check(&xi.fields, &nu)?;
    let exponents = basis_cert.exponents().unwrap_or_default();
    let mut expected_exponents = xi.pdegs.clone();
    expected_exponents.sort_unstable();
    let t_independence_minor = frame.t_independence_minor(k_min, k);
    let decomposition = if k > k_min { Some(frame.decompose(k, k_min, k_max)?) } else { None };
    let decomposition_depth = decomposition.as_ref().map(|d| d.depth);
    let filtration_step = if k < k_max {
        let next = frame.xi(k + 1);
        let up = frame.hodge_mult(k + 1);
        let mut ok = true;
        for (f, g) in xi.fields.iter().zip(&next.fields) {
            ok &= frame.primitive.nabla(f)? == *g && member(f, &up);
        }
        Some(ok)
    } else {
        None
    };
    let routes_agree = if (1..=3).contains(&k) {
        Some(frame.xi_direct(k)?.fields == xi.fields)
    } else {
        None
    };
    let partial_t_scalars = (k == 1).then(|| {
        (0..l)
            .map(|j| field_ratio(&xi.fields[j], &frame.chart.partial_t(l - 1 - j)))
            .collect()
    });
    Ok(HodgeRecord {
        k,
        membership,
        invariance,
        basis_cert,
        exponents,
        expected_exponents,
        t_independence_minor,
        decomposition,
        decomposition_depth,
        filtration_step,
        routes_agree,
        partial_t_scalars,
    })
}

/// Hodge filtration checks for every `k` in `[k_min, k_max]`.
pub fn verify_hodge<K: Field>(frame: &FlatFrame<K>, k_min: i64, k_max: i64) -> Result<HodgeReport<K>> {
    if k_min > k_max {
        return Err(Error::OutOfRange(format!("empty window [{k_min}, {k_max}]")));
    }
    let records = (k_min..=k_max)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&k| hodge_record(frame, k, k_min, k_max))
        .collect::<Result<Vec<_>>>()?;
    Ok(HodgeReport {
        group: frame.name.clone(),
        k_min,
        k_max,
        flat_shape: frame.shape_holds(),
        eta1_euler: frame.eta1_is_euler(),
        discriminant_monic: frame.discriminant_monic(),
        records,
    })
}

/// Default window of `k`: `[-2, 2]` up to rank 3, `[-1, 1]` beyond.
pub fn default_window(rank: usize) -> (i64, i64) {
    if rank <= 3 {
        (-2, 2)
    } else {
        (-1, 1)
    }
}
