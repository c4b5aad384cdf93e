//! Universal vector fields: the map `Phi_zeta(theta) = nabla_theta(zeta)`,
//! universality certificates, transport of bases across multiplicities and
//! the shift by `nabla_D^-1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::derivation::{Frame, VField};
use crate::error::{Error, Result};
use crate::group::{GroupData, Hyperplane};
use crate::hodge::FlatFrame;
use crate::multiarr::{member, normal_valuations, saito_check, search_basis, strictness_witness, BasisCert, Mult};
use crate::poly::{ratfunc_det, Matrix, Poly, RatFunc};
use crate::scalar::Field;

/// `Phi_zeta(theta) = nabla_theta(zeta)`.
pub fn phi<K: Field>(zeta: &VField<K>, theta: &VField<K>) -> Result<VField<K>> {
    if theta.frame() != Frame::X {
        return Err(Error::FrameMismatch {
            expected: Frame::X.to_string(),
            found: theta.frame().to_string(),
        });
    }
    theta.nabla(zeta)
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct UniversalCert<K: Field> {
    pub zeta: VField<K>,
    pub nu: Mult<K>,
    /// `nabla_(d/dx_i)(zeta)`.
    pub images: Vec<VField<K>>,
    pub basis_cert: BasisCert<K>,
    /// `zeta in D(A, nu + 1)`.
    pub member_next: bool,
    /// `valuation(zeta(alpha_H), alpha_H)`; exactness at `nu(H) + 1` rules
    /// out `zeta in D(A, mu + 1)` for every `mu > nu`.
    pub maximality_witness: Vec<Option<i64>>,
    pub valuations_exact: bool,
}

impl<K: Field> UniversalCert<K> {
    pub fn is_universal(&self) -> bool {
        self.member_next && self.valuations_exact && self.basis_cert.is_basis()
    }
}

pub fn check_universal<K: Field>(zeta: &VField<K>, nu: &Mult<K>) -> Result<UniversalCert<K>> {
    let n = zeta.nvars();
    let images = (0..n)
        .into_par_iter()
        .map(|i| phi(zeta, &VField::coordinate(n, i)))
        .collect::<Result<Vec<_>>>()?;
    let basis_cert = saito_check(&images, nu)?;
    let member_next = member(zeta, &nu.shift(1));
    let maximality_witness = normal_valuations(zeta, nu.arrangement());
    let valuations_exact = maximality_witness
        .iter()
        .zip(nu.values())
        .all(|(v, &m)| *v == Some(m + 1));
    Ok(UniversalCert {
        zeta: zeta.clone(),
        nu: nu.clone(),
        images,
        basis_cert,
        member_next,
        maximality_witness,
        valuations_exact,
    })
}

/// `-omega + 1 <= mu <= 1` pointwise.
pub fn in_transport_range<K: Field>(mu: &Mult<K>, hyperplanes: &[Hyperplane<K>]) -> bool {
    mu.values()
        .iter()
        .zip(hyperplanes)
        .all(|(&m, h)| m <= 1 && m >= 1 - h.e_h as i64)
}

/// Images of a certified basis of `D(A, mu)` under `Phi_zeta`, certified
/// against `D(A, nu + mu)`.
pub fn transported_basis<K: Field>(
    cert: &UniversalCert<K>,
    mu: &Mult<K>,
    hyperplanes: &[Hyperplane<K>],
    source: Option<&[VField<K>]>,
) -> Result<BasisCert<K>> {
    if !in_transport_range(mu, hyperplanes) {
        return Err(Error::OutOfRange(format!("{:?} is outside [-omega + 1, 1]", mu.values())));
    }
    let source = source.ok_or(Error::MissingSourceBasis)?;
    if !saito_check(source, mu)?.is_basis() {
        return Err(Error::NotABasis);
    }
    let images = source
        .par_iter()
        .map(|theta| phi(&cert.zeta, theta))
        .collect::<Result<Vec<_>>>()?;
    saito_check(&images, &cert.nu.plus(mu))
}

/// `sum_i c_i nabla_D^level(d/dt_i)` with coefficients in `T`.
#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct TComb<K: Field> {
    pub level: i64,
    pub coeffs: Vec<Poly<K>>,
}

impl<K: Field> TComb<K> {
    /// `E_k = nabla_D^k(E) = (1/h) nabla_D^(k-1)(d/dt_l)`.
    pub fn euler(frame: &FlatFrame<K>, k: i64) -> Self {
        let l = frame.rank;
        let mut coeffs = vec![Poly::zero(l); l];
        coeffs[l - 1] = Poly::constant(l, K::from_i64(frame.h as i64).inv().unwrap());
        TComb { level: k - 1, coeffs }
    }

    /// `nabla_D^-1`, which is `T`-linear.
    pub fn lower(&self) -> Self {
        TComb {
            level: self.level - 1,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn in_t(&self) -> bool {
        let top = self.coeffs.len() - 1;
        self.coeffs.iter().all(|p| p.terms().all(|(m, _)| m.0[top] == 0))
    }

    pub fn to_field(&self, frame: &FlatFrame<K>) -> VField<K> {
        let l = frame.rank;
        let (p, s) = frame.n_matrix(self.level);
        let v: Vec<Poly<K>> = (0..l)
            .map(|j| (0..l).fold(Poly::zero(l), |acc, i| &acc + &(&self.coeffs[i] * &p[i][j])))
            .collect();
        frame.combine(&v, &frame.det_power_inverse(s))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct ShiftCert<K: Field> {
    pub k_from: i64,
    pub from: UniversalCert<K>,
    pub to: UniversalCert<K>,
    pub shifted: TComb<K>,
    /// `nabla_D(nabla_(eta_j)(zeta')) = sum_i f_ij nabla_(d/dt_i)(zeta')`,
    /// entries as polynomials in `t`.
    pub transition: Option<Matrix<Poly<K>>>,
    pub transition_in_t: bool,
    /// `deg f_ij = e_i + e_j* - h` on every nonzero entry.
    pub transition_degrees_ok: bool,
    pub transition_det: Option<K>,
}

impl<K: Field> ShiftCert<K> {
    pub fn passed(&self) -> bool {
        self.from.is_universal()
            && self.to.is_universal()
            && self.transition.is_some()
            && self.transition_in_t
            && self.transition_degrees_ok
            && self.transition_det.is_some()
    }
}

/// From a `(k omega)`-universal `zeta`, certifies `nabla_D^-1(zeta)` as
/// `((k+1) omega)`-universal and extracts the transition matrix.
pub fn shifted_universality<K: Field>(frame: &FlatFrame<K>, zeta: &TComb<K>, k: i64) -> Result<ShiftCert<K>> {
    let l = frame.rank;
    let from = check_universal(&zeta.to_field(frame), &Mult::omega(&frame.hyperplanes, k, 0))?;
    let shifted = zeta.lower();
    let zf = shifted.to_field(frame);
    let to = check_universal(&zf, &Mult::omega(&frame.hyperplanes, k + 1, 0))?;

    let alphas = frame.alphas();
    let rows: Vec<Vec<RatFunc<K>>> = (0..l)
        .map(|i| phi(&zf, &frame.chart.partial_t(i)).map(|f| f.coeffs().to_vec()))
        .collect::<Result<_>>()?;
    let targets: Vec<Vec<RatFunc<K>>> = frame
        .eta
        .iter()
        .map(|eta| {
            let f = phi(&zf, eta)?;
            Ok(frame.primitive.nabla(&f)?.coeffs().to_vec())
        })
        .collect::<Result<_>>()?;
    let det = ratfunc_det(&rows);
    let exps: Vec<i64> = frame.degrees.iter().map(|&d| d as i64 - 1).collect();
    let mut transition = None;
    let mut in_t = false;
    let mut degrees_ok = false;
    let mut tdet = None;
    if !det.is_zero() {
        let solved: Option<Matrix<Poly<K>>> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| {
                        let mut m = rows.clone();
                        m[i] = targets[j].clone();
                        let f = ratfunc_det(&m).try_div(&det, &alphas).ok()?;
                        frame.ring.to_t(&f.to_poly()?).ok()
                    })
                    .collect()
            })
            .collect();
        if let Some(f) = solved {
            let top = l - 1;
            in_t = f.iter().flatten().all(|p| p.terms().all(|(m, _)| m.0[top] == 0));
            degrees_ok = (0..l).all(|i| {
                (0..l).all(|j| {
                    let p = &f[i][j];
                    p.is_zero() || {
                        let expect = exps[i] + frame.coexponents[j] as i64 - frame.h as i64;
                        let x = frame.ring.eval(p);
                        x.homogeneous_degree().map(|d| d as i64) == Some(expect)
                    }
                })
            });
            tdet = crate::poly::matrix::poly_det(&f).constant_value().filter(|c| !c.is_zero());
            transition = Some(f);
        }
    }
    Ok(ShiftCert {
        k_from: k,
        from,
        to,
        shifted,
        transition,
        transition_in_t: in_t,
        transition_degrees_ok: degrees_ok,
        transition_det: tdet,
    })
}

/// `(1/|W|) sum_w w . theta`.
pub fn reynolds_vfield<K: Field>(elements: &[Matrix<K>], theta: &VField<K>) -> Result<VField<K>> {
    let sum = elements
        .par_iter()
        .map(|w| theta.act(w))
        .try_reduce(|| VField::zero(theta.nvars()), |a, b| a.add(&b))?;
    Ok(sum.scale(&K::from_i64(elements.len() as i64).inv().unwrap()))
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct CollapseReport<K: Field> {
    pub k: i64,
    /// `{nabla_(d/dx_i)(E_k)}` certified for `D(A, -k omega)`.
    pub basis_cert: BasisCert<K>,
    pub averages: Vec<VField<K>>,
    /// Each average lies in `D(A, -k omega + 1)`.
    pub averages_in_next: Vec<bool>,
    /// Field in `D(A, -k omega)` but not in `D(A, -k omega + 1)`.
    pub strict_witness: VField<K>,
    pub strict: bool,
}

impl<K: Field> CollapseReport<K> {
    pub fn passed(&self) -> bool {
        self.basis_cert.is_basis() && self.averages_in_next.iter().all(|&b| b) && self.strict
    }
}

/// Invariant parts of `D(A, -k omega)` and `D(A, -k omega + 1)` agree:
/// Reynolds averages of the universal basis land in the smaller module.
pub fn invariant_part_collapse<K: Field>(
    group: &GroupData<K>,
    frame: &FlatFrame<K>,
    k: i64,
) -> Result<CollapseReport<K>> {
    let nu = Mult::omega(&frame.hyperplanes, -k, 0);
    let next = nu.shift(1);
    let ek = TComb::euler(frame, k).to_field(frame);
    let cert = check_universal(&ek, &nu)?;
    let averages = cert
        .images
        .iter()
        .map(|f| reynolds_vfield(&group.elements, f))
        .collect::<Result<Vec<_>>>()?;
    let averages_in_next = averages.iter().map(|f| member(f, &next)).collect();
    let strict_witness = strictness_witness(&nu, 0);
    let strict = member(&strict_witness, &nu) && !member(&strict_witness, &next);
    Ok(CollapseReport {
        k,
        basis_cert: cert.basis_cert,
        averages,
        averages_in_next,
        strict_witness,
        strict,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound(serialize = "K: Field + Serialize"))]
pub struct ZieglerReport<K: Field> {
    pub m: i64,
    /// Source basis of `D(A, -1)`.
    pub source: BasisCert<K>,
    /// Transported basis of `D(A, m omega - 1)`.
    pub transported: BasisCert<K>,
    /// `exp(A, omega - 1)` from an independent basis search.
    pub base_exponents: Vec<i64>,
    pub exponents: Vec<i64>,
    /// `exp(A, omega - 1) + (m - 1) h`.
    pub expected: Vec<i64>,
}

impl<K: Field> ZieglerReport<K> {
    pub fn passed(&self) -> bool {
        self.transported.is_basis() && self.exponents == self.expected
    }
}

/// `(A, m omega - 1)` is free: transport a basis of `D(A, -1)` along the
/// `(m omega)`-universal field `E_-m`.
pub fn ziegler<K: Field>(frame: &FlatFrame<K>, m: i64) -> Result<ZieglerReport<K>> {
    let hyps = &frame.hyperplanes;
    let minus_one = Mult::omega(hyps, 0, -1);
    let source = search_basis(&minus_one)?;
    let zeta = TComb::euler(frame, -m).to_field(frame);
    let cert = check_universal(&zeta, &Mult::omega(hyps, m, 0))?;
    if !cert.is_universal() {
        return Err(Error::NotABasis);
    }
    let transported = transported_basis(&cert, &minus_one, hyps, Some(&source.derivations))?;
    let base_exponents = search_basis(&Mult::omega(hyps, 1, -1))?.exponents()?;
    let exponents = transported.exponents().unwrap_or_default();
    let expected = base_exponents.iter().map(|e| e + (m - 1) * frame.h as i64).collect();
    Ok(ZieglerReport {
        m,
        source,
        transported,
        base_exponents,
        exponents,
        expected,
    })
}

/// `{-e_i}` and `{-e_i*}` (sorted), and whether they coincide.
pub fn exponent_dichotomy<K: Field>(group: &GroupData<K>) -> (Vec<i64>, Vec<i64>, bool) {
    let mut a: Vec<i64> = group.exponents().iter().map(|&e| -(e as i64)).collect();
    let mut b: Vec<i64> = group.coexponents.iter().map(|&e| -(e as i64)).collect();
    a.sort_unstable();
    b.sort_unstable();
    let same = a == b;
    (a, b, same)
}
