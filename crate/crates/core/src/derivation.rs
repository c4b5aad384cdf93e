//! Vector fields with rational coefficients, Saito matrices, the flat
//! connection with the coordinate fields as flat sections, and changes
//! between the `x` and invariant `t` coordinate frames.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{matrix, ratfunc_det, split_linear, LinForm, Matrix, Poly, RatFunc, RatFuncJson};
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "t")]
    T,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::X => "x",
            Frame::T => "t",
        })
    }
}

/// A vector field `sum c_i d/dy_i` where `y` is the coordinate system of
/// `frame`. Coefficients are always functions of `x`; in the `t` frame the
/// `i`-th coefficient is the value `theta(t_i)`.
#[derive(Clone)]
pub struct VField<K> {
    frame: Frame,
    coeffs: Vec<RatFunc<K>>,
    pdeg: Option<i64>,
}

impl<K: Field> PartialEq for VField<K> {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.coeffs == other.coeffs
    }
}

fn mismatch(expected: Frame, found: Frame) -> Error {
    Error::FrameMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Common value of `deg c_i - shift_i` over the nonzero coefficients.
fn common_degree<K: Field>(coeffs: &[RatFunc<K>], shift: impl Fn(usize) -> i64) -> Option<i64> {
    let mut out = None;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let d = c.homogeneous_degree()? - shift(i);
        match out {
            None => out = Some(d),
            Some(p) if p != d => return None,
            _ => {}
        }
    }
    out
}

impl<K: Field> VField<K> {
    /// Field in the `x` frame; `pdeg` is detected from the coefficients.
    pub fn new(coeffs: Vec<RatFunc<K>>) -> Self {
        let pdeg = common_degree(&coeffs, |_| 0);
        VField {
            frame: Frame::X,
            coeffs,
            pdeg,
        }
    }

    /// Field in the `t` frame for invariants of the given degrees.
    pub fn new_t(coeffs: Vec<RatFunc<K>>, degrees: &[u32]) -> Self {
        let pdeg = common_degree(&coeffs, |i| degrees[i] as i64 - 1);
        VField {
            frame: Frame::T,
            coeffs,
            pdeg,
        }
    }

    pub fn from_polys(coeffs: Vec<Poly<K>>) -> Self {
        Self::new(coeffs.into_iter().map(RatFunc::from_poly).collect())
    }

    /// The coordinate field `d/dx_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        Self::new((0..nvars).map(|j| if i == j { RatFunc::one(nvars) } else { RatFunc::zero(nvars) }).collect())
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(vec![RatFunc::zero(nvars); nvars])
    }

    /// `sum x_i d/dx_i` scaled by `c`.
    pub fn euler(nvars: usize, c: K) -> Self {
        Self::from_polys((0..nvars).map(|i| Poly::var(nvars, i).scale(&c)).collect())
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn coeffs(&self) -> &[RatFunc<K>] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn pdeg(&self) -> Option<i64> {
        self.pdeg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    /// Recomputes the polynomial degree from scratch and compares it with the
    /// stored value.
    pub fn pdeg_consistent(&self, degrees: &[u32]) -> bool {
        let fresh = match self.frame {
            Frame::X => common_degree(&self.coeffs, |_| 0),
            Frame::T => common_degree(&self.coeffs, |i| degrees[i] as i64 - 1),
        };
        fresh == self.pdeg
    }

    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_polynomial)
    }

    fn with_coeffs(&self, coeffs: Vec<RatFunc<K>>, pdeg: Option<i64>) -> Self {
        VField {
            frame: self.frame,
            coeffs,
            pdeg,
        }
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(mismatch(self.frame, other.frame));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let coeffs: Vec<RatFunc<K>> = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        let pdeg = match (self.is_zero(), other.is_zero()) {
            (true, _) => other.pdeg,
            (_, true) => self.pdeg,
            _ if self.pdeg == other.pdeg => self.pdeg,
            _ => None,
        };
        let pdeg = if coeffs.iter().all(RatFunc::is_zero) { None } else { pdeg };
        Ok(self.with_coeffs(coeffs, pdeg))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| -c).collect(), self.pdeg)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return self.with_coeffs(vec![RatFunc::zero(self.nvars()); self.nvars()], None);
        }
        self.with_coeffs(self.coeffs.iter().map(|f| f.scale(c)).collect(), self.pdeg)
    }

    /// `f * self`.
    pub fn mul(&self, f: &RatFunc<K>) -> Self {
        let pdeg = match (self.pdeg, f.homogeneous_degree()) {
            (Some(p), Some(d)) if !f.is_zero() => Some(p + d),
            _ => None,
        };
        self.with_coeffs(self.coeffs.iter().map(|c| c * f).collect(), pdeg)
    }

    /// `theta(f) = sum theta(x_i) df/dx_i`.
    pub fn apply(&self, f: &RatFunc<K>) -> Result<RatFunc<K>> {
        if self.frame != Frame::X {
            return Err(mismatch(Frame::X, self.frame));
        }
        let mut acc = RatFunc::zero(f.nvars());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &f.partial(i));
            }
        }
        Ok(acc)
    }

    pub fn apply_poly(&self, f: &Poly<K>) -> Result<RatFunc<K>> {
        self.apply(&RatFunc::from_poly(f.clone()))
    }

    /// `nabla_self(phi) = sum self(phi_i) d/dx_i`.
    pub fn nabla(&self, phi: &VField<K>) -> Result<VField<K>> {
        if phi.frame != Frame::X {
            return Err(mismatch(Frame::X, phi.frame));
        }
        let coeffs = phi.coeffs.iter().map(|p| self.apply(p)).collect::<Result<Vec<_>>>()?;
        let pdeg = match (self.pdeg, phi.pdeg) {
            (Some(a), Some(b)) => Some(a + b - 1),
            _ => None,
        };
        let pdeg = if coeffs.iter().all(RatFunc::is_zero) { None } else { pdeg };
        Ok(VField {
            frame: Frame::X,
            coeffs,
            pdeg,
        })
    }

    /// The action `(w . theta)(x) = w theta(w^-1 x)` of a unitary matrix.
    pub fn act(&self, w: &Matrix<K>) -> Result<VField<K>> {
        if self.frame != Frame::X {
            return Err(mismatch(Frame::X, self.frame));
        }
        let winv = matrix::adjoint(w);
        let moved = self
            .coeffs
            .iter()
            .map(|c| c.substitute_linear(&winv))
            .collect::<Result<Vec<_>>>()?;
        let n = self.nvars();
        let coeffs = (0..n)
            .map(|i| {
                (0..n).fold(RatFunc::zero(n), |acc, j| {
                    if w[i][j].is_zero() {
                        acc
                    } else {
                        &acc + &moved[j].scale(&w[i][j])
                    }
                })
            })
            .collect();
        Ok(self.with_coeffs(coeffs, self.pdeg))
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        let dnames: Vec<String> = match self.frame {
            Frame::X => (1..=self.nvars()).map(|i| format!("dx{i}")).collect(),
            Frame::T => (1..=self.nvars()).map(|i| format!("dt{i}")).collect(),
        };
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(&dnames)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, d)| format!("({})*{d}", c.display_with(names)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<K: Field> fmt::Display for VField<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl<K: Field> fmt::Debug for VField<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VField[{}; pdeg {:?}]({})", self.frame, self.pdeg, self)
    }
}

/// Saito matrix: row `i` is the coefficient vector of `fields[i]`.
pub fn saito_matrix<K: Field>(fields: &[VField<K>]) -> Result<Matrix<RatFunc<K>>> {
    if let Some(first) = fields.first() {
        for f in fields {
            first.same_frame(f)?;
            if f.nvars() != fields.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} fields in dimension {}",
                    fields.len(),
                    f.nvars()
                )));
            }
        }
    }
    Ok(fields.iter().map(|f| f.coeffs.clone()).collect())
}

/// `theta_1 ^ ... ^ theta_l = det M(theta_1, ..., theta_l)`.
pub fn wedge<K: Field>(fields: &[VField<K>]) -> Result<RatFunc<K>> {
    Ok(ratfunc_det(&saito_matrix(fields)?))
}

/// Coordinates `t_1, ..., t_l` given as polynomials in `x` together with
/// both Jacobian matrices.
#[derive(Clone, Debug)]
pub struct Chart<K: Field> {
    invariants: Vec<Poly<K>>,
    degrees: Vec<u32>,
    /// Entry `(i, j)` is `dt_j / dx_i`.
    jac_tx: Matrix<Poly<K>>,
    /// Entry `(j, i)` is `dx_i / dt_j`.
    jac_xt: Matrix<RatFunc<K>>,
    jac_det: Poly<K>,
}

impl<K: Field> Chart<K> {
    /// `candidates` must contain every linear factor of the Jacobian
    /// determinant.
    pub fn new(invariants: Vec<Poly<K>>, candidates: &[LinForm<K>]) -> Result<Self> {
        let n = invariants.len();
        let degrees = invariants
            .iter()
            .map(|t| {
                t.homogeneous_degree()
                    .ok_or_else(|| Error::DimensionMismatch("invariants must be homogeneous".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        let jac_tx: Matrix<Poly<K>> = (0..n)
            .map(|i| invariants.iter().map(|t| t.partial(i)).collect())
            .collect();
        let jac_det = matrix::poly_det(&jac_tx);
        if jac_det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let (c, factors) = split_linear(&jac_det, candidates).ok_or(Error::UnsupportedDenominator)?;
        let cinv = c.inv().unwrap();
        let adj = adjugate(&jac_tx);
        // (J(t,x))^-1 = adj / det; entry (j, i) of the inverse is dx_i/dt_j.
        let jac_xt = adj
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|p| RatFunc::new(p.scale(&cinv), factors.clone()))
                    .collect()
            })
            .collect();
        Ok(Chart {
            invariants,
            degrees,
            jac_tx,
            jac_xt,
            jac_det,
        })
    }

    pub fn invariants(&self) -> &[Poly<K>] {
        &self.invariants
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn jac_tx(&self) -> &Matrix<Poly<K>> {
        &self.jac_tx
    }

    pub fn jac_xt(&self) -> &Matrix<RatFunc<K>> {
        &self.jac_xt
    }

    pub fn jac_det(&self) -> &Poly<K> {
        &self.jac_det
    }

    /// `d/dt_j` in the `x` frame.
    pub fn partial_t(&self, j: usize) -> VField<K> {
        VField::new(self.jac_xt[j].clone())
    }

    pub fn change_frame(&self, theta: &VField<K>, target: Frame) -> VField<K> {
        let n = theta.nvars();
        match (theta.frame, target) {
            (a, b) if a == b => theta.clone(),
            (Frame::X, Frame::T) => {
                let coeffs = (0..n)
                    .map(|j| {
                        (0..n).fold(RatFunc::zero(n), |acc, i| {
                            let c = &theta.coeffs[i];
                            if c.is_zero() || self.jac_tx[i][j].is_zero() {
                                acc
                            } else {
                                &acc + &c.mul_poly(&self.jac_tx[i][j])
                            }
                        })
                    })
                    .collect();
                VField {
                    frame: Frame::T,
                    coeffs,
                    pdeg: theta.pdeg,
                }
            }
            _ => {
                let coeffs = (0..n)
                    .map(|i| {
                        (0..n).fold(RatFunc::zero(n), |acc, j| {
                            let c = &theta.coeffs[j];
                            if c.is_zero() {
                                acc
                            } else {
                                &acc + &(c * &self.jac_xt[j][i])
                            }
                        })
                    })
                    .collect();
                VField {
                    frame: Frame::X,
                    coeffs,
                    pdeg: theta.pdeg,
                }
            }
        }
    }
}

/// Classical adjoint over a polynomial ring (cofactor transpose).
pub fn adjugate<K: Field>(m: &[Vec<Poly<K>>]) -> Matrix<Poly<K>> {
    let n = m.len();
    let nv = m[0][0].nvars();
    if n == 1 {
        return vec![vec![Poly::one(nv)]];
    }
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    // entry (j, i) = (-1)^(i+j) det(minor without row i, col j)
                    let minor: Vec<Vec<Poly<K>>> = (0..n)
                        .filter(|&r| r != i)
                        .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                        .collect();
                    let d = matrix::poly_det(&minor);
                    if (i + j) % 2 == 1 {
                        -&d
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect()
}

/// Wire form of a vector field.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "K: Field + Serialize", deserialize = "K: Field + Deserialize<'de>"))]
pub struct VFieldJson<K: Field> {
    pub frame: Frame,
    pub coeffs: Vec<RatFuncJson<K>>,
    pub pdeg: Option<i64>,
}

impl<K: Field> From<&VField<K>> for VFieldJson<K> {
    fn from(v: &VField<K>) -> Self {
        VFieldJson {
            frame: v.frame,
            coeffs: v.coeffs.iter().map(RatFuncJson::from).collect(),
            pdeg: v.pdeg,
        }
    }
}

impl<K: Field> VFieldJson<K> {
    /// Rebuilds an `x`-frame field; denominators must split over
    /// `candidates`.
    pub fn into_vfield(self, candidates: &[LinForm<K>]) -> Result<VField<K>> {
        if self.frame != Frame::X {
            return Err(mismatch(Frame::X, self.frame));
        }
        let n = self.coeffs.len();
        let coeffs = self
            .coeffs
            .into_iter()
            .map(|c| c.into_ratfunc(n, candidates))
            .collect::<Result<Vec<_>>>()?;
        Ok(VField::new(coeffs))
    }
}

impl<K: Field + Serialize> Serialize for VField<K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VFieldJson::from(self).serialize(s)
    }
}
