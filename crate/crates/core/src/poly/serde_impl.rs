use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linform::LinForm;
use super::poly::Poly;
use super::ratfunc::{split_linear, RatFunc};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// One `{"exp": [...], "coeff": ...}` entry of the polynomial encoding.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyTerm<K> {
    pub exp: Vec<u32>,
    pub coeff: K,
}

impl<K: Field + Serialize> Serialize for Poly<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<PolyTerm<&K>> = self
            .terms()
            .rev()
            .map(|(m, c)| PolyTerm {
                exp: m.0.clone(),
                coeff: c,
            })
            .collect();
        terms.serialize(s)
    }
}

/// The zero polynomial decodes with `nvars = 0`; use [`Poly::with_nvars`].
impl<'de, K: Field + Deserialize<'de>> Deserialize<'de> for Poly<K> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms: Vec<PolyTerm<K>> = Vec::deserialize(d)?;
        let nvars = terms.first().map_or(0, |t| t.exp.len());
        if terms.iter().any(|t| t.exp.len() != nvars) {
            return Err(serde::de::Error::custom("exponent vectors of unequal length"));
        }
        Ok(Poly::from_terms(nvars, terms.into_iter().map(|t| (t.exp, t.coeff))))
    }
}

/// Wire form of a rational function with an expanded denominator.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "K: Field + Serialize", deserialize = "K: Field + Deserialize<'de>"))]
pub struct RatFuncJson<K: Field> {
    pub num: Poly<K>,
    pub den: Poly<K>,
}

impl<K: Field> RatFuncJson<K> {
    /// Rebuilds the factored form; the denominator must split over
    /// `candidates`.
    pub fn into_ratfunc(self, nvars: usize, candidates: &[LinForm<K>]) -> Result<RatFunc<K>> {
        let num = fix_nvars(self.num, nvars)?;
        let den = fix_nvars(self.den, nvars)?;
        let (c, factors) = split_linear(&den, candidates).ok_or(Error::UnsupportedDenominator)?;
        let ci = c.inv().ok_or(Error::DivisionByZero)?;
        Ok(RatFunc::new(num.scale(&ci), factors))
    }
}

fn fix_nvars<K: Field>(p: Poly<K>, nvars: usize) -> Result<Poly<K>> {
    if p.nvars() == nvars {
        Ok(p)
    } else if p.is_zero() {
        Ok(Poly::zero(nvars))
    } else {
        Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables, expected {nvars}",
            p.nvars()
        )))
    }
}

impl<K: Field> From<&RatFunc<K>> for RatFuncJson<K> {
    fn from(r: &RatFunc<K>) -> Self {
        RatFuncJson {
            num: r.num().clone(),
            den: r.den_poly(),
        }
    }
}

impl<K: Field + Serialize> Serialize for RatFunc<K> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncJson::from(self).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CycNum;

    #[test]
    fn poly_json_roundtrip() {
        let z = CycNum::root_of_unity(3, 1);
        let p = &Poly::var(2, 0).scale(&z) + &Poly::constant(2, CycNum::from_frac(1, 2));
        let s = serde_json::to_string(&p).unwrap();
        let q: Poly<CycNum> = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn ratfunc_json_roundtrip() {
        let x1 = LinForm::<CycNum>::coordinate(2, 0);
        let r = RatFunc::new(Poly::var(2, 1), vec![(x1.clone(), 2)]);
        let j: RatFuncJson<CycNum> = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(j.clone().into_ratfunc(2, &[x1]).unwrap(), r);
        assert_eq!(
            j.into_ratfunc(2, &[LinForm::coordinate(2, 1)]),
            Err(Error::UnsupportedDenominator)
        );
    }
}
