use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{parse_rat, rat_to_string, Rat};
use super::Field;
use crate::error::Error;

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn phi_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let divisor = cyclotomic_polynomial(d);
            poly = divide_monic(&poly, &divisor);
        }
    }
    let poly = Arc::new(poly);
    phi_cache().write().unwrap().insert(n, poly.clone());
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Reduce a coefficient vector modulo `Phi_n`, returning exactly `phi(n)` entries.
fn reduce_mod_phi(mut v: Vec<Rat>, n: u32) -> Vec<Rat> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    if v.len() > d {
        for i in (d..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[i], Rat::zero());
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    v[i - d + j] -= &c * Rat::from_integer(pj.into());
                }
            }
        }
    }
    v.resize(d, Rat::zero());
    v
}

/// An element of the cyclotomic field `Q(zeta_N)`, stored in the power basis
/// `1, zeta, ..., zeta^(phi(N)-1)` reduced modulo `Phi_N`.
///
/// Binary operations lift both operands to `Q(zeta_lcm)`. Values that turn out
/// rational are stored with order 1.
#[derive(Clone)]
pub struct CycNum {
    order: u32,
    coeffs: Vec<Rat>,
}

impl CycNum {
    /// Builds from power-basis coordinates. `coeffs` may be longer than
    /// `phi(order)`; it is reduced modulo the cyclotomic polynomial.
    pub fn new(order: u32, coeffs: Vec<Rat>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CycNum {
            order,
            coeffs: reduce_mod_phi(coeffs, order),
        }
        .normalized()
    }

    pub fn rational(r: Rat) -> Self {
        CycNum {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rat::from_integer(n.into()))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        Self::rational(Rat::new(p.into(), q.into()))
    }

    /// `zeta_n^k` with `zeta_n = exp(2 pi i / n)`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![Rat::zero(); n as usize];
        v[k] = Rat::one();
        Self::new(n, v)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    fn normalized(mut self) -> Self {
        if self.order > 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            self.coeffs.truncate(1);
            self.order = 1;
        }
        self
    }

    /// Coordinates after embedding into `Q(zeta_m)`; `order` must divide `m`.
    pub fn lifted(&self, m: u32) -> Vec<Rat> {
        assert!(m % self.order == 0, "cannot lift order {} to {}", self.order, m);
        if m == self.order {
            return self.coeffs.clone();
        }
        let step = (m / self.order) as usize;
        let mut v = vec![Rat::zero(); self.coeffs.len() * step.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        reduce_mod_phi(v, m)
    }

    fn binary(&self, rhs: &Self, op: impl Fn(&Rat, &Rat) -> Rat) -> Self {
        let m = self.order.lcm(&rhs.order);
        let a = self.lifted(m);
        let b = rhs.lifted(m);
        let coeffs = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
        CycNum { order: m, coeffs }.normalized()
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = CycNum::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Value under `zeta_N -> exp(2 pi i / N)`. Diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * i as f64 / self.order as f64;
            re += c * angle.cos();
            im += c * angle.sin();
        }
        (re, im)
    }
}

// Univariate helpers over Q for the extended Euclidean algorithm.
fn trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn poly_divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    while rem.len() > db {
        let shift = rem.len() - 1 - db;
        let c = rem.last().unwrap() * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    (quot, rem)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

impl Field for CycNum {
    fn add_ref(&self, rhs: &Self) -> Self {
        if self.order == 1 && rhs.order == 1 {
            return CycNum::rational(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        self.binary(rhs, |a, b| a + b)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        if self.order == 1 && rhs.order == 1 {
            return CycNum::rational(&self.coeffs[0] - &rhs.coeffs[0]);
        }
        self.binary(rhs, |a, b| a - b)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.order == 1 && rhs.order == 1 {
            return CycNum::rational(&self.coeffs[0] * &rhs.coeffs[0]);
        }
        if self.order == 1 || rhs.order == 1 {
            let (s, v) = if self.order == 1 { (&self.coeffs[0], rhs) } else { (&rhs.coeffs[0], self) };
            if s.is_zero() {
                return CycNum::zero();
            }
            return CycNum {
                order: v.order,
                coeffs: v.coeffs.iter().map(|c| c * s).collect(),
            };
        }
        let m = self.order.lcm(&rhs.order);
        let a = self.lifted(m);
        let b = rhs.lifted(m);
        CycNum {
            order: m,
            coeffs: reduce_mod_phi(poly_mul(&a, &b), m),
        }
        .normalized()
    }

    fn neg_ref(&self) -> Self {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(CycNum::rational(self.coeffs[0].recip()));
        }
        let modulus: Vec<Rat> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| Rat::from_integer(c.into()))
            .collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (vec![], vec![Rat::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Phi_N is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let scale = r0[0].recip();
        let coeffs = s0.into_iter().map(|c| c * &scale).collect();
        Some(CycNum::new(self.order, coeffs))
    }

    fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut v = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(n - i) % n] += c;
        }
        CycNum::new(self.order, v)
    }

    fn from_rat(r: Rat) -> Self {
        CycNum::rational(r)
    }

    fn to_rat(&self) -> Option<Rat> {
        (self.order == 1).then(|| self.coeffs[0].clone())
    }

    fn coords(&self, order: u32) -> Vec<Rat> {
        let mut v = self.lifted(order);
        v.resize(euler_phi(order) as usize, Rat::zero());
        v
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = self.order.lcm(&other.order);
        self.lifted(m) == other.lifted(m)
    }
}

impl Eq for CycNum {}

impl Zero for CycNum {
    fn zero() -> Self {
        CycNum::rational(Rat::zero())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for CycNum {
    fn one() -> Self {
        CycNum::rational(Rat::one())
    }
}

impl Add for CycNum {
    type Output = CycNum;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Sub for CycNum {
    type Output = CycNum;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl Mul for CycNum {
    type Output = CycNum;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = rat_to_string(&c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "z{}", self.order)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumRepr {
    order: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CycNumRepr {
            order: self.order,
            coeffs: self.coeffs.iter().map(rat_to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CycNumRepr::deserialize(deserializer)?;
        CycNum::try_from_parts(repr.order, &repr.coeffs).map_err(serde::de::Error::custom)
    }
}

impl CycNum {
    /// Builds from the JSON parts `order` and decimal `"p/q"` coordinates.
    pub fn try_from_parts(order: u32, coeffs: &[String]) -> Result<Self, Error> {
        if order == 0 {
            return Err(Error::Parse("cyclotomic order must be positive".into()));
        }
        if coeffs.len() > euler_phi(order) as usize {
            return Err(Error::Parse(format!(
                "order {order} takes at most {} coordinates, got {}",
                euler_phi(order),
                coeffs.len()
            )));
        }
        let v = coeffs.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(CycNum::new(order, v))
    }
}
