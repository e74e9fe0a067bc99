//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}` as
//! integer numerators over one positive common denominator. Every operation
//! result is moved to the smallest conductor that contains it, so derived
//! equality is equality of values.

use std::collections::HashMap;
use std::fmt;

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::factorize;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    nums: Vec<BigInt>,
    den: BigInt,
}

pub fn totient(n: u32) -> u32 {
    factorize(n as u64)
        .into_iter()
        .map(|(p, e)| ((p - 1) * p.pow(e - 1)) as u32)
        .product()
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// `Φ_N` with constant term first, cached per conductor.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        let phi_d = cyclotomic_polynomial(d);
        num = poly_div_exact(&num, &phi_d);
    }
    let arc = Arc::new(num);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

fn poly_div_exact(a: &[i64], m: &[i64]) -> Vec<i64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    let dq = a.len() - 1 - dm;
    let mut q = vec![0i64; dq + 1];
    for k in (0..=dq).rev() {
        let c = r[k + dm];
        q[k] = c;
        for j in 0..=dm {
            r[k + j] -= c * m[j];
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// Reduces an exponent vector of length `n` (ζ_n^j coefficients) modulo `Φ_n`.
fn reduce(n: u32, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    for top in (d..v.len()).rev() {
        if v[top].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[top]);
        for j in 0..d {
            if phi[j] != 0 {
                let t = &c * phi[j];
                v[top - d + j] -= t;
            }
        }
    }
    v.truncate(d);
    v
}

/// Coefficients at conductor `m` of a power-basis vector given at conductor `n | m`.
fn lift(n: u32, nums: &[BigInt], m: u32) -> Vec<BigInt> {
    if n == m {
        return nums.to_vec();
    }
    let step = (m / n) as usize;
    let mut v = vec![BigInt::zero(); m as usize];
    for (j, c) in nums.iter().enumerate() {
        v[j * step] = c.clone();
    }
    reduce(m, v)
}

/// Tries to write the value at conductor `n / r`; returns the numerators and
/// the extra denominator factor on success.
fn try_descend(n: u32, nums: &[BigInt], r: u32) -> Option<(Vec<BigInt>, u32)> {
    let m = n / r;
    let phi_m = totient(m) as usize;
    if m % r == 0 {
        // basis elements ζ_n^{r i} are ζ_m^i
        let mut cand = vec![BigInt::zero(); phi_m];
        for (j, c) in nums.iter().enumerate() {
            if j % r as usize == 0 {
                cand[j / r as usize] = c.clone();
            } else if !c.is_zero() {
                return None;
            }
        }
        return Some((cand, 1));
    }
    // ζ_n^j = ζ_m^x ζ_r^y with j = x r + y m; relative trace kills ζ_r^y, y ≠ 0
    let r_inv_m = inv_mod(r as i64, m as i64);
    let m_inv_r = inv_mod(m as i64, r as i64);
    let mut v = vec![BigInt::zero(); m as usize];
    for (j, c) in nums.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let x = (j as i64 * r_inv_m).rem_euclid(m as i64) as usize;
        let y = (j as i64 * m_inv_r).rem_euclid(r as i64);
        if y == 0 {
            v[x] += c * (r as i64 - 1);
        } else {
            v[x] -= c;
        }
    }
    let cand = reduce(m, v);
    let back = lift(m, &cand, n);
    let scale = BigInt::from(r - 1);
    if back.iter().zip(nums).all(|(b, c)| *b == c * &scale) {
        Some((cand, r - 1))
    } else {
        None
    }
}

fn inv_mod(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

impl Cyclotomic {
    fn normalize(mut conductor: u32, mut nums: Vec<BigInt>, mut den: BigInt) -> Self {
        'outer: loop {
            if conductor == 1 {
                break;
            }
            let primes: Vec<u64> = factorize(conductor as u64).into_keys().collect();
            for r in primes {
                if let Some((cand, f)) = try_descend(conductor, &nums, r as u32) {
                    conductor /= r as u32;
                    nums = cand;
                    den *= f;
                    continue 'outer;
                }
            }
            break;
        }
        let mut g = den.clone();
        for c in &nums {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in nums.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        if nums.iter().all(|c| c.is_zero()) {
            den = BigInt::one();
        }
        Cyclotomic { conductor, nums, den }
    }

    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, nums: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Cyclotomic { conductor: 1, nums: vec![BigInt::from(v)], den: BigInt::one() }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Cyclotomic { conductor: 1, nums: vec![v], den: BigInt::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::normalize(1, vec![r.numer().clone()], r.denom().clone())
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    /// `ζ_N^j`.
    pub fn root_of_unity(n: u32, j: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let mut v = vec![BigInt::zero(); n as usize];
        v[j.rem_euclid(n as i64) as usize] = BigInt::one();
        Self::normalize(n, reduce(n, v), BigInt::one())
    }

    /// Builds `Σ c_j ζ_N^j / den` from integer coefficients indexed by `j mod N`.
    pub fn from_exponent_sums(n: u32, coeffs: &[i64], den: i64) -> Self {
        let mut v = vec![BigInt::zero(); n as usize];
        for (j, &c) in coeffs.iter().enumerate() {
            v[j % n as usize] += c;
        }
        let (v, den) = if den < 0 {
            (v.into_iter().map(|c| -c).collect(), BigInt::from(-den))
        } else {
            (v, BigInt::from(den))
        };
        Self::normalize(n, reduce(n, v), den)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.den.is_one() && self.nums[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.nums[0].clone(), self.den.clone()))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.den.is_one()).then(|| self.nums[0].clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|v| v.to_i64())
    }

    /// True when every power-basis coefficient is an integer. The power basis
    /// is an integral basis, so this is membership in `Z[ζ_N]`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.den.is_one()
    }

    /// Nonzero terms `(j, coefficient)` sorted by exponent.
    pub fn terms(&self) -> Vec<(u32, BigRational)> {
        self.nums
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u32, BigRational::new(c.clone(), self.den.clone())))
            .collect()
    }

    fn at(&self, m: u32) -> Vec<BigInt> {
        lift(self.conductor, &self.nums, m)
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let m = lcm(self.conductor, other.conductor);
        let a = self.at(m);
        let b = other.at(m);
        let den = &self.den * &other.den;
        let nums = a
            .into_iter()
            .zip(b)
            .map(|(x, y)| x * &other.den + y * &self.den)
            .collect();
        Self::normalize(m, nums, den)
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            nums: self.nums.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.conductor == 1 {
            return other.scale(&self.nums[0], &self.den);
        }
        if other.conductor == 1 {
            return self.scale(&other.nums[0], &other.den);
        }
        let m = lcm(self.conductor, other.conductor);
        let a = self.at(m);
        let b = other.at(m);
        let mut v = vec![BigInt::zero(); m as usize];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    v[(i + j) % m as usize] += x * y;
                }
            }
        }
        Self::normalize(m, reduce(m, v), &self.den * &other.den)
    }

    fn scale(&self, num: &BigInt, den: &BigInt) -> Self {
        let nums = self.nums.iter().map(|c| c * num).collect();
        let mut d = &self.den * den;
        let mut nums: Vec<BigInt> = nums;
        if d.is_negative() {
            d = -d;
            for c in nums.iter_mut() {
                *c = -&*c;
            }
        }
        Self::normalize(self.conductor, nums, d)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k), &BigInt::one())
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(r.numer(), r.denom())
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&BigInt::one(), &BigInt::from(k)))
    }

    /// The Galois automorphism `ζ ↦ ζ^a` for `a` coprime to the conductor.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.conductor;
        assert_eq!((a.rem_euclid(n as i64) as u32).gcd(&n), 1, "exponent must be a unit");
        let mut v = vec![BigInt::zero(); n as usize];
        for (j, c) in self.nums.iter().enumerate() {
            if !c.is_zero() {
                v[(j as i64 * a).rem_euclid(n as i64) as usize] += c;
            }
        }
        Self::normalize(n, reduce(n, v), self.den.clone())
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&r.recip()));
        }
        // product of the other conjugates over the norm
        let n = self.conductor;
        let mut others = Self::one();
        for a in 2..n {
            if a.gcd(&n) == 1 {
                others = others.mul(&self.galois(a as i64));
            }
        }
        let norm = self.mul(&others);
        let norm = norm
            .as_rational()
            .ok_or_else(|| Error::Internal("norm is not rational".into()))?;
        Ok(others.scale_rational(&norm.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Numerical value, for diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.nums.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let t = 2.0 * std::f64::consts::PI * j as f64 / self.conductor as f64;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }

    pub fn to_json(&self) -> Value {
        let num = |v: &BigInt| match v.to_i64() {
            Some(x) => json!(x),
            None => json!(v.to_string()),
        };
        let terms: Vec<Value> = self
            .nums
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let g = c.gcd(&self.den);
                json!([j, num(&(c / &g)), num(&(&self.den / &g))])
            })
            .collect();
        json!({ "conductor": self.conductor, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed cyclotomic {v}"));
        let n = v.get("conductor").and_then(Value::as_u64).ok_or_else(bad)? as u32;
        if n == 0 {
            return Err(bad());
        }
        let big = |x: &Value| -> Option<BigInt> {
            match x {
                Value::Number(k) => k.as_i64().map(BigInt::from),
                Value::String(s) => s.parse().ok(),
                _ => None,
            }
        };
        let mut acc = Self::zero();
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(bad)? {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(bad)?;
            let j = t[0].as_i64().ok_or_else(bad)?;
            let num = big(&t[1]).ok_or_else(bad)?;
            let den = big(&t[2]).filter(|d| !d.is_zero()).ok_or_else(bad)?;
            acc = acc.add(&Self::root_of_unity(n, j).scale_rational(&BigRational::new(num, den)));
        }
        Ok(acc)
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = j != 0;
            if !a.is_one() || !unit {
                write!(f, "{a}")?;
                if unit {
                    write!(f, "*")?;
                }
            }
            if unit {
                write!(f, "E({})", self.conductor)?;
                if j != 1 {
                    write!(f, "^{j}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                Cyclotomic::$m(self, rhs)
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                Cyclotomic::$m(&self, &rhs)
            }
        }
    };
}
mod ops_impls {
    use super::Cyclotomic;
    use std::ops::{Add, Mul, Sub};
    binop!(Add, add);
    binop!(Sub, sub);
    binop!(Mul, mul);
}

impl std::ops::Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::neg(&self)
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::neg(self)
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        let mut acc = Accumulator::new();
        for z in iter {
            acc.add(&z);
        }
        acc.finish()
    }
}

/// Sums many values cheaply: integer multiples of roots of unity are counted
/// per conductor and exponent, general values are grouped by conductor and
/// combined once at the end.
#[derive(Clone, Debug, Default)]
pub struct Accumulator {
    counts: HashMap<u32, Vec<i64>>,
    general: HashMap<u32, (Vec<BigInt>, BigInt)>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `k · ζ_n^j`.
    pub fn add_root(&mut self, n: u32, j: i64, k: i64) {
        let v = self.counts.entry(n).or_insert_with(|| vec![0; n as usize]);
        v[j.rem_euclid(n as i64) as usize] += k;
    }

    pub fn add(&mut self, z: &Cyclotomic) {
        if z.is_zero() {
            return;
        }
        if z.den.is_one() && z.nums.iter().all(|c| c.to_i32().is_some()) {
            let n = z.conductor;
            let v = self.counts.entry(n).or_insert_with(|| vec![0; n as usize]);
            for (j, c) in z.nums.iter().enumerate() {
                v[j] += c.to_i64().unwrap();
            }
            return;
        }
        let e = self
            .general
            .entry(z.conductor)
            .or_insert_with(|| (vec![BigInt::zero(); z.nums.len()], BigInt::one()));
        // e = (nums, den); e + z = (nums·z.den + z.nums·den) / (den·z.den)
        for (a, b) in e.0.iter_mut().zip(&z.nums) {
            *a = &*a * &z.den + b * &e.1;
        }
        e.1 = &e.1 * &z.den;
    }

    pub fn add_scaled(&mut self, z: &Cyclotomic, k: i64) {
        if k == 1 {
            self.add(z);
        } else if k != 0 {
            self.add(&z.scale_int(k));
        }
    }

    pub fn finish(self) -> Cyclotomic {
        let mut out = Cyclotomic::zero();
        for (n, v) in self.counts {
            if v.iter().any(|&c| c != 0) {
                out = out.add(&Cyclotomic::from_exponent_sums(n, &v, 1));
            }
        }
        for (n, (nums, den)) in self.general {
            out = out.add(&Cyclotomic::normalize(n, nums, den));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, j: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, j)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..60 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, totient(n) as usize);
        }
    }

    #[test]
    fn basic_roots() {
        assert_eq!(z(4, 2), Cyclotomic::from_int(-1));
        assert!(z(1, 0).is_one());
        assert_eq!(z(3, 1) + z(3, 2), Cyclotomic::from_int(-1));
    }

    #[test]
    fn norm_of_one_plus_zeta3() {
        let a = Cyclotomic::one() + z(3, 1);
        let b = Cyclotomic::one() + z(3, 2);
        assert!((a * b).is_one());
    }

    #[test]
    fn conjugation_and_geometric_sums() {
        assert_eq!(z(5, 1).conjugate(), z(5, 4));
        for n in 2..30 {
            let s: Cyclotomic = (0..n as i64).map(|j| z(n, j)).sum();
            assert!(s.is_zero(), "n={n}");
        }
    }

    #[test]
    fn descent() {
        let d = z(6, 1) - z(6, 1);
        assert!(d.is_zero());
        assert_eq!(d.conductor(), 1);
        assert_eq!(z(8, 2).conductor(), 4);
        assert_eq!(z(8, 2), z(4, 1));
        assert_eq!((z(3, 1) + z(3, 2)).to_i64(), Some(-1));
        // Gauss sum: ζ_5 - ζ_5^2 - ζ_5^3 + ζ_5^4 = √5 lives in Q(ζ_5)
        let g = z(5, 1) - z(5, 2) - z(5, 3) + z(5, 4);
        assert_eq!((&g * &g).to_i64(), Some(5));
        // ζ_3 ζ_12^{-4} has conductor 1
        assert!((z(3, 1) * z(12, -4)).is_one());
        // never stuck at conductor 2 mod 4
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(z(10, 3).conductor(), 5);
        assert_eq!(z(2, 1), Cyclotomic::from_int(-1));
    }

    #[test]
    fn inverse() {
        let a = Cyclotomic::from_int(2) + z(7, 3);
        assert!((a.inv().unwrap() * a).is_one());
        assert_eq!(Cyclotomic::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(Cyclotomic::from_fraction(3, 4).inv().unwrap(), Cyclotomic::from_fraction(4, 3));
    }

    #[test]
    fn serialization_roundtrip() {
        let a = Cyclotomic::from_fraction(-1, 2) + z(8, 3).scale_int(3);
        let js = a.to_json();
        assert_eq!(js["conductor"], json!(8));
        assert_eq!(Cyclotomic::from_json(&js).unwrap(), a);
        let terms = js["terms"].as_array().unwrap();
        let js_j: Vec<u64> = terms.iter().map(|t| t[0].as_u64().unwrap()).collect();
        let mut sorted = js_j.clone();
        sorted.sort();
        assert_eq!(js_j, sorted);
        assert_eq!(Cyclotomic::zero().to_json(), json!({"conductor": 1, "terms": []}));
    }

    #[test]
    fn display() {
        assert_eq!(format!("{}", Cyclotomic::from_int(-3)), "-3");
        assert_eq!(format!("{}", z(3, 1).neg()), "-E(3)");
        assert_eq!(format!("{}", Cyclotomic::one() + z(4, 1).scale_int(2)), "1 + 2*E(4)");
    }

    #[test]
    fn accumulator_matches_sum() {
        let mut acc = Accumulator::new();
        let mut plain = Cyclotomic::zero();
        for j in 0..20 {
            let v = z(12, j).scale_rational(&BigRational::new((j + 1).into(), 3.into()));
            acc.add(&v);
            acc.add_root(5, j, 2);
            plain = plain + v + z(5, j).scale_int(2);
        }
        assert_eq!(acc.finish(), plain);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn elem() -> impl Strategy<Value = Cyclotomic> {
            (1u32..=24, prop::collection::vec((0i64..24, -5i64..5, 1i64..4), 0..5)).prop_map(
                |(n, ts)| {
                    ts.into_iter().fold(Cyclotomic::zero(), |acc, (j, a, d)| {
                        acc + z(n, j).scale_rational(&BigRational::new(a.into(), d.into()))
                    })
                },
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn ring_laws(a in elem(), b in elem(), c in elem()) {
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert!((&a - &a).is_zero());
                prop_assert_eq!(a.conjugate().conjugate(), a.clone());
                prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
            }

            #[test]
            fn lifting_is_a_homomorphism(a in elem(), b in elem(), k in 1u32..4) {
                // evaluating at a larger conductor and descending agrees with direct arithmetic
                let m = lcm(a.conductor(), b.conductor()) * k;
                let la = Cyclotomic::normalize(m, a.at(m), a.den.clone());
                let lb = Cyclotomic::normalize(m, b.at(m), b.den.clone());
                prop_assert_eq!(&la, &a);
                let sum = Cyclotomic::normalize(m, la.at(m).into_iter().zip(lb.at(m)).map(|(x, y)| x * &b.den + y * &a.den).collect(), &a.den * &b.den);
                prop_assert_eq!(sum, &a + &b);
            }

            #[test]
            fn norm_is_nonnegative(a in elem()) {
                let n = &a * &a.conjugate();
                let (re, im) = n.to_complex();
                prop_assert!(re > -1e-9 && im.abs() < 1e-6);
            }

            #[test]
            fn inverse_roundtrip(a in elem()) {
                prop_assume!(!a.is_zero());
                prop_assert!((a.inv().unwrap() * a).is_one());
            }
        }
    }
}
