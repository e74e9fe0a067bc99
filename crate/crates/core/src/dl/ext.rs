//! Fixed points of the semilinear map `v ↦ a F^{2n}(v)` on the vector model.
//!
//! With `Q = q^{2n}` and `N` the order of `a`, the solutions of
//! `v = a Φ_Q(v)` form a two-dimensional `F_Q`-space inside `F_{Q^N}^2`.
//! `F_{Q^N}` is realized as `F_Q[Y]/(m)` with a Kummer or Artin–Schreier
//! modulus, the solution space is found by linear algebra over `F_Q`, and the
//! points are counted line by line: on the line through `b` the volume is
//! `λ^{q+1} det(Fb, b)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldSpec, FieldTower};
use crate::groups::ExtMat;

const ZERO: FieldElement = FieldElement::ZERO;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusKind {
    Trivial,
    Kummer,
    ArtinSchreier,
}

#[derive(Clone, Debug)]
pub struct ExtCount {
    pub count: u64,
    /// Degree `N` of the extension of `F_Q` holding the solutions.
    pub degree: usize,
    pub kind: ModulusKind,
}

/// `F_Q[Y]/(m)` for monic `m = Y^N + Σ low_j Y^j`.
struct Ext<'a> {
    f: &'a FieldSpec,
    tower: &'a FieldTower,
    level: usize,
    n: usize,
    low: Vec<FieldElement>,
    frob: Vec<Vec<FieldElement>>,
    phi: Vec<Vec<FieldElement>>,
}

impl<'a> Ext<'a> {
    fn new(tower: &'a FieldTower, level: usize, low: Vec<FieldElement>) -> Result<Self> {
        let f = tower.level(level)?;
        let n = low.len();
        let mut ext = Ext { f, tower, level, n, low, frob: Vec::new(), phi: Vec::new() };
        let yq = ext.pow(&ext.y(), tower.q());
        ext.frob = ext.powers_of(&yq);
        let mut yq_big = ext.y();
        for _ in 0..level {
            yq_big = ext.frobenius(&yq_big);
        }
        ext.phi = ext.powers_of(&yq_big);
        Ok(ext)
    }

    fn one(&self) -> Vec<FieldElement> {
        let mut e = vec![ZERO; self.n];
        e[0] = FieldElement::one();
        e
    }

    fn y(&self) -> Vec<FieldElement> {
        if self.n == 1 {
            return vec![self.f.neg(&self.low[0])];
        }
        let mut e = vec![ZERO; self.n];
        e[1] = FieldElement::one();
        e
    }

    fn powers_of(&self, x: &[FieldElement]) -> Vec<Vec<FieldElement>> {
        let mut out = vec![self.one()];
        for i in 1..self.n {
            out.push(self.mul(&out[i - 1], x));
        }
        out
    }

    fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let (n, f) = (self.n, self.f);
        let mut acc = vec![ZERO; 2 * n - 1];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc[i + j] = f.add(&acc[i + j], &f.mul(xi, yj));
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = acc[k];
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                if !self.low[j].is_zero() {
                    acc[k - n + j] = f.sub(&acc[k - n + j], &f.mul(&c, &self.low[j]));
                }
            }
        }
        acc.truncate(n);
        acc
    }

    fn pow(&self, x: &[FieldElement], mut e: u64) -> Vec<FieldElement> {
        let mut base = x.to_vec();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    fn combine(&self, coeffs: &[FieldElement], table: &[Vec<FieldElement>]) -> Vec<FieldElement> {
        let mut r = vec![ZERO; self.n];
        for (c, img) in coeffs.iter().zip(table) {
            if c.is_zero() {
                continue;
            }
            for (ri, ii) in r.iter_mut().zip(img) {
                *ri = self.f.add(ri, &self.f.mul(c, ii));
            }
        }
        r
    }

    /// `x ↦ x^q`.
    fn frobenius(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        let c: Vec<FieldElement> =
            x.iter().map(|v| self.tower.frobenius_unchecked(self.level, self.f, v)).collect();
        self.combine(&c, &self.frob)
    }

    fn sub(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        x.iter().zip(y).map(|(a, b)| self.f.sub(a, b)).collect()
    }

    fn scale(&self, c: &FieldElement, x: &[FieldElement]) -> Vec<FieldElement> {
        x.iter().map(|v| self.f.mul(c, v)).collect()
    }

    fn det(&self, u: &[Vec<FieldElement>; 2], w: &[Vec<FieldElement>; 2]) -> Vec<FieldElement> {
        self.sub(&self.mul(&u[0], &w[1]), &self.mul(&u[1], &w[0]))
    }
}

const LOG_ZERO: u32 = u32::MAX;

/// `F_Q` in discrete-logarithm form with a Zech table, for the counting loop.
struct LogField {
    /// `Q − 1`.
    n: u64,
    /// Discrete logarithm by packed index; `LOG_ZERO` at 0.
    log: Vec<u32>,
    /// `log(1 + g^k)`.
    zech: Vec<u32>,
}

impl LogField {
    fn new(f: &FieldSpec) -> Self {
        let size = f.size();
        let n = size - 1;
        let p = f.characteristic() as u64;
        let g = f.generator();
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![LOG_ZERO; size as usize];
        let mut x = FieldElement::one();
        for k in 0..n {
            let code = f.index_of(&x);
            exp[k as usize] = code as u32;
            log[code as usize] = k as u32;
            x = f.mul(&x, &g);
        }
        // adding 1 changes the lowest base-p digit only
        let zech = exp
            .iter()
            .map(|&c| {
                let c = c as u64;
                let d0 = c % p;
                log[(c - d0 + (d0 + 1) % p) as usize]
            })
            .collect();
        LogField { n, log, zech }
    }

    fn log_of(&self, f: &FieldSpec, x: &FieldElement) -> u32 {
        self.log[f.index_of(x) as usize]
    }

    #[inline]
    fn mul_log(&self, a: u32, k: u64) -> u32 {
        if a == LOG_ZERO {
            return LOG_ZERO;
        }
        ((a as u64 + k) % self.n) as u32
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if a == LOG_ZERO {
            return b;
        }
        if b == LOG_ZERO {
            return a;
        }
        // a + b = a (1 + b/a)
        let k = (b as u64 + self.n - a as u64) % self.n;
        let z = self.zech[k as usize];
        if z == LOG_ZERO {
            return LOG_ZERO;
        }
        ((a as u64 + z as u64) % self.n) as u32
    }

    fn pow(&self, a: u32, e: u64) -> u32 {
        if a == LOG_ZERO {
            return LOG_ZERO;
        }
        (((a as u128) * (e as u128)) % self.n as u128) as u32
    }
}

fn log_field(tower: &FieldTower, level: usize) -> Result<Arc<LogField>> {
    type Cache = Mutex<HashMap<(u32, Vec<u8>), Arc<LogField>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let f = tower.level(level)?;
    let key = (f.characteristic(), f.modulus().to_vec());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(lf) = cache.lock().unwrap().get(&key) {
        return Ok(lf.clone());
    }
    let lf = Arc::new(LogField::new(f));
    cache.lock().unwrap().insert(key, lf.clone());
    Ok(lf)
}

/// Order of an invertible matrix.
pub fn matrix_order(a: &ExtMat, f: &FieldSpec, bound: u64) -> Result<u64> {
    let mut x = *a;
    for k in 1..=bound {
        if x.is_identity() {
            return Ok(k);
        }
        x = x.mul(a, f);
    }
    Err(Error::Internal("matrix order exceeds its bound".into()))
}

fn absolute_trace(f: &FieldSpec, x: &FieldElement) -> FieldElement {
    let mut t = ZERO;
    let mut y = *x;
    for _ in 0..f.degree() {
        t = f.add(&t, &y);
        y = f.frobenius_p(&y);
    }
    t
}

/// Basis of the kernel of a matrix given by rows.
pub fn nullspace(mut a: Vec<Vec<FieldElement>>, f: &FieldSpec) -> Vec<Vec<FieldElement>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(piv, r);
        let inv = f.inv(&a[r][c]).expect("pivot is nonzero");
        for k in c..cols {
            a[r][k] = f.mul(&a[r][k], &inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c];
                for k in c..cols {
                    let t = f.mul(&factor, &a[r][k]);
                    a[i][k] = f.sub(&a[i][k], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![ZERO; cols];
            v[free] = FieldElement::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[row][free]);
            }
            v
        })
        .collect()
}

/// `#{v ∈ F̄^2 : v = a F^{2n}(v), det(Fv, v) ∈ S}` for `a` and `S` at level 2.
pub fn semilinear_fixed_count(
    tower: &FieldTower,
    a: &ExtMat,
    n: usize,
    s_values: &[FieldElement],
) -> Result<ExtCount> {
    let level = 2 * n;
    let f = tower.level(level)?;
    let q = tower.q();
    let big_q = f.size();
    let f2 = tower.level(2)?;
    let order = matrix_order(a, f2, q.pow(4))?;
    let p = tower.characteristic() as u64;
    let (kind, low) = if order == 1 {
        (ModulusKind::Trivial, vec![ZERO])
    } else if (big_q - 1) % order == 0 {
        let mut low = vec![ZERO; order as usize];
        low[0] = f.neg(&f.generator());
        (ModulusKind::Kummer, low)
    } else if order == p {
        let omega = (1..big_q)
            .map(|i| f.element(i))
            .find(|w| !absolute_trace(f, w).is_zero())
            .ok_or_else(|| Error::Internal("no element of nonzero trace".into()))?;
        let mut low = vec![ZERO; p as usize];
        low[0] = f.neg(&omega);
        low[1] = f.neg(&FieldElement::one());
        (ModulusKind::ArtinSchreier, low)
    } else {
        return Err(Error::Unsupported(format!(
            "automorphism of order {order} needs an extension of F_(q^{level}) that is neither Kummer nor Artin-Schreier"
        )));
    };
    let ext = Ext::new(tower, level, low)?;
    let d = ext.n;
    let ab = a.embed(tower, 2, level)?;
    // columns of v ↦ v − a Φ(v) on the basis Y^i e_k
    let mut cols: Vec<Vec<FieldElement>> = Vec::with_capacity(2 * d);
    for k in 0..2 {
        for i in 0..d {
            let mut e = [vec![ZERO; d], vec![ZERO; d]];
            e[k][i] = FieldElement::one();
            let img = &ext.phi[i];
            let t: Vec<Vec<FieldElement>> =
                (0..2).map(|r| ext.sub(&e[r], &ext.scale(&ab.get(r, k), img))).collect();
            cols.push(t.concat());
        }
    }
    let rows: Vec<Vec<FieldElement>> = (0..2 * d).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let kernel = nullspace(rows, f);
    if kernel.len() != 2 {
        return Err(Error::Internal(format!("solution space has dimension {}", kernel.len())));
    }
    let split = |v: &Vec<FieldElement>| [v[..d].to_vec(), v[d..].to_vec()];
    let (b1, b2) = (split(&kernel[0]), split(&kernel[1]));
    let fr = |b: &[Vec<FieldElement>; 2]| [ext.frobenius(&b[0]), ext.frobenius(&b[1])];
    let (fb1, fb2) = (fr(&b1), fr(&b2));
    let ca = ext.det(&fb2, &b2);
    let cb = ext.det(&fb2, &b1);
    let cc = ext.det(&fb1, &b2);
    let ce = ext.det(&fb1, &b1);
    let lf = log_field(tower, level)?;
    let logs = |v: &[FieldElement]| -> Vec<u32> { v.iter().map(|x| lf.log_of(f, x)).collect() };
    let (la, lb, lc, le) = (logs(&ca), logs(&cb), logs(&cc), logs(&ce));
    let n_mul = lf.n;
    let e = (big_q - 1) / (q + 1);
    let s_pow: Vec<u32> = s_values
        .iter()
        .map(|s| Ok(lf.pow(lf.log_of(f, &tower.embed(2, level, s)?), e)))
        .collect::<Result<_>>()?;
    let weight = |d0: u32| -> u64 {
        if d0 == LOG_ZERO {
            return 0;
        }
        let dp = lf.pow(d0, e);
        (q + 1) * s_pow.iter().filter(|s| **s == dp).count() as u64
    };
    let mut count = 0;
    // the line through b1, then b2 + x b1 for x = 0 and x = g^k
    if le[1..].iter().all(|&c| c == LOG_ZERO) {
        count += weight(le[0]);
    }
    if la[1..].iter().all(|&c| c == LOG_ZERO) {
        count += weight(la[0]);
    }
    for k in 0..n_mul {
        let kq = (k * q) % n_mul;
        let kq1 = (kq + k) % n_mul;
        let coeff = |i: usize| {
            let mut v = la[i];
            v = lf.add(v, lf.mul_log(lb[i], k));
            v = lf.add(v, lf.mul_log(lc[i], kq));
            lf.add(v, lf.mul_log(le[i], kq1))
        };
        if (1..d).all(|i| coeff(i) == LOG_ZERO) {
            count += weight(coeff(0));
        }
    }
    Ok(ExtCount { count, degree: d, kind })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::DEFAULT_FIELD_BUDGET;

    /// Direct count over `F_{q^{2nN}}^2`.
    fn brute(tower: &FieldTower, a: &ExtMat, n: usize, s: &[FieldElement], top: usize) -> u64 {
        let f = tower.level(top).unwrap();
        let ab = a.embed(tower, 2, top).unwrap();
        let s: Vec<FieldElement> = s.iter().map(|x| tower.embed(2, top, x).unwrap()).collect();
        let mut c = 0;
        for x in f.elements() {
            for y in f.elements() {
                let v = [x, y];
                let phi: Vec<FieldElement> =
                    v.iter().map(|z| tower.frobenius_power(top, z, 2 * n).unwrap()).collect();
                if ab.apply(&phi, f) != v.to_vec() {
                    continue;
                }
                let fx = tower.frobenius(top, &x).unwrap();
                let fy = tower.frobenius(top, &y).unwrap();
                if s.contains(&f.sub(&f.mul(&fx, &y), &f.mul(&fy, &x))) {
                    c += 1;
                }
            }
        }
        c
    }

    fn some_s(tower: &FieldTower) -> Vec<FieldElement> {
        let f2 = tower.level(2).unwrap();
        let q = tower.q() as u128;
        let m1 = f2.neg(&FieldElement::one());
        f2.elements().filter(|d| !d.is_zero() && f2.pow(d, q - 1) == m1).collect()
    }

    #[test]
    fn matches_brute_force_for_unipotent_and_trivial() {
        let tower = FieldTower::new(2, 1, 8, DEFAULT_FIELD_BUDGET).unwrap();
        let s = some_s(&tower);
        let id = ExtMat::identity(2);
        let mut u = ExtMat::identity(2);
        u.set(0, 1, FieldElement::one());
        for (a, n, top) in [(id, 1, 2), (id, 2, 4), (u, 1, 4), (u, 2, 8)] {
            let fast = semilinear_fixed_count(&tower, &a, n, &s).unwrap();
            assert_eq!(fast.count, brute(&tower, &a, n, &s, top), "n = {n}");
        }
    }

    #[test]
    fn matches_brute_force_for_semisimple() {
        let tower = FieldTower::new(2, 1, 6, DEFAULT_FIELD_BUDGET).unwrap();
        let f2 = tower.level(2).unwrap();
        let s = some_s(&tower);
        let g = f2.generator();
        let g2 = f2.mul(&g, &g);
        let mut twisted = ExtMat::diagonal(&[g, g2]);
        twisted.set(0, 1, g);
        for a in [ExtMat::diagonal(&[g, FieldElement::one()]), ExtMat::diagonal(&[g, g2]), twisted] {
            let fast = semilinear_fixed_count(&tower, &a, 1, &s).unwrap();
            assert_eq!(fast.kind, ModulusKind::Kummer);
            assert_eq!(fast.degree, 3);
            assert_eq!(fast.count, brute(&tower, &a, 1, &s, 6));
        }
    }
}
