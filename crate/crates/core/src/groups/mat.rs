//! Lookup-table arithmetic in `F_q` and `n × n` matrices over it (`n ≤ 4`).

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};

pub const MAX_N: usize = 4;

/// Tables for `F_q`, elements numbered by [`crate::fields::FieldSpec::index_of`]
/// (so `0` is zero and `1` is one).
#[derive(Clone, Debug)]
pub struct Fq {
    q: usize,
    p: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    generator: u8,
}

impl Fq {
    pub fn from_tower(tower: &FieldTower) -> Result<Self> {
        let base = tower.base();
        let q = base.size() as usize;
        if q > 64 {
            return Err(Error::Budget(format!("base field of size {q} is too large for matrix tables")));
        }
        let els: Vec<FieldElement> = base.elements().collect();
        let idx = |x: &FieldElement| base.index_of(x) as u8;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = idx(&base.add(&els[a], &els[b]));
                mul[a * q + b] = idx(&base.mul(&els[a], &els[b]));
            }
        }
        let neg = (0..q).map(|a| idx(&base.neg(&els[a]))).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { idx(&base.inv(&els[a]).unwrap()) })
            .collect();
        Ok(Fq {
            q,
            p: base.characteristic(),
            add,
            mul,
            neg,
            inv,
            generator: idx(&base.generator()),
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn generator(&self) -> u8 {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u8, e: u64) -> u8 {
        let mut r = 1;
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u8) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// An `n × n` matrix over `F_q`, entries row-major. The derived order is
/// lexicographic on the row-major entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    n: u8,
    e: [u8; MAX_N * MAX_N],
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_N);
        Mat { n: n as u8, e: [0; MAX_N * MAX_N] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let n = rows.len();
        let mut m = Self::zero(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn diagonal(d: &[u8]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.e[i * self.n as usize + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.e[i * self.n as usize + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Mixed-radix code `Σ e_i q^i` over the row-major entries.
    pub fn code(&self, q: usize) -> usize {
        let n2 = self.n() * self.n();
        self.e[..n2].iter().rev().fold(0, |acc, &c| acc * q + c as usize)
    }

    pub fn from_code(n: usize, q: usize, mut code: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n * n {
            m.e[i] = (code % q) as u8;
            code /= q;
        }
        m
    }

    pub fn mul(&self, other: &Mat, f: &Fq) -> Mat {
        let n = self.n();
        let mut r = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u8;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
                }
                r.set(i, j, acc);
            }
        }
        r
    }

    pub fn sub(&self, other: &Mat, f: &Fq) -> Mat {
        let mut r = *self;
        for i in 0..self.n() * self.n() {
            r.e[i] = f.sub(self.e[i], other.e[i]);
        }
        r
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n();
        let mut r = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                r.set(j, i, self.get(i, j));
            }
        }
        r
    }

    pub fn det(&self, f: &Fq) -> u8 {
        let n = self.n();
        let mut a = self.rows();
        let mut det = 1u8;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a[r][c] != 0) else { return 0 };
            if piv != c {
                a.swap(piv, c);
                det = f.neg(det);
            }
            det = f.mul(det, a[c][c]);
            let inv = f.inv(a[c][c]);
            for r in c + 1..n {
                if a[r][c] != 0 {
                    let factor = f.mul(a[r][c], inv);
                    for k in c..n {
                        a[r][k] = f.sub(a[r][k], f.mul(factor, a[c][k]));
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Fq) -> Option<Mat> {
        let n = self.n();
        let mut a = self.rows();
        let mut b = Mat::identity(n).rows();
        for c in 0..n {
            let piv = (c..n).find(|&r| a[r][c] != 0)?;
            a.swap(piv, c);
            b.swap(piv, c);
            let inv = f.inv(a[c][c]);
            for k in 0..n {
                a[c][k] = f.mul(a[c][k], inv);
                b[c][k] = f.mul(b[c][k], inv);
            }
            for r in 0..n {
                if r != c && a[r][c] != 0 {
                    let factor = a[r][c];
                    for k in 0..n {
                        a[r][k] = f.sub(a[r][k], f.mul(factor, a[c][k]));
                        b[r][k] = f.sub(b[r][k], f.mul(factor, b[c][k]));
                    }
                }
            }
        }
        Some(Mat::from_rows(&b))
    }

    pub fn trace(&self, f: &Fq) -> u8 {
        (0..self.n()).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Characteristic polynomial `det(xI - A)`, constant term first, monic.
    pub fn char_poly(&self, f: &Fq) -> Vec<u8> {
        let n = self.n();
        let mut c = vec![0u8; n + 1];
        c[n] = 1;
        // coefficient of x^{n-k} is (-1)^k times the sum of principal k-minors
        for k in 1..=n {
            let mut s = 0u8;
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let mut sub = Mat::zero(k);
                for (a, &i) in idx.iter().enumerate() {
                    for (b, &j) in idx.iter().enumerate() {
                        sub.set(a, b, self.get(i, j));
                    }
                }
                s = f.add(s, sub.det(f));
            }
            c[n - k] = if k % 2 == 1 { f.neg(s) } else { s };
        }
        c
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.n())
    }

    /// Block diagonal matrix from square blocks.
    pub fn block_diagonal(blocks: &[Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.n()).sum();
        let mut m = Mat::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n() {
                for j in 0..b.n() {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n();
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.rows())
    }
}

// Polynomials over F_q as coefficient vectors, constant term first.

pub(crate) fn poly_trim(mut a: Vec<u8>) -> Vec<u8> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_is_zero(a: &[u8]) -> bool {
    a.iter().all(|&c| c == 0)
}

pub(crate) fn poly_rem(a: &[u8], b: &[u8], f: &Fq) -> Vec<u8> {
    let b = poly_trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]);
    let mut r = poly_trim(a.to_vec());
    while r.len() > db && !poly_is_zero(&r) {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], lead_inv);
        for j in 0..=db {
            r[dr - db + j] = f.sub(r[dr - db + j], f.mul(c, b[j]));
        }
        r = poly_trim(r);
        if dr == 0 {
            break;
        }
    }
    r
}

pub(crate) fn poly_gcd(a: &[u8], b: &[u8], f: &Fq) -> Vec<u8> {
    let (mut a, mut b) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !poly_is_zero(&b) {
        let r = poly_rem(&a, &b, f);
        a = b;
        b = r;
    }
    a
}

pub(crate) fn poly_derivative(a: &[u8], f: &Fq) -> Vec<u8> {
    if a.len() <= 1 {
        return vec![0];
    }
    let d = (1..a.len())
        .map(|i| {
            let k = (i as u32 % f.characteristic()) as u8;
            // k as an element of the prime field has index k
            f.mul(a[i], k)
        })
        .collect();
    poly_trim(d)
}

/// Squarefree test via `gcd(f, f') = 1`.
pub fn is_squarefree(a: &[u8], f: &Fq) -> bool {
    let d = poly_derivative(a, f);
    if poly_is_zero(&d) {
        return a.len() <= 1;
    }
    poly_gcd(a, &d, f).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_tower;

    fn f(q: u32) -> Fq {
        let (p, k) = match q {
            4 => (2, 2),
            8 => (2, 3),
            9 => (3, 2),
            _ => (q, 1),
        };
        Fq::from_tower(&make_tower(p, k, 1).unwrap()).unwrap()
    }

    #[test]
    fn table_field_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = f(q);
            for a in 0..q as u8 {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
            assert_eq!(f.order(f.generator()), q as u64 - 1);
        }
    }

    #[test]
    fn inverse_and_det() {
        let f = f(3);
        for code in 0..3usize.pow(4) {
            let m = Mat::from_code(2, 3, code);
            let d = m.det(&f);
            let direct = f.sub(f.mul(m.get(0, 0), m.get(1, 1)), f.mul(m.get(0, 1), m.get(1, 0)));
            assert_eq!(d, direct);
            assert_eq!(m.inverse(&f).is_some(), d != 0);
            if let Some(inv) = m.inverse(&f) {
                assert!(m.mul(&inv, &f).is_identity());
            }
            assert_eq!(Mat::from_code(2, 3, m.code(3)), m);
        }
    }

    #[test]
    fn char_poly_2x2() {
        let f = f(5);
        let m = Mat::from_rows(&[vec![1, 2], vec![3, 4]]);
        // x^2 - 5x - 2 = x^2 + 3 over F_5
        assert_eq!(m.char_poly(&f), vec![3, 0, 1]);
        assert!(is_squarefree(&m.char_poly(&f), &f));
        assert!(!is_squarefree(&Mat::identity(2).char_poly(&f), &f));
    }

    #[test]
    fn squarefree_char_two() {
        let f = f(2);
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(!is_squarefree(&[1, 0, 1], &f));
        assert!(is_squarefree(&[1, 1, 1], &f));
        assert!(is_squarefree(&[0, 1, 1], &f));
    }
}
