//! Matrices over a level `F_{q^m}` of a field tower, with the entrywise
//! Frobenius. Used for points of `G` over extensions and for conjugators that
//! are not rational.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldSpec, FieldTower};

use super::mat::{Mat, MAX_N};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtMat {
    n: u8,
    e: [FieldElement; MAX_N * MAX_N],
}

impl fmt::Debug for ExtMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        let rows: Vec<Vec<FieldElement>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
        write!(f, "{rows:?}")
    }
}

impl ExtMat {
    pub fn zero(n: usize) -> Self {
        ExtMat { n: n as u8, e: [FieldElement::ZERO; MAX_N * MAX_N] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, FieldElement::one());
        }
        m
    }

    pub fn diagonal(d: &[FieldElement]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, *x);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.e[i * self.n as usize + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.e[i * self.n as usize + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.n()).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(cols: &[Vec<FieldElement>]) -> Self {
        let n = cols.len();
        let mut m = Self::zero(n);
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, *x);
            }
        }
        m
    }

    /// Image of a base-field matrix in level `level`.
    pub fn from_base(tower: &FieldTower, level: usize, m: &Mat) -> Result<Self> {
        let base = tower.base();
        let n = m.n();
        let mut r = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let x = base.element(m.get(i, j) as u64);
                r.set(i, j, tower.embed(1, level, &x)?);
            }
        }
        Ok(r)
    }

    /// Back to a base-field matrix, if every entry is rational.
    pub fn to_base(&self, tower: &FieldTower, level: usize) -> Result<Option<Mat>> {
        let n = self.n();
        let mut m = Mat::zero(n);
        let base = tower.base();
        for i in 0..n {
            for j in 0..n {
                match tower.restrict(1, level, &self.get(i, j))? {
                    Some(x) => m.set(i, j, base.index_of(&x) as u8),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(m))
    }

    /// Moves all entries from level `a` to level `b` (`a | b`).
    pub fn embed(&self, tower: &FieldTower, a: usize, b: usize) -> Result<Self> {
        let mut r = *self;
        for x in r.e[..self.n() * self.n()].iter_mut() {
            *x = tower.embed(a, b, x)?;
        }
        Ok(r)
    }

    pub fn mul(&self, other: &ExtMat, f: &FieldSpec) -> ExtMat {
        let n = self.n();
        let mut r = ExtMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElement::ZERO;
                for k in 0..n {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = f.add(&acc, &f.mul(&a, &other.get(k, j)));
                    }
                }
                r.set(i, j, acc);
            }
        }
        r
    }

    pub fn apply(&self, v: &[FieldElement], f: &FieldSpec) -> Vec<FieldElement> {
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..n).fold(FieldElement::ZERO, |acc, k| f.add(&acc, &f.mul(&self.get(i, k), &v[k])))
            })
            .collect()
    }

    pub fn sub(&self, other: &ExtMat, f: &FieldSpec) -> ExtMat {
        let mut r = *self;
        for i in 0..self.n() * self.n() {
            r.e[i] = f.sub(&self.e[i], &other.e[i]);
        }
        r
    }

    pub fn scale(&self, c: &FieldElement, f: &FieldSpec) -> ExtMat {
        let mut r = *self;
        for i in 0..self.n() * self.n() {
            r.e[i] = f.mul(&self.e[i], c);
        }
        r
    }

    pub fn det(&self, f: &FieldSpec) -> FieldElement {
        let n = self.n();
        let mut a: Vec<Vec<FieldElement>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
        let mut det = FieldElement::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return FieldElement::ZERO;
            };
            if piv != c {
                a.swap(piv, c);
                det = f.neg(&det);
            }
            det = f.mul(&det, &a[c][c]);
            let inv = f.inv(&a[c][c]).unwrap();
            for r in c + 1..n {
                if !a[r][c].is_zero() {
                    let factor = f.mul(&a[r][c], &inv);
                    for k in c..n {
                        let t = f.mul(&factor, &a[c][k]);
                        a[r][k] = f.sub(&a[r][k], &t);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &FieldSpec) -> Result<ExtMat> {
        let n = self.n();
        let mut a: Vec<Vec<FieldElement>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
        let mut b: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { FieldElement::one() } else { FieldElement::ZERO }).collect())
            .collect();
        for c in 0..n {
            let piv = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or_else(|| Error::InvalidInput("singular matrix".into()))?;
            a.swap(piv, c);
            b.swap(piv, c);
            let inv = f.inv(&a[c][c])?;
            for k in 0..n {
                a[c][k] = f.mul(&a[c][k], &inv);
                b[c][k] = f.mul(&b[c][k], &inv);
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let factor = a[r][c];
                    for k in 0..n {
                        let ta = f.mul(&factor, &a[c][k]);
                        a[r][k] = f.sub(&a[r][k], &ta);
                        let tb = f.mul(&factor, &b[c][k]);
                        b[r][k] = f.sub(&b[r][k], &tb);
                    }
                }
            }
        }
        let mut m = ExtMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, b[i][j]);
            }
        }
        Ok(m)
    }

    /// Entrywise `x ↦ x^q`.
    pub fn frobenius(&self, tower: &FieldTower, level: usize) -> Result<ExtMat> {
        let mut r = *self;
        for x in r.e[..self.n() * self.n()].iter_mut() {
            *x = tower.frobenius(level, x)?;
        }
        Ok(r)
    }

    pub fn is_identity(&self) -> bool {
        *self == ExtMat::identity(self.n())
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    /// The permutation `σ` with `self = Σ c_i E_{σ(i), i}` if the matrix is
    /// monomial.
    pub fn monomial_permutation(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut perm = Vec::with_capacity(n);
        for j in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&i| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            perm.push(nz[0]);
        }
        Some(perm)
    }

    /// A nonzero vector of `ker(self)`, if the kernel is nontrivial.
    pub fn kernel_vector(&self, f: &FieldSpec) -> Option<Vec<FieldElement>> {
        let n = self.n();
        let mut a: Vec<Vec<FieldElement>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(piv) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(piv, r);
            let inv = f.inv(&a[r][c]).unwrap();
            for k in 0..n {
                a[r][k] = f.mul(&a[r][k], &inv);
            }
            for i in 0..n {
                if i != r && !a[i][c].is_zero() {
                    let factor = a[i][c];
                    for k in 0..n {
                        let t = f.mul(&factor, &a[r][k]);
                        a[i][k] = f.sub(&a[i][k], &t);
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let free = (0..n).find(|c| !pivot_cols.contains(c))?;
        let mut v = vec![FieldElement::ZERO; n];
        v[free] = FieldElement::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = f.neg(&a[row][free]);
        }
        Some(v)
    }
}

/// Permutation matrix with `1` at `(perm[j], j)`.
pub fn permutation_matrix(perm: &[usize]) -> ExtMat {
    let mut m = ExtMat::zero(perm.len());
    for (j, &i) in perm.iter().enumerate() {
        m.set(i, j, FieldElement::one());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_tower;

    #[test]
    fn inverse_and_kernel() {
        let t = make_tower(3, 1, 2).unwrap();
        let f = t.level(2).unwrap();
        let g = f.generator();
        let mut m = ExtMat::identity(2);
        m.set(0, 1, g);
        m.set(1, 0, f.mul(&g, &g));
        let inv = m.inverse(f).unwrap();
        assert!(m.mul(&inv, f).is_identity());
        // singular: second column a multiple of the first
        let mut s = ExtMat::zero(2);
        s.set(0, 0, FieldElement::one());
        s.set(1, 0, g);
        s.set(0, 1, g);
        s.set(1, 1, f.mul(&g, &g));
        assert!(s.det(f).is_zero());
        let v = s.kernel_vector(f).unwrap();
        assert!(s.apply(&v, f).iter().all(|x| x.is_zero()));
        assert!(m.kernel_vector(f).is_none());
    }

    #[test]
    fn base_roundtrip_and_frobenius() {
        let t = make_tower(2, 1, 2).unwrap();
        let m = Mat::from_rows(&[vec![1, 1], vec![0, 1]]);
        let e = ExtMat::from_base(&t, 2, &m).unwrap();
        assert_eq!(e.frobenius(&t, 2).unwrap(), e);
        assert_eq!(e.to_base(&t, 2).unwrap(), Some(m));
        let mut x = ExtMat::identity(2);
        x.set(0, 1, t.level(2).unwrap().generator());
        assert_eq!(x.to_base(&t, 2).unwrap(), None);
        assert_ne!(x.frobenius(&t, 2).unwrap(), x);
    }
}
