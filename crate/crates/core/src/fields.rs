//! Finite fields `F_q` and a tower of extensions `F_{q^n}` with compatible
//! embeddings and the geometric Frobenius `x ↦ x^q`.
//!
//! Every level is stored as `F_p[x]/(f)` for a monic irreducible `f` over the
//! prime field, so elements of all levels share one representation: a dense
//! vector of residues modulo `p`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest degree over the prime field that a level may have.
pub const MAX_DEGREE: usize = 24;

/// Default refusal threshold for the size of the top level of a tower.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 24;

/// A polynomial residue of degree `< MAX_DEGREE` over `F_p`.
///
/// The meaning of the coefficients depends on the [`FieldSpec`] the element
/// belongs to; unused high coefficients are always zero so equality is
/// structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: [u8; MAX_DEGREE],
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { coeffs: [0; MAX_DEGREE] };

    pub fn one() -> Self {
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    pub fn coeffs(&self) -> &[u8; MAX_DEGREE] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
        write!(f, "F{:?}", &self.coeffs[..=last])
    }
}

/// One field `F_{p^d}` realized as `F_p[x]/(modulus)`.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    p: u32,
    degree: usize,
    /// Monic modulus, `degree + 1` coefficients from the constant term up.
    modulus: Vec<u8>,
    generator: FieldElement,
    size: u64,
    /// `p^i` for packing elements into integer indices.
    powers: Vec<u64>,
}

impl FieldSpec {
    /// Builds `F_{p^degree}` using the smallest monic irreducible modulus.
    pub fn new(p: u32, degree: usize) -> Result<Self> {
        if !is_prime(p as u64) || p > 251 {
            return Err(Error::InvalidInput(format!("{p} is not a supported prime")));
        }
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::Budget(format!("extension degree {degree} unsupported")));
        }
        let modulus = smallest_irreducible(p, degree);
        Self::with_modulus(p, modulus)
    }

    /// Builds a field from an explicit modulus; the modulus is checked for
    /// irreducibility by trial division.
    pub fn with_modulus(p: u32, modulus: Vec<u8>) -> Result<Self> {
        let degree = modulus.len() - 1;
        if modulus[degree] != 1 {
            return Err(Error::InvalidInput("modulus must be monic".into()));
        }
        let poly: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
        if !is_irreducible(&poly, p) {
            return Err(Error::InvalidInput("modulus is reducible".into()));
        }
        let size = (p as u64).pow(degree as u32);
        let powers = (0..=degree).map(|i| (p as u64).pow(i as u32)).collect();
        let mut spec = FieldSpec {
            p,
            degree,
            modulus,
            generator: FieldElement::one(),
            size,
            powers,
        };
        spec.generator = spec.find_generator();
        Ok(spec)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// The fixed multiplicative generator (smallest element of full order).
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// The class of `x` itself, a generator of the field over `F_p`.
    pub fn primitive_x(&self) -> FieldElement {
        let mut e = FieldElement::ZERO;
        if self.degree == 1 {
            // x ≡ -modulus[0]
            e.coeffs[0] = ((self.p - self.modulus[0] as u32) % self.p) as u8;
        } else {
            e.coeffs[1] = 1;
        }
        e
    }

    /// Packs an element into `0..size` (base-`p` digits, constant term lowest).
    pub fn index_of(&self, x: &FieldElement) -> u64 {
        (0..self.degree).map(|i| x.coeffs[i] as u64 * self.powers[i]).sum()
    }

    pub fn element(&self, mut index: u64) -> FieldElement {
        let mut e = FieldElement::ZERO;
        for i in 0..self.degree {
            e.coeffs[i] = (index % self.p as u64) as u8;
            index /= self.p as u64;
        }
        e
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.coeffs[..self.degree].iter().all(|&c| (c as u32) < self.p)
            && x.coeffs[self.degree..].iter().all(|&c| c == 0)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size).map(move |i| self.element(i))
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        let mut e = FieldElement::ZERO;
        e.coeffs[0] = v.rem_euclid(self.p as i64) as u8;
        e
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut r = FieldElement::ZERO;
        let p = self.p as u16;
        for i in 0..self.degree {
            r.coeffs[i] = ((a.coeffs[i] as u16 + b.coeffs[i] as u16) % p) as u8;
        }
        r
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let mut r = FieldElement::ZERO;
        for i in 0..self.degree {
            let c = a.coeffs[i] as u32;
            r.coeffs[i] = ((self.p - c) % self.p) as u8;
        }
        r
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree;
        let p = self.p;
        let mut acc = [0u32; 2 * MAX_DEGREE];
        for i in 0..d {
            let ai = a.coeffs[i] as u32;
            if ai == 0 {
                continue;
            }
            for j in 0..d {
                acc[i + j] += ai * b.coeffs[j] as u32;
            }
        }
        if d > 1 {
            for top in (d..2 * d - 1).rev() {
                let c = acc[top] % p;
                acc[top] = 0;
                if c == 0 {
                    continue;
                }
                let neg = p - c;
                for j in 0..d {
                    acc[top - d + j] += neg * self.modulus[j] as u32;
                }
                // keep the accumulators small
                for j in 0..d {
                    acc[top - d + j] %= p;
                }
            }
        }
        let mut r = FieldElement::ZERO;
        for i in 0..d {
            r.coeffs[i] = (acc[i] % p) as u8;
        }
        r
    }

    pub fn scale(&self, a: &FieldElement, k: u32) -> FieldElement {
        let mut r = FieldElement::ZERO;
        for i in 0..self.degree {
            r.coeffs[i] = ((a.coeffs[i] as u32 * (k % self.p)) % self.p) as u8;
        }
        r
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut base = *a;
        let mut r = FieldElement::one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, (self.size - 2) as u128))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FieldElement) -> u64 {
        let n = self.size - 1;
        let mut ord = n;
        for (prime, _) in factorize(n) {
            while ord % prime == 0 && self.pow(a, (ord / prime) as u128) == FieldElement::one() {
                ord /= prime;
            }
        }
        ord
    }

    /// The trace-class map `x ↦ x^p`.
    pub fn frobenius_p(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p as u128)
    }

    fn find_generator(&self) -> FieldElement {
        let n = self.size - 1;
        if n == 1 {
            return FieldElement::one();
        }
        let primes: Vec<u64> = factorize(n).into_keys().collect();
        for idx in 1..self.size {
            let x = self.element(idx);
            if primes
                .iter()
                .all(|&r| self.pow(&x, (n / r) as u128) != FieldElement::one())
            {
                return x;
            }
        }
        unreachable!("a finite field always has a generator")
    }

    /// Evaluates a polynomial with coefficients in this field (constant first).
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
        let mut r = FieldElement::ZERO;
        for c in coeffs.iter().rev() {
            r = self.add(&self.mul(&r, x), c);
        }
        r
    }
}

/// An injective field homomorphism from one level into another, stored as the
/// images of the power basis `1, x, …, x^{d-1}` of the source.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub from_level: usize,
    pub to_level: usize,
    images: Vec<FieldElement>,
}

impl Embedding {
    fn apply(&self, target: &FieldSpec, x: &FieldElement) -> FieldElement {
        let mut r = FieldElement::ZERO;
        for (i, img) in self.images.iter().enumerate() {
            let c = x.coeffs[i];
            if c != 0 {
                r = target.add(&r, &target.scale(img, c as u32));
            }
        }
        r
    }
}

/// `F_q` together with `F_{q^n}` for `n = 1..=max_level` and compatible
/// embeddings `F_{q^a} ↪ F_{q^b}` for all `a | b`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u32,
    base_degree: usize,
    q: u64,
    levels: Vec<FieldSpec>,
    embeddings: BTreeMap<(usize, usize), Embedding>,
    /// Per level: images of the power basis under `x ↦ x^q`.
    frobenius_tables: Vec<Vec<FieldElement>>,
}

/// Builds the tower `F_{p^k} ⊂ F_{p^{2k}} ⊂ …` up to `max_level`.
pub fn make_tower(p: u32, k: usize, max_level: usize) -> Result<FieldTower> {
    FieldTower::new(p, k, max_level, field_budget())
}

/// Field budget, overridable through `DLCHAR_BUDGET`.
pub fn field_budget() -> u64 {
    std::env::var("DLCHAR_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .map(|b: u64| b.min(1 << 30))
        .unwrap_or(DEFAULT_FIELD_BUDGET)
}

impl FieldTower {
    pub fn new(p: u32, k: usize, max_level: usize, budget: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if k == 0 || max_level == 0 {
            return Err(Error::InvalidInput("degrees must be positive".into()));
        }
        let top_degree = k * max_level;
        let top_size = (p as f64).powi(top_degree as i32);
        if top_degree > MAX_DEGREE || top_size > budget as f64 {
            return Err(Error::Budget(format!(
                "tower top level {p}^{top_degree} exceeds the field budget {budget}"
            )));
        }
        let levels = (1..=max_level)
            .map(|n| FieldSpec::new(p, k * n))
            .collect::<Result<Vec<_>>>()?;
        let q = (p as u64).pow(k as u32);
        let mut tower = FieldTower {
            p,
            base_degree: k,
            q,
            levels,
            embeddings: BTreeMap::new(),
            frobenius_tables: Vec::new(),
        };
        tower.frobenius_tables = tower
            .levels
            .iter()
            .map(|spec| {
                (0..spec.degree)
                    .map(|i| {
                        let mut xi = FieldElement::ZERO;
                        if spec.degree == 1 {
                            xi = FieldElement::one();
                            if i > 0 {
                                xi = spec.pow(&spec.primitive_x(), i as u128);
                            }
                        } else {
                            xi.coeffs[i] = 1;
                        }
                        spec.pow(&xi, q as u128)
                    })
                    .collect()
            })
            .collect();
        tower.build_embeddings()?;
        Ok(tower)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree of the base field over `F_p`.
    pub fn base_degree(&self) -> usize {
        self.base_degree
    }

    /// Size of the base field.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> Result<&FieldSpec> {
        if n == 0 || n > self.levels.len() {
            return Err(Error::Unsupported(format!(
                "level {n} is not in the tower (max {})",
                self.levels.len()
            )));
        }
        Ok(&self.levels[n - 1])
    }

    pub fn base(&self) -> &FieldSpec {
        &self.levels[0]
    }

    fn check(&self, level: usize, x: &FieldElement) -> Result<&FieldSpec> {
        let spec = self.level(level)?;
        if !spec.contains(x) {
            return Err(Error::InvalidInput(format!("element {x:?} is not in level {level}")));
        }
        Ok(spec)
    }

    /// Geometric Frobenius `x ↦ x^q` on level `level`.
    pub fn frobenius(&self, level: usize, x: &FieldElement) -> Result<FieldElement> {
        let spec = self.check(level, x)?;
        Ok(self.frobenius_unchecked(level, spec, x))
    }

    pub(crate) fn frobenius_unchecked(
        &self,
        level: usize,
        spec: &FieldSpec,
        x: &FieldElement,
    ) -> FieldElement {
        let table = &self.frobenius_tables[level - 1];
        let mut r = FieldElement::ZERO;
        for (i, img) in table.iter().enumerate() {
            let c = x.coeffs[i];
            if c != 0 {
                r = spec.add(&r, &spec.scale(img, c as u32));
            }
        }
        r
    }

    /// `x ↦ x^{q^j}`.
    pub fn frobenius_power(&self, level: usize, x: &FieldElement, j: usize) -> Result<FieldElement> {
        let spec = self.check(level, x)?;
        let mut r = *x;
        for _ in 0..j % level {
            r = self.frobenius_unchecked(level, spec, &r);
        }
        Ok(r)
    }

    /// Image of `x ∈ F_{q^a}` in `F_{q^b}` under the fixed compatible embedding.
    pub fn embed(&self, from_level: usize, to_level: usize, x: &FieldElement) -> Result<FieldElement> {
        self.check(from_level, x)?;
        let target = self.level(to_level)?;
        if to_level % from_level != 0 {
            return Err(Error::InvalidInput(format!(
                "level {from_level} does not divide level {to_level}"
            )));
        }
        if from_level == to_level {
            return Ok(*x);
        }
        Ok(self.embeddings[&(from_level, to_level)].apply(target, x))
    }

    /// Inverse of [`FieldTower::embed`]: returns `Some(y)` when `x` lies in the
    /// image of level `from_level`.
    pub fn restrict(&self, from_level: usize, to_level: usize, x: &FieldElement) -> Result<Option<FieldElement>> {
        let small = self.level(from_level)?;
        if to_level % from_level != 0 {
            return Err(Error::InvalidInput(format!(
                "level {from_level} does not divide level {to_level}"
            )));
        }
        self.check(to_level, x)?;
        if from_level == to_level {
            return Ok(Some(*x));
        }
        // solve the F_p-linear system  Σ c_i img_i = x
        let emb = &self.embeddings[&(from_level, to_level)];
        let d_small = small.degree;
        let d_big = self.level(to_level)?.degree;
        let p = self.p as i64;
        // columns: images, augmented with x
        let mut rows: Vec<Vec<i64>> = (0..d_big)
            .map(|r| {
                let mut row: Vec<i64> = emb.images.iter().map(|img| img.coeffs[r] as i64).collect();
                row.push(x.coeffs[r] as i64);
                row
            })
            .collect();
        let sol = solve_mod_p(&mut rows, d_small, p);
        Ok(sol.map(|c| {
            let mut e = FieldElement::ZERO;
            for (i, v) in c.into_iter().enumerate() {
                e.coeffs[i] = v as u8;
            }
            e
        }))
    }

    /// Fixes the compatible system of embeddings, level by level.
    fn build_embeddings(&mut self) -> Result<()> {
        let max = self.levels.len();
        for b in 2..=max {
            let mut divisors: Vec<usize> = (1..b).filter(|a| b % a == 0).collect();
            divisors.sort_unstable_by(|x, y| y.cmp(x));
            let mut chosen: BTreeMap<usize, Embedding> = BTreeMap::new();
            for &a in &divisors {
                // forced through a larger divisor already embedded
                if let Some((&a2, e2)) = chosen.iter().find(|(&a2, _)| a2 % a == 0) {
                    let inner = &self.embeddings[&(a, a2)];
                    let target = &self.levels[b - 1];
                    let mid = &self.levels[a2 - 1];
                    let images = inner
                        .images
                        .iter()
                        .map(|img| {
                            debug_assert!(mid.contains(img));
                            e2.apply(target, img)
                        })
                        .collect();
                    chosen.insert(a, Embedding { from_level: a, to_level: b, images });
                    continue;
                }
                let roots = self.roots_of_level_modulus(a, b);
                let target = &self.levels[b - 1];
                let mut picked = None;
                'roots: for r in roots {
                    let candidate = power_basis_images(target, &r, self.levels[a - 1].degree);
                    let cand = Embedding { from_level: a, to_level: b, images: candidate };
                    for (&a2, e2) in &chosen {
                        let g = gcd(a as u64, a2 as u64) as usize;
                        let xg = self.levels[g - 1].primitive_x();
                        let via_a = if g == a { xg } else { self.embeddings[&(g, a)].apply(&self.levels[a - 1], &xg) };
                        let via_a2 = if g == a2 { xg } else { self.embeddings[&(g, a2)].apply(&self.levels[a2 - 1], &xg) };
                        if cand.apply(target, &via_a) != e2.apply(target, &via_a2) {
                            continue 'roots;
                        }
                    }
                    picked = Some(cand);
                    break;
                }
                let emb = picked.ok_or_else(|| {
                    Error::Internal(format!("no compatible embedding of level {a} into level {b}"))
                })?;
                chosen.insert(a, emb);
            }
            for (a, e) in chosen {
                self.embeddings.insert((a, b), e);
            }
        }
        Ok(())
    }

    /// Roots in level `b` of the modulus defining level `a`, in a fixed order.
    fn roots_of_level_modulus(&self, a: usize, b: usize) -> Vec<FieldElement> {
        let big = &self.levels[b - 1];
        let small = &self.levels[a - 1];
        let poly: Vec<FieldElement> = small.modulus.iter().map(|&c| big.from_int(c as i64)).collect();
        // the subfield of size |small| is generated by g^((|big|-1)/(|small|-1))
        let step = (big.size - 1) / (small.size - 1);
        let h = big.pow(&big.generator, step as u128);
        let mut roots = Vec::new();
        if big.eval_poly(&poly, &FieldElement::ZERO).is_zero() {
            roots.push(FieldElement::ZERO);
        }
        let mut y = FieldElement::one();
        for _ in 0..(small.size - 1) {
            if big.eval_poly(&poly, &y).is_zero() {
                roots.push(y);
            }
            y = big.mul(&y, &h);
        }
        roots
    }

    /// Trace `F_{q^level} → F_q` (result as an element of `level`).
    pub fn trace_to_base(&self, level: usize, x: &FieldElement) -> Result<FieldElement> {
        let spec = self.check(level, x)?;
        let mut acc = FieldElement::ZERO;
        let mut y = *x;
        for _ in 0..level {
            acc = spec.add(&acc, &y);
            y = self.frobenius_unchecked(level, spec, &y);
        }
        Ok(acc)
    }
}

fn power_basis_images(target: &FieldSpec, r: &FieldElement, d: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(d);
    let mut acc = FieldElement::one();
    for _ in 0..d {
        out.push(acc);
        acc = target.mul(&acc, r);
    }
    out
}

/// Gaussian elimination on an augmented matrix over `F_p`; `n` unknowns.
fn solve_mod_p(rows: &mut [Vec<i64>], n: usize, p: i64) -> Option<Vec<i64>> {
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..m).find(|&i| rows[i][c] % p != 0) else { continue };
        rows.swap(r, pr);
        let inv = mod_inv(rows[r][c].rem_euclid(p), p);
        for v in rows[r].iter_mut() {
            *v = (*v * inv).rem_euclid(p);
        }
        for i in 0..m {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..=n {
                    rows[i][j] = (rows[i][j] - f * rows[r][j]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut sol = vec![0; n];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][n];
    }
    Some(sol)
}

pub(crate) fn mod_inv(a: i64, p: i64) -> i64 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i64, 1i64, p, a.rem_euclid(p));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

// Dense polynomials over F_p with u32 coefficients, constant term first.

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u32> = a.to_vec();
    if r.len() <= dm {
        return poly_trim(r);
    }
    for top in (dm..r.len()).rev() {
        let c = r[top] % p;
        if c == 0 {
            continue;
        }
        for j in 0..=dm {
            let idx = top - dm + j;
            r[idx] = (r[idx] + (p - c) * m[j]) % p;
        }
    }
    r.truncate(dm.max(1));
    poly_trim(r)
}

/// Irreducibility by trial division through every monic divisor of degree
/// at most half the degree.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut g = vec![0u32; k + 1];
            let mut v = idx;
            for c in g.iter_mut().take(k) {
                *c = (v % p as u64) as u32;
                v /= p as u64;
            }
            g[k] = 1;
            let r = poly_rem_monic(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible of the given degree, ordering candidates by
/// the integer `Σ a_i p^i` of their non-leading coefficients.
pub fn smallest_irreducible(p: u32, degree: usize) -> Vec<u8> {
    let count = (p as u64).pow(degree as u32);
    for idx in 0..count {
        let mut f = vec![0u32; degree + 1];
        let mut v = idx;
        for c in f.iter_mut().take(degree) {
            *c = (v % p as u64) as u32;
            v /= p as u64;
        }
        f[degree] = 1;
        if is_irreducible(&f, p) {
            return f.into_iter().map(|c| c as u8).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus_and_frobenius() {
        let t = make_tower(2, 1, 2).unwrap();
        let f4 = t.level(2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.size(), 4);
        let x = f4.primitive_x();
        let fx = t.frobenius(2, &x).unwrap();
        assert_eq!(fx, f4.add(&x, &FieldElement::one()));
    }

    #[test]
    fn f3_elements() {
        let t = make_tower(3, 1, 1).unwrap();
        let els: Vec<u64> = t.base().elements().map(|e| t.base().index_of(&e)).collect();
        assert_eq!(els, vec![0, 1, 2]);
    }

    #[test]
    fn f4_tower_to_f64() {
        let t = make_tower(2, 2, 3).unwrap();
        assert_eq!(t.q(), 4);
        assert_eq!(t.level(3).unwrap().size(), 64);
        assert_eq!(t.level(2).unwrap().size(), 16);
    }

    #[test]
    fn frobenius_fixes_base_and_generator_power() {
        let t = make_tower(3, 1, 2).unwrap();
        let f9 = t.level(2).unwrap();
        for b in t.base().elements() {
            let e = t.embed(1, 2, &b).unwrap();
            assert_eq!(t.frobenius(2, &e).unwrap(), e);
        }
        let g = f9.generator();
        let g3 = t.frobenius(2, &g).unwrap();
        assert_eq!(g3, f9.pow(&g, 3));
        assert_eq!(f9.order(&g3), 8);
    }

    #[test]
    fn embedding_preserves_order_and_units() {
        let t = make_tower(2, 1, 4).unwrap();
        let f4 = t.level(2).unwrap();
        let f16 = t.level(4).unwrap();
        let img = t.embed(2, 4, &f4.generator()).unwrap();
        assert_eq!(f16.order(&img), 3);
        assert_eq!(t.embed(2, 4, &FieldElement::ZERO).unwrap(), FieldElement::ZERO);
        assert_eq!(t.embed(2, 4, &FieldElement::one()).unwrap(), FieldElement::one());
    }

    #[test]
    fn embeddings_commute() {
        for (p, k, max) in [(2, 1, 6), (3, 1, 4), (2, 2, 4), (5, 1, 4)] {
            let t = make_tower(p, k, max).unwrap();
            for a in 1..=max {
                for b in (a..=max).filter(|b| b % a == 0) {
                    for c in (b..=max).filter(|c| c % b == 0) {
                        for x in t.level(a).unwrap().elements().take(200) {
                            let direct = t.embed(a, c, &x).unwrap();
                            let two = t.embed(b, c, &t.embed(a, b, &x).unwrap()).unwrap();
                            assert_eq!(direct, two, "p={p} {a}->{b}->{c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn embeddings_are_homomorphisms_commuting_with_frobenius() {
        let t = make_tower(3, 1, 4).unwrap();
        let (a, b) = (2, 4);
        let small = t.level(a).unwrap();
        let big = t.level(b).unwrap();
        for x in small.elements() {
            for y in small.elements().step_by(3) {
                let ex = t.embed(a, b, &x).unwrap();
                let ey = t.embed(a, b, &y).unwrap();
                assert_eq!(t.embed(a, b, &small.mul(&x, &y)).unwrap(), big.mul(&ex, &ey));
                assert_eq!(t.embed(a, b, &small.add(&x, &y)).unwrap(), big.add(&ex, &ey));
            }
            let fx = t.frobenius(a, &x).unwrap();
            assert_eq!(t.embed(a, b, &fx).unwrap(), t.frobenius(b, &t.embed(a, b, &x).unwrap()).unwrap());
        }
    }

    #[test]
    fn frobenius_powers_fix_gcd_subfields() {
        let t = make_tower(2, 1, 6).unwrap();
        for m in 1..=6usize {
            let spec = t.level(m).unwrap();
            for n in 1..=6usize {
                let fixed = spec
                    .elements()
                    .filter(|x| t.frobenius_power(m, x, n).unwrap() == *x)
                    .count() as u64;
                assert_eq!(fixed, 2u64.pow(gcd(n as u64, m as u64) as u32));
            }
        }
    }

    #[test]
    fn inverses_exhaustive() {
        let t = make_tower(2, 1, 8).unwrap();
        let f = t.level(8).unwrap();
        for x in f.elements().skip(1) {
            assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), FieldElement::one());
        }
        assert!(f.inv(&FieldElement::ZERO).is_err());
    }

    #[test]
    fn restrict_inverts_embed() {
        let t = make_tower(5, 1, 4).unwrap();
        for x in t.level(2).unwrap().elements() {
            let e = t.embed(2, 4, &x).unwrap();
            assert_eq!(t.restrict(2, 4, &e).unwrap(), Some(x));
        }
        let g = t.level(4).unwrap().generator();
        assert_eq!(t.restrict(2, 4, &g).unwrap(), None);
    }

    #[test]
    fn errors() {
        assert!(matches!(make_tower(4, 1, 1), Err(Error::InvalidInput(_))));
        assert!(matches!(make_tower(2, 1, 30), Err(Error::Budget(_))));
        let t = make_tower(2, 1, 4).unwrap();
        assert!(t.embed(3, 4, &FieldElement::ZERO).is_err());
        assert!(t.frobenius(5, &FieldElement::ZERO).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn field_axioms(a in 0u64..625, b in 0u64..625, c in 0u64..625) {
                let f = FieldSpec::new(5, 4).unwrap();
                let (a, b, c) = (f.element(a), f.element(b), f.element(c));
                prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                prop_assert_eq!(f.add(&a, &f.neg(&a)), FieldElement::ZERO);
            }
        }
    }
}
