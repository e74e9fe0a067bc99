//! Cyclotomic-valued class functions on enumerated groups: pairings,
//! induction, Harish-Chandra induction and restriction, convolution, the
//! Springer functions and the intertwiners between functions on `G/N(P)`.
//!
//! Linear operators are materialized as rational matrices on the delta
//! basis (indicators of classes), so identities "on the full delta basis"
//! become exact matrix identities.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::{parabolic_with_block_order, standard_parabolic, GroupTable, ParabolicData};

#[derive(Clone, Debug)]
pub struct ClassFunction {
    group: Arc<GroupTable>,
    values: Vec<Cyclotomic>,
}

pub fn same_group(a: &GroupTable, b: &GroupTable) -> bool {
    std::ptr::eq(a, b) || (a.label() == b.label() && a.order() == b.order() && a.elements() == b.elements())
}

fn check_same(a: &GroupTable, b: &GroupTable) -> Result<()> {
    if same_group(a, b) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("group mismatch: {} vs {}", a.label(), b.label())))
    }
}

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

impl ClassFunction {
    pub fn new(group: &Arc<GroupTable>, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != group.num_classes() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} classes",
                values.len(),
                group.num_classes()
            )));
        }
        Ok(ClassFunction { group: group.clone(), values })
    }

    pub fn zero(group: &Arc<GroupTable>) -> Self {
        ClassFunction { group: group.clone(), values: vec![Cyclotomic::zero(); group.num_classes()] }
    }

    pub fn constant(group: &Arc<GroupTable>, c: Cyclotomic) -> Self {
        ClassFunction { group: group.clone(), values: vec![c; group.num_classes()] }
    }

    pub fn trivial(group: &Arc<GroupTable>) -> Self {
        Self::constant(group, Cyclotomic::one())
    }

    /// Indicator of one class.
    pub fn delta(group: &Arc<GroupTable>, class: usize) -> Self {
        let mut f = Self::zero(group);
        f.values[class] = Cyclotomic::one();
        f
    }

    /// The indicator of the identity element; the unit for convolution.
    pub fn identity_unit(group: &Arc<GroupTable>) -> Self {
        Self::delta(group, group.identity_class())
    }

    pub fn regular(group: &Arc<GroupTable>) -> Self {
        let mut f = Self::zero(group);
        f.values[group.identity_class()] = Cyclotomic::from_int(group.order() as i64);
        f
    }

    pub fn from_rationals(group: &Arc<GroupTable>, values: &[BigRational]) -> Result<Self> {
        Self::new(group, values.iter().map(Cyclotomic::from_rational).collect())
    }

    /// Builds a class function from values on every element, checking that
    /// they are constant on classes.
    pub fn from_element_values(group: &Arc<GroupTable>, values: &[Cyclotomic]) -> Result<Self> {
        if values.len() as u64 != group.order() {
            return Err(Error::InvalidInput("one value per element required".into()));
        }
        for c in group.classes() {
            let v = &values[c.rep_index as usize];
            if c.members.iter().any(|&x| &values[x as usize] != v) {
                return Err(Error::Internal(format!(
                    "values not constant on the class of {:?}",
                    c.representative
                )));
            }
        }
        let vals = group.classes().iter().map(|c| values[c.rep_index as usize].clone()).collect();
        Ok(ClassFunction { group: group.clone(), values: vals })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    /// Value at an element index.
    pub fn at(&self, x: u32) -> &Cyclotomic {
        &self.values[self.group.class_of(x)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    fn zip(&self, other: &Self, op: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> Result<Self> {
        check_same(&self.group, &other.group)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect();
        Ok(ClassFunction { group: self.group.clone(), values })
    }

    fn map(&self, op: impl Fn(&Cyclotomic) -> Cyclotomic) -> Self {
        ClassFunction { group: self.group.clone(), values: self.values.iter().map(op).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.sub(b))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.map(|a| a.scale_int(k))
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.map(|a| a.scale_rational(r))
    }

    /// Complex conjugate values.
    pub fn conj(&self) -> Self {
        self.map(|a| a.conjugate())
    }

    /// `g ↦ f(g^{-1})`.
    pub fn dual(&self) -> Self {
        let g = &self.group;
        let values = (0..g.num_classes()).map(|c| self.values[g.inverse_class(c)].clone()).collect();
        ClassFunction { group: g.clone(), values }
    }

    pub fn galois(&self, a: i64) -> Self {
        self.map(|x| x.galois(a))
    }

    /// Applies a rational matrix acting on delta-basis coordinates.
    pub fn apply_matrix(target: &Arc<GroupTable>, m: &RationalMatrix, f: &[Cyclotomic]) -> Result<Self> {
        if m.cols() != f.len() || m.rows() != target.num_classes() {
            return Err(Error::Internal("matrix shape mismatch".into()));
        }
        let values = (0..m.rows())
            .map(|i| {
                let mut acc = Cyclotomic::zero();
                for (j, v) in f.iter().enumerate() {
                    let a = &m.entries[i][j];
                    if !a.is_zero() && !v.is_zero() {
                        acc = acc.add(&v.scale_rational(a));
                    }
                }
                acc
            })
            .collect();
        ClassFunction::new(target, values)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.values.iter().map(|v| v.to_json()).collect())
    }

    pub fn from_json(group: &Arc<GroupTable>, v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::InvalidInput("class function must be an array".into()))?;
        let values = arr.iter().map(Cyclotomic::from_json).collect::<Result<Vec<_>>>()?;
        Self::new(group, values)
    }
}

/// `(1/|G|) Σ_x f(x) g(x)`, the pairing by invariants of the tensor product.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<Cyclotomic> {
    check_same(&f.group, &g.group)?;
    let grp = &f.group;
    let mut acc = Cyclotomic::zero();
    for (c, size) in grp.class_sizes().into_iter().enumerate() {
        let prod = f.values[c].mul(&g.values[c]);
        if !prod.is_zero() {
            acc = acc.add(&prod.scale_int(size as i64));
        }
    }
    acc.div_int(grp.order() as i64)
}

/// `(1/|G|) Σ_x f(x) conj(g(x))`.
pub fn hermitian_product(f: &ClassFunction, g: &ClassFunction) -> Result<Cyclotomic> {
    inner_product(f, &g.conj())
}

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub entries: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn zeros(r: usize, c: usize) -> Self {
        RationalMatrix { entries: vec![vec![BigRational::zero(); c]; r] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = BigRational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        let (r, k, c) = (self.rows(), self.cols(), other.cols());
        let mut out = Self::zeros(r, c);
        for i in 0..r {
            for t in 0..k {
                let a = &self.entries[i][t];
                if a.is_zero() {
                    continue;
                }
                for j in 0..c {
                    let b = &other.entries[t][j];
                    if !b.is_zero() {
                        out.entries[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> RationalMatrix {
        RationalMatrix { entries: self.entries.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_deviation(&self, other: &RationalMatrix) -> BigRational {
        let mut m = BigRational::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            for (x, y) in a.iter().zip(b) {
                let d = (x - y).abs();
                if d > m {
                    m = d;
                }
            }
        }
        m
    }

    fn echelon(&self) -> (Vec<Vec<BigRational>>, usize, BigRational) {
        let mut a = self.entries.clone();
        let (r, c) = (self.rows(), self.cols());
        let mut rank = 0;
        let mut det = BigRational::one();
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| !a[i][col].is_zero()) else {
                det = BigRational::zero();
                continue;
            };
            if p != rank {
                a.swap(p, rank);
                det = -det;
            }
            let piv = a[rank][col].clone();
            det *= &piv;
            for i in rank + 1..r {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = &a[i][col] / &piv;
                for j in col..c {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
            rank += 1;
        }
        (a, rank, det)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1
    }

    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows() != self.cols() {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let (_, rank, det) = self.echelon();
        Ok(if rank < self.rows() { BigRational::zero() } else { det })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
                .collect(),
        )
    }
}

/// Delta-basis matrix of a linear map on class functions given by its
/// values on each delta.
fn matrix_from_columns(rows: usize, columns: Vec<Vec<BigRational>>) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(rows, columns.len());
    for (j, col) in columns.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            m.entries[i][j] = v;
        }
    }
    m
}

/// A subgroup table together with its embedding into the ambient group.
#[derive(Clone, Debug)]
pub struct EmbeddedSubgroup {
    pub table: Arc<GroupTable>,
    /// Subgroup index to ambient index.
    pub embedding: Vec<u32>,
}

impl EmbeddedSubgroup {
    pub fn new(ambient: &GroupTable, table: Arc<GroupTable>) -> Result<Self> {
        let embedding = table
            .elements()
            .iter()
            .map(|m| {
                ambient
                    .index_of(m)
                    .ok_or_else(|| Error::InvalidInput("subgroup element outside the group".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(EmbeddedSubgroup { table, embedding })
    }

    pub fn levi(p: &ParabolicData) -> Self {
        EmbeddedSubgroup { table: p.levi.clone(), embedding: p.levi_embedding.clone() }
    }

    /// The parabolic `P(F_q)` as a group in its own right.
    pub fn parabolic(p: &ParabolicData) -> Result<Self> {
        let t = p.group.subgroup(format!("{} in {}", p.label(), p.group.label()), &p.p_points)?;
        Self::new(&p.group, Arc::new(t))
    }
}

/// `Ind(δ_j)(c) = |C_G(z_c)| / |H| · #{h ∈ C_j^H : h ∈ C_c^G}`.
pub fn induce_matrix(g: &GroupTable, sub: &EmbeddedSubgroup) -> RationalMatrix {
    let (r, s) = (g.num_classes(), sub.table.num_classes());
    let mut counts = vec![vec![0u64; s]; r];
    for (h, &x) in sub.embedding.iter().enumerate() {
        counts[g.class_of(x)][sub.table.class_of(h as u32)] += 1;
    }
    let mut m = RationalMatrix::zeros(r, s);
    for c in 0..r {
        let cent = g.classes()[c].centralizer_order;
        for j in 0..s {
            if counts[c][j] > 0 {
                m.entries[c][j] = ratio(cent * counts[c][j], sub.table.order());
            }
        }
    }
    m
}

pub fn induce(g: &Arc<GroupTable>, sub: &EmbeddedSubgroup, f: &ClassFunction) -> Result<ClassFunction> {
    check_same(&sub.table, &f.group)?;
    ClassFunction::apply_matrix(g, &induce_matrix(g, sub), &f.values)
}

pub fn restrict(sub: &EmbeddedSubgroup, f: &ClassFunction) -> Result<ClassFunction> {
    let values =
        sub.table.classes().iter().map(|c| f.at(sub.embedding[c.rep_index as usize]).clone()).collect();
    ClassFunction::new(&sub.table, values)
}

/// Pulls a Levi class function back to `P(F_q)` along the projection.
pub fn inflate(p: &ParabolicData, p_table: &EmbeddedSubgroup, f: &ClassFunction) -> Result<ClassFunction> {
    check_same(&p.levi, &f.group)?;
    let values = p_table
        .table
        .classes()
        .iter()
        .map(|c| {
            let x = p_table.embedding[c.rep_index as usize];
            let m = p.project(x).ok_or_else(|| Error::Internal("element outside P".into()))?;
            Ok(f.at(m).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(&p_table.table, values)
}

/// Delta-basis matrix of Harish-Chandra induction:
/// `(1/|P|) Σ_{x : x^{-1} g x ∈ P} f(π(x^{-1} g x))`.
pub fn hc_induce_matrix(p: &ParabolicData) -> RationalMatrix {
    let g = &p.group;
    let (r, s) = (g.num_classes(), p.levi.num_classes());
    let mut counts = vec![vec![0u64; s]; r];
    for &y in &p.p_points {
        let m = p.project(y).expect("point of P");
        counts[g.class_of(y)][p.levi.class_of(m)] += 1;
    }
    let mut out = RationalMatrix::zeros(r, s);
    for c in 0..r {
        let cent = g.classes()[c].centralizer_order;
        for j in 0..s {
            if counts[c][j] > 0 {
                out.entries[c][j] = ratio(cent * counts[c][j], p.order());
            }
        }
    }
    out
}

pub fn hc_induce(p: &ParabolicData, f: &ClassFunction) -> Result<ClassFunction> {
    check_same(&p.levi, &f.group)?;
    ClassFunction::apply_matrix(&p.group, &hc_induce_matrix(p), &f.values)
}

/// Delta-basis matrix of Harish-Chandra restriction
/// `(1/|N|) Σ_{u ∈ N} f(m u)`.
pub fn hc_restrict_matrix(p: &ParabolicData) -> RationalMatrix {
    let g = &p.group;
    let (r, s) = (g.num_classes(), p.levi.num_classes());
    let columns: Vec<Vec<BigRational>> = (0..s)
        .map(|j| {
            let m = p.levi_embedding[p.levi.classes()[j].rep_index as usize];
            let mut counts = vec![0u64; r];
            for &u in &p.n_points {
                counts[g.class_of(g.mul_in(m, u))] += 1;
            }
            counts.into_iter().map(|k| ratio(k, p.n_points.len() as u64)).collect()
        })
        .collect();
    // columns are indexed by Levi classes; transpose into a (Levi × G) matrix
    let mut out = RationalMatrix::zeros(s, r);
    for (j, col) in columns.into_iter().enumerate() {
        out.entries[j] = col;
    }
    out
}

pub fn hc_restrict(p: &ParabolicData, f: &ClassFunction) -> Result<ClassFunction> {
    check_same(&p.group, &f.group)?;
    ClassFunction::apply_matrix(&p.levi, &hc_restrict_matrix(p), &f.values)
}

/// `(f ⋆ g)(z) = Σ_{ab = z} f(a) g(b)`, through class multiplication
/// coefficients.
pub fn convolve(f: &ClassFunction, g: &ClassFunction) -> Result<ClassFunction> {
    check_same(&f.group, &g.group)?;
    let grp = &f.group;
    let r = grp.num_classes();
    let values = (0..r)
        .into_par_iter()
        .map(|k| {
            let mut acc = Cyclotomic::zero();
            for i in (0..r).filter(|&i| !f.values[i].is_zero()) {
                for j in (0..r).filter(|&j| !g.values[j].is_zero()) {
                    let a = grp.class_constant(i, j, k);
                    if a > 0 {
                        acc = acc.add(&f.values[i].mul(&g.values[j]).scale_int(a as i64));
                    }
                }
            }
            acc
        })
        .collect();
    ClassFunction::new(grp, values)
}

/// Delta-basis matrix of `f ↦ f ⋆ s` for a rational class function `s`.
pub fn convolution_matrix(grp: &GroupTable, s: &[BigRational]) -> RationalMatrix {
    let r = grp.num_classes();
    let mut m = RationalMatrix::zeros(r, r);
    for k in 0..r {
        for i in 0..r {
            let mut acc = BigRational::zero();
            for (j, sj) in s.iter().enumerate() {
                let a = grp.class_constant(i, j, k);
                if a > 0 && !sj.is_zero() {
                    acc += sj * BigInt::from(a);
                }
            }
            m.entries[k][i] = acc;
        }
    }
    m
}

pub fn borel(g: &Arc<GroupTable>) -> Result<ParabolicData> {
    standard_parabolic(g, &vec![1; g.n()])
}

/// `#{x B ∈ G/B : x^{-1} g x ∈ pred-set}` for every class, counted over coset
/// representatives of the Borel.
fn flag_counts(b: &ParabolicData, member: impl Fn(u32) -> bool + Sync) -> Vec<u64> {
    let g = &b.group;
    let (_, reps) = g.left_cosets(&b.p_points);
    g.classes()
        .par_iter()
        .map(|c| {
            reps.iter()
                .filter(|&&x| member(g.mul_in(g.inv(x), g.mul_in(c.rep_index, x))))
                .count() as u64
        })
        .collect()
}

/// Number of rational Borels containing `g`.
pub fn springer_function(g: &Arc<GroupTable>) -> Result<ClassFunction> {
    let b = borel(g)?;
    let counts = flag_counts(&b, |y| b.contains(y));
    ClassFunction::new(g, counts.into_iter().map(|k| Cyclotomic::from_int(k as i64)).collect())
}

/// Number of rational Borels whose unipotent radical contains `g`; the trace
/// function of the Springer sheaf, supported on unipotent elements.
pub fn springer_sheaf_function(g: &Arc<GroupTable>) -> Result<ClassFunction> {
    let b = borel(g)?;
    let counts = flag_counts(&b, |y| b.in_unipotent_radical(y));
    ClassFunction::new(g, counts.into_iter().map(|k| Cyclotomic::from_int(k as i64)).collect())
}

fn rational_values(f: &ClassFunction) -> Result<Vec<BigRational>> {
    f.values()
        .iter()
        .map(|v| v.as_rational().ok_or_else(|| Error::Internal("expected a rational class function".into())))
        .collect()
}

/// The horocycle transform `HC(f)(g) = Σ_{n ∈ N} f(g n)`, a function on `G`
/// invariant under `N × N` and `T`-conjugation, given per element.
pub fn horocycle_transform(b: &ParabolicData, f: &ClassFunction) -> Result<Vec<Cyclotomic>> {
    check_same(&b.group, &f.group)?;
    let g = &b.group;
    Ok((0..g.order() as u32)
        .into_par_iter()
        .map(|x| {
            let mut counts = vec![0i64; g.num_classes()];
            for &u in &b.n_points {
                counts[g.class_of(g.mul_in(x, u))] += 1;
            }
            counts
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .fold(Cyclotomic::zero(), |acc, (c, &k)| acc.add(&f.values[c].scale_int(k)))
        })
        .collect())
}

/// The adjoint `CH(φ)(g) = (1/|B|) Σ_{x ∈ G} φ(x g x^{-1})`.
pub fn horocycle_adjoint(b: &ParabolicData, phi: &[Cyclotomic]) -> Result<ClassFunction> {
    let g = &b.group;
    if phi.len() as u64 != g.order() {
        return Err(Error::InvalidInput("one value per element required".into()));
    }
    let values: Vec<Cyclotomic> = g
        .classes()
        .par_iter()
        .map(|c| {
            let mut acc = Cyclotomic::zero();
            for x in 0..g.order() as u32 {
                let v = &phi[g.conj(x, c.rep_index) as usize];
                if !v.is_zero() {
                    acc = acc.add(v);
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .map(|v| v.div_int(b.order() as i64))
        .collect::<Result<_>>()?;
    ClassFunction::new(g, values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionForm {
    /// `hc_induce_B ∘ hc_restrict_B = c · (− ⋆ springer_function)`.
    InductionRestriction,
    /// `CH ∘ HC = c · (− ⋆ springer_sheaf_function)`.
    Horocycle,
}

#[derive(Clone, Debug)]
pub struct ConvolutionReport {
    pub group: String,
    pub form: ConvolutionForm,
    pub constant: Option<BigRational>,
    pub basis_size: usize,
    /// Delta-basis classes where the identity fails.
    pub failures: Vec<usize>,
    pub max_deviation: BigRational,
}

impl ConvolutionReport {
    pub fn passed(&self) -> bool {
        self.constant.is_some() && self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "form": format!("{:?}", self.form),
            "constant": self.constant.as_ref().map(|c| c.to_string()),
            "basis_size": self.basis_size,
            "failing_classes": self.failures,
            "max_deviation": self.max_deviation.to_string(),
            "status": if self.passed() { "pass" } else { "fail" },
        })
    }
}

fn compare_with_constant(
    group: String,
    form: ConvolutionForm,
    lhs: &RationalMatrix,
    rhs: &RationalMatrix,
    unit: usize,
) -> ConvolutionReport {
    // the constant is read off the identity unit, then tested everywhere
    let constant = (0..lhs.rows())
        .find(|&i| !rhs.entries[i][unit].is_zero())
        .map(|i| &lhs.entries[i][unit] / &rhs.entries[i][unit]);
    let basis_size = lhs.cols();
    let Some(c) = constant.clone() else {
        return ConvolutionReport {
            group,
            form,
            constant,
            basis_size,
            failures: (0..basis_size).collect(),
            max_deviation: lhs.max_deviation(&RationalMatrix::zeros(lhs.rows(), lhs.cols())),
        };
    };
    let scaled = rhs.scale(&c);
    let failures = (0..basis_size)
        .filter(|&j| (0..lhs.rows()).any(|i| lhs.entries[i][j] != scaled.entries[i][j]))
        .collect();
    ConvolutionReport { group, form, constant, basis_size, failures, max_deviation: lhs.max_deviation(&scaled) }
}

/// Tests `hc_induce_B ∘ hc_restrict_B = c · (− ⋆ springer_function)` on the
/// delta basis, with `c` derived from the identity unit.
pub fn springer_convolution_check(b: &ParabolicData) -> Result<ConvolutionReport> {
    let g = &b.group;
    let lhs = hc_induce_matrix(b).mul(&hc_restrict_matrix(b));
    let s = rational_values(&springer_function(g)?)?;
    let rhs = convolution_matrix(g, &s);
    Ok(compare_with_constant(
        g.label().to_string(),
        ConvolutionForm::InductionRestriction,
        &lhs,
        &rhs,
        g.identity_class(),
    ))
}

/// Tests `CH ∘ HC = c · (− ⋆ springer_sheaf_function)` on the delta basis.
pub fn horocycle_convolution_check(b: &ParabolicData) -> Result<ConvolutionReport> {
    let g = &b.group;
    let r = g.num_classes();
    let columns = (0..r)
        .map(|j| {
            let hc = horocycle_transform(b, &ClassFunction::delta(g, j))?;
            rational_values(&horocycle_adjoint(b, &hc)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let lhs = matrix_from_columns(r, columns);
    let s = rational_values(&springer_sheaf_function(g)?)?;
    let rhs = convolution_matrix(g, &s);
    Ok(compare_with_constant(g.label().to_string(), ConvolutionForm::Horocycle, &lhs, &rhs, g.identity_class()))
}

/// Left cosets `x N` of a subgroup, with least-element representatives.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    pub group: Arc<GroupTable>,
    coset_of: Vec<u32>,
    pub reps: Vec<u32>,
    pub subgroup_order: u64,
}

impl CosetSpace {
    pub fn new(group: &Arc<GroupTable>, subgroup: &[u32]) -> Self {
        let (coset_of, reps) = group.left_cosets(subgroup);
        CosetSpace { group: group.clone(), coset_of, reps, subgroup_order: subgroup.len() as u64 }
    }

    /// `G/N(P)`.
    pub fn of_unipotent_radical(p: &ParabolicData) -> Self {
        Self::new(&p.group, &p.n_points)
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn coset_of(&self, x: u32) -> usize {
        self.coset_of[x as usize] as usize
    }

    /// `g · x N`.
    pub fn left_act(&self, g: u32, c: usize) -> usize {
        self.coset_of(self.group.mul_in(g, self.reps[c]))
    }

    /// `x N · m = x m N`, for `m` normalizing the subgroup.
    pub fn right_act(&self, c: usize, m: u32) -> usize {
        self.coset_of(self.group.mul_in(self.reps[c], m))
    }
}

/// A function on a coset space.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetSpaceFunction {
    pub values: Vec<Cyclotomic>,
}

/// The pull-push map from functions on `G/N₁` to functions on `G/N₂` through
/// `G/(N₁ ∩ N₂)`, as a matrix with rows indexed by `G/N₂`.
#[derive(Clone, Debug)]
pub struct IntertwinerMatrix {
    pub source: CosetSpace,
    pub target: CosetSpace,
    pub matrix: RationalMatrix,
    pub intersection_order: u64,
}

pub fn intertwiner_matrix(p1: &ParabolicData, p2: &ParabolicData) -> Result<IntertwinerMatrix> {
    if !same_group(&p1.group, &p2.group) || p1.levi.elements() != p2.levi.elements() {
        return Err(Error::InvalidInput("parabolics do not share a Levi".into()));
    }
    let source = CosetSpace::of_unipotent_radical(p1);
    let target = CosetSpace::of_unipotent_radical(p2);
    let inter: Vec<u32> = p1.n_points.iter().copied().filter(|&x| p2.in_unipotent_radical(x)).collect();
    let g = &p1.group;
    let denom = inter.len() as u64;
    let rows: Vec<Vec<BigRational>> = target
        .reps
        .par_iter()
        .map(|&y| {
            let mut counts = vec![0u64; source.len()];
            for &u in &p2.n_points {
                counts[source.coset_of(g.mul_in(y, u))] += 1;
            }
            counts.into_iter().map(|k| ratio(k, denom)).collect()
        })
        .collect();
    Ok(IntertwinerMatrix { source, target, matrix: RationalMatrix { entries: rows }, intersection_order: denom })
}

impl IntertwinerMatrix {
    pub fn apply(&self, f: &CosetSpaceFunction) -> Result<CosetSpaceFunction> {
        if f.values.len() != self.source.len() {
            return Err(Error::InvalidInput("function on the wrong coset space".into()));
        }
        let values = self
            .matrix
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&f.values)
                    .filter(|(a, v)| !a.is_zero() && !v.is_zero())
                    .fold(Cyclotomic::zero(), |acc, (a, v)| acc.add(&v.scale_rational(a)))
            })
            .collect();
        Ok(CosetSpaceFunction { values })
    }

    /// Checks that the matrix commutes with the left action of `G` and the
    /// right action of `M`, on generators.
    pub fn is_equivariant(&self, levi_points: &[u32], levi_generators: &[u32]) -> bool {
        let g = &self.source.group;
        let commutes = |act_s: &dyn Fn(usize) -> usize, act_t: &dyn Fn(usize) -> usize| {
            (0..self.target.len()).all(|y| {
                (0..self.source.len()).all(|x| self.matrix.entries[act_t(y)][act_s(x)] == self.matrix.entries[y][x])
            })
        };
        let left = g.generators().iter().all(|&h| {
            commutes(&|x| self.source.left_act(h, x), &|y| self.target.left_act(h, y))
        });
        let right = levi_generators.iter().all(|&k| {
            let m = levi_points[k as usize];
            commutes(&|x| self.source.right_act(x, m), &|y| self.target.right_act(y, m))
        });
        left && right
    }
}

/// The parabolic opposite to `p` with the same Levi, by reversing the block
/// order.
pub fn opposite(p: &ParabolicData) -> Result<ParabolicData> {
    let order: Vec<usize> = p.block_order.iter().rev().copied().collect();
    parabolic_with_block_order(&p.group, &p.composition, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, GroupSpec};
    use proptest::prelude::*;

    fn gl(n: usize, q: u64) -> Arc<GroupTable> {
        build_group(&GroupSpec::gl(n, q).unwrap()).unwrap()
    }

    fn sl(n: usize, q: u64) -> Arc<GroupTable> {
        build_group(&GroupSpec::sl(n, q).unwrap()).unwrap()
    }

    #[test]
    fn pairings_basic() {
        let g = sl(2, 3);
        let one = ClassFunction::trivial(&g);
        assert_eq!(inner_product(&one, &one).unwrap(), Cyclotomic::one());
        let e = ClassFunction::identity_unit(&g);
        assert_eq!(inner_product(&e, &one).unwrap(), Cyclotomic::from_fraction(1, 24));
        let other = ClassFunction::trivial(&gl(2, 3));
        assert!(inner_product(&one, &other).is_err());
    }

    /// Ind f(g) = (1/|H|) Σ_{x ∈ G, x^{-1} g x ∈ H} f(x^{-1} g x), summed directly.
    fn induce_brute(g: &Arc<GroupTable>, sub: &EmbeddedSubgroup, f: &ClassFunction) -> ClassFunction {
        let mut inv_emb = std::collections::HashMap::new();
        for (i, &x) in sub.embedding.iter().enumerate() {
            inv_emb.insert(x, i as u32);
        }
        let values = g
            .classes()
            .iter()
            .map(|c| {
                let mut acc = Cyclotomic::zero();
                for x in 0..g.order() as u32 {
                    let y = g.mul_in(g.inv(x), g.mul_in(c.rep_index, x));
                    if let Some(&h) = inv_emb.get(&y) {
                        acc = acc.add(f.at(h));
                    }
                }
                acc.div_int(sub.table.order() as i64).unwrap()
            })
            .collect();
        ClassFunction::new(g, values).unwrap()
    }

    #[test]
    fn induction_matches_direct_sum() {
        let g = gl(2, 3);
        let b = borel(&g).unwrap();
        let pt = EmbeddedSubgroup::parabolic(&b).unwrap();
        for j in 0..pt.table.num_classes() {
            let f = ClassFunction::delta(&pt.table, j).add(&ClassFunction::trivial(&pt.table)).unwrap();
            assert_eq!(induce(&g, &pt, &f).unwrap(), induce_brute(&g, &pt, &f));
        }
        let ind1 = induce(&g, &pt, &ClassFunction::trivial(&pt.table)).unwrap();
        assert_eq!(ind1.value(g.identity_class()).to_i64(), Some(4));
    }

    #[test]
    fn hc_induce_examples() {
        let g = gl(2, 3);
        let b = borel(&g).unwrap();
        let f = hc_induce(&b, &ClassFunction::trivial(&b.levi)).unwrap();
        assert_eq!(f.value(g.identity_class()).to_i64(), Some(4));
        let g3 = gl(3, 2);
        let p = standard_parabolic(&g3, &[1, 2]).unwrap();
        let f = hc_induce(&p, &ClassFunction::trivial(&p.levi)).unwrap();
        assert_eq!(f.value(g3.identity_class()).to_i64(), Some(7));
    }

    #[test]
    fn hc_induce_is_induction_of_inflation() {
        for (g, comp) in [(gl(2, 3), vec![1, 1]), (gl(3, 2), vec![1, 2]), (sl(2, 3), vec![1, 1])] {
            let p = standard_parabolic(&g, &comp).unwrap();
            let pt = EmbeddedSubgroup::parabolic(&p).unwrap();
            for j in 0..p.levi.num_classes() {
                let d = ClassFunction::delta(&p.levi, j);
                let lhs = hc_induce(&p, &d).unwrap();
                let rhs = induce_brute(&g, &pt, &inflate(&p, &pt, &d).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn adjunction_on_delta_bases() {
        let g = gl(3, 2);
        let p = standard_parabolic(&g, &[1, 2]).unwrap();
        for i in 0..p.levi.num_classes() {
            let f = ClassFunction::delta(&p.levi, i);
            let ind = hc_induce(&p, &f).unwrap();
            for j in 0..g.num_classes() {
                let h = ClassFunction::delta(&g, j);
                let lhs = inner_product(&ind, &h).unwrap();
                let rhs = inner_product(&f, &hc_restrict(&p, &h).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let t = hc_restrict(&p, &ClassFunction::trivial(&g)).unwrap();
        assert_eq!(t, ClassFunction::trivial(&p.levi));
    }

    #[test]
    fn transitivity_gl3() {
        // B ⊂ P[1,2]: induce T → GL1×GL2 through the Borel of the Levi, then to G
        let g = gl(3, 2);
        let b = borel(&g).unwrap();
        let p = standard_parabolic(&g, &[1, 2]).unwrap();
        let q = standard_parabolic(&p.levi, &[1, 1, 1]).unwrap();
        assert_eq!(q.levi.order(), b.levi.order());
        let direct = hc_induce_matrix(&p).mul(&hc_induce_matrix(&q));
        // identify Levi classes of q with those of b through the matrices
        let bq: Vec<usize> = (0..b.levi.num_classes())
            .map(|j| q.levi.class_of_matrix(&b.levi.classes()[j].representative).unwrap())
            .collect();
        let bm = hc_induce_matrix(&b);
        for (j, &jq) in bq.iter().enumerate() {
            for i in 0..g.num_classes() {
                assert_eq!(direct.entries[i][jq], bm.entries[i][j]);
            }
        }
    }

    #[test]
    fn degree_formula() {
        let g = gl(2, 3);
        let b = borel(&g).unwrap();
        let m = hc_induce_matrix(&b);
        let e = g.identity_class();
        let index = BigRational::from_integer(BigInt::from(g.order() / b.order()));
        for j in 0..b.levi.num_classes() {
            let expect = if j == b.levi.identity_class() { index.clone() } else { BigRational::zero() };
            assert_eq!(m.entries[e][j], expect);
        }
    }

    #[test]
    fn springer_values() {
        let g = sl(2, 3);
        let s = springer_function(&g).unwrap();
        assert_eq!(s.value(g.identity_class()).to_i64(), Some(4));
        let u = g.index_of(&crate::groups::Mat::from_rows(&[vec![1, 1], vec![0, 1]])).unwrap();
        assert_eq!(s.at(u).to_i64(), Some(1));
        let g = gl(2, 3);
        let s = springer_function(&g).unwrap();
        let x = g.index_of(&crate::groups::Mat::diagonal(&[1, 2])).unwrap();
        assert_eq!(s.at(x).to_i64(), Some(2));
        let su = springer_sheaf_function(&g).unwrap();
        assert_eq!(su.at(x).to_i64(), Some(0));
    }

    #[test]
    fn convolution_identities() {
        let g = sl(2, 3);
        let one = ClassFunction::trivial(&g);
        assert_eq!(convolve(&one, &one).unwrap(), one.scale_int(24));
        let s = springer_function(&g).unwrap();
        assert_eq!(convolve(&ClassFunction::identity_unit(&g), &s).unwrap(), s);
        // direct element sum as an oracle
        let f = ClassFunction::delta(&g, 2).add(&ClassFunction::delta(&g, 4).scale_int(3)).unwrap();
        let h = ClassFunction::delta(&g, 1).add(&s).unwrap();
        let conv = convolve(&f, &h).unwrap();
        for c in g.classes() {
            let mut acc = Cyclotomic::zero();
            for a in 0..g.order() as u32 {
                let b = g.mul_in(g.inv(a), c.rep_index);
                acc = acc.add(&f.at(a).mul(h.at(b)));
            }
            assert_eq!(&acc, conv.at(c.rep_index));
        }
        assert_eq!(convolve(&f, &h).unwrap(), convolve(&h, &f).unwrap());
    }

    #[test]
    fn literal_springer_convolution_fails() {
        let g = sl(2, 2);
        let b = borel(&g).unwrap();
        let rep = springer_convolution_check(&b).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn horocycle_convolution_holds() {
        for g in [sl(2, 3), gl(2, 3), sl(2, 2)] {
            let b = borel(&g).unwrap();
            let rep = horocycle_convolution_check(&b).unwrap();
            assert!(rep.passed(), "{}", rep.to_json());
            assert_eq!(rep.constant, Some(BigRational::one()));
        }
    }

    #[test]
    fn intertwiner_examples() {
        let g = sl(2, 2);
        let b = borel(&g).unwrap();
        let same = intertwiner_matrix(&b, &b).unwrap();
        assert_eq!(same.matrix, RationalMatrix::identity(same.source.len()));
        let bm = opposite(&b).unwrap();
        let m = intertwiner_matrix(&b, &bm).unwrap();
        assert_eq!(m.source.len(), 3);
        assert_eq!(m.matrix.rank(), 3);
        let g = gl(2, 3);
        let b = borel(&g).unwrap();
        let bm = opposite(&b).unwrap();
        let m = intertwiner_matrix(&b, &bm).unwrap();
        assert!(!m.matrix.determinant().unwrap().is_zero());
        assert!(m.is_equivariant(&b.levi_embedding, b.levi.generators()));
    }

    #[test]
    fn dual_and_json_roundtrip() {
        let g = gl(2, 3);
        let f = ClassFunction::delta(&g, 3);
        assert_eq!(f.dual().dual(), f);
        let back = ClassFunction::from_json(&g, &f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn frobenius_reciprocity(a in proptest::collection::vec(-3i64..4, 4), b in proptest::collection::vec(-3i64..4, 8)) {
            let g = gl(2, 3);
            let bor = borel(&g).unwrap();
            let h = EmbeddedSubgroup::levi(&bor);
            let f = ClassFunction::new(&h.table, a.iter().map(|&x| Cyclotomic::from_int(x)).collect()).unwrap();
            let chi = ClassFunction::new(&g, b.iter().map(|&x| Cyclotomic::from_int(x)).collect()).unwrap();
            let lhs = inner_product(&induce(&g, &h, &f).unwrap(), &chi).unwrap();
            let rhs = inner_product(&f, &restrict(&h, &chi).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn induction_is_additive(a in proptest::collection::vec(-3i64..4, 4), b in proptest::collection::vec(-3i64..4, 4)) {
            let g = gl(2, 3);
            let bor = borel(&g).unwrap();
            let h = EmbeddedSubgroup::levi(&bor);
            let fa = ClassFunction::new(&h.table, a.iter().map(|&x| Cyclotomic::from_int(x)).collect()).unwrap();
            let fb = ClassFunction::new(&h.table, b.iter().map(|&x| Cyclotomic::from_int(x)).collect()).unwrap();
            let lhs = induce(&g, &h, &fa.add(&fb).unwrap()).unwrap();
            let rhs = induce(&g, &h, &fa).unwrap().add(&induce(&g, &h, &fb).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
