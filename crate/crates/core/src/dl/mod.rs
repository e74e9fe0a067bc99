//! Deligne–Lusztig varieties, their Lefschetz numbers and the induced
//! characters.
//!
//! Characters are computed in the compactly supported convention
//! `ch(g) = (1/|M|) Σ_m L((g, m), Y) ρ(m)`; [`dualizing_convention`] gives the
//! dual transform.

pub mod ext;
pub mod fit;
pub mod grothspr;
pub mod rational;
pub mod vector;
pub mod verify;

use std::sync::Arc;

use serde_json::{json, Value};

use crate::classfun::{hermitian_product, ClassFunction};
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::groups::{
    opposite_parabolic, standard_parabolic, twisted_parabolic_datum, BorelChoice, ExtMat, GroupTable,
    ParabolicData, TorusData,
};

use ext::matrix_order;
use fit::{candidates, fit_counts, ExponentialFit};
pub use rational::RationalModel;
pub use vector::{FixedLocus, VectorModel, DEFAULT_N_MAX};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    FixedPointCount,
    SemisimpleShortcut,
    ExponentialFit,
    /// The semisimple part has no fixed points, so neither has the whole.
    EmptySemisimpleFixedLocus,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::FixedPointCount => "fixed-point-count",
            Method::SemisimpleShortcut => "semisimple-shortcut",
            Method::ExponentialFit => "exponential-fit",
            Method::EmptySemisimpleFixedLocus => "empty-semisimple-fixed-locus",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LefschetzCertificate {
    /// Group element index.
    pub g: u32,
    /// Levi element index.
    pub m: u32,
    pub method: Method,
    /// `#Fix(σ ∘ Frob^n)` for `n = 1, 2, …`.
    pub counts: Vec<i64>,
    pub fit: Option<ExponentialFit>,
    pub value: Cyclotomic,
}

impl LefschetzCertificate {
    pub fn residuals_vanish(&self) -> bool {
        self.fit.as_ref().map_or(true, |f| f.residuals.iter().all(|r| r.is_zero()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "g": self.g,
            "m": self.m,
            "method": self.method.name(),
            "counts": self.counts,
            "fit": self.fit.as_ref().map(|f| f.to_json()),
            "value": self.value.to_json(),
        })
    }
}

/// Lefschetz numbers `L((g_c, m), Y)` for class representatives `g_c` and
/// all Levi elements `m`.
#[derive(Clone, Debug)]
pub struct LefschetzTable {
    pub classes: Vec<usize>,
    pub rows: Vec<Vec<Cyclotomic>>,
}

pub enum DLVariety {
    Rational(RationalModel),
    Twisted(VectorModel),
}

/// The variety of a rational parabolic.
pub fn dl_variety(p: Arc<ParabolicData>) -> DLVariety {
    DLVariety::Rational(RationalModel::new(p))
}

/// The variety of a Borel containing a maximal torus. For a split torus this
/// is the rational Borel through the diagonal torus (upper or lower); for a
/// nonsplit torus of `SL_2`, `GL_2` it is the twisted vector model.
pub fn dl_variety_for_torus(t: Arc<TorusData>, choice: BorelChoice) -> Result<DLVariety> {
    let datum = twisted_parabolic_datum(&t, choice)?;
    if datum.is_rational() {
        let ones = vec![1; t.group.n()];
        let b = standard_parabolic(&t.group, &ones)?;
        let b = match choice {
            BorelChoice::Upper => b,
            BorelChoice::Lower => opposite_parabolic(&b)?,
        };
        if b.levi.elements() != t.table.elements() {
            return Err(Error::Unsupported("split torus is not the diagonal torus".into()));
        }
        return Ok(dl_variety(Arc::new(b)));
    }
    Ok(DLVariety::Twisted(VectorModel::new(t, datum, DEFAULT_N_MAX)?))
}

/// `ζ_d^k q^e` candidates for a Frobenius `F^2` acting on a curve: `d ∈ {1, 2}`
/// first, then divisors of `2·order` if nothing fits.
fn fit_for(counts: &[i64], q: u64, order: u64) -> Result<ExponentialFit> {
    match fit_counts(counts, &candidates(q, &[1, 2], 2)) {
        Err(Error::NoFit(_)) => {
            let orders: Vec<u32> = (1..=2 * order as u32).filter(|d| (2 * order as u32) % d == 0).collect();
            let cands = candidates(q, &orders, 2);
            if cands.len() > 60 {
                return Err(Error::NoFit(format!("no model over ±q^e; {} candidates is too many", cands.len())));
            }
            fit_counts(counts, &cands)
        }
        other => other,
    }
}

fn ext_pow(a: &ExtMat, mut e: u64, f: &crate::fields::FieldSpec) -> ExtMat {
    let mut base = *a;
    let mut r = ExtMat::identity(a.n());
    while e > 0 {
        if e & 1 == 1 {
            r = r.mul(&base, f);
        }
        base = base.mul(&base, f);
        e >>= 1;
    }
    r
}

impl VectorModel {
    /// Counts of `σ ∘ F^{2n}` for the automorphism `v ↦ a v`, fitted exactly.
    pub fn fitted_lefschetz(&self, a: &ExtMat) -> Result<(Vec<i64>, ExponentialFit)> {
        let counts: Vec<i64> = (1..=self.n_max)
            .map(|n| self.twisted_count(a, n).map(|c| c as i64))
            .collect::<Result<_>>()?;
        let order = matrix_order(a, self.tower.level(2)?, self.q().pow(4))?;
        let fit = fit_for(&counts, self.q(), order)?;
        Ok((counts, fit))
    }

    /// Jordan decomposition `a = a_s a_u` inside `GL_2(F_{q^2})`.
    pub fn jordan(&self, a: &ExtMat) -> Result<(ExtMat, ExtMat)> {
        let f = self.tower.level(2)?;
        let p = self.tower.characteristic() as u64;
        let n = matrix_order(a, f, self.q().pow(4))?;
        let mut pk = 1;
        while n % (pk * p) == 0 {
            pk *= p;
        }
        let m = n / pk;
        // e ≡ 1 (mod m), e ≡ 0 (mod p^k)
        let e = (0..n).find(|e| e % m == 1 % m && e % pk == 0).unwrap_or(0);
        let a_s = ext_pow(a, e, f);
        let a_u = a.mul(&a_s.inverse(f)?, f);
        Ok((a_s, a_u))
    }

    pub fn lefschetz(&self, g: u32, t_pos: usize) -> Result<LefschetzCertificate> {
        let a = self.action_matrix(g, t_pos)?;
        let (a_s, a_u) = self.jordan(&a)?;
        let m = self.torus_index(t_pos)?;
        let cert = |method, counts, fit, value| LefschetzCertificate { g, m, method, counts, fit, value };
        if a_u.is_identity() {
            match self.fixed_locus(&a)? {
                FixedLocus::Empty => {
                    return Ok(cert(Method::SemisimpleShortcut, Vec::new(), None, Cyclotomic::zero()))
                }
                FixedLocus::Line { count, .. } => {
                    return Ok(cert(Method::SemisimpleShortcut, Vec::new(), None, Cyclotomic::from_int(count as i64)))
                }
                FixedLocus::Everything => {}
            }
        } else if !a_s.is_identity() {
            return match self.fixed_locus(&a_s)? {
                FixedLocus::Empty => {
                    Ok(cert(Method::EmptySemisimpleFixedLocus, Vec::new(), None, Cyclotomic::zero()))
                }
                _ => Err(Error::Unsupported("unipotent part acting on a fixed line".into())),
            };
        }
        let (counts, fit) = self.fitted_lefschetz(&a)?;
        let value = fit.value();
        Ok(cert(Method::ExponentialFit, counts, Some(fit), value))
    }

    /// The two Lefschetz oracles for a semisimple `(g, t)`: the fixed-point
    /// count of the shortcut and the fitted value (`None` when the shortcut
    /// does not apply).
    pub fn two_oracles(&self, g: u32, t_pos: usize) -> Result<Option<(Cyclotomic, LefschetzCertificate)>> {
        let a = self.action_matrix(g, t_pos)?;
        let (_, a_u) = self.jordan(&a)?;
        if !a_u.is_identity() {
            return Ok(None);
        }
        let shortcut = match self.fixed_locus(&a)? {
            FixedLocus::Empty => 0,
            FixedLocus::Line { count, .. } => count,
            FixedLocus::Everything => return Ok(None),
        };
        let (counts, fit) = self.fitted_lefschetz(&a)?;
        let value = fit.value();
        let cert = LefschetzCertificate {
            g,
            m: self.torus_index(t_pos)?,
            method: Method::ExponentialFit,
            counts,
            fit: Some(fit),
            value,
        };
        Ok(Some((Cyclotomic::from_int(shortcut as i64), cert)))
    }

    fn torus_index(&self, t_pos: usize) -> Result<u32> {
        self.torus
            .table
            .index_of(self.group.element(self.torus.points[t_pos]))
            .ok_or_else(|| Error::Internal("torus table misses a point".into()))
    }

    fn position_of_index(&self, m: u32) -> Result<usize> {
        let gi = self
            .group
            .index_of(self.torus.table.element(m))
            .ok_or_else(|| Error::Internal("torus element outside the group".into()))?;
        self.torus.position_of(gi).ok_or_else(|| Error::Internal("not a torus point".into()))
    }
}

impl DLVariety {
    pub fn group(&self) -> &Arc<GroupTable> {
        match self {
            DLVariety::Rational(r) => r.group(),
            DLVariety::Twisted(v) => &v.group,
        }
    }

    /// `M(F_q)` as its own table; class functions `ρ` live here.
    pub fn levi(&self) -> &Arc<GroupTable> {
        match self {
            DLVariety::Rational(r) => &r.parabolic.levi,
            DLVariety::Twisted(v) => &v.torus.table,
        }
    }

    pub fn label(&self) -> String {
        match self {
            DLVariety::Rational(r) => format!("{} {}", r.group().label(), r.parabolic.label()),
            DLVariety::Twisted(v) => format!(
                "{} {} twisted Borel {:?}",
                v.group.label(),
                v.torus.label(),
                v.datum.choice
            ),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, DLVariety::Rational(_))
    }

    /// Lefschetz number of `(g, m)` for a group index `g` and a Levi index `m`.
    pub fn lefschetz_number(&self, g: u32, m: u32) -> Result<LefschetzCertificate> {
        match self {
            DLVariety::Rational(r) => {
                let fix = r.fixed_histogram(g)[m as usize] as i64;
                Ok(LefschetzCertificate {
                    g,
                    m,
                    method: Method::FixedPointCount,
                    counts: vec![fix],
                    fit: None,
                    value: Cyclotomic::from_int(fix),
                })
            }
            DLVariety::Twisted(v) => v.lefschetz(g, v.position_of_index(m)?),
        }
    }

    /// `L((g, m), Y)` for every Levi element `m` and one group element `g`.
    pub fn lefschetz_row(&self, g: u32) -> Result<Vec<Cyclotomic>> {
        match self {
            DLVariety::Rational(r) => {
                Ok(r.fixed_histogram(g).into_iter().map(|k| Cyclotomic::from_int(k as i64)).collect())
            }
            DLVariety::Twisted(_) => {
                (0..self.levi().order() as u32).map(|m| Ok(self.lefschetz_number(g, m)?.value)).collect()
            }
        }
    }

    /// Lefschetz numbers at the representatives of the selected classes (all
    /// classes when `classes` is `None`).
    pub fn lefschetz_table(&self, classes: Option<&[usize]>) -> Result<LefschetzTable> {
        let g = self.group();
        let classes: Vec<usize> = classes.map_or_else(|| (0..g.num_classes()).collect(), |c| c.to_vec());
        let rows = classes
            .iter()
            .map(|&c| self.lefschetz_row(g.classes()[c].rep_index))
            .collect::<Result<Vec<_>>>()?;
        Ok(LefschetzTable { classes, rows })
    }

    fn check_levi_function(&self, rho: &ClassFunction) -> Result<()> {
        if rho.group().elements() != self.levi().elements() {
            return Err(Error::InvalidInput("ρ is not a class function on the Levi".into()));
        }
        Ok(())
    }

    /// `(1/|M|) Σ_m L_m ρ(m)` for one row of Lefschetz numbers.
    fn pair_row(&self, row: &[Cyclotomic], rho: &ClassFunction) -> Result<Cyclotomic> {
        let mut acc = Cyclotomic::zero();
        for (m, l) in row.iter().enumerate() {
            if !l.is_zero() {
                acc = acc.add(&l.mul(rho.at(m as u32)));
            }
        }
        acc.div_int(self.levi().order() as i64)
    }

    /// `ch(g)` for one group element.
    pub fn character_value(&self, rho: &ClassFunction, g: u32) -> Result<Cyclotomic> {
        self.check_levi_function(rho)?;
        self.pair_row(&self.lefschetz_row(g)?, rho)
    }

    /// The character from precomputed Lefschetz numbers; classes outside the
    /// table get the value zero.
    pub fn character_from_table(&self, table: &LefschetzTable, rho: &ClassFunction) -> Result<ClassFunction> {
        self.check_levi_function(rho)?;
        let g = self.group();
        let mut values = vec![Cyclotomic::zero(); g.num_classes()];
        for (&c, row) in table.classes.iter().zip(&table.rows) {
            values[c] = self.pair_row(row, rho)?;
        }
        ClassFunction::new(g, values)
    }

    pub fn character_on_classes(&self, rho: &ClassFunction, classes: Option<&[usize]>) -> Result<ClassFunction> {
        self.character_from_table(&self.lefschetz_table(classes)?, rho)
    }

    /// Checks the values on up to `per_class` members of every class against
    /// the representative's.
    pub fn check_class_function(&self, rho: &ClassFunction, ch: &ClassFunction, per_class: usize) -> Result<bool> {
        let g = self.group();
        for (c, class) in g.classes().iter().enumerate() {
            for &x in class.members.iter().take(per_class) {
                if self.character_value(rho, x)? != *ch.value(c) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `ch(g) = (1/|M|) Σ_m L((g, m), Y) ρ(m)` on all classes.
pub fn dl_character(y: &DLVariety, rho: &ClassFunction) -> Result<ClassFunction> {
    y.character_on_classes(rho, None)
}

/// The character in the convention of cochains with dualizing coefficients:
/// `g ↦ conj(ch(g^{-1}))`.
pub fn dualizing_convention(ch: &ClassFunction) -> ClassFunction {
    ch.dual().conj()
}

/// A character of the torus as a class function on its table.
pub fn torus_character(t: &TorusData, theta: usize) -> Result<ClassFunction> {
    let values = (0..t.table.num_classes())
        .map(|c| {
            let m = t.table.element(t.table.classes()[c].rep_index);
            let gi = t.group.index_of(m).ok_or_else(|| Error::Internal("torus point outside G".into()))?;
            let pos = t.position_of(gi).ok_or_else(|| Error::Internal("not a torus point".into()))?;
            Ok(t.character_value(theta, pos))
        })
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(&t.table, values)
}

/// Moves a class function between two tables of the same matrix group.
pub fn transfer(f: &ClassFunction, target: &Arc<GroupTable>) -> Result<ClassFunction> {
    let src = f.group();
    let values = (0..target.num_classes())
        .map(|c| {
            let m = target.element(target.classes()[c].rep_index);
            let i = src.index_of(m).ok_or_else(|| Error::InvalidInput("tables differ".into()))?;
            Ok(f.at(i).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(target, values)
}

/// `dl_character` of a torus character through a Borel containing the torus.
pub fn dl_character_of_torus(y: &DLVariety, t: &TorusData, theta: usize) -> Result<ClassFunction> {
    let chi = transfer(&torus_character(t, theta)?, y.levi())?;
    dl_character(y, &chi)
}

/// Hermitian self-pairing of a DL character.
pub fn dl_norm(ch: &ClassFunction) -> Result<Cyclotomic> {
    hermitian_product(ch, ch)
}

