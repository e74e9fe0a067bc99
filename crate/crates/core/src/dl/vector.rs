//! Vector model of the rank-one twisted variety for `SL_2` and `GL_2` with a
//! nonsplit torus. For the Borel `B = h B_0 h^{-1}` with unipotent radical
//! `U`, the points `x` with `x^{-1} F(x) ∈ U` correspond to vectors `v` with
//! `det(Fv, v) ∈ S` through `x = [Fv, v] h^{-1}`. Here `S = {det h}` for `SL_2`
//! and `S = {δ : δ^{q-1} = -1}` for `GL_2`. The pair `(g, t)` acts by
//! `v ↦ τ_2(t)^{-1} g v`, where `h^{-1} t h = diag(τ_1, τ_2)`, and `F²` acts
//! coordinatewise.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldSpec, FieldTower};
use crate::groups::{tower_with_level, ExtMat, Family, GroupTable, TorusData, TwistedDatum};

use super::ext::{semilinear_fixed_count, ExtCount};

/// Levels `2n` used for the counts of `σ ∘ F^{2n}`.
pub const DEFAULT_N_MAX: usize = 4;

pub struct VectorModel {
    pub group: Arc<GroupTable>,
    pub torus: Arc<TorusData>,
    pub datum: TwistedDatum,
    pub family: Family,
    /// Tower carrying levels up to `2 n_max`.
    pub tower: Arc<FieldTower>,
    pub n_max: usize,
    /// `S` at level 2.
    pub s_values: Vec<FieldElement>,
    /// `τ_2(t)` at level 2, by torus position.
    pub tau2: Vec<FieldElement>,
    counts: Mutex<HashMap<(ExtMat, usize), u64>>,
}

/// How the fixed points of a semisimple automorphism `v ↦ a v` look.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedLocus {
    /// `a` has no eigenvalue 1.
    Empty,
    /// The eigenline `F̄ v_0`; the fixed points are `λ v_0` with
    /// `λ^{q+1} det(F v_0, v_0) ∈ S`.
    Line { v0: Vec<FieldElement>, det: FieldElement, count: u64 },
    /// `a = 1`.
    Everything,
}

impl VectorModel {
    pub fn new(torus: Arc<TorusData>, datum: TwistedDatum, n_max: usize) -> Result<Self> {
        let group = torus.group.clone();
        if group.n() != 2 || datum.is_rational() || datum.level != 2 {
            return Err(Error::Unsupported(
                "the vector model covers nonsplit tori of SL_2 and GL_2 only".into(),
            ));
        }
        let family = group.spec().map(|s| s.family).unwrap_or(Family::GL);
        let q = group.q();
        let level_budget = (q as f64).powi(2 * n_max as i32);
        if n_max < 2 || level_budget > (q as f64).powi(12) {
            return Err(Error::Budget(format!("counts up to F_(q^{}) exceed the q^12 cap", 2 * n_max)));
        }
        let tower = tower_with_level(&group, 2 * n_max)?;
        let f2 = tower.level(2)?;
        let s_values = match family {
            Family::SL => vec![datum.h.det(f2)],
            Family::GL => {
                let minus_one = f2.neg(&FieldElement::one());
                f2.elements()
                    .filter(|d| !d.is_zero() && f2.pow(d, (q - 1) as u128) == minus_one)
                    .collect()
            }
        };
        let tau2 = (0..torus.points.len())
            .map(|pos| {
                let t = ExtMat::from_base(&datum.tower, 2, group.element(torus.points[pos]))?;
                let d = datum.h_inv.mul(&t, f2).mul(&datum.h, f2);
                if !d.is_diagonal() {
                    return Err(Error::Internal("torus point is not diagonal in the frame".into()));
                }
                Ok(d.get(1, 1))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorModel {
            group,
            torus,
            datum,
            family,
            tower,
            n_max,
            s_values,
            tau2,
            counts: Mutex::new(HashMap::new()),
        })
    }

    pub fn q(&self) -> u64 {
        self.group.q()
    }

    fn f2(&self) -> &FieldSpec {
        self.tower.level(2).expect("level 2 is in the tower")
    }

    /// The matrix `a = τ_2(t)^{-1} g` through which `(g, t)` acts.
    pub fn action_matrix(&self, g: u32, t_pos: usize) -> Result<ExtMat> {
        let f = self.f2();
        let gm = ExtMat::from_base(&self.tower, 2, self.group.element(g))?;
        let inv = f.inv(&self.tau2[t_pos])?;
        Ok(gm.scale(&inv, f))
    }

    /// `det(Fv, v)` for `v` at `level`.
    pub fn volume(&self, level: usize, v: &[FieldElement]) -> Result<FieldElement> {
        let f = self.tower.level(level)?;
        let fv0 = self.tower.frobenius(level, &v[0])?;
        let fv1 = self.tower.frobenius(level, &v[1])?;
        Ok(f.sub(&f.mul(&fv0, &v[1]), &f.mul(&fv1, &v[0])))
    }

    /// `S` embedded at an even level.
    pub fn s_at(&self, level: usize) -> Result<Vec<FieldElement>> {
        self.s_values.iter().map(|s| self.tower.embed(2, level, s)).collect()
    }

    /// The fixed locus of `v ↦ a v` for semisimple `a` at level 2.
    pub fn fixed_locus(&self, a: &ExtMat) -> Result<FixedLocus> {
        let f = self.f2();
        let shifted = a.sub(&ExtMat::identity(2), f);
        if shifted.get(0, 0).is_zero()
            && shifted.get(0, 1).is_zero()
            && shifted.get(1, 0).is_zero()
            && shifted.get(1, 1).is_zero()
        {
            return Ok(FixedLocus::Everything);
        }
        let Some(v0) = shifted.kernel_vector(f) else { return Ok(FixedLocus::Empty) };
        let det = self.volume(2, &v0)?;
        // X^{q+1} = s / det is separable, so every s contributes q + 1 points of F̄
        let count = if det.is_zero() { 0 } else { (self.q() + 1) * self.s_values.len() as u64 };
        Ok(FixedLocus::Line { v0, det, count })
    }

    /// Points `λ v_0` of a fixed line with `λ ∈ F_{q^level}`, by enumeration.
    pub fn enumerate_line_points(&self, v0: &[FieldElement], level: usize) -> Result<u64> {
        let f = self.tower.level(level)?;
        let v: Vec<FieldElement> = v0.iter().map(|x| self.tower.embed(2, level, x)).collect::<Result<_>>()?;
        let det = self.volume(level, &v)?;
        let s = self.s_at(level)?;
        let q = self.q() as u128;
        Ok(f.elements()
            .filter(|l| !l.is_zero())
            .filter(|l| s.contains(&f.mul(&f.pow(l, q + 1), &det)))
            .count() as u64)
    }

    /// `#{v : v = a F^{2n}(v), det(Fv, v) ∈ S}`, cached by `(a, n)`.
    pub fn twisted_count(&self, a: &ExtMat, n: usize) -> Result<u64> {
        if let Some(&c) = self.counts.lock().unwrap().get(&(*a, n)) {
            return Ok(c);
        }
        let ExtCount { count, .. } = semilinear_fixed_count(&self.tower, a, n, &self.s_values)?;
        self.counts.lock().unwrap().insert((*a, n), count);
        Ok(count)
    }

    /// All points over `F_{q^level}`, by brute force over `F_{q^level}^2`.
    pub fn points(&self, level: usize) -> Result<Vec<[FieldElement; 2]>> {
        let f = self.tower.level(level)?;
        if (f.size() as f64).powi(2) > 1e7 {
            return Err(Error::Budget(format!("enumerating F_(q^{level})^2")));
        }
        let work = if level % 2 == 0 { level } else { 2 * level };
        let s = self.s_at(work)?;
        let mut out = Vec::new();
        for x in f.elements() {
            for y in f.elements() {
                let v = [self.tower.embed(level, work, &x)?, self.tower.embed(level, work, &y)?];
                if s.contains(&self.volume(work, &v)?) {
                    out.push([x, y]);
                }
            }
        }
        Ok(out)
    }

    /// `(g, t) · v` at an even level.
    pub fn act(&self, level: usize, g: u32, t_pos: usize, v: &[FieldElement; 2]) -> Result<[FieldElement; 2]> {
        let f = self.tower.level(level)?;
        let a = self.action_matrix(g, t_pos)?.embed(&self.tower, 2, level)?;
        let w = a.apply(v, f);
        Ok([w[0], w[1]])
    }

    /// `F²` on a point.
    pub fn frobenius2(&self, level: usize, v: &[FieldElement; 2]) -> Result<[FieldElement; 2]> {
        Ok([
            self.tower.frobenius_power(level, &v[0], 2)?,
            self.tower.frobenius_power(level, &v[1], 2)?,
        ])
    }

    /// Sample checks at an even level: the actions of `G(F_q)` and `T(F_q)`
    /// preserve the points, commute with each other and with `F²`, and
    /// `T(F_q)` acts freely.
    pub fn check_actions(&self, level: usize, stride: usize) -> Result<bool> {
        if level % 2 != 0 {
            return Err(Error::InvalidInput("actions are checked at even levels".into()));
        }
        let pts = self.points(level)?;
        let set: std::collections::HashSet<[FieldElement; 2]> = pts.iter().copied().collect();
        let id = self.group.identity();
        let one = self.torus.position_of(id).ok_or_else(|| Error::Internal("identity not in torus".into()))?;
        let stride = stride.max(1);
        for v in pts.iter().step_by(stride) {
            for g in (0..self.group.order() as u32).step_by(stride) {
                for t in (0..self.tau2.len()).step_by(stride.min(self.tau2.len())) {
                    let gv = self.act(level, g, one, v)?;
                    let tv = self.act(level, id, t, v)?;
                    if !set.contains(&gv) || !set.contains(&tv) {
                        return Ok(false);
                    }
                    if self.act(level, g, one, &tv)? != self.act(level, id, t, &gv)? {
                        return Ok(false);
                    }
                    let fv = self.frobenius2(level, v)?;
                    if self.frobenius2(level, &gv)? != self.act(level, g, one, &fv)?
                        || self.frobenius2(level, &tv)? != self.act(level, id, t, &fv)?
                    {
                        return Ok(false);
                    }
                    if t != one && tv == *v {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Number of `G(F_q)`-orbits on the points at a level, checking that
    /// every orbit is free.
    pub fn free_orbit_count(&self, level: usize) -> Result<Option<usize>> {
        let pts = self.points(level)?;
        let index: HashMap<[FieldElement; 2], usize> = pts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let one = self.torus.position_of(self.group.identity()).unwrap();
        let mut seen = vec![false; pts.len()];
        let mut orbits = 0;
        for i in 0..pts.len() {
            if seen[i] {
                continue;
            }
            orbits += 1;
            let mut size = 0;
            for g in 0..self.group.order() as u32 {
                let w = self.act(level, g, one, &pts[i])?;
                let j = *index.get(&w).ok_or_else(|| Error::Internal("orbit leaves the points".into()))?;
                if seen[j] {
                    return Ok(None);
                }
                seen[j] = true;
                size += 1;
            }
            debug_assert_eq!(size, self.group.order());
        }
        Ok(Some(orbits))
    }
}
