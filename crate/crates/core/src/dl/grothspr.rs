//! The Weil-structured Grothendieck–Springer trace at a regular semisimple
//! element: a sum over the Borels through `x`, i.e. over orderings `y` of
//! an eigenbasis, of those whose relative position `y^{-1} F(y)` is that of
//! the chosen Borel of the torus. Each contributes `θ(h · y^{-1} x y · h^{-1})`.

use num_integer::Integer;

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::fields::FieldElement;
use crate::groups::{tower_with_level, twisted_parabolic_datum, BorelChoice, ExtMat, GroupTable, TorusData};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == v.len() {
            out.push(v.clone());
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            rec(v, k + 1, out);
            v.swap(k, i);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), 0, &mut out);
    out
}

/// Smallest level containing the frame and all eigenvalues of rss elements.
pub fn base_level(g: &GroupTable, t: &TorusData) -> usize {
    (1..=g.n()).fold(t.frame.level, |acc, k| acc.lcm(&k))
}

/// The trace computed with eigenvectors over `F_{q^level}`; `level` must be a
/// multiple of [`base_level`].
pub fn grothspr_value_at_level(
    g: &GroupTable,
    t: &TorusData,
    theta: usize,
    choice: BorelChoice,
    x: u32,
    level: usize,
) -> Result<Cyclotomic> {
    let class = &g.classes()[g.class_of(x)];
    if !class.is_rss {
        return Err(Error::InvalidInput(format!("element {x} is not regular semisimple")));
    }
    let datum = twisted_parabolic_datum(t, choice)?;
    if level % datum.level != 0 {
        return Err(Error::InvalidInput(format!("level {level} does not contain the frame")));
    }
    let tower = tower_with_level(g, level)?;
    let f = tower.level(level)?;
    let n = g.n();
    let xm = ExtMat::from_base(&tower, level, g.element(x))?;
    let mut eigen: Vec<(FieldElement, Vec<FieldElement>)> = Vec::new();
    for lam in f.elements() {
        let shifted = xm.sub(&ExtMat::identity(n).scale(&lam, f), f);
        if shifted.det(f).is_zero() {
            let v = shifted.kernel_vector(f).ok_or_else(|| Error::Internal("singular matrix with no kernel".into()))?;
            eigen.push((lam, v));
        }
    }
    if eigen.len() != n {
        return Err(Error::InvalidInput(format!(
            "element {x} does not have {n} distinct eigenvalues over level {level}"
        )));
    }
    let h = datum.h.embed(&tower, datum.level, level)?;
    let h_inv = datum.h_inv.embed(&tower, datum.level, level)?;
    let mut acc = Cyclotomic::zero();
    for perm in permutations(n) {
        let cols: Vec<Vec<FieldElement>> = perm.iter().map(|&i| eigen[i].1.clone()).collect();
        let y = ExtMat::from_columns(&cols);
        let rel = y.inverse(f)?.mul(&y.frobenius(&tower, level)?, f);
        if rel.monomial_permutation().as_deref() != Some(&datum.relative_position[..]) {
            continue;
        }
        let d: Vec<FieldElement> = perm.iter().map(|&i| eigen[i].0).collect();
        let tm = h.mul(&ExtMat::diagonal(&d), f).mul(&h_inv, f);
        let rational = tm
            .to_base(&tower, level)?
            .ok_or_else(|| Error::Internal("torus element of a frame is not rational".into()))?;
        let pos = g
            .index_of(&rational)
            .and_then(|i| t.position_of(i))
            .ok_or_else(|| Error::Internal("frame element is not a point of the torus".into()))?;
        acc = acc.add(&t.character_value(theta, pos));
    }
    Ok(acc)
}

/// The trace at the base level, checked against twice the base level.
pub fn grothspr_weil_value(
    g: &GroupTable,
    t: &TorusData,
    theta: usize,
    choice: BorelChoice,
    x: u32,
) -> Result<Cyclotomic> {
    let d = base_level(g, t);
    let v = grothspr_value_at_level(g, t, theta, choice, x, d)?;
    if (g.q() as f64).powi(2 * d as i32) <= 1e6 {
        let v2 = grothspr_value_at_level(g, t, theta, choice, x, 2 * d)?;
        if v2 != v {
            return Err(Error::Internal(format!("trace at x = {x} did not stabilize between levels {d} and {}", 2 * d)));
        }
    }
    Ok(v)
}
