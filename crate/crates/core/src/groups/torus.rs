use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_integer::Integer;

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};

use super::ext::{permutation_matrix, ExtMat};
use super::mat::Mat;
use super::table::{Family, GroupTable};

/// A tower containing level `d`, reusing the group's tower when it is tall
/// enough. Towers are deterministic, so elements agree between them.
pub fn tower_with_level(g: &GroupTable, d: usize) -> Result<Arc<FieldTower>> {
    let t = g.tower();
    if t.max_level() >= d {
        return Ok(t.clone());
    }
    Ok(Arc::new(FieldTower::new(
        t.characteristic(),
        t.base_degree(),
        d,
        crate::fields::field_budget(),
    )?))
}

/// A diagonalizing frame `h` over `F_{q^D}` for a torus: `h^{-1} t h` is
/// diagonal for every point `t`, and `h^{-1} F(h)` is the permutation matrix
/// of `perm` (column `j` goes to column `perm[j]`).
#[derive(Clone, Debug)]
pub struct Frame {
    pub tower: Arc<FieldTower>,
    pub level: usize,
    pub h: ExtMat,
    pub h_inv: ExtMat,
    pub perm: Vec<usize>,
}

/// An F-stable maximal torus `T_λ(F_q)` realized by companion blocks.
#[derive(Debug)]
pub struct TorusData {
    pub group: Arc<GroupTable>,
    pub partition: Vec<usize>,
    /// Generators of the cyclic factors, as matrices.
    pub generator_matrices: Vec<Mat>,
    pub orders: Vec<u64>,
    /// Group indices of the points, in mixed-radix order of exponent vectors
    /// (first factor fastest).
    pub points: Vec<u32>,
    position: HashMap<u32, usize>,
    pub table: Arc<GroupTable>,
    pub frame: Frame,
    /// Per companion block: the generator `γ_i` of `F_{q^{λ_i}}` and the block
    /// offset in the frame.
    block_eigen: Vec<(usize, FieldElement)>,
}

/// Monic minimal polynomial over `F_q` of a generator of level `d`, as
/// base-field indices (constant term first).
fn min_poly_of_generator(tower: &FieldTower, d: usize) -> Result<(FieldElement, Vec<u8>)> {
    let f = tower.level(d)?;
    let gamma = f.generator();
    let mut poly = vec![FieldElement::one()];
    let mut root = gamma;
    for _ in 0..d {
        // poly *= (x - root)
        let mut next = vec![FieldElement::ZERO; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = f.add(&next[i + 1], c);
            let t = f.mul(c, &root);
            next[i] = f.sub(&next[i], &t);
        }
        poly = next;
        root = tower.frobenius(d, &root)?;
    }
    let base = tower.base();
    let coeffs = poly
        .iter()
        .map(|c| {
            tower
                .restrict(1, d, c)?
                .map(|x| base.index_of(&x) as u8)
                .ok_or_else(|| Error::Internal("minimal polynomial is not rational".into()))
        })
        .collect::<Result<Vec<u8>>>()?;
    Ok((gamma, coeffs))
}

/// Companion matrix with `C e_i = e_{i+1}` and last column `-a_0, …, -a_{d-1}`.
fn companion(coeffs: &[u8], fq: &super::mat::Fq) -> Mat {
    let d = coeffs.len() - 1;
    let mut m = Mat::zero(d);
    for i in 1..d {
        m.set(i, i - 1, 1);
    }
    for i in 0..d {
        m.set(i, d - 1, fq.neg(coeffs[i]));
    }
    m
}

fn companion_points_order(tower: &FieldTower, lambda: usize) -> u64 {
    tower.q().pow(lambda as u32) - 1
}

pub fn maximal_torus(g: &Arc<GroupTable>, partition: &[usize]) -> Result<TorusData> {
    let n = g.n();
    if partition.iter().sum::<usize>() != n || partition.contains(&0) {
        return Err(Error::InvalidInput(format!("{partition:?} is not a partition of {n}")));
    }
    let mut partition = partition.to_vec();
    partition.sort_unstable_by(|a, b| b.cmp(a));
    let d = partition.iter().fold(1, |acc, &x| acc.lcm(&x));
    let tower = tower_with_level(g, d)?;
    let fq = g.fq().clone();
    let mut blocks = Vec::new();
    let mut block_eigen = Vec::new();
    let mut offset = 0;
    for &lam in &partition {
        let (gamma, poly) = min_poly_of_generator(&tower, lam)?;
        blocks.push(companion(&poly, &fq));
        block_eigen.push((offset, gamma));
        offset += lam;
    }
    // generators of the cyclic factors of the GL torus
    let gl_gens: Vec<Mat> = (0..blocks.len())
        .map(|i| {
            let parts: Vec<Mat> = blocks
                .iter()
                .enumerate()
                .map(|(k, b)| if k == i { *b } else { Mat::identity(b.n()) })
                .collect();
            Mat::block_diagonal(&parts)
        })
        .collect();
    let gl_orders: Vec<u64> = partition.iter().map(|&l| companion_points_order(&tower, l)).collect();
    let family = g.spec().map(|s| s.family).unwrap_or(Family::GL);
    let (generator_matrices, orders) = match family {
        Family::GL => (gl_gens, gl_orders),
        Family::SL => sl_generators(&gl_gens, &gl_orders, &fq)?,
    };
    let total: u64 = orders.iter().product();
    let mut points = Vec::with_capacity(total as usize);
    let mut position = HashMap::new();
    let mut exps = vec![0u64; orders.len()];
    for pos in 0..total as usize {
        let mut m = Mat::identity(n);
        for (i, gm) in generator_matrices.iter().enumerate() {
            for _ in 0..exps[i] {
                m = m.mul(gm, &fq);
            }
        }
        let idx = g
            .index_of(&m)
            .ok_or_else(|| Error::Internal("torus point outside the group".into()))?;
        if position.insert(idx, pos).is_some() {
            return Err(Error::Internal("torus points are not distinct".into()));
        }
        points.push(idx);
        for i in 0..orders.len() {
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
    let table = Arc::new(g.subgroup(format!("T{partition:?} of {}", g.label()), &points)?);
    let frame = build_frame(&tower, d, &blocks, &block_eigen, &partition)?;
    Ok(TorusData {
        group: g.clone(),
        partition,
        generator_matrices,
        orders,
        points,
        position,
        table,
        frame,
        block_eigen,
    })
}

/// The determinant-one part of a product of cyclic groups, when it is cyclic.
fn sl_generators(gens: &[Mat], orders: &[u64], fq: &super::mat::Fq) -> Result<(Vec<Mat>, Vec<u64>)> {
    let dets: Vec<u8> = gens.iter().map(|m| m.det(fq)).collect();
    let total: u64 = orders.iter().product();
    let sl_order = total / (fq.q() as u64 - 1);
    // search exponent vectors in a fixed order for a det-one element of full order
    let mut exps = vec![0u64; orders.len()];
    for _ in 0..total {
        let det = dets
            .iter()
            .zip(&exps)
            .fold(1u8, |acc, (&d, &e)| fq.mul(acc, fq.pow(d, e)));
        if det == 1 {
            let ord = exps
                .iter()
                .zip(orders)
                .fold(1u64, |acc, (&e, &o)| acc.lcm(&(o / o.gcd(&e))));
            if ord == sl_order {
                let n = gens[0].n();
                let mut m = Mat::identity(n);
                for (gm, &e) in gens.iter().zip(&exps) {
                    for _ in 0..e {
                        m = m.mul(gm, fq);
                    }
                }
                return Ok((vec![m], vec![sl_order]));
            }
        }
        for i in 0..orders.len() {
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
    Err(Error::Unsupported("determinant-one torus is not cyclic".into()))
}

fn build_frame(
    tower: &Arc<FieldTower>,
    d: usize,
    blocks: &[Mat],
    block_eigen: &[(usize, FieldElement)],
    partition: &[usize],
) -> Result<Frame> {
    let n: usize = partition.iter().sum();
    let f = tower.level(d)?;
    let mut cols: Vec<Vec<FieldElement>> = vec![Vec::new(); n];
    let mut perm = vec![0; n];
    for (b, ((offset, gamma), &lam)) in block_eigen.iter().zip(partition).enumerate() {
        let c = ExtMat::from_base(tower, d, &blocks[b])?;
        let gamma_d = tower.embed(lam, d, gamma)?;
        let shifted = c.sub(&ExtMat::identity(lam).scale(&gamma_d, f), f);
        let v = shifted
            .kernel_vector(f)
            .ok_or_else(|| Error::Internal("companion block has no eigenvector".into()))?;
        let mut w = v;
        for j in 0..lam {
            let mut col = vec![FieldElement::ZERO; n];
            col[*offset..offset + lam].copy_from_slice(&w);
            cols[offset + j] = col;
            perm[offset + j] = offset + (j + 1) % lam;
            w = w.iter().map(|x| tower.frobenius(d, x)).collect::<Result<_>>()?;
        }
    }
    let h = ExtMat::from_columns(&cols);
    let h_inv = h.inverse(f)?;
    let frame = Frame { tower: tower.clone(), level: d, h, h_inv, perm };
    // F(h) = h · s with s the block-cyclic shift
    let fh = h.frobenius(tower, d)?;
    let s = h_inv.mul(&fh, f);
    if s != permutation_matrix(&frame.perm) {
        return Err(Error::Internal("frame does not have permutation relative position".into()));
    }
    Ok(frame)
}

impl TorusData {
    pub fn order(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn label(&self) -> String {
        format!("T{:?}", self.partition)
    }

    pub fn is_split(&self) -> bool {
        self.partition.iter().all(|&l| l == 1)
    }

    /// Exponent of the torus, the conductor of its character values.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| acc.lcm(&o))
    }

    pub fn position_of(&self, group_index: u32) -> Option<usize> {
        self.position.get(&group_index).copied()
    }

    pub fn exponents_at(&self, mut pos: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&o| {
                let e = pos as u64 % o;
                pos /= o as usize;
                e
            })
            .collect()
    }

    fn position_from_exponents(&self, exps: &[u64]) -> usize {
        let mut pos = 0usize;
        for (e, o) in exps.iter().zip(&self.orders).rev() {
            pos = pos * *o as usize + (*e % o) as usize;
        }
        pos
    }

    pub fn num_characters(&self) -> usize {
        self.points.len()
    }

    /// Characters are numbered like points: `θ_j(Π g_i^{a_i}) = Π ζ_{o_i}^{j_i a_i}`.
    pub fn character_exponents(&self, theta: usize) -> Vec<u64> {
        self.exponents_at(theta)
    }

    /// `θ(t)` as `ζ_L^e` with `L` the exponent of the torus.
    pub fn character_value_exp(&self, theta: usize, pos: usize) -> (u32, i64) {
        let l = self.exponent();
        let j = self.character_exponents(theta);
        let a = self.exponents_at(pos);
        let mut e = 0u64;
        for i in 0..self.orders.len() {
            e = (e + j[i] * a[i] % self.orders[i] * (l / self.orders[i])) % l;
        }
        (l as u32, e as i64)
    }

    pub fn character_value(&self, theta: usize, pos: usize) -> Cyclotomic {
        let (l, e) = self.character_value_exp(theta, pos);
        Cyclotomic::root_of_unity(l, e)
    }

    pub fn trivial_character(&self) -> usize {
        0
    }

    pub fn inverse_character(&self, theta: usize) -> usize {
        let j = self.character_exponents(theta);
        let inv: Vec<u64> = j.iter().zip(&self.orders).map(|(&x, &o)| (o - x) % o).collect();
        self.position_from_exponents(&inv)
    }

    /// Character given by its values on the generators, as exponents of `ζ_L`.
    fn character_from_generator_values(&self, v: &[u64]) -> usize {
        let l = self.exponent();
        let j: Vec<u64> = v.iter().zip(&self.orders).map(|(&x, &o)| x / (l / o)).collect();
        self.position_from_exponents(&j)
    }

    /// Coset representatives (least elements) of `N_G(T)(F_q) / T(F_q)`.
    pub fn weyl_representatives(&self) -> Vec<u32> {
        let g = &self.group;
        let fr = &self.frame;
        let f = fr.tower.level(fr.level).expect("frame level is in its tower");
        // x normalizes the algebraic torus iff h^{-1} x h is monomial; T(F_q)
        // alone can be too small to detect this (it may be central)
        let normalizer: Vec<u32> = (0..g.order() as u32)
            .filter(|&x| {
                let xm = ExtMat::from_base(&fr.tower, fr.level, g.element(x)).expect("rational matrix");
                fr.h_inv.mul(&xm, f).mul(&fr.h, f).monomial_permutation().is_some()
            })
            .collect();
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        for &x in &normalizer {
            if seen.contains(&x) {
                continue;
            }
            reps.push(x);
            for &t in &self.points {
                seen.insert(g.mul_in(x, t));
            }
        }
        reps
    }

    /// `θ ↦ θ ∘ Ad(w^{-1})` for a normalizer element `w`.
    pub fn act_on_character(&self, w: u32, theta: usize) -> usize {
        let g = &self.group;
        let winv = g.inv(w);
        let vals: Vec<u64> = self
            .generator_matrices
            .iter()
            .map(|m| {
                let t = g.conj(winv, g.index_of(m).unwrap());
                let pos = self.position[&t];
                self.character_value_exp(theta, pos).1 as u64
            })
            .collect();
        self.character_from_generator_values(&vals)
    }

    /// Orbits of the relative Weyl group on characters, each sorted, ordered
    /// by least member.
    pub fn weyl_orbit_characters(&self) -> Vec<Vec<usize>> {
        let reps = self.weyl_representatives();
        let mut assigned = vec![false; self.num_characters()];
        let mut orbits = Vec::new();
        for theta in 0..self.num_characters() {
            if assigned[theta] {
                continue;
            }
            let mut orbit: BTreeSet<usize> = BTreeSet::new();
            for &w in &reps {
                orbit.insert(self.act_on_character(w, theta));
            }
            for &x in &orbit {
                assigned[x] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    /// Size of the stabilizer of `θ` in the relative Weyl group.
    pub fn weyl_stabilizer_size(&self, theta: usize) -> usize {
        self.weyl_representatives()
            .iter()
            .filter(|&&w| self.act_on_character(w, theta) == theta)
            .count()
    }

    /// `h^{-1} t h` for a point, as diagonal entries at the frame level.
    pub fn diagonal_form(&self, pos: usize) -> Result<Vec<FieldElement>> {
        let f = self.frame.tower.level(self.frame.level)?;
        let x = ExtMat::from_base(&self.frame.tower, self.frame.level, self.group.element(self.points[pos]))?;
        let d = self.frame.h_inv.mul(&x, f).mul(&self.frame.h, f);
        Ok((0..d.n()).map(|i| d.get(i, i)).collect())
    }

    /// The point `h d h^{-1}` for diagonal entries at the frame level, if it
    /// is a rational point of the torus.
    pub fn point_from_diagonal(&self, diag: &[FieldElement]) -> Result<Option<usize>> {
        let f = self.frame.tower.level(self.frame.level)?;
        let x = self.frame.h.mul(&ExtMat::diagonal(diag), f).mul(&self.frame.h_inv, f);
        let Some(m) = x.to_base(&self.frame.tower, self.frame.level)? else { return Ok(None) };
        Ok(self.group.index_of(&m).and_then(|i| self.position_of(i)))
    }

    /// Eigenvalue data of the companion blocks: offset and `γ_i`.
    pub fn block_eigenvalues(&self) -> &[(usize, FieldElement)] {
        &self.block_eigen
    }

    /// Lang map shadow on the diagonal torus over `F_{q^m}`: returns the
    /// kernel size of `d ↦ d · (s F(d) s^{-1})^{-1}` and whether all nonempty
    /// fibers have that size. Coordinates are discrete logarithms.
    pub fn lang_map_fibers(&self, m: usize) -> LangShadow {
        let q = self.group.q();
        let n = self.group.n();
        let big = q.pow(m as u32) - 1;
        let sl = matches!(self.group.spec().map(|s| s.family), Some(Family::SL));
        let perm = &self.frame.perm;
        let dims = (big as usize).pow(if sl { n as u32 - 1 } else { n as u32 });
        let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
        let mut a = vec![0u64; n];
        for mut code in 0..dims {
            for i in 0..n - usize::from(sl) {
                a[i] = code as u64 % big;
                code /= big as usize;
            }
            if sl {
                let s: u64 = a[..n - 1].iter().sum::<u64>() % big;
                a[n - 1] = (big - s) % big;
            }
            // (s F(d) s^{-1})_{perm[j]} = d_j^q
            let mut img = a.clone();
            for j in 0..n {
                let fq = a[j] * (q % big) % big;
                img[perm[j]] = (a[perm[j]] + big - fq) % big;
            }
            *counts.entry(img).or_insert(0) += 1;
        }
        let kernel = counts.get(&vec![0u64; n]).copied().unwrap_or(0);
        LangShadow {
            level: m,
            kernel,
            uniform: counts.values().all(|&c| c == kernel),
            torus_order: self.order(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LangShadow {
    pub level: usize,
    pub kernel: u64,
    pub uniform: bool,
    pub torus_order: u64,
}

/// Which Borel containing a twisted torus: `h B_0 h^{-1}` for the frame `h`
/// (`Upper`) or for `h w_0` (`Lower`, the opposite Borel).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BorelChoice {
    Upper,
    Lower,
}

impl std::str::FromStr for BorelChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(BorelChoice::Upper),
            "lower" => Ok(BorelChoice::Lower),
            _ => Err(Error::InvalidInput(format!("unknown Borel choice {s}"))),
        }
    }
}

/// Descent datum of a Borel of `G` over `F̄_q` containing the torus: the
/// conjugator `h` with `P = h B_0 h^{-1}`, and the relative position
/// `w(P, F(P))` read off from `h^{-1} F(h)`.
#[derive(Clone, Debug)]
pub struct TwistedDatum {
    pub tower: Arc<FieldTower>,
    pub level: usize,
    pub h: ExtMat,
    pub h_inv: ExtMat,
    /// `h^{-1} F(h)` as a permutation (column `j` is `e_{w[j]}`).
    pub relative_position: Vec<usize>,
    pub choice: BorelChoice,
}

impl TwistedDatum {
    pub fn is_rational(&self) -> bool {
        self.relative_position.iter().enumerate().all(|(i, &j)| i == j)
    }
}

pub fn twisted_parabolic_datum(t: &TorusData, choice: BorelChoice) -> Result<TwistedDatum> {
    let fr = &t.frame;
    let f = fr.tower.level(fr.level)?;
    let n = t.group.n();
    let h = match choice {
        BorelChoice::Upper => fr.h,
        BorelChoice::Lower => {
            let w0: Vec<usize> = (0..n).rev().collect();
            fr.h.mul(&permutation_matrix(&w0), f)
        }
    };
    let h_inv = h.inverse(f)?;
    let rel = h_inv.mul(&h.frobenius(&fr.tower, fr.level)?, f);
    let relative_position = rel
        .monomial_permutation()
        .ok_or_else(|| Error::Internal("relative position is not a permutation".into()))?;
    Ok(TwistedDatum {
        tower: fr.tower.clone(),
        level: fr.level,
        h,
        h_inv,
        relative_position,
        choice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, GroupSpec};

    #[test]
    fn torus_orders() {
        let g = build_group(&GroupSpec::gl(2, 3).unwrap()).unwrap();
        let split = maximal_torus(&g, &[1, 1]).unwrap();
        assert_eq!(split.order(), 4);
        assert!(split.points.iter().all(|&i| {
            let m = g.element(i);
            m.get(0, 1) == 0 && m.get(1, 0) == 0
        }));
        let ns = maximal_torus(&g, &[2]).unwrap();
        assert_eq!(ns.order(), 8);
        assert_eq!(ns.orders, vec![8]);
        let s = build_group(&GroupSpec::sl(2, 3).unwrap()).unwrap();
        assert_eq!(maximal_torus(&s, &[2]).unwrap().order(), 4);
        assert_eq!(maximal_torus(&s, &[1, 1]).unwrap().order(), 2);
        let g3 = build_group(&GroupSpec::gl(3, 2).unwrap()).unwrap();
        assert_eq!(maximal_torus(&g3, &[3]).unwrap().order(), 7);
        assert_eq!(maximal_torus(&g3, &[2, 1]).unwrap().order(), 3);
    }

    #[test]
    fn characters_are_multiplicative_and_distinct() {
        let g = build_group(&GroupSpec::gl(2, 5).unwrap()).unwrap();
        let t = maximal_torus(&g, &[1, 1]).unwrap();
        let mut seen = BTreeSet::new();
        for theta in 0..t.num_characters() {
            let vals: Vec<(u32, i64)> = (0..t.points.len()).map(|p| t.character_value_exp(theta, p)).collect();
            assert!(seen.insert(vals));
            for a in 0..t.points.len() {
                for b in (0..t.points.len()).step_by(3) {
                    let ab = g.mul_in(t.points[a], t.points[b]);
                    let pab = t.position_of(ab).unwrap();
                    let l = t.exponent() as i64;
                    let ea = t.character_value_exp(theta, a).1;
                    let eb = t.character_value_exp(theta, b).1;
                    assert_eq!(t.character_value_exp(theta, pab).1, (ea + eb) % l);
                }
            }
        }
    }

    #[test]
    fn character_sums_vanish() {
        let g = build_group(&GroupSpec::sl(2, 5).unwrap()).unwrap();
        let t = maximal_torus(&g, &[2]).unwrap();
        for theta in 0..t.num_characters() {
            let s: Cyclotomic = (0..t.points.len()).map(|p| t.character_value(theta, p)).sum();
            let expected = if theta == 0 { t.order() as i64 } else { 0 };
            assert_eq!(s.to_i64(), Some(expected));
        }
    }

    #[test]
    fn weyl_orbits() {
        let g = build_group(&GroupSpec::sl(2, 3).unwrap()).unwrap();
        let t = maximal_torus(&g, &[2]).unwrap();
        assert_eq!(t.weyl_representatives().len(), 2);
        let orbits = t.weyl_orbit_characters();
        assert_eq!(orbits, vec![vec![0], vec![1, 3], vec![2]]);
        let g2 = build_group(&GroupSpec::gl(2, 3).unwrap()).unwrap();
        let split = maximal_torus(&g2, &[1, 1]).unwrap();
        let orbits = split.weyl_orbit_characters();
        assert_eq!(orbits[0], vec![0]);
        assert_eq!(orbits.iter().map(|o| o.len()).sum::<usize>(), 4);
    }

    #[test]
    fn frame_diagonalizes() {
        let g = build_group(&GroupSpec::gl(2, 3).unwrap()).unwrap();
        let t = maximal_torus(&g, &[2]).unwrap();
        for pos in 0..t.points.len() {
            let d = t.diagonal_form(pos).unwrap();
            assert_eq!(t.point_from_diagonal(&d).unwrap(), Some(pos));
        }
        assert_eq!(t.frame.perm, vec![1, 0]);
    }

    #[test]
    fn twisted_datum_positions() {
        let g = build_group(&GroupSpec::sl(2, 3).unwrap()).unwrap();
        let split = maximal_torus(&g, &[1, 1]).unwrap();
        assert!(twisted_parabolic_datum(&split, BorelChoice::Upper).unwrap().is_rational());
        let ns = maximal_torus(&g, &[2]).unwrap();
        for c in [BorelChoice::Upper, BorelChoice::Lower] {
            let d = twisted_parabolic_datum(&ns, c).unwrap();
            assert_eq!(d.relative_position, vec![1, 0]);
        }
    }

    #[test]
    fn lang_shadow() {
        let g = build_group(&GroupSpec::gl(2, 3).unwrap()).unwrap();
        for lam in [vec![1, 1], vec![2]] {
            let t = maximal_torus(&g, &lam).unwrap();
            let r = t.lang_map_fibers(2);
            assert!(r.uniform);
            assert_eq!(r.kernel, t.order());
        }
        let s = build_group(&GroupSpec::sl(2, 5).unwrap()).unwrap();
        let t = maximal_torus(&s, &[2]).unwrap();
        let r = t.lang_map_fibers(2);
        assert!(r.uniform);
        assert_eq!(r.kernel, 6);
    }

    #[test]
    fn rss_centralizers_are_torus_orders() {
        for spec in [GroupSpec::gl(2, 4).unwrap(), GroupSpec::gl(3, 2).unwrap()] {
            let g = build_group(&spec).unwrap();
            let n = g.n();
            let parts: Vec<Vec<usize>> = match n {
                2 => vec![vec![1, 1], vec![2]],
                _ => vec![vec![1, 1, 1], vec![2, 1], vec![3]],
            };
            let orders: Vec<u64> = parts
                .iter()
                .filter_map(|p| maximal_torus(&g, p).ok().map(|t| t.order()))
                .collect();
            for c in g.classes().iter().filter(|c| c.is_rss) {
                assert!(orders.contains(&c.centralizer_order), "{:?}", c.representative);
            }
        }
    }
}
