use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{factorize, FieldTower};

use super::mat::{is_squarefree, Fq, Mat, MAX_N};

/// Default bound on group orders and on the number of matrices scanned.
pub const DEFAULT_GROUP_BUDGET: u64 = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    GL,
    SL,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::GL => "GL",
            Family::SL => "SL",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GL" => Ok(Family::GL),
            "SL" => Ok(Family::SL),
            _ => Err(Error::InvalidInput(format!("unknown group family {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
    pub p: u32,
    pub k: usize,
    /// Largest tower level available for points over `F_{q^D}`.
    pub max_extension: usize,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize, q: u64) -> Result<Self> {
        let f = factorize(q);
        if f.len() != 1 {
            return Err(Error::InvalidInput(format!("{q} is not a prime power")));
        }
        let (&p, &k) = f.iter().next().unwrap();
        if n == 0 || n > MAX_N {
            return Err(Error::Unsupported(format!("rank parameter n = {n} (supported 1..={MAX_N})")));
        }
        Ok(GroupSpec { family, n, p: p as u32, k: k as usize, max_extension: 2 })
    }

    pub fn gl(n: usize, q: u64) -> Result<Self> {
        Self::new(Family::GL, n, q)
    }

    pub fn sl(n: usize, q: u64) -> Result<Self> {
        Self::new(Family::SL, n, q)
    }

    pub fn with_max_extension(mut self, d: usize) -> Self {
        self.max_extension = d;
        self
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.k as u32)
    }

    pub fn label(&self) -> String {
        format!("{}_{}(F_{})", self.family.name(), self.n, self.q())
    }

    /// `|G(F_q)|` from the order formula.
    pub fn expected_order(&self) -> u64 {
        let q = self.q();
        let qn = q.pow(self.n as u32);
        let gl: u64 = (0..self.n).map(|i| qn - q.pow(i as u32)).product();
        match self.family {
            Family::GL => gl,
            Family::SL => gl / (q - 1),
        }
    }
}

/// The groups every table and suite is exercised on.
pub fn supported_targets() -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for q in [2, 3, 4, 5, 7, 8, 9] {
        out.push(GroupSpec::sl(2, q).expect("prime power"));
    }
    for q in [2, 3, 4, 5] {
        out.push(GroupSpec::gl(2, q).expect("prime power"));
    }
    for (n, q) in [(3, 2), (3, 3), (4, 2)] {
        out.push(GroupSpec::gl(n, q).expect("prime power"));
    }
    out
}

pub fn group_budget() -> u64 {
    std::env::var("DLCHAR_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_GROUP_BUDGET)
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub representative: Mat,
    pub rep_index: u32,
    pub members: Vec<u32>,
    pub centralizer_order: u64,
    pub order: u64,
    pub is_rss: bool,
}

impl ConjClass {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }
}

/// A fully enumerated finite matrix group over `F_q`, elements sorted
/// lexicographically on the row-major entries.
#[derive(Debug)]
pub struct GroupTable {
    label: String,
    spec: Option<GroupSpec>,
    fq: Arc<Fq>,
    tower: Arc<FieldTower>,
    n: usize,
    elements: Vec<Mat>,
    code_index: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
    class_of: Vec<u32>,
    classes: Vec<ConjClass>,
    generators: Vec<u32>,
    constants: OnceLock<Vec<u32>>,
}

const ABSENT: u32 = u32::MAX;

/// Enumerates `GL_n(F_q)` or `SL_n(F_q)` with its conjugacy classes.
pub fn build_group(spec: &GroupSpec) -> Result<Arc<GroupTable>> {
    let q = spec.q();
    let budget = group_budget();
    let scan = (q as f64).powi((spec.n * spec.n) as i32);
    if scan > budget as f64 || spec.expected_order() > budget {
        return Err(Error::Budget(format!(
            "{} needs {scan} matrices scanned (budget {budget})",
            spec.label()
        )));
    }
    let tower = Arc::new(FieldTower::new(
        spec.p,
        spec.k,
        spec.max_extension.max(1),
        crate::fields::field_budget(),
    )?);
    let fq = Arc::new(Fq::from_tower(&tower)?);
    let n = spec.n;
    let qs = q as usize;
    let total = qs.pow((n * n) as u32);
    let elements: Vec<Mat> = (0..total)
        .into_par_iter()
        .filter_map(|c| {
            let m = Mat::from_code(n, qs, c);
            let d = m.det(&fq);
            let keep = match spec.family {
                Family::GL => d != 0,
                Family::SL => d == 1,
            };
            keep.then_some(m)
        })
        .collect();
    let table = GroupTable::from_elements(spec.label(), fq, tower, n, elements)?;
    let mut table = table;
    table.spec = Some(spec.clone());
    if table.order() != spec.expected_order() {
        return Err(Error::Internal(format!(
            "enumerated {} elements for {}, expected {}",
            table.order(),
            spec.label(),
            spec.expected_order()
        )));
    }
    Ok(Arc::new(table))
}

impl GroupTable {
    /// Builds the table of the group formed by the given matrices. The list
    /// must be closed under products; this is checked on generators.
    pub fn from_elements(
        label: String,
        fq: Arc<Fq>,
        tower: Arc<FieldTower>,
        n: usize,
        mut elements: Vec<Mat>,
    ) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let q = fq.q();
        let codes = q.pow((n * n) as u32);
        if codes as u64 > group_budget() {
            return Err(Error::Budget(format!("index table of size {codes}")));
        }
        let mut code_index = vec![ABSENT; codes];
        for (i, m) in elements.iter().enumerate() {
            code_index[m.code(q)] = i as u32;
        }
        let id = Mat::identity(n);
        let identity = code_index[id.code(q)];
        if identity == ABSENT {
            return Err(Error::InvalidInput("element list does not contain the identity".into()));
        }
        let mut table = GroupTable {
            label,
            spec: None,
            fq,
            tower,
            n,
            elements,
            code_index,
            inverse: Vec::new(),
            identity,
            class_of: Vec::new(),
            classes: Vec::new(),
            generators: Vec::new(),
            constants: OnceLock::new(),
        };
        let inverse: Option<Vec<u32>> = table
            .elements
            .par_iter()
            .map(|m| m.inverse(&table.fq).and_then(|i| table.index_of(&i)))
            .collect();
        table.inverse =
            inverse.ok_or_else(|| Error::InvalidInput("element list is not closed under inverses".into()))?;
        table.generators = table.find_generators()?;
        table.compute_classes();
        Ok(table)
    }

    /// The subgroup formed by the given element indices, as its own table.
    pub fn subgroup(&self, label: String, members: &[u32]) -> Result<GroupTable> {
        let els = members.iter().map(|&i| self.elements[i as usize]).collect();
        GroupTable::from_elements(label, self.fq.clone(), self.tower.clone(), self.n, els)
    }

    fn find_generators(&self) -> Result<Vec<u32>> {
        let mut gens: Vec<u32> = Vec::new();
        let mut inside = vec![false; self.elements.len()];
        inside[self.identity as usize] = true;
        let mut members = vec![self.identity];
        for cand in 0..self.elements.len() as u32 {
            if inside[cand as usize] {
                continue;
            }
            gens.push(cand);
            // close up under right multiplication by all generators
            let mut frontier = members.clone();
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = self.mul(x, g).ok_or_else(|| {
                        Error::InvalidInput("element list is not closed under products".into())
                    })?;
                    if !inside[y as usize] {
                        inside[y as usize] = true;
                        members.push(y);
                        frontier.push(y);
                    }
                }
            }
            if members.len() == self.elements.len() {
                break;
            }
        }
        Ok(gens)
    }

    fn compute_classes(&mut self) {
        let order = self.elements.len();
        let mut class_of = vec![ABSENT; order];
        let mut classes = Vec::new();
        for start in 0..order as u32 {
            if class_of[start as usize] != ABSENT {
                continue;
            }
            let cid = classes.len() as u32;
            class_of[start as usize] = cid;
            let mut members = vec![start];
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                k += 1;
                for &g in &self.generators {
                    let y = self.conj(g, x);
                    if class_of[y as usize] == ABSENT {
                        class_of[y as usize] = cid;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            let rep = self.elements[start as usize];
            classes.push(ConjClass {
                representative: rep,
                rep_index: start,
                centralizer_order: order as u64 / members.len() as u64,
                order: self.element_order(start),
                is_rss: is_squarefree(&rep.char_poly(&self.fq), &self.fq),
                members,
            });
        }
        self.class_of = class_of;
        self.classes = classes;
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    pub fn fq(&self) -> &Arc<Fq> {
        &self.fq
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.fq.q() as u64
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &Mat {
        &self.elements[i as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn index_of(&self, m: &Mat) -> Option<u32> {
        if m.n() != self.n {
            return None;
        }
        let i = self.code_index[m.code(self.fq.q())];
        (i != ABSENT).then_some(i)
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.index_of(m).is_some()
    }

    /// Product of two elements, `None` if it leaves the list.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> Option<u32> {
        self.index_of(&self.elements[a as usize].mul(&self.elements[b as usize], &self.fq))
    }

    /// Product inside the group; panics if the list is not closed.
    #[inline]
    pub fn mul_in(&self, a: u32, b: u32) -> u32 {
        self.mul(a, b).expect("group table is closed under products")
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `g x g^{-1}`.
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul_in(self.mul_in(g, x), self.inv(g))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut r = self.identity;
        for _ in 0..e {
            r = self.mul_in(r, a);
        }
        r
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul_in(x, a);
            k += 1;
        }
        k
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn class_of_matrix(&self, m: &Mat) -> Option<usize> {
        self.index_of(m).map(|i| self.class_of(i))
    }

    pub fn identity_class(&self) -> usize {
        self.class_of(self.identity)
    }

    pub fn class_sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.size()).collect()
    }

    /// The class of `g^{-1}` for `g` in class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.class_of(self.inv(self.classes[c].rep_index))
    }

    /// Class of `x^k` for `x` in class `c`.
    pub fn power_class(&self, c: usize, k: i64) -> usize {
        let rep = self.classes[c].rep_index;
        let o = self.classes[c].order as i64;
        self.class_of(self.pow(rep, k.rem_euclid(o) as u64))
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        self.classes
            .iter()
            .fold(1, |acc, c| num_integer::lcm(acc, c.order))
    }

    /// Class multiplication coefficients: the number of pairs `(x, y)` with
    /// `x ∈ C_i`, `y ∈ C_j` and `x y = z_k` for the representative `z_k`.
    pub fn class_constant(&self, i: usize, j: usize, k: usize) -> u32 {
        let r = self.classes.len();
        self.constants.get_or_init(|| self.compute_constants())[(i * r + j) * r + k]
    }

    fn compute_constants(&self) -> Vec<u32> {
        let r = self.classes.len();
        let per_k: Vec<Vec<u32>> = (0..r)
            .into_par_iter()
            .map(|k| {
                let z = self.classes[k].rep_index;
                let mut local = vec![0u32; r * r];
                for y in 0..self.elements.len() as u32 {
                    let x = self.mul_in(z, self.inv(y));
                    local[self.class_of(x) * r + self.class_of(y)] += 1;
                }
                local
            })
            .collect();
        let mut out = vec![0u32; r * r * r];
        for (k, local) in per_k.iter().enumerate() {
            for ij in 0..r * r {
                out[ij * r + k] = local[ij];
            }
        }
        out
    }

    /// Left cosets `xH` of a subgroup given by element indices. Returns the
    /// coset number of every element and the least element of every coset.
    pub fn left_cosets(&self, subgroup: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let mut coset_of = vec![ABSENT; self.elements.len()];
        let mut reps = Vec::new();
        for x in 0..self.elements.len() as u32 {
            if coset_of[x as usize] != ABSENT {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &h in subgroup {
                coset_of[self.mul_in(x, h) as usize] = id;
            }
        }
        (coset_of, reps)
    }

    /// Brute-force centralizer order of an element.
    pub fn centralizer_order_brute(&self, x: u32) -> u64 {
        (0..self.elements.len() as u32)
            .filter(|&g| self.mul_in(g, x) == self.mul_in(x, g))
            .count() as u64
    }

    /// `groups.json` payload.
    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({
                    "index": i,
                    "representative": c.representative.to_json(),
                    "size": c.size(),
                    "centralizer_order": c.centralizer_order,
                    "order": c.order,
                    "is_rss": c.is_rss,
                })
            })
            .collect();
        json!({
            "group": self.label,
            "q": self.q(),
            "n": self.n,
            "order": self.order(),
            "num_classes": self.classes.len(),
            "classes": classes,
        })
    }
}

/// Cache of built groups keyed by their spec, so suites can share tables.
pub fn cached_group(spec: &GroupSpec) -> Result<Arc<GroupTable>> {
    use std::sync::Mutex;
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<GroupTable>>>> = OnceLock::new();
    let key = format!("{}:{}", spec.label(), spec.max_extension);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&key) {
        return Ok(g.clone());
    }
    let g = build_group(spec)?;
    cache.lock().unwrap().insert(key, g.clone());
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_class_counts() {
        let g = build_group(&GroupSpec::sl(2, 3).unwrap()).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.num_classes(), 7);
        let g = build_group(&GroupSpec::gl(2, 3).unwrap()).unwrap();
        assert_eq!(g.num_classes(), 8);
        let g = build_group(&GroupSpec::gl(3, 2).unwrap()).unwrap();
        assert_eq!(g.order(), 168);
        assert_eq!(g.num_classes(), 6);
    }

    #[test]
    fn class_data_consistent() {
        for spec in [GroupSpec::gl(2, 4).unwrap(), GroupSpec::sl(2, 5).unwrap(), GroupSpec::gl(3, 2).unwrap()] {
            let g = build_group(&spec).unwrap();
            let total: u64 = g.class_sizes().iter().sum();
            assert_eq!(total, g.order());
            for c in g.classes() {
                assert_eq!(c.size() * c.centralizer_order, g.order());
                assert_eq!(g.centralizer_order_brute(c.rep_index), c.centralizer_order);
                assert_eq!(c.members[0], c.rep_index);
                for &m in &c.members {
                    let found = (0..g.order() as u32).any(|x| g.conj(x, c.rep_index) == m);
                    assert!(found);
                }
            }
        }
    }

    #[test]
    fn class_constants_sum_to_class_products() {
        let g = build_group(&GroupSpec::gl(2, 3).unwrap()).unwrap();
        let r = g.num_classes();
        let sizes = g.class_sizes();
        for i in 0..r {
            for j in 0..r {
                let total: u64 = (0..r).map(|k| g.class_constant(i, j, k) as u64 * sizes[k]).sum();
                assert_eq!(total, sizes[i] * sizes[j]);
            }
        }
    }

    #[test]
    fn cosets_of_borel() {
        let g = build_group(&GroupSpec::gl(3, 2).unwrap()).unwrap();
        let upper: Vec<u32> = (0..g.order() as u32)
            .filter(|&i| {
                let m = g.element(i);
                m.get(1, 0) == 0 && m.get(2, 0) == 0 && m.get(2, 1) == 0
            })
            .collect();
        let (coset_of, reps) = g.left_cosets(&upper);
        assert_eq!(reps.len(), 21);
        assert!(coset_of.iter().all(|&c| (c as usize) < reps.len()));
    }

    #[test]
    fn budget_refusal() {
        let spec = GroupSpec::gl(4, 3).unwrap();
        assert!(matches!(build_group(&spec), Err(Error::Budget(_))));
        assert!(GroupSpec::gl(2, 6).is_err());
    }
}
