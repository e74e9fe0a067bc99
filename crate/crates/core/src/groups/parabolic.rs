use std::sync::Arc;

use crate::error::{Error, Result};

use super::table::GroupTable;

/// A rational parabolic `P = M ⋉ N(P)` of `GL_n` or `SL_n` whose Levi is the
/// block-diagonal subgroup of a composition. The blocks are stacked along the
/// diagonal in composition order; `block_order` lists them from "top" to
/// "bottom" of the flag, so the identity order is the block upper-triangular
/// parabolic and its reverse the opposite one.
#[derive(Debug)]
pub struct ParabolicData {
    pub group: Arc<GroupTable>,
    pub composition: Vec<usize>,
    pub block_order: Vec<usize>,
    /// Sorted element indices of `P(F_q)` in the group.
    pub p_points: Vec<u32>,
    /// Sorted element indices of `N(P)(F_q)` in the group.
    pub n_points: Vec<u32>,
    pub levi: Arc<GroupTable>,
    /// Levi index to group index.
    pub levi_embedding: Vec<u32>,
    /// Group index to Levi index of the projection, `u32::MAX` outside `P`.
    projection: Vec<u32>,
    in_n: Vec<bool>,
}

fn block_of(composition: &[usize]) -> Vec<usize> {
    composition
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat(b).take(s))
        .collect()
}

fn validate(g: &GroupTable, composition: &[usize]) -> Result<()> {
    if composition.iter().sum::<usize>() != g.n() || composition.contains(&0) {
        return Err(Error::InvalidInput(format!(
            "composition {composition:?} is not a composition of {}",
            g.n()
        )));
    }
    Ok(())
}

/// The block upper-triangular parabolic of a composition.
pub fn standard_parabolic(g: &Arc<GroupTable>, composition: &[usize]) -> Result<ParabolicData> {
    validate(g, composition)?;
    let order: Vec<usize> = (0..composition.len()).collect();
    parabolic_with_block_order(g, composition, &order)
}

/// The block lower-triangular parabolic with the same Levi.
pub fn opposite_parabolic(p: &ParabolicData) -> Result<ParabolicData> {
    let order: Vec<usize> = p.block_order.iter().rev().copied().collect();
    parabolic_with_block_order(&p.group, &p.composition, &order)
}

/// All rational parabolics whose Levi is the block-diagonal Levi of the
/// composition, one for each ordering of the blocks.
pub fn parabolics_with_levi(g: &Arc<GroupTable>, composition: &[usize]) -> Result<Vec<ParabolicData>> {
    validate(g, composition)?;
    let r = composition.len();
    let mut orders = Vec::new();
    permutations(&mut (0..r).collect(), 0, &mut orders);
    orders.sort();
    orders
        .iter()
        .map(|o| parabolic_with_block_order(g, composition, o))
        .collect()
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

pub fn parabolic_with_block_order(
    g: &Arc<GroupTable>,
    composition: &[usize],
    block_order: &[usize],
) -> Result<ParabolicData> {
    validate(g, composition)?;
    let r = composition.len();
    let mut sorted = block_order.to_vec();
    sorted.sort();
    if sorted != (0..r).collect::<Vec<_>>() {
        return Err(Error::InvalidInput(format!("{block_order:?} is not an ordering of {r} blocks")));
    }
    let blocks = block_of(composition);
    let mut rank = vec![0; r];
    for (pos, &b) in block_order.iter().enumerate() {
        rank[b] = pos;
    }
    let n = g.n();
    // entry (i, j) may be nonzero in P iff block(i) is not later than block(j)
    let allowed = |i: usize, j: usize| rank[blocks[i]] <= rank[blocks[j]];
    let mut p_points = Vec::new();
    let mut levi_elems = Vec::new();
    let mut n_points = Vec::new();
    for x in 0..g.order() as u32 {
        let m = g.element(x);
        let in_p = (0..n).all(|i| (0..n).all(|j| allowed(i, j) || m.get(i, j) == 0));
        if !in_p {
            continue;
        }
        p_points.push(x);
        let off_diag_zero =
            (0..n).all(|i| (0..n).all(|j| blocks[i] == blocks[j] || m.get(i, j) == 0));
        if off_diag_zero {
            levi_elems.push(*m);
        }
        let unipotent = (0..n).all(|i| {
            (0..n).all(|j| {
                if blocks[i] == blocks[j] {
                    m.get(i, j) == u8::from(i == j)
                } else {
                    true
                }
            })
        });
        if unipotent {
            n_points.push(x);
        }
    }
    let label = format!(
        "{} Levi {:?}",
        g.label(),
        composition
    );
    let levi = Arc::new(GroupTable::from_elements(
        label,
        g.fq().clone(),
        g.tower().clone(),
        n,
        levi_elems,
    )?);
    let levi_embedding: Vec<u32> = levi
        .elements()
        .iter()
        .map(|m| g.index_of(m).expect("Levi lies in the group"))
        .collect();
    let mut projection = vec![u32::MAX; g.order() as usize];
    for &x in &p_points {
        let m = g.element(x);
        let mut d = *m;
        for i in 0..n {
            for j in 0..n {
                if blocks[i] != blocks[j] {
                    d.set(i, j, 0);
                }
            }
        }
        projection[x as usize] = levi.index_of(&d).expect("block diagonal part is in the Levi");
    }
    let mut in_n = vec![false; g.order() as usize];
    for &u in &n_points {
        in_n[u as usize] = true;
    }
    let data = ParabolicData {
        group: g.clone(),
        composition: composition.to_vec(),
        block_order: block_order.to_vec(),
        p_points,
        n_points,
        levi,
        levi_embedding,
        projection,
        in_n,
    };
    Ok(data)
}

impl ParabolicData {
    pub fn contains(&self, x: u32) -> bool {
        self.projection[x as usize] != u32::MAX
    }

    pub fn in_unipotent_radical(&self, x: u32) -> bool {
        self.in_n[x as usize]
    }

    /// Levi component of an element of `P`.
    pub fn project(&self, x: u32) -> Option<u32> {
        let m = self.projection[x as usize];
        (m != u32::MAX).then_some(m)
    }

    pub fn order(&self) -> u64 {
        self.p_points.len() as u64
    }

    pub fn label(&self) -> String {
        let kind = if self.block_order.windows(2).all(|w| w[0] < w[1]) {
            "upper".to_string()
        } else if self.block_order.windows(2).all(|w| w[0] > w[1]) {
            "lower".to_string()
        } else {
            format!("order {:?}", self.block_order)
        };
        format!("P{:?} {kind}", self.composition)
    }

    /// Checks `P = M ⋉ N` by unique factorization and that the projection is a
    /// homomorphism with kernel `N`.
    pub fn check_levi_decomposition(&self) -> bool {
        let g = &self.group;
        if self.order() != self.levi.order() * self.n_points.len() as u64 {
            return false;
        }
        let mut seen = vec![false; g.order() as usize];
        for (mi, &m) in self.levi_embedding.iter().enumerate() {
            for &u in &self.n_points {
                let x = g.mul_in(m, u);
                if seen[x as usize] || !self.contains(x) || self.project(x) != Some(mi as u32) {
                    return false;
                }
                seen[x as usize] = true;
            }
        }
        let kernel_ok = self
            .p_points
            .iter()
            .all(|&x| (self.project(x) == Some(self.levi.identity())) == self.in_unipotent_radical(x));
        let hom_ok = self.p_points.iter().step_by(7).all(|&x| {
            self.p_points.iter().step_by(5).all(|&y| {
                let xy = g.mul_in(x, y);
                self.project(xy)
                    == Some(self.levi.mul_in(self.project(x).unwrap(), self.project(y).unwrap()))
            })
        });
        kernel_ok && hom_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, GroupSpec};

    #[test]
    fn borel_of_gl2_f3() {
        let g = build_group(&GroupSpec::gl(2, 3).unwrap()).unwrap();
        let b = standard_parabolic(&g, &[1, 1]).unwrap();
        assert_eq!(b.order(), 12);
        assert_eq!(b.n_points.len(), 3);
        assert_eq!(b.levi.order(), 4);
        assert!(b.check_levi_decomposition());
        let lower = opposite_parabolic(&b).unwrap();
        assert!(lower.check_levi_decomposition());
        assert_ne!(lower.p_points, b.p_points);
    }

    #[test]
    fn borel_of_sl2_f2() {
        let g = build_group(&GroupSpec::sl(2, 2).unwrap()).unwrap();
        let b = standard_parabolic(&g, &[1, 1]).unwrap();
        assert_eq!(b.n_points.len(), 2);
        assert_eq!(b.levi.order(), 1);
    }

    #[test]
    fn gl3_f2_maximal_parabolic() {
        let g = build_group(&GroupSpec::gl(3, 2).unwrap()).unwrap();
        let p = standard_parabolic(&g, &[1, 2]).unwrap();
        assert_eq!(g.order() / p.order(), 7);
        let (_, reps) = g.left_cosets(&p.p_points);
        assert_eq!(reps.len(), 7);
        assert!(p.check_levi_decomposition());
        assert_eq!(parabolics_with_levi(&g, &[1, 1, 1]).unwrap().len(), 6);
        assert!(standard_parabolic(&g, &[2, 2]).is_err());
    }
}
