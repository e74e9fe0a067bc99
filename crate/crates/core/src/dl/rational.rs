//! The zero-dimensional variety `G(F_q)/N(F_q)` of a rational parabolic, with
//! `(g, m) · xN = g x m^{-1} N`.

use std::sync::Arc;

use crate::classfun::CosetSpace;
use crate::groups::{GroupTable, ParabolicData};

pub struct RationalModel {
    pub parabolic: Arc<ParabolicData>,
    pub cosets: CosetSpace,
}

impl RationalModel {
    pub fn new(parabolic: Arc<ParabolicData>) -> Self {
        let cosets = CosetSpace::of_unipotent_radical(&parabolic);
        RationalModel { parabolic, cosets }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.parabolic.group
    }

    /// `#Y(F_{q^n})`. The variety is a finite set of rational points, so every
    /// level has the same count.
    pub fn point_count(&self, _level: usize) -> u64 {
        self.cosets.len() as u64
    }

    /// Entry `m` is the number of cosets fixed by `(g, m)`: those `xN` with
    /// `x^{-1} g x ∈ P` projecting to `m`.
    pub fn fixed_histogram(&self, g: u32) -> Vec<u64> {
        let grp = self.group();
        let p = &self.parabolic;
        let mut hist = vec![0u64; p.levi.order() as usize];
        for &x in &self.cosets.reps {
            if let Some(m) = p.project(grp.conj(grp.inv(x), g)) {
                hist[m as usize] += 1;
            }
        }
        hist
    }

    /// Fixed points of `(g, m)` by acting on every coset.
    pub fn fixed_points_direct(&self, g: u32, m: u32) -> u64 {
        let grp = self.group();
        let m_inv = grp.inv(self.parabolic.levi_embedding[m as usize]);
        (0..self.cosets.len())
            .filter(|&c| self.cosets.right_act(self.cosets.left_act(g, c), m_inv) == c)
            .count() as u64
    }
}
