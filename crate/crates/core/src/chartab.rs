//! Character tables by the Dixon-Schneider method: common eigenvectors of
//! the class multiplication matrices over a prime field `F_ℓ` with
//! `ℓ ≡ 1 mod exp(G)`, lifted to cyclotomic values through eigenvalue
//! multiplicities.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::classfun::{hermitian_product, ClassFunction};
use crate::cyclo::{Accumulator, Cyclotomic};
use crate::error::{Error, Result};
use crate::fields::{factorize, is_prime};
use crate::groups::GroupTable;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group: Arc<GroupTable>,
    pub irreducibles: Vec<ClassFunction>,
    pub degrees: Vec<u64>,
    /// The splitting prime used.
    pub prime: u64,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, m: u64) -> u64 {
    powmod(a, m - 2, m)
}

/// The smallest prime `ℓ ≡ 1 mod e` with `ℓ > 2√|G|`.
pub fn splitting_prime(exponent: u64, order: u64) -> Result<u64> {
    let bound = 2.0 * (order as f64).sqrt();
    let mut l = exponent + 1;
    while l < (1u64 << 31) {
        if (l as f64) > bound && is_prime(l) {
            return Ok(l);
        }
        l += exponent;
    }
    Err(Error::Unsupported(format!("no splitting prime below 2^31 for exponent {exponent}")))
}

fn primitive_root(l: u64) -> u64 {
    let factors: Vec<u64> = factorize(l - 1).keys().copied().collect();
    (2..l).find(|&g| factors.iter().all(|&f| powmod(g, (l - 1) / f, l) != 1)).expect("prime field")
}

/// Row-reduced basis of a subspace of `F_ℓ^r`.
#[derive(Clone, Debug)]
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn rref(mut rows: Vec<Vec<u64>>, l: u64) -> Subspace {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, p);
        let inv = invmod(rows[rank][c], l);
        for x in rows[rank].iter_mut() {
            *x = mulmod(*x, inv, l);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c];
                for k in 0..cols {
                    rows[i][k] = (rows[i][k] + l - mulmod(f, rows[rank][k], l)) % l;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    rows.truncate(rank);
    Subspace { rows, pivots }
}

/// Null space of a square matrix mod `ℓ`, as row vectors.
fn null_space(m: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let red = rref(m.to_vec(), l);
    let free: Vec<usize> = (0..n).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in red.rows.iter().zip(&red.pivots) {
                v[pc] = (l - row[f]) % l;
            }
            v
        })
        .collect()
}

fn class_matrix(g: &GroupTable, j: usize, l: u64) -> Vec<Vec<u64>> {
    let r = g.num_classes();
    (0..r).map(|i| (0..r).map(|k| g.class_constant(i, j, k) as u64 % l).collect()).collect()
}

/// Splits a subspace into the eigenspaces of `a`, which must leave it
/// invariant. Returns `None` when it is a single eigenspace.
fn split(sub: &Subspace, a: &[Vec<u64>], l: u64) -> Result<Option<Vec<Subspace>>> {
    let k = sub.rows.len();
    let r = a.len();
    // images of the basis vectors, in coordinates read off the pivots
    let images: Vec<Vec<u64>> = sub
        .rows
        .iter()
        .map(|b| (0..r).map(|i| (0..r).fold(0, |acc, t| (acc + mulmod(a[i][t], b[t], l)) % l)).collect())
        .collect();
    // restricted matrix acting on coordinate columns
    let restricted: Vec<Vec<u64>> =
        (0..k).map(|row| (0..k).map(|col| images[col][sub.pivots[row]]).collect()).collect();
    let mut pieces = Vec::new();
    let mut total = 0;
    for lambda in 0..l {
        let mut m = restricted.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = (row[i] + l - lambda) % l;
        }
        let ns = null_space(&m, l);
        if ns.is_empty() {
            continue;
        }
        if ns.len() == k {
            return Ok(None);
        }
        total += ns.len();
        let vectors: Vec<Vec<u64>> = ns
            .iter()
            .map(|c| {
                (0..r).map(|t| (0..k).fold(0, |acc, i| (acc + mulmod(c[i], sub.rows[i][t], l)) % l)).collect()
            })
            .collect();
        pieces.push(rref(vectors, l));
        if total == k {
            break;
        }
    }
    if total != k {
        return Err(Error::Internal("class matrix not diagonalizable over the splitting field".into()));
    }
    Ok(Some(pieces))
}

/// Symmetric lift of a residue.
fn lift(x: u64, l: u64) -> i64 {
    if x > l / 2 {
        x as i64 - l as i64
    } else {
        x as i64
    }
}

pub fn character_table(g: &Arc<GroupTable>) -> Result<CharacterTable> {
    let r = g.num_classes();
    let order = g.order();
    let e = g.exponent();
    let l = splitting_prime(e, order)?;
    let z = powmod(primitive_root(l), (l - 1) / e, l);
    let sizes = g.class_sizes();
    let id = g.identity_class();

    let mut done: Vec<Subspace> = Vec::new();
    let mut pending = vec![rref((0..r).map(|i| (0..r).map(|k| u64::from(i == k)).collect()).collect(), l)];
    for j in 0..r {
        if pending.is_empty() {
            break;
        }
        let a = class_matrix(g, j, l);
        let mut next = Vec::new();
        for sub in pending {
            let pieces = split(&sub, &a, l)?.unwrap_or_else(|| vec![sub]);
            for p in pieces {
                if p.rows.len() == 1 {
                    done.push(p);
                } else {
                    next.push(p);
                }
            }
        }
        pending = next;
    }
    if !pending.is_empty() {
        return Err(Error::Internal("class matrices do not separate the characters".into()));
    }

    let mut rows: Vec<(u64, ClassFunction)> = Vec::with_capacity(r);
    for sub in done {
        let v = &sub.rows[0];
        let scale = invmod(v[id], l);
        // central character values ω_j = |C_j| χ(g_j) / χ(1)
        let omega: Vec<u64> = v.iter().map(|&x| mulmod(x, scale, l)).collect();
        let mut s = 0;
        for j in 0..r {
            let jinv = g.inverse_class(j);
            s = (s + mulmod(mulmod(omega[j], omega[jinv], l), invmod(sizes[j] % l, l), l)) % l;
        }
        let d2 = mulmod(order % l, invmod(s, l), l);
        let d = (1..=((order as f64).sqrt() as u64 + 1))
            .find(|&d| (d * d) % l == d2 && order % d == 0)
            .ok_or_else(|| Error::Internal("no integral degree lifts the residue".into()))?;
        let chi_mod: Vec<u64> =
            (0..r).map(|j| mulmod(mulmod(d % l, omega[j], l), invmod(sizes[j] % l, l), l)).collect();
        let mut values = Vec::with_capacity(r);
        for (j, c) in g.classes().iter().enumerate() {
            let o = c.order;
            let zo = powmod(z, e / o, l);
            let powers: Vec<u64> = (0..o).map(|t| chi_mod[g.power_class(j, t as i64)]).collect();
            let inv_o = invmod(o % l, l);
            let mut acc = Accumulator::new();
            for k in 0..o {
                let mut m = 0;
                for (t, &x) in powers.iter().enumerate() {
                    let root = powmod(zo, (o * o - k * t as u64 % o) % o, l);
                    m = (m + mulmod(x, root, l)) % l;
                }
                let mult = lift(mulmod(m, inv_o, l), l);
                if mult < 0 || mult as u64 > d {
                    return Err(Error::Internal(format!("eigenvalue multiplicity {mult} out of range")));
                }
                if mult > 0 {
                    acc.add_root(o as u32, k as i64, mult);
                }
            }
            values.push(acc.finish());
        }
        rows.push((d, ClassFunction::new(g, values)?));
    }
    let trivial = ClassFunction::trivial(g);
    rows.sort_by_cached_key(|(d, f)| {
        let key: Vec<String> = f.values().iter().map(|v| v.to_string()).collect();
        (*d, f != &trivial, key)
    });
    let (degrees, irreducibles) = rows.into_iter().unzip();
    Ok(CharacterTable { group: g.clone(), irreducibles, degrees, prime: l })
}

#[derive(Clone, Debug, Default)]
pub struct TableCheck {
    pub row_orthogonality: bool,
    pub column_orthogonality: bool,
    pub sum_of_squares: bool,
    pub degrees_divide_order: bool,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.row_orthogonality && self.column_orthogonality && self.sum_of_squares && self.degrees_divide_order
    }
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn trivial_index(&self) -> usize {
        let t = ClassFunction::trivial(&self.group);
        self.irreducibles.iter().position(|f| f == &t).expect("trivial character present")
    }

    /// Multiplicities `⟨f, χ_i⟩` (Hermitian), with the reconstruction
    /// `Σ m_i χ_i = f` asserted.
    pub fn decompose(&self, f: &ClassFunction) -> Result<Vec<(usize, Cyclotomic)>> {
        let mut out = Vec::new();
        let mut recon = ClassFunction::zero(&self.group);
        for (i, chi) in self.irreducibles.iter().enumerate() {
            let m = hermitian_product(f, chi)?;
            if !m.is_zero() {
                recon = recon.add(&chi.scale(&m))?;
                out.push((i, m));
            }
        }
        if &recon != f {
            return Err(Error::Internal("decomposition does not reconstruct the function".into()));
        }
        Ok(out)
    }

    /// Whether every multiplicity is a rational integer.
    pub fn is_virtual_character(&self, f: &ClassFunction) -> Result<bool> {
        Ok(self.decompose(f)?.iter().all(|(_, m)| m.as_integer().is_some()))
    }

    pub fn check_invariants(&self) -> Result<TableCheck> {
        let g = &self.group;
        let n = self.len();
        let mut row = n == g.num_classes();
        for i in 0..n {
            for j in 0..n {
                let p = hermitian_product(&self.irreducibles[i], &self.irreducibles[j])?;
                row &= p == Cyclotomic::from_int(i64::from(i == j));
            }
        }
        let mut col = true;
        for a in 0..g.num_classes() {
            for b in 0..g.num_classes() {
                let mut acc = Cyclotomic::zero();
                for chi in &self.irreducibles {
                    acc = acc.add(&chi.value(a).mul(&chi.value(b).conjugate()));
                }
                let expect = if a == b { g.classes()[a].centralizer_order as i64 } else { 0 };
                col &= acc == Cyclotomic::from_int(expect);
            }
        }
        let sum: u64 = self.degrees.iter().map(|d| d * d).sum();
        let degrees_match = self
            .irreducibles
            .iter()
            .zip(&self.degrees)
            .all(|(chi, &d)| chi.value(g.identity_class()).to_i64() == Some(d as i64));
        Ok(TableCheck {
            row_orthogonality: row,
            column_orthogonality: col,
            sum_of_squares: sum == g.order() && degrees_match,
            degrees_divide_order: self.degrees.iter().all(|d| g.order() % d == 0),
        })
    }

    pub fn to_json(&self) -> Value {
        let g = &self.group;
        let classes: Vec<Value> = g
            .classes()
            .iter()
            .map(|c| json!({"representative": c.representative.to_json(), "size": c.size(), "order": c.order}))
            .collect();
        json!({
            "group": g.label(),
            "prime": self.prime,
            "classes": classes,
            "degrees": self.degrees,
            "irreducibles": self.irreducibles.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
        })
    }

    /// One header row per class attribute, then one row per irreducible.
    pub fn to_csv(&self) -> String {
        let g = &self.group;
        let mut out = String::new();
        let reps: Vec<String> = g
            .classes()
            .iter()
            .map(|c| format!("\"{}\"", format!("{:?}", c.representative.rows()).replace(' ', "")))
            .collect();
        out.push_str(&format!("representative,{}\n", reps.join(",")));
        let sizes: Vec<String> = g.classes().iter().map(|c| c.size().to_string()).collect();
        out.push_str(&format!("size,{}\n", sizes.join(",")));
        let orders: Vec<String> = g.classes().iter().map(|c| c.order.to_string()).collect();
        out.push_str(&format!("order,{}\n", orders.join(",")));
        for (i, chi) in self.irreducibles.iter().enumerate() {
            let vals: Vec<String> = chi.values().iter().map(|v| format!("\"{v}\"")).collect();
            out.push_str(&format!("chi{},{}\n", i, vals.join(",")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classfun::{borel, hc_induce};
    use crate::groups::{build_group, GroupSpec, GroupTable, Mat};

    fn check(g: &Arc<GroupTable>) -> CharacterTable {
        let t = character_table(g).unwrap();
        let c = t.check_invariants().unwrap();
        assert!(c.passed(), "{}: {:?}", g.label(), c);
        t
    }

    #[test]
    fn prime_choice() {
        assert_eq!(splitting_prime(6, 6).unwrap(), 7);
        // 2√24 ≈ 9.8, exponent 12
        assert_eq!(splitting_prime(12, 24).unwrap(), 13);
    }

    #[test]
    fn s3_and_sl2_f3() {
        let g = build_group(&GroupSpec::gl(2, 2).unwrap()).unwrap();
        let t = check(&g);
        assert_eq!(t.degrees, vec![1, 1, 2]);
        assert_eq!(t.trivial_index(), 0);
        let g = build_group(&GroupSpec::sl(2, 3).unwrap()).unwrap();
        let t = check(&g);
        assert_eq!(t.degrees, vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn trivial_group() {
        let base = build_group(&GroupSpec::gl(1, 2).unwrap()).unwrap();
        assert_eq!(base.order(), 1);
        let t = check(&base);
        assert_eq!(t.degrees, vec![1]);
        let other = GroupTable::from_elements(
            "1".into(),
            base.fq().clone(),
            base.tower().clone(),
            2,
            vec![Mat::identity(2)],
        )
        .unwrap();
        assert_eq!(check(&Arc::new(other)).len(), 1);
    }

    #[test]
    fn decompositions() {
        let g = build_group(&GroupSpec::sl(2, 3).unwrap()).unwrap();
        let t = character_table(&g).unwrap();
        let triv = t.decompose(&ClassFunction::trivial(&g)).unwrap();
        assert_eq!(triv, vec![(t.trivial_index(), Cyclotomic::one())]);
        let reg = t.decompose(&ClassFunction::regular(&g)).unwrap();
        assert_eq!(reg.len(), t.len());
        for (i, m) in reg {
            assert_eq!(m.to_i64(), Some(t.degrees[i] as i64));
        }
        let b = borel(&g).unwrap();
        let perm = hc_induce(&b, &ClassFunction::trivial(&b.levi)).unwrap();
        let d = t.decompose(&perm).unwrap();
        assert!(d.iter().all(|(_, m)| m.to_i64().is_some_and(|x| x > 0)));
        let total: i64 = d.iter().map(|(i, m)| m.to_i64().unwrap() * t.degrees[*i] as i64).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn more_groups() {
        for spec in [GroupSpec::gl(2, 3), GroupSpec::gl(2, 4), GroupSpec::sl(2, 5), GroupSpec::gl(3, 2)] {
            let g = build_group(&spec.unwrap()).unwrap();
            let t = check(&g);
            assert_eq!(t.len(), g.num_classes());
        }
    }
}
