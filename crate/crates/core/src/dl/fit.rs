//! Exact exponential fits `N_n = Σ c_j Λ_j^n` of fixed-point counts, with the
//! eigenvalues drawn from a finite candidate set.

use serde_json::{json, Value};

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};

/// An eigenvalue candidate `ζ_d^k · q^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub d: u32,
    pub k: u32,
    pub e: u32,
    pub value: Cyclotomic,
}

impl Candidate {
    pub fn new(q: u64, d: u32, k: u32, e: u32) -> Self {
        let value = Cyclotomic::root_of_unity(d, k as i64).scale_int((q as i64).pow(e));
        Candidate { d, k, e, value }
    }

    pub fn label(&self) -> String {
        match (self.d, self.k) {
            (_, 0) => format!("q^{}", self.e),
            (2, 1) => format!("-q^{}", self.e),
            _ => format!("z{}^{}*q^{}", self.d, self.k, self.e),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExponentialFit {
    pub terms: Vec<(Candidate, Cyclotomic)>,
    /// `N_n − Σ c_j Λ_j^n` for every observed `n`; all zero.
    pub residuals: Vec<Cyclotomic>,
    /// Number of candidate sets tried before the first exact fit.
    pub tried: usize,
}

impl ExponentialFit {
    /// The `n = 0` extrapolation `Σ c_j`.
    pub fn value(&self) -> Cyclotomic {
        self.terms.iter().map(|(_, c)| c.clone()).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.terms.iter().map(|(l, c)| json!({"eigenvalue": l.label(), "coefficient": c.to_json()})).collect::<Vec<_>>(),
            "residuals": self.residuals.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Candidates `ζ_d^k q^e` for `e ≤ max_e` and every `d` in `orders`, without
/// repeats, in a fixed order.
pub fn candidates(q: u64, orders: &[u32], max_e: u32) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::new();
    for &d in orders {
        for e in 0..=max_e {
            for k in 0..d {
                let c = Candidate::new(q, d, k, e);
                if !out.iter().any(|o| o.value == c.value) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Solves `A x = b` over the cyclotomics; `None` when singular.
fn solve(mut a: Vec<Vec<Cyclotomic>>, mut b: Vec<Cyclotomic>) -> Option<Vec<Cyclotomic>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, piv);
        b.swap(c, piv);
        let inv = a[c][c].inv().ok()?;
        for k in c..n {
            a[c][k] = a[c][k].mul(&inv);
        }
        b[c] = b[c].mul(&inv);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in c..n {
                    let t = f.mul(&a[c][k]);
                    a[r][k] = a[r][k].sub(&t);
                }
                let t = f.mul(&b[c]);
                b[r] = b[r].sub(&t);
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Fits `counts[n-1] = Σ c_j Λ_j^n` using the fewest candidates that reproduce
/// every count, leaving at least one count unused by the solve so that the
/// residuals test the model. Different minimal fits must agree on `Σ c_j`.
pub fn fit_counts(counts: &[i64], cands: &[Candidate]) -> Result<ExponentialFit> {
    let nmax = counts.len();
    if nmax < 2 {
        return Err(Error::InvalidInput("an exact fit needs at least two counts".into()));
    }
    let data: Vec<Cyclotomic> = counts.iter().map(|&c| Cyclotomic::from_int(c)).collect();
    let powers: Vec<Vec<Cyclotomic>> = cands
        .iter()
        .map(|c| (1..=nmax as u32).map(|n| c.value.pow(n)).collect())
        .collect();
    let mut tried = 0;
    if data.iter().all(|d| d.is_zero()) {
        return Ok(ExponentialFit { terms: Vec::new(), residuals: data, tried });
    }
    for size in 1..nmax {
        let mut fits: Vec<ExponentialFit> = Vec::new();
        for subset in combinations(cands.len(), size) {
            tried += 1;
            let a: Vec<Vec<Cyclotomic>> =
                (0..size).map(|n| subset.iter().map(|&j| powers[j][n].clone()).collect()).collect();
            let Some(coef) = solve(a, data[..size].to_vec()) else { continue };
            if coef.iter().any(|c| c.is_zero()) {
                continue;
            }
            let residuals: Vec<Cyclotomic> = (0..nmax)
                .map(|n| {
                    let model: Cyclotomic =
                        subset.iter().zip(&coef).map(|(&j, c)| c.mul(&powers[j][n])).sum();
                    data[n].sub(&model)
                })
                .collect();
            if residuals.iter().all(|r| r.is_zero()) {
                let terms = subset.iter().map(|&j| cands[j].clone()).zip(coef).collect();
                fits.push(ExponentialFit { terms, residuals, tried });
            }
        }
        if let Some(first) = fits.first() {
            let v = first.value();
            if fits.iter().any(|f| f.value() != v) {
                return Err(Error::NoFit(format!(
                    "{} minimal exponential models of size {size} disagree at n = 0",
                    fits.len()
                )));
            }
            return Ok(fits.swap_remove(0));
        }
    }
    Err(Error::NoFit(format!(
        "no exact model with fewer than {nmax} eigenvalues among {} candidates",
        cands.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_a_three_term_model() {
        let q = 3i64;
        // N_n = q^{2n} − 3 − 6(−q)^n
        let counts: Vec<i64> = (1..=4).map(|n| q.pow(2 * n) - 3 - 6 * (-q).pow(n)).collect();
        let cands = candidates(3, &[1, 2], 2);
        let fit = fit_counts(&counts, &cands).unwrap();
        assert_eq!(fit.terms.len(), 3);
        assert_eq!(fit.value(), Cyclotomic::from_int(1 - 3 - 6));
    }

    #[test]
    fn refuses_when_no_model_fits() {
        let counts = [1, 7, 2, 11];
        let cands = candidates(2, &[1], 1);
        assert!(matches!(fit_counts(&counts, &cands), Err(Error::NoFit(_))));
    }

    #[test]
    fn cyclotomic_eigenvalues() {
        // N_n = ζ_3^n + ζ_3^{2n} + q^n
        let q = 2u64;
        let z = Cyclotomic::root_of_unity(3, 1);
        let counts: Vec<i64> = (1..=4u32)
            .map(|n| {
                let v = z.pow(n).add(&z.pow(2 * n)).add(&Cyclotomic::from_int(2i64.pow(n)));
                v.to_i64().unwrap()
            })
            .collect();
        let fit = fit_counts(&counts, &candidates(q, &[1, 3], 1)).unwrap();
        assert_eq!(fit.value(), Cyclotomic::from_int(3));
    }
}
