//! The k-tuple procedure, raising operators, Kazhdan-Lusztig polynomials
//! (closed form and path-counting oracle), Kac-module composition factors,
//! and the height correspondence to the principal block of gl(r|r).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{i_vector, s_lambda_mu, z_q};
use crate::qpoly::QPoly;
use crate::weight::{
    analyze, compare, dominant_conjugate, AtypicalStructure, BlockKey, DominantWitness, Weight,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTuple {
    /// `k[s]` for slot `s`, 0-based.
    pub k: Vec<i64>,
}

/// Minimal regularity-preserving increments. Slots are processed from the
/// largest atypical value down; each one moves to the first integer above it
/// that is not yet occupied, and the new value then counts as occupied.
fn k_tuple_of(sh_entries: &[i64], aty: &[i64]) -> Vec<i64> {
    let mut taken: BTreeSet<i64> = sh_entries.iter().copied().collect();
    let mut order: Vec<usize> = (0..aty.len()).collect();
    order.sort_by(|&a, &b| aty[b].cmp(&aty[a]));
    let mut k = vec![0; aty.len()];
    for s in order {
        let mut v = aty[s] + 1;
        while taken.contains(&v) {
            v += 1;
        }
        taken.insert(v);
        k[s] = v - aty[s];
    }
    k
}

pub fn k_tuple(lam: &Weight) -> Result<KTuple> {
    let st = analyze(lam)?;
    Ok(KTuple {
        k: k_tuple_of(&lam.shifted().entries, &st.aty),
    })
}

/// A weight moving along its own atypical lattice; root positions stay fixed.
#[derive(Clone, Debug)]
struct Walker {
    st: AtypicalStructure,
    g: Vec<i64>,
}

impl Walker {
    fn new(lam: &Weight) -> Result<Self> {
        let st = analyze(lam)?;
        let g = st.aty.clone();
        Ok(Self { st, g })
    }

    fn weight(&self) -> Weight {
        self.st.weight_at(&self.g)
    }

    fn raise(&mut self, s: usize) {
        let w = self.weight();
        let k = k_tuple_of(&w.shifted().entries, &self.g);
        self.g[s] += k[s];
    }
}

/// Applies the raising operator at 1-based slot `s` the given number of times.
pub fn raise(lam: &Weight, s: usize, times: usize) -> Result<Weight> {
    let mut wk = Walker::new(lam)?;
    if s == 0 || s > wk.st.r {
        return Err(Error::IndexOutOfRange {
            index: s,
            bound: wk.st.r,
        });
    }
    for _ in 0..times {
        wk.raise(s - 1);
    }
    Ok(wk.weight())
}

/// `(R_1^{theta_1} ... R_r^{theta_r}(mu))^+`: the last slot is raised first.
pub fn raise_theta(mu: &Weight, theta: &[usize]) -> Result<DominantWitness> {
    let mut wk = Walker::new(mu)?;
    if theta.len() != wk.st.r {
        return Err(Error::DegreeMismatch {
            expected: wk.st.r,
            found: theta.len(),
        });
    }
    for s in (0..theta.len()).rev() {
        for _ in 0..theta[s] {
            wk.raise(s);
        }
    }
    Ok(dominant_conjugate(&wk.weight()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct KLPoly {
    pub poly: QPoly,
}

impl fmt::Display for KLPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Block membership and length; `None` when `mu` is not below `lam`.
fn below_with_length(lam: &Weight, mu: &Weight) -> Result<Option<i64>> {
    let rep = compare(mu, lam)?;
    Ok(if rep.preccurlyeq {
        rep.lengths.map(|(_, t)| t)
    } else {
        None
    })
}

/// `q^{l(lam,mu)} S^{lam,mu}(q^-2)` with `S` from the `Z_q` recursion.
pub fn kl_poly(lam: &Weight, mu: &Weight) -> Result<KLPoly> {
    let Some(ell) = below_with_length(lam, mu)? else {
        return Ok(KLPoly {
            poly: QPoly::zero(),
        });
    };
    let ls = analyze(lam)?;
    let ms = analyze(mu)?;
    let s = z_q(&ls.h, &i_vector(&ls, &ms));
    Ok(KLPoly {
        poly: s.substitute_power(-2).shift(ell),
    })
}

/// Same polynomial with `S` obtained by enumerating the permutation set.
pub fn kl_poly_enumerated(lam: &Weight, mu: &Weight) -> Result<KLPoly> {
    let Some(ell) = below_with_length(lam, mu)? else {
        return Ok(KLPoly {
            poly: QPoly::zero(),
        });
    };
    let s = s_lambda_mu(&analyze(lam)?, &analyze(mu)?)?.qpoly;
    Ok(KLPoly {
        poly: s.substitute_power(-2).shift(ell),
    })
}

/// Counts raising paths: `sum q^{|theta|}` over `theta` with `R'_theta(mu) = lam`.
pub fn kl_oracle(lam: &Weight, mu: &Weight) -> Result<KLPoly> {
    lam.check_shape(mu)?;
    lam.require_dominant()?;
    mu.require_dominant()?;
    let (Ok(ls), Ok(ms)) = (analyze(lam), analyze(mu)) else {
        return Ok(KLPoly {
            poly: QPoly::zero(),
        });
    };
    if ls.r != ms.r || ls.typ != ms.typ {
        return Ok(KLPoly {
            poly: QPoly::zero(),
        });
    }
    let ell = ls.total_height() - ms.total_height();
    let mut poly = QPoly::zero();
    if ell < 0 {
        return Ok(KLPoly { poly });
    }
    let start = Walker::new(mu)?;
    let r = ls.r;
    fn rec(s: usize, budget: i64, used: i64, wk: &Walker, lam: &Weight, poly: &mut QPoly) {
        if s == 0 {
            if dominant_conjugate(&wk.weight()).weight() == Some(lam) {
                poly.add_term(used, 1);
            }
            return;
        }
        let mut cur = wk.clone();
        for t in 0..=budget {
            if t > 0 {
                cur.raise(s - 1);
            }
            rec(s - 1, budget - t, used + t, &cur, lam, poly);
        }
    }
    rec(r, ell, 0, &start, lam, &mut poly);
    Ok(KLPoly { poly })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompRow {
    #[serde(rename = "lambda")]
    pub lam: Weight,
    pub factors: Vec<Weight>,
}

/// Dominant weights of the block of `lam` whose atypical tuple lies below
/// `lam`'s entrywise with total drop at most `window`.
fn candidates_below(st: &AtypicalStructure, window: i64) -> Vec<(i64, Vec<i64>)> {
    let block = st.block();
    let forbidden = block.typ.values();
    let mut out = Vec::new();
    fn rec(
        s: usize,
        hi: &[i64],
        budget: i64,
        forbidden: &BTreeSet<i64>,
        cur: &mut Vec<i64>,
        out: &mut Vec<(i64, Vec<i64>)>,
    ) {
        if s == hi.len() {
            let level = hi.iter().zip(cur.iter()).map(|(a, b)| a - b).sum();
            out.push((level, cur.clone()));
            return;
        }
        let used: i64 = hi[..s].iter().zip(cur.iter()).map(|(a, b)| a - b).sum();
        let lo = hi[s] - (budget - used);
        for v in lo..=hi[s] {
            if forbidden.contains(&v) || cur.last().is_some_and(|&p| v <= p) {
                continue;
            }
            cur.push(v);
            rec(s + 1, hi, budget, forbidden, cur, out);
            cur.pop();
        }
    }
    rec(0, &st.aty, window, &forbidden, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Default search depth for composition factors: every weight of a Kac module
/// sits at most `mn` odd roots below its highest weight.
pub fn default_window(lam: &Weight) -> i64 {
    (lam.m() * lam.n()) as i64
}

/// Multiplicities `a_{lam,mu}` by unit-triangular inversion of `K(-1)`.
pub fn comp_multiplicities(lam: &Weight, window: Option<i64>) -> Result<Vec<(Weight, i64)>> {
    lam.require_dominant()?;
    let st = analyze(lam)?;
    let window = window.unwrap_or_else(|| default_window(lam));
    let block = st.block();
    let cands = candidates_below(&st, window);
    let mut found: Vec<(Vec<i64>, Weight, i64)> = Vec::new();
    let mut out = Vec::new();
    for (_, g) in cands {
        let mu = block.weight(&g)?;
        let a = if g == st.aty {
            1
        } else {
            let mut acc: i128 = 0;
            for (nu_g, nu, a_nu) in &found {
                if g.iter().zip(nu_g).all(|(x, y)| x <= y) {
                    acc += *a_nu as i128 * kl_poly(nu, &mu)?.poly.eval(-1);
                }
            }
            -acc
        };
        if !(a == 0 || a == 1) {
            return Err(Error::Internal(format!(
                "multiplicity a[{lam},{mu}] = {a} outside {{0,1}}"
            )));
        }
        if a != 0 {
            found.push((g.clone(), mu.clone(), a as i64));
            out.push((mu, a as i64));
        }
    }
    Ok(out)
}

pub fn comp_factors(lam: &Weight, window: Option<i64>) -> Result<DecompRow> {
    let mut factors: Vec<Weight> = comp_multiplicities(lam, window)?
        .into_iter()
        .map(|(w, _)| w)
        .collect();
    factors.sort_by_key(|w| (std::cmp::Reverse(w.eps_sum()), w.clone()));
    Ok(DecompRow {
        lam: lam.clone(),
        factors,
    })
}

/// The gl(r|r) weight `(h_r,..,h_1 | h_1,..,h_r)`.
pub fn phi(lam: &Weight) -> Result<Weight> {
    lam.require_dominant()?;
    let st = analyze(lam)?;
    if st.r == 0 {
        return Err(Error::TypicalWeight(lam.to_string()));
    }
    let eps: Vec<i64> = st.h.iter().rev().copied().collect();
    Weight::new(eps, st.h.clone())
}

/// The unique weight of `block` with the same heights as `target`.
pub fn phi_inverse(block: &BlockKey, target: &Weight) -> Result<Weight> {
    target.require_dominant()?;
    let ts = analyze(target)?;
    if target.m() != block.r || target.n() != block.r || ts.r != block.r {
        return Err(Error::BlockDegreesDiffer {
            block: block.r,
            target: ts.r,
        });
    }
    // start from the gl(r|r) atypical values h_s + s, then step over each
    // typical value at or below the current entries
    let mut a: Vec<i64> =
        ts.h.iter()
            .enumerate()
            .map(|(s, h)| h + s as i64 + 1)
            .collect();
    let typ: BTreeSet<i64> = block.typ.values();
    for x in typ {
        for v in a.iter_mut() {
            if *v >= x {
                *v += 1;
            }
        }
    }
    let w = block.weight(&a)?;
    let ws = analyze(&w)?;
    if ws.h != ts.h || ws.typ != block.typ {
        return Err(Error::Internal(format!(
            "phi_inverse produced {w} with heights {:?}",
            ws.h
        )));
    }
    Ok(w)
}

/// Full decomposition data keyed by atypical tuple, used by verification suites.
pub fn kl_matrix_row(lam: &Weight, window: i64) -> Result<BTreeMap<Weight, KLPoly>> {
    let st = analyze(lam)?;
    let block = st.block();
    let mut out = BTreeMap::new();
    for (_, g) in candidates_below(&st, window) {
        let mu = block.weight(&g)?;
        out.insert(mu.clone(), kl_poly(lam, &mu)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn gl11_basics() {
        assert_eq!(k_tuple(&w("(0|0)")).unwrap().k, vec![1]);
        assert_eq!(raise(&w("(0|0)"), 1, 1).unwrap(), w("(1|1)"));
        assert_eq!(raise(&w("(0|0)"), 1, 0).unwrap(), w("(0|0)"));
        assert!(raise(&w("(0|0)"), 2, 1).is_err());
        for k in 0..5 {
            let got = raise_theta(&w("(0|0)"), &[k]).unwrap();
            let expect = Weight::new(vec![k as i64], vec![k as i64]).unwrap();
            assert_eq!(got.weight(), Some(&expect));
        }
        for a in -2..3i64 {
            for b in -4..=a {
                let lam = Weight::new(vec![a], vec![a]).unwrap();
                let mu = Weight::new(vec![b], vec![b]).unwrap();
                assert_eq!(kl_poly(&lam, &mu).unwrap().poly, QPoly::monomial(a - b, 1));
                assert_eq!(
                    kl_oracle(&lam, &mu).unwrap().poly,
                    QPoly::monomial(a - b, 1)
                );
            }
        }
    }

    #[test]
    fn factors_gl11() {
        let row = comp_factors(&w("(0|0)"), None).unwrap();
        assert_eq!(row.factors, vec![w("(0|0)"), w("(-1|-1)")]);
        let typical = w("(2|0)");
        assert_eq!(comp_factors(&typical, None).unwrap().factors, vec![typical]);
    }

    #[test]
    fn phi_gl11_and_inverse() {
        let lam = w("(3|3)");
        assert_eq!(phi(&lam).unwrap(), w("(3|3)"));
        let st = analyze(&lam).unwrap();
        assert_eq!(phi_inverse(&st.block(), &w("(3|3)")).unwrap(), lam);
        assert!(phi(&w("(2|0)")).is_err());
    }

    #[test]
    fn phi_inverse_gl21_block() {
        // typical value t = 5 on the eps side
        let block = BlockKey {
            typ: crate::weight::TypTuple {
                eps: vec![5],
                delta: vec![],
            },
            r: 1,
        };
        for h in -3..8 {
            let target = Weight::new(vec![h], vec![h]).unwrap();
            let lam = phi_inverse(&block, &target).unwrap();
            let st = analyze(&lam).unwrap();
            assert_eq!(st.h, vec![h]);
            assert_eq!(st.typ, block.typ);
            assert_eq!(phi(&lam).unwrap(), target);
        }
        let wrong = Weight::zero(2, 2);
        assert!(matches!(
            phi_inverse(&block, &wrong),
            Err(Error::BlockDegreesDiffer { .. })
        ));
    }

    #[test]
    fn k_tuple_brute_force_gl22() {
        // Lambda + sum theta_t k_t gamma_t + k_s gamma_s must stay regular for
        // every choice of theta on the slots already processed.
        for lam in crate::weight::dominant_weights_in_box(2, 2, -2, 2) {
            let st = analyze(&lam).unwrap();
            if st.r != 2 {
                continue;
            }
            let k = k_tuple(&lam).unwrap().k;
            let mut order: Vec<usize> = (0..2).collect();
            order.sort_by(|&a, &b| st.aty[b].cmp(&st.aty[a]));
            let mut fixed: Vec<usize> = Vec::new();
            let mut brute = vec![0i64; 2];
            for &s in &order {
                let ok = |ks: i64| -> bool {
                    (0..1u32 << fixed.len()).all(|mask| {
                        let mut g = st.aty.clone();
                        for (bit, &t) in fixed.iter().enumerate() {
                            if mask >> bit & 1 == 1 {
                                g[t] += brute[t];
                            }
                        }
                        g[s] += ks;
                        st.weight_at(&g).is_regular()
                    })
                };
                brute[s] = (1..=30).find(|&ks| ok(ks)).unwrap();
                fixed.push(s);
            }
            assert_eq!(k, brute, "{lam}");
        }
    }
}
