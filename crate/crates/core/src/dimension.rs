//! Dimensions of irreducible modules from the Kac-Weyl sum, with exact
//! rational bookkeeping and independent cross-checks.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::character::{even_root_pq, kac_weyl_terms, rho_tilde, CharCache, OddRootSet, Variant};
use crate::error::{Error, Result};
use crate::weight::{analyze, pairing, Weight};
use crate::Permutation;

/// Half the sum of the positive even roots, as entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rho0 {
    pub entries: Vec<Ratio<i64>>,
}

impl Rho0 {
    pub fn new(m: usize, n: usize) -> Self {
        let eps = (0..m).map(|i| Ratio::new(m as i64 - 1 - 2 * i as i64, 2));
        let delta = (0..n).map(|z| Ratio::new(2 * z as i64 + 1 - n as i64, 2));
        Self {
            entries: eps.chain(delta).collect(),
        }
    }
}

/// Even positive roots as entry vectors.
fn even_roots(m: usize, n: usize) -> Vec<Vec<i64>> {
    even_root_pq(m, n)
        .into_iter()
        .map(|(p, q)| {
            let mut v = vec![0; m + n];
            v[p] = 1;
            v[q] = -1;
            v
        })
        .collect()
}

fn overflow() -> Error {
    Error::Internal("dimension arithmetic overflowed i128".into())
}

fn weyl_product(m: usize, roots: &[Vec<i64>], v: &[i64]) -> Result<i128> {
    roots
        .iter()
        .try_fold(1i128, |acc, a| acc.checked_mul(pairing(m, a, v) as i128))
        .ok_or_else(overflow)
}

/// `sum_B prod_alpha (alpha, rho~ + nu - beta_B)` over subsets `B` of `odd`,
/// visited in Gray-code order.
fn subset_sum(m: usize, even: &[Vec<i64>], odd: &[Vec<i64>], nu: &[i64]) -> Result<i128> {
    let rho = rho_tilde(m, nu.len() - m);
    let mut v: Vec<i64> = nu.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut in_b = vec![false; odd.len()];
    let mut total = weyl_product(m, even, &v)?;
    for step in 1u64..(1u64 << odd.len()) {
        let bit = step.trailing_zeros() as usize;
        let sign = if in_b[bit] { 1 } else { -1 };
        in_b[bit] = !in_b[bit];
        for (x, b) in v.iter_mut().zip(&odd[bit]) {
            *x += sign * b;
        }
        total = total
            .checked_add(weyl_product(m, even, &v)?)
            .ok_or_else(overflow)?;
    }
    Ok(total)
}

/// `prod_alpha (alpha, rho~)`; equal to the product with `rho_0`.
fn weyl_denominator(m: usize, n: usize) -> Result<i128> {
    weyl_product(m, &even_roots(m, n), &rho_tilde(m, n))
}

/// Dimension of the irreducible gl(m) + gl(n) module of highest weight `lam`.
pub fn weyl_dim(lam: &Weight) -> Result<i128> {
    lam.require_dominant()?;
    let (m, n) = lam.shape();
    let even = even_roots(m, n);
    let v: Vec<i64> = lam
        .entries()
        .iter()
        .zip(rho_tilde(m, n))
        .map(|(a, b)| a + b)
        .collect();
    let num = weyl_product(m, &even, &v)?;
    let den = weyl_denominator(m, n)?;
    if num % den != 0 {
        return Err(Error::NonIntegerDimension(format!(
            "Weyl quotient {num}/{den} for {lam}"
        )));
    }
    Ok(num / den)
}

pub fn kac_dim(lam: &Weight) -> Result<i128> {
    let (m, n) = lam.shape();
    let factor = 1i128
        .checked_shl((m * n) as u32)
        .filter(|_| m * n < 127)
        .ok_or_else(overflow)?;
    weyl_dim(lam)?.checked_mul(factor).ok_or_else(overflow)
}

/// One `(sigma, pi)` summand of the dimension formula.
#[derive(Clone, Debug, Serialize)]
pub struct DimTerm {
    pub sigma: Permutation,
    pub pi: Permutation,
    pub nu: Weight,
    /// Signed multinomial coefficient, before division by `r!`.
    pub coefficient: i64,
    /// Exact contribution to the dimension, as `p/q`.
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimBreakdown {
    pub dimension: i128,
    pub r: usize,
    pub terms: Vec<DimTerm>,
}

fn ratio_text(x: Ratio<i128>) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn dim_irr(lam: &Weight) -> Result<i128> {
    dim_irr_variant(lam, Variant::Floor)
}

pub fn dim_irr_variant(lam: &Weight, variant: Variant) -> Result<i128> {
    Ok(dim_breakdown(lam, variant, false)?.dimension)
}

/// The dimension together with (when `expand` is set) every `(sigma, pi)` term.
pub fn dim_breakdown(lam: &Weight, variant: Variant, expand: bool) -> Result<DimBreakdown> {
    lam.require_dominant()?;
    let (m, n) = lam.shape();
    let st = analyze(lam)?;
    let kw = kac_weyl_terms(&st, variant)?;
    let even = even_roots(m, n);
    let odd = OddRootSet::of_structure(&st).complement_roots();
    let sums: Vec<(Vec<i64>, i128)> = kw
        .terms
        .keys()
        .cloned()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|g| {
            let nu = st.weight_at(&g).entries();
            subset_sum(m, &even, &odd, &nu).map(|t| (g, t))
        })
        .collect::<Result<_>>()?;
    let mut total = 0i128;
    for (g, t) in &sums {
        let c = kw.terms[g] as i128;
        total = c
            .checked_mul(*t)
            .and_then(|x| x.checked_add(total))
            .ok_or_else(overflow)?;
    }
    let scale = (kw.denominator as i128)
        .checked_mul(weyl_denominator(m, n)?)
        .ok_or_else(overflow)?;
    let dim = Ratio::new(total, scale);
    if !dim.is_integer() || *dim.numer() < 1 {
        return Err(Error::NonIntegerDimension(format!(
            "{} for {lam}",
            ratio_text(dim)
        )));
    }
    let mut terms = Vec::new();
    if expand {
        let lookup: std::collections::BTreeMap<&Vec<i64>, i128> =
            sums.iter().map(|(g, t)| (g, *t)).collect();
        for (sigma, pi, g, c) in &kw.expanded {
            let value = Ratio::new(*c as i128 * lookup.get(g).copied().unwrap_or(0), scale);
            terms.push(DimTerm {
                sigma: sigma.clone(),
                pi: pi.clone(),
                nu: st.weight_at(g),
                coefficient: *c,
                value: ratio_text(value),
            });
        }
    }
    Ok(DimBreakdown {
        dimension: dim.to_integer(),
        r: st.r,
        terms,
    })
}

/// Coefficient sum of the irreducible character.
pub fn dim_oracle(lam: &Weight) -> Result<i128> {
    Ok(CharCache::new()
        .irr_char(lam, Variant::Floor)?
        .coefficient_sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::kac_char;
    use proptest::prelude::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn rho0_and_integral_shift_differ_by_constants() {
        let r0 = Rho0::new(3, 2);
        let rt = rho_tilde(3, 2);
        let d: Vec<Ratio<i64>> = rt
            .iter()
            .zip(&r0.entries)
            .map(|(a, b)| Ratio::from(*a) - b)
            .collect();
        assert!(d[..3].iter().all(|x| *x == d[0]));
        assert!(d[3..].iter().all(|x| *x == d[3]));
        assert_eq!(r0.entries[0], Ratio::new(1, 1));
        assert_eq!(r0.entries[3], Ratio::new(-1, 2));
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(kac_dim(&Weight::zero(2, 2)).unwrap(), 16);
        assert_eq!(kac_dim(&w("(3|3)")).unwrap(), 2);
        assert_eq!(dim_irr(&Weight::zero(2, 2)).unwrap(), 1);
        assert_eq!(dim_irr(&w("(1|1)")).unwrap(), 1);
        assert_eq!(dim_irr(&w("(0|0)")).unwrap(), 1);
        // natural module of gl(2|1)
        assert_eq!(dim_irr(&w("(1,0|0)")).unwrap(), 3);
        assert_eq!(dim_oracle(&w("(1,0|0)")).unwrap(), 3);
    }

    #[test]
    fn breakdown_sums_to_dimension() {
        let lam = Weight::zero(2, 2);
        let b = dim_breakdown(&lam, Variant::Floor, true).unwrap();
        assert_eq!(b.r, 2);
        let sum: Ratio<i128> = b
            .terms
            .iter()
            .map(|t| {
                let mut it = t.value.split('/');
                let p: i128 = it.next().unwrap().parse().unwrap();
                let q: i128 = it.next().map(|x| x.parse().unwrap()).unwrap_or(1);
                Ratio::new(p, q)
            })
            .sum();
        assert_eq!(sum, Ratio::from(1));
    }

    proptest! {
        #[test]
        fn kac_dim_matches_character(e in proptest::collection::vec(-2i64..3, 2), d in proptest::collection::vec(-2i64..3, 2)) {
            let mut e = e;
            e.sort_by(|a, b| b.cmp(a));
            let mut d = d;
            d.sort();
            let lam = Weight::new(e, d).unwrap();
            prop_assert_eq!(kac_dim(&lam).unwrap(), kac_char(&lam).unwrap().coefficient_sum());
            prop_assert_eq!(dim_irr(&lam).unwrap(), dim_oracle(&lam).unwrap());
        }
    }
}
