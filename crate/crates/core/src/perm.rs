//! Symmetric-group combinatorics: lengths, the permutation sets attached to
//! atypical weights and their q-length generating functions, the `Z_q`
//! recursion, and the cyclic permutations indexed by compositions.
//!
//! Permutations act on 0-based slots; text and JSON use 1-based images.
//! Composition is `(sigma * tau)(s) = sigma(tau(s))`.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qpoly::QPoly;
use crate::weight::{connectivity, AtypicalStructure};

/// Above this degree the permutation sets are streamed instead of collected.
pub const MATERIALIZE_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(r: usize) -> Self {
        Self {
            images: (0..r).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// From the 1-based one-line notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Parse(format!("{images:?} is not 1-based")));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, s: usize) -> usize {
        self.images[s]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (s, &t) in self.images.iter().enumerate() {
            inv[t] = s;
        }
        Self { images: inv }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Self {
            images: other.images.iter().map(|&t| self.images[t]).collect(),
        }
    }

    pub fn length(&self) -> usize {
        perm_length(self).0
    }

    /// Every permutation of degree `r` in lexicographic order of images.
    pub fn all(r: usize) -> Vec<Permutation> {
        PermIter::new(r).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(ser)
    }
}

/// Lexicographic enumeration of all permutations of a given degree.
pub struct PermIter {
    next: Option<Vec<usize>>,
}

impl PermIter {
    pub fn new(r: usize) -> Self {
        Self {
            next: Some((0..r).collect()),
        }
    }
}

impl Iterator for PermIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut v = cur.clone();
        let n = v.len();
        if n >= 2 {
            let mut i = n - 1;
            while i > 0 && v[i - 1] >= v[i] {
                i -= 1;
            }
            if i > 0 {
                let mut j = n - 1;
                while v[j] <= v[i - 1] {
                    j -= 1;
                }
                v.swap(i - 1, j);
                v[i..].reverse();
                self.next = Some(v);
            }
        }
        Some(Permutation { images: cur })
    }
}

/// Total length and the per-position inversion counts `#{t > s : sigma(t) < sigma(s)}`.
pub fn perm_length(sigma: &Permutation) -> (usize, Vec<usize>) {
    let v = &sigma.images;
    let per: Vec<usize> = (0..v.len())
        .map(|s| (s + 1..v.len()).filter(|&t| v[t] < v[s]).count())
        .collect();
    (per.iter().sum(), per)
}

/// `sum_{sigma} q^{len(sigma)}` over a set of permutations.
pub fn length_polynomial<'a, I: IntoIterator<Item = &'a Permutation>>(perms: I) -> QPoly {
    let mut p = QPoly::zero();
    for s in perms {
        p.add_term(s.length() as i64, 1);
    }
    p
}

/// `prod_{s=1}^{r} [s]_q`, the length generating function of the full symmetric group.
pub fn sym_qpoly(r: usize) -> QPoly {
    (1..=r as i64).fold(QPoly::one(), |acc, s| &acc * &QPoly::q_int(s))
}

/// Does `sigma` keep every strongly connected pair in order?
pub fn respects_chat(sigma: &Permutation, chat: &[Vec<bool>]) -> bool {
    let inv = sigma.inverse();
    let r = sigma.degree();
    (0..r).all(|a| (a + 1..r).all(|b| !chat[a][b] || inv.image(a) < inv.image(b)))
}

/// Lazily filtered permutations; the streamed form of a permutation set.
pub fn stream_filtered<F>(r: usize, keep: F) -> impl Iterator<Item = Permutation>
where
    F: Fn(&Permutation) -> bool,
{
    PermIter::new(r).filter(move |p| keep(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SLambda {
    /// Empty when the degree exceeds [`MATERIALIZE_LIMIT`]; use [`s_lambda_iter`] then.
    pub members: Vec<Permutation>,
    pub qpoly: QPoly,
}

/// Closed form `prod (q^s - 1) / prod (q^{max_s - s + 1} - 1)`, written with q-integers.
pub fn s_lambda_closed(structure: &AtypicalStructure) -> QPoly {
    let num = sym_qpoly(structure.r);
    let den = structure
        .maxs
        .iter()
        .enumerate()
        .fold(QPoly::one(), |acc, (s, &mx)| {
            &acc * &QPoly::q_int((mx - s + 1) as i64)
        });
    num.div_exact(&den)
        .expect("q-integer quotient is a polynomial")
}

pub fn s_lambda_iter(structure: &AtypicalStructure) -> impl Iterator<Item = Permutation> + '_ {
    stream_filtered(structure.r, move |p| respects_chat(p, &structure.chat))
}

pub fn s_lambda(structure: &AtypicalStructure) -> Result<SLambda> {
    let closed = s_lambda_closed(structure);
    if structure.r > MATERIALIZE_LIMIT {
        return Ok(SLambda {
            members: Vec::new(),
            qpoly: closed,
        });
    }
    let members: Vec<Permutation> = s_lambda_iter(structure).collect();
    let enumerated = length_polynomial(&members);
    if enumerated != closed {
        return Err(Error::Internal(format!(
            "S^Lambda(q): enumerated {enumerated} vs closed {closed}"
        )));
    }
    Ok(SLambda {
        members,
        qpoly: enumerated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SLambdaMu {
    pub members: Vec<Permutation>,
    pub tilde_members: Vec<Permutation>,
    /// 1-based: `i_s = min{i : mu_s <= Lambda_i}` on atypical values.
    pub i_vec: Vec<usize>,
    /// 1-based: `j_s = max{j : mu_j <= Lambda_s}`.
    pub j_vec: Vec<usize>,
    pub tilde_qpoly: QPoly,
    pub qpoly: QPoly,
}

fn check_below(lam: &AtypicalStructure, mu: &AtypicalStructure) -> Result<()> {
    let ok = lam.r == mu.r && lam.typ == mu.typ && mu.aty.iter().zip(&lam.aty).all(|(a, b)| a <= b);
    if ok {
        Ok(())
    } else {
        Err(Error::NotComparable(format!(
            "{} is not below {}",
            mu.weight(),
            lam.weight()
        )))
    }
}

/// `i_s = min{i : aty_mu[s] <= aty_lam[i]}`, 1-based.
pub fn i_vector(lam: &AtypicalStructure, mu: &AtypicalStructure) -> Vec<usize> {
    mu.aty
        .iter()
        .map(|&x| {
            lam.aty
                .iter()
                .position(|&y| x <= y)
                .map_or(lam.r + 1, |i| i + 1)
        })
        .collect()
}

/// `j_s = max{j : aty_mu[j] <= aty_lam[s]}`, 1-based.
pub fn j_vector(lam: &AtypicalStructure, mu: &AtypicalStructure) -> Vec<usize> {
    lam.aty
        .iter()
        .map(|&y| mu.aty.iter().rposition(|&x| x <= y).map_or(0, |j| j + 1))
        .collect()
}

/// `prod_s [s + 1 - i_s]_q`.
pub fn tilde_closed_i(i_vec: &[usize]) -> QPoly {
    i_vec.iter().enumerate().fold(QPoly::one(), |acc, (s, &i)| {
        &acc * &QPoly::q_int(s as i64 + 2 - i as i64)
    })
}

/// `prod_s [j_s + 1 - s]_q` (1-based `s`), counting choices from the top slot downwards.
pub fn tilde_closed_j(j_vec: &[usize]) -> QPoly {
    j_vec.iter().enumerate().fold(QPoly::one(), |acc, (s, &j)| {
        &acc * &QPoly::q_int(j as i64 - s as i64)
    })
}

pub fn s_lambda_mu(lam: &AtypicalStructure, mu: &AtypicalStructure) -> Result<SLambdaMu> {
    check_below(lam, mu)?;
    let r = lam.r;
    let i_vec = i_vector(lam, mu);
    let j_vec = j_vector(lam, mu);
    let in_tilde = |p: &Permutation| (0..r).all(|s| mu.aty[s] <= lam.aty[p.image(s)]);
    let tilde_members: Vec<Permutation> = if r <= MATERIALIZE_LIMIT {
        stream_filtered(r, in_tilde).collect()
    } else {
        Vec::new()
    };
    let closed_i = tilde_closed_i(&i_vec);
    let closed_j = tilde_closed_j(&j_vec);
    if closed_i != closed_j {
        return Err(Error::Internal(format!(
            "tilde closed forms disagree: {closed_i} vs {closed_j}"
        )));
    }
    if r <= MATERIALIZE_LIMIT {
        let enumerated = length_polynomial(&tilde_members);
        if enumerated != closed_i {
            return Err(Error::Internal(format!(
                "tilde S(q): enumerated {enumerated} vs closed {closed_i}"
            )));
        }
    }
    let members: Vec<Permutation> = tilde_members
        .iter()
        .filter(|p| respects_chat(p, &lam.chat))
        .cloned()
        .collect();
    let qpoly = if r <= MATERIALIZE_LIMIT {
        length_polynomial(&members)
    } else {
        z_q(&lam.h, &i_vec)
    };
    Ok(SLambdaMu {
        members,
        tilde_members,
        i_vec,
        j_vec,
        tilde_qpoly: closed_i,
        qpoly,
    })
}

/// Step function: 1 for nonnegative arguments.
fn theta(x: i64) -> bool {
    x >= 0
}

/// `Z_q(x; b)` with `b` 1-based. Zero unless `x` is weakly increasing,
/// `b` is weakly increasing, and `1 <= b_s <= s`.
pub fn z_q(x: &[i64], b: &[usize]) -> QPoly {
    if x.len() != b.len() {
        return QPoly::zero();
    }
    let mut memo = HashMap::new();
    z_rec(x, b, &mut memo)
}

fn z_rec(x: &[i64], b: &[usize], memo: &mut HashMap<(Vec<i64>, Vec<usize>), QPoly>) -> QPoly {
    let r = x.len();
    let valid = x.windows(2).all(|w| w[0] <= w[1])
        && b.windows(2).all(|w| w[0] <= w[1])
        && b.iter().enumerate().all(|(s, &v)| v >= 1 && v <= s + 1);
    if !valid {
        return QPoly::zero();
    }
    if r <= 1 {
        return QPoly::one();
    }
    let key = (x.to_vec(), b.to_vec());
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let b_rest = &b[..r - 1];
    let mut out = z_rec(&x[..r - 1], b_rest, memo);
    // i runs over 1-based b_r..=r-1
    for i in b[r - 1]..r {
        if !theta(x[i] - x[i - 1] - 1) {
            continue;
        }
        let mut y: Vec<i64> = x[..i - 1].to_vec();
        y.extend(x[i..].iter().map(|v| v - 1));
        let term = z_rec(&y, b_rest, memo);
        out += &term.shift((r - i) as i64);
    }
    memo.insert(key, out.clone());
    out
}

/// `x_hat_s = #{p < s : chat^x_{p,s} = 0}`.
pub fn hat_reduce(x: &[i64]) -> Result<Vec<i64>> {
    if !x.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::NotLexical(x.to_vec()));
    }
    let conn = connectivity(x);
    Ok((0..x.len())
        .map(|s| (0..s).filter(|&p| !conn.chat[p][s]).count() as i64)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionTerm {
    pub parts: Vec<usize>,
    pub pi: Permutation,
    pub multinomial: u64,
    pub ell_pi: usize,
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// The cyclic product `(1..i_1)(i_1+1..i_1+i_2)...` sending each slot to the
/// next one in its block and the last back to the first.
pub fn cyclic_permutation(parts: &[usize]) -> Permutation {
    let mut images = Vec::new();
    let mut start = 0;
    for &p in parts {
        for k in 0..p {
            images.push(start + (k + 1) % p);
        }
        start += p;
    }
    Permutation { images }
}

/// All `2^(r-1)` compositions of `r` (one empty composition for `r = 0`),
/// lexicographic in their parts.
pub fn compositions(r: usize) -> Vec<CompositionTerm> {
    fn rec(left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in 1..=left {
            cur.push(p);
            rec(left - p, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(r, &mut Vec::new(), &mut all);
    let rf = factorial(r);
    all.into_iter()
        .map(|parts| {
            let multinomial = rf / parts.iter().map(|&p| factorial(p)).product::<u64>();
            let ell_pi = parts.iter().map(|p| p - 1).sum();
            let pi = cyclic_permutation(&parts);
            CompositionTerm {
                parts,
                pi,
                multinomial,
                ell_pi,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{analyze, Weight};
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(
            perm_length(&Permutation::identity(4)),
            (0, vec![0, 0, 0, 0])
        );
        assert_eq!(perm_length(&p(&[2, 1])), (1, vec![1, 0]));
        assert_eq!(p(&[3, 2, 1]).length(), 3);
    }

    #[test]
    fn composition_convention() {
        let a = p(&[2, 3, 1]);
        let b = p(&[2, 1, 3]);
        assert_eq!(a.compose(&b).one_based(), vec![3, 2, 1]);
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(3));
    }

    #[test]
    fn sym_length_polynomials() {
        for r in 0..=7 {
            assert_eq!(
                length_polynomial(&Permutation::all(r)),
                sym_qpoly(r),
                "r={r}"
            );
        }
    }

    #[test]
    fn compositions_small() {
        let c1 = compositions(1);
        assert_eq!(c1.len(), 1);
        assert_eq!(
            (c1[0].parts.clone(), c1[0].multinomial, c1[0].ell_pi),
            (vec![1], 1, 0)
        );
        assert_eq!(c1[0].pi, Permutation::identity(1));
        let c2 = compositions(2);
        assert_eq!(c2[0].parts, vec![1, 1]);
        assert_eq!((c2[0].multinomial, c2[0].ell_pi), (2, 0));
        assert_eq!(c2[1].parts, vec![2]);
        assert_eq!((c2[1].multinomial, c2[1].ell_pi), (1, 1));
        assert_eq!(c2[1].pi, p(&[2, 1]));
        let mut m3: Vec<u64> = compositions(3).iter().map(|c| c.multinomial).collect();
        m3.sort();
        assert_eq!(m3, vec![1, 3, 3, 6]);
        for r in 1..=6 {
            let cs = compositions(r);
            assert_eq!(cs.len(), 1 << (r - 1));
            for c in cs {
                assert_eq!(c.pi.length(), c.ell_pi);
            }
        }
    }

    #[test]
    fn hat_reduce_cases() {
        assert_eq!(hat_reduce(&[4, 4, 4]).unwrap(), vec![0, 0, 0]);
        assert_eq!(hat_reduce(&[1, 1, 2, 3]).unwrap(), vec![0, 0, 1, 2]);
        assert_eq!(hat_reduce(&[0, 10, 30, 70]).unwrap(), vec![0, 1, 2, 3]);
        assert!(hat_reduce(&[2, 1]).is_err());
    }

    #[test]
    fn z_q_basics() {
        assert_eq!(z_q(&[17], &[1]), QPoly::one());
        assert!(z_q(&[1, 2], &[2, 1]).is_zero());
        assert!(z_q(&[1, 2], &[1, 3]).is_zero());
    }

    #[test]
    fn disconnected_and_connected() {
        let disc = analyze(&Weight::from_shifted(&[20, 10, 0], &[0, 10, 20])).unwrap();
        assert_eq!(disc.r, 3);
        let s = s_lambda(&disc).unwrap();
        assert_eq!(s.members.len(), 6);
        assert_eq!(s.qpoly, sym_qpoly(3));
        let conn = analyze(&Weight::zero(3, 3)).unwrap();
        let s = s_lambda(&conn).unwrap();
        assert_eq!(s.members, vec![Permutation::identity(3)]);
        assert_eq!(s.qpoly, QPoly::one());
    }

    fn arb_pair() -> impl Strategy<Value = (Weight, Weight)> {
        (1usize..=5, 0usize..=2, 0usize..=2)
            .prop_flat_map(|(r, em, en)| {
                (
                    proptest::sample::subsequence((0..14i64).collect::<Vec<_>>(), r + em + en),
                    proptest::collection::vec(0i64..5, r),
                    proptest::sample::subsequence((0..(r + em + en)).collect::<Vec<_>>(), r),
                    proptest::sample::subsequence((0..(r + em + en)).collect::<Vec<_>>(), em),
                )
                    .prop_map(move |(vals, drops, aty_idx, eps_idx)| {
                        let aty: Vec<i64> = aty_idx.iter().map(|&i| vals[i]).collect();
                        let rest: Vec<i64> = (0..vals.len())
                            .filter(|i| !aty_idx.contains(i))
                            .map(|i| vals[i])
                            .collect();
                        let typ_e: Vec<i64> = eps_idx
                            .iter()
                            .filter_map(|&i| rest.get(i).copied())
                            .collect();
                        let typ_d: Vec<i64> = rest
                            .iter()
                            .filter(|v| !typ_e.contains(v))
                            .copied()
                            .collect();
                        let block = crate::weight::BlockKey {
                            typ: crate::weight::TypTuple {
                                eps: typ_e,
                                delta: typ_d,
                            },
                            r,
                        };
                        let lam = block.weight(&aty).unwrap();
                        // push the tuple down, keep it strictly increasing and off the typical values
                        let forbidden = block.typ.values();
                        let mut g: Vec<i64> = aty.iter().zip(&drops).map(|(a, d)| a - d).collect();
                        for s in 0..r {
                            if s > 0 && g[s] <= g[s - 1] {
                                g[s] = g[s - 1] + 1;
                            }
                            while forbidden.contains(&g[s]) {
                                g[s] += 1;
                            }
                        }
                        let mu = if g.iter().zip(&aty).all(|(a, b)| a <= b) {
                            block.weight(&g).unwrap()
                        } else {
                            lam.clone()
                        };
                        (lam, mu)
                    })
            })
            .prop_filter("need m,n >= 1", |(l, _)| l.m() >= 1 && l.n() >= 1)
    }

    proptest! {
        #[test]
        fn closed_forms_match_enumeration((lam, mu) in arb_pair()) {
            let ls = analyze(&lam).unwrap();
            let ms = analyze(&mu).unwrap();
            let sl = s_lambda(&ls).unwrap();
            prop_assert_eq!(length_polynomial(&sl.members), s_lambda_closed(&ls));
            let slm = s_lambda_mu(&ls, &ms).unwrap();
            prop_assert_eq!(&length_polynomial(&slm.tilde_members), &tilde_closed_i(&slm.i_vec));
            prop_assert_eq!(&tilde_closed_i(&slm.i_vec), &tilde_closed_j(&slm.j_vec));
            prop_assert_eq!(&slm.qpoly, &z_q(&ls.h, &slm.i_vec));
        }

        #[test]
        fn z_q_depends_only_on_hat(x in proptest::collection::vec(0i64..6, 1..6), bseed in proptest::collection::vec(0usize..6, 6)) {
            let mut x = x;
            x.sort();
            let r = x.len();
            let mut b: Vec<usize> = (0..r).map(|s| 1 + bseed[s] % (s + 1)).collect();
            for s in 1..r { b[s] = b[s].max(b[s - 1]); }
            let xh = hat_reduce(&x).unwrap();
            prop_assert!(xh.iter().enumerate().all(|(s, &v)| v >= 0 && v < (s as i64) + 1));
            prop_assert!(xh.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(z_q(&x, &b), z_q(&xh, &b));
        }
    }
}
