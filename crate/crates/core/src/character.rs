//! Formal characters as finitely supported elements of the group ring of the
//! weight lattice, keyed by entry vectors `eps ++ delta`.
//!
//! Antisymmetrization uses the integral vector `rho~ = (m-1,..,0 | 0,..,n-1)`
//! in place of the half-sum of even roots. The two differ by a constant on
//! each side, which every Weyl group element fixes, so quotients are unchanged.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rustc_hash::FxHashMap;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{compositions, s_lambda, Permutation};
use crate::weight::{
    analyze, dominant_conjugate, lex_ceiling, lex_floor, permute_coords, AtypicalStructure,
    DominantWitness, Weight,
};

pub type Terms = FxHashMap<Vec<i64>, i64>;

/// Entry of a weight whose delta coefficient is `c`; weights store `-c`.
pub fn delta_entry(c: i64) -> i64 {
    -c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalChar {
    m: usize,
    n: usize,
    terms: Terms,
}

impl FormalChar {
    pub fn zero(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            terms: Terms::default(),
        }
    }

    pub fn unit(m: usize, n: usize) -> Self {
        Self::monomial(m, n, vec![0; m + n], 1)
    }

    pub fn monomial(m: usize, n: usize, entries: Vec<i64>, coeff: i64) -> Self {
        let mut c = Self::zero(m, n);
        c.add_term(entries, coeff);
        c
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn add_term(&mut self, entries: Vec<i64>, coeff: i64) {
        add_into(&mut self.terms, entries, coeff);
    }

    pub fn coefficient(&self, w: &Weight) -> i64 {
        self.terms.get(&w.entries()).copied().unwrap_or(0)
    }

    pub fn coefficient_sum(&self) -> i128 {
        self.terms.values().map(|&c| c as i128).sum()
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &FormalChar, k: i64) {
        if k == 0 {
            return;
        }
        for (e, &c) in &other.terms {
            add_into(&mut self.terms, e.clone(), k * c);
        }
    }

    pub fn scaled(&self, k: i64) -> FormalChar {
        let mut out = FormalChar::zero(self.m, self.n);
        out.add_scaled(self, k);
        out
    }

    pub fn mul(&self, other: &FormalChar) -> FormalChar {
        let mut out = FormalChar::zero(self.m, self.n);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Multiply by the monomial `e^v`.
    pub fn shift(&self, v: &[i64]) -> FormalChar {
        FormalChar {
            m: self.m,
            n: self.n,
            terms: shift_terms(&self.terms, v),
        }
    }

    /// Multiply by `1 + e^v`.
    pub fn mul_one_plus(&self, v: &[i64]) -> FormalChar {
        let mut terms = self.terms.clone();
        for (e, &c) in &self.terms {
            let s: Vec<i64> = e.iter().zip(v).map(|(x, y)| x + y).collect();
            add_into(&mut terms, s, c);
        }
        FormalChar {
            m: self.m,
            n: self.n,
            terms,
        }
    }

    /// Terms sorted lexicographically by weight.
    pub fn sorted_terms(&self) -> Vec<(Weight, i64)> {
        let sorted: BTreeMap<&Vec<i64>, i64> = self.terms.iter().map(|(k, &v)| (k, v)).collect();
        sorted
            .into_iter()
            .map(|(e, c)| (Weight::from_entries(self.m, self.n, e), c))
            .collect()
    }

    /// Terms whose weight satisfies `keep`.
    pub fn filtered<F: Fn(&[i64]) -> bool>(&self, keep: F) -> FormalChar {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| keep(e))
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        FormalChar {
            m: self.m,
            n: self.n,
            terms,
        }
    }

    /// Sum of the eps part of an entry vector.
    pub fn eps_sum_of(&self, e: &[i64]) -> i64 {
        e[..self.m].iter().sum()
    }

    /// `sum_w sign(w) w(self)` over `W = Sym_m x Sym_n` acting on entries.
    pub fn antisymmetrize(&self) -> FormalChar {
        let group = weyl_group(self.m, self.n);
        let mut out = Terms::default();
        for (e, &c) in &self.terms {
            for (perm, sign) in &group {
                let moved: Vec<i64> = perm.iter().map(|&src| e[src]).collect();
                add_into(&mut out, moved, sign * c);
            }
        }
        FormalChar {
            m: self.m,
            n: self.n,
            terms: out,
        }
    }

    /// Exact quotient by the Weyl denominator `prod_alpha (1 - e^-alpha)`.
    pub fn divide_by_weyl_denominator(&self) -> Result<FormalChar> {
        let mut terms = self.terms.clone();
        for (p, q) in even_root_pq(self.m, self.n) {
            terms = divide_one_minus(&terms, p, q)?;
        }
        Ok(FormalChar {
            m: self.m,
            n: self.n,
            terms,
        })
    }
}

impl Serialize for FormalChar {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            weight: Weight,
            mult: i64,
        }
        let terms: Vec<Term> = self
            .sorted_terms()
            .into_iter()
            .map(|(weight, mult)| Term { weight, mult })
            .collect();
        let mut st = ser.serialize_struct("FormalChar", 3)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

fn add_into(terms: &mut Terms, e: Vec<i64>, c: i64) {
    use std::collections::hash_map::Entry;
    if c == 0 {
        return;
    }
    match terms.entry(e) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if *o.get() == 0 {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

fn shift_terms(terms: &Terms, v: &[i64]) -> Terms {
    terms
        .iter()
        .map(|(e, &c)| (e.iter().zip(v).map(|(x, y)| x + y).collect(), c))
        .collect()
}

/// Each element of `Sym_m x Sym_n` as a source-index map on entries, with its sign.
pub fn weyl_group(m: usize, n: usize) -> Vec<(Vec<usize>, i64)> {
    let pe = Permutation::all(m);
    let pd = Permutation::all(n);
    let mut out = Vec::with_capacity(pe.len() * pd.len());
    for a in &pe {
        for b in &pd {
            let mut src: Vec<usize> = a.images().to_vec();
            src.extend(b.images().iter().map(|i| i + m));
            let sign = if (a.length() + b.length()) % 2 == 0 {
                1
            } else {
                -1
            };
            out.push((src, sign));
        }
    }
    out
}

/// Even positive roots as `(p, q)`: the root has entry `+1` at `p` and `-1` at `q`.
/// `eps_i - eps_j` gives `(i, j)`; `delta_z - delta_y` (z < y) gives `(m + y, m + z)`.
pub fn even_root_pq(m: usize, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    for z in 0..n {
        for y in z + 1..n {
            out.push((m + y, m + z));
        }
    }
    out
}

/// Entry vector of the odd positive root `eps_i - delta_z`.
pub fn odd_root_entries(m: usize, n: usize, i: usize, z: usize) -> Vec<i64> {
    let mut v = vec![0; m + n];
    v[i] = 1;
    v[m + z] = delta_entry(-1);
    v
}

/// Divides by `1 - e^{-alpha}` for `alpha = e_p - e_q`. The quotient at `mu`
/// is `sum_{k >= 0} P(mu + k alpha)`, accumulated along each alpha-line.
pub fn divide_one_minus(terms: &Terms, p: usize, q: usize) -> Result<Terms> {
    let mut lines: FxHashMap<Vec<i64>, Vec<(i64, i64)>> = FxHashMap::default();
    for (e, &c) in terms {
        let mut key = e.clone();
        key[q] = e[p] + e[q];
        key[p] = 0;
        lines.entry(key).or_default().push((e[p], c));
    }
    let mut out = Terms::default();
    for (key, mut pts) in lines {
        pts.sort_unstable_by_key(|x| std::cmp::Reverse(x.0));
        let total: i64 = pts.iter().map(|x| x.1).sum();
        if total != 0 {
            return Err(Error::ExactDivisionFailure(format!(
                "line through {key:?} along ({p},{q}) has nonzero total {total}"
            )));
        }
        let mut acc = 0;
        for w in 0..pts.len() - 1 {
            acc += pts[w].1;
            let (hi, lo) = (pts[w].0, pts[w + 1].0);
            if acc == 0 {
                continue;
            }
            for t in (lo + 1)..=hi {
                let mut e = key.clone();
                e[p] = t;
                e[q] = key[q] - t;
                out.insert(e, acc);
            }
        }
    }
    Ok(out)
}

/// `rho~` as entries.
pub fn rho_tilde(m: usize, n: usize) -> Vec<i64> {
    let mut v: Vec<i64> = (0..m as i64).rev().collect();
    v.extend(0..n as i64);
    v
}

/// Character of the irreducible gl(k)-module of highest weight `top`
/// (weakly decreasing), summed over Gelfand-Tsetlin patterns.
pub fn gl_character(top: &[i64]) -> FxHashMap<Vec<i64>, i64> {
    let k = top.len();
    let mut out = FxHashMap::default();
    let mut weight = vec![0i64; k];
    fn rec(row: &[i64], weight: &mut Vec<i64>, out: &mut FxHashMap<Vec<i64>, i64>) {
        let len = row.len();
        let row_sum: i64 = row.iter().sum();
        if len == 1 {
            weight[0] = row_sum;
            *out.entry(weight.clone()).or_insert(0) += 1;
            return;
        }
        // next row interlaces: row[i] >= next[i] >= row[i+1]
        let mut next = vec![0i64; len - 1];
        fn fill(
            i: usize,
            row: &[i64],
            next: &mut Vec<i64>,
            row_sum: i64,
            weight: &mut Vec<i64>,
            out: &mut FxHashMap<Vec<i64>, i64>,
        ) {
            if i == next.len() {
                weight[row.len() - 1] = row_sum - next.iter().sum::<i64>();
                let nx = next.clone();
                rec(&nx, weight, out);
                return;
            }
            for v in row[i + 1]..=row[i] {
                next[i] = v;
                fill(i + 1, row, next, row_sum, weight, out);
            }
        }
        fill(0, row, &mut next, row_sum, weight, out);
    }
    if k == 0 {
        out.insert(Vec::new(), 1);
        return out;
    }
    rec(top, &mut weight, &mut out);
    out
}

/// Same character as a quotient of alternants, by exact division.
pub fn gl_character_bialternant(top: &[i64]) -> Result<FxHashMap<Vec<i64>, i64>> {
    let k = top.len();
    let delta: Vec<i64> = (0..k as i64).rev().collect();
    let shifted: Vec<i64> = top.iter().zip(&delta).map(|(a, b)| a + b).collect();
    let mut num = Terms::default();
    for p in Permutation::all(k) {
        let e: Vec<i64> = (0..k).map(|i| shifted[p.image(i)]).collect();
        add_into(&mut num, e, if p.length() % 2 == 0 { 1 } else { -1 });
    }
    let mut q = num;
    for i in 0..k {
        for j in i + 1..k {
            q = divide_one_minus(&q, i, j)?;
        }
    }
    let neg: Vec<i64> = delta.iter().map(|d| -d).collect();
    Ok(shift_terms(&q, &neg))
}

/// Above this rank the Weyl character is computed by the bialternant quotient.
const PATTERN_RANK_LIMIT: usize = 6;

fn gl_char_any(top: &[i64]) -> Result<FxHashMap<Vec<i64>, i64>> {
    if top.len() <= PATTERN_RANK_LIMIT {
        Ok(gl_character(top))
    } else {
        gl_character_bialternant(top)
    }
}

/// Character of the irreducible gl(m) + gl(n) module of highest weight `lam`.
pub fn weyl_char_g0(lam: &Weight) -> Result<FormalChar> {
    lam.require_dominant()?;
    let (m, n) = lam.shape();
    let even = gl_char_any(lam.eps())?;
    // delta coefficients of the highest weight, weakly decreasing for a dominant weight
    let coeffs: Vec<i64> = lam.delta().iter().map(|&b| delta_entry(b)).collect();
    let odd = gl_char_any(&coeffs)?;
    let mut out = FormalChar::zero(m, n);
    for (a, &ca) in &even {
        for (b, &cb) in &odd {
            let mut e = a.clone();
            e.extend(b.iter().map(|&c| delta_entry(c)));
            out.add_term(e, ca * cb);
        }
    }
    Ok(out)
}

/// Virtual Weyl character: zero on vanishing weights, signed at the dominant conjugate
/// for the dot action of `W` with `rho~`.
pub fn weyl_char_virtual(lam: &Weight) -> Result<FormalChar> {
    match dominant_conjugate(lam) {
        DominantWitness::Vanishing => Ok(FormalChar::zero(lam.m(), lam.n())),
        DominantWitness::Regular { weight, sign } => Ok(weyl_char_g0(&weight)?.scaled(sign)),
    }
}

/// A set of positive odd roots `eps_i - delta_z`, stored as a membership table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OddRootSet {
    m: usize,
    n: usize,
    member: Vec<bool>,
}

impl OddRootSet {
    pub fn empty(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            member: vec![false; m * n],
        }
    }

    pub fn all(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            member: vec![true; m * n],
        }
    }

    pub fn from_pairs(m: usize, n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut s = Self::empty(m, n);
        for &(i, z) in pairs {
            s.member[i * n + z] = true;
        }
        s
    }

    pub fn of_structure(st: &AtypicalStructure) -> Self {
        let (m, n) = st.weight().shape();
        Self::from_pairs(m, n, &st.roots)
    }

    pub fn contains(&self, i: usize, z: usize) -> bool {
        self.member[i * self.n + z]
    }

    /// Entry vectors of the positive odd roots outside the set.
    pub fn complement_roots(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for z in 0..self.n {
                if !self.contains(i, z) {
                    out.push(odd_root_entries(self.m, self.n, i, z));
                }
            }
        }
        out
    }
}

/// Kac character of a dominant weight: Weyl character times `prod (1 + e^-beta)`.
fn kac_char_dominant(lam: &Weight) -> Result<FormalChar> {
    let (m, n) = lam.shape();
    let mut ch = weyl_char_g0(lam)?;
    for beta in OddRootSet::empty(m, n).complement_roots() {
        let neg: Vec<i64> = beta.iter().map(|x| -x).collect();
        ch = ch.mul_one_plus(&neg);
    }
    Ok(ch)
}

/// Antisymmetrized numerator `sum_w sign(w) w(e^{lam + rho~} prod_{beta not in gamma}(1 + e^-beta))`.
fn bl_numerator(gamma: &OddRootSet, lam: &Weight) -> FormalChar {
    let (m, n) = lam.shape();
    let top: Vec<i64> = lam
        .entries()
        .iter()
        .zip(rho_tilde(m, n))
        .map(|(a, b)| a + b)
        .collect();
    let mut f = FormalChar::monomial(m, n, top, 1);
    for beta in gamma.complement_roots() {
        let neg: Vec<i64> = beta.iter().map(|x| -x).collect();
        f = f.mul_one_plus(&neg);
    }
    f.antisymmetrize()
}

fn bl_char_uncached(gamma: &OddRootSet, lam: &Weight) -> Result<FormalChar> {
    let (m, n) = lam.shape();
    let q = bl_numerator(gamma, lam).divide_by_weyl_denominator()?;
    let neg: Vec<i64> = rho_tilde(m, n).iter().map(|x| -x).collect();
    Ok(q.shift(&neg))
}

/// Same character as a sum of virtual Weyl characters of `lam - beta_B`
/// over subsets `B` of the complement of `gamma`.
pub fn bl_char_via_weyl(gamma: &OddRootSet, lam: &Weight) -> Result<FormalChar> {
    let (m, n) = lam.shape();
    let roots = gamma.complement_roots();
    let mut counts: FxHashMap<Vec<i64>, i64> = FxHashMap::default();
    counts.insert(lam.entries(), 1);
    for beta in &roots {
        let snapshot: Vec<(Vec<i64>, i64)> = counts.iter().map(|(k, &v)| (k.clone(), v)).collect();
        for (e, c) in snapshot {
            let s: Vec<i64> = e.iter().zip(beta).map(|(x, y)| x - y).collect();
            *counts.entry(s).or_insert(0) += c;
        }
    }
    let mut out = FormalChar::zero(m, n);
    for (e, c) in counts {
        let w = Weight::from_entries(m, n, &e);
        out.add_scaled(&weyl_char_virtual(&w)?, c);
    }
    Ok(out)
}

/// Which arrangement of the Kac-Weyl sum to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Variant {
    /// Lexical floors `(sigma . Lambda)_up` of the permuted weights.
    #[default]
    Floor,
    /// Ceilings of those floors, raised along strongly connected runs.
    Ceiling,
}

/// Memo of Kac and BL characters; shareable across threads.
#[derive(Default)]
pub struct CharCache {
    kac: RwLock<FxHashMap<Weight, Arc<FormalChar>>>,
    bl: RwLock<FxHashMap<(OddRootSet, Weight), Arc<FormalChar>>>,
}

impl CharCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn kac_dominant(&self, lam: &Weight) -> Result<Arc<FormalChar>> {
        if let Some(c) = self.kac.read().unwrap().get(lam) {
            return Ok(c.clone());
        }
        let c = Arc::new(kac_char_dominant(lam)?);
        self.kac.write().unwrap().insert(lam.clone(), c.clone());
        Ok(c)
    }

    pub fn kac_char(&self, lam: &Weight) -> Result<FormalChar> {
        match dominant_conjugate(lam) {
            DominantWitness::Vanishing => Ok(FormalChar::zero(lam.m(), lam.n())),
            DominantWitness::Regular { weight, sign } => {
                Ok(self.kac_dominant(&weight)?.scaled(sign))
            }
        }
    }

    pub fn bl_char(&self, gamma: &OddRootSet, lam: &Weight) -> Result<Arc<FormalChar>> {
        let key = (gamma.clone(), lam.clone());
        if let Some(c) = self.bl.read().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let c = Arc::new(bl_char_uncached(gamma, lam)?);
        self.bl.write().unwrap().insert(key, c.clone());
        Ok(c)
    }

    pub fn irr_char(&self, lam: &Weight, variant: Variant) -> Result<FormalChar> {
        lam.require_dominant()?;
        let st = analyze(lam)?;
        if st.r == 0 {
            return self.kac_char(lam);
        }
        let (m, n) = lam.shape();
        let gamma = OddRootSet::of_structure(&st);
        let kw = kac_weyl_terms(&st, variant)?;
        let mut acc = FormalChar::zero(m, n);
        for (g, c) in &kw.terms {
            let nu = st.weight_at(g);
            acc.add_scaled(&*self.bl_char(&gamma, &nu)?, *c);
        }
        let mut out = FormalChar::zero(m, n);
        for (e, c) in acc.terms {
            if c % kw.denominator != 0 {
                return Err(Error::NonIntegerMultiplicity(format!(
                    "{c}/{} at {:?} for {lam}",
                    kw.denominator, e
                )));
            }
            out.add_term(e, c / kw.denominator);
        }
        Ok(out)
    }

    /// Windowed sum of `(-1)^{|Lambda - mu|} ch Kac(mu)` over a cone.
    pub fn cone_char_window(
        &self,
        kind: ConeKind,
        vertex: &Weight,
        ambient: &AtypicalStructure,
        depth: i64,
    ) -> Result<FormalChar> {
        let g = ambient.coords(vertex)?;
        self.cone_char_coords(kind, &g, ambient, depth)
    }

    /// As [`CharCache::cone_char_window`], with the vertex given by atypical coordinates.
    pub fn cone_char_coords(
        &self,
        kind: ConeKind,
        g: &[i64],
        ambient: &AtypicalStructure,
        depth: i64,
    ) -> Result<FormalChar> {
        let (m, n) = ambient.weight().shape();
        if g.len() != ambient.r {
            return Err(Error::DegreeMismatch {
                expected: ambient.r,
                found: g.len(),
            });
        }
        let chat = crate::weight::connectivity(&ambient.heights_at(g)).chat;
        let members = cone_members(kind, g, &ambient.aty, &chat, depth);
        let mut coeffs: BTreeMap<Weight, i64> = BTreeMap::new();
        for x in members {
            let level = ambient.level(&x);
            let w = ambient.weight_at(&x);
            if let DominantWitness::Regular { weight, sign } = dominant_conjugate(&w) {
                let s = if level % 2 == 0 { sign } else { -sign };
                *coeffs.entry(weight).or_insert(0) += s;
            }
        }
        let mut out = FormalChar::zero(m, n);
        for (w, c) in coeffs {
            if c != 0 {
                out.add_scaled(&*self.kac_dominant(&w)?, c);
            }
        }
        Ok(out)
    }
}

/// The Kac-Weyl sum written as `(1/denominator) sum_g coeff * chi_BL(g)`, with
/// weights given by atypical coordinates and collisions already merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KacWeylTerms {
    pub terms: BTreeMap<Vec<i64>, i64>,
    pub denominator: i64,
    /// `(sigma, pi, coordinates, signed multinomial)` before merging.
    pub expanded: Vec<(Permutation, Permutation, Vec<i64>, i64)>,
}

pub fn kac_weyl_terms(st: &AtypicalStructure, variant: Variant) -> Result<KacWeylTerms> {
    let r = st.r;
    let sl = s_lambda(st)?;
    let members: Vec<Permutation> = if sl.members.is_empty() {
        crate::perm::s_lambda_iter(st).collect()
    } else {
        sl.members
    };
    let comps = compositions(r);
    let mut terms: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    let mut expanded = Vec::new();
    for sigma in &members {
        let floor = lex_floor(&permute_coords(sigma, &st.aty));
        let base = match variant {
            Variant::Floor => floor,
            Variant::Ceiling => lex_ceiling(st, &floor),
        };
        for ct in &comps {
            let nu = lex_floor(&permute_coords(&ct.pi, &base));
            let parity = st.level(&nu) + ct.ell_pi as i64;
            let sign = if parity % 2 == 0 { 1 } else { -1 };
            let coeff = sign * ct.multinomial as i64;
            *terms.entry(nu.clone()).or_insert(0) += coeff;
            expanded.push((sigma.clone(), ct.pi.clone(), nu, coeff));
        }
    }
    terms.retain(|_, c| *c != 0);
    let denominator = (1..=r as i64).product();
    Ok(KacWeylTerms {
        terms,
        denominator,
        expanded,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeKind {
    /// `x_s <= g_s`.
    Normal,
    /// Normal, and `x_s <= x_t` whenever slots `s < t` of the vertex are strongly connected.
    Truncated,
    /// Normal and weakly increasing.
    Lexical,
    /// Normal and weakly increasing from the second slot on.
    Half,
}

impl std::str::FromStr for ConeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(ConeKind::Normal),
            "truncated" => Ok(ConeKind::Truncated),
            "lexical" => Ok(ConeKind::Lexical),
            "half" => Ok(ConeKind::Half),
            _ => Err(Error::Parse(format!("unknown cone kind `{s}`"))),
        }
    }
}

/// Coordinates of the cone below `g` whose relative level against `aty` is at most `depth`.
pub fn cone_members(
    kind: ConeKind,
    g: &[i64],
    aty: &[i64],
    chat: &[Vec<bool>],
    depth: i64,
) -> Vec<Vec<i64>> {
    let r = g.len();
    let base_level: i64 = aty.iter().zip(g).map(|(a, b)| a - b).sum();
    let budget = depth - base_level;
    let mut out = Vec::new();
    if budget < 0 {
        return out;
    }
    let keep = |x: &[i64]| -> bool {
        match kind {
            ConeKind::Normal => true,
            ConeKind::Lexical => x.windows(2).all(|w| w[0] <= w[1]),
            ConeKind::Half => x.len() < 2 || x[1..].windows(2).all(|w| w[0] <= w[1]),
            ConeKind::Truncated => (0..r).all(|s| (s + 1..r).all(|t| !chat[s][t] || x[s] <= x[t])),
        }
    };
    let mut x = g.to_vec();
    fn rec<F: Fn(&[i64]) -> bool>(
        s: usize,
        left: i64,
        g: &[i64],
        x: &mut Vec<i64>,
        keep: &F,
        out: &mut Vec<Vec<i64>>,
    ) {
        if s == g.len() {
            if keep(x) {
                out.push(x.clone());
            }
            return;
        }
        for d in 0..=left {
            x[s] = g[s] - d;
            rec(s + 1, left - d, g, x, keep, out);
        }
        x[s] = g[s];
    }
    rec(0, budget, g, &mut x, &keep, &mut out);
    out
}

pub fn kac_char(lam: &Weight) -> Result<FormalChar> {
    CharCache::new().kac_char(lam)
}

pub fn bl_char(gamma: &OddRootSet, lam: &Weight) -> Result<FormalChar> {
    bl_char_uncached(gamma, lam)
}

pub fn irr_char(lam: &Weight) -> Result<FormalChar> {
    CharCache::new().irr_char(lam, Variant::Floor)
}

pub fn irr_char_variant(lam: &Weight, variant: Variant) -> Result<FormalChar> {
    CharCache::new().irr_char(lam, variant)
}

pub fn cone_char_window(
    kind: ConeKind,
    vertex: &Weight,
    ambient: &AtypicalStructure,
    depth: i64,
) -> Result<FormalChar> {
    CharCache::new().cone_char_window(kind, vertex, ambient, depth)
}

/// Do `a` and `b` agree on every weight whose eps-sum is within `depth` of `top`?
/// A cone window truncated at relative level `depth` is exact on exactly those weights.
pub fn agree_on_interior(a: &FormalChar, b: &FormalChar, top: i64, depth: i64) -> bool {
    let inside = |e: &[i64]| top - a.eps_sum_of(e) <= depth;
    a.filtered(inside) == b.filtered(inside)
}

/// Checks `r0! e^{rho~} prod (1 - e^-alpha) = (-1)^{|0 - 0^up|} sum_w sign(w) w(e^{0^up + rho~} prod_{beta not in Gamma_0} (1 + e^-beta))`.
pub fn denominator_check(m: usize, n: usize) -> bool {
    let r0 = m.min(n);
    let rho = rho_tilde(m, n);
    let mut lhs = FormalChar::monomial(m, n, rho.clone(), (1..=r0 as i64).product());
    for (p, q) in even_root_pq(m, n) {
        let mut neg_alpha = vec![0; m + n];
        neg_alpha[p] = -1;
        neg_alpha[q] = 1;
        let moved = lhs.shift(&neg_alpha);
        lhs.add_scaled(&moved, -1);
    }
    let pairs: Vec<(usize, usize)> = (1..=r0).map(|s| (m - s, s - 1)).collect();
    let gamma = OddRootSet::from_pairs(m, n, &pairs);
    let mut up = vec![0i64; m + n];
    for (s, &(i, z)) in pairs.iter().enumerate() {
        up[i] += (r0 - 1 - s) as i64;
        up[m + z] += (r0 - 1 - s) as i64;
    }
    let top = Weight::from_entries(m, n, &up);
    // 0^up sits r0(r0-1)/2 levels above 0, which contributes the usual level sign
    let level = (r0 * r0.saturating_sub(1) / 2) as i64;
    let sign = if level % 2 == 0 { 1 } else { -1 };
    lhs == bl_numerator(&gamma, &top).scaled(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn chars(pairs: &[(&str, i64)]) -> FormalChar {
        let first = w(pairs[0].0);
        let mut c = FormalChar::zero(first.m(), first.n());
        for (s, k) in pairs {
            c.add_term(w(s).entries(), *k);
        }
        c
    }

    #[test]
    fn small_characters() {
        assert_eq!(
            weyl_char_g0(&Weight::zero(2, 2)).unwrap(),
            FormalChar::unit(2, 2)
        );
        assert_eq!(
            weyl_char_g0(&w("(1,0|0)")).unwrap(),
            chars(&[("(1,0|0)", 1), ("(0,1|0)", 1)])
        );
        assert_eq!(
            kac_char(&w("(0|0)")).unwrap(),
            chars(&[("(0|0)", 1), ("(-1|-1)", 1)])
        );
        assert!(kac_char(&w("(0,1|0)")).unwrap().is_zero());
        assert!(weyl_char_g0(&w("(0,1|0)")).is_err());
    }

    #[test]
    fn natural_delta_side() {
        // highest weight -delta_1 of the dual natural gl(2): entries (|1,0)
        let c = weyl_char_g0(&w("(0|1,0)")).unwrap_err();
        assert!(matches!(c, Error::NotDominant(_)));
        let c = weyl_char_g0(&w("(0|0,1)")).unwrap();
        assert_eq!(c, chars(&[("(0|0,1)", 1), ("(0|1,0)", 1)]));
    }

    #[test]
    fn gl11_irreducibles() {
        assert_eq!(irr_char(&w("(0|0)")).unwrap(), FormalChar::unit(1, 1));
        assert_eq!(irr_char(&w("(1|1)")).unwrap(), chars(&[("(1|1)", 1)]));
        let kac = kac_char(&w("(1|1)")).unwrap();
        let mut sum = irr_char(&w("(1|1)")).unwrap();
        sum.add_scaled(&irr_char(&w("(0|0)")).unwrap(), 1);
        assert_eq!(kac, sum);
    }

    #[test]
    fn typical_irreducible_is_kac() {
        let lam = w("(2,1|0)");
        assert_eq!(analyze(&lam).unwrap().r, 0);
        assert_eq!(irr_char(&lam).unwrap(), kac_char(&lam).unwrap());
    }

    #[test]
    fn bl_extremes() {
        for lam in [w("(1,0|2)"), w("(0,1|0)"), w("(2,-1|1,3)")] {
            let (m, n) = lam.shape();
            assert_eq!(
                bl_char(&OddRootSet::all(m, n), &lam).unwrap(),
                weyl_char_virtual(&lam).unwrap()
            );
            assert_eq!(
                bl_char(&OddRootSet::empty(m, n), &lam).unwrap(),
                kac_char(&lam).unwrap()
            );
        }
    }

    #[test]
    fn denominator_small() {
        assert!(denominator_check(1, 1));
        assert!(denominator_check(2, 1));
        assert!(denominator_check(1, 2));
    }

    #[test]
    fn weight_of_json() {
        let c = chars(&[("(0|0)", 1), ("(-1|-1)", 1)]);
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(
            j,
            r#"{"m":1,"n":1,"terms":[{"weight":{"m":1,"n":1,"eps":[-1],"delta":[-1]},"mult":1},{"weight":{"m":1,"n":1,"eps":[0],"delta":[0]},"mult":1}]}"#
        );
    }

    fn weyl_dim(top: &[i64]) -> i128 {
        let k = top.len();
        let mut num = 1i128;
        let mut den = 1i128;
        for i in 0..k {
            for j in i + 1..k {
                num *= (top[i] - top[j] + (j - i) as i64) as i128;
                den *= (j - i) as i128;
            }
        }
        num / den
    }

    proptest! {
        #[test]
        fn patterns_match_bialternant(top in proptest::collection::vec(-3i64..4, 1..5)) {
            let mut top = top;
            top.sort_by(|a, b| b.cmp(a));
            let a = gl_character(&top);
            let b = gl_character_bialternant(&top).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.values().sum::<i64>() as i128, weyl_dim(&top));
        }

        #[test]
        fn bl_division_matches_weyl_sum(
            e in proptest::collection::vec(-2i64..3, 2),
            d in proptest::collection::vec(-2i64..3, 2),
            mask in 0u32..16,
        ) {
            let lam = Weight::new(e, d).unwrap();
            let pairs: Vec<(usize, usize)> =
                (0..4).filter(|b| mask >> b & 1 == 1).map(|b| (b / 2, b % 2)).collect();
            let gamma = OddRootSet::from_pairs(2, 2, &pairs);
            prop_assert_eq!(bl_char(&gamma, &lam).unwrap(), bl_char_via_weyl(&gamma, &lam).unwrap());
        }

        #[test]
        fn kac_dimension_factor(e in proptest::collection::vec(-2i64..3, 2), d in proptest::collection::vec(-2i64..3, 1)) {
            let mut e = e;
            e.sort_by(|a, b| b.cmp(a));
            let lam = Weight::new(e, d).unwrap();
            let weyl = weyl_char_g0(&lam).unwrap().coefficient_sum();
            prop_assert_eq!(kac_char(&lam).unwrap().coefficient_sum(), 4 * weyl);
        }
    }
}
