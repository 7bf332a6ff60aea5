//! Weights of gl(m|n), the rho-shift, dominance, and atypicality analysis.
//!
//! A weight is stored by its entries `(a_1..a_m | b_1..b_n)` and stands for
//! `sum a_i eps_i - sum b_z delta_z`. With this convention the odd root
//! `eps_i - delta_z` has entries `+1` at `i` and `+1` at `z`, so adding an
//! atypical root raises one eps entry and one delta entry together.
//!
//! Indices are 0-based internally. Atypical slots `s = 0..r` follow the
//! total order on odd roots, so slot 0 carries the smallest atypical value
//! of a dominant weight.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawWeight")]
pub struct Weight {
    m: usize,
    n: usize,
    eps: Vec<i64>,
    delta: Vec<i64>,
}

#[derive(Deserialize)]
struct RawWeight {
    m: usize,
    n: usize,
    eps: Vec<i64>,
    delta: Vec<i64>,
}

impl TryFrom<RawWeight> for Weight {
    type Error = Error;
    fn try_from(raw: RawWeight) -> Result<Self> {
        if raw.eps.len() != raw.m || raw.delta.len() != raw.n {
            return Err(Error::ShapeMismatch(
                raw.m,
                raw.n,
                raw.eps.len(),
                raw.delta.len(),
            ));
        }
        Weight::new(raw.eps, raw.delta)
    }
}

impl Weight {
    pub fn new(eps: Vec<i64>, delta: Vec<i64>) -> Result<Self> {
        if eps.is_empty() || delta.is_empty() {
            return Err(Error::Parse(format!(
                "gl(m|n) needs m,n >= 1, got m={} n={}",
                eps.len(),
                delta.len()
            )));
        }
        Ok(Self {
            m: eps.len(),
            n: delta.len(),
            eps,
            delta,
        })
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            eps: vec![0; m],
            delta: vec![0; n],
        }
    }

    /// Builds a weight from the concatenated entry vector `eps ++ delta`.
    pub fn from_entries(m: usize, n: usize, entries: &[i64]) -> Self {
        debug_assert_eq!(entries.len(), m + n);
        Self {
            m,
            n,
            eps: entries[..m].to_vec(),
            delta: entries[m..].to_vec(),
        }
    }

    /// Inverse of [`Weight::shifted`].
    pub fn from_shifted(eps_sh: &[i64], delta_sh: &[i64]) -> Self {
        let m = eps_sh.len();
        let eps = eps_sh
            .iter()
            .enumerate()
            .map(|(i, v)| v - rho_eps(m, i))
            .collect();
        let delta = delta_sh
            .iter()
            .enumerate()
            .map(|(z, v)| v - rho_delta(z))
            .collect();
        Self {
            m,
            n: delta_sh.len(),
            eps,
            delta,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn eps(&self) -> &[i64] {
        &self.eps
    }

    pub fn delta(&self) -> &[i64] {
        &self.delta
    }

    pub fn entries(&self) -> Vec<i64> {
        let mut v = self.eps.clone();
        v.extend_from_slice(&self.delta);
        v
    }

    pub fn check_shape(&self, other: &Weight) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(self.m, self.n, other.m, other.n));
        }
        Ok(())
    }

    pub fn shifted(&self) -> RhoShifted {
        let mut entries = Vec::with_capacity(self.m + self.n);
        entries.extend(
            self.eps
                .iter()
                .enumerate()
                .map(|(i, v)| v + rho_eps(self.m, i)),
        );
        entries.extend(self.delta.iter().enumerate().map(|(z, v)| v + rho_delta(z)));
        RhoShifted {
            m: self.m,
            n: self.n,
            entries,
        }
    }

    /// Shifted entries distinct within the eps part and within the delta part.
    pub fn is_regular(&self) -> bool {
        let sh = self.shifted();
        all_distinct(sh.eps()) && all_distinct(sh.delta())
    }

    /// `a_1 >= ... >= a_m` and `b_1 <= ... <= b_n`.
    pub fn is_dominant(&self) -> bool {
        self.eps.windows(2).all(|w| w[0] >= w[1]) && self.delta.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn require_dominant(&self) -> Result<()> {
        if self.is_dominant() {
            Ok(())
        } else {
            Err(Error::NotDominant(self.to_string()))
        }
    }

    /// Sum of the eps entries. Adding an odd positive root raises it by one,
    /// so it measures how far below a highest weight a weight sits.
    pub fn eps_sum(&self) -> i64 {
        self.eps.iter().sum()
    }

    /// Entrywise sum of two weights of the same shape.
    pub fn add_entries(&self, v: &[i64]) -> Weight {
        let e: Vec<i64> = self.entries().iter().zip(v).map(|(a, b)| a + b).collect();
        Weight::from_entries(self.m, self.n, &e)
    }

    /// Parses the text form, checking it against an expected shape.
    pub fn parse_with_shape(s: &str, shape: Option<(usize, usize)>) -> Result<Self> {
        let w: Weight = s.parse()?;
        if let Some((m, n)) = shape {
            if w.shape() != (m, n) {
                return Err(Error::Parse(format!(
                    "weight {w} has shape ({},{}) but ({m},{n}) was requested",
                    w.m, w.n
                )));
            }
        }
        Ok(w)
    }
}

pub(crate) fn rho_eps(m: usize, i: usize) -> i64 {
    (m - i) as i64
}

pub(crate) fn rho_delta(z: usize) -> i64 {
    z as i64 + 1
}

fn all_distinct(v: &[i64]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

fn write_tuple(f: &mut fmt::Formatter<'_>, a: &[i64], b: &[i64]) -> fmt::Result {
    let join = |v: &[i64]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    write!(f, "({}|{})", join(a), join(b))
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.eps, &self.delta)
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| {
                Error::Parse(format!("weight `{s}` must look like (a1,..,am|b1,..,bn)"))
            })?;
        let (a, b) = inner
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("weight `{s}` is missing the `|` separator")))?;
        let nums = |part: &str| -> Result<Vec<i64>> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|x| {
                    x.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad integer `{x}` in `{s}`")))
                })
                .collect()
        };
        Weight::new(nums(a)?, nums(b)?)
    }
}

/// Entries of `Lambda + rho`, with `rho = (m,..,1 | 1,..,n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RhoShifted {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<i64>,
}

impl RhoShifted {
    pub fn eps(&self) -> &[i64] {
        &self.entries[..self.m]
    }

    pub fn delta(&self) -> &[i64] {
        &self.entries[self.m..]
    }
}

/// Supertrace form on the standard basis, `1..=m+n` with the odd vectors last.
pub fn form(m: usize, n: usize, a: usize, b: usize) -> Result<i64> {
    for idx in [a, b] {
        if idx == 0 || idx > m + n {
            return Err(Error::IndexOutOfRange {
                index: idx,
                bound: m + n,
            });
        }
    }
    Ok(match (a == b, a <= m) {
        (false, _) => 0,
        (true, true) => 1,
        (true, false) => -1,
    })
}

/// The form extended bilinearly to entry vectors. A delta entry is minus the
/// delta coefficient, and the two sign flips cancel against `(delta,delta) = -1`
/// to leave a single minus sign.
pub fn pairing(m: usize, x: &[i64], y: &[i64]) -> i64 {
    let even: i64 = x[..m].iter().zip(&y[..m]).map(|(a, b)| a * b).sum();
    let odd: i64 = x[m..].iter().zip(&y[m..]).map(|(a, b)| a * b).sum();
    even - odd
}

/// Tuple of the non-atypical shifted entries, in positional order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypTuple {
    pub eps: Vec<i64>,
    pub delta: Vec<i64>,
}

impl TypTuple {
    pub fn values(&self) -> BTreeSet<i64> {
        self.eps.iter().chain(&self.delta).copied().collect()
    }
}

impl fmt::Display for TypTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.eps, &self.delta)
    }
}

/// A block of integral weights: a typical tuple together with the degree of atypicality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockKey {
    pub typ: TypTuple,
    pub r: usize,
}

impl BlockKey {
    pub fn m(&self) -> usize {
        self.typ.eps.len() + self.r
    }

    pub fn n(&self) -> usize {
        self.typ.delta.len() + self.r
    }

    /// The dominant weight of this block with the given (strictly increasing) atypical tuple.
    pub fn weight(&self, aty: &[i64]) -> Result<Weight> {
        if aty.len() != self.r {
            return Err(Error::DegreeMismatch {
                expected: self.r,
                found: aty.len(),
            });
        }
        if self.m() == 0 || self.n() == 0 {
            return Err(Error::InvalidBlock("empty gl(m|n)".into()));
        }
        let mut eps_sh: Vec<i64> = self.typ.eps.iter().chain(aty).copied().collect();
        let mut delta_sh: Vec<i64> = self.typ.delta.iter().chain(aty).copied().collect();
        eps_sh.sort_unstable_by(|a, b| b.cmp(a));
        delta_sh.sort_unstable();
        if !all_distinct(&eps_sh) || !all_distinct(&delta_sh) {
            return Err(Error::VanishingWeight(format!(
                "block {} with aty {aty:?}",
                self.typ
            )));
        }
        let typ_set = self.typ.values();
        if self.typ.eps.iter().any(|v| self.typ.delta.contains(v)) {
            return Err(Error::InvalidBlock(format!(
                "typical tuple {} shares a value",
                self.typ
            )));
        }
        if aty.iter().any(|v| typ_set.contains(v)) {
            return Err(Error::VanishingWeight(format!(
                "aty {aty:?} meets typical tuple {}",
                self.typ
            )));
        }
        Ok(Weight::from_shifted(&eps_sh, &delta_sh))
    }
}

/// Coupling data derived from a height vector: `c`, `chat` (upper triangular,
/// `[s][t]` meaningful for `s <= t`) and `maxs` (0-based slot indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub c: Vec<Vec<bool>>,
    pub chat: Vec<Vec<bool>>,
    pub maxs: Vec<usize>,
}

/// Slots `s < t` are c-related when `h_t - h_s < t - s`.
pub fn connectivity(h: &[i64]) -> Connectivity {
    let r = h.len();
    let mut c = vec![vec![false; r]; r];
    let mut chat = vec![vec![false; r]; r];
    for s in 0..r {
        for t in s..r {
            c[s][t] = s == t || h[t] - h[s] < (t - s) as i64;
        }
    }
    for s in 0..r {
        let mut run = true;
        for t in s..r {
            run &= c[s][t];
            chat[s][t] = run;
        }
    }
    let maxs = (0..r)
        .map(|s| (s..r).filter(|&t| chat[s][t]).max().unwrap_or(s))
        .collect();
    Connectivity { c, chat, maxs }
}

/// Full atypicality data of a regular weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtypicalStructure {
    pub r: usize,
    /// `(eps index, delta index)` of each atypical root, 0-based, in slot order.
    pub roots: Vec<(usize, usize)>,
    pub aty: Vec<i64>,
    pub typ: TypTuple,
    pub h: Vec<i64>,
    pub c: Vec<Vec<bool>>,
    pub chat: Vec<Vec<bool>>,
    pub maxs: Vec<usize>,
    weight: Weight,
}

/// Total order on odd roots: by `z - i`, then larger `i` first.
fn root_key(&(i, z): &(usize, usize)) -> (i64, std::cmp::Reverse<usize>) {
    (z as i64 - i as i64, std::cmp::Reverse(i))
}

pub fn analyze(w: &Weight) -> Result<AtypicalStructure> {
    if !w.is_regular() {
        return Err(Error::VanishingWeight(w.to_string()));
    }
    let sh = w.shifted();
    let pos: HashMap<i64, usize> = sh.eps().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut roots: Vec<(usize, usize)> = sh
        .delta()
        .iter()
        .enumerate()
        .filter_map(|(z, v)| pos.get(v).map(|&i| (i, z)))
        .collect();
    roots.sort_by_key(root_key);
    let aty: Vec<i64> = roots.iter().map(|&(_, z)| sh.delta()[z]).collect();
    let typ = TypTuple {
        eps: (0..w.m)
            .filter(|i| !roots.iter().any(|r| r.0 == *i))
            .map(|i| sh.eps()[i])
            .collect(),
        delta: (0..w.n)
            .filter(|z| !roots.iter().any(|r| r.1 == *z))
            .map(|z| sh.delta()[z])
            .collect(),
    };
    let (h, conn) = if w.is_dominant() {
        let h = positional_heights(w.m, &roots, &aty);
        let conn = connectivity(&h);
        (h, conn)
    } else {
        let plus = dominant_conjugate(w)
            .into_weight()
            .expect("regular weight has a conjugate");
        let st = analyze(&plus)?;
        let conn = Connectivity {
            c: st.c,
            chat: st.chat,
            maxs: st.maxs,
        };
        (st.h, conn)
    };
    Ok(AtypicalStructure {
        r: roots.len(),
        roots,
        aty,
        typ,
        h,
        c: conn.c,
        chat: conn.chat,
        maxs: conn.maxs,
        weight: w.clone(),
    })
}

/// Heights read off the root positions: `h_s = Lambda_{m_s} - n_s + s`.
fn positional_heights(m: usize, roots: &[(usize, usize)], g: &[i64]) -> Vec<i64> {
    roots
        .iter()
        .zip(g)
        .enumerate()
        .map(|(s, (&(i, z), &v))| v - rho_eps(m, i) - z as i64 + s as i64)
        .collect()
}

impl AtypicalStructure {
    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn block(&self) -> BlockKey {
        BlockKey {
            typ: self.typ.clone(),
            r: self.r,
        }
    }

    pub fn is_lexical(&self) -> bool {
        self.aty.windows(2).all(|w| w[0] < w[1])
    }

    /// `d_{s,t} = h_t - h_s`.
    pub fn distance(&self, s: usize, t: usize) -> i64 {
        self.h[t] - self.h[s]
    }

    pub fn total_height(&self) -> i64 {
        self.h.iter().sum()
    }

    /// Atypical coordinates of a weight on `weight + sum Z gamma_s`.
    pub fn coords(&self, w: &Weight) -> Result<Vec<i64>> {
        self.weight.check_shape(w)?;
        let base = self.weight.shifted();
        let sh = w.shifted();
        let mismatch = || Error::CoordinateMismatch(w.to_string());
        for i in 0..w.m {
            if !self.roots.iter().any(|r| r.0 == i) && sh.eps()[i] != base.eps()[i] {
                return Err(mismatch());
            }
        }
        for z in 0..w.n {
            if !self.roots.iter().any(|r| r.1 == z) && sh.delta()[z] != base.delta()[z] {
                return Err(mismatch());
            }
        }
        self.roots
            .iter()
            .map(|&(i, z)| {
                if sh.eps()[i] == sh.delta()[z] {
                    Ok(sh.eps()[i])
                } else {
                    Err(mismatch())
                }
            })
            .collect()
    }

    /// The weight with atypical coordinates `g` placed at this structure's root positions.
    pub fn weight_at(&self, g: &[i64]) -> Weight {
        let mut sh = self.weight.shifted();
        let m = self.weight.m;
        for (&(i, z), &v) in self.roots.iter().zip(g) {
            sh.entries[i] = v;
            sh.entries[m + z] = v;
        }
        Weight::from_shifted(sh.eps(), sh.delta())
    }

    /// Relative level `sum_s (aty_s - g_s)`.
    pub fn level(&self, g: &[i64]) -> i64 {
        self.aty.iter().zip(g).map(|(a, b)| a - b).sum()
    }

    /// Heights of coordinates `g` computed from the fixed root positions.
    pub fn heights_at(&self, g: &[i64]) -> Vec<i64> {
        positional_heights(self.weight.m, &self.roots, g)
    }
}

/// Result of moving a weight into the dominant chamber under the dot action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DominantWitness {
    Regular { weight: Weight, sign: i64 },
    Vanishing,
}

impl DominantWitness {
    pub fn is_vanishing(&self) -> bool {
        matches!(self, DominantWitness::Vanishing)
    }

    pub fn weight(&self) -> Option<&Weight> {
        match self {
            DominantWitness::Regular { weight, .. } => Some(weight),
            DominantWitness::Vanishing => None,
        }
    }

    pub fn into_weight(self) -> Option<Weight> {
        match self {
            DominantWitness::Regular { weight, .. } => Some(weight),
            DominantWitness::Vanishing => None,
        }
    }

    pub fn sign(&self) -> i64 {
        match self {
            DominantWitness::Regular { sign, .. } => *sign,
            DominantWitness::Vanishing => 0,
        }
    }
}

fn inversions_by<F: Fn(i64, i64) -> bool>(v: &[i64], out_of_order: F) -> usize {
    let mut k = 0;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            if out_of_order(v[a], v[b]) {
                k += 1;
            }
        }
    }
    k
}

pub fn dominant_conjugate(w: &Weight) -> DominantWitness {
    if !w.is_regular() {
        return DominantWitness::Vanishing;
    }
    let sh = w.shifted();
    let inv = inversions_by(sh.eps(), |a, b| a < b) + inversions_by(sh.delta(), |a, b| a > b);
    let mut e = sh.eps().to_vec();
    let mut d = sh.delta().to_vec();
    e.sort_unstable_by(|a, b| b.cmp(a));
    d.sort_unstable();
    DominantWitness::Regular {
        weight: Weight::from_shifted(&e, &d),
        sign: if inv % 2 == 0 { 1 } else { -1 },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub preccurlyeq: bool,
    pub prec_prec: bool,
    pub entrywise_le: bool,
    /// Per-slot lengths `h_s(lam) - h_s(mu)` and their total, when both weights share a block.
    pub lengths: Option<(Vec<i64>, i64)>,
}

/// Order relations of `mu` against `lam` (is `mu` below `lam`?).
pub fn compare(mu: &Weight, lam: &Weight) -> Result<OrderReport> {
    mu.check_shape(lam)?;
    mu.require_dominant()?;
    lam.require_dominant()?;
    let entrywise_le = mu.entries().iter().zip(lam.entries()).all(|(a, b)| *a <= b);
    let (sm, sl) = match (analyze(mu), analyze(lam)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            return Ok(OrderReport {
                preccurlyeq: false,
                prec_prec: false,
                entrywise_le,
                lengths: None,
            })
        }
    };
    let same_block = sm.r == sl.r && sm.typ == sl.typ;
    let preccurlyeq = same_block && sm.aty.iter().zip(&sl.aty).all(|(a, b)| a <= b);
    let prec_prec = same_block
        && match (sm.aty.iter().max(), sl.aty.iter().min()) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        };
    let lengths = same_block.then(|| {
        let per: Vec<i64> = sl.h.iter().zip(&sm.h).map(|(a, b)| a - b).collect();
        let total = per.iter().sum();
        (per, total)
    });
    Ok(OrderReport {
        preccurlyeq,
        prec_prec,
        entrywise_le,
        lengths,
    })
}

/// Suffix minima of the atypical coordinates: the largest lexical weight below `lam`.
pub fn lex_floor(g: &[i64]) -> Vec<i64> {
    let mut out = g.to_vec();
    for s in (0..out.len().saturating_sub(1)).rev() {
        out[s] = out[s].min(out[s + 1]);
    }
    out
}

/// Ceiling of a lexical tuple: each slot takes the value at the far end of its
/// strongly connected run, with connectivity measured by positional heights.
pub fn lex_ceiling(structure: &AtypicalStructure, floor: &[i64]) -> Vec<i64> {
    let conn = connectivity(&structure.heights_at(floor));
    let r = floor.len();
    (0..r)
        .map(|s| {
            let t = (s..r)
                .filter(|&t| (s..=t).all(|p| conn.chat[p][t]))
                .max()
                .unwrap_or(s);
            floor[t]
        })
        .collect()
}

/// `(floor, ceiling)` of a weight on the atypical lattice of `structure`.
pub fn lex_envelope(lam: &Weight, structure: &AtypicalStructure) -> Result<(Weight, Weight)> {
    let g = structure.coords(lam)?;
    let floor = lex_floor(&g);
    let ceiling = lex_ceiling(structure, &floor);
    Ok((structure.weight_at(&floor), structure.weight_at(&ceiling)))
}

/// Coordinates permuted by `sigma`: slot `s` receives the value of slot `sigma(s)`.
pub fn permute_coords(sigma: &Permutation, g: &[i64]) -> Vec<i64> {
    (0..g.len()).map(|s| g[sigma.image(s)]).collect()
}

pub fn dot_act(sigma: &Permutation, lam: &Weight, structure: &AtypicalStructure) -> Result<Weight> {
    if sigma.degree() != structure.r {
        return Err(Error::DegreeMismatch {
            expected: structure.r,
            found: sigma.degree(),
        });
    }
    let g = structure.coords(lam)?;
    Ok(structure.weight_at(&permute_coords(sigma, &g)))
}

/// Every dominant weight between `mu` and `lam`, ascending in the atypical tuple.
pub fn interval(mu: &Weight, lam: &Weight) -> Result<Vec<Weight>> {
    let rep = compare(mu, lam)?;
    if !rep.preccurlyeq {
        return Err(Error::NotComparable(format!("{mu} is not below {lam}")));
    }
    let lo = analyze(mu)?.aty;
    let st = analyze(lam)?;
    let block = st.block();
    let forbidden = block.typ.values();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(st.r);
    fn rec(
        s: usize,
        lo: &[i64],
        hi: &[i64],
        forbidden: &BTreeSet<i64>,
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if s == hi.len() {
            out.push(cur.clone());
            return;
        }
        let start = match cur.last() {
            Some(&p) => lo[s].max(p + 1),
            None => lo[s],
        };
        for v in start..=hi[s] {
            if forbidden.contains(&v) {
                continue;
            }
            cur.push(v);
            rec(s + 1, lo, hi, forbidden, cur, out);
            cur.pop();
        }
    }
    let mut tuples = Vec::new();
    rec(0, &lo, &st.aty, &forbidden, &mut cur, &mut tuples);
    for t in tuples {
        out.push(block.weight(&t)?);
    }
    Ok(out)
}

/// All dominant weights of gl(m|n) with every entry in `[lo, hi]`.
pub fn dominant_weights_in_box(m: usize, n: usize, lo: i64, hi: i64) -> Vec<Weight> {
    fn seqs(len: usize, lo: i64, hi: i64, descending: bool) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::new();
            for s in &out {
                let (a, b) = match (s.last(), descending) {
                    (None, _) => (lo, hi),
                    (Some(&p), true) => (lo, p),
                    (Some(&p), false) => (p, hi),
                };
                for v in a..=b {
                    let mut t = s.clone();
                    t.push(v);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }
    let mut out = Vec::new();
    for e in seqs(m, lo, hi, true) {
        for d in seqs(n, lo, hi, false) {
            out.push(Weight {
                m,
                n,
                eps: e.clone(),
                delta: d,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn form_values() {
        assert_eq!(form(2, 1, 1, 1).unwrap(), 1);
        assert_eq!(form(2, 1, 3, 3).unwrap(), -1);
        assert_eq!(form(2, 1, 1, 2).unwrap(), 0);
        assert!(form(2, 1, 4, 1).is_err());
        assert!(form(2, 1, 0, 1).is_err());
    }

    #[test]
    fn parse_and_display() {
        let x = w("( 7,-6 | 1 )");
        assert_eq!(x.to_string(), "(7,-6|1)");
        assert!("(1,2)".parse::<Weight>().is_err());
        assert!("(1,a|2)".parse::<Weight>().is_err());
        assert!("(|2)".parse::<Weight>().is_err());
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"m":2,"n":1,"eps":[7,-6],"delta":[1]}"#);
        assert_eq!(serde_json::from_str::<Weight>(&j).unwrap(), x);
        assert!(
            serde_json::from_str::<Weight>(r#"{"m":3,"n":1,"eps":[7,-6],"delta":[1]}"#).is_err()
        );
    }

    #[test]
    fn gl11_zero() {
        let st = analyze(&w("(0|0)")).unwrap();
        assert_eq!((st.r, st.aty.clone(), st.h.clone()), (1, vec![1], vec![0]));
        assert!(st.typ.eps.is_empty() && st.typ.delta.is_empty());
    }

    #[test]
    fn dominant_conjugate_cases() {
        let x = w("(3,1|0)");
        assert_eq!(
            dominant_conjugate(&x),
            DominantWitness::Regular {
                weight: x.clone(),
                sign: 1
            }
        );
        assert!(dominant_conjugate(&w("(0,1|0)")).is_vanishing());
        // shifted (2,3|1) sorts to (3,2|1) with one swap
        let d = dominant_conjugate(&w("(0,2|0)"));
        assert_eq!(
            d,
            DominantWitness::Regular {
                weight: w("(1,1|0)"),
                sign: -1
            }
        );
    }

    #[test]
    fn lexical_floor_is_suffix_min() {
        assert_eq!(lex_floor(&[5, 3, 7]), vec![3, 3, 7]);
    }

    #[test]
    fn zero_ceiling_in_glrr() {
        for r in 1..=4 {
            let z = Weight::zero(r, r);
            let st = analyze(&z).unwrap();
            let (floor, ceil) = lex_envelope(&z, &st).unwrap();
            assert_eq!(floor, z);
            let eps: Vec<i64> = (0..r as i64).collect();
            let delta: Vec<i64> = (0..r as i64).rev().collect();
            assert_eq!(ceil, Weight::new(eps, delta).unwrap());
        }
    }

    #[test]
    fn interval_gl11() {
        let v = interval(&w("(0|0)"), &w("(2|2)")).unwrap();
        assert_eq!(v, vec![w("(0|0)"), w("(1|1)"), w("(2|2)")]);
        assert_eq!(
            interval(&w("(2|2)"), &w("(2|2)")).unwrap(),
            vec![w("(2|2)")]
        );
        assert!(interval(&w("(2|2)"), &w("(0|0)")).is_err());
    }

    #[test]
    fn interval_matches_box_scan_gl21() {
        let all = dominant_weights_in_box(2, 1, -8, 4);
        for lam in [w("(1,0|2)"), w("(1,0|0)"), w("(1,1|2)")] {
            let st = analyze(&lam).unwrap();
            assert_eq!(st.r, 1);
            for k in 0..4 {
                let mu = st.block().weight(&[st.aty[0] - k]);
                let Ok(mu) = mu else { continue };
                let got = interval(&mu, &lam).unwrap();
                let scan: Vec<Weight> = all
                    .iter()
                    .filter(|v| {
                        compare(&mu, v).unwrap().preccurlyeq
                            && compare(v, &lam).unwrap().preccurlyeq
                    })
                    .cloned()
                    .collect();
                let mut a = got.clone();
                a.sort();
                let mut b = scan;
                b.sort();
                assert_eq!(a, b, "k={k}");
            }
        }
    }

    #[test]
    fn dot_act_transposition() {
        let lam = w("(2,0|0,2)");
        let st = analyze(&lam).unwrap();
        assert_eq!(st.r, 2);
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        let moved = dot_act(&swap, &lam, &st).unwrap();
        let g = st.coords(&moved).unwrap();
        assert_eq!(g, vec![st.aty[1], st.aty[0]]);
        assert!(dot_act(&Permutation::identity(3), &lam, &st).is_err());
        assert_eq!(dot_act(&Permutation::identity(2), &lam, &st).unwrap(), lam);
    }

    /// Dominant weight built from random shifted sets, so atypicality is common.
    pub(crate) fn arb_dominant(max_m: usize, max_n: usize) -> impl Strategy<Value = Weight> {
        (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
            (
                proptest::sample::subsequence((0..12i64).collect::<Vec<_>>(), m),
                proptest::sample::subsequence((0..12i64).collect::<Vec<_>>(), n),
            )
                .prop_map(|(mut e, d)| {
                    e.reverse();
                    Weight::from_shifted(&e, &d)
                })
        })
    }

    fn gap_count(lam: &Weight, a: i64, b: i64) -> i64 {
        let set: BTreeSet<i64> = lam.shifted().entries.into_iter().collect();
        (a..=b).filter(|v| !set.contains(v)).count() as i64
    }

    proptest! {
        #[test]
        fn distances_are_gap_counts(lam in arb_dominant(5, 5)) {
            let st = analyze(&lam).unwrap();
            prop_assert!(lam.is_dominant());
            for s in 0..st.r {
                for t in s..st.r {
                    let d = st.distance(s, t);
                    prop_assert!(d >= 0);
                    prop_assert_eq!(d, gap_count(&lam, st.aty[s], st.aty[t]));
                }
                for t in s..=st.maxs[s] {
                    prop_assert!(st.maxs[t] <= st.maxs[s]);
                }
            }
            prop_assert!(st.is_lexical());
            prop_assert!(st.h.windows(2).all(|p| p[0] <= p[1]));
        }

        #[test]
        fn conjugation_round_trip(lam in arb_dominant(4, 4), seed in any::<u64>()) {
            let m = lam.m();
            let n = lam.n();
            let sh = lam.shifted();
            let mut e = sh.eps().to_vec();
            let mut d = sh.delta().to_vec();
            let mut state = seed;
            let mut swaps = 0;
            for i in (1..m).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                if j != i { e.swap(i, j); swaps += 1; }
            }
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                if j != i { d.swap(i, j); swaps += 1; }
            }
            let moved = Weight::from_shifted(&e, &d);
            match dominant_conjugate(&moved) {
                DominantWitness::Regular { weight, sign } => {
                    prop_assert_eq!(weight, lam);
                    prop_assert_eq!(sign, if swaps % 2 == 0 { 1 } else { -1 });
                }
                DominantWitness::Vanishing => prop_assert!(false),
            }
        }

        #[test]
        fn heights_invariant_under_slot_permutation(lam in arb_dominant(5, 5), k in 0usize..24) {
            let st = analyze(&lam).unwrap();
            if st.r < 2 {
                return Ok(());
            }
            let perms = Permutation::all(st.r);
            let sigma = &perms[k % perms.len()];
            let moved = dot_act(sigma, &lam, &st).unwrap();
            let ms = analyze(&moved).unwrap();
            prop_assert_eq!(&ms.typ, &st.typ);
            prop_assert_eq!(&ms.h, &st.h);
            let mut a = ms.aty.clone();
            a.sort();
            prop_assert_eq!(a, st.aty.clone());
        }

        #[test]
        fn lengths_nonnegative_below(lam in arb_dominant(4, 4), drops in proptest::collection::vec(0i64..4, 4)) {
            let st = analyze(&lam).unwrap();
            if st.r == 0 {
                return Ok(());
            }
            let mut g = st.aty.clone();
            for s in 0..st.r { g[s] -= drops[s]; }
            let Ok(mu) = st.block().weight(&lex_floor(&g)) else { return Ok(()); };
            let mu_st = analyze(&mu).unwrap();
            prop_assume!(mu_st.aty.iter().zip(&st.aty).all(|(a, b)| a <= b));
            let rep = compare(&mu, &lam).unwrap();
            prop_assert!(rep.preccurlyeq);
            let (per, total) = rep.lengths.unwrap();
            prop_assert!(total >= 0);
            prop_assert_eq!(per.iter().sum::<i64>(), total);
            // the gap count between mu's slot s and lam's slot t
            let typ = st.typ.values();
            for s in 0..st.r {
                for t in 0..st.r {
                    let (a, b) = (mu_st.aty[s], st.aty[t]);
                    if a > b { continue; }
                    let gaps = ((a + 1)..=b).filter(|v| !typ.contains(v)).count() as i64;
                    prop_assert_eq!(gaps, st.h[t] - mu_st.h[s] + t as i64 - s as i64);
                }
            }
        }
    }
}
