//! Named property suites. Each suite builds a list of independent cases and
//! runs them on a rayon pool; a case either holds, fails, or errors.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::character::{
    agree_on_interior, denominator_check, CharCache, ConeKind, FormalChar, OddRootSet, Variant,
};
use crate::dimension::{dim_irr, dim_oracle, kac_dim};
use crate::error::{Error, Result};
use crate::kl::{comp_factors, kl_oracle, kl_poly, kl_poly_enumerated, phi};
use crate::perm::{compositions, s_lambda, s_lambda_mu, z_q};
use crate::weight::{
    analyze, compare, dominant_weights_in_box, lex_floor, permute_coords, AtypicalStructure, Weight,
};
use crate::Permutation;

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    OracleEquivalence,
    CharacterSum,
    Dimension,
    Denominator,
    ConeIdentities,
    Phi,
    QLength,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::OracleEquivalence,
        Suite::CharacterSum,
        Suite::Dimension,
        Suite::Denominator,
        Suite::ConeIdentities,
        Suite::Phi,
        Suite::QLength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleEquivalence => "oracle-equivalence",
            Suite::CharacterSum => "character-sum",
            Suite::Dimension => "dimension",
            Suite::Denominator => "denominator",
            Suite::ConeIdentities => "cone-identities",
            Suite::Phi => "phi",
            Suite::QLength => "q-length",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub m: usize,
    pub n: usize,
    /// Entry range of the weight box swept by the suite.
    pub lo: i64,
    pub hi: i64,
    /// Cone window depth; `None` means `r + 3` per ambient weight.
    pub depth: Option<i64>,
    /// Number of random cases, for suites that sample.
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            m: 2,
            n: 1,
            lo: -2,
            hi: 2,
            depth: None,
            samples: 100,
            seed: DEFAULT_SEED,
            jobs: 0,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.failures.extend(other.failures);
    }
}

/// Outcome of one case: `Ok(None)` holds, `Ok(Some(msg))` fails.
pub type CaseResult = Result<Option<String>>;

/// Runs `check` over `cases` in parallel and tallies the outcomes in input order.
pub fn run_cases<T, F>(name: &str, cases: &[T], jobs: usize, check: F) -> SuiteReport
where
    T: Sync,
    F: Fn(&T) -> CaseResult + Sync + Send,
{
    let run = || cases.par_iter().map(&check).collect::<Vec<_>>();
    let outcomes = if jobs == 0 {
        run()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    };
    let mut report = SuiteReport {
        suite: name.to_string(),
        ..Default::default()
    };
    for o in outcomes {
        match o {
            Ok(None) => report.passed += 1,
            Ok(Some(msg)) => {
                report.failed += 1;
                report.failures.push(msg);
            }
            Err(e) => {
                report.failed += 1;
                report.failures.push(format!("error: {e}"));
            }
        }
    }
    report
}

fn fail_if(bad: bool, msg: impl FnOnce() -> String) -> CaseResult {
    Ok(if bad { Some(msg()) } else { None })
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let name = suite.name();
    Ok(match suite {
        Suite::OracleEquivalence => {
            let pairs = comparable_pairs_in_box(cfg.m, cfg.n, cfg.lo, cfg.hi);
            run_cases(name, &pairs, cfg.jobs, |(l, m)| check_kl_pair(l, m))
        }
        Suite::CharacterSum => {
            let cache = CharCache::new();
            let ws = dominant_weights_in_box(cfg.m, cfg.n, cfg.lo, cfg.hi);
            run_cases(name, &ws, cfg.jobs, |l| check_character_sum(&cache, l))
        }
        Suite::Dimension => {
            let ws = dominant_weights_in_box(cfg.m, cfg.n, cfg.lo, cfg.hi);
            run_cases(name, &ws, cfg.jobs, check_dimension)
        }
        Suite::Denominator => {
            let shapes: Vec<(usize, usize)> = (1..=cfg.m)
                .flat_map(|m| (1..=cfg.n).map(move |n| (m, n)))
                .collect();
            run_cases(name, &shapes, cfg.jobs, |&(m, n)| {
                fail_if(!denominator_check(m, n), || {
                    format!("denominator identity fails for gl({m}|{n})")
                })
            })
        }
        Suite::ConeIdentities => {
            let cache = CharCache::new();
            let ws: Vec<Weight> = dominant_weights_in_box(cfg.m, cfg.n, cfg.lo, cfg.hi)
                .into_iter()
                .filter(|w| matches!(analyze(w).map(|s| s.r), Ok(1..=3)))
                .collect();
            let ws = sample(ws, cfg.samples, cfg.seed);
            let mut report = SuiteReport {
                suite: name.to_string(),
                ..Default::default()
            };
            for w in &ws {
                let st = analyze(w)?;
                let depth = cfg.depth.unwrap_or(st.r as i64 + 3);
                report.merge(cone_identity_report(&cache, &st, depth, cfg.jobs));
            }
            report
        }
        Suite::Phi => {
            let pairs = phi_pairs(cfg)?;
            let mut report = run_cases(name, &pairs, cfg.jobs, |(l, m)| check_phi_pair(l, m));
            let heads: Vec<Weight> = pairs
                .iter()
                .map(|p| p.0.clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            report.merge(run_cases(name, &heads, cfg.jobs, check_phi_factors));
            report
        }
        Suite::QLength => {
            let cases = random_lower_pairs(cfg.m, cfg.n, cfg.lo, cfg.hi, cfg.samples, cfg.seed);
            run_cases(name, &cases, cfg.jobs, |(l, m)| check_q_lengths(l, m))
        }
    })
}

/// All `(lam, mu)` with `mu` below `lam` among dominant weights of the box.
pub fn comparable_pairs_in_box(m: usize, n: usize, lo: i64, hi: i64) -> Vec<(Weight, Weight)> {
    let all = dominant_weights_in_box(m, n, lo, hi);
    let mut out = Vec::new();
    for lam in &all {
        for mu in &all {
            if compare(mu, lam).map(|r| r.preccurlyeq).unwrap_or(false) {
                out.push((lam.clone(), mu.clone()));
            }
        }
    }
    out
}

fn sample<T>(mut items: Vec<T>, k: usize, seed: u64) -> Vec<T> {
    if items.len() <= k {
        return items;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    items.shuffle(&mut rng);
    items.truncate(k);
    items
}

/// A dominant weight in the block of `st` obtained by lowering each atypical
/// value by a random amount, or `None` when the result is not below `st`.
fn random_lower(st: &AtypicalStructure, rng: &mut ChaCha8Rng, spread: i64) -> Option<Weight> {
    let typ = st.typ.values();
    let mut g: Vec<i64> = st
        .aty
        .iter()
        .map(|a| a - rng.gen_range(0..=spread))
        .collect();
    g.sort_unstable();
    if g.windows(2).any(|w| w[0] == w[1]) || g.iter().any(|x| typ.contains(x)) {
        return None;
    }
    let mu = st.block().weight(&g).ok()?;
    compare(&mu, st.weight()).ok()?.preccurlyeq.then_some(mu)
}

/// `count` random pairs `(lam, mu)` with `lam` atypical in the box and `mu` below it.
pub fn random_lower_pairs(
    m: usize,
    n: usize,
    lo: i64,
    hi: i64,
    count: usize,
    seed: u64,
) -> Vec<(Weight, Weight)> {
    let heads: Vec<Weight> = dominant_weights_in_box(m, n, lo, hi)
        .into_iter()
        .filter(|w| analyze(w).map(|s| s.r > 0).unwrap_or(false))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if heads.is_empty() {
        return out;
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count.max(1) {
        attempts += 1;
        let lam = heads.choose(&mut rng).unwrap();
        let st = match analyze(lam) {
            Ok(st) => st,
            Err(_) => continue,
        };
        if let Some(mu) = random_lower(&st, &mut rng, 3) {
            out.push((lam.clone(), mu));
        }
    }
    out
}

pub fn check_kl_pair(lam: &Weight, mu: &Weight) -> CaseResult {
    let closed = kl_poly(lam, mu)?;
    let oracle = kl_oracle(lam, mu)?;
    let enumerated = kl_poly_enumerated(lam, mu)?;
    fail_if(closed != oracle || closed != enumerated, || {
        format!("K[{lam},{mu}]: closed {closed}, oracle {oracle}, enumerated {enumerated}")
    })
}

pub fn check_character_sum(cache: &CharCache, lam: &Weight) -> CaseResult {
    let row = comp_factors(lam, None)?;
    let (m, n) = lam.shape();
    let mut sum = FormalChar::zero(m, n);
    for mu in &row.factors {
        sum.add_scaled(&cache.irr_char(mu, Variant::Floor)?, 1);
    }
    let kac = cache.kac_char(lam)?;
    fail_if(kac != sum, || {
        format!(
            "Kac({lam}) differs from the sum over {} factors",
            row.factors.len()
        )
    })
}

pub fn check_dimension(lam: &Weight) -> CaseResult {
    let d = dim_irr(lam)?;
    let o = dim_oracle(lam)?;
    if d != o {
        return fail_if(true, || format!("dim {lam}: formula {d}, character {o}"));
    }
    let row = comp_factors(lam, None)?;
    let total: i128 = row.factors.iter().map(dim_irr).sum::<Result<i128>>()?;
    let kac = kac_dim(lam)?;
    fail_if(total != kac, || {
        format!("dim Kac({lam}) = {kac} but factors sum to {total}")
    })
}

/// Weights `mu` of the block of `lam` whose atypical values lie within `below`
/// of those of `lam`, paired with `lam`; used for block correspondence checks.
fn block_pairs(lam: &Weight, below: i64) -> Result<Vec<(Weight, Weight)>> {
    let st = analyze(lam)?;
    let typ = st.typ.values();
    let lo = st.aty[0] - below;
    let hi = *st.aty.last().unwrap();
    let vals: Vec<i64> = (lo..=hi).filter(|x| !typ.contains(x)).collect();
    let mut heads = Vec::new();
    let mut choose = vec![0usize; st.r];
    fn rec(i: usize, start: usize, vals: &[i64], pick: &mut Vec<usize>, out: &mut Vec<Vec<i64>>) {
        if i == pick.len() {
            out.push(pick.iter().map(|&k| vals[k]).collect());
            return;
        }
        for k in start..vals.len() {
            pick[i] = k;
            rec(i + 1, k + 1, vals, pick, out);
        }
    }
    let mut tuples = Vec::new();
    rec(0, 0, &vals, &mut choose, &mut tuples);
    for t in &tuples {
        heads.push(st.block().weight(t)?);
    }
    let mut out = Vec::new();
    for a in &heads {
        for b in &heads {
            if compare(b, a)?.preccurlyeq {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

fn phi_pairs(cfg: &VerifyConfig) -> Result<Vec<(Weight, Weight)>> {
    let lam = dominant_weights_in_box(cfg.m, cfg.n, cfg.lo, cfg.hi)
        .into_iter()
        .filter(|w| analyze(w).map(|s| s.r >= 2).unwrap_or(false))
        .max_by_key(|w| analyze(w).map(|s| s.r).unwrap_or(0))
        .ok_or_else(|| {
            Error::TypicalWeight(format!("no r >= 2 weight in gl({}|{}) box", cfg.m, cfg.n))
        })?;
    Ok(sample(block_pairs(&lam, 3)?, cfg.samples, cfg.seed))
}

/// All comparable pairs in the block of `lam` with atypical values at most `below` under it.
pub fn block_pairs_of(lam: &Weight, below: i64) -> Result<Vec<(Weight, Weight)>> {
    block_pairs(lam, below)
}

pub fn check_phi_pair(lam: &Weight, mu: &Weight) -> CaseResult {
    let a = kl_poly(lam, mu)?;
    let b = kl_poly(&phi(lam)?, &phi(mu)?)?;
    fail_if(a != b, || {
        format!("K[{lam},{mu}] = {a} but image gives {b}")
    })
}

pub fn check_phi_factors(lam: &Weight) -> CaseResult {
    let here: BTreeSet<Weight> = comp_factors(lam, None)?
        .factors
        .iter()
        .map(phi)
        .collect::<Result<_>>()?;
    let there: BTreeSet<Weight> = comp_factors(&phi(lam)?, None)?
        .factors
        .into_iter()
        .collect();
    fail_if(here != there, || {
        format!("factors of {lam} do not map onto factors of its image")
    })
}

pub fn check_q_lengths(lam: &Weight, mu: &Weight) -> CaseResult {
    let st = analyze(lam)?;
    let ms = analyze(mu)?;
    // both constructors cross-check closed forms against enumeration and error on mismatch
    let sl = s_lambda(&st)?;
    let slm = s_lambda_mu(&st, &ms)?;
    let z = z_q(&st.h, &slm.i_vec);
    fail_if(z != slm.qpoly || sl.qpoly.is_zero(), || {
        format!("S[{lam},{mu}] = {} but Z_q gives {z}", slm.qpoly)
    })
}

fn sign(x: i64) -> i64 {
    if x % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Interior agreement of two windows as a case outcome.
fn interior(
    label: String,
    a: &FormalChar,
    b: &FormalChar,
    st: &AtypicalStructure,
    depth: i64,
) -> CaseResult {
    fail_if(
        !agree_on_interior(a, b, st.weight().eps_sum(), depth),
        || label,
    )
}

/// Vertices used for the cone identities: the ambient tuple and its single-slot drops.
fn cone_vertices(st: &AtypicalStructure) -> Vec<Vec<i64>> {
    let mut out = vec![st.aty.clone()];
    for s in 0..st.r {
        let mut g = st.aty.clone();
        g[s] -= 1;
        out.push(g);
    }
    out
}

/// Runs every cone identity for the ambient weight of `st` at the given depth.
pub fn cone_identity_report(
    cache: &CharCache,
    st: &AtypicalStructure,
    depth: i64,
    jobs: usize,
) -> SuiteReport {
    #[derive(Clone)]
    enum Case {
        BlNormal(Vec<i64>),
        TruncatedIsIrreducible,
        ChiL(Vec<i64>),
        ReW(Vec<i64>),
        Special(i64),
        Half(Vec<i64>),
    }
    let lam = st.weight().clone();
    let mut cases = vec![Case::TruncatedIsIrreducible];
    for g in cone_vertices(st) {
        cases.push(Case::BlNormal(g.clone()));
        cases.push(Case::ChiL(g.clone()));
        let floor = lex_floor(&g);
        cases.push(Case::ReW(floor.clone()));
        cases.push(Case::Half(floor));
    }
    cases.push(Case::Special(st.aty[0]));
    cases.push(Case::Special(st.aty[0] - 1));
    let r = st.r;
    let fact: i64 = (1..=r as i64).product();
    let cone = |kind, g: &[i64]| cache.cone_char_coords(kind, g, st, depth);
    run_cases("cone-identities", &cases, jobs, |case| match case {
        Case::TruncatedIsIrreducible => {
            let t = cone(ConeKind::Truncated, &st.aty)?;
            let irr = cache.irr_char(&lam, Variant::Floor)?;
            interior(
                format!("truncated cone at {lam} differs from its irreducible character"),
                &t,
                &irr,
                st,
                depth,
            )
        }
        Case::BlNormal(g) => {
            let nc = cone(ConeKind::Normal, g)?;
            let bl = cache.bl_char(&OddRootSet::of_structure(st), &st.weight_at(g))?;
            interior(
                format!("normal cone at {g:?} of {lam} differs from the BL character"),
                &nc,
                &bl.scaled(sign(st.level(g))),
                st,
                depth,
            )
        }
        Case::ChiL(g) => {
            let nc = cone(ConeKind::Normal, g)?;
            let mut sum = FormalChar::zero(lam.m(), lam.n());
            for sigma in Permutation::all(r) {
                sum.add_scaled(
                    &cone(ConeKind::Lexical, &lex_floor(&permute_coords(&sigma, g)))?,
                    1,
                );
            }
            interior(
                format!("normal cone at {g:?} of {lam} is not the sum of lexical cones"),
                &nc,
                &sum,
                st,
                depth,
            )
        }
        Case::ReW(g) => {
            let lc = cone(ConeKind::Lexical, g)?.scaled(fact);
            let mut sum = FormalChar::zero(lam.m(), lam.n());
            for ct in compositions(r) {
                let v = lex_floor(&permute_coords(&ct.pi, g));
                sum.add_scaled(
                    &cone(ConeKind::Normal, &v)?,
                    ct.multinomial as i64 * sign(ct.ell_pi as i64),
                );
            }
            interior(
                format!(
                    "lexical cone at {g:?} of {lam} is not the composition sum of normal cones"
                ),
                &lc,
                &sum,
                st,
                depth,
            )
        }
        Case::Special(c) => {
            let g = vec![*c; r];
            let lc = cone(ConeKind::Lexical, &g)?.scaled(fact);
            let nc = cone(ConeKind::Normal, &g)?;
            interior(
                format!("constant vertex {c} of {lam}: r! lexical differs from normal"),
                &lc,
                &nc,
                st,
                depth,
            )
        }
        Case::Half(g) => {
            let hc = cone(ConeKind::Half, g)?;
            let mut sum = FormalChar::zero(lam.m(), lam.n());
            for s in 1..=r {
                let mut gs = g.clone();
                for x in gs.iter_mut().take(s).skip(1) {
                    *x = g[0];
                }
                sum.add_scaled(&cone(ConeKind::Lexical, &gs)?, 1);
            }
            interior(
                format!("half cone at {g:?} of {lam} is not the sum of lexical cones"),
                &hc,
                &sum,
                st,
                depth,
            )
        }
    })
}
