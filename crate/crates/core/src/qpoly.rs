//! Sparse Laurent polynomials in one variable `q` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent to coefficient; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    terms: BTreeMap<i64, i64>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// The q-integer `[k] = 1 + q + ... + q^(k-1)`; zero for `k <= 0`.
    pub fn q_int(k: i64) -> Self {
        let mut p = Self::zero();
        for e in 0..k.max(0) {
            p.add_term(e, 1);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Substitute `q -> q^k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    /// Value at an integer point, `q = ±1` being the interesting cases.
    pub fn eval(&self, q: i64) -> i128 {
        self.terms()
            .map(|(e, c)| {
                let base = if e >= 0 {
                    (q as i128).pow(e as u32)
                } else {
                    match q {
                        1 => 1,
                        -1 => (-1i128).pow((-e) as u32),
                        _ => panic!("negative exponent at q={q}"),
                    }
                };
                c as i128 * base
            })
            .sum()
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// Exact division; fails unless `divisor` divides `self` in `Z[q, q^-1]`.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly> {
        let (dlow, dhigh) = match (divisor.low_degree(), divisor.degree()) {
            (Some(l), Some(h)) => (l, h),
            _ => {
                return Err(Error::ExactDivisionFailure(
                    "division by zero polynomial".into(),
                ))
            }
        };
        let lead = divisor.coeff(dhigh);
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(top) = rem.degree() {
            let low = rem.low_degree().unwrap();
            if top - dhigh < low - dlow {
                break;
            }
            let c = rem.coeff(top);
            if c % lead != 0 {
                break;
            }
            let qc = c / lead;
            let qe = top - dhigh;
            quot.add_term(qe, qc);
            for (e, dc) in divisor.terms() {
                rem.add_term(e + qe, -qc * dc);
            }
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::ExactDivisionFailure(format!(
                "{divisor} does not divide {self}"
            )))
        }
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c);
        }
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let abs = c.unsigned_abs();
            write!(f, "{sign}")?;
            match (e, abs) {
                (0, a) => write!(f, "{a}")?,
                (_, a) => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for QPoly {
    type Err = Error;

    /// Parses the text form produced by `Display`, e.g. `q^7+q^5`, `-2*q^-1+3`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s == "0" {
            return Ok(QPoly::zero());
        }
        let bad = || Error::Parse(format!("malformed polynomial `{s}`"));
        let mut out = QPoly::zero();
        let bytes = s.as_bytes();
        let mut start = 0;
        // split on '+'/'-' that are not part of an exponent
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            let at_end = i == bytes.len();
            if at_end || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
                pieces.push(&s[start..i]);
                start = i;
            }
        }
        for piece in pieces {
            let (neg, body) = match piece.as_bytes()[0] {
                b'+' => (false, &piece[1..]),
                b'-' => (true, &piece[1..]),
                _ => (false, piece),
            };
            let (coeff, exp) = if let Some(qpos) = body.find('q') {
                let c = match &body[..qpos] {
                    "" => 1,
                    cs => cs
                        .strip_suffix('*')
                        .ok_or_else(bad)?
                        .parse::<i64>()
                        .map_err(|_| bad())?,
                };
                let rest = &body[qpos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .ok_or_else(bad)?
                        .parse::<i64>()
                        .map_err(|_| bad())?
                };
                (c, e)
            } else {
                (body.parse::<i64>().map_err(|_| bad())?, 0)
            };
            out.add_term(exp, if neg { -coeff } else { coeff });
        }
        Ok(out)
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[i64; 2]> = self.terms().rev().map(|(e, c)| [e, c]).collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<[i64; 2]>::deserialize(de)?;
        Ok(QPoly::from_terms(v.into_iter().map(|[e, c]| (e, c))))
    }
}
