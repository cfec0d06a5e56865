//! Pythagorean triples from Euclid's odd-pair formula, and the map between
//! triples and ladder couplings that transfer 1→3 completely.

use crate::dynamics::{transfer_time, TransferSolution};
use crate::error::{Error, Result};
use crate::hamiltonian::CouplingSet;
use crate::hopf::{ladder_from_hopf, HopfCoordinates, DEFAULT_TOL};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Integer triple with `a² + b² = c²`. Triples produced by this module use
/// the canonical leg order (even leg, odd leg, hypotenuse).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PythTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl PythTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if is_pythagorean(a as i64, b as i64, c as i64)? {
            Ok(PythTriple { a, b, c })
        } else {
            Err(Error::InvalidArgument(format!("({a}, {b}, {c}) is not Pythagorean")))
        }
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    /// Same triple with legs in (even, odd) order when one leg is even.
    pub fn canonical(&self) -> Self {
        if self.a % 2 == 1 && self.b.is_multiple_of(2) {
            PythTriple {
                a: self.b,
                b: self.a,
                c: self.c,
            }
        } else {
            *self
        }
    }
}

/// Largest generator accepted, so that `p²` fits in a `u64`.
pub const MAX_GENERATOR: u64 = 1 << 31;

/// Euclid generator: odd, coprime, `p > q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OddPair {
    pub p: u64,
    pub q: u64,
}

impl OddPair {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p <= q {
            return Err(Error::InvalidPair(format!("need p > q >= 1, got p = {p}, q = {q}")));
        }
        if p > MAX_GENERATOR {
            return Err(Error::InvalidPair(format!("p = {p} exceeds {MAX_GENERATOR}")));
        }
        if p.is_multiple_of(2) || q.is_multiple_of(2) || gcd(p, q) != 1 {
            return Err(Error::InvalidPair(format!(
                "p,q must be odd and coprime, got p = {p}, q = {q}"
            )));
        }
        Ok(OddPair { p, q })
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_positive(a: i64, b: i64, c: i64) -> Result<()> {
    if a <= 0 || b <= 0 || c <= 0 {
        return Err(Error::InvalidArgument(format!(
            "triple entries must be positive, got ({a}, {b}, {c})"
        )));
    }
    Ok(())
}

pub fn is_pythagorean(a: i64, b: i64, c: i64) -> Result<bool> {
    check_positive(a, b, c)?;
    let (a, b, c) = (a as i128, b as i128, c as i128);
    Ok(a * a + b * b == c * c)
}

pub fn is_primitive(a: i64, b: i64, c: i64) -> Result<bool> {
    Ok(is_pythagorean(a, b, c)? && gcd(gcd(a as u64, b as u64), c as u64) == 1)
}

/// `((p² - q²)/2, pq, (p² + q²)/2)`.
pub fn euclid_triple(pair: &OddPair) -> PythTriple {
    let OddPair { p, q } = *pair;
    PythTriple {
        a: (p * p - q * q) / 2,
        b: p * q,
        c: (p * p + q * q) / 2,
    }
}

/// Recovers the Euclid pair of a primitive triple given in any leg order.
pub fn pair_from_triple(t: &PythTriple) -> Result<OddPair> {
    if !is_primitive(t.a as i64, t.b as i64, t.c as i64)? {
        return Err(Error::InvalidPair(format!(
            "({}, {}, {}) is not a primitive Pythagorean triple",
            t.a, t.b, t.c
        )));
    }
    let even_leg = t.canonical().a;
    let p = isqrt(t.c + even_leg);
    let q = isqrt(t.c - even_leg);
    let pair = OddPair::new(p, q)?;
    debug_assert_eq!(euclid_triple(&pair), t.canonical());
    Ok(pair)
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All primitive triples with hypotenuse at most `c_max`, sorted by
/// `(c, smaller leg)`, legs in (even, odd) order.
pub fn enumerate_primitive(c_max: u64) -> Vec<PythTriple> {
    if c_max < 5 {
        return Vec::new();
    }
    // c = (p² + q²)/2 > p²/2
    let p_max = isqrt(2 * c_max.min(u64::MAX / 4)).min(MAX_GENERATOR);
    let mut out: Vec<PythTriple> = (1..=p_max)
        .into_par_iter()
        .filter(|p| p % 2 == 1)
        .flat_map_iter(|p| {
            (1..p)
                .step_by(2)
                .filter_map(move |q| OddPair::new(p, q).ok())
                .map(|pair| euclid_triple(&pair))
                .filter(|t| t.c <= c_max)
        })
        .collect();
    out.sort_by_key(|t| (t.c, t.a.min(t.b)));
    out
}

/// Ladder couplings that transfer 1→3 completely at exactly `tau`, with
/// `vL·tau = q·π/2` and `vR·tau = p·π/2`.
///
/// The coupling ratio is `v12 : v23 : v34 = c : b : a` for the Euclid triple
/// of the pair.
pub fn couplings_from_pair(pair: &OddPair, tau: f64) -> Result<(CouplingSet, TransferSolution)> {
    let pair = OddPair::new(pair.p, pair.q)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tau must be positive and finite, got {tau}"
        )));
    }
    let (p, q) = (pair.p as f64, pair.q as f64);
    let unit = FRAC_PI_2 / tau;
    let k = unit * unit;
    let x = HopfCoordinates::new(k * (p * p + q * q), k * 2.0 * p * q, k * (p * p - q * q), 0.0);
    let couplings = ladder_from_hopf(&x, DEFAULT_TOL)?;
    let solution = TransferSolution {
        tau,
        p: pair.p,
        q: pair.q,
        omega: std::f64::consts::PI / tau,
        v_l: q * unit,
        v_r: p * unit,
    };
    Ok((couplings, solution))
}

/// A detected complete-transfer configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferMatch {
    pub triple: PythTriple,
    pub pair: OddPair,
    pub solution: TransferSolution,
}

/// Checks whether the couplings sit on a Pythagorean transfer point.
///
/// Returns `None` when `xi3` fails the tolerance, when the frequency ratio
/// is not odd/odd, when there are no dynamics at all, and when the ratio is
/// 1:1 (the effective three-level chain, which has no triple).
pub fn detect_transfer_condition(c: &CouplingSet, tol: f64) -> Result<Option<TransferMatch>> {
    let solution = match transfer_time(c, tol) {
        Ok(Some(s)) => s,
        Ok(None) | Err(Error::NoDynamics) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (hi, lo) = (solution.p.max(solution.q), solution.p.min(solution.q));
    if hi == lo {
        return Ok(None);
    }
    let pair = OddPair::new(hi, lo)?;
    Ok(Some(TransferMatch {
        triple: euclid_triple(&pair),
        pair,
        solution,
    }))
}
