//! Centers of nested code pairs.
//!
//! Given `C1 ⊆ C2` with `Δ(C2) < Δ(C1)`, every `s ∈ C2 \ C1` is at distance
//! at least `Δ(C2)` from all of `C1`, and on average over such `s` the ball
//! `B(s, Δ(C2))` catches a `A_{Δ(C2)}(C2) / |C2|` fraction of `C1`. We pick
//! the best `s` exhaustively.
//!
//! The ball count of `s` only depends on the coset `s + C1`, so the search
//! scores one representative per nonzero coset and then takes the
//! lexicographically smallest vector inside the winning cosets.

use std::fmt;

use rayon::prelude::*;

use crate::code::{hamming, is_subcode, mds_min_weight_count, weight_distribution_bruteforce, EnumBudget, LinearCode};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterCertificate {
    pub q: u64,
    pub center: Vec<u64>,
    pub radius: usize,
    pub ball_count: u64,
    pub total_c1: u64,
    /// `A_r(C2) / |C2|`.
    pub lower_bound: Rational,
}

impl CenterCertificate {
    pub fn ratio(&self) -> Rational {
        Rational::new(self.ball_count as i128, self.total_c1 as i128)
    }

    pub fn record(&self) -> CertificateRecord {
        CertificateRecord { q: self.q, radius: self.radius, ball_count: self.ball_count, center: self.center.clone() }
    }
}

/// The serialized part of a certificate: `q N radius ball_count` and the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateRecord {
    pub q: u64,
    pub radius: usize,
    pub ball_count: u64,
    pub center: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateViolation {
    CenterInInner { radius: usize },
    InsideBall { index: u64, distance: usize, radius: usize },
    RecountMismatch { claimed: u64, actual: u64 },
    TotalMismatch { claimed: u64, actual: u64 },
    BelowBound { ball_count: u64, total: u64, bound: Rational },
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CenterInInner { radius } => write!(f, "center in C1, distance 0 < radius {radius}"),
            Self::InsideBall { index, distance, radius } => {
                write!(f, "codeword #{index} at distance {distance} < radius {radius}")
            }
            Self::RecountMismatch { claimed, actual } => {
                write!(f, "recount mismatch: claimed {claimed}, counted {actual}")
            }
            Self::TotalMismatch { claimed, actual } => write!(f, "|C1| mismatch: claimed {claimed}, actual {actual}"),
            Self::BelowBound { ball_count, total, bound } => {
                write!(f, "ball ratio {ball_count}/{total} below bound {bound}")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CertificateReport {
    pub violations: Vec<CertificateViolation>,
    pub recount: u64,
    pub min_distance: usize,
}

impl CertificateReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Number of weight-`w` codewords, from the MDS formula when available.
fn count_weight(code: &LinearCode, w: usize, budget: EnumBudget) -> Result<u128> {
    if code.claimed_distance() == Some(w) {
        if let Ok(c) = mds_min_weight_count(code) {
            return Ok(c);
        }
    }
    let dist = weight_distribution_bruteforce(code, budget)?;
    Ok(dist.get(&w).copied().unwrap_or(0) as u128)
}

/// All `q^m` combinations of `rows` in lexicographic order, least significant
/// coefficient first; index 0 is the zero vector.
fn combination(code: &LinearCode, rows: &[Vec<u64>], mut index: u128) -> Vec<u64> {
    let f = code.field();
    let q = f.modulus() as u128;
    let mut out = vec![0u64; code.block_len()];
    for row in rows {
        let coef = (index % q) as u64;
        index /= q;
        if coef != 0 {
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(coef, g));
            }
        }
    }
    out
}

pub fn find_center(inner: &LinearCode, outer: &LinearCode, budget: EnumBudget) -> Result<CenterCertificate> {
    if !is_subcode(inner, outer)? {
        return Err(Error::BadParameters(format!("{inner} is not a subcode of {outer}")));
    }
    if inner.dim() == outer.dim() {
        return Err(Error::NoCandidate);
    }
    let d_inner = inner.distance(budget)?;
    let d_outer = outer.distance(budget)?;
    if d_outer >= d_inner {
        return Err(Error::DistanceOrderViolated { inner: d_inner, outer: d_outer });
    }
    let f = outer.field();
    let c1 = inner.codewords(budget)?;
    let complement = outer.complement_basis(inner);
    let cosets = (f.modulus() as u128)
        .checked_pow(complement.len() as u32)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: budget.0 })?;
    budget.check(cosets)?;

    let radius = d_outer;
    let scored: Vec<(u64, Vec<u64>)> = (1..cosets as u64)
        .into_par_iter()
        .map(|idx| {
            let rep = combination(outer, &complement, idx as u128);
            let mut count = 0u64;
            let mut lexmin: Option<Vec<u64>> = None;
            let mut shifted = vec![0u64; rep.len()];
            for c in &c1 {
                if hamming(&rep, c) == radius {
                    count += 1;
                }
                for ((s, &r), &x) in shifted.iter_mut().zip(&rep).zip(c) {
                    *s = f.add(r, x);
                }
                if lexmin.as_ref().is_none_or(|m| shifted < *m) {
                    lexmin = Some(shifted.clone());
                }
            }
            (count, lexmin.expect("C1 is nonempty"))
        })
        .collect();

    let (ball_count, center) = scored
        .into_iter()
        .reduce(|best, cand| {
            if cand.0 > best.0 || (cand.0 == best.0 && cand.1 < best.1) {
                cand
            } else {
                best
            }
        })
        .expect("at least one nonzero coset");

    let a_r = count_weight(outer, radius, budget)?;
    let c2_size = outer.size().expect("checked above");
    Ok(CenterCertificate {
        q: f.modulus(),
        center,
        radius,
        ball_count,
        total_c1: c1.len() as u64,
        lower_bound: Rational::new(a_r as i128, c2_size as i128),
    })
}

/// Re-derives both center guarantees by enumerating `inner`.
pub fn verify_certificate(cert: &CenterCertificate, inner: &LinearCode, budget: EnumBudget) -> Result<CertificateReport> {
    if cert.center.len() != inner.block_len() {
        return Err(Error::LengthMismatch { expected: inner.block_len(), got: cert.center.len() });
    }
    let mut report = CertificateReport { min_distance: usize::MAX, ..Default::default() };
    if inner.contains(&cert.center)? {
        report.violations.push(CertificateViolation::CenterInInner { radius: cert.radius });
    }
    let mut total = 0u64;
    for (i, c) in inner.enumerate(budget)?.enumerate() {
        total += 1;
        let d = hamming(&cert.center, c.symbols());
        report.min_distance = report.min_distance.min(d);
        if d < cert.radius {
            report.violations.push(CertificateViolation::InsideBall { index: i as u64, distance: d, radius: cert.radius });
        } else if d == cert.radius {
            report.recount += 1;
        }
    }
    if report.recount != cert.ball_count {
        report.violations.push(CertificateViolation::RecountMismatch { claimed: cert.ball_count, actual: report.recount });
    }
    if total != cert.total_c1 {
        report.violations.push(CertificateViolation::TotalMismatch { claimed: cert.total_c1, actual: total });
    }
    if Rational::new(report.recount as i128, total as i128) < cert.lower_bound {
        report.violations.push(CertificateViolation::BelowBound {
            ball_count: report.recount,
            total,
            bound: cert.lower_bound,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::rs_code;
    use crate::field::PrimeField;

    fn rs(q: u64, k: usize) -> LinearCode {
        rs_code(PrimeField::new(q).unwrap(), q as usize, k).unwrap()
    }

    /// Scores every s in C2 \ C1 directly.
    fn brute_force_center(inner: &LinearCode, outer: &LinearCode) -> (u64, Vec<u64>, Vec<u64>) {
        let c1 = inner.codewords(EnumBudget::DEFAULT).unwrap();
        let r = outer.distance(EnumBudget::DEFAULT).unwrap();
        let mut counts = Vec::new();
        let mut best: Option<(u64, Vec<u64>)> = None;
        for s in outer.enumerate(EnumBudget::DEFAULT).unwrap() {
            if inner.contains(s.symbols()).unwrap() {
                continue;
            }
            let count = c1.iter().filter(|c| hamming(s.symbols(), c) <= r).count() as u64;
            counts.push(count);
            let better = match &best {
                None => true,
                Some((bc, bs)) => count > *bc || (count == *bc && s.0 < *bs),
            };
            if better {
                best = Some((count, s.0.clone()));
            }
        }
        let (c, s) = best.unwrap();
        (c, s, counts)
    }

    #[test]
    fn q5_k1_example() {
        let cert = find_center(&rs(5, 1), &rs(5, 2), EnumBudget::DEFAULT).unwrap();
        assert_eq!(cert.radius, 4);
        assert_eq!(cert.ball_count, 5);
        assert_eq!(cert.total_c1, 5);
        assert_eq!(cert.lower_bound, Rational::new(20, 25));
        assert_eq!(cert.center, vec![0, 1, 2, 3, 4]);
        assert!(cert.ratio() >= cert.lower_bound);
    }

    #[test]
    fn q7_k1_example() {
        let cert = find_center(&rs(7, 1), &rs(7, 2), EnumBudget::DEFAULT).unwrap();
        assert_eq!((cert.radius, cert.ball_count, cert.total_c1), (6, 7, 7));
        assert_eq!(cert.lower_bound, Rational::new(42, 49));
    }

    #[test]
    fn equal_codes_have_no_candidate() {
        assert_eq!(find_center(&rs(5, 2), &rs(5, 2), EnumBudget::DEFAULT), Err(Error::NoCandidate));
    }

    #[test]
    fn wrong_nesting_rejected() {
        assert!(matches!(find_center(&rs(5, 2), &rs(5, 1), EnumBudget::DEFAULT), Err(Error::BadParameters(_))));
    }

    #[test]
    fn distance_order_violation() {
        let f = PrimeField::new(3).unwrap();
        // Repetition-style code and a superset with equal distance.
        let inner = LinearCode::from_generator(f, vec![vec![1, 1, 0, 0]]).unwrap();
        let outer = LinearCode::from_generator(f, vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap();
        assert_eq!(
            find_center(&inner, &outer, EnumBudget::DEFAULT),
            Err(Error::DistanceOrderViolated { inner: 2, outer: 2 })
        );
    }

    #[test]
    fn matches_exhaustive_search() {
        for (q, k1, k2) in [(5u64, 1usize, 2usize), (5, 2, 3), (7, 1, 2), (7, 2, 3), (5, 1, 3), (7, 1, 4)] {
            let (inner, outer) = (rs(q, k1), rs(q, k2));
            let cert = find_center(&inner, &outer, EnumBudget::DEFAULT).unwrap();
            let (count, center, counts) = brute_force_center(&inner, &outer);
            assert_eq!(cert.ball_count, count, "q={q} K1={k1} K2={k2}");
            assert_eq!(cert.center, center, "q={q} K1={k1} K2={k2}");
            // averaging argument: mean ball count >= |C1| A_r / |C2|
            let sum: u64 = counts.iter().sum();
            let mean = Rational::new(sum as i128, counts.len() as i128);
            assert!(mean >= cert.lower_bound * Rational::from(cert.total_c1 as i128));
        }
    }

    #[test]
    fn deterministic() {
        let a = find_center(&rs(11, 2), &rs(11, 3), EnumBudget::DEFAULT).unwrap();
        let b = find_center(&rs(11, 2), &rs(11, 3), EnumBudget::DEFAULT).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verify_accepts_and_rejects() {
        let inner = rs(7, 2);
        let cert = find_center(&inner, &rs(7, 3), EnumBudget::DEFAULT).unwrap();
        let report = verify_certificate(&cert, &inner, EnumBudget::DEFAULT).unwrap();
        assert!(report.is_ok(), "{:?}", report.violations);
        assert_eq!(report.min_distance, cert.radius);

        let mut bad = cert.clone();
        bad.center = vec![3; 7];
        let report = verify_certificate(&bad, &inner, EnumBudget::DEFAULT).unwrap();
        let first = &report.violations[0];
        assert_eq!(first, &CertificateViolation::CenterInInner { radius: 5 });
        assert_eq!(first.to_string(), "center in C1, distance 0 < radius 5");
        assert!(report.violations.iter().any(|v| matches!(v, CertificateViolation::InsideBall { distance: 0, .. })));

        let mut inflated = cert.clone();
        inflated.ball_count += 1;
        let report = verify_certificate(&inflated, &inner, EnumBudget::DEFAULT).unwrap();
        assert_eq!(
            report.violations,
            vec![CertificateViolation::RecountMismatch { claimed: cert.ball_count + 1, actual: cert.ball_count }]
        );
    }
}
