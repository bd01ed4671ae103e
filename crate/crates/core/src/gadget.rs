//! Bipartite gadgets realized by Boolean points.
//!
//! All three builders share one shape: take nested Reed-Solomon codes
//! `C1 = RS_q[q, K1] ⊆ C2 = RS_q[q, K2]`, a center `s` of the pair, and set
//! `A = ψ(C1)`, `B = ψ(s + C1)` with an edge wherever the pre-embedding
//! distance equals `Δ(C2)`. Here `ψ` is the one-hot embedding
//! `F_q^N → {0,1}^{qN}`, which doubles Hamming distances and turns agreement
//! counts into inner products.
//!
//! `beta` is always stored post-embedding: `2Δ(C2)` for the distance kinds and
//! the inner product `K2 − 1` for the inner-product kind.

use std::fmt;

use rayon::prelude::*;

use crate::bits::{BitMatrix, BitPoint};
use crate::center::{find_center, CenterCertificate};
use crate::code::{binomial, hamming, rs_code, EnumBudget};
use crate::error::{Error, Result};
use crate::field::{primes, PrimeField};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// Edges at distance exactly `beta`, everything else farther.
    ContactDim,
    /// As `ContactDim`, and same-side pairs beyond `(1 + mu)·beta`.
    GapContactDim,
    /// Edges at inner product `beta`, cross non-edges below, same-side below `beta/3`.
    GapInnerProduct,
}

impl GadgetKind {
    pub fn token(&self) -> &'static str {
        match self {
            GadgetKind::ContactDim => "cd",
            GadgetKind::GapContactDim => "gap-cd",
            GadgetKind::GapInnerProduct => "ip",
        }
    }

    pub fn from_token(s: &str) -> Option<GadgetKind> {
        match s {
            "cd" => Some(GadgetKind::ContactDim),
            "gap-cd" => Some(GadgetKind::GapContactDim),
            "ip" => Some(GadgetKind::GapInnerProduct),
            _ => None,
        }
    }

    pub fn is_distance(&self) -> bool {
        !matches!(self, GadgetKind::GapInnerProduct)
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGadget {
    pub kind: GadgetKind,
    pub q: u64,
    pub k1: usize,
    pub k2: usize,
    pub side_a: Vec<BitPoint>,
    pub side_b: Vec<BitPoint>,
    pub adjacency: BitMatrix,
    pub beta: u64,
    pub mu: Rational,
}

/// A freshly built gadget together with the center it was built from.
#[derive(Clone, Debug)]
pub struct GadgetBuild {
    pub gadget: BipartiteGadget,
    pub certificate: CenterCertificate,
}

impl BipartiteGadget {
    pub fn n(&self) -> usize {
        self.side_a.len()
    }

    pub fn dim(&self) -> usize {
        self.side_a.first().map_or(0, BitPoint::len)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.count_ones()
    }

    /// Lower bound on `|E|` implied by the center guarantee for this kind.
    pub fn density_floor(&self) -> Rational {
        density_floor(self.kind, self.q, self.k1, self.k2, self.n())
    }
}

pub fn density_floor(kind: GadgetKind, q: u64, k1: usize, k2: usize, n: usize) -> Rational {
    let n2 = (n as i128) * (n as i128);
    let q = q as i128;
    match kind {
        // n^2 (q-1)/q * K1^-K1
        GadgetKind::ContactDim => match (k1 as i128).checked_pow(k1 as u32).and_then(|p| p.checked_mul(q)) {
            Some(den) => Rational::new(n2 * (q - 1), den),
            None => Rational::from(0),
        },
        // n^2 (q-1)/q * (3K1)^-3K1
        GadgetKind::GapInnerProduct => {
            let m = 3 * k1 as i128;
            match m.checked_pow(m as u32).and_then(|p| p.checked_mul(q)) {
                Some(den) => Rational::new(n2 * (q - 1), den),
                None => Rational::from(0),
            }
        }
        // n^2 C(q, K2-1)(q-1)/q^K2
        GadgetKind::GapContactDim => match q.checked_pow(k2 as u32) {
            Some(den) => Rational::new(n2 * binomial(q as u64, k2 as u64 - 1) as i128 * (q - 1), den),
            None => Rational::from(0),
        },
    }
}

/// One-hot embedding: coordinate value `j` becomes the `j`-th unit vector of length `q`.
pub fn simplex_embed(v: &[u64], q: u64) -> BitPoint {
    let q = q as usize;
    let mut p = BitPoint::zeros(q * v.len());
    for (i, &x) in v.iter().enumerate() {
        assert!((x as usize) < q, "symbol {x} outside alphabet of size {q}");
        p.set(i * q + x as usize, true);
    }
    p
}

fn build_from_pair(kind: GadgetKind, q: u64, k1: usize, k2: usize, budget: EnumBudget) -> Result<GadgetBuild> {
    let field = PrimeField::new(q)?;
    let n_code = q as usize;
    let inner = rs_code(field, n_code, k1)?;
    let outer = rs_code(field, n_code, k2)?;
    let certificate = find_center(&inner, &outer, budget)?;
    let c1 = inner.codewords(budget)?;
    let shifted: Vec<Vec<u64>> = c1
        .iter()
        .map(|c| c.iter().zip(&certificate.center).map(|(&x, &s)| field.add(x, s)).collect())
        .collect();
    let radius = certificate.radius;
    let n = c1.len();
    let rows: Vec<BitPoint> = c1
        .par_iter()
        .map(|a| BitPoint::from_bools(shifted.iter().map(|b| hamming(a, b) == radius)))
        .collect();
    let adjacency = BitMatrix::from_rows(rows)?;
    debug_assert_eq!(adjacency.n_rows(), n);

    let d_inner = q as i128 - k1 as i128 + 1;
    let d_outer = radius as i128;
    let (beta, mu) = match kind {
        GadgetKind::ContactDim => (2 * radius as u64, Rational::from(0)),
        GadgetKind::GapInnerProduct => (k2 as u64 - 1, Rational::from(0)),
        GadgetKind::GapContactDim => (2 * radius as u64, Rational::new(d_inner - 1, d_outer) - 1),
    };
    let gadget = BipartiteGadget {
        kind,
        q,
        k1,
        k2,
        side_a: c1.iter().map(|v| simplex_embed(v, q)).collect(),
        side_b: shifted.iter().map(|v| simplex_embed(v, q)).collect(),
        adjacency,
        beta,
        mu,
    };
    Ok(GadgetBuild { gadget, certificate })
}

/// Contact-dimension gadget from `RS_q[q, K1] ⊆ RS_q[q, K1 + 1]`.
pub fn build_cd_gadget(q: u64, k1: usize, budget: EnumBudget) -> Result<GadgetBuild> {
    PrimeField::new(q)?;
    if k1 == 0 || k1 + 1 > q as usize {
        return Err(Error::BadParameters(format!("cd gadget needs 1 <= K1 and K1 + 1 <= q (q={q}, K1={k1})")));
    }
    build_from_pair(GadgetKind::ContactDim, q, k1, k1 + 1, budget)
}

/// 3-gap inner-product gadget from `RS_q[q, K1] ⊆ RS_q[q, 3K1 + 1]`.
pub fn build_ip_gadget(q: u64, k1: usize, budget: EnumBudget) -> Result<GadgetBuild> {
    PrimeField::new(q)?;
    if k1 == 0 || 3 * k1 + 1 > q as usize {
        return Err(Error::BadParameters(format!("ip gadget needs 1 <= K1 and 3K1 + 1 <= q (q={q}, K1={k1})")));
    }
    build_from_pair(GadgetKind::GapInnerProduct, q, k1, 3 * k1 + 1, budget)
}

/// Gap contact-dimension gadget from an arbitrary nested RS pair.
pub fn build_gap_cd_gadget(q: u64, k1: usize, k2: usize, budget: EnumBudget) -> Result<GadgetBuild> {
    PrimeField::new(q)?;
    if k2 <= k1 {
        return Err(Error::GapNonpositive { k1, k2 });
    }
    if k1 == 0 || k2 > q as usize {
        return Err(Error::BadParameters(format!("gap gadget needs 1 <= K1 < K2 <= q (q={q}, K1={k1}, K2={k2})")));
    }
    build_from_pair(GadgetKind::GapContactDim, q, k1, k2, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GadgetViolation {
    EdgeNotAtBeta { a: usize, b: usize, value: usize },
    CrossNonEdge { a: usize, b: usize, value: usize },
    SameSide { side: Side, i: usize, j: usize, value: usize },
    DensityFloor { edge_count: usize, floor: Rational },
    Shape(String),
}

impl fmt::Display for GadgetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EdgeNotAtBeta { a, b, value } => write!(f, "edge ({a},{b}) at {value} ≠ beta"),
            Self::CrossNonEdge { a, b, value } => write!(f, "non-edge ({a},{b}) at {value} does not separate from beta"),
            Self::SameSide { side, i, j, value } => write!(f, "same-side pair {side:?}({i},{j}) at {value} too close"),
            Self::DensityFloor { edge_count, floor } => write!(f, "edge count {edge_count} below density floor {floor}"),
            Self::Shape(msg) => write!(f, "shape: {msg}"),
        }
    }
}

/// Exhaustive check of a gadget against its kind's definition.
///
/// For the distance kinds the measured extremes are Hamming distances; for
/// the inner-product kind they are inner products (`cross_extreme` and
/// `same_side_extreme` are then maxima instead of minima).
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetReport {
    pub violations: Vec<GadgetViolation>,
    pub violation_count: usize,
    pub edge_count: usize,
    pub edge_min: Option<usize>,
    pub edge_max: Option<usize>,
    pub cross_extreme: Option<usize>,
    pub same_side_extreme: Option<usize>,
    pub density_floor: Rational,
    pub density_ok: bool,
}

impl GadgetReport {
    pub fn is_ok(&self) -> bool {
        self.violation_count == 0
    }
}

/// Upper bound on `n² · dim` bit comparisons in [`verify_gadget`].
pub const DEFAULT_VERIFY_BUDGET: u128 = 1 << 36;

/// Violations kept in a report; the total is always in `violation_count`.
const MAX_REPORTED: usize = 10_000;

pub fn verify_gadget(g: &BipartiteGadget, budget: u128) -> Result<GadgetReport> {
    let n = g.n();
    let dim = g.dim();
    let work = (n as u128) * (n as u128) * (dim.max(1) as u128);
    if work > budget {
        return Err(Error::BudgetExceeded { needed: work, budget: budget.min(u64::MAX as u128) as u64 });
    }
    let mut shape = Vec::new();
    if g.side_b.len() != n || g.adjacency.n_rows() != n || g.adjacency.n_cols() != n {
        shape.push(GadgetViolation::Shape(format!(
            "sides {}/{}, adjacency {}x{}",
            n,
            g.side_b.len(),
            g.adjacency.n_rows(),
            g.adjacency.n_cols()
        )));
    }
    if g.side_a.iter().chain(&g.side_b).any(|p| p.len() != dim) {
        shape.push(GadgetViolation::Shape("points of unequal dimension".into()));
    }
    if !shape.is_empty() {
        let count = shape.len();
        return Ok(GadgetReport {
            violations: shape,
            violation_count: count,
            edge_count: 0,
            edge_min: None,
            edge_max: None,
            cross_extreme: None,
            same_side_extreme: None,
            density_floor: g.density_floor(),
            density_ok: false,
        });
    }

    let distance_kind = g.kind.is_distance();
    let beta = g.beta as usize;
    let metric = |x: &BitPoint, y: &BitPoint| if distance_kind { x.hamming(y) } else { x.inner(y) };
    // cross non-edge is fine iff strictly on the far side of beta
    let cross_ok = |v: usize| if distance_kind { v > beta } else { v < beta };
    let (mu_num, mu_den) = (*g.mu.numer(), *g.mu.denom());
    let same_ok = |v: usize| match g.kind {
        GadgetKind::ContactDim => v > beta,
        GadgetKind::GapContactDim => (v as i128) * mu_den > (mu_den + mu_num) * beta as i128,
        GadgetKind::GapInnerProduct => 3 * v < beta,
    };

    #[derive(Default)]
    struct RowStats {
        violations: Vec<GadgetViolation>,
        edges: usize,
        edge_min: Option<usize>,
        edge_max: Option<usize>,
        cross: Option<usize>,
        same: Option<usize>,
    }
    let better_cross = |cur: Option<usize>, v: usize| {
        Some(match cur {
            None => v,
            Some(c) if distance_kind => c.min(v),
            Some(c) => c.max(v),
        })
    };

    let rows: Vec<RowStats> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut st = RowStats::default();
            let a = &g.side_a[i];
            for (j, b) in g.side_b.iter().enumerate() {
                let v = metric(a, b);
                if g.adjacency.get(i, j) {
                    st.edges += 1;
                    st.edge_min = Some(st.edge_min.map_or(v, |m| m.min(v)));
                    st.edge_max = Some(st.edge_max.map_or(v, |m| m.max(v)));
                    if v != beta {
                        st.violations.push(GadgetViolation::EdgeNotAtBeta { a: i, b: j, value: v });
                    }
                } else {
                    st.cross = better_cross(st.cross, v);
                    if !cross_ok(v) {
                        st.violations.push(GadgetViolation::CrossNonEdge { a: i, b: j, value: v });
                    }
                }
            }
            for (side, pts) in [(Side::A, &g.side_a), (Side::B, &g.side_b)] {
                for j in i + 1..n {
                    let v = metric(&pts[i], &pts[j]);
                    st.same = better_cross(st.same, v);
                    if !same_ok(v) {
                        st.violations.push(GadgetViolation::SameSide { side, i, j, value: v });
                    }
                }
            }
            st
        })
        .collect();

    let mut violations = Vec::new();
    let mut violation_count = 0;
    let (mut edge_count, mut edge_min, mut edge_max, mut cross, mut same) = (0, None, None, None, None);
    let merge_min = |x: Option<usize>, y: Option<usize>| match (x, y) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let merge_max = |x: Option<usize>, y: Option<usize>| match (x, y) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    for st in rows {
        edge_count += st.edges;
        edge_min = merge_min(edge_min, st.edge_min);
        edge_max = merge_max(edge_max, st.edge_max);
        if distance_kind {
            cross = merge_min(cross, st.cross);
            same = merge_min(same, st.same);
        } else {
            cross = merge_max(cross, st.cross);
            same = merge_max(same, st.same);
        }
        violation_count += st.violations.len();
        for v in st.violations {
            if violations.len() < MAX_REPORTED {
                violations.push(v);
            }
        }
    }
    let density_floor = g.density_floor();
    let density_ok = Rational::from(edge_count as i128) >= density_floor;
    if !density_ok {
        violation_count += 1;
        violations.push(GadgetViolation::DensityFloor { edge_count, floor: density_floor });
    }
    Ok(GadgetReport {
        violations,
        violation_count,
        edge_count,
        edge_min,
        edge_max,
        cross_extreme: cross,
        same_side_extreme: same,
        density_floor,
        density_ok,
    })
}

/// A gadget that passed [`verify_gadget`]; reductions only accept these.
#[derive(Clone, Debug)]
pub struct VerifiedGadget {
    gadget: BipartiteGadget,
    report: GadgetReport,
}

impl VerifiedGadget {
    pub fn new(gadget: BipartiteGadget, budget: u128) -> Result<VerifiedGadget> {
        let report = verify_gadget(&gadget, budget)?;
        if !report.is_ok() {
            return Err(Error::GadgetUnverified(report.violation_count));
        }
        Ok(VerifiedGadget { gadget, report })
    }

    pub fn gadget(&self) -> &BipartiteGadget {
        &self.gadget
    }

    pub fn report(&self) -> &GadgetReport {
        &self.report
    }

    pub fn into_inner(self) -> BipartiteGadget {
        self.gadget
    }
}

impl std::ops::Deref for VerifiedGadget {
    type Target = BipartiteGadget;

    fn deref(&self) -> &BipartiteGadget {
        &self.gadget
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDenseMember {
    pub index: usize,
    pub q: u64,
    pub k1: usize,
    pub n: u128,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogDenseSequence {
    pub members: Vec<LogDenseMember>,
    /// `max log n_{i+1} / log n_i` over consecutive returned members.
    pub log_density: Option<f64>,
}

/// The sequence `n_i = q_i^⌊q_i^δ⌋` over primes `q_i`, truncated at `max_n`.
pub fn log_dense_params(delta: f64, max_n: u128) -> Result<LogDenseSequence> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadParameters(format!("delta = {delta} outside (0, 1)")));
    }
    let mut members = Vec::new();
    for (i, q) in primes().enumerate() {
        let k1 = floor_pow(q, delta);
        let n = (q as u128).checked_pow(k1 as u32);
        match n {
            Some(n) if n <= max_n => members.push(LogDenseMember { index: i + 1, q, k1, n }),
            _ => break,
        }
    }
    let log_density = members
        .windows(2)
        .filter(|w| w[0].n > 1)
        .map(|w| (w[1].n as f64).ln() / (w[0].n as f64).ln())
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    Ok(LogDenseSequence { members, log_density })
}

/// `⌊q^δ⌋`, corrected against rounding in `powf`.
fn floor_pow(q: u64, delta: f64) -> usize {
    let mut k = (q as f64).powf(delta).floor() as usize;
    let q = q as f64;
    while k > 0 && (k as f64).powf(1.0 / delta) > q * (1.0 + 1e-12) {
        k -= 1;
    }
    while ((k + 1) as f64).powf(1.0 / delta) <= q * (1.0 - 1e-12) {
        k += 1;
    }
    k
}
