//! Reductions: OV → BCP, the gadget-driven grid reductions BCP → CP,
//! BMIP → MIP and BCP → gap-CP, tensor amplification, and Hamming → edit CP.
//!
//! A grid reduction splits both sides into blocks of the gadget size `n'` and,
//! for every block pair `(i, j)` and cover permutation `t`, labels the block
//! points with the permuted realization `τ_t` and emits the point set
//!
//! ```text
//! { (1_{r_left} ⊗ p) ∘ (1_{r_right} ⊗ τ_t(p)) : p ∈ A_i ∪ B_j }
//! ```
//!
//! Points left over when `n'` does not divide `n` are brute-forced against the
//! whole opposite side.

use rayon::prelude::*;

use crate::bits::BitPoint;
use crate::cover::PermutationCover;
use crate::editembed::{zeta, LambdaFit, SubstitutionCode};
use crate::error::{Error, Result};
use crate::gadget::{GadgetKind, VerifiedGadget};
use crate::solver::{self, classify, Gap, Instance, InstanceKind, PointSet, Verdict};
use crate::Rational;

const T_A: [&str; 2] = ["11000", "00110"];
const T_B: [&str; 2] = ["10100", "01001"];

/// Coordinate-wise substitution by the 5-bit tables; `alpha = 2d`.
pub fn ov_to_bcp(a: &PointSet, b: &PointSet) -> Result<Instance> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch(a.d(), b.d()));
    }
    let tables = |t: [&str; 2]| t.map(|s| BitPoint::parse(s).expect("static table"));
    let (ta, tb) = (tables(T_A), tables(T_B));
    let map = |set: &PointSet, t: &[BitPoint; 2]| -> Result<PointSet> {
        PointSet::new(
            set.points()
                .iter()
                .map(|p| {
                    let mut out = BitPoint::with_capacity(5 * p.len());
                    for bit in p.iter() {
                        out.extend(&t[bit as usize]);
                    }
                    out
                })
                .collect(),
        )
    };
    Instance::pair(InstanceKind::Bcp, map(a, &ta)?, map(b, &tb)?, Some(2 * a.d() as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    /// `p ∘ (1_{d+1} ⊗ τ)`, `α' = α + (d+1)β`.
    Cp,
    /// `(1_β ⊗ p) ∘ (1_{3d} ⊗ τ)`, `α' = βα + 3dβ`.
    Mip,
    /// `(1_{r1} ⊗ p) ∘ (1_{r2} ⊗ τ)`, `α' = r1·α + r2·β`.
    GapCp { r1: usize, r2: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub n: usize,
    pub n_prime: usize,
    pub cover_k: usize,
    pub sub_instances_emitted: usize,
    pub dimension_out: usize,
    pub alpha_out: u64,
    /// Cross pairs checked directly because `n'` does not divide `n`.
    pub remainder_pairs: usize,
    pub gadget: (GadgetKind, u64, usize, usize),
}

/// Lazily materialized stream of sub-instances in canonical `(i, j, t)` order.
pub struct GridReduction<'a> {
    kind: GridKind,
    a: &'a PointSet,
    b: &'a PointSet,
    alpha: u64,
    alpha_out: u64,
    n_prime: usize,
    blocks: usize,
    /// `lifted_tau[t][0|1][x]`: repeated realization at position `x` of side A/B.
    lifted_tau: Vec<[Vec<BitPoint>; 2]>,
    r_left: usize,
    trace: ReductionTrace,
}

impl<'a> GridReduction<'a> {
    fn new(
        kind: GridKind,
        a: &'a PointSet,
        b: &'a PointSet,
        alpha: u64,
        gadget: &VerifiedGadget,
        cover: &PermutationCover,
    ) -> Result<Self> {
        if a.d() != b.d() {
            return Err(Error::DimensionMismatch(a.d(), b.d()));
        }
        if a.n() != b.n() {
            return Err(Error::ShapeMismatch(format!("sides of {} and {} points", a.n(), b.n())));
        }
        let allowed = match kind {
            GridKind::Cp => matches!(gadget.kind, GadgetKind::ContactDim | GadgetKind::GapContactDim),
            GridKind::Mip => gadget.kind == GadgetKind::GapInnerProduct,
            GridKind::GapCp { .. } => gadget.kind == GadgetKind::GapContactDim,
        };
        if !allowed {
            return Err(Error::ShapeMismatch(format!("gadget kind {} does not fit this reduction", gadget.kind)));
        }
        if cover.source != gadget.adjacency {
            return Err(Error::ShapeMismatch("cover was not computed for this gadget".into()));
        }
        let d = a.d();
        let beta = gadget.beta;
        let (r_left, r_right, alpha_out) = match kind {
            GridKind::Cp => {
                if alpha > d as u64 {
                    return Err(Error::BadParameters(format!("alpha = {alpha} exceeds dimension {d}")));
                }
                (1, d + 1, alpha + (d as u64 + 1) * beta)
            }
            GridKind::Mip => (beta as usize, 3 * d, beta * alpha + 3 * d as u64 * beta),
            GridKind::GapCp { r1, r2 } => (r1, r2, r1 as u64 * alpha + r2 as u64 * beta),
        };
        let n_prime = gadget.n();
        let lifted_tau = cover
            .perms
            .iter()
            .map(|p| {
                let (inv_a, inv_b) = (p.inverse_a(), p.inverse_b());
                [
                    inv_a.iter().map(|&g| gadget.side_a[g].repeat(r_right)).collect(),
                    inv_b.iter().map(|&g| gadget.side_b[g].repeat(r_right)).collect(),
                ]
            })
            .collect();
        let blocks = a.n() / n_prime;
        let leftover = a.n() - blocks * n_prime;
        let trace = ReductionTrace {
            n: a.n(),
            n_prime,
            cover_k: cover.k(),
            sub_instances_emitted: blocks * blocks * cover.k(),
            dimension_out: r_left * d + r_right * gadget.dim(),
            alpha_out,
            remainder_pairs: 2 * leftover * a.n() - leftover * leftover,
            gadget: (gadget.kind, gadget.q, gadget.k1, gadget.k2),
        };
        Ok(GridReduction { kind, a, b, alpha, alpha_out, n_prime, blocks, lifted_tau, r_left, trace })
    }

    pub fn trace(&self) -> &ReductionTrace {
        &self.trace
    }

    pub fn alpha_out(&self) -> u64 {
        self.alpha_out
    }

    pub fn len(&self) -> usize {
        self.trace.sub_instances_emitted
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(i, j, t)` of the `idx`-th sub-instance.
    pub fn index(&self, idx: usize) -> (usize, usize, usize) {
        let k = self.lifted_tau.len();
        (idx / (self.blocks * k), (idx / k) % self.blocks, idx % k)
    }

    pub fn sub_instance(&self, i: usize, j: usize, t: usize) -> Instance {
        let np = self.n_prime;
        let lift = |p: &BitPoint, tau: &BitPoint| {
            let mut out = p.repeat(self.r_left);
            out.extend(tau);
            out
        };
        let taus = &self.lifted_tau[t];
        let points = (0..np)
            .map(|x| lift(&self.a.points()[i * np + x], &taus[0][x]))
            .chain((0..np).map(|y| lift(&self.b.points()[j * np + y], &taus[1][y])))
            .collect();
        let kind = if self.kind == GridKind::Mip { InstanceKind::Mip } else { InstanceKind::Cp };
        Instance::single(kind, PointSet::new(points).expect("uniform lifted dimension"), self.alpha_out)
            .expect("single-set instance")
    }

    pub fn iter(&self) -> impl Iterator<Item = Instance> + '_ {
        (0..self.len()).map(|idx| {
            let (i, j, t) = self.index(idx);
            self.sub_instance(i, j, t)
        })
    }

    /// Cross pairs involving a leftover point, in `(a, b)` order.
    fn remainder_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cut = self.blocks * self.n_prime;
        let n = self.a.n();
        (0..n).flat_map(move |i| {
            let cols: Box<dyn Iterator<Item = usize>> = if i >= cut { Box::new(0..n) } else { Box::new(cut..n) };
            cols.map(move |j| (i, j))
        })
    }

    /// First remainder pair meeting `alpha` in the source problem.
    fn remainder_yes(&self) -> Option<(usize, usize)> {
        let (a, b) = (self.a.points(), self.b.points());
        self.remainder_pairs().find(|&(i, j)| match self.kind {
            GridKind::Mip => a[i].inner(&b[j]) as u64 >= self.alpha,
            _ => a[i].hamming(&b[j]) as u64 <= self.alpha,
        })
    }
}

pub fn bcp_to_cp_stream<'a>(
    a: &'a PointSet,
    b: &'a PointSet,
    alpha: u64,
    gadget: &VerifiedGadget,
    cover: &PermutationCover,
) -> Result<GridReduction<'a>> {
    GridReduction::new(GridKind::Cp, a, b, alpha, gadget, cover)
}

pub fn bmip_to_mip_stream<'a>(
    a: &'a PointSet,
    b: &'a PointSet,
    alpha: u64,
    gadget: &VerifiedGadget,
    cover: &PermutationCover,
) -> Result<GridReduction<'a>> {
    GridReduction::new(GridKind::Mip, a, b, alpha, gadget, cover)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapParams {
    pub kappa: Rational,
    pub theta: Rational,
    pub r1: usize,
    pub r2: usize,
}

pub fn bcp_to_gapcp_stream<'a>(
    a: &'a PointSet,
    b: &'a PointSet,
    alpha: u64,
    gadget: &VerifiedGadget,
    cover: &PermutationCover,
    kappa: Rational,
    theta: Rational,
) -> Result<(GridReduction<'a>, GapParams)> {
    let (r1, r2) = pick_repetitions(alpha, gadget.beta, kappa, gadget.mu, theta)?;
    let grid = GridReduction::new(GridKind::GapCp { r1, r2 }, a, b, alpha, gadget, cover)?;
    Ok((grid, GapParams { kappa, theta, r1, r2 }))
}

/// Where a YES answer was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YesSource {
    SubInstance { i: usize, j: usize, t: usize },
    Remainder { a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DriverOutcome {
    pub verdict: Verdict,
    pub source: Option<YesSource>,
    pub trace: ReductionTrace,
}

/// A decision procedure for the emitted sub-instances.
pub type Oracle<'o> = &'o (dyn Fn(&Instance) -> Result<Verdict> + Sync);

/// Exact brute-force decision.
pub fn brute_oracle(inst: &Instance) -> Result<Verdict> {
    solver::decide(inst)
}

fn drive(grid: &GridReduction<'_>, oracle: Oracle<'_>) -> Result<DriverOutcome> {
    let hit = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j, t) = grid.index(idx);
            oracle(&grid.sub_instance(i, j, t)).map(|v| (v == Verdict::Yes).then_some((i, j, t)))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    let source = match hit {
        Some(Err(e)) => return Err(e),
        Some(Ok(Some((i, j, t)))) => Some(YesSource::SubInstance { i, j, t }),
        _ => grid.remainder_yes().map(|(a, b)| YesSource::Remainder { a, b }),
    };
    let verdict = if source.is_some() { Verdict::Yes } else { Verdict::No };
    Ok(DriverOutcome { verdict, source, trace: grid.trace().clone() })
}

pub fn run_bcp_via_cp(
    a: &PointSet,
    b: &PointSet,
    alpha: u64,
    gadget: &VerifiedGadget,
    cover: &PermutationCover,
    oracle: Oracle<'_>,
) -> Result<DriverOutcome> {
    drive(&bcp_to_cp_stream(a, b, alpha, gadget, cover)?, oracle)
}

/// Exact BMIP decision through MIP sub-instances.
pub fn run_bmip_via_mip(
    a: &PointSet,
    b: &PointSet,
    alpha: u64,
    gadget: &VerifiedGadget,
    cover: &PermutationCover,
    oracle: Oracle<'_>,
) -> Result<DriverOutcome> {
    drive(&bmip_to_mip_stream(a, b, alpha, gadget, cover)?, oracle)
}

/// `(1+κ)`-BCP through `(1+θ)`-CP sub-instances.
pub fn run_bcp_via_gapcp(
    a: &PointSet,
    b: &PointSet,
    alpha: u64,
    gadget: &VerifiedGadget,
    cover: &PermutationCover,
    kappa: Rational,
    theta: Rational,
    oracle: Oracle<'_>,
) -> Result<(DriverOutcome, GapParams)> {
    let (grid, params) = bcp_to_gapcp_stream(a, b, alpha, gadget, cover, kappa, theta)?;
    Ok((drive(&grid, oracle)?, params))
}

/// The brute-force `(1+θ)`-CP decision used as the gap oracle.
pub fn gap_cp_oracle(theta: Rational) -> impl Fn(&Instance) -> Result<Verdict> + Sync {
    move |inst| solver::decide_gap(inst, Gap::Factor(Rational::from(1) + theta))
}

/// `max(1, ⌊log2 log2 n'⌋)`, the concrete stand-in for `log log n'`.
pub fn loglog_floor(n_prime: usize) -> u64 {
    if n_prime < 4 {
        return 1;
    }
    let log = usize::BITS - 1 - n_prime.leading_zeros(); // ⌊log2 n'⌋
    let loglog = u32::BITS - 1 - log.leading_zeros();
    // ⌊log2 log2 n⌋ = ⌊log2 ⌊log2 n⌋⌋
    u64::from(loglog).max(1)
}

/// `(1 + 1/L)`-MIP decision with `L = loglog_floor(n')`.
pub fn gap_mip_verdict(value: u64, alpha_out: u64, n_prime: usize) -> Verdict {
    let l = loglog_floor(n_prime) as i128;
    classify(InstanceKind::Mip, value, alpha_out, Gap::Factor(Rational::new(l + 1, l)))
}

pub const MAX_REPETITION: usize = 10_000;

/// Smallest `r2`, then smallest `r1`, with
/// `θ/(κ−θ)·β/α ≤ r1/r2 ≤ (μ−θ)/(1+θ)·β/α`.
pub fn pick_repetitions(alpha: u64, beta: u64, kappa: Rational, mu: Rational, theta: Rational) -> Result<(usize, usize)> {
    pick_repetitions_bounded(alpha, beta, kappa, mu, theta, MAX_REPETITION)
}

pub fn repetition_window(alpha: u64, beta: u64, kappa: Rational, mu: Rational, theta: Rational) -> Result<(Rational, Rational)> {
    let zero = Rational::from(0);
    if alpha == 0 || beta == 0 {
        return Err(Error::EmptyWindow("alpha and beta must be positive".into()));
    }
    if theta <= zero {
        return Err(Error::EmptyWindow(format!("theta = {theta} must be positive")));
    }
    if theta >= kappa {
        return Err(Error::EmptyWindow(format!("theta = {theta} is not below kappa = {kappa}")));
    }
    let scale = Rational::new(beta as i128, alpha as i128);
    let lo = theta / (kappa - theta) * scale;
    let hi = (mu - theta) / (Rational::from(1) + theta) * scale;
    if hi < lo {
        return Err(Error::EmptyWindow(format!("upper bound {hi} below lower bound {lo}")));
    }
    Ok((lo, hi))
}

pub fn pick_repetitions_bounded(
    alpha: u64,
    beta: u64,
    kappa: Rational,
    mu: Rational,
    theta: Rational,
    max_r: usize,
) -> Result<(usize, usize)> {
    let (lo, hi) = repetition_window(alpha, beta, kappa, mu, theta)?;
    for r2 in 1..=max_r {
        let r2q = Rational::from(r2 as i128);
        let r1 = (lo * r2q).ceil().to_integer().max(1);
        if Rational::from(r1) <= hi * r2q && r1 as usize <= max_r {
            return Ok((r1 as usize, r2));
        }
    }
    Err(Error::EmptyWindow(format!("no r1/r2 in [{lo}, {hi}] with r1, r2 <= {max_r}")))
}

/// `x^{⊗t}` with coordinates in lexicographic (big-endian) index order.
pub fn tensor_power(x: &BitPoint, t: usize) -> BitPoint {
    assert!(t >= 1, "tensor power needs t >= 1");
    let mut acc = x.clone();
    let zeros = BitPoint::zeros(x.len());
    for _ in 1..t {
        let mut next = BitPoint::with_capacity(acc.len() * x.len());
        for bit in acc.iter() {
            next.extend(if bit { x } else { &zeros });
        }
        acc = next;
    }
    acc
}

pub fn tensor_amplify(p: &PointSet, alpha: u64, t: usize, budget: u64) -> Result<Instance> {
    if t == 0 {
        return Err(Error::BadParameters("tensor power needs t >= 1".into()));
    }
    let dim = (p.d() as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
    if dim > budget as u128 {
        return Err(Error::BudgetExceeded { needed: dim, budget });
    }
    let alpha_out = alpha
        .checked_pow(t as u32)
        .ok_or_else(|| Error::BadParameters(format!("alpha^{t} overflows")))?;
    let points = p.points().par_iter().map(|x| tensor_power(x, t)).collect();
    Instance::single(InstanceKind::Mip, PointSet::new(points)?, alpha_out)
}

/// Edit-distance instance with the fitted scale reported alongside.
#[derive(Clone, Debug)]
pub struct EditReduction {
    pub instance: Instance,
    pub slope: Rational,
    pub lambda_hat: f64,
    pub max_residual: Rational,
}

/// `ζ` applied to every point; `alpha_edit = round(slope · alpha)`.
pub fn hamming_cp_to_edit_cp(p: &PointSet, alpha: u64, code: &SubstitutionCode, fit: &LambdaFit) -> Result<EditReduction> {
    let points = p.points().par_iter().map(|x| zeta(code, x)).collect::<Result<Vec<_>>>()?;
    let alpha_edit = (fit.slope * Rational::from(alpha as i128)).round().to_integer();
    Ok(EditReduction {
        instance: Instance::single(InstanceKind::EditCp, PointSet::new(points)?, alpha_edit.max(0) as u64)?,
        slope: fit.slope,
        lambda_hat: fit.lambda_hat,
        max_residual: fit.max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::EnumBudget;
    use crate::cover::cover_biclique;
    use crate::gadget::{build_cd_gadget, build_gap_cd_gadget, build_ip_gadget, DEFAULT_VERIFY_BUDGET};
    use crate::solver::{solve_bcp, solve_cp, solve_mip, Metric};

    fn ps(rows: &[&str]) -> PointSet {
        PointSet::parse_rows(rows).unwrap()
    }

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn ov_tables() {
        let i = ov_to_bcp(&ps(&["1"]), &ps(&["0"])).unwrap();
        assert_eq!(i.sets[0].points()[0].to_string(), "00110");
        assert_eq!(i.sets[1].points()[0].to_string(), "10100");
        assert_eq!((i.alpha, solve_bcp(&i.sets[0], &i.sets[1]).unwrap().value), (Some(2), 2));
        let i = ov_to_bcp(&ps(&["1"]), &ps(&["1"])).unwrap();
        assert_eq!(solve_bcp(&i.sets[0], &i.sets[1]).unwrap().value, 4);
        let i = ov_to_bcp(&ps(&["10"]), &ps(&["01"])).unwrap();
        assert_eq!((i.d(), solve_bcp(&i.sets[0], &i.sets[1]).unwrap().value), (10, 4));
    }

    #[test]
    fn window_examples() {
        let (k, m, t) = (r(1, 2), r(1, 4), r(1, 20));
        let (lo, hi) = repetition_window(8, 8, k, m, t).unwrap();
        assert_eq!((lo, hi), (r(1, 9), r(4, 21)));
        assert_eq!(pick_repetitions(8, 8, k, m, t).unwrap(), (1, 6));
        // 1/9 sits exactly on the lower boundary
        assert!(lo <= r(1, 9) && r(1, 9) <= hi);
        assert_eq!(pick_repetitions(8, 16, k, m, t).unwrap(), (1, 3));
        assert!(matches!(pick_repetitions(8, 8, k, m, r(1, 2)), Err(Error::EmptyWindow(_))));
        assert!(matches!(pick_repetitions(8, 8, k, Rational::from(0), t), Err(Error::EmptyWindow(_))));
    }

    #[test]
    fn tensor_examples() {
        let p = |s| BitPoint::parse(s).unwrap();
        let (x, y) = (p("110"), p("101"));
        assert_eq!(tensor_power(&x, 2).inner(&tensor_power(&y, 2)), 1);
        assert_eq!(tensor_power(&x, 1), x);
        let z = p("11");
        assert_eq!(tensor_power(&z, 3).len(), 8);
        assert_eq!(tensor_power(&z, 3).inner(&tensor_power(&z, 3)), 8);
        assert!(matches!(tensor_amplify(&ps(&["1111"]), 2, 20, 1 << 20), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn loglog() {
        assert_eq!(loglog_floor(2), 1);
        assert_eq!(loglog_floor(16), 2);
        assert_eq!(loglog_floor(49), 2);
        assert_eq!(loglog_floor(65536), 4);
        assert_eq!(loglog_floor(65535), 3);
    }

    fn verified_cd(q: u64, k1: usize) -> (VerifiedGadget, PermutationCover) {
        let g = build_cd_gadget(q, k1, EnumBudget::DEFAULT).unwrap().gadget;
        let v = VerifiedGadget::new(g, DEFAULT_VERIFY_BUDGET).unwrap();
        let c = cover_biclique(&v.adjacency).unwrap();
        (v, c)
    }

    #[test]
    fn cp_stream_counts_and_yes_value() {
        let (g, c) = verified_cd(5, 1);
        let a = ps(&["0000", "0001", "0011", "0111", "1111", "1000", "1100", "1110", "1010", "0101"]);
        let b = ps(&["1111", "1110", "1100", "1000", "0000", "0111", "0011", "0001", "0101", "1010"]);
        let grid = bcp_to_cp_stream(&a, &b, 0, &g, &c).unwrap();
        assert_eq!(grid.len(), 4 * c.k());
        assert_eq!(grid.trace().dimension_out, 4 + 5 * 25);
        assert_eq!(grid.alpha_out(), 5 * 8);
        // a[0] = b[4] lands in blocks (0, 0): some t gives CP exactly alpha'
        let best = (0..c.k()).map(|t| solve_cp(&grid.sub_instance(0, 0, t).sets[0], Metric::Hamming).unwrap().value);
        assert_eq!(best.min().unwrap(), grid.alpha_out());
    }

    #[test]
    fn driver_remainder() {
        let (g, c) = verified_cd(5, 1);
        // n = 7: two leftover points on each side; the only close pair is leftover
        let a = ps(&["000000", "000111", "111000", "110011", "001100", "010101", "101101"]);
        let b = ps(&["111111", "111000", "000111", "001100", "110011", "101010", "101100"]);
        let truth = solve_bcp(&a, &b).unwrap().value;
        for alpha in 0..=6 {
            let out = run_bcp_via_cp(&a, &b, alpha, &g, &c, &brute_oracle).unwrap();
            let want = if truth <= alpha { Verdict::Yes } else { Verdict::No };
            assert_eq!(out.verdict, want, "alpha={alpha}");
        }
        assert!(matches!(bcp_to_cp_stream(&a, &b, 7, &g, &c), Err(Error::BadParameters(_))));
    }

    #[test]
    fn mip_stream_values() {
        let raw = build_ip_gadget(7, 1, EnumBudget::DEFAULT).unwrap().gadget;
        let g = VerifiedGadget::new(raw, DEFAULT_VERIFY_BUDGET).unwrap();
        let c = cover_biclique(&g.adjacency).unwrap();
        let a = ps(&["1100", "0000", "0001", "0010", "0100", "1000", "0011"]);
        let b = ps(&["1101", "0000", "0010", "0001", "1000", "0100", "0000"]);
        let grid = bmip_to_mip_stream(&a, &b, 2, &g, &c).unwrap();
        assert_eq!(grid.alpha_out(), 3 * 2 + 12 * 3);
        let vals: Vec<u64> = (0..c.k()).map(|t| solve_mip(&grid.sub_instance(0, 0, t).sets[0]).unwrap().value).collect();
        assert_eq!(*vals.iter().max().unwrap(), grid.alpha_out());
        let out = run_bmip_via_mip(&a, &b, 2, &g, &c, &brute_oracle).unwrap();
        assert_eq!(out.verdict, Verdict::Yes);
        let out = run_bmip_via_mip(&a, &b, 3, &g, &c, &brute_oracle).unwrap();
        assert_eq!(out.verdict, Verdict::No);
    }

    #[test]
    fn gap_stream_planted() {
        let raw = build_gap_cd_gadget(11, 1, 4, EnumBudget::DEFAULT).unwrap().gadget;
        let g = VerifiedGadget::new(raw, DEFAULT_VERIFY_BUDGET).unwrap();
        let c = cover_biclique(&g.adjacency).unwrap();
        let mut rows_a = vec!["0000000000000000".to_string(); 11];
        let mut rows_b = vec!["1111111111111111".to_string(); 11];
        rows_a[3] = "1111111100000000".into();
        rows_b[5] = "1111111111111111".into();
        let a = PointSet::parse_rows(&rows_a).unwrap();
        let b = PointSet::parse_rows(&rows_b).unwrap();
        let (grid, params) = bcp_to_gapcp_stream(&a, &b, 8, &g, &c, r(1, 2), r(1, 20)).unwrap();
        assert_eq!((params.r1, params.r2, grid.alpha_out()), (1, 3, 56));
        let best =
            (0..c.k()).map(|t| solve_cp(&grid.sub_instance(0, 0, t).sets[0], Metric::Hamming).unwrap().value).min();
        assert_eq!(best, Some(56));
        let bad_mu = build_gap_cd_gadget(7, 1, 2, EnumBudget::DEFAULT).unwrap().gadget;
        let bad = VerifiedGadget::new(bad_mu, DEFAULT_VERIFY_BUDGET).unwrap();
        let bc = cover_biclique(&bad.adjacency).unwrap();
        assert!(matches!(bcp_to_gapcp_stream(&a, &b, 8, &bad, &bc, r(1, 2), r(1, 20)), Err(Error::EmptyWindow(_))));
    }

    #[test]
    fn gadget_kind_and_cover_checks() {
        let (g, c) = verified_cd(5, 1);
        let a = ps(&["01", "10", "11", "00", "01"]);
        assert!(matches!(bmip_to_mip_stream(&a, &a, 1, &g, &c), Err(Error::ShapeMismatch(_))));
        let (g7, _) = verified_cd(7, 1);
        assert!(matches!(bcp_to_cp_stream(&a, &a, 1, &g7, &c), Err(Error::ShapeMismatch(_))));
    }
}
