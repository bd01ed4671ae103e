//! Brute-force exact solvers for OV, CP, BCP, MIP and BMIP over Boolean points.
//!
//! Witnesses are 0-based index pairs; ties go to the lexicographically
//! smallest pair.

use std::fmt;

use rayon::prelude::*;

use crate::bits::BitPoint;
use crate::editembed::edit_distance;
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    points: Vec<BitPoint>,
    d: usize,
}

impl PointSet {
    pub fn new(points: Vec<BitPoint>) -> Result<PointSet> {
        let d = match points.first() {
            Some(p) => p.len(),
            None => return Err(Error::TooFewPoints(0)),
        };
        if let Some(bad) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch(d, bad.len()));
        }
        Ok(PointSet { points, d })
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<PointSet> {
        PointSet::new(rows.iter().map(|r| BitPoint::parse(r.as_ref())).collect::<Result<_>>()?)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[BitPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<BitPoint> {
        self.points
    }

    /// Points of `self` followed by points of `other`.
    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        PointSet::new(self.points.iter().chain(&other.points).cloned().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Ov,
    Cp,
    Bcp,
    Mip,
    Bmip,
    EditCp,
}

impl InstanceKind {
    pub fn token(&self) -> &'static str {
        match self {
            InstanceKind::Ov => "ov",
            InstanceKind::Cp => "cp",
            InstanceKind::Bcp => "bcp",
            InstanceKind::Mip => "mip",
            InstanceKind::Bmip => "bmip",
            InstanceKind::EditCp => "edit-cp",
        }
    }

    pub fn from_token(s: &str) -> Option<InstanceKind> {
        [Self::Ov, Self::Cp, Self::Bcp, Self::Mip, Self::Bmip, Self::EditCp]
            .into_iter()
            .find(|k| k.token() == s)
    }

    pub fn is_bichromatic(&self) -> bool {
        matches!(self, Self::Ov | Self::Bcp | Self::Bmip)
    }

    pub fn has_alpha(&self) -> bool {
        !matches!(self, Self::Ov)
    }

    /// Distance problems ask for a small optimum, inner-product ones for a large one.
    pub fn is_distance(&self) -> bool {
        matches!(self, Self::Cp | Self::Bcp | Self::EditCp)
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    pub kind: InstanceKind,
    pub sets: Vec<PointSet>,
    pub alpha: Option<u64>,
}

impl Instance {
    pub fn new(kind: InstanceKind, sets: Vec<PointSet>, alpha: Option<u64>) -> Result<Instance> {
        let want = if kind.is_bichromatic() { 2 } else { 1 };
        if sets.len() != want {
            return Err(Error::ShapeMismatch(format!("{kind} needs {want} point sets, got {}", sets.len())));
        }
        if want == 2 {
            if sets[0].d() != sets[1].d() {
                return Err(Error::DimensionMismatch(sets[0].d(), sets[1].d()));
            }
            if sets[0].n() != sets[1].n() {
                return Err(Error::ShapeMismatch(format!("sides of {} and {} points", sets[0].n(), sets[1].n())));
            }
        }
        if kind.has_alpha() != alpha.is_some() {
            return Err(Error::ShapeMismatch(format!("{kind} alpha presence mismatch")));
        }
        Ok(Instance { kind, sets, alpha })
    }

    pub fn single(kind: InstanceKind, set: PointSet, alpha: u64) -> Result<Instance> {
        Instance::new(kind, vec![set], Some(alpha))
    }

    pub fn pair(kind: InstanceKind, a: PointSet, b: PointSet, alpha: Option<u64>) -> Result<Instance> {
        Instance::new(kind, vec![a, b], alpha)
    }

    pub fn n(&self) -> usize {
        self.sets[0].n()
    }

    pub fn d(&self) -> usize {
        self.sets[0].d()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Hamming,
    Edit,
}

/// Exact optimum value with its lexicographically smallest witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: u64,
    pub witness: (usize, usize),
}

fn check_dims(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch(a.d(), b.d()));
    }
    Ok(())
}

/// Scan all pairs (cross pairs, or `i < j` pairs when `mono`) for the best
/// `key`, smaller is better; ties go to the smaller `(i, j)`.
fn scan<F>(a: &[BitPoint], b: &[BitPoint], mono: bool, key: F) -> Option<(u64, usize, usize)>
where
    F: Fn(&BitPoint, &BitPoint) -> u64 + Sync,
{
    a.par_iter()
        .enumerate()
        .filter_map(|(i, x)| {
            let start = if mono { i + 1 } else { 0 };
            b[start.min(b.len())..]
                .iter()
                .enumerate()
                .map(|(off, y)| (key(x, y), i, start + off))
                .min()
        })
        .min()
}

pub fn solve_ov(a: &PointSet, b: &PointSet) -> Result<Option<(usize, usize)>> {
    check_dims(a, b)?;
    Ok(scan(a.points(), b.points(), false, |x, y| x.inner(y).min(1) as u64).and_then(|(v, i, j)| (v == 0).then_some((i, j))))
}

pub fn solve_cp(p: &PointSet, metric: Metric) -> Result<Optimum> {
    if p.n() < 2 {
        return Err(Error::TooFewPoints(p.n()));
    }
    let found = match metric {
        Metric::Hamming => scan(p.points(), p.points(), true, |x, y| x.hamming(y) as u64),
        Metric::Edit => {
            let bytes: Vec<Vec<u8>> = p.points().iter().map(BitPoint::to_bytes).collect();
            let idx: Vec<usize> = (0..bytes.len()).collect();
            idx.par_iter()
                .filter_map(|&i| {
                    (i + 1..bytes.len())
                        .map(|j| (edit_distance(&bytes[i], &bytes[j]) as u64, i, j))
                        .min()
                })
                .min()
        }
    };
    let (value, i, j) = found.expect("n >= 2");
    Ok(Optimum { value, witness: (i, j) })
}

pub fn solve_bcp(a: &PointSet, b: &PointSet) -> Result<Optimum> {
    check_dims(a, b)?;
    let (value, i, j) = scan(a.points(), b.points(), false, |x, y| x.hamming(y) as u64).expect("nonempty sets");
    Ok(Optimum { value, witness: (i, j) })
}

pub fn solve_mip(p: &PointSet) -> Result<Optimum> {
    if p.n() < 2 {
        return Err(Error::TooFewPoints(p.n()));
    }
    let (neg, i, j) = scan(p.points(), p.points(), true, |x, y| u64::MAX - x.inner(y) as u64).expect("n >= 2");
    Ok(Optimum { value: u64::MAX - neg, witness: (i, j) })
}

pub fn solve_bmip(a: &PointSet, b: &PointSet) -> Result<Optimum> {
    check_dims(a, b)?;
    let (neg, i, j) = scan(a.points(), b.points(), false, |x, y| u64::MAX - x.inner(y) as u64).expect("nonempty sets");
    Ok(Optimum { value: u64::MAX - neg, witness: (i, j) })
}

/// Optimum of any instance; for OV the value is 0 with a witness when an
/// orthogonal pair exists and 1 otherwise.
pub fn solve(inst: &Instance) -> Result<Optimum> {
    let s = &inst.sets;
    match inst.kind {
        InstanceKind::Ov => Ok(match solve_ov(&s[0], &s[1])? {
            Some(w) => Optimum { value: 0, witness: w },
            None => Optimum { value: 1, witness: (0, 0) },
        }),
        InstanceKind::Cp => solve_cp(&s[0], Metric::Hamming),
        InstanceKind::EditCp => solve_cp(&s[0], Metric::Edit),
        InstanceKind::Bcp => solve_bcp(&s[0], &s[1]),
        InstanceKind::Mip => solve_mip(&s[0]),
        InstanceKind::Bmip => solve_bmip(&s[0], &s[1]),
    }
}

/// How far the NO side of a promise sits from `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gap {
    /// Distances: NO beyond `alpha·f`. Inner products: NO below `alpha/f`.
    Factor(Rational),
    /// Distances: NO beyond `alpha + g`. Inner products: NO below `alpha − g`.
    Additive(u64),
}

impl Gap {
    pub fn exact() -> Gap {
        Gap::Factor(Rational::from(1))
    }
}

/// Classify an optimum value against `alpha` under the gap promise.
pub fn classify(kind: InstanceKind, value: u64, alpha: u64, gap: Gap) -> Verdict {
    let v = Rational::from(value as i128);
    let a = Rational::from(alpha as i128);
    if kind.is_distance() {
        if v <= a {
            return Verdict::Yes;
        }
        let threshold = match gap {
            Gap::Factor(f) => a * f,
            Gap::Additive(g) => a + Rational::from(g as i128),
        };
        if v > threshold {
            Verdict::No
        } else {
            Verdict::Indeterminate
        }
    } else {
        if v >= a {
            return Verdict::Yes;
        }
        let threshold = match gap {
            Gap::Factor(f) => a / f,
            Gap::Additive(g) => a - Rational::from(g as i128),
        };
        if v < threshold {
            Verdict::No
        } else {
            Verdict::Indeterminate
        }
    }
}

pub fn decide_gap(inst: &Instance, gap: Gap) -> Result<Verdict> {
    let opt = solve(inst)?;
    if inst.kind == InstanceKind::Ov {
        return Ok(if opt.value == 0 { Verdict::Yes } else { Verdict::No });
    }
    let alpha = inst.alpha.ok_or_else(|| Error::ShapeMismatch("instance has no alpha".into()))?;
    Ok(classify(inst.kind, opt.value, alpha, gap))
}

/// Exact decision (`gap = 1`): never indeterminate.
pub fn decide(inst: &Instance) -> Result<Verdict> {
    decide_gap(inst, Gap::exact())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(rows: &[&str]) -> PointSet {
        PointSet::parse_rows(rows).unwrap()
    }

    #[test]
    fn ov_examples() {
        assert_eq!(solve_ov(&ps(&["10"]), &ps(&["01"])).unwrap(), Some((0, 0)));
        assert_eq!(solve_ov(&ps(&["11"]), &ps(&["11"])).unwrap(), None);
        assert_eq!(solve_ov(&ps(&["10", "11"]), &ps(&["11", "01"])).unwrap(), Some((0, 1)));
        assert!(matches!(solve_ov(&ps(&["1"]), &ps(&["11"])), Err(Error::DimensionMismatch(1, 2))));
    }

    #[test]
    fn cp_examples() {
        // lexicographic tie-break: pairs (0,2) and (1,2) are both at distance 1
        let o = solve_cp(&ps(&["000", "011", "010"]), Metric::Hamming).unwrap();
        assert_eq!(o, Optimum { value: 1, witness: (0, 2) });
        let o = solve_cp(&ps(&["101", "101", "010"]), Metric::Hamming).unwrap();
        assert_eq!(o, Optimum { value: 0, witness: (0, 1) });
        let o = solve_cp(&ps(&["0110", "1001"]), Metric::Hamming).unwrap();
        assert_eq!(o, Optimum { value: 4, witness: (0, 1) });
        assert_eq!(solve_cp(&ps(&["0"]), Metric::Hamming), Err(Error::TooFewPoints(1)));
    }

    #[test]
    fn bcp_examples() {
        assert_eq!(solve_bcp(&ps(&["00"]), &ps(&["00"])).unwrap().value, 0);
        assert_eq!(solve_bcp(&ps(&["00", "11"]), &ps(&["01"])).unwrap(), Optimum { value: 1, witness: (0, 0) });
        assert_eq!(solve_bcp(&ps(&["000"]), &ps(&["111"])).unwrap().value, 3);
    }

    #[test]
    fn mip_examples() {
        assert_eq!(solve_mip(&ps(&["110", "011"])).unwrap(), Optimum { value: 1, witness: (0, 1) });
        assert_eq!(solve_mip(&ps(&["111", "111"])).unwrap(), Optimum { value: 3, witness: (0, 1) });
        assert_eq!(solve_bmip(&ps(&["101"]), &ps(&["100"])).unwrap().value, 1);
    }

    #[test]
    fn gap_examples() {
        let half = Gap::Factor(Rational::new(3, 2));
        assert_eq!(classify(InstanceKind::Cp, 10, 10, half), Verdict::Yes);
        assert_eq!(classify(InstanceKind::Cp, 16, 10, half), Verdict::No);
        assert_eq!(classify(InstanceKind::Cp, 12, 10, half), Verdict::Indeterminate);
        assert_eq!(classify(InstanceKind::Cp, 15, 10, half), Verdict::Indeterminate);
        assert_eq!(classify(InstanceKind::Mip, 4, 8, Gap::Factor(Rational::from(2))), Verdict::Indeterminate);
        assert_eq!(classify(InstanceKind::Mip, 3, 8, Gap::Factor(Rational::from(2))), Verdict::No);
        assert_eq!(classify(InstanceKind::Bmip, 5, 8, Gap::Additive(3)), Verdict::Indeterminate);
        assert_eq!(classify(InstanceKind::Bmip, 4, 8, Gap::Additive(3)), Verdict::No);
        let inst = Instance::single(InstanceKind::Cp, ps(&["000", "011", "010"]), 1).unwrap();
        assert_eq!(decide(&inst).unwrap(), Verdict::Yes);
    }

    #[test]
    fn instance_shape() {
        assert!(Instance::new(InstanceKind::Bcp, vec![ps(&["0"])], Some(1)).is_err());
        assert!(Instance::pair(InstanceKind::Bcp, ps(&["0"]), ps(&["0", "1"]), Some(1)).is_err());
        assert!(Instance::pair(InstanceKind::Ov, ps(&["0"]), ps(&["1"]), Some(1)).is_err());
    }

    fn arb_points(n: usize, d: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), d), n)
    }

    fn to_set(rows: &[Vec<bool>]) -> PointSet {
        PointSet::new(rows.iter().map(|r| BitPoint::from_bools(r.iter().copied())).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn cp_of_union_bounds_bcp(a in arb_points(6, 12), b in arb_points(6, 12)) {
            let (a, b) = (to_set(&a), to_set(&b));
            let cp = solve_cp(&a.union(&b).unwrap(), Metric::Hamming).unwrap();
            let bcp = solve_bcp(&a, &b).unwrap();
            prop_assert!(cp.value <= bcp.value);
            let (i, j) = cp.witness;
            if i < 6 && j >= 6 {
                prop_assert_eq!(cp.value, bcp.value);
            }
        }

        #[test]
        fn values_permutation_invariant(rows in arb_points(7, 10), rot in 0usize..7) {
            let p = to_set(&rows);
            let mut r = rows.clone();
            r.rotate_left(rot);
            let q = to_set(&r);
            prop_assert_eq!(solve_cp(&p, Metric::Hamming).unwrap().value, solve_cp(&q, Metric::Hamming).unwrap().value);
            prop_assert_eq!(solve_mip(&p).unwrap().value, solve_mip(&q).unwrap().value);
        }

        #[test]
        fn edit_below_hamming(rows in arb_points(5, 14)) {
            let p = to_set(&rows);
            prop_assert!(solve_cp(&p, Metric::Edit).unwrap().value <= solve_cp(&p, Metric::Hamming).unwrap().value);
        }
    }
}
