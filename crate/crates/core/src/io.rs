//! Plain-text formats for instances, gadgets, covers and center certificates.
//!
//! Every writer emits a trailing newline; every reader skips blank lines and
//! reports 1-based line numbers.

use std::fmt::Write as _;

use crate::bits::{BitMatrix, BitPoint};
use crate::center::CertificateRecord;
use crate::cover::SidePreservingPermutation;
use crate::error::{Error, Result};
use crate::gadget::{BipartiteGadget, GadgetKind};
use crate::solver::{Instance, InstanceKind, PointSet};
use crate::Rational;

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> =
            Box::new(text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()));
        Lines { inner: it.peekable(), last: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(Error::parse(self.last + 1, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn is_done(&mut self) -> bool {
        self.inner.peek().is_none()
    }

    fn bits(&mut self, d: usize) -> Result<BitPoint> {
        let (n, l) = self.next("a 0/1 row")?;
        let p = BitPoint::parse(l).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(n, msg),
            other => other,
        })?;
        if p.len() != d {
            return Err(Error::parse(n, format!("row has {} bits, expected {d}", p.len())));
        }
        Ok(p)
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| Error::parse(line, format!("bad {what} {tok:?}")))
}

pub fn write_instance(inst: &Instance) -> String {
    let mut s = format!("{} {} {}", inst.kind, inst.n(), inst.d());
    if let Some(a) = inst.alpha {
        write!(s, " {a}").unwrap();
    }
    s.push('\n');
    for set in &inst.sets {
        for p in set.points() {
            writeln!(s, "{p}").unwrap();
        }
    }
    s
}

pub fn write_instances<'a>(insts: impl IntoIterator<Item = &'a Instance>) -> String {
    insts.into_iter().map(write_instance).collect()
}

fn read_instance(lines: &mut Lines<'_>) -> Result<Instance> {
    let (ln, header) = lines.next("an instance header")?;
    let mut tok = header.split_whitespace();
    let kind_tok = tok.next().unwrap_or_default();
    let kind = InstanceKind::from_token(kind_tok).ok_or_else(|| Error::parse(ln, format!("unknown kind {kind_tok:?}")))?;
    let n: usize = num(ln, tok.next(), "n")?;
    let d: usize = num(ln, tok.next(), "d")?;
    let alpha = match tok.next() {
        Some(t) => Some(num::<u64>(ln, Some(t), "alpha")?),
        None => None,
    };
    if tok.next().is_some() {
        return Err(Error::parse(ln, "trailing tokens in header"));
    }
    if kind.has_alpha() != alpha.is_some() {
        return Err(Error::parse(ln, format!("kind {kind} {} alpha", if kind.has_alpha() { "requires" } else { "takes no" })));
    }
    if n == 0 {
        return Err(Error::parse(ln, "n must be positive"));
    }
    let sides = if kind.is_bichromatic() { 2 } else { 1 };
    let mut sets = Vec::with_capacity(sides);
    for _ in 0..sides {
        let points = (0..n).map(|_| lines.bits(d)).collect::<Result<Vec<_>>>()?;
        sets.push(PointSet::new(points)?);
    }
    Instance::new(kind, sets, alpha)
}

pub fn parse_instances(text: &str) -> Result<Vec<Instance>> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while !lines.is_done() {
        out.push(read_instance(&mut lines)?);
    }
    Ok(out)
}

/// Exactly one instance.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut all = parse_instances(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        k => Err(Error::parse(1, format!("expected one instance, found {k}"))),
    }
}

pub fn write_gadget(g: &BipartiteGadget) -> String {
    let mut s = format!(
        "{} {} {} {} {} {} {} {} {}\n",
        g.kind,
        g.q,
        g.k1,
        g.k2,
        g.n(),
        g.dim(),
        g.beta,
        g.mu.numer(),
        g.mu.denom()
    );
    for p in g.side_a.iter().chain(&g.side_b).chain(g.adjacency.rows()) {
        writeln!(s, "{p}").unwrap();
    }
    s
}

pub fn parse_gadget(text: &str) -> Result<BipartiteGadget> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next("a gadget header")?;
    let mut tok = header.split_whitespace();
    let kind_tok = tok.next().unwrap_or_default();
    let kind = GadgetKind::from_token(kind_tok).ok_or_else(|| Error::parse(ln, format!("unknown gadget kind {kind_tok:?}")))?;
    let q: u64 = num(ln, tok.next(), "q")?;
    let k1: usize = num(ln, tok.next(), "K1")?;
    let k2: usize = num(ln, tok.next(), "K2")?;
    let n: usize = num(ln, tok.next(), "n")?;
    let dim: usize = num(ln, tok.next(), "dim")?;
    let beta: u64 = num(ln, tok.next(), "beta")?;
    let mu_num: i128 = num(ln, tok.next(), "mu numerator")?;
    let mu_den: i128 = num(ln, tok.next(), "mu denominator")?;
    if mu_den <= 0 {
        return Err(Error::parse(ln, "mu denominator must be positive"));
    }
    let side_a = (0..n).map(|_| lines.bits(dim)).collect::<Result<Vec<_>>>()?;
    let side_b = (0..n).map(|_| lines.bits(dim)).collect::<Result<Vec<_>>>()?;
    let adj = (0..n).map(|_| lines.bits(n)).collect::<Result<Vec<_>>>()?;
    if !lines.is_done() {
        let (l, _) = lines.next("")?;
        return Err(Error::parse(l, "trailing lines after adjacency"));
    }
    let adjacency = if n == 0 { BitMatrix::square(0) } else { BitMatrix::from_rows(adj)? };
    Ok(BipartiteGadget { kind, q, k1, k2, side_a, side_b, adjacency, beta, mu: Rational::new(mu_num, mu_den) })
}

pub fn write_cover(n: usize, perms: &[SidePreservingPermutation]) -> String {
    let mut s = format!("{n} {}\n", perms.len());
    let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    for p in perms {
        writeln!(s, "{}\n{}", join(&p.perm_a), join(&p.perm_b)).unwrap();
    }
    s
}

pub fn parse_cover(text: &str) -> Result<(usize, Vec<SidePreservingPermutation>)> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next("a cover header")?;
    let mut tok = header.split_whitespace();
    let n: usize = num(ln, tok.next(), "n")?;
    let k: usize = num(ln, tok.next(), "k")?;
    let read = |lines: &mut Lines<'_>| -> Result<Vec<usize>> {
        let (ln, l) = lines.next("a permutation line")?;
        let v = l.split_whitespace().map(|t| num(ln, Some(t), "image")).collect::<Result<Vec<usize>>>()?;
        if v.len() != n {
            return Err(Error::parse(ln, format!("permutation has {} entries, expected {n}", v.len())));
        }
        Ok(v)
    };
    let mut perms = Vec::with_capacity(k);
    for _ in 0..k {
        let a = read(&mut lines)?;
        let b = read(&mut lines)?;
        let ln = lines.last;
        perms.push(SidePreservingPermutation::new(a, b).map_err(|e| Error::parse(ln, e.to_string()))?);
    }
    Ok((n, perms))
}

pub fn write_certificate(c: &CertificateRecord) -> String {
    let center: Vec<String> = c.center.iter().map(ToString::to_string).collect();
    format!("{} {} {} {}\n{}\n", c.q, c.center.len(), c.radius, c.ball_count, center.join(" "))
}

pub fn parse_certificate(text: &str) -> Result<CertificateRecord> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next("a certificate header")?;
    let mut tok = header.split_whitespace();
    let q: u64 = num(ln, tok.next(), "q")?;
    let len: usize = num(ln, tok.next(), "N")?;
    let radius: usize = num(ln, tok.next(), "radius")?;
    let ball_count: u64 = num(ln, tok.next(), "ball count")?;
    let (ln, l) = lines.next("the center")?;
    let center = l.split_whitespace().map(|t| num(ln, Some(t), "symbol")).collect::<Result<Vec<u64>>>()?;
    if center.len() != len {
        return Err(Error::parse(ln, format!("center has {} symbols, expected {len}", center.len())));
    }
    if let Some(bad) = center.iter().find(|&&x| x >= q) {
        return Err(Error::parse(ln, format!("symbol {bad} outside F_{q}")));
    }
    Ok(CertificateRecord { q, radius, ball_count, center })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::EnumBudget;
    use crate::cover::cover_biclique;
    use crate::gadget::{build_cd_gadget, build_gap_cd_gadget};

    #[test]
    fn instance_roundtrip() {
        let text = "bcp 2 3 1\n000\n011\n111\n101\ncp 3 3 1\n000\n011\n010\nov 1 2\n10\n01\n";
        let insts = parse_instances(text).unwrap();
        assert_eq!(insts.len(), 3);
        assert_eq!(write_instances(&insts), text);
        assert_eq!(parse_instance("mip 2 3 2\n\n110\n011\n").unwrap().alpha, Some(2));
    }

    #[test]
    fn instance_errors() {
        let err = parse_instance("cp 2 3 1\n000\n01\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse_instance("cp 2 3\n000\n011\n").is_err());
        assert!(parse_instance("ov 1 1 4\n0\n1\n").is_err());
        assert!(parse_instance("xx 1 1\n0\n").is_err());
        assert!(parse_instance("cp 2 2 1\n00\n0a\n").is_err());
        assert!(parse_instance("cp 3 2 1\n00\n01\n").is_err());
    }

    #[test]
    fn gadget_roundtrip() {
        for g in [
            build_cd_gadget(5, 1, EnumBudget::DEFAULT).unwrap().gadget,
            build_gap_cd_gadget(11, 1, 4, EnumBudget::DEFAULT).unwrap().gadget,
        ] {
            let text = write_gadget(&g);
            assert_eq!(parse_gadget(&text).unwrap(), g);
        }
    }

    #[test]
    fn cover_roundtrip() {
        let g = build_cd_gadget(7, 1, EnumBudget::DEFAULT).unwrap().gadget;
        let c = cover_biclique(&g.adjacency).unwrap();
        let text = write_cover(c.n(), &c.perms);
        assert_eq!(parse_cover(&text).unwrap(), (c.n(), c.perms.clone()));
        assert!(parse_cover("2 1\n0 0\n0 1\n").is_err());
    }

    #[test]
    fn certificate_roundtrip() {
        let r = CertificateRecord { q: 5, radius: 4, ball_count: 5, center: vec![0, 1, 2, 3, 4] };
        let text = write_certificate(&r);
        assert_eq!(text, "5 5 4 5\n0 1 2 3 4\n");
        assert_eq!(parse_certificate(&text).unwrap(), r);
        assert!(parse_certificate("5 2 4 5\n0 7\n").is_err());
    }
}
