use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use cgadget_core::gadget::DEFAULT_VERIFY_BUDGET;
use cgadget_core::reduce::{brute_oracle, run_bcp_via_cp, run_bmip_via_mip};
use cgadget_core::solver::{decide, solve_bcp, solve_bmip};
use cgadget_core::{cover_biclique, verify_cover, BitMatrix, Instance, InstanceKind, VerifiedGadget};
use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{build_gadget, cover_check, random_set, write_file, CliResult, Ctx, Failure, KindArg};

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum Suite {
    BcpToCp,
    BmipToMip,
    Cover,
}

impl Suite {
    fn token(self) -> &'static str {
        match self {
            Suite::BcpToCp => "bcp-to-cp",
            Suite::BmipToMip => "bmip-to-mip",
            Suite::Cover => "cover",
        }
    }
}

#[derive(Args)]
pub(crate) struct BenchArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Comma list and/or ranges `a..b` (inclusive, stepped by --step); empty for none.
    #[arg(long, default_value = "")]
    sizes: String,
    #[arg(long, default_value_t = 10)]
    step: usize,
    /// Dimension of the random instances.
    #[arg(long, default_value_t = 16)]
    d: usize,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

const HEADER: &str = "suite,n,nprime,k,subinstances,dim_out,millis,verdict,oracle_verdict,agree";

pub(crate) fn parse_sizes(s: &str, step: usize) -> CliResult<Vec<usize>> {
    let bad = || Failure::input(format!("bad size list: {s}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if step == 0 {
                return Err(bad());
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// `(q, K1)` with `q^K1 = n`, `q` prime and `K1 + 1 <= q`.
fn cd_params(n: usize) -> Option<(u64, usize)> {
    (2..=n as u64).filter(|&q| cgadget_core::field::is_prime(q)).find_map(|q| {
        let mut p = 1usize;
        for k in 1.. {
            p = p.checked_mul(q as usize)?;
            if p == n {
                return (k < q as usize).then_some((q, k));
            }
            if p > n {
                return None;
            }
        }
        None
    })
}

pub(crate) fn run(args: BenchArgs, ctx: &Ctx) -> CliResult<()> {
    let sizes = parse_sizes(&args.sizes, args.step)?;
    let mut csv = format!("{HEADER}\n");
    let suite = args.suite.token();
    match args.suite {
        Suite::Cover => {
            for n in sizes {
                let (q, k1) = cd_params(n).ok_or_else(|| Failure::input(format!("no cd gadget with n = {n}")))?;
                let g = build_gadget(KindArg::Cd, q, k1, None, ctx.budget)?.gadget;
                let start = Instant::now();
                let c = cover_biclique(&g.adjacency)?;
                let millis = ctx.millis(start);
                let within = cover_check(n, g.edge_count(), c.k()) && verify_cover(&c).is_ok();
                // independent union check
                let mut union = BitMatrix::square(n);
                for p in &c.perms {
                    for (u, v) in g.adjacency.ones() {
                        union.set(p.perm_a[u], p.perm_b[v], true);
                    }
                }
                let complete = union.count_ones() == n * n;
                let yn = |b: bool| if b { "YES" } else { "NO" };
                writeln!(csv, "{suite},{n},{n},{},0,{},{millis},{},{},{}", c.k(), g.dim(), yn(within), yn(complete), within == complete).unwrap();
            }
        }
        Suite::BcpToCp | Suite::BmipToMip => {
            let mip = matches!(args.suite, Suite::BmipToMip);
            let (kind, q, k1) = if mip { (KindArg::Ip, 7, 1) } else { (KindArg::Cd, 5, 2) };
            let built = build_gadget(kind, args.q.unwrap_or(q), args.k1.unwrap_or(k1), None, ctx.budget)?;
            let g = VerifiedGadget::new(built.gadget, DEFAULT_VERIFY_BUDGET)?;
            let c = cover_biclique(&g.adjacency)?;
            for (idx, n) in sizes.into_iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                let a = random_set(&mut rng, n, args.d)?;
                let b = random_set(&mut rng, n, args.d)?;
                // alternate thresholds just on either side of the optimum
                let yes = idx % 2 == 0;
                let start = Instant::now();
                let (outcome, direct) = if mip {
                    let best = solve_bmip(&a, &b)?.value;
                    let alpha = if yes { best } else { best + 1 };
                    let direct = Instance::pair(InstanceKind::Bmip, a.clone(), b.clone(), Some(alpha))?;
                    (run_bmip_via_mip(&a, &b, alpha, &g, &c, &brute_oracle)?, direct)
                } else {
                    let best = solve_bcp(&a, &b)?.value;
                    let alpha = if yes || best == 0 { best } else { best - 1 };
                    let direct = Instance::pair(InstanceKind::Bcp, a.clone(), b.clone(), Some(alpha))?;
                    (run_bcp_via_cp(&a, &b, alpha, &g, &c, &brute_oracle)?, direct)
                };
                let millis = ctx.millis(start);
                let want = decide(&direct)?;
                let t = &outcome.trace;
                writeln!(
                    csv,
                    "{suite},{n},{},{},{},{},{millis},{},{want},{}",
                    t.n_prime,
                    t.cover_k,
                    t.sub_instances_emitted,
                    t.dimension_out,
                    outcome.verdict,
                    outcome.verdict == want
                )
                .unwrap();
            }
        }
    }
    write_file(&args.out, &csv)
}
