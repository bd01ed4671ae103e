use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cgadget_core::cover::{cover_bound, PermutationCover};
use cgadget_core::editembed::{estimate_lambda, gen_substitution_code, DEFAULT_C};
use cgadget_core::gadget::{GadgetBuild, DEFAULT_VERIFY_BUDGET};
use cgadget_core::io::{
    parse_cover, parse_gadget, parse_instance, write_certificate, write_cover, write_gadget, write_instance,
};
use cgadget_core::reduce::{
    bcp_to_cp_stream, bcp_to_gapcp_stream, bmip_to_mip_stream, brute_oracle, gap_cp_oracle, ov_to_bcp,
    run_bcp_via_cp, run_bcp_via_gapcp, run_bmip_via_mip, tensor_amplify, hamming_cp_to_edit_cp, DriverOutcome,
    GridReduction, ReductionTrace, YesSource,
};
use cgadget_core::solver::solve;
use cgadget_core::{
    build_cd_gadget, build_gap_cd_gadget, build_ip_gadget, cover_biclique, find_center, rs_code, verify_certificate,
    verify_gadget, EnumBudget, Error, GadgetKind, Instance, InstanceKind, PointSet, PrimeField,
    Rational, VerifiedGadget,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod bench;

#[derive(Parser)]
#[command(name = "cgadget", version, about = "Code-based gadgets, biclique covers and closest-pair reductions")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Codeword enumeration budget.
    #[arg(long, global = true, env = "CGADGET_BUDGET")]
    budget: Option<u64>,
    /// Write 0 in every millis column.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or verify a gadget file.
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Cover K_{n,n} with permuted copies of a gadget graph.
    Cover {
        gadget: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a dense center for RS_q[q, K1] inside RS_q[q, K2].
    Center {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k1: usize,
        /// Defaults to K1 + 1.
        #[arg(long)]
        k2: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one reduction pipeline.
    Reduce(ReduceArgs),
    /// Print the exact optimum and witness of an instance.
    Solve { input: PathBuf },
    /// Benchmark a pipeline against the brute-force oracle.
    Bench(bench::BenchArgs),
    /// Write a random instance.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GadgetCmd {
    Build {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k1: usize,
        /// Required for gap-cd.
        #[arg(long)]
        k2: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the center certificate.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    Verify {
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum KindArg {
    Cd,
    Ip,
    GapCd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Pipeline {
    OvToBcp,
    BcpToCp,
    BmipToMip,
    Tensor,
    BcpToGapcp,
    ToEdit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Brute,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    pipeline: Pipeline,
    input: PathBuf,
    /// Output instance file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trace CSV (default: OUT.trace.csv).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Run the driver end to end and print YES/NO.
    #[arg(long, value_enum)]
    oracle: Option<OracleArg>,
    /// Gadget file; otherwise built from --q/--k1/--k2.
    #[arg(long)]
    gadget: Option<PathBuf>,
    /// Cover file; otherwise computed from the gadget.
    #[arg(long)]
    cover: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    /// Tensor power.
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Largest tensor output dimension.
    #[arg(long, default_value_t = 1 << 20)]
    tensor_budget: u64,
    #[arg(long, default_value = "1/2", value_parser = parse_rational)]
    kappa: Rational,
    #[arg(long, default_value = "1/20", value_parser = parse_rational)]
    theta: Rational,
    /// Substitution block length factor.
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    /// Pairs sampled for the distortion fit.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

#[derive(Debug)]
pub(crate) struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }

    fn verification(msg: impl Into<String>) -> Self {
        Failure { code: 1, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EmptyWindow(_) => 3,
            Error::GadgetUnverified(_) => 1,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, Failure>;

pub(crate) struct Ctx {
    pub seed: u64,
    pub budget: EnumBudget,
    pub timing: bool,
}

impl Ctx {
    pub(crate) fn millis(&self, start: Instant) -> u128 {
        if self.timing {
            start.elapsed().as_millis()
        } else {
            0
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().expect("thread pool");
    }
    let ctx = Ctx { seed: cli.seed, budget: cli.budget.map_or(EnumBudget::DEFAULT, EnumBudget), timing: !cli.no_timing };
    if ctx.budget.0 == 0 {
        eprintln!("error: budget must be positive");
        return ExitCode::from(2);
    }
    match run(cli.cmd, &ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Cmd, ctx: &Ctx) -> CliResult<()> {
    match cmd {
        Cmd::Gadget(GadgetCmd::Build { kind, q, k1, k2, out, cert }) => {
            let build = build_gadget(kind, q, k1, k2, ctx.budget)?;
            write_file(&out, &write_gadget(&build.gadget))?;
            if let Some(path) = cert {
                write_file(&path, &write_certificate(&build.certificate.record()))?;
            }
            let g = &build.gadget;
            println!("{} q={} K1={} K2={} n={} dim={} beta={} mu={} edges={}", g.kind, g.q, g.k1, g.k2, g.n(), g.dim(), g.beta, g.mu, g.edge_count());
            Ok(())
        }
        Cmd::Gadget(GadgetCmd::Verify { file }) => cmd_verify(&file),
        Cmd::Cover { gadget, out } => {
            let g = load_gadget(&gadget)?;
            let c = cover_biclique(&g.adjacency)?;
            let report = cgadget_core::verify_cover(&c);
            if let Some(path) = out {
                write_file(&path, &write_cover(c.n(), &c.perms))?;
            }
            println!("n={} edges={} {report}", c.n(), g.edge_count());
            if !report.is_ok() {
                return Err(Failure::verification("cover check failed"));
            }
            Ok(())
        }
        Cmd::Center { q, k1, k2, out } => {
            let field = PrimeField::new(q)?;
            let k2 = k2.unwrap_or(k1 + 1);
            let inner = rs_code(field, q as usize, k1)?;
            let outer = rs_code(field, q as usize, k2)?;
            let cert = find_center(&inner, &outer, ctx.budget)?;
            let report = verify_certificate(&cert, &inner, ctx.budget)?;
            let center: Vec<String> = cert.center.iter().map(ToString::to_string).collect();
            println!("center {}", center.join(" "));
            println!("radius {} ball_count {} of {} (ratio {}, floor {})", cert.radius, cert.ball_count, cert.total_c1, cert.ratio(), cert.lower_bound);
            if let Some(path) = out {
                write_file(&path, &write_certificate(&cert.record()))?;
            }
            if !report.is_ok() {
                return Err(Failure::verification(format!("certificate check failed: {:?}", report.violations)));
            }
            Ok(())
        }
        Cmd::Reduce(args) => cmd_reduce(args, ctx),
        Cmd::Solve { input } => {
            let inst = load_instance(&input)?;
            let opt = solve(&inst)?;
            let (i, j) = (opt.witness.0 + 1, opt.witness.1 + 1);
            if inst.kind == InstanceKind::Ov {
                if opt.value == 0 {
                    println!("orthogonal witness ({i},{j})");
                } else {
                    println!("no orthogonal pair");
                }
            } else {
                println!("value {} witness ({i},{j})", opt.value);
            }
            if inst.alpha.is_some() || inst.kind == InstanceKind::Ov {
                println!("{}", cgadget_core::solver::decide(&inst)?);
            }
            Ok(())
        }
        Cmd::Bench(args) => bench::run(args, ctx),
        Cmd::Gen { kind, n, d, alpha, out } => {
            let kind = InstanceKind::from_token(&kind).ok_or_else(|| Failure::input(format!("unknown kind {kind}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let inst = random_instance(&mut rng, kind, n, d, alpha)?;
            write_file(&out, &write_instance(&inst))
        }
    }
}

pub(crate) fn random_set(rng: &mut ChaCha8Rng, n: usize, d: usize) -> CliResult<PointSet> {
    let pts = (0..n).map(|_| cgadget_core::BitPoint::from_bools((0..d).map(|_| rng.random::<bool>()))).collect();
    Ok(PointSet::new(pts)?)
}

fn random_instance(rng: &mut ChaCha8Rng, kind: InstanceKind, n: usize, d: usize, alpha: Option<u64>) -> CliResult<Instance> {
    if kind.has_alpha() && alpha.is_none() {
        return Err(Failure::input(format!("{kind} instances need --alpha")));
    }
    let alpha = if kind.has_alpha() { alpha } else { None };
    let mut sets = vec![random_set(rng, n, d)?];
    if kind.is_bichromatic() {
        sets.push(random_set(rng, n, d)?);
    }
    Ok(Instance::new(kind, sets, alpha)?)
}

pub(crate) fn build_gadget(kind: KindArg, q: u64, k1: usize, k2: Option<usize>, budget: EnumBudget) -> CliResult<GadgetBuild> {
    Ok(match kind {
        KindArg::Cd => build_cd_gadget(q, k1, budget)?,
        KindArg::Ip => build_ip_gadget(q, k1, budget)?,
        KindArg::GapCd => {
            let k2 = k2.ok_or_else(|| Failure::input("gap-cd needs --k2"))?;
            build_gap_cd_gadget(q, k1, k2, budget)?
        }
    })
}

fn cmd_verify(file: &Path) -> CliResult<()> {
    let g = parse_gadget(&read_file(file)?)?;
    let r = verify_gadget(&g, DEFAULT_VERIFY_BUDGET)?;
    let show = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
    let (cross, same) = if g.kind.is_distance() { ("cross_nonedge_min", "same_side_min") } else { ("cross_nonedge_max", "same_side_max") };
    println!("kind {} n {} dim {} beta {} mu {}", g.kind, g.n(), g.dim(), g.beta, g.mu);
    println!(
        "edges {} edge_min {} edge_max {} {cross} {} {same} {}",
        r.edge_count,
        show(r.edge_min),
        show(r.edge_max),
        show(r.cross_extreme),
        show(r.same_side_extreme)
    );
    println!("density_floor {} density_ok {}", r.density_floor, r.density_ok);
    for v in r.violations.iter().take(20) {
        println!("violation {v}");
    }
    if r.is_ok() {
        println!("OK");
        Ok(())
    } else {
        Err(Failure::verification(format!("{} violations", r.violation_count)))
    }
}

fn load_gadget(path: &Path) -> CliResult<VerifiedGadget> {
    let g = parse_gadget(&read_file(path)?)?;
    Ok(VerifiedGadget::new(g, DEFAULT_VERIFY_BUDGET)?)
}

fn load_instance(path: &Path) -> CliResult<Instance> {
    Ok(parse_instance(&read_file(path)?)?)
}

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub(crate) fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// `a/b`, an integer, or a finite decimal, parsed exactly.
fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("not a rational: {s}");
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let neg = int.starts_with('-');
    let whole: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
    let scale = 10i128.pow(frac.len() as u32);
    let f: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let num = whole.abs() * scale + f;
    Ok(Rational::new(if neg { -num } else { num }, scale))
}

const TRACE_HEADER: &str = "n,n_prime,k,subinstances,dim_out,alpha_out,millis";

fn trace_row(t: &ReductionTrace, millis: u128) -> String {
    format!("{},{},{},{},{},{},{millis}", t.n, t.n_prime, t.cover_k, t.sub_instances_emitted, t.dimension_out, t.alpha_out)
}

fn plain_trace(inst_in: &Instance, out: &Instance) -> ReductionTrace {
    ReductionTrace {
        n: inst_in.n(),
        n_prime: 0,
        cover_k: 0,
        sub_instances_emitted: 1,
        dimension_out: out.d(),
        alpha_out: out.alpha.unwrap_or(0),
        remainder_pairs: 0,
        gadget: (GadgetKind::ContactDim, 0, 0, 0),
    }
}

fn reduction_gadget(args: &ReduceArgs, kind: KindArg, ctx: &Ctx) -> CliResult<(VerifiedGadget, PermutationCover)> {
    let g = match &args.gadget {
        Some(p) => load_gadget(p)?,
        None => {
            let (q, k1, k2) = match kind {
                KindArg::Cd => (5, 1, None),
                KindArg::Ip => (7, 1, None),
                KindArg::GapCd => (11, 1, Some(4)),
            };
            let built = build_gadget(kind, args.q.unwrap_or(q), args.k1.unwrap_or(k1), args.k2.or(k2), ctx.budget)?;
            VerifiedGadget::new(built.gadget, DEFAULT_VERIFY_BUDGET)?
        }
    };
    let cover = match &args.cover {
        Some(p) => {
            let (n, perms) = parse_cover(&read_file(p)?)?;
            if n != g.n() {
                return Err(Failure::input(format!("cover is for n={n}, gadget has n={}", g.n())));
            }
            PermutationCover::from_parts(perms, g.adjacency.clone())
        }
        None => cover_biclique(&g.adjacency)?,
    };
    let report = cgadget_core::verify_cover(&cover);
    if !report.uncovered.is_empty() || !report.non_bijective.is_empty() {
        return Err(Failure::verification(format!("cover does not cover K_n,n: {report}")));
    }
    Ok((g, cover))
}

fn pair_sets(inst: &Instance, want: InstanceKind) -> CliResult<(&PointSet, &PointSet, u64)> {
    if inst.kind != want {
        return Err(Failure::input(format!("expected a {want} instance, got {}", inst.kind)));
    }
    Ok((&inst.sets[0], &inst.sets[1], inst.alpha.unwrap_or(0)))
}

fn write_stream(path: &Path, grid: &GridReduction<'_>) -> CliResult<()> {
    let io = |e: std::io::Error| Failure::input(format!("{}: {e}", path.display()));
    let mut w = BufWriter::new(fs::File::create(path).map_err(io)?);
    for inst in grid.iter() {
        w.write_all(write_instance(&inst).as_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}

fn report_outcome(out: &DriverOutcome) {
    println!("{}", out.verdict);
    match out.source {
        Some(YesSource::SubInstance { i, j, t }) => println!("found in sub-instance i={} j={} t={}", i + 1, j + 1, t + 1),
        Some(YesSource::Remainder { a, b }) => println!("found in remainder pair ({},{})", a + 1, b + 1),
        None => {}
    }
}

fn cmd_reduce(args: ReduceArgs, ctx: &Ctx) -> CliResult<()> {
    if args.out.is_none() && args.oracle.is_none() {
        return Err(Failure::input("nothing to do: pass --out and/or --oracle"));
    }
    let inst = load_instance(&args.input)?;
    let start = Instant::now();
    let oracle = args.oracle.is_some();
    let trace = match args.pipeline {
        Pipeline::OvToBcp => {
            if inst.kind != InstanceKind::Ov {
                return Err(Failure::input(format!("expected an ov instance, got {}", inst.kind)));
            }
            let out = ov_to_bcp(&inst.sets[0], &inst.sets[1])?;
            if let Some(p) = &args.out {
                write_file(p, &write_instance(&out))?;
            }
            if oracle {
                println!("{}", brute_oracle(&out)?);
            }
            plain_trace(&inst, &out)
        }
        Pipeline::Tensor => {
            if inst.kind != InstanceKind::Mip {
                return Err(Failure::input(format!("expected a mip instance, got {}", inst.kind)));
            }
            let out = tensor_amplify(&inst.sets[0], inst.alpha.unwrap_or(0), args.t, args.tensor_budget)?;
            if let Some(p) = &args.out {
                write_file(p, &write_instance(&out))?;
            }
            if oracle {
                println!("{}", brute_oracle(&out)?);
            }
            plain_trace(&inst, &out)
        }
        Pipeline::ToEdit => {
            if inst.kind != InstanceKind::Cp {
                return Err(Failure::input(format!("expected a cp instance, got {}", inst.kind)));
            }
            let code = gen_substitution_code(inst.d(), ctx.seed, args.c)?;
            let fit = estimate_lambda(&code, args.samples, ctx.seed)?;
            let red = hamming_cp_to_edit_cp(&inst.sets[0], inst.alpha.unwrap_or(0), &code, &fit)?;
            println!("L {} slope {} lambda_hat {:.6} max_residual {}", code.l(), red.slope, red.lambda_hat, red.max_residual);
            if let Some(p) = &args.out {
                write_file(p, &write_instance(&red.instance))?;
            }
            if oracle {
                println!("{}", brute_oracle(&red.instance)?);
            }
            plain_trace(&inst, &red.instance)
        }
        Pipeline::BcpToCp => {
            let (a, b, alpha) = pair_sets(&inst, InstanceKind::Bcp)?;
            let (g, c) = reduction_gadget(&args, KindArg::Cd, ctx)?;
            let grid = bcp_to_cp_stream(a, b, alpha, &g, &c)?;
            if let Some(p) = &args.out {
                write_stream(p, &grid)?;
            }
            if oracle {
                report_outcome(&run_bcp_via_cp(a, b, alpha, &g, &c, &brute_oracle)?);
            }
            grid.trace().clone()
        }
        Pipeline::BmipToMip => {
            let (a, b, alpha) = pair_sets(&inst, InstanceKind::Bmip)?;
            let (g, c) = reduction_gadget(&args, KindArg::Ip, ctx)?;
            let grid = bmip_to_mip_stream(a, b, alpha, &g, &c)?;
            if let Some(p) = &args.out {
                write_stream(p, &grid)?;
            }
            if oracle {
                report_outcome(&run_bmip_via_mip(a, b, alpha, &g, &c, &brute_oracle)?);
            }
            grid.trace().clone()
        }
        Pipeline::BcpToGapcp => {
            let (a, b, alpha) = pair_sets(&inst, InstanceKind::Bcp)?;
            let (g, c) = reduction_gadget(&args, KindArg::GapCd, ctx)?;
            let (grid, params) = bcp_to_gapcp_stream(a, b, alpha, &g, &c, args.kappa, args.theta)?;
            println!("r1 {} r2 {} alpha_out {}", params.r1, params.r2, grid.alpha_out());
            if let Some(p) = &args.out {
                write_stream(p, &grid)?;
            }
            if oracle {
                let gap = gap_cp_oracle(args.theta);
                let (outcome, _) = run_bcp_via_gapcp(a, b, alpha, &g, &c, args.kappa, args.theta, &gap)?;
                report_outcome(&outcome);
            }
            grid.trace().clone()
        }
    };
    let trace_path = args.trace.clone().or_else(|| args.out.as_ref().map(|p| {
        let mut s = p.clone().into_os_string();
        s.push(".trace.csv");
        PathBuf::from(s)
    }));
    if let Some(p) = trace_path {
        let mut csv = String::new();
        writeln!(csv, "{TRACE_HEADER}").unwrap();
        writeln!(csv, "{}", trace_row(&trace, ctx.millis(start))).unwrap();
        write_file(&p, &csv)?;
    }
    Ok(())
}

pub(crate) fn cover_check(n: usize, edges: usize, k: usize) -> bool {
    (k as f64) <= cover_bound(n, edges) + 1e-9
}
