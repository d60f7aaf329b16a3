//! `cdiff`: command-line access to field arithmetic, function analysis and the
//! family verification drivers.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use cdiff_core::cdiff::{cddt_table, cdu, CDdtTable};
use cdiff_core::cubic::classify_cubic;
use cdiff_core::families::{self, Precondition};
use cdiff_core::report::{run_all, verify_timed};
use cdiff_core::walsh::walsh_spectrum;
use cdiff_core::{parse_func, Bijectivity, FamilyId, FieldCtx, FieldElem, Nonlinearity, Profile};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// `println!` that exits quietly when stdout is closed (e.g. piped into `head`).
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("error: cannot write output: {e}");
            std::process::exit(2);
        }
    }};
}

#[derive(Parser)]
#[command(name = "cdiff", version, about = "c-differential uniformity and Walsh analysis over small finite fields")]
struct Cli {
    /// Field description `p,n[,c_0,..,c_n]` (modulus coefficients from the
    /// constant term up; omitted means the default modulus). `run-all`
    /// accepts several.
    #[arg(long, global = true)]
    field: Vec<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the full c-DDT tables computed by `cdu` as CSV (`c,a,b,count`).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Worker threads for the parallel sweeps.
    #[arg(long, global = true, env = "CDIFF_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a field: order, modulus and generator.
    Field,
    /// Parse a function, print its normal form and check bijectivity.
    Func {
        #[arg(long)]
        func: String,
        /// Also print every value `F(x)`.
        #[arg(long)]
        values: bool,
    },
    /// Root counts of X^3 + X + a over GF(2^n).
    Cubic {
        /// The parameter `a`; every nonzero `a` when omitted.
        #[arg(long)]
        a: Option<String>,
    },
    /// Walsh coefficients of a GF(p)-valued function such as `Tr(X^3)`.
    Walsh {
        #[arg(long)]
        func: String,
        /// A single point; the whole spectrum when omitted.
        #[arg(long)]
        v: Option<String>,
    },
    /// c-differential uniformity of a function.
    Cdu {
        #[arg(long)]
        func: String,
        /// `all`, `subfield:m`, or one element.
        #[arg(long, default_value = "all")]
        c: String,
    },
    /// Permutation family constructors.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Check one family's claims exhaustively; exit status 1 on failure.
    Verify {
        #[command(flatten)]
        target: Target,
        /// Record the running time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Run every verification in a profile; exit status 1 on failure.
    RunAll {
        #[arg(long, default_value = "quick")]
        profile: Profile,
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Build one instance and report its conditions and bijectivity.
    Build {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        delta: String,
    },
}

#[derive(Args)]
struct Target {
    /// Family id: zh31, zh21, wbz31, lwc8 or lwc10.
    #[arg(long)]
    id: FamilyId,
    #[arg(long)]
    m: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// One field from `--field`, or `default` when none was given.
fn single_field(cli: &Cli, default: Option<FieldCtx>) -> Result<FieldCtx> {
    match cli.field.as_slice() {
        [] => default.context("--field is required"),
        [line] => FieldCtx::from_description(line).with_context(|| format!("bad --field `{line}`")),
        _ => bail!("this command takes a single --field"),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    outln!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Returns whether the command's own checks passed.
fn run(cli: &Cli) -> Result<bool> {
    if cli.csv.is_some() && !matches!(cli.command, Command::Cdu { .. }) {
        bail!("--csv applies to the cdu command only");
    }
    match &cli.command {
        Command::Field => field_cmd(cli),
        Command::Func { func, values } => func_cmd(cli, func, *values),
        Command::Cubic { a } => cubic_cmd(cli, a.as_deref()),
        Command::Walsh { func, v } => walsh_cmd(cli, func, v.as_deref()),
        Command::Cdu { func, c } => cdu_cmd(cli, func, c, cli.csv.as_ref()),
        Command::Family(FamilyCommand::Build { target, delta }) => family_cmd(cli, target, delta),
        Command::Verify { target, timings } => verify_cmd(cli, target, *timings),
        Command::RunAll { profile, timings } => run_all_cmd(cli, *profile, *timings),
    }
}

#[derive(Serialize)]
struct FieldInfo {
    field: String,
    p: u32,
    n: u32,
    order: u32,
    modulus: String,
    generator: String,
}

fn field_cmd(cli: &Cli) -> Result<bool> {
    let ctx = single_field(cli, None)?;
    let info = FieldInfo {
        field: ctx.description(),
        p: ctx.characteristic(),
        n: ctx.degree(),
        order: ctx.order(),
        modulus: ctx.modulus_string(),
        generator: ctx.poly_string(ctx.generator()),
    };
    if cli.json {
        print_json(&info)?;
    } else {
        outln!("GF({}^{}) with {} elements", info.p, info.n, info.order);
        outln!("modulus   {}", info.modulus);
        outln!("generator g = {}", info.generator);
        outln!("field     {}", info.field);
    }
    Ok(true)
}

#[derive(Serialize)]
struct FuncInfo {
    field: String,
    spec: String,
    permutation: bool,
    collision: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<String>>,
}

fn func_cmd(cli: &Cli, text: &str, values: bool) -> Result<bool> {
    let ctx = single_field(cli, None)?;
    let spec = parse_func(&ctx, text)?;
    let table = spec.compile(&ctx)?;
    let collision = match table.bijectivity() {
        Bijectivity::Permutation => None,
        Bijectivity::Collision { first, second } => Some([ctx.render_idx(first), ctx.render_idx(second)]),
    };
    let info = FuncInfo {
        field: ctx.description(),
        spec: spec.render(&ctx),
        permutation: collision.is_none(),
        collision,
        values: values.then(|| table.values().iter().map(|&y| ctx.render_idx(y)).collect()),
    };
    if cli.json {
        return print_json(&info).map(|_| true);
    }
    outln!("F(X) = {}", info.spec);
    match &info.collision {
        None => outln!("permutation of GF({}^{})", ctx.characteristic(), ctx.degree()),
        Some([a, b]) => outln!("not a permutation: F({a}) = F({b})"),
    }
    if let Some(vals) = &info.values {
        for (x, y) in vals.iter().enumerate() {
            outln!("F({}) = {y}", ctx.render_idx(x as u32));
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct CubicRow {
    a: String,
    root_count: usize,
    criterion: cdiff_core::cubic::CubicCriterion,
    roots: Vec<String>,
}

fn cubic_cmd(cli: &Cli, a: Option<&str>) -> Result<bool> {
    let ctx = single_field(cli, None)?;
    let params: Vec<FieldElem> = match a {
        Some(text) => vec![ctx.parse_elem(text)?],
        None => ctx.elements().skip(1).collect(),
    };
    let mut rows = Vec::new();
    for a in params {
        let v = classify_cubic(&ctx, a)?;
        rows.push(CubicRow {
            a: ctx.render(a),
            root_count: v.root_count,
            criterion: v.criterion,
            roots: v.roots.iter().map(|&r| ctx.render(r)).collect(),
        });
    }
    if cli.json {
        return print_json(&rows).map(|_| true);
    }
    for r in &rows {
        outln!("a = {:<8} roots {} ({:?}) {}", r.a, r.root_count, r.criterion, r.roots.join(" "));
    }
    Ok(true)
}

#[derive(Serialize)]
struct WalshRow {
    v: String,
    counts: Vec<u64>,
    squared_magnitude: Option<i64>,
}

fn walsh_cmd(cli: &Cli, text: &str, v: Option<&str>) -> Result<bool> {
    let ctx = single_field(cli, None)?;
    let f = parse_func(&ctx, text)?.compile(&ctx)?.to_prime_valued(&ctx)?;
    let spectrum = walsh_spectrum(&ctx, &f)?;
    let points: Vec<u32> = match v {
        Some(text) => vec![ctx.parse_elem(text)?.index()],
        None => (0..ctx.order()).collect(),
    };
    let rows: Vec<WalshRow> = points
        .iter()
        .map(|&v| {
            let pt = &spectrum[v as usize];
            WalshRow { v: ctx.render_idx(v), counts: pt.counts.clone(), squared_magnitude: pt.squared_magnitude() }
        })
        .collect();
    if cli.json {
        return print_json(&rows).map(|_| true);
    }
    for r in &rows {
        let sq = r.squared_magnitude.map_or("-".to_string(), |s| s.to_string());
        outln!("v = {:<8} |W|^2 = {:<8} counts {:?}", r.v, sq, r.counts);
    }
    Ok(true)
}

#[derive(Serialize)]
struct CduRow {
    c: String,
    uniformity: u32,
    class: Nonlinearity,
    histogram: std::collections::BTreeMap<u32, u64>,
    witnesses: Vec<[String; 2]>,
    excluded_a0: bool,
}

fn parse_c_set(ctx: &FieldCtx, text: &str) -> Result<Vec<FieldElem>> {
    if text == "all" {
        return Ok(ctx.elements().collect());
    }
    if let Some(m) = text.strip_prefix("subfield:") {
        let m: u32 = m.parse().with_context(|| format!("bad subfield degree `{m}`"))?;
        return Ok(ctx.subfield_elements(m)?);
    }
    Ok(vec![ctx.parse_elem(text)?])
}

fn cdu_cmd(cli: &Cli, text: &str, c: &str, csv: Option<&PathBuf>) -> Result<bool> {
    let ctx = single_field(cli, None)?;
    let table = parse_func(&ctx, text)?.compile(&ctx)?;
    let cs = parse_c_set(&ctx, c)?;
    let mut rows = Vec::new();
    let mut out = csv.map(|_| format!("{}\n", CDdtTable::CSV_HEADER));
    for &c in &cs {
        let s = cdu(&ctx, &table, c)?;
        rows.push(CduRow {
            c: ctx.render(c),
            uniformity: s.uniformity,
            class: s.class(),
            witnesses: s.witnesses.iter().map(|&(a, b)| [ctx.render_idx(a), ctx.render_idx(b)]).collect(),
            histogram: s.histogram,
            excluded_a0: s.excluded_a0,
        });
        if let Some(buf) = out.as_mut() {
            cddt_table(&ctx, &table, c)?.write_csv_rows(buf);
        }
    }
    if let (Some(path), Some(buf)) = (csv, out) {
        fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if cli.json {
        return print_json(&rows).map(|_| true);
    }
    for r in &rows {
        let first = r.witnesses.first().map_or(String::new(), |[a, b]| format!("e.g. (a, b) = ({a}, {b})"));
        outln!("c = {:<8} uniformity {} ({:?}) {first}", r.c, r.uniformity, r.class);
    }
    Ok(true)
}

#[derive(Serialize)]
struct FamilyInfo {
    family: FamilyId,
    m: u32,
    field: String,
    delta: String,
    spec: String,
    preconditions: Vec<Precondition>,
    qualifies: bool,
    permutation: bool,
}

fn family_cmd(cli: &Cli, target: &Target, delta: &str) -> Result<bool> {
    let ctx = single_field(cli, Some(target.id.field(target.m)?))?;
    let d = ctx.parse_elem(delta)?;
    let inst = families::build(&ctx, target.id, target.m, d)?;
    let info = FamilyInfo {
        family: target.id,
        m: target.m,
        field: ctx.description(),
        delta: ctx.render(d),
        spec: inst.spec.render(&ctx),
        permutation: inst.spec.compile(&ctx)?.is_permutation(),
        qualifies: inst.qualifies,
        preconditions: inst.preconditions,
    };
    if cli.json {
        print_json(&info)?;
    } else {
        outln!("{} m = {} over {}", info.family, info.m, info.field);
        outln!("F(X) = {}", info.spec);
        for p in &info.preconditions {
            outln!("  [{}] {}: {}", if p.holds { "x" } else { " " }, p.name, p.evidence);
        }
        outln!("qualifies: {}", info.qualifies);
        outln!("permutation: {}", info.permutation);
    }
    // A qualifying instance that fails to permute contradicts its construction.
    Ok(!info.qualifies || info.permutation)
}

fn print_report_text(r: &cdiff_core::VerdictReport) {
    outln!("{} m = {} over {} (g = {}): {}", r.id, r.m, r.field, r.generator, if r.pass { "PASS" } else { "FAIL" });
    for g in &r.groups {
        outln!(
            "  {:<28} {:?} over {} delta x {} c: max {}, {}",
            g.name,
            g.claim,
            g.deltas,
            g.cs,
            g.max,
            if g.pass { "ok" } else { "FAILED" }
        );
    }
    for s in &r.descriptive {
        outln!("  {:<28} (not claimed) histogram {:?}", s.name, s.histogram);
    }
    for o in &r.observations {
        let tag = match (o.asserted, o.holds) {
            (true, true) => "ok",
            (true, false) => "FAILED",
            (false, _) => "note",
        };
        outln!("  {:<28} {tag}: {}", o.name, o.detail);
    }
    if let Some(f) = r.first_failure() {
        outln!("  first failure: {f}");
    }
    if let Some(ms) = r.runtime_ms {
        outln!("  {ms} ms");
    }
}

fn verify_cmd(cli: &Cli, target: &Target, timings: bool) -> Result<bool> {
    let ctx = single_field(cli, Some(target.id.field(target.m)?))?;
    let report = verify_timed(&ctx, target.id, target.m, timings)?;
    if cli.json {
        print_json(&report)?;
    } else {
        print_report_text(&report);
    }
    Ok(report.pass)
}

fn run_all_cmd(cli: &Cli, profile: Profile, timings: bool) -> Result<bool> {
    let fields = cli
        .field
        .iter()
        .map(|line| FieldCtx::from_description(line).with_context(|| format!("bad --field `{line}`")))
        .collect::<Result<Vec<_>>>()?;
    let all = run_all(profile, &fields, timings)?;
    if cli.json {
        print_json(&all)?;
    } else {
        for r in &all.reports {
            print_report_text(r);
        }
        outln!("{}", if all.pass { "all verifications passed" } else { "some verifications FAILED" });
    }
    Ok(all.pass)
}
