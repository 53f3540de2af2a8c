//! `gl2modrep`: decomposition, identity checks, operators, Hom spaces and
//! weight-shift planning for `GL₂(F_q)` from the command line.
//!
//! Exit codes: 0 success, 1 domain rejection (a rejected plan, a failed
//! check, a library error), 2 usage error.

mod term;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gl2modrep::brauer::{char_equal, CharVector};
use gl2modrep::field::{FieldCtx, PrimePower};
use gl2modrep::k0::identities::{verify_identity, Identity, IdentityKind};
use gl2modrep::k0::{K0Ring, RawTerm, RuleSet};
use gl2modrep::modrep::{check_equivariance, coker_char, generators, hom_space_dim, ModuleSpec};
use gl2modrep::shift::{
    compile_f2, compile_lambda, plan_f2, plan_general, shift_vector_tables, F2Params, Op, PrimeSplit, Selector,
    ShiftChoice, WeightParams,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use term::{parse_blocks, parse_grid, parse_range, parse_term};

#[derive(Parser)]
#[command(name = "gl2modrep", version, about = "Exact modular representation theory of GL2(F_q)")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

const TERM_HELP: &str = "Term grammar: [c *] e^m * Mk[i] * Mk[i] ...  (whitespace-insensitive; `e` = e^1, \
`Mk` = Mk[0], leading `-` negates). Ranges: a..b inclusive.";

#[derive(Subcommand)]
enum Command {
    /// Standard (Jordan-Hölder) form of a sum of terms.
    #[command(after_help = TERM_HELP)]
    Decompose(DecomposeArgs),
    /// Check an identity family over parameter ranges.
    #[command(after_help = TERM_HELP)]
    Verify(VerifyArgs),
    /// Build intertwining operators and report rank, equivariance, cokernel.
    #[command(after_help = TERM_HELP)]
    Operators(OperatorsArgs),
    /// Dimension of the space of G-maps det^s ⊗ SRC → DST.
    #[command(after_help = TERM_HELP)]
    Homdim(HomdimArgs),
    /// Plan a holomorphic weight shift.
    Plan(PlanArgs),
    /// Shift-vector tables of the generalized Dickson and D operators.
    Tables(TablesArgs),
    /// Brauer character of a sum of terms on every regular class.
    #[command(after_help = TERM_HELP)]
    Chartable(ChartableArgs),
}

#[derive(Args)]
struct Field {
    /// The prime p.
    #[arg(long)]
    p: u64,
    /// The exponent g, q = p^g.
    #[arg(long, default_value_t = 1)]
    g: u32,
}

impl Field {
    fn prime_power(&self) -> Result<PrimePower, Failure> {
        PrimePower::new(self.p, self.g).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rules {
    /// Reflection, Frobenius rule and product rule (any g).
    Phi,
    /// Reflection, the q ± 1 rule and product rule (g = 1).
    Sigma,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    field: Field,
    /// A term to add; repeat for sums.
    #[arg(long, required = true, allow_hyphen_values = true)]
    term: Vec<String>,
    #[arg(long, value_enum, default_value_t = Rules::Phi)]
    rules: Rules,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: Field,
    /// delta, sigma, pi, phi, phi-prime or inttt.
    #[arg(long)]
    identity: String,
    /// Range for k (default -2p..4p).
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Range for h (default -2p..4p).
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Range for n (default 0..2p).
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Range for m (default 0..2p).
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    /// Range for the twist i of inttt (default 0..g-1).
    #[arg(long)]
    i: Option<String>,
    #[arg(long, value_enum, default_value_t = Rules::Phi)]
    rules: Rules,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpKind {
    Theta,
    Dickson,
    D,
    SerreD,
    All,
}

#[derive(Args)]
struct OperatorsArgs {
    #[command(flatten)]
    field: Field,
    /// Source degrees, one per twist; each entry an integer or a range (e.g. 0..2,1).
    #[arg(long)]
    ks: String,
    #[arg(long, value_enum, default_value = "all", value_delimiter = ',')]
    kind: Vec<OpKind>,
    /// Only operators at this twist α.
    #[arg(long)]
    alpha: Option<u32>,
    /// Only Θ_β / D_β with this subscript.
    #[arg(long)]
    beta: Option<u32>,
    /// Determinant power of the source.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    det: i64,
    /// For injective operators, also compare the cokernel's character with
    /// its class in K0 (dense; small cases only).
    #[arg(long)]
    coker_class: bool,
    /// Print the matrix dump of the single selected operator.
    #[arg(long)]
    dump: bool,
}

#[derive(Args)]
struct HomdimArgs {
    #[command(flatten)]
    field: Field,
    /// Source module as a term, e.g. "e^2*M1[0]*M2[1]".
    #[arg(long)]
    src: String,
    /// Destination module as a term.
    #[arg(long)]
    dst: String,
    /// Extra determinant twist s.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    det: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    /// Shifts by p^β ± 1 in every position.
    General,
    /// The two-embedding family with multiplicities n..z.
    F2,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, value_enum, default_value_t = Theorem::General)]
    theorem: Theorem,
    /// The odd prime p.
    #[arg(long)]
    p: u64,
    /// Residue degrees f_1,...,f_r (general).
    #[arg(long, default_value = "2")]
    f: String,
    /// Weights, blocks separated by ';' (e.g. "4,4;6").
    #[arg(long)]
    k: String,
    #[arg(long, allow_hyphen_values = true)]
    w: i64,
    /// β (general).
    #[arg(long)]
    beta: Option<u32>,
    /// theta/d per position, blocks separated by ';' (general).
    #[arg(long)]
    choices: Option<String>,
    #[arg(long, default_value_t = 0)]
    n: i64,
    #[arg(long, default_value_t = 0)]
    m: i64,
    #[arg(long, default_value_t = 0)]
    r: i64,
    #[arg(long, default_value_t = 0)]
    s: i64,
    #[arg(long, default_value_t = 0)]
    t: i64,
    #[arg(long, default_value_t = 0)]
    u: i64,
    #[arg(long, default_value_t = 0)]
    v: i64,
    #[arg(long, default_value_t = 0)]
    z: i64,
    /// Determinant twist α (f2).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    alpha: i64,
    /// Second determinant twist (f2); the target is only established when it equals α.
    #[arg(long, allow_hyphen_values = true)]
    twist_beta: Option<i64>,
    /// Build Λ on each block and report rank and equivariance.
    #[arg(long)]
    compile: bool,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long)]
    g: u32,
    /// Also evaluate the entries at this p.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args)]
struct ChartableArgs {
    #[command(flatten)]
    field: Field,
    #[arg(long, required = true, allow_hyphen_values = true)]
    term: Vec<String>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

/// What a command produced; `ok = false` is a domain rejection.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let format = if cli.json { Format::Json } else { cli.format };
    let result = match &cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Verify(a) => verify(a),
        Command::Operators(a) => operators(a),
        Command::Homdim(a) => homdim(a),
        Command::Plan(a) => plan(a),
        Command::Tables(a) => tables(a),
        Command::Chartable(a) => chartable(a),
    };
    match result {
        Ok(report) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("json") + "\n",
                Format::Text => report.text,
            };
            if let Err(e) = emit(cli.out.as_ref(), &body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: Option<&PathBuf>, body: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn ring(pp: PrimePower, rules: Rules) -> Result<K0Ring, Failure> {
    let rules = match rules {
        Rules::Phi => RuleSet::DeltaPhiPi,
        Rules::Sigma => RuleSet::DeltaSigmaPi,
    };
    K0Ring::with_rules(pp, rules).map_err(|e| Failure::Usage(e.to_string()))
}

fn terms(pp: PrimePower, raw: &[String]) -> Result<Vec<RawTerm>, Failure> {
    raw.iter().map(|t| parse_term(pp, t).map_err(Failure::Usage)).collect()
}

fn decompose(a: &DecomposeArgs) -> Result<Report, Failure> {
    let pp = a.field.prime_power()?;
    let ring = ring(pp, a.rules)?;
    let raw = terms(pp, &a.term)?;
    let v = ring.normalize(&raw);
    if !char_equal(pp, &v, &raw) {
        return Err(Failure::Domain("standard form does not match the input's character".into()));
    }
    Ok(Report { json: v.to_json(), text: format!("{v}\ndim {}\n", v.dim()), ok: true })
}

fn range_or(s: &Option<String>, default: std::ops::RangeInclusive<i64>) -> Result<Vec<i64>, Failure> {
    match s {
        Some(s) => parse_range(s).map_err(Failure::Usage),
        None => Ok(default.collect()),
    }
}

fn verify(a: &VerifyArgs) -> Result<Report, Failure> {
    let pp = a.field.prime_power()?;
    let kind: IdentityKind = a.identity.parse().map_err(Failure::Usage)?;
    let ring = ring(pp, a.rules)?;
    let p = pp.p() as i64;
    let ks = range_or(&a.k, -2 * p..=4 * p)?;
    let hs = range_or(&a.h, -2 * p..=4 * p)?;
    let ns = range_or(&a.n, 0..=2 * p)?;
    let ms = range_or(&a.m, 0..=2 * p)?;
    let is = range_or(&a.i, 0..=pp.g() as i64 - 1)?;
    if is.iter().any(|i| *i < 0) {
        return Err(Failure::Usage("twists must be non-negative".into()));
    }
    let mut ids = Vec::new();
    match kind {
        IdentityKind::Delta => ids.extend(ks.iter().map(|&k| Identity::Delta { k })),
        IdentityKind::Sigma => ids.extend(ks.iter().map(|&k| Identity::Sigma { k })),
        IdentityKind::Phi => ids.extend(ks.iter().map(|&k| Identity::Phi { k })),
        IdentityKind::Pi => {
            for &n in &ns {
                ids.extend(ms.iter().map(|&m| Identity::Pi { n, m }));
            }
        }
        IdentityKind::PhiPrime => {
            for &k in &ks {
                ids.extend(hs.iter().map(|&h| Identity::PhiPrime { k, h }));
            }
        }
        IdentityKind::Inttt => {
            for &k in &ks {
                for &h in &hs {
                    ids.extend(is.iter().map(|&i| Identity::Inttt { k, h, i: i as u32 }));
                }
            }
        }
    }
    let reports: Vec<_> = ids.par_iter().map(|id| verify_identity(&ring, *id)).collect();
    let failures: Vec<_> = reports.iter().filter(|r| !r.holds()).collect();
    let all_hold = failures.is_empty();
    let json = json!({
        "identity": kind.name(),
        "p": pp.p(),
        "g": pp.g(),
        "checked": reports.len(),
        "all_hold": all_hold,
        "failures": failures.iter().map(|r| json!({
            "instance": r.identity.to_string(),
            "normal_forms_equal": r.normal_forms_equal,
            "characters_equal": r.characters_equal,
            "normal_form_faithful": r.normal_form_faithful,
            "lhs": r.lhs.to_json(),
            "rhs": r.rhs.to_json(),
        })).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    if all_hold {
        let _ = writeln!(text, "all hold ({} instances of {kind}, p={}, g={})", reports.len(), pp.p(), pp.g());
    } else {
        let _ = writeln!(text, "{} of {} instances fail:", failures.len(), reports.len());
        for r in &failures {
            let _ = writeln!(text, "  {}: lhs {} | rhs {}", r.identity, r.lhs, r.rhs);
        }
    }
    Ok(Report { json, text, ok: all_hold })
}

fn selected_ops(g: u32, a: &OperatorsArgs) -> Vec<Op> {
    let want = |k: OpKind| a.kind.contains(&OpKind::All) || a.kind.contains(&k);
    let mut ops = Vec::new();
    for sub in 1..g {
        for twist in 0..g {
            if want(OpKind::Theta) {
                ops.push(Op::Theta { twist, sub });
            }
        }
    }
    for twist in 0..g {
        if want(OpKind::Dickson) {
            ops.push(Op::Dickson { twist });
        }
    }
    for sub in 1..g {
        for twist in 0..g {
            if want(OpKind::D) {
                ops.push(Op::D { twist, sub });
            }
        }
    }
    for twist in 0..g {
        if want(OpKind::SerreD) {
            ops.push(Op::SerreD { twist });
        }
    }
    ops.retain(|op| {
        let sub = match op {
            Op::Theta { sub, .. } | Op::D { sub, .. } => Some(*sub),
            _ => None,
        };
        a.alpha.is_none_or(|x| x == op.twist()) && a.beta.is_none_or(|b| sub == Some(b))
    });
    ops
}

fn operators(a: &OperatorsArgs) -> Result<Report, Failure> {
    let pp = a.field.prime_power()?;
    let f = FieldCtx::from_prime_power(pp);
    let grid = parse_grid(&a.ks).map_err(Failure::Usage)?;
    if grid.iter().any(|ks| ks.len() != pp.g() as usize || ks.iter().any(|k| *k < 0)) {
        return Err(Failure::Usage(format!("--ks needs {} non-negative entries", pp.g())));
    }
    let ops = selected_ops(pp.g(), a);
    if ops.is_empty() {
        return Err(Failure::Usage("no operator matches the selection".into()));
    }
    if a.dump {
        if grid.len() != 1 || ops.len() != 1 {
            return Err(Failure::Usage("--dump needs exactly one operator and one degree vector".into()));
        }
        let map = ops[0].build(&f, &grid[0], a.det).map_err(domain)?;
        let dump = map.to_dump_json(&f).map_err(domain)?;
        let text = serde_json::to_string(&dump).expect("json") + "\n";
        return Ok(Report { json: dump, text, ok: true });
    }
    let gens = generators(&f).map_err(domain)?;
    let jobs: Vec<(Vec<i64>, Op)> = grid.iter().flat_map(|ks| ops.iter().map(move |op| (ks.clone(), *op))).collect();
    let rows: Vec<Result<Value, Failure>> = jobs
        .par_iter()
        .map(|(ks, op)| {
            let map = op.build(&f, ks, a.det).map_err(domain)?;
            let equivariant = check_equivariance(&f, &map, &gens).map_err(domain)?;
            let rank = map.rank(&f);
            let mut row = json!({
                "op": op.to_string(),
                "ks": ks,
                "dst": map.dst.degrees(),
                "det_twist": map.det_twist,
                "src_dim": map.src.dim(),
                "dst_dim": map.dst.dim(),
                "rank": rank,
                "injective": rank == map.src.dim(),
                "zero": map.is_zero(),
                "coker_dim": map.dst.dim() - rank,
                "equivariant": equivariant,
            });
            if a.coker_class && rank == map.src.dim() {
                // [dst] - [det^δ ⊗ src] in K0 against the explicit quotient
                let cv = coker_char(&f, &map).map_err(domain)?;
                let mut src = map.src.to_term();
                src.m += map.det_twist as i64;
                let class = CharVector::of_terms(pp, &[map.dst.to_term(), src.negated()]);
                row["coker_class_matches"] = json!(cv == class);
            }
            Ok(row)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let ok = rows.iter().all(|r| r["equivariant"] == json!(true) && r.get("coker_class_matches").is_none_or(|v| v == true));
    let mut text = String::new();
    for r in &rows {
        let _ = write!(
            text,
            "{:<10} ks={} -> {}  rank {}/{}  coker {}  {}{}",
            r["op"].as_str().unwrap_or_default(),
            r["ks"],
            r["dst"],
            r["rank"],
            r["src_dim"],
            r["coker_dim"],
            if r["equivariant"] == json!(true) { "equivariant" } else { "NOT equivariant" },
            if r["injective"] == json!(true) { ", injective" } else { "" },
        );
        if let Some(c) = r.get("coker_class_matches") {
            let _ = write!(text, ", coker class {}", if c == true { "matches" } else { "differs" });
        }
        text.push('\n');
    }
    Ok(Report { json: json!({ "p": pp.p(), "g": pp.g(), "operators": rows }), text, ok })
}

fn module(pp: PrimePower, s: &str) -> Result<ModuleSpec, Failure> {
    let t = parse_term(pp, s).map_err(Failure::Usage)?;
    if t.coeff != 1.into() {
        return Err(Failure::Usage(format!("a module term takes no coefficient: {s:?}")));
    }
    ModuleSpec::new(pp, t.m, t.factors).map_err(|e| Failure::Usage(e.to_string()))
}

fn homdim(a: &HomdimArgs) -> Result<Report, Failure> {
    let pp = a.field.prime_power()?;
    let f = FieldCtx::from_prime_power(pp);
    let src = module(pp, &a.src)?;
    let dst = module(pp, &a.dst)?;
    let dim = hom_space_dim(&f, &src, &dst, a.det).map_err(domain)?;
    let json = json!({ "p": pp.p(), "g": pp.g(), "src": src, "dst": dst, "det": a.det, "dim": dim });
    Ok(Report { json, text: format!("{dim}\n"), ok: true })
}

fn plan(a: &PlanArgs) -> Result<Report, Failure> {
    let k = parse_blocks(&a.k).map_err(Failure::Usage)?;
    match a.theorem {
        Theorem::General => {
            let f: Vec<u32> = a
                .f
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Failure::Usage(format!("bad residue degree {x:?}"))))
                .collect::<Result<_, _>>()?;
            let ps = PrimeSplit::new(a.p, f).map_err(|e| Failure::Usage(e.to_string()))?;
            let beta = a.beta.ok_or_else(|| Failure::Usage("--beta is required".into()))?;
            let choices = a.choices.as_deref().ok_or_else(|| Failure::Usage("--choices is required".into()))?;
            let selectors: Vec<Vec<Selector>> = choices
                .split(';')
                .map(|b| b.split(',').map(|x| x.parse::<Selector>().map_err(Failure::Usage)).collect())
                .collect::<Result<_, _>>()?;
            let plan = plan_general(&ps, &WeightParams::new(k, a.w), &ShiftChoice::new(beta, selectors));
            let mut json = plan.to_json();
            let mut text = match (&plan.target, &plan.rejection) {
                (Some(t), _) => format!(
                    "accepted under {}: k' = {:?}, w' = {}\n",
                    plan.condition.map(|c| c.to_string()).unwrap_or_default(),
                    t.k,
                    t.w
                ),
                (None, Some(r)) => format!("rejected by {r}\n"),
                (None, None) => "rejected\n".into(),
            };
            let mut ok = plan.accepted;
            if a.compile && !plan.recipe.is_empty() {
                let mut reports = Vec::new();
                for j in 0..plan.recipe.len() {
                    let rep = compile_lambda(&plan, j).map_err(domain)?;
                    text += &lambda_line(j, &rep);
                    ok &= !plan.accepted || rep.injective;
                    reports.push(serde_json::to_value(&rep).expect("json"));
                }
                json["lambda"] = Value::Array(reports);
            }
            Ok(Report { json, text, ok })
        }
        Theorem::F2 => {
            let [k0, k1] = k.concat()[..] else {
                return Err(Failure::Usage("--k needs exactly two entries k0,k1".into()));
            };
            let params = F2Params {
                p: a.p,
                k0,
                k1,
                w: a.w,
                n: a.n,
                m: a.m,
                r: a.r,
                s: a.s,
                t: a.t,
                u: a.u,
                v: a.v,
                z: a.z,
                alpha: a.alpha,
                beta: a.twist_beta,
            };
            let plan = plan_f2(&params);
            let mut json = serde_json::to_value(&plan).expect("json");
            let mut text = match (&plan.target, &plan.rejection) {
                (Some(t), _) => format!(
                    "accepted under {}: (k0', k1'; w') = ({}, {}; {}){}\n",
                    plan.condition.map(|c| c.to_string()).unwrap_or_default(),
                    t.k0,
                    t.k1,
                    t.w,
                    if plan.verified { "" } else { " [unverified: second twist differs from α]" }
                ),
                (None, Some(r)) => format!("rejected by {r}\n"),
                (None, None) => "rejected\n".into(),
            };
            let mut ok = plan.accepted;
            if a.compile && plan.accepted {
                let rep = compile_f2(&params).map_err(domain)?;
                text += &lambda_line(0, &rep);
                ok &= rep.injective;
                json["lambda"] = serde_json::to_value(&rep).expect("json");
            }
            Ok(Report { json, text, ok })
        }
    }
}

fn lambda_line(j: usize, rep: &gl2modrep::shift::LambdaReport) -> String {
    let ops: Vec<String> = rep.recipe.iter().map(ToString::to_string).collect();
    format!(
        "block {}: Λ = {} on {:?} -> {:?}: rank {}/{}{}{}\n",
        j + 1,
        if ops.is_empty() { "id".to_string() } else { ops.iter().rev().cloned().collect::<Vec<_>>().join(" ∘ ") },
        rep.src.degrees(),
        rep.dst.degrees(),
        rep.rank,
        rep.src_dim,
        if rep.injective { ", injective" } else { ", NOT injective" },
        match rep.equivariant {
            Some(true) => ", equivariant",
            Some(false) => ", NOT equivariant",
            None if rep.local_equivariant => ", equivariant (per operator)",
            None => ", NOT equivariant",
        }
    )
}

fn tables(a: &TablesArgs) -> Result<Report, Failure> {
    if a.g == 0 {
        return Err(Failure::Usage("g must be at least 1".into()));
    }
    let (theta, d) = shift_vector_tables(a.g);
    let mut text = String::new();
    let mut json = json!({ "g": a.g });
    for (name, rows) in [("theta", &theta), ("d", &d)] {
        let mut out = Vec::new();
        for r in rows.iter() {
            let mut row = serde_json::to_value(r).expect("json");
            let _ = write!(text, "{:<10} {}", r.label, r.vector_string());
            if let Some(p) = a.p {
                let vals = r.evaluate(p, a.g);
                let _ = write!(text, "  = {vals:?}");
                row["value"] = json!(vals);
            }
            text.push('\n');
            out.push(row);
        }
        text.push('\n');
        json[name] = Value::Array(out);
    }
    Ok(Report { json, text, ok: true })
}

fn chartable(a: &ChartableArgs) -> Result<Report, Failure> {
    let pp = a.field.prime_power()?;
    let raw = terms(pp, &a.term)?;
    let cv = CharVector::of_terms(pp, &raw);
    let mut text = String::new();
    for (c, v) in cv.classes.iter().zip(&cv.values) {
        let _ = writeln!(text, "{:<40} {v}", serde_json::to_string(c).expect("json"));
    }
    Ok(Report { json: json!({ "p": pp.p(), "g": pp.g(), "classes": cv.to_json() }), text, ok: true })
}
