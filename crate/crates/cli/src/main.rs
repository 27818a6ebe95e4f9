//! `legpath`: every verification and computation as a subcommand.
//!
//! Exit status is 0 when all checks pass, 1 when a check fails and 2 on
//! input errors. Inputs are a path to a `.lpg` file or inline text:
//! `key = value` pairs separated by `;`, or a bare expression (list) where a
//! function or vector is expected.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use legpath_core::cartan_forms::{
    assemble_phi, bianchi_defect, check_curvature_identities, curvature, maurer_cartan_form, sp_defect, Convention,
    FormMatrix, GroupElement,
};
use legpath_core::contact_jets::{base_chart, contact_ideal, frobenius_check, FrobeniusCertificate};
use legpath_core::flat_model::{is_lagrangian, quadric_to_lagrangian, verify_chart_identity, LinearSubspace, SymplecticSpace};
use legpath_core::quadric_osculation::{
    developable_from_family, identity_point, null_vector_check, osculating_family, osculating_quadric,
    rename_parameters, symmetric_differential, QuadricFamily,
};
use legpath_core::rep_decomp::{
    so_minimal_dims, tensor_decompose, verify_structure_decompositions, weyl_dimension, AlgebraId, IrrepLabel,
};
use legpath_core::report_io::{emit_problem, emit_report, load_problem, parse_rational, Check, Problem, ReportFormat, VerificationReport};
use legpath_core::suite::{run_criterion, DEFAULT_SEED};
use legpath_core::torsion_normalizer::{
    apply_gauge, apply_second_gauge, first_normalization_check, indices, residual_gauge_preserves,
    second_normalization_check, solve_first_normalization, solve_second_normalization, TorsionTensor,
};
use legpath_core::CoreError;
use legpath_symbolic::{parse_expr, Chart, Expression, RationalFunction, Q};
use num_traits::Zero;

#[derive(Parser, Debug)]
#[command(name = "legpath", version, about = "Exact checks for Legendrian path geometry")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frobenius test of a path system's contact ideal.
    Frobenius { system: String },
    /// Osculating quadric of `u = f(x)`, at `--at` or as a family.
    Osculate {
        f: String,
        /// Comma-separated rational point.
        #[arg(long)]
        at: Option<String>,
        #[command(flatten)]
        n: NOpt,
    },
    /// Osculating family of `f`, keyed by parameters t1..tn.
    Family {
        f: String,
        #[command(flatten)]
        n: NOpt,
    },
    /// Null-vector condition for X (default: the identity).
    Nullcheck {
        family: String,
        x: Option<String>,
        #[command(flatten)]
        n: NOpt,
    },
    /// Symmetric (n+1)-differential of a family.
    Symdiff {
        family: String,
        #[command(flatten)]
        n: NOpt,
    },
    /// Developable `(u, p)` for a null vector V (default: the identity).
    Developable {
        family: String,
        v: Option<String>,
        #[command(flatten)]
        n: NOpt,
    },
    /// Flat model checks.
    Flat {
        #[command(subcommand)]
        action: FlatAction,
    },
    /// Is a quadric's plane, or a given plane, Lagrangian?
    Lagrangian { input: String },
    /// Curvature of an assembled connection, with sp-membership and Bianchi.
    Curvature { phi: String },
    /// Maurer-Cartan form of a group element.
    Mc {
        g: String,
        #[arg(long, default_value = "path")]
        convention: String,
    },
    /// Structure identities of a connection's curvature.
    Identities { phi: String },
    /// First torsion normalization.
    NormalizeTorsion { t: String },
    /// Second normalization of the P-tensor.
    NormalizeP { p: String },
    /// Representation theory.
    Rep {
        #[command(subcommand)]
        action: RepAction,
    },
    /// Low-dimensional so(n+1) irreps.
    LemmaAudit {
        #[arg(long)]
        n: usize,
    },
    /// Acceptance criteria 1..=9 (or one of them).
    Suite {
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Args, Debug)]
struct NOpt {
    /// Number of base coordinates; inferred from the `x<k>` names by default.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum FlatAction {
    /// The chart identity on the contact chart of RP^{2n+1}.
    Verify {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum RepAction {
    /// Dimensions of irreps with small labels, or of one `--label`.
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "sp")]
        algebra: String,
        #[arg(long)]
        label: Option<String>,
    },
    /// Decomposition of a tensor product of two irreps.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "sp")]
        algebra: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// The structure decompositions with their dimension ledgers.
    Verify {
        #[arg(long)]
        n: usize,
    },
}

/// Input error (exit 2).
#[derive(Debug)]
struct InputError(String);

impl From<CoreError> for InputError {
    fn from(e: CoreError) -> Self {
        InputError(e.to_string())
    }
}

impl From<legpath_symbolic::SymbolicError> for InputError {
    fn from(e: legpath_symbolic::SymbolicError) -> Self {
        InputError(e.to_string())
    }
}

type CliResult<T> = Result<T, InputError>;

enum Output {
    Report(VerificationReport),
    Reports(Vec<VerificationReport>),
    Document(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        Format::Text => ReportFormat::Text,
        Format::Structured => ReportFormat::Structured,
    };
    match run(&cli) {
        Ok(Output::Document(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(r)) => {
            print!("{}", emit_report(&r, format));
            verdict(r.passed())
        }
        Ok(Output::Reports(rs)) => {
            for r in &rs {
                print!("{}", emit_report(r, format));
            }
            verdict(rs.iter().all(VerificationReport::passed))
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Reads `arg` inline when `inline` accepts it, otherwise as a file (or as
/// an inline `key = value; ...` document). Inline wins when both apply.
fn resolve<T>(arg: &str, inline: impl Fn(&str) -> Option<T>, doc: impl Fn(Problem) -> CliResult<T>) -> CliResult<T> {
    let is_file = Path::new(arg).is_file();
    if !arg.contains('=') {
        if let Some(v) = inline(arg) {
            if is_file {
                eprintln!("warning: `{arg}` is both a file and inline input; using it inline");
            }
            return Ok(v);
        }
    }
    doc(load(arg)?)
}

fn load(arg: &str) -> CliResult<Problem> {
    if arg.contains('=') {
        let mut text = String::new();
        if !arg.contains("format_version") {
            text.push_str("format_version = 1\n");
        }
        for part in arg.split(';') {
            text.push_str(part.trim());
            text.push('\n');
        }
        return Ok(load_problem(&text)?);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| InputError(format!("`{arg}` is neither valid inline input nor a readable file: {e}")))?;
    Ok(load_problem(&text)?)
}

/// Largest `k` with `x<k>` occurring in `s`, at least 1.
fn infer_n(s: &str) -> usize {
    let b = s.as_bytes();
    let mut best = 1;
    for (i, _) in s.match_indices('x') {
        if i > 0 && (b[i - 1].is_ascii_alphanumeric() || b[i - 1] == b'_') {
            continue;
        }
        let digits: String = s[i + 1..].chars().take_while(char::is_ascii_digit).collect();
        if let Ok(k) = digits.parse::<usize>() {
            best = best.max(k);
        }
    }
    best
}

fn parse_function(s: &str, n: &NOpt) -> Option<Expression> {
    let chart = base_chart(n.n.unwrap_or_else(|| infer_n(s)), &[] as &[&str]).ok()?;
    parse_expr(&chart, s).ok()
}

fn function(arg: &str, n: &NOpt) -> CliResult<Expression> {
    resolve(arg, |s| parse_function(s, n), |p| match p {
        Problem::Function(f) => Ok(f),
        other => Err(InputError(format!("expected a function, got {}", other.kind()))),
    })
}

/// A quadric family document, or a function whose osculating family is used.
fn family(arg: &str, n: &NOpt) -> CliResult<QuadricFamily> {
    let f = resolve(arg, |s| parse_function(s, n).map(Problem::Function), Ok)?;
    match f {
        Problem::QuadricFamily(q) => Ok(q),
        Problem::Function(f) => Ok(osculating_family(&f)?),
        other => Err(InputError(format!("expected a quadric family or a function, got {}", other.kind()))),
    }
}

/// A vector document, or comma-separated expressions on the family chart.
fn point(arg: Option<&str>, chart: &Chart) -> CliResult<Vec<Expression>> {
    let Some(arg) = arg else {
        return Ok(identity_point(chart)?);
    };
    let inline = |s: &str| s.split(',').map(|e| parse_expr(chart, e.trim()).ok()).collect::<Option<Vec<_>>>();
    resolve(arg, inline, |p| match p {
        Problem::Vector(c, v) if &c == chart => Ok(v),
        Problem::Vector(c, _) => Err(InputError(format!("vector lives on chart {}, family on {}", c.name(), chart.name()))),
        other => Err(InputError(format!("expected a vector, got {}", other.kind()))),
    })
}

fn rationals(s: &str) -> CliResult<Vec<Q>> {
    Ok(s.split(',').map(|x| parse_rational(x.trim())).collect::<Result<_, _>>()?)
}

fn labels(s: &str) -> CliResult<Vec<u32>> {
    s.split(',').map(|x| x.trim().parse::<u32>().map_err(|e| InputError(format!("label `{s}`: {e}")))).collect()
}

fn algebra(name: &str, n: usize) -> CliResult<AlgebraId> {
    let a = match name {
        "sp" => AlgebraId::Symplectic(n),
        "so" => AlgebraId::Orthogonal(n),
        other => return Err(InputError(format!("unknown algebra `{other}` (use sp or so)"))),
    };
    a.validate()?;
    Ok(a)
}

fn form_values(r: &mut VerificationReport, prefix: &str, m: &FormMatrix) {
    for (i, j, f) in m.entries() {
        if !f.is_zero() {
            r.value(format!("{prefix}[{}][{}]", i + 1, j + 1), f);
        }
    }
}

fn run(cli: &Cli) -> CliResult<Output> {
    let show = |v: &Q| v.to_string();
    Ok(match &cli.command {
        Command::Frobenius { system } => {
            let Problem::PathSystem(s) = load(system)? else {
                return Err(InputError("expected a path_system".into()));
            };
            let mut r = VerificationReport::new("frobenius").with_n(s.n());
            match frobenius_check(&contact_ideal(&s))? {
                FrobeniusCertificate::Pass => r.push(Check::pass("frobenius")),
                FrobeniusCertificate::Fail { generator, residue } => {
                    r.value("generator", &generator);
                    r.value("residue", &residue);
                    r.push(Check::fail("frobenius", format!("d{generator} reduces to {residue}")));
                }
            }
            Output::Report(r)
        }
        Command::Osculate { f, at, n } => {
            let f = function(f, n)?;
            let quad = match at {
                Some(at) => osculating_quadric(&f, &rationals(at)?)?,
                None => osculating_family(&f)?,
            };
            Output::Document(emit_problem(&Problem::QuadricFamily(quad)))
        }
        Command::Family { f, n } => {
            let fam = osculating_family(&function(f, n)?)?;
            let names: Vec<String> = (1..=fam.n()).map(|i| format!("t{i}")).collect();
            Output::Document(emit_problem(&Problem::QuadricFamily(rename_parameters(&fam, &names)?)))
        }
        Command::Nullcheck { family: fam, x, n } => {
            let fam = family(fam, n)?;
            let x = point(x.as_deref(), fam.chart())?;
            let check = null_vector_check(&fam, &x)?;
            let mut r = VerificationReport::new("nullcheck").with_n(fam.n()).with_chart(fam.chart().name());
            for (k, row) in check.rows.iter().enumerate() {
                r.push(Check::from_bool(format!("row{k}"), row.is_zero(), || row.to_string()));
            }
            Output::Report(r)
        }
        Command::Symdiff { family: fam, n } => {
            let fam = family(fam, n)?;
            let sd = symmetric_differential(&fam)?;
            let mut r = VerificationReport::new("symdiff").with_n(fam.n()).with_chart(fam.chart().name());
            r.value("symmetric_differential", &sd);
            r.push(Check::from_bool("symmetric_differential_zero", sd.is_zero(), || sd.to_string()));
            Output::Report(r)
        }
        Command::Developable { family: fam, v, n } => {
            let fam = family(fam, n)?;
            let v = point(v.as_deref(), fam.chart())?;
            let dev = developable_from_family(&fam, &v)?;
            let mut r = VerificationReport::new("developable").with_n(fam.n()).with_chart(fam.chart().name());
            r.value("u", &dev.u);
            for (i, p) in dev.p.iter().enumerate() {
                r.value(format!("p[{}]", i + 1), p);
            }
            r.push(Check::pass("null_vector"));
            Output::Report(r)
        }
        Command::Flat { action: FlatAction::Verify { n } } => {
            let id = verify_chart_identity(*n)?;
            let mut r = VerificationReport::new("flat_chart_identity").with_n(*n);
            r.value("lhs", &id.lhs);
            r.value("rhs", &id.rhs);
            r.push(Check::from_bool("chart_identity", id.holds(), || id.residual().to_string()));
            Output::Report(r)
        }
        Command::Lagrangian { input } => {
            let (plane, space): (LinearSubspace, SymplecticSpace) = match load(input)? {
                Problem::Plane(p) => {
                    let space = SymplecticSpace::new(p.n())?;
                    (p, space)
                }
                Problem::QuadricFamily(q) => {
                    let space = SymplecticSpace::new(q.n())?;
                    (quadric_to_lagrangian(&q, &space)?, space)
                }
                other => return Err(InputError(format!("expected a quadric or a plane, got {}", other.kind()))),
            };
            let mut r = VerificationReport::new("lagrangian").with_n(space.n());
            r.value("dim", plane.dim());
            let ok = plane.dim() == space.n() + 1 && is_lagrangian(&plane, &space)?;
            r.push(Check::from_bool("lagrangian", ok, || format!("plane of dimension {} is not Lagrangian", plane.dim())));
            Output::Report(r)
        }
        Command::Curvature { phi } => {
            let Problem::Connection(conv, blocks) = load(phi)? else {
                return Err(InputError("expected a connection".into()));
            };
            let phi = assemble_phi(&blocks, conv)?;
            let omega = curvature(&phi)?;
            let mut r = VerificationReport::new("curvature").with_n(blocks.n()).with_chart(blocks.chart.name());
            r.value("convention", conv.name());
            form_values(&mut r, "Omega", &omega.omega);
            let defect = sp_defect(&phi.full());
            r.push(Check::from_bool("sp_membership", defect.is_zero(), || defect.to_string()));
            let b = bianchi_defect(&phi, &omega)?;
            r.push(Check::from_bool("bianchi", b.is_zero(), || b.to_string()));
            Output::Report(r)
        }
        Command::Mc { g, convention } => {
            let Problem::GroupElement(g) = load(g)? else {
                return Err(InputError("expected a group_element".into()));
            };
            let conv = Convention::parse(convention).ok_or_else(|| InputError(format!("unknown convention `{convention}`")))?;
            mc_report(&g, conv)?
        }
        Command::Identities { phi } => {
            let Problem::Connection(conv, blocks) = load(phi)? else {
                return Err(InputError("expected a connection".into()));
            };
            let omega = curvature(&assemble_phi(&blocks, conv)?)?;
            let mut r = VerificationReport::new("curvature_identities").with_n(blocks.n()).with_chart(blocks.chart.name());
            r.value("convention", conv.name());
            r.extend(check_curvature_identities(&omega, &blocks)?);
            Output::Report(r)
        }
        Command::NormalizeTorsion { t } => {
            let Problem::Torsion(t) = load(t)? else {
                return Err(InputError("expected a torsion".into()));
            };
            let n = t.n();
            let g = solve_first_normalization(&t)?;
            let normalized = apply_gauge(&t, &g)?;
            let mut r = VerificationReport::new("normalize_torsion").with_n(n);
            r.value("p", &g.p);
            for i in 0..n {
                r.value(format!("c1[{}]", i + 1), &g.c1[i]);
            }
            for idx in indices(n, 2) {
                r.value(format!("c2[{}][{}]", idx[0] + 1, idx[1] + 1), g.c2.get(&idx));
            }
            for idx in indices(n, 3).filter(|x| x[1] <= x[2]) {
                r.value(format!("c3[{}][{}][{}]", idx[0] + 1, idx[1] + 1, idx[2] + 1), g.c3.get(&idx));
            }
            r.push(first_normalization_check(&normalized, show));
            let symbolic: TorsionTensor<RationalFunction> = normalized.map(|v| RationalFunction::constant(v.clone()));
            let p_chart = Chart::with_params("p", &[] as &[&str], &["p"])?;
            let p = Expression::var(&p_chart, "p")?.into_value();
            let mut residual = residual_gauge_preserves(&symbolic, p, |v| format!("{v:?}"))?;
            residual.name = "residual_p_gauge".into();
            r.push(residual);
            Output::Report(r)
        }
        Command::NormalizeP { p } => {
            let Problem::PTensor(pt) = load(p)? else {
                return Err(InputError("expected a p_tensor".into()));
            };
            let n = pt.n();
            let h = solve_second_normalization(&pt)?;
            let out = apply_second_gauge(&pt, &h, &Q::zero())?;
            let mut r = VerificationReport::new("normalize_p").with_n(n);
            r.value("t", &h.t);
            for i in 0..n {
                r.value(format!("h[{}]", i + 1), &h.h1[i]);
                for j in 0..n {
                    r.value(format!("h[{}][{}]", i + 1, j + 1), h.h2.get(&[i, j]));
                }
            }
            r.push(second_normalization_check(&out, show));
            Output::Report(r)
        }
        Command::Rep { action } => rep(action)?,
        Command::LemmaAudit { n } => {
            let audit = so_minimal_dims(*n)?;
            let mut r = VerificationReport::new("lemma_audit").with_n(*n);
            r.value("algebra", audit.algebra);
            r.value("bound", audit.bound);
            r.value("dims", audit.dims.iter().map(u64::to_string).collect::<Vec<_>>().join(", "));
            for (l, d) in &audit.irreps {
                r.value(format!("irrep.{l}"), d);
            }
            r.extend(audit.checks);
            Output::Report(r)
        }
        Command::Suite { criterion } => {
            let ids: Vec<u8> = match criterion {
                Some(k) if (1..=9).contains(k) => vec![*k],
                Some(k) => return Err(InputError(format!("no criterion {k}"))),
                None => (1..=9).collect(),
            };
            Output::Reports(ids.into_iter().map(|k| run_criterion(k, cli.seed)).collect::<Result<_, _>>()?)
        }
    })
}

fn mc_report(g: &GroupElement, conv: Convention) -> CliResult<Output> {
    let mut r = VerificationReport::new("maurer_cartan").with_chart(g.chart.name());
    let defect = g.symplectic_defect();
    if !defect.is_zero() {
        r.push(Check::fail("symplectic", "g^t J g - J is nonzero"));
        return Ok(Output::Report(r));
    }
    r.push(Check::pass("symplectic"));
    let phi = maurer_cartan_form(g, conv)?;
    r = r.with_n(phi.n());
    r.value("convention", conv.name());
    let full = phi.full();
    form_values(&mut r, "Phi", &full);
    let sp = sp_defect(&full);
    r.push(Check::from_bool("sp_membership", sp.is_zero(), || sp.to_string()));
    let omega = curvature(&phi)?;
    r.push(Check::from_bool("structure_equation", omega.is_zero(), || omega.omega.to_string()));
    Ok(Output::Report(r))
}

fn rep(action: &RepAction) -> CliResult<Output> {
    Ok(match action {
        RepAction::Dims { n, algebra: name, label } => {
            let alg = algebra(name, *n)?;
            let mut r = VerificationReport::new("rep_dims");
            r.value("algebra", alg);
            let ls = match label {
                Some(l) => vec![IrrepLabel::new(alg, labels(l)?)?],
                None => small_labels(alg)?,
            };
            for l in ls {
                r.value(format!("dim.{l}"), weyl_dimension(&l)?);
            }
            Output::Report(r)
        }
        RepAction::Decompose { n, algebra: name, a, b } => {
            let alg = algebra(name, *n)?;
            let (a, b) = (IrrepLabel::new(alg, labels(a)?)?, IrrepLabel::new(alg, labels(b)?)?);
            let parts = tensor_decompose(&a, &b)?;
            let (da, db) = (weyl_dimension(&a)?, weyl_dimension(&b)?);
            let mut r = VerificationReport::new("rep_decompose");
            r.value("product", format!("{a} x {b}"));
            let mut total = 0;
            let mut terms = Vec::new();
            for (l, m) in &parts {
                let d = weyl_dimension(l)?;
                total += m * d;
                terms.push(if *m == 1 { d.to_string() } else { format!("{m}*{d}") });
                r.value(format!("component.{l}"), m);
            }
            r.value("ledger", format!("{} = {}", da * db, terms.join("+")));
            r.push(Check::from_bool("dimension_conserved", total == da * db, || format!("{total} != {}", da * db)));
            Output::Report(r)
        }
        RepAction::Verify { n } => {
            let mut r = VerificationReport::new("rep_verify").with_n(*n);
            for line in verify_structure_decompositions(*n)? {
                r.value(format!("ledger.{}", line.name), &line.ledger);
                r.push(line.check());
            }
            Output::Report(r)
        }
    })
}

fn small_labels(alg: AlgebraId) -> CliResult<Vec<IrrepLabel>> {
    let rank = alg.rank();
    let mut out = vec![IrrepLabel::trivial(alg)?];
    for k in 0..rank {
        for a in 1..=2 {
            out.push(IrrepLabel::fundamental(alg, k, a)?);
        }
    }
    Ok(out)
}
