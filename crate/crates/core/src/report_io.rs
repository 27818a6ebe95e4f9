//! The `.lpg` key-value document format: problem loading, value emission and
//! verification reports.
//!
//! A document is a list of `key = value` lines. Blank lines and lines
//! starting with `#` are ignored. Every document starts with
//! `format_version = 1` and `kind = <kind>`. Indices in keys are 1-based,
//! e.g. `F[1][1][1] = x2`. Expressions and forms use the symbolic grammar.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use legpath_symbolic::{format_scalar, parse_expr, parse_form, Chart, DifferentialForm, Expression, Matrix, Q};

use crate::cartan_forms::{ConnectionBlocks, Convention, GroupElement};
use crate::contact_jets::{JetChart, PathSystem};
use crate::error::{invariant, CoreError, Result};
use crate::flat_model::{LinearSubspace, SymplecticSpace};
use crate::quadric_osculation::QuadricFamily;
use crate::torsion_normalizer::{indices, PTensorQ, Tensor, Torsion};

pub const FORMAT_VERSION: &str = "1";
pub const FILE_EXTENSION: &str = "lpg";

/// One named verdict. A failing check always carries a residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: String,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, residual: String::new() }
    }

    /// An empty residual is replaced by a placeholder so the report stays valid.
    pub fn fail(name: impl Into<String>, residual: impl Into<String>) -> Self {
        let mut residual = residual.into();
        if residual.is_empty() {
            residual = "<unspecified>".into();
        }
        Check { name: name.into(), pass: false, residual }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, residual: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, residual())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

/// Checks sorted by name, plus named result values. Timings are not
/// recorded so that structured output is reproducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    pub n: Option<usize>,
    pub chart: Option<String>,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport { subject: subject.into(), n: None, chart: None, checks: Vec::new(), values: BTreeMap::new() }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_chart(mut self, chart: impl Into<String>) -> Self {
        self.chart = Some(chart.into());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn value(&mut self, key: impl Into<String>, value: impl ToString) {
        self.values.insert(key.into(), value.to_string());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn validate(&self) -> Result<()> {
        for (k, c) in self.checks.iter().enumerate() {
            if !c.pass && c.residual.trim().is_empty() {
                return Err(invariant(format!("check[{}].residual", k + 1), "failed checks need a residual"));
            }
        }
        Ok(())
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn emit_report(report: &VerificationReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Text => {
            let _ = writeln!(out, "report: {}", report.subject);
            if let Some(n) = report.n {
                let _ = writeln!(out, "n: {n}");
            }
            if let Some(c) = &report.chart {
                let _ = writeln!(out, "chart: {c}");
            }
            for c in &report.checks {
                if c.pass {
                    let _ = writeln!(out, "[PASS] {}", c.name);
                } else {
                    let _ = writeln!(out, "[FAIL] {}", c.name);
                    let _ = writeln!(out, "       residual: {}", one_line(&c.residual));
                }
            }
            for (k, v) in &report.values {
                let _ = writeln!(out, "{k}: {}", one_line(v));
            }
            let passed = report.checks.iter().filter(|c| c.pass).count();
            let verdict = if report.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "result: {verdict} ({passed}/{} checks)", report.checks.len());
        }
        ReportFormat::Structured => {
            let mut e = Emitter::new("report");
            e.kv("subject", &report.subject);
            if let Some(n) = report.n {
                e.kv("n", n);
            }
            if let Some(c) = &report.chart {
                e.kv("chart", c);
            }
            e.kv("checks", report.checks.len());
            for (k, c) in report.checks.iter().enumerate() {
                e.kv(&format!("check[{}].name", k + 1), &c.name);
                e.kv(&format!("check[{}].pass", k + 1), c.pass);
                e.kv(&format!("check[{}].residual", k + 1), one_line(&c.residual));
            }
            for (k, v) in &report.values {
                e.kv(&format!("value.{k}"), one_line(v));
            }
            e.kv("passed", report.passed());
            out = e.finish();
        }
    }
    out
}

struct Emitter {
    out: String,
}

impl Emitter {
    fn new(kind: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, "format_version = {FORMAT_VERSION}");
        let _ = writeln!(out, "kind = {kind}");
        Emitter { out }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key} = {value}");
    }

    fn chart(&mut self, c: &Chart) {
        self.kv("chart", c.name());
        self.kv("coords", c.coords().join(", "));
        if !c.params().is_empty() {
            self.kv("params", c.params().join(", "));
        }
    }

    fn finish(self) -> String {
        self.out
    }
}

fn idx_key(base: &str, idx: &[usize]) -> String {
    let mut s = base.to_string();
    for i in idx {
        let _ = write!(s, "[{}]", i + 1);
    }
    s
}

/// A parsed document before interpretation.
#[derive(Clone, Debug, Default)]
pub struct Document {
    /// key -> (value, line)
    entries: BTreeMap<String, (String, usize)>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let Some((key, value)) = t.split_once('=') else {
                return Err(CoreError::Format { line, message: "expected `key = value`".into() });
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(CoreError::Format { line, message: "empty key".into() });
            }
            if entries.insert(key.to_string(), (value.trim().to_string(), line)).is_some() {
                return Err(CoreError::Format { line, message: format!("duplicate key `{key}`") });
            }
        }
        let doc = Document { entries };
        match doc.entries.get("format_version") {
            None => return Err(CoreError::Format { line: 0, message: "missing format_version".into() }),
            Some((v, _)) if v != FORMAT_VERSION => return Err(CoreError::UnsupportedVersion(v.clone())),
            _ => {}
        }
        doc.required("kind")?;
        Ok(doc)
    }

    pub fn kind(&self) -> &str {
        &self.entries["kind"].0
    }

    pub fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    pub fn required(&self, key: &str) -> Result<(&str, usize)> {
        self.get(key).ok_or_else(|| CoreError::Format { line: 0, message: format!("missing key `{key}`") })
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let (v, line) = self.required(key)?;
        v.parse().map_err(|_| CoreError::Format { line, message: format!("`{key}` must be a nonnegative integer") })
    }

    fn list(&self, key: &str) -> Vec<String> {
        self.get(key)
            .map(|(v, _)| v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
            .unwrap_or_default()
    }

    /// Entries `base[i][j]..` with exactly `rank` indices, 0-based, each `< n`.
    fn indexed(&self, base: &str, rank: usize, n: usize) -> Result<Vec<(Vec<usize>, &str, usize)>> {
        let mut out = Vec::new();
        let prefix = format!("{base}[");
        for (key, (value, line)) in self.entries.range(prefix.clone()..) {
            if !key.starts_with(&prefix) {
                break;
            }
            let idx = parse_indices(&key[base.len()..])
                .ok_or_else(|| CoreError::Format { line: *line, message: format!("malformed index in `{key}`") })?;
            if idx.len() != rank || idx.iter().any(|&i| i == 0 || i > n) {
                return Err(CoreError::Format {
                    line: *line,
                    message: format!("`{key}` needs {rank} indices in 1..={n}"),
                });
            }
            out.push((idx.into_iter().map(|i| i - 1).collect(), value.as_str(), *line));
        }
        Ok(out)
    }

    /// Rejects keys outside `scalars` and `bases[..]`.
    fn only_keys(&self, scalars: &[&str], bases: &[&str]) -> Result<()> {
        let allowed: BTreeSet<&str> = ["format_version", "kind"].iter().chain(scalars).copied().collect();
        for (key, (_, line)) in &self.entries {
            let base = key.split('[').next().unwrap_or("");
            let ok = allowed.contains(key.as_str()) || (key.contains('[') && bases.contains(&base));
            if !ok {
                return Err(CoreError::Format { line: *line, message: format!("unknown key `{key}`") });
            }
        }
        Ok(())
    }

    fn chart(&self, default_name: &str) -> Result<Chart> {
        let name = self.get("chart").map(|(v, _)| v.to_string()).unwrap_or_else(|| default_name.to_string());
        let line = self.get("coords").map_or(0, |x| x.1);
        Chart::with_params(&name, &self.list("coords"), &self.list("params"))
            .map_err(|e| CoreError::Format { line, message: e.to_string() })
    }
}

fn parse_indices(s: &str) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let r = rest.strip_prefix('[')?;
        let close = r.find(']')?;
        out.push(r[..close].trim().parse().ok()?);
        rest = &r[close + 1..];
    }
    Some(out)
}

fn expr_at(chart: &Chart, key: &str, v: &str, line: usize) -> Result<Expression> {
    parse_expr(chart, v).map_err(|e| CoreError::Format { line, message: format!("{key}: {e}") })
}

fn form_at(chart: &Chart, key: &str, v: &str, line: usize) -> Result<DifferentialForm> {
    parse_form(chart, v).map_err(|e| CoreError::Format { line, message: format!("{key}: {e}") })
}

/// Parses a rational constant such as `-3/4`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let point = Chart::new("point", &[] as &[&str])?;
    parse_expr::<Q>(&point, s)?
        .as_constant()
        .ok_or_else(|| CoreError::Precondition(format!("`{s}` is not a rational constant")))
}

fn rational_at(key: &str, v: &str, line: usize) -> Result<Q> {
    parse_rational(v).map_err(|e| CoreError::Format { line, message: format!("{key}: {e}") })
}

/// Everything a document can describe.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    PathSystem(PathSystem),
    QuadricFamily(QuadricFamily),
    /// A function of the chart coordinates.
    Function(Expression),
    /// A list of expressions on one chart.
    Vector(Chart, Vec<Expression>),
    Plane(LinearSubspace),
    Torsion(Torsion),
    PTensor(PTensorQ),
    Connection(Convention, ConnectionBlocks),
    GroupElement(GroupElement),
    Report(VerificationReport),
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::PathSystem(_) => "path_system",
            Problem::QuadricFamily(_) => "quadric_family",
            Problem::Function(_) => "function",
            Problem::Vector(..) => "vector",
            Problem::Plane(_) => "plane",
            Problem::Torsion(_) => "torsion",
            Problem::PTensor(_) => "p_tensor",
            Problem::Connection(..) => "connection",
            Problem::GroupElement(_) => "group_element",
            Problem::Report(_) => "report",
        }
    }
}

pub fn load_problem_file(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoreError::Format { line: 0, message: format!("{}: {e}", path.display()) })?;
    load_problem(&text)
}

pub fn load_problem(text: &str) -> Result<Problem> {
    let doc = Document::parse(text)?;
    match doc.kind() {
        "path_system" => load_path_system(&doc).map(Problem::PathSystem),
        "quadric_family" => load_quadric_family(&doc).map(Problem::QuadricFamily),
        "function" => {
            doc.only_keys(&["chart", "coords", "params", "f"], &[])?;
            let chart = doc.chart("x")?;
            let (v, line) = doc.required("f")?;
            Ok(Problem::Function(expr_at(&chart, "f", v, line)?))
        }
        "vector" => {
            doc.only_keys(&["chart", "coords", "params", "n"], &["v"])?;
            let chart = doc.chart("x")?;
            let n = doc.usize("n")?;
            let mut v = vec![Expression::zero(&chart); n];
            for (idx, s, line) in doc.indexed("v", 1, n)? {
                v[idx[0]] = expr_at(&chart, "v", s, line)?;
            }
            Ok(Problem::Vector(chart, v))
        }
        "plane" => {
            doc.only_keys(&["n", "dim"], &["v"])?;
            let n = doc.usize("n")?;
            let dim = doc.usize("dim")?;
            let space = SymplecticSpace::new(n)?;
            let mut basis = vec![None; dim];
            for (idx, s, line) in doc.indexed("v", 1, dim)? {
                let v = s.split(',').map(|x| rational_at("v", x.trim(), line)).collect::<Result<Vec<_>>>()?;
                basis[idx[0]] = Some(v);
            }
            let basis = basis
                .into_iter()
                .enumerate()
                .map(|(k, v)| v.ok_or_else(|| CoreError::Format { line: 0, message: format!("missing v[{}]", k + 1) }))
                .collect::<Result<Vec<_>>>()?;
            Ok(Problem::Plane(LinearSubspace::new(&space, basis)?))
        }
        "torsion" => {
            doc.only_keys(&["n"], &["Ta", "Tb", "Tc", "Td"])?;
            let n = doc.usize("n")?;
            let mut t = Torsion::zero(n);
            for (name, slot) in [("Ta", &mut t.ta), ("Tb", &mut t.tb), ("Tc", &mut t.tc), ("Td", &mut t.td)] {
                fill_tensor(&doc, name, n, slot)?;
            }
            t.validate().map_err(|e| rename_paths(e, &[("ta", "Ta"), ("tb", "Tb"), ("tc", "Tc"), ("td", "Td")]))?;
            Ok(Problem::Torsion(t))
        }
        "p_tensor" => {
            doc.only_keys(&["n"], &["Pa", "Pb", "Pc", "Pd"])?;
            let n = doc.usize("n")?;
            let mut p = PTensorQ::zero(n);
            for (name, slot) in [("Pa", &mut p.pa), ("Pb", &mut p.pb), ("Pc", &mut p.pc), ("Pd", &mut p.pd)] {
                fill_tensor(&doc, name, n, slot)?;
            }
            p.validate().map_err(|e| rename_paths(e, &[("pa", "Pa"), ("pb", "Pb"), ("pc", "Pc"), ("pd", "Pd")]))?;
            Ok(Problem::PTensor(p))
        }
        "connection" => load_connection(&doc),
        "group_element" => {
            doc.only_keys(&["chart", "coords", "params", "size"], &["g"])?;
            let chart = doc.chart("c")?;
            let size = doc.usize("size")?;
            let mut g = Matrix::zeros(size, size);
            for (idx, s, line) in doc.indexed("g", 2, size)? {
                g[(idx[0], idx[1])] = expr_at(&chart, "g", s, line)?.into_value();
            }
            Ok(Problem::GroupElement(GroupElement::new(&chart, g)))
        }
        "report" => load_report(&doc).map(Problem::Report),
        other => Err(CoreError::Format { line: doc.get("kind").map_or(0, |x| x.1), message: format!("unknown kind `{other}`") }),
    }
}

fn rename_paths(e: CoreError, names: &[(&str, &str)]) -> CoreError {
    match e {
        CoreError::Invariant { mut path, message } => {
            for (from, to) in names {
                path = path.replace(&format!("{from}["), &format!("{to}["));
            }
            CoreError::Invariant { path, message }
        }
        other => other,
    }
}

fn fill_tensor(doc: &Document, name: &str, n: usize, slot: &mut Tensor<Q>) -> Result<()> {
    for (idx, s, line) in doc.indexed(name, slot.rank(), n)? {
        slot.set(&idx, rational_at(name, s, line)?);
    }
    Ok(())
}

fn load_path_system(doc: &Document) -> Result<PathSystem> {
    doc.only_keys(&["n", "params"], &["F"])?;
    let n = doc.usize("n")?;
    let jet = JetChart::with_params(n, &doc.list("params"))?;
    let mut given = BTreeMap::new();
    for (idx, s, line) in doc.indexed("F", 3, n)? {
        given.insert(idx, expr_at(jet.chart(), "F", s, line)?);
    }
    PathSystem::new(&jet, |i, j, k| given.get(&vec![i, j, k]).cloned().unwrap_or_else(|| Expression::zero(jet.chart())))
}

fn load_quadric_family(doc: &Document) -> Result<QuadricFamily> {
    doc.only_keys(&["chart", "coords", "params", "n", "a0"], &["a", "A"])?;
    let chart = doc.chart("family")?;
    let n = doc.usize("n")?;
    let z = || Expression::zero(&chart);
    let a0 = match doc.get("a0") {
        Some((v, line)) => expr_at(&chart, "a0", v, line)?,
        None => z(),
    };
    let mut a = vec![z(); n];
    for (idx, s, line) in doc.indexed("a", 1, n)? {
        a[idx[0]] = expr_at(&chart, "a", s, line)?;
    }
    let mut aa = vec![vec![z(); n]; n];
    for (idx, s, line) in doc.indexed("A", 2, n)? {
        aa[idx[0]][idx[1]] = expr_at(&chart, "A", s, line)?;
    }
    QuadricFamily::new(&chart, a0, a, aa)
}

const VECTOR_BLOCKS: [&str; 4] = ["theta", "omega", "beta", "mu"];
const MATRIX_BLOCKS: [&str; 3] = ["Theta", "alpha", "gamma"];

fn load_connection(doc: &Document) -> Result<Problem> {
    doc.only_keys(
        &["chart", "coords", "params", "n", "convention", "theta0", "rho", "psi"],
        &["theta", "omega", "beta", "mu", "Theta", "alpha", "gamma"],
    )?;
    let chart = doc.chart("c")?;
    let n = doc.usize("n")?;
    let convention = match doc.get("convention") {
        None => Convention::PathGeometry,
        Some((v, line)) => Convention::parse(v)
            .ok_or_else(|| CoreError::Format { line, message: format!("unknown convention `{v}` (path|normal)") })?,
    };
    let mut b = ConnectionBlocks::zero(&chart, n);
    for (key, slot) in [("theta0", &mut b.theta0), ("rho", &mut b.rho), ("psi", &mut b.psi)] {
        if let Some((v, line)) = doc.get(key) {
            *slot = form_at(&chart, key, v, line)?;
        }
    }
    for (key, slot) in VECTOR_BLOCKS.into_iter().zip([&mut b.theta, &mut b.omega, &mut b.beta, &mut b.mu]) {
        for (idx, s, line) in doc.indexed(key, 1, n)? {
            slot[idx[0]] = form_at(&chart, key, s, line)?;
        }
    }
    for (key, slot) in MATRIX_BLOCKS.into_iter().zip([&mut b.big_theta, &mut b.alpha, &mut b.gamma]) {
        for (idx, s, line) in doc.indexed(key, 2, n)? {
            slot[idx[0]][idx[1]] = form_at(&chart, key, s, line)?;
        }
    }
    b.validate()?;
    Ok(Problem::Connection(convention, b))
}

fn load_report(doc: &Document) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(doc.required("subject")?.0);
    if doc.get("n").is_some() {
        r.n = Some(doc.usize("n")?);
    }
    r.chart = doc.get("chart").map(|x| x.0.to_string());
    let count = doc.usize("checks")?;
    for k in 1..=count {
        let name = doc.required(&format!("check[{k}].name"))?.0.to_string();
        let (pass, line) = doc.required(&format!("check[{k}].pass"))?;
        let pass = match pass {
            "true" => true,
            "false" => false,
            _ => return Err(CoreError::Format { line, message: "pass must be true or false".into() }),
        };
        let residual = doc.get(&format!("check[{k}].residual")).map(|x| x.0.to_string()).unwrap_or_default();
        r.checks.push(Check { name, pass, residual });
    }
    for (key, (v, line)) in &doc.entries {
        if let Some(name) = key.strip_prefix("value.") {
            r.values.insert(name.to_string(), v.clone());
        } else if !key.starts_with("check[")
            && !["format_version", "kind", "subject", "n", "chart", "checks", "passed"].contains(&key.as_str())
        {
            return Err(CoreError::Format { line: *line, message: format!("unknown key `{key}`") });
        }
    }
    r.validate()?;
    Ok(r)
}

pub fn emit_problem(p: &Problem) -> String {
    let mut e = Emitter::new(p.kind());
    match p {
        Problem::PathSystem(s) => {
            let n = s.n();
            e.kv("n", n);
            let params = s.jet().chart().params();
            if !params.is_empty() {
                e.kv("params", params.join(", "));
            }
            for idx in indices(n, 3) {
                let v = s.get(idx[0], idx[1], idx[2]);
                if !v.is_zero() {
                    e.kv(&idx_key("F", &idx), v);
                }
            }
        }
        Problem::QuadricFamily(f) => {
            e.chart(f.chart());
            e.kv("n", f.n());
            e.kv("a0", f.a0());
            for i in 0..f.n() {
                if !f.a(i).is_zero() {
                    e.kv(&idx_key("a", &[i]), f.a(i));
                }
            }
            for idx in indices(f.n(), 2) {
                let v = f.aa(idx[0], idx[1]);
                if !v.is_zero() {
                    e.kv(&idx_key("A", &idx), v);
                }
            }
        }
        Problem::Function(f) => {
            e.chart(f.chart());
            e.kv("f", f);
        }
        Problem::Vector(chart, v) => {
            e.chart(chart);
            e.kv("n", v.len());
            for (i, x) in v.iter().enumerate() {
                e.kv(&idx_key("v", &[i]), x);
            }
        }
        Problem::Plane(p) => {
            let dim = p.basis().first().map_or(0, Vec::len);
            e.kv("n", dim / 2 - 1);
            e.kv("dim", p.dim());
            for (i, v) in p.basis().iter().enumerate() {
                e.kv(&idx_key("v", &[i]), v.iter().map(format_scalar).collect::<Vec<_>>().join(", "));
            }
        }
        Problem::Torsion(t) => {
            e.kv("n", t.n());
            for (name, slot) in [("Ta", &t.ta), ("Tb", &t.tb), ("Tc", &t.tc), ("Td", &t.td)] {
                for (idx, v) in slot.entries() {
                    e.kv(&idx_key(name, &idx), format_scalar(v));
                }
            }
        }
        Problem::PTensor(p) => {
            e.kv("n", p.n());
            for (name, slot) in [("Pa", &p.pa), ("Pb", &p.pb), ("Pc", &p.pc), ("Pd", &p.pd)] {
                for (idx, v) in slot.entries() {
                    e.kv(&idx_key(name, &idx), format_scalar(v));
                }
            }
        }
        Problem::Connection(conv, b) => {
            e.chart(&b.chart);
            e.kv("n", b.n());
            e.kv("convention", conv.name());
            for (key, f) in [("theta0", &b.theta0), ("rho", &b.rho), ("psi", &b.psi)] {
                if !f.is_zero() {
                    e.kv(key, f);
                }
            }
            for (key, v) in VECTOR_BLOCKS.into_iter().zip([&b.theta, &b.omega, &b.beta, &b.mu]) {
                for (i, f) in v.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
                    e.kv(&idx_key(key, &[i]), f);
                }
            }
            for (key, m) in MATRIX_BLOCKS.into_iter().zip([&b.big_theta, &b.alpha, &b.gamma]) {
                for (i, row) in m.iter().enumerate() {
                    for (j, f) in row.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
                        e.kv(&idx_key(key, &[i, j]), f);
                    }
                }
            }
        }
        Problem::GroupElement(g) => {
            e.chart(&g.chart);
            e.kv("size", g.g.rows());
            for idx in indices(g.g.rows(), 2) {
                let v = g.entry(idx[0], idx[1]);
                if !v.is_zero() {
                    e.kv(&idx_key("g", &idx), v);
                }
            }
        }
        Problem::Report(r) => return emit_report(r, ReportFormat::Structured),
    }
    e.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact_jets::{contact_ideal, frobenius_check, FrobeniusCertificate};
    use legpath_symbolic::q;

    #[test]
    fn defaults_and_versions() {
        let p = load_problem("format_version = 1\nkind = path_system\nn = 2\n").unwrap();
        let Problem::PathSystem(s) = p else { panic!() };
        assert_eq!(s, PathSystem::zero(&JetChart::new(2).unwrap()));
        assert_eq!(load_problem("format_version = 2\nkind = path_system\n"), Err(CoreError::UnsupportedVersion("2".into())));
        assert!(matches!(load_problem("kind = path_system\nn = 2\n"), Err(CoreError::Format { .. })));
        assert!(matches!(
            load_problem("format_version = 1\nkind = path_system\nn = 2\nG[1] = 0\n"),
            Err(CoreError::Format { line: 4, .. })
        ));
    }

    #[test]
    fn asymmetric_quadric_names_both_fields() {
        let doc = "format_version = 1\nkind = quadric_family\ncoords = s1, s2\nn = 2\nA[1][2] = 1\nA[2][1] = 2\n";
        match load_problem(doc) {
            Err(CoreError::Invariant { path, .. }) => assert_eq!(path, "A[1][2] vs A[2][1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let doc = "format_version = 1\nkind = function\ncoords = x1\n\nf = x1 +\n";
        assert!(matches!(load_problem(doc), Err(CoreError::Format { line: 5, .. })));
    }

    #[test]
    fn round_trips() {
        let jet = JetChart::with_params(2, &["c"]).unwrap();
        let mut s = PathSystem::zero(&jet);
        s.set(0, 0, 0, parse_expr(jet.chart(), "c*x2 + p12/2").unwrap()).unwrap();
        let mut t = Torsion::zero(2);
        t.tc.set(&[0, 1, 0, 1], q(3, 4));
        t.tc.set(&[1, 0, 0, 1], q(3, 4));
        t.tc.set(&[0, 1, 1, 0], q(-3, 4));
        t.tc.set(&[1, 0, 1, 0], q(-3, 4));
        let space = SymplecticSpace::new(1).unwrap();
        let plane = LinearSubspace::new(&space, vec![vec![q(1, 1), q(0, 1), q(2, 3), q(0, 1)]]).unwrap();
        let mut b = crate::cartan_forms::flat_blocks(&JetChart::new(1).unwrap());
        b.rho = b.omega[0].clone();
        let mut report = VerificationReport::new("demo").with_n(2);
        report.push(Check::fail("b", "x1*d(x2)"));
        report.push(Check::pass("a"));
        report.value("ledger", "6 = 5+1");
        for p in [
            Problem::PathSystem(s),
            Problem::Torsion(t),
            Problem::Plane(plane),
            Problem::Connection(Convention::NormalSymplectic, b),
            Problem::Report(report),
        ] {
            let text = emit_problem(&p);
            assert_eq!(load_problem(&text).unwrap(), p, "{text}");
        }
    }

    #[test]
    fn report_rendering() {
        let jet = JetChart::new(2).unwrap();
        let mut s = PathSystem::zero(&jet);
        s.set(0, 0, 0, jet.x(1)).unwrap();
        let FrobeniusCertificate::Fail { generator, residue } = frobenius_check(&contact_ideal(&s)).unwrap() else {
            panic!()
        };
        let mut r = VerificationReport::new("frobenius").with_n(2).with_chart("jet2");
        r.push(Check::fail(format!("closure_{generator}"), residue.to_string()));
        let text = emit_report(&r, ReportFormat::Text);
        let structured = emit_report(&r, ReportFormat::Structured);
        assert!(text.contains("[FAIL] closure_Theta11"), "{text}");
        assert!(structured.contains("check[1].pass = false"));
        assert!(structured.contains("d(x1) /\\ d(x2)"), "{structured}");
        assert_eq!(emit_report(&r, ReportFormat::Structured), structured);

        let empty = emit_report(&VerificationReport::new("none"), ReportFormat::Structured);
        let Problem::Report(back) = load_problem(&empty).unwrap() else { panic!() };
        assert!(back.checks.is_empty() && back.passed());
    }
}
