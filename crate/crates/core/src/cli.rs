//! Input documents, command dispatch and report rendering shared by the
//! command-line tool and the C interface.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ext_ledger::{check_ledger, l_invariant_plane, socle_diagram, LedgerError, SocleKind};
use crate::hecke::{hecke_charpoly, ideal_generators, ClassifyJson, FrobeniusData, FrobeniusJson, HeckeError, HeckeJson};
use crate::hodge_kernel::{glue_subspace, generator_matrices, recover_parameters, summarize, KernelError, BLOCK_LEN};
use crate::linalg::Subspace;
use crate::phi_module::{
    filtration_is_symplectic, general_position, hodge_vectors, nondegeneracy_poly, plucker_f2, standard_filtration,
    validate, weak_admissibility, PhiModuleError, PhiModuleJson,
};
use crate::scalar::{Field, RatFunc, Rational, ScalarError};
use crate::weyl::{WeylElement, WeylError};

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_DEGREE_VAR: &str = "GSP4H_MAX_DEGREE";
pub const DEFAULT_MAX_DEGREE: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Flag,
    Kernel,
    Recover,
    Glue,
    Matrices,
    Ledger,
    Socle,
    Hecke,
    Classify,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Validate,
        Command::Flag,
        Command::Kernel,
        Command::Recover,
        Command::Glue,
        Command::Matrices,
        Command::Ledger,
        Command::Socle,
        Command::Hecke,
        Command::Classify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Flag => "flag",
            Command::Kernel => "kernel",
            Command::Recover => "recover",
            Command::Glue => "glue",
            Command::Matrices => "matrices",
            Command::Ledger => "ledger",
            Command::Socle => "socle",
            Command::Hecke => "hecke",
            Command::Classify => "classify",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn citations(self) -> Vec<&'static str> {
        let v: &[&'static str] = match self {
            Command::Validate => &["genericity and non-criticality", "standard form of the Hodge filtration", "weak admissibility"],
            Command::Flag => &["standard form of the Hodge filtration", "anisotropic flags", "relative position to eigenflags"],
            Command::Kernel => &["summed tangent map to the torus", "surjectivity onto the Borel", "kernel dimension"],
            Command::Recover => &["Hodge parameters from the kernel", "eigenline characterisation of the unipotent twist"],
            Command::Glue => &["gluing along parabolic Levi centres", "dimension of the L-invariant space"],
            Command::Matrices => &["eight generator matrices of the kernel"],
            Command::Ledger => &["extension group dimensions", "exact sequences of extensions", "local-global dimension match"],
            Command::Socle => &["constituents of the locally analytic principal series", "socle filtration"],
            Command::Hecke => &["Frobenius characteristic polynomial from Hecke eigenvalues", "generators of the maximal ideal"],
            Command::Classify => &["classicality inequalities", "gap bound between weights", "refinement admissibility"],
        };
        v.to_vec()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
    Dot,
}

/// Ordered by severity, so the worst status of a batch is the maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Invalid,
    Degenerate,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 2,
            Status::Degenerate => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusInput {
    pub l: u64,
    /// Leading coefficient first.
    pub coeffs: [String; 5],
    pub sim: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleInput {
    /// `ps1`, `pi1` or `pimin`.
    pub kind: String,
    #[serde(default)]
    pub w: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelInput {
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default)]
    pub symbolic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_module: Option<PhiModuleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hecke: Option<HeckeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<FrobeniusInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify: Option<ClassifyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub socle: Option<SocleInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelInput>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

impl InputDocument {
    pub fn from_json(s: &str) -> Result<Self, String> {
        if s.trim().is_empty() {
            return Ok(InputDocument { version: SCHEMA_VERSION, ..Default::default() });
        }
        serde_json::from_str(s).map_err(|e| format!("malformed input document: {e}"))
    }

    pub fn with_params(a: &str, b: &str) -> Self {
        InputDocument {
            version: SCHEMA_VERSION,
            params: Some(ParamsJson { a: a.into(), b: b.into() }),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub citations: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Invalid(String),
    Degenerate(String),
}

impl Failure {
    fn status(&self) -> Status {
        match self {
            Failure::Invalid(_) => Status::Invalid,
            Failure::Degenerate(_) => Status::Degenerate,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Degenerate(m) => m,
        }
    }
}

impl From<ScalarError> for Failure {
    fn from(e: ScalarError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<PhiModuleError> for Failure {
    fn from(e: PhiModuleError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<WeylError> for Failure {
    fn from(e: WeylError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::BadKernel(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Degenerate(e.to_string()),
        }
    }
}

impl From<HeckeError> for Failure {
    fn from(e: HeckeError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<LedgerError> for Failure {
    fn from(e: LedgerError) -> Self {
        match e {
            LedgerError::InvalidIndexSet(_) | LedgerError::Weyl(_) => Failure::Invalid(e.to_string()),
            LedgerError::Kernel(k) => k.into(),
            LedgerError::LedgerInconsistent { .. } => Failure::Degenerate(e.to_string()),
        }
    }
}

pub fn max_degree() -> u32 {
    std::env::var(MAX_DEGREE_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DEGREE)
}

fn guard_degree<F: Field>(x: &F, what: &str) -> Result<(), Failure> {
    let cap = max_degree();
    if x.degree() > cap {
        return Err(Failure::Invalid(format!("{what} has degree {} above the cap {cap} ({MAX_DEGREE_VAR})", x.degree())));
    }
    Ok(())
}

/// `(a, b)` from the document, after structural validation of any φ-module.
fn parameters<F: Field>(doc: &InputDocument, symbolic: bool) -> Result<(F, F), Failure> {
    let (a, b) = if let Some(pm) = &doc.phi_module {
        let data = pm.parse::<F>()?;
        let report = validate(&data);
        if let Some(bad) = report.failed().find(|c| !c.degeneracy) {
            return Err(Failure::Invalid(format!("check {} failed: {}", bad.name, bad.witness.clone().unwrap_or_default())));
        }
        (data.a, data.b)
    } else if let Some(p) = &doc.params {
        (F::parse_wire(&p.a)?, F::parse_wire(&p.b)?)
    } else if symbolic {
        (F::parse_wire("a")?, F::parse_wire("b")?)
    } else {
        return Err(Failure::Invalid("document needs phi_module or params".into()));
    };
    guard_degree(&a, "a")?;
    guard_degree(&b, "b")?;
    if nondegeneracy_poly(&a, &b).is_zero() {
        return Err(Failure::Degenerate("Hodge parameters are degenerate: (ab+a+b)(a+b)(b+1)ab = 0".into()));
    }
    Ok((a, b))
}

fn parse_kernel<F: Field>(k: &KernelInput) -> Result<Subspace<F>, Failure> {
    let rows: Vec<Vec<F>> = k
        .basis
        .iter()
        .map(|r| r.iter().map(|s| F::parse_wire(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != BLOCK_LEN) {
        return Err(Failure::Invalid(format!("kernel rows must have {BLOCK_LEN} entries")));
    }
    Ok(Subspace::span(BLOCK_LEN, &rows))
}

fn run_parametric<F: Field>(cmd: Command, doc: &InputDocument, symbolic: bool) -> Result<Value, Failure> {
    match cmd {
        Command::Validate => {
            let pm = doc.phi_module.as_ref().ok_or_else(|| Failure::Invalid("validate needs phi_module".into()))?;
            let data = pm.parse::<F>()?;
            let report = validate(&data);
            let admissibility = if report.valid { Some(weak_admissibility(&data)?) } else { None };
            let mut v = json!({ "validity": report, "weak_admissibility": admissibility });
            if !report.valid {
                let status = if report.structurally_valid() { "degenerate" } else { "invalid" };
                v["verdict"] = json!(status);
            }
            Ok(v)
        }
        Command::Flag => {
            let (a, b) = parameters::<F>(doc, symbolic)?;
            let filt = standard_filtration(&a, &b).ok_or_else(|| Failure::Degenerate("Hodge vectors are dependent".into()))?;
            let steps: Vec<Value> = filt.flag.spaces().iter().map(|s| json!(s)).collect();
            Ok(json!({
                "vectors": hodge_vectors(&a, &b).iter().map(|v| v.iter().map(|x| x.to_wire()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "steps": steps,
                "anisotropic": filtration_is_symplectic(&filt),
                "general_position": general_position(&filt.flag),
                "plucker_f2": plucker_f2(&a, &b).iter().map(|x| x.to_wire()).collect::<Vec<_>>(),
            }))
        }
        Command::Kernel => {
            let (a, b) = parameters::<F>(doc, symbolic)?;
            let (summary, kernel) = summarize(&a, &b)?;
            Ok(json!({ "summary": summary, "basis": kernel }))
        }
        Command::Recover => {
            if let Some(k) = &doc.kernel {
                let kernel = parse_kernel::<F>(k)?;
                let rec = recover_parameters(&kernel)?;
                return Ok(json!({ "a": rec.a.to_wire(), "b": rec.b.to_wire() }));
            }
            let (a, b) = parameters::<F>(doc, symbolic)?;
            let (_, kernel) = summarize(&a, &b)?;
            let rec = recover_parameters(&kernel)?;
            if rec.a != a || rec.b != b {
                return Err(Failure::Degenerate(format!(
                    "round trip failed: recovered ({}, {})",
                    rec.a.to_wire(),
                    rec.b.to_wire()
                )));
            }
            Ok(json!({
                "a": rec.a.to_wire(),
                "b": rec.b.to_wire(),
                "line_b": rec.line_b.iter().map(|x| x.to_wire()).collect::<Vec<_>>(),
                "line_a": rec.line_a.iter().map(|x| x.to_wire()).collect::<Vec<_>>(),
                "round_trip": true,
            }))
        }
        Command::Glue => {
            let glue = glue_subspace::<F>();
            let mut v = json!({ "dim": glue.dim(), "basis": glue });
            if doc.phi_module.is_some() || doc.params.is_some() || symbolic {
                let (a, b) = parameters::<F>(doc, symbolic)?;
                let (summary, _) = summarize(&a, &b)?;
                let plane = l_invariant_plane(&a, &b)?;
                v["contained_in_kernel"] = json!(summary.glue_in_kernel);
                v["quotient_dim"] = json!(summary.quotient_dim);
                v["l_invariant_plane"] = json!({
                    "dim": plane.basis.dim(),
                    "generator_coordinates": plane.basis,
                    "complements_glue": plane.complements_glue,
                    "recovered": { "a": plane.recovered_a.to_wire(), "b": plane.recovered_b.to_wire() },
                    "multiplicity": "unknown",
                });
            }
            Ok(v)
        }
        Command::Matrices => {
            let (a, b) = parameters::<F>(doc, symbolic)?;
            let suite = generator_matrices(&a, &b)?;
            Ok(Value::Array(suite.iter().map(|(name, m)| json!({ "name": name, "rows": m })).collect()))
        }
        _ => unreachable!("non-parametric command"),
    }
}

fn run(cmd: Command, doc: &InputDocument, symbolic: bool) -> Result<Value, Failure> {
    if doc.version != SCHEMA_VERSION {
        return Err(Failure::Invalid(format!("unsupported schema version {}", doc.version)));
    }
    let symbolic = symbolic || doc.symbolic || doc.phi_module.as_ref().is_some_and(|p| p.symbolic);
    match cmd {
        Command::Ledger => Ok(json!(check_ledger()?)),
        Command::Socle => {
            let input = doc.socle.clone().unwrap_or(SocleInput { kind: "pi1".into(), w: None });
            let kind = match input.kind.as_str() {
                "ps1" => SocleKind::Ps1 { w: WeylElement::parse(input.w.as_deref().unwrap_or("id"))? },
                "pi1" => SocleKind::Pi1,
                "pimin" => SocleKind::Pimin,
                other => return Err(Failure::Invalid(format!("unknown socle kind {other:?}"))),
            };
            Ok(json!(socle_diagram(&kind)))
        }
        Command::Hecke => {
            if let Some(h) = &doc.hecke {
                let data = h.parse()?;
                let f = hecke_charpoly(&data)?;
                let back = ideal_generators(&f, data.l)?;
                Ok(json!({ "frobenius": FrobeniusJson::from(&f), "round_trip": back == data }))
            } else if let Some(fi) = &doc.frobenius {
                let coeffs: Vec<Rational> = fi.coeffs.iter().map(|s| Rational::parse_wire(s)).collect::<Result<_, _>>()?;
                let f = FrobeniusData { coeffs: coeffs.try_into().expect("five entries"), sim: Rational::parse_wire(&fi.sim)? };
                Ok(json!({ "hecke": HeckeJson::from(&ideal_generators(&f, fi.l)?) }))
            } else {
                Err(Failure::Invalid("hecke needs hecke or frobenius".into()))
            }
        }
        Command::Classify => {
            let c = doc.classify.as_ref().ok_or_else(|| Failure::Invalid("classify needs classify".into()))?;
            Ok(json!(c.run()?))
        }
        _ if symbolic => run_parametric::<RatFunc>(cmd, doc, true),
        _ => run_parametric::<Rational>(cmd, doc, false),
    }
}

/// Runs one command; never panics on bad input.
pub fn dispatch(cmd: Command, doc: &InputDocument, symbolic: bool) -> Report {
    let (status, payload, error) = match run(cmd, doc, symbolic) {
        Ok(v) => {
            let status = match v.get("verdict").and_then(|s| s.as_str()) {
                Some("invalid") => Status::Invalid,
                Some("degenerate") => Status::Degenerate,
                _ => Status::Ok,
            };
            (status, v, None)
        }
        Err(f) => (f.status(), Value::Null, Some(f.message().to_string())),
    };
    Report { command: cmd.name().into(), status, payload, citations: cmd.citations(), error }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchItem {
    pub command: String,
    #[serde(default)]
    pub document: Option<Value>,
}

fn run_item(item: &BatchItem, symbolic: bool) -> Report {
    let Some(cmd) = Command::parse(&item.command) else {
        return Report {
            command: item.command.clone(),
            status: Status::Invalid,
            payload: Value::Null,
            citations: Vec::new(),
            error: Some(format!("unknown command {:?}", item.command)),
        };
    };
    let doc = match &item.document {
        None => Ok(InputDocument { version: SCHEMA_VERSION, ..Default::default() }),
        Some(v) => serde_json::from_value::<InputDocument>(v.clone()).map_err(|e| format!("malformed input document: {e}")),
    };
    match doc {
        Ok(doc) => dispatch(cmd, &doc, symbolic),
        Err(e) => Report { command: cmd.name().into(), status: Status::Invalid, payload: Value::Null, citations: cmd.citations(), error: Some(e) },
    }
}

/// Order-preserving; a failing item never affects the others.
pub fn batch(items: &[BatchItem], symbolic: bool) -> Vec<Report> {
    items.par_iter().map(|item| run_item(item, symbolic)).collect()
}

pub fn parse_batch(s: &str) -> Result<Vec<BatchItem>, String> {
    serde_json::from_str(s).map_err(|e| format!("malformed batch: {e}"))
}

pub fn worst_status(reports: &[Report]) -> Status {
    reports.iter().map(|r| r.status).max().unwrap_or(Status::Ok)
}

/// A random rational point with `(ab+a+b)(a+b)(b+1)ab != 0`.
pub fn random_parameters<R: Rng>(rng: &mut R) -> (Rational, Rational) {
    loop {
        let mut draw = || Rational::new(rng.gen_range(-30i64..=30).into(), rng.gen_range(1i64..=12).into());
        let (a, b) = (draw(), draw());
        if !nondegeneracy_poly(&a, &b).is_zero() {
            return (a, b);
        }
    }
}

/// `count` recovery requests at random valid points.
pub fn random_sweep<R: Rng>(rng: &mut R, count: usize) -> Vec<BatchItem> {
    (0..count)
        .map(|_| {
            let (a, b) = random_parameters(rng);
            let doc = InputDocument::with_params(&a.to_wire(), &b.to_wire());
            BatchItem { command: "recover".into(), document: Some(serde_json::to_value(doc).expect("serializable")) }
        })
        .collect()
}

pub fn render_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("serializable")
}

fn render_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object() || e.is_array())) {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, x, indent + 2);
                } else {
                    let _ = writeln!(out, "{pad}{k}: {}", scalar_text(x));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() {
                    let _ = writeln!(out, "{pad}-");
                    render_value(out, x, indent + 2);
                } else {
                    let _ = writeln!(out, "{pad}{}", scalar_text(x));
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = format!("{} [{}]\n", r.command, serde_json::to_value(r.status).expect("status")).replace('"', "");
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error: {e}");
    }
    if r.command == "socle" && r.status == Status::Ok {
        if let Ok(d) = serde_json::from_value::<SocleText>(r.payload.clone()) {
            out.push_str(&d.text());
        }
    } else {
        render_value(&mut out, &r.payload, 0);
    }
    let _ = writeln!(out, "citations: {}", r.citations.join("; "));
    out
}

#[derive(Deserialize)]
struct SocleText {
    title: String,
    layers: Vec<Vec<String>>,
}

impl SocleText {
    fn into_diagram(self) -> crate::ext_ledger::SocleDiagram {
        crate::ext_ledger::SocleDiagram { title: self.title, layers: self.layers }
    }

    fn text(self) -> String {
        self.into_diagram().to_text()
    }
}

/// DOT output exists only for socle diagrams.
pub fn render_dot(r: &Report) -> Result<String, String> {
    if r.command != "socle" {
        return Err(format!("dot output is not available for {}", r.command));
    }
    if r.status != Status::Ok {
        return Err(r.error.clone().unwrap_or_else(|| "socle failed".into()));
    }
    let d: SocleText = serde_json::from_value(r.payload.clone()).map_err(|e| e.to_string())?;
    Ok(d.into_diagram().to_dot())
}

pub fn render(r: &Report, format: Format) -> Result<String, String> {
    match format {
        Format::Json => Ok(render_json(r)),
        Format::Text => Ok(render_text(r)),
        Format::Dot => render_dot(r),
    }
}
