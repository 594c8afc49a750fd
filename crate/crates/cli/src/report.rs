//! Report structures and the two emitters (text, JSON).
//!
//! The JSON form is byte-reproducible for a fixed (input, seed, version):
//! all composite fields are ordered structs or `BTreeMap`s, all numbers are
//! exact rational strings, and the serializer is configured once.

use serde::{Deserialize, Serialize};

use polylip::rat::{format_rat, Rat};
use polylip::{ExtReal, HPolyhedron, RowKind};

pub const SCHEMA_VERSION: u32 = 1;

/// Extended real in transport form: `{"finite": "p/q"}`, `"+inf"`, `"-inf"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtRealOut {
    Infinite(String),
    Finite { finite: String },
}

impl ExtRealOut {
    pub fn from_ext(v: &ExtReal) -> Self {
        match v {
            ExtReal::MinusInf => ExtRealOut::Infinite("-inf".into()),
            ExtReal::Finite(r) => ExtRealOut::Finite { finite: format_rat(r) },
            ExtReal::PlusInf => ExtRealOut::Infinite("+inf".into()),
        }
    }

    pub fn text(&self) -> String {
        match self {
            ExtRealOut::Infinite(s) => s.clone(),
            ExtRealOut::Finite { finite } => finite.clone(),
        }
    }
}

/// Canonical H-form of an emitted set or cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HRepOut {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
    pub kinds: Vec<String>,
    pub dim: usize,
}

impl HRepOut {
    pub fn from_poly(p: &HPolyhedron) -> polylip::Result<Self> {
        let c = p.canonicalized()?;
        Ok(HRepOut {
            a: c.rows().iter().map(|r| r.iter().map(format_rat).collect()).collect(),
            b: c.rhs().iter().map(format_rat).collect(),
            kinds: c
                .kinds()
                .iter()
                .map(|k| match k {
                    RowKind::Le => "le".to_string(),
                    RowKind::Eq => "eq".to_string(),
                })
                .collect(),
            dim: c.dim(),
        })
    }
}

pub fn vec_out(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

/// One emitted witness: a named cone or set attached to a query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessOut {
    pub query: String,
    pub label: String,
    pub hrep: HRepOut,
    /// Whether the witness cone is the trivial cone `{0}` (absent for
    /// witnesses that are not cones).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trivial: Option<bool>,
}

/// One oracle record: a sampling sweep attached to a query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleOut {
    pub query: String,
    pub kind: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
    pub per_radius: Vec<(u32, ExtRealOut)>,
    pub plan: PlanOut,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanOut {
    pub seed: u64,
    pub radii: usize,
    pub samples: usize,
    pub norm: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Error,
    Skipped,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorOut {
    pub kind: String,
    pub message: String,
}

/// One query result. Value-bearing fields are optional so that every
/// operation writes only what it produces; field order is fixed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultOut {
    pub id: String,
    pub op: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<ExtRealOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<Vec<(String, bool)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<Vec<AuditOut>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditOut {
    pub name: String,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    pub detail: String,
}

impl ResultOut {
    pub fn new(id: String, op: String) -> Self {
        ResultOut {
            id,
            op,
            status: Status::Ok,
            value: None,
            point: None,
            conclusion: None,
            criterion: None,
            flags: None,
            audit: None,
            notes: Vec::new(),
            error: None,
            skipped_reason: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToolOut {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: ToolOut,
    pub command: String,
    pub instance_hash: String,
    pub seed: u64,
    pub results: Vec<ResultOut>,
    pub witnesses: Vec<WitnessOut>,
    pub oracle: Vec<OracleOut>,
}

impl Report {
    pub fn new(command: &str, instance_hash: String, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: ToolOut {
                name: "polylip".into(),
                version: env!("CARGO_PKG_VERSION").into(),
            },
            command: command.into(),
            instance_hash,
            seed,
            results: Vec::new(),
            witnesses: Vec::new(),
            oracle: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} — {} report ({}, seed {})\n",
            self.tool.name, self.tool.version, self.command, self.instance_hash, self.seed
        ));
        for r in &self.results {
            match r.status {
                Status::Skipped => {
                    out.push_str(&format!(
                        "{} {}: skipped ({})\n",
                        r.id,
                        r.op,
                        r.skipped_reason.as_deref().unwrap_or("not in this command")
                    ));
                }
                Status::Error => {
                    let e = r.error.as_ref();
                    out.push_str(&format!(
                        "{} {}: error [{}] {}\n",
                        r.id,
                        r.op,
                        e.map(|e| e.kind.as_str()).unwrap_or("unknown"),
                        e.map(|e| e.message.as_str()).unwrap_or("")
                    ));
                }
                Status::Ok => {
                    out.push_str(&format!("{} {}:", r.id, r.op));
                    if let Some(v) = &r.value {
                        out.push_str(&format!(" {}", v.text()));
                    }
                    if let Some(c) = &r.conclusion {
                        out.push_str(&format!(" {}", conclusion_text(c, r.criterion.as_deref())));
                    }
                    if let Some(flags) = &r.flags {
                        let parts: Vec<String> = flags
                            .iter()
                            .map(|(k, v)| format!("{k}={}", if *v { "yes" } else { "no" }))
                            .collect();
                        out.push_str(&format!(" [{}]", parts.join(", ")));
                    }
                    if let Some(audit) = &r.audit {
                        let total = audit.iter().filter(|a| a.applicable).count();
                        let passed = audit
                            .iter()
                            .filter(|a| a.applicable && a.passed == Some(true))
                            .count();
                        out.push_str(&format!(" audit {passed}/{total} applicable checks passed"));
                    }
                    out.push('\n');
                    if let Some(audit) = &r.audit {
                        for a in audit {
                            let mark = match (a.applicable, a.passed) {
                                (false, _) => "n/a ",
                                (true, Some(true)) => "pass",
                                (true, Some(false)) => "FAIL",
                                (true, None) => "????",
                            };
                            out.push_str(&format!("  [{mark}] {}: {}\n", a.name, a.detail));
                        }
                    }
                    for n in &r.notes {
                        out.push_str(&format!("  note: {n}\n"));
                    }
                }
            }
        }
        for w in &self.witnesses {
            let trivial = match w.trivial {
                Some(true) => " (trivial)",
                Some(false) => " (nontrivial)",
                None => "",
            };
            out.push_str(&format!(
                "witness {} {}{}: {}\n",
                w.query,
                w.label,
                trivial,
                hrep_text(&w.hrep)
            ));
        }
        for o in &self.oracle {
            out.push_str(&format!(
                "oracle {} {}: {}{}\n",
                o.query,
                o.kind,
                o.verdict,
                o.modulus
                    .as_ref()
                    .map(|m| format!(" (modulus {m})"))
                    .unwrap_or_default()
            ));
            let profile: Vec<String> = o
                .per_radius
                .iter()
                .map(|(k, v)| format!("2^-{k}: {}", v.text()))
                .collect();
            out.push_str(&format!("  profile: {}\n", profile.join(", ")));
        }
        out
    }
}

/// Text form of a criterion conclusion, citing the criterion by name.
pub fn conclusion_text(conclusion: &str, criterion: Option<&str>) -> String {
    let cite = criterion.unwrap_or("unnamed");
    match conclusion {
        "lipschitz" => format!("LIPSCHITZ (criterion: {cite}; witness cone trivial)"),
        "not-lipschitz" => format!("NOT-LIPSCHITZ (criterion: {cite}; witness cone nontrivial)"),
        "sufficient-condition-holds" => {
            format!("LIPSCHITZ (criterion: {cite}; sufficient condition holds)")
        }
        "sufficient-condition-fails" => format!(
            "SUFFICIENT-CONDITION-FAILS (criterion: {cite}; sufficient only; oracle escalation: \
             rerun under `verify` for an independent sampling sweep)"
        ),
        "undecided" => format!("UNDECIDED (criterion: {cite})"),
        other => format!("{other} (criterion: {cite})"),
    }
}

fn hrep_text(h: &HRepOut) -> String {
    if h.a.is_empty() {
        return format!("all of R^{}", h.dim);
    }
    let rows: Vec<String> = h
        .a
        .iter()
        .zip(&h.kinds)
        .zip(&h.b)
        .map(|((row, kind), b)| {
            let lhs: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            let rel = if kind == "eq" { "=" } else { "<=" };
            format!("[{}] {rel} {b}", lhs.join(", "))
        })
        .collect();
    rows.join("; ")
}
