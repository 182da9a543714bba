//! System spec files.
//!
//! ```toml
//! dimension = 2
//! adjacency = "full"            # "ring", "ring2", or [[1, 2], [2, 1]]
//!
//! [options]                     # optional
//! epsilon = "auto"              # "search" or a number
//! tolerance = 1e-9
//! norm = "spectral"             # "1", "inf" or "all"
//!
//! [[subsystem]]
//! name = "A1"
//! matrix = [[0.5, 0.1], [0.0, 0.3]]
//! ```
//!
//! Matrices are row-major. Edge indices in files are 1-based.

use serde::Deserialize;
use toml::Spanned;

use dwellgraph_core::analysis::SwitchedSystem;
use dwellgraph_core::graph::Adjacency;
use dwellgraph_core::numerics::{Norm, RealMatrix};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: `{field}`: {message}")]
    Validation { line: usize, field: String, message: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMatrix {
    pub name: String,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdjacencySpec {
    Full,
    /// One-sided ring `k → k+1`.
    Ring,
    /// Ring with both directions.
    Ring2,
    /// Explicit 0-based edges.
    Edges(Vec<(usize, usize)>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EpsilonSetting {
    Auto,
    Search,
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpecOptions {
    pub epsilon: Option<EpsilonSetting>,
    pub tolerance: Option<f64>,
    /// `None` tries every norm.
    pub norm: Option<Norm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpecFile {
    pub dimension: usize,
    pub subsystems: Vec<NamedMatrix>,
    pub adjacency: AdjacencySpec,
    pub options: SpecOptions,
}

impl SystemSpecFile {
    pub fn adjacency(&self) -> Adjacency {
        let m = self.subsystems.len();
        match &self.adjacency {
            AdjacencySpec::Full => Adjacency::fully_connected(m),
            AdjacencySpec::Ring => Adjacency::ring(m, false),
            AdjacencySpec::Ring2 => Adjacency::ring(m, true),
            AdjacencySpec::Edges(e) => Adjacency::new(m, e.iter().copied()),
        }
        .expect("validated adjacency")
    }

    pub fn matrices(&self) -> Vec<RealMatrix> {
        self.subsystems
            .iter()
            .map(|s| RealMatrix::from_rows(&s.rows).expect("validated matrix"))
            .collect()
    }

    pub fn system(&self) -> SwitchedSystem {
        SwitchedSystem::new(self.matrices(), self.adjacency()).expect("validated system")
    }
}

pub fn norm_name(norm: Norm) -> &'static str {
    match norm {
        Norm::Spectral => "spectral",
        Norm::One => "1",
        Norm::Infinity => "inf",
    }
}

/// `None` stands for "all".
pub fn parse_norm(s: &str) -> Result<Option<Norm>, String> {
    match s {
        "spectral" | "2" => Ok(Some(Norm::Spectral)),
        "1" => Ok(Some(Norm::One)),
        "inf" | "infinity" => Ok(Some(Norm::Infinity)),
        "all" => Ok(None),
        _ => Err(format!("unknown norm `{s}` (expected spectral, 1, inf or all)")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    dimension: Spanned<i64>,
    adjacency: Spanned<RawAdjacency>,
    options: Option<RawOptions>,
    subsystem: Spanned<Vec<RawSubsystem>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAdjacency {
    Keyword(String),
    Edges(Vec<Vec<i64>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubsystem {
    name: Option<String>,
    matrix: Spanned<Vec<Spanned<Vec<Spanned<f64>>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    epsilon: Option<Spanned<RawEpsilon>>,
    tolerance: Option<Spanned<f64>>,
    norm: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEpsilon {
    Value(f64),
    Keyword(String),
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn fail<T>(&self, span: core::ops::Range<usize>, field: impl Into<String>, message: impl Into<String>) -> Result<T, SpecError> {
        let start = span.start.min(self.text.len());
        Err(SpecError::Validation {
            line: self.text[..start].matches('\n').count() + 1,
            field: field.into(),
            message: message.into(),
        })
    }
}

pub fn parse_spec(text: &str) -> Result<SystemSpecFile, SpecError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    let ctx = Ctx { text };

    let n = *raw.dimension.get_ref();
    if n < 1 {
        return ctx.fail(raw.dimension.span(), "dimension", format!("must be at least 1, got {n}"));
    }
    let n = n as usize;

    let subsystems_span = raw.subsystem.span();
    let raw_subsystems = raw.subsystem.into_inner();
    if raw_subsystems.is_empty() {
        return ctx.fail(subsystems_span, "subsystem", "at least one subsystem is required");
    }
    let mut subsystems = Vec::with_capacity(raw_subsystems.len());
    for (i, s) in raw_subsystems.into_iter().enumerate() {
        let field = format!("subsystem[{}].matrix", i + 1);
        let matrix_span = s.matrix.span();
        let rows = s.matrix.into_inner();
        if rows.len() != n {
            return ctx.fail(matrix_span, field, format!("expected {n} rows, got {}", rows.len()));
        }
        let mut out = Vec::with_capacity(n);
        for (r, row) in rows.into_iter().enumerate() {
            let row_span = row.span();
            let row = row.into_inner();
            if row.len() != n {
                return ctx.fail(row_span, format!("{field}[{}]", r + 1), format!("expected {n} entries, got {}", row.len()));
            }
            let mut vals = Vec::with_capacity(n);
            for (c, v) in row.into_iter().enumerate() {
                if !v.get_ref().is_finite() {
                    return ctx.fail(v.span(), format!("{field}[{}][{}]", r + 1, c + 1), format!("non-finite entry {}", v.get_ref()));
                }
                vals.push(*v.get_ref());
            }
            out.push(vals);
        }
        subsystems.push(NamedMatrix { name: s.name.unwrap_or_else(|| format!("A{}", i + 1)), rows: out });
    }
    let m = subsystems.len();

    let adj_span = raw.adjacency.span();
    let adjacency = match raw.adjacency.into_inner() {
        RawAdjacency::Keyword(k) => match k.as_str() {
            "full" => AdjacencySpec::Full,
            "ring" | "ring2" if m < 2 => {
                return ctx.fail(adj_span, "adjacency", format!("a ring needs at least 2 subsystems, got {m}"))
            }
            "ring" => AdjacencySpec::Ring,
            "ring2" => AdjacencySpec::Ring2,
            _ => return ctx.fail(adj_span, "adjacency", format!("unknown keyword `{k}` (expected full, ring, ring2 or an edge list)")),
        },
        RawAdjacency::Edges(list) => {
            let mut edges = Vec::with_capacity(list.len());
            for (k, e) in list.iter().enumerate() {
                let field = format!("adjacency[{}]", k + 1);
                let &[from, to] = e.as_slice() else {
                    return ctx.fail(adj_span, field, format!("an edge is a pair [from, to], got {} entries", e.len()));
                };
                for v in [from, to] {
                    if v < 1 || v as usize > m {
                        return ctx.fail(adj_span, field, format!("subsystem index {v} outside 1..={m}"));
                    }
                }
                if from == to {
                    return ctx.fail(adj_span, field, format!("self-loop ({from}, {to})"));
                }
                let edge = (from as usize - 1, to as usize - 1);
                if edges.contains(&edge) {
                    return ctx.fail(adj_span, field, format!("duplicate edge ({from}, {to})"));
                }
                edges.push(edge);
            }
            AdjacencySpec::Edges(edges)
        }
    };

    let mut options = SpecOptions::default();
    if let Some(o) = raw.options {
        if let Some(eps) = o.epsilon {
            let span = eps.span();
            options.epsilon = Some(match eps.into_inner() {
                RawEpsilon::Value(v) if v.is_finite() && v > 0.0 => EpsilonSetting::Fixed(v),
                RawEpsilon::Value(v) => return ctx.fail(span, "options.epsilon", format!("must be positive and finite, got {v}")),
                RawEpsilon::Keyword(k) if k == "auto" => EpsilonSetting::Auto,
                RawEpsilon::Keyword(k) if k == "search" => EpsilonSetting::Search,
                RawEpsilon::Keyword(k) => {
                    return ctx.fail(span, "options.epsilon", format!("unknown keyword `{k}` (expected auto, search or a number)"))
                }
            });
        }
        if let Some(tol) = o.tolerance {
            let v = *tol.get_ref();
            if !(v.is_finite() && v > 0.0) {
                return ctx.fail(tol.span(), "options.tolerance", format!("must be positive and finite, got {v}"));
            }
            options.tolerance = Some(v);
        }
        if let Some(norm) = o.norm {
            options.norm = match parse_norm(norm.get_ref()) {
                Ok(v) => v,
                Err(msg) => return ctx.fail(norm.span(), "options.norm", msg),
            };
        }
    }

    Ok(SystemSpecFile { dimension: n, subsystems, adjacency, options })
}

fn quoted(s: &str) -> String {
    toml::Value::String(s.to_owned()).to_string()
}

/// Shortest representation that reads back to the same value.
pub(crate) fn float(v: f64) -> String {
    format!("{v:?}")
}

pub fn render_spec(spec: &SystemSpecFile) -> String {
    let mut out = format!("dimension = {}\n", spec.dimension);
    let adjacency = match &spec.adjacency {
        AdjacencySpec::Full => quoted("full"),
        AdjacencySpec::Ring => quoted("ring"),
        AdjacencySpec::Ring2 => quoted("ring2"),
        AdjacencySpec::Edges(e) => {
            let items: Vec<String> = e.iter().map(|(a, b)| format!("[{}, {}]", a + 1, b + 1)).collect();
            format!("[{}]", items.join(", "))
        }
    };
    out.push_str(&format!("adjacency = {adjacency}\n"));

    let o = &spec.options;
    if o.epsilon.is_some() || o.tolerance.is_some() || o.norm.is_some() {
        out.push_str("\n[options]\n");
        match o.epsilon {
            Some(EpsilonSetting::Auto) => out.push_str("epsilon = \"auto\"\n"),
            Some(EpsilonSetting::Search) => out.push_str("epsilon = \"search\"\n"),
            Some(EpsilonSetting::Fixed(v)) => out.push_str(&format!("epsilon = {}\n", float(v))),
            None => {}
        }
        if let Some(t) = o.tolerance {
            out.push_str(&format!("tolerance = {}\n", float(t)));
        }
        if let Some(norm) = o.norm {
            out.push_str(&format!("norm = {}\n", quoted(norm_name(norm))));
        }
    }

    for s in &spec.subsystems {
        out.push_str(&format!("\n[[subsystem]]\nname = {}\nmatrix = [\n", quoted(&s.name)));
        for row in &s.rows {
            let vals: Vec<String> = row.iter().map(|&v| float(v)).collect();
            out.push_str(&format!("    [{}],\n", vals.join(", ")));
        }
        out.push_str("]\n");
    }
    out
}
