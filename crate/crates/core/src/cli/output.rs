//! JSON, CSV and text renderings of the reports.

use std::fmt::Write as _;

use serde::Serialize;

use crate::classify::ClassificationVerdict;
use crate::error::{Error, Result};
use crate::expansion::{DnReport, Lambda0Report, MengerReport};
use crate::metrics::{ScaledCount, VisualReport};
use crate::orbifold::{signature_name, OrbifoldData};
use crate::pillow::CellCounts;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellsRow {
    pub level: u32,
    pub vertices: u64,
    pub edges: u64,
    pub tiles: u64,
    pub euler_characteristic: i64,
}

impl CellsRow {
    pub fn new(level: u32, c: CellCounts) -> Self {
        CellsRow { level, vertices: c.vertices, edges: c.edges, tiles: c.tiles, euler_characteristic: c.euler_characteristic() }
    }
}

pub enum Document {
    Cells(Vec<CellsRow>),
    Dn(Vec<DnReport>),
    Lambda0(Lambda0Report),
    Menger(Vec<MengerReport>),
    Orbifold(OrbifoldData),
    Metric(VisualReport),
    Classify(ClassificationVerdict),
}

#[derive(Serialize)]
struct DnRow<'a> {
    level: u32,
    dn: u64,
    lower_bound: String,
    upper_bound: String,
    lower_bound_f64: f64,
    upper_bound_f64: f64,
    method: &'a str,
    agreement: Option<bool>,
}

#[derive(Serialize)]
struct Lambda0Row {
    n: u32,
    dn: u64,
    root_f64: f64,
    lower_root_f64: f64,
    upper_root_f64: f64,
    target: String,
    target_f64: f64,
}

#[derive(Serialize)]
struct NuRow<'a> {
    id: &'a str,
    nu: String,
}

#[derive(Serialize)]
struct MetricRow {
    x: String,
    y: String,
    m: u32,
    m_prime: u32,
    m_prime_capped: bool,
    level: u32,
    count: u64,
    d_n: Option<String>,
    d_n_f64: f64,
    scaled: Option<String>,
    scaled_f64: f64,
}

#[derive(Serialize)]
struct ClassifyRow<'a> {
    n: u32,
    dn: u64,
    ratio_f64: f64,
    verdict: &'a str,
    consistency: bool,
}

fn csv_of<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_of<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn snake<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn exact(s: &ScaledCount) -> Option<String> {
    s.value.as_ref().map(ToString::to_string)
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => match self {
                Document::Cells(r) => json_of(r),
                Document::Dn(r) => json_of(r),
                Document::Lambda0(r) => json_of(r),
                Document::Menger(r) => json_of(r),
                Document::Orbifold(r) => json_of(r),
                Document::Metric(r) => json_of(r),
                Document::Classify(r) => json_of(r),
            },
            Format::Csv => self.csv(),
            Format::Text => Ok(self.text()),
        }
    }

    fn csv(&self) -> Result<String> {
        match self {
            Document::Cells(rows) => csv_of(rows),
            Document::Dn(rows) => csv_of(rows.iter().map(|r| DnRow {
                level: r.level,
                dn: r.dn,
                lower_bound: r.lower_bound.to_string(),
                upper_bound: r.upper_bound.to_string(),
                lower_bound_f64: r.lower_bound_f64,
                upper_bound_f64: r.upper_bound_f64,
                method: match r.method {
                    crate::expansion::DnMethod::Planar => "planar",
                    crate::expansion::DnMethod::Folded => "folded",
                    crate::expansion::DnMethod::Both => "both",
                },
                agreement: r.agreement,
            })),
            Document::Lambda0(r) => csv_of(r.terms.iter().map(|t| Lambda0Row {
                n: t.n,
                dn: t.dn,
                root_f64: t.root_f64,
                lower_root_f64: t.lower_root_f64,
                upper_root_f64: t.upper_root_f64,
                target: r.target.to_string(),
                target_f64: r.target.approx(),
            })),
            Document::Menger(rows) => csv_of(rows),
            Document::Orbifold(d) => csv_of(d.nu.iter().map(|(id, v)| NuRow { id, nu: v.to_string() })),
            Document::Metric(r) => csv_of(r.samples.iter().flat_map(|s| {
                s.distances.iter().map(move |d| MetricRow {
                    x: s.x.to_string(),
                    y: s.y.to_string(),
                    m: s.m,
                    m_prime: s.m_prime,
                    m_prime_capped: s.m_prime_capped,
                    level: d.level,
                    count: d.d_n.count,
                    d_n: exact(&d.d_n),
                    d_n_f64: d.d_n.value_f64,
                    scaled: exact(&d.scaled),
                    scaled_f64: d.scaled.value_f64,
                })
            })),
            Document::Classify(v) => {
                let verdict = snake(&v.verdict);
                csv_of(v.empirical_evidence.iter().map(|t| ClassifyRow {
                    n: t.n,
                    dn: t.dn,
                    ratio_f64: t.ratio_f64,
                    verdict: &verdict,
                    consistency: v.consistency,
                }))
            }
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        match self {
            Document::Cells(rows) => {
                for r in rows {
                    let _ = writeln!(
                        s,
                        "level {}: V={} E={} F={} chi={}",
                        r.level, r.vertices, r.edges, r.tiles, r.euler_characteristic
                    );
                }
            }
            Document::Dn(rows) => {
                for r in rows {
                    let _ = write!(s, "level {}: D_n = {} in [{}, {}]", r.level, r.dn, r.lower_bound, r.upper_bound);
                    if let Some(a) = r.agreement {
                        let _ = write!(s, " planar/folded agree: {a}");
                    }
                    s.push('\n');
                }
            }
            Document::Lambda0(r) => {
                for t in &r.terms {
                    let _ = writeln!(
                        s,
                        "n {}: D_n = {} root = {:.6} envelope [{:.6}, {:.6}]",
                        t.n, t.dn, t.root_f64, t.lower_root_f64, t.upper_root_f64
                    );
                }
                let _ = writeln!(s, "target {} = {:.6}, final error {:.6}", r.target, r.target.approx(), r.final_error_f64);
            }
            Document::Menger(rows) => {
                for r in rows {
                    let _ = writeln!(
                        s,
                        "level {}: D_n = {} N_n = {} k = {} deg^n = {} nested = {} single-tile bound = {}",
                        r.level, r.dn, r.path_min_tiles, r.max_disjoint_paths, r.tile_budget, r.nested,
                        r.single_tile_bound_holds
                    );
                }
            }
            Document::Orbifold(d) => {
                for (id, v) in &d.nu {
                    let _ = writeln!(s, "nu({id}) = {v}");
                }
                let _ = writeln!(s, "signature {} chi = {} class {}", signature_name(&d.signature), d.chi, snake(&d.class));
            }
            Document::Metric(r) => {
                for p in &r.samples {
                    let counts: Vec<String> = p.distances.iter().map(|d| d.d_n.count.to_string()).collect();
                    let _ = writeln!(s, "{} {} m = {} m' = {} chain counts {}", p.x, p.y, p.m, p.m_prime, counts.join(","));
                }
                for e in &r.excluded {
                    let _ = writeln!(s, "excluded {} {}: {}", e.x, e.y, e.reason);
                }
                let _ = writeln!(
                    s,
                    "lambda {} c = {:.6} C = {:.6} spread {:.6} max m-m' {} triangle violations {}",
                    r.lambda, r.empirical_c.value_f64, r.empirical_big_c.value_f64, r.spread_f64, r.max_m_gap,
                    r.triangle_violations
                );
            }
            Document::Classify(v) => {
                for t in &v.empirical_evidence {
                    let _ = writeln!(s, "n {}: D_n = {} ratio {:.6}", t.n, t.dn, t.ratio_f64);
                }
                let _ = writeln!(
                    s,
                    "verdict {} ({}) consistency {}",
                    snake(&v.verdict),
                    snake(&v.algebraic_evidence),
                    v.consistency
                );
            }
        }
        s
    }
}
