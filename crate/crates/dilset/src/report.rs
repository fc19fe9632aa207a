//! Serializable report shapes.
//!
//! Sets are written in the literal format and every bound value as a decimal
//! string (`"7/3"` for non-integral rationals), so nothing loses precision in
//! JSON consumers. [`SCHEMA_VERSION`] changes whenever a field is renamed or
//! removed.

use dilset_core::bounds::{BoundCheck, BoundReport};
use dilset_core::constructions::{Construction, ConstructionSpec, DigitDeficit};
use dilset_core::residue::{DichotomyRecord, DichotomyReport, ReductionTrace, ResiduePartition};
use dilset_core::search::SearchResult;
use serde::Serialize;
use serde_json::Value;

use crate::input::format_literal;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "dilset";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Common wrapper: tool identity, the parameters that produced the report and the report itself.
#[derive(Debug, Serialize)]
pub struct Envelope<R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema: u32,
    pub command: &'static str,
    pub params: Value,
    pub report: R,
}

impl<R: Serialize> Envelope<R> {
    pub fn new(command: &'static str, params: Value, report: R) -> Self {
        Envelope {
            tool: TOOL,
            version: VERSION,
            schema: SCHEMA_VERSION,
            command,
            params,
            report,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SumsetJson {
    pub size: usize,
    pub backend: String,
    pub sumset: String,
}

#[derive(Debug, Serialize)]
pub struct CheckJson {
    pub name: String,
    /// `lower` or `upper`.
    pub kind: &'static str,
    pub bound: String,
    pub slack: String,
    pub violated: bool,
}

impl From<&BoundCheck> for CheckJson {
    fn from(c: &BoundCheck) -> Self {
        CheckJson {
            name: c.name.clone(),
            kind: if c.upper { "upper" } else { "lower" },
            bound: c.bound.to_string(),
            slack: c.slack.to_string(),
            violated: c.violated(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundsJson {
    pub n: u64,
    pub actual: u64,
    pub arithmetic_progression: bool,
    pub main_constant: String,
    pub checks: Vec<CheckJson>,
    pub violations: Vec<String>,
}

impl From<&BoundReport> for BoundsJson {
    fn from(r: &BoundReport) -> Self {
        BoundsJson {
            n: r.n,
            actual: r.actual,
            arithmetic_progression: r.arithmetic_progression,
            main_constant: r.bounds.main_constant.to_string(),
            checks: r.checks.iter().map(CheckJson::from).collect(),
            violations: r.violations().map(|c| c.name.clone()).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StepJson {
    pub side: &'static str,
    pub residue: i64,
    pub divisor: i64,
    pub span_before: u64,
}

#[derive(Debug, Serialize)]
pub struct ReduceJson {
    pub steps: Vec<StepJson>,
    #[serde(rename = "final")]
    pub final_set: String,
    pub sumset_size: usize,
}

impl ReduceJson {
    pub fn new(trace: &ReductionTrace, sumset_size: usize) -> Self {
        ReduceJson {
            steps: trace
                .steps
                .iter()
                .map(|s| StepJson {
                    side: s.side.name(),
                    residue: s.residue,
                    divisor: s.divisor,
                    span_before: s.span_before,
                })
                .collect(),
            final_set: format_literal(&trace.final_set),
            sumset_size,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassJson {
    pub residue: i64,
    pub set: String,
    pub quotient: String,
}

#[derive(Debug, Serialize)]
pub struct CellJson {
    pub i: usize,
    pub j: usize,
    pub offset: i64,
    pub set: String,
    pub quotient: String,
    pub image_size: usize,
}

#[derive(Debug, Serialize)]
pub struct PartitionJson {
    pub r: usize,
    pub s: usize,
    pub fully_distributed_p: bool,
    pub fully_distributed_q: bool,
    pub reduced: bool,
    pub p_classes: Vec<ClassJson>,
    pub q_classes: Vec<ClassJson>,
    pub cells: Vec<CellJson>,
}

impl PartitionJson {
    pub fn new(part: &ResiduePartition, reduced: bool) -> dilset_core::Result<Self> {
        let class = |c: &dilset_core::residue::ResidueClass| ClassJson {
            residue: c.residue,
            set: format_literal(&c.set),
            quotient: format_literal(&c.quotient),
        };
        let mut cells = Vec::new();
        for i in 0..part.r() {
            for j in 0..part.s() {
                let cell = part.cell(i, j);
                cells.push(CellJson {
                    i,
                    j,
                    offset: cell.offset,
                    set: format_literal(&cell.set),
                    quotient: format_literal(&cell.quotient),
                    image_size: part.cell_image(i, j)?.len(),
                });
            }
        }
        Ok(PartitionJson {
            r: part.r(),
            s: part.s(),
            fully_distributed_p: part.r() as i64 == part.pair.p(),
            fully_distributed_q: part.s() as i64 == part.pair.q(),
            reduced,
            p_classes: part.p_classes.iter().map(class).collect(),
            q_classes: part.q_classes.iter().map(class).collect(),
            cells,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct RecordJson {
    pub side: &'static str,
    pub i: usize,
    pub j: Option<usize>,
    pub hypothesis_holds: bool,
    pub trivially_satisfied: bool,
    pub fd_holds: bool,
    pub inequality_holds: bool,
    pub lhs: usize,
    pub rhs: usize,
    pub satisfied: bool,
}

impl From<&DichotomyRecord> for RecordJson {
    fn from(r: &DichotomyRecord) -> Self {
        RecordJson {
            side: r.side.name(),
            i: r.i,
            j: r.j,
            hypothesis_holds: r.hypothesis_holds,
            trivially_satisfied: r.trivially_satisfied,
            fd_holds: r.fd_holds,
            inequality_holds: r.inequality_holds,
            lhs: r.lhs,
            rhs: r.rhs,
            satisfied: r.satisfied(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DichotomyJson {
    pub lemma: &'static str,
    pub reliable: bool,
    pub all_satisfied: bool,
    pub failures: usize,
    pub records: Vec<RecordJson>,
}

impl From<&DichotomyReport> for DichotomyJson {
    fn from(r: &DichotomyReport) -> Self {
        DichotomyJson {
            lemma: r.lemma.name(),
            reliable: r.reliable,
            all_satisfied: r.all_satisfied(),
            failures: r.failures().count(),
            records: r.records.iter().map(RecordJson::from).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LemmasJson {
    pub checked: String,
    pub reduced: bool,
    pub reports: Vec<DichotomyJson>,
}

#[derive(Debug, Serialize)]
pub struct SearchRow {
    pub p: i64,
    pub q: i64,
    pub n: usize,
    pub max_elem: u64,
    pub reflection: bool,
    pub minimum: u64,
    pub lower_bound: String,
    pub lower_bound_name: String,
    pub certified: bool,
    pub certificate: Option<String>,
    pub conditional_on_span: bool,
    pub violation: bool,
    pub witness_count: u64,
    pub witnesses: Vec<String>,
    pub sets_examined: u64,
}

impl From<&SearchResult> for SearchRow {
    fn from(r: &SearchResult) -> Self {
        SearchRow {
            p: r.pair.p(),
            q: r.pair.q(),
            n: r.n,
            max_elem: r.max_elem,
            reflection: r.use_reflection,
            minimum: r.minimum,
            lower_bound: r.lower_bound.to_string(),
            lower_bound_name: r.lower_bound_name.clone(),
            certified: r.certified,
            certificate: r.certificate.clone(),
            conditional_on_span: r.conditional_on_span(),
            violation: r.violation,
            witness_count: r.witness_count,
            witnesses: r.witnesses.iter().map(format_literal).collect(),
            sets_examined: r.sets_examined,
        }
    }
}

/// Flat row for CSV: witnesses collapse to the first one.
#[derive(Debug, Serialize)]
pub struct SearchCsvRow<'a> {
    pub p: i64,
    pub q: i64,
    pub n: usize,
    pub max_elem: u64,
    pub reflection: bool,
    pub minimum: u64,
    pub lower_bound: &'a str,
    pub lower_bound_name: &'a str,
    pub certified: bool,
    pub conditional_on_span: bool,
    pub violation: bool,
    pub witness_count: u64,
    pub first_witness: &'a str,
    pub sets_examined: u64,
}

impl<'a> From<&'a SearchRow> for SearchCsvRow<'a> {
    fn from(r: &'a SearchRow) -> Self {
        SearchCsvRow {
            p: r.p,
            q: r.q,
            n: r.n,
            max_elem: r.max_elem,
            reflection: r.reflection,
            minimum: r.minimum,
            lower_bound: &r.lower_bound,
            lower_bound_name: &r.lower_bound_name,
            certified: r.certified,
            conditional_on_span: r.conditional_on_span,
            violation: r.violation,
            witness_count: r.witness_count,
            first_witness: r.witnesses.first().map_or("", String::as_str),
            sets_examined: r.sets_examined,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConstructJson {
    pub kind: &'static str,
    pub q: Option<i64>,
    pub d: Option<i64>,
    pub a: Option<i64>,
    pub t: Option<u32>,
    pub n: Option<i64>,
    pub set: String,
    pub size: usize,
    pub predicted_size: String,
    /// `|A + q·A|` from the closed form; absent for intervals.
    pub predicted_sumset: Option<String>,
    /// `|p·A + q·A|` computed exactly, with `(p, q) = (1, q)` except for intervals.
    pub computed_sumset: String,
    pub sumset_pair: (i64, i64),
    /// `(p + q)n - (p + q - 1)`, reported for intervals only.
    pub interval_upper: Option<String>,
}

impl ConstructJson {
    pub fn new(c: &Construction, pair: (i64, i64), computed: u128) -> Self {
        let (kind, q, d, a, t, n) = match c.spec {
            ConstructionSpec::Interval { n } => ("interval", None, None, None, None, Some(n as i64)),
            ConstructionSpec::StridedBlock { q, d, n } => ("strided", Some(q), Some(d), None, None, Some(n)),
            ConstructionSpec::DigitSet { q, a, t } => ("digits", Some(q), None, Some(a), Some(t), None),
        };
        let interval_upper = matches!(c.spec, ConstructionSpec::Interval { .. }).then(|| {
            let s = (pair.0 + pair.1) as i128;
            (s * c.set.len() as i128 - (s - 1)).to_string()
        });
        ConstructJson {
            kind,
            q,
            d,
            a,
            t,
            n,
            set: format_literal(&c.set),
            size: c.set.len(),
            predicted_size: c.predicted_size.to_string(),
            predicted_sumset: c.predicted_sumset.map(|v| v.to_string()),
            computed_sumset: computed.to_string(),
            sumset_pair: pair,
            interval_upper,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DeficitRow {
    pub q: i64,
    pub a: i64,
    pub t: u32,
    pub size: String,
    pub sumset: String,
    pub deficit: String,
}

impl From<&DigitDeficit> for DeficitRow {
    fn from(d: &DigitDeficit) -> Self {
        DeficitRow {
            q: d.q,
            a: d.a,
            t: d.t,
            size: d.size.to_string(),
            sumset: d.sumset.to_string(),
            deficit: d.deficit.to_string(),
        }
    }
}
