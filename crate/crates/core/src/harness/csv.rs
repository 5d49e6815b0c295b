use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::RunRecord;

pub const RUNS_HEADER: &str = "run_id,n,problem,algorithm,evaluations,generations,best_fitness,success,seed";
pub const FIXED_TARGET_HEADER: &str = "run_id,fitness,first_hit_evaluations";
pub const PARAMETER_TRACE_HEADER: &str = "run_id,generation,parameter,value";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsvKind {
    Runs,
    FixedTarget,
    ParameterTrace,
}

impl CsvKind {
    pub const ALL: [CsvKind; 3] = [CsvKind::Runs, CsvKind::FixedTarget, CsvKind::ParameterTrace];

    pub fn file_name(self) -> &'static str {
        match self {
            CsvKind::Runs => "runs.csv",
            CsvKind::FixedTarget => "fixed_target.csv",
            CsvKind::ParameterTrace => "parameter_trace.csv",
        }
    }

    pub fn header(self) -> &'static str {
        match self {
            CsvKind::Runs => RUNS_HEADER,
            CsvKind::FixedTarget => FIXED_TARGET_HEADER,
            CsvKind::ParameterTrace => PARAMETER_TRACE_HEADER,
        }
    }
}

/// Names are written verbatim; quote the rare one that needs it.
fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The `runs.csv` row of one record, without the line feed.
pub fn runs_row(r: &RunRecord) -> String {
    let o = &r.outcome;
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.run_id,
        r.n,
        field(&r.problem),
        field(&r.algorithm),
        o.evaluations,
        o.generations,
        o.best_fitness,
        o.success,
        o.seed
    )
}

/// Renders one CSV file. Numbers use Rust's locale-free formatting and lines
/// end in LF.
pub fn render(records: &[RunRecord], kind: CsvKind) -> String {
    let mut out = String::new();
    out.push_str(kind.header());
    out.push('\n');
    for r in records {
        match kind {
            CsvKind::Runs => {
                out.push_str(&runs_row(r));
                out.push('\n');
            }
            CsvKind::FixedTarget => {
                for (f, e) in &r.outcome.fixed_target_trace {
                    let _ = writeln!(out, "{},{},{}", r.run_id, f, e);
                }
            }
            CsvKind::ParameterTrace => {
                for s in &r.outcome.parameter_trace {
                    let _ = writeln!(out, "{},{},{},{}", r.run_id, s.generation, s.name, s.value);
                }
            }
        }
    }
    out
}

pub fn emit_csv(records: &[RunRecord], kind: CsvKind, dir: &Path) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(kind.file_name());
    let mut file = io::BufWriter::new(fs::File::create(&path)?);
    file.write_all(render(records, kind).as_bytes())?;
    file.flush()?;
    Ok(path)
}

/// Writes all three files into `dir`.
pub fn emit_all(records: &[RunRecord], dir: &Path) -> io::Result<Vec<PathBuf>> {
    CsvKind::ALL.iter().map(|&k| emit_csv(records, k, dir)).collect()
}
