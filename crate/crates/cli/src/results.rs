//! Result rows and their CSV form.
//!
//! Floats are written with Rust's shortest round-trip formatting and unused
//! fields are left empty, so identical runs give identical bytes.

use std::cmp::Ordering;
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use qdmera::dmera::Side;

use crate::error::HarnessError;

pub const CSV_HEADER: [&str; 13] = [
    "experiment",
    "seed",
    "N",
    "M",
    "side",
    "h",
    "exact_entropy",
    "estimated_entropy",
    "abs_error",
    "trace_distance",
    "energy",
    "exact_energy",
    "wall_time_s",
];

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResultRow {
    pub experiment: String,
    pub seed: Option<u64>,
    pub num_qubits: usize,
    pub m: Option<usize>,
    pub side: Option<Side>,
    pub h: Option<f64>,
    pub exact_entropy: Option<f64>,
    pub estimated_entropy: Option<f64>,
    pub abs_error: Option<f64>,
    pub trace_distance: Option<f64>,
    pub energy: Option<f64>,
    pub exact_energy: Option<f64>,
    pub wall_time_s: Option<f64>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

impl ResultRow {
    pub fn new(experiment: &str, num_qubits: usize) -> Self {
        Self { experiment: experiment.to_string(), num_qubits, ..Default::default() }
    }

    /// Sets both entropies and the absolute error between them.
    pub fn with_entropies(mut self, exact: f64, estimated: f64) -> Self {
        self.exact_entropy = Some(exact);
        self.estimated_entropy = Some(estimated);
        self.abs_error = Some((estimated - exact).abs());
        self
    }

    pub fn relative_energy_error(&self) -> Option<f64> {
        Some(((self.energy? - self.exact_energy?) / self.exact_energy?).abs())
    }

    fn fields(&self) -> [String; 13] {
        [
            self.experiment.clone(),
            opt(&self.seed),
            self.num_qubits.to_string(),
            opt(&self.m),
            self.side.map(|s| s.label().to_string()).unwrap_or_default(),
            opt(&self.h),
            opt(&self.exact_entropy),
            opt(&self.estimated_entropy),
            opt(&self.abs_error),
            opt(&self.trace_distance),
            opt(&self.energy),
            opt(&self.exact_energy),
            opt(&self.wall_time_s),
        ]
    }

    /// Total order used before writing: experiment, seed, M, side, h.
    pub fn sort_key_cmp(&self, other: &Self) -> Ordering {
        let side = |s: Option<Side>| s.map(|s| s.label());
        self.experiment
            .cmp(&other.experiment)
            .then(self.seed.cmp(&other.seed))
            .then(self.m.cmp(&other.m))
            .then(side(self.side).cmp(&side(other.side)))
            .then(match (self.h, other.h) {
                (Some(a), Some(b)) => a.total_cmp(&b),
                (a, b) => a.is_some().cmp(&b.is_some()),
            })
    }
}

pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(ResultRow::sort_key_cmp);
}

pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(r.fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Parses a results table. `abs_error` is recomputed from the two entropies
/// whenever both are present.
pub fn from_csv(text: &str) -> Result<Vec<ResultRow>, HarnessError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| HarnessError::Results { line: 1, msg: e.to_string() })?;
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Results { line: 1, msg: "unexpected header".into() });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| HarnessError::Results { line, msg: e.to_string() })?;
        let bad = |what: &str| HarnessError::Results { line, msg: format!("bad {what}") };
        let field = |k: usize| rec.get(k).unwrap_or("");
        fn parse<T: std::str::FromStr>(s: &str) -> Result<Option<T>, ()> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| ())
            }
        }
        let f = |k: usize| parse::<f64>(field(k)).map_err(|_| bad(CSV_HEADER[k]));
        let mut row = ResultRow {
            experiment: field(0).to_string(),
            seed: parse(field(1)).map_err(|_| bad("seed"))?,
            num_qubits: parse(field(2)).map_err(|_| bad("N"))?.ok_or_else(|| bad("N"))?,
            m: parse(field(3)).map_err(|_| bad("M"))?,
            side: match field(4) {
                "" => None,
                s => Some(s.parse().map_err(|_| bad("side"))?),
            },
            h: f(5)?,
            exact_entropy: f(6)?,
            estimated_entropy: f(7)?,
            abs_error: f(8)?,
            trace_distance: f(9)?,
            energy: f(10)?,
            exact_energy: f(11)?,
            wall_time_s: f(12)?,
        };
        if let (Some(a), Some(b)) = (row.exact_entropy, row.estimated_entropy) {
            row.abs_error = Some((b - a).abs());
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Appends rows to `<name>.partial` as tasks finish, in completion order.
/// The sorted table replaces it at the end of the run.
pub struct PartialWriter {
    path: PathBuf,
    file: Mutex<File>,
}

impl PartialWriter {
    pub fn create(final_path: &Path) -> Result<Self, HarnessError> {
        let path = final_path.with_extension("csv.partial");
        let mut file = File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
        file.write_all(to_csv(&[]).as_bytes()).map_err(|e| HarnessError::io(&path, e))?;
        Ok(Self { path, file: Mutex::new(file) })
    }

    pub fn append(&self, rows: &[ResultRow]) -> Result<(), HarnessError> {
        let text = to_csv(rows);
        let body = text.split_once('\n').map(|(_, b)| b).unwrap_or("");
        let mut f = self.file.lock().expect("writer lock");
        f.write_all(body.as_bytes()).and_then(|_| f.flush()).map_err(|e| HarnessError::io(&self.path, e))
    }

    pub fn finish(self, final_path: &Path, rows: &[ResultRow]) -> Result<(), HarnessError> {
        write_csv(final_path, rows)?;
        drop(self.file);
        fs::remove_file(&self.path).map_err(|e| HarnessError::io(&self.path, e))
    }
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<(), HarnessError> {
    fs::write(path, to_csv(rows)).map_err(|e| HarnessError::io(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>, HarnessError> {
    from_csv(&fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?)
}
