//! Front CSV and JSON summary serialisation.
//!
//! All numbers in output files are `%.12g`, except run parameters in
//! `summary.json`, which use the shortest representation that parses back
//! to the same value.

use std::io::Read;

use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use survroute::scheduler::PoolStats;
use survroute::{ObjectiveVector, RunParams};

use crate::format::g12;

pub const FRONT_HEADER: [&str; 3] = ["z1", "z2", "genotype"];

/// A number written with `%.12g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G12(pub f64);

impl Serialize for G12 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(g12(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for G12 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(G12)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontRow {
    pub z1: f64,
    pub z2: f64,
    pub genotype: String,
}

/// Renders rows sorted by objectives, then genotype text.
pub fn front_csv(rows: &[FrontRow]) -> String {
    let mut rows: Vec<&FrontRow> = rows.iter().collect();
    rows.sort_by(|a, b| {
        a.z1.total_cmp(&b.z1)
            .then(a.z2.total_cmp(&b.z2))
            .then_with(|| a.genotype.cmp(&b.genotype))
    });
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(FRONT_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([g12(r.z1), g12(r.z2), r.genotype.clone()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Reads the objective columns of a front CSV. The header must start with
/// `z1,z2`; a third `genotype` column is optional.
pub fn read_front<R: Read>(input: R) -> Result<Vec<ObjectiveVector>, String> {
    let mut reader = csv::ReaderBuilder::new().from_reader(input);
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names.len() < 2 || names.len() > 3 || names[..] != FRONT_HEADER[..names.len()] {
        return Err(format!("expected header `z1,z2,genotype`, found `{}`", names.join(",")));
    }
    let mut front = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let row = i + 2;
        let values = (0..2)
            .map(|k| {
                let field = record[k].trim();
                field
                    .parse::<f64>()
                    .map_err(|_| format!("row {row}: `{field}` is not a number"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let z = ObjectiveVector::new(values).map_err(|e| format!("row {row}: {e}"))?;
        front.push(z);
    }
    Ok(front)
}

/// Run parameters as written to (and read back from) `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub seed: u64,
    pub budget: u64,
    pub population_size: usize,
    pub offspring_count: usize,
    pub archive_capacity: usize,
    pub stagnation_window: usize,
    pub stagnation_tolerance: f64,
    pub immigrant_fraction: f64,
    pub scheduler_window: usize,
    pub scheduler_floor: f64,
    pub ls_moves: usize,
    pub mutation_probability: f64,
}

impl From<&RunParams> for ParamsRecord {
    fn from(p: &RunParams) -> Self {
        Self {
            seed: p.seed,
            budget: p.budget,
            population_size: p.population_size,
            offspring_count: p.offspring_count,
            archive_capacity: p.archive_capacity,
            stagnation_window: p.stagnation_window,
            stagnation_tolerance: p.stagnation_tolerance,
            immigrant_fraction: p.immigrant_fraction,
            scheduler_window: p.scheduler_window,
            scheduler_floor: p.scheduler_floor,
            ls_moves: p.ls_moves,
            mutation_probability: p.mutation_probability,
        }
    }
}

impl From<ParamsRecord> for RunParams {
    fn from(r: ParamsRecord) -> Self {
        Self {
            seed: r.seed,
            budget: r.budget,
            population_size: r.population_size,
            offspring_count: r.offspring_count,
            archive_capacity: r.archive_capacity,
            stagnation_window: r.stagnation_window,
            stagnation_tolerance: r.stagnation_tolerance,
            immigrant_fraction: r.immigrant_fraction,
            scheduler_window: r.scheduler_window,
            scheduler_floor: r.scheduler_floor,
            ls_moves: r.ls_moves,
            mutation_probability: r.mutation_probability,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub name: String,
    pub probability: G12,
    pub trials: u64,
    pub successes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolRecord {
    pub pool: String,
    pub operators: Vec<OperatorRecord>,
}

impl From<&PoolStats> for PoolRecord {
    fn from(s: &PoolStats) -> Self {
        Self {
            pool: s.kind.label().to_string(),
            operators: s
                .operators
                .iter()
                .map(|o| OperatorRecord {
                    name: o.name.to_string(),
                    probability: G12(o.probability),
                    trials: o.trials,
                    successes: o.successes,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iterations {
    pub inner: u64,
    pub outer: u64,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub instance: String,
    pub params: ParamsRecord,
    pub evaluations: u64,
    pub archive_size: usize,
    pub final_hypervolume: G12,
    pub reference_point: Vec<G12>,
    pub hypervolume_trace: Vec<G12>,
    pub iterations: Iterations,
    pub scheduler: Vec<PoolRecord>,
    pub wall_clock_seconds: G12,
}

impl Summary {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serialises");
        s.push('\n');
        s
    }
}

/// Output of the `measure` command; `None` where an indicator is undefined
/// for an empty front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub reference_point: Vec<G12>,
    pub hv_a: G12,
    pub hv_b: G12,
    pub epsilon: Option<G12>,
    pub coverage_ab: Option<G12>,
    pub coverage_ba: Option<G12>,
}

impl MeasureReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

/// Parses `x,y` into a reference point.
pub fn parse_reference(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        })
        .collect()
}
