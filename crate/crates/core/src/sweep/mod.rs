//! Batch parameter sweeps: TOML spec files, row-parallel evaluation and a
//! column table that exports to CSV or JSON.

mod export;
mod presets;
mod report;
mod targets;

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{
    donor_params, material_params, ConstantSet, DonorParams, DonorSpecies, Host, MaterialParams, PhysicalConstants,
};
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, ExecMode};

pub use export::{export, format_sig, ExportFormat, SIG_DIGITS};
pub use presets::{preset, preset_names, PRESETS};
pub use report::{report, report_topics, Report, ReportEntry, ReportInputs};
pub use targets::Target;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variable {
    pub name: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Variable {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        let mut g: Vec<f64> = (0..n)
            .map(|k| {
                let f = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.from + f * (self.to - self.from),
                    Spacing::Log => (self.from.ln() + f * (self.to.ln() - self.from.ln())).exp(),
                }
            })
            .collect();
        g[0] = self.from;
        g[n - 1] = self.to;
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub target: String,
    /// Empty selects every observable of the target.
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub donor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<String>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub variable: Variable,
}

impl FromStr for SweepSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Spec(e.message().to_string()))
    }
}

impl SweepSpec {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    /// Fills donor/material/constants the spec leaves unset.
    pub fn with_defaults(mut self, donor: &str, material: &str, constants: &str) -> Self {
        self.donor.get_or_insert_with(|| donor.to_string());
        self.material.get_or_insert_with(|| material.to_string());
        self.constants.get_or_insert_with(|| constants.to_string());
        self
    }

    pub fn prepare(&self) -> Result<PreparedSweep> {
        PreparedSweep::new(self)
    }
}

/// Shared inputs for every row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepContext {
    pub consts: PhysicalConstants,
    pub donor: DonorParams,
    pub material: MaterialParams,
}

fn spec_err(e: Error) -> Error {
    match e {
        Error::Spec(_) => e,
        other => Error::Spec(other.to_string()),
    }
}

impl SweepContext {
    pub fn resolve(donor: Option<&str>, material: Option<&str>, constants: Option<&str>) -> Result<Self> {
        let host: Host = material.unwrap_or("si").parse().map_err(spec_err)?;
        let species = DonorSpecies::new(donor.unwrap_or("p31"), host).map_err(spec_err)?;
        let set: ConstantSet = constants.unwrap_or("paper").parse().map_err(spec_err)?;
        Ok(SweepContext { consts: set.constants(), donor: donor_params(species), material: material_params(host) })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlaggedRow {
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub spec: SweepSpec,
    pub constants: String,
    pub version: String,
    #[serde(default)]
    pub flagged_rows: Vec<FlaggedRow>,
}

pub const FLAG_COLUMN: &str = "flag";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub meta: TableMeta,
    /// Variable first, then observables, then the 0/1 flag column.
    pub columns: Vec<Column>,
}

impl SweepTable {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn has_flagged(&self) -> bool {
        !self.meta.flagged_rows.is_empty()
    }

    /// Equality after rounding every value to `digits` significant digits;
    /// NaN matches NaN.
    pub fn same_at_precision(&self, other: &SweepTable, digits: usize) -> bool {
        let round = |x: f64| format_sig(x, digits);
        self.meta == other.meta
            && self.columns.len() == other.columns.len()
            && self.columns.iter().zip(&other.columns).all(|(a, b)| {
                a.name == b.name
                    && a.values.len() == b.values.len()
                    && a.values.iter().zip(&b.values).all(|(x, y)| round(*x) == round(*y))
            })
    }
}

/// Values of one grid point; NaN everywhere when the row failed.
#[derive(Debug, Clone, PartialEq)]
pub struct RowResult {
    pub values: Vec<f64>,
    pub flag: Option<String>,
}

/// A validated spec, ready for row evaluation.
#[derive(Debug, Clone)]
pub struct PreparedSweep {
    spec: SweepSpec,
    set_id: &'static str,
    ctx: SweepContext,
    target: Target,
    outputs: Vec<usize>,
    grid: Vec<f64>,
}

impl PreparedSweep {
    fn new(spec: &SweepSpec) -> Result<Self> {
        let v = &spec.variable;
        if v.points < 2 {
            return Err(Error::Spec(format!("variable.points must be >= 2, got {}", v.points)));
        }
        if !(v.from.is_finite() && v.to.is_finite() && v.from < v.to) {
            return Err(Error::Spec(format!("variable range needs from < to, got [{}, {}]", v.from, v.to)));
        }
        if v.spacing == Spacing::Log && v.from <= 0.0 {
            return Err(Error::Spec(format!("log spacing needs from > 0, got {}", v.from)));
        }
        if let Some((k, x)) = spec.fixed.iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::Spec(format!("fixed.{k} is not finite: {x}")));
        }
        let target: Target = spec.target.parse()?;
        let ctx = SweepContext::resolve(spec.donor.as_deref(), spec.material.as_deref(), spec.constants.as_deref())?;
        let set_id = spec.constants.as_deref().unwrap_or("paper").parse::<ConstantSet>().map_err(spec_err)?.id();
        target.check_parameters(&v.name, spec.fixed.keys().map(String::as_str))?;
        let observables = target.observables();
        let outputs = if spec.outputs.is_empty() {
            (0..observables.len()).collect()
        } else {
            spec.outputs
                .iter()
                .map(|o| {
                    observables.iter().position(|n| n == o).ok_or_else(|| {
                        Error::Spec(format!("target {} has no output {o:?}; available: {}", target.id(), observables.join(", ")))
                    })
                })
                .collect::<Result<_>>()?
        };
        Ok(PreparedSweep { spec: spec.clone(), set_id, ctx, target, outputs, grid: v.grid() })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn output_names(&self) -> Vec<String> {
        let all = self.target.observables();
        self.outputs.iter().map(|&i| all[i].clone()).collect()
    }

    pub fn evaluate_row(&self, i: usize) -> RowResult {
        let mut params = self.spec.fixed.clone();
        params.insert(self.spec.variable.name.clone(), self.grid[i]);
        match self.target.evaluate(&self.ctx, &params) {
            Ok(row) => RowResult {
                values: self.outputs.iter().map(|&k| row.values[k]).collect(),
                flag: row.flag,
            },
            Err(e) => RowResult { values: vec![f64::NAN; self.outputs.len()], flag: Some(e.to_string()) },
        }
    }

    /// Builds the table from per-row results given in grid order.
    pub fn assemble(&self, rows: Vec<RowResult>) -> SweepTable {
        let mut columns = vec![Column { name: self.spec.variable.name.clone(), values: self.grid.clone() }];
        for (k, name) in self.output_names().into_iter().enumerate() {
            columns.push(Column { name, values: rows.iter().map(|r| r.values[k]).collect() });
        }
        columns.push(Column {
            name: FLAG_COLUMN.to_string(),
            values: rows.iter().map(|r| if r.flag.is_some() { 1.0 } else { 0.0 }).collect(),
        });
        let flagged_rows = rows
            .iter()
            .enumerate()
            .filter_map(|(row, r)| r.flag.clone().map(|reason| FlaggedRow { row, reason }))
            .collect();
        SweepTable {
            meta: TableMeta {
                spec: self.spec.clone(),
                constants: self.set_id.to_string(),
                version: ARTIFACT_VERSION.to_string(),
                flagged_rows,
            },
            columns,
        }
    }

    pub fn run(&self, mode: ExecMode) -> SweepTable {
        self.assemble(map_indexed(self.grid.len(), mode, |i| self.evaluate_row(i)))
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    run_sweep_with(spec, ExecMode::default())
}

pub fn run_sweep_with(spec: &SweepSpec, mode: ExecMode) -> Result<SweepTable> {
    Ok(spec.prepare()?.run(mode))
}
