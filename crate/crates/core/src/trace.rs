//! Per-iteration records shared by every solver.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Converged,
    MaxIterations,
    Infeasible,
}

/// Whether the solver maximizes or minimizes its recorded objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub index: usize,
    pub objective: f64,
    pub feasibility_violation: f64,
    pub extras: Vec<(&'static str, f64)>,
}

impl TraceRecord {
    pub fn extra(&self, key: &str) -> Option<f64> {
        self.extras.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone)]
pub struct SolverTrace {
    pub iterations: Vec<TraceRecord>,
    pub status: Status,
    pub best_objective: f64,
    pub elapsed_iterations: usize,
    objective_name: &'static str,
    sense: Sense,
}

impl SolverTrace {
    pub fn new(objective_name: &'static str, sense: Sense) -> Self {
        let best_objective = match sense {
            Sense::Maximize => f64::NEG_INFINITY,
            Sense::Minimize => f64::INFINITY,
        };
        Self {
            iterations: Vec::new(),
            status: Status::MaxIterations,
            best_objective,
            elapsed_iterations: 0,
            objective_name,
            sense,
        }
    }

    /// Appends a record; `feasible` decides whether it may update the best objective.
    pub fn push(&mut self, record: TraceRecord, feasible: bool) {
        if feasible {
            let better = match self.sense {
                Sense::Maximize => record.objective > self.best_objective,
                Sense::Minimize => record.objective < self.best_objective,
            };
            if better {
                self.best_objective = record.objective;
            }
        }
        self.elapsed_iterations = self.elapsed_iterations.max(record.index);
        self.iterations.push(record);
    }

    pub fn objective_name(&self) -> &'static str {
        self.objective_name
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objectives(&self) -> Vec<f64> {
        self.iterations.iter().map(|r| r.objective).collect()
    }

    pub fn extra_series(&self, key: &str) -> Vec<f64> {
        self.iterations.iter().filter_map(|r| r.extra(key)).collect()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.iterations.last()
    }

    /// Writes `iter,<objective>,<extras...>`; the extra columns come from the first record.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let extras: Vec<&str> =
            self.iterations.first().map(|r| r.extras.iter().map(|(k, _)| *k).collect()).unwrap_or_default();
        let mut header = vec!["iter", self.objective_name];
        header.extend(&extras);
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.iterations {
            let mut row = vec![r.index.to_string(), fmt(r.objective)];
            for k in &extras {
                row.push(r.extra(k).map(fmt).unwrap_or_default());
            }
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}
