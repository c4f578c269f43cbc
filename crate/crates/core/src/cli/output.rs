//! Flat CSV rows for `run --format csv` and `sweep`.

use std::io::Write;

use super::experiment::ExperimentResult;
use crate::entanglement::{PptVerdict, Verdict};
use crate::error::{Error, Result};
use crate::io::fmt17;

pub const REPORT_COLUMNS: [&str; 17] = [
    "N",
    "d1",
    "d2",
    "dN",
    "nodes",
    "gram_trace",
    "purity",
    "entropy",
    "concurrence",
    "eof",
    "ppt_min_eigenvalue",
    "ppt",
    "product_residual",
    "separable_verdict",
    "evidence",
    "convergence_residual",
    "warnings",
];

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

fn label<S: serde::Serialize>(x: &S) -> String {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

pub fn report_fields(r: &ExperimentResult) -> Vec<String> {
    let rep = &r.report;
    vec![
        r.power.to_string(),
        r.dims.d1.to_string(),
        r.dims.d2.to_string(),
        r.dims.d_n.to_string(),
        r.convergence
            .nodes
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join("x"),
        fmt17(r.gram_trace),
        fmt17(rep.purity),
        opt(rep.entropy),
        opt(rep.concurrence),
        opt(rep.eof),
        fmt17(rep.ppt_min_eigenvalue),
        label::<PptVerdict>(&rep.ppt),
        fmt17(rep.product_residual),
        label::<Verdict>(&rep.separable_verdict),
        rep.evidence.as_ref().map(label).unwrap_or_default(),
        fmt17(r.convergence.residual),
        r.warnings.join("; "),
    ]
}

pub struct Table<W: Write> {
    inner: csv::Writer<W>,
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Spec(format!("csv: {e}"))
}

impl<W: Write> Table<W> {
    pub fn new(out: W, leading: &[&str], trailing: &[&str]) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(out);
        let header: Vec<&str> = leading
            .iter()
            .chain(REPORT_COLUMNS.iter())
            .chain(trailing)
            .copied()
            .collect();
        inner.write_record(&header).map_err(csv_err)?;
        Ok(Self { inner })
    }

    pub fn row(&mut self, leading: &[String], result: Option<&ExperimentResult>, trailing: &[String]) -> Result<()> {
        let middle = match result {
            Some(r) => report_fields(r),
            None => vec![String::new(); REPORT_COLUMNS.len()],
        };
        let record: Vec<&str> = leading
            .iter()
            .chain(&middle)
            .chain(trailing)
            .map(String::as_str)
            .collect();
        self.inner.write_record(&record).map_err(csv_err)
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush().map_err(csv_err)
    }
}
