//! Fixed-format CSV and JSON rendering. Ra is printed with 6 decimals and
//! a with 4, so identical runs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use ehd_core::neutral::NeutralPoint;
use serde::Serialize;

use crate::args::Format;

pub const CSV_HEADER: &str = "a,M,Ra,method,resolution,converged";

/// `x` rounded to `digits` decimals, for JSON numbers that mirror the CSV.
pub fn round(x: f64, digits: i32) -> f64 {
    let s = 10f64.powi(digits);
    (x * s).round() / s
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub a: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "Ra")]
    pub ra: f64,
    pub method: &'static str,
    pub resolution: usize,
    pub converged: bool,
}

impl From<&NeutralPoint> for Record {
    fn from(p: &NeutralPoint) -> Self {
        Record {
            a: round(p.a, 4),
            m: p.m,
            ra: round(p.ra, 6),
            method: p.method.label(),
            resolution: p.resolution,
            converged: p.converged,
        }
    }
}

pub fn points(points: &[NeutralPoint], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for p in points {
                writeln!(
                    s,
                    "{:.4},{},{:.6},{},{},{}",
                    p.a,
                    p.m,
                    p.ra,
                    p.method.label(),
                    p.resolution,
                    p.converged
                )
                .unwrap();
            }
            s
        }
        Format::Json => json(&points.iter().map(Record::from).collect::<Vec<_>>()),
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

/// Optional number as fixed decimals, empty when absent.
pub fn opt(x: Option<f64>, digits: usize) -> String {
    x.map(|v| format!("{v:.digits$}")).unwrap_or_default()
}

pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
