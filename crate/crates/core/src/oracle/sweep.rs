//! Sweep reports and their CSV form.

use std::io::Write;

use serde::Serialize;

use crate::error::{GnsError, Result};

/// Relative excess of a measured ratio over its bound that is still accepted.
pub const DOMINATION_TOL: f64 = 1e-6;

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub check: &'static str,
    pub d: u32,
    pub s: f64,
    /// Input exponent of a smoothing estimate; empty for interpolation rows.
    pub r: Option<String>,
    pub p: String,
    pub t: Option<f64>,
    pub width: f64,
    pub dilation: Option<f64>,
    pub measured: f64,
    pub bound: f64,
    /// `1 - measured/bound`; negative on a violation.
    pub slack: f64,
    pub ok: bool,
}

impl SweepRow {
    pub(crate) fn judge(mut self) -> Self {
        self.slack = 1.0 - self.measured / self.bound;
        self.ok = self.measured <= self.bound * (1.0 + DOMINATION_TOL);
        self
    }
}

/// Outcome of a verification sweep, rows in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Largest relative spread of the ratio across dilations of one width,
    /// for interpolation sweeps.
    pub dilation_spread: Option<f64>,
}

impl SweepReport {
    pub fn violations(&self) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| !r.ok).collect()
    }

    pub fn worst_slack(&self) -> f64 {
        self.rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min)
    }

    pub fn dilation_invariant(&self) -> bool {
        self.dilation_spread.is_none_or(|s| s <= DOMINATION_TOL)
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty() && self.dilation_invariant()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| GnsError::Parse(e.to_string()))?;
        }
        w.flush().map_err(|e| GnsError::Parse(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| GnsError::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(measured: f64, bound: f64) -> SweepRow {
        SweepRow {
            check: "parabolic",
            d: 1,
            s: 0.5,
            r: Some("1".into()),
            p: "inf".into(),
            t: Some(0.1),
            width: 2.0,
            dilation: None,
            measured,
            bound,
            slack: 0.0,
            ok: false,
        }
        .judge()
    }

    #[test]
    fn judging_and_csv() {
        let report = SweepReport { rows: vec![row(0.5, 1.0), row(1.0 + 5e-7, 1.0), row(1.1, 1.0)], dilation_spread: None };
        assert_eq!(report.violations().len(), 1);
        assert!((report.worst_slack() + 0.1).abs() < 1e-12);
        assert!(!report.passed());
        let csv = report.to_csv_string().unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "check,d,s,r,p,t,width,dilation,measured,bound,slack,ok"
        );
        assert_eq!(lines.next().unwrap(), "parabolic,1,0.5,1,inf,0.1,2.0,,0.5,1.0,0.5,true");
        assert_eq!(csv.lines().count(), 4);
    }
}
