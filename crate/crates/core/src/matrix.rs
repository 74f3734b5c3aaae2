//! The performance matrix: expected loss of each model on each timestep.
//!
//! Entry `(i, j)` holds the loss of the model trained at step `i` evaluated
//! on the data of step `j`, defined for `i <= j`. Offline steps carry
//! negative indices, the final offline model is index `0`, and the online
//! horizon runs `1..=T`. Querying `i > j` yields `0.0` exactly; models are
//! never evaluated on data older than their training step.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Grid of per-(model, time) losses over an offline window of `w + 1` steps
/// and an online horizon of `T` steps.
///
/// Indices are signed: offline models/steps are `-w..=0`, online are
/// `1..=T`. The map may be partial (a realized trajectory only covers the
/// deployed pairs); completeness is checked where an operation needs it.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceMatrix {
    offline_w: usize,
    horizon_t: usize,
    entries: BTreeMap<(i32, i32), f64>,
    loss_bounded: bool,
}

impl PerformanceMatrix {
    /// Empty matrix covering offline steps `-w..=0` and online steps `1..=T`.
    pub fn new(offline_w: usize, horizon_t: usize) -> Self {
        Self {
            offline_w,
            horizon_t,
            entries: BTreeMap::new(),
            loss_bounded: true,
        }
    }

    /// Marks losses as unbounded (e.g. regression metrics), disabling the
    /// `[0, 1]` range check on inserts.
    pub fn with_unbounded_loss(mut self) -> Self {
        self.loss_bounded = false;
        self
    }

    pub fn offline_w(&self) -> usize {
        self.offline_w
    }

    pub fn horizon_t(&self) -> usize {
        self.horizon_t
    }

    /// Total number of timesteps covered: `w + 1` offline plus `T` online.
    pub fn horizon_total(&self) -> usize {
        self.offline_w + 1 + self.horizon_t
    }

    pub fn loss_bounded(&self) -> bool {
        self.loss_bounded
    }

    fn check_index(&self, i: i32, j: i32) -> Result<()> {
        let lo = -(self.offline_w as i32);
        let hi = self.horizon_t as i32;
        if i < lo || i > hi || j < lo || j > hi {
            return Err(Error::argument(format!(
                "index ({i}, {j}) outside covered window [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    /// Inserts the loss of model `i` on step `j`. Rejects `i > j` and, for
    /// bounded losses, values outside `[0, 1]`.
    pub fn insert(&mut self, i: i32, j: i32, value: f64) -> Result<()> {
        self.check_index(i, j)?;
        if i > j {
            return Err(Error::data(format!(
                "entry ({i}, {j}) has model index greater than time index"
            )));
        }
        if !value.is_finite() {
            return Err(Error::data(format!("entry ({i}, {j}) is not finite")));
        }
        if self.loss_bounded && !(0.0..=1.0).contains(&value) {
            return Err(Error::data(format!(
                "entry ({i}, {j}) = {value} outside [0, 1]"
            )));
        }
        self.entries.insert((i, j), value);
        Ok(())
    }

    /// Loss of model `i` at step `j`. Returns `0.0` exactly when `i > j`;
    /// a defined pair that was never inserted is a data error.
    pub fn get(&self, i: i32, j: i32) -> Result<f64> {
        if i > j {
            return Ok(0.0);
        }
        self.entries
            .get(&(i, j))
            .copied()
            .ok_or(Error::MissingEntry { model: i, time: j })
    }

    pub fn contains(&self, i: i32, j: i32) -> bool {
        self.entries.contains_key(&(i, j))
    }

    /// Iterates defined entries in `(i, j)` order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, i32, f64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest defined loss (0.0 for an empty matrix).
    pub fn max_entry(&self) -> f64 {
        self.entries.values().copied().fold(0.0, f64::max)
    }

    /// True when every pair `i <= j` in the covered window is defined.
    pub fn is_complete(&self) -> bool {
        let lo = -(self.offline_w as i32);
        let hi = self.horizon_t as i32;
        for i in lo..=hi {
            for j in i..=hi {
                if !self.entries.contains_key(&(i, j)) {
                    return false;
                }
            }
        }
        true
    }

    /// True when all pairs needed to cost any online schedule are defined:
    /// `(i, t)` for `0 <= i <= t` and `t = 1..=T`.
    pub fn covers_online(&self) -> bool {
        let hi = self.horizon_t as i32;
        for t in 1..=hi {
            for i in 0..=t {
                if !self.entries.contains_key(&(i, t)) {
                    return false;
                }
            }
        }
        true
    }

    /// Writes the matrix as CSV with header `i,j,value`, rows in `(i, j)`
    /// order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["i", "j", "value"])?;
        for (i, j, v) in self.iter() {
            out.write_record(&[i.to_string(), j.to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(file)
    }

    /// Parses the `i,j,value` CSV format. Rows with `i > j` or values
    /// outside `[0, 1]` are rejected; the covered window is inferred from
    /// the index range.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        {
            let headers = rdr.headers()?;
            let expect = ["i", "j", "value"];
            let got: Vec<&str> = headers.iter().map(str::trim).collect();
            if got != expect {
                return Err(Error::data(format!(
                    "expected header i,j,value, found {}",
                    got.join(",")
                )));
            }
        }
        let mut rows: Vec<(i32, i32, f64)> = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != 3 {
                return Err(Error::data(format!(
                    "row {}: expected 3 fields, found {}",
                    line + 2,
                    record.len()
                )));
            }
            let i: i32 = record[0]
                .trim()
                .parse()
                .map_err(|_| Error::data(format!("row {}: bad model index {:?}", line + 2, &record[0])))?;
            let j: i32 = record[1]
                .trim()
                .parse()
                .map_err(|_| Error::data(format!("row {}: bad time index {:?}", line + 2, &record[1])))?;
            let value: f64 = record[2]
                .trim()
                .parse()
                .map_err(|_| Error::data(format!("row {}: bad value {:?}", line + 2, &record[2])))?;
            if i > j {
                return Err(Error::data(format!(
                    "row {}: entry ({i}, {j}) has model index greater than time index",
                    line + 2
                )));
            }
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::data(format!(
                    "row {}: value {value} outside [0, 1]",
                    line + 2
                )));
            }
            rows.push((i, j, value));
        }
        if rows.is_empty() {
            return Err(Error::data("performance matrix file has no entries"));
        }
        let min_i = rows.iter().map(|r| r.0).min().unwrap();
        let max_j = rows.iter().map(|r| r.1).max().unwrap();
        if min_i > 0 {
            return Err(Error::data(
                "performance matrix must include the final offline model (index 0)",
            ));
        }
        if max_j < 1 {
            return Err(Error::data(
                "performance matrix must cover at least one online step",
            ));
        }
        let mut pe = PerformanceMatrix::new((-min_i) as usize, max_j as usize);
        for (i, j, v) in rows {
            pe.insert(i, j, v)?;
        }
        Ok(pe)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(file)
    }
}
