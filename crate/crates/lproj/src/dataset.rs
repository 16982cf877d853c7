//! Aligned named time series with outcome / treatment / instrument /
//! control roles.

use crate::error::{Error, Result};

/// Role assignment for a dataset: one outcome, one treatment, an optional
/// instrument (the treatment doubles as its own instrument when absent),
/// and any number of controls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roles {
    pub outcome: String,
    pub treatment: String,
    pub instrument: Option<String>,
    pub controls: Vec<String>,
}

impl Roles {
    pub fn new(outcome: impl Into<String>, treatment: impl Into<String>) -> Self {
        Self {
            outcome: outcome.into(),
            treatment: treatment.into(),
            instrument: None,
            controls: Vec::new(),
        }
    }

    pub fn with_instrument(mut self, name: impl Into<String>) -> Self {
        self.instrument = Some(name.into());
        self
    }

    pub fn with_controls<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.controls = names.into_iter().map(Into::into).collect();
        self
    }
}

/// A collection of equal-length, all-finite series with role designations.
///
/// Construction validates everything up front; estimators can then assume a
/// clean panel. Non-finite values are rejected rather than imputed since a
/// single silent NaN would poison every long-run variance downstream.
#[derive(Debug, Clone)]
pub struct TimeSeriesDataset {
    series: Vec<(String, Vec<f64>)>,
    len: usize,
    roles: Roles,
}

impl TimeSeriesDataset {
    pub fn new<I, S>(series: I, roles: Roles) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let series: Vec<(String, Vec<f64>)> =
            series.into_iter().map(|(n, v)| (n.into(), v)).collect();
        if series.is_empty() {
            return Err(Error::InvalidData("dataset has no series".into()));
        }
        let len = series[0].1.len();
        if len < 2 {
            return Err(Error::InvalidData(format!(
                "series length {len} is below the minimum of 2"
            )));
        }
        for (name, values) in &series {
            if values.len() != len {
                return Err(Error::InvalidData(format!(
                    "series '{name}' has length {} but expected {len}",
                    values.len()
                )));
            }
            if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidData(format!(
                    "series '{name}' has a non-finite value at index {idx}"
                )));
            }
        }
        for (i, (name, _)) in series.iter().enumerate() {
            if series[i + 1..].iter().any(|(other, _)| other == name) {
                return Err(Error::InvalidData(format!("duplicate series name '{name}'")));
            }
        }

        let dataset = Self { series, len, roles };
        dataset.check_role(&dataset.roles.outcome.clone(), "outcome")?;
        dataset.check_role(&dataset.roles.treatment.clone(), "treatment")?;
        if let Some(z) = dataset.roles.instrument.clone() {
            dataset.check_role(&z, "instrument")?;
        }
        let controls = dataset.roles.controls.clone();
        for c in &controls {
            dataset.check_role(c, "control")?;
        }
        for (i, c) in controls.iter().enumerate() {
            if controls[i + 1..].contains(c) {
                return Err(Error::InvalidData(format!("duplicate control '{c}'")));
            }
        }
        Ok(dataset)
    }

    fn check_role(&self, name: &str, role: &str) -> Result<()> {
        if self.get(name).is_none() {
            return Err(Error::InvalidData(format!(
                "{role} series '{name}' not found in dataset"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn roles(&self) -> &Roles {
        &self.roles
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.series.iter().map(|(n, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.series
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn outcome(&self) -> &[f64] {
        self.get(&self.roles.outcome).expect("validated at construction")
    }

    pub fn treatment(&self) -> &[f64] {
        self.get(&self.roles.treatment).expect("validated at construction")
    }

    /// Instrument series; falls back to the treatment when none is declared.
    pub fn instrument(&self) -> &[f64] {
        match &self.roles.instrument {
            Some(z) => self.get(z).expect("validated at construction"),
            None => self.treatment(),
        }
    }

    pub fn controls(&self) -> Vec<&[f64]> {
        self.roles
            .controls
            .iter()
            .map(|c| self.get(c).expect("validated at construction"))
            .collect()
    }

    pub fn n_controls(&self) -> usize {
        self.roles.controls.len()
    }
}
