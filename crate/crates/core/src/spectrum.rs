use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// How a spectrum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Pencil,
    Analytic,
    Discretized,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Pencil => "pencil",
            Source::Analytic => "analytic",
            Source::Discretized => "discretized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralValue {
    pub value: f64,
    pub error_hint: Option<f64>,
}

/// Eigenvalues sorted by descending modulus, positive first on ties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    entries: Vec<SpectralValue>,
    source: Source,
}

/// Descending `|v|`, then positive before negative.
pub fn by_modulus(a: f64, b: f64) -> Ordering {
    b.abs().total_cmp(&a.abs()).then(b.total_cmp(&a))
}

impl Spectrum {
    pub fn new(mut entries: Vec<SpectralValue>, source: Source) -> Self {
        entries.sort_by(|a, b| by_modulus(a.value, b.value));
        Spectrum { entries, source }
    }

    pub fn from_values(values: impl IntoIterator<Item = f64>, source: Source) -> Self {
        Spectrum::new(
            values
                .into_iter()
                .map(|value| SpectralValue {
                    value,
                    error_hint: None,
                })
                .collect(),
            source,
        )
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn entries(&self) -> &[SpectralValue] {
        &self.entries
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    /// Values in increasing order.
    pub fn ascending(&self) -> Vec<f64> {
        let mut v = self.values();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The value of largest modulus.
    pub fn top(&self) -> Option<f64> {
        self.entries.first().map(|e| e.value)
    }

    pub fn max_abs(&self) -> f64 {
        self.top().map_or(0.0, f64::abs)
    }

    pub fn min(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.value).min_by(f64::total_cmp)
    }

    pub fn max(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.value).max_by(f64::total_cmp)
    }

    pub fn truncated(mut self, count: usize) -> Self {
        self.entries.truncate(count);
        self
    }
}
