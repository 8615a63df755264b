use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::classify::ClassifiedScenario;
use crate::{Error, Result};

/// Outcome of re-running a critical scenario on another backend.
///
/// The digit is the source class (1 unsafe, 2 safe), the letter the
/// reproduced class (a unsafe, b critical but safe, c non-critical).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum XSimCategory {
    #[serde(rename = "1a")]
    C1a,
    #[serde(rename = "1b")]
    C1b,
    #[serde(rename = "1c")]
    C1c,
    #[serde(rename = "2a")]
    C2a,
    #[serde(rename = "2b")]
    C2b,
    #[serde(rename = "2c")]
    C2c,
}

impl XSimCategory {
    pub const ALL: [XSimCategory; 6] = [Self::C1a, Self::C1b, Self::C1c, Self::C2a, Self::C2b, Self::C2c];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::C1a => "1a",
            Self::C1b => "1b",
            Self::C1c => "1c",
            Self::C2a => "2a",
            Self::C2b => "2b",
            Self::C2c => "2c",
        }
    }

    pub fn source_unsafe(self) -> bool {
        matches!(self, Self::C1a | Self::C1b | Self::C1c)
    }
}

impl fmt::Display for XSimCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn xsim_categorize(source: &ClassifiedScenario, reproduced: &ClassifiedScenario) -> Result<XSimCategory> {
    if !source.critical {
        return Err(Error::SourceNotCritical);
    }
    let col = if reproduced.violation {
        0
    } else if reproduced.critical {
        1
    } else {
        2
    };
    let row = if source.violation { 0 } else { 3 };
    Ok(XSimCategory::ALL[row + col])
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    #[serde(rename = "1a")]
    pub c1a: usize,
    #[serde(rename = "1b")]
    pub c1b: usize,
    #[serde(rename = "1c")]
    pub c1c: usize,
    #[serde(rename = "2a")]
    pub c2a: usize,
    #[serde(rename = "2b")]
    pub c2b: usize,
    #[serde(rename = "2c")]
    pub c2c: usize,
}

impl CategoryCounts {
    pub fn from_categories(categories: &[XSimCategory]) -> Self {
        let mut c = Self::default();
        for &cat in categories {
            *c.get_mut(cat) += 1;
        }
        c
    }

    pub fn get(&self, cat: XSimCategory) -> usize {
        match cat {
            XSimCategory::C1a => self.c1a,
            XSimCategory::C1b => self.c1b,
            XSimCategory::C1c => self.c1c,
            XSimCategory::C2a => self.c2a,
            XSimCategory::C2b => self.c2b,
            XSimCategory::C2c => self.c2c,
        }
    }

    fn get_mut(&mut self, cat: XSimCategory) -> &mut usize {
        match cat {
            XSimCategory::C1a => &mut self.c1a,
            XSimCategory::C1b => &mut self.c1b,
            XSimCategory::C1c => &mut self.c1c,
            XSimCategory::C2a => &mut self.c2a,
            XSimCategory::C2b => &mut self.c2b,
            XSimCategory::C2c => &mut self.c2c,
        }
    }

    /// Scenarios that were unsafe on the source backend.
    pub fn source_unsafe(&self) -> usize {
        self.c1a + self.c1b + self.c1c
    }

    pub fn source_safe(&self) -> usize {
        self.c2a + self.c2b + self.c2c
    }

    pub fn total(&self) -> usize {
        self.source_unsafe() + self.source_safe()
    }
}

/// Fixed-width histogram starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub objective: String,
    pub bin_width: f64,
    /// `counts[i]` covers `[i * bin_width, (i + 1) * bin_width)`.
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn build(objective: &str, values: &[f64], bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::config("histogram bin width must be positive"));
        }
        let mut counts = Vec::new();
        for &v in values {
            let bin = libm::floor(v.max(0.0) / bin_width) as usize;
            if bin >= counts.len() {
                counts.resize(bin + 1, 0);
            }
            counts[bin] += 1;
        }
        Ok(Self {
            objective: String::from(objective),
            bin_width,
            counts,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XSimRow {
    pub index: usize,
    pub category: XSimCategory,
    pub source: [f64; 3],
    pub reproduced: [f64; 3],
    /// `|source - reproduced|` per objective.
    pub difference: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XSimReport {
    /// E.g. `alpha->beta`.
    pub direction: String,
    pub rows: Vec<XSimRow>,
    pub counts: CategoryCounts,
    pub histograms: Vec<Histogram>,
}

impl XSimReport {
    /// Absolute differences of one objective (0, 1 or 2) across all rows.
    pub fn differences(&self, objective: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.difference[objective]).collect()
    }
}

pub const DEFAULT_BIN_WIDTHS: [f64; 3] = [1.0, 1.0, 0.5];

/// Categorises `(source, reproduced)` pairs and summarises the objective drift.
pub fn xsim_report(
    pairs: &[(ClassifiedScenario, ClassifiedScenario)],
    direction: &str,
    bin_widths: [f64; 3],
) -> Result<XSimReport> {
    if pairs.is_empty() {
        return Err(Error::Empty("reproduction pairs"));
    }
    let mut rows = Vec::with_capacity(pairs.len());
    for (index, (s, r)) in pairs.iter().enumerate() {
        let category = xsim_categorize(s, r)?;
        let source = s.outcome.objectives();
        let reproduced = r.outcome.objectives();
        let mut difference = [0.0; 3];
        for i in 0..3 {
            difference[i] = (source[i] - reproduced[i]).abs();
        }
        rows.push(XSimRow {
            index,
            category,
            source,
            reproduced,
            difference,
        });
    }
    let categories: Vec<XSimCategory> = rows.iter().map(|r| r.category).collect();
    let counts = CategoryCounts::from_categories(&categories);
    let mut histograms = Vec::with_capacity(3);
    for (i, name) in ["ff1", "ff2", "ff3"].iter().enumerate() {
        let values: Vec<f64> = rows.iter().map(|r| r.difference[i]).collect();
        histograms.push(Histogram::build(name, &values, bin_widths[i])?);
    }
    Ok(XSimReport {
        direction: String::from(direction),
        rows,
        counts,
        histograms,
    })
}
