use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Graded grid of reduced imaginary times `γτ`, starting at the bounce.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauGrid {
    nodes: Vec<f64>,
    exponent: f64,
}

/// Serializable description of a power-law graded grid `t_i = T (i/N)^p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub intervals: usize,
    pub tau_max: f64,
    pub exponent: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            intervals: 2000,
            tau_max: 50.0,
            exponent: 2.0,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<TauGrid> {
        TauGrid::graded(self.intervals, self.tau_max, self.exponent)
    }
}

/// Smallest accepted reduced cap.
pub const MIN_TAU_MAX: f64 = 50.0;
/// Required node density per unit of reduced time on `[0, 5]`.
pub const MIN_NODES_PER_UNIT: usize = 10;

impl TauGrid {
    pub fn graded(intervals: usize, tau_max: f64, exponent: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent >= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "grading exponent must be >= 1, got {exponent}"
            )));
        }
        let grid = Self::graded_unchecked(intervals, tau_max, exponent);
        grid.validate()?;
        Ok(grid)
    }

    pub(crate) fn graded_unchecked(intervals: usize, tau_max: f64, exponent: f64) -> Self {
        let n = intervals.max(1);
        let nodes = (0..=n)
            .map(|i| tau_max * (i as f64 / n as f64).powf(exponent))
            .collect();
        Self { nodes, exponent }
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        let grid = Self {
            nodes,
            exponent: f64::NAN,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        let nodes = &self.nodes;
        if nodes.len() < 2 || nodes[0] != 0.0 {
            return Err(Error::InvalidGrid(
                "grid must start at 0 and hold at least two nodes".into(),
            ));
        }
        if nodes
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(Error::InvalidGrid(
                "nodes must be finite and strictly increasing".into(),
            ));
        }
        if self.tau_max() < MIN_TAU_MAX {
            return Err(Error::InvalidGrid(format!(
                "cap gamma*tau_max = {} is below {MIN_TAU_MAX}",
                self.tau_max()
            )));
        }
        for k in 0..5 {
            let lo = k as f64;
            let count = nodes.iter().filter(|&&t| t >= lo && t < lo + 1.0).count();
            if count < MIN_NODES_PER_UNIT {
                return Err(Error::InvalidGrid(format!(
                    "only {count} nodes on [{lo}, {}), need {MIN_NODES_PER_UNIT}",
                    lo + 1.0
                )));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn tau_max(&self) -> f64 {
        *self.nodes.last().expect("grid is never empty")
    }

    /// Grading exponent, `NaN` for grids built from explicit nodes.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Same grading law with twice as many intervals.
    pub fn refined(&self) -> Result<Self> {
        if self.exponent.is_nan() {
            let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
            for w in self.nodes.windows(2) {
                nodes.push(w[0]);
                nodes.push(0.5 * (w[0] + w[1]));
            }
            nodes.push(self.tau_max());
            return Self::from_nodes(nodes);
        }
        Self::graded(2 * self.intervals(), self.tau_max(), self.exponent)
    }

    /// Nodes multiplied by `factor`, without validation.
    pub(crate) fn scaled(&self, factor: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|t| t * factor).collect(),
            exponent: self.exponent,
        }
    }

    /// Index of the interval `[t_i, t_{i+1}]` holding `t`, clamped to the grid.
    pub fn locate(&self, t: f64) -> usize {
        let i = match self.nodes.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        i.min(self.nodes.len() - 2)
    }
}
