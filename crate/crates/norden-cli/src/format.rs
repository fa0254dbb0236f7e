//! The manifold file format: JSON with expression-string matrices.
//!
//! ```json
//! {
//!   "name": "conformal_flat_4",
//!   "dimension": 4,
//!   "domain": [[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]],
//!   "g": [["exp(2*(x1*x2))", "0", ...], ...],
//!   "J": [["0", "0", "-1", "0"], ...]
//! }
//! ```
//!
//! Expression strings follow the grammar of `norden_core::expr`. `g` must be
//! symmetric (entries may differ textually but must evaluate equal), and the
//! structure must satisfy the Norden axioms at every sampled point.

use anyhow::{anyhow, bail, Context, Result};
use norden_core::{Chart, Expression};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifoldFile {
    pub name: String,
    pub dimension: usize,
    pub domain: Vec<[f64; 2]>,
    pub g: Vec<Vec<String>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<String>>,
}

impl ManifoldFile {
    pub fn load(path: &Path) -> Result<ManifoldFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let file: ManifoldFile = serde_json::from_str(&text)
            .with_context(|| format!("{}: malformed manifold file", path.display()))?;
        Ok(file)
    }

    /// Shape-check the arrays and parse every entry into a [`Chart`].
    pub fn to_chart(&self) -> Result<Chart> {
        let dim = self.dimension;
        if dim < 4 || !dim.is_multiple_of(2) {
            bail!("dimension must be an even integer >= 4, got {dim}");
        }
        if self.domain.len() != dim {
            bail!("domain has {} intervals, expected {dim}", self.domain.len());
        }
        let domain: Vec<(f64, f64)> = self.domain.iter().map(|d| (d[0], d[1])).collect();
        let parse_matrix = |name: &str, rows: &[Vec<String>]| -> Result<Vec<Expression>> {
            if rows.len() != dim {
                bail!("{name} has {} rows, expected {dim}", rows.len());
            }
            let mut out = Vec::with_capacity(dim * dim);
            for (r, row) in rows.iter().enumerate() {
                if row.len() != dim {
                    bail!("{name}[{r}] has {} entries, expected {dim}", row.len());
                }
                for (c, entry) in row.iter().enumerate() {
                    let e = Expression::parse(entry, dim)
                        .map_err(|err| anyhow!("{name}[{r}][{c}]: {err}"))?;
                    out.push(e);
                }
            }
            Ok(out)
        };
        let g = parse_matrix("g", &self.g)?;
        let j = parse_matrix("J", &self.j)?;
        Chart::new(&self.name, dim / 2, domain, g, j).map_err(|e| anyhow!("{e}"))
    }

    pub fn from_chart(chart: &Chart) -> ManifoldFile {
        let dim = chart.dim();
        let matrix = |exprs: &[Expression]| -> Vec<Vec<String>> {
            (0..dim)
                .map(|r| (0..dim).map(|c| exprs[r * dim + c].text().to_string()).collect())
                .collect()
        };
        ManifoldFile {
            name: chart.name().to_string(),
            dimension: dim,
            domain: chart.domain().iter().map(|&(lo, hi)| [lo, hi]).collect(),
            g: matrix(chart.g_exprs()),
            j: matrix(chart.j_exprs()),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Load a manifold file and build the chart, with location-carrying errors.
pub fn load_chart(path: &Path) -> Result<Chart> {
    ManifoldFile::load(path)?.to_chart()
}
