//! Replicated-office deployment.
//!
//! Offices sit side by side along one row, each `office_width` grid cells
//! wide. Every office holds `nodes_per_office` transmitters on grid row 0 and
//! as many receivers directly below them on row 1, spread evenly across the
//! office. Metal walls block links between offices, so each transmitter links
//! to every receiver of its own office and to none elsewhere. Interference
//! still leaks through: a wall adds `wall_penalty` cells to the effective
//! distance.

use serde::{Deserialize, Serialize};

use crate::affectance::{AffectanceMatrix, Instance, LayerTopology};
use crate::error::{Error, Result};

/// Affectance values below this are stored as zero.
pub const SPARSITY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OfficeGridSpec {
    pub offices: usize,
    pub nodes_per_office: usize,
    /// Transmission reach in grid cells.
    pub reach: f64,
    /// Extra grid cells per office wall between interferer and receiver.
    pub wall_penalty: f64,
    /// Decay exponent of affectance with effective distance.
    pub alpha: f64,
    pub office_width: usize,
}

impl Default for OfficeGridSpec {
    fn default() -> Self {
        Self { offices: 2, nodes_per_office: 3, reach: 5.0, wall_penalty: 10.0, alpha: 2.0, office_width: 5 }
    }
}

impl OfficeGridSpec {
    pub fn with_offices(offices: usize) -> Self {
        Self { offices, ..Self::default() }
    }

    pub fn n(&self) -> usize {
        self.offices * self.nodes_per_office
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("office spec: {what}")));
        if self.offices == 0 || self.nodes_per_office == 0 || self.office_width == 0 {
            return bad("offices, nodes_per_office and office_width must be positive");
        }
        if !self.reach.is_finite() || self.reach < 1.0 {
            return bad("reach must be at least 1");
        }
        if !self.wall_penalty.is_finite() || self.wall_penalty < 0.0 {
            return bad("wall_penalty must be non-negative");
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return bad("alpha must be positive");
        }
        Ok(())
    }

    /// Default `(density, dilution)` for the SINR baseline: one contender
    /// class per office and `⌈(2·reach + wall_penalty)/office_width⌉` reuse
    /// classes (at least 1).
    pub fn sinr_defaults(&self) -> (usize, usize) {
        let dilution = ((2.0 * self.reach + self.wall_penalty) / self.office_width as f64).ceil();
        (self.nodes_per_office, (dilution as usize).max(1))
    }

    fn office_of(&self, node: usize) -> usize {
        node / self.nodes_per_office
    }

    /// Grid column of node `node` (transmitters and receivers share columns).
    fn column(&self, node: usize) -> usize {
        let j = node % self.nodes_per_office;
        let span = self.office_width - 1;
        let offset = if self.nodes_per_office == 1 { span / 2 } else { j * span / (self.nodes_per_office - 1) };
        self.office_of(node) * self.office_width + offset
    }

    /// Grid distance plus wall penalties from transmitter `u` to receiver `w`.
    pub fn effective_distance(&self, u: usize, w: usize) -> f64 {
        let dx = self.column(u).abs_diff(self.column(w)) as f64;
        // Chebyshev distance; the rows are one cell apart
        let grid = dx.max(1.0);
        let walls = self.office_of(u).abs_diff(self.office_of(w)) as f64;
        grid + self.wall_penalty * walls
    }

    /// `min(1, (reach/d_eff)^alpha)`, truncated to 0 below the sparsity floor.
    pub fn affectance(&self, u: usize, w: usize) -> f64 {
        let d = self.effective_distance(u, w);
        let a = (self.reach / d).powf(self.alpha).min(1.0);
        if a < SPARSITY_FLOOR {
            0.0
        } else {
            a
        }
    }
}

/// Builds the topology and affectance matrix for `spec`.
pub fn generate_office_layer(spec: &OfficeGridSpec) -> Result<Instance> {
    spec.validate()?;
    let n = spec.n();
    let k = spec.nodes_per_office;
    let links: Vec<(usize, usize)> = (0..n)
        .flat_map(|w| {
            let base = (w / k) * k;
            (base..base + k).map(move |v| (v, w))
        })
        .collect();
    let topo = LayerTopology::new(n, links.iter().copied())?;
    let mut entries = Vec::new();
    for &(v, w) in &links {
        for u in (0..n).filter(|&u| u != v) {
            let a = spec.affectance(u, w);
            if a > 0.0 {
                entries.push((u, (v, w), a));
            }
        }
    }
    let matrix = AffectanceMatrix::new(&topo, entries)?;
    Ok(Instance::new(topo, matrix))
}
