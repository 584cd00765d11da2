//! The additive affectance interference model.
//!
//! A layer is a bipartite graph between `n` transmitters and `n` receivers.
//! Every transmitter `u` imposes a weight `a(u,(v,w))` in `[0,1]` on each link
//! `(v,w)`; a transmission over `(v,w)` succeeds when `v` transmits and the
//! summed weight of all transmitters active in the slot stays strictly below 1.
//!
//! Indices are 0-based throughout the API. Only the instance file format and
//! schedule text format use 1-based indices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schedule::Schedule;

/// A link `(v, w)`: transmitter `v` to receiver `w`.
pub type Link = (usize, usize);

/// Bipartite transmitter/receiver graph with cached neighborhoods `F_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerTopology {
    n: usize,
    /// `neighbors[w]` is `F_w`, ascending.
    neighbors: Vec<Vec<usize>>,
    /// Link ids of receiver `w` are `link_start[w]..link_start[w + 1]`, in `F_w` order.
    link_start: Vec<usize>,
}

impl LayerTopology {
    /// Builds a topology. Every receiver needs at least one incoming link.
    pub fn new(n: usize, links: impl IntoIterator<Item = Link>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        let mut neighbors = vec![Vec::new(); n];
        for (v, w) in links {
            for idx in [v, w] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx + 1, n });
                }
            }
            neighbors[w].push(v);
        }
        let mut link_start = Vec::with_capacity(n + 1);
        link_start.push(0);
        for (w, f) in neighbors.iter_mut().enumerate() {
            f.sort_unstable();
            if let Some(pair) = f.windows(2).find(|p| p[0] == p[1]) {
                return Err(Error::DuplicateLink { v: pair[0] + 1, w: w + 1 });
            }
            if f.is_empty() {
                return Err(Error::IsolatedReceiver { receiver: w + 1 });
            }
            link_start.push(link_start[w] + f.len());
        }
        Ok(Self { n, neighbors, link_start })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `F_w`, the transmitters linked to receiver `w`, ascending.
    pub fn neighbors(&self, w: usize) -> &[usize] {
        &self.neighbors[w]
    }

    pub fn num_links(&self) -> usize {
        self.link_start[self.n]
    }

    /// All links ordered by receiver, then transmitter.
    pub fn links(&self) -> impl Iterator<Item = Link> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(w, f)| f.iter().map(move |&v| (v, w)))
    }

    /// Maximum in-degree `max_w |F_w|`.
    pub fn max_in_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn link_id(&self, (v, w): Link) -> Option<usize> {
        if w >= self.n {
            return None;
        }
        self.neighbors[w]
            .binary_search(&v)
            .ok()
            .map(|pos| self.link_start[w] + pos)
    }

    pub(crate) fn link_ids(&self, w: usize) -> std::ops::Range<usize> {
        self.link_start[w]..self.link_start[w + 1]
    }
}

/// Sparse affectance weights, one column per link. Absent entries are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AffectanceMatrix {
    /// `columns[link]` holds the nonzero `(u, a(u, link))`, ascending in `u`.
    columns: Vec<Vec<(usize, f64)>>,
}

impl AffectanceMatrix {
    /// Builds the matrix for `topo` from `(u, link, value)` triples.
    ///
    /// Rejects values outside `[0,1]` (including NaN), nonzero self-affectance
    /// `a(v,(v,w))`, unknown links and repeated triples. Zero values are not stored.
    pub fn new(
        topo: &LayerTopology,
        entries: impl IntoIterator<Item = (usize, Link, f64)>,
    ) -> Result<Self> {
        let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); topo.num_links()];
        let mut seen: Vec<Vec<usize>> = vec![Vec::new(); topo.num_links()];
        for (u, (v, w), value) in entries {
            if u >= topo.n() {
                return Err(Error::IndexOutOfRange { index: u + 1, n: topo.n() });
            }
            let id = topo
                .link_id((v, w))
                .ok_or(Error::UnknownLink { v: v + 1, w: w + 1 })?;
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ValueOutOfRange { u: u + 1, v: v + 1, w: w + 1, value });
            }
            if u == v && value != 0.0 {
                return Err(Error::SelfAffectance { v: v + 1, w: w + 1, value });
            }
            if seen[id].contains(&u) {
                return Err(Error::DuplicateEntry { u: u + 1, v: v + 1, w: w + 1 });
            }
            seen[id].push(u);
            if value > 0.0 {
                columns[id].push((u, value));
            }
        }
        for col in &mut columns {
            col.sort_unstable_by_key(|&(u, _)| u);
        }
        Ok(Self { columns })
    }

    /// All-zero matrix for `topo`.
    pub fn zeros(topo: &LayerTopology) -> Self {
        Self { columns: vec![Vec::new(); topo.num_links()] }
    }

    pub(crate) fn column(&self, link_id: usize) -> &[(usize, f64)] {
        &self.columns[link_id]
    }

    pub fn nonzero_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
}

/// A topology together with its affectance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    topo: LayerTopology,
    matrix: AffectanceMatrix,
}

/// Outcome of checking a schedule against the selection predicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectiveReport {
    pub covered: Vec<usize>,
    pub uncovered: Vec<usize>,
    /// Receiver to the 1-based number of the first slot selecting it.
    pub first_slot: BTreeMap<usize, usize>,
}

impl SelectiveReport {
    pub fn is_selective(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Membership mask of length `n` for the given transmitters.
pub fn mask_of(n: usize, members: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &u in members {
        mask[u] = true;
    }
    mask
}

impl Instance {
    pub fn new(topo: LayerTopology, matrix: AffectanceMatrix) -> Self {
        assert_eq!(
            matrix.columns.len(),
            topo.num_links(),
            "affectance matrix built for a different topology"
        );
        Self { topo, matrix }
    }

    pub fn topology(&self) -> &LayerTopology {
        &self.topo
    }

    pub fn matrix(&self) -> &AffectanceMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.topo.n()
    }

    /// `a(u, link)`, or 0 when not stored.
    pub fn affectance(&self, u: usize, link: Link) -> Result<f64> {
        let id = self.require_link(link)?;
        Ok(self.matrix.columns[id]
            .binary_search_by_key(&u, |&(x, _)| x)
            .map(|pos| self.matrix.columns[id][pos].1)
            .unwrap_or(0.0))
    }

    /// All stored `(u, link, value)` triples, ordered by link then `u`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Link, f64)> + '_ {
        self.topo.links().enumerate().flat_map(move |(id, link)| {
            self.matrix.columns[id].iter().map(move |&(u, a)| (u, link, a))
        })
    }

    fn require_link(&self, (v, w): Link) -> Result<usize> {
        self.topo
            .link_id((v, w))
            .ok_or(Error::UnknownLink { v: v + 1, w: w + 1 })
    }

    /// Sum of `a(u, link)` over transmitters `u` set in `active`.
    ///
    /// Summation runs left to right over ascending `u`, so the result is
    /// bit-for-bit reproducible.
    pub fn total_affectance(&self, active: &[bool], link: Link) -> Result<f64> {
        let id = self.require_link(link)?;
        Ok(self.link_total(id, active))
    }

    /// True iff `v` transmits and the total affectance on `(v,w)` is strictly below 1.
    pub fn is_successful(&self, active: &[bool], link: Link) -> Result<bool> {
        let id = self.require_link(link)?;
        Ok(active[link.0] && self.link_total(id, active) < 1.0)
    }

    /// True iff some `v` in `F_w` transmits successfully to `w` under `active`.
    pub fn is_selected(&self, active: &[bool], w: usize) -> bool {
        self.selecting_transmitter(active, w).is_some()
    }

    /// The lowest-indexed `v` in `F_w` whose transmission to `w` succeeds.
    pub fn selecting_transmitter(&self, active: &[bool], w: usize) -> Option<usize> {
        self.topo
            .neighbors(w)
            .iter()
            .zip(self.topo.link_ids(w))
            .find(|&(&v, id)| active[v] && self.link_total(id, active) < 1.0)
            .map(|(&v, _)| v)
    }

    pub(crate) fn link_total(&self, id: usize, active: &[bool]) -> f64 {
        let mut total = 0.0;
        for &(u, a) in &self.matrix.columns[id] {
            if active[u] {
                total += a;
            }
        }
        total
    }

    /// Sum of `a(u, link)` over every transmitter `u`.
    pub(crate) fn link_load(&self, id: usize) -> f64 {
        self.matrix.columns[id].iter().fold(0.0, |acc, &(_, a)| acc + a)
    }

    /// Checks whether every receiver is selected by some slot of `schedule`.
    pub fn verify_selective(&self, schedule: &Schedule) -> SelectiveReport {
        let n = self.n();
        let mut first_slot = BTreeMap::new();
        let mut mask = vec![false; n];
        for (j, slot) in schedule.slots().iter().enumerate() {
            mask.iter_mut().for_each(|m| *m = false);
            for &u in slot {
                mask[u] = true;
            }
            for w in 0..n {
                if !first_slot.contains_key(&w) && self.is_selected(&mask, w) {
                    first_slot.insert(w, j + 1);
                }
            }
            if first_slot.len() == n {
                break;
            }
        }
        let (covered, uncovered) = (0..n).partition(|w| first_slot.contains_key(w));
        SelectiveReport { covered, uncovered, first_slot }
    }
}

/// Encodes a Radio Network layer: `a(u,(v,w)) = 1` when `u` is in `F_w` and
/// `u != v`, otherwise 0. A receiver is then selected exactly when one of its
/// neighbors transmits.
///
/// `neighborhoods[w]` lists `F_w`.
pub fn encode_radio_network(n: usize, neighborhoods: &[Vec<usize>]) -> Result<Instance> {
    if neighborhoods.len() != n {
        return Err(Error::InvalidParameter(format!(
            "expected {n} neighborhoods, got {}",
            neighborhoods.len()
        )));
    }
    let links: Vec<Link> = neighborhoods
        .iter()
        .enumerate()
        .flat_map(|(w, f)| f.iter().map(move |&v| (v, w)))
        .collect();
    let topo = LayerTopology::new(n, links)?;
    let mut entries = Vec::new();
    for w in 0..n {
        let f = topo.neighbors(w);
        for &v in f {
            entries.extend(f.iter().filter(|&&u| u != v).map(|&u| (u, (v, w), 1.0)));
        }
    }
    let matrix = AffectanceMatrix::new(&topo, entries)?;
    Ok(Instance::new(topo, matrix))
}
