//! Dyadic arrays over an ordered node set.
//!
//! Nodes carry an integer rank `1..=n` derived from an external ordering
//! covariate. Every observation is attached to an unordered pair of distinct
//! nodes, stored canonically as `(i, j)` with `i < j`.

use std::collections::{HashMap, HashSet};

use nalgebra::{DMatrix, DVector};

use crate::error::{DyadError, Result};

/// Bijection between external node labels and ranks `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeOrder {
    labels: Vec<String>,
    rank: HashMap<String, usize>,
}

impl NodeOrder {
    /// Ranks nodes by ascending order value, ties broken by label.
    pub fn from_values(values: &[(String, f64)]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(values.len());
        for (label, v) in values {
            if !seen.insert(label.as_str()) {
                return Err(DyadError::DuplicateNode(label.clone()));
            }
            if !v.is_finite() {
                return Err(DyadError::NonFiniteOrder(label.clone()));
            }
        }
        let mut sorted: Vec<&(String, f64)> = values.iter().collect();
        sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(Self::from_sorted_labels(
            sorted.into_iter().map(|(l, _)| l.clone()).collect(),
        ))
    }

    /// Nodes labelled `"1"`, …, `"n"` in index order.
    pub fn identity(n: usize) -> Self {
        Self::from_sorted_labels((1..=n).map(|r| r.to_string()).collect())
    }

    fn from_sorted_labels(labels: Vec<String>) -> Self {
        let rank = labels
            .iter()
            .enumerate()
            .map(|(idx, l)| (l.clone(), idx + 1))
            .collect();
        Self { labels, rank }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rank(&self, label: &str) -> Option<usize> {
        self.rank.get(label).copied()
    }

    /// Label of the node with the given 1-based rank.
    pub fn label(&self, rank: usize) -> &str {
        &self.labels[rank - 1]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// An unordered node pair in canonical form `i < j` (1-based ranks).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dyad {
    pub i: usize,
    pub j: usize,
}

impl Dyad {
    /// Canonicalizes the pair; `None` for a self-loop.
    pub fn new(a: usize, b: usize) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self { i: a, j: b }),
            std::cmp::Ordering::Greater => Some(Self { i: b, j: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn contains(&self, node: usize) -> bool {
        self.i == node || self.j == node
    }
}

/// Minimum rank distance between the endpoints of two dyads.
pub fn endpoint_distance(d: Dyad, other: Dyad) -> usize {
    d.i.abs_diff(other.i)
        .min(d.i.abs_diff(other.j))
        .min(d.j.abs_diff(other.i))
        .min(d.j.abs_diff(other.j))
}

/// One raw observation before node labels are resolved to ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadRow {
    pub node_i: String,
    pub node_j: String,
    pub y: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DyadicDataset {
    n: usize,
    dyads: Vec<Dyad>,
    y: DVector<f64>,
    x: DMatrix<f64>,
    names: Vec<String>,
    order: NodeOrder,
}

impl DyadicDataset {
    /// Assembles a dataset from already-ranked parts, checking every invariant.
    pub fn from_parts(
        order: NodeOrder,
        dyads: Vec<Dyad>,
        y: DVector<f64>,
        x: DMatrix<f64>,
        names: Vec<String>,
    ) -> Result<Self> {
        let n = order.len();
        if y.len() != dyads.len() || x.nrows() != dyads.len() {
            return Err(DyadError::InvalidConfig(format!(
                "{} dyads but {} outcomes and {} regressor rows",
                dyads.len(),
                y.len(),
                x.nrows()
            )));
        }
        if names.len() != x.ncols() {
            return Err(DyadError::InvalidConfig(format!(
                "{} regressor names for {} columns",
                names.len(),
                x.ncols()
            )));
        }
        let mut seen = HashSet::with_capacity(dyads.len());
        for d in &dyads {
            if d.i == d.j {
                return Err(DyadError::SelfLoop(d.i.to_string()));
            }
            if d.i > d.j || d.j > n || d.i == 0 {
                return Err(DyadError::InvalidConfig(format!(
                    "dyad ({}, {}) is not canonical within 1..={n}",
                    d.i, d.j
                )));
            }
            if !seen.insert(*d) {
                return Err(DyadError::DuplicateDyad(
                    order.label(d.i).to_string(),
                    order.label(d.j).to_string(),
                ));
            }
        }
        Ok(Self {
            n,
            dyads,
            y,
            x,
            names,
            order,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of observed dyads `M`.
    pub fn len(&self) -> usize {
        self.dyads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dyads.is_empty()
    }

    /// Number of regressors `K`.
    pub fn k(&self) -> usize {
        self.x.ncols()
    }

    pub fn is_complete(&self) -> bool {
        self.dyads.len() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn dyads(&self) -> &[Dyad] {
        &self.dyads
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> &NodeOrder {
        &self.order
    }

    /// Copy of the dataset restricted to the given row indices, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let dyads = rows.iter().map(|&r| self.dyads[r]).collect();
        let y = DVector::from_iterator(rows.len(), rows.iter().map(|&r| self.y[r]));
        let x = self.x.select_rows(rows);
        Self {
            n: self.n,
            dyads,
            y,
            x,
            names: self.names.clone(),
            order: self.order.clone(),
        }
    }
}

/// Resolves labelled rows against an ordering into a ranked dataset.
///
/// Regressor columns are named `x1..xK`; use [`build_dataset_named`] to
/// carry header names through.
pub fn build_dataset(rows: &[DyadRow], ordering: &[(String, f64)]) -> Result<DyadicDataset> {
    let k = rows.first().map_or(0, |r| r.x.len());
    let names = (1..=k).map(|c| format!("x{c}")).collect();
    build_dataset_named(rows, ordering, names)
}

pub fn build_dataset_named(
    rows: &[DyadRow],
    ordering: &[(String, f64)],
    names: Vec<String>,
) -> Result<DyadicDataset> {
    let order = NodeOrder::from_values(ordering)?;
    let k = names.len();
    let mut dyads = Vec::with_capacity(rows.len());
    let mut seen = HashSet::with_capacity(rows.len());
    let mut x = DMatrix::zeros(rows.len(), k);
    let mut y = DVector::zeros(rows.len());
    for (m, row) in rows.iter().enumerate() {
        if row.x.len() != k {
            return Err(DyadError::RaggedRegressors {
                row: m + 1,
                expected: k,
                found: row.x.len(),
            });
        }
        let a = order
            .rank(&row.node_i)
            .ok_or_else(|| DyadError::UnknownLabel(row.node_i.clone()))?;
        let b = order
            .rank(&row.node_j)
            .ok_or_else(|| DyadError::UnknownLabel(row.node_j.clone()))?;
        let d = Dyad::new(a, b).ok_or_else(|| DyadError::SelfLoop(row.node_i.clone()))?;
        if !seen.insert(d) {
            return Err(DyadError::DuplicateDyad(
                row.node_i.clone(),
                row.node_j.clone(),
            ));
        }
        dyads.push(d);
        y[m] = row.y;
        for (c, v) in row.x.iter().enumerate() {
            x[(m, c)] = *v;
        }
    }
    DyadicDataset::from_parts(order, dyads, y, x, names)
}

/// Appends one indicator column per node except rank 1.
///
/// The dummy for node `r` equals 1 on every dyad with `r` as an endpoint.
pub fn expand_node_effects(ds: &DyadicDataset) -> Result<DyadicDataset> {
    let n = ds.n();
    if n < 2 {
        return Err(DyadError::TooFewNodes {
            needed: 2,
            found: n,
        });
    }
    let base = ds.k();
    let mut x = ds.x.clone().resize_horizontally(base + n - 1, 0.0);
    for (m, d) in ds.dyads.iter().enumerate() {
        for node in [d.i, d.j] {
            if node >= 2 {
                x[(m, base + node - 2)] = 1.0;
            }
        }
    }
    let mut names = ds.names.clone();
    names.extend((2..=n).map(|r| format!("fe:{}", ds.order.label(r))));
    DyadicDataset::from_parts(ds.order.clone(), ds.dyads.clone(), ds.y.clone(), x, names)
}

/// Dyad indices incident to each node, indexed by `rank - 1`.
pub(crate) fn incidence(dyads: &[Dyad], n: usize) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); n];
    for (m, d) in dyads.iter().enumerate() {
        inc[d.i - 1].push(m);
        inc[d.j - 1].push(m);
    }
    inc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
        pairs.iter().map(|(l, v)| (l.to_string(), *v)).collect()
    }

    fn row(a: &str, b: &str, y: f64, x: &[f64]) -> DyadRow {
        DyadRow {
            node_i: a.into(),
            node_j: b.into(),
            y,
            x: x.to_vec(),
        }
    }

    #[test]
    fn ranks_follow_ascending_order_value() {
        let o = NodeOrder::from_values(&ord(&[("A", 2.0), ("B", 1.0), ("C", 3.0)])).unwrap();
        assert_eq!(o.rank("B"), Some(1));
        assert_eq!(o.rank("A"), Some(2));
        assert_eq!(o.rank("C"), Some(3));
    }

    #[test]
    fn ties_break_on_label() {
        let o = NodeOrder::from_values(&ord(&[("z", 1.0), ("a", 1.0), ("m", 0.0)])).unwrap();
        assert_eq!(o.labels(), ["m", "a", "z"]);
    }

    #[test]
    fn self_loop_rejected() {
        let err = build_dataset(&[row("A", "A", 1.0, &[1.0])], &ord(&[("A", 0.0)])).unwrap_err();
        assert_eq!(err, DyadError::SelfLoop("A".into()));
    }

    #[test]
    fn unknown_label_rejected() {
        let err = build_dataset(
            &[row("A", "Q", 1.0, &[1.0])],
            &ord(&[("A", 0.0), ("B", 1.0)]),
        )
        .unwrap_err();
        assert_eq!(err, DyadError::UnknownLabel("Q".into()));
    }

    #[test]
    fn duplicate_unordered_pair_rejected() {
        let err = build_dataset(
            &[row("A", "B", 1.0, &[1.0]), row("B", "A", 2.0, &[1.0])],
            &ord(&[("A", 0.0), ("B", 1.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, DyadError::DuplicateDyad(..)));
    }

    #[test]
    fn ragged_regressors_rejected() {
        let err = build_dataset(
            &[row("A", "B", 1.0, &[1.0, 2.0]), row("A", "C", 2.0, &[1.0])],
            &ord(&[("A", 0.0), ("B", 1.0), ("C", 2.0)]),
        )
        .unwrap_err();
        assert_eq!(
            err,
            DyadError::RaggedRegressors {
                row: 2,
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn complete_three_node_array() {
        let ds = build_dataset(
            &[
                row("A", "B", 1.0, &[1.0]),
                row("C", "A", 2.0, &[1.0]),
                row("B", "C", 3.0, &[1.0]),
            ],
            &ord(&[("A", 2.0), ("B", 1.0), ("C", 3.0)]),
        )
        .unwrap();
        assert_eq!(ds.len(), 3);
        assert!(ds.is_complete());
        // A=2, B=1, C=3
        assert_eq!(
            ds.dyads(),
            &[
                Dyad { i: 1, j: 2 },
                Dyad { i: 2, j: 3 },
                Dyad { i: 1, j: 3 }
            ]
        );
    }

    #[test]
    fn endpoint_distance_examples() {
        let d = |i, j| Dyad::new(i, j).unwrap();
        assert_eq!(endpoint_distance(d(1, 2), d(2, 3)), 0);
        assert_eq!(endpoint_distance(d(1, 2), d(3, 4)), 1);
        assert_eq!(endpoint_distance(d(1, 10), d(4, 6)), 3);
    }

    #[test]
    fn endpoint_distance_exhaustive_properties() {
        for n in 2..=12usize {
            let all: Vec<Dyad> = (1..=n)
                .flat_map(|i| (i + 1..=n).map(move |j| Dyad { i, j }))
                .collect();
            for &a in &all {
                assert_eq!(endpoint_distance(a, a), 0);
                for &b in &all {
                    let h = endpoint_distance(a, b);
                    assert_eq!(h, endpoint_distance(b, a));
                    let shares = a.contains(b.i) || a.contains(b.j);
                    assert_eq!(h == 0, shares);
                }
            }
        }
    }

    #[test]
    fn node_effects_drop_first_rank() {
        let ds = build_dataset(
            &[row("1", "2", 0.0, &[1.0]), row("2", "3", 0.0, &[1.0])],
            &ord(&[("1", 1.0), ("2", 2.0), ("3", 3.0)]),
        )
        .unwrap();
        let fe = expand_node_effects(&ds).unwrap();
        assert_eq!(fe.k(), 3);
        assert_eq!(
            fe.x().row(0).iter().copied().collect::<Vec<_>>(),
            [1.0, 1.0, 0.0]
        );
        assert_eq!(
            fe.x().row(1).iter().copied().collect::<Vec<_>>(),
            [1.0, 1.0, 1.0]
        );
        assert_eq!(fe.names()[1], "fe:2");

        let two = build_dataset(
            &[row("a", "b", 0.0, &[1.0])],
            &ord(&[("a", 0.0), ("b", 1.0)]),
        )
        .unwrap();
        assert_eq!(expand_node_effects(&two).unwrap().k(), 2);
    }

    #[test]
    fn node_effects_column_count_for_large_array() {
        let n = 156;
        let order = NodeOrder::identity(n);
        let dyads: Vec<Dyad> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| Dyad { i, j }))
            .collect();
        let m = dyads.len();
        let names = (1..=6).map(|c| format!("x{c}")).collect();
        let ds = DyadicDataset::from_parts(
            order,
            dyads,
            DVector::zeros(m),
            DMatrix::from_element(m, 6, 1.0),
            names,
        )
        .unwrap();
        assert_eq!(expand_node_effects(&ds).unwrap().k(), 161);
    }

    #[test]
    fn labels_round_trip_through_ranks() {
        let values = ord(&[("x", 0.3), ("y", -1.0), ("z", 0.3), ("w", 9.0)]);
        let o = NodeOrder::from_values(&values).unwrap();
        for (label, _) in &values {
            let r = o.rank(label).unwrap();
            assert_eq!(o.label(r), label);
        }
        let mut ranks: Vec<usize> = values.iter().map(|(l, _)| o.rank(l).unwrap()).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, [1, 2, 3, 4]);
    }
}
