//! The weighted subtraction graph that tracks how punctual classes build up
//! during a pencil cascade, and the signed path-sum checks over it.
//!
//! The root carries the pencil's partition. Root edges go to the anchored
//! subtractions, weighted by the anchored assembly count; every deeper edge
//! goes from a partition to one of its plain subtractions, weighted by the
//! assembly count. A path with `n` edges contributes `(-1)^(n+1)` times the
//! product of its edge weights, so the path sum at a node is exactly the net
//! coefficient the rewriting cascade accumulates for that node's class.

use crate::classes::EngineError;
use crate::partition::{
    anchored_assembly_count, count_assemblies, weight_bounded_partitions, Partition,
};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// A rooted, anchored subtraction graph. Nodes are partitions; edges strictly
/// decrease the sum, so the graph is acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtractionDag {
    root: Partition,
    anchor: usize,
    edges: BTreeMap<Partition, BTreeMap<Partition, u64>>,
}

impl SubtractionDag {
    pub fn root(&self) -> &Partition {
        &self.root
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn contains(&self, node: &Partition) -> bool {
        self.edges.contains_key(node)
    }

    pub fn node_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Partition> {
        self.edges.keys()
    }

    pub fn out_edges(&self, from: &Partition) -> impl Iterator<Item = (&Partition, u64)> {
        self.edges
            .get(from)
            .into_iter()
            .flat_map(|adj| adj.iter().map(|(to, &w)| (to, w)))
    }

    /// All edges as (from, to, weight), in canonical order.
    pub fn all_edges(&self) -> Vec<(&Partition, &Partition, u64)> {
        self.edges
            .iter()
            .flat_map(|(from, adj)| adj.iter().map(move |(to, &w)| (from, to, w)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|adj| adj.len()).sum()
    }
}

/// Builds the subtraction graph for `m` anchored at `anchor`, closed under
/// reachability from the root.
pub fn build_dag(m: &Partition, anchor: usize) -> Result<SubtractionDag, EngineError> {
    m.validate_anchor(anchor)?;
    let mut edges: BTreeMap<Partition, BTreeMap<Partition, u64>> = BTreeMap::new();

    let mut root_adj = BTreeMap::new();
    for j in 1..=m.len() {
        for lam in m.anchored_subtractions(j, anchor)? {
            let w = anchored_assembly_count(m, anchor, &lam)?;
            root_adj.insert(lam, w);
        }
    }
    let mut pending: Vec<Partition> = root_adj.keys().cloned().collect();
    edges.insert(m.clone(), root_adj);

    while let Some(node) = pending.pop() {
        if edges.contains_key(&node) {
            continue;
        }
        let mut adj = BTreeMap::new();
        for j in 1..=node.len() {
            for lam in node.subtractions(j) {
                let w = count_assemblies(&node, &lam)?;
                if !edges.contains_key(&lam) {
                    pending.push(lam.clone());
                }
                adj.insert(lam, w);
            }
        }
        edges.insert(node, adj);
    }

    Ok(SubtractionDag {
        root: m.clone(),
        anchor,
        edges,
    })
}

/// Signed path sums from the root to every node at once: the sum over all
/// paths of `(-1)^(edges+1)` times the product of edge weights. The root
/// itself is reached by no path, so its sum is 0.
pub fn path_weight_sums(dag: &SubtractionDag) -> Result<BTreeMap<Partition, i64>, EngineError> {
    // alternating accumulator: h(root) = 1, h(v) = sum over u -> v of
    // -w(u, v) * h(u); the path sum at v != root is -h(v)
    let mut order: Vec<&Partition> = dag.nodes().collect();
    order.sort_by_key(|p| std::cmp::Reverse(p.sum()));
    let mut acc: BTreeMap<&Partition, i64> = BTreeMap::new();
    acc.insert(dag.root(), 1);
    for node in &order {
        let h = acc.get(node).copied().unwrap_or(0);
        if h == 0 {
            continue;
        }
        for (to, w) in dag.out_edges(node) {
            let w = i64::try_from(w).map_err(|_| EngineError::Overflow)?;
            let contribution = h.checked_mul(-w).ok_or(EngineError::Overflow)?;
            let slot = acc.entry(to).or_insert(0);
            *slot = slot
                .checked_add(contribution)
                .ok_or(EngineError::Overflow)?;
        }
    }
    let mut sums = BTreeMap::new();
    for node in dag.nodes() {
        let value = if node == dag.root() {
            0
        } else {
            -acc.get(node).copied().unwrap_or(0)
        };
        sums.insert(node.clone(), value);
    }
    Ok(sums)
}

/// Signed path sum from the root to one node.
pub fn path_weight_sum(dag: &SubtractionDag, lam: &Partition) -> Result<i64, EngineError> {
    if !dag.contains(lam) {
        return Err(EngineError::NotANode);
    }
    Ok(path_weight_sums(dag)?[lam])
}

/// A node of the graph together with its signed path sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeSum {
    pub lam: Partition,
    pub sum: i64,
}

/// Outcome of the vanishing check for one anchored partition: path sums at
/// the allowed nodes (those reached by lowering the anchored entry alone)
/// and at every other node, where the conjecture predicts 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub m: Partition,
    pub i: usize,
    pub allowed: Vec<NodeSum>,
    pub excluded: Vec<NodeSum>,
    pub pass: bool,
}

/// Checks the vanishing prediction for one case. Failures are reported in
/// the result, never asserted: a counterexample is an answer, not a crash.
pub fn check_conjecture(m: &Partition, anchor: usize) -> Result<ConjectureReport, EngineError> {
    let dag = build_dag(m, anchor)?;
    let sums = path_weight_sums(&dag)?;

    let mut allowed_nodes = Vec::new();
    for x in 0..=m.entry(anchor) {
        let mut parts = m.parts().to_vec();
        parts[anchor - 1] -= x;
        parts.sort_unstable_by(|p, q| q.cmp(p));
        allowed_nodes.push(Partition::new(parts).expect("sorted"));
    }

    let mut allowed = Vec::new();
    let mut excluded = Vec::new();
    for (node, &sum) in &sums {
        if node == dag.root() {
            continue;
        }
        let entry = NodeSum {
            lam: node.clone(),
            sum,
        };
        if allowed_nodes.contains(node) {
            allowed.push(entry);
        } else {
            excluded.push(entry);
        }
    }
    let pass = excluded.iter().all(|e| e.sum == 0);
    Ok(ConjectureReport {
        m: m.clone(),
        i: anchor,
        allowed,
        excluded,
        pass,
    })
}

/// The sweep domain: every partition with sum and length at most
/// `max_weight` (zero paddings included), paired with each of its valid
/// anchors.
pub fn sweep_cases(max_weight: u32) -> Vec<(Partition, usize)> {
    let mut cases = Vec::new();
    for m in weight_bounded_partitions(max_weight, max_weight as usize) {
        for anchor in m.block_ends() {
            cases.push((m.clone(), anchor));
        }
    }
    cases
}

/// Joint outcome of the vanishing check over the whole sweep domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureSweep {
    pub max_weight: u32,
    pub pass: bool,
    pub counterexamples: Vec<ConjectureReport>,
    pub cases: Vec<ConjectureReport>,
}

fn collect_sweep(max_weight: u32, cases: Vec<ConjectureReport>) -> ConjectureSweep {
    let counterexamples: Vec<ConjectureReport> =
        cases.iter().filter(|c| !c.pass).cloned().collect();
    ConjectureSweep {
        max_weight,
        pass: counterexamples.is_empty(),
        counterexamples,
        cases,
    }
}

/// Runs the vanishing check on every case of the sweep domain, in parallel
/// when the `parallel` feature is on. Case order is canonical either way.
pub fn sweep_conjecture(max_weight: u32) -> Result<ConjectureSweep, EngineError> {
    #[cfg(feature = "parallel")]
    {
        let cases = sweep_cases(max_weight)
            .par_iter()
            .map(|(m, anchor)| check_conjecture(m, *anchor))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(collect_sweep(max_weight, cases))
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_conjecture_seq(max_weight)
    }
}

/// Sequential twin of [`sweep_conjecture`], always available.
pub fn sweep_conjecture_seq(max_weight: u32) -> Result<ConjectureSweep, EngineError> {
    let cases = sweep_cases(max_weight)
        .iter()
        .map(|(m, anchor)| check_conjecture(m, *anchor))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(collect_sweep(max_weight, cases))
}
