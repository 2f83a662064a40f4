//! Independent oracles the integration tests compare the library against.
//! Everything here is deliberately brute force: enumerate, don't derive.

#![allow(dead_code)]

use std::collections::BTreeMap;

use hilb_pieri::dag::SubtractionDag;
use hilb_pieri::partition::Partition;

/// Counts assemblies by direct enumeration: choose which positions of `lam`
/// get raised by one, and keep the choices whose raised multiset equals `m`.
/// The closed-form count in the library must agree with this everywhere.
pub fn count_assemblies_enum(m: &Partition, lam: &Partition) -> u64 {
    if m.len() != lam.len() || m.sum() < lam.sum() {
        return 0;
    }
    let raises = (m.sum() - lam.sum()) as usize;
    if raises > lam.len() {
        return 0;
    }
    let mut picked = Vec::with_capacity(raises);
    let mut matches = 0u64;
    enumerate_choices(lam, m, raises, 0, &mut picked, &mut matches);
    matches
}

fn enumerate_choices(
    lam: &Partition,
    m: &Partition,
    raises: usize,
    start: usize,
    picked: &mut Vec<usize>,
    matches: &mut u64,
) {
    if picked.len() == raises {
        let mut raised: Vec<u32> = lam.parts().to_vec();
        for &i in picked.iter() {
            raised[i] += 1;
        }
        raised.sort_unstable_by(|a, b| b.cmp(a));
        if raised == m.parts() {
            *matches += 1;
        }
        return;
    }
    for i in start..lam.len() {
        picked.push(i);
        enumerate_choices(lam, m, raises, i + 1, picked, matches);
        picked.pop();
    }
}

/// Coefficients of prod_{k >= 1} (1 - t^k)^(-3) through degree `max_n`,
/// computed by plain power-series multiplication. Coefficient `n` counts
/// partitions with parts in three colors, which is the size of the basis at
/// `n` points.
pub fn colored_partition_counts(max_n: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; max_n + 1];
    coeffs[0] = 1;
    for k in 1..=max_n {
        for _ in 0..3 {
            // multiply by 1/(1 - t^k): running sums with stride k
            for n in k..=max_n {
                coeffs[n] += coeffs[n - k];
            }
        }
    }
    coeffs
}

/// Signed path sums computed the slow way: enumerate every directed path
/// from the root, weight it by (-1)^(edges + 1) times the product of its
/// edge weights, and add up by endpoint. The root itself gets 0.
pub fn path_weight_sums_enum(dag: &SubtractionDag) -> BTreeMap<Partition, i64> {
    let mut sums: BTreeMap<Partition, i64> = dag.nodes().map(|n| (n.clone(), 0)).collect();
    walk(dag, dag.root(), 1, 0, &mut sums);
    sums
}

fn walk(
    dag: &SubtractionDag,
    at: &Partition,
    weight_product: i64,
    edges: usize,
    sums: &mut BTreeMap<Partition, i64>,
) {
    for (next, w) in dag.out_edges(at) {
        let product = weight_product * (w as i64);
        let signed = if edges.is_multiple_of(2) {
            product
        } else {
            -product
        };
        *sums.get_mut(next).expect("edge target is a node") += signed;
        walk(dag, next, product, edges + 1, sums);
    }
}
