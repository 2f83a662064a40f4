//! Property-based tests: structural invariants that must hold on randomly
//! generated inputs, with brute-force oracles where one exists.

mod common;

use proptest::prelude::*;

use hilb_pieri::classes::{Atom, Core, FormalSum, MsTriple, Term};
use hilb_pieri::dag::{build_dag, path_weight_sums, sweep_cases};
use hilb_pieri::partition::{anchored_assembly_count, count_assemblies, Partition};
use hilb_pieri::pieri::{enumerate_basis, intersect_with_h, PieriRow};
use hilb_pieri::rewrite::{
    expand_center_off_line, expand_punctual, expand_punctual_at_center, expand_two_point_line,
    rewrite_to_ms, rewrite_to_ms_scheduled, split_h_product, RewriteOptions,
};

fn arb_partition(max_value: u32, max_len: usize) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(0..=max_value, 0..=max_len).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).expect("sorted descending")
    })
}

/// A partition together with one of its valid anchors.
fn arb_anchored(max_value: u32, max_len: usize) -> impl Strategy<Value = (Partition, usize)> {
    (
        arb_partition(max_value, max_len),
        any::<prop::sample::Index>(),
    )
        .prop_filter_map("needs at least one entry", |(m, idx)| {
            let anchors = m.block_ends();
            if anchors.is_empty() {
                return None;
            }
            let anchor = anchors[idx.index(anchors.len())];
            Some((m, anchor))
        })
}

fn arb_atom() -> impl Strategy<Value = Atom> {
    (1u32..=4, 0usize..3).prop_map(|(k, kind)| match kind {
        0 => Atom::PointedLine(k),
        1 => Atom::FixedLine(k),
        _ => Atom::MovingLine(k),
    })
}

fn arb_term() -> impl Strategy<Value = Term> {
    (
        proptest::collection::vec(arb_atom(), 0..4),
        proptest::option::of((1u32..=4).prop_map(|q| Core::Punctual { q })),
    )
        .prop_map(|(atoms, core)| Term::new(atoms, core))
}

/// A basis class with 1 to `max_n` points, addressed by index.
fn arb_basis_class(max_n: u32) -> impl Strategy<Value = MsTriple> {
    (1..=max_n, any::<prop::sample::Index>()).prop_map(|(n, idx)| {
        let basis = enumerate_basis(n);
        basis[idx.index(basis.len())].clone()
    })
}

proptest! {
    /// The closed-form assembly count agrees with subset enumeration on
    /// arbitrary same-length pairs with compatible sums.
    #[test]
    fn assembly_closed_form_matches_enumeration(
        m in arb_partition(5, 6),
        lam_seed in arb_partition(5, 6),
    ) {
        let lam = Partition::new(
            lam_seed.parts().iter().take(m.len()).copied()
                .chain(std::iter::repeat(0))
                .take(m.len())
                .collect::<Vec<_>>(),
        ).unwrap();
        prop_assume!(lam.sum() <= m.sum());
        let closed = count_assemblies(&m, &lam).unwrap();
        prop_assert_eq!(closed, common::count_assemblies_enum(&m, &lam));
    }

    /// Subtracting 1 from j distinct positive entries preserves length,
    /// lowers the sum by exactly j, and lands exactly on the partitions the
    /// assembly count sees: the count is positive on the subtraction set and
    /// zero on every other partition at the same sum.
    #[test]
    fn subtraction_sets_are_the_support_of_assembly_counts(
        m in arb_partition(4, 5),
        j in 0usize..4,
    ) {
        let subs = m.subtractions(j);
        for lam in &subs {
            prop_assert_eq!(lam.len(), m.len());
            prop_assert_eq!(lam.sum() + j as u64, m.sum());
            prop_assert!(count_assemblies(&m, lam).unwrap() > 0);
        }
        // every same-length partition at the right sum that is NOT a
        // subtraction has assembly count zero
        if m.sum() >= j as u64 {
            for lam in all_below(&m) {
                if lam.sum() + (j as u64) == m.sum() && !subs.contains(&lam) {
                    prop_assert_eq!(count_assemblies(&m, &lam).unwrap(), 0);
                }
            }
        }
    }

    /// Anchored subtractions are subtractions that also lower the anchor;
    /// the anchored assembly count is positive exactly on them.
    #[test]
    fn anchored_subtractions_refine_plain_ones(
        (m, anchor) in arb_anchored(4, 5),
        j in 1usize..4,
    ) {
        let plain = m.subtractions(j);
        let anchored = m.anchored_subtractions(j, anchor).unwrap();
        for lam in &anchored {
            prop_assert!(plain.contains(lam));
            prop_assert!(anchored_assembly_count(&m, anchor, lam).unwrap() > 0);
        }
    }

    /// Sorting descending then revalidating is the identity on partitions.
    #[test]
    fn canonicalization_is_idempotent(m in arb_partition(6, 6)) {
        let again = Partition::new(m.parts().to_vec()).unwrap();
        prop_assert_eq!(&again, &m);
        let sorted = Partition::sort_desc(
            &m.parts().iter().map(|&v| v as i64).collect::<Vec<_>>(),
        ).unwrap();
        prop_assert_eq!(&sorted, &m);
    }

    /// A formal sum is a function of the multiset of insertions, not their
    /// order.
    #[test]
    fn formal_sums_ignore_insertion_order(
        entries in proptest::collection::vec((arb_term(), -4i64..=4), 0..8),
        shuffle in any::<prop::sample::Index>(),
    ) {
        let mut forward = FormalSum::new();
        for (t, c) in &entries {
            forward.add(t.clone(), *c).unwrap();
        }
        let mut rotated = FormalSum::new();
        let pivot = if entries.is_empty() { 0 } else { shuffle.index(entries.len()) };
        for (t, c) in entries[pivot..].iter().chain(entries[..pivot].iter()) {
            rotated.add(t.clone(), *c).unwrap();
        }
        prop_assert_eq!(
            forward.iter().collect::<Vec<_>>(),
            rotated.iter().collect::<Vec<_>>()
        );
    }

    /// Every expansion rule conserves length and codimension: the output of
    /// each rule is homogeneous with the shape of the class it replaces.
    #[test]
    fn each_rule_conserves_length_and_codimension(
        (m, anchor) in arb_anchored(4, 5),
        q in 1u32..5,
        extra in 0u32..5,
    ) {
        let pencil = Core::CenterOffLine { m: m.clone(), anchor };
        let out = expand_center_off_line(&m, anchor).unwrap();
        prop_assert_eq!(
            out.homogeneous_shape(),
            Some((pencil.length(), pencil.codim()))
        );

        let collapse = Core::PunctualAtCenter { q, lam: m.clone() };
        let out = expand_punctual_at_center(&m, q).unwrap();
        prop_assert_eq!(
            out.homogeneous_shape(),
            Some((collapse.length(), collapse.codim()))
        );

        let punctual = Core::Punctual { q };
        let out = expand_punctual(q).unwrap();
        prop_assert_eq!(
            out.homogeneous_shape(),
            Some((punctual.length(), punctual.codim()))
        );

        let two_point = Core::TwoPointLine { extra };
        let out = expand_two_point_line(extra).unwrap();
        prop_assert_eq!(
            out.homogeneous_shape(),
            Some((two_point.length(), two_point.codim()))
        );
    }

    /// The fixed point of the rewrite does not depend on the order in which
    /// eligible classes are expanded.
    #[test]
    fn rewrite_result_is_schedule_independent(
        alpha in arb_basis_class(5),
        schedule in proptest::collection::vec(any::<prop::sample::Index>(), 1..64),
    ) {
        let opts = RewriteOptions { check_steps: true };
        let reference = rewrite_to_ms(split_h_product(&alpha).unwrap(), &opts).unwrap();
        let mut step = 0usize;
        let scheduled = rewrite_to_ms_scheduled(
            split_h_product(&alpha).unwrap(),
            &opts,
            |eligible| {
                let pick = schedule[step % schedule.len()].index(eligible.len());
                step += 1;
                pick
            },
        ).unwrap();
        prop_assert_eq!(reference.terms, scheduled.terms);
    }

    /// Intersecting is linear: the expansion of a combined input equals the
    /// matching combination of the individual rows.
    #[test]
    fn intersection_is_linear(
        alpha in arb_basis_class(4),
        beta in arb_basis_class(4),
        x in -3i64..=3,
        y in -3i64..=3,
    ) {
        prop_assume!(alpha.n() == beta.n());
        let opts = RewriteOptions::default();

        let mut combined_input = FormalSum::new();
        combined_input.add_scaled(&split_h_product(&alpha).unwrap(), x).unwrap();
        combined_input.add_scaled(&split_h_product(&beta).unwrap(), y).unwrap();
        let combined = rewrite_to_ms(combined_input, &opts).unwrap();

        let mut expected: std::collections::BTreeMap<MsTriple, i64> = Default::default();
        for (t, c) in intersect_with_h(&alpha, &opts).unwrap().terms {
            *expected.entry(t).or_default() += x * c;
        }
        for (t, c) in intersect_with_h(&beta, &opts).unwrap().terms {
            *expected.entry(t).or_default() += y * c;
        }
        expected.retain(|_, c| *c != 0);

        prop_assert_eq!(combined.terms.into_iter().collect::<std::collections::BTreeMap<_, _>>(), expected);
    }

    /// A product row survives a JSON round trip unchanged.
    #[test]
    fn rows_round_trip_through_json(alpha in arb_basis_class(4)) {
        let row = intersect_with_h(&alpha, &RewriteOptions::default()).unwrap();
        let bytes = serde_json::to_vec(&row).unwrap();
        let back: PieriRow = serde_json::from_slice(&bytes).unwrap();
        prop_assert_eq!(back.input, row.input);
        prop_assert_eq!(back.terms, row.terms);
    }
}

/// All weakly decreasing sequences dominated entrywise by `m`.
fn all_below(m: &Partition) -> Vec<Partition> {
    fn rec(bounds: &[u32], prev: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        match bounds.split_first() {
            None => out.push(Partition::new(acc.clone()).unwrap()),
            Some((&head, rest)) => {
                for v in 0..=head.min(prev) {
                    acc.push(v);
                    rec(rest, v, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(m.parts(), u32::MAX, &mut Vec::new(), &mut out);
    out
}

/// Fully expanding a lone punctual class telescopes into signed leaves whose
/// absolute coefficients always total 2^(q-1).
#[test]
fn punctual_expansion_leaf_mass() {
    for q in 1..=10u32 {
        let done = rewrite_to_ms(
            FormalSum::from_term(Term::from_core(Core::Punctual { q }), 1),
            &RewriteOptions { check_steps: true },
        )
        .unwrap();
        let mass: u64 = done.terms.iter().map(|(_, c)| c.unsigned_abs()).sum();
        assert_eq!(mass, 1u64 << (q - 1), "leaf mass at q = {q}");
        for (t, _) in &done.terms {
            assert_eq!(t.n(), u64::from(q));
            assert_eq!(t.codim(), u64::from(q) + 1);
        }
    }
}

/// Basis sizes follow the three-colored partition numbers.
#[test]
fn basis_sizes_follow_colored_partition_counts() {
    let oracle = common::colored_partition_counts(8);
    for n in 0..=8u32 {
        assert_eq!(
            enumerate_basis(n).len() as u64,
            oracle[n as usize],
            "basis size at n = {n}"
        );
    }
}

/// The signed path-sum recurrence agrees with literally enumerating every
/// path in the graph, over the whole sweep domain of weight at most 5.
#[test]
fn path_sums_match_brute_force_enumeration() {
    for (m, anchor) in sweep_cases(5) {
        let dag = build_dag(&m, anchor).unwrap();
        let fast = path_weight_sums(&dag).unwrap();
        let slow = common::path_weight_sums_enum(&dag);
        for (node, sum) in &slow {
            if node == dag.root() {
                continue;
            }
            assert_eq!(
                fast.get(node),
                Some(sum),
                "path sums disagree at ({m}, {anchor}), node {node}"
            );
        }
    }
}
