//! Rows of the intersection table: a basis class times the incidence
//! divisor, expanded back into the basis. Also enumerates the basis at a
//! given number of points and assembles the whole table, in parallel when
//! the `parallel` feature is on.

use crate::classes::{EngineError, MsTriple};
use crate::partition::{partitions, Partition};
use crate::rewrite::{rewrite_to_ms, split_h_product, RewriteOptions, RewriteStats};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One row of the intersection table: the input class, its product with the
/// incidence divisor as basis classes with coefficients (canonically
/// ordered, zero coefficients dropped), and the driver counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieriRow {
    pub input: MsTriple,
    pub terms: Vec<(MsTriple, i64)>,
    pub stats: RewriteStats,
}

/// Multiplies one basis class by the incidence divisor. Every output class
/// is guaranteed to keep the point count and sit in codimension one higher;
/// a violation surfaces as a conservation error, never as a wrong row.
pub fn intersect_with_h(alpha: &MsTriple, opts: &RewriteOptions) -> Result<PieriRow, EngineError> {
    let split = split_h_product(alpha)?;
    let expansion = rewrite_to_ms(split, opts)?;
    for (t, _) in &expansion.terms {
        if t.n() != alpha.n() {
            return Err(EngineError::Conservation {
                rule: "intersect_with_h",
                quantity: "length",
                expected: alpha.n(),
                produced: t.n(),
            });
        }
        if t.codim() != alpha.codim() + 1 {
            return Err(EngineError::Conservation {
                rule: "intersect_with_h",
                quantity: "codimension",
                expected: alpha.codim() + 1,
                produced: t.codim(),
            });
        }
    }
    Ok(PieriRow {
        input: alpha.clone(),
        terms: expansion.terms,
        stats: expansion.stats,
    })
}

/// All basis classes with `n` points: triples of positive partitions whose
/// sums add up to `n`, canonically ordered.
pub fn enumerate_basis(n: u32) -> Vec<MsTriple> {
    let mut out = Vec::new();
    for a_sum in 0..=n {
        for b_sum in 0..=(n - a_sum) {
            let c_sum = n - a_sum - b_sum;
            for a in partitions(a_sum) {
                for b in partitions(b_sum) {
                    for c in partitions(c_sum) {
                        out.push(MsTriple::new(a.clone(), b.clone(), c).expect("positive parts"));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The full intersection table at `n` points, one row per basis class, in
/// basis order. Rows are independent and computed in parallel when the
/// `parallel` feature is on; the output is identical either way.
pub fn pieri_matrix(n: u32, opts: &RewriteOptions) -> Result<Vec<PieriRow>, EngineError> {
    #[cfg(feature = "parallel")]
    {
        enumerate_basis(n)
            .par_iter()
            .map(|alpha| intersect_with_h(alpha, opts))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        pieri_matrix_seq(n, opts)
    }
}

/// Sequential twin of [`pieri_matrix`], always available for comparison.
pub fn pieri_matrix_seq(n: u32, opts: &RewriteOptions) -> Result<Vec<PieriRow>, EngineError> {
    enumerate_basis(n)
        .iter()
        .map(|alpha| intersect_with_h(alpha, opts))
        .collect()
}

#[derive(Serialize)]
struct RowTermRef<'a> {
    a: &'a Partition,
    b: &'a Partition,
    c: &'a Partition,
    coef: i64,
}

impl Serialize for PieriRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<RowTermRef<'_>> = self
            .terms
            .iter()
            .map(|(t, coef)| RowTermRef {
                a: t.a(),
                b: t.b(),
                c: t.c(),
                coef: *coef,
            })
            .collect();
        let mut row = serializer.serialize_struct("PieriRow", 3)?;
        row.serialize_field("input", &self.input)?;
        row.serialize_field("terms", &terms)?;
        row.serialize_field("meta", &self.stats)?;
        row.end()
    }
}

#[derive(Deserialize)]
struct RowTermRepr {
    a: Partition,
    b: Partition,
    c: Partition,
    coef: i64,
}

#[derive(Deserialize)]
struct PieriRowRepr {
    input: MsTriple,
    terms: Vec<RowTermRepr>,
    #[serde(default)]
    meta: RewriteStats,
}

impl<'de> Deserialize<'de> for PieriRow {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PieriRowRepr::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let triple = MsTriple::new(t.a, t.b, t.c).map_err(D::Error::custom)?;
            terms.push((triple, t.coef));
        }
        Ok(PieriRow {
            input: repr.input,
            terms,
            stats: repr.meta,
        })
    }
}
