//! Intersection with the incidence divisor on the Hilbert scheme of points
//! in the projective plane, computed in the Mallavibarrena–Sols basis.
//!
//! The basis is indexed by triples of partitions `(a, b, c)` with
//! `|a| + |b| + |c| = n`; the incidence divisor `H` is the locus of schemes
//! meeting a fixed line. This crate rewrites the product `H · σ_(a,b,c)`
//! back into basis classes by a confluent rewriting cascade over a small
//! algebra of intermediate cycles:
//!
//! * [`partition`] — partitions, anchored subtractions, and the assembly
//!   counts that weight collapse steps;
//! * [`classes`] — atoms (line conditions), intermediate cores, and formal
//!   integer sums of products of both;
//! * [`rewrite`] — the rewrite rules and the driver that applies them to a
//!   fixed point, checking length and codimension conservation;
//! * [`pieri`] — whole intersection tables: every basis class at `n` points
//!   against the divisor, in parallel when the `parallel` feature (default)
//!   is on;
//! * [`dag`] — the weighted subtraction graph of a pencil collapse, signed
//!   path sums, and sweeps of the vanishing property they satisfy;
//! * [`verify`] — built-in self-checks against frozen golden values.
//!
//! ```
//! use hilb_pieri::{intersect_with_h, MsTriple, Partition, RewriteOptions};
//!
//! let class = MsTriple::new(
//!     Partition::empty(),
//!     Partition::empty(),
//!     Partition::new(vec![3, 2, 1]).unwrap(),
//! )
//! .unwrap();
//! let row = intersect_with_h(&class, &RewriteOptions::default()).unwrap();
//! assert_eq!(row.terms.len(), 7);
//! ```

pub mod classes;
pub mod dag;
pub mod partition;
pub mod pieri;
pub mod rewrite;
pub mod verify;

pub use classes::{Atom, Core, EngineError, FormalSum, MsTriple, Term};
pub use dag::{build_dag, check_conjecture, path_weight_sums, sweep_conjecture, SubtractionDag};
pub use partition::{count_assemblies, Partition, PartitionError};
pub use pieri::{enumerate_basis, intersect_with_h, pieri_matrix, PieriRow};
pub use rewrite::{rewrite_to_ms, MsExpansion, RewriteOptions, RewriteStats};
