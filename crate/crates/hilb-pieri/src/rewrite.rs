//! The rewriting rules: how the incidence divisor splits a product with a
//! basis class into core-carrying terms, how each core expands, and the
//! fixpoint driver that runs expansions until only condition atoms remain.
//!
//! Every rule replaces one core by a combination of terms of identical
//! length and codimension; the driver can check that conservation at each
//! step. Termination is structural: pencil cores expand to punctual cores,
//! punctual-at-center cores only raise the punctual length `q` (bounded by
//! the term length), and the remaining cores strictly shrink.

use crate::classes::{Atom, Core, EngineError, FormalSum, MsTriple, Term};
use crate::partition::{anchored_assembly_count, count_assemblies, Partition};
use serde::{Deserialize, Serialize};

/// Knobs for the rewriting driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteOptions {
    /// Re-check length/codim conservation after every rule application
    /// instead of only at the endpoints. On by default in debug builds.
    pub check_steps: bool,
}

impl Default for RewriteOptions {
    fn default() -> Self {
        Self {
            check_steps: cfg!(debug_assertions),
        }
    }
}

/// Counters reported alongside each finished expansion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStats {
    /// Number of core expansions performed.
    pub rule_applications: u64,
    /// Peak number of simultaneous terms in the working sum.
    pub max_terms: usize,
}

/// A finished expansion: basis classes with coefficients, canonically
/// ordered, plus the driver counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsExpansion {
    pub terms: Vec<(MsTriple, i64)>,
    pub stats: RewriteStats,
}

fn to_coef(count: u64) -> Result<i64, EngineError> {
    i64::try_from(count).map_err(|_| EngineError::Overflow)
}

/// Splits the product of the incidence divisor with a basis class into its
/// components: one per pointed-line entry of size >= 2, one per fixed-line
/// entry, and one pencil component per distinct moving-line value.
pub fn split_h_product(alpha: &MsTriple) -> Result<FormalSum, EngineError> {
    let mut out = FormalSum::new();
    let atoms = alpha.atoms();

    // The extra incidence point lands on a pointed line: together with the
    // fixed point it spans the line, leaving k - 2 free points on it.
    for (idx, atom) in atoms.iter().enumerate() {
        if let Atom::PointedLine(k) = *atom {
            if k < 2 {
                continue;
            }
            let rest: Vec<Atom> = atoms
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != idx)
                .map(|(_, &a)| a)
                .collect();
            out.add(
                Term::new(rest, Some(Core::TwoPointLine { extra: k - 2 })),
                1,
            )?;
        }
    }

    // The extra incidence point lands on a fixed line, pinning it there.
    for (idx, atom) in atoms.iter().enumerate() {
        if let Atom::FixedLine(k) = *atom {
            let mut rest: Vec<Atom> = atoms
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != idx)
                .map(|(_, &a)| a)
                .collect();
            rest.push(Atom::PointedLine(k));
            out.add(Term::from_atoms(rest), 1)?;
        }
    }

    // The incidence line is absorbed into the moving-line pencil: all
    // moving-line conditions fuse into one pencil core whose anchored line
    // (one per distinct value) meets the fixed line at one of its points.
    if !alpha.c().is_empty() {
        let m = Partition::new(alpha.c().parts().iter().map(|&v| v - 1).collect()).expect("sorted");
        let context: Vec<Atom> = atoms
            .iter()
            .filter(|a| !matches!(a, Atom::MovingLine(_)))
            .copied()
            .collect();
        let mut seen = None;
        for &v in alpha.c().parts() {
            if seen == Some(v) {
                continue;
            }
            seen = Some(v);
            let anchor = m.anchor_index(v - 1)?;
            out.add(
                Term::new(
                    context.clone(),
                    Some(Core::CenterOffLine {
                        m: m.clone(),
                        anchor,
                    }),
                ),
                1,
            )?;
        }
    }

    // cheap structural guarantee: each component keeps the point count and
    // raises codimension by exactly one
    for (term, _) in out.iter() {
        check_shape("split_h_product", term, alpha.n(), alpha.codim() + 1)?;
    }
    Ok(out)
}

fn check_shape(
    rule: &'static str,
    term: &Term,
    length: u64,
    codim: u64,
) -> Result<(), EngineError> {
    if term.length() != length {
        return Err(EngineError::Conservation {
            rule,
            quantity: "length",
            expected: length,
            produced: term.length(),
        });
    }
    if term.codim() != codim {
        return Err(EngineError::Conservation {
            rule,
            quantity: "codimension",
            expected: codim,
            produced: term.codim(),
        });
    }
    Ok(())
}

/// Expands a pencil with center off the fixed line: the center degenerates
/// onto the line. Either the pencil survives with the center on the line
/// (multiplicity one more than the anchored entry), or points collapse into
/// a punctual piece at the center, one summand per anchored subtraction.
pub fn expand_center_off_line(m: &Partition, anchor: usize) -> Result<FormalSum, EngineError> {
    m.validate_anchor(anchor)?;
    let mut out = FormalSum::new();
    out.add(
        Term::from_core(Core::CenterOnLine {
            m: m.clone(),
            anchor,
        }),
        i64::from(m.entry(anchor)) + 1,
    )?;
    for j in 1..=m.len() {
        for lam in m.anchored_subtractions(j, anchor)? {
            let w = to_coef(anchored_assembly_count(m, anchor, &lam)?)?;
            out.add(
                Term::from_core(Core::PunctualAtCenter { q: j as u32, lam }),
                w,
            )?;
        }
    }
    Ok(out)
}

/// Reads off the atoms of a pencil whose center lies on the fixed line: the
/// anchored line becomes the fixed line itself (gaining the center as a
/// point), every other line turns into a moving-line condition.
pub fn center_on_line_atoms(m: &Partition, anchor: usize) -> Result<Term, EngineError> {
    m.validate_anchor(anchor)?;
    let mut atoms = Vec::with_capacity(m.len());
    atoms.push(Atom::FixedLine(m.entry(anchor) + 1));
    for i in 1..=m.len() {
        if i != anchor {
            atoms.push(Atom::MovingLine(m.entry(i) + 1));
        }
    }
    Ok(Term::from_atoms(atoms))
}

/// Expands a punctual piece at the pencil center, solved for the class with
/// the piece at a general point: that class enters positively, and every
/// further collapse of pencil points into the center is subtracted with its
/// assembly count.
pub fn expand_punctual_at_center(lam: &Partition, q: u32) -> Result<FormalSum, EngineError> {
    assert!(q >= 1, "punctual length must be positive");
    let mut out = FormalSum::new();
    out.add(
        Term::from_core(Core::PunctualOffCenter {
            q,
            lam: lam.clone(),
        }),
        1,
    )?;
    for j in 1..=lam.len() {
        for smaller in lam.subtractions(j) {
            let w = to_coef(count_assemblies(lam, &smaller)?)?;
            out.add(
                Term::from_core(Core::PunctualAtCenter {
                    q: q + j as u32,
                    lam: smaller,
                }),
                w.checked_neg().ok_or(EngineError::Overflow)?,
            )?;
        }
    }
    Ok(out)
}

/// A punctual piece at a general point detaches from the pencil: the pencil
/// lines become plain moving-line conditions and the piece stands alone.
pub fn punctual_off_center_term(lam: &Partition, q: u32) -> Term {
    let mut atoms: Vec<Atom> = lam
        .parts()
        .iter()
        .map(|&v| Atom::MovingLine(v + 1))
        .collect();
    atoms.sort_unstable();
    Term::new(atoms, Some(Core::Punctual { q }))
}

/// Expands a punctual piece at a general fixed point by splitting off the
/// points that stay on a fixed line through it: `i` points on the line with
/// alternating sign, or the whole piece aligning onto a pointed line.
pub fn expand_punctual(q: u32) -> Result<FormalSum, EngineError> {
    assert!(q >= 1, "punctual length must be positive");
    let mut out = FormalSum::new();
    for i in 1..q {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        out.add(
            Term::new(vec![Atom::FixedLine(i)], Some(Core::Punctual { q: q - i })),
            sign,
        )?;
    }
    let sign = if (q - 1).is_multiple_of(2) { 1 } else { -1 };
    out.add(Term::from_atoms(vec![Atom::PointedLine(q)]), sign)?;
    Ok(out)
}

/// Expands the two-fixed-points class as a telescope of pointed-line and
/// punctual classes: one fixed point absorbs `i + 1` points as a punctual
/// piece while the other keeps a pointed line with `extra + 1 - i` points.
pub fn expand_two_point_line(extra: u32) -> Result<FormalSum, EngineError> {
    let mut out = FormalSum::new();
    for i in 0..=extra {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out.add(
            Term::new(
                vec![Atom::PointedLine(extra + 1 - i)],
                Some(Core::Punctual { q: i + 1 }),
            ),
            sign,
        )?;
    }
    Ok(out)
}

fn expand_core(core: &Core) -> Result<(FormalSum, &'static str), EngineError> {
    match core {
        Core::CenterOffLine { m, anchor } => Ok((
            expand_center_off_line(m, *anchor)?,
            "expand_center_off_line",
        )),
        Core::CenterOnLine { m, anchor } => Ok((
            FormalSum::from_term(center_on_line_atoms(m, *anchor)?, 1),
            "center_on_line_atoms",
        )),
        Core::PunctualAtCenter { q, lam } => Ok((
            expand_punctual_at_center(lam, *q)?,
            "expand_punctual_at_center",
        )),
        Core::PunctualOffCenter { q, lam } => Ok((
            FormalSum::from_term(punctual_off_center_term(lam, *q), 1),
            "punctual_off_center_term",
        )),
        Core::TwoPointLine { extra } => {
            Ok((expand_two_point_line(*extra)?, "expand_two_point_line"))
        }
        Core::Punctual { q } => Ok((expand_punctual(*q)?, "expand_punctual")),
    }
}

/// Runs core expansions on `working` until every remaining core satisfies
/// `is_terminal`. `pick` chooses which eligible term to expand next (the
/// slice is in canonical order and never empty); `observe` sees the working
/// sum after every application.
fn drive(
    mut working: FormalSum,
    opts: &RewriteOptions,
    is_terminal: impl Fn(&Core) -> bool,
    mut pick: impl FnMut(&[Term]) -> usize,
    mut observe: impl FnMut(&FormalSum),
) -> Result<(FormalSum, RewriteStats), EngineError> {
    let mut stats = RewriteStats {
        rule_applications: 0,
        max_terms: working.len(),
    };
    loop {
        let eligible: Vec<Term> = working
            .iter()
            .filter(|(t, _)| t.core().is_some_and(|c| !is_terminal(c)))
            .map(|(t, _)| t.clone())
            .collect();
        if eligible.is_empty() {
            break;
        }
        let idx = pick(&eligible);
        let term = &eligible[idx];
        let coef = working.remove(term);
        let core = term.core().expect("eligible terms carry a core");
        let (replacement, rule) = expand_core(core)?;
        for (rep, rep_coef) in replacement.iter() {
            if opts.check_steps {
                check_shape(rule, rep, core.length(), core.codim())?;
            }
            let mut atoms = term.atoms().to_vec();
            atoms.extend_from_slice(rep.atoms());
            let merged = Term::new(atoms, rep.core().cloned());
            let scaled = coef.checked_mul(rep_coef).ok_or(EngineError::Overflow)?;
            working.add(merged, scaled)?;
        }
        stats.rule_applications += 1;
        stats.max_terms = stats.max_terms.max(working.len());
        observe(&working);
    }
    Ok((working, stats))
}

fn finish_expansion(
    done: FormalSum,
    stats: RewriteStats,
    endpoint: Option<(u64, u64)>,
) -> Result<MsExpansion, EngineError> {
    let mut terms = Vec::with_capacity(done.len());
    for (term, coef) in done.iter() {
        debug_assert!(term.is_atomic());
        if let Some((length, codim)) = endpoint {
            check_shape("rewrite_to_ms", term, length, codim)?;
        }
        terms.push((MsTriple::from_atoms(term.atoms()), coef));
    }
    // distinct atom multisets give distinct triples, so no re-merging is
    // needed; only the order changes
    terms.sort();
    Ok(MsExpansion { terms, stats })
}

/// Expands every core and converts the remaining atom terms into basis
/// classes. If the input is homogeneous in (length, codim), every output
/// term is checked against that shape regardless of `check_steps`.
pub fn rewrite_to_ms(sum: FormalSum, opts: &RewriteOptions) -> Result<MsExpansion, EngineError> {
    rewrite_to_ms_scheduled(sum, opts, |_| 0)
}

/// [`rewrite_to_ms`] with an explicit expansion schedule. The result never
/// depends on the schedule; exposing it lets tests prove exactly that.
pub fn rewrite_to_ms_scheduled(
    sum: FormalSum,
    opts: &RewriteOptions,
    pick: impl FnMut(&[Term]) -> usize,
) -> Result<MsExpansion, EngineError> {
    let endpoint = sum.homogeneous_shape();
    let (done, stats) = drive(sum, opts, |_| false, pick, |_| ())?;
    finish_expansion(done, stats, endpoint)
}

/// [`rewrite_to_ms`] with a callback that sees the working sum after every
/// rule application, so callers can check invariants of every intermediate
/// state rather than only the endpoints.
pub fn rewrite_to_ms_observed(
    sum: FormalSum,
    opts: &RewriteOptions,
    observe: impl FnMut(&FormalSum),
) -> Result<MsExpansion, EngineError> {
    let endpoint = sum.homogeneous_shape();
    let (done, stats) = drive(sum, opts, |_| false, |_| 0, observe)?;
    finish_expansion(done, stats, endpoint)
}

fn punctual_ledger_terminal(core: &Core) -> bool {
    matches!(
        core,
        Core::CenterOnLine { .. } | Core::PunctualOffCenter { .. }
    )
}

/// Cascades a pencil core through the two degenerations only, stopping at
/// center-on-line and punctual-at-general-point classes. This is the ledger
/// the subtraction-graph checks read their net coefficients from.
pub fn cascade_center_off_line(
    m: &Partition,
    anchor: usize,
    opts: &RewriteOptions,
) -> Result<FormalSum, EngineError> {
    let start = FormalSum::from_term(
        Term::from_core(Core::CenterOffLine {
            m: m.clone(),
            anchor,
        }),
        1,
    );
    let (done, _) = drive(start, opts, punctual_ledger_terminal, |_| 0, |_| ())?;
    Ok(done)
}

/// Like [`cascade_center_off_line`] but returns the working sum after every
/// rule application, letting callers watch coefficients build and cancel.
pub fn cascade_center_off_line_trace(
    m: &Partition,
    anchor: usize,
    opts: &RewriteOptions,
) -> Result<Vec<FormalSum>, EngineError> {
    let start = FormalSum::from_term(
        Term::from_core(Core::CenterOffLine {
            m: m.clone(),
            anchor,
        }),
        1,
    );
    let mut snapshots = Vec::new();
    let (_, _) = drive(
        start,
        opts,
        punctual_ledger_terminal,
        |_| 0,
        |sum| snapshots.push(sum.clone()),
    )?;
    Ok(snapshots)
}
