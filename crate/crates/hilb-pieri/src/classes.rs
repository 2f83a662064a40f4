//! The symbol algebra the rewriting engine works in: condition atoms, the
//! intermediate core classes produced by the degenerations, terms (an atom
//! multiset plus at most one core), and integer formal sums of terms.
//!
//! Every symbol carries two conserved quantities: the number of scheme
//! points it accounts for (`length`) and its codimension. Each rewriting
//! step must preserve both, which is what makes the bookkeeping checkable.

use crate::partition::{Partition, PartitionError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("coefficient arithmetic overflowed 64 bits")]
    Overflow,
    #[error("rule {rule} broke {quantity} conservation: expected {expected}, produced {produced}")]
    Conservation {
        rule: &'static str,
        quantity: &'static str,
        expected: u64,
        produced: u64,
    },
    #[error("basis triple entries must be positive")]
    NonPositivePart,
    #[error("partition is not a node of the graph")]
    NotANode,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// A basis condition on the point configuration. The parameter counts the
/// scheme points the condition accounts for, so it is always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// A fixed line carrying a fixed point, with `k` scheme points on the
    /// line in total. Length `k`, codimension `k + 1`.
    PointedLine(u32),
    /// A fixed line meeting the subscheme in `k` points. Length `k`,
    /// codimension `k`.
    FixedLine(u32),
    /// A line through the common moving-line center carrying `k` points.
    /// Length `k`, codimension `k - 1`; `k = 1` is a free point.
    MovingLine(u32),
}

impl Atom {
    pub fn length(self) -> u64 {
        match self {
            Atom::PointedLine(k) | Atom::FixedLine(k) | Atom::MovingLine(k) => {
                debug_assert!(k >= 1);
                u64::from(k)
            }
        }
    }

    pub fn codim(self) -> u64 {
        match self {
            Atom::PointedLine(k) => u64::from(k) + 1,
            Atom::FixedLine(k) => u64::from(k),
            Atom::MovingLine(k) => u64::from(k) - 1,
        }
    }
}

/// An intermediate class produced while rewriting a product back into the
/// basis. At most one core appears per term; the rewriting rules expand
/// cores until none remain.
///
/// The variant and field order fix the canonical term order, which in turn
/// fixes the default expansion schedule: pencils first, then punctual pieces
/// at the center in order of increasing punctual length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Core {
    /// A pencil of `len(m)` lines through a common center off the fixed
    /// line; line `j` carries `m_j + 1` points and line `anchor` must meet
    /// the fixed line at one of its points.
    CenterOffLine { m: Partition, anchor: usize },
    /// The same pencil after the center has degenerated onto the fixed line.
    CenterOnLine { m: Partition, anchor: usize },
    /// A length-`q` punctual piece concentrated at the pencil center, plus
    /// `lam_j + 1` points on the `j`-th pencil line.
    PunctualAtCenter { q: u32, lam: Partition },
    /// The same shape with the punctual piece moved to a general fixed point
    /// away from the center, detaching it from the pencil.
    PunctualOffCenter { q: u32, lam: Partition },
    /// Two fixed points whose spanning line carries `extra` more points.
    TwoPointLine { extra: u32 },
    /// A length-`q` punctual subscheme at a general fixed point.
    Punctual { q: u32 },
}

impl Core {
    pub fn length(&self) -> u64 {
        match self {
            Core::CenterOffLine { m, .. } | Core::CenterOnLine { m, .. } => {
                m.sum() + m.len() as u64
            }
            Core::PunctualAtCenter { q, lam } | Core::PunctualOffCenter { q, lam } => {
                lam.sum() + lam.len() as u64 + u64::from(*q)
            }
            Core::TwoPointLine { extra } => u64::from(*extra) + 2,
            Core::Punctual { q } => u64::from(*q),
        }
    }

    pub fn codim(&self) -> u64 {
        match self {
            Core::CenterOffLine { m, .. } | Core::CenterOnLine { m, .. } => m.sum() + 1,
            Core::PunctualAtCenter { q, lam } | Core::PunctualOffCenter { q, lam } => {
                lam.sum() + u64::from(*q) + 1
            }
            Core::TwoPointLine { extra } => u64::from(*extra) + 4,
            Core::Punctual { q } => u64::from(*q) + 1,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::PointedLine(k) => write!(f, "A{k}"),
            Atom::FixedLine(k) => write!(f, "B{k}"),
            Atom::MovingLine(k) => write!(f, "C{k}"),
        }
    }
}

impl fmt::Display for Core {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Core::CenterOffLine { m, anchor } => write!(f, "CenterOff[{m};{anchor}]"),
            Core::CenterOnLine { m, anchor } => write!(f, "CenterOn[{m};{anchor}]"),
            Core::PunctualAtCenter { q, lam } => write!(f, "AtCenter[{lam};{q}]"),
            Core::PunctualOffCenter { q, lam } => write!(f, "OffCenter[{lam};{q}]"),
            Core::TwoPointLine { extra } => write!(f, "TwoPoint[{extra}]"),
            Core::Punctual { q } => write!(f, "Punct[{q}]"),
        }
    }
}

/// An atom multiset plus at most one core, kept in canonical (sorted) form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    atoms: Vec<Atom>,
    core: Option<Core>,
}

impl Term {
    pub fn new(mut atoms: Vec<Atom>, core: Option<Core>) -> Self {
        atoms.sort_unstable();
        Self { atoms, core }
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        Self::new(atoms, None)
    }

    pub fn from_core(core: Core) -> Self {
        Self::new(Vec::new(), Some(core))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn core(&self) -> Option<&Core> {
        self.core.as_ref()
    }

    pub fn is_atomic(&self) -> bool {
        self.core.is_none()
    }

    pub fn length(&self) -> u64 {
        self.atoms.iter().map(|a| a.length()).sum::<u64>()
            + self.core.as_ref().map_or(0, |c| c.length())
    }

    pub fn codim(&self) -> u64 {
        self.atoms.iter().map(|a| a.codim()).sum::<u64>()
            + self.core.as_ref().map_or(0, |c| c.codim())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() && self.core.is_none() {
            return write!(f, "1");
        }
        let mut first = true;
        for a in &self.atoms {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        if let Some(c) = &self.core {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An integer linear combination of terms. Insertion order never matters:
/// terms are keyed canonically and zero coefficients are dropped on the
/// spot, so two sums are equal iff they are the same combination.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<Term, i64>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_term(term: Term, coef: i64) -> Self {
        let mut sum = Self::new();
        // a single insertion into an empty sum cannot overflow
        sum.add(term, coef).expect("single term");
        sum
    }

    /// Adds `coef * term`, combining with any existing coefficient.
    pub fn add(&mut self, term: Term, coef: i64) -> Result<(), EngineError> {
        if coef == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(term);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let merged = o.get().checked_add(coef).ok_or(EngineError::Overflow)?;
                if merged == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = merged;
                }
            }
        }
        Ok(())
    }

    /// Adds `scale * other` term by term.
    pub fn add_scaled(&mut self, other: &FormalSum, scale: i64) -> Result<(), EngineError> {
        for (term, coef) in other.iter() {
            let scaled = coef.checked_mul(scale).ok_or(EngineError::Overflow)?;
            self.add(term.clone(), scaled)?;
        }
        Ok(())
    }

    pub fn coefficient(&self, term: &Term) -> i64 {
        self.terms.get(term).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, i64)> {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn remove(&mut self, term: &Term) -> i64 {
        self.terms.remove(term).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common (length, codim) of all terms, if the sum is homogeneous.
    pub fn homogeneous_shape(&self) -> Option<(u64, u64)> {
        let mut shape = None;
        for (term, _) in self.iter() {
            let s = (term.length(), term.codim());
            match shape {
                None => shape = Some(s),
                Some(prev) if prev == s => {}
                Some(_) => return None,
            }
        }
        shape
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (term, coef)) in self.iter().enumerate() {
            if i == 0 {
                if coef < 0 {
                    write!(f, "-")?;
                }
            } else if coef < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coef.unsigned_abs();
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct TripleRepr {
    a: Partition,
    b: Partition,
    c: Partition,
}

/// A basis class: three partitions with positive entries. The first lists
/// pointed-line conditions, the second fixed-line conditions, the third
/// moving-line conditions; their total is the number of points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "TripleRepr")]
pub struct MsTriple {
    a: Partition,
    b: Partition,
    c: Partition,
}

impl TryFrom<TripleRepr> for MsTriple {
    type Error = EngineError;

    fn try_from(repr: TripleRepr) -> Result<Self, Self::Error> {
        MsTriple::new(repr.a, repr.b, repr.c)
    }
}

impl MsTriple {
    pub fn new(a: Partition, b: Partition, c: Partition) -> Result<Self, EngineError> {
        for part in [&a, &b, &c] {
            if part.parts().contains(&0) {
                return Err(EngineError::NonPositivePart);
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> &Partition {
        &self.a
    }

    pub fn b(&self) -> &Partition {
        &self.b
    }

    pub fn c(&self) -> &Partition {
        &self.c
    }

    /// Total number of points the class constrains.
    pub fn n(&self) -> u64 {
        self.a.sum() + self.b.sum() + self.c.sum()
    }

    pub fn codim(&self) -> u64 {
        self.n() + self.a.len() as u64 - self.c.len() as u64
    }

    /// The incidence divisor: one fixed line meeting the subscheme in one
    /// point, everything else free.
    pub fn h_divisor(n: u64) -> Result<Self, EngineError> {
        if n == 0 {
            return Err(EngineError::NonPositivePart);
        }
        let b = Partition::new(vec![1]).expect("sorted");
        let c = Partition::new(vec![1; (n - 1) as usize]).expect("sorted");
        MsTriple::new(Partition::empty(), b, c)
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut atoms = Vec::with_capacity(self.a.len() + self.b.len() + self.c.len());
        atoms.extend(self.a.parts().iter().map(|&k| Atom::PointedLine(k)));
        atoms.extend(self.b.parts().iter().map(|&k| Atom::FixedLine(k)));
        atoms.extend(self.c.parts().iter().map(|&k| Atom::MovingLine(k)));
        atoms
    }

    /// Rebuilds the triple from an atom multiset. Inverse of [`Self::atoms`].
    pub fn from_atoms(atoms: &[Atom]) -> Self {
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        for atom in atoms {
            match *atom {
                Atom::PointedLine(k) => a.push(k),
                Atom::FixedLine(k) => b.push(k),
                Atom::MovingLine(k) => c.push(k),
            }
        }
        for part in [&mut a, &mut b, &mut c] {
            part.sort_unstable_by(|x, y| y.cmp(x));
        }
        Self {
            a: Partition::new(a).expect("sorted"),
            b: Partition::new(b).expect("sorted"),
            c: Partition::new(c).expect("sorted"),
        }
    }
}

fn write_triple_part(f: &mut fmt::Formatter<'_>, part: &Partition) -> fmt::Result {
    if part.is_empty() {
        write!(f, "0")
    } else {
        write!(f, "{part}")
    }
}

impl fmt::Display for MsTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        write_triple_part(f, &self.a)?;
        write!(f, ",")?;
        write_triple_part(f, &self.b)?;
        write!(f, ",")?;
        write_triple_part(f, &self.c)?;
        write!(f, ")")
    }
}
