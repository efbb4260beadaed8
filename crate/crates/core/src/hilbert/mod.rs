//! Minimal Hilbert basis of `{R >= 0 integer : A R = 0}` for a `+-1`
//! constraint matrix `A`, with optional coordinates forced to zero.
//!
//! Two solvers sit behind [`hilbert_basis`]:
//!
//! * [`Algorithm::Completion`]: the Contejean–Devie completion over all
//!   constraints at once. Simple and easy to audit; it is the reference.
//! * [`Algorithm::ProjectAndLift`]: starts from a simplicial cone in the
//!   solution lattice and lifts the sign constraints one coordinate at a
//!   time. Much faster on the larger systems.
//!
//! Both return the same canonical set; the test suite checks this. Before
//! either runs, coordinates that vanish on every solution are found by an
//! exact linear program and deleted.

mod completion;
mod decompose;
mod implicit;
mod lattice;
mod lift;
mod oracle;
mod support;

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::fraction::{factors_for_len, ReplicateVector};
use crate::model::build_model_matrix;

pub use decompose::{decompose, Decomposition};
pub use oracle::{brute_force_minimal_solutions, DEFAULT_ORACLE_NODE_CAP};

/// The cone `{R >= 0 : A R = 0, R_i = 0 for i in forced_zero}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConeSystem {
    rows: Vec<Vec<i8>>,
    width: usize,
    forced_zero: BTreeSet<usize>,
}

impl ConeSystem {
    /// `rows` are the constraint rows, each of length `N = 2^n`, with
    /// entries in `{-1, +1}`.
    pub fn new(rows: Vec<Vec<i8>>, width: usize) -> Result<Self> {
        factors_for_len(width)?;
        for row in &rows {
            if row.len() != width {
                return Err(Error::Dimension {
                    expected: width,
                    found: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|&&e| e != 1 && e != -1) {
                return Err(Error::Parameter(format!("constraint entry {bad}")));
            }
        }
        Ok(Self {
            rows,
            width,
            forced_zero: BTreeSet::new(),
        })
    }

    /// The system whose solutions are the orthogonal arrays of strength `m`
    /// on `n` two-level factors: `A` is the transposed model matrix.
    pub fn orthogonal_array(n: usize, m: usize) -> Result<Self> {
        let matrix = build_model_matrix(n, m)?;
        Self::new(matrix.transposed(), matrix.rows())
    }

    pub fn with_forced_zero<I: IntoIterator<Item = usize>>(mut self, indices: I) -> Result<Self> {
        for i in indices {
            if i >= self.width {
                return Err(Error::Parameter(format!(
                    "forced-zero index {i} outside 0..{}",
                    self.width
                )));
            }
            self.forced_zero.insert(i);
        }
        Ok(self)
    }

    /// Number of coordinates `N`.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of constraints `k`.
    pub fn constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn forced_zero(&self) -> &BTreeSet<usize> {
        &self.forced_zero
    }

    pub fn factors(&self) -> usize {
        self.width.trailing_zeros() as usize
    }

    /// `A v` with checked arithmetic.
    pub fn defect(&self, v: &[u32]) -> Result<Vec<i64>> {
        if v.len() != self.width {
            return Err(Error::Dimension {
                expected: self.width,
                found: v.len(),
            });
        }
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(v).try_fold(0i64, |acc, (&a, &x)| {
                    acc.checked_add(a as i64 * x as i64)
                        .ok_or(Error::Overflow("defect"))
                })
            })
            .collect()
    }

    /// The system restricted to the coordinates not forced to zero.
    pub(crate) fn project(&self) -> Projected {
        let free: Vec<usize> = (0..self.width)
            .filter(|i| !self.forced_zero.contains(i))
            .collect();
        let columns = free
            .iter()
            .map(|&j| self.rows.iter().map(|row| row[j] as i64).collect())
            .collect();
        Projected {
            free,
            columns,
            constraints: self.rows.len(),
        }
    }
}

/// Constraint columns on the free coordinates only.
pub(crate) struct Projected {
    pub free: Vec<usize>,
    pub columns: Vec<Vec<i64>>,
    pub constraints: usize,
}

impl Projected {
    /// Drops the coordinates that vanish on every solution, so that the
    /// remaining system has a strictly positive solution (or no columns).
    pub fn drop_implicit_zeros(&mut self) -> Result<usize> {
        let zeros = implicit::implicit_zeros(&self.columns, self.constraints)?;
        for &j in zeros.iter().rev() {
            self.free.remove(j);
            self.columns.remove(j);
        }
        Ok(zeros.len())
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn lift(&self, width: usize, v: &[u32]) -> Vec<u32> {
        let mut out = vec![0; width];
        for (&j, &x) in self.free.iter().zip(v) {
            out[j] = x;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Algorithm {
    /// Contejean–Devie completion, the reference solver.
    Completion,
    /// Project-and-lift over the solution lattice.
    #[default]
    ProjectAndLift,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Completion => "completion",
            Algorithm::ProjectAndLift => "project-and-lift",
        })
    }
}

/// Resource limits for a basis computation.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Total number of candidate vectors the solver may create.
    pub max_insertions: u64,
    /// Largest frontier (or working set) held at once.
    pub max_frontier: usize,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_insertions: 1_000_000_000,
            max_frontier: 50_000_000,
            time_limit: None,
        }
    }
}

pub(crate) struct Meter<'a> {
    budget: &'a Budget,
    started: Instant,
    insertions: u64,
}

impl<'a> Meter<'a> {
    pub fn new(budget: &'a Budget) -> Self {
        Self {
            budget,
            started: Instant::now(),
            insertions: 0,
        }
    }

    pub fn charge(&mut self, inserted: usize, frontier: usize, found: usize) -> Result<()> {
        self.insertions = self.insertions.saturating_add(inserted as u64);
        let fail = |reason: String| Err(Error::BudgetExhausted { reason, found });
        if self.insertions > self.budget.max_insertions {
            return fail(format!("{} insertions", self.insertions));
        }
        if frontier > self.budget.max_frontier {
            return fail(format!("frontier of {frontier}"));
        }
        if let Some(limit) = self.budget.time_limit {
            if self.started.elapsed() > limit {
                return fail(format!("time limit {limit:?}"));
            }
        }
        Ok(())
    }

    pub fn insertions(&self) -> u64 {
        self.insertions
    }
}

/// The minimal Hilbert basis of a [`ConeSystem`], sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    elements: Vec<ReplicateVector>,
    system: ConeSystem,
}

impl HilbertBasis {
    /// Wraps externally produced elements (e.g. read from a file), sorting
    /// and deduplicating them. Membership and minimality are not checked;
    /// see [`HilbertBasis::verify`].
    pub fn from_elements(system: ConeSystem, mut elements: Vec<ReplicateVector>) -> Result<Self> {
        for e in &elements {
            if e.len() != system.width() {
                return Err(Error::Dimension {
                    expected: system.width(),
                    found: e.len(),
                });
            }
        }
        elements.sort();
        elements.dedup();
        Ok(Self { elements, system })
    }

    pub fn elements(&self) -> &[ReplicateVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn system(&self) -> &ConeSystem {
        &self.system
    }

    /// Soundness and minimality violations, one message each.
    pub fn verify(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (i, e) in self.elements.iter().enumerate() {
            if e.is_zero() {
                problems.push(format!("element {i} is zero"));
            }
            match is_member(&self.system, e) {
                Ok(true) => {}
                _ => problems.push(format!("element {i} is not a solution")),
            }
        }
        let sup = support::SupportIndex::new(self.elements.iter().map(|e| e.counts()));
        for (i, e) in self.elements.iter().enumerate() {
            if let Some(j) = sup.find_dominated(e.counts(), Some(i)) {
                problems.push(format!("element {i} dominates element {j}"));
            }
        }
        if self.elements.windows(2).any(|w| w[0] >= w[1]) {
            problems.push("elements not strictly sorted".into());
        }
        problems
    }
}

/// `true` iff `v >= 0`, `A v = 0` and the forced-zero coordinates vanish.
pub fn is_member(system: &ConeSystem, v: &ReplicateVector) -> Result<bool> {
    let d = system.defect(v.counts())?;
    Ok(d.iter().all(|&x| x == 0) && system.forced_zero.iter().all(|&i| v.counts()[i] == 0))
}

/// Computes the minimal Hilbert basis with the given solver.
pub fn hilbert_basis(
    system: &ConeSystem,
    algorithm: Algorithm,
    budget: &Budget,
) -> Result<HilbertBasis> {
    let mut projected = system.project();
    let dropped = projected.drop_implicit_zeros()?;
    if dropped > 0 {
        log::info!("{dropped} coordinates vanish on every solution");
    }
    let mut meter = Meter::new(budget);
    let raw = match algorithm {
        Algorithm::Completion => completion::solve(&projected, &mut meter)?,
        Algorithm::ProjectAndLift => lift::solve(&projected, &mut meter)?,
    };
    let minimal = support::minimal_elements(raw);
    let elements = minimal
        .iter()
        .map(|v| ReplicateVector::new(projected.lift(system.width(), v)))
        .collect::<Result<Vec<_>>>()?;
    log::info!(
        "{algorithm}: {} elements, {} insertions, {:.3}s",
        elements.len(),
        meter.insertions(),
        meter.started.elapsed().as_secs_f64()
    );
    HilbertBasis::from_elements(system.clone(), elements)
}

#[cfg(test)]
mod tests;
