//! Field-size limits for linear `X`-secure schemes whose security codes are
//! `[N, X]` MDS codes.

use std::fmt;

use crate::field::prime_power;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub workers: usize,
    pub collusion: usize,
    /// Largest `P` with `N >= P + 2X`, or `None` when `N < 2X + 1`.
    pub max_partitions: Option<usize>,
    /// Inequality `q >= N - 1` (or `N - 2`) implied by the MDS conjecture when `X >= 2`.
    pub conjectural_bound: Option<u64>,
    /// Smallest prime power compatible with the conjectural bound.
    pub conjectural_minimum_q: Option<u64>,
    /// True when `X = 1`, where the repetition code is MDS over every field.
    pub repetition_escape: bool,
    /// The GRS construction needs `N` distinct evaluation points.
    pub construction_bound: u64,
    pub construction_minimum_q: u64,
}

/// Computes the report for `N` workers and `X` colluders (`X >= 1`).
pub fn mds_conjecture_bound(workers: usize, collusion: usize) -> BoundReport {
    let n = workers as u64;
    let x = collusion as u64;
    let max_partitions = workers.checked_sub(2 * collusion).filter(|&p| p >= 1);
    let repetition_escape = collusion == 1;
    let (conjectural_bound, conjectural_minimum_q) = if collusion >= 2 {
        let admissible = |q: u64| {
            let Some((p, _)) = prime_power(q) else { return false };
            if x > q {
                return false;
            }
            let even_exception = p == 2 && (x == 3 || x + 1 == q);
            q + 1 >= n || (even_exception && q + 2 >= n)
        };
        let min_q = (2..).find(|&q| admissible(q)).expect("some prime power qualifies");
        (Some(n.saturating_sub(1)), Some(min_q))
    } else {
        (None, None)
    };
    let construction_bound = n.max(2);
    let construction_minimum_q = (construction_bound..)
        .find(|&q| prime_power(q).is_some())
        .expect("prime powers are unbounded");
    BoundReport {
        workers,
        collusion,
        max_partitions,
        conjectural_bound,
        conjectural_minimum_q,
        repetition_escape,
        construction_bound,
        construction_minimum_q,
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, x) = (self.workers, self.collusion);
        writeln!(f, "N = {n}, X = {x}")?;
        match self.max_partitions {
            Some(p) => writeln!(f, "worker count: N >= P + 2X, so at most P = {p} partitions")?,
            None => writeln!(f, "worker count: N >= P + 2X fails for every P >= 1 (need N >= {})", 2 * x + 1)?,
        }
        writeln!(f, "collusion: X <= q, so q >= {}", x.max(2))?;
        if self.repetition_escape {
            writeln!(
                f,
                "X = 1: the [N, 1] repetition code is MDS over any field; the conjectural bound does not apply (the binary scheme reaches q = 2)"
            )?;
        }
        if let (Some(bound), Some(min_q)) = (self.conjectural_bound, self.conjectural_minimum_q) {
            writeln!(
                f,
                "MDS conjecture: q >= N - 1 = {bound}, or q >= N - 2 = {} when q is even and X = 3 or X = q - 1",
                bound.saturating_sub(1)
            )?;
            writeln!(
                f,
                "conjectural minimum q: {min_q}; this construction: q \u{2265} {}",
                self.construction_bound
            )?;
        } else {
            writeln!(f, "this construction: q \u{2265} {}", self.construction_bound)?;
        }
        write!(f, "smallest field for this construction: GF({})", self.construction_minimum_q)
    }
}
