//! Security checks: the structural MDS criterion on the randomness codes, and
//! an exhaustive audit that computes the exact mutual information between the
//! inputs and every small coalition's shares.

use std::collections::HashMap;

use itertools::Itertools;
use num_rational::Ratio;

use crate::codes::is_mds;
use crate::error::{Error, Result};
use crate::linalg::FieldMatrix;

use super::{Decoded, Randomness, ResponseSet, Scheme, SchemeParams, ShareSet};

/// Largest joint state space (inputs times randomness) the audit enumerates.
pub const AUDIT_STATE_LIMIT: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsSecurityReport {
    pub a_code_mds: bool,
    pub b_code_mds: bool,
    /// `(length, dimension)` of each security code.
    pub a_code: (usize, usize),
    pub b_code: (usize, usize),
}

impl MdsSecurityReport {
    pub fn passed(&self) -> bool {
        self.a_code_mds && self.b_code_mds
    }
}

/// Checks that both randomness codes are `[N, X]` MDS codes, which is
/// sufficient for `X`-security of a linear scheme.
pub fn verify_mds_security(scheme: &dyn Scheme) -> Result<MdsSecurityReport> {
    let (ga, gb) = scheme.security_codes();
    let x = scheme.params().collusion;
    let dims = |g: &FieldMatrix| (g.cols(), g.rows());
    Ok(MdsSecurityReport {
        a_code_mds: ga.rank() == ga.rows() && is_mds(&ga)?,
        b_code_mds: gb.rank() == gb.rows() && is_mds(&gb)?,
        a_code: dims(&ga),
        b_code: dims(&gb),
    })
    .map(|r| {
        debug_assert!(r.a_code.1 >= x.min(1));
        r
    })
}

/// Mutual information between the inputs and one coalition's shares.
#[derive(Clone, Debug, PartialEq)]
pub struct MutualInformation {
    /// Every joint probability equals the product of its marginals, compared
    /// as exact rationals.
    pub exact_zero: bool,
    /// Value in bits (exactly 0.0 when `exact_zero`).
    pub bits: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    /// Coalitions examined with their mutual information.
    pub coalitions: Vec<(Vec<usize>, MutualInformation)>,
    /// Number of (input, randomness) states enumerated.
    pub states: u128,
}

impl AuditReport {
    /// The coalition with the largest mutual information.
    pub fn worst(&self) -> Option<&(Vec<usize>, MutualInformation)> {
        self.coalitions
            .iter()
            .max_by(|a, b| a.1.bits.total_cmp(&b.1.bits))
    }

    pub fn max_bits(&self) -> f64 {
        self.worst().map_or(0.0, |w| w.1.bits)
    }

    pub fn secure(&self) -> bool {
        self.coalitions.iter().all(|(_, mi)| mi.exact_zero)
    }
}

/// Size of the exhaustive state space for scalar blocks: `q^(2P + 2k)` with `k`
/// random blocks per side.
pub fn audit_state_space(scheme: &dyn Scheme) -> u128 {
    let p = scheme.params();
    let q = p.field.order() as u128;
    let exponent = (2 * p.partitions + 2 * scheme.randomness_blocks()) as u32;
    q.checked_pow(exponent).unwrap_or(u128::MAX)
}

/// Enumerates every input pair `(A, B)` (uniform prior) and every randomness
/// value, and for each coalition of at most `max_collusion` workers computes
/// `I(A, B; shares of the coalition)` from exact counts.
///
/// Requires scalar blocks: `A` is `1 x P` and `B` is `P x 1`.
pub fn exhaustive_security_audit(scheme: &dyn Scheme, max_collusion: usize) -> Result<AuditReport> {
    let params = scheme.params();
    let p = params.partitions;
    if params.rows != 1 || params.cols != 1 || params.inner != p {
        return Err(Error::InvalidParams(
            "the exhaustive audit needs scalar blocks (t = r = 1, s = P)".into(),
        ));
    }
    let states = audit_state_space(scheme);
    if states > AUDIT_STATE_LIMIT {
        return Err(Error::StateSpaceTooLarge {
            size: states,
            limit: AUDIT_STATE_LIMIT,
        });
    }
    let field = &params.field;
    let q = field.order();
    let n = scheme.worker_count();
    let k = scheme.randomness_blocks();
    let coalitions: Vec<Vec<usize>> = (1..=max_collusion.min(n))
        .flat_map(|size| (0..n).combinations(size))
        .collect();

    // counts[c][(input index, coalition view)] and view marginals.
    let mut joint: Vec<HashMap<(u64, Vec<u32>), u64>> = vec![HashMap::new(); coalitions.len()];
    let mut view_counts: Vec<HashMap<Vec<u32>, u64>> = vec![HashMap::new(); coalitions.len()];

    let inputs = (q as u64).pow(2 * p as u32);
    let draws = (q as u64).pow(2 * k as u32);
    for input in 0..inputs {
        let digits = base_digits(input, q, 2 * p);
        let a = FieldMatrix::from_values(field, 1, p, &digits[..p])?;
        let b = FieldMatrix::from_values(field, p, 1, &digits[p..])?;
        for draw in 0..draws {
            let rd = base_digits(draw, q, 2 * k);
            let randomness = Randomness {
                r: rd[..k]
                    .iter()
                    .map(|&v| FieldMatrix::from_values(field, 1, 1, &[v]))
                    .collect::<Result<_>>()?,
                s: rd[k..]
                    .iter()
                    .map(|&v| FieldMatrix::from_values(field, 1, 1, &[v]))
                    .collect::<Result<_>>()?,
            };
            let shares = scheme.encode_with(&a, &b, &randomness)?;
            for (c, members) in coalitions.iter().enumerate() {
                let view = coalition_view(&shares, members);
                *view_counts[c].entry(view.clone()).or_default() += 1;
                *joint[c].entry((input, view)).or_default() += 1;
            }
        }
    }

    let total = (inputs * draws) as u128;
    let per_input = draws as u128;
    let coalitions = coalitions
        .into_iter()
        .enumerate()
        .map(|(c, members)| {
            let mut exact_zero = true;
            let mut bits = 0.0;
            for ((_, view), &count) in &joint[c] {
                let count = count as u128;
                let marginal = view_counts[c][view] as u128;
                // p(ab, y) / (p(ab) p(y)) = count * total / (per_input * marginal)
                let ratio = Ratio::new(count * total, per_input * marginal);
                if ratio != Ratio::from_integer(1) {
                    exact_zero = false;
                    let prob = count as f64 / total as f64;
                    bits += prob * (*ratio.numer() as f64 / *ratio.denom() as f64).log2();
                }
            }
            let mi = MutualInformation {
                exact_zero,
                bits: if exact_zero { 0.0 } else { bits },
            };
            (members, mi)
        })
        .collect();
    Ok(AuditReport { coalitions, states })
}

fn base_digits(mut v: u64, q: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (v % q as u64) as u32;
            v /= q as u64;
            d
        })
        .collect()
}

fn coalition_view(shares: &ShareSet, members: &[usize]) -> Vec<u32> {
    members
        .iter()
        .flat_map(|&w| {
            let s = shares.get(w).expect("coalition member exists");
            s.a.values().iter().chain(s.b.values()).copied().collect::<Vec<_>>()
        })
        .collect()
}

/// A scheme with its randomness forced to zero, used to confirm the auditor
/// detects leakage.
pub struct SabotagedScheme<'a> {
    inner: &'a dyn Scheme,
}

impl<'a> SabotagedScheme<'a> {
    pub fn new(inner: &'a dyn Scheme) -> Self {
        SabotagedScheme { inner }
    }
}

impl Scheme for SabotagedScheme<'_> {
    fn params(&self) -> &SchemeParams {
        self.inner.params()
    }

    fn randomness_blocks(&self) -> usize {
        self.inner.randomness_blocks()
    }

    fn encode_with(&self, a: &FieldMatrix, b: &FieldMatrix, _randomness: &Randomness) -> Result<ShareSet> {
        let zeros = Randomness::zeros(self.params(), self.randomness_blocks());
        self.inner.encode_with(a, b, &zeros)
    }

    fn decode(&self, responses: &ResponseSet) -> Result<Decoded> {
        self.inner.decode(responses)
    }

    fn security_codes(&self) -> (FieldMatrix, FieldMatrix) {
        let (a, b) = self.inner.security_codes();
        (
            FieldMatrix::zeros(a.field(), a.rows(), a.cols()),
            FieldMatrix::zeros(b.field(), b.rows(), b.cols()),
        )
    }

    fn recovery_threshold(&self) -> usize {
        self.inner.recovery_threshold()
    }

    fn minimal_recovery_size(&self) -> usize {
        self.inner.minimal_recovery_size()
    }
}
