//! Generalized Reed–Solomon codes and the coding-theory helpers the schemes
//! are built from.
//!
//! Coordinates are 0-based throughout: `support(&[0, 3, 4, 3])` is `{1, 2, 3}`,
//! which is `{2, 3, 4}` in the 1-based convention common in the literature.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::FieldMatrix;

/// Upper limit on the number of `k x k` minors [`is_mds`] will examine.
pub const MDS_MINOR_LIMIT: u128 = 1_000_000;

/// `GRS_k(alpha, nu) = {(nu_1 f(alpha_1), ..., nu_n f(alpha_n)) : deg f < k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrsCode {
    field: Field,
    alpha: Vec<FieldElement>,
    nu: Vec<FieldElement>,
    k: usize,
}

impl GrsCode {
    pub fn new(alpha: &[FieldElement], nu: &[FieldElement], k: usize) -> Result<GrsCode> {
        let field = alpha
            .first()
            .ok_or(Error::BadDimension { k, n: 0 })?
            .field()
            .clone();
        if nu.len() != alpha.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} evaluation points but {} column multipliers",
                alpha.len(),
                nu.len()
            )));
        }
        for x in alpha.iter().chain(nu) {
            field.check_same(x.field())?;
        }
        check_distinct(alpha)?;
        if let Some(pos) = nu.iter().position(|v| v.is_zero()) {
            return Err(Error::ZeroMultiplier(pos));
        }
        let n = alpha.len();
        if k == 0 || k > n {
            return Err(Error::BadDimension { k, n });
        }
        Ok(GrsCode {
            field,
            alpha: alpha.to_vec(),
            nu: nu.to_vec(),
            k,
        })
    }

    /// `RS_k(alpha) = GRS_k(alpha, 1)`.
    pub fn reed_solomon(alpha: &[FieldElement], k: usize) -> Result<GrsCode> {
        let ones = match alpha.first() {
            Some(a) => vec![a.field().one(); alpha.len()],
            None => Vec::new(),
        };
        Self::new(alpha, &ones, k)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.alpha.len()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn evaluation_points(&self) -> &[FieldElement] {
        &self.alpha
    }

    pub fn column_multipliers(&self) -> &[FieldElement] {
        &self.nu
    }

    /// `k x n`, entry `(i, j) = nu_j * alpha_j^i`.
    pub fn generator_matrix(&self) -> FieldMatrix {
        let f = &self.field;
        FieldMatrix::from_fn(f, self.k, self.length(), |i, j| {
            let v = f.mul_raw(self.nu[j].value(), f.pow_raw(self.alpha[j].value(), i as u64));
            FieldElement::from_raw(f.clone(), v)
        })
    }

    /// Encodes message coefficients `f_0..f_(k-1)`.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Codeword> {
        if message.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for a code of dimension {}",
                message.len(),
                self.k
            )));
        }
        let row = FieldMatrix::row_vector(&self.field, message)?;
        let word = row.mul(&self.generator_matrix())?;
        Ok(Codeword(word.row(0)))
    }

    /// Membership by rank comparison against the generator matrix.
    pub fn contains(&self, word: &[FieldElement]) -> Result<bool> {
        if word.len() != self.length() {
            return Ok(false);
        }
        self.generator_matrix().row_space_contains(word)
    }

    /// `GRS_k(alpha, nu)^perp = GRS_(n-k)(alpha, omega / nu)`. Fails for `k = n`,
    /// whose dual is the zero code.
    pub fn dual(&self) -> Result<GrsCode> {
        let omega = dual_column_multipliers(&self.alpha)?;
        let nu: Vec<FieldElement> = omega
            .iter()
            .zip(&self.nu)
            .map(|(w, v)| w.try_div(v))
            .collect::<Result<_>>()?;
        GrsCode::new(&self.alpha, &nu, self.length() - self.k)
    }

    pub fn is_mds(&self) -> Result<bool> {
        is_mds(&self.generator_matrix())
    }
}

/// A vector known to come from a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword(pub Vec<FieldElement>);

impl Codeword {
    pub fn symbols(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        weight(&self.0)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        support(&self.0)
    }
}

fn check_distinct(alpha: &[FieldElement]) -> Result<()> {
    for i in 0..alpha.len() {
        if let Some(j) = alpha[i + 1..].iter().position(|a| a == &alpha[i]) {
            return Err(Error::DuplicateEvaluationPoint(i, i + 1 + j));
        }
    }
    Ok(())
}

/// `omega_i = (prod_{j != i} (alpha_i - alpha_j))^-1`, the column multipliers of
/// every dual `RS_k(alpha)^perp = GRS_(n-k)(alpha, omega)`.
pub fn dual_column_multipliers(alpha: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let Some(first) = alpha.first() else {
        return Ok(Vec::new());
    };
    let f = first.field().clone();
    for a in alpha {
        f.check_same(a.field())?;
    }
    check_distinct(alpha)?;
    Ok(alpha
        .iter()
        .enumerate()
        .map(|(i, ai)| {
            let prod = alpha
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(1, |acc, (_, aj)| f.mul_raw(acc, f.sub_raw(ai.value(), aj.value())));
            FieldElement::from_raw(f.clone(), f.inv_raw(prod).expect("points are distinct"))
        })
        .collect())
}

/// `GRS_k(alpha, nu) * GRS_l(alpha, mu) = GRS_min(k+l-1, n)(alpha, nu * mu)`.
pub fn star_product_code(c: &GrsCode, d: &GrsCode) -> Result<GrsCode> {
    if c.alpha != d.alpha {
        return Err(Error::MismatchedEvaluationPoints);
    }
    let nu: Vec<FieldElement> = c.nu.iter().zip(&d.nu).map(|(a, b)| a * b).collect();
    let k = (c.k + d.k - 1).min(c.length());
    GrsCode::new(&c.alpha, &nu, k)
}

/// Whether every `k x k` column submatrix of a `k x n` generator is invertible.
pub fn is_mds(generator: &FieldMatrix) -> Result<bool> {
    let (k, n) = generator.shape();
    if k == 0 || k > n {
        return Ok(false);
    }
    let count = binomial(n as u128, k as u128);
    if count > MDS_MINOR_LIMIT {
        return Err(Error::TooLargeToVerify {
            count,
            limit: MDS_MINOR_LIMIT,
        });
    }
    Ok((0..n)
        .combinations(k)
        .all(|cols| generator.select_columns(&cols).rank() == k))
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub fn weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// 0-based indices of the nonzero coordinates.
pub fn support(v: &[FieldElement]) -> BTreeSet<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// A minimum-weight codeword of `GRS_dual_dim(alpha, omega)`, the dual of
/// `RS_(n - dual_dim)(alpha)`, vanishing exactly on `zero_set`:
/// `lambda_i = omega_i * prod_{z in zero_set} (alpha_i - alpha_z)`.
///
/// `zero_set` holds `dual_dim - 1` distinct 0-based coordinates. Because the
/// factor polynomial has degree exactly `dual_dim - 1`, the result is not in
/// the smaller dual `GRS_(dual_dim - 1)(alpha, omega)`.
pub fn min_weight_dual_codeword(
    alpha: &[FieldElement],
    dual_dim: usize,
    zero_set: &[usize],
) -> Result<Vec<FieldElement>> {
    let n = alpha.len();
    if dual_dim == 0 || dual_dim > n {
        return Err(Error::BadDimension { k: dual_dim, n });
    }
    if zero_set.len() != dual_dim - 1 {
        return Err(Error::BadZeroSet(format!(
            "expected {} indices, got {}",
            dual_dim - 1,
            zero_set.len()
        )));
    }
    let unique: BTreeSet<usize> = zero_set.iter().copied().collect();
    if unique.len() != zero_set.len() {
        return Err(Error::BadZeroSet("repeated index".into()));
    }
    if let Some(z) = unique.iter().find(|&&z| z >= n) {
        return Err(Error::BadZeroSet(format!("index {z} out of range for length {n}")));
    }
    let omega = dual_column_multipliers(alpha)?;
    let f = alpha[0].field().clone();
    Ok(alpha
        .iter()
        .zip(&omega)
        .map(|(ai, wi)| {
            let v = zero_set.iter().fold(wi.value(), |acc, &z| {
                f.mul_raw(acc, f.sub_raw(ai.value(), alpha[z].value()))
            });
            FieldElement::from_raw(f.clone(), v)
        })
        .collect())
}

/// `sum_i v_i * alpha_i^l`.
pub fn power_sum(v: &[FieldElement], alpha: &[FieldElement], l: u64) -> FieldElement {
    let f = alpha[0].field();
    let s = v.iter().zip(alpha).fold(0, |acc, (vi, ai)| {
        f.add_raw(acc, f.mul_raw(vi.value(), f.pow_raw(ai.value(), l)))
    });
    FieldElement::from_raw(f.clone(), s)
}
