//! The GF(2) construction for even `P` and `X = 1` with `N = P + 2` workers.
//!
//! ```text
//! worker j <= P : (R + A_j,        S + B_j)
//! worker P + 1  : (R + sum_j A_j,  S)
//! worker P + 2  : (R,              S + sum_j B_j)
//! ```
//!
//! Summing all responses cancels the cross terms pairwise and leaves
//! `sum_j A_j B_j + (P + 2) R S`, which is `AB` in characteristic 2 when `P` is
//! even.

use crate::error::{Error, Result};
use crate::linalg::FieldMatrix;

use super::{
    weighted_sum, DecodePath, Decoded, Randomness, ResponseSet, Scheme, SchemeKind,
    SchemeParams, Share, ShareSet,
};

#[derive(Clone, Debug)]
pub struct BinaryScheme {
    params: SchemeParams,
}

impl BinaryScheme {
    pub fn new(params: SchemeParams) -> Result<Self> {
        if params.kind != SchemeKind::Binary {
            return Err(Error::InvalidParams(format!("{} is not the binary scheme", params.kind)));
        }
        if params.field.order() != 2 {
            return Err(Error::WrongField {
                expected: 2,
                actual: params.field.order() as u64,
            });
        }
        if params.partitions % 2 != 0 {
            return Err(Error::OddP(params.partitions));
        }
        if params.collusion != 1 {
            return Err(Error::InvalidParams(format!(
                "the binary scheme has X = 1, got X={}",
                params.collusion
            )));
        }
        params.validate_common()?;
        Ok(BinaryScheme { params })
    }
}

impl Scheme for BinaryScheme {
    fn params(&self) -> &SchemeParams {
        &self.params
    }

    fn randomness_blocks(&self) -> usize {
        1
    }

    fn encode_with(&self, a: &FieldMatrix, b: &FieldMatrix, randomness: &Randomness) -> Result<ShareSet> {
        randomness.check(&self.params, 1)?;
        let (a_blocks, b_blocks) = self.params.partition(a, b)?;
        let (r, s) = (&randomness.r[0], &randomness.s[0]);
        let mut shares = Vec::with_capacity(self.worker_count());
        for (aj, bj) in a_blocks.iter().zip(&b_blocks) {
            shares.push(Share {
                a: r.add(aj)?,
                b: s.add(bj)?,
            });
        }
        let mut a_sum = r.clone();
        for aj in &a_blocks {
            a_sum = a_sum.add(aj)?;
        }
        let mut b_sum = s.clone();
        for bj in &b_blocks {
            b_sum = b_sum.add(bj)?;
        }
        shares.push(Share {
            a: a_sum,
            b: s.clone(),
        });
        shares.push(Share {
            a: r.clone(),
            b: b_sum,
        });
        ShareSet::new(shares)
    }

    fn decode(&self, responses: &ResponseSet) -> Result<Decoded> {
        let n = self.worker_count();
        if responses.worker_count() != n {
            return Err(Error::InvalidParams(format!(
                "response set is for {} workers, scheme has {n}",
                responses.worker_count()
            )));
        }
        if responses.len() < n {
            return Err(Error::NotEnoughResponses(format!(
                "received {} of N = P+2 = {n} responses; the binary scheme needs all of them (missing {:?})",
                responses.len(),
                responses.missing()
            )));
        }
        let one = self.params.field.one();
        let product = weighted_sum(
            &self.params.field,
            (self.params.rows, self.params.cols),
            responses.iter().map(|(_, h)| (&one, h)),
        )?;
        Ok(Decoded {
            product,
            path: DecodePath::FullSum,
        })
    }

    fn security_codes(&self) -> (FieldMatrix, FieldMatrix) {
        let n = self.worker_count();
        let ones = FieldMatrix::from_values(&self.params.field, 1, n, &vec![1; n]).expect("valid entries");
        (ones.clone(), ones)
    }

    fn recovery_threshold(&self) -> usize {
        self.worker_count()
    }

    fn minimal_recovery_size(&self) -> usize {
        self.worker_count()
    }
}
