//! The DFT construction: shares are evaluations at the `N`-th roots of unity of
//!
//! ```text
//! f(x) = sum_j A_j x^(j-1)  + sum_k R_k x^(P+k-1)
//! g(x) = sum_j B_j x^(-j+1) + sum_k S_k x^(-P-X-k+1)
//! ```
//!
//! Every non-constant term of `f g` has degree in `(-N, N)` and vanishes when
//! summed over the roots, leaving `(1/N) sum_i h(alpha_i) = AB`. All `N`
//! responses are needed.

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::FieldMatrix;

use super::{
    eval_terms, powers_matrix, weighted_sum, DecodePath, Decoded, Randomness, ResponseSet,
    Scheme, SchemeKind, SchemeParams, Share, ShareSet,
};

#[derive(Clone, Debug)]
pub struct DftScheme {
    params: SchemeParams,
    root: FieldElement,
    alpha: Vec<FieldElement>,
    scale: FieldElement,
}

impl DftScheme {
    pub fn new(params: SchemeParams) -> Result<Self> {
        if params.kind != SchemeKind::Dft {
            return Err(Error::InvalidParams(format!("{} is not the dft scheme", params.kind)));
        }
        params.validate_common()?;
        let n = params.worker_count();
        let root = params.field.nth_root_of_unity(n as u64)?;
        let alpha = (0..n as i64)
            .map(|i| root.pow(i))
            .collect::<Result<Vec<_>>>()?;
        // N | q - 1 makes N a unit in the field.
        let scale = params.field.from_int(n as i64).inv()?;
        Ok(DftScheme {
            params,
            root,
            alpha,
            scale,
        })
    }

    /// The primitive `N`-th root of unity `zeta`; worker `i` evaluates at `zeta^i`.
    pub fn root(&self) -> &FieldElement {
        &self.root
    }

    pub fn evaluation_points(&self) -> &[FieldElement] {
        &self.alpha
    }
}

impl Scheme for DftScheme {
    fn params(&self) -> &SchemeParams {
        &self.params
    }

    fn randomness_blocks(&self) -> usize {
        self.params.collusion
    }

    fn encode_with(&self, a: &FieldMatrix, b: &FieldMatrix, randomness: &Randomness) -> Result<ShareSet> {
        randomness.check(&self.params, self.params.collusion)?;
        let (a_blocks, b_blocks) = self.params.partition(a, b)?;
        let p = self.params.partitions as i64;
        let x = self.params.collusion as i64;
        let f_terms: Vec<(i64, &FieldMatrix)> = a_blocks
            .iter()
            .enumerate()
            .map(|(j, m)| (j as i64, m))
            .chain(randomness.r.iter().enumerate().map(|(k, m)| (p + k as i64, m)))
            .collect();
        let g_terms: Vec<(i64, &FieldMatrix)> = b_blocks
            .iter()
            .enumerate()
            .map(|(j, m)| (-(j as i64), m))
            .chain(
                randomness
                    .s
                    .iter()
                    .enumerate()
                    .map(|(k, m)| (-p - x - k as i64, m)),
            )
            .collect();
        let field = &self.params.field;
        let shares = self
            .alpha
            .iter()
            .map(|ai| {
                Ok(Share {
                    a: eval_terms(field, &f_terms, ai)?,
                    b: eval_terms(field, &g_terms, ai)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
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
                "received {} of N = P+2X = {n} responses; the dft scheme needs all of them (missing {:?})",
                responses.len(),
                responses.missing()
            )));
        }
        let product = weighted_sum(
            &self.params.field,
            (self.params.rows, self.params.cols),
            responses.iter().map(|(_, h)| (&self.scale, h)),
        )?;
        Ok(Decoded {
            product,
            path: DecodePath::FullSum,
        })
    }

    fn security_codes(&self) -> (FieldMatrix, FieldMatrix) {
        let p = self.params.partitions as i64;
        let x = self.params.collusion as i64;
        let f = &self.params.field;
        let a = powers_matrix(f, &self.alpha, p..p + x).expect("roots are nonzero");
        let b = powers_matrix(f, &self.alpha, (0..x).map(|k| -p - x - k)).expect("roots are nonzero");
        (a, b)
    }

    fn recovery_threshold(&self) -> usize {
        self.worker_count()
    }

    fn minimal_recovery_size(&self) -> usize {
        self.worker_count()
    }
}
