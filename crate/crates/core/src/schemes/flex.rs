//! The GRS construction with interference cancellation.
//!
//! Shares are evaluations at distinct points `alpha_i` of
//!
//! ```text
//! f(x) = sum_k R_k x^(k-1) + sum_j A'_j x^(X+j-1)
//! g(x) = sum_k S_k x^(k-1) + sum_j B_j  x^(X+j-1)
//! ```
//!
//! with `(A'_1..A'_P) = (A_1..A_P) M^-1`. Every random term of `h = f g` has
//! degree below `P + 2X - 1`, so a decoding vector `lambda` in
//! `RS_(P+2X-1)(alpha)^perp` cancels all of them at once:
//! `sum_i lambda_i h(alpha_i) = a' M b^T = AB`, where
//! `M_(j,j') = sum_i lambda_i alpha_i^(2X+j+j'-2)`.
//!
//! Without redundancy `N = P + 2X` and `lambda = omega` has full support. With
//! redundancy `N = 2P + 2X + S - 1`, `lambda` is a minimum-weight dual codeword
//! vanishing on a chosen zero set, so its `P + 2X` support workers suffice;
//! otherwise any `2P + 2X - 1` responses determine `h` by interpolation.

use std::collections::BTreeSet;

use crate::codes::{dual_column_multipliers, min_weight_dual_codeword, power_sum, support};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{FieldMatrix, MatrixPolynomial};

use super::{
    eval_terms, powers_matrix, weighted_sum, DecodePath, Decoded, Randomness, ResponseSet,
    Scheme, SchemeKind, SchemeParams, Share, ShareSet,
};

#[derive(Clone, Debug)]
pub struct FlexScheme {
    params: SchemeParams,
    alpha: Vec<FieldElement>,
    omega: Vec<FieldElement>,
    lambda: Vec<FieldElement>,
    zero_set: Vec<usize>,
    support: Vec<usize>,
    interference: FieldMatrix,
    interference_inv: FieldMatrix,
}

impl FlexScheme {
    /// Builds an instance. `alpha` defaults to the first `N` field elements in
    /// canonical order; `zero_set` (redundant variant only) defaults to the last
    /// `P + S - 1` workers.
    pub fn new(params: SchemeParams, alpha: Option<Vec<FieldElement>>, zero_set: Option<Vec<usize>>) -> Result<Self> {
        params.validate_common()?;
        let redundant = match params.kind {
            SchemeKind::Flex => false,
            SchemeKind::FlexRedundant => true,
            other => {
                return Err(Error::InvalidParams(format!("{other} is not a flex scheme")))
            }
        };
        let n = params.worker_count();
        let field = params.field.clone();
        if (field.order() as usize) < n {
            return Err(Error::FieldTooSmall {
                q: field.order() as u64,
                n,
            });
        }
        let alpha = match alpha {
            Some(a) => {
                if a.len() != n {
                    return Err(Error::InvalidParams(format!(
                        "{} evaluation points for {n} workers",
                        a.len()
                    )));
                }
                for x in &a {
                    field.check_same(x.field())?;
                }
                a
            }
            None => field.elements().into_iter().take(n).collect(),
        };
        let (p, x) = (params.partitions, params.collusion);
        let omega = dual_column_multipliers(&alpha)?;
        let (lambda, zero_set) = if redundant {
            let dual_dim = p + params.stragglers;
            let zero_set = zero_set.unwrap_or_else(|| (n - (dual_dim - 1)..n).collect());
            (min_weight_dual_codeword(&alpha, dual_dim, &zero_set)?, zero_set)
        } else {
            if zero_set.as_ref().is_some_and(|z| !z.is_empty()) {
                return Err(Error::BadZeroSet(
                    "the construction without redundancy uses every worker".into(),
                ));
            }
            (omega.clone(), Vec::new())
        };

        // lambda must be orthogonal to x^0..x^(P+2X-2) and not to x^(P+2X-1).
        let cancel = (p + 2 * x - 1) as u64;
        if (0..cancel).any(|l| !power_sum(&lambda, &alpha, l).is_zero()) {
            return Err(Error::LemmaViolation);
        }

        // M_(j,j') = m_(j+j'), 0-based: exponent 2X + j + j'.
        let m: Vec<FieldElement> = (0..2 * p - 1)
            .map(|l| power_sum(&lambda, &alpha, (2 * x + l) as u64))
            .collect();
        if m[..p - 1].iter().any(|v| !v.is_zero()) || m[p - 1].is_zero() {
            return Err(Error::LemmaViolation);
        }
        let interference = FieldMatrix::from_fn(&field, p, p, |j, k| m[j + k].clone());
        let interference_inv = interference.inverse().map_err(|_| Error::LemmaViolation)?;
        let support = support(&lambda).into_iter().collect();

        Ok(FlexScheme {
            params,
            alpha,
            omega,
            lambda,
            zero_set,
            support,
            interference,
            interference_inv,
        })
    }

    pub fn is_redundant(&self) -> bool {
        self.params.kind == SchemeKind::FlexRedundant
    }

    pub fn evaluation_points(&self) -> &[FieldElement] {
        &self.alpha
    }

    pub fn dual_multipliers(&self) -> &[FieldElement] {
        &self.omega
    }

    pub fn decoding_vector(&self) -> &[FieldElement] {
        &self.lambda
    }

    pub fn zero_set(&self) -> &[usize] {
        &self.zero_set
    }

    /// Workers whose responses the direct path needs.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// The `P x P` matrix `M`.
    pub fn interference_matrix(&self) -> &FieldMatrix {
        &self.interference
    }

    pub fn interference_inverse(&self) -> &FieldMatrix {
        &self.interference_inv
    }

    /// Degree bound of `h`: `2P + 2X - 1` coefficients.
    fn product_terms(&self) -> usize {
        2 * self.params.partitions + 2 * self.params.collusion - 1
    }

    fn not_enough(&self, responses: &ResponseSet) -> Error {
        let got = responses.len();
        let missing: Vec<usize> = self
            .support
            .iter()
            .copied()
            .filter(|w| !responses.contains(*w))
            .collect();
        if self.is_redundant() {
            let need = self.product_terms();
            Error::NotEnoughResponses(format!(
                "received {got} < 2P+2X-1 = {need} responses and direct-support workers {:?} are missing {:?} (P+2X = {})",
                self.support,
                missing,
                self.support.len()
            ))
        } else {
            Error::NotEnoughResponses(format!(
                "received {got} of N = P+2X = {} responses; all are required (missing {:?})",
                self.worker_count(),
                missing
            ))
        }
    }
}

impl Scheme for FlexScheme {
    fn params(&self) -> &SchemeParams {
        &self.params
    }

    fn randomness_blocks(&self) -> usize {
        self.params.collusion
    }

    fn encode_with(&self, a: &FieldMatrix, b: &FieldMatrix, randomness: &Randomness) -> Result<ShareSet> {
        randomness.check(&self.params, self.params.collusion)?;
        let (a_blocks, b_blocks) = self.params.partition(a, b)?;
        let field = &self.params.field;
        let p = self.params.partitions;
        let x = self.params.collusion as i64;

        // a' = a M^-1
        let mut a_pre = Vec::with_capacity(p);
        for j in 0..p {
            let mut acc = FieldMatrix::zeros(field, a_blocks[0].rows(), a_blocks[0].cols());
            for (k, blk) in a_blocks.iter().enumerate() {
                acc.add_scaled(&self.interference_inv.get(k, j), blk)?;
            }
            a_pre.push(acc);
        }

        let f_terms: Vec<(i64, &FieldMatrix)> = randomness
            .r
            .iter()
            .enumerate()
            .map(|(k, m)| (k as i64, m))
            .chain(a_pre.iter().enumerate().map(|(j, m)| (x + j as i64, m)))
            .collect();
        let g_terms: Vec<(i64, &FieldMatrix)> = randomness
            .s
            .iter()
            .enumerate()
            .map(|(k, m)| (k as i64, m))
            .chain(b_blocks.iter().enumerate().map(|(j, m)| (x + j as i64, m)))
            .collect();

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
        if responses.worker_count() != self.worker_count() {
            return Err(Error::InvalidParams(format!(
                "response set is for {} workers, scheme has {}",
                responses.worker_count(),
                self.worker_count()
            )));
        }
        let field = &self.params.field;
        let shape = (self.params.rows, self.params.cols);
        if self.support.iter().all(|&w| responses.contains(w)) {
            let product = weighted_sum(
                field,
                shape,
                self.support
                    .iter()
                    .map(|&w| (&self.lambda[w], responses.get(w).expect("checked above"))),
            )?;
            let path = if self.is_redundant() {
                DecodePath::DirectSupport
            } else {
                DecodePath::FullSum
            };
            return Ok(Decoded { product, path });
        }
        let need = self.product_terms();
        if !self.is_redundant() || responses.len() < need {
            return Err(self.not_enough(responses));
        }
        let points: Vec<(FieldElement, &FieldMatrix)> = responses
            .iter()
            .take(need)
            .map(|(w, h)| (self.alpha[w].clone(), h))
            .collect();
        let h = MatrixPolynomial::interpolate(&points)?;
        let present: BTreeSet<usize> = responses.received().into_iter().collect();
        let mut product = FieldMatrix::zeros(field, shape.0, shape.1);
        for &w in &self.support {
            let hw = if present.contains(&w) {
                responses.get(w).expect("present").clone()
            } else {
                h.eval(&self.alpha[w])?
            };
            product.add_scaled(&self.lambda[w], &hw)?;
        }
        Ok(Decoded {
            product,
            path: DecodePath::Interpolation,
        })
    }

    fn security_codes(&self) -> (FieldMatrix, FieldMatrix) {
        let x = self.params.collusion as i64;
        let g = powers_matrix(&self.params.field, &self.alpha, 0..x).expect("nonnegative exponents");
        (g.clone(), g)
    }

    fn recovery_threshold(&self) -> usize {
        if self.is_redundant() {
            self.product_terms()
        } else {
            self.worker_count()
        }
    }

    fn minimal_recovery_size(&self) -> usize {
        self.support.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::GrsCode;
    use crate::field::Field;
    use itertools::Itertools;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn values(v: &[FieldElement]) -> Vec<u32> {
        v.iter().map(|x| x.value()).collect()
    }

    /// `sum_i lambda_i alpha_i^e` by direct summation over integers mod p,
    /// independent of the power_sum helper.
    fn direct_sum(p: u64, lambda: &[u64], alpha: &[u64], e: u32) -> u64 {
        lambda
            .iter()
            .zip(alpha)
            .map(|(l, a)| l * a.pow(e) % p)
            .sum::<u64>()
            % p
    }

    #[test]
    fn gf3_single_block_instance() {
        let f = gf(3);
        let params = SchemeParams::new(SchemeKind::Flex, f, 1, 1, 0);
        let s = FlexScheme::new(params, None, None).unwrap();
        assert_eq!(values(s.evaluation_points()), vec![0, 1, 2]);
        assert_eq!(values(s.decoding_vector()), vec![2, 2, 2]);
        assert_eq!(direct_sum(3, &[2, 2, 2], &[0, 1, 2], 2), 1);
        assert_eq!(s.interference_matrix().values(), &[1]);
    }

    #[test]
    fn gf5_redundant_instance_with_zero_set() {
        let f = gf(5);
        let alpha: Vec<_> = (1..=4).map(|v| f.element(v).unwrap()).collect();
        let params = SchemeParams::new(SchemeKind::FlexRedundant, f, 1, 1, 1);
        let s = FlexScheme::new(params, Some(alpha), Some(vec![0])).unwrap();
        assert_eq!(values(s.decoding_vector()), vec![0, 3, 4, 3]);
        assert_eq!(direct_sum(5, &[0, 3, 4, 3], &[1, 2, 3, 4], 2), 1);
        assert_eq!(s.interference_matrix().values(), &[1]);
        assert_eq!(s.support(), &[1, 2, 3]);
    }

    #[test]
    fn two_block_interference_is_anti_triangular() {
        let params = SchemeParams::new(SchemeKind::Flex, gf(7), 2, 1, 0);
        let s = FlexScheme::new(params, None, None).unwrap();
        let m = s.interference_matrix();
        assert!(m.get(0, 0).is_zero());
        assert!(!m.get(0, 1).is_zero());
        assert_eq!(m.get(0, 1), m.get(1, 0));
    }

    #[test]
    fn parameter_errors() {
        let small = SchemeParams::new(SchemeKind::Flex, gf(3), 2, 1, 0);
        assert_eq!(
            FlexScheme::new(small, None, None).unwrap_err(),
            Error::FieldTooSmall { q: 3, n: 4 }
        );
        let params = SchemeParams::new(SchemeKind::Flex, gf(7), 1, 0, 0);
        assert!(matches!(FlexScheme::new(params, None, None), Err(Error::InvalidParams(_))));
        let params = SchemeParams::new(SchemeKind::Flex, gf(7), 1, 1, 0);
        assert!(matches!(
            FlexScheme::new(params, None, Some(vec![1])),
            Err(Error::BadZeroSet(_))
        ));
        let params = SchemeParams::new(SchemeKind::FlexRedundant, gf(7), 1, 1, 1);
        assert!(matches!(
            FlexScheme::new(params.clone(), None, Some(vec![0, 1])),
            Err(Error::BadZeroSet(_))
        ));
        let f = gf(7);
        let dup: Vec<_> = [1, 1, 2, 3].iter().map(|&v| f.element(v).unwrap()).collect();
        assert!(matches!(
            FlexScheme::new(params, Some(dup), None),
            Err(Error::DuplicateEvaluationPoint(0, 1))
        ));
    }

    #[test]
    fn single_block_shares_are_r_plus_scaled_a() {
        let f = gf(5);
        let params = SchemeParams::new(SchemeKind::Flex, f.clone(), 1, 1, 0).with_dims(1, 1, 1);
        let s = FlexScheme::new(params.clone(), None, None).unwrap();
        let m2 = s.interference_matrix().get(0, 0);
        let a = FieldMatrix::from_values(&f, 1, 1, &[3]).unwrap();
        let b = FieldMatrix::from_values(&f, 1, 1, &[4]).unwrap();
        let rand = Randomness {
            r: vec![FieldMatrix::from_values(&f, 1, 1, &[2]).unwrap()],
            s: vec![FieldMatrix::from_values(&f, 1, 1, &[1]).unwrap()],
        };
        let shares = s.encode_with(&a, &b, &rand).unwrap();
        let a_pre = a.get(0, 0).try_div(&m2).unwrap();
        for (share, ai) in shares.iter().zip(s.evaluation_points()) {
            assert_eq!(share.a.get(0, 0), &f.element(2).unwrap() + &(&a_pre * ai));
        }
    }

    #[test]
    fn zero_inputs_give_pure_noise_codewords() {
        let f = gf(11);
        let params = SchemeParams::new(SchemeKind::Flex, f.clone(), 2, 2, 0).with_dims(2, 4, 2);
        let s = FlexScheme::new(params.clone(), None, None).unwrap();
        let shares = s
            .encode(
                &FieldMatrix::zeros(&f, 2, 4),
                &FieldMatrix::zeros(&f, 4, 2),
                &mut ChaCha8Rng::seed_from_u64(5),
            )
            .unwrap();
        let rs = GrsCode::reed_solomon(s.evaluation_points(), 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let word: Vec<_> = shares.iter().map(|sh| sh.a.get(i, j)).collect();
                assert!(rs.contains(&word).unwrap());
            }
        }
    }

    #[test]
    fn end_to_end_gf7() {
        let f = gf(7);
        let params = SchemeParams::new(SchemeKind::Flex, f.clone(), 2, 1, 0).with_dims(2, 4, 3);
        let s = FlexScheme::new(params, None, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = FieldMatrix::random(&f, 2, 4, &mut rng);
        let b = FieldMatrix::random(&f, 4, 3, &mut rng);
        let shares = s.encode(&a, &b, &mut rng).unwrap();
        let out = s.decode(&shares.respond_all().unwrap()).unwrap();
        assert_eq!(out.product, a.mul(&b).unwrap());
        assert_eq!(out.path, DecodePath::FullSum);
        let err = s.decode(&shares.respond([0, 1, 2]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotEnoughResponses(_)));
    }

    #[test]
    fn redundant_paths() {
        let f = gf(5);
        let alpha: Vec<_> = (1..=4).map(|v| f.element(v).unwrap()).collect();
        let params = SchemeParams::new(SchemeKind::FlexRedundant, f.clone(), 1, 1, 1).with_dims(2, 2, 2);
        let s = FlexScheme::new(params, Some(alpha), Some(vec![0])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = FieldMatrix::random(&f, 2, 2, &mut rng);
        let b = FieldMatrix::random(&f, 2, 2, &mut rng);
        let ab = a.mul(&b).unwrap();
        let shares = s.encode(&a, &b, &mut rng).unwrap();

        // Worker 2 (1-based), in the support, straggles.
        let out = s.decode(&shares.respond([0, 2, 3]).unwrap()).unwrap();
        assert_eq!(out.path, DecodePath::Interpolation);
        assert_eq!(out.product, ab);

        let out = s.decode(&shares.respond([1, 2, 3]).unwrap()).unwrap();
        assert_eq!(out.path, DecodePath::DirectSupport);
        assert_eq!(out.product, ab);

        let err = s.decode(&shares.respond([0, 1]).unwrap()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2P+2X-1 = 3"), "{msg}");
    }

    #[test]
    fn every_straggler_pattern_decodes() {
        let f = gf(11);
        let params = SchemeParams::new(SchemeKind::FlexRedundant, f.clone(), 2, 2, 2).with_dims(2, 4, 2);
        let s = FlexScheme::new(params, None, None).unwrap();
        let n = s.worker_count();
        assert_eq!(n, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = FieldMatrix::random(&f, 2, 4, &mut rng);
        let b = FieldMatrix::random(&f, 4, 2, &mut rng);
        let ab = a.mul(&b).unwrap();
        let shares = s.encode(&a, &b, &mut rng).unwrap();
        let all = shares.respond_all().unwrap();
        for k in 0..=2 {
            for dropped in (0..n).combinations(k) {
                let keep: Vec<usize> = (0..n).filter(|w| !dropped.contains(w)).collect();
                assert_eq!(s.decode(&all.restrict(&keep)).unwrap().product, ab);
            }
        }
    }
}
