//! SDMM schemes using the inner product partition `AB = sum_j A_j B_j`.
//!
//! Every scheme follows the same life cycle: build an instance from
//! [`SchemeParams`], [`Scheme::encode`] the inputs into one share pair per
//! worker, let each worker multiply its pair ([`ShareSet::respond`]), then
//! [`Scheme::decode`] whichever responses arrived.
//!
//! Worker indices are 0-based.
//!
//! The randomness drawn by [`Scheme::encode`] comes from the caller's RNG. Tests
//! and the simulator use a seeded ChaCha generator for reproducibility; a real
//! deployment would need a cryptographically secure source.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::FieldMatrix;

pub mod binary;
pub mod bounds;
pub mod config;
pub mod dft;
pub mod flex;
pub mod security;

pub use binary::BinaryScheme;
pub use bounds::{mds_conjecture_bound, BoundReport};
pub use config::SchemeConfig;
pub use dft::DftScheme;
pub use flex::FlexScheme;
pub use security::{
    exhaustive_security_audit, verify_mds_security, AuditReport, MdsSecurityReport,
    MutualInformation, SabotagedScheme,
};

/// Which construction to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    /// GRS construction without redundancy, `N = P + 2X`.
    Flex,
    /// GRS construction with straggler tolerance, `N = 2P + 2X + S - 1`.
    FlexRedundant,
    /// Roots-of-unity construction, `N = P + 2X`, `N | q - 1`.
    Dft,
    /// GF(2) construction for even `P`, `X = 1`, `N = P + 2`.
    Binary,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::Flex,
        SchemeKind::FlexRedundant,
        SchemeKind::Dft,
        SchemeKind::Binary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Flex => "flex",
            SchemeKind::FlexRedundant => "flex-redundant",
            SchemeKind::Dft => "dft",
            SchemeKind::Binary => "binary",
        }
    }

    /// Number of workers for the given partition/collusion/straggler counts.
    pub fn worker_count(self, partitions: usize, collusion: usize, stragglers: usize) -> usize {
        match self {
            SchemeKind::Flex | SchemeKind::Dft | SchemeKind::Binary => partitions + 2 * collusion,
            SchemeKind::FlexRedundant => 2 * partitions + 2 * collusion + stragglers - 1,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown scheme '{s}' (expected flex, flex-redundant, dft or binary)"
                ))
            })
    }
}

/// Parameters shared by every scheme. `A` is `rows x inner`, `B` is `inner x cols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeParams {
    pub kind: SchemeKind,
    pub field: Field,
    /// `P`, the number of inner-product blocks.
    pub partitions: usize,
    /// `X`, the number of colluding workers tolerated.
    pub collusion: usize,
    /// `S`, the number of stragglers tolerated (redundant flex only).
    pub stragglers: usize,
    /// `t`
    pub rows: usize,
    /// `s`
    pub inner: usize,
    /// `r`
    pub cols: usize,
    /// Zero-pad `inner` up to a multiple of `P` instead of rejecting it.
    pub pad: bool,
}

impl SchemeParams {
    pub fn new(kind: SchemeKind, field: Field, partitions: usize, collusion: usize, stragglers: usize) -> Self {
        SchemeParams {
            kind,
            field,
            partitions,
            collusion,
            stragglers,
            rows: partitions,
            inner: partitions,
            cols: partitions,
            pad: false,
        }
    }

    pub fn with_dims(mut self, rows: usize, inner: usize, cols: usize) -> Self {
        self.rows = rows;
        self.inner = inner;
        self.cols = cols;
        self
    }

    pub fn with_padding(mut self, pad: bool) -> Self {
        self.pad = pad;
        self
    }

    pub fn worker_count(&self) -> usize {
        self.kind
            .worker_count(self.partitions, self.collusion, self.stragglers)
    }

    /// Width of each `A_j` (and height of each `B_j`).
    pub fn block_inner(&self) -> usize {
        self.inner.div_ceil(self.partitions.max(1))
    }

    pub(crate) fn validate_common(&self) -> Result<()> {
        if self.partitions == 0 {
            return Err(Error::InvalidParams("P must be at least 1".into()));
        }
        if self.collusion == 0 {
            return Err(Error::InvalidParams("X must be at least 1".into()));
        }
        if self.kind != SchemeKind::FlexRedundant && self.stragglers != 0 {
            return Err(Error::InvalidParams(format!(
                "the {} scheme has no straggler tolerance (S must be 0)",
                self.kind
            )));
        }
        if self.rows == 0 || self.inner == 0 || self.cols == 0 {
            return Err(Error::InvalidParams("matrix dimensions must be positive".into()));
        }
        if self.inner % self.partitions != 0 && !self.pad {
            return Err(Error::PartitionError(format!(
                "P={} does not divide s={} (enable padding to zero-pad)",
                self.partitions, self.inner
            )));
        }
        Ok(())
    }

    /// Splits `A` into `P` column blocks and `B` into `P` row blocks.
    pub fn partition(&self, a: &FieldMatrix, b: &FieldMatrix) -> Result<(Vec<FieldMatrix>, Vec<FieldMatrix>)> {
        self.field.check_same(a.field())?;
        self.field.check_same(b.field())?;
        if a.shape() != (self.rows, self.inner) || b.shape() != (self.inner, self.cols) {
            return Err(Error::DimensionMismatch(format!(
                "expected A {}x{} and B {}x{}, got A {}x{} and B {}x{}",
                self.rows,
                self.inner,
                self.inner,
                self.cols,
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        let width = self.block_inner();
        let padded = width * self.partitions;
        if padded != self.inner && !self.pad {
            return Err(Error::PartitionError(format!(
                "P={} does not divide s={}",
                self.partitions, self.inner
            )));
        }
        let (a, b) = if padded != self.inner {
            (a.pad_columns(padded), b.pad_rows(padded))
        } else {
            (a.clone(), b.clone())
        };
        let a_blocks = (0..self.partitions)
            .map(|j| a.column_block(j * width, width))
            .collect();
        let b_blocks = (0..self.partitions)
            .map(|j| b.row_block(j * width, width))
            .collect();
        Ok((a_blocks, b_blocks))
    }
}

/// The pair of encoded matrices sent to one worker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Share {
    pub a: FieldMatrix,
    pub b: FieldMatrix,
}

impl Share {
    /// What an honest worker returns.
    pub fn compute(&self) -> Result<FieldMatrix> {
        self.a.mul(&self.b)
    }
}

/// One share pair per worker, indexed by worker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareSet {
    shares: Vec<Share>,
}

impl ShareSet {
    pub fn new(shares: Vec<Share>) -> Result<Self> {
        if let Some(first) = shares.first() {
            let (sa, sb) = (first.a.shape(), first.b.shape());
            if shares.iter().any(|s| s.a.shape() != sa || s.b.shape() != sb) {
                return Err(Error::DimensionMismatch("share blocks differ in shape".into()));
            }
        }
        Ok(ShareSet { shares })
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn get(&self, worker: usize) -> Option<&Share> {
        self.shares.get(worker)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Share> {
        self.shares.iter()
    }

    /// Responses from the listed workers.
    pub fn respond(&self, workers: impl IntoIterator<Item = usize>) -> Result<ResponseSet> {
        let mut out = ResponseSet::new(self.len());
        for w in workers {
            let share = self
                .shares
                .get(w)
                .ok_or_else(|| Error::InvalidParams(format!("no worker {w}")))?;
            out.insert(w, share.compute()?)?;
        }
        Ok(out)
    }

    /// Responses from every worker.
    pub fn respond_all(&self) -> Result<ResponseSet> {
        self.respond(0..self.len())
    }
}

/// Worker responses received so far; absent workers are stragglers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResponseSet {
    workers: usize,
    responses: BTreeMap<usize, FieldMatrix>,
}

impl ResponseSet {
    pub fn new(workers: usize) -> Self {
        ResponseSet {
            workers,
            responses: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, worker: usize, response: FieldMatrix) -> Result<()> {
        if worker >= self.workers {
            return Err(Error::InvalidParams(format!(
                "worker {worker} out of range for {} workers",
                self.workers
            )));
        }
        if let Some((_, first)) = self.responses.iter().next() {
            if first.shape() != response.shape() {
                return Err(Error::DimensionMismatch("responses differ in shape".into()));
            }
        }
        self.responses.insert(worker, response);
        Ok(())
    }

    /// Keeps only the listed workers.
    pub fn restrict(&self, keep: &[usize]) -> ResponseSet {
        ResponseSet {
            workers: self.workers,
            responses: self
                .responses
                .iter()
                .filter(|(w, _)| keep.contains(w))
                .map(|(w, r)| (*w, r.clone()))
                .collect(),
        }
    }

    pub fn worker_count(&self) -> usize {
        self.workers
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    pub fn contains(&self, worker: usize) -> bool {
        self.responses.contains_key(&worker)
    }

    pub fn get(&self, worker: usize) -> Option<&FieldMatrix> {
        self.responses.get(&worker)
    }

    /// Received worker indices, ascending.
    pub fn received(&self) -> Vec<usize> {
        self.responses.keys().copied().collect()
    }

    pub fn missing(&self) -> Vec<usize> {
        (0..self.workers).filter(|w| !self.contains(*w)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &FieldMatrix)> {
        self.responses.iter().map(|(w, r)| (*w, r))
    }
}

/// The uniformly random blocks `R_1..R_k` (shaped like `A_j`) and `S_1..S_k`
/// (shaped like `B_j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Randomness {
    pub r: Vec<FieldMatrix>,
    pub s: Vec<FieldMatrix>,
}

impl Randomness {
    pub fn draw(params: &SchemeParams, count: usize, rng: &mut dyn RngCore) -> Self {
        let w = params.block_inner();
        let f = &params.field;
        Randomness {
            r: (0..count)
                .map(|_| FieldMatrix::random(f, params.rows, w, rng))
                .collect(),
            s: (0..count)
                .map(|_| FieldMatrix::random(f, w, params.cols, rng))
                .collect(),
        }
    }

    pub fn zeros(params: &SchemeParams, count: usize) -> Self {
        let w = params.block_inner();
        let f = &params.field;
        Randomness {
            r: vec![FieldMatrix::zeros(f, params.rows, w); count],
            s: vec![FieldMatrix::zeros(f, w, params.cols); count],
        }
    }

    pub(crate) fn check(&self, params: &SchemeParams, count: usize) -> Result<()> {
        let w = params.block_inner();
        let ok = self.r.len() == count
            && self.s.len() == count
            && self.r.iter().all(|m| m.shape() == (params.rows, w) && m.field() == &params.field)
            && self.s.iter().all(|m| m.shape() == (w, params.cols) && m.field() == &params.field);
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "expected {count} random blocks of each kind"
            )))
        }
    }
}

/// How a decode was carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodePath {
    /// A linear combination over the support of the decoding vector, all of
    /// which responded.
    DirectSupport,
    /// Missing support responses were recovered by interpolating `h(x)`.
    Interpolation,
    /// Every worker was needed and used.
    FullSum,
}

impl DecodePath {
    pub fn name(self) -> &'static str {
        match self {
            DecodePath::DirectSupport => "direct-support",
            DecodePath::Interpolation => "interpolation",
            DecodePath::FullSum => "full-sum",
        }
    }
}

impl fmt::Display for DecodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecodePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [DecodePath::DirectSupport, DecodePath::Interpolation, DecodePath::FullSum]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown decode path '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub product: FieldMatrix,
    pub path: DecodePath,
}

/// Common interface of the implemented constructions.
pub trait Scheme: Send + Sync {
    fn params(&self) -> &SchemeParams;

    fn worker_count(&self) -> usize {
        self.params().worker_count()
    }

    /// Number of random blocks drawn for each of `A` and `B`.
    fn randomness_blocks(&self) -> usize;

    /// Encodes with explicitly supplied randomness.
    fn encode_with(&self, a: &FieldMatrix, b: &FieldMatrix, randomness: &Randomness) -> Result<ShareSet>;

    fn encode(&self, a: &FieldMatrix, b: &FieldMatrix, rng: &mut dyn RngCore) -> Result<ShareSet> {
        let randomness = Randomness::draw(self.params(), self.randomness_blocks(), rng);
        self.encode_with(a, b, &randomness)
    }

    fn decode(&self, responses: &ResponseSet) -> Result<Decoded>;

    /// Generator matrices of the codes spanned by the random parts of the `A`
    /// and `B` encodings (each `randomness_blocks() x N`).
    fn security_codes(&self) -> (FieldMatrix, FieldMatrix);

    /// Number `R` such that any `R` responses decode.
    fn recovery_threshold(&self) -> usize;

    /// Size of the smallest specific response set that decodes.
    fn minimal_recovery_size(&self) -> usize;
}

/// Builds the scheme named by `params.kind`. `alpha` and `zero_set` only apply
/// to the flex constructions.
pub fn build_scheme(
    params: SchemeParams,
    alpha: Option<Vec<FieldElement>>,
    zero_set: Option<Vec<usize>>,
) -> Result<Box<dyn Scheme>> {
    match params.kind {
        SchemeKind::Flex | SchemeKind::FlexRedundant => {
            Ok(Box::new(FlexScheme::new(params, alpha, zero_set)?))
        }
        SchemeKind::Dft => {
            reject_flex_options(&alpha, &zero_set)?;
            Ok(Box::new(DftScheme::new(params)?))
        }
        SchemeKind::Binary => {
            reject_flex_options(&alpha, &zero_set)?;
            Ok(Box::new(BinaryScheme::new(params)?))
        }
    }
}

fn reject_flex_options(alpha: &Option<Vec<FieldElement>>, zero_set: &Option<Vec<usize>>) -> Result<()> {
    if alpha.is_some() || zero_set.as_ref().is_some_and(|z| !z.is_empty()) {
        return Err(Error::InvalidParams(
            "evaluation points and zero sets only apply to flex schemes".into(),
        ));
    }
    Ok(())
}

/// The smallest field the scheme can run over with `N` workers: GF(2) for the
/// binary scheme, the smallest `q` with `N | q - 1` for DFT, and the smallest
/// prime `q >= N` for the flex schemes.
pub fn default_field(kind: SchemeKind, workers: usize) -> Result<Field> {
    match kind {
        SchemeKind::Binary => Field::new(2, 1, None),
        SchemeKind::Dft => {
            let n = workers as u64;
            (n + 1..=crate::field::MAX_ORDER)
                .step_by(n.max(1) as usize)
                .find(|&q| crate::field::prime_power(q).is_some())
                .ok_or(Error::FieldTooLarge { order: n + 1 })
                .and_then(Field::with_order)
        }
        SchemeKind::Flex | SchemeKind::FlexRedundant => {
            crate::field::smallest_field_of_size_at_least(workers as u64, true)
        }
    }
}

/// `sum_e C_e x^e` for integer exponents (negative ones invert `x`).
pub(crate) fn eval_terms(field: &Field, terms: &[(i64, &FieldMatrix)], x: &FieldElement) -> Result<FieldMatrix> {
    let (rows, cols) = terms
        .first()
        .map(|(_, m)| m.shape())
        .ok_or_else(|| Error::InvalidParams("no terms to evaluate".into()))?;
    let mut acc = FieldMatrix::zeros(field, rows, cols);
    for (e, c) in terms {
        acc.add_scaled(&x.pow(*e)?, c)?;
    }
    Ok(acc)
}

/// `sum_i w_i H_i` over the listed workers.
pub(crate) fn weighted_sum<'a>(
    field: &Field,
    shape: (usize, usize),
    items: impl IntoIterator<Item = (&'a FieldElement, &'a FieldMatrix)>,
) -> Result<FieldMatrix> {
    let mut acc = FieldMatrix::zeros(field, shape.0, shape.1);
    for (w, h) in items {
        acc.add_scaled(w, h)?;
    }
    Ok(acc)
}

pub(crate) fn powers_matrix(field: &Field, alpha: &[FieldElement], exponents: impl Iterator<Item = i64>) -> Result<FieldMatrix> {
    let exps: Vec<i64> = exponents.collect();
    let mut entries = Vec::with_capacity(exps.len() * alpha.len());
    for &e in &exps {
        for a in alpha {
            entries.push(a.pow(e)?);
        }
    }
    FieldMatrix::new(field, exps.len(), alpha.len(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in SchemeKind::ALL {
            assert_eq!(k.name().parse::<SchemeKind>().unwrap(), k);
        }
        assert!("matdot".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn worker_counts() {
        assert_eq!(SchemeKind::Flex.worker_count(2, 1, 0), 4);
        assert_eq!(SchemeKind::FlexRedundant.worker_count(2, 1, 1), 6);
        assert_eq!(SchemeKind::FlexRedundant.worker_count(1, 1, 1), 4);
        assert_eq!(SchemeKind::Binary.worker_count(4, 1, 0), 6);
    }

    #[test]
    fn default_fields() {
        assert_eq!(default_field(SchemeKind::Flex, 6).unwrap().order(), 7);
        assert_eq!(default_field(SchemeKind::Dft, 4).unwrap().order(), 5);
        assert_eq!(default_field(SchemeKind::Dft, 6).unwrap().order(), 7);
        assert_eq!(default_field(SchemeKind::Dft, 7).unwrap().order(), 8);
        assert_eq!(default_field(SchemeKind::Binary, 4).unwrap().order(), 2);
    }

    #[test]
    fn partition_rules() {
        let f = Field::with_order(7).unwrap();
        let params = SchemeParams::new(SchemeKind::Flex, f.clone(), 2, 1, 0).with_dims(2, 3, 2);
        assert!(matches!(params.validate_common(), Err(Error::PartitionError(_))));
        let a = FieldMatrix::from_values(&f, 2, 3, &[1, 2, 3, 4, 5, 6]).unwrap();
        let b = FieldMatrix::from_values(&f, 3, 2, &[1, 0, 0, 1, 1, 1]).unwrap();
        assert!(matches!(params.partition(&a, &b), Err(Error::PartitionError(_))));
        let padded = params.with_padding(true);
        let (ab, bb) = padded.partition(&a, &b).unwrap();
        assert_eq!(ab.len(), 2);
        assert_eq!(ab[1].values(), &[3, 0, 6, 0]);
        assert_eq!(bb[1].values(), &[1, 1, 0, 0]);
        let sum = ab[0].mul(&bb[0]).unwrap().add(&ab[1].mul(&bb[1]).unwrap()).unwrap();
        assert_eq!(sum, a.mul(&b).unwrap());
    }
}
