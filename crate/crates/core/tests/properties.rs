use itertools::Itertools;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sdmm::codes::GrsCode;
use sdmm::field::{is_prime, smallest_field_of_size_at_least};
use sdmm::schemes::{build_scheme, FlexScheme, ResponseSet, Scheme, SchemeConfig, SchemeKind, SchemeParams};
use sdmm::simulator::{run_experiment, random_inputs, ExperimentConfig, WorkerBehavior, WorkerPool};
use sdmm::{Error, Field, FieldMatrix};

fn prime_at_least(n: usize) -> Field {
    let q = (n.max(2) as u64..).find(|&q| is_prime(q)).unwrap();
    Field::with_order(q).unwrap()
}

fn kind_strategy() -> impl Strategy<Value = SchemeKind> {
    prop_oneof![
        Just(SchemeKind::Flex),
        Just(SchemeKind::FlexRedundant),
        Just(SchemeKind::Dft),
        Just(SchemeKind::Binary),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Decoding all responses returns the exact product for every scheme and
    /// any valid parameters.
    #[test]
    fn every_scheme_decodes_exactly(
        kind in kind_strategy(),
        p in 1usize..=4,
        x in 1usize..=3,
        s in 0usize..=2,
        t in 1usize..=3,
        r in 1usize..=3,
        blocks in 1usize..=2,
        seed in any::<u64>(),
        extension in any::<bool>(),
    ) {
        let (p, x, s) = match kind {
            SchemeKind::Binary => (2 * p, 1, 0),
            SchemeKind::FlexRedundant => (p, x, s.max(1)),
            _ => (p, x, 0),
        };
        let mut config = SchemeConfig::new(kind, p, x, s).with_dims(t, p * blocks, r).with_seed(seed);
        if extension && matches!(kind, SchemeKind::Flex | SchemeKind::FlexRedundant) {
            // Characteristic-2 fields exercise the polynomial-basis arithmetic.
            let n = config.worker_count() as u64;
            config = config.with_field(smallest_field_of_size_at_least(n, false).unwrap());
        }
        let scheme = config.build().unwrap();
        let (a, b) = random_inputs(&config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let responses = scheme.encode(&a, &b, &mut rng).unwrap().respond_all().unwrap();
        prop_assert_eq!(scheme.decode(&responses).unwrap().product, a.mul(&b).unwrap());
    }

    /// Entrywise, the responses of a flex scheme form a codeword of
    /// RS_min(2P+2X-1, N) over the evaluation points.
    #[test]
    fn responses_lie_in_star_product_code(
        redundant in any::<bool>(),
        p in 1usize..=3,
        x in 1usize..=2,
        s in 1usize..=2,
        seed in any::<u64>(),
    ) {
        let (kind, s) = if redundant { (SchemeKind::FlexRedundant, s) } else { (SchemeKind::Flex, 0) };
        let n = kind.worker_count(p, x, s);
        let params = SchemeParams::new(kind, prime_at_least(n), p, x, s).with_dims(2, p, 2);
        let scheme = FlexScheme::new(params, None, None).unwrap();
        let f = scheme.params().field.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FieldMatrix::random(&f, 2, p, &mut rng);
        let b = FieldMatrix::random(&f, p, 2, &mut rng);
        let responses = scheme.encode(&a, &b, &mut rng).unwrap().respond_all().unwrap();
        let code = GrsCode::reed_solomon(scheme.evaluation_points(), (2 * p + 2 * x - 1).min(n)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let word: Vec<_> = (0..n).map(|w| responses.get(w).unwrap().get(i, j)).collect();
                prop_assert!(code.contains(&word).unwrap());
            }
        }
    }

    /// Any arrival order of the same responding set gives the same report.
    #[test]
    fn collection_order_does_not_matter(seed in any::<u64>(), shuffle in any::<u64>()) {
        let config = ExperimentConfig::new(SchemeConfig::new(SchemeKind::FlexRedundant, 2, 1, 2).with_dims(2, 4, 2).with_seed(seed));
        let n = config.scheme.worker_count();
        let (a, b) = random_inputs(&config.scheme).unwrap();
        let straggler = (seed % n as u64) as usize;
        let baseline = run_experiment(&config, &a, &b, &WorkerPool::with_stragglers(n, &[straggler]).unwrap()).unwrap();
        let mut ranks: Vec<u32> = (0..n as u32).collect();
        ranks.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let mut pool = WorkerPool::responsive(n);
        for (w, rank) in ranks.into_iter().enumerate() {
            pool.set(w, if w == straggler { WorkerBehavior::Straggler } else { WorkerBehavior::Delayed(rank) }).unwrap();
        }
        let shuffled = run_experiment(&config, &a, &b, &pool).unwrap();
        prop_assert!(baseline.passed());
        prop_assert_eq!(&shuffled.product, &baseline.product);
        prop_assert_eq!(shuffled.to_record(false), baseline.to_record(false));
    }
}

/// Every response subset of a redundant scheme: at least 2P+2X-1 decodes,
/// fewer than P+2X fails, and in between it decodes iff it covers the support.
#[test]
fn threshold_exactness() {
    for (p, x, s) in [(1, 1, 1), (1, 1, 2), (2, 1, 2), (2, 2, 1), (1, 2, 2), (3, 1, 1)] {
        let n = 2 * p + 2 * x + s - 1;
        let params = SchemeParams::new(SchemeKind::FlexRedundant, prime_at_least(n), p, x, s).with_dims(2, p, 1);
        let scheme = FlexScheme::new(params, None, None).unwrap();
        let f = scheme.params().field.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = FieldMatrix::random(&f, 2, p, &mut rng);
        let b = FieldMatrix::random(&f, p, 1, &mut rng);
        let expect = a.mul(&b).unwrap();
        let all = scheme.encode(&a, &b, &mut rng).unwrap().respond_all().unwrap();
        let support = scheme.support().to_vec();
        for size in 0..=n {
            for subset in (0..n).combinations(size) {
                let result = scheme.decode(&all.restrict(&subset));
                let covers = support.iter().all(|w| subset.contains(w));
                let should = size >= 2 * p + 2 * x - 1 || covers;
                match result {
                    Ok(d) => {
                        assert!(should, "P={p} X={x} S={s}: {subset:?} decoded unexpectedly");
                        assert_eq!(d.product, expect, "P={p} X={x} S={s}: {subset:?}");
                    }
                    Err(Error::NotEnoughResponses(_)) => assert!(!should, "P={p} X={x} S={s}: {subset:?} failed"),
                    Err(e) => panic!("unexpected error {e}"),
                }
                if size < p + 2 * x {
                    assert!(!should);
                }
            }
        }
    }
}

/// A custom zero set moves the fast path to the complementary workers.
#[test]
fn configurable_zero_set() {
    let (p, x, s) = (2, 1, 1);
    let n = 2 * p + 2 * x + s - 1;
    let params = SchemeParams::new(SchemeKind::FlexRedundant, prime_at_least(n), p, x, s);
    let scheme = build_scheme(params.clone(), None, Some(vec![0, 1])).unwrap();
    let f = params.field.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = FieldMatrix::random(&f, 2, 2, &mut rng);
    let b = FieldMatrix::random(&f, 2, 2, &mut rng);
    let all = scheme.encode(&a, &b, &mut rng).unwrap().respond_all().unwrap();
    let fast = all.restrict(&[2, 3, 4, 5]);
    let out = scheme.decode(&fast).unwrap();
    assert_eq!(out.product, a.mul(&b).unwrap());
    assert_eq!(out.path.name(), "direct-support");
    assert!(scheme.decode(&all.restrict(&[0, 1, 2, 3])).is_err());
}

#[test]
fn response_sets_ignore_insertion_order() {
    let f = Field::with_order(7).unwrap();
    let mats: Vec<FieldMatrix> = (0..4).map(|v| FieldMatrix::from_values(&f, 1, 1, &[v]).unwrap()).collect();
    let mut forward = ResponseSet::new(4);
    let mut backward = ResponseSet::new(4);
    for w in 0..4 {
        forward.insert(w, mats[w].clone()).unwrap();
        backward.insert(3 - w, mats[3 - w].clone()).unwrap();
    }
    assert_eq!(forward, backward);
}

#[test]
fn padding_is_opt_in() {
    let config = SchemeConfig::new(SchemeKind::Flex, 2, 1, 0).with_dims(2, 3, 2);
    assert!(matches!(config.build(), Err(Error::PartitionError(_))));
    let mut padded = config.clone();
    padded.pad = true;
    let scheme: Box<dyn Scheme> = padded.build().unwrap();
    let (a, b) = random_inputs(&padded).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let responses = scheme.encode(&a, &b, &mut rng).unwrap().respond_all().unwrap();
    assert_eq!(scheme.decode(&responses).unwrap().product, a.mul(&b).unwrap());
}
