//! The flexible-field scheme with the minimum number of workers, N = P + 2X,
//! over any field with at least N elements.
//!
//! Run with `cargo run --example flex_no_redundancy`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdmm::schemes::{FlexScheme, Scheme, SchemeKind, SchemeParams};
use sdmm::{Field, FieldMatrix, Result};

fn main() -> Result<()> {
    let (p, x) = (3, 2);
    // N = 7 workers over GF(7): the field is exactly as large as the worker count.
    let field = Field::with_order(7)?;
    let params = SchemeParams::new(SchemeKind::Flex, field.clone(), p, x, 0).with_dims(4, 6, 5);
    let scheme = FlexScheme::new(params, None, None)?;
    println!("workers: {}", scheme.worker_count());
    println!("decoding vector: {:?}", scheme.decoding_vector().iter().map(|v| v.value()).collect::<Vec<_>>());
    println!("interference matrix:\n{}", scheme.interference_matrix());

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let a = FieldMatrix::random(&field, 4, 6, &mut rng);
    let b = FieldMatrix::random(&field, 6, 5, &mut rng);
    let shares = scheme.encode(&a, &b, &mut rng)?;
    let decoded = scheme.decode(&shares.respond_all()?)?;
    assert_eq!(decoded.product, a.mul(&b)?);
    println!("decoded via {} and matches A * B", decoded.path);
    Ok(())
}
