//! One colluder over GF(2) with P + 2 workers. Summing all responses cancels
//! every random term when P is even.
//!
//! Run with `cargo run --example binary_field`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdmm::schemes::{BinaryScheme, Scheme, SchemeKind, SchemeParams};
use sdmm::{Field, FieldMatrix, Result};

fn main() -> Result<()> {
    let gf2 = Field::with_order(2)?;
    let scheme = BinaryScheme::new(SchemeParams::new(SchemeKind::Binary, gf2.clone(), 4, 1, 0).with_dims(3, 8, 3))?;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let a = FieldMatrix::random(&gf2, 3, 8, &mut rng);
    let b = FieldMatrix::random(&gf2, 8, 3, &mut rng);
    let shares = scheme.encode(&a, &b, &mut rng)?;
    for (i, share) in shares.iter().enumerate() {
        println!("worker {i} receives A-share {:?}", share.a.values());
    }
    let product = scheme.decode(&shares.respond_all()?)?.product;
    assert_eq!(product, a.mul(&b)?);
    println!("sum of all {} responses equals AB", scheme.worker_count());

    if let Err(e) = BinaryScheme::new(SchemeParams::new(SchemeKind::Binary, gf2, 3, 1, 0)) {
        println!("odd P is rejected: {e}");
    }
    Ok(())
}
