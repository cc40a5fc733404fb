//! The DFT scheme evaluates at the N-th roots of unity and decodes by averaging
//! all responses. It needs N | q - 1.
//!
//! Run with `cargo run --example dft_scheme`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdmm::schemes::{DftScheme, Scheme, SchemeKind, SchemeParams};
use sdmm::{Field, FieldMatrix, Result};

fn main() -> Result<()> {
    let field = Field::with_order(13)?;
    let scheme = DftScheme::new(SchemeParams::new(SchemeKind::Dft, field.clone(), 2, 2, 0).with_dims(2, 4, 2))?;
    println!("root {} generates {:?}",
        scheme.root(),
        scheme.evaluation_points().iter().map(|a| a.value()).collect::<Vec<_>>());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = FieldMatrix::random(&field, 2, 4, &mut rng);
    let b = FieldMatrix::random(&field, 4, 2, &mut rng);
    let product = scheme.decode(&scheme.encode(&a, &b, &mut rng)?.respond_all()?)?.product;
    assert_eq!(product, a.mul(&b)?);
    println!("AB =\n{product}");

    match DftScheme::new(SchemeParams::new(SchemeKind::Dft, Field::with_order(7)?, 2, 1, 0)) {
        Err(e) => println!("over GF(7): {e}"),
        Ok(_) => unreachable!("GF(7) has no 4th root of unity"),
    }
    Ok(())
}
