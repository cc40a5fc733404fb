//! Reed-Solomon codes, their duals, star products and the lightest dual codeword
//! with a prescribed zero set.
//!
//! Run with `cargo run --example reed_solomon_duals`.

use sdmm::codes::{dual_column_multipliers, min_weight_dual_codeword, star_product_code, support, GrsCode};
use sdmm::{Field, Result};

fn main() -> Result<()> {
    let f = Field::with_order(7)?;
    let alpha: Vec<_> = f.elements().into_iter().take(6).collect();

    let rs = GrsCode::reed_solomon(&alpha, 3)?;
    let dual = rs.dual()?;
    println!("RS_3 over GF(7) at 0..5 has dual GRS_{} with multipliers {:?}",
        dual.dimension(),
        dual.column_multipliers().iter().map(|v| v.value()).collect::<Vec<_>>());
    println!("omega_i = 1 / prod (alpha_i - alpha_j): {:?}",
        dual_column_multipliers(&alpha)?.iter().map(|v| v.value()).collect::<Vec<_>>());

    let star = star_product_code(&GrsCode::reed_solomon(&alpha, 2)?, &GrsCode::reed_solomon(&alpha, 3)?)?;
    println!("RS_2 * RS_3 = RS_{}", star.dimension());
    println!("RS_3 is MDS: {}", rs.is_mds()?);

    // A dual codeword of RS_3 vanishing on workers 4 and 5 has weight exactly 4.
    let lambda = min_weight_dual_codeword(&alpha, 3, &[4, 5])?;
    println!("lambda = {:?}, support {:?}", &lambda.iter().map(|v| v.value()).collect::<Vec<_>>(), support(&lambda));
    assert!(rs.dual()?.contains(&lambda)?);
    Ok(())
}
