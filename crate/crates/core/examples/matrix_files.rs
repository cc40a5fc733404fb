//! Matrix files, scheme config files and report records, driven through the
//! same entry point as the `sdmm` binary.
//!
//! Run with `cargo run --example matrix_files`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdmm::records::parse_records;
use sdmm::schemes::{SchemeConfig, SchemeKind};
use sdmm::{Field, FieldMatrix, Result};

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("sdmm-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let field = Field::new(2, 3, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = FieldMatrix::random(&field, 2, 4, &mut rng);
    let b = FieldMatrix::random(&field, 4, 2, &mut rng);
    std::fs::write(dir.join("a.txt"), a.to_string())?;
    std::fs::write(dir.join("b.txt"), b.to_string())?;
    println!("a.txt:\n{a}");

    let config = SchemeConfig::new(SchemeKind::FlexRedundant, 2, 1, 1).with_field(field).with_seed(5);
    config.save(dir.join("scheme.conf"))?;
    println!("scheme.conf:\n{}", config.to_config_string());

    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let outcome = sdmm::cli::run([
        "sdmm", "run", "--config", &path("scheme.conf"), "--a", &path("a.txt"), "--b", &path("b.txt"),
        "--stragglers", "0", "--verify", "--format", "records", "--out", &path("ab.txt"),
    ]);
    println!("exit code {}\n{}", outcome.code, outcome.stdout);
    let report = &parse_records(&outcome.stdout)?[0];
    println!("decode path from the record: {}", report.get("path").unwrap_or("?"));
    let product = FieldMatrix::parse(&std::fs::read_to_string(dir.join("ab.txt"))?)?;
    assert_eq!(product, a.mul(&b)?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
