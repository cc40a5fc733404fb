//! Security checks: the MDS test on the randomness codes and an exhaustive
//! mutual-information audit, including a deliberately broken scheme.
//!
//! Run with `cargo run --release --example security_audit`.

use sdmm::schemes::{build_scheme, exhaustive_security_audit, verify_mds_security, SabotagedScheme, SchemeKind, SchemeParams};
use sdmm::{Field, Result};

fn main() -> Result<()> {
    for (kind, q, p, x) in [(SchemeKind::Flex, 3, 1, 1), (SchemeKind::Binary, 2, 2, 1), (SchemeKind::Flex, 5, 1, 2)] {
        let params = SchemeParams::new(kind, Field::with_order(q)?, p, x, 0).with_dims(1, p, 1);
        let scheme = build_scheme(params, None, None)?;
        let mds = verify_mds_security(scheme.as_ref())?;
        println!("{kind} GF({q}) P={p} X={x}: MDS security codes {}", mds.passed());

        let audit = exhaustive_security_audit(scheme.as_ref(), x)?;
        println!("  {} states, {} coalitions, exact zero leakage: {}", audit.states, audit.coalitions.len(), audit.secure());

        let broken = SabotagedScheme::new(scheme.as_ref());
        let leak = exhaustive_security_audit(&broken, x)?;
        let (who, mi) = leak.worst().expect("coalitions exist");
        println!("  without randomness, workers {who:?} learn {:.3} bits", mi.bits);
    }
    Ok(())
}
