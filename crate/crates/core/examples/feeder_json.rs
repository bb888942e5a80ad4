//! Builds a small feeder in code, writes it as JSON, reads it back and lists
//! validation diagnostics.

use gridflow::model::{
    parse_feeder, serialize_feeder, validate_feeder, Branch, FeederModel, Load, Matrix3,
};
use num_complex::Complex64;

fn main() -> gridflow::Result<()> {
    let z = Matrix3::self_mutual(Complex64::new(0.02, 0.08), Complex64::new(0.005, 0.02));
    let feeder = FeederModel::new(3, 0)
        .with_branch(Branch::series(0, 1, z))
        .with_branch(Branch::series(1, 2, z))
        .with_load(Load::wye(2, [Complex64::new(0.05, 0.02); 3]));

    let text = serialize_feeder(&feeder);
    println!("{} bytes of JSON", text.len());
    let back = parse_feeder(&text)?;
    assert_eq!(back, feeder);

    // an asymmetric impedance is accepted with a warning
    let mut skewed = feeder.clone();
    skewed.branches[0].z[(0, 1)] *= 2.0;
    for d in validate_feeder(&skewed) {
        println!("{d}");
    }
    Ok(())
}
