//! Runs the command-line verification suite on a saved potential.

use jacobi_scatter::algebra::{c64, CMatrix};
use jacobi_scatter::potential::Potential;

fn main() -> jacobi_scatter::Result<()> {
    let v = Potential::new(1, vec![(0, CMatrix::scalar(1, c64(0.7, 0.0))), (2, CMatrix::scalar(1, c64(0.4, 0.0)))])?;
    let path = std::env::temp_dir().join("jacobi_scatter_verify_example.json");
    v.save(&path)?;
    let code = jacobi_scatter::cli::main_with_args(["jacobi-scatter", "verify", "--window", "20", "--potential", path.to_str().unwrap()]);
    println!("exit code {code}");
    Ok(())
}
