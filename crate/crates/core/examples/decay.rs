//! Dispersive decay sweep: sup of the evolution kernel and its t^{-1/3} fit.

use jacobi_scatter::algebra::{c64, CMatrix};
use jacobi_scatter::evolution::Evolution;
use jacobi_scatter::potential::Potential;

fn main() -> jacobi_scatter::Result<()> {
    let v = Potential::new(1, vec![(-1, CMatrix::scalar(1, c64(0.4, 0.0))), (1, CMatrix::scalar(1, c64(0.4, 0.0)))])?;
    let times: Vec<f64> = (0..10).map(|i| 10.0 * 30f64.powf(i as f64 / 9.0)).collect();
    let fit = Evolution::new(&v).decay_fit(&times, 700)?;
    println!("{:>8} {:>12} {:>12}", "t", "sup", "c (1+t)^-1/3");
    for (t, s) in fit.times.iter().zip(&fit.sup_norms) {
        println!("{t:>8.2} {s:>12.6} {:>12.6}", fit.bound(*t));
    }
    println!("slope {:.3}, c_fit {:.4}, Wiener sup {:.4}", fit.slope.unwrap_or(f64::NAN), fit.c_fit, fit.wiener_sup);
    Ok(())
}
