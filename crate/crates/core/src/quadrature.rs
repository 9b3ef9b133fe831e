//! Adaptive Gauss-Kronrod (7/15) quadrature for matrix-valued integrands.

use crate::algebra::{pairwise_sum_matrices, CMatrix};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Piece {
    a: f64,
    b: f64,
    value: CMatrix,
    err: f64,
}

fn kronrod<F>(f: &F, a: f64, b: f64) -> Result<Piece>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc.scale(WGK[7].into());
    let mut g = fc.scale(WG[3].into());
    for i in 0..7 {
        let x = h * XGK[i];
        let (f1, f2) = (f(c - x)?, f(c + x)?);
        let s = &f1 + &f2;
        k.axpy(WGK[i].into(), &s);
        if i % 2 == 1 {
            g.axpy(WG[i / 2].into(), &s);
        }
    }
    let value = k.scale(h.into());
    let err = (&value - &g.scale(h.into())).max_abs();
    Ok(Piece { a, b, value, err })
}

/// Integral of `f` over [a, b] to absolute tolerance `tol` (entrywise),
/// bisecting the worst subinterval until the summed error estimate is below
/// `tol` or `max_pieces` subintervals are in use.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64, max_pieces: usize) -> Result<(CMatrix, f64)>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    let mut pieces = vec![kronrod(&f, a, b)?];
    loop {
        let total: f64 = pieces.iter().map(|p| p.err).sum();
        if total <= tol {
            break;
        }
        if pieces.len() >= max_pieces {
            return Err(Error::Quadrature(total));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        pieces.push(kronrod(&f, p.a, mid)?);
        pieces.push(kronrod(&f, mid, p.b)?);
    }
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    let dim = pieces[0].value.dim();
    let values: Vec<CMatrix> = pieces.iter().map(|p| p.value.clone()).collect();
    let err = pieces.iter().map(|p| p.err).sum();
    Ok((pairwise_sum_matrices(&values, dim), err))
}
