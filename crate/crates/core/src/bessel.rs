//! Integer-order Bessel functions J_n(x) by Miller's backward recurrence.

/// J_0(x), ..., J_nmax(x) for x >= 0.
///
/// Backward recurrence from a start index well above max(nmax, x), rescaled on
/// overflow and normalized with J_0 + 2 sum_k J_{2k} = 1.
pub fn bessel_j_table(x: f64, nmax: usize) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "bessel_j_table needs finite x >= 0");
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = (nmax as f64).max(x);
    let mut start = (top + 20.0 + (50.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    vals[start] = cur;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        vals[k - 1] = cur;
        if cur.abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
            next *= 1e-250;
            cur *= 1e-250;
        }
    }
    let even: Vec<f64> = vals.iter().step_by(2).skip(1).copied().collect();
    let norm = vals[0] + 2.0 * crate::algebra::pairwise_sum(&even);
    for (o, v) in out.iter_mut().zip(vals.iter()) {
        *o = v / norm;
    }
    out
}

/// J_n(x) for integer n and real x.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let j = bessel_j_table(x.abs(), m)[m];
    let mut sign = 1.0;
    if n < 0 && m % 2 == 1 {
        sign = -sign;
    }
    if x < 0.0 && m % 2 == 1 {
        sign = -sign;
    }
    sign * j
}
