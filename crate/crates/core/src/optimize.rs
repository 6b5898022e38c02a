// Small 1-D root finding and banded linear algebra used by the geodesic code.

/// Root of a monotone `f` on `[lo, hi]` where `f(lo)` and `f(hi)` have
/// opposite signs (or one is zero). Bisects until the bracket stops shrinking
/// in floating point or `max_iter` is reached.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, max_iter: usize) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves a tridiagonal system with the Thomas algorithm.
/// `sub[i]` couples rows `i + 1` and `i`; `sup[i]` couples rows `i` and `i + 1`.
/// Returns `None` on a zero pivot.
pub(crate) fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Option<alloc::vec::Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Some(alloc::vec::Vec::new());
    }
    let mut c = alloc::vec![0.0; n];
    let mut d = alloc::vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return None;
    }
    c[0] = if n > 1 { sup[0] / beta } else { 0.0 };
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - sub[i - 1] * c[i - 1];
        if beta == 0.0 || !beta.is_finite() {
            return None;
        }
        c[i] = if i + 1 < n { sup[i] / beta } else { 0.0 };
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 200);
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-15);
        let r = bisect(|x| 2.0 - x * x, 0.0, 2.0, 200);
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn thomas_matches_dense() {
        // [[4,1,0],[2,5,1],[0,3,6]] x = [1,2,3]
        let x = solve_tridiagonal(&[2.0, 3.0], &[4.0, 5.0, 6.0], &[1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap();
        let r0 = 4.0 * x[0] + x[1] - 1.0;
        let r1 = 2.0 * x[0] + 5.0 * x[1] + x[2] - 2.0;
        let r2 = 3.0 * x[1] + 6.0 * x[2] - 3.0;
        assert!(r0.abs() < 1e-14 && r1.abs() < 1e-14 && r2.abs() < 1e-14);
    }
}
