//! Adaptive Simpson quadrature.

/// Default absolute tolerance for one indicatrix arc.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 30;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The interval is first split into `panels` pieces so that periodic
/// integrands over a full turn are not mistaken for flat ones.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let panel_tol = tol / panels as f64;
    let mut total = 0.0;
    let mut comp = 0.0;
    for k in 0..panels {
        let lo = a + h * k as f64;
        let hi = if k + 1 == panels { b } else { lo + h };
        let fa = f(lo);
        let fb = f(hi);
        let m = 0.5 * (lo + hi);
        let fm = f(m);
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        let part = simpson(f, lo, hi, fa, fm, fb, whole, panel_tol, MAX_DEPTH);
        // Kahan summation; long sweeps add many panels
        let y = part - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || libm::fabs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(&|x: f64| x * x * x, 0.0, 2.0, 1e-12, 1);
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn periodic_full_turn() {
        let v = integrate(&|t: f64| 1.0 / (2.0 + libm::cos(t)), 0.0, core::f64::consts::TAU, 1e-12, 8);
        let exact = core::f64::consts::TAU / libm::sqrt(3.0);
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn reversed_interval_is_negative() {
        let a = integrate(&libm::exp, 0.0, 1.0, 1e-12, 2);
        let b = integrate(&libm::exp, 1.0, 0.0, 1e-12, 2);
        assert!((a + b).abs() < 1e-14);
    }
}
