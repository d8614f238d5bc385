use num_complex::Complex64;

/// Last two points of an outward Numerov run.
#[derive(Debug, Clone, Copy)]
pub struct NumerovEnd {
    pub r: [f64; 2],
    pub psi: [Complex64; 2],
}

/// Integrates `psi'' = f(R) psi` outward on `r0 + i h`, `i = 0..=n`.
///
/// The first two values come from `psi(r0)`, `psi'(r0)` and a fourth-order
/// Taylor step using `f`, `f'`, `f''`.
#[allow(clippy::too_many_arguments)]
pub fn integrate_outward<F>(
    f: F,
    df: impl Fn(f64) -> f64,
    d2f: impl Fn(f64) -> f64,
    r0: f64,
    h: f64,
    n: usize,
    psi0: Complex64,
    dpsi0: Complex64,
) -> NumerovEnd
where
    F: Fn(f64) -> f64,
{
    assert!(n >= 1);
    let (f0, f1, f2) = (f(r0), df(r0), d2f(r0));
    let d2 = f0 * psi0;
    let d3 = f1 * psi0 + f0 * dpsi0;
    let d4 = (f2 + f0 * f0) * psi0 + 2.0 * f1 * dpsi0;
    let psi1 = psi0 + h * dpsi0 + h * h / 2.0 * d2 + h.powi(3) / 6.0 * d3 + h.powi(4) / 24.0 * d4;
    if n == 1 {
        return NumerovEnd { r: [r0, r0 + h], psi: [psi0, psi1] };
    }

    let w = h * h / 12.0;
    let mut c_prev = 1.0 - w * f0;
    let mut c_cur = 1.0 - w * f(r0 + h);
    let mut phi_prev = c_prev * psi0;
    let mut phi_cur = c_cur * psi1;
    for i in 1..n {
        let r_next = r0 + h * (i + 1) as f64;
        let c_next = 1.0 - w * f(r_next);
        let phi_next = (12.0 - 10.0 * c_cur) / c_cur * phi_cur - phi_prev;
        phi_prev = phi_cur;
        phi_cur = phi_next;
        c_prev = c_cur;
        c_cur = c_next;
    }
    NumerovEnd {
        r: [r0 + h * (n - 1) as f64, r0 + h * n as f64],
        psi: [phi_prev / c_prev, phi_cur / c_cur],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_oscillator() {
        // psi'' = -k^2 psi, psi = e^{ikR}
        let k = 0.7;
        let end = integrate_outward(|_| -k * k, |_| 0.0, |_| 0.0, 0.0, 0.01, 2000, Complex64::new(1.0, 0.0), Complex64::new(0.0, k));
        for (r, p) in end.r.iter().zip(end.psi) {
            let exact = Complex64::new(0.0, k * r).exp();
            assert!((p - exact).norm() < 1e-8, "{p} vs {exact}");
        }
    }

    #[test]
    fn fourth_order() {
        // Self-convergence on psi'' = -(1 + 6/R^2) psi over [1, 11]
        let f = |r: f64| -(1.0 + 6.0 / (r * r));
        let run = |h: f64| {
            let n = (10.0 / h).round() as usize;
            let e = integrate_outward(f, |r| 12.0 / r.powi(3), |r| -36.0 / r.powi(4), 1.0, h, n, 1.0.into(), Complex64::new(0.0, 1.0));
            e.psi[1]
        };
        let (a, b, c) = (run(0.04), run(0.02), run(0.01));
        let order = ((a - b).norm() / (b - c).norm()).log2();
        assert!(order > 3.5, "{order}");
    }
}
