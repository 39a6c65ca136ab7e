//! Internal derivative-free and quasi-Newton minimizers.
//!
//! Small, allocation-light routines sized for the smooth low-dimensional
//! objectives in this crate (chain analyzing power, count-rate ratios).
//! Everything minimizes; callers negate to maximize.

/// Result of a minimization run.
#[derive(Debug, Clone)]
pub(crate) struct MinResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: u64,
}

/// Nelder-Mead with adaptive coefficients.
pub(crate) fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    initial_step: f64,
    f_tol: f64,
    max_evals: u64,
) -> MinResult {
    let n = x0.len();
    let mut evals = 0u64;
    let mut eval = |x: &[f64], evals: &mut u64| {
        *evals += 1;
        f(x)
    };

    // Adaptive coefficients (Gao & Han) help in higher dimensions.
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += initial_step * if v[i].abs() > 1.0 { v[i].abs() } else { 1.0 };
        simplex.push(v);
    }
    let mut fvals: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    while evals < max_evals {
        // Order the simplex by function value.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| fvals[i].partial_cmp(&fvals[j]).unwrap());
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        if (fvals[worst] - fvals[best]).abs() <= f_tol * (1.0 + fvals[best].abs()) {
            break;
        }

        // Centroid of all points but the worst.
        let mut centroid = vec![0.0; n];
        for &i in order.iter().take(n) {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / nf;
            }
        }

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let f_reflect = eval(&reflect, &mut evals);

        if f_reflect < fvals[best] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + beta * alpha * (c - w))
                .collect();
            let f_expand = eval(&expand, &mut evals);
            if f_expand < f_reflect {
                simplex[worst] = expand;
                fvals[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                fvals[worst] = f_reflect;
            }
        } else if f_reflect < fvals[second_worst] {
            simplex[worst] = reflect;
            fvals[worst] = f_reflect;
        } else {
            let (toward, f_toward) = if f_reflect < fvals[worst] {
                (reflect.clone(), f_reflect)
            } else {
                (simplex[worst].clone(), fvals[worst])
            };
            let contract: Vec<f64> = centroid
                .iter()
                .zip(&toward)
                .map(|(c, t)| c + gamma * (t - c))
                .collect();
            let f_contract = eval(&contract, &mut evals);
            if f_contract < f_toward {
                simplex[worst] = contract;
                fvals[worst] = f_contract;
            } else {
                // Shrink toward the best vertex.
                let best_point = simplex[best].clone();
                for i in 0..=n {
                    if i == best {
                        continue;
                    }
                    for (v, b) in simplex[i].iter_mut().zip(&best_point) {
                        *v = b + delta * (*v - b);
                    }
                    fvals[i] = eval(&simplex[i].clone(), &mut evals);
                }
            }
        }
    }

    let (mut bi, mut bf) = (0, fvals[0]);
    for (i, &v) in fvals.iter().enumerate() {
        if v < bf {
            bi = i;
            bf = v;
        }
    }
    MinResult { x: simplex[bi].clone(), fx: bf, evals }
}

/// Central finite-difference gradient.
pub(crate) fn fd_gradient<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], h: f64) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// BFGS with backtracking line search and finite-difference gradients.
pub(crate) fn bfgs<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    grad_step: f64,
    grad_tol: f64,
    max_iters: usize,
) -> MinResult {
    let n = x0.len();
    let mut evals = 0u64;
    let mut x = x0.to_vec();
    let mut fx = {
        evals += 1;
        f(&x)
    };
    // Inverse Hessian approximation, row major.
    let mut h_inv = vec![0.0; n * n];
    for i in 0..n {
        h_inv[i * n + i] = 1.0;
    }
    let mut g = fd_gradient(&mut f, &x, grad_step);
    evals += 2 * n as u64;

    for _ in 0..max_iters {
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < grad_tol {
            break;
        }
        // Search direction d = -H_inv g.
        let mut d = vec![0.0; n];
        for i in 0..n {
            d[i] = -(0..n).map(|j| h_inv[i * n + j] * g[j]).sum::<f64>();
        }
        let slope: f64 = d.iter().zip(&g).map(|(a, b)| a * b).sum();
        if slope >= 0.0 {
            // Reset to steepest descent when curvature information degrades.
            for (i, di) in d.iter_mut().enumerate() {
                *di = -g[i];
            }
            for i in 0..n {
                for j in 0..n {
                    h_inv[i * n + j] = if i == j { 1.0 } else { 0.0 };
                }
            }
        }
        let slope: f64 = d.iter().zip(&g).map(|(a, b)| a * b).sum();

        // Backtracking Armijo line search.
        let mut t = 1.0;
        let mut x_new = x.clone();
        let mut f_new = fx;
        let mut ok = false;
        for _ in 0..40 {
            for i in 0..n {
                x_new[i] = x[i] + t * d[i];
            }
            evals += 1;
            f_new = f(&x_new);
            if f_new <= fx + 1e-4 * t * slope {
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if !ok || (fx - f_new).abs() <= f64::EPSILON * (1.0 + fx.abs()) {
            break;
        }

        let g_new = fd_gradient(&mut f, &x_new, grad_step);
        evals += 2 * n as u64;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-14 {
            // Standard BFGS inverse update.
            let rho = 1.0 / sy;
            let mut hy = vec![0.0; n];
            for i in 0..n {
                hy[i] = (0..n).map(|j| h_inv[i * n + j] * y[j]).sum();
            }
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for j in 0..n {
                    h_inv[i * n + j] += rho * rho * (sy + yhy) * s[i] * s[j]
                        - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        x = x_new;
        fx = f_new;
        g = g_new;
    }
    MinResult { x, fx, evals }
}

/// Golden-section minimum of a unimodal function on [a, b].
pub(crate) fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    x_tol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rosenbrock(x: &[f64]) -> f64 {
        let mut s = 0.0;
        for w in x.windows(2) {
            s += 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2);
        }
        s
    }

    #[test]
    fn nelder_mead_minimizes_rosenbrock() {
        let r = nelder_mead(rosenbrock, &[-1.2, 1.0], 0.1, 1e-14, 20_000);
        assert_abs_diff_eq!(r.x[0], 1.0, epsilon = 1e-5);
        assert_abs_diff_eq!(r.x[1], 1.0, epsilon = 1e-5);
    }

    #[test]
    fn bfgs_polishes_quadratic() {
        let r = bfgs(
            |x| (x[0] - 3.0).powi(2) + 4.0 * (x[1] + 1.0).powi(2) + 0.5 * x[0] * x[1],
            &[0.0, 0.0],
            1e-6,
            1e-10,
            200,
        );
        // Stationary point of the full quadratic.
        let g = fd_gradient(
            &mut |x: &[f64]| (x[0] - 3.0).powi(2) + 4.0 * (x[1] + 1.0).powi(2) + 0.5 * x[0] * x[1],
            &r.x,
            1e-6,
        );
        assert!(g.iter().all(|v| v.abs() < 1e-7));
    }

    #[test]
    fn golden_section_finds_minimum() {
        let (x, _) = golden_section_min(|x| (x - 1.7).powi(2), 0.0, 3.0, 1e-12);
        assert_abs_diff_eq!(x, 1.7, epsilon = 1e-10);
    }
}
