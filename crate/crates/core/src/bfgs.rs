//! Dense BFGS minimiser with forward-difference gradients and Armijo
//! backtracking.

/// Stopping and line-search settings.
#[derive(Debug, Clone, Copy)]
pub struct BfgsOptions {
    pub max_iters: usize,
    /// Stop once the gradient's Euclidean norm falls below this.
    pub grad_tol: f64,
    /// Base finite-difference step; coordinate `i` uses `fd_step * max(1, |x_i|)`.
    pub fd_step: f64,
    /// Armijo sufficient-decrease constant.
    pub c1: f64,
    pub max_backtracks: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            max_iters: 100,
            grad_tol: 1e-6,
            fd_step: f64::EPSILON.sqrt(),
            c1: 1e-4,
            max_backtracks: 40,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// The objective returned NaN or an infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonFinite;

fn eval<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64]) -> Result<f64, NonFinite> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NonFinite)
    }
}

/// Forward differences around `x` given `fx = f(x)`.
pub fn forward_gradient<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x: &[f64],
    fx: f64,
    fd_step: f64,
) -> Result<Vec<f64>, NonFinite> {
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = fd_step * x[i].abs().max(1.0);
        probe[i] = x[i] + h;
        let step = probe[i] - x[i];
        grad.push((eval(f, &probe)? - fx) / step);
        probe[i] = x[i];
    }
    Ok(grad)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimise `f` from `x0`. The returned point never has a larger objective
/// than `x0`: only steps passing the Armijo test are taken.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &BfgsOptions,
) -> Result<BfgsOutcome, NonFinite> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = eval(&mut f, &x)?;
    if n == 0 {
        return Ok(BfgsOutcome {
            x,
            f: fx,
            iterations: 0,
            converged: true,
        });
    }
    let mut grad = forward_gradient(&mut f, &x, fx, opts.fd_step)?;
    // Inverse Hessian approximation, row-major.
    let mut hinv = identity(n);
    let mut scaled = false;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iters {
        if dot(&grad, &grad).sqrt() < opts.grad_tol {
            converged = true;
            break;
        }
        let mut dir = mat_vec(&hinv, &grad, n);
        dir.iter_mut().for_each(|d| *d = -*d);
        let mut slope = dot(&grad, &dir);
        if slope >= 0.0 {
            // Lost positive definiteness; restart from steepest descent.
            hinv = identity(n);
            dir = grad.iter().map(|g| -g).collect();
            slope = -dot(&grad, &grad);
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..opts.max_backtracks {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + alpha * di).collect();
            let ft = eval(&mut f, &trial)?;
            if ft <= fx + opts.c1 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            break;
        };
        iterations += 1;

        let g_new = forward_gradient(&mut f, &x_new, f_new, opts.fd_step)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            if !scaled {
                let gamma = sy / dot(&y, &y);
                hinv.iter_mut().for_each(|h| *h *= gamma);
                scaled = true;
            }
            bfgs_update(&mut hinv, &s, &y, sy, n);
        }
        x = x_new;
        fx = f_new;
        grad = g_new;
    }
    if !converged && dot(&grad, &grad).sqrt() < opts.grad_tol {
        converged = true;
    }
    Ok(BfgsOutcome {
        x,
        f: fx,
        iterations,
        converged,
    })
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn mat_vec(m: &[f64], v: &[f64], n: usize) -> Vec<f64> {
    (0..n).map(|i| dot(&m[i * n..(i + 1) * n], v)).collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`, expanded so it costs O(n²).
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64, n: usize) {
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y, n);
    let yhy = dot(y, &hy);
    let factor = (1.0 + rho * yhy) * rho;
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += factor * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}
