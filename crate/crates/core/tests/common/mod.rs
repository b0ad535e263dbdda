//! Test-side oracles that share no code with the library.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

fn zero(dim: usize) -> Matrix {
    vec![vec![Complex64::new(0.0, 0.0); dim]; dim]
}

/// Full `2^m × 2^m` matrix of a single-qubit gate on qubit `q`.
/// Basis index bit `j` is qubit `j`.
pub fn single_qubit(m: usize, q: usize, u: [[Complex64; 2]; 2]) -> Matrix {
    let dim = 1 << m;
    let mut out = zero(dim);
    for col in 0..dim {
        let b = (col >> q) & 1;
        for a in 0..2 {
            let row = (col & !(1 << q)) | (a << q);
            out[row][col] += u[a][b];
        }
    }
    out
}

pub fn cnot(m: usize, control: usize, target: usize) -> Matrix {
    let dim = 1 << m;
    let mut out = zero(dim);
    for col in 0..dim {
        let row = if (col >> control) & 1 == 1 { col ^ (1 << target) } else { col };
        out[row][col] = Complex64::new(1.0, 0.0);
    }
    out
}

pub fn hadamard() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// `exp(−iθZ/2)`.
pub fn rz(theta: f64) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -theta / 2.0), z],
        [z, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

/// `exp(−iθX/2)`.
pub fn rx(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

pub fn apply(mat: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    mat.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Gate-by-gate QAOA circuit: Hadamards, then per layer a CNOT–Rz(−γ)–CNOT
/// block per edge and Rx(2β) on every qubit.
pub fn gate_level_ansatz(
    m: usize,
    edges: &[(usize, usize)],
    gammas: &[f64],
    betas: &[f64],
) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << m];
    v[0] = Complex64::new(1.0, 0.0);
    for q in 0..m {
        v = apply(&single_qubit(m, q, hadamard()), &v);
    }
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        for &(a, b) in edges {
            v = apply(&cnot(m, a, b), &v);
            v = apply(&single_qubit(m, b, rz(-gamma)), &v);
            v = apply(&cnot(m, a, b), &v);
        }
        for q in 0..m {
            v = apply(&single_qubit(m, q, rx(2.0 * beta)), &v);
        }
    }
    v
}

/// Largest `|a_k − e^{iφ} b_k|` after aligning the global phase on the
/// overlap `⟨b|a⟩`.
pub fn max_deviation_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// Cut value by direct edge scan over a bit-packed coloring.
pub fn cut_of(edges: &[(usize, usize)], bits: u64) -> usize {
    edges
        .iter()
        .filter(|&&(u, v)| (bits >> u) & 1 != (bits >> v) & 1)
        .count()
}

/// Exhaustive maximum cut by listing all `2^n` colorings.
pub fn naive_max_cut(n: usize, edges: &[(usize, usize)]) -> usize {
    (0..1u64 << n).map(|b| cut_of(edges, b)).max().unwrap_or(0)
}

/// Best cut on the edges outside `V₀` when `V₀` is fixed: enumerate every
/// full coloring agreeing with `fixed` on `v0`.
pub fn naive_opt_rem(n: usize, edges: &[(usize, usize)], v0: &[usize], fixed: u64) -> usize {
    let in_v0 = |x: usize| v0.contains(&x);
    let rest: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(u, v)| !(in_v0(u) && in_v0(v)))
        .collect();
    let mask: u64 = v0.iter().map(|&x| 1u64 << x).sum();
    (0..1u64 << n)
        .filter(|b| b & mask == fixed & mask)
        .map(|b| cut_of(&rest, b))
        .max()
        .unwrap_or(0)
}
