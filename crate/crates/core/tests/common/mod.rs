//! Random test systems shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riccati_fem::linalg::{sym_eigen, Matrix};
use riccati_fem::riccati::CareProblem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

/// Random matrix shifted so its spectral abscissa lies in `[-2, -0.1]`.
pub fn random_stable(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut a = random(rng, n, n);
    let target = rng.gen_range(0.1..2.0);
    let abscissa = riccati_fem::linalg::real_schur(&a).unwrap().spectral_abscissa();
    for i in 0..n {
        a[(i, i)] -= abscissa + target;
    }
    a
}

pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let g = random(rng, n, n);
    let mut s = g.t_matmul(&g);
    for i in 0..n {
        s[(i, i)] += 0.5;
    }
    s.symmetrized()
}

/// Stable `A` with random `B`, `C`, `R` of size `n ≤ 8`.
pub fn random_lqr(rng: &mut ChaCha8Rng) -> CareProblem {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(1..=3);
    let p = rng.gen_range(1..=3);
    let a = random_stable(rng, n);
    let b = random(rng, n, m);
    let c = random(rng, p, n);
    let r = random_spd(rng, m);
    CareProblem::from_lqr(&a, &b, &c, &r).unwrap()
}

pub fn min_eigenvalue(s: &Matrix) -> f64 {
    sym_eigen(s).unwrap().values[0]
}

pub fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).frobenius_norm() / b.frobenius_norm().max(1e-300)
}
