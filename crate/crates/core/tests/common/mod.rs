//! First-quantized reference model: particles carry an external mode and an
//! internal state, the many-body vector is (anti)symmetrized explicitly and the
//! internal degrees of freedom are traced out.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use snft::interference::ParticleStatistics;
use snft::perm::symmetric_group;
use snft::CMatrix;

pub fn random_internal_states<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> CMatrix {
    let mut phi = CMatrix::from_fn(k, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    for mut col in phi.column_iter_mut() {
        let norm = col.norm();
        col /= Complex64::new(norm, 0.0);
    }
    phi
}

/// `S[α][β] = ⟨φ_α|φ_β⟩` for the columns of `phi`.
pub fn gram(phi: &CMatrix) -> CMatrix {
    phi.adjoint() * phi
}

fn pow(b: usize, e: usize) -> usize {
    b.pow(e as u32)
}

/// Reduced external density matrix on `(ℂ^M)^{⊗N}`.
pub fn external_state(
    m: usize,
    input: &[usize],
    phi: &CMatrix,
    stats: ParticleStatistics,
) -> CMatrix {
    let n = input.len();
    let k = phi.nrows();
    let ext = pow(m, n);
    let int = pow(k, n);
    let mut psi = vec![Complex64::new(0.0, 0.0); ext * int];
    for s in symmetric_group(n).unwrap().elements() {
        let eps = stats.epsilon(s);
        let particle: Vec<usize> = s.images0().to_vec();
        for kappa in 0..int {
            let mut amp = Complex64::new(eps, 0.0);
            let mut x = 0;
            for (pos, &beta) in particle.iter().enumerate() {
                let k_pos = kappa / pow(k, n - 1 - pos) % k;
                amp *= phi[(k_pos, beta)];
                x = x * m + input[beta];
            }
            psi[x * int + kappa] += amp;
        }
    }
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let mut rho = CMatrix::zeros(ext, ext);
    for x in 0..ext {
        for y in 0..ext {
            let mut acc = Complex64::new(0.0, 0.0);
            for kappa in 0..int {
                acc += psi[x * int + kappa] * psi[y * int + kappa].conj();
            }
            rho[(x, y)] = acc / norm;
        }
    }
    rho
}

pub fn tensor_power(u: &CMatrix, n: usize) -> CMatrix {
    let mut w = CMatrix::identity(1, 1);
    for _ in 0..n {
        w = w.kronecker(u);
    }
    w
}

/// `Tr(U^{⊗N} ϱ U^{†⊗N} P_o)` with `P_o` the projector on the distinct
/// arrangements of the output modes.
pub fn event_probability(u: &CMatrix, rho: &CMatrix, n: usize, output: &[usize]) -> f64 {
    let m = u.nrows();
    let w = tensor_power(u, n);
    let evolved = &w * rho * w.adjoint();
    let mut sorted = output.to_vec();
    sorted.sort_unstable();
    let mut total = 0.0;
    for x in 0..pow(m, n) {
        let mut modes: Vec<usize> = (0..n).map(|pos| x / pow(m, n - 1 - pos) % m).collect();
        modes.sort_unstable();
        if modes == sorted {
            total += evolved[(x, x)].re;
        }
    }
    total
}

pub fn purity(rho: &CMatrix) -> f64 {
    (rho * rho).trace().re
}

pub fn max_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
