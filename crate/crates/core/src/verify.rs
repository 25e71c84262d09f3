//! Self-check suite over the invariants of the library.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::fourier::{dagger, fast_ft, ft, ift, GroupFunction};
use crate::interference::{
    all_events, all_mode_lists, amplitude_function, counting_sector, fourier_unitary,
    random_unitary, summed_immanant_modulus, ParticleStatistics, ScatteringSetup, StatisticsModel,
};
use crate::irreps::IrrepTable;
use crate::perm::{factorial, symmetric_group, Permutation};
use crate::suppression::{analyze, Analyzer};

const TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub n: usize,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} n={} {}: {}", self.n, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Function with independent standard normal real and imaginary parts.
pub fn random_group_function<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GroupFunction> {
    let order = factorial(n);
    let values = (0..order)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    GroupFunction::from_values(n, values)
}

fn max_dev(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn check(name: &'static str, dev: f64, tol: f64) -> CheckResult {
    CheckResult {
        name,
        passed: dev <= tol,
        detail: format!("max deviation {dev:.3e} (tol {tol:.0e})"),
    }
}

/// Runs every check at degree `n`. Checks that scale badly are skipped above
/// a per-check limit.
pub fn run_suite(n: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = symmetric_group(n)?;
    let table = IrrepTable::new(n)?;
    let mut checks = Vec::new();

    let bad = group
        .elements()
        .iter()
        .filter(|s| Permutation::unrank(s.rank(), n).ok().as_ref() != Some(s))
        .count();
    checks.push(CheckResult {
        name: "rank round-trip",
        passed: bad == 0,
        detail: format!("{bad} mismatches"),
    });

    let elems = group.elements();
    let pairs: Vec<(usize, usize)> = if n <= 4 {
        (0..elems.len())
            .flat_map(|a| (0..elems.len()).map(move |b| (a, b)))
            .collect()
    } else {
        (0..200)
            .map(|_| (rng.gen_range(0..elems.len()), rng.gen_range(0..elems.len())))
            .collect()
    };
    let mut hom = 0.0f64;
    let mut orth = 0.0f64;
    for (idx, rep) in table.irreps().iter().enumerate() {
        let id = DMatrix::identity(rep.dim(), rep.dim());
        for &(a, b) in &pairs {
            let (sa, sb) = (&elems[a], &elems[b]);
            let lhs = table.matrix_at(idx, &(sa * sb))?;
            let rhs = table.matrix_at(idx, sa)? * table.matrix_at(idx, sb)?;
            hom = hom.max(max_dev(&lhs, &rhs));
            let m = table.matrix_at(idx, sa)?;
            orth = orth.max(max_dev(&(&m * m.transpose()), &id));
        }
    }
    checks.push(check("irrep homomorphism", hom, TOL));
    checks.push(check("irrep orthogonality", orth, TOL));

    let dim_sum: usize = table
        .partitions()
        .iter()
        .map(|p| p.dimension().pow(2))
        .sum();
    checks.push(CheckResult {
        name: "dimension sum",
        passed: dim_sum == factorial(n),
        detail: format!("sum d^2 = {dim_sum}, n! = {}", factorial(n)),
    });

    let ct = table.characters();
    let mut char_bad = 0;
    for a in 0..ct.partitions().len() {
        for b in 0..ct.partitions().len() {
            let s: i64 = (0..ct.classes().len())
                .map(|c| ct.class_size(c) as i64 * ct.value(a, c) * ct.value(b, c))
                .sum();
            let expected = if a == b { factorial(n) as i64 } else { 0 };
            if s != expected {
                char_bad += 1;
            }
        }
    }
    checks.push(CheckResult {
        name: "character orthogonality",
        passed: char_bad == 0,
        detail: format!("{char_bad} failing pairs"),
    });

    let restr = table.restriction_deviation();
    checks.push(check("restriction branching", restr, TOL));

    let trials = if n <= 5 { 10 } else { 2 };
    let (mut inv, mut pars, mut conv, mut fast) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let f = random_group_function(n, &mut rng)?;
        let g = random_group_function(n, &mut rng)?;
        let fh = ft(&f, &table)?;
        inv = inv.max(ift(&fh, &table)?.max_abs_diff(&f));
        let spectral: f64 = fh
            .blocks()
            .iter()
            .map(|(p, b)| p.dimension() as f64 * (dagger(b) * b).trace().re)
            .sum::<f64>()
            / factorial(n) as f64;
        pars = pars.max((spectral - f.norm_sqr()).abs() / f.norm_sqr());
        if n <= 6 {
            let lhs = ft(&f.convolve(&g)?, &table)?;
            let rhs = fh.mul(&ft(&g, &table)?)?;
            conv = conv.max(lhs.max_abs_diff(&rhs) / (1.0 + f.norm_sqr() * g.norm_sqr()).sqrt());
        }
        fast = fast.max(fast_ft(&f, &table)?.max_abs_diff(&fh));
    }
    checks.push(check("fourier inversion", inv, TOL));
    checks.push(check("parseval", pars, TOL));
    if n <= 6 {
        checks.push(check("convolution theorem", conv, TOL));
    }
    checks.push(check("fast transform agreement", fast, 1e-8));

    if n <= 6 {
        let u = random_unitary(n, &mut rng);
        let input: Vec<usize> = (0..n).collect();
        let output: Vec<usize> = (0..n).map(|k| (k * 7 + 1) % n).collect();
        let setup = ScatteringSetup::new(u, input, output)?;
        let a_hat = ft(&amplitude_function(&setup), &table)?;
        let mut dev = 0.0f64;
        for (p, b) in a_hat.blocks() {
            let tr = (dagger(b) * b).trace().re;
            let imm = summed_immanant_modulus(setup.scattering_matrix(), p)?;
            let scaled = p.dimension() as f64 / factorial(n) as f64 * imm;
            dev = dev.max((tr - scaled).abs());
        }
        checks.push(check("immanant identity", dev, TOL));
    }

    if n <= 4 {
        let m = n;
        let u = random_unitary(m, &mut rng);
        let input: Vec<usize> = (0..n).map(|k| k % m).collect();
        let base = ScatteringSetup::new(u, input, vec![0; n])?;
        let mut total = 0.0;
        for ev in all_events(n, m) {
            let s = base.with_event(&ev)?;
            let model = StatisticsModel::Boson;
            total += crate::interference::probability(&s, &model, &table)?;
        }
        checks.push(check("boson normalization", (total - 1.0).abs(), TOL));
        let sector = ParticleStatistics::Boson.sector(n);
        let p = counting_sector(&base, &sector, &table)?;
        checks.push(CheckResult {
            name: "bosonic sector admissible",
            passed: p.admissible,
            detail: format!("probability {:.6}", p.probability),
        });
    }

    if n <= 6 {
        let analyzer = Analyzer::new(n)?;
        let lists = all_mode_lists(n, n);
        let mut failures = 0;
        let mut count = 0;
        for _ in 0..20 {
            let i = lists[rng.gen_range(0..lists.len())].clone();
            let o = lists[rng.gen_range(0..lists.len())].clone();
            let setup = ScatteringSetup::new(fourier_unitary(n), i, o)?;
            count += 1;
            if analyze(&setup, &analyzer).is_err() {
                failures += 1;
            }
        }
        checks.push(CheckResult {
            name: "suppression soundness",
            passed: failures == 0,
            detail: format!("{failures} of {count} random Fourier pairs inconsistent"),
        });
    }

    Ok(SuiteReport { n, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_small() {
        for n in 1..=4 {
            let r = run_suite(n, 7).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}
