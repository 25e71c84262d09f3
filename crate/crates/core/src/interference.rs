//! Transition amplitudes and counting statistics of non-interacting particles
//! scattered by a linear interferometer.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fourier::{dagger, ft, ift, GroupFunction, SpectralFunction};
use crate::irreps::IrrepTable;
use crate::partition::{gamas_admissible, Partition};
use crate::perm::{factorial, symmetric_group, Permutation, Subgroup, MAX_ENUMERATED_DEGREE};

pub type CMatrix = DMatrix<Complex64>;

/// Unitarity tolerance for matrices built inside the library.
pub const UNITARITY_TOL: f64 = 1e-10;

const NORM_FLOOR: f64 = 1e-14;
const PSD_TOL: f64 = 1e-10;

fn cz() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `max |U U† - I|` entrywise.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let prod = u * dagger(u);
    let id = CMatrix::identity(u.nrows(), u.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `⟨l|U|m⟩ = M^{-1/2} exp(2πi lm/M)`.
pub fn fourier_unitary(m: usize) -> CMatrix {
    let s = 1.0 / (m as f64).sqrt();
    CMatrix::from_fn(m, m, |l, k| {
        let phase = 2.0 * std::f64::consts::PI * ((l * k) % m) as f64 / m as f64;
        Complex64::from_polar(s, phase)
    })
}

pub fn identity_unitary(m: usize) -> CMatrix {
    CMatrix::identity(m, m)
}

/// Balanced beamsplitter `(1/√2)[[1, 1], [1, -1]]`.
pub fn beamsplitter() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[cr(s), cr(s), cr(s), cr(-s)])
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(m, m, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for k in 0..m {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            cr(1.0)
        };
        for i in 0..m {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Unitary, input and output mode lists and the derived scattering matrix
/// `A[α][β] = U[o_α][i_β]`.
#[derive(Clone, Debug)]
pub struct ScatteringSetup {
    unitary: CMatrix,
    input: Vec<usize>,
    output: Vec<usize>,
    a: CMatrix,
    stab_input: Subgroup,
    stab_output: Subgroup,
}

impl ScatteringSetup {
    pub fn new(unitary: CMatrix, input: Vec<usize>, output: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(unitary, input, output, UNITARITY_TOL)
    }

    pub fn with_tolerance(
        unitary: CMatrix,
        input: Vec<usize>,
        output: Vec<usize>,
        tol: f64,
    ) -> Result<Self> {
        let deviation = unitarity_deviation(&unitary);
        if !(deviation <= tol) {
            return Err(Error::NotUnitary { deviation });
        }
        Self::assemble(unitary, input, output)
    }

    fn assemble(unitary: CMatrix, input: Vec<usize>, output: Vec<usize>) -> Result<Self> {
        let m = unitary.nrows();
        let n = input.len();
        if n == 0 || n > MAX_ENUMERATED_DEGREE {
            return Err(Error::UnsupportedDegree {
                n,
                min: 1,
                max: MAX_ENUMERATED_DEGREE,
            });
        }
        if output.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: output.len(),
            });
        }
        if let Some(&bad) = input.iter().chain(&output).find(|&&x| x >= m) {
            return Err(Error::InvalidModes(format!("mode {bad} outside 0..{m}")));
        }
        let a = CMatrix::from_fn(n, n, |al, be| unitary[(output[al], input[be])]);
        let stab_input = Subgroup::stabilizer(&input);
        let stab_output = Subgroup::stabilizer(&output);
        Ok(ScatteringSetup {
            unitary,
            input,
            output,
            a,
            stab_input,
            stab_output,
        })
    }

    /// Same unitary and input with a different output mode list.
    pub fn with_output(&self, output: Vec<usize>) -> Result<Self> {
        Self::assemble(self.unitary.clone(), self.input.clone(), output)
    }

    pub fn with_event(&self, event: &OutputEvent) -> Result<Self> {
        if event.modes() != self.unitary.nrows() {
            return Err(Error::InvalidModes(format!(
                "event has {} modes, unitary has {}",
                event.modes(),
                self.unitary.nrows()
            )));
        }
        self.with_output(event.mode_list())
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn input(&self) -> &[usize] {
        &self.input
    }

    pub fn output(&self) -> &[usize] {
        &self.output
    }

    pub fn particles(&self) -> usize {
        self.input.len()
    }

    pub fn modes(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn scattering_matrix(&self) -> &CMatrix {
        &self.a
    }

    pub fn stab_input(&self) -> &Subgroup {
        &self.stab_input
    }

    pub fn stab_output(&self) -> &Subgroup {
        &self.stab_output
    }
}

/// Occupation numbers of the output modes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutputEvent {
    occupations: Vec<usize>,
}

impl OutputEvent {
    pub fn from_occupations(occupations: Vec<usize>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::InvalidModes("no modes".into()));
        }
        Ok(OutputEvent { occupations })
    }

    /// Event of a mode list over `m` modes.
    pub fn from_mode_list(modes: &[usize], m: usize) -> Result<Self> {
        let mut occupations = vec![0; m];
        for &x in modes {
            if x >= m {
                return Err(Error::InvalidModes(format!("mode {x} outside 0..{m}")));
            }
            occupations[x] += 1;
        }
        Self::from_occupations(occupations)
    }

    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    pub fn particles(&self) -> usize {
        self.occupations.iter().sum()
    }

    /// Canonical (sorted) mode list.
    pub fn mode_list(&self) -> Vec<usize> {
        self.occupations
            .iter()
            .enumerate()
            .flat_map(|(m, &k)| std::iter::repeat(m).take(k))
            .collect()
    }

    /// `Π_m n_m!`.
    pub fn stabilizer_order(&self) -> usize {
        self.occupations.iter().map(|&k| factorial(k)).product()
    }
}

/// Every sorted mode list of `n` particles in `m` modes, lexicographic.
pub fn all_mode_lists(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in start..m {
            cur.push(x);
            rec(x, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, n, &mut Vec::new(), &mut out);
    out
}

pub fn all_events(n: usize, m: usize) -> Vec<OutputEvent> {
    all_mode_lists(n, m)
        .iter()
        .map(|l| OutputEvent::from_mode_list(l, m).expect("modes in range"))
        .collect()
}

/// `a(σ) = Π_α A[α][σ(α)]`.
pub fn amplitude_function(setup: &ScatteringSetup) -> GroupFunction {
    let a = setup.scattering_matrix();
    GroupFunction::from_fn(setup.particles(), |s| {
        s.images0()
            .iter()
            .enumerate()
            .map(|(al, &be)| a[(al, be)])
            .product()
    })
    .expect("degree validated by the setup")
}

/// Amplitude function supplied by an arbitrary evolution that commutes with
/// particle permutations: `a(σ) = f(σ)`.
pub fn amplitude_from_fn(
    n: usize,
    f: impl FnMut(&Permutation) -> Complex64,
) -> Result<GroupFunction> {
    GroupFunction::from_fn(n, f)
}

fn check_square(a: &CMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::LengthMismatch {
            expected: a.nrows() * a.nrows(),
            found: a.len(),
        });
    }
    Ok(a.nrows())
}

fn product_term(a: &CMatrix, s: &Permutation) -> Complex64 {
    s.images0()
        .iter()
        .enumerate()
        .map(|(al, &be)| a[(al, be)])
        .product()
}

/// `imm^λ(A) = Σ_σ χ^λ(σ) Π_α A[α][σ(α)]`.
pub fn immanant(a: &CMatrix, p: &Partition) -> Result<Complex64> {
    let n = check_square(a)?;
    if p.size() != n {
        return Err(Error::ShapeMismatch {
            partition: p.to_string(),
            n,
        });
    }
    let ct = crate::irreps::character_table(n)?;
    let l = ct.partition_index(p)?;
    let mut acc = cz();
    for s in symmetric_group(n)?.elements() {
        let chi = ct.value(l, ct.class_index(&s.cycle_type()));
        if chi != 0 {
            acc += product_term(a, s) * chi as f64;
        }
    }
    Ok(acc)
}

/// Permanent by the definitional sum.
pub fn permanent(a: &CMatrix) -> Result<Complex64> {
    let n = check_square(a)?;
    Ok(symmetric_group(n)?
        .elements()
        .iter()
        .map(|s| product_term(a, s))
        .sum())
}

/// Permanent by Ryser's inclusion–exclusion formula.
pub fn permanent_ryser(a: &CMatrix) -> Result<Complex64> {
    let n = check_square(a)?;
    let mut total = cz();
    for mask in 1u64..(1u64 << n) {
        let mut prod = cr(1.0);
        for row in 0..n {
            let mut s = cz();
            for col in 0..n {
                if mask >> col & 1 == 1 {
                    s += a[(row, col)];
                }
            }
            prod *= s;
        }
        let sign = if (n - mask.count_ones() as usize) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        total += prod * sign;
    }
    Ok(total)
}

/// Determinant by the definitional sum.
pub fn determinant(a: &CMatrix) -> Result<Complex64> {
    let n = check_square(a)?;
    Ok(symmetric_group(n)?
        .elements()
        .iter()
        .map(|s| product_term(a, s) * s.sign() as f64)
        .sum())
}

/// `Σ_σ |imm^λ(A_σ)|²` with `A_σ` the row-permuted matrix.
pub fn summed_immanant_modulus(a: &CMatrix, p: &Partition) -> Result<f64> {
    let n = check_square(a)?;
    let mut total = 0.0;
    for s in symmetric_group(n)?.elements() {
        let rows = CMatrix::from_fn(n, n, |al, be| a[(s.images0()[al], be)]);
        total += immanant(&rows, p)?.norm_sqr();
    }
    Ok(total)
}

/// Fourier transform `â` of the amplitude function.
pub fn spectral_amplitude(setup: &ScatteringSetup, table: &IrrepTable) -> Result<SpectralFunction> {
    ft(&amplitude_function(setup), table)
}

/// `⟨o|U^{⊗N} P^λ|i⟩ = (d_λ/N!) Tr â(λ)`.
pub fn sector_amplitude(
    setup: &ScatteringSetup,
    p: &Partition,
    table: &IrrepTable,
) -> Result<Complex64> {
    let spec = spectral_amplitude(setup, table)?;
    let block = spec.block(p).ok_or_else(|| Error::ShapeMismatch {
        partition: p.to_string(),
        n: setup.particles(),
    })?;
    Ok(block.trace() * (p.dimension() as f64 / factorial(setup.particles()) as f64))
}

fn re_trace(m: &CMatrix) -> f64 {
    m.trace().re
}

fn check_table(setup: &ScatteringSetup, table: &IrrepTable) -> Result<()> {
    if setup.particles() != table.degree() {
        return Err(Error::DegreeMismatch {
            left: table.degree(),
            right: setup.particles(),
        });
    }
    Ok(())
}

fn stab_norm(setup: &ScatteringSetup) -> f64 {
    (setup.stab_input().order() * setup.stab_output().order()) as f64
}

/// Probability of the setup's output for the initial state `ĉ|i⟩`.
pub fn counting_superposition(
    setup: &ScatteringSetup,
    c: &GroupFunction,
    table: &IrrepTable,
) -> Result<f64> {
    check_table(setup, table)?;
    let a_hat = spectral_amplitude(setup, table)?;
    let c_hat = ft(c, table)?;
    let i_hat = ft(&GroupFunction::indicator(setup.stab_input())?, table)?;
    let mut num = cz();
    let mut den = cz();
    for (idx, p) in table.partitions().iter().enumerate() {
        let d = p.dimension() as f64;
        let a = a_hat.block_at(idx);
        let cc = dagger(c_hat.block_at(idx)) * c_hat.block_at(idx);
        num += (dagger(a) * &cc * a).trace() * d;
        den += (i_hat.block_at(idx) * &cc).trace() * d;
    }
    if den.norm() <= NORM_FLOOR {
        return Err(Error::VanishingNorm(den.norm()));
    }
    Ok((num / den).re / stab_norm(setup))
}

/// Result of a single-sector probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorProbability {
    pub probability: f64,
    /// False when the input cannot be projected onto the sector.
    pub admissible: bool,
}

/// Probability for the normalized state `R(σ) P^λ |i⟩`.
pub fn counting_sector(
    setup: &ScatteringSetup,
    p: &Partition,
    table: &IrrepTable,
) -> Result<SectorProbability> {
    check_table(setup, table)?;
    let idx = table.index_of(p)?;
    if !gamas_admissible(p, setup.input())? {
        return Ok(SectorProbability {
            probability: 0.0,
            admissible: false,
        });
    }
    let a_hat = spectral_amplitude(setup, table)?;
    let i_hat = ft(&GroupFunction::indicator(setup.stab_input())?, table)?;
    let a = a_hat.block_at(idx);
    let num = re_trace(&(dagger(a) * a));
    let den = re_trace(i_hat.block_at(idx));
    Ok(SectorProbability {
        probability: num / den / stab_norm(setup),
        admissible: true,
    })
}

/// `Tr[â(λ)†â(λ)]` for every sector.
pub fn sector_traces(
    setup: &ScatteringSetup,
    table: &IrrepTable,
) -> Result<BTreeMap<Partition, f64>> {
    check_table(setup, table)?;
    let a_hat = spectral_amplitude(setup, table)?;
    Ok(a_hat
        .blocks()
        .iter()
        .map(|(p, a)| (p.clone(), re_trace(&(dagger(a) * a))))
        .collect())
}

/// `perm(|A|²)/|stab(o)|`.
pub fn counting_distinguishable(setup: &ScatteringSetup) -> Result<f64> {
    let abs2 = setup.scattering_matrix().map(|z| cr(z.norm_sqr()));
    Ok(permanent(&abs2)?.re / setup.stab_output().order() as f64)
}

/// `(1/|stab(o)|) Σ_λ (d_λ/N!) Tr[â†â]`.
pub fn counting_distinguishable_spectral(
    setup: &ScatteringSetup,
    table: &IrrepTable,
) -> Result<f64> {
    let order = factorial(setup.particles()) as f64;
    let total: f64 = sector_traces(setup, table)?
        .iter()
        .map(|(p, t)| p.dimension() as f64 / order * t)
        .sum();
    Ok(total / setup.stab_output().order() as f64)
}

/// `[1/(|stab(o)||stab(i)|)] Σ_λ (d_λ/N!) Tr[â† ĵ â]`.
pub fn counting_partial(
    setup: &ScatteringSetup,
    j: &GroupFunction,
    table: &IrrepTable,
) -> Result<f64> {
    check_table(setup, table)?;
    let j_hat = ft(j, table)?;
    counting_partial_spectral(setup, &j_hat, table)
}

/// [`counting_partial`] with a precomputed `ĵ`.
pub fn counting_partial_spectral(
    setup: &ScatteringSetup,
    j_hat: &SpectralFunction,
    table: &IrrepTable,
) -> Result<f64> {
    check_table(setup, table)?;
    let a_hat = spectral_amplitude(setup, table)?;
    let order = factorial(setup.particles()) as f64;
    let mut total = cz();
    for (idx, p) in table.partitions().iter().enumerate() {
        let a = a_hat.block_at(idx);
        total += (dagger(a) * j_hat.block_at(idx) * a).trace() * (p.dimension() as f64 / order);
    }
    Ok(total.re / stab_norm(setup))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParticleStatistics {
    Boson,
    Fermion,
}

impl ParticleStatistics {
    pub fn epsilon(self, s: &Permutation) -> f64 {
        match self {
            ParticleStatistics::Boson => 1.0,
            ParticleStatistics::Fermion => s.sign() as f64,
        }
    }

    /// `c` such that `ĉ|i⟩` is the (anti)symmetrized input.
    pub fn symmetrizer(self, n: usize) -> Result<GroupFunction> {
        GroupFunction::from_fn(n, |s| cr(self.epsilon(s)))
    }

    pub fn sector(self, n: usize) -> Partition {
        match self {
            ParticleStatistics::Boson => Partition::trivial(n),
            ParticleStatistics::Fermion => Partition::sign(n),
        }
    }
}

/// Internal-state description of partially distinguishable particles.
#[derive(Clone, Debug)]
pub enum DistinguishabilityModel {
    /// Gram matrix `S[α][β] = ⟨φ_α|φ_β⟩`.
    Gram(CMatrix),
    /// Orthonormal internal basis labels.
    Labels(Vec<usize>),
    /// A partial distinguishability function given directly.
    Explicit(GroupFunction),
}

/// Symmetrizes a Gram matrix and clips eigenvalues in `[-1e-10, 0)`.
pub fn sanitize_gram(s: &CMatrix) -> Result<CMatrix> {
    let n = check_square(s).map_err(|_| Error::InvalidGram("not square".into()))?;
    let h = (s + dagger(s)) * cr(0.5);
    for k in 0..n {
        if (h[(k, k)] - cr(1.0)).norm() > 1e-8 {
            return Err(Error::InvalidGram(format!(
                "diagonal entry {k} is {}",
                h[(k, k)]
            )));
        }
    }
    let eig = h.clone().symmetric_eigen();
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::InvalidGram(format!("negative eigenvalue {min:e}")));
    }
    if min >= 0.0 {
        return Ok(h);
    }
    let clipped = eig.eigenvalues.map(|x| cr(x.max(0.0)));
    let v = &eig.eigenvectors;
    Ok(v * CMatrix::from_diagonal(&clipped) * dagger(v))
}

/// `J(σ)` of the internal state.
pub fn j_internal(
    model: &DistinguishabilityModel,
    stats: ParticleStatistics,
    n: usize,
) -> Result<GroupFunction> {
    match model {
        DistinguishabilityModel::Gram(s) => {
            if s.nrows() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: s.nrows(),
                });
            }
            let s = sanitize_gram(s)?;
            // J(σ) = ε(σ) Π_α S[σ(α)][α]
            GroupFunction::from_fn(n, |p| {
                let prod: Complex64 = p
                    .images0()
                    .iter()
                    .enumerate()
                    .map(|(al, &sa)| s[(sa, al)])
                    .product();
                prod * stats.epsilon(p)
            })
        }
        DistinguishabilityModel::Labels(labels) => {
            if labels.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: labels.len(),
                });
            }
            let h = Subgroup::stabilizer(labels);
            GroupFunction::from_fn(n, |p| {
                if h.contains(p) {
                    cr(stats.epsilon(p))
                } else {
                    cz()
                }
            })
        }
        DistinguishabilityModel::Explicit(j) => {
            if j.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: j.degree(),
                });
            }
            Ok(j.clone())
        }
    }
}

/// Partial distinguishability function `j = I_i * J * I_i / (I_i, J)`; an
/// explicit `j` is only rescaled to `j(id) = 1`.
pub fn j_from_model(
    model: &DistinguishabilityModel,
    stats: ParticleStatistics,
    input: &[usize],
) -> Result<GroupFunction> {
    let n = input.len();
    let j_int = j_internal(model, stats, n)?;
    if let DistinguishabilityModel::Explicit(_) = model {
        let norm = j_int.get(&Permutation::identity(n));
        if norm.norm() <= NORM_FLOOR {
            return Err(Error::VanishingNorm(norm.norm()));
        }
        return Ok(j_int.scale(1.0 / norm));
    }
    let ind = GroupFunction::indicator(&Subgroup::stabilizer(input))?;
    let norm = ind.scalar_product(&j_int)?;
    if norm.norm() <= NORM_FLOOR {
        return Err(Error::VanishingNorm(norm.norm()));
    }
    Ok(ind.convolve(&j_int)?.convolve(&ind)?.scale(1.0 / norm))
}

/// Sector weights `p_λ = (d_λ/N!) Tr ĵ(λ)`.
pub fn sector_weights(j: &GroupFunction, table: &IrrepTable) -> Result<BTreeMap<Partition, f64>> {
    let j_hat = ft(j, table)?;
    let order = factorial(table.degree()) as f64;
    Ok(j_hat
        .blocks()
        .iter()
        .map(|(p, m)| (p.clone(), p.dimension() as f64 / order * re_trace(m)))
        .collect())
}

/// `Tr ϱ² = (1/N!) Σ_λ (d_λ/N!) Tr[ĵ(λ)²]`.
pub fn state_purity(j: &GroupFunction, table: &IrrepTable) -> Result<f64> {
    let j_hat = ft(j, table)?;
    let order = factorial(table.degree()) as f64;
    Ok(j_hat
        .blocks()
        .iter()
        .map(|(p, m)| p.dimension() as f64 / order * re_trace(&(m * m)))
        .sum::<f64>()
        / order)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorPositivity {
    pub partition: Partition,
    pub min_eigenvalue: f64,
    pub hermiticity_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub sectors: Vec<SectorPositivity>,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.sectors
            .iter()
            .all(|s| s.min_eigenvalue >= -PSD_TOL && s.hermiticity_residual <= PSD_TOL)
    }

    pub fn first_failure(&self) -> Option<&SectorPositivity> {
        self.sectors
            .iter()
            .find(|s| s.min_eigenvalue < -PSD_TOL || s.hermiticity_residual > PSD_TOL)
    }
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + dagger(m)) * cr(0.5)
}

/// Minimum eigenvalue and Hermiticity residual of every `ĵ(λ)`.
pub fn positivity_check(j: &GroupFunction, table: &IrrepTable) -> Result<PositivityReport> {
    let j_hat = ft(j, table)?;
    Ok(positivity_of(&j_hat))
}

fn positivity_of(j_hat: &SpectralFunction) -> PositivityReport {
    let sectors = j_hat
        .blocks()
        .iter()
        .map(|(p, m)| {
            let residual = (m - dagger(m)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            let min = hermitian_part(m)
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            SectorPositivity {
                partition: p.clone(),
                min_eigenvalue: min,
                hermiticity_residual: residual,
            }
        })
        .collect();
    PositivityReport { sectors }
}

/// `c` with `ĉ(λ) = ĵ(λ)^{1/2}`, so that `ĉ|i⟩` reproduces the counting
/// statistics of the mixed state described by `j`.
pub fn emulate_pure(j: &GroupFunction, table: &IrrepTable) -> Result<GroupFunction> {
    let j_hat = ft(j, table)?;
    let report = positivity_of(&j_hat);
    if let Some(bad) = report.first_failure() {
        return Err(Error::NotPositive {
            sector: bad.partition.to_string(),
            min_eigenvalue: bad.min_eigenvalue,
        });
    }
    let mut blocks = BTreeMap::new();
    for (p, m) in j_hat.blocks() {
        let eig = hermitian_part(m).symmetric_eigen();
        let roots = eig.eigenvalues.map(|x| cr(x.max(0.0).sqrt()));
        let v = &eig.eigenvectors;
        blocks.insert(p.clone(), v * CMatrix::from_diagonal(&roots) * dagger(v));
    }
    ift(&SpectralFunction::from_blocks(table, blocks)?, table)
}

/// Statistics models accepted by [`probability`].
#[derive(Clone, Debug)]
pub enum StatisticsModel {
    Boson,
    Fermion,
    Sector(Partition),
    Distinguishable,
    /// Partially distinguishable particles with a given `j`.
    Partial(GroupFunction),
}

/// Probability of the setup's output event under `model`.
pub fn probability(
    setup: &ScatteringSetup,
    model: &StatisticsModel,
    table: &IrrepTable,
) -> Result<f64> {
    let n = setup.particles();
    match model {
        StatisticsModel::Boson => {
            counting_superposition(setup, &ParticleStatistics::Boson.symmetrizer(n)?, table)
        }
        StatisticsModel::Fermion => {
            counting_superposition(setup, &ParticleStatistics::Fermion.symmetrizer(n)?, table)
        }
        StatisticsModel::Sector(p) => Ok(counting_sector(setup, p, table)?.probability),
        StatisticsModel::Distinguishable => counting_distinguishable(setup),
        StatisticsModel::Partial(j) => counting_partial(setup, j, table),
    }
}

/// Probabilities of every output event under `model`.
pub fn event_distribution(
    setup: &ScatteringSetup,
    model: &StatisticsModel,
    table: &IrrepTable,
) -> Result<Vec<(OutputEvent, f64)>> {
    let m = setup.modes();
    let n = setup.particles();
    // Reuse one ĵ across events for the partial model.
    let j_hat = match model {
        StatisticsModel::Partial(j) => Some(ft(j, table)?),
        _ => None,
    };
    all_events(n, m)
        .into_iter()
        .map(|ev| {
            let s = setup.with_event(&ev)?;
            let p = match &j_hat {
                Some(jh) => counting_partial_spectral(&s, jh, table)?,
                None => probability(&s, model, table)?,
            };
            Ok((ev, p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hom(output: Vec<usize>) -> ScatteringSetup {
        ScatteringSetup::new(beamsplitter(), vec![0, 1], output).unwrap()
    }

    #[test]
    fn hom_amplitudes() {
        let a = amplitude_function(&hom(vec![0, 1]));
        let swap = Permutation::parse("(1 2)", 2).unwrap();
        assert!((a.get(&Permutation::identity(2)) - cr(-0.5)).norm() < 1e-15);
        assert!((a.get(&swap) - cr(0.5)).norm() < 1e-15);
    }

    #[test]
    fn identity_gives_delta() {
        let s = ScatteringSetup::new(identity_unitary(3), vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        let delta = GroupFunction::delta(&Permutation::identity(3)).unwrap();
        assert!(amplitude_function(&s).max_abs_diff(&delta) < 1e-15);
    }

    #[test]
    fn immanant_examples() {
        let id = CMatrix::identity(3, 3);
        for p in crate::partition::partitions_of(3) {
            assert!((immanant(&id, &p).unwrap() - cr(p.dimension() as f64)).norm() < 1e-14);
        }
        let ones = CMatrix::from_element(2, 2, cr(1.0));
        assert!((permanent(&ones).unwrap() - cr(2.0)).norm() < 1e-14);
        assert!((permanent_ryser(&ones).unwrap() - cr(2.0)).norm() < 1e-14);
    }

    #[test]
    fn hom_probabilities() {
        let table = IrrepTable::new(2).unwrap();
        let coinc = hom(vec![0, 1]);
        let bunched = hom(vec![0, 0]);
        let p = |s: &ScatteringSetup, m: &StatisticsModel| probability(s, m, &table).unwrap();
        assert!(p(&coinc, &StatisticsModel::Boson).abs() < 1e-14);
        assert!((p(&bunched, &StatisticsModel::Boson) - 0.5).abs() < 1e-12);
        assert!((p(&coinc, &StatisticsModel::Fermion) - 1.0).abs() < 1e-12);
        assert!((p(&coinc, &StatisticsModel::Distinguishable) - 0.5).abs() < 1e-12);
        let sign = StatisticsModel::Sector(Partition::sign(2));
        assert!((p(&coinc, &sign) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fermions_cannot_share_input_mode() {
        let table = IrrepTable::new(2).unwrap();
        let s = ScatteringSetup::new(beamsplitter(), vec![0, 0], vec![0, 1]).unwrap();
        let r = counting_sector(&s, &Partition::sign(2), &table).unwrap();
        assert!(!r.admissible);
        assert_eq!(r.probability, 0.0);
        assert!(matches!(
            probability(&s, &StatisticsModel::Fermion, &table),
            Err(Error::VanishingNorm(_))
        ));
    }

    #[test]
    fn overlap_dip() {
        let table = IrrepTable::new(2).unwrap();
        for c in [0.0, 0.5, 1.0] {
            let gram = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(c), cr(c), cr(1.0)]);
            let j = j_from_model(
                &DistinguishabilityModel::Gram(gram),
                ParticleStatistics::Boson,
                &[0, 1],
            )
            .unwrap();
            let p = counting_partial(&hom(vec![0, 1]), &j, &table).unwrap();
            assert!((p - (1.0 - c * c) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let u = CMatrix::from_element(2, 2, cr(1.0));
        assert!(matches!(
            ScatteringSetup::new(u, vec![0, 1], vec![0, 1]),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn rejects_bad_gram() {
        let g = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(2.0), cr(2.0), cr(1.0)]);
        assert!(sanitize_gram(&g).is_err());
    }

    #[test]
    fn event_enumeration() {
        assert_eq!(all_events(2, 2).len(), 3);
        assert_eq!(all_events(3, 4).len(), 20);
        let ev = OutputEvent::from_occupations(vec![2, 0, 1]).unwrap();
        assert_eq!(ev.mode_list(), vec![0, 0, 2]);
        assert_eq!(ev.stabilizer_order(), 2);
    }

    #[test]
    fn random_unitary_is_unitary() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        assert!(unitarity_deviation(&random_unitary(5, &mut rng)) < 1e-12);
    }
}
