//! Completely destructive interference: Pauli-forbidden sectors, suppression
//! by state symmetries, Pauli-like suppression and configuration scans.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{ft, GroupFunction};
use crate::interference::{
    all_mode_lists, amplitude_function, fourier_unitary, CMatrix, ScatteringSetup,
};
use crate::irreps::{IrrepTable, MAX_DENSE_DEGREE};
use crate::partition::{multiplicity_partition, stabilizer_character_sum, Partition};
use crate::perm::{symmetric_group, Permutation, Subgroup, SymmetricGroup};

/// Relative suppression tolerance.
pub const SUPPRESSION_TOL: f64 = 1e-10;
/// Absolute tolerance used when every sector vanishes.
pub const WEIGHT_FLOOR: f64 = 1e-24;
/// Phase tolerance, in turns, for eigenvalues that are not exact roots of unity.
pub const PHASE_TOL: f64 = 1e-9;
/// Largest particle number accepted by [`scan`] without `allow_large`.
pub const SCAN_MAX_PARTICLES: usize = 7;
/// Largest mode number accepted by [`scan`] without `allow_large`.
pub const SCAN_MAX_MODES: usize = 8;

const INVARIANCE_TOL: f64 = 1e-9;
const FOURIER_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    PauliForbidden,
    SymmetrySuppressed,
    PauliLikeSuppressed,
    NumericallySuppressed,
    Allowed,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::PauliForbidden,
        Status::SymmetrySuppressed,
        Status::PauliLikeSuppressed,
        Status::NumericallySuppressed,
        Status::Allowed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::PauliForbidden => "pauli_forbidden",
            Status::SymmetrySuppressed => "symmetry_suppressed",
            Status::PauliLikeSuppressed => "pauli_like_suppressed",
            Status::NumericallySuppressed => "numerically_suppressed",
            Status::Allowed => "allowed",
        }
    }

    pub fn is_suppressed(self) -> bool {
        self != Status::Allowed
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which side of the amplitude a symmetry or subgroup acts on. Input
/// permutations act from the left, output permutations from the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Input,
    Output,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Input => "input",
            Side::Output => "output",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryKind {
    /// `m ↦ m + p`.
    Translation,
    /// `m ↦ p - m`.
    Reflection,
}

/// A dihedral mode map leaving a mode list invariant up to the particle
/// permutation `tau`: `modes[τ⁻¹(α)] = T(modes[α])`.
#[derive(Clone, Debug, PartialEq)]
pub struct DihedralSymmetry {
    pub kind: SymmetryKind,
    pub p: usize,
    pub tau: Permutation,
}

impl DihedralSymmetry {
    pub fn map_mode(&self, x: usize, m: usize) -> usize {
        dihedral_map(self.kind, self.p, x, m)
    }

    /// Direct check of the state relation on a mode list.
    pub fn holds_for(&self, modes: &[usize], m: usize) -> bool {
        let inv = self.tau.inverse();
        self.tau.degree() == modes.len()
            && (0..modes.len()).all(|al| modes[inv.images0()[al]] == self.map_mode(modes[al], m))
    }
}

impl fmt::Display for DihedralSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SymmetryKind::Translation => "translation",
            SymmetryKind::Reflection => "reflection",
        };
        write!(f, "{kind} p={} tau={}", self.p, self.tau)
    }
}

fn dihedral_map(kind: SymmetryKind, p: usize, x: usize, m: usize) -> usize {
    match kind {
        SymmetryKind::Translation => (x + p) % m,
        SymmetryKind::Reflection => (p + m - x % m) % m,
    }
}

/// A unit phase `exp(2πiθ)` stored by `θ mod 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Phase {
    Exact(Ratio<i64>),
    Approx(f64),
}

impl Phase {
    pub fn exact(num: i64, den: i64) -> Phase {
        Phase::Exact(Ratio::new(num.rem_euclid(den), den))
    }

    pub fn from_turns(t: f64) -> Phase {
        Phase::Approx(t.rem_euclid(1.0))
    }

    pub fn one() -> Phase {
        Phase::exact(0, 1)
    }

    pub fn turns(&self) -> f64 {
        match self {
            Phase::Exact(r) => r.to_f64().unwrap_or(0.0),
            Phase::Approx(t) => *t,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.turns())
    }

    pub fn is_one(&self) -> bool {
        self.matches(&Phase::one())
    }

    /// Equality mod 1, exact when both sides are exact.
    pub fn matches(&self, other: &Phase) -> bool {
        match (self, other) {
            (Phase::Exact(a), Phase::Exact(b)) => {
                let d = a - b;
                d.is_integer()
            }
            _ => {
                let d = (self.turns() - other.turns()).rem_euclid(1.0);
                d.min(1.0 - d) < PHASE_TOL
            }
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Exact(r) if r.is_zero() => write!(f, "1"),
            Phase::Exact(r) if *r == Ratio::new(1, 2) => write!(f, "-1"),
            Phase::Exact(r) => write!(f, "exp(2pi i {}/{})", r.numer(), r.denom()),
            Phase::Approx(t) => write!(f, "exp(2pi i {t:.9})"),
        }
    }
}

/// Eigenvalue multiplicities of `ρ^λ(τ)`. Entry `k` belongs to
/// `exp(2πik/L)` with `L` the order of `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    order: usize,
    multiplicities: Vec<usize>,
}

impl Spectrum {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    fn slot(&self, phase: &Phase) -> Option<usize> {
        let l = self.order as i64;
        match phase {
            Phase::Exact(r) => {
                let x = r * Ratio::from_integer(l);
                x.is_integer()
                    .then(|| x.to_integer().rem_euclid(l) as usize)
            }
            Phase::Approx(t) => {
                let x = t * self.order as f64;
                let k = x.round();
                ((t - k / self.order as f64).abs() < PHASE_TOL)
                    .then(|| (k as i64).rem_euclid(l) as usize)
            }
        }
    }

    pub fn multiplicity(&self, phase: &Phase) -> usize {
        self.slot(phase).map_or(0, |k| self.multiplicities[k])
    }

    pub fn contains(&self, phase: &Phase) -> bool {
        self.multiplicity(phase) > 0
    }

    /// Whether `phase` is a product of an eigenvalue of `self` and one of `other`.
    pub fn contains_product(&self, other: &Spectrum, phase: &Phase) -> bool {
        for (ka, &ma) in self.multiplicities.iter().enumerate() {
            if ma == 0 {
                continue;
            }
            for (kb, &mb) in other.multiplicities.iter().enumerate() {
                if mb == 0 {
                    continue;
                }
                let sum = Ratio::new(ka as i64, self.order as i64)
                    + Ratio::new(kb as i64, other.order as i64);
                if Phase::Exact(sum).matches(phase) {
                    return true;
                }
            }
        }
        false
    }
}

/// Justification attached to a suppressed sector.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// The state on this side has no component in the sector.
    Pauli { side: Side },
    /// `δ_τ * a * δ_τ' = Λ a` with `Λ` outside the spectrum.
    Symmetry {
        tau: Option<Permutation>,
        tau_prime: Option<Permutation>,
        lambda: Phase,
        origin: String,
    },
    /// `I_H * a = a` (input side) or `a * I_H = a` (output side) with
    /// `Σ_H χ^λ = 0`.
    Subgroup {
        side: Side,
        description: String,
        order: usize,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pauli { side } => write!(f, "stab({side})"),
            Witness::Symmetry {
                tau,
                tau_prime,
                lambda,
                origin,
            } => {
                let show =
                    |t: &Option<Permutation>| t.as_ref().map_or("-".to_string(), |t| t.to_string());
                write!(
                    f,
                    "tau={} tau'={} lambda={lambda} [{origin}]",
                    show(tau),
                    show(tau_prime)
                )
            }
            Witness::Subgroup {
                side,
                description,
                order,
            } => write!(f, "{side} H={description} |H|={order}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuppressionVerdict {
    pub sector: Partition,
    pub weight: f64,
    pub status: Status,
    pub witness: Option<Witness>,
}

/// A state symmetry together with one particle permutation per cycle type
/// occurring in its witness coset `τ ∘ stab`.
#[derive(Clone, Debug)]
pub struct SymmetryCoset {
    pub symmetry: DihedralSymmetry,
    pub classes: Vec<Permutation>,
}

fn related_positions(
    modes: &[usize],
    kind: SymmetryKind,
    p: usize,
    m: usize,
) -> Option<Permutation> {
    // sigma = τ⁻¹ sends α to the first unused β with modes[β] = T(modes[α]).
    let n = modes.len();
    let mut used = vec![false; n];
    let mut sigma = Vec::with_capacity(n);
    for &x in modes {
        let target = dihedral_map(kind, p, x, m);
        let beta = (0..n).find(|&b| !used[b] && modes[b] == target)?;
        used[beta] = true;
        sigma.push(beta);
    }
    Some(Permutation::from_images0(sigma).ok()?.inverse())
}

fn moved_points(p: &Permutation) -> usize {
    p.images0()
        .iter()
        .enumerate()
        .filter(|(i, &x)| *i != x)
        .count()
}

fn witness_key(p: &Permutation) -> (usize, usize, usize) {
    (moved_points(p), p.cycle_type().len(), p.rank())
}

/// Every dihedral symmetry of `modes` with its witness coset.
pub fn symmetry_cosets(modes: &[usize], m: usize) -> Vec<SymmetryCoset> {
    if modes.is_empty() || m == 0 {
        return Vec::new();
    }
    let stab = Subgroup::stabilizer(modes);
    let mut out = Vec::new();
    for kind in [SymmetryKind::Translation, SymmetryKind::Reflection] {
        for p in 0..m {
            let Some(tau0) = related_positions(modes, kind, p, m) else {
                continue;
            };
            let mut coset: Vec<Permutation> = stab.elements().iter().map(|h| &tau0 * h).collect();
            coset.sort_by_key(witness_key);
            let tau = coset[0].clone();
            let mut classes: Vec<Permutation> = Vec::new();
            for t in coset {
                let ct = t.cycle_type();
                if !classes.iter().any(|c| c.cycle_type() == ct) {
                    classes.push(t);
                }
            }
            out.push(SymmetryCoset {
                symmetry: DihedralSymmetry { kind, p, tau },
                classes,
            });
        }
    }
    out
}

/// All `(kind, p)` whose mode map permutes the multiset `modes`, each with
/// one witness `τ`: fewest moved points, then fewest cycles, then lowest rank.
pub fn find_state_symmetries(modes: &[usize], m: usize) -> Vec<DihedralSymmetry> {
    symmetry_cosets(modes, m)
        .into_iter()
        .map(|c| c.symmetry)
        .collect()
}

/// True when `u` is the `M`-mode Fourier matrix to 1e-12.
pub fn is_fourier(u: &CMatrix) -> bool {
    if u.nrows() != u.ncols() || u.nrows() == 0 {
        return false;
    }
    let f = fourier_unitary(u.nrows());
    u.iter()
        .zip(f.iter())
        .all(|(a, b)| (a - b).norm() <= FOURIER_TOL)
}

/// Shared tables for repeated suppression analyses at a fixed particle number.
pub struct Analyzer {
    n: usize,
    table: IrrepTable,
    group: &'static SymmetricGroup,
    spectra: Mutex<HashMap<(usize, Partition), Arc<Spectrum>>>,
    young_sums: Mutex<HashMap<Partition, Arc<Vec<i64>>>>,
    maps: Mutex<HashMap<(Side, usize), Arc<Vec<usize>>>>,
}

impl Analyzer {
    pub fn new(n: usize) -> Result<Self> {
        let table = IrrepTable::new(n)?;
        if n <= MAX_DENSE_DEGREE {
            table.dense()?;
        }
        Ok(Analyzer {
            n,
            table,
            group: symmetric_group(n)?,
            spectra: Mutex::new(HashMap::new()),
            young_sums: Mutex::new(HashMap::new()),
            maps: Mutex::new(HashMap::new()),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &IrrepTable {
        &self.table
    }

    pub fn partitions(&self) -> &[Partition] {
        self.table.partitions()
    }

    /// `Tr[â(λ)†â(λ)]` in table order for amplitude values indexed by rank.
    pub fn weights(&self, values: &[Complex64]) -> Result<Vec<f64>> {
        if values.len() != self.group.order() {
            return Err(Error::LengthMismatch {
                expected: self.group.order(),
                found: values.len(),
            });
        }
        if self.n > MAX_DENSE_DEGREE {
            let f = GroupFunction::from_values(self.n, values.to_vec())?;
            let spec = ft(&f, &self.table)?;
            return Ok(spec
                .blocks()
                .iter()
                .map(|(_, b)| b.iter().map(|z| z.norm_sqr()).sum())
                .collect());
        }
        let dense = self.table.dense()?;
        let mut out = Vec::with_capacity(self.table.partitions().len());
        for idx in 0..self.table.partitions().len() {
            let d2 = dense.dim(idx) * dense.dim(idx);
            let block = dense.block(idx);
            let mut re = vec![0.0; d2];
            let mut im = vec![0.0; d2];
            for (r, a) in values.iter().enumerate() {
                let m = &block[r * d2..(r + 1) * d2];
                for e in 0..d2 {
                    re[e] += a.re * m[e];
                    im[e] += a.im * m[e];
                }
            }
            out.push(re.iter().zip(&im).map(|(x, y)| x * x + y * y).sum());
        }
        Ok(out)
    }

    /// Spectrum of `ρ^λ(τ)` for `τ` of the given cycle type, from the
    /// characters of its powers.
    pub fn spectrum(&self, irrep: usize, cycle_type: &Partition) -> Result<Arc<Spectrum>> {
        let key = (irrep, cycle_type.clone());
        if let Some(s) = self.spectra.lock().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.compute_spectrum(irrep, cycle_type)?);
        self.spectra
            .lock()
            .expect("cache lock")
            .insert(key, s.clone());
        Ok(s)
    }

    fn compute_spectrum(&self, irrep: usize, cycle_type: &Partition) -> Result<Spectrum> {
        let chars = self.table.characters();
        let order = cycle_type
            .parts()
            .iter()
            .fold(1usize, |acc, &l| acc.lcm(&l));
        let powers: Vec<i64> = (0..order)
            .map(|s| {
                let mut parts = Vec::new();
                for &l in cycle_type.parts() {
                    let g = if s == 0 { l } else { l.gcd(&s) };
                    parts.extend(std::iter::repeat(l / g).take(g));
                }
                let class = Partition::from_unsorted(parts).expect("cycle type of a power");
                chars.value(irrep, chars.class_index(&class))
            })
            .collect();
        let dim = self.table.partitions()[irrep].dimension();
        let mut multiplicities = Vec::with_capacity(order);
        for k in 0..order {
            let x: f64 = powers
                .iter()
                .enumerate()
                .map(|(s, &c)| {
                    c as f64
                        * (2.0 * std::f64::consts::PI * (k * s % order) as f64 / order as f64).cos()
                })
                .sum::<f64>()
                / order as f64;
            let r = x.round();
            if (x - r).abs() > 1e-6 || r < 0.0 {
                return Err(Error::Inconsistent(format!(
                    "non-integral eigenvalue multiplicity {x}"
                )));
            }
            multiplicities.push(r as usize);
        }
        if multiplicities.iter().sum::<usize>() != dim {
            return Err(Error::Inconsistent(
                "eigenvalue multiplicities do not sum to the dimension".into(),
            ));
        }
        if self.n >= 2 && self.table.partitions()[irrep] == Partition::standard(self.n) {
            let expected = cycle_type.len() - 1;
            if multiplicities[0] != expected {
                return Err(Error::Inconsistent(format!(
                    "standard irrep at class {cycle_type}: eigenvalue 1 has multiplicity {}, expected {expected}",
                    multiplicities[0]
                )));
            }
        }
        Ok(Spectrum {
            order,
            multiplicities,
        })
    }

    /// `Σ_{h ∈ H} χ^λ(h)` for a Young subgroup with the given block sizes.
    pub fn young_character_sums(&self, blocks: &Partition) -> Result<Arc<Vec<i64>>> {
        if let Some(s) = self.young_sums.lock().expect("cache lock").get(blocks) {
            return Ok(s.clone());
        }
        let labels: Vec<usize> = blocks
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat(i).take(k))
            .collect();
        let sums = self
            .table
            .partitions()
            .iter()
            .map(|p| stabilizer_character_sum(p, &labels))
            .collect::<Result<Vec<_>>>()?;
        let sums = Arc::new(sums);
        self.young_sums
            .lock()
            .expect("cache lock")
            .insert(blocks.clone(), sums.clone());
        Ok(sums)
    }

    /// `r ↦ rank(g ∘ σ_r)` for the input side, `r ↦ rank(σ_r ∘ g)` for the output side.
    fn shift_map(&self, side: Side, g: &Permutation) -> Arc<Vec<usize>> {
        let key = (side, g.rank());
        if let Some(m) = self.maps.lock().expect("cache lock").get(&key) {
            return m.clone();
        }
        let map: Vec<usize> = self
            .group
            .elements()
            .iter()
            .map(|s| match side {
                Side::Input => (g * s).rank(),
                Side::Output => (s * g).rank(),
            })
            .collect();
        let map = Arc::new(map);
        self.maps
            .lock()
            .expect("cache lock")
            .insert(key, map.clone());
        map
    }
}

/// Amplitude values with their scale.
struct Amplitudes {
    values: Vec<Complex64>,
    max_abs: f64,
}

impl Amplitudes {
    fn new(setup: &ScatteringSetup) -> Self {
        let values = amplitude_function(setup).values().to_vec();
        let max_abs = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Amplitudes { values, max_abs }
    }

    fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map_or(0, |(r, _)| r)
    }

    /// Whether `a[map[r]] = Λ a[r]` for all `r`.
    fn relation_holds(&self, map: &[usize], lambda: Complex64) -> bool {
        let tol = INVARIANCE_TOL * self.max_abs;
        map.iter()
            .enumerate()
            .all(|(r, &t)| (self.values[t] - lambda * self.values[r]).norm() <= tol)
    }

    /// Constant ratio `a[map[r]] / a[r]` when it exists.
    fn ratio(&self, map: &[usize]) -> Option<Phase> {
        if self.max_abs == 0.0 {
            return None;
        }
        let r = self.argmax();
        let lambda = self.values[map[r]] / self.values[r];
        if (lambda.norm() - 1.0).abs() > INVARIANCE_TOL || !self.relation_holds(map, lambda) {
            return None;
        }
        Some(Phase::from_turns(
            lambda.arg() / (2.0 * std::f64::consts::PI),
        ))
    }
}

/// A symmetry relation `a(τ⁻¹ ∘ σ ∘ τ_o) = Λ a(σ)` established for a setup.
#[derive(Clone, Debug)]
struct Relation {
    input: Option<usize>,
    output: Option<usize>,
    lambda: Phase,
}

/// The cyclic-witness data used by the complementarity check.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicWitness {
    pub side: Side,
    pub tau: Permutation,
    pub lambda: Phase,
}

/// Full suppression analysis of one setup.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub verdicts: Vec<SuppressionVerdict>,
    pub max_weight: f64,
    pub tolerance: f64,
    /// A full-cycle witness with a known eigenvalue, if any.
    pub cyclic: Option<CyclicWitness>,
}

impl Analysis {
    pub fn verdict(&self, p: &Partition) -> Option<&SuppressionVerdict> {
        self.verdicts.iter().find(|v| &v.sector == p)
    }
}

/// A subgroup `H` tested for `I_H * a = a` (input side) or `a * I_H = a`
/// (output side).
#[derive(Clone, Debug)]
pub struct PauliCandidate {
    pub side: Side,
    pub description: String,
    pub order: usize,
    /// Invariance under these elements is checked pointwise.
    pub generators: Vec<Permutation>,
    /// `Σ_{h ∈ H} χ^λ(h)` in table order.
    pub character_sums: Vec<i64>,
}

impl PauliCandidate {
    pub fn from_subgroup(side: Side, h: &Subgroup, analyzer: &Analyzer) -> Result<Self> {
        if h.degree() != analyzer.degree() {
            return Err(Error::DegreeMismatch {
                left: analyzer.degree(),
                right: h.degree(),
            });
        }
        let chars = analyzer.table().characters();
        let counts = h.cycle_type_counts();
        let character_sums = (0..analyzer.partitions().len())
            .map(|l| {
                counts
                    .iter()
                    .map(|(c, &k)| k as i64 * chars.value(l, chars.class_index(c)))
                    .sum()
            })
            .collect();
        Ok(PauliCandidate {
            side,
            description: h.description().to_string(),
            order: h.order(),
            generators: h.elements().to_vec(),
            character_sums,
        })
    }

    fn young(
        side: Side,
        blocks: &[Vec<usize>],
        analyzer: &Analyzer,
        description: String,
    ) -> Result<Self> {
        let n = analyzer.degree();
        let mut generators = Vec::new();
        for b in blocks {
            for w in b.windows(2) {
                generators.push(Permutation::from_cycles(n, &[vec![w[0], w[1]]])?);
            }
        }
        let sizes = Partition::from_unsorted(blocks.iter().map(Vec::len).collect())?;
        let order = sizes
            .parts()
            .iter()
            .map(|&k| crate::perm::factorial(k))
            .product();
        Ok(PauliCandidate {
            side,
            description,
            order,
            generators,
            character_sums: analyzer.young_character_sums(&sizes)?.to_vec(),
        })
    }

    fn cyclic(side: Side, tau: &Permutation, analyzer: &Analyzer) -> Result<Self> {
        let ct = tau.cycle_type();
        let order = tau.order();
        let character_sums = (0..analyzer.partitions().len())
            .map(|l| Ok(analyzer.spectrum(l, &ct)?.multiplicities()[0] as i64 * order as i64))
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliCandidate {
            side,
            description: format!("<{tau}>"),
            order,
            generators: vec![tau.clone()],
            character_sums,
        })
    }

    fn verified(&self, amps: &Amplitudes, analyzer: &Analyzer) -> bool {
        self.generators.iter().all(|g| {
            amps.relation_holds(&analyzer.shift_map(self.side, g), Complex64::new(1.0, 0.0))
        })
    }
}

fn check_degree(setup: &ScatteringSetup, analyzer: &Analyzer) -> Result<()> {
    if setup.particles() != analyzer.degree() {
        return Err(Error::DegreeMismatch {
            left: analyzer.degree(),
            right: setup.particles(),
        });
    }
    Ok(())
}

fn tolerance(weights: &[f64]) -> (f64, f64) {
    let max = weights.iter().copied().fold(0.0, f64::max);
    (max, (SUPPRESSION_TOL * max).max(WEIGHT_FLOOR))
}

/// `Tr[â(λ)†â(λ)]` per sector.
pub fn sector_weights_table(
    setup: &ScatteringSetup,
    analyzer: &Analyzer,
) -> Result<BTreeMap<Partition, f64>> {
    check_degree(setup, analyzer)?;
    let amps = Amplitudes::new(setup);
    let w = analyzer.weights(&amps.values)?;
    Ok(analyzer.partitions().iter().cloned().zip(w).collect())
}

fn closed_form(
    fourier: bool,
    setup: &ScatteringSetup,
    input: Option<&DihedralSymmetry>,
    output: Option<&DihedralSymmetry>,
) -> Option<Phase> {
    if !fourier {
        return None;
    }
    let m = setup.modes() as i64;
    let n = setup.particles() as i64;
    let sum_i: i64 = setup.input().iter().map(|&x| x as i64).sum();
    let sum_o: i64 = setup.output().iter().map(|&x| x as i64).sum();
    match (input, output) {
        (Some(s), None) if s.kind == SymmetryKind::Translation => {
            Some(Phase::exact(s.p as i64 * sum_o, m))
        }
        (None, Some(s)) if s.kind == SymmetryKind::Translation => {
            Some(Phase::exact(s.p as i64 * sum_i, m))
        }
        (Some(a), Some(b))
            if a.kind == SymmetryKind::Reflection && b.kind == SymmetryKind::Reflection =>
        {
            let (p, q) = (a.p as i64, b.p as i64);
            Some(Phase::exact(n * p * q - p * sum_o - q * sum_i, m))
        }
        _ => None,
    }
}

struct Context<'a> {
    setup: &'a ScatteringSetup,
    analyzer: &'a Analyzer,
    amps: Amplitudes,
    weights: Vec<f64>,
    max_weight: f64,
    tol: f64,
    fourier: bool,
    input_cosets: &'a [SymmetryCoset],
    output_cosets: &'a [SymmetryCoset],
}

impl<'a> Context<'a> {
    fn new(
        setup: &'a ScatteringSetup,
        analyzer: &'a Analyzer,
        input_cosets: &'a [SymmetryCoset],
        output_cosets: &'a [SymmetryCoset],
    ) -> Result<Self> {
        check_degree(setup, analyzer)?;
        let amps = Amplitudes::new(setup);
        let weights = analyzer.weights(&amps.values)?;
        let (max_weight, tol) = tolerance(&weights);
        Ok(Context {
            setup,
            analyzer,
            amps,
            weights,
            max_weight,
            tol,
            fourier: is_fourier(setup.unitary()),
            input_cosets,
            output_cosets,
        })
    }

    fn relation_map(&self, input: Option<usize>, output: Option<usize>) -> Vec<usize> {
        let right = output.map(|o| {
            self.analyzer
                .shift_map(Side::Output, &self.output_cosets[o].symmetry.tau)
        });
        let left = input.map(|i| {
            self.analyzer
                .shift_map(Side::Input, &self.input_cosets[i].symmetry.tau.inverse())
        });
        (0..self.amps.values.len())
            .map(|r| {
                let r = right.as_ref().map_or(r, |m| m[r]);
                left.as_ref().map_or(r, |m| m[r])
            })
            .collect()
    }

    fn establish(&self, input: Option<usize>, output: Option<usize>) -> Result<Option<Relation>> {
        let map = self.relation_map(input, output);
        let exact = closed_form(
            self.fourier,
            self.setup,
            input.map(|i| &self.input_cosets[i].symmetry),
            output.map(|o| &self.output_cosets[o].symmetry),
        );
        if let Some(lambda) = exact {
            if self.amps.max_abs > 0.0 && !self.amps.relation_holds(&map, lambda.value()) {
                return Err(Error::Inconsistent(format!(
                    "closed-form eigenvalue {lambda} does not hold pointwise"
                )));
            }
            return Ok(Some(Relation {
                input,
                output,
                lambda,
            }));
        }
        Ok(self.amps.ratio(&map).map(|lambda| Relation {
            input,
            output,
            lambda,
        }))
    }

    fn relations(&self) -> Result<Vec<Relation>> {
        let mut out = Vec::new();
        let mut one_in = vec![false; self.input_cosets.len()];
        let mut one_out = vec![false; self.output_cosets.len()];
        for i in 0..self.input_cosets.len() {
            if let Some(r) = self.establish(Some(i), None)? {
                one_in[i] = true;
                out.push(r);
            }
        }
        for o in 0..self.output_cosets.len() {
            if let Some(r) = self.establish(None, Some(o))? {
                one_out[o] = true;
                out.push(r);
            }
        }
        for i in 0..self.input_cosets.len() {
            for o in 0..self.output_cosets.len() {
                if one_in[i] && one_out[o] {
                    continue;
                }
                if self.fourier {
                    let both_reflections = self.input_cosets[i].symmetry.kind
                        == SymmetryKind::Reflection
                        && self.output_cosets[o].symmetry.kind == SymmetryKind::Reflection;
                    if !both_reflections {
                        continue;
                    }
                }
                if let Some(r) = self.establish(Some(i), Some(o))? {
                    out.push(r);
                }
            }
        }
        Ok(out)
    }

    fn origin(&self, rel: &Relation) -> String {
        let mut parts = Vec::new();
        if let Some(i) = rel.input {
            parts.push(format!("input {}", self.input_cosets[i].symmetry));
        }
        if let Some(o) = rel.output {
            parts.push(format!("output {}", self.output_cosets[o].symmetry));
        }
        parts.join("; ")
    }

    /// First witness showing that `Λ` is absent from the spectrum relevant to `rel`.
    fn spectral_witness(&self, irrep: usize, rel: &Relation) -> Result<Option<Witness>> {
        let classes_in: Vec<Option<&Permutation>> = match rel.input {
            Some(i) => self.input_cosets[i].classes.iter().map(Some).collect(),
            None => vec![None],
        };
        let classes_out: Vec<Option<&Permutation>> = match rel.output {
            Some(o) => self.output_cosets[o].classes.iter().map(Some).collect(),
            None => vec![None],
        };
        for a in &classes_in {
            for b in &classes_out {
                let excluded = match (a, b) {
                    (Some(t), None) | (None, Some(t)) => !self
                        .analyzer
                        .spectrum(irrep, &t.cycle_type())?
                        .contains(&rel.lambda),
                    (Some(t), Some(u)) => {
                        let sa = self.analyzer.spectrum(irrep, &t.cycle_type())?;
                        let sb = self.analyzer.spectrum(irrep, &u.cycle_type())?;
                        !sa.contains_product(&sb, &rel.lambda)
                    }
                    (None, None) => false,
                };
                if excluded {
                    return Ok(Some(Witness::Symmetry {
                        tau: a.cloned(),
                        tau_prime: b.map(|u| u.inverse()),
                        lambda: rel.lambda,
                        origin: self.origin(rel),
                    }));
                }
            }
        }
        Ok(None)
    }

    fn verdict(
        &self,
        irrep: usize,
        status: Status,
        witness: Witness,
    ) -> Result<SuppressionVerdict> {
        let weight = self.weights[irrep];
        if weight >= self.tol {
            return Err(Error::Inconsistent(format!(
                "{} predicted {status} by {witness} but weight {weight:e} exceeds tolerance {:e}",
                self.analyzer.partitions()[irrep],
                self.tol
            )));
        }
        Ok(SuppressionVerdict {
            sector: self.analyzer.partitions()[irrep].clone(),
            weight,
            status,
            witness: Some(witness),
        })
    }

    fn pauli(&self) -> Result<Vec<SuppressionVerdict>> {
        let in_sums = self
            .analyzer
            .young_character_sums(&multiplicity_partition(self.setup.input())?)?;
        let out_sums = self
            .analyzer
            .young_character_sums(&multiplicity_partition(self.setup.output())?)?;
        let mut out = Vec::new();
        for l in 0..self.analyzer.partitions().len() {
            let side = if in_sums[l] == 0 {
                Side::Input
            } else if out_sums[l] == 0 {
                Side::Output
            } else {
                continue;
            };
            out.push(self.verdict(l, Status::PauliForbidden, Witness::Pauli { side })?);
        }
        Ok(out)
    }

    fn symmetry(&self, relations: &[Relation]) -> Result<Vec<SuppressionVerdict>> {
        let mut out = Vec::new();
        for l in 0..self.analyzer.partitions().len() {
            for rel in relations {
                if let Some(w) = self.spectral_witness(l, rel)? {
                    out.push(self.verdict(l, Status::SymmetrySuppressed, w)?);
                    break;
                }
            }
        }
        Ok(out)
    }

    fn invariance_blocks(&self, side: Side) -> Result<Vec<Vec<usize>>> {
        let n = self.setup.particles();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for a in 0..n {
            for b in a + 1..n {
                let t = Permutation::from_cycles(n, &[vec![a + 1, b + 1]])?;
                if self
                    .amps
                    .relation_holds(&self.analyzer.shift_map(side, &t), Complex64::new(1.0, 0.0))
                {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[rb] = ra;
                }
            }
        }
        let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            blocks.entry(r).or_default().push(x + 1);
        }
        Ok(blocks.into_values().collect())
    }

    fn default_candidates(&self, relations: &[Relation]) -> Result<Vec<PauliCandidate>> {
        let a = self.analyzer;
        let mut out = vec![
            PauliCandidate::from_subgroup(Side::Input, self.setup.stab_input(), a)?,
            PauliCandidate::from_subgroup(Side::Output, self.setup.stab_output(), a)?,
        ];
        for rel in relations.iter().filter(|r| r.lambda.is_one()) {
            match (rel.input, rel.output) {
                (Some(i), None) => {
                    for t in &self.input_cosets[i].classes {
                        if !t.is_identity() {
                            out.push(PauliCandidate::cyclic(Side::Input, &t.inverse(), a)?);
                        }
                    }
                }
                (None, Some(o)) => {
                    for t in &self.output_cosets[o].classes {
                        if !t.is_identity() {
                            out.push(PauliCandidate::cyclic(Side::Output, t, a)?);
                        }
                    }
                }
                _ => {}
            }
        }
        for side in [Side::Input, Side::Output] {
            let blocks = self.invariance_blocks(side)?;
            if blocks.iter().any(|b| b.len() > 1) {
                let body: Vec<String> = blocks
                    .iter()
                    .filter(|b| b.len() > 1)
                    .map(|b| {
                        format!(
                            "{{{}}}",
                            b.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                        )
                    })
                    .collect();
                let desc = format!("young{}", body.join(""));
                out.push(PauliCandidate::young(side, &blocks, a, desc)?);
            }
        }
        Ok(out)
    }

    fn pauli_like(&self, candidates: &[PauliCandidate]) -> Result<Vec<SuppressionVerdict>> {
        let verified: Vec<&PauliCandidate> = candidates
            .iter()
            .filter(|c| c.verified(&self.amps, self.analyzer))
            .collect();
        let mut out = Vec::new();
        for l in 0..self.analyzer.partitions().len() {
            if let Some(c) = verified.iter().find(|c| c.character_sums[l] == 0) {
                let w = Witness::Subgroup {
                    side: c.side,
                    description: c.description.clone(),
                    order: c.order,
                };
                out.push(self.verdict(l, Status::PauliLikeSuppressed, w)?);
            }
        }
        Ok(out)
    }

    fn cyclic(&self, relations: &[Relation]) -> Option<CyclicWitness> {
        let n = self.setup.particles();
        for rel in relations {
            let (side, classes) = match (rel.input, rel.output) {
                (Some(i), None) => (Side::Input, &self.input_cosets[i].classes),
                (None, Some(o)) => (Side::Output, &self.output_cosets[o].classes),
                _ => continue,
            };
            if let Some(t) = classes.iter().find(|t| t.cycle_type().parts() == [n]) {
                let tau = match side {
                    Side::Input => t.clone(),
                    Side::Output => t.inverse(),
                };
                return Some(CyclicWitness {
                    side,
                    tau,
                    lambda: rel.lambda,
                });
            }
        }
        None
    }
}

fn merge(ctx: &Context<'_>, layers: Vec<Vec<SuppressionVerdict>>) -> Vec<SuppressionVerdict> {
    ctx.analyzer
        .partitions()
        .iter()
        .enumerate()
        .map(|(l, p)| {
            for layer in &layers {
                if let Some(v) = layer.iter().find(|v| &v.sector == p) {
                    return v.clone();
                }
            }
            let weight = ctx.weights[l];
            let status = if weight < ctx.tol {
                Status::NumericallySuppressed
            } else {
                Status::Allowed
            };
            SuppressionVerdict {
                sector: p.clone(),
                weight,
                status,
                witness: None,
            }
        })
        .collect()
}

fn analyze_with(
    setup: &ScatteringSetup,
    analyzer: &Analyzer,
    input_cosets: &[SymmetryCoset],
    output_cosets: &[SymmetryCoset],
) -> Result<Analysis> {
    let ctx = Context::new(setup, analyzer, input_cosets, output_cosets)?;
    let relations = ctx.relations()?;
    let pauli = ctx.pauli()?;
    let symmetry = ctx.symmetry(&relations)?;
    let candidates = ctx.default_candidates(&relations)?;
    let pauli_like = ctx.pauli_like(&candidates)?;
    let verdicts = merge(&ctx, vec![pauli, symmetry, pauli_like]);
    Ok(Analysis {
        verdicts,
        max_weight: ctx.max_weight,
        tolerance: ctx.tol,
        cyclic: ctx.cyclic(&relations),
    })
}

/// Classifies every sector of the setup. Mechanisms are applied in the order
/// Pauli, symmetry, Pauli-like; remaining zeros are reported as numerical.
/// A predicted suppression that numerics contradict is an
/// [`Error::Inconsistent`].
pub fn analyze(setup: &ScatteringSetup, analyzer: &Analyzer) -> Result<Analysis> {
    let m = setup.modes();
    let ic = symmetry_cosets(setup.input(), m);
    let oc = symmetry_cosets(setup.output(), m);
    analyze_with(setup, analyzer, &ic, &oc)
}

pub fn classify(setup: &ScatteringSetup, analyzer: &Analyzer) -> Result<Vec<SuppressionVerdict>> {
    Ok(analyze(setup, analyzer)?.verdicts)
}

/// Sectors suppressed by a dihedral symmetry of the input, the output or both.
pub fn symmetry_suppression_verdicts(
    setup: &ScatteringSetup,
    analyzer: &Analyzer,
) -> Result<Vec<SuppressionVerdict>> {
    let m = setup.modes();
    let ic = symmetry_cosets(setup.input(), m);
    let oc = symmetry_cosets(setup.output(), m);
    let ctx = Context::new(setup, analyzer, &ic, &oc)?;
    let relations = ctx.relations()?;
    ctx.symmetry(&relations)
}

/// The default Pauli-like candidates of a setup: both stabilizers, cyclic
/// groups of eigenvalue-one witnesses and the Young subgroups of the
/// transposition invariances of `a`.
pub fn default_candidates(
    setup: &ScatteringSetup,
    analyzer: &Analyzer,
) -> Result<Vec<PauliCandidate>> {
    let m = setup.modes();
    let ic = symmetry_cosets(setup.input(), m);
    let oc = symmetry_cosets(setup.output(), m);
    let ctx = Context::new(setup, analyzer, &ic, &oc)?;
    let relations = ctx.relations()?;
    ctx.default_candidates(&relations)
}

/// Sectors with `Σ_H χ^λ = 0` for a candidate whose invariance holds pointwise.
pub fn pauli_like_verdicts(
    setup: &ScatteringSetup,
    candidates: &[PauliCandidate],
    analyzer: &Analyzer,
) -> Result<Vec<SuppressionVerdict>> {
    let ctx = Context::new(setup, analyzer, &[], &[])?;
    ctx.pauli_like(candidates)
}

/// `k(σ) = Σ_α o_α i_{σ(α)} mod M` of a Fourier setup, indexed by rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseProfile {
    n: usize,
    m: usize,
    values: Vec<usize>,
}

impl PhaseProfile {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn at(&self, rank: usize) -> usize {
        self.values[rank]
    }

    /// `M^{-N/2} exp(2πi k/M)`.
    pub fn amplitude(&self, rank: usize) -> Complex64 {
        let s = (self.m as f64).powf(-(self.n as f64) / 2.0);
        Complex64::from_polar(
            s,
            2.0 * std::f64::consts::PI * self.values[rank] as f64 / self.m as f64,
        )
    }

    /// Number of permutations with each phase index.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.m];
        for &k in &self.values {
            h[k] += 1;
        }
        h
    }

    /// Whether the multiset of `k` is invariant under `k ↦ k + M/2`.
    pub fn point_symmetric(&self) -> bool {
        if self.m % 2 != 0 {
            return false;
        }
        let h = self.histogram();
        (0..self.m).all(|k| h[k] == h[(k + self.m / 2) % self.m])
    }
}

pub fn phase_profile(setup: &ScatteringSetup) -> Result<PhaseProfile> {
    if !is_fourier(setup.unitary()) {
        return Err(Error::NotFourier);
    }
    let (n, m) = (setup.particles(), setup.modes());
    let group = symmetric_group(n)?;
    let (i, o) = (setup.input(), setup.output());
    let values: Vec<usize> = group
        .elements()
        .iter()
        .map(|s| (0..n).map(|al| o[al] * i[s.images0()[al]]).sum::<usize>() % m)
        .collect();
    let profile = PhaseProfile { n, m, values };
    let a = amplitude_function(setup);
    for r in 0..profile.values.len() {
        if (a.at(r) - profile.amplitude(r)).norm() > FOURIER_TOL {
            return Err(Error::Inconsistent(format!(
                "phase profile disagrees with the amplitude at rank {r}"
            )));
        }
    }
    Ok(profile)
}

/// One point of the amplitude cloud with the number of permutations sharing it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CloudPoint {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Distinct values of `a(σ)` with multiplicities. Fourier setups are grouped
/// by phase index, others by rounding to 1e-12.
pub fn amplitude_cloud(setup: &ScatteringSetup) -> Result<Vec<CloudPoint>> {
    if let Ok(profile) = phase_profile(setup) {
        return Ok(profile
            .histogram()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| {
                let z = Complex64::from_polar(
                    (profile.m as f64).powf(-(profile.n as f64) / 2.0),
                    2.0 * std::f64::consts::PI * k as f64 / profile.m as f64,
                );
                CloudPoint {
                    re: z.re,
                    im: z.im,
                    multiplicity: c,
                }
            })
            .collect());
    }
    let a = amplitude_function(setup);
    let mut groups: BTreeMap<(i64, i64), (Complex64, usize)> = BTreeMap::new();
    for z in a.values() {
        let key = ((z.re * 1e12).round() as i64, (z.im * 1e12).round() as i64);
        groups.entry(key).or_insert((*z, 0)).1 += 1;
    }
    Ok(groups
        .into_values()
        .map(|(z, c)| CloudPoint {
            re: z.re,
            im: z.im,
            multiplicity: c,
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dedupe {
    None,
    /// Pairs related by a simultaneous dihedral relabelling of the modes or
    /// by exchanging input and output are merged.
    Dihedral,
}

impl FromStr for Dedupe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Dedupe::None),
            "dihedral" => Ok(Dedupe::Dihedral),
            other => Err(Error::InvalidModes(format!(
                "unknown dedupe policy {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Dedupe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dedupe::None => "none",
            Dedupe::Dihedral => "dihedral",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub dedupe: Dedupe,
    /// Lifts the particle and mode limits of [`scan`].
    pub allow_large: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            dedupe: Dedupe::None,
            allow_large: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    /// Sorted input mode list.
    pub input: Vec<usize>,
    /// Sorted output mode list.
    pub output: Vec<usize>,
    /// Number of raw pairs represented by this row.
    pub multiplicity: usize,
    pub verdicts: Vec<SuppressionVerdict>,
    pub cyclic: Option<CyclicWitness>,
}

fn occupations(modes: &[usize], m: usize) -> Vec<usize> {
    let mut occ = vec![0; m];
    for &x in modes {
        occ[x] += 1;
    }
    occ
}

impl ScanRow {
    pub fn input_occupations(&self, m: usize) -> Vec<usize> {
        occupations(&self.input, m)
    }

    pub fn output_occupations(&self, m: usize) -> Vec<usize> {
        occupations(&self.output, m)
    }

    pub fn verdict(&self, p: &Partition) -> Option<&SuppressionVerdict> {
        self.verdicts.iter().find(|v| &v.sector == p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualKind {
    /// Zero weight with no mechanism among the documented families.
    Numerical,
    /// A full-cycle witness exists, yet both the trivial and the standard
    /// sectors vanish.
    Inherited,
}

impl fmt::Display for ResidualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResidualKind::Numerical => "numerical",
            ResidualKind::Inherited => "inherited",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub row: usize,
    pub kind: ResidualKind,
    pub sectors: Vec<Partition>,
}

#[derive(Clone, Debug, Default)]
pub struct ScanSummary {
    pub raw_pairs: usize,
    pub rows: usize,
    pub status_counts: BTreeMap<Partition, BTreeMap<Status, usize>>,
    pub residuals: Vec<Residual>,
    /// Rows with a full-cycle witness.
    pub cyclic_cases: usize,
    /// Cyclic rows where exactly the predicted one of the two sectors vanishes.
    pub complementary: usize,
    /// Cyclic rows where both vanish.
    pub inherited: usize,
}

#[derive(Clone, Debug)]
pub struct ScanTable {
    pub n: usize,
    pub m: usize,
    pub dedupe: Dedupe,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

fn transform(modes: &[usize], kind: SymmetryKind, p: usize, m: usize) -> Vec<usize> {
    let mut v: Vec<usize> = modes.iter().map(|&x| dihedral_map(kind, p, x, m)).collect();
    v.sort_unstable();
    v
}

/// Lexicographically least representative of a pair under simultaneous
/// dihedral relabelling and exchange.
pub fn canonical_pair(input: &[usize], output: &[usize], m: usize) -> (Vec<usize>, Vec<usize>) {
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for kind in [SymmetryKind::Translation, SymmetryKind::Reflection] {
        for p in 0..m {
            let a = transform(input, kind, p, m);
            let b = transform(output, kind, p, m);
            for cand in [(a.clone(), b.clone()), (b, a)] {
                if best.as_ref().map_or(true, |x| cand < *x) {
                    best = Some(cand);
                }
            }
        }
    }
    best.expect("at least one transformation")
}

/// Verdicts for every pair of `N`-particle configurations over `M` modes.
pub fn scan(
    n: usize,
    m: usize,
    unitary: &CMatrix,
    options: ScanOptions,
    analyzer: &Analyzer,
) -> Result<ScanTable> {
    if !options.allow_large && (n > SCAN_MAX_PARTICLES || m > SCAN_MAX_MODES) {
        return Err(Error::ResourceGuard(format!(
            "scan limited to N <= {SCAN_MAX_PARTICLES}, M <= {SCAN_MAX_MODES}"
        )));
    }
    if analyzer.degree() != n {
        return Err(Error::DegreeMismatch {
            left: analyzer.degree(),
            right: n,
        });
    }
    if unitary.nrows() != m {
        return Err(Error::InvalidModes(format!(
            "unitary has {} modes, expected {m}",
            unitary.nrows()
        )));
    }
    if options.dedupe == Dedupe::Dihedral && !is_fourier(unitary) {
        return Err(Error::NotFourier);
    }
    let lists = all_mode_lists(n, m);
    let raw_pairs = lists.len() * lists.len();
    let pairs: Vec<((Vec<usize>, Vec<usize>), usize)> = match options.dedupe {
        Dedupe::None => lists
            .iter()
            .flat_map(|i| lists.iter().map(move |o| ((i.clone(), o.clone()), 1)))
            .collect(),
        Dedupe::Dihedral => {
            let mut counts: BTreeMap<(Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
            for i in &lists {
                for o in &lists {
                    *counts.entry(canonical_pair(i, o, m)).or_insert(0) += 1;
                }
            }
            counts.into_iter().collect()
        }
    };
    let cosets: HashMap<Vec<usize>, Vec<SymmetryCoset>> = lists
        .iter()
        .map(|l| (l.clone(), symmetry_cosets(l, m)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|((i, o), mult)| {
            let setup = ScatteringSetup::new(unitary.clone(), i.clone(), o.clone())?;
            let analysis = analyze_with(&setup, analyzer, &cosets[i], &cosets[o])?;
            Ok(ScanRow {
                input: i.clone(),
                output: o.clone(),
                multiplicity: *mult,
                verdicts: analysis.verdicts,
                cyclic: analysis.cyclic,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(n, raw_pairs, &rows);
    Ok(ScanTable {
        n,
        m,
        dedupe: options.dedupe,
        rows,
        summary,
    })
}

fn summarize(n: usize, raw_pairs: usize, rows: &[ScanRow]) -> ScanSummary {
    let mut s = ScanSummary {
        raw_pairs,
        rows: rows.len(),
        ..Default::default()
    };
    let trivial = Partition::trivial(n);
    let standard = (n >= 2).then(|| Partition::standard(n));
    for (idx, row) in rows.iter().enumerate() {
        let mut numerical = Vec::new();
        for v in &row.verdicts {
            *s.status_counts
                .entry(v.sector.clone())
                .or_default()
                .entry(v.status)
                .or_insert(0) += 1;
            if v.status == Status::NumericallySuppressed {
                numerical.push(v.sector.clone());
            }
        }
        if !numerical.is_empty() {
            s.residuals.push(Residual {
                row: idx,
                kind: ResidualKind::Numerical,
                sectors: numerical,
            });
        }
        if let (Some(_), Some(std)) = (&row.cyclic, &standard) {
            s.cyclic_cases += 1;
            let zero = |p: &Partition| row.verdict(p).is_some_and(|v| v.status.is_suppressed());
            if zero(&trivial) && zero(std) {
                s.inherited += 1;
                s.residuals.push(Residual {
                    row: idx,
                    kind: ResidualKind::Inherited,
                    sectors: vec![trivial.clone(), std.clone()],
                });
            } else {
                s.complementary += 1;
            }
        }
    }
    s
}
