//! Functions on `S_n`, their Fourier transforms and the convolution algebra.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::irreps::IrrepTable;
use crate::partition::Partition;
use crate::perm::{factorial, symmetric_group, Permutation, Subgroup};
use crate::scalar::Real;

/// Complex values on `S_n`, indexed by permutation rank.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFunction<T: Real = f64> {
    n: usize,
    values: Vec<Complex<T>>,
}

impl<T: Real> GroupFunction<T> {
    pub fn zeros(n: usize) -> Result<Self> {
        let order = symmetric_group(n)?.order();
        Ok(GroupFunction {
            n,
            values: vec![Complex::new(T::zero(), T::zero()); order],
        })
    }

    pub fn from_values(n: usize, values: Vec<Complex<T>>) -> Result<Self> {
        let order = symmetric_group(n)?.order();
        if values.len() != order {
            return Err(Error::LengthMismatch {
                expected: order,
                found: values.len(),
            });
        }
        Ok(GroupFunction { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(&Permutation) -> Complex<T>) -> Result<Self> {
        let g = symmetric_group(n)?;
        Ok(GroupFunction {
            n,
            values: g.elements().iter().map(&mut f).collect(),
        })
    }

    pub fn delta(tau: &Permutation) -> Result<Self> {
        let mut f = Self::zeros(tau.degree())?;
        f.values[tau.rank()] = Complex::new(T::one(), T::zero());
        Ok(f)
    }

    pub fn constant(n: usize, c: Complex<T>) -> Result<Self> {
        Ok(GroupFunction {
            n,
            values: vec![c; symmetric_group(n)?.order()],
        })
    }

    /// `σ ↦ sign(σ)`.
    pub fn sign(n: usize) -> Result<Self> {
        Self::from_fn(n, |s| Complex::new(T::lit(s.sign() as f64), T::zero()))
    }

    /// `σ ↦ χ^λ(σ)`.
    pub fn character(table: &IrrepTable<T>, p: &Partition) -> Result<Self> {
        let ct = table.characters();
        let l = ct.partition_index(p)?;
        Self::from_fn(table.degree(), |s| {
            Complex::new(
                T::lit(ct.value(l, ct.class_index(&s.cycle_type())) as f64),
                T::zero(),
            )
        })
    }

    /// Normalized indicator `I_H`: `1/|H|` on `H`, zero elsewhere.
    pub fn indicator(h: &Subgroup) -> Result<Self> {
        let mut f = Self::zeros(h.degree())?;
        let w = T::one() / T::lit(h.order() as f64);
        for &r in h.ranks() {
            f.values[r] = Complex::new(w, T::zero());
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn get(&self, sigma: &Permutation) -> Complex<T> {
        self.values[sigma.rank()]
    }

    pub fn at(&self, rank: usize) -> Complex<T> {
        self.values[rank]
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        GroupFunction {
            n: self.n,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|v| v * c)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Pointwise product.
    pub fn pointwise(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(GroupFunction { n: self.n, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(GroupFunction { n: self.n, values })
    }

    /// `f★(σ) = conj f(σ⁻¹)`.
    pub fn star(&self) -> Self {
        let g = symmetric_group(self.n).expect("degree validated at construction");
        let values = (0..self.values.len())
            .map(|r| self.values[g.inverse_rank(r)].conj())
            .collect();
        GroupFunction { n: self.n, values }
    }

    /// `σ ↦ f(σ⁻¹)` without conjugation.
    pub fn reversed(&self) -> Self {
        let g = symmetric_group(self.n).expect("degree validated at construction");
        let values = (0..self.values.len())
            .map(|r| self.values[g.inverse_rank(r)])
            .collect();
        GroupFunction { n: self.n, values }
    }

    /// `σ ↦ f(t⁻¹ ∘ σ)`.
    pub fn shift_left(&self, t: &Permutation) -> Result<Self> {
        if t.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: t.degree(),
            });
        }
        let g = symmetric_group(self.n)?;
        let tinv = t.inverse();
        let values = g
            .elements()
            .iter()
            .map(|s| self.values[(&tinv * s).rank()])
            .collect();
        Ok(GroupFunction { n: self.n, values })
    }

    /// `σ ↦ f(σ ∘ t)`.
    pub fn shift_right(&self, t: &Permutation) -> Result<Self> {
        if t.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: t.degree(),
            });
        }
        let g = symmetric_group(self.n)?;
        let values = g
            .elements()
            .iter()
            .map(|s| self.values[(s * t).rank()])
            .collect();
        Ok(GroupFunction { n: self.n, values })
    }

    /// `(f * g)(σ) = Σ_τ f(σ ∘ τ⁻¹) g(τ)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let group = symmetric_group(self.n)?;
        let mut out = Self::zeros(self.n)?;
        for (rt, &gv) in other.values.iter().enumerate() {
            if gv == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            // σ = ρ ∘ τ runs over the group as ρ = σ ∘ τ⁻¹ does.
            let tau = group.element(rt);
            for (rr, &fv) in self.values.iter().enumerate() {
                let sigma = group.element(rr) * tau;
                out.values[sigma.rank()] += fv * gv;
            }
        }
        Ok(out)
    }

    /// `(f, g) = Σ_σ f(σ⁻¹) g(σ)`.
    pub fn scalar_product(&self, other: &Self) -> Result<Complex<T>> {
        self.check(other)?;
        let group = symmetric_group(self.n)?;
        Ok((0..self.values.len())
            .map(|r| self.values[group.inverse_rank(r)] * other.values[r])
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b))
    }

    /// `{f, g} = (f★, g) = Σ_σ conj f(σ) g(σ)`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        self.check(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b))
    }

    /// `(f * g, h)`.
    pub fn triple_product(&self, g: &Self, h: &Self) -> Result<Complex<T>> {
        self.convolve(g)?.scalar_product(h)
    }

    pub fn norm_sqr(&self) -> T {
        self.values
            .iter()
            .map(|v| v.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }
}

/// Complex matrix blocks `f̂(λ)` for every irrep, in table order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFunction<T: Real = f64> {
    n: usize,
    blocks: Vec<(Partition, DMatrix<Complex<T>>)>,
}

impl<T: Real> SpectralFunction<T> {
    /// Validates presence and shape of every block against `table`.
    pub fn from_blocks(
        table: &IrrepTable<T>,
        mut blocks: BTreeMap<Partition, DMatrix<Complex<T>>>,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(table.partitions().len());
        for p in table.partitions() {
            let m = blocks
                .remove(p)
                .ok_or_else(|| Error::MissingBlock(p.to_string()))?;
            let d = p.dimension();
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::LengthMismatch {
                    expected: d * d,
                    found: m.len(),
                });
            }
            out.push((p.clone(), m));
        }
        if let Some(extra) = blocks.keys().next() {
            return Err(Error::ShapeMismatch {
                partition: extra.to_string(),
                n: table.degree(),
            });
        }
        Ok(SpectralFunction {
            n: table.degree(),
            blocks: out,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[(Partition, DMatrix<Complex<T>>)] {
        &self.blocks
    }

    pub fn block(&self, p: &Partition) -> Option<&DMatrix<Complex<T>>> {
        self.blocks.iter().find(|(q, _)| q == p).map(|(_, m)| m)
    }

    pub fn block_at(&self, idx: usize) -> &DMatrix<Complex<T>> {
        &self.blocks[idx].1
    }

    /// Blockwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|((p, a), (_, b))| (p.clone(), a * b))
            .collect();
        Ok(SpectralFunction { n: self.n, blocks })
    }

    pub fn adjoint(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|(p, m)| (p.clone(), dagger(m)))
            .collect();
        SpectralFunction { n: self.n, blocks }
    }

    /// `Σ_λ (d_λ/n!) Tr f̂(λ)`, the value at the identity after inversion.
    pub fn weighted_trace(&self) -> Complex<T> {
        let order = T::lit(factorial(self.n) as f64);
        self.blocks
            .iter()
            .map(|(p, m)| m.trace() * (T::lit(p.dimension() as f64) / order))
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|((_, a), (_, b))| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(T::zero(), T::max)
    }
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Conjugate transpose.
pub fn dagger<T: Real>(m: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    m.transpose().map(|x| x.conj())
}

fn complexify<T: Real>(m: &DMatrix<T>) -> DMatrix<Complex<T>> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// `f̂(λ) = Σ_σ f(σ) ρ^λ(σ)`, one adjacent-swap walk per irrep.
pub fn ft<T: Real>(f: &GroupFunction<T>, table: &IrrepTable<T>) -> Result<SpectralFunction<T>> {
    if f.degree() != table.degree() {
        return Err(Error::DegreeMismatch {
            left: table.degree(),
            right: f.degree(),
        });
    }
    let blocks = (0..table.partitions().len())
        .into_par_iter()
        .map(|idx| {
            let d = table.irreps()[idx].dim();
            let mut acc = DMatrix::from_element(d, d, czero::<T>());
            table.for_each_matrix(idx, |rank, m| {
                let v = f.values[rank];
                if v != czero() {
                    for (a, &x) in acc.iter_mut().zip(m.iter()) {
                        *a += v * x;
                    }
                }
            });
            (table.partitions()[idx].clone(), acc)
        })
        .collect();
    Ok(SpectralFunction {
        n: f.degree(),
        blocks,
    })
}

/// `f(σ) = Σ_λ (d_λ/n!) Tr[ρ^λ(σ⁻¹) F(λ)]`.
pub fn ift<T: Real>(spec: &SpectralFunction<T>, table: &IrrepTable<T>) -> Result<GroupFunction<T>> {
    if spec.degree() != table.degree() {
        return Err(Error::DegreeMismatch {
            left: table.degree(),
            right: spec.degree(),
        });
    }
    let mut out = GroupFunction::zeros(table.degree())?;
    let order = T::lit(factorial(table.degree()) as f64);
    for (idx, p) in table.partitions().iter().enumerate() {
        let block = spec
            .blocks
            .get(idx)
            .filter(|(q, _)| q == p)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::MissingBlock(p.to_string()))?;
        let w = T::lit(p.dimension() as f64) / order;
        // Tr[ρ(σ)ᵀ F] is the entrywise sum, as ρ(σ⁻¹) = ρ(σ)ᵀ.
        table.for_each_matrix(idx, |rank, m| {
            let mut s = czero::<T>();
            for (a, &x) in block.iter().zip(m.iter()) {
                s += a * x;
            }
            out.values[rank] += s * w;
        });
    }
    Ok(out)
}

/// The cycle `(i i+1 .. n)`, which maps `n` to `i`.
pub fn coset_transversal(i: usize, n: usize) -> Permutation {
    Permutation::from_cycles(n, &[(i..=n).collect()]).expect("contiguous cycle")
}

/// Fourier transform by splitting `S_n` into the left cosets `σ_i S_{n-1}`.
/// Inner transforms over `S_{n-1}` are computed once per coset and shared by
/// all irreps through the block-diagonal restriction.
pub fn fast_ft<T: Real>(
    f: &GroupFunction<T>,
    table: &IrrepTable<T>,
) -> Result<SpectralFunction<T>> {
    let n = table.degree();
    if f.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: f.degree(),
        });
    }
    let Some(sub) = table.sub_table() else {
        return ft(f, table);
    };
    let sub_group = symmetric_group(n - 1)?;
    let inner: Vec<(Permutation, SpectralFunction<T>)> = (1..=n)
        .map(|i| {
            let sigma_i = coset_transversal(i, n);
            let values = sub_group
                .elements()
                .iter()
                .map(|tau| f.values[(&sigma_i * &tau.extend(n)).rank()])
                .collect();
            let g = GroupFunction { n: n - 1, values };
            Ok((sigma_i, ft(&g, sub)?))
        })
        .collect::<Result<_>>()?;
    let blocks = table
        .irreps()
        .iter()
        .enumerate()
        .map(|(idx, rep)| {
            let d = rep.dim();
            let mut acc = DMatrix::from_element(d, d, czero::<T>());
            for (sigma_i, spec) in &inner {
                let mut stacked = DMatrix::from_element(d, d, czero::<T>());
                for (mu, offset) in rep.restriction() {
                    let b = spec.block(mu).expect("sub-transform holds every μ");
                    stacked
                        .view_mut((*offset, *offset), (b.nrows(), b.ncols()))
                        .copy_from(b);
                }
                let rho = complexify(&table.matrix_at(idx, sigma_i)?);
                acc += rho * stacked;
            }
            Ok((rep.partition().clone(), acc))
        })
        .collect::<Result<_>>()?;
    Ok(SpectralFunction { n, blocks })
}

/// A matrix representation of `S_n`.
pub trait Representation<T: Real> {
    fn degree(&self) -> usize;
    fn dim(&self) -> usize;
    fn matrix(&self, sigma: &Permutation) -> DMatrix<Complex<T>>;
}

pub struct IrrepRep<'a, T: Real> {
    pub table: &'a IrrepTable<T>,
    pub partition: Partition,
}

impl<T: Real> Representation<T> for IrrepRep<'_, T> {
    fn degree(&self) -> usize {
        self.table.degree()
    }

    fn dim(&self) -> usize {
        self.partition.dimension()
    }

    fn matrix(&self, sigma: &Permutation) -> DMatrix<Complex<T>> {
        complexify(
            &self
                .table
                .irrep_matrix(&self.partition, sigma)
                .expect("partition of table degree"),
        )
    }
}

/// Left-regular representation on `ℂ[S_n]`, basis ordered by rank.
pub struct RegularRep {
    pub n: usize,
}

impl<T: Real> Representation<T> for RegularRep {
    fn degree(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        factorial(self.n)
    }

    fn matrix(&self, sigma: &Permutation) -> DMatrix<Complex<T>> {
        let d = factorial(self.n);
        let group = symmetric_group(self.n).expect("supported degree");
        let mut m = DMatrix::from_element(d, d, czero::<T>());
        for (r, tau) in group.elements().iter().enumerate() {
            m[((sigma * tau).rank(), r)] = Complex::new(T::one(), T::zero());
        }
        m
    }
}

/// Defining representation on `ℂ^n`: `e_α ↦ e_{σ(α)}`.
pub struct PermutationRep {
    pub n: usize,
}

impl<T: Real> Representation<T> for PermutationRep {
    fn degree(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn matrix(&self, sigma: &Permutation) -> DMatrix<Complex<T>> {
        let mut m = DMatrix::from_element(self.n, self.n, czero::<T>());
        for (a, &b) in sigma.images0().iter().enumerate() {
            m[(b, a)] = Complex::new(T::one(), T::zero());
        }
        m
    }
}

/// Block-diagonal sum of representations of the same degree, optionally
/// conjugated by a fixed unitary basis change.
pub struct DirectSum<'a, T: Real> {
    pub parts: Vec<Box<dyn Representation<T> + Sync + 'a>>,
    pub basis: Option<DMatrix<Complex<T>>>,
}

impl<T: Real> Representation<T> for DirectSum<'_, T> {
    fn degree(&self) -> usize {
        self.parts.first().map_or(0, |p| p.degree())
    }

    fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).sum()
    }

    fn matrix(&self, sigma: &Permutation) -> DMatrix<Complex<T>> {
        let d = self.dim();
        let mut m = DMatrix::from_element(d, d, czero::<T>());
        let mut offset = 0;
        for p in &self.parts {
            let b = p.matrix(sigma);
            m.view_mut((offset, offset), (b.nrows(), b.ncols()))
                .copy_from(&b);
            offset += b.nrows();
        }
        match &self.basis {
            Some(u) => u * m * dagger(u),
            None => m,
        }
    }
}

/// `P̂^μ = (d_μ/n!) Σ_σ χ^μ(σ⁻¹) ρ(σ)`.
pub fn isotypic_projector<T: Real>(
    mu: &Partition,
    table: &IrrepTable<T>,
    rho: &dyn Representation<T>,
) -> Result<DMatrix<Complex<T>>> {
    let n = table.degree();
    if rho.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: rho.degree(),
        });
    }
    let ct = table.characters();
    let l = ct.partition_index(mu)?;
    let d = rho.dim();
    let mut acc = DMatrix::from_element(d, d, czero::<T>());
    for sigma in symmetric_group(n)?.elements() {
        let chi = ct.value(l, ct.class_index(&sigma.cycle_type()));
        if chi != 0 {
            acc += rho.matrix(sigma) * Complex::new(T::lit(chi as f64), T::zero());
        }
    }
    let w = T::lit(mu.dimension() as f64) / T::lit(factorial(n) as f64);
    Ok(acc * Complex::new(w, T::zero()))
}
