//! Young orthogonal representation of `S_n` and exact character tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::partition::{partitions_of, standard_tableaux, Partition, StandardTableau};
use crate::perm::{factorial, symmetric_group, Permutation, SymmetricGroup, MAX_ENUMERATED_DEGREE};
use crate::scalar::Real;

/// Largest degree for which the dense per-element matrix table is built.
pub const MAX_DENSE_DEGREE: usize = 7;

#[derive(Clone, Copy, Debug)]
struct Action<T> {
    diag: T,
    partner: usize,
    off: T,
}

/// One irrep in Young's orthogonal form, basis ordered by
/// [`standard_tableaux`].
#[derive(Clone, Debug)]
pub struct Irrep<T: Real> {
    partition: Partition,
    tableaux: Vec<StandardTableau>,
    // actions[k][t]: how s_k = (k+1 k+2) acts on basis vector t.
    actions: Vec<Vec<Action<T>>>,
    generators: Vec<DMatrix<T>>,
    restriction: Vec<(Partition, usize)>,
}

impl<T: Real> Irrep<T> {
    fn build(partition: &Partition) -> Self {
        let n = partition.size();
        let tableaux = standard_tableaux(partition);
        let d = tableaux.len();
        let index: HashMap<Vec<(usize, usize)>, usize> = tableaux
            .iter()
            .enumerate()
            .map(|(i, t)| (t.positions().to_vec(), i))
            .collect();
        let mut actions = Vec::with_capacity(n.saturating_sub(1));
        for k in 1..n {
            let row = tableaux
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    if t.row_of(k) == t.row_of(k + 1) {
                        Action {
                            diag: T::one(),
                            partner: i,
                            off: T::zero(),
                        }
                    } else if t.col_of(k) == t.col_of(k + 1) {
                        Action {
                            diag: -T::one(),
                            partner: i,
                            off: T::zero(),
                        }
                    } else {
                        let r = T::lit((t.content(k + 1) - t.content(k)) as f64);
                        let diag = T::one() / r;
                        let swapped = t
                            .swapped(k)
                            .expect("distinct rows and columns stay standard");
                        let partner = index[swapped.positions()];
                        Action {
                            diag,
                            partner,
                            off: (T::one() - diag * diag).sqrt(),
                        }
                    }
                })
                .collect();
            actions.push(row);
        }
        let generators = actions
            .iter()
            .map(|acts: &Vec<Action<T>>| {
                let mut m = DMatrix::zeros(d, d);
                for (i, a) in acts.iter().enumerate() {
                    m[(i, i)] = a.diag;
                    if a.partner != i {
                        m[(i, a.partner)] = a.off;
                    }
                }
                m
            })
            .collect();
        let mut restriction = Vec::new();
        if n > 1 {
            let mut offset = 0;
            for row in partition.removable_corners() {
                let mu = partition.remove_box(row).expect("n > 1");
                let dim = mu.dimension();
                restriction.push((mu, offset));
                offset += dim;
            }
        }
        Irrep {
            partition: partition.clone(),
            tableaux,
            actions,
            generators,
            restriction,
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    /// Matrix of `s_k = (k+1 k+2)` for 0-based `k`.
    pub fn generator(&self, k: usize) -> &DMatrix<T> {
        &self.generators[k]
    }

    pub fn generators(&self) -> &[DMatrix<T>] {
        &self.generators
    }

    /// Blocks `(μ, offset)` of the restriction to `S_{n-1}`.
    pub fn restriction(&self) -> &[(Partition, usize)] {
        &self.restriction
    }

    /// `m ← ρ(s_k) m`.
    pub fn apply_left(&self, k: usize, m: &mut DMatrix<T>) {
        let acts = &self.actions[k];
        for (i, a) in acts.iter().enumerate() {
            if a.partner == i {
                if a.diag < T::zero() {
                    m.row_mut(i).neg_mut();
                }
            } else if a.partner > i {
                let j = a.partner;
                let b = acts[j];
                for c in 0..m.ncols() {
                    let x = m[(i, c)];
                    let y = m[(j, c)];
                    m[(i, c)] = a.diag * x + a.off * y;
                    m[(j, c)] = b.off * x + b.diag * y;
                }
            }
        }
    }

    /// `m ← m ρ(s_k)`.
    pub fn apply_right(&self, k: usize, m: &mut DMatrix<T>) {
        let acts = &self.actions[k];
        for (i, a) in acts.iter().enumerate() {
            if a.partner == i {
                if a.diag < T::zero() {
                    m.column_mut(i).neg_mut();
                }
            } else if a.partner > i {
                let j = a.partner;
                let b = acts[j];
                for r in 0..m.nrows() {
                    let x = m[(r, i)];
                    let y = m[(r, j)];
                    m[(r, i)] = a.diag * x + b.off * y;
                    m[(r, j)] = a.off * x + b.diag * y;
                }
            }
        }
    }

    /// `ρ(σ)` assembled from the adjacent-transposition factorization.
    pub fn matrix(&self, sigma: &Permutation) -> DMatrix<T> {
        let mut m = DMatrix::identity(self.dim(), self.dim());
        for &j in &sigma.adjacent_factorization() {
            self.apply_left(j, &mut m);
        }
        m
    }
}

fn build_irreps<T: Real>(n: usize) -> Vec<Irrep<T>> {
    partitions_of(n).iter().map(Irrep::build).collect()
}

/// Per-element matrices of every irrep, row-major, indexed by rank.
pub struct DenseIrreps<T> {
    dims: Vec<usize>,
    blocks: Vec<Vec<T>>,
}

impl<T: Real> DenseIrreps<T> {
    pub fn dim(&self, irrep: usize) -> usize {
        self.dims[irrep]
    }

    /// Row-major `d×d` entries of `ρ^λ(σ)` for the element of rank `rank`.
    pub fn matrix(&self, irrep: usize, rank: usize) -> &[T] {
        let d2 = self.dims[irrep] * self.dims[irrep];
        &self.blocks[irrep][rank * d2..(rank + 1) * d2]
    }

    /// All entries of irrep `irrep`, element-major.
    pub fn block(&self, irrep: usize) -> &[T] {
        &self.blocks[irrep]
    }
}

/// Irreps of `S_n` with characters, the `S_{n-1}` table used by restrictions,
/// and a lazily built dense matrix cache.
pub struct IrrepTable<T: Real = f64> {
    n: usize,
    partitions: Vec<Partition>,
    irreps: Vec<Irrep<T>>,
    index: BTreeMap<Partition, usize>,
    characters: &'static CharacterTable,
    group: &'static SymmetricGroup,
    sub: Option<Box<IrrepTable<T>>>,
    dense: OnceLock<DenseIrreps<T>>,
}

impl<T: Real> IrrepTable<T> {
    pub fn new(n: usize) -> Result<Self> {
        let group = symmetric_group(n)?;
        let characters = character_table(n)?;
        let partitions = partitions_of(n);
        let irreps = build_irreps::<T>(n);
        let index = partitions
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let sub = if n > 1 {
            Some(Box::new(IrrepTable::new(n - 1)?))
        } else {
            None
        };
        Ok(IrrepTable {
            n,
            partitions,
            irreps,
            index,
            characters,
            group,
            sub,
            dense: OnceLock::new(),
        })
    }

    /// Builds the table and fills the dense cache up front.
    pub fn precomputed(n: usize) -> Result<Self> {
        let table = Self::new(n)?;
        table.dense()?;
        Ok(table)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &'static SymmetricGroup {
        self.group
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn irreps(&self) -> &[Irrep<T>] {
        &self.irreps
    }

    pub fn index_of(&self, p: &Partition) -> Result<usize> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::ShapeMismatch {
                partition: p.to_string(),
                n: self.n,
            })
    }

    pub fn irrep(&self, p: &Partition) -> Result<&Irrep<T>> {
        Ok(&self.irreps[self.index_of(p)?])
    }

    pub fn characters(&self) -> &'static CharacterTable {
        self.characters
    }

    pub fn sub_table(&self) -> Option<&IrrepTable<T>> {
        self.sub.as_deref()
    }

    pub fn irrep_matrix(&self, p: &Partition, sigma: &Permutation) -> Result<DMatrix<T>> {
        let idx = self.index_of(p)?;
        self.matrix_at(idx, sigma)
    }

    pub fn matrix_at(&self, irrep: usize, sigma: &Permutation) -> Result<DMatrix<T>> {
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: sigma.degree(),
            });
        }
        if let Some(dense) = self.dense.get() {
            let d = dense.dim(irrep);
            return Ok(DMatrix::from_row_slice(
                d,
                d,
                dense.matrix(irrep, sigma.rank()),
            ));
        }
        Ok(self.irreps[irrep].matrix(sigma))
    }

    pub fn character(&self, p: &Partition, sigma: &Permutation) -> Result<i64> {
        self.characters.character(p, sigma)
    }

    /// Visits `(rank, ρ(σ))` for every element along the adjacent-swap walk.
    pub fn for_each_matrix(&self, irrep: usize, mut f: impl FnMut(usize, &DMatrix<T>)) {
        let rep = &self.irreps[irrep];
        let mut m = DMatrix::identity(rep.dim(), rep.dim());
        let ranks = self.group.walk_ranks();
        f(ranks[0], &m);
        for (t, &j) in self.group.walk_swaps().iter().enumerate() {
            rep.apply_right(j, &mut m);
            f(ranks[t + 1], &m);
        }
    }

    /// Dense per-element matrices, built on first use.
    pub fn dense(&self) -> Result<&DenseIrreps<T>> {
        if self.n > MAX_DENSE_DEGREE {
            return Err(Error::ResourceGuard(format!(
                "dense irrep table limited to n <= {MAX_DENSE_DEGREE}"
            )));
        }
        Ok(self.dense.get_or_init(|| {
            let order = factorial(self.n);
            let mut dims = Vec::new();
            let mut blocks = Vec::new();
            for (idx, rep) in self.irreps.iter().enumerate() {
                let d = rep.dim();
                let mut block = vec![T::zero(); order * d * d];
                self.for_each_matrix(idx, |rank, m| {
                    let dst = &mut block[rank * d * d..(rank + 1) * d * d];
                    for r in 0..d {
                        for c in 0..d {
                            dst[r * d + c] = m[(r, c)];
                        }
                    }
                });
                dims.push(d);
                blocks.push(block);
            }
            DenseIrreps { dims, blocks }
        }))
    }

    /// Checks `χ^{λ̄} = sign · χ^λ` class by class.
    pub fn conjugate_irrep_check(&self, p: &Partition) -> Result<ConjugateCheck> {
        let table = self.characters;
        let l = table.partition_index(p)?;
        let lc = table.partition_index(&p.conjugate())?;
        for (c, class) in table.classes().iter().enumerate() {
            let sign = if (self.n - class.len()) % 2 == 0 {
                1
            } else {
                -1
            };
            if table.value(lc, c) != sign * table.value(l, c) {
                return Ok(ConjugateCheck {
                    conjugate: p.conjugate(),
                    violation: Some(class.clone()),
                });
            }
        }
        Ok(ConjugateCheck {
            conjugate: p.conjugate(),
            violation: None,
        })
    }

    /// Largest entrywise deviation between `ρ^λ(s_k)`, `k < n-1`, and the
    /// block-diagonal sum of the `S_{n-1}` generators.
    pub fn restriction_deviation(&self) -> f64 {
        let Some(sub) = self.sub.as_deref() else {
            return 0.0;
        };
        let mut worst = 0.0f64;
        for rep in &self.irreps {
            let d = rep.dim();
            for k in 0..self.n.saturating_sub(2) {
                let mut expected = DMatrix::<T>::zeros(d, d);
                for (mu, offset) in rep.restriction() {
                    let g = sub.irrep(mu).expect("sub-table holds every μ").generator(k);
                    expected
                        .view_mut((*offset, *offset), (g.nrows(), g.ncols()))
                        .copy_from(g);
                }
                for (a, b) in rep.generator(k).iter().zip(expected.iter()) {
                    worst = worst.max((*a - *b).abs().to_f64_lossy());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjugateCheck {
    pub conjugate: Partition,
    /// First class where the relation fails.
    pub violation: Option<Partition>,
}

impl ConjugateCheck {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exact integer characters; rows are irreps and columns conjugacy classes,
/// both listed in [`partitions_of`] order.
#[derive(Debug)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    class_sizes: Vec<usize>,
    values: Vec<Vec<i64>>,
    index: BTreeMap<Partition, usize>,
}

impl CharacterTable {
    fn build(n: usize) -> Self {
        let partitions = partitions_of(n);
        let irreps = build_irreps::<f64>(n);
        let reps: Vec<Permutation> = partitions.iter().map(class_representative).collect();
        let values = irreps
            .iter()
            .map(|rep| {
                reps.iter()
                    .map(|s| rep.matrix(s).trace().round() as i64)
                    .collect()
            })
            .collect();
        let class_sizes = partitions
            .iter()
            .map(|mu| factorial(n) / centralizer_order(mu))
            .collect();
        let index = partitions
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        CharacterTable {
            n,
            partitions,
            class_sizes,
            values,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Cycle types labelling the columns.
    pub fn classes(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.class_sizes[class]
    }

    pub fn partition_index(&self, p: &Partition) -> Result<usize> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::ShapeMismatch {
                partition: p.to_string(),
                n: self.n,
            })
    }

    /// Column of a cycle type of degree `n`.
    pub fn class_index(&self, cycle_type: &Partition) -> usize {
        self.index[cycle_type]
    }

    pub fn value(&self, irrep: usize, class: usize) -> i64 {
        self.values[irrep][class]
    }

    pub fn row(&self, irrep: usize) -> &[i64] {
        &self.values[irrep]
    }

    pub fn character(&self, p: &Partition, sigma: &Permutation) -> Result<i64> {
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: sigma.degree(),
            });
        }
        let l = self.partition_index(p)?;
        Ok(self.values[l][self.class_index(&sigma.cycle_type())])
    }
}

/// `z_μ = Π_k k^{m_k} m_k!`.
pub fn centralizer_order(cycle_type: &Partition) -> usize {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in cycle_type.parts() {
        *counts.entry(k).or_insert(0) += 1;
    }
    counts
        .iter()
        .map(|(&k, &m)| k.pow(m as u32) * factorial(m))
        .product()
}

/// The permutation `(1 .. μ₁)(μ₁+1 .. μ₁+μ₂)..` of cycle type `μ`.
pub fn class_representative(cycle_type: &Partition) -> Permutation {
    let n = cycle_type.size();
    let mut cycles = Vec::new();
    let mut next = 1;
    for &len in cycle_type.parts() {
        cycles.push((next..next + len).collect());
        next += len;
    }
    Permutation::from_cycles(n, &cycles).expect("consecutive cycles are disjoint")
}

/// Cached character table of `S_n`, `1 <= n <= 8`.
pub fn character_table(n: usize) -> Result<&'static CharacterTable> {
    static CACHE: [OnceLock<CharacterTable>; MAX_ENUMERATED_DEGREE + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATED_DEGREE + 1];
    if n == 0 || n > MAX_ENUMERATED_DEGREE {
        return Err(Error::UnsupportedDegree {
            n,
            min: 1,
            max: MAX_ENUMERATED_DEGREE,
        });
    }
    Ok(CACHE[n].get_or_init(|| CharacterTable::build(n)))
}
