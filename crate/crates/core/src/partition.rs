//! Integer partitions, Young diagrams and standard tableaux.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::irreps::character_table;
use crate::perm::Subgroup;

/// Weakly decreasing positive parts. Ordered reverse-lexicographically, so
/// `(n)` sorts first and `(1,..,1)` last.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not descending: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    /// `(n)`.
    pub fn trivial(n: usize) -> Self {
        Partition { parts: vec![n] }
    }

    /// `(1,..,1)`.
    pub fn sign(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    /// `(n-1,1)`; for `n = 1` this is `(1)`.
    pub fn standard(n: usize) -> Self {
        if n <= 1 {
            return Self::trivial(n.max(1));
        }
        Partition {
            parts: vec![n - 1, 1],
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (0..cols)
            .map(|c| self.parts.iter().filter(|&&r| r > c).count())
            .collect();
        Partition { parts }
    }

    pub fn hook_length(&self, row: usize, col: usize) -> usize {
        let arm = self.parts[row] - col - 1;
        let leg = self.parts[row + 1..].iter().filter(|&&r| r > col).count();
        arm + leg + 1
    }

    /// Irrep dimension by the hook-length formula.
    pub fn dimension(&self) -> usize {
        let n = self.size();
        let num: u128 = (1..=n as u128).product();
        let hooks: u128 = self
            .parts
            .iter()
            .enumerate()
            .flat_map(|(row, &len)| (0..len).map(move |col| (row, col)))
            .map(|(row, col)| self.hook_length(row, col) as u128)
            .product();
        (num / hooks) as usize
    }

    /// Rows whose last box can be removed.
    pub fn removable_corners(&self) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&r| r + 1 == self.parts.len() || self.parts[r + 1] < self.parts[r])
            .collect()
    }

    /// Partition with one box removed from row `row`, `None` if empty.
    pub fn remove_box(&self, row: usize) -> Option<Partition> {
        let mut parts = self.parts.clone();
        parts[row] -= 1;
        parts.retain(|&x| x > 0);
        if parts.is_empty() {
            None
        } else {
            Some(Partition { parts })
        }
    }

    /// Dominance order `self ⊵ other` for partitions of the same size.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let mut a = 0;
        let mut b = 0;
        for k in 0..self.len().max(other.len()) {
            a += self.parts.get(k).copied().unwrap_or(0);
            b += other.parts.get(k).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, `(n)` first.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// A standard Young tableau; entries are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
    position: Vec<(usize, usize)>,
}

impl StandardTableau {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let n = shape.size();
        let mut position = vec![(usize::MAX, usize::MAX); n];
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                if x == 0 || x > n || position[x - 1].0 != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "bad tableau filling {rows:?}"
                    )));
                }
                position[x - 1] = (r, c);
                let left_ok = c == 0 || row[c - 1] < x;
                let up_ok = r == 0 || rows[r - 1][c] < x;
                if !left_ok || !up_ok {
                    return Err(Error::InvalidPartition(format!(
                        "tableau not standard {rows:?}"
                    )));
                }
            }
        }
        Ok(StandardTableau {
            shape,
            rows,
            position,
        })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row_of(&self, k: usize) -> usize {
        self.position[k - 1].0
    }

    pub fn col_of(&self, k: usize) -> usize {
        self.position[k - 1].1
    }

    /// Content `col - row` of the box holding `k`.
    pub fn content(&self, k: usize) -> i64 {
        let (r, c) = self.position[k - 1];
        c as i64 - r as i64
    }

    pub(crate) fn positions(&self) -> &[(usize, usize)] {
        &self.position
    }

    /// Tableau with `k` and `k+1` exchanged, if still standard.
    pub fn swapped(&self, k: usize) -> Option<StandardTableau> {
        let mut rows = self.rows.clone();
        let (r1, c1) = self.position[k - 1];
        let (r2, c2) = self.position[k];
        rows[r1][c1] = k + 1;
        rows[r2][c2] = k;
        StandardTableau::from_rows(rows).ok()
    }
}

/// Standard tableaux of `shape` in last-letter order: grouped by the row
/// holding `n` (top row first), each group ordered like the tableaux of the
/// shape with that corner removed.
pub fn standard_tableaux(shape: &Partition) -> Vec<StandardTableau> {
    let n = shape.size();
    if n == 1 {
        return vec![StandardTableau::from_rows(vec![vec![1]]).expect("single box")];
    }
    let mut out = Vec::new();
    for row in shape.removable_corners() {
        let smaller = shape.remove_box(row).expect("n > 1");
        for t in standard_tableaux(&smaller) {
            let mut rows = t.rows.clone();
            if row == rows.len() {
                rows.push(vec![n]);
            } else {
                rows[row].push(n);
            }
            out.push(
                StandardTableau::from_rows(rows).expect("adding n at a corner stays standard"),
            );
        }
    }
    out
}

/// Multiplicities of the labels in `occupations`, sorted descending.
pub fn multiplicity_partition(occupations: &[usize]) -> Result<Partition> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &m in occupations {
        *counts.entry(m).or_insert(0) += 1;
    }
    Partition::from_unsorted(counts.into_values().collect())
}

/// `Σ_{σ ∈ stab(occupations)} χ^λ(σ)`.
pub fn stabilizer_character_sum(shape: &Partition, occupations: &[usize]) -> Result<i64> {
    let n = shape.size();
    if occupations.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: occupations.len(),
        });
    }
    let table = character_table(n)?;
    let lambda = table.partition_index(shape)?;
    let stab = Subgroup::stabilizer(occupations);
    Ok(stab
        .cycle_type_counts()
        .iter()
        .map(|(class, &count)| count as i64 * table.value(lambda, table.class_index(class)))
        .sum())
}

/// Generalized Pauli test: the projection of `occupations` onto sector
/// `shape` is nonzero. Decided by the stabilizer character sum.
pub fn gamas_admissible(shape: &Partition, occupations: &[usize]) -> Result<bool> {
    Ok(stabilizer_character_sum(shape, occupations)? != 0)
}

/// Dominance shortcut for [`gamas_admissible`].
pub fn gamas_dominance(shape: &Partition, occupations: &[usize]) -> Result<bool> {
    if occupations.len() != shape.size() {
        return Err(Error::LengthMismatch {
            expected: shape.size(),
            found: occupations.len(),
        });
    }
    Ok(shape.dominates(&multiplicity_partition(occupations)?))
}

/// Searches for a filling of the diagram with the labels such that no label
/// repeats within a column.
pub fn gamas_filling_exists(shape: &Partition, occupations: &[usize]) -> bool {
    if occupations.len() != shape.size() {
        return false;
    }
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &m in occupations {
        *counts.entry(m).or_insert(0) += 1;
    }
    let mut labels: Vec<usize> = counts.into_values().collect();
    labels.sort_unstable_by(|a, b| b.cmp(a));
    let columns = shape.conjugate().parts().to_vec();

    // Assign each column a set of distinct labels of the column's size.
    fn fill(col: usize, columns: &[usize], remaining: &mut Vec<usize>) -> bool {
        if col == columns.len() {
            return remaining.iter().all(|&r| r == 0);
        }
        choose(col, columns[col], 0, columns, remaining)
    }
    fn choose(
        col: usize,
        need: usize,
        from: usize,
        columns: &[usize],
        remaining: &mut Vec<usize>,
    ) -> bool {
        if need == 0 {
            return fill(col + 1, columns, remaining);
        }
        for label in from..remaining.len() {
            if remaining[label] > 0 {
                remaining[label] -= 1;
                let ok = choose(col, need - 1, label + 1, columns, remaining);
                remaining[label] += 1;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    fill(0, &columns, &mut labels)
}
