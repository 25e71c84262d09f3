//! Permutations of `{1..n}` and explicitly enumerated subgroups of `S_n`.
//!
//! Composition follows `(s ∘ t)(x) = s(t(x))`. Positions are 1-based at the
//! API surface and stored 0-based.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Largest degree for which the full group is enumerated and cached.
pub const MAX_ENUMERATED_DEGREE: usize = 8;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from its 1-based one-line form `[s(1), .., s(n)]`.
    pub fn from_images(one_line: &[usize]) -> Result<Self> {
        if one_line.iter().any(|&x| x == 0) {
            return Err(Error::InvalidPermutation(format!(
                "one-line entries are 1-based: {one_line:?}"
            )));
        }
        Self::from_images0(one_line.iter().map(|&x| x - 1).collect())
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images0(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "not a bijection of 0..{n}: {images:?}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of degree `n` from 1-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &x in cycle {
                if x == 0 || x > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {x} outside 1..={n}"
                    )));
                }
                if used[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "entry {x} appears in more than one cycle"
                    )));
                }
                used[x - 1] = true;
            }
            for (k, &x) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[x - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)` or `id`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "id" || text == "()" {
            return Ok(Self::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            let Some(stripped) = rest_trim.strip_prefix('(') else {
                return Err(Error::InvalidPermutation(format!(
                    "expected '(' in {text:?}"
                )));
            };
            let Some(close) = stripped.find(')') else {
                return Err(Error::InvalidPermutation(format!(
                    "unclosed cycle in {text:?}"
                )));
            };
            let body = &stripped[..close];
            let cycle = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = stripped[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] + 1
    }

    pub fn images0(&self) -> &[usize] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut result = Self::identity(self.degree());
        for _ in 0..k {
            result = self * &result;
        }
        result
    }

    /// All cycles including fixed points, each starting at its smallest
    /// element, ordered by that element. Entries are 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(Vec::len).collect())
            .expect("cycle lengths form a partition")
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i == x)
            .count()
    }

    pub fn sign(&self) -> i32 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, num_integer::lcm)
    }

    /// Lehmer rank; identity is 0 and the reversal is `n! - 1`.
    pub fn rank(&self) -> usize {
        let n = self.degree();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&y| y < self.images[i])
                .count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    pub fn unrank(rank: usize, n: usize) -> Result<Permutation> {
        if rank >= factorial(n) {
            return Err(Error::RankOutOfRange { rank, n });
        }
        let mut digits = vec![0; n];
        let mut r = rank;
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = r % base;
            r /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let images = digits.iter().map(|&d| pool.remove(d)).collect();
        Ok(Permutation { images })
    }

    /// Adjacent transpositions `s_j = (j+1 j+2)` (0-based `j`) with
    /// `self = s_{j_m} ∘ .. ∘ s_{j_1}`, returned as `[j_1, .., j_m]`.
    pub fn adjacent_factorization(&self) -> Vec<usize> {
        let mut line = self.images.clone();
        let mut swaps = Vec::new();
        let n = line.len();
        for pass in 0..n {
            let mut swapped = false;
            for j in 0..n.saturating_sub(1 + pass) {
                if line[j] > line[j + 1] {
                    line.swap(j, j + 1);
                    swaps.push(j);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        swaps
    }

    /// Embeds into `S_m`, `m >= n`, fixing the extra points.
    pub fn extend(&self, m: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.degree()..m);
        Permutation { images }
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
            .expect("composition of equal-degree permutations")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// The elements of `S_n` in rank order together with an adjacent-transposition
/// walk (Steinhaus–Johnson–Trotter) through them.
pub struct SymmetricGroup {
    n: usize,
    elements: Vec<Permutation>,
    inverse: Vec<usize>,
    walk_swaps: Vec<usize>,
    walk_ranks: Vec<usize>,
}

impl SymmetricGroup {
    fn build(n: usize) -> Self {
        let order = factorial(n);
        let elements: Vec<_> = (0..order)
            .map(|r| Permutation::unrank(r, n).expect("rank in range"))
            .collect();
        let inverse = elements.iter().map(|p| p.inverse().rank()).collect();
        let (walk_swaps, walk_ranks) = johnson_trotter(n);
        SymmetricGroup {
            n,
            elements,
            inverse,
            walk_swaps,
            walk_ranks,
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, rank: usize) -> &Permutation {
        &self.elements[rank]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn inverse_rank(&self, rank: usize) -> usize {
        self.inverse[rank]
    }

    pub fn compose_rank(&self, a: usize, b: usize) -> usize {
        (&self.elements[a] * &self.elements[b]).rank()
    }

    /// Position swapped at each step of the walk; step `t` maps the
    /// permutation of rank `walk_ranks()[t]` to `walk_ranks()[t+1]` by
    /// right-multiplying with `s_j`.
    pub fn walk_swaps(&self) -> &[usize] {
        &self.walk_swaps
    }

    pub fn walk_ranks(&self) -> &[usize] {
        &self.walk_ranks
    }
}

fn johnson_trotter(n: usize) -> (Vec<usize>, Vec<usize>) {
    // Even's variant: values move in their direction while a smaller
    // neighbour sits there.
    let mut line: Vec<usize> = (0..n).collect();
    let mut left: Vec<bool> = vec![true; n];
    let mut swaps = Vec::with_capacity(factorial(n).saturating_sub(1));
    let mut ranks = vec![0];
    loop {
        let mut mobile: Option<usize> = None;
        for pos in 0..n {
            let v = line[pos];
            let target = if left[v] {
                pos.checked_sub(1)
            } else if pos + 1 < n {
                Some(pos + 1)
            } else {
                None
            };
            if let Some(t) = target {
                if line[t] < v && mobile.map_or(true, |m| line[m] < v) {
                    mobile = Some(pos);
                }
            }
        }
        let Some(pos) = mobile else { break };
        let v = line[pos];
        let j = if left[v] { pos - 1 } else { pos };
        line.swap(j, j + 1);
        for w in (v + 1)..n {
            left[w] = !left[w];
        }
        swaps.push(j);
        ranks.push(
            Permutation {
                images: line.clone(),
            }
            .rank(),
        );
    }
    (swaps, ranks)
}

/// Cached `S_n` for `1 <= n <= 8`.
pub fn symmetric_group(n: usize) -> Result<&'static SymmetricGroup> {
    static CACHE: [OnceLock<SymmetricGroup>; MAX_ENUMERATED_DEGREE + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATED_DEGREE + 1];
    if n == 0 || n > MAX_ENUMERATED_DEGREE {
        return Err(Error::UnsupportedDegree {
            n,
            min: 1,
            max: MAX_ENUMERATED_DEGREE,
        });
    }
    Ok(CACHE[n].get_or_init(|| SymmetricGroup::build(n)))
}

/// An explicitly enumerated subgroup of `S_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subgroup {
    n: usize,
    ranks: Vec<usize>,
    elements: Vec<Permutation>,
    description: String,
}

impl Subgroup {
    /// Closure of `generators` under composition.
    pub fn generated_by(
        n: usize,
        generators: &[Permutation],
        description: impl Into<String>,
    ) -> Result<Self> {
        for g in generators {
            if g.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: g.degree(),
                });
            }
        }
        let mut found: BTreeMap<usize, Permutation> = BTreeMap::new();
        let id = Permutation::identity(n);
        found.insert(0, id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q = g * &p;
                let r = q.rank();
                if !found.contains_key(&r) {
                    found.insert(r, q.clone());
                    queue.push_back(q);
                }
            }
        }
        let (ranks, elements) = found.into_iter().unzip();
        Ok(Subgroup {
            n,
            ranks,
            elements,
            description: description.into(),
        })
    }

    pub fn trivial(n: usize) -> Self {
        Subgroup {
            n,
            ranks: vec![0],
            elements: vec![Permutation::identity(n)],
            description: "{id}".into(),
        }
    }

    /// Permutations preserving each block of positions (1-based blocks).
    pub fn young(n: usize, blocks: &[Vec<usize>], description: impl Into<String>) -> Result<Self> {
        let mut gens = Vec::new();
        for block in blocks {
            for w in block.windows(2) {
                gens.push(Permutation::from_cycles(n, &[vec![w[0], w[1]]])?);
            }
        }
        Self::generated_by(n, &gens, description)
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::young(n, &[(1..=n).collect()], format!("S_{n}"))
    }

    /// The Young subgroup of permutations exchanging equal entries of `modes`.
    pub fn stabilizer(modes: &[usize]) -> Self {
        let n = modes.len();
        let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (alpha, &m) in modes.iter().enumerate() {
            blocks.entry(m).or_default().push(alpha + 1);
        }
        let blocks: Vec<Vec<usize>> = blocks.into_values().collect();
        let body: Vec<String> = modes.iter().map(usize::to_string).collect();
        Self::young(n, &blocks, format!("stab({})", body.join(",")))
            .expect("blocks lie inside 1..=n")
    }

    pub fn cyclic(t: &Permutation) -> Self {
        Self::generated_by(t.degree(), std::slice::from_ref(t), format!("<{t}>"))
            .expect("generator has the subgroup degree")
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Ranks of the elements, ascending.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.n && self.ranks.binary_search(&p.rank()).is_ok()
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }

    /// Multiset of cycle types of the elements.
    pub fn cycle_type_counts(&self) -> BTreeMap<Partition, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.elements {
            *counts.entry(e.cycle_type()).or_insert(0) += 1;
        }
        counts
    }

    /// Left coset `t ∘ H` as a set of ranks.
    pub fn left_coset_ranks(&self, t: &Permutation) -> BTreeSet<usize> {
        self.elements.iter().map(|h| (t * h).rank()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn compose_examples() {
        let t = p("(1 3)", 3);
        assert_eq!(&Permutation::identity(3) * &t, t);
        assert!((&p("(1 2)", 3) * &p("(1 2)", 3)).is_identity());
        assert_eq!(&p("(1 2)", 3) * &p("(2 3)", 3), p("(1 2 3)", 3));
    }

    #[test]
    fn compose_degree_mismatch() {
        let err = Permutation::identity(3).compose(&Permutation::identity(4));
        assert_eq!(err, Err(Error::DegreeMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn inverse_examples() {
        assert!(Permutation::identity(4).inverse().is_identity());
        assert_eq!(p("(1 2 3)", 3).inverse(), p("(1 3 2)", 3));
        assert_eq!(p("(1 2)(3 4)", 4).inverse(), p("(1 2)(3 4)", 4));
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(Permutation::identity(4).cycle_type().parts(), &[1, 1, 1, 1]);
        assert_eq!(p("(1 2 3)(4 5)", 5).cycle_type().parts(), &[3, 2]);
        assert_eq!(p("(1 4 2 5)(3 6)", 6).cycle_type().parts(), &[4, 2]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Permutation::identity(5).rank(), 0);
        let last = Permutation::unrank(factorial(5) - 1, 5).unwrap();
        assert_eq!(last.one_line(), vec![5, 4, 3, 2, 1]);
        for r in 0..120 {
            assert_eq!(Permutation::unrank(r, 5).unwrap().rank(), r);
        }
        assert_eq!(
            Permutation::unrank(120, 5),
            Err(Error::RankOutOfRange { rank: 120, n: 5 })
        );
    }

    #[test]
    fn rank_matches_lexicographic_enumeration() {
        // Oracle: sort all one-line forms lexicographically.
        let mut all: Vec<Vec<usize>> = Vec::new();
        fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for x in 1..=n {
                if !prefix.contains(&x) {
                    prefix.push(x);
                    rec(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        rec(&mut Vec::new(), 4, &mut all);
        for (r, line) in all.iter().enumerate() {
            assert_eq!(Permutation::from_images(line).unwrap().rank(), r);
        }
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(Subgroup::stabilizer(&[0, 1, 2, 3]).order(), 1);
        assert_eq!(Subgroup::stabilizer(&[0, 0, 1, 1]).order(), 4);
        assert_eq!(Subgroup::stabilizer(&[0, 0, 0]).order(), 6);
    }

    #[test]
    fn stabilizer_preserves_modes() {
        let modes = [2, 0, 2, 1, 0];
        let h = Subgroup::stabilizer(&modes);
        assert_eq!(h.order(), 2 * 2);
        for g in h.elements() {
            let ginv = g.inverse();
            for alpha in 1..=modes.len() {
                assert_eq!(modes[ginv.apply(alpha) - 1], modes[alpha - 1]);
            }
        }
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(Subgroup::cyclic(&Permutation::identity(3)).order(), 1);
        assert_eq!(Subgroup::cyclic(&p("(1 2 3 4 5 6)", 6)).order(), 6);
        assert_eq!(Subgroup::cyclic(&p("(1 2)(3 4)", 4)).order(), 2);
    }

    #[test]
    fn subgroup_orders_divide_group_order() {
        for s in ["(1 2 3)(4 5)", "(1 2)", "(1 2 3 4)", "id"] {
            let h = Subgroup::cyclic(&p(s, 5));
            assert_eq!(120 % h.order(), 0);
            assert!(h.contains(&Permutation::identity(5)));
        }
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["id", "(1 2 3)(4 5)", "(1 3 6 2 4 5)", "(4 6)"] {
            assert_eq!(p(s, 6).to_string(), s);
        }
        assert_eq!(p("(2,1)", 3).to_string(), "(1 2)");
        assert!(Permutation::parse("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse("(1 4)", 3).is_err());
    }

    #[test]
    fn adjacent_factorization_rebuilds_permutation() {
        let g = symmetric_group(5).unwrap();
        for s in g.elements() {
            let mut acc = Permutation::identity(5);
            for &j in &s.adjacent_factorization() {
                let sj = Permutation::from_cycles(5, &[vec![j + 1, j + 2]]).unwrap();
                acc = &sj * &acc;
            }
            assert_eq!(&acc, s);
        }
    }

    #[test]
    fn walk_visits_every_element_once() {
        for n in 1..=6 {
            let g = symmetric_group(n).unwrap();
            let ranks: BTreeSet<usize> = g.walk_ranks().iter().copied().collect();
            assert_eq!(ranks.len(), factorial(n));
            assert_eq!(g.walk_swaps().len(), factorial(n) - 1);
            let mut cur = Permutation::identity(n);
            for (t, &j) in g.walk_swaps().iter().enumerate() {
                let sj = Permutation::from_cycles(n, &[vec![j + 1, j + 2]]).unwrap();
                cur = &cur * &sj;
                assert_eq!(cur.rank(), g.walk_ranks()[t + 1]);
            }
        }
    }

    #[test]
    fn sign_and_order() {
        assert_eq!(p("(1 2 3)(4 5)", 5).sign(), -1);
        assert_eq!(p("(1 2 3)(4 5)", 5).order(), 6);
        assert_eq!(p("(1 2)(3 4)", 4).sign(), 1);
    }
}
