//! Combinatorics of type-A partial flag varieties.
//!
//! A shape `λ = (λ_1,…,λ_N)` with `n = Σλ_j` indexes the torus fixed points of
//! `Fl_λ` by tuples `I = (I_1,…,I_N)` of disjoint subsets of `[n]` with
//! `|I_j| = λ_j`. All indices are 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FlagShape {
    lambda: Vec<usize>,
    prefix: Vec<usize>,
}

impl FlagShape {
    pub fn new(lambda: Vec<usize>) -> Result<Self, Error> {
        if lambda.is_empty() {
            return Err(Error::Invalid("shape needs at least one part".into()));
        }
        if lambda.contains(&0) {
            return Err(Error::Invalid(format!("shape {lambda:?} has a zero part")));
        }
        let mut prefix = vec![0];
        for l in &lambda {
            prefix.push(prefix.last().unwrap() + l);
        }
        Ok(FlagShape { lambda, prefix })
    }

    /// `Gr(m, n)` as the shape `(m, n-m)`.
    pub fn grassmannian(m: usize, n: usize) -> Result<Self, Error> {
        if m == 0 || m >= n {
            return Err(Error::Invalid(format!("Gr({m},{n}) needs 0 < m < n")));
        }
        FlagShape::new(vec![m, n - m])
    }

    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    /// Number of parts `N`.
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `λ_j`, 1-based.
    pub fn part(&self, j: usize) -> usize {
        self.lambda[j - 1]
    }

    /// `λ^{(k)} = λ_1 + … + λ_k`, with `λ^{(0)} = 0`.
    pub fn prefix(&self, k: usize) -> usize {
        self.prefix[k]
    }

    pub fn n(&self) -> usize {
        self.prefix[self.lambda.len()]
    }

    /// `dim Fl_λ = Σ_{i<j} λ_i λ_j`.
    pub fn dim(&self) -> usize {
        let mut d = 0;
        for i in 0..self.lambda.len() {
            for j in i + 1..self.lambda.len() {
                d += self.lambda[i] * self.lambda[j];
            }
        }
        d
    }

    pub fn is_grassmannian(&self) -> bool {
        self.lambda.len() == 2
    }

    /// `n! / ∏ λ_j!`, the number of fixed points.
    pub fn multinomial(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut seen = 0u128;
        for &l in &self.lambda {
            for i in 1..=l as u128 {
                seen += 1;
                acc = acc * seen / i;
            }
        }
        acc
    }
}

impl TryFrom<Vec<usize>> for FlagShape {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self, Error> {
        FlagShape::new(v)
    }
}

impl From<FlagShape> for Vec<usize> {
    fn from(s: FlagShape) -> Self {
        s.lambda
    }
}

impl fmt::Display for FlagShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambda.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for FlagShape {
    type Err = Error;

    /// Accepts `3,3`, `(3,3)` or `[3,3]`.
    fn from_str(s: &str) -> Result<Self, Error> {
        FlagShape::new(parse_list(s)?)
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, ParseError> {
    let t = s.trim();
    let t = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
        .unwrap_or(t)
        .trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| ParseError::new(format!("bad integer `{x}` in `{s}`")))
        })
        .collect()
}

/// A fixed point `I ∈ I_λ` with its cumulative unions cached.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IndexTuple {
    parts: Vec<Vec<usize>>,
    cumulative: Vec<Vec<usize>>,
}

impl IndexTuple {
    /// Validates that the parts are disjoint and cover `[n]`; sorts each part.
    pub fn new(parts: Vec<Vec<usize>>) -> Result<Self, Error> {
        let mut parts = parts;
        let n: usize = parts.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for p in &mut parts {
            p.sort_unstable();
            for &i in p.iter() {
                if i == 0 || i > n || seen[i] {
                    return Err(Error::Invalid(format!(
                        "parts {parts:?} do not partition 1..={n}"
                    )));
                }
                seen[i] = true;
            }
        }
        if parts.iter().any(Vec::is_empty) {
            return Err(Error::Invalid("empty part in index tuple".into()));
        }
        Ok(Self::from_sorted(parts))
    }

    fn from_sorted(parts: Vec<Vec<usize>>) -> Self {
        let mut cumulative = Vec::with_capacity(parts.len());
        let mut acc: Vec<usize> = Vec::new();
        for p in &parts {
            acc.extend_from_slice(p);
            acc.sort_unstable();
            cumulative.push(acc.clone());
        }
        IndexTuple { parts, cumulative }
    }

    /// The Grassmannian tuple `(I, [n] − I)`.
    pub fn from_subset(subset: &[usize], n: usize) -> Result<Self, Error> {
        let rest: Vec<usize> = (1..=n).filter(|i| !subset.contains(i)).collect();
        IndexTuple::new(vec![subset.to_vec(), rest])
    }

    pub fn shape(&self) -> FlagShape {
        FlagShape::new(self.parts.iter().map(Vec::len).collect()).expect("parts are nonempty")
    }

    pub fn n(&self) -> usize {
        self.cumulative.last().map_or(0, Vec::len)
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// `I_j`, 1-based.
    pub fn part(&self, j: usize) -> &[usize] {
        &self.parts[j - 1]
    }

    /// `I^{(k)} = I_1 ∪ … ∪ I_k` sorted, 1-based.
    pub fn cumulative(&self, k: usize) -> &[usize] {
        &self.cumulative[k - 1]
    }

    /// `i^{(k)}_a`, the `a`-th smallest element of `I^{(k)}`.
    pub fn element(&self, k: usize, a: usize) -> usize {
        self.cumulative[k - 1][a - 1]
    }

    /// Index `j` of the part containing `i`.
    pub fn part_of(&self, i: usize) -> usize {
        self.parts
            .iter()
            .position(|p| p.binary_search(&i).is_ok())
            .map(|j| j + 1)
            .expect("element of [n]")
    }

    pub fn dim(&self) -> usize {
        dim_cell(self)
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, p) in self.parts.iter().enumerate() {
            if j > 0 {
                write!(f, "|")?;
            }
            let items: Vec<String> = p.iter().map(|i| i.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for IndexTuple {
    type Err = Error;

    /// Parses `{2,4,6}|{1,3,5}`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut parts = Vec::new();
        for chunk in s.split('|') {
            let c = chunk.trim();
            let inner = c
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| ParseError::new(format!("expected `{{…}}`, got `{c}`")))?;
            let mut part = Vec::new();
            for x in inner.split(',').filter(|x| !x.trim().is_empty()) {
                part.push(
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| ParseError::new(format!("bad index `{x}`")))?,
                );
            }
            parts.push(part);
        }
        IndexTuple::new(parts)
    }
}

/// A bijection of `[n]`, stored as images of `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &i in &images {
            if i == 0 || i > n || seen[i] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// The longest element `s_0 : i ↦ n + 1 − i`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            images: (1..=n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &s) in self.images.iter().enumerate() {
            inv[s - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation {
            images: other.images.iter().map(|&i| self.apply(i)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &s)| s == i + 1)
    }
}

/// All tuples of the shape, ordered lexicographically on the concatenated parts.
pub fn enumerate_tuples(shape: &FlagShape) -> Vec<IndexTuple> {
    fn rec(
        shape: &FlagShape,
        j: usize,
        remaining: &[usize],
        acc: &mut Vec<Vec<usize>>,
        out: &mut Vec<IndexTuple>,
    ) {
        if j == shape.len() {
            out.push(IndexTuple::from_sorted(acc.clone()));
            return;
        }
        for combo in combinations(remaining, shape.lambda[j]) {
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|x| combo.binary_search(x).is_err())
                .collect();
            acc.push(combo);
            rec(shape, j + 1, &rest, acc, out);
            acc.pop();
        }
    }
    let all: Vec<usize> = (1..=shape.n()).collect();
    let mut out = Vec::new();
    rec(shape, 0, &all, &mut Vec::new(), &mut out);
    out
}

/// `k`-subsets of a sorted slice in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (pos, &first) in items.iter().enumerate() {
        if items.len() - pos < k {
            break;
        }
        for mut tail in combinations(&items[pos + 1..], k - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// `dim Ω_I = #{(a, b) ∈ I_j × I_k : j < k, a > b}`.
pub fn dim_cell(tuple: &IndexTuple) -> usize {
    let mut d = 0;
    for (j, pj) in tuple.parts.iter().enumerate() {
        for pk in &tuple.parts[j + 1..] {
            for &a in pj {
                d += pk.iter().filter(|&&b| a > b).count();
            }
        }
    }
    d
}

/// A partition stored without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, Error> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// The parts padded with zeros to length `m`.
    pub fn padded(&self, m: usize) -> Vec<usize> {
        let mut v = self.0.clone();
        v.resize(m.max(v.len()), 0);
        v
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", items.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `(2,1)`; `()` is the empty partition.
    fn from_str(s: &str) -> Result<Self, Error> {
        Partition::new(parse_list(s)?)
    }
}

/// `λ_j = n − m − (i_j − j)` for a sorted `m`-subset.
pub fn subset_to_partition(subset: &[usize], m: usize, n: usize) -> Result<Partition, Error> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != m || s.iter().any(|&i| i == 0 || i > n) {
        return Err(Error::Invalid(format!("{subset:?} is not an {m}-subset of 1..={n}")));
    }
    Partition::new(
        s.iter()
            .enumerate()
            .map(|(j, &i)| n - m - (i - (j + 1)))
            .collect(),
    )
}

/// Inverse of [`subset_to_partition`]; rejects partitions outside the `m × (n−m)` box.
pub fn partition_to_subset(p: &Partition, m: usize, n: usize) -> Result<Vec<usize>, Error> {
    if p.parts().len() > m || p.parts().first().is_some_and(|&l| l > n - m) {
        return Err(Error::Invalid(format!(
            "partition {p} does not fit in the {m}×{} box",
            n - m
        )));
    }
    Ok(p
        .padded(m)
        .iter()
        .enumerate()
        .map(|(j, &l)| n - m - l + j + 1)
        .collect())
}

/// `σ^{-1}(I)`, applied elementwise to each part.
pub fn act(sigma: &Permutation, tuple: &IndexTuple) -> IndexTuple {
    let inv = sigma.inverse();
    let parts = tuple
        .parts
        .iter()
        .map(|p| {
            let mut q: Vec<usize> = p.iter().map(|&i| inv.apply(i)).collect();
            q.sort_unstable();
            q
        })
        .collect();
    IndexTuple::from_sorted(parts)
}

/// `p(I, j, i) = |I_j ∩ {1, …, i−1}|`.
pub fn p_invariant(tuple: &IndexTuple, j: usize, i: usize) -> usize {
    tuple.part(j).iter().filter(|&&x| x < i).count()
}

/// The index of the part of `I` containing `i^{(k)}_a`.
pub fn j_invariant(tuple: &IndexTuple, k: usize, a: usize) -> usize {
    tuple.part_of(tuple.element(k, a))
}

/// Whether `I` and `J` differ by swapping `i` and `j` (and `I ≠ J`).
pub fn are_neighbors(a: &IndexTuple, b: &IndexTuple, i: usize, j: usize) -> bool {
    let pi = a.part_of(i);
    let pj = a.part_of(j);
    if pi == pj {
        return false;
    }
    let swap = |x: usize| {
        if x == i {
            j
        } else if x == j {
            i
        } else {
            x
        }
    };
    a.parts.iter().zip(&b.parts).all(|(pa, pb)| {
        let mut q: Vec<usize> = pa.iter().map(|&x| swap(x)).collect();
        q.sort_unstable();
        &q == pb
    })
}

/// The tuple obtained by exchanging `i` and `j`.
pub fn transpose(tuple: &IndexTuple, i: usize, j: usize) -> IndexTuple {
    let mut images: Vec<usize> = (1..=tuple.n()).collect();
    images.swap(i - 1, j - 1);
    act(&Permutation { images }, tuple)
}
