//! Permutations and finite groups given by permutation generators or by a
//! multiplication table.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::group::{FiniteGroup, Group};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 1..{degree}: {detail}")]
    NotAPermutation { degree: usize, detail: String },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
}

/// A permutation of `0..n`, stored as its image array. Composition is
/// right-to-left: `(p * q)(i) = p(q(i))`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u16>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u16).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<u16>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::NotAPermutation {
                    degree: n,
                    detail: alloc::format!("{:?}", images),
                });
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based one-line notation, e.g. `[2, 1, 3]`.
    pub fn from_one_line(one_based: &[usize]) -> Result<Self, PermError> {
        let n = one_based.len();
        let images = one_based
            .iter()
            .map(|&i| {
                if i == 0 || i > n {
                    Err(PermError::NotAPermutation {
                        degree: n,
                        detail: alloc::format!("{:?}", one_based),
                    })
                } else {
                    Ok((i - 1) as u16)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_images(images)
    }

    /// The transposition of `a` and `b` (0-based).
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = alloc::vec![0u16; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u16;
        }
        Permutation { images }
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let mut seen = alloc::vec![false; self.degree()];
        let mut cycles = 0;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.image(i);
            }
        }
        cycles
    }

    /// Number of inversions, i.e. the Coxeter length.
    pub fn inversions(&self) -> usize {
        let p = &self.images;
        let mut count = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Swaps positions `i` and `i+1`: `self ∘ s_i`.
    pub fn swap_positions(&mut self, i: usize) {
        self.images.swap(i, i + 1);
    }

    /// Swaps values `i` and `i+1`: `s_i ∘ self`.
    pub fn swap_values(&mut self, i: usize) {
        for v in self.images.iter_mut() {
            if *v as usize == i {
                *v = (i + 1) as u16;
            } else if *v as usize == i + 1 {
                *v = i as u16;
            }
        }
    }

    /// One-line notation, 1-based. Digits are concatenated for degree below
    /// ten and separated by dots otherwise.
    pub fn one_line(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|&v| alloc::format!("{}", v + 1)).collect();
        if self.degree() < 10 {
            parts.concat()
        } else {
            parts.join(".")
        }
    }
}

/// The full symmetric group on `n` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricGroup {
    pub degree: usize,
}

impl SymmetricGroup {
    pub fn new(degree: usize) -> Self {
        SymmetricGroup { degree }
    }
}

impl Group for SymmetricGroup {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }
    fn multiply(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }
    fn invert(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }
    fn is_identity(&self, a: &Permutation) -> bool {
        a.is_identity()
    }
}

impl FiniteGroup for SymmetricGroup {
    fn elements(&self) -> Vec<Permutation> {
        let gens: Vec<Permutation> = (0..self.degree.saturating_sub(1))
            .map(|i| Permutation::transposition(self.degree, i, i + 1))
            .collect();
        closure(self, &gens)
    }
}

/// Breadth-first closure of `generators` in `group`, identity first.
pub fn closure<G: Group>(group: &G, generators: &[G::Elem]) -> Vec<G::Elem> {
    let identity = group.identity();
    let mut seen = BTreeSet::new();
    seen.insert(identity.clone());
    let mut out = alloc::vec![identity];
    let mut i = 0;
    while i < out.len() {
        for g in generators {
            let next = group.multiply(&out[i], g);
            if seen.insert(next.clone()) {
                out.push(next);
            }
        }
        i += 1;
    }
    out
}

/// The subgroup of `S_n` generated by a list of permutations.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(PermutationGroup { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }
}

impl Group for PermutationGroup {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }
    fn multiply(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }
    fn invert(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }
}

impl FiniteGroup for PermutationGroup {
    fn elements(&self) -> Vec<Permutation> {
        closure(self, &self.generators)
    }
}

/// A finite group given by its multiplication table on `0..n`.
#[derive(Clone, Debug)]
pub struct TableGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl TableGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, PermError> {
        let n = table.len();
        if n == 0 {
            return Err(PermError::InvalidTable(String::from("empty table")));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&v| v >= n) {
                return Err(PermError::InvalidTable(String::from("rows must have n entries in 0..n")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| PermError::InvalidTable(String::from("no identity element")))?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| PermError::InvalidTable(alloc::format!("element {a} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(PermError::InvalidTable(alloc::format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(TableGroup {
            table,
            identity,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }
}

impl Group for TableGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }
    fn multiply(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }
    fn invert(&self, a: &usize) -> usize {
        self.inverses[*a]
    }
}

impl FiniteGroup for TableGroup {
    fn elements(&self) -> Vec<usize> {
        let mut out = alloc::vec![self.identity];
        out.extend((0..self.order()).filter(|&e| e != self.identity));
        out
    }
}
