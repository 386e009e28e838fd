//! Permutations of `{0, .., n-1}` and enumeration of the symmetric group.
//!
//! Permutations are stored zero-based as their image sequence: position `a`
//! holds `p(a)`. Display and the `from_one_based` constructor use the usual
//! one-based notation.

use std::fmt;

use crate::error::{Error, Result};

/// Largest particle number for which the full group is enumerated (8! = 40320).
pub const MAX_ENUMERATION_N: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from zero-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Validation(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Validation("one-based images must be >= 1".into()));
        }
        Self::from_images(images.iter().map(|&i| i - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// `(self ∘ other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&b| self.images[b]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (a, &b) in self.images.iter().enumerate() {
            inv[b] = a;
        }
        Permutation { images: inv }
    }

    /// Cycle lengths, sorted non-increasing. Fixed points count as 1-cycles.
    pub fn cycle_type(&self) -> CycleType {
        let n = self.len();
        let mut visited = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut a = start;
            while !visited[a] {
                visited[a] = true;
                a = self.images[a];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { lengths }
    }

    /// Position of this permutation in the lexicographic enumeration order.
    pub fn rank(&self) -> usize {
        let n = self.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller_later = self.images[i + 1..]
                .iter()
                .filter(|&&b| b < self.images[i])
                .count();
            rank = rank * (n - i) + smaller_later;
        }
        rank
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_type().lengths.len()
    }

    /// `(-1)^(n - number of cycles)`.
    pub fn sign(&self) -> i8 {
        if (self.len() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", b + 1)?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycleType {
    lengths: Vec<usize>,
}

impl CycleType {
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }
}

/// Iterator over all of `S_n` in lexicographic order of the image sequence.
#[derive(Clone, Debug)]
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lexicographic(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Enumerates `S_n`, identity first. Requires `1 <= n <= MAX_ENUMERATION_N`.
pub fn enumerate(n: usize) -> Result<Permutations> {
    if n == 0 {
        return Err(Error::Domain("particle count must be at least 1".into()));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::SizeLimit {
            what: "particle count for group enumeration",
            actual: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    Ok(Permutations {
        next: Some((0..n).collect()),
    })
}

/// Collects `S_n` into a vector; convenient for index-based parallel loops.
pub fn all(n: usize) -> Result<Vec<Permutation>> {
    Ok(enumerate(n)?.collect())
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
