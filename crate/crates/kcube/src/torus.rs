//! The k-ary n-cube as an implicit graph over radix-k digit strings.
//!
//! A vertex is an n-digit radix-k string, stored as one integer code with the
//! leftmost digit most significant. Two vertices are adjacent exactly when
//! their Lee distance is 1, i.e. they differ by +-1 (mod k) in one digit.

use crate::error::{Error, Result};

/// Radix `k` and dimension `n` of a k-ary n-cube. The vertex count `k^n`
/// must fit in a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Torus {
    k: u64,
    n: u32,
}

/// A vertex, identified by its integer code in `0..k^n`.
///
/// Codes are only meaningful relative to the torus that produced them;
/// construct through [`Torus::vertex`] or [`Torus::encode`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex(u64);

impl Vertex {
    pub fn code(self) -> u64 {
        self.0
    }
}

impl Torus {
    pub fn new(k: u64, n: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams {
                k,
                n,
                reason: "radix must be at least 2",
            });
        }
        if n == 0 {
            return Err(Error::InvalidParams {
                k,
                n,
                reason: "dimension must be at least 1",
            });
        }
        if k.checked_pow(n).is_none() {
            return Err(Error::InvalidParams {
                k,
                n,
                reason: "vertex count k^n overflows u64",
            });
        }
        Ok(Self { k, n })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertex_count(&self) -> u64 {
        self.k.pow(self.n)
    }

    /// Degree of every vertex: 2n, except n for k=2 where +1 and -1 steps
    /// coincide.
    pub fn degree(&self) -> u64 {
        if self.k == 2 {
            u64::from(self.n)
        } else {
            2 * u64::from(self.n)
        }
    }

    pub fn vertex(&self, code: u64) -> Result<Vertex> {
        if code < self.vertex_count() {
            Ok(Vertex(code))
        } else {
            Err(Error::VertexOutOfRange {
                code,
                count: self.vertex_count(),
            })
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.vertex_count()).map(Vertex)
    }

    /// Packs digits (leftmost most significant) into a vertex code.
    pub fn encode(&self, digits: &[u64]) -> Result<Vertex> {
        if digits.len() != self.n as usize {
            return Err(Error::WrongDigitCount {
                expected: self.n,
                got: digits.len(),
            });
        }
        let mut code = 0u64;
        for (position, &digit) in digits.iter().enumerate() {
            if digit >= self.k {
                return Err(Error::DigitOutOfRange {
                    digit,
                    position,
                    k: self.k,
                });
            }
            code = code * self.k + digit;
        }
        Ok(Vertex(code))
    }

    pub fn decode(&self, v: Vertex) -> Vec<u64> {
        debug_assert!(v.0 < self.vertex_count());
        let mut digits = vec![0u64; self.n as usize];
        let mut rest = v.0;
        for slot in digits.iter_mut().rev() {
            *slot = rest % self.k;
            rest /= self.k;
        }
        digits
    }

    /// Digit in 1-indexed dimension `dim` (dimension 1 is leftmost).
    pub fn digit(&self, v: Vertex, dim: u32) -> Result<u64> {
        let stride = self.stride(dim)?;
        Ok((v.0 / stride) % self.k)
    }

    /// Place value of dimension `dim`: k^(n-dim).
    fn stride(&self, dim: u32) -> Result<u64> {
        if dim == 0 || dim > self.n {
            return Err(Error::DimensionOutOfRange { dim, n: self.n });
        }
        Ok(self.k.pow(self.n - dim))
    }

    /// Lee weight: sum over digits of min(d, k - d).
    pub fn lee_weight(&self, v: Vertex) -> u64 {
        let mut total = 0;
        let mut rest = v.0;
        for _ in 0..self.n {
            let d = rest % self.k;
            total += d.min(self.k - d);
            rest /= self.k;
        }
        total
    }

    /// Lee distance: the Lee weight of the digit-wise difference mod k.
    pub fn lee_distance(&self, x: Vertex, y: Vertex) -> u64 {
        let mut total = 0;
        let (mut rx, mut ry) = (x.0, y.0);
        for _ in 0..self.n {
            let (dx, dy) = (rx % self.k, ry % self.k);
            let diff = (dx + self.k - dy) % self.k;
            total += diff.min(self.k - diff);
            rx /= self.k;
            ry /= self.k;
        }
        total
    }

    /// Number of digit positions where `x` and `y` differ.
    pub fn differing_digits(&self, x: Vertex, y: Vertex) -> u32 {
        let mut count = 0;
        let (mut rx, mut ry) = (x.0, y.0);
        for _ in 0..self.n {
            if rx % self.k != ry % self.k {
                count += 1;
            }
            rx /= self.k;
            ry /= self.k;
        }
        count
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.lee_distance(u, v) == 1
    }

    /// All vertices at Lee distance 1, in ascending code order.
    pub fn neighbors(&self, v: Vertex) -> VertexSet {
        debug_assert!(v.0 < self.vertex_count());
        let mut codes = Vec::with_capacity(2 * self.n as usize);
        let mut stride = 1u64;
        let mut rest = v.0;
        for _ in 0..self.n {
            let d = rest % self.k;
            let up = (d + 1) % self.k;
            let down = (d + self.k - 1) % self.k;
            let base = v.0 - d * stride;
            codes.push(base + up * stride);
            if down != up {
                codes.push(base + down * stride);
            }
            stride *= self.k;
            rest /= self.k;
        }
        codes.sort_unstable();
        codes.dedup();
        VertexSet {
            torus: *self,
            codes,
        }
    }

    /// Vertices adjacent to both `u` and `v`. The endpoints are distinct by
    /// contract and never belong to the result.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Result<VertexSet> {
        if u == v {
            return Err(Error::IdenticalVertices);
        }
        self.neighbors(u).intersection(&self.neighbors(v))
    }

    /// Splits the torus into k subcubes along dimension `dim` (1-indexed).
    pub fn decompose(&self, dim: u32) -> Result<Decomposition> {
        if self.n < 2 {
            return Err(Error::Unsupported {
                op: "decompose",
                requires: "n >= 2",
            });
        }
        self.stride(dim)?;
        Ok(Decomposition { torus: *self, dim })
    }

    /// Every undirected edge exactly once, as unordered code pairs. Pairs are
    /// produced by stepping each digit +1 mod k (and only from digit 0 when
    /// k=2), so each edge appears for exactly one endpoint.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |v| {
            (1..=self.n).filter_map(move |dim| {
                let stride = self.k.pow(self.n - dim);
                let d = (v.0 / stride) % self.k;
                if self.k == 2 && d == 1 {
                    return None;
                }
                let up = (d + 1) % self.k;
                Some((v, Vertex(v.0 - d * stride + up * stride)))
            })
        })
    }

    pub fn edge_count(&self) -> u64 {
        self.vertex_count() * self.degree() / 2
    }

    /// Digit-string rendering: digits are concatenated for k <= 10 and
    /// dot-separated otherwise.
    pub fn vertex_string(&self, v: Vertex) -> String {
        let digits = self.decode(v);
        if self.k <= 10 {
            digits.iter().map(|d| d.to_string()).collect()
        } else {
            digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    pub fn vertex_from_string(&self, s: &str) -> Result<Vertex> {
        let digits: Vec<u64> = if self.k <= 10 {
            s.chars()
                .map(|c| c.to_digit(10).map(u64::from).ok_or(Error::WrongDigitCount {
                    expected: self.n,
                    got: s.chars().count(),
                }))
                .collect::<Result<_>>()?
        } else {
            s.split('.')
                .map(|part| {
                    part.parse::<u64>().map_err(|_| Error::WrongDigitCount {
                        expected: self.n,
                        got: s.split('.').count(),
                    })
                })
                .collect::<Result<_>>()?
        };
        self.encode(&digits)
    }
}

/// A sorted, duplicate-free set of vertices of one torus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexSet {
    torus: Torus,
    codes: Vec<u64>,
}

impl VertexSet {
    pub fn empty(torus: Torus) -> Self {
        Self {
            torus,
            codes: Vec::new(),
        }
    }

    /// Builds a set from arbitrary codes, validating, sorting, and removing
    /// duplicates.
    pub fn from_codes(torus: Torus, codes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut codes: Vec<u64> = codes.into_iter().collect();
        for &code in &codes {
            torus.vertex(code)?;
        }
        codes.sort_unstable();
        codes.dedup();
        Ok(Self { torus, codes })
    }

    pub fn from_vertices(torus: Torus, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        Self::from_codes(torus, vertices.into_iter().map(Vertex::code))
    }

    /// Codes must already be sorted and duplicate-free.
    pub(crate) fn from_sorted_codes(torus: Torus, codes: Vec<u64>) -> Self {
        debug_assert!(codes.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(codes.last().is_none_or(|&c| c < torus.vertex_count()));
        Self { torus, codes }
    }

    pub fn torus(&self) -> Torus {
        self.torus
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.codes.binary_search(&v.0).is_ok()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.codes.iter().map(|&c| Vertex(c))
    }

    /// Inserts a vertex; returns false if it was already present.
    pub fn insert(&mut self, v: Vertex) -> Result<bool> {
        self.torus.vertex(v.0)?;
        match self.codes.binary_search(&v.0) {
            Ok(_) => Ok(false),
            Err(at) => {
                self.codes.insert(at, v.0);
                Ok(true)
            }
        }
    }

    fn check_same_torus(&self, other: &Self) -> Result<()> {
        if self.torus == other.torus {
            Ok(())
        } else {
            Err(Error::TorusMismatch {
                left_k: self.torus.k,
                left_n: self.torus.n,
                right_k: other.torus.k,
                right_n: other.torus.n,
            })
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same_torus(other)?;
        let mut codes = Vec::with_capacity(self.codes.len() + other.codes.len());
        let (mut i, mut j) = (0, 0);
        while i < self.codes.len() && j < other.codes.len() {
            match self.codes[i].cmp(&other.codes[j]) {
                std::cmp::Ordering::Less => {
                    codes.push(self.codes[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    codes.push(other.codes[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    codes.push(self.codes[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        codes.extend_from_slice(&self.codes[i..]);
        codes.extend_from_slice(&other.codes[j..]);
        Ok(Self {
            torus: self.torus,
            codes,
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same_torus(other)?;
        let codes = self
            .codes
            .iter()
            .copied()
            .filter(|c| other.codes.binary_search(c).is_ok())
            .collect();
        Ok(Self {
            torus: self.torus,
            codes,
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_same_torus(other)?;
        let codes = self
            .codes
            .iter()
            .copied()
            .filter(|c| other.codes.binary_search(c).is_err())
            .collect();
        Ok(Self {
            torus: self.torus,
            codes,
        })
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.check_same_torus(other)?;
        Ok(self
            .codes
            .iter()
            .all(|c| other.codes.binary_search(c).is_ok()))
    }
}

/// A split of a torus into k pairwise-isomorphic subcubes along one
/// dimension. Part j holds the vertices whose digit in that dimension is j.
#[derive(Clone, Copy, Debug)]
pub struct Decomposition {
    torus: Torus,
    dim: u32,
}

impl Decomposition {
    pub fn torus(&self) -> Torus {
        self.torus
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn part_count(&self) -> u64 {
        self.torus.k
    }

    /// Index of the part containing `v`: its digit in the split dimension.
    pub fn part_index(&self, v: Vertex) -> u64 {
        self.torus.digit(v, self.dim).expect("dim validated at construction")
    }

    /// All vertices of part `j`, in ascending code order.
    pub fn part(&self, j: u64) -> Result<VertexSet> {
        let t = &self.torus;
        if j >= t.k {
            return Err(Error::DigitOutOfRange {
                digit: j,
                position: self.dim as usize - 1,
                k: t.k,
            });
        }
        let suffix_count = t.k.pow(t.n - self.dim);
        let prefix_count = t.k.pow(self.dim - 1);
        let mut codes = Vec::with_capacity((prefix_count * suffix_count) as usize);
        for prefix in 0..prefix_count {
            let base = (prefix * t.k + j) * suffix_count;
            codes.extend(base..base + suffix_count);
        }
        Ok(VertexSet::from_sorted_codes(*t, codes))
    }

    /// The vertex of part `j` that agrees with `v` everywhere outside the
    /// split dimension.
    pub fn counterpart(&self, v: Vertex, j: u64) -> Result<Vertex> {
        let t = &self.torus;
        if j >= t.k {
            return Err(Error::DigitOutOfRange {
                digit: j,
                position: self.dim as usize - 1,
                k: t.k,
            });
        }
        let stride = t.k.pow(t.n - self.dim);
        let own = (v.code() / stride) % t.k;
        Ok(Vertex(v.code() - own * stride + j * stride))
    }

    /// The k-1 counterparts of `v` in the other parts. For k=3 these two
    /// vertices and `v` form a triangle.
    pub fn pair_vertices(&self, v: Vertex) -> VertexSet {
        let own = self.part_index(v);
        let codes = (0..self.torus.k)
            .filter(|&j| j != own)
            .map(|j| self.counterpart(v, j).expect("j < k").code())
            .collect();
        VertexSet::from_sorted_codes(self.torus, codes)
    }
}
