//! Internal bitset adjacency for exhaustive work on small tori.
//!
//! Vertex sets are `Vec<u64>` word masks; all hot loops are allocation-free
//! given a prebuilt [`Scratch`]. Observable behavior matches the implicit
//! digit-arithmetic graph in `torus`.

use crate::error::{Error, Result};
use crate::torus::Torus;

const MAX_BITMAP_BYTES: u128 = 1 << 30;

pub(crate) struct DenseGraph {
    nv: usize,
    words: usize,
    rows: Vec<u64>,
}

impl DenseGraph {
    pub fn build(t: &Torus, vertex_ceiling: u64) -> Result<Self> {
        let nv64 = t.vertex_count();
        if nv64 > vertex_ceiling {
            return Err(Error::CeilingExceeded {
                what: "vertex count",
                amount: nv64 as u128,
                ceiling: vertex_ceiling as u128,
            });
        }
        let nv = nv64 as usize;
        let words = nv.div_ceil(64);
        let bytes = nv as u128 * words as u128 * 8;
        if bytes > MAX_BITMAP_BYTES {
            return Err(Error::CeilingExceeded {
                what: "adjacency bitmap bytes",
                amount: bytes,
                ceiling: MAX_BITMAP_BYTES,
            });
        }
        let mut rows = vec![0u64; nv * words];
        for v in t.vertices() {
            let base = v.code() as usize * words;
            for w in t.neighbors(v).iter() {
                set_bit(&mut rows[base..base + words], w.code() as usize);
            }
        }
        Ok(Self { nv, words, rows })
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Writes the complement of `removed` over the vertex range into `pool`.
    pub fn fill_survivors(&self, removed: &[u64], pool: &mut Vec<u64>) {
        pool.clear();
        pool.extend(removed.iter().map(|w| !w));
        mask_tail(pool, self.nv);
    }

    /// Flood fill from `start` within `scratch.pool`, consuming the reached
    /// bits from the pool. The component lands in `scratch.comp`. Returns the
    /// component size. `start` must be set in the pool.
    pub fn flood(&self, start: usize, scratch: &mut Scratch) -> u64 {
        let Scratch {
            pool,
            frontier,
            next,
            comp,
        } = scratch;
        zero(frontier);
        zero(comp);
        set_bit(frontier, start);
        set_bit(comp, start);
        clear_bit(pool, start);
        let mut size = 1u64;
        loop {
            zero(next);
            for_each_bit(frontier, |u| {
                or_assign(next, self.row(u));
            });
            and_assign(next, pool);
            let grew = count_ones(next);
            if grew == 0 {
                return size;
            }
            size += grew;
            or_assign(comp, next);
            and_not_assign(pool, next);
            std::mem::swap(frontier, next);
        }
    }

    /// True when removing `removed` leaves at least two components, all of
    /// size greater than `h`.
    pub fn is_h_extra_cut(&self, removed: &[u64], h: u64, scratch: &mut Scratch) -> bool {
        let mut survivors = std::mem::take(&mut scratch.pool);
        self.fill_survivors(removed, &mut survivors);
        scratch.pool = survivors;
        let mut components = 0u64;
        while let Some(start) = first_bit(&scratch.pool) {
            if self.flood(start, scratch) <= h {
                return false;
            }
            components += 1;
        }
        components >= 2
    }

    /// Sizes of all survivor components, ordered by smallest member code.
    pub fn component_sizes_into(&self, removed: &[u64], scratch: &mut Scratch, out: &mut Vec<u64>) {
        out.clear();
        let mut survivors = std::mem::take(&mut scratch.pool);
        self.fill_survivors(removed, &mut survivors);
        scratch.pool = survivors;
        while let Some(start) = first_bit(&scratch.pool) {
            out.push(self.flood(start, scratch));
        }
    }

}

/// Reusable buffers for flood fills; one per worker.
pub(crate) struct Scratch {
    pub pool: Vec<u64>,
    frontier: Vec<u64>,
    next: Vec<u64>,
    pub comp: Vec<u64>,
}

impl Scratch {
    pub fn new(words: usize) -> Self {
        Self {
            pool: vec![0; words],
            frontier: vec![0; words],
            next: vec![0; words],
            comp: vec![0; words],
        }
    }
}

#[inline]
pub(crate) fn set_bit(ws: &mut [u64], i: usize) {
    ws[i / 64] |= 1u64 << (i % 64);
}

#[inline]
pub(crate) fn clear_bit(ws: &mut [u64], i: usize) {
    ws[i / 64] &= !(1u64 << (i % 64));
}

#[inline]
pub(crate) fn test_bit(ws: &[u64], i: usize) -> bool {
    ws[i / 64] & (1u64 << (i % 64)) != 0
}

#[inline]
pub(crate) fn zero(ws: &mut [u64]) {
    ws.fill(0);
}

#[inline]
pub(crate) fn count_ones(ws: &[u64]) -> u64 {
    ws.iter().map(|w| u64::from(w.count_ones())).sum()
}

#[inline]
pub(crate) fn or_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d |= s;
    }
}

#[inline]
pub(crate) fn and_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

#[inline]
pub(crate) fn and_not_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= !s;
    }
}

#[inline]
pub(crate) fn first_bit(ws: &[u64]) -> Option<usize> {
    for (wi, &w) in ws.iter().enumerate() {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

/// Clears bits at positions >= nv in the last word.
#[inline]
pub(crate) fn mask_tail(ws: &mut [u64], nv: usize) {
    let rem = nv % 64;
    if rem != 0 {
        if let Some(last) = ws.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

#[inline]
pub(crate) fn for_each_bit(ws: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &w) in ws.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            f(wi * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

/// Ascending bit positions, collected.
pub(crate) fn bits_to_codes(ws: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(count_ones(ws) as usize);
    for_each_bit(ws, |i| out.push(i as u64));
    out
}

/// C(n, k), saturating at u128::MAX; used for work estimates, not counting.
pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts;
    use crate::torus::VertexSet;

    #[test]
    fn dense_rows_match_implicit_neighbors() {
        for (k, n) in [(2u64, 4u32), (3, 2), (3, 3), (4, 2)] {
            let t = Torus::new(k, n).unwrap();
            let g = DenseGraph::build(&t, 100_000).unwrap();
            for v in t.vertices() {
                let row_codes = bits_to_codes(g.row(v.code() as usize));
                assert_eq!(row_codes, t.neighbors(v).codes());
            }
        }
    }

    #[test]
    fn build_refuses_above_ceiling() {
        let t = Torus::new(3, 9).unwrap();
        assert!(matches!(
            DenseGraph::build(&t, 19_682),
            Err(Error::CeilingExceeded { .. })
        ));
    }

    #[test]
    fn component_analysis_matches_public_classifier() {
        let t = Torus::new(3, 2).unwrap();
        let g = DenseGraph::build(&t, 1000).unwrap();
        let mut scratch = Scratch::new(g.words());
        let mut sizes = Vec::new();
        // All 2^9 removal sets, cross-checked against the BFS in `cuts`.
        for mask in 0u64..512 {
            let codes: Vec<u64> = (0..9).filter(|b| mask >> b & 1 == 1).collect();
            if codes.len() == 9 {
                continue;
            }
            let set = VertexSet::from_codes(t, codes.iter().copied()).unwrap();
            let removed = vec![mask];
            g.component_sizes_into(&removed, &mut scratch, &mut sizes);
            let expected: Vec<u64> = cuts::survivor_components(&set)
                .unwrap()
                .iter()
                .map(|c| c.len() as u64)
                .collect();
            assert_eq!(sizes, expected, "mask {mask:#b}");

            let cls = cuts::classify_cut(&set).unwrap();
            for h in 0..3 {
                assert_eq!(
                    g.is_h_extra_cut(&removed, h, &mut scratch),
                    cls.is_h_extra_cut(h),
                    "mask {mask:#b}, h {h}"
                );
            }
        }
    }

    #[test]
    fn masks_cover_multiple_words() {
        let t = Torus::new(3, 5).unwrap();
        let g = DenseGraph::build(&t, 100_000).unwrap();
        assert_eq!(g.words(), 4);
        let mut scratch = Scratch::new(g.words());
        let mut removed = vec![0u64; g.words()];
        // Isolate vertex 100 by removing its whole neighborhood.
        for w in t.neighbors(t.vertex(100).unwrap()).iter() {
            set_bit(&mut removed, w.code() as usize);
        }
        let mut sizes = Vec::new();
        g.component_sizes_into(&removed, &mut scratch, &mut sizes);
        assert_eq!(sizes.iter().sum::<u64>(), 243 - 10);
        assert!(sizes.contains(&1));
        assert!(g.is_h_extra_cut(&removed, 0, &mut scratch));
        assert!(!g.is_h_extra_cut(&removed, 1, &mut scratch));
    }
}
