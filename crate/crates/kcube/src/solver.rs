//! Exact h-extra connectivity: closed forms, two independent search
//! algorithms, constructive upper bounds, and a max-flow cross-check.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::cuts;
use crate::dense::{self, DenseGraph, Scratch};
use crate::error::{Error, Result};
use crate::torus::{Torus, Vertex, VertexSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KappaMethod {
    Formula,
    SubsetOracle,
    BoundaryEnum,
    ConstructiveUpperBound,
}

impl KappaMethod {
    pub fn label(self) -> &'static str {
        match self {
            Self::Formula => "formula",
            Self::SubsetOracle => "subset-oracle",
            Self::BoundaryEnum => "boundary-enum",
            Self::ConstructiveUpperBound => "constructive-upper-bound",
        }
    }
}

/// A certified h-extra connectivity value.
///
/// When `exhaustive` is true the value is the exact minimum over all h-extra
/// cuts; otherwise it is a bound: an upper bound for the constructive method,
/// and `budget + 1` (a lower bound, no witness) when a search exhausted its
/// budget without finding a cut.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KappaCertificate {
    pub h: u32,
    pub value: u64,
    pub witness: Option<VertexSet>,
    pub method: KappaMethod,
    pub exhaustive: bool,
}

/// Limits and parallelism for the search algorithms.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Largest cut size considered; defaults to the closed-form value.
    pub max_cut_size: Option<u64>,
    /// Cap on enumerated connected-set sizes for the boundary search;
    /// defaults to floor((k^n - best_known) / 2). Values below the default
    /// weaken the minimality claim and clear the `exhaustive` flag.
    pub max_side_size: Option<u64>,
    pub worker_count: usize,
    /// Refuse subset enumerations whose estimated count exceeds this.
    pub subset_ceiling: u128,
    /// Refuse instances with more vertices than this.
    pub vertex_ceiling: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_cut_size: None,
            max_side_size: None,
            worker_count: 1,
            subset_ceiling: 300_000_000,
            vertex_ceiling: 19_683,
        }
    }
}

impl SearchConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.worker_count == 0 {
            return Err(Error::NoWorkers);
        }
        if self.max_cut_size == Some(0) {
            return Err(Error::InvalidConfig {
                reason: "max_cut_size must be positive",
            });
        }
        if self.max_side_size == Some(0) {
            return Err(Error::InvalidConfig {
                reason: "max_side_size must be positive",
            });
        }
        Ok(())
    }
}

pub(crate) fn run_in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::PoolBuild {
            detail: e.to_string(),
        })?;
    Ok(pool.install(f))
}

fn is_complete(t: &Torus) -> bool {
    t.vertex_count() <= t.degree() + 1
}

fn canonical_vertex_cut(t: &Torus) -> VertexSet {
    t.neighbors(t.vertex(0).expect("vertex 0 exists"))
}

fn canonical_edge(t: &Torus) -> (Vertex, Vertex) {
    // 0...0 and its dimension-1 neighbor 10...0
    let e1 = t.k().pow(t.n() - 1);
    (
        t.vertex(0).expect("in range"),
        t.vertex(e1).expect("in range"),
    )
}

fn canonical_path(t: &Torus) -> cuts::PathTriple {
    // 0...0, 10...0, 110...0: both edges in different dimensions.
    let e1 = t.k().pow(t.n() - 1);
    let e2 = t.k().pow(t.n() - 2);
    cuts::PathTriple::new(
        *t,
        t.vertex(0).expect("in range"),
        t.vertex(e1).expect("in range"),
        t.vertex(e1 + e2).expect("in range"),
    )
    .expect("canonical path is valid for n >= 2")
}

/// Closed-form κ_h for the 3-ary torus: 2n, 4n-3, or 6n-7.
///
/// The κ₀ witness is absent for n = 1, where the torus is a complete triangle
/// with no vertex cut and the value follows the complete-graph convention.
pub fn kappa_formula(t: &Torus, h: u32) -> Result<KappaCertificate> {
    let n = u64::from(t.n());
    let unavailable = Err(Error::FormulaUnavailable {
        k: t.k(),
        n: t.n(),
        h,
    });
    if t.k() != 3 {
        return unavailable;
    }
    let (value, witness) = match h {
        0 => (
            2 * n,
            (t.n() >= 2).then(|| canonical_vertex_cut(t)),
        ),
        1 if t.n() >= 2 => {
            let (u, v) = canonical_edge(t);
            (4 * n - 3, Some(cuts::cut_of_edge(t, u, v)?))
        }
        2 if t.n() >= 3 => (6 * n - 7, Some(cuts::cut_of_path(&canonical_path(t)))),
        _ => return unavailable,
    };
    Ok(KappaCertificate {
        h,
        value,
        witness,
        method: KappaMethod::Formula,
        exhaustive: true,
    })
}

/// Builds the canonical witness cut and certifies it by component analysis.
/// The value is an upper bound on κ_h; `exhaustive` is false.
pub fn kappa_upper_bound(t: &Torus, h: u32) -> Result<KappaCertificate> {
    if t.k() != 3 {
        return Err(Error::Unsupported {
            op: "kappa_upper_bound",
            requires: "k = 3",
        });
    }
    let witness = match h {
        0 => {
            if is_complete(t) {
                return Err(Error::CompleteGraph);
            }
            canonical_vertex_cut(t)
        }
        1 if t.n() >= 2 => {
            let (u, v) = canonical_edge(t);
            cuts::cut_of_edge(t, u, v)?
        }
        2 if t.n() >= 3 => cuts::cut_of_path(&canonical_path(t)),
        _ => {
            return Err(Error::Unsupported {
                op: "kappa_upper_bound",
                requires: "h = 0 (n >= 2), h = 1 (n >= 2), or h = 2 (n >= 3)",
            })
        }
    };
    let classification = cuts::classify_cut(&witness)?;
    assert!(
        classification.is_h_extra_cut(u64::from(h)),
        "canonical witness failed classification: {classification:?}"
    );
    Ok(KappaCertificate {
        h,
        value: witness.len() as u64,
        witness: Some(witness),
        method: KappaMethod::ConstructiveUpperBound,
        exhaustive: false,
    })
}

fn resolve_budget(t: &Torus, h: u32, cfg: &SearchConfig) -> Result<u64> {
    match cfg.max_cut_size {
        Some(b) => Ok(b),
        None => kappa_formula(t, h)
            .map(|c| c.value)
            .map_err(|_| Error::BudgetRequired),
    }
}

/// Definitional search: enumerates vertex subsets in increasing size and
/// returns the first size admitting an h-extra cut, with the
/// lexicographically smallest witness. With no cut of size <= budget the
/// certificate reports value budget+1, no witness, `exhaustive` false.
pub fn kappa_subset_oracle(t: &Torus, h: u32, cfg: &SearchConfig) -> Result<KappaCertificate> {
    cfg.validate()?;
    if is_complete(t) {
        return Err(Error::CompleteGraph);
    }
    let budget = resolve_budget(t, h, cfg)?;
    let g = DenseGraph::build(t, cfg.vertex_ceiling)?;
    let nv = g.nv() as u64;
    // Sizes beyond this cannot leave two components of more than h vertices.
    let feasible = budget.min(nv.saturating_sub(2 * (u64::from(h) + 1)));
    let estimate: u128 = (0..=feasible).map(|s| dense::binomial(nv, s)).sum();
    if estimate > cfg.subset_ceiling {
        return Err(Error::CeilingExceeded {
            what: "subset enumeration count",
            amount: estimate,
            ceiling: cfg.subset_ceiling,
        });
    }
    let torus = *t;
    run_in_pool(cfg.worker_count, move || {
        for s in 0..=feasible {
            if let Some(codes) = subsets_of_size(&g, u64::from(h), s) {
                return KappaCertificate {
                    h,
                    value: s,
                    witness: Some(VertexSet::from_sorted_codes(torus, codes)),
                    method: KappaMethod::SubsetOracle,
                    exhaustive: true,
                };
            }
        }
        KappaCertificate {
            h,
            value: budget + 1,
            witness: None,
            method: KappaMethod::SubsetOracle,
            exhaustive: false,
        }
    })
}

/// First h-extra cut of exactly `s` vertices in lexicographic order, if any.
fn subsets_of_size(g: &DenseGraph, h: u64, s: u64) -> Option<Vec<u64>> {
    if s == 0 {
        let removed = vec![0u64; g.words()];
        let mut scratch = Scratch::new(g.words());
        return g
            .is_h_extra_cut(&removed, h, &mut scratch)
            .then(Vec::new);
    }
    let s = s as usize;
    if s > g.nv() {
        return None;
    }
    let max_anchor = g.nv() - s;
    (0..=max_anchor)
        .into_par_iter()
        .find_map_first(|anchor| anchor_combinations(g, h, s, anchor))
}

/// Scans s-subsets with minimum element `anchor` in lexicographic order.
fn anchor_combinations(g: &DenseGraph, h: u64, s: usize, anchor: usize) -> Option<Vec<u64>> {
    let nv = g.nv();
    let mut scratch = Scratch::new(g.words());
    let mut removed = vec![0u64; g.words()];
    let mut idx: Vec<usize> = (anchor..anchor + s).collect();
    for &i in &idx {
        dense::set_bit(&mut removed, i);
    }
    loop {
        if g.is_h_extra_cut(&removed, h, &mut scratch) {
            return Some(idx.iter().map(|&i| i as u64).collect());
        }
        // advance to the next combination with idx[0] fixed
        let mut at = usize::MAX;
        for j in (1..s).rev() {
            if idx[j] < nv - s + j {
                at = j;
                break;
            }
        }
        if at == usize::MAX {
            return None;
        }
        for j in at..s {
            dense::clear_bit(&mut removed, idx[j]);
        }
        idx[at] += 1;
        for j in at + 1..s {
            idx[j] = idx[j - 1] + 1;
        }
        for j in at..s {
            dense::set_bit(&mut removed, idx[j]);
        }
    }
}

/// Emits every connected induced set whose minimum vertex is `anchor`, with
/// 1 <= |C| <= cap, exactly once. Growth only adds vertices above the anchor;
/// a forbidden set per branch prevents duplicate emissions.
struct ConnectedSetEnum<'a> {
    g: &'a DenseGraph,
    words: usize,
    cap: usize,
    allowed: Vec<u64>,
    c: Vec<u64>,
    closed: Vec<u64>,
    c_size: usize,
    levels: Vec<EnumLevel>,
}

struct EnumLevel {
    ext: Vec<u64>,
    forb: Vec<u64>,
    iter: Vec<u64>,
    forb_run: Vec<u64>,
    delta: Vec<u64>,
}

impl EnumLevel {
    fn new(words: usize) -> Self {
        Self {
            ext: vec![0; words],
            forb: vec![0; words],
            iter: vec![0; words],
            forb_run: vec![0; words],
            delta: vec![0; words],
        }
    }
}

impl<'a> ConnectedSetEnum<'a> {
    fn new(g: &'a DenseGraph, anchor: usize, cap: usize) -> Self {
        let words = g.words();
        debug_assert!(cap >= 1);
        let mut allowed = vec![0u64; words];
        for i in anchor + 1..g.nv() {
            dense::set_bit(&mut allowed, i);
        }
        let mut c = vec![0u64; words];
        dense::set_bit(&mut c, anchor);
        let mut closed = c.clone();
        dense::or_assign(&mut closed, g.row(anchor));
        let mut levels: Vec<EnumLevel> = (0..=cap).map(|_| EnumLevel::new(words)).collect();
        for (e, (r, a)) in levels[0]
            .ext
            .iter_mut()
            .zip(g.row(anchor).iter().zip(&allowed))
        {
            *e = r & a;
        }
        Self {
            g,
            words,
            cap,
            allowed,
            c,
            closed,
            c_size: 1,
            levels,
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[u64], usize, &[u64])) {
        self.descend(0, visit);
    }

    fn descend(&mut self, depth: usize, visit: &mut dyn FnMut(&[u64], usize, &[u64])) {
        visit(&self.c, self.c_size, &self.closed);
        if self.c_size == self.cap {
            return;
        }
        {
            let lvl = &mut self.levels[depth];
            let (iter, rest) = (&mut lvl.iter, (&lvl.ext, &lvl.forb));
            iter.copy_from_slice(rest.0);
            lvl.forb_run.copy_from_slice(&lvl.forb);
        }
        let mut cursor = 0usize;
        loop {
            let u = match next_bit_at(&self.levels[depth].iter, cursor, self.words) {
                Some(u) => u,
                None => return,
            };
            cursor = u + 1;
            // child extension: remaining iter bits above u, plus the newly
            // reachable vertices around u
            {
                let (left, right) = self.levels.split_at_mut(depth + 1);
                let lvl = &left[depth];
                let child = &mut right[0];
                let row = self.g.row(u);
                for w in 0..self.words {
                    let above = above_mask(w, u);
                    child.ext[w] = (lvl.iter[w] & above)
                        | (row[w] & self.allowed[w] & !self.closed[w] & !lvl.forb_run[w]);
                }
                child.forb.copy_from_slice(&lvl.forb_run);
            }
            // grow C by u; u itself is already in closed (ext is a subset of
            // N(C)), so the closed-set delta is exactly u's new neighbors
            debug_assert!(dense::test_bit(&self.closed, u));
            {
                let row = self.g.row(u);
                let delta = &mut self.levels[depth].delta;
                for w in 0..self.words {
                    delta[w] = row[w] & !self.closed[w];
                }
            }
            for w in 0..self.words {
                self.closed[w] |= self.levels[depth].delta[w];
            }
            dense::set_bit(&mut self.c, u);
            self.c_size += 1;

            self.descend(depth + 1, visit);

            self.c_size -= 1;
            dense::clear_bit(&mut self.c, u);
            for w in 0..self.words {
                self.closed[w] &= !self.levels[depth].delta[w];
            }
            dense::set_bit(&mut self.levels[depth].forb_run, u);
        }
    }
}

/// Word mask of bit positions strictly above `u` within word index `w`.
#[inline]
fn above_mask(w: usize, u: usize) -> u64 {
    let uw = u / 64;
    if w < uw {
        0
    } else if w > uw {
        !0
    } else {
        let shift = u % 64;
        if shift == 63 {
            0
        } else {
            !0u64 << (shift + 1)
        }
    }
}

#[inline]
fn next_bit_at(ws: &[u64], from: usize, words: usize) -> Option<usize> {
    let mut wi = from / 64;
    if wi >= words {
        return None;
    }
    let mut w = ws[wi] & (!0u64).checked_shl((from % 64) as u32).unwrap_or(0);
    loop {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi == words {
            return None;
        }
        w = ws[wi];
    }
}

/// Per-anchor candidate evaluation for the boundary search: takes N(C),
/// absorbs survivor components of at most h vertices into the cut, and keeps
/// the (size, lexicographic) minimum.
struct BoundaryEval<'a> {
    g: &'a DenseGraph,
    h: u64,
    prune: &'a AtomicU64,
    scratch: Scratch,
    cut: Vec<u64>,
    best: Option<(u64, Vec<u64>)>,
}

impl<'a> BoundaryEval<'a> {
    fn new(g: &'a DenseGraph, h: u64, prune: &'a AtomicU64) -> Self {
        Self {
            g,
            h,
            prune,
            scratch: Scratch::new(g.words()),
            cut: vec![0; g.words()],
            best: None,
        }
    }

    fn consider(&mut self, c: &[u64], c_size: usize, closed: &[u64]) {
        if (c_size as u64) <= self.h {
            return;
        }
        let boundary_size = dense::count_ones(closed) - c_size as u64;
        if boundary_size > self.prune.load(Ordering::Relaxed) {
            return;
        }
        // survivors outside N[C]; C itself is one component, larger than h
        self.g.fill_survivors(closed, &mut self.scratch.pool);
        for (cw, c_bits) in self.cut.iter_mut().zip(closed.iter().zip(c)) {
            *cw = c_bits.0 & !c_bits.1;
        }
        let mut cut_size = boundary_size;
        let mut big_components = 0u64;
        while let Some(start) = dense::first_bit(&self.scratch.pool) {
            let size = self.g.flood(start, &mut self.scratch);
            if size <= self.h {
                cut_size += size;
                dense::or_assign(&mut self.cut, &self.scratch.comp);
            } else {
                big_components += 1;
            }
        }
        if big_components == 0 {
            return;
        }
        if cut_size > self.prune.load(Ordering::Relaxed) {
            return;
        }
        self.prune.fetch_min(cut_size, Ordering::Relaxed);
        let codes = dense::bits_to_codes(&self.cut);
        if self
            .best
            .as_ref()
            .is_none_or(|(bs, bc)| (cut_size, &codes) < (*bs, bc))
        {
            self.best = Some((cut_size, codes));
        }
    }
}

fn merge_best(
    a: Option<(u64, Vec<u64>)>,
    b: Option<(u64, Vec<u64>)>,
) -> Option<(u64, Vec<u64>)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if x <= y { x } else { y }),
    }
}

/// One full enumeration pass at a fixed side cap. `bound` admits candidates
/// of that size or less, so ties for the minimum are always evaluated.
fn boundary_pass(g: &DenseGraph, h: u64, cap: usize, bound: u64) -> Option<(u64, Vec<u64>)> {
    let prune = AtomicU64::new(bound);
    (0..g.nv())
        .into_par_iter()
        .map(|anchor| {
            let mut eval = BoundaryEval::new(g, h, &prune);
            let mut en = ConnectedSetEnum::new(g, anchor, cap);
            en.run(&mut |c, size, closed| eval.consider(c, size, closed));
            eval.best
        })
        .reduce(|| None, merge_best)
}

/// Searches over neighborhoods of connected vertex sets: every minimum
/// h-extra cut is N(C) for its smallest survivor component C, together with
/// any other components of at most h vertices, which the evaluation absorbs
/// into the cut.
///
/// Side sizes are capped at floor((k^n - best_known) / 2); the cap is
/// recomputed and the pass repeated whenever the best value improves. The
/// minimality claim is exact provided the budget does not exceed the true
/// κ_h, which holds for formula-derived budgets.
pub fn kappa_boundary_enum(t: &Torus, h: u32, cfg: &SearchConfig) -> Result<KappaCertificate> {
    cfg.validate()?;
    if is_complete(t) {
        return Err(Error::CompleteGraph);
    }
    let budget = resolve_budget(t, h, cfg)?;
    let g = DenseGraph::build(t, cfg.vertex_ceiling)?;
    let nv = g.nv() as u64;
    let hh = u64::from(h);

    let mut best: (u64, Option<Vec<u64>>) = (budget + 1, None);
    if cfg.max_cut_size.is_none() {
        if let Ok(cert) = kappa_formula(t, h) {
            if let Some(w) = cert.witness {
                let mut removed = vec![0u64; g.words()];
                for &c in w.codes() {
                    dense::set_bit(&mut removed, c as usize);
                }
                let mut scratch = Scratch::new(g.words());
                assert!(
                    g.is_h_extra_cut(&removed, hh, &mut scratch),
                    "closed-form witness failed classification"
                );
                best = (cert.value, Some(w.codes().to_vec()));
            }
        }
    }

    let default_cap = |known: u64| (nv - known.min(nv)) / 2;
    let mut capped_by_user = false;
    let torus = *t;
    let result = run_in_pool(cfg.worker_count, move || {
        loop {
            let known = best.0.min(budget);
            // the floor keeps the first pass meaningful when the budget is
            // loose; once a real cut is known the default already exceeds it
            let mut cap = default_cap(known).max(hh + 1);
            if let Some(user) = cfg.max_side_size {
                if user < cap {
                    cap = user;
                    capped_by_user = true;
                }
            }
            if cap < hh + 1 {
                break;
            }
            let bound = best.0.min(budget);
            let found = boundary_pass(&g, hh, cap as usize, bound);
            let improved = match found {
                Some((value, codes)) => {
                    let candidate = (value, Some(codes));
                    let is_better = match &best.1 {
                        None => value < best.0 || (value == best.0 && candidate.1.is_some()),
                        Some(bc) => {
                            value < best.0
                                || (value == best.0 && candidate.1.as_ref().unwrap() < bc)
                        }
                    };
                    let strictly_smaller = value < known;
                    if is_better {
                        best = candidate;
                    }
                    strictly_smaller
                }
                None => false,
            };
            if !improved {
                break;
            }
        }
        (best, capped_by_user)
    })?;
    let ((value, witness_codes), capped) = result;

    if value > budget {
        return Ok(KappaCertificate {
            h,
            value: budget + 1,
            witness: None,
            method: KappaMethod::BoundaryEnum,
            exhaustive: false,
        });
    }
    Ok(KappaCertificate {
        h,
        value,
        witness: witness_codes.map(|codes| VertexSet::from_sorted_codes(torus, codes)),
        method: KappaMethod::BoundaryEnum,
        exhaustive: !capped,
    })
}

/// Unit-vertex-capacity flow network: every vertex v splits into nodes 2v
/// (in) and 2v+1 (out) joined by a capacity-1 arc, so internal vertices of
/// augmenting paths are pairwise disjoint. Residual arcs pair up as id ^ 1.
struct FlowGraph {
    first: Vec<u32>,
    slot_arc: Vec<u32>,
    slot_to: Vec<u32>,
    arc_tail: Vec<u32>,
    caps_init: Vec<u8>,
}

fn build_flow(t: &Torus) -> FlowGraph {
    let nv = t.vertex_count() as usize;
    let nodes = 2 * nv;
    let mut tails: Vec<u32> = Vec::new();
    let mut heads: Vec<u32> = Vec::new();
    let mut caps: Vec<u8> = Vec::new();
    let mut arc = |tail: usize, head: usize| {
        tails.push(tail as u32);
        heads.push(head as u32);
        caps.push(1);
        tails.push(head as u32);
        heads.push(tail as u32);
        caps.push(0);
    };
    for v in 0..nv {
        arc(2 * v, 2 * v + 1);
    }
    for (u, v) in t.edges() {
        let (u, v) = (u.code() as usize, v.code() as usize);
        arc(2 * u + 1, 2 * v);
        arc(2 * v + 1, 2 * u);
    }
    let m = tails.len();
    let mut first = vec![0u32; nodes + 1];
    for &tail in &tails {
        first[tail as usize + 1] += 1;
    }
    for i in 0..nodes {
        first[i + 1] += first[i];
    }
    let mut cursor: Vec<u32> = first[..nodes].to_vec();
    let mut slot_arc = vec![0u32; m];
    let mut slot_to = vec![0u32; m];
    for id in 0..m {
        let s = cursor[tails[id] as usize] as usize;
        cursor[tails[id] as usize] += 1;
        slot_arc[s] = id as u32;
        slot_to[s] = heads[id];
    }
    FlowGraph {
        first,
        slot_arc,
        slot_to,
        arc_tail: tails,
        caps_init: caps,
    }
}

impl FlowGraph {
    /// Max flow by BFS augmentation; every augmenting path carries one unit.
    fn max_flow(
        &self,
        source: u32,
        sink: u32,
        caps: &mut [u8],
        queue: &mut Vec<u32>,
        pred: &mut [u32],
    ) -> u64 {
        let mut flow = 0u64;
        loop {
            pred.fill(u32::MAX);
            pred[source as usize] = u32::MAX - 1;
            queue.clear();
            queue.push(source);
            let mut head = 0;
            let mut reached = false;
            'bfs: while head < queue.len() {
                let u = queue[head];
                head += 1;
                for s in self.first[u as usize]..self.first[u as usize + 1] {
                    let id = self.slot_arc[s as usize] as usize;
                    if caps[id] == 0 {
                        continue;
                    }
                    let v = self.slot_to[s as usize];
                    if pred[v as usize] != u32::MAX {
                        continue;
                    }
                    pred[v as usize] = id as u32;
                    if v == sink {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push(v);
                }
            }
            if !reached {
                return flow;
            }
            let mut v = sink;
            while v != source {
                let id = pred[v as usize] as usize;
                caps[id] -= 1;
                caps[id ^ 1] += 1;
                v = self.arc_tail[id];
            }
            flow += 1;
        }
    }
}

/// Classical vertex connectivity as the minimum vertex-disjoint-path count
/// over all non-adjacent pairs, by unit-capacity flow on split vertices.
pub fn classic_connectivity_flow(t: &Torus, cfg: &SearchConfig) -> Result<u64> {
    cfg.validate()?;
    if is_complete(t) {
        return Err(Error::CompleteGraph);
    }
    let nv = t.vertex_count();
    if nv > cfg.vertex_ceiling {
        return Err(Error::CeilingExceeded {
            what: "vertex count",
            amount: nv as u128,
            ceiling: cfg.vertex_ceiling as u128,
        });
    }
    let net = build_flow(t);
    let nvu = nv as usize;
    let torus = *t;
    let pairs: Vec<(u32, u32)> = (0..nvu)
        .flat_map(|u| {
            ((u + 1)..nvu).filter_map(move |v| {
                let uu = torus.vertex(u as u64).expect("in range");
                let vv = torus.vertex(v as u64).expect("in range");
                (!torus.is_adjacent(uu, vv)).then_some((u as u32, v as u32))
            })
        })
        .collect();
    run_in_pool(cfg.worker_count, || {
        pairs
            .par_iter()
            .map_init(
                || {
                    (
                        net.caps_init.clone(),
                        Vec::with_capacity(2 * nvu),
                        vec![u32::MAX; 2 * nvu],
                    )
                },
                |(caps, queue, pred), &(u, v)| {
                    caps.copy_from_slice(&net.caps_init);
                    net.max_flow(2 * u + 1, 2 * v, caps, queue, pred)
                },
            )
            .min()
            .expect("at least one non-adjacent pair")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: u64, n: u32) -> Torus {
        Torus::new(k, n).unwrap()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn formula_values_and_domains() {
        let c = kappa_formula(&t(3, 2), 0).unwrap();
        assert_eq!((c.value, c.exhaustive), (4, true));
        assert_eq!(c.witness.as_ref().unwrap().codes(), &[1, 2, 3, 6]);

        assert_eq!(kappa_formula(&t(3, 2), 1).unwrap().value, 5);
        assert_eq!(kappa_formula(&t(3, 3), 1).unwrap().value, 9);
        assert_eq!(kappa_formula(&t(3, 3), 2).unwrap().value, 11);
        assert_eq!(kappa_formula(&t(3, 7), 2).unwrap().value, 35);

        // the complete triangle keeps the value but has no witness cut
        let k3 = kappa_formula(&t(3, 1), 0).unwrap();
        assert_eq!(k3.value, 2);
        assert!(k3.witness.is_none());

        assert!(matches!(
            kappa_formula(&t(3, 1), 1),
            Err(Error::FormulaUnavailable { .. })
        ));
        assert!(matches!(
            kappa_formula(&t(3, 2), 2),
            Err(Error::FormulaUnavailable { .. })
        ));
        assert!(matches!(
            kappa_formula(&t(3, 2), 3),
            Err(Error::FormulaUnavailable { .. })
        ));
        assert!(matches!(
            kappa_formula(&t(4, 2), 0),
            Err(Error::FormulaUnavailable { .. })
        ));
    }

    #[test]
    fn formula_witnesses_classify_small() {
        for (n, h) in [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (4, 2)] {
            let cert = kappa_formula(&t(3, n), h).unwrap();
            let w = cert.witness.unwrap();
            assert_eq!(w.len() as u64, cert.value);
            let cls = cuts::classify_cut(&w).unwrap();
            assert!(cls.is_h_extra_cut(u64::from(h)), "n={n}, h={h}");
        }
    }

    #[test]
    fn upper_bounds_certify_witnesses() {
        let c = kappa_upper_bound(&t(3, 2), 0).unwrap();
        assert_eq!(c.value, 4);
        assert!(!c.exhaustive);
        assert_eq!(c.witness.unwrap().codes(), &[1, 2, 3, 6]);

        assert_eq!(kappa_upper_bound(&t(3, 4), 1).unwrap().value, 13);
        assert_eq!(kappa_upper_bound(&t(3, 5), 2).unwrap().value, 23);

        assert!(matches!(
            kappa_upper_bound(&t(3, 1), 0),
            Err(Error::CompleteGraph)
        ));
        assert!(matches!(
            kappa_upper_bound(&t(2, 3), 0),
            Err(Error::Unsupported { .. })
        ));
        assert!(matches!(
            kappa_upper_bound(&t(3, 3), 3),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn oracle_finds_classical_connectivity() {
        let cert = kappa_subset_oracle(&t(3, 2), 0, &cfg()).unwrap();
        assert_eq!(cert.value, 4);
        assert!(cert.exhaustive);
        // lexicographically smallest among the nine neighborhood cuts
        assert_eq!(cert.witness.as_ref().unwrap().codes(), &[0, 1, 5, 8]);
        let cls = cuts::classify_cut(cert.witness.as_ref().unwrap()).unwrap();
        assert!(cls.is_h_extra_cut(0));
    }

    #[test]
    fn oracle_finds_one_extra_connectivity() {
        let cert = kappa_subset_oracle(&t(3, 2), 1, &cfg()).unwrap();
        assert_eq!(cert.value, 5);
        assert!(cert.exhaustive);
        let w = cert.witness.unwrap();
        assert_eq!(w.len(), 5);
        assert!(cuts::classify_cut(&w).unwrap().is_h_extra_cut(1));
    }

    #[test]
    fn oracle_reports_lower_bound_when_budget_too_small() {
        let mut c = cfg();
        c.max_cut_size = Some(3);
        let cert = kappa_subset_oracle(&t(3, 2), 0, &c).unwrap();
        assert_eq!(cert.value, 4);
        assert!(cert.witness.is_none());
        assert!(!cert.exhaustive);
    }

    #[test]
    fn oracle_refusals() {
        assert!(matches!(
            kappa_subset_oracle(&t(3, 1), 0, &cfg()),
            Err(Error::CompleteGraph)
        ));
        let mut c = cfg();
        c.subset_ceiling = 10;
        assert!(matches!(
            kappa_subset_oracle(&t(3, 2), 0, &c),
            Err(Error::CeilingExceeded { .. })
        ));
        let mut c = cfg();
        c.vertex_ceiling = 8;
        assert!(matches!(
            kappa_subset_oracle(&t(3, 2), 0, &c),
            Err(Error::CeilingExceeded { .. })
        ));
        let mut c = cfg();
        c.worker_count = 0;
        assert!(matches!(
            kappa_subset_oracle(&t(3, 2), 0, &c),
            Err(Error::NoWorkers)
        ));
        assert!(matches!(
            kappa_subset_oracle(&t(4, 2), 0, &cfg()),
            Err(Error::BudgetRequired)
        ));
    }

    #[test]
    fn enumerator_matches_brute_force() {
        // Every connected induced subset of the 3x3 torus, grouped by its
        // minimum vertex, against a mask brute force.
        let torus = t(3, 2);
        let g = DenseGraph::build(&torus, 1000).unwrap();
        let mut scratch = Scratch::new(1);
        let mut expected: Vec<std::collections::HashSet<u64>> =
            (0..9).map(|_| Default::default()).collect();
        for mask in 1u64..512 {
            let lowest = mask.trailing_zeros() as usize;
            let removed = vec![!mask & 0x1FF];
            scratch.pool = vec![mask];
            let size = g.flood(lowest, &mut scratch);
            let _ = removed;
            if size == mask.count_ones() as u64 {
                expected[lowest].insert(mask);
            }
        }
        for anchor in 0..9 {
            let mut seen = std::collections::HashSet::new();
            let mut en = ConnectedSetEnum::new(&g, anchor, 9);
            en.run(&mut |c, size, _closed| {
                assert_eq!(c[0].count_ones() as usize, size);
                assert!(seen.insert(c[0]), "duplicate emission {:b}", c[0]);
            });
            assert_eq!(seen, expected[anchor], "anchor {anchor}");
        }
    }

    #[test]
    fn enumerator_respects_cap() {
        let torus = t(3, 2);
        let g = DenseGraph::build(&torus, 1000).unwrap();
        let mut max_size = 0;
        let mut en = ConnectedSetEnum::new(&g, 0, 3);
        en.run(&mut |_, size, _| max_size = max_size.max(size));
        assert_eq!(max_size, 3);
    }

    #[test]
    fn boundary_agrees_with_oracle() {
        for h in [0u32, 1] {
            let a = kappa_subset_oracle(&t(3, 2), h, &cfg()).unwrap();
            let b = kappa_boundary_enum(&t(3, 2), h, &cfg()).unwrap();
            assert_eq!(a.value, b.value, "h={h}");
            assert!(b.exhaustive);
            let w = b.witness.unwrap();
            assert_eq!(w.len() as u64, b.value);
            assert!(cuts::classify_cut(&w)
                .unwrap()
                .is_h_extra_cut(u64::from(h)));
        }
    }

    #[test]
    fn boundary_solves_three_dimensions() {
        let c0 = kappa_boundary_enum(&t(3, 3), 0, &cfg()).unwrap();
        assert_eq!(c0.value, 6);
        let c1 = kappa_boundary_enum(&t(3, 3), 1, &cfg()).unwrap();
        assert_eq!(c1.value, 9);
        assert!(cuts::classify_cut(&c1.witness.unwrap())
            .unwrap()
            .is_h_extra_cut(1));
    }

    #[test]
    fn boundary_is_worker_independent() {
        let mut one = cfg();
        one.worker_count = 1;
        let mut four = cfg();
        four.worker_count = 4;
        for h in [0u32, 1] {
            let a = kappa_boundary_enum(&t(3, 2), h, &one).unwrap();
            let b = kappa_boundary_enum(&t(3, 2), h, &four).unwrap();
            assert_eq!(a, b);
            let c = kappa_subset_oracle(&t(3, 2), h, &one).unwrap();
            let d = kappa_subset_oracle(&t(3, 2), h, &four).unwrap();
            assert_eq!(c, d);
        }
    }

    #[test]
    fn boundary_lower_bound_with_small_budget() {
        let mut c = cfg();
        c.max_cut_size = Some(3);
        let cert = kappa_boundary_enum(&t(3, 2), 0, &c).unwrap();
        assert_eq!(cert.value, 4);
        assert!(cert.witness.is_none());
        assert!(!cert.exhaustive);
    }

    #[test]
    fn user_side_cap_clears_exhaustive() {
        let mut c = cfg();
        c.max_side_size = Some(1);
        let cert = kappa_boundary_enum(&t(3, 2), 0, &c).unwrap();
        assert_eq!(cert.value, 4);
        assert!(!cert.exhaustive);
    }

    #[test]
    fn flow_matches_degree() {
        assert_eq!(classic_connectivity_flow(&t(3, 2), &cfg()).unwrap(), 4);
        assert_eq!(classic_connectivity_flow(&t(3, 3), &cfg()).unwrap(), 6);
        assert_eq!(classic_connectivity_flow(&t(2, 3), &cfg()).unwrap(), 3);
        assert_eq!(classic_connectivity_flow(&t(4, 2), &cfg()).unwrap(), 4);
        assert!(matches!(
            classic_connectivity_flow(&t(3, 1), &cfg()),
            Err(Error::CompleteGraph)
        ));
    }
}
