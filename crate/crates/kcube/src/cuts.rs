//! Neighborhoods, survivor-graph components, and h-extra cut classification.
//!
//! A vertex set S is an h-extra cut when the graph minus S is disconnected
//! and every remaining component has more than h vertices.

use crate::error::{Error, Result};
use crate::torus::{Torus, Vertex, VertexSet};

/// Component structure of the survivor graph after removing a vertex set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutClassification {
    pub is_cut: bool,
    /// Component sizes in descending order; their sum is k^n - |S|.
    pub component_sizes: Vec<u64>,
    /// Largest h for which the set is an h-extra cut: min component size
    /// minus one, or -1 when the set is not a cut.
    pub max_h: i64,
    pub isolated_vertex_present: bool,
    pub isolated_edge_present: bool,
}

impl CutClassification {
    pub fn is_h_extra_cut(&self, h: u64) -> bool {
        self.is_cut && self.max_h >= h as i64
    }
}

/// Survivor-graph conditions used to restrict fault sets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SurvivorCondition {
    None,
    NoIsolatedVertex,
    NoIsolatedVertexOrEdge,
}

impl SurvivorCondition {
    /// Whether a survivor graph with these component sizes satisfies the
    /// condition.
    pub fn admits(self, component_sizes: &[u64]) -> bool {
        match self {
            Self::None => true,
            Self::NoIsolatedVertex => component_sizes.iter().all(|&s| s != 1),
            Self::NoIsolatedVertexOrEdge => component_sizes.iter().all(|&s| s > 2),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::NoIsolatedVertex => "no-isolated-vertex",
            Self::NoIsolatedVertexOrEdge => "no-isolated-vertex-or-edge",
        }
    }
}

impl std::str::FromStr for SurvivorCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "no-isolated-vertex" => Ok(Self::NoIsolatedVertex),
            "no-isolated-vertex-or-edge" => Ok(Self::NoIsolatedVertexOrEdge),
            _ => Err(Error::Unsupported {
                op: "survivor condition",
                requires: "one of none, no-isolated-vertex, no-isolated-vertex-or-edge",
            }),
        }
    }
}

/// A path u-v-w of two edges whose ends are not adjacent. The constructor
/// rejects the wraparound triple (x, x+1, x+2) in one digit, which closes
/// into a triangle for k=3.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PathTriple {
    torus: Torus,
    u: Vertex,
    v: Vertex,
    w: Vertex,
}

impl PathTriple {
    pub fn new(torus: Torus, u: Vertex, v: Vertex, w: Vertex) -> Result<Self> {
        for x in [u, v, w] {
            torus.vertex(x.code())?;
        }
        if u == w || u == v || v == w {
            return Err(Error::InvalidPath {
                reason: "the three vertices must be distinct",
            });
        }
        if !torus.is_adjacent(u, v) {
            return Err(Error::InvalidPath {
                reason: "first pair is not an edge",
            });
        }
        if !torus.is_adjacent(v, w) {
            return Err(Error::InvalidPath {
                reason: "second pair is not an edge",
            });
        }
        if torus.is_adjacent(u, w) {
            return Err(Error::InvalidPath {
                reason: "path ends must not be adjacent",
            });
        }
        Ok(Self { torus, u, v, w })
    }

    pub fn torus(&self) -> Torus {
        self.torus
    }

    pub fn ends(&self) -> (Vertex, Vertex) {
        (self.u, self.w)
    }

    pub fn middle(&self) -> Vertex {
        self.v
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        [self.u, self.v, self.w]
    }

    pub fn as_set(&self) -> VertexSet {
        VertexSet::from_vertices(self.torus, self.vertices()).expect("validated at construction")
    }
}

/// Vertices outside `s` adjacent to at least one member of `s`.
pub fn open_neighborhood(s: &VertexSet) -> VertexSet {
    let t = s.torus();
    let mut codes: Vec<u64> = s
        .iter()
        .flat_map(|v| t.neighbors(v).codes().to_vec())
        .collect();
    codes.sort_unstable();
    codes.dedup();
    codes.retain(|c| s.codes().binary_search(c).is_err());
    VertexSet::from_sorted_codes(t, codes)
}

/// `s` together with its open neighborhood.
pub fn closed_neighborhood(s: &VertexSet) -> VertexSet {
    open_neighborhood(s)
        .union(s)
        .expect("same torus by construction")
}

const COMPONENT_VERTEX_CEILING: u64 = 1 << 26;

/// Connected components of the graph induced on the survivors V \ s,
/// ordered by smallest member code.
pub fn survivor_components(s: &VertexSet) -> Result<Vec<VertexSet>> {
    let t = s.torus();
    let nv = t.vertex_count();
    if nv > COMPONENT_VERTEX_CEILING {
        return Err(Error::CeilingExceeded {
            what: "vertex count for component analysis",
            amount: nv as u128,
            ceiling: COMPONENT_VERTEX_CEILING as u128,
        });
    }
    if s.len() as u64 == nv {
        return Err(Error::Unsupported {
            op: "survivor_components",
            requires: "at least one survivor (S must be a proper subset)",
        });
    }
    let mut visited = vec![false; nv as usize];
    for &c in s.codes() {
        visited[c as usize] = true;
    }
    let mut components = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..nv {
        if visited[start as usize] {
            continue;
        }
        visited[start as usize] = true;
        queue.push_back(start);
        let mut members = vec![start];
        while let Some(u) = queue.pop_front() {
            for w in t.neighbors(t.vertex(u).expect("in range")).iter() {
                let wc = w.code();
                if !visited[wc as usize] {
                    visited[wc as usize] = true;
                    members.push(wc);
                    queue.push_back(wc);
                }
            }
        }
        members.sort_unstable();
        components.push(VertexSet::from_sorted_codes(t, members));
    }
    Ok(components)
}

/// Component analysis of the survivor graph left by removing `s`.
pub fn classify_cut(s: &VertexSet) -> Result<CutClassification> {
    let components = survivor_components(s)?;
    let mut component_sizes: Vec<u64> = components.iter().map(|c| c.len() as u64).collect();
    component_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let is_cut = component_sizes.len() >= 2;
    let max_h = if is_cut {
        *component_sizes.last().expect("nonempty") as i64 - 1
    } else {
        -1
    };
    let isolated_vertex_present = component_sizes.contains(&1);
    let isolated_edge_present = components.iter().any(|c| {
        c.len() == 2 && {
            let mut it = c.iter();
            let (a, b) = (it.next().expect("size 2"), it.next().expect("size 2"));
            s.torus().is_adjacent(a, b)
        }
    });
    Ok(CutClassification {
        is_cut,
        component_sizes,
        max_h,
        isolated_vertex_present,
        isolated_edge_present,
    })
}

/// The open neighborhood of an edge.
pub fn cut_of_edge(t: &Torus, u: Vertex, v: Vertex) -> Result<VertexSet> {
    if !t.is_adjacent(u, v) {
        return Err(Error::NotAnEdge {
            u: u.code(),
            v: v.code(),
        });
    }
    let pair = VertexSet::from_vertices(*t, [u, v])?;
    Ok(open_neighborhood(&pair))
}

/// The open neighborhood of a two-edge path with nonadjacent ends.
pub fn cut_of_path(p: &PathTriple) -> VertexSet {
    open_neighborhood(&p.as_set())
}

/// True when some survivor has every neighbor inside `s`.
pub fn has_isolated_vertex(s: &VertexSet) -> bool {
    let t = s.torus();
    t.vertices()
        .any(|v| !s.contains(v) && t.neighbors(v).iter().all(|w| s.contains(w)))
}

/// True when some edge survives with every other neighbor of both endpoints
/// inside `s`.
pub fn has_isolated_edge(s: &VertexSet) -> bool {
    let t = s.torus();
    let found = t.edges().any(|(u, v)| {
        !s.contains(u)
            && !s.contains(v)
            && t.neighbors(u).iter().all(|w| w == v || s.contains(w))
            && t.neighbors(v).iter().all(|w| w == u || s.contains(w))
    });
    found
}
