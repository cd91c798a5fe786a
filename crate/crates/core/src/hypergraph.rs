//! Rank-3 hypergraphs and the two move operators.
//!
//! Vertices are dense indices `0..vertex_count`. Every operation returns a new
//! value; removing a vertex shifts all larger ids down by one, and [`Game`]
//! keeps the mapping back to the ids of the position it was created from.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }

    /// Single-letter code used in game files and on the wire.
    pub fn code(self) -> char {
        match self {
            Player::Maker => 'M',
            Player::Breaker => 'B',
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Maker => f.write_str("Maker"),
            Player::Breaker => f.write_str("Breaker"),
        }
    }
}

/// A set of at most three vertices, stored sorted.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    len: u8,
    v: [VertexId; 3],
}

impl Edge {
    pub const EMPTY: Edge = Edge {
        len: 0,
        v: [VertexId(0); 3],
    };

    pub fn new(vertices: &[VertexId]) -> Result<Edge> {
        if vertices.len() > 3 {
            return Err(Error::Rank {
                arity: vertices.len(),
            });
        }
        let mut v = [VertexId(0); 3];
        v[..vertices.len()].copy_from_slice(vertices);
        let s = &mut v[..vertices.len()];
        s.sort_unstable();
        if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(Edge {
            len: vertices.len() as u8,
            v,
        })
    }

    /// Builds an edge from raw ids; panics on malformed input. Meant for tests
    /// and literals.
    pub fn of(ids: &[u32]) -> Edge {
        let vs: Vec<VertexId> = ids.iter().map(|&i| VertexId(i)).collect();
        Edge::new(&vs).expect("malformed edge literal")
    }

    pub(crate) fn pair(a: VertexId, b: VertexId) -> Edge {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Edge {
            len: 2,
            v: [a, b, VertexId(0)],
        }
    }

    #[inline]
    pub fn vertices(&self) -> &[VertexId] {
        &self.v[..self.len as usize]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, x: VertexId) -> bool {
        self.vertices().contains(&x)
    }

    pub fn is_subset(&self, other: &Edge) -> bool {
        self.vertices().iter().all(|&x| other.contains(x))
    }

    pub fn intersection_len(&self, other: &Edge) -> usize {
        self.vertices()
            .iter()
            .filter(|&&x| other.contains(x))
            .count()
    }

    pub fn meets(&self, other: &Edge) -> bool {
        self.vertices().iter().any(|&x| other.contains(x))
    }

    /// The edge with `x` removed (unchanged when `x` is absent).
    pub fn without(&self, x: VertexId) -> Edge {
        let mut out = Edge::EMPTY;
        for &u in self.vertices() {
            if u != x {
                out.v[out.len as usize] = u;
                out.len += 1;
            }
        }
        out
    }

    /// Applies an order-preserving id map; `None` entries must not occur.
    pub(crate) fn remap(&self, map: &[Option<VertexId>]) -> Edge {
        let mut out = *self;
        for i in 0..out.len as usize {
            out.v[i] = map[out.v[i].index()].expect("remap of removed vertex");
        }
        out
    }

    /// All non-empty proper subsets.
    pub(crate) fn proper_subsets(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.len as u32;
        let full = (1u32 << n) - 1;
        (1..full).map(move |mask| {
            let mut out = Edge::EMPTY;
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    out.v[out.len as usize] = self.v[i as usize];
                    out.len += 1;
                }
            }
            out
        })
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v.0)?;
        }
        f.write_str("}")
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

/// Maps every vertex of a derived hypergraph to its id in the source.
pub type VertexMap = Vec<VertexId>;

/// A rank-3 hypergraph with an edge set kept sorted and free of duplicates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// The two-vertex intersection of overlapping 3-edges that is not an edge itself.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct VirtualEdge {
    pub pair: [VertexId; 2],
    /// Third vertices of every 3-edge containing `pair`, ascending.
    pub generators: Vec<VertexId>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Regularity {
    pub edges: Vec<Edge>,
    pub vertices: Vec<VertexId>,
}

impl Hypergraph {
    /// Builds a hypergraph over `0..vertex_count`. Duplicate edges are merged;
    /// nothing else is changed.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Hypergraph> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            if let Some(&v) = e.vertices().iter().find(|v| v.index() >= vertex_count) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    count: vertex_count,
                });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Hypergraph {
            vertex_count,
            edges,
        })
    }

    /// Vertex count is one past the largest id mentioned.
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Hypergraph {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let n = edges
            .iter()
            .flat_map(|e| e.vertices())
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0);
        Hypergraph::new(n, edges).expect("vertex count covers every edge")
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count as u32).map(VertexId)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    pub fn has_empty_edge(&self) -> bool {
        self.edges.first().is_some_and(Edge::is_empty)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            for v in e.vertices() {
                inc[v.index()].push(i);
            }
        }
        inc
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    /// Removes every edge that has a proper subset in the edge set. With the
    /// empty edge present the result is exactly `{∅}`.
    pub fn normalize(&self) -> Hypergraph {
        self.normalize_with_removed().0
    }

    /// [`Hypergraph::normalize`], also reporting the edges it dropped.
    pub fn normalize_with_removed(&self) -> (Hypergraph, Vec<Edge>) {
        let (kept, removed) = if self.has_empty_edge() {
            (vec![Edge::EMPTY], self.edges[1..].to_vec())
        } else {
            self.edges
                .iter()
                .partition(|e| !e.proper_subsets().any(|s| self.contains_edge(&s)))
        };
        (
            Hypergraph {
                vertex_count: self.vertex_count,
                edges: kept,
            },
            removed,
        )
    }

    /// Drops vertices that lie in no edge.
    pub fn prune_isolated(&self) -> (Hypergraph, VertexMap) {
        let mut used = vec![false; self.vertex_count];
        for e in &self.edges {
            for v in e.vertices() {
                used[v.index()] = true;
            }
        }
        self.retain_vertices(&used)
    }

    /// The raw restriction: edges meeting `deleted` are dropped, `withdrawn`
    /// is removed from the remaining edges, and both sets leave the vertex
    /// set. No normalization happens here.
    pub fn restrict(
        &self,
        withdrawn: &[VertexId],
        deleted: &[VertexId],
    ) -> Result<(Hypergraph, VertexMap)> {
        let mut keep = vec![true; self.vertex_count];
        let mut is_deleted = vec![false; self.vertex_count];
        for &y in deleted {
            self.check_vertex(y)?;
            is_deleted[y.index()] = true;
            keep[y.index()] = false;
        }
        for &x in withdrawn {
            self.check_vertex(x)?;
            if is_deleted[x.index()] {
                return Err(Error::InvalidRestriction(x));
            }
            keep[x.index()] = false;
        }
        let map = compaction(&keep);
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.vertices().iter().any(|v| is_deleted[v.index()]))
            .map(|e| {
                let mut out = Edge::EMPTY;
                for &v in e.vertices() {
                    if let Some(w) = map[v.index()] {
                        out.v[out.len as usize] = w;
                        out.len += 1;
                    }
                }
                out
            });
        let survivors = surviving(&keep);
        let h = Hypergraph::new(survivors.len(), edges).expect("compaction stays in range");
        Ok((h, survivors))
    }

    /// Maker's move: `x` is withdrawn from every edge, then the result is
    /// normalized. Ids above `x` shift down by one.
    pub fn withdraw(&self, x: VertexId) -> Hypergraph {
        debug_assert!(x.index() < self.vertex_count);
        let shift = |v: VertexId| if v > x { VertexId(v.0 - 1) } else { v };
        let mut edges: Vec<Edge> = Vec::with_capacity(self.edges.len());
        let mut shrunk = false;
        for e in &self.edges {
            let mut out = Edge::EMPTY;
            for &v in e.vertices() {
                if v != x {
                    out.v[out.len as usize] = shift(v);
                    out.len += 1;
                }
            }
            shrunk |= out.len != e.len;
            edges.push(out);
        }
        let h = Hypergraph {
            vertex_count: self.vertex_count - 1,
            edges,
        };
        if !shrunk {
            // order is preserved by a monotone shift
            return h;
        }
        let mut h = h;
        h.edges.sort_unstable();
        h.edges.dedup();
        h.normalize()
    }

    /// Breaker's move: every edge containing `y` is deleted.
    pub fn delete(&self, y: VertexId) -> Hypergraph {
        debug_assert!(y.index() < self.vertex_count);
        let shift = |v: VertexId| if v > y { VertexId(v.0 - 1) } else { v };
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.contains(y))
            .map(|e| {
                let mut out = *e;
                for i in 0..out.len as usize {
                    out.v[i] = shift(out.v[i]);
                }
                out
            })
            .collect();
        Hypergraph {
            vertex_count: self.vertex_count - 1,
            edges,
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[VertexId]) -> Hypergraph {
        assert_eq!(perm.len(), self.vertex_count);
        let edges = self.edges.iter().map(|e| {
            let vs: Vec<VertexId> = e.vertices().iter().map(|v| perm[v.index()]).collect();
            Edge::new(&vs).expect("a permutation keeps vertices distinct")
        });
        Hypergraph::new(self.vertex_count, edges).expect("permutation stays in range")
    }

    /// Virtual 2-edges, ordered by pair.
    pub fn virtual_edges(&self) -> Vec<VirtualEdge> {
        let mut pairs = self.pair_thirds();
        pairs.sort_unstable();
        let mut out = Vec::new();
        for group in pairs.chunk_by(|a, b| a.0 == b.0) {
            if group.len() < 2 {
                continue;
            }
            let (a, b) = group[0].0;
            if self.contains_edge(&Edge::pair(a, b)) {
                continue;
            }
            out.push(VirtualEdge {
                pair: [a, b],
                generators: group.iter().map(|g| g.1).collect(),
            });
        }
        out
    }

    /// Regular 3-edges (sharing at most one vertex with every other edge) and
    /// regular vertices (in at least one edge, only in 3-edges, and in no
    /// virtual 2-edge).
    pub fn classify_regular(&self) -> Regularity {
        let mut pairs = self.pair_thirds();
        pairs.sort_unstable();
        let covered = |a: VertexId, b: VertexId| {
            let lo = pairs.partition_point(|p| p.0 < (a, b));
            let hi = pairs.partition_point(|p| p.0 <= (a, b));
            hi - lo
        };
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| e.len() == 3)
            .filter(|e| {
                let v = e.vertices();
                [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])]
                    .iter()
                    .all(|&(a, b)| covered(a, b) == 1 && !self.contains_edge(&Edge::pair(a, b)))
            })
            .copied()
            .collect();

        let mut ok = vec![None::<bool>; self.vertex_count];
        for e in &self.edges {
            for v in e.vertices() {
                let slot = &mut ok[v.index()];
                *slot = Some(slot.unwrap_or(true) && e.len() == 3);
            }
        }
        for ve in self.virtual_edges() {
            for v in ve.pair {
                ok[v.index()] = Some(false);
            }
        }
        let vertices = ok
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Some(true))
            .map(|(i, _)| VertexId::from(i))
            .collect();
        Regularity { edges, vertices }
    }

    /// `((a, b), c)` for every 3-edge `{a, b, c}` and each of its three pairs.
    fn pair_thirds(&self) -> Vec<((VertexId, VertexId), VertexId)> {
        let mut out = Vec::new();
        for e in self.edges.iter().filter(|e| e.len() == 3) {
            let [a, b, c] = e.v;
            out.push(((a, b), c));
            out.push(((a, c), b));
            out.push(((b, c), a));
        }
        out
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.index() >= self.vertex_count {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count,
            });
        }
        Ok(())
    }

    fn retain_vertices(&self, keep: &[bool]) -> (Hypergraph, VertexMap) {
        let map = compaction(keep);
        let edges = self.edges.iter().map(|e| e.remap(&map));
        let survivors = surviving(keep);
        let h = Hypergraph::new(survivors.len(), edges).expect("compaction stays in range");
        (h, survivors)
    }
}

fn compaction(keep: &[bool]) -> Vec<Option<VertexId>> {
    let mut next = 0u32;
    keep.iter()
        .map(|&k| {
            k.then(|| {
                next += 1;
                VertexId(next - 1)
            })
        })
        .collect()
}

fn surviving(keep: &[bool]) -> VertexMap {
    keep.iter()
        .enumerate()
        .filter(|(_, &k)| k)
        .map(|(i, _)| VertexId::from(i))
        .collect()
}

/// A position: a normalized hypergraph and the player to move.
///
/// `origin` maps current vertex ids to the ids of the position this game was
/// created from, so moves can be reported in stable terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    hypergraph: Hypergraph,
    to_move: Player,
    origin: VertexMap,
    labels: Option<Arc<Vec<String>>>,
}

impl Game {
    /// Normalizes and drops isolated vertices.
    pub fn new(hypergraph: Hypergraph, to_move: Player) -> Game {
        let (h, origin) = hypergraph.normalize().prune_isolated();
        Game {
            hypergraph: h,
            to_move,
            origin,
            labels: None,
        }
    }

    /// Normalizes but keeps every vertex, isolated or not.
    pub fn with_isolated(hypergraph: Hypergraph, to_move: Player) -> Game {
        let h = hypergraph.normalize();
        let origin = h.vertices().collect();
        Game {
            hypergraph: h,
            to_move,
            origin,
            labels: None,
        }
    }

    /// Attaches names for the original vertex ids (`labels[root_id]`).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Game> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if let Some(&max) = self.origin.iter().max() {
            if max.index() >= labels.len() {
                return Err(Error::VertexOutOfRange {
                    vertex: max,
                    count: labels.len(),
                });
            }
        }
        self.labels = Some(Arc::new(labels));
        Ok(self)
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn vertex_count(&self) -> usize {
        self.hypergraph.vertex_count()
    }

    pub fn origin(&self) -> &[VertexId] {
        &self.origin
    }

    pub fn root_id(&self, v: VertexId) -> VertexId {
        self.origin[v.index()]
    }

    /// Current id of a vertex given by its original id.
    pub fn current_id(&self, root: VertexId) -> Option<VertexId> {
        self.origin.binary_search(&root).ok().map(VertexId::from)
    }

    pub fn labels(&self) -> Option<&Arc<Vec<String>>> {
        self.labels.as_ref()
    }

    pub fn label(&self, v: VertexId) -> String {
        let root = self.root_id(v);
        match &self.labels {
            Some(l) => l[root.index()].clone(),
            None => root.to_string(),
        }
    }

    /// Current id of the vertex carrying `label`.
    pub fn find_label(&self, label: &str) -> Option<VertexId> {
        match &self.labels {
            Some(l) => {
                let root = l.iter().position(|x| x == label)?;
                self.current_id(VertexId::from(root))
            }
            None => label
                .parse::<u32>()
                .ok()
                .and_then(|r| self.current_id(VertexId(r))),
        }
    }

    /// `Some(winner)` once the result no longer depends on play: the empty
    /// edge means Maker has completed an edge, no edges means Breaker has
    /// destroyed them all.
    pub fn outcome(&self) -> Option<Player> {
        if self.hypergraph.has_empty_edge() {
            Some(Player::Maker)
        } else if self.hypergraph.edge_count() == 0 {
            Some(Player::Breaker)
        } else {
            None
        }
    }

    pub fn maker_move(&self, x: VertexId) -> Result<Game> {
        self.check_move(x, Player::Maker)?;
        Ok(self.successor(self.hypergraph.withdraw(x), x))
    }

    pub fn breaker_move(&self, y: VertexId) -> Result<Game> {
        self.check_move(y, Player::Breaker)?;
        Ok(self.successor(self.hypergraph.delete(y), y))
    }

    /// Plays `v` for whichever side is to move.
    pub fn play(&self, v: VertexId) -> Result<Game> {
        match self.to_move {
            Player::Maker => self.maker_move(v),
            Player::Breaker => self.breaker_move(v),
        }
    }

    /// The same position with the other side to move.
    pub fn with_to_move(&self, to_move: Player) -> Game {
        Game {
            to_move,
            ..self.clone()
        }
    }

    fn check_move(&self, v: VertexId, by: Player) -> Result<()> {
        if self.to_move != by {
            return Err(Error::WrongPlayer {
                to_move: self.to_move,
            });
        }
        if self.outcome().is_some() {
            return Err(Error::Terminal);
        }
        if v.index() >= self.vertex_count() {
            return Err(Error::IllegalMove {
                vertex: v,
                count: self.vertex_count(),
            });
        }
        Ok(())
    }

    fn successor(&self, hypergraph: Hypergraph, removed: VertexId) -> Game {
        let mut origin = self.origin.clone();
        origin.remove(removed.index());
        Game {
            hypergraph,
            to_move: self.to_move.opponent(),
            origin,
            labels: self.labels.clone(),
        }
    }
}
