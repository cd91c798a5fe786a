//! Hot-path detection.
//!
//! A hot path is a linear path `(A, t1, .., tn, B)` between two distinct
//! 2-edge ends, proper or virtual, whose intermediates are 3-edges. Each
//! virtual end is backed by two of its generators that stay off the path (and
//! off the other end's chosen pair). With Maker to move, a hot path wins.
//!
//! The fast detector only looks for regular hot paths: intermediates that
//! overlap no other edge. Among regular 3-edges any two that meet share
//! exactly one vertex, so a breadth-first search over them yields a linear
//! path directly.

use std::collections::VecDeque;

use serde::Serialize;

use crate::hypergraph::{Edge, Hypergraph, VertexId};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum EndKind {
    Proper,
    Virtual,
}

/// One end of a hot path: a proper 2-edge or a virtual 2-edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct TwoEdgeEnd {
    pub pair: [VertexId; 2],
    pub kind: EndKind,
    /// Empty for proper ends.
    pub generators: Vec<VertexId>,
}

impl TwoEdgeEnd {
    pub fn as_edge(&self) -> Edge {
        Edge::new(&self.pair).expect("pair of distinct vertices")
    }

    fn contains(&self, v: VertexId) -> bool {
        self.pair.contains(&v)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct HotPathWitness {
    pub start: TwoEdgeEnd,
    pub end: TwoEdgeEnd,
    pub intermediates: Vec<Edge>,
    /// The two generators backing `start`, when it is virtual.
    pub start_generators: Option<[VertexId; 2]>,
    pub end_generators: Option<[VertexId; 2]>,
}

/// Why a claimed witness is not a hot path.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessDefect {
    BadEnd,
    SameEnds,
    NotThreeEdge,
    NotLinear,
    GeneratorChoice,
    GeneratorOnPath,
    GeneratorsShared,
    NotRegular,
}

impl HotPathWitness {
    /// The path as a sequence of vertex sets, ends included.
    pub fn sequence(&self) -> Vec<Edge> {
        let mut seq = Vec::with_capacity(self.intermediates.len() + 2);
        seq.push(self.start.as_edge());
        seq.extend_from_slice(&self.intermediates);
        seq.push(self.end.as_edge());
        seq
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self
            .sequence()
            .iter()
            .flat_map(|e| e.vertices().to_vec())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Checks every hot-path condition against `h`.
    pub fn verify(&self, h: &Hypergraph) -> Result<(), WitnessDefect> {
        for (end, chosen) in [
            (&self.start, self.start_generators),
            (&self.end, self.end_generators),
        ] {
            check_end(h, end)?;
            match (end.kind, chosen) {
                (EndKind::Proper, None) => {}
                (EndKind::Virtual, Some([g1, g2]))
                    if g1 != g2 && end.generators.contains(&g1) && end.generators.contains(&g2) => {
                }
                _ => return Err(WitnessDefect::GeneratorChoice),
            }
        }
        if self.start.pair == self.end.pair {
            return Err(WitnessDefect::SameEnds);
        }
        if self
            .intermediates
            .iter()
            .any(|t| t.len() != 3 || !h.contains_edge(t))
        {
            return Err(WitnessDefect::NotThreeEdge);
        }
        if !is_linear(&self.sequence()) {
            return Err(WitnessDefect::NotLinear);
        }
        let on_path = self.vertices();
        let chosen: Vec<VertexId> = self
            .start_generators
            .iter()
            .chain(self.end_generators.iter())
            .flatten()
            .copied()
            .collect();
        if chosen.iter().any(|g| on_path.binary_search(g).is_ok()) {
            return Err(WitnessDefect::GeneratorOnPath);
        }
        if let (Some(a), Some(b)) = (self.start_generators, self.end_generators) {
            if a.iter().any(|g| b.contains(g)) {
                return Err(WitnessDefect::GeneratorsShared);
            }
        }
        Ok(())
    }

    /// [`HotPathWitness::verify`] plus regularity of every intermediate.
    pub fn verify_regular(&self, h: &Hypergraph) -> Result<(), WitnessDefect> {
        self.verify(h)?;
        let regular = h.classify_regular().edges;
        if self
            .intermediates
            .iter()
            .all(|t| regular.binary_search(t).is_ok())
        {
            Ok(())
        } else {
            Err(WitnessDefect::NotRegular)
        }
    }
}

fn check_end(h: &Hypergraph, end: &TwoEdgeEnd) -> Result<(), WitnessDefect> {
    let e = Edge::new(&end.pair).map_err(|_| WitnessDefect::BadEnd)?;
    let proper = h.contains_edge(&e);
    let ok = match end.kind {
        EndKind::Proper => proper && end.generators.is_empty(),
        EndKind::Virtual => {
            !proper
                && end.generators.len() >= 2
                && end.generators.iter().all(|&g| {
                    !end.contains(g)
                        && Edge::new(&[end.pair[0], end.pair[1], g])
                            .is_ok_and(|t| h.contains_edge(&t))
                })
        }
    };
    if ok {
        Ok(())
    } else {
        Err(WitnessDefect::BadEnd)
    }
}

/// Consecutive sets share exactly one vertex, non-consecutive ones none.
pub fn is_linear(seq: &[Edge]) -> bool {
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            let shared = seq[i].intersection_len(&seq[j]);
            let want = usize::from(j == i + 1);
            if shared != want {
                return false;
            }
        }
    }
    true
}

/// Connected components of the regular 3-edges, adjacency being a shared
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMap {
    /// Regular 3-edges, ascending.
    pub edges: Vec<Edge>,
    /// `component[i]` is the component id of `edges[i]`; ids are dense and
    /// numbered by first appearance.
    pub component: Vec<usize>,
    /// Component ids touching each vertex, ascending.
    pub incidence: Vec<Vec<usize>>,
}

impl ComponentMap {
    pub fn component_count(&self) -> usize {
        self.component.iter().max().map_or(0, |m| m + 1)
    }

    /// Component ids touching any vertex of `pair`.
    pub fn touching(&self, pair: &[VertexId; 2]) -> Vec<usize> {
        let mut out: Vec<usize> = pair
            .iter()
            .flat_map(|v| self.incidence[v.index()].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}

pub fn component_map(h: &Hypergraph) -> ComponentMap {
    component_map_of(h, h.classify_regular().edges)
}

fn component_map_of(h: &Hypergraph, edges: Vec<Edge>) -> ComponentMap {
    let n = h.vertex_count();
    let mut sets = DisjointSets::new(edges.len());
    let mut first_edge: Vec<Option<usize>> = vec![None; n];
    for (i, e) in edges.iter().enumerate() {
        for v in e.vertices() {
            match first_edge[v.index()] {
                Some(j) => sets.union(i, j),
                None => first_edge[v.index()] = Some(i),
            }
        }
    }
    let mut ids = vec![usize::MAX; edges.len()];
    let mut next = 0;
    let mut component = Vec::with_capacity(edges.len());
    for i in 0..edges.len() {
        let root = sets.find(i);
        if ids[root] == usize::MAX {
            ids[root] = next;
            next += 1;
        }
        component.push(ids[root]);
    }
    let mut incidence = vec![Vec::new(); n];
    for (e, &c) in edges.iter().zip(&component) {
        for v in e.vertices() {
            incidence[v.index()].push(c);
        }
    }
    for inc in &mut incidence {
        inc.sort_unstable();
        inc.dedup();
    }
    ComponentMap {
        edges,
        component,
        incidence,
    }
}

/// All proper 2-edges and virtual 2-edges, ordered by pair.
pub fn two_edge_ends(h: &Hypergraph) -> Vec<TwoEdgeEnd> {
    let mut ends: Vec<TwoEdgeEnd> = h
        .edges()
        .iter()
        .filter(|e| e.len() == 2)
        .map(|e| TwoEdgeEnd {
            pair: [e.vertices()[0], e.vertices()[1]],
            kind: EndKind::Proper,
            generators: Vec::new(),
        })
        .chain(h.virtual_edges().into_iter().map(|v| TwoEdgeEnd {
            pair: v.pair,
            kind: EndKind::Virtual,
            generators: v.generators,
        }))
        .collect();
    ends.sort_unstable();
    ends
}

pub fn has_singleton(h: &Hypergraph) -> Option<VertexId> {
    h.edges()
        .iter()
        .find(|e| e.len() == 1)
        .map(|e| e.vertices()[0])
}

/// Candidate generator pairs for `end`, avoiding `blocked`.
fn generator_choices(end: &TwoEdgeEnd, blocked: &[VertexId]) -> Vec<Option<[VertexId; 2]>> {
    match end.kind {
        EndKind::Proper => vec![None],
        EndKind::Virtual => {
            let free: Vec<VertexId> = end
                .generators
                .iter()
                .copied()
                .filter(|g| !blocked.contains(g))
                .collect();
            let mut out = Vec::new();
            for i in 0..free.len() {
                for j in i + 1..free.len() {
                    out.push(Some([free[i], free[j]]));
                }
            }
            out
        }
    }
}

fn disjoint(a: Option<[VertexId; 2]>, b: Option<[VertexId; 2]>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => !a.iter().any(|g| b.contains(g)),
        _ => true,
    }
}

/// Finds a hot path if one exists, searching regular hot paths only.
///
/// Pairs of ends are tried in ascending order and the first witness found is
/// returned, so the result is a deterministic function of `h`.
pub fn find_hot_path(h: &Hypergraph) -> Option<HotPathWitness> {
    let ends = two_edge_ends(h);
    if ends.len() < 2 {
        return None;
    }
    let mut components: Option<ComponentMap> = None;
    let mut search: Option<RegularSearch> = None;
    for i in 0..ends.len() {
        for j in i + 1..ends.len() {
            let (a, b) = (&ends[i], &ends[j]);
            let shared = a.pair.iter().filter(|v| b.contains(**v)).count();
            let blocked = [a.pair[0], a.pair[1], b.pair[0], b.pair[1]];
            let witness = if shared == 1 {
                touching_ends(a, b, &blocked)
            } else {
                let comps = components.get_or_insert_with(|| component_map(h));
                if comps.edges.is_empty() {
                    continue;
                }
                let ta = comps.touching(&a.pair);
                let tb = comps.touching(&b.pair);
                if !ta.iter().any(|c| tb.binary_search(c).is_ok()) {
                    continue;
                }
                let search = search.get_or_insert_with(|| RegularSearch::new(h, comps));
                bridged_ends(search, a, b, &blocked)
            };
            if let Some(w) = witness {
                debug_assert_eq!(w.verify(h), Ok(()), "detector produced {w:?}");
                if w.verify(h).is_ok() {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Zero-intermediate case: the two ends share exactly one vertex.
fn touching_ends(a: &TwoEdgeEnd, b: &TwoEdgeEnd, blocked: &[VertexId]) -> Option<HotPathWitness> {
    for ga in generator_choices(a, blocked) {
        for gb in generator_choices(b, blocked) {
            if disjoint(ga, gb) {
                return Some(HotPathWitness {
                    start: a.clone(),
                    end: b.clone(),
                    intermediates: Vec::new(),
                    start_generators: ga,
                    end_generators: gb,
                });
            }
        }
    }
    None
}

/// General case: disjoint ends joined through regular 3-edges that avoid the
/// chosen generators.
fn bridged_ends(
    search: &mut RegularSearch,
    a: &TwoEdgeEnd,
    b: &TwoEdgeEnd,
    blocked: &[VertexId],
) -> Option<HotPathWitness> {
    for ga in generator_choices(a, blocked) {
        for gb in generator_choices(b, blocked) {
            if !disjoint(ga, gb) {
                continue;
            }
            let forbidden: Vec<VertexId> = ga.iter().chain(gb.iter()).flatten().copied().collect();
            if let Some(path) = search.shortest(&a.pair, &b.pair, &forbidden) {
                return Some(HotPathWitness {
                    start: a.clone(),
                    end: b.clone(),
                    intermediates: path,
                    start_generators: ga,
                    end_generators: gb,
                });
            }
        }
    }
    None
}

/// Breadth-first search over regular 3-edges restricted to one component map.
struct RegularSearch {
    edges: Vec<Edge>,
    /// Regular edge indices incident to each vertex.
    incident: Vec<Vec<usize>>,
    prev: Vec<usize>,
    seen: Vec<u32>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl RegularSearch {
    fn new(h: &Hypergraph, comps: &ComponentMap) -> Self {
        let mut incident = vec![Vec::new(); h.vertex_count()];
        for (i, e) in comps.edges.iter().enumerate() {
            for v in e.vertices() {
                incident[v.index()].push(i);
            }
        }
        RegularSearch {
            edges: comps.edges.clone(),
            incident,
            prev: vec![usize::MAX; comps.edges.len()],
            seen: vec![0; comps.edges.len()],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    /// Shortest sequence of regular edges from one touching `from` to one
    /// touching `to`, skipping edges that contain a forbidden vertex. Ties go
    /// to the smallest edge indices.
    fn shortest(
        &mut self,
        from: &[VertexId; 2],
        to: &[VertexId; 2],
        forbidden: &[VertexId],
    ) -> Option<Vec<Edge>> {
        self.stamp += 1;
        self.queue.clear();
        let usable = |e: &Edge| !forbidden.iter().any(|&g| e.contains(g));
        let mut starts: Vec<usize> = from
            .iter()
            .flat_map(|v| self.incident[v.index()].iter().copied())
            .filter(|&i| usable(&self.edges[i]))
            .collect();
        starts.sort_unstable();
        starts.dedup();
        for i in starts {
            self.seen[i] = self.stamp;
            self.prev[i] = usize::MAX;
            self.queue.push_back(i);
        }
        while let Some(i) = self.queue.pop_front() {
            let e = self.edges[i];
            if to.iter().any(|&v| e.contains(v)) {
                let mut path = vec![e];
                let mut k = i;
                while self.prev[k] != usize::MAX {
                    k = self.prev[k];
                    path.push(self.edges[k]);
                }
                path.reverse();
                return Some(path);
            }
            for &v in e.vertices() {
                for idx in 0..self.incident[v.index()].len() {
                    let j = self.incident[v.index()][idx];
                    if self.seen[j] != self.stamp && usable(&self.edges[j]) {
                        self.seen[j] = self.stamp;
                        self.prev[j] = i;
                        self.queue.push_back(j);
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::from_edges(edges.iter().map(|e| Edge::of(e))).normalize()
    }

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn components_examples() {
        let m = component_map(&hg(&[&[0, 1, 2], &[2, 3, 4]]));
        assert_eq!(m.component, vec![0, 0]);
        let m = component_map(&hg(&[&[0, 1, 2], &[3, 4, 5]]));
        assert_eq!(m.component_count(), 2);
        let m = component_map(&hg(&[&[0, 1, 2], &[0, 1, 3]]));
        assert!(m.edges.is_empty());
    }

    #[test]
    fn ends_examples() {
        let ends = two_edge_ends(&hg(&[&[0, 1], &[0, 1, 2]]));
        assert_eq!(ends.len(), 1);
        assert_eq!(ends[0].kind, EndKind::Proper);

        // w1=0, w2=1, x=2, y=3
        let ends = two_edge_ends(&hg(&[&[0, 3, 2], &[1, 3, 2]]));
        assert_eq!(
            ends,
            vec![TwoEdgeEnd {
                pair: [v(2), v(3)],
                kind: EndKind::Virtual,
                generators: vec![v(0), v(1)],
            }]
        );
        assert!(two_edge_ends(&hg(&[&[0, 1, 2]])).is_empty());
    }

    #[test]
    fn one_regular_intermediate() {
        // a=0 b=1 c=2 d=3 e=4
        let h = hg(&[&[0, 1], &[1, 2, 3], &[3, 4]]);
        let w = find_hot_path(&h).unwrap();
        assert_eq!(w.intermediates, vec![Edge::of(&[1, 2, 3])]);
        assert_eq!(w.start.pair, [v(0), v(1)]);
        assert_eq!(w.end.pair, [v(3), v(4)]);
        assert_eq!(w.verify_regular(&h), Ok(()));
    }

    #[test]
    fn disjoint_ends_without_bridge() {
        assert_eq!(find_hot_path(&hg(&[&[0, 1], &[2, 3]])), None);
    }

    #[test]
    fn virtual_end_meets_proper_end() {
        // w1=0 w2=1 x=2 y=3 z=4
        let h = hg(&[&[0, 3, 2], &[1, 3, 2], &[2, 4]]);
        let w = find_hot_path(&h).unwrap();
        assert!(w.intermediates.is_empty());
        assert_eq!(w.start.kind, EndKind::Virtual);
        assert_eq!(w.start_generators, Some([v(0), v(1)]));
        assert_eq!(w.end.pair, [v(2), v(4)]);
    }

    #[test]
    fn v_shape_is_found() {
        let w = find_hot_path(&hg(&[&[0, 1], &[1, 2]])).unwrap();
        assert!(w.intermediates.is_empty());
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(has_singleton(&hg(&[&[0]])), Some(v(0)));
        assert_eq!(has_singleton(&hg(&[&[0, 1]])), None);
        let empty = Hypergraph::new(0, [Edge::EMPTY]).unwrap();
        assert_eq!(has_singleton(&empty), None);
    }

    #[test]
    fn verify_rejects_generator_on_path() {
        let h = hg(&[&[0, 3, 2], &[1, 3, 2], &[2, 4]]);
        let mut w = find_hot_path(&h).unwrap();
        w.start_generators = Some([v(0), v(4)]);
        assert_eq!(w.verify(&h), Err(WitnessDefect::GeneratorChoice));
    }

    #[test]
    fn linearity() {
        assert!(is_linear(&[
            Edge::of(&[0, 1]),
            Edge::of(&[1, 2, 3]),
            Edge::of(&[3, 4])
        ]));
        assert!(!is_linear(&[
            Edge::of(&[0, 1]),
            Edge::of(&[1, 2, 3]),
            Edge::of(&[0, 3])
        ]));
        assert!(!is_linear(&[Edge::of(&[0, 1]), Edge::of(&[0, 1, 3])]));
    }
}
