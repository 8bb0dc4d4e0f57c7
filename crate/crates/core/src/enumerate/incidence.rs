//! Incidence structure of a line configuration.
//!
//! Two lines of `P^3` are adjacent when they meet (their spans are
//! coplanar). On top of the adjacency the graph records per-line valences,
//! connected components, the coplanar quadruples (four lines lying in one
//! common plane — for a quartic without a plane component a plane carries at
//! most four lines, so these are exactly the full plane sections), and the
//! size of a maximum pairwise-skew subset.
//!
//! The skew-set size is computed exactly by branch and bound for up to 40
//! lines; beyond that a deterministic greedy pass gives a lower bound, and
//! the result says which one it is.

use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::LineSet;
use crate::geom::ProjLine;

/// Largest set of pairwise non-meeting lines found, with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointBound {
    /// Number of pairwise-skew lines in the witness.
    pub size: usize,
    /// Line indices of one maximum (or best-found) skew set, ascending.
    pub witness: Vec<usize>,
    /// True when found by exhaustive search, false for the greedy bound.
    pub exact: bool,
}

/// The incidence graph of a [`LineSet`].
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    /// Sorted neighbour lists; `adjacency[i]` never contains `i`.
    pub adjacency: Vec<Vec<usize>>,
    /// `valences[i] = adjacency[i].len()`.
    pub valences: Vec<usize>,
    /// Connected components as sorted index lists, ordered by first member.
    pub components: Vec<Vec<usize>>,
    /// Quadruples of lines lying in a single common plane, ascending.
    pub coplanar_quads: Vec<[usize; 4]>,
    /// Maximum pairwise-skew subset (exact or greedy, see the flag).
    pub max_disjoint: DisjointBound,
}

impl IncidenceGraph {
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn max_valence(&self) -> usize {
        self.valences.iter().copied().max().unwrap_or(0)
    }
}

/// Build the full incidence structure of a line set.
pub fn incidence_graph(set: &LineSet) -> IncidenceGraph {
    let lines = set.lines();
    let n = lines.len();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).filter(|&j| j != i && lines[i].meets(&lines[j])).collect())
        .collect();
    let valences = adjacency.iter().map(Vec::len).collect();
    let components = components_of(&adjacency);
    let coplanar_quads = coplanar_quads(lines, &adjacency);
    let max_disjoint = max_disjoint(&adjacency);
    IncidenceGraph { adjacency, valences, components, coplanar_quads, max_disjoint }
}

fn components_of(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Group lines by the plane each adjacent pair spans, then read off every
/// 4-subset of a plane's members. A quartic plane section carries at most
/// four lines unless the plane itself lies on the surface; planes with more
/// than 16 member lines are skipped (their quadruples are not meaningful).
fn coplanar_quads(lines: &[ProjLine], adj: &[Vec<usize>]) -> Vec<[usize; 4]> {
    let mut by_plane: BTreeMap<[u64; 4], BTreeSet<usize>> = BTreeMap::new();
    for (i, nbrs) in adj.iter().enumerate() {
        for &j in nbrs.iter().filter(|&&j| j > i) {
            let h = lines[i].common_plane(&lines[j]).expect("meeting lines span a plane");
            let lead = h.iter().find(|c| !c.is_zero()).expect("non-zero plane");
            let inv = lead.inv();
            let key = h.map(|c| c.mul(&inv).index());
            by_plane.entry(key).or_default().extend([i, j]);
        }
    }
    let mut out = Vec::new();
    for members in by_plane.into_values() {
        let v: Vec<usize> = members.into_iter().collect();
        if v.len() < 4 || v.len() > 16 {
            continue;
        }
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                for c in b + 1..v.len() {
                    for d in c + 1..v.len() {
                        out.push([v[a], v[b], v[c], v[d]]);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn max_disjoint(adj: &[Vec<usize>]) -> DisjointBound {
    let n = adj.len();
    if n == 0 {
        return DisjointBound { size: 0, witness: Vec::new(), exact: true };
    }
    if n <= 40 {
        let masks: Vec<u64> = adj
            .iter()
            .map(|nbrs| nbrs.iter().fold(0u64, |m, &j| m | 1 << j))
            .collect();
        let full = (1u64 << n) - 1;
        let mut best = (0u32, 0u64);
        independent_rec(&masks, full, 0, &mut best);
        let witness: Vec<usize> = (0..n).filter(|&i| best.1 >> i & 1 == 1).collect();
        DisjointBound { size: best.0 as usize, witness, exact: true }
    } else {
        greedy_disjoint(adj)
    }
}

/// Branch and bound for a maximum independent set over bitmask candidates.
/// Pivot on the candidate of largest degree within the candidate set; either
/// it joins the set (dropping its neighbourhood) or it is discarded.
fn independent_rec(masks: &[u64], cand: u64, cur: u64, best: &mut (u32, u64)) {
    let size = cur.count_ones();
    if size + cand.count_ones() <= best.0 {
        return;
    }
    if cand == 0 {
        *best = (size, cur);
        return;
    }
    let v = (0..masks.len())
        .filter(|&i| cand >> i & 1 == 1)
        .max_by_key(|&i| ((masks[i] & cand).count_ones(), std::cmp::Reverse(i)))
        .expect("non-empty candidate set");
    independent_rec(masks, cand & !masks[v] & !(1 << v), cur | 1 << v, best);
    independent_rec(masks, cand & !(1 << v), cur, best);
}

/// Deterministic greedy lower bound: visit lines by ascending valence and
/// keep each one that is skew to everything kept so far.
fn greedy_disjoint(adj: &[Vec<usize>]) -> DisjointBound {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (adj[i].len(), i));
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&c| adj[c].binary_search(&i).is_err()) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    DisjointBound { size: chosen.len(), witness: chosen, exact: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::geom::ProjPoint;

    fn axis_line(f: FieldSpec, a: [i64; 4], b: [i64; 4]) -> ProjLine {
        ProjLine::through(
            &ProjPoint::from_ints(f, a).unwrap(),
            &ProjPoint::from_ints(f, b).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn two_skew_lines() {
        let f = FieldSpec::make(7, 1).unwrap();
        let set = LineSet::new(
            "skew",
            f,
            vec![
                axis_line(f, [1, 0, 0, 0], [0, 1, 0, 0]),
                axis_line(f, [0, 0, 1, 0], [0, 0, 0, 1]),
            ],
        );
        let g = incidence_graph(&set);
        assert_eq!(g.adjacency, vec![Vec::<usize>::new(), Vec::new()]);
        assert_eq!(g.valences, vec![0, 0]);
        assert_eq!(g.components.len(), 2);
        assert!(g.coplanar_quads.is_empty());
        assert_eq!(g.max_disjoint, DisjointBound { size: 2, witness: vec![0, 1], exact: true });
    }

    #[test]
    fn concurrent_but_not_coplanar() {
        // three lines through one point spanning different planes: a
        // triangle in the graph with no coplanar quadruple
        let f = FieldSpec::make(7, 1).unwrap();
        let set = LineSet::new(
            "star",
            f,
            vec![
                axis_line(f, [1, 0, 0, 0], [0, 1, 0, 0]),
                axis_line(f, [1, 0, 0, 0], [0, 0, 1, 0]),
                axis_line(f, [1, 0, 0, 0], [0, 0, 0, 1]),
            ],
        );
        let g = incidence_graph(&set);
        assert_eq!(g.valences, vec![2, 2, 2]);
        assert_eq!(g.components, vec![vec![0, 1, 2]]);
        assert!(g.coplanar_quads.is_empty());
        assert_eq!(g.max_disjoint.size, 1);
        assert!(g.max_disjoint.exact);
    }

    #[test]
    fn four_lines_in_a_plane_form_a_quadruple() {
        let f = FieldSpec::make(7, 1).unwrap();
        // four distinct lines inside {w = 0}
        let set = LineSet::new(
            "plane",
            f,
            vec![
                axis_line(f, [1, 0, 0, 0], [0, 1, 0, 0]),
                axis_line(f, [1, 0, 0, 0], [0, 0, 1, 0]),
                axis_line(f, [0, 1, 0, 0], [0, 0, 1, 0]),
                axis_line(f, [1, 0, 0, 0], [0, 1, 1, 0]),
            ],
        );
        let g = incidence_graph(&set);
        assert_eq!(g.valences, vec![3, 3, 3, 3]);
        assert_eq!(g.coplanar_quads, vec![[0, 1, 2, 3]]);
        assert_eq!(g.max_disjoint.size, 1);
    }

    #[test]
    fn exact_independent_set_on_known_graphs() {
        // path 0-1-2-3-4: maximum independent set {0, 2, 4}
        let path: Vec<Vec<usize>> =
            vec![vec![1], vec![0, 2], vec![1, 3], vec![2, 4], vec![3]];
        let b = max_disjoint(&path);
        assert_eq!((b.size, b.exact), (3, true));
        assert_eq!(b.witness, vec![0, 2, 4]);
        // 5-cycle: independence number 2
        let cycle: Vec<Vec<usize>> =
            vec![vec![1, 4], vec![0, 2], vec![1, 3], vec![2, 4], vec![0, 3]];
        assert_eq!(max_disjoint(&cycle).size, 2);
        // complete graph on 6: 1; empty graph on 6: 6
        let complete: Vec<Vec<usize>> =
            (0..6).map(|i| (0..6).filter(|&j| j != i).collect()).collect();
        assert_eq!(max_disjoint(&complete).size, 1);
        let empty: Vec<Vec<usize>> = vec![Vec::new(); 6];
        let b = max_disjoint(&empty);
        assert_eq!((b.size, b.exact), (6, true));
    }

    #[test]
    fn greedy_kicks_in_past_forty() {
        // 41 isolated vertices: greedy still finds all of them
        let empty: Vec<Vec<usize>> = vec![Vec::new(); 41];
        let b = max_disjoint(&empty);
        assert_eq!(b.size, 41);
        assert!(!b.exact);
    }
}
