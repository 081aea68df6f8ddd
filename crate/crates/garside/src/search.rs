//! Minimal-conjugator searches and enumeration of the conjugacy invariant
//! set of a rigid braid.
//!
//! For a rigid `u = delta^k x_1 .. x_l`, any minimal simple conjugator that
//! keeps the conjugate rigid either cuts crossings off the head (it is a
//! prefix of `tau^-k(x_1)`) or adds crossings to the tail (a prefix of the
//! right complement of `x_l`). Both prefix intervals are searched
//! breadth-first with memoization on permutations; branches above a hit are
//! pruned, which is harmless because a prefix that is itself a hit
//! disqualifies everything above it from being minimal.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::braid::Braid;
use crate::conjugacy::{self, SummitBudget};
use crate::simple::SimpleBraid;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("the input braid is not rigid")]
    NotRigid,
    #[error("search budget exceeded: {what} reached {amount}")]
    BudgetExceeded { what: &'static str, amount: usize },
    #[error("no rigid representative found; this class is not supported")]
    NotSupported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConjugatorKind {
    CutHead,
    AddTail,
}

impl fmt::Display for ConjugatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjugatorKind::CutHead => write!(f, "cut-head"),
            ConjugatorKind::AddTail => write!(f, "add-tail"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Cap on distinct prefix states per minimal-conjugator search.
    pub max_prefix_states: usize,
    /// Cap on nodes of an enumerated conjugacy graph.
    pub max_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_prefix_states: 5_000_000, max_nodes: 10_000 }
    }
}

/// Forced-prefix hints: for each seed generator `i`, a simple braid that any
/// rigidity-preserving conjugator starting with `sigma_i` must contain.
/// Sound only for braids the hints were derived for; the search stays exact
/// because pruned branches cannot contain hits.
#[derive(Clone, Debug, Default)]
pub struct SearchHints {
    pub cut_head: Vec<(usize, SimpleBraid)>,
    pub add_tail: Vec<(usize, SimpleBraid)>,
}

#[derive(Clone, Debug)]
pub struct MinimalConjugators {
    pub items: Vec<(SimpleBraid, ConjugatorKind)>,
    /// False when a budget cap cut the search short.
    pub exhaustive: bool,
    pub states_explored: usize,
}

/// Interval search below `top` for prefixes whose conjugate of `u` is rigid.
/// Returns the minimal hits and whether the interval was fully explored.
fn search_interval(
    u: &Braid,
    top: &SimpleBraid,
    hints: Option<&[(usize, SimpleBraid)]>,
    states_left: &mut usize,
) -> (Vec<SimpleBraid>, bool) {
    let n = u.n();
    if top.is_identity() {
        return (Vec::new(), true);
    }
    let mut hits: Vec<SimpleBraid> = Vec::new();
    let mut visited: HashSet<u128> = HashSet::new();
    let mut frontier: Vec<SimpleBraid> = Vec::new();
    let mut exhaustive = true;

    let prune = |rho: &SimpleBraid| -> bool {
        let Some(hints) = hints else { return false };
        let starting = rho.starting_set();
        for (seed, forced) in hints {
            if starting.contains(seed) && !rho.join(forced).is_prefix_of(top) {
                return true;
            }
        }
        false
    };

    for i in top.starting_set() {
        let atom = SimpleBraid::sigma(n, i);
        visited.insert(atom.pack_key());
        if !prune(&atom) {
            frontier.push(atom);
        }
    }

    'levels: while !frontier.is_empty() {
        let mut next = Vec::new();
        for rho in frontier.drain(..) {
            if *states_left == 0 {
                exhaustive = false;
                break 'levels;
            }
            *states_left -= 1;
            let conj = u.conjugate_by_simple(&rho);
            if conj.is_rigid() {
                debug_assert_eq!((conj.inf(), conj.sup()), (u.inf(), u.sup()));
                hits.push(rho);
                continue; // everything above is non-minimal
            }
            let rest = rho.inverse_perm().compose(top);
            for i in rest.starting_set() {
                let child = rho.compose(&SimpleBraid::sigma(n, i));
                if !visited.insert(child.pack_key()) {
                    continue;
                }
                if !prune(&child) {
                    next.push(child);
                }
            }
        }
        frontier = next;
    }

    // Keep only prefix-minimal hits.
    let minimal: Vec<SimpleBraid> = hits
        .iter()
        .filter(|h| !hits.iter().any(|g| *g != **h && g.is_prefix_of(h)))
        .cloned()
        .collect();
    (minimal, exhaustive)
}

fn kind_search(
    u: &Braid,
    kind: ConjugatorKind,
    hints: Option<&SearchHints>,
    states_left: &mut usize,
) -> (Vec<SimpleBraid>, bool) {
    let top = match kind {
        ConjugatorKind::CutHead => {
            let first = u.factors()[0].clone();
            if u.inf().rem_euclid(2) == 1 {
                first.tau()
            } else {
                first
            }
        }
        ConjugatorKind::AddTail => u.factors().last().unwrap().right_complement(),
    };
    let kind_hints = hints.map(|h| match kind {
        ConjugatorKind::CutHead => h.cut_head.as_slice(),
        ConjugatorKind::AddTail => h.add_tail.as_slice(),
    });
    search_interval(u, &top, kind_hints, states_left)
}

pub fn minimal_conjugators(u: &Braid, budget: &SearchBudget) -> Result<MinimalConjugators, SearchError> {
    minimal_conjugators_hinted(u, budget, None)
}

/// Searches a single interval; the cut-head and add-tail intervals can
/// differ wildly in size, so callers needing only one save the difference.
pub fn minimal_conjugators_of_kind(
    u: &Braid,
    kind: ConjugatorKind,
    budget: &SearchBudget,
    hints: Option<&SearchHints>,
) -> Result<MinimalConjugators, SearchError> {
    if !u.is_rigid() {
        return Err(SearchError::NotRigid);
    }
    let mut states_left = budget.max_prefix_states;
    let (hits, exhaustive) = kind_search(u, kind, hints, &mut states_left);
    Ok(MinimalConjugators {
        items: hits.into_iter().map(|h| (h, kind)).collect(),
        exhaustive,
        states_explored: budget.max_prefix_states - states_left,
    })
}

/// As `minimal_conjugators`, with optional forced-prefix pruning hints.
pub fn minimal_conjugators_hinted(
    u: &Braid,
    budget: &SearchBudget,
    hints: Option<&SearchHints>,
) -> Result<MinimalConjugators, SearchError> {
    if !u.is_rigid() {
        return Err(SearchError::NotRigid);
    }
    let mut states_left = budget.max_prefix_states;
    let (cut_hits, cut_exhaustive) =
        kind_search(u, ConjugatorKind::CutHead, hints, &mut states_left);
    let (add_hits, add_exhaustive) =
        kind_search(u, ConjugatorKind::AddTail, hints, &mut states_left);

    let mut items: Vec<(SimpleBraid, ConjugatorKind)> = Vec::new();
    items.extend(cut_hits.into_iter().map(|h| (h, ConjugatorKind::CutHead)));
    items.extend(add_hits.into_iter().map(|h| (h, ConjugatorKind::AddTail)));
    items.sort_by_key(|(h, kind)| (*kind, h.canonical_word()));
    items.dedup();

    Ok(MinimalConjugators {
        items,
        exhaustive: cut_exhaustive && add_exhaustive,
        states_explored: budget.max_prefix_states - states_left,
    })
}

#[derive(Clone, Debug)]
pub struct GraphEdge {
    pub src: usize,
    pub dst: usize,
    pub conjugator: SimpleBraid,
    pub kind: ConjugatorKind,
}

/// The directed graph on a conjugacy invariant set: vertices are the braids
/// of the set, edges the minimal simple conjugators between them.
#[derive(Clone, Debug)]
pub struct ConjugacyGraph {
    n: usize,
    nodes: Vec<Braid>,
    index: BTreeMap<String, usize>,
    edges: Vec<GraphEdge>,
}

impl ConjugacyGraph {
    pub fn new(n: usize) -> Self {
        ConjugacyGraph { n, nodes: Vec::new(), index: BTreeMap::new(), edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[Braid] {
        &self.nodes
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn node_index(&self, x: &Braid) -> Option<usize> {
        self.index.get(&x.key()).copied()
    }

    /// Inserts a node if new; returns its index either way.
    pub fn insert_node(&mut self, x: Braid) -> usize {
        let key = x.key();
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(x);
        self.index.insert(key, id);
        id
    }

    pub fn add_edge(&mut self, edge: GraphEdge) {
        self.edges.push(edge);
    }

    pub fn sort_edges(&mut self) {
        self.edges.sort_by_key(|e| (e.src, e.kind, e.conjugator.canonical_word(), e.dst));
    }

    /// Checks every edge relation `conj^-1 * src * conj = dst`.
    pub fn verify_edges(&self) -> bool {
        self.edges.iter().all(|e| {
            self.nodes[e.src].conjugate_by_simple(&e.conjugator) == self.nodes[e.dst]
        })
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut fwd = vec![Vec::new(); self.nodes.len()];
        let mut bwd = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            fwd[e.src].push(e.dst);
            bwd[e.dst].push(e.src);
        }
        let reach = |adj: &[Vec<usize>]| {
            let mut seen = vec![false; adj.len()];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(&fwd) && reach(&bwd)
    }

    /// Product of edge conjugators along a path `src -> dst`, or `None` when
    /// unreachable.
    pub fn conjugator_between(&self, src: usize, dst: usize) -> Option<Braid> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.src].push(i);
        }
        let mut parent: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([src]);
        seen[src] = true;
        while let Some(v) = queue.pop_front() {
            if v == dst {
                break;
            }
            for &ei in &adj[v] {
                let w = self.edges[ei].dst;
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(ei);
                    queue.push_back(w);
                }
            }
        }
        if !seen[dst] {
            return None;
        }
        let mut chain = Vec::new();
        let mut v = dst;
        while v != src {
            let ei = parent[v]?;
            chain.push(ei);
            v = self.edges[ei].src;
        }
        chain.reverse();
        let mut g = Braid::identity(self.n);
        for ei in chain {
            g = g.multiply(&Braid::from_simple(self.edges[ei].conjugator.clone()));
        }
        Some(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "nodes": self.nodes.iter().map(Braid::to_json).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "src": e.src,
                "dst": e.dst,
                "conjugator": e.conjugator.canonical_word(),
                "kind": e.kind.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        use fmt::Write;
        let mut out = String::from("digraph conjugacy {\n  rankdir=LR;\n");
        for (i, node) in self.nodes.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"{node}\"];").unwrap();
        }
        for e in &self.edges {
            let style = match e.kind {
                ConjugatorKind::CutHead => "solid",
                ConjugatorKind::AddTail => "dashed",
            };
            writeln!(out, "  n{} -> n{} [label=\"{}\", style={}];", e.src, e.dst, e.conjugator, style)
                .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Enumerates the closure of a rigid braid under minimal rigidity-preserving
/// conjugations. The result is deterministic: nodes in discovery order of a
/// breadth-first sweep with sorted conjugator lists.
pub fn enumerate_class(x: &Braid, budget: &SearchBudget) -> Result<ConjugacyGraph, SearchError> {
    if !x.is_rigid() {
        return Err(SearchError::NotRigid);
    }
    let mut graph = ConjugacyGraph::new(x.n());
    graph.insert_node(x.clone());
    let mut cursor = 0usize;
    while cursor < graph.nodes.len() {
        let node = graph.nodes[cursor].clone();
        let found = minimal_conjugators(&node, budget)?;
        if !found.exhaustive {
            return Err(SearchError::BudgetExceeded {
                what: "prefix states",
                amount: budget.max_prefix_states,
            });
        }
        for (rho, kind) in found.items {
            let target = node.conjugate_by_simple(&rho);
            debug_assert!(target.is_rigid());
            let dst = graph.insert_node(target);
            if graph.nodes.len() > budget.max_nodes {
                return Err(SearchError::BudgetExceeded {
                    what: "graph nodes",
                    amount: budget.max_nodes,
                });
            }
            graph.add_edge(GraphEdge { src: cursor, dst, conjugator: rho, kind });
        }
        cursor += 1;
    }
    graph.sort_edges();
    debug_assert!(graph.verify_edges());
    Ok(graph)
}

/// Decides conjugacy via super summit reduction to rigid representatives and
/// set enumeration. On success returns a witness `g` with `g^-1 x g = y`.
pub fn is_conjugate(
    x: &Braid,
    y: &Braid,
    budget: &SearchBudget,
) -> Result<(bool, Option<Braid>), SearchError> {
    assert_eq!(x.n(), y.n(), "strand count mismatch");
    let summit_budget = SummitBudget::default();
    let cx = conjugacy::to_super_summit(x, summit_budget)
        .map_err(|_| SearchError::BudgetExceeded { what: "summit steps", amount: summit_budget.max_steps })?;
    let cy = conjugacy::to_super_summit(y, summit_budget)
        .map_err(|_| SearchError::BudgetExceeded { what: "summit steps", amount: summit_budget.max_steps })?;

    // Zero canonical length: the summit set is a single twist power.
    if cx.representative.is_empty() || cy.representative.is_empty() {
        if cx.representative == cy.representative {
            let g = cx.conjugator.multiply(&cy.conjugator.inverse());
            debug_assert_eq!(x.conjugate_with(&g), *y);
            return Ok((true, Some(g)));
        }
        return Ok((false, None));
    }
    if (cx.inf(), cx.sup()) != (cy.inf(), cy.sup()) {
        return Ok((false, None));
    }

    let (rx, gx) = conjugacy::rigid_in_cycling_orbit(&cx.representative).ok_or(SearchError::NotSupported)?;
    let (ry, gy) = conjugacy::rigid_in_cycling_orbit(&cy.representative).ok_or(SearchError::NotSupported)?;

    let graph = enumerate_class(&rx, budget)?;
    match graph.node_index(&ry) {
        Some(dst) => {
            let path = graph.conjugator_between(0, dst).expect("set is connected from its root");
            // x --(cx.conjugator * gx)--> rx --path--> ry <--(cy.conjugator * gy)-- y
            let g = cx
                .conjugator
                .multiply(&gx)
                .multiply(&path)
                .multiply(&cy.conjugator.multiply(&gy).inverse());
            debug_assert_eq!(x.conjugate_with(&g), *y);
            Ok((true, Some(g)))
        }
        None => Ok((false, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(n: usize, word: &[i64]) -> Braid {
        Braid::normal_form(n, word).unwrap()
    }

    fn simple(n: usize, word: &[usize]) -> SimpleBraid {
        SimpleBraid::from_word(n, word).unwrap()
    }

    #[test]
    fn square_generator_conjugators() {
        let u = nf(3, &[1, 1]);
        let found = minimal_conjugators(&u, &SearchBudget::default()).unwrap();
        assert!(found.exhaustive);
        assert_eq!(
            found.items,
            vec![
                (simple(3, &[1]), ConjugatorKind::CutHead),
                (simple(3, &[2, 1]), ConjugatorKind::AddTail),
            ]
        );
    }

    #[test]
    fn square_generator_class() {
        let graph = enumerate_class(&nf(3, &[1, 1]), &SearchBudget::default()).unwrap();
        assert_eq!(graph.nodes().len(), 2);
        assert!(graph.nodes().iter().all(|b| b.is_rigid()));
        assert!(graph.nodes().iter().all(|b| (b.inf(), b.sup()) == (0, 2)));
        assert!(graph.is_strongly_connected());
        assert!(graph.verify_edges());
        // The set is closed: the other node leads back.
        assert!(graph.node_index(&nf(3, &[2, 2])).is_some());
    }

    #[test]
    fn tau_symmetry_of_class() {
        let graph = enumerate_class(&nf(4, &[1, 1]), &SearchBudget::default()).unwrap();
        let tau_graph = enumerate_class(&nf(4, &[1, 1]).tau(), &SearchBudget::default()).unwrap();
        let mut keys: Vec<String> = graph.nodes().iter().map(|b| b.tau().key()).collect();
        let mut tau_keys: Vec<String> = tau_graph.nodes().iter().map(Braid::key).collect();
        keys.sort();
        tau_keys.sort();
        assert_eq!(keys, tau_keys);
    }

    #[test]
    fn conjugacy_decision_with_witness() {
        let x = nf(3, &[1, 1]);
        let y = nf(3, &[2, 2]);
        let (ok, witness) = is_conjugate(&x, &y, &SearchBudget::default()).unwrap();
        assert!(ok);
        let g = witness.unwrap();
        assert_eq!(x.conjugate_with(&g), y);
        // Different exponent sums can never be conjugate.
        let (ok, witness) = is_conjugate(&x, &nf(3, &[1, 1, 1]), &SearchBudget::default()).unwrap();
        assert!(!ok && witness.is_none());
    }

    #[test]
    fn conjugacy_of_twist_powers() {
        let x = Braid::delta_power(3, 2);
        let g = nf(3, &[1, -2]);
        let y = x.conjugate_with(&g); // central, so y = x
        let (ok, witness) = is_conjugate(&x, &y, &SearchBudget::default()).unwrap();
        assert!(ok);
        assert_eq!(x.conjugate_with(&witness.unwrap()), y);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let u = nf(3, &[1, 1]);
        let tiny = SearchBudget { max_prefix_states: 1, max_nodes: 10 };
        let found = minimal_conjugators(&u, &tiny).unwrap();
        assert!(!found.exhaustive);
        assert!(matches!(
            enumerate_class(&u, &tiny),
            Err(SearchError::BudgetExceeded { .. })
        ));
    }
}
