use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Instance, POINT_CAP};

/// The materialized order relation over a finite point set: edge i -> j
/// iff point i dominates point j and i != j. Node order is input order.
#[derive(Debug, Clone)]
pub struct SuccessorGraph {
    pub adj: Vec<Vec<usize>>,
    /// Order-predicate evaluations spent building the graph (deterministic
    /// work counter: n * (n - 1)).
    pub pairs_evaluated: usize,
}

impl SuccessorGraph {
    pub fn build(inst: &Instance) -> Result<Self> {
        Self::build_with_threads(inst, 1)
    }

    /// Rows are independent, so edge construction may fan out over a rayon
    /// pool; the resulting adjacency is identical for any thread count.
    pub fn build_with_threads(inst: &Instance, threads: usize) -> Result<Self> {
        let n = inst.len();
        if n > POINT_CAP {
            return Err(Error::CapExceeded { size: n, cap: POINT_CAP });
        }
        let row = |i: usize| -> Vec<usize> {
            (0..n).filter(|&j| j != i && inst.geq_idx(i, j)).collect()
        };
        let adj: Vec<Vec<usize>> = if threads > 1 && n >= 64 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
            pool.install(|| (0..n).into_par_iter().map(row).collect())
        } else {
            (0..n).map(row).collect()
        };
        Ok(SuccessorGraph { adj, pairs_evaluated: n.saturating_mul(n.saturating_sub(1)) })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Shortest path (by edge count) from `from` to `to`, as node indices.
    /// BFS visits neighbors in index order, so the path is deterministic.
    pub fn bfs_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from == to {
            return Some(vec![from]);
        }
        let n = self.len();
        let mut prev = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::from([from]);
        prev[from] = from;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    if v == to {
                        let mut path = vec![to];
                        let mut cur = to;
                        while cur != from {
                            cur = prev[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

/// Strongly connected components by Tarjan's algorithm, plus the
/// condensation structure needed to locate sinks.
#[derive(Debug, Clone)]
pub struct Condensation {
    /// Component id per node.
    pub comp_of: Vec<usize>,
    /// Members per component, each sorted ascending.
    pub comps: Vec<Vec<usize>>,
    /// Whether a component has an outgoing edge to another component.
    pub has_out_edge: Vec<bool>,
}

impl Condensation {
    pub fn of(graph: &SuccessorGraph) -> Self {
        let comps = tarjan_scc(&graph.adj);
        let n = graph.len();
        let mut comp_of = vec![usize::MAX; n];
        for (cid, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = cid;
            }
        }
        let mut has_out_edge = vec![false; comps.len()];
        for u in 0..n {
            for &v in &graph.adj[u] {
                if comp_of[u] != comp_of[v] {
                    has_out_edge[comp_of[u]] = true;
                }
            }
        }
        let mut comps = comps;
        for comp in &mut comps {
            comp.sort_unstable();
        }
        Condensation { comp_of, comps, has_out_edge }
    }

    /// Component ids reachable from the component of `start` (inclusive).
    /// Walks the underlying edges; component reachability follows.
    pub fn reachable_from(&self, graph: &SuccessorGraph, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.comps.len()];
        seen[self.comp_of[start]] = true;
        let mut node_seen = vec![false; graph.len()];
        let mut node_stack = vec![start];
        node_seen[start] = true;
        while let Some(u) = node_stack.pop() {
            for &v in &graph.adj[u] {
                if !node_seen[v] {
                    node_seen[v] = true;
                    node_stack.push(v);
                    seen[self.comp_of[v]] = true;
                }
            }
        }
        seen
    }

    /// Sink components: no outgoing condensation edges.
    pub fn sinks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.comps.len()).filter(|&c| !self.has_out_edge[c])
    }
}

struct TarjanState {
    index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

/// Tarjan SCC on an adjacency list.
pub fn tarjan_scc(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = graph.len();
    let mut state = TarjanState {
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if state.idx[v].is_none() {
            strongconnect(v, graph, &mut state);
        }
    }
    state.comps
}

fn strongconnect(v: usize, graph: &[Vec<usize>], state: &mut TarjanState) {
    state.idx[v] = Some(state.index);
    state.low[v] = state.index;
    state.index += 1;
    state.stack.push(v);
    state.on_stack[v] = true;

    for &w in &graph[v] {
        if state.idx[w].is_none() {
            strongconnect(w, graph, state);
            state.low[v] = state.low[v].min(state.low[w]);
        } else if state.on_stack[w] {
            state.low[v] = state.low[v].min(state.idx[w].unwrap());
        }
    }

    if state.low[v] == state.idx[v].unwrap() {
        let mut comp = Vec::new();
        loop {
            let w = state.stack.pop().expect("stack underflow");
            state.on_stack[w] = false;
            comp.push(w);
            if w == v {
                break;
            }
        }
        state.comps.push(comp);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn three_point_edges_are_the_frozen_ones() {
        let inst = fixtures::three_point_chain();
        let g = SuccessorGraph::build(&inst).unwrap();
        assert_eq!(g.adj, vec![vec![1, 2], vec![2], vec![]]);
        assert_eq!(g.pairs_evaluated, 6);

        // Brute-force the relation straight from the definition as a
        // second route.
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let related = inst.product_geq(&inst.points[i], &inst.points[j]).unwrap();
                assert_eq!(related, g.adj[i].contains(&j), "({i},{j})");
            }
        }
    }

    #[test]
    fn singleton_has_no_edges() {
        let mut inst = fixtures::three_point_chain();
        inst.points.truncate(1);
        let g = SuccessorGraph::build(&inst).unwrap();
        assert_eq!(g.adj, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn antichain_has_no_edges() {
        let mut inst = fixtures::three_point_chain();
        // Far-apart carriers with tiny value gaps relate to nothing.
        inst.points[0] = crate::instance::ProductPoint {
            x: 0,
            y: crate::vector::Vector::new(vec![0.1]),
        };
        inst.points[1] = crate::instance::ProductPoint {
            x: 1,
            y: crate::vector::Vector::new(vec![0.2]),
        };
        inst.points.truncate(2);
        let g = SuccessorGraph::build(&inst).unwrap();
        assert!(g.adj.iter().all(Vec::is_empty));
    }

    #[test]
    fn tarjan_finds_cycle_components() {
        let graph = vec![vec![1], vec![0, 2], vec![]];
        let comps = tarjan_scc(&graph);
        assert_eq!(comps.len(), 2);
        let mut sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2]);
    }

    #[test]
    fn parallel_build_is_identical() {
        let inst = fixtures::orthant_linear_dim2();
        let a = SuccessorGraph::build(&inst).unwrap();
        let b = SuccessorGraph::build_with_threads(&inst, 4).unwrap();
        assert_eq!(a.adj, b.adj);
    }

    #[test]
    fn bfs_path_endpoints() {
        let inst = fixtures::three_point_chain();
        let g = SuccessorGraph::build(&inst).unwrap();
        assert_eq!(g.bfs_path(0, 2).unwrap(), vec![0, 2]);
        assert_eq!(g.bfs_path(1, 1).unwrap(), vec![1]);
        assert!(g.bfs_path(2, 0).is_none());
    }
}
