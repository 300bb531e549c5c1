use std::collections::VecDeque;

/// Residual network for unit-ish integer capacities, augmented along
/// shortest paths (Edmonds–Karp).
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    graph: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { graph: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: u32) {
        self.graph[from].push(self.to.len());
        self.to.push(to);
        self.cap.push(cap);
        self.graph[to].push(self.to.len());
        self.to.push(from);
        self.cap.push(0);
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let n = self.graph.len();
        let mut total = 0u64;
        loop {
            // parent edge of each node on the BFS tree
            let mut parent: Vec<Option<usize>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[source] = true;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for &e in &self.graph[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && !seen[v] {
                        seen[v] = true;
                        parent[v] = Some(e);
                        queue.push_back(v);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut bottleneck = u32::MAX;
            let mut v = sink;
            while let Some(e) = parent[v] {
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = sink;
            while let Some(e) = parent[v] {
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            total += u64::from(bottleneck);
        }
    }
}

/// Maximum number of vertex-disjoint paths from `sources` to `targets` in
/// an undirected graph given by adjacency lists, via node splitting.
pub fn vertex_disjoint_paths(adjacency: &[Vec<usize>], sources: &[usize], targets: &[usize]) -> u64 {
    let n = adjacency.len();
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    for (u, nbrs) in adjacency.iter().enumerate() {
        net.add_edge(2 * u, 2 * u + 1, 1);
        for &v in nbrs {
            net.add_edge(2 * u + 1, 2 * v, 1);
        }
    }
    for &a in sources {
        net.add_edge(s, 2 * a, 1);
    }
    for &b in targets {
        net.add_edge(2 * b + 1, t, 1);
    }
    net.max_flow(s, t)
}
