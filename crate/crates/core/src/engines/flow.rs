//! Integral max-flow by shortest augmenting paths, with a min-cut certificate.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: usize,
    arcs: Vec<Arc>,
    source: usize,
    sink: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    /// Flow on each arc, in insertion order.
    pub flow: Vec<u64>,
    /// Nodes reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
    /// Total capacity of arcs leaving `source_side`; equals `value`.
    pub cut_capacity: u64,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Result<Self> {
        if source >= nodes || sink >= nodes {
            return Err(Error::Dimension(format!(
                "terminals ({source}, {sink}) outside 0..{nodes}"
            )));
        }
        if source == sink {
            return Err(Error::Dimension("source equals sink".into()));
        }
        Ok(FlowNetwork {
            nodes,
            arcs: Vec::new(),
            source,
            sink,
        })
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u64) -> Result<usize> {
        if from >= self.nodes || to >= self.nodes {
            return Err(Error::Dimension(format!(
                "arc ({from}, {to}) outside 0..{}",
                self.nodes
            )));
        }
        self.arcs.push(Arc { from, to, capacity });
        Ok(self.arcs.len() - 1)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Capacity of the arcs crossing from `side` to its complement.
    pub fn cut_capacity(&self, side: &[bool]) -> u64 {
        self.arcs
            .iter()
            .filter(|a| side[a.from] && !side[a.to])
            .map(|a| a.capacity)
            .sum()
    }
}

pub fn max_flow(net: &FlowNetwork) -> FlowResult {
    // Residual graph: arc 2k is forward, 2k+1 its reverse.
    let mut head = Vec::with_capacity(net.arcs.len() * 2);
    let mut residual = Vec::with_capacity(net.arcs.len() * 2);
    let mut adj = vec![Vec::new(); net.nodes];
    for a in &net.arcs {
        adj[a.from].push(head.len());
        head.push(a.to);
        residual.push(a.capacity);
        adj[a.to].push(head.len());
        head.push(a.from);
        residual.push(0);
    }

    let mut value = 0u64;
    let mut parent: Vec<Option<usize>> = vec![None; net.nodes];
    loop {
        parent.iter_mut().for_each(|p| *p = None);
        let mut seen = vec![false; net.nodes];
        seen[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(v) = queue.pop_front() {
            if v == net.sink {
                break;
            }
            for &e in &adj[v] {
                let w = head[e];
                if residual[e] > 0 && !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if !seen[net.sink] {
            break;
        }
        let mut bottleneck = u64::MAX;
        let mut v = net.sink;
        while let Some(e) = parent[v] {
            bottleneck = bottleneck.min(residual[e]);
            v = head[e ^ 1];
        }
        let mut v = net.sink;
        while let Some(e) = parent[v] {
            residual[e] -= bottleneck;
            residual[e ^ 1] += bottleneck;
            v = head[e ^ 1];
        }
        value += bottleneck;
    }

    let mut source_side = vec![false; net.nodes];
    source_side[net.source] = true;
    let mut queue = VecDeque::from([net.source]);
    while let Some(v) = queue.pop_front() {
        for &e in &adj[v] {
            let w = head[e];
            if residual[e] > 0 && !source_side[w] {
                source_side[w] = true;
                queue.push_back(w);
            }
        }
    }
    let flow = (0..net.arcs.len()).map(|k| residual[2 * k + 1]).collect();
    let cut_capacity = net.cut_capacity(&source_side);
    debug_assert_eq!(cut_capacity, value);
    FlowResult {
        value,
        flow,
        source_side,
        cut_capacity,
    }
}

/// Maximum matching between `left` and `right` vertices through a unit
/// network. Pairs are returned sorted.
pub fn max_bipartite_matching(
    left: usize,
    right: usize,
    edges: &[(usize, usize)],
) -> Result<Vec<(usize, usize)>> {
    let source = left + right;
    let sink = source + 1;
    let mut net = FlowNetwork::new(left + right + 2, source, sink)?;
    for l in 0..left {
        net.add_arc(source, l, 1)?;
    }
    for r in 0..right {
        net.add_arc(left + r, sink, 1)?;
    }
    let mut edge_arcs = Vec::with_capacity(edges.len());
    for &(l, r) in edges {
        if l >= left || r >= right {
            return Err(Error::Dimension(format!(
                "edge ({l}, {r}) outside {left} x {right}"
            )));
        }
        edge_arcs.push(net.add_arc(l, left + r, 1)?);
    }
    let result = max_flow(&net);
    let mut matching: Vec<(usize, usize)> = edges
        .iter()
        .zip(&edge_arcs)
        .filter(|(_, &a)| result.flow[a] > 0)
        .map(|(&e, _)| e)
        .collect();
    matching.sort_unstable();
    matching.dedup();
    Ok(matching)
}
