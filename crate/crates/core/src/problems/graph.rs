use std::fmt::Write as _;
use std::path::Path;

use petgraph::unionfind::UnionFind;

use super::{BitProblem, Direction};
use crate::error::{invalid, Error, Result};
use crate::genome::BitString;
use crate::rng::RandomSource;

/// Undirected, connected graph with integral weights in `[1..wmax]`.
/// Vertices are 0-indexed in memory and 1-indexed in the text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    nv: usize,
    edges: Vec<(usize, usize, u64)>,
    wmax: u64,
}

impl GraphInstance {
    pub fn new(nv: usize, edges: Vec<(usize, usize, u64)>, wmax: u64) -> Result<Self> {
        if nv == 0 {
            return invalid("graph needs at least one vertex");
        }
        for &(u, v, w) in &edges {
            if u >= nv || v >= nv {
                return invalid(format!("edge ({u}, {v}) references a missing vertex"));
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            if w < 1 || w > wmax {
                return invalid(format!("edge weight {w} outside [1..{wmax}]"));
            }
        }
        let g = Self { nv, edges, wmax };
        if g.components(|_| true) != 1 {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.nv
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn wmax(&self) -> u64 {
        self.wmax
    }

    /// Penalty unit `nv^2 * wmax`.
    pub fn penalty(&self) -> u64 {
        (self.nv * self.nv) as u64 * self.wmax
    }

    fn components(&self, selected: impl Fn(usize) -> bool) -> usize {
        let mut uf = UnionFind::<usize>::new(self.nv);
        let mut c = self.nv;
        for (e, &(u, v, _)) in self.edges.iter().enumerate() {
            if selected(e) && uf.union(u, v) {
                c -= 1;
            }
        }
        c
    }

    /// Parses the edge-list format: `nv m wmax`, then `m` lines `u v w`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::InvalidArgument("empty graph file".into()))?;
        let head = parse_numbers(header, 3)?;
        let (nv, m, wmax) = (head[0] as usize, head[1] as usize, head[2]);
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let e = parse_numbers(line, 3)?;
            if e[0] == 0 || e[1] == 0 {
                return invalid("vertices are 1-indexed");
            }
            edges.push((e[0] as usize - 1, e[1] as usize - 1, e[2]));
        }
        if edges.len() != m {
            return invalid(format!("header announces {m} edges, found {}", edges.len()));
        }
        Self::new(nv, edges, wmax)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.nv, self.edges.len(), self.wmax);
        for &(u, v, w) in &self.edges {
            writeln!(s, "{} {} {}", u + 1, v + 1, w).unwrap();
        }
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn parse_numbers(line: &str, count: usize) -> Result<Vec<u64>> {
    let v: Vec<u64> = line
        .split_whitespace()
        .map(|t| t.parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidArgument(format!("bad line {line:?}: {e}")))?;
    if v.len() != count {
        return invalid(format!("expected {count} numbers in {line:?}"));
    }
    Ok(v)
}

/// `M^2 (C-1) + M (|S| - (nv-1)) + sum of selected weights`, minimized.
pub fn eval_mst(x: &BitString, g: &GraphInstance) -> Result<f64> {
    if x.len() != g.edge_count() {
        return invalid(format!("selection has {} bits for {} edges", x.len(), g.edge_count()));
    }
    Ok(mst_value(x, g))
}

fn mst_value(x: &BitString, g: &GraphInstance) -> f64 {
    let m = g.penalty() as i128;
    let c = g.components(|e| x.get(e)) as i128;
    let selected = x.count_ones() as i128;
    let weight: i128 = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(e, _)| x.get(e))
        .map(|(_, &(_, _, w))| w as i128)
        .sum();
    (m * m * (c - 1) + m * (selected - (g.nv as i128 - 1)) + weight) as f64
}

/// Kruskal's algorithm; returns the MST weight and its edge indicator.
pub fn kruskal_tree(g: &GraphInstance) -> Result<(u64, BitString)> {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| g.edges[e].2);
    let mut uf = UnionFind::<usize>::new(g.nv);
    let mut chosen = BitString::zeros(g.edge_count());
    let (mut total, mut joined) = (0, 0);
    for e in order {
        let (u, v, w) = g.edges[e];
        if uf.union(u, v) {
            chosen.set(e, true);
            total += w;
            joined += 1;
        }
    }
    if joined + 1 != g.nv {
        return Err(Error::Disconnected);
    }
    Ok((total, chosen))
}

pub fn kruskal_weight(g: &GraphInstance) -> Result<u64> {
    kruskal_tree(g).map(|(w, _)| w)
}

/// Minimum spanning tree as a pseudo-Boolean problem over edge subsets.
#[derive(Clone, Debug)]
pub struct MstProblem {
    graph: GraphInstance,
    optimum: u64,
    tree: BitString,
}

impl MstProblem {
    pub fn new(graph: GraphInstance) -> Self {
        let (optimum, tree) = kruskal_tree(&graph).expect("instances are connected");
        Self { graph, optimum, tree }
    }

    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }
}

impl BitProblem for MstProblem {
    fn name(&self) -> &str {
        "mst"
    }

    fn dimension(&self) -> usize {
        self.graph.edge_count()
    }

    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    fn evaluate(&self, x: &BitString) -> f64 {
        mst_value(x, &self.graph)
    }

    fn optimum_value(&self) -> Option<f64> {
        Some(self.optimum as f64)
    }

    fn optimizer(&self) -> Option<BitString> {
        Some(self.tree.clone())
    }
}

/// Weights of the connected-triangles instances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TriangleWeights {
    /// Every triangle has two edges of weight `light` and one of weight `heavy`.
    Fixed { light: u64, heavy: u64 },
    /// Triangle `j` has light weight `s_j` and heavy weight `s_{j+1}`, where
    /// consecutive scales differ by a factor of at least `1 + epsilon`.
    Separated { epsilon: f64 },
}

impl Default for TriangleWeights {
    fn default() -> Self {
        TriangleWeights::Separated { epsilon: 1.0 }
    }
}

/// Chain of `t` triangles, triangle `j` on vertices `2j, 2j+1, 2j+2`. Which of
/// the three edges is heavy is drawn uniformly per triangle.
pub fn gen_connected_triangles(t: usize, weights: TriangleWeights, rng: &mut RandomSource) -> Result<GraphInstance> {
    if t == 0 {
        return invalid("need at least one triangle");
    }
    let scales: Vec<(u64, u64)> = match weights {
        TriangleWeights::Fixed { light, heavy } => {
            if light < 1 || heavy <= light {
                return invalid(format!("need 1 <= light < heavy, got {light}, {heavy}"));
            }
            vec![(light, heavy); t]
        }
        TriangleWeights::Separated { epsilon } => {
            if !(epsilon > 0.0) {
                return invalid(format!("separation {epsilon} must be positive"));
            }
            let mut s = vec![1u64];
            for j in 0..t {
                let next = ((s[j] as f64 * (1.0 + epsilon)).ceil() as u64).max(s[j] + 1);
                s.push(next);
            }
            s.windows(2).map(|w| (w[0], w[1])).collect()
        }
    };
    let mut edges = Vec::with_capacity(3 * t);
    for (j, &(light, heavy)) in scales.iter().enumerate() {
        let a = 2 * j;
        let heavy_at = rng.below(3);
        for (idx, (u, v)) in [(a, a + 1), (a + 1, a + 2), (a, a + 2)].into_iter().enumerate() {
            edges.push((u, v, if idx == heavy_at { heavy } else { light }));
        }
    }
    let wmax = scales.iter().map(|s| s.1).max().unwrap();
    GraphInstance::new(2 * t + 1, edges, wmax)
}
