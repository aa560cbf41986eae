//! Multiple-pairs shortest paths under batch vertex deletions.
//!
//! The index is built once for a graph `G` and a list of source/target
//! pairs. A query names a vertex set `D` and returns every pair distance in
//! `G \ D`. Paths with many hops are caught by Dijkstra runs from and to a
//! random sample of hubs. Paths with few hops are split by hop-length level
//! `i`: each level keeps an ordered list of centers `c_{i,1}, c_{i,2}, ...`
//! with `<= 2^i`-hop paths to and from every vertex stored at build time,
//! each computed with the earlier centers deleted. At query time only the
//! stored paths that `D` destroys are repaired, on small sketch graphs.
//!
//! Answers are exact with high probability over the hub samples and never
//! below the true distance.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DynamicDigraph, PairSet, VertexId};
use crate::negcycle::NegCycleDetector;
use crate::sssp::{
    bellman_ford_hops, dijkstra, dijkstra_lists, Direction, HopDistTable, PriceFunction,
};
use crate::weight::{ExtWeight, Weight};

const INF: f64 = f64::INFINITY;

#[derive(Debug, Clone, PartialEq)]
pub enum MpspAnswer {
    NegativeCycle,
    /// One distance per pair, in pair order.
    Distances(Vec<ExtWeight>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpspConfig {
    /// Upper bound on `|D|` the hop levels are tuned for. Larger queries stay
    /// correct but get slower.
    pub d_max: usize,
    /// Hub samples at level `i` hold `c_hit * (n / 2^i) * ln n` vertices.
    pub c_hit: f64,
    pub seed: u64,
}

impl Default for MpspConfig {
    fn default() -> Self {
        MpspConfig {
            d_max: 1,
            c_hit: 4.0,
            seed: 0,
        }
    }
}

/// Which stored table a path comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PathSide {
    /// Path from a vertex to the center.
    From,
    /// Path from the center to a vertex.
    To,
}

/// A stored path: center index `j`, side, and the non-center endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathRef {
    pub j: u32,
    pub side: PathSide,
    pub endpoint: u32,
}

#[derive(Debug, Clone)]
pub struct Level {
    hops: usize,
    sample: Vec<VertexId>,
    in_sample: Vec<bool>,
    cover: Vec<VertexId>,
    to: Vec<HopDistTable>,
    from: Vec<HopDistTable>,
    congestion: Vec<u64>,
    hits: Vec<Vec<PathRef>>,
    sorted: Vec<Vec<(f64, u32)>>,
}

impl Level {
    /// Hop bound `2^i` of this level.
    pub fn hops(&self) -> usize {
        self.hops
    }

    /// Sampled hubs in sampling order.
    pub fn sample(&self) -> &[VertexId] {
        &self.sample
    }

    /// Ordered centers `c_{i,1}, c_{i,2}, ...`.
    pub fn cover(&self) -> &[VertexId] {
        &self.cover
    }

    /// Hop-limited distances from center `j` (0-based).
    pub fn to_table(&self, j: usize) -> &HopDistTable {
        &self.to[j]
    }

    /// Hop-limited distances to center `j` (0-based).
    pub fn from_table(&self, j: usize) -> &HopDistTable {
        &self.from[j]
    }

    pub fn congestion(&self) -> &[u64] {
        &self.congestion
    }

    /// Stored paths passing through `x`.
    pub fn paths_through(&self, x: VertexId) -> &[PathRef] {
        &self.hits[x]
    }

    /// `(d^{i,j}(s_l, t_l), j)` for pair `l`, ascending.
    pub fn candidates(&self, l: usize) -> &[(f64, u32)] {
        &self.sorted[l]
    }
}

/// Intermediate values of one query, for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryReport {
    /// Highest level consulted; long paths use that level's hub sample.
    pub cutoff: usize,
    pub d_long: Vec<f64>,
    /// `estimates[i - 1][l]`: level-`i` estimate for pair `l`.
    pub estimates: Vec<Vec<f64>>,
    /// `survivors[i - 1][l]`: best stored candidate untouched by `D`.
    pub survivors: Vec<Vec<f64>>,
    /// `destroyed[i - 1][l]`: centers `j` whose stored path for pair `l` meets `D`.
    pub destroyed: Vec<Vec<Vec<u32>>>,
    pub distances: Vec<ExtWeight>,
}

#[derive(Debug, Clone)]
pub struct BatchDeletionIndex {
    g: DynamicDigraph,
    pairs: PairSet,
    config: MpspConfig,
    levels: Vec<Level>,
    negdet: NegCycleDetector,
}

/// Number of hop levels `l` (so `h = 2^l`) for `n` vertices and at most
/// `d_max` deletions per query.
pub fn level_count(n: usize, d_max: usize) -> usize {
    let ratio = n as f64 / d_max.max(1) as f64;
    let want = ratio.sqrt().log2().floor();
    let cap = (n.max(2) as f64).log2().floor().max(1.0);
    (want.max(1.0).min(cap)) as usize
}

fn sample_size(n: usize, hops: usize, c_hit: f64) -> usize {
    if n == 0 {
        return 0;
    }
    let raw = (c_hit * (n as f64 / hops as f64) * (n as f64).ln()).ceil();
    (raw.max(1.0) as usize).min(n)
}

fn ceil_log2(n: usize) -> u64 {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as u64
    }
}

impl BatchDeletionIndex {
    pub fn build(g: &DynamicDigraph, pairs: PairSet, config: MpspConfig) -> Result<Self> {
        if config.d_max < 1 {
            return Err(Error::InvalidConfig("d_max must be at least 1".into()));
        }
        if config.c_hit.is_nan() || config.c_hit <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "c_hit must be positive, got {}",
                config.c_hit
            )));
        }
        if let Some(&(s, t)) = pairs
            .pairs()
            .iter()
            .find(|&&(s, t)| s >= g.n() || t >= g.n())
        {
            return Err(Error::InvalidVertex {
                v: s.max(t),
                n: g.n(),
            });
        }
        let n = g.n();
        let ell = level_count(n, config.d_max);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut levels = Vec::with_capacity(ell);
        for i in 1..=ell {
            let hops = 1usize << i;
            let size = sample_size(n, hops, config.c_hit);
            let picked = sample(&mut rng, n, size).into_vec();
            levels.push(build_level(g, &pairs, hops, picked));
        }
        Ok(BatchDeletionIndex {
            g: g.clone(),
            pairs,
            config,
            levels,
            negdet: NegCycleDetector::from_graph(g)?,
        })
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    pub fn pairs(&self) -> &PairSet {
        &self.pairs
    }

    pub fn config(&self) -> MpspConfig {
        self.config
    }

    /// Levels `1..=l`, at index `i - 1`.
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Level consulted last for a query deleting `d` vertices.
    pub fn cutoff(&self, d: usize) -> usize {
        let n = self.g.n();
        let raw = (n as f64 / d.max(1) as f64).sqrt().log2().floor();
        (raw.max(1.0) as usize).min(self.levels.len())
    }

    pub fn query(&mut self, d: &[VertexId]) -> Result<MpspAnswer> {
        Ok(match self.query_detailed(d)? {
            None => MpspAnswer::NegativeCycle,
            Some(r) => MpspAnswer::Distances(r.distances),
        })
    }

    /// Like [`query`](Self::query) but keeps intermediate values. `None`
    /// means `G \ D` has a negative cycle.
    pub fn query_detailed(&mut self, d: &[VertexId]) -> Result<Option<QueryReport>> {
        for &v in d {
            self.g.check_vertex(v)?;
        }
        self.negdet.remove_vertices(d)?;
        let prices = if self.negdet.has_negative_cycle() {
            None
        } else {
            Some(self.negdet.price_function()?)
        };
        self.negdet.revert()?;
        match prices {
            None => Ok(None),
            Some(p) => self.query_with_prices(d, &p).map(Some),
        }
    }

    /// Query with a caller-supplied price function feasible on `G \ D`.
    pub fn query_with_prices(&self, d: &[VertexId], p: &PriceFunction) -> Result<QueryReport> {
        let n = self.g.n();
        let mut removed = vec![false; n];
        for &v in d {
            self.g.check_vertex(v)?;
            removed[v] = true;
        }
        let d_count = removed.iter().filter(|&&x| x).count();
        let allowed: Vec<bool> = removed.iter().map(|&x| !x).collect();
        let pairs = self.pairs.pairs();
        let k = pairs.len();

        let cutoff = self.cutoff(d_count);
        let mut d_long = vec![INF; k];
        if let Some(level) = self.levels.get(cutoff.wrapping_sub(1)) {
            for &v in level.sample.iter().filter(|&&v| !removed[v]) {
                let fwd = dijkstra(&self.g, v, p, Direction::Fwd, Some(&allowed))?;
                let rev = dijkstra(&self.g, v, p, Direction::Rev, Some(&allowed))?;
                for (l, &(s, t)) in pairs.iter().enumerate() {
                    d_long[l] = d_long[l].min(rev.dist[s] + fwd.dist[t]);
                }
            }
        }

        let mut estimates = Vec::with_capacity(cutoff);
        let mut survivors = Vec::with_capacity(cutoff);
        let mut destroyed = Vec::with_capacity(cutoff);
        for level in &self.levels[..cutoff] {
            let r = self.level_estimates(level, d, &removed, p)?;
            estimates.push(r.0);
            survivors.push(r.1);
            destroyed.push(r.2);
        }

        let distances = pairs
            .iter()
            .enumerate()
            .map(|(l, &(s, t))| {
                if removed[s] || removed[t] {
                    ExtWeight::PosInf
                } else if s == t {
                    ExtWeight::ZERO
                } else {
                    let best = estimates.iter().map(|e| e[l]).fold(d_long[l], f64::min);
                    ExtWeight::from_f64(best)
                }
            })
            .collect();
        Ok(QueryReport {
            cutoff,
            d_long,
            estimates,
            survivors,
            destroyed,
            distances,
        })
    }

    /// Per-pair estimate, surviving candidate and destroyed-center set for
    /// one level.
    #[allow(clippy::type_complexity)]
    fn level_estimates(
        &self,
        level: &Level,
        d: &[VertexId],
        removed: &[bool],
        p: &PriceFunction,
    ) -> Result<(Vec<f64>, Vec<f64>, Vec<Vec<u32>>)> {
        let k = self.pairs.len();
        let centers = level.cover.len();

        // Stored paths meeting D, one entry per path.
        let mut hit: Vec<PathRef> = Vec::new();
        let mut seen = vec![false; self.g.n()];
        for &x in d {
            if !std::mem::replace(&mut seen[x], true) {
                hit.extend_from_slice(&level.hits[x]);
            }
        }
        hit.sort_unstable();
        hit.dedup();

        // Destroyed centers per pair, flagged by side: bit 1 = from, bit 2 = to.
        let mut x_sets: Vec<Vec<(u32, u8)>> = vec![Vec::new(); k];
        let mut to_members: Vec<Vec<VertexId>> = vec![Vec::new(); centers];
        let mut from_members: Vec<Vec<VertexId>> = vec![Vec::new(); centers];
        for r in &hit {
            let z = r.endpoint as usize;
            match r.side {
                PathSide::From => {
                    from_members[r.j as usize].push(z);
                    for &l in self.pairs.with_source(z) {
                        x_sets[l].push((r.j, 1));
                    }
                }
                PathSide::To => {
                    to_members[r.j as usize].push(z);
                    for &l in self.pairs.with_target(z) {
                        x_sets[l].push((r.j, 2));
                    }
                }
            }
        }
        for xs in &mut x_sets {
            xs.sort_unstable();
            let mut merged: Vec<(u32, u8)> = Vec::with_capacity(xs.len());
            for &(j, f) in xs.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 |= f,
                    _ => merged.push((j, f)),
                }
            }
            *xs = merged;
        }

        // Sketch distances, indexed by center then vertex.
        let mut to_sketch: Vec<Option<Vec<(VertexId, f64)>>> = vec![None; centers];
        let mut from_sketch: Vec<Option<Vec<(VertexId, f64)>>> = vec![None; centers];
        let mut local = vec![usize::MAX; self.g.n()];
        for j in 0..centers {
            let c = level.cover[j];
            if removed[c] {
                continue;
            }
            if !to_members[j].is_empty() {
                to_sketch[j] = Some(self.sketch(
                    c,
                    &to_members[j],
                    &level.to[j],
                    removed,
                    p,
                    PathSide::To,
                    &mut local,
                )?);
            }
            if !from_members[j].is_empty() {
                from_sketch[j] = Some(self.sketch(
                    c,
                    &from_members[j],
                    &level.from[j],
                    removed,
                    p,
                    PathSide::From,
                    &mut local,
                )?);
            }
        }
        let lookup = |table: &Option<Vec<(VertexId, f64)>>, v: VertexId| -> f64 {
            table.as_ref().map_or(INF, |t| {
                t.binary_search_by_key(&v, |&(x, _)| x)
                    .map_or(INF, |i| t[i].1)
            })
        };

        let mut estimates = vec![INF; k];
        let mut survivors = vec![INF; k];
        let mut destroyed = Vec::with_capacity(k);
        for (l, &(s, t)) in self.pairs.pairs().iter().enumerate() {
            let xs = &x_sets[l];
            let survivor = level.sorted[l]
                .iter()
                .find(|&&(_, j)| xs.binary_search_by_key(&j, |&(x, _)| x).is_err())
                .map_or(INF, |&(val, _)| val);
            let mut best = survivor;
            for &(j, flags) in xs {
                let j = j as usize;
                let head = if flags & 1 != 0 {
                    lookup(&from_sketch[j], s)
                } else {
                    level.from[j].dist[s]
                };
                let tail = if flags & 2 != 0 {
                    lookup(&to_sketch[j], t)
                } else {
                    level.to[j].dist[t]
                };
                best = best.min(head + tail);
            }
            survivors[l] = survivor;
            estimates[l] = best;
            destroyed.push(xs.iter().map(|&(j, _)| j).collect());
        }
        Ok((estimates, survivors, destroyed))
    }

    /// Distances from center `c` (side `To`) or to `c` (side `From`) in the
    /// sketch graph on `members` plus `c`. Returns `(vertex, distance)`
    /// sorted by vertex.
    #[allow(clippy::too_many_arguments)]
    fn sketch(
        &self,
        c: VertexId,
        members: &[VertexId],
        table: &HopDistTable,
        removed: &[bool],
        p: &PriceFunction,
        side: PathSide,
        local: &mut [usize],
    ) -> Result<Vec<(VertexId, f64)>> {
        let mut nodes = vec![c];
        local[c] = 0;
        for &z in members {
            if !removed[z] && local[z] == usize::MAX {
                local[z] = nodes.len();
                nodes.push(z);
            }
        }
        // Adjacency in search direction: away from c for `To`, toward c
        // (reversed) for `From`.
        let mut adj: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); nodes.len()];
        let mut pot: Vec<f64> = nodes.iter().map(|&x| p[x]).collect();
        for (iz, &z) in nodes.iter().enumerate().skip(1) {
            match side {
                PathSide::To => {
                    for (v, w) in self.g.in_edges(z) {
                        if removed[v] {
                            continue;
                        }
                        if local[v] != usize::MAX {
                            adj[local[v]].push((iz, w));
                        } else if table.dist[v] < INF {
                            adj[0].push((iz, table.dist[v] + w));
                        }
                    }
                }
                PathSide::From => {
                    for (y, w) in self.g.out_edges(z) {
                        if removed[y] {
                            continue;
                        }
                        if local[y] != usize::MAX {
                            adj[local[y]].push((iz, w));
                        } else if table.dist[y] < INF {
                            adj[0].push((iz, w + table.dist[y]));
                        }
                    }
                }
            }
        }
        if side == PathSide::From {
            for x in &mut pot {
                *x = -*x;
            }
        }
        let dist = dijkstra_lists(&adj, 0, &pot);
        for &x in &nodes {
            local[x] = usize::MAX;
        }
        let dist = dist?;
        let mut out: Vec<(VertexId, f64)> = nodes
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, dist.dist[i]))
            .collect();
        out.sort_unstable_by_key(|&(x, _)| x);
        Ok(out)
    }
}

/// Hop tables, congestion and candidate arrays for one level.
fn build_level(g: &DynamicDigraph, pairs: &PairSet, hops: usize, picked: Vec<VertexId>) -> Level {
    let n = g.n();
    let mut in_sample = vec![false; n];
    for &v in &picked {
        in_sample[v] = true;
    }
    let log_term = ceil_log2(n);
    let weight: Vec<u64> = (0..n)
        .map(|v| (g.degree(v) + pairs.degree(v)) as u64 + log_term)
        .collect();
    let mut level = Level {
        hops,
        sample: picked,
        in_sample,
        cover: Vec::new(),
        to: Vec::new(),
        from: Vec::new(),
        congestion: vec![0; n],
        hits: vec![Vec::new(); n],
        sorted: vec![Vec::new(); pairs.len()],
    };
    let mut in_cover = vec![false; n];
    let mut next_sample = 0;
    // last path id that visited each vertex, so repeated vertices on a walk count once
    let mut stamp = vec![0u64; n];
    let mut path_id = 0u64;
    loop {
        let from_sample = level
            .cover
            .last()
            .is_none_or(|&last| !level.in_sample[last]);
        let congested = if from_sample {
            None
        } else {
            most_congested(&level.congestion, &in_cover, &level.in_sample)
        };
        let c = match congested {
            Some(c) => c,
            None if next_sample < level.sample.len() => {
                next_sample += 1;
                level.sample[next_sample - 1]
            }
            None => break,
        };
        let j = level.cover.len() as u32;
        let to = bellman_ford_hops(g, c, hops, &in_cover, Direction::Fwd);
        let from = bellman_ford_hops(g, c, hops, &in_cover, Direction::Rev);
        for (table, side) in [(&to, PathSide::To), (&from, PathSide::From)] {
            for v in 0..n {
                let Some(path) = table.path(v) else { continue };
                path_id += 1;
                for &x in path {
                    if stamp[x] != path_id {
                        stamp[x] = path_id;
                        level.congestion[x] += weight[v];
                        level.hits[x].push(PathRef {
                            j,
                            side,
                            endpoint: v as u32,
                        });
                    }
                }
            }
        }
        level.to.push(to);
        level.from.push(from);
        level.cover.push(c);
        in_cover[c] = true;
    }
    for (l, &(s, t)) in pairs.pairs().iter().enumerate() {
        let mut row: Vec<(f64, u32)> = (0..level.cover.len())
            .map(|j| (level.from[j].dist[s] + level.to[j].dist[t], j as u32))
            .collect();
        row.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        level.sorted[l] = row;
    }
    level
}

/// Most congested vertex outside the cover and the sample, smallest index
/// on ties.
fn most_congested(congestion: &[u64], in_cover: &[bool], in_sample: &[bool]) -> Option<VertexId> {
    let mut best: Option<VertexId> = None;
    for v in 0..congestion.len() {
        if in_cover[v] || in_sample[v] {
            continue;
        }
        if best.is_none_or(|b| congestion[v] > congestion[b]) {
            best = Some(v);
        }
    }
    best
}
