use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::seed::{self, Rng};

use super::delay::{DelayFamily, DelaySpec};

/// First-arrival times of one cascade (or of the average of several
/// cascades with the same source).
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    source: Vertex,
    times: Vec<Option<f64>>,
    merged: u64,
}

impl Cascade {
    /// Wraps observed times. The source must be present with time 0.
    pub fn new(source: Vertex, times: Vec<Option<f64>>) -> Result<Self> {
        let n = times.len();
        match times.get(source) {
            None => Err(Error::InvalidVertex { vertex: source, n }),
            Some(Some(t)) if *t == 0.0 => {
                if let Some(v) = times.iter().position(|t| t.is_some_and(|x| !x.is_finite())) {
                    return Err(Error::InvalidParameter(format!(
                        "non-finite time at vertex {v}"
                    )));
                }
                Ok(Cascade {
                    source,
                    times,
                    merged: 1,
                })
            }
            Some(_) => Err(Error::InvalidParameter(format!(
                "source {source} must carry time 0"
            ))),
        }
    }

    /// Builds a cascade from a vertex-to-time map on `n` vertices.
    pub fn from_map(n: usize, source: Vertex, times: &BTreeMap<Vertex, f64>) -> Result<Self> {
        let mut row = vec![None; n];
        for (&v, &t) in times {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            row[v] = Some(t);
        }
        Self::new(source, row)
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    pub fn time(&self, v: Vertex) -> Option<f64> {
        self.times.get(v).copied().flatten()
    }

    pub fn times(&self) -> &[Option<f64>] {
        &self.times
    }

    /// Number of raw cascades averaged into this record.
    pub fn merged(&self) -> u64 {
        self.merged
    }

    /// Number of timestamped vertices.
    pub fn coverage(&self) -> usize {
        self.times.iter().filter(|t| t.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.times.iter().all(Option::is_some)
    }

    /// Smallest positive arrival time.
    pub fn t_min(&self) -> Option<f64> {
        self.times
            .iter()
            .flatten()
            .copied()
            .filter(|&t| t > 0.0)
            .min_by(f64::total_cmp)
    }

    /// Folds `fresh` into this record as a running mean weighted by the two
    /// merge counters. Vertices timed in only one input keep that time.
    pub fn average_into(&mut self, fresh: &Cascade) -> Result<()> {
        if fresh.source != self.source {
            return Err(Error::SourceMismatch(self.source, fresh.source));
        }
        if fresh.n() != self.n() {
            return Err(Error::InvalidParameter(format!(
                "cascades cover {} and {} vertices",
                self.n(),
                fresh.n()
            )));
        }
        let (a, b) = (self.merged as f64, fresh.merged as f64);
        for (mine, theirs) in self.times.iter_mut().zip(&fresh.times) {
            *mine = match (*mine, *theirs) {
                (Some(x), Some(y)) => Some((a * x + b * y) / (a + b)),
                (x, y) => x.or(y),
            };
        }
        self.merged += fresh.merged;
        Ok(())
    }

    pub(crate) fn from_parts(source: Vertex, times: Vec<Option<f64>>, merged: u64) -> Self {
        Cascade {
            source,
            times,
            merged,
        }
    }
}

/// Averages cascades sharing a source; output is sorted by source.
pub fn merge_by_source(cascades: impl IntoIterator<Item = Cascade>) -> Result<Vec<Cascade>> {
    let mut by_source: BTreeMap<Vertex, Cascade> = BTreeMap::new();
    for c in cascades {
        match by_source.get_mut(&c.source) {
            Some(acc) => acc.average_into(&c)?,
            None => {
                by_source.insert(c.source, c);
            }
        }
    }
    Ok(by_source.into_values().collect())
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, Vertex);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed for a min-heap.
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A graph with delay laws bound to its edges, ready to draw cascades.
///
/// Each cascade samples one delay per edge, then arrival times are
/// shortest-path times from the source on the sampled weights.
#[derive(Debug, Clone)]
pub struct Simulator {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<(Vertex, usize)>,
    laws: Vec<DelayFamily>,
}

impl Simulator {
    pub fn new(g: &Graph, spec: &DelaySpec) -> Result<Self> {
        g.require_connected()?;
        let laws = spec.bind(g)?;
        let n = g.n();
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in g.edges() {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![(0, 0); offsets[n]];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            targets[fill[u]] = (v, e);
            fill[u] += 1;
            targets[fill[v]] = (u, e);
            fill[v] += 1;
        }
        Ok(Simulator {
            n,
            offsets,
            targets,
            laws,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of edge `(u, v)` in the bound graph's edge order.
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if u >= self.n {
            return None;
        }
        self.targets[self.offsets[u]..self.offsets[u + 1]]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
    }

    /// One independent delay per edge.
    pub fn sample_delays(&self, rng: &mut Rng) -> Vec<f64> {
        self.laws.iter().map(|law| law.sample(rng)).collect()
    }

    /// Shortest-path arrival times from `source` under fixed edge delays,
    /// optionally ignoring one edge. Unreachable vertices get `+inf`.
    pub fn arrival_times(
        &self,
        source: Vertex,
        delays: &[f64],
        skip_edge: Option<usize>,
    ) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.n];
        let mut done = vec![false; self.n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Entry(0.0, source));
        while let Some(Entry(d, u)) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(w, e) in &self.targets[self.offsets[u]..self.offsets[u + 1]] {
                if Some(e) == skip_edge {
                    continue;
                }
                let cand = d + delays[e];
                if cand < dist[w] {
                    dist[w] = cand;
                    heap.push(Entry(cand, w));
                }
            }
        }
        dist
    }

    /// One cascade from `source`. Vertices reached after `horizon` are
    /// left untimed.
    pub fn run(&self, source: Vertex, rng: &mut Rng, horizon: Option<f64>) -> Result<Cascade> {
        if source >= self.n {
            return Err(Error::InvalidVertex {
                vertex: source,
                n: self.n,
            });
        }
        let delays = self.sample_delays(rng);
        let times = self
            .arrival_times(source, &delays, None)
            .into_iter()
            .map(|t| match horizon {
                Some(h) if t > h => None,
                _ => Some(t),
            })
            .collect();
        Ok(Cascade::from_parts(source, times, 1))
    }
}

/// Simulates one cascade; a convenience over [`Simulator`].
pub fn simulate_cascade(
    g: &Graph,
    source: Vertex,
    spec: &DelaySpec,
    seed: u64,
    horizon: Option<f64>,
) -> Result<Cascade> {
    g.check_vertex(source)?;
    let sim = Simulator::new(g, spec)?;
    sim.run(source, &mut seed::rng(seed), horizon)
}

fn format_time(t: f64) -> String {
    let mut s = format!("{t}");
    if !s.contains('.') {
        s.push_str(".0");
    }
    s
}

/// Serializes cascades: a `# n=<count>` line, then per cascade a
/// `source <id>` header and `vertex time` lines, blank lines between cascades.
pub fn write_cascades<W: Write>(cascades: &[Cascade], mut out: W) -> std::io::Result<()> {
    let n = cascades.iter().map(Cascade::n).max().unwrap_or(0);
    writeln!(out, "# n={n}")?;
    let mut buf = String::new();
    for (i, c) in cascades.iter().enumerate() {
        buf.clear();
        if i > 0 {
            buf.push('\n');
        }
        let _ = writeln!(buf, "source {}", c.source);
        for (v, t) in c.times.iter().enumerate() {
            if let Some(t) = t {
                let _ = writeln!(buf, "{v} {}", format_time(*t));
            }
        }
        out.write_all(buf.as_bytes())?;
    }
    Ok(())
}

pub fn save_cascades(cascades: &[Cascade], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    write_cascades(cascades, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Parses the cascade format. The vertex count is `n` if given, else the
/// `# n=` line, else one more than the largest id seen.
pub fn parse_cascades(text: &str, origin: &Path, n: Option<usize>) -> Result<Vec<Cascade>> {
    let mut declared_n = None;
    let mut raw: Vec<(Vertex, BTreeMap<Vertex, f64>)> = Vec::new();
    let mut current: Option<(Vertex, BTreeMap<Vertex, f64>)> = None;
    let mut max_id = 0usize;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            if let Some(c) = current.take() {
                raw.push(c);
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("n=") {
                declared_n = Some(v.trim().parse::<usize>().map_err(|_| {
                    Error::parse(origin, lineno, format!("bad vertex count {v:?}"))
                })?);
            }
            continue;
        }
        let mut fields = line.split_whitespace();
        let (a, b) = (fields.next(), fields.next());
        if fields.next().is_some() {
            return Err(Error::parse(origin, lineno, "expected two fields"));
        }
        match (a, b) {
            (Some("source"), Some(id)) => {
                if let Some(c) = current.take() {
                    raw.push(c);
                }
                let s: Vertex = id
                    .parse()
                    .map_err(|_| Error::parse(origin, lineno, format!("bad source id {id:?}")))?;
                max_id = max_id.max(s);
                current = Some((s, BTreeMap::new()));
            }
            (Some(v), Some(t)) => {
                let Some((_, times)) = current.as_mut() else {
                    return Err(Error::parse(
                        origin,
                        lineno,
                        "timestamp before any source header",
                    ));
                };
                let v: Vertex = v
                    .parse()
                    .map_err(|_| Error::parse(origin, lineno, format!("bad vertex id {v:?}")))?;
                let t: f64 = t
                    .parse()
                    .ok()
                    .filter(|t: &f64| t.is_finite())
                    .ok_or_else(|| Error::parse(origin, lineno, format!("bad time {t:?}")))?;
                if times.insert(v, t).is_some() {
                    return Err(Error::parse(
                        origin,
                        lineno,
                        format!("vertex {v} timed twice"),
                    ));
                }
                max_id = max_id.max(v);
            }
            _ => {
                return Err(Error::parse(
                    origin,
                    lineno,
                    "expected `source <id>` or `vertex time`",
                ))
            }
        }
    }
    if let Some(c) = current.take() {
        raw.push(c);
    }
    let n = n
        .or(declared_n)
        .unwrap_or(if raw.is_empty() { 0 } else { max_id + 1 });
    raw.into_iter()
        .map(|(s, times)| {
            let mut times = times;
            times.entry(s).or_insert(0.0);
            Cascade::from_map(n, s, &times).map_err(|e| match e {
                Error::InvalidVertex { vertex, n } => Error::parse(
                    origin,
                    0,
                    format!("vertex {vertex} outside 0..{n} in cascade from {s}"),
                ),
                other => other,
            })
        })
        .collect()
}

pub fn load_cascades(path: impl AsRef<Path>, n: Option<usize>) -> Result<Vec<Cascade>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_cascades(&text, path, n)
}
