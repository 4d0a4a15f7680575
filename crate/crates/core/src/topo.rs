//! Unit disk network model: node positions, reception channels and the
//! derived adjacency.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::{Channel, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("topology needs at least one node")]
    Empty,
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("channel count must be at least 1")]
    NoChannels,
    #[error("assignment covers {got} nodes, expected {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("node {node} is assigned channel {channel}, outside 1..={channel_count}")]
    ChannelOutOfRange {
        node: NodeId,
        channel: Channel,
        channel_count: Channel,
    },
    #[error("source {id} is not a node id (n = {n})")]
    SourceOutOfRange { id: NodeId, n: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    fn dist_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// A single-radio multi-channel network on a unit disk graph.
///
/// Immutable once built. Two nodes are adjacent iff their Euclidean distance
/// is at most `radius` (closed disk).
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    points: Vec<Point>,
    radius: f64,
    channel_count: Channel,
    assignment: Vec<Channel>,
    source: NodeId,
    adjacency: Vec<Vec<NodeId>>,
}

impl Topology {
    pub fn build(
        points: Vec<Point>,
        radius: f64,
        channel_count: Channel,
        assignment: Vec<Channel>,
        source: NodeId,
    ) -> Result<Self, TopologyError> {
        if points.is_empty() {
            return Err(TopologyError::Empty);
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(TopologyError::BadRadius(radius));
        }
        if channel_count == 0 {
            return Err(TopologyError::NoChannels);
        }
        if assignment.len() != points.len() {
            return Err(TopologyError::AssignmentLength {
                expected: points.len(),
                got: assignment.len(),
            });
        }
        if let Some((node, &channel)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > channel_count)
        {
            return Err(TopologyError::ChannelOutOfRange {
                node,
                channel,
                channel_count,
            });
        }
        if source >= points.len() {
            return Err(TopologyError::SourceOutOfRange {
                id: source,
                n: points.len(),
            });
        }

        // Squared distances avoid sqrt rounding right at the boundary.
        let r2 = radius * radius;
        let n = points.len();
        let mut adjacency = vec![Vec::new(); n];
        for u in 0..n {
            for v in (u + 1)..n {
                if points[u].dist_sq(&points[v]) <= r2 {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }

        Ok(Topology {
            points,
            radius,
            channel_count,
            assignment,
            source,
            adjacency,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn channel_count(&self) -> Channel {
        self.channel_count
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Reception channel `A(u)`.
    pub fn channel(&self, u: NodeId) -> Channel {
        self.assignment[u]
    }

    pub fn assignment(&self) -> &[Channel] {
        &self.assignment
    }

    /// Open neighbourhood of `u`, sorted ascending.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// True iff `u` and `v` are at graph distance at most two.
    pub fn within_two_hops(&self, u: NodeId, v: NodeId) -> bool {
        if u == v || self.adjacent(u, v) {
            return true;
        }
        let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Renders the line-oriented text format:
    /// `n k radius source` followed by one `id x y channel` line per node.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {} {}",
            self.len(),
            self.channel_count,
            self.radius,
            self.source
        );
        for (id, (p, c)) in self.points.iter().zip(&self.assignment).enumerate() {
            let _ = writeln!(out, "{} {} {} {}", id, p.x, p.y, c);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, TopologyError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(TopologyError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(hline, "header must be `n k radius source`"));
        }
        let n: usize = field(hline, fields[0], "n")?;
        let k: Channel = field(hline, fields[1], "k")?;
        let radius: f64 = field(hline, fields[2], "radius")?;
        let source: NodeId = field(hline, fields[3], "source")?;

        let mut points = Vec::with_capacity(n);
        let mut assignment = Vec::with_capacity(n);
        for expected_id in 0..n {
            let (line, body) = lines
                .next()
                .ok_or_else(|| parse_err(hline, &format!("expected {n} node lines, got {expected_id}")))?;
            let f: Vec<&str> = body.split_whitespace().collect();
            if f.len() != 4 {
                return Err(parse_err(line, "node line must be `id x y channel`"));
            }
            let id: NodeId = field(line, f[0], "id")?;
            if id != expected_id {
                return Err(parse_err(line, &format!("expected id {expected_id}, got {id}")));
            }
            let x: f64 = field(line, f[1], "x")?;
            let y: f64 = field(line, f[2], "y")?;
            if !x.is_finite() || !y.is_finite() {
                return Err(parse_err(line, "coordinates must be finite"));
            }
            points.push(Point::new(x, y));
            assignment.push(field(line, f[3], "channel")?);
        }
        if let Some((line, _)) = lines.next() {
            return Err(parse_err(line, &format!("more than {n} node lines")));
        }
        Topology::build(points, radius, k, assignment, source)
    }
}

fn parse_err(line: usize, msg: &str) -> TopologyError {
    TopologyError::Parse {
        line,
        msg: msg.to_string(),
    }
}

fn field<T: FromStr>(line: usize, raw: &str, name: &str) -> Result<T, TopologyError> {
    raw.parse()
        .map_err(|_| parse_err(line, &format!("cannot parse {name} from `{raw}`")))
}

/// Uniform random deployment in `[0, side]^2` with uniform reception
/// channels. Node 0 is the source. Fully determined by `seed`.
pub fn random_topology(
    n: usize,
    k: Channel,
    radius: f64,
    side: f64,
    seed: u64,
) -> Result<Topology, TopologyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    let mut assignment = Vec::with_capacity(n);
    for _ in 0..n {
        let x = rng.gen::<f64>() * side;
        let y = rng.gen::<f64>() * side;
        points.push(Point::new(x, y));
        assignment.push(if k == 0 { 0 } else { rng.gen_range(1..=k) });
    }
    Topology::build(points, radius, k, assignment, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64], radius: f64) -> Topology {
        let pts = xs.iter().map(|&x| Point::new(x, 0.0)).collect::<Vec<_>>();
        let n = pts.len();
        Topology::build(pts, radius, 1, vec![1; n], 0).unwrap()
    }

    #[test]
    fn edge_inside_radius() {
        assert!(line(&[0.0, 0.5], 1.0).adjacent(0, 1));
    }

    #[test]
    fn no_edge_outside_radius() {
        let t = line(&[0.0, 2.0], 1.0);
        assert!(!t.adjacent(0, 1));
        assert!(t.neighbors(0).is_empty());
    }

    #[test]
    fn boundary_is_closed() {
        assert!(line(&[0.0, 1.0], 1.0).adjacent(0, 1));
    }

    #[test]
    fn duplicate_coordinates_are_fine() {
        let t = line(&[3.0, 3.0], 1.0);
        assert_eq!(t.neighbors(0), &[1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        assert_eq!(
            Topology::build(pts.clone(), 1.0, 2, vec![1, 3], 0),
            Err(TopologyError::ChannelOutOfRange {
                node: 1,
                channel: 3,
                channel_count: 2
            })
        );
        assert_eq!(
            Topology::build(pts.clone(), 1.0, 2, vec![0, 1], 0),
            Err(TopologyError::ChannelOutOfRange {
                node: 0,
                channel: 0,
                channel_count: 2
            })
        );
        assert_eq!(
            Topology::build(pts.clone(), 1.0, 2, vec![1, 1], 2),
            Err(TopologyError::SourceOutOfRange { id: 2, n: 2 })
        );
        assert_eq!(
            Topology::build(pts.clone(), 0.0, 2, vec![1, 1], 0),
            Err(TopologyError::BadRadius(0.0))
        );
        assert_eq!(
            Topology::build(vec![], 1.0, 2, vec![], 0),
            Err(TopologyError::Empty)
        );
    }

    #[test]
    fn triangle_neighbors() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.5),
        ];
        let t = Topology::build(pts, 1.0, 1, vec![1; 3], 0).unwrap();
        assert_eq!(t.neighbors(0), &[1, 2]);
    }

    #[test]
    fn two_hop_queries() {
        // 0 - 1 - 2   3 (isolated)
        let t = line(&[0.0, 1.0, 2.0, 10.0], 1.0);
        assert!(t.within_two_hops(0, 1));
        assert!(t.within_two_hops(0, 2));
        assert!(t.within_two_hops(3, 3));
        assert!(!t.within_two_hops(0, 3));
        let p = line(&[0.0, 1.0, 2.0, 3.0], 1.0);
        assert!(!p.within_two_hops(0, 3));
    }

    #[test]
    fn single_random_node() {
        let t = random_topology(1, 4, 100.0, 1.0, 7).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.edge_count(), 0);
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_topology(80, 5, 100.0, 300.0, 42).unwrap();
        let b = random_topology(80, 5, 100.0, 300.0, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_text(), b.to_text());
        let c = random_topology(80, 5, 100.0, 300.0, 43).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn random_respects_bounds() {
        let t = random_topology(500, 7, 50.0, 250.0, 3).unwrap();
        assert!(t
            .points()
            .iter()
            .all(|p| (0.0..=250.0).contains(&p.x) && (0.0..=250.0).contains(&p.y)));
        assert!(t.assignment().iter().all(|&c| (1..=7).contains(&c)));
        // every channel should show up among 500 uniform draws
        for c in 1..=7 {
            assert!(t.assignment().contains(&c));
        }
    }

    #[test]
    fn text_format_round_trip() {
        let t = random_topology(30, 3, 100.0, 200.0, 11).unwrap();
        let back = Topology::from_text(&t.to_text()).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn text_format_rejects_malformed() {
        assert!(Topology::from_text("").is_err());
        assert!(Topology::from_text("2 1 1.0 0\n0 0 0 1\n").is_err());
        assert!(Topology::from_text("1 1 1.0 0\n0 0 0 2\n").is_err());
        assert!(Topology::from_text("1 1 1.0 0\n1 0 0 1\n").is_err());
        assert!(Topology::from_text("1 1 1.0 0\n0 0 0 1\n1 0 0 1\n").is_err());
        assert!(Topology::from_text("1 1 x 0\n0 0 0 1\n").is_err());
        let ok = Topology::from_text("2 2 1.5 1\n0 0 0 1\n1 1 0 2\n").unwrap();
        assert_eq!(ok.source(), 1);
        assert_eq!(ok.channel(1), 2);
        assert!(ok.adjacent(0, 1));
    }
}
