//! Combinatorial surfaces: glued triangulations and cellular decompositions.
//!
//! Edges are records of their own rather than vertex pairs, since ideal
//! triangulations and cell decompositions routinely have multi-edges and
//! faces glued to themselves. All per-element data is indexed by position;
//! string ids are kept for IO.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const TRI_FORMAT: &str = "genhyp-tri/1";
pub const CELL_FORMAT: &str = "genhyp-cell/1";

/// Default cap on partial paths explored by [`enumerate_edge_cycles`].
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

fn id_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse(format!("ids must be strings or numbers, got {other}"))),
    }
}

fn index_ids(kind: &str, ids: &[String]) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if map.insert(id.clone(), i).is_some() {
            return Err(Error::Validation(format!("duplicate {kind} id {id:?}")));
        }
    }
    Ok(map)
}

fn lookup(map: &HashMap<String, usize>, kind: &str, id: &str) -> Result<usize> {
    map.get(id)
        .copied()
        .ok_or_else(|| Error::Validation(format!("unknown {kind} id {id:?}")))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
    fn components(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

#[derive(Deserialize)]
struct RawTri {
    format: String,
    vertices: Vec<Value>,
    triangles: Vec<RawTriangle>,
    gluings: Vec<RawGluing>,
}

#[derive(Deserialize)]
struct RawTriangle {
    id: Value,
    corners: Vec<Value>,
}

#[derive(Deserialize)]
struct RawGluing {
    #[serde(default)]
    id: Option<Value>,
    left: (Value, i64),
    right: (Value, i64),
}

#[derive(Serialize)]
struct OutTri<'a> {
    format: &'static str,
    vertices: &'a [String],
    triangles: Vec<OutTriangle<'a>>,
    gluings: Vec<OutGluing<'a>>,
}

#[derive(Serialize)]
struct OutTriangle<'a> {
    id: &'a str,
    corners: [&'a str; 3],
}

#[derive(Serialize)]
struct OutGluing<'a> {
    id: &'a str,
    left: (&'a str, usize),
    right: (&'a str, usize),
}

/// A closed surface glued from triangles. Side `s` of a triangle is the
/// edge opposite corner `s`; each gluing record defines one edge.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangulatedSurface {
    vertex_ids: Vec<String>,
    triangle_ids: Vec<String>,
    edge_ids: Vec<String>,
    corners: Vec<[usize; 3]>,
    edge_sides: Vec<[(usize, usize); 2]>,
    side_edge: Vec<[usize; 3]>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    triangle_index: HashMap<String, usize>,
}

impl TriangulatedSurface {
    /// Builds and validates a surface from ids, corner lists and gluings
    /// `(edge id, (triangle, side), (triangle, side))`.
    pub fn new(
        vertex_ids: Vec<String>,
        triangles: Vec<(String, [String; 3])>,
        gluings: Vec<(String, (String, usize), (String, usize))>,
    ) -> Result<Self> {
        let vertex_index = index_ids("vertex", &vertex_ids)?;
        let triangle_ids: Vec<String> = triangles.iter().map(|t| t.0.clone()).collect();
        let triangle_index = index_ids("triangle", &triangle_ids)?;
        let edge_ids: Vec<String> = gluings.iter().map(|g| g.0.clone()).collect();
        let edge_index = index_ids("edge", &edge_ids)?;
        if triangles.is_empty() {
            return Err(Error::Validation("surface has no triangles".into()));
        }
        let mut corners = Vec::with_capacity(triangles.len());
        for (_, c) in &triangles {
            let mut idx = [0; 3];
            for k in 0..3 {
                idx[k] = lookup(&vertex_index, "vertex", &c[k])?;
            }
            corners.push(idx);
        }
        let mut side_edge = vec![[usize::MAX; 3]; triangles.len()];
        let mut edge_sides = Vec::with_capacity(gluings.len());
        for (e, (eid, left, right)) in gluings.iter().enumerate() {
            let mut pair = [(0, 0); 2];
            for (slot, (tid, side)) in [left, right].into_iter().enumerate() {
                let t = lookup(&triangle_index, "triangle", tid)?;
                if *side > 2 {
                    return Err(Error::Validation(format!(
                        "edge {eid:?}: side {side} of triangle {tid:?} is not 0, 1 or 2"
                    )));
                }
                if side_edge[t][*side] != usize::MAX {
                    return Err(Error::Validation(format!(
                        "side {side} of triangle {tid:?} is glued more than once"
                    )));
                }
                side_edge[t][*side] = e;
                pair[slot] = (t, *side);
            }
            let ends = |(t, s): (usize, usize)| {
                let mut v = [corners[t][(s + 1) % 3], corners[t][(s + 2) % 3]];
                v.sort_unstable();
                v
            };
            if ends(pair[0]) != ends(pair[1]) {
                return Err(Error::Validation(format!(
                    "edge {eid:?} glues sides with different endpoint vertices"
                )));
            }
            edge_sides.push(pair);
        }
        for (t, sides) in side_edge.iter().enumerate() {
            if let Some(s) = sides.iter().position(|&e| e == usize::MAX) {
                return Err(Error::Validation(format!(
                    "side {s} of triangle {:?} is not glued",
                    triangle_ids[t]
                )));
            }
        }
        let mut used = vec![false; vertex_ids.len()];
        for c in &corners {
            for &v in c {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|&u| !u) {
            return Err(Error::Validation(format!(
                "vertex {:?} is not a corner of any triangle",
                vertex_ids[v]
            )));
        }
        let mut uf = UnionFind::new(triangles.len());
        for pair in &edge_sides {
            uf.union(pair[0].0, pair[1].0);
        }
        if uf.components() != 1 {
            return Err(Error::Validation("glued complex is not connected".into()));
        }
        let surface = TriangulatedSurface {
            vertex_ids,
            triangle_ids,
            edge_ids,
            corners,
            edge_sides,
            side_edge,
            vertex_index,
            edge_index,
            triangle_index,
        };
        if surface.euler_characteristic() > 2 {
            return Err(Error::Validation(format!(
                "Euler characteristic {} exceeds that of a sphere",
                surface.euler_characteristic()
            )));
        }
        Ok(surface)
    }

    /// Builds a surface from a simplicial triangle list, gluing sides that
    /// share an unordered vertex pair. Edge ids are `"a-b"`.
    pub fn from_simplicial(vertex_ids: Vec<String>, triangles: &[[usize; 3]]) -> Result<Self> {
        let mut by_pair: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (t, c) in triangles.iter().enumerate() {
            for s in 0..3 {
                let (a, b) = (c[(s + 1) % 3], c[(s + 2) % 3]);
                by_pair.entry((a.min(b), a.max(b))).or_default().push((t, s));
            }
        }
        let tri_id = |t: usize| format!("t{t}");
        let mut gluings = Vec::new();
        for ((a, b), sides) in by_pair {
            if sides.len() != 2 {
                return Err(Error::Validation(format!(
                    "vertex pair ({a}, {b}) lies on {} triangle sides",
                    sides.len()
                )));
            }
            let name = |v: usize| vertex_ids.get(v).cloned().unwrap_or_default();
            gluings.push((
                format!("{}-{}", name(a), name(b)),
                (tri_id(sides[0].0), sides[0].1),
                (tri_id(sides[1].0), sides[1].1),
            ));
        }
        let tris = triangles
            .iter()
            .enumerate()
            .map(|(t, c)| {
                let name = |v: usize| vertex_ids.get(v).cloned().unwrap_or_default();
                (tri_id(t), [name(c[0]), name(c[1]), name(c[2])])
            })
            .collect();
        Self::new(vertex_ids, tris, gluings)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawTri = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.format != TRI_FORMAT {
            return Err(Error::Parse(format!(
                "expected format {TRI_FORMAT:?}, got {:?}",
                raw.format
            )));
        }
        let vertices = raw.vertices.iter().map(id_string).collect::<Result<Vec<_>>>()?;
        let mut triangles = Vec::with_capacity(raw.triangles.len());
        for t in &raw.triangles {
            if t.corners.len() != 3 {
                return Err(Error::Parse(format!(
                    "triangle {} must have 3 corners",
                    t.id
                )));
            }
            triangles.push((
                id_string(&t.id)?,
                [
                    id_string(&t.corners[0])?,
                    id_string(&t.corners[1])?,
                    id_string(&t.corners[2])?,
                ],
            ));
        }
        let mut gluings = Vec::with_capacity(raw.gluings.len());
        for (i, g) in raw.gluings.iter().enumerate() {
            let id = match &g.id {
                Some(v) => id_string(v)?,
                None => i.to_string(),
            };
            let side = |s: i64| {
                usize::try_from(s).map_err(|_| Error::Validation(format!("negative side {s}")))
            };
            gluings.push((
                id,
                (id_string(&g.left.0)?, side(g.left.1)?),
                (id_string(&g.right.0)?, side(g.right.1)?),
            ));
        }
        Self::new(vertices, triangles, gluings)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }

    /// Canonical JSON: ids as strings, every gluing carries its edge id.
    pub fn to_json(&self) -> Value {
        let out = OutTri {
            format: TRI_FORMAT,
            vertices: &self.vertex_ids,
            triangles: self
                .corners
                .iter()
                .enumerate()
                .map(|(t, c)| OutTriangle {
                    id: &self.triangle_ids[t],
                    corners: [
                        &self.vertex_ids[c[0]],
                        &self.vertex_ids[c[1]],
                        &self.vertex_ids[c[2]],
                    ],
                })
                .collect(),
            gluings: self
                .edge_sides
                .iter()
                .enumerate()
                .map(|(e, p)| OutGluing {
                    id: &self.edge_ids[e],
                    left: (&self.triangle_ids[p[0].0], p[0].1),
                    right: (&self.triangle_ids[p[1].0], p[1].1),
                })
                .collect(),
        };
        serde_json::to_value(out).expect("serializable")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }
    pub fn triangle_count(&self) -> usize {
        self.triangle_ids.len()
    }
    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }
    pub fn edge_ids(&self) -> &[String] {
        &self.edge_ids
    }
    pub fn triangle_ids(&self) -> &[String] {
        &self.triangle_ids
    }
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }
    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }
    pub fn triangle_index(&self, id: &str) -> Option<usize> {
        self.triangle_index.get(id).copied()
    }

    /// Corner vertices of triangle `t`.
    pub fn corners(&self, t: usize) -> [usize; 3] {
        self.corners[t]
    }

    /// Edge on side `s` of triangle `t`.
    pub fn side_edge(&self, t: usize, s: usize) -> usize {
        self.side_edge[t][s]
    }

    /// The two (triangle, side) incidences of edge `e`.
    pub fn edge_sides(&self, e: usize) -> [(usize, usize); 2] {
        self.edge_sides[e]
    }

    /// The side glued to side `s` of triangle `t`.
    pub fn across(&self, t: usize, s: usize) -> (usize, usize) {
        let e = self.side_edge[t][s];
        let [a, b] = self.edge_sides[e];
        if a == (t, s) {
            b
        } else {
            a
        }
    }

    pub fn edge_endpoints(&self, e: usize) -> [usize; 2] {
        let (t, s) = self.edge_sides[e][0];
        [self.corners[t][(s + 1) % 3], self.corners[t][(s + 2) % 3]]
    }

    /// V − E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.triangle_count() as i64
    }

    /// Number of corners at each vertex.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for c in &self.corners {
            for &v in c {
                d[v] += 1;
            }
        }
        d
    }
}

/// One passage of an edge cycle through a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CycleStep {
    pub triangle: usize,
    pub entry: usize,
    pub exit: usize,
}

impl CycleStep {
    /// The corner between the entry and exit sides.
    pub fn corner(&self) -> usize {
        3 - self.entry - self.exit
    }
}

/// A closed walk (e₁, t₁, …, e_k, t_k): the walk enters t_i through side
/// e_i, leaves through e_{i+1}, and crosses into t_{i+1}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeCycle {
    pub steps: Vec<CycleStep>,
}

impl EdgeCycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Entry edges e₁, …, e_k.
    pub fn edges(&self, surface: &TriangulatedSurface) -> Vec<usize> {
        self.steps
            .iter()
            .map(|s| surface.side_edge(s.triangle, s.entry))
            .collect()
    }

    pub fn triangles(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.triangle).collect()
    }

    /// Whether consecutive steps are glued and each step changes side.
    pub fn is_valid(&self, surface: &TriangulatedSurface) -> bool {
        let k = self.steps.len();
        k > 0
            && self.steps.iter().enumerate().all(|(i, s)| {
                let next = self.steps[(i + 1) % k];
                s.entry < 3
                    && s.exit < 3
                    && s.entry != s.exit
                    && surface.across(s.triangle, s.exit) == (next.triangle, next.entry)
            })
    }

    fn reversed(&self) -> Vec<CycleStep> {
        self.steps
            .iter()
            .rev()
            .map(|s| CycleStep {
                triangle: s.triangle,
                entry: s.exit,
                exit: s.entry,
            })
            .collect()
    }

    /// Lexicographically least rotation over both orientations.
    pub fn canonical(&self) -> EdgeCycle {
        let mut best: Option<Vec<CycleStep>> = None;
        for seq in [self.steps.clone(), self.reversed()] {
            for r in 0..seq.len() {
                let mut rot = seq[r..].to_vec();
                rot.extend_from_slice(&seq[..r]);
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        EdgeCycle {
            steps: best.unwrap_or_default(),
        }
    }

    /// A walk repeating a shorter closed walk.
    pub fn is_periodic(&self) -> bool {
        let k = self.steps.len();
        (1..k).any(|p| k % p == 0 && (0..k).all(|i| self.steps[i] == self.steps[(i + p) % k]))
    }

    /// `e t e t …` using ids.
    pub fn describe(&self, surface: &TriangulatedSurface) -> String {
        let mut parts = Vec::with_capacity(2 * self.steps.len());
        for s in &self.steps {
            parts.push(surface.edge_ids()[surface.side_edge(s.triangle, s.entry)].clone());
            parts.push(surface.triangle_ids()[s.triangle].clone());
        }
        parts.join(" ")
    }
}

impl fmt::Display for EdgeCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("t{}[{}->{}]", s.triangle, s.entry, s.exit))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// All edge cycles in which every edge occurs at most `max_multiplicity`
/// times, one canonical representative each, in sorted order.
///
/// Triangles may repeat; walks that merely repeat a shorter cycle are
/// omitted. `cap` bounds the number of partial walks explored.
pub fn enumerate_edge_cycles(
    surface: &TriangulatedSurface,
    max_multiplicity: usize,
    cap: usize,
) -> Result<Vec<EdgeCycle>> {
    let mut found = BTreeSet::new();
    let mut counts = vec![0usize; surface.edge_count()];
    let mut explored = 0usize;
    let mut path: Vec<CycleStep> = Vec::new();

    struct Ctx<'a> {
        surface: &'a TriangulatedSurface,
        max: usize,
        cap: usize,
        start: (usize, usize),
    }

    fn extend(
        ctx: &Ctx,
        state: (usize, usize),
        path: &mut Vec<CycleStep>,
        counts: &mut [usize],
        explored: &mut usize,
        found: &mut BTreeSet<EdgeCycle>,
    ) -> Result<()> {
        let (t, entry) = state;
        for exit in 0..3 {
            if exit == entry {
                continue;
            }
            *explored += 1;
            if *explored > ctx.cap {
                return Err(Error::Size(format!(
                    "edge-cycle enumeration exceeded {} partial walks",
                    ctx.cap
                )));
            }
            let e = ctx.surface.side_edge(t, exit);
            if counts[e] >= ctx.max {
                continue;
            }
            counts[e] += 1;
            path.push(CycleStep { triangle: t, entry, exit });
            let next = ctx.surface.across(t, exit);
            if next == ctx.start {
                let cycle = EdgeCycle { steps: path.clone() };
                if !cycle.is_periodic() {
                    found.insert(cycle.canonical());
                }
            } else {
                extend(ctx, next, path, counts, explored, found)?;
            }
            path.pop();
            counts[e] -= 1;
        }
        Ok(())
    }

    for t in 0..surface.triangle_count() {
        for s in 0..3 {
            let ctx = Ctx {
                surface,
                max: max_multiplicity,
                cap,
                start: (t, s),
            };
            extend(&ctx, (t, s), &mut path, &mut counts, &mut explored, &mut found)?;
        }
    }
    Ok(found.into_iter().collect())
}

#[derive(Deserialize)]
struct RawCell {
    format: String,
    vertices: Vec<Value>,
    faces: Vec<RawFace>,
    edges: Vec<RawCellEdge>,
}

#[derive(Deserialize)]
struct RawFace {
    id: Value,
    boundary: Vec<Value>,
}

#[derive(Deserialize)]
struct RawCellEdge {
    id: Value,
    ends: Vec<Value>,
    faces: Vec<Value>,
}

#[derive(Serialize)]
struct OutCell<'a> {
    format: &'static str,
    vertices: &'a [String],
    faces: Vec<OutFace<'a>>,
    edges: Vec<OutCellEdge<'a>>,
}

#[derive(Serialize)]
struct OutFace<'a> {
    id: &'a str,
    boundary: Vec<&'a str>,
}

#[derive(Serialize)]
struct OutCellEdge<'a> {
    id: &'a str,
    ends: [&'a str; 2],
    faces: [&'a str; 2],
}

/// A cellular decomposition of a closed surface. Each face `f` carries one
/// dual vertex f*.
#[derive(Clone, Debug, PartialEq)]
pub struct CellularSurface {
    vertex_ids: Vec<String>,
    face_ids: Vec<String>,
    edge_ids: Vec<String>,
    boundaries: Vec<Vec<usize>>,
    edge_ends: Vec<[usize; 2]>,
    edge_faces: Vec<[usize; 2]>,
    face_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

/// Quadrilateral (v, v', f*, f'*) around an edge vv'.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Quadrilateral {
    pub edge: usize,
    pub v: usize,
    pub v2: usize,
    pub f: usize,
    pub f2: usize,
}

impl CellularSurface {
    pub fn new(
        vertex_ids: Vec<String>,
        faces: Vec<(String, Vec<String>)>,
        edges: Vec<(String, [String; 2], [String; 2])>,
    ) -> Result<Self> {
        let vertex_index = index_ids("vertex", &vertex_ids)?;
        let face_ids: Vec<String> = faces.iter().map(|f| f.0.clone()).collect();
        let face_index = index_ids("face", &face_ids)?;
        let edge_ids: Vec<String> = edges.iter().map(|e| e.0.clone()).collect();
        let edge_index = index_ids("edge", &edge_ids)?;
        if faces.is_empty() {
            return Err(Error::Validation("surface has no faces".into()));
        }
        let mut boundaries = Vec::with_capacity(faces.len());
        for (id, b) in &faces {
            if b.len() < 2 {
                return Err(Error::Validation(format!(
                    "face {id:?} has fewer than two boundary vertices"
                )));
            }
            boundaries.push(
                b.iter()
                    .map(|v| lookup(&vertex_index, "vertex", v))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut edge_ends = Vec::with_capacity(edges.len());
        let mut edge_faces = Vec::with_capacity(edges.len());
        for (_, ends, fs) in &edges {
            edge_ends.push([
                lookup(&vertex_index, "vertex", &ends[0])?,
                lookup(&vertex_index, "vertex", &ends[1])?,
            ]);
            edge_faces.push([
                lookup(&face_index, "face", &fs[0])?,
                lookup(&face_index, "face", &fs[1])?,
            ]);
        }
        // Match every (edge, face) incidence to a distinct boundary position
        // whose consecutive vertices are the edge ends. Positions with the
        // same unordered pair are interchangeable, so greedy matching is exact.
        let mut used: Vec<Vec<bool>> = boundaries.iter().map(|b| vec![false; b.len()]).collect();
        for (e, (eid, _, _)) in edges.iter().enumerate() {
            let [a, b] = edge_ends[e];
            for &f in &edge_faces[e] {
                let bd = &boundaries[f];
                let m = bd.len();
                let pos = (0..m).find(|&i| {
                    let (x, y) = (bd[i], bd[(i + 1) % m]);
                    !used[f][i] && ((x, y) == (a, b) || (x, y) == (b, a))
                });
                match pos {
                    Some(i) => used[f][i] = true,
                    None => {
                        return Err(Error::Validation(format!(
                            "edge {eid:?}: ends are not consecutive on the boundary of face {:?}",
                            face_ids[f]
                        )))
                    }
                }
            }
        }
        for (f, u) in used.iter().enumerate() {
            if u.iter().any(|&x| !x) {
                return Err(Error::Validation(format!(
                    "boundary of face {:?} has a segment with no edge",
                    face_ids[f]
                )));
            }
        }
        let mut seen = vec![false; vertex_ids.len()];
        for b in &boundaries {
            for &v in b {
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::Validation(format!(
                "vertex {:?} lies on no face",
                vertex_ids[v]
            )));
        }
        let mut uf = UnionFind::new(faces.len());
        for fs in &edge_faces {
            uf.union(fs[0], fs[1]);
        }
        if uf.components() != 1 {
            return Err(Error::Validation("cell complex is not connected".into()));
        }
        let surface = CellularSurface {
            vertex_ids,
            face_ids,
            edge_ids,
            boundaries,
            edge_ends,
            edge_faces,
            face_index,
            edge_index,
        };
        if surface.euler_characteristic() > 2 {
            return Err(Error::Validation(format!(
                "Euler characteristic {} exceeds that of a sphere",
                surface.euler_characteristic()
            )));
        }
        Ok(surface)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawCell = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.format != CELL_FORMAT {
            return Err(Error::Parse(format!(
                "expected format {CELL_FORMAT:?}, got {:?}",
                raw.format
            )));
        }
        let vertices = raw.vertices.iter().map(id_string).collect::<Result<Vec<_>>>()?;
        let faces = raw
            .faces
            .iter()
            .map(|f| {
                Ok((
                    id_string(&f.id)?,
                    f.boundary.iter().map(id_string).collect::<Result<Vec<_>>>()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in &raw.edges {
            if e.ends.len() != 2 || e.faces.len() != 2 {
                return Err(Error::Parse(format!(
                    "edge {} needs exactly two ends and two faces",
                    e.id
                )));
            }
            edges.push((
                id_string(&e.id)?,
                [id_string(&e.ends[0])?, id_string(&e.ends[1])?],
                [id_string(&e.faces[0])?, id_string(&e.faces[1])?],
            ));
        }
        Self::new(vertices, faces, edges)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> Value {
        let out = OutCell {
            format: CELL_FORMAT,
            vertices: &self.vertex_ids,
            faces: self
                .boundaries
                .iter()
                .enumerate()
                .map(|(f, b)| OutFace {
                    id: &self.face_ids[f],
                    boundary: b.iter().map(|&v| self.vertex_ids[v].as_str()).collect(),
                })
                .collect(),
            edges: (0..self.edge_count())
                .map(|e| OutCellEdge {
                    id: &self.edge_ids[e],
                    ends: [
                        &self.vertex_ids[self.edge_ends[e][0]],
                        &self.vertex_ids[self.edge_ends[e][1]],
                    ],
                    faces: [
                        &self.face_ids[self.edge_faces[e][0]],
                        &self.face_ids[self.edge_faces[e][1]],
                    ],
                })
                .collect(),
        };
        serde_json::to_value(out).expect("serializable")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }
    pub fn face_count(&self) -> usize {
        self.face_ids.len()
    }
    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }
    pub fn edge_ids(&self) -> &[String] {
        &self.edge_ids
    }
    pub fn face_ids(&self) -> &[String] {
        &self.face_ids
    }
    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.face_index.get(id).copied()
    }
    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }
    pub fn boundary(&self, f: usize) -> &[usize] {
        &self.boundaries[f]
    }
    pub fn edge_ends(&self, e: usize) -> [usize; 2] {
        self.edge_ends[e]
    }
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// One quadrilateral per edge, based at the edge's first listed end.
    pub fn quadrilaterals(&self) -> Vec<Quadrilateral> {
        (0..self.edge_count())
            .map(|e| Quadrilateral {
                edge: e,
                v: self.edge_ends[e][0],
                v2: self.edge_ends[e][1],
                f: self.edge_faces[e][0],
                f2: self.edge_faces[e][1],
            })
            .collect()
    }
}

/// Reads one of the value maps `edge_weights`, `vertex_values` or `face_values`.
pub fn read_value_map(text: &str, key: &str) -> Result<BTreeMap<String, f64>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = v
        .get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse(format!("missing object {key:?}")))?;
    let mut out = BTreeMap::new();
    for (k, x) in obj {
        let x = x
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("{key}.{k} is not a number")))?;
        out.insert(k.clone(), x);
    }
    Ok(out)
}

/// Orders a value map along `ids`, failing on missing or unknown keys.
pub fn values_for(ids: &[String], map: &BTreeMap<String, f64>, kind: &str) -> Result<Vec<f64>> {
    if let Some(extra) = map.keys().find(|k| !ids.contains(k)) {
        return Err(Error::Validation(format!("unknown {kind} id {extra:?}")));
    }
    ids.iter()
        .map(|id| {
            map.get(id)
                .copied()
                .ok_or_else(|| Error::Validation(format!("missing value for {kind} {id:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNGLUED: &str = r#"{"format":"genhyp-tri/1","vertices":["p"],
        "triangles":[{"id":"t0","corners":["p","p","p"]}],"gluings":[]}"#;

    #[test]
    fn unglued_side_is_rejected() {
        let err = TriangulatedSurface::from_json_str(UNGLUED).unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("not glued")));
    }

    #[test]
    fn simplicial_tetrahedron() {
        let ids = (0..4).map(|i| i.to_string()).collect();
        let s = TriangulatedSurface::from_simplicial(ids, &[[0, 1, 2], [0, 3, 1], [1, 3, 2], [0, 2, 3]])
            .unwrap();
        assert_eq!(s.euler_characteristic(), 2);
        assert_eq!(s.edge_count(), 6);
        assert_eq!(s.vertex_degrees(), vec![3; 4]);
    }

    #[test]
    fn canonical_form_is_rotation_invariant() {
        let c = EdgeCycle {
            steps: vec![
                CycleStep { triangle: 1, entry: 0, exit: 2 },
                CycleStep { triangle: 0, entry: 1, exit: 0 },
                CycleStep { triangle: 1, entry: 1, exit: 0 },
            ],
        };
        let mut rotated = c.clone();
        rotated.steps.rotate_left(1);
        assert_eq!(c.canonical(), rotated.canonical());
        let rev = EdgeCycle { steps: c.reversed() };
        assert_eq!(c.canonical(), rev.canonical());
    }

    #[test]
    fn periodic_walks() {
        let s = CycleStep { triangle: 0, entry: 0, exit: 1 };
        let t = CycleStep { triangle: 1, entry: 2, exit: 0 };
        assert!(EdgeCycle { steps: vec![s, t, s, t] }.is_periodic());
        assert!(!EdgeCycle { steps: vec![s, t] }.is_periodic());
    }
}
