// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Incremental (Bowyer-Watson) Delaunay triangulation in the plane.
//!
//! The hull is handled with ghost triangles that share an implicit vertex
//! at infinity, so no bounding super-triangle is needed and the output
//! always covers the convex hull exactly. Orientation and in-circle tests
//! use adaptive-precision predicates.
//!
//! Points are inserted in Hilbert-curve order and located by a visibility
//! walk from the most recently created triangle, which keeps the expected
//! cost close to `O(n log n)` for spatially coherent inputs.
//!
//! Cocircular configurations admit several Delaunay triangulations. After
//! construction every cocircular quadrilateral is flipped, if needed, so
//! that its diagonal contains the quadrilateral's lowest point index. This
//! makes the output independent of insertion order.

use std::fmt::Write as _;

use robust::Coord;
use thiserror::Error;

use crate::io::DataMatrix;
use crate::projection::Embedding;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DelaunayError {
    #[error("need at least 3 points to triangulate, got {0}")]
    TooFewPoints(usize),
    #[error("all points are collinear (or coincide)")]
    Collinear,
    #[error("point count mismatch: triangulation has {expected}, space has {found}")]
    ShapeMismatch { expected: usize, found: usize },
}

/// Anything that can measure distances between indexed points.
pub trait PointSpace {
    fn n_points(&self) -> usize;
    fn dist(&self, a: usize, b: usize) -> f64;
}

impl PointSpace for DataMatrix {
    fn n_points(&self) -> usize {
        DataMatrix::n_points(self)
    }
    fn dist(&self, a: usize, b: usize) -> f64 {
        DataMatrix::dist(self, a, b)
    }
}

impl PointSpace for Embedding {
    fn n_points(&self) -> usize {
        Embedding::n_points(self)
    }
    fn dist(&self, a: usize, b: usize) -> f64 {
        Embedding::dist(self, a, b)
    }
}

/// Triangles as sorted index triples plus the deduplicated edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    n_points: usize,
    triangles: Vec<[usize; 3]>,
    edges: Vec<(usize, usize)>,
    representative: Vec<usize>,
}

impl Triangulation {
    /// Builds a triangulation from already-known triangles. Each triple is
    /// sorted, the list is sorted, and edges are derived.
    pub fn from_triangles(n_points: usize, mut triangles: Vec<[usize; 3]>) -> Self {
        for t in &mut triangles {
            t.sort_unstable();
        }
        triangles.sort_unstable();
        let mut edges: Vec<(usize, usize)> = triangles
            .iter()
            .flat_map(|&[i, j, k]| [(i, j), (j, k), (i, k)])
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Self {
            n_points,
            triangles,
            edges,
            representative: (0..n_points).collect(),
        }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// For each input point, the index of the point it was collapsed into
    /// (itself unless it duplicates an earlier point).
    pub fn representative(&self) -> &[usize] {
        &self.representative
    }

    /// Adjacency lists over the edge set.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_points];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// `i,j,k` lines, one per triangle.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for [i, j, k] in &self.triangles {
            let _ = writeln!(out, "{i},{j},{k}");
        }
        out
    }
}

/// Euclidean length of every triangulation edge in some point space.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLengths {
    edges: Vec<(usize, usize)>,
    lengths: Vec<f64>,
}

impl EdgeLengths {
    pub fn get(&self, a: usize, b: usize) -> Option<f64> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges
            .binary_search(&key)
            .ok()
            .map(|i| self.lengths[i])
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.edges.iter().copied().zip(self.lengths.iter().copied())
    }
}

pub fn edge_lengths<S: PointSpace + ?Sized>(
    tri: &Triangulation,
    space: &S,
) -> Result<EdgeLengths, DelaunayError> {
    if space.n_points() != tri.n_points {
        return Err(DelaunayError::ShapeMismatch {
            expected: tri.n_points,
            found: space.n_points(),
        });
    }
    Ok(EdgeLengths {
        edges: tri.edges.clone(),
        lengths: tri.edges.iter().map(|&(a, b)| space.dist(a, b)).collect(),
    })
}

pub fn triangulate_embedding(embedding: &Embedding) -> Result<Triangulation, DelaunayError> {
    triangulate(embedding.coords())
}

/// Delaunay triangulation of `points`. Exact duplicates are collapsed onto
/// their lowest-index copy; the copies appear in no triangle.
pub fn triangulate(points: &[[f64; 2]]) -> Result<Triangulation, DelaunayError> {
    let n = points.len();
    if n < 3 {
        return Err(DelaunayError::TooFewPoints(n));
    }
    let representative = collapse_duplicates(points);
    let unique: Vec<usize> = (0..n).filter(|&i| representative[i] == i).collect();
    if unique.len() < 3 {
        return Err(DelaunayError::Collinear);
    }
    let local: Vec<[f64; 2]> = unique.iter().map(|&i| points[i]).collect();
    let mut mesh = Mesh::build(&local)?;
    mesh.enforce_tie_break();
    let triangles = mesh
        .real_triangles()
        .map(|t| t.map(|v| unique[v as usize]))
        .collect();
    let mut out = Triangulation::from_triangles(n, triangles);
    out.representative = representative;
    Ok(out)
}

fn collapse_duplicates(points: &[[f64; 2]]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    // +0.0 folds -0.0 into 0.0 so both compare equal under total_cmp
    let key = |i: usize| [points[i][0] + 0.0, points[i][1] + 0.0];
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        ka[0]
            .total_cmp(&kb[0])
            .then(ka[1].total_cmp(&kb[1]))
            .then(a.cmp(&b))
    });
    let mut rep: Vec<usize> = (0..points.len()).collect();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && key(order[j]) == key(order[i]) {
            rep[order[j]] = order[i];
            j += 1;
        }
        i = j;
    }
    rep
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    robust::orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    )
}

fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> f64 {
    robust::incircle(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
        Coord { x: d[0], y: d[1] },
    )
}

/// Index of `(x, y)` along a Hilbert curve over a `2^16` grid.
fn hilbert_index(mut x: u32, mut y: u32) -> u64 {
    const SIDE: u32 = 1 << 16;
    let mut d: u64 = 0;
    let mut s = SIDE / 2;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = SIDE - 1 - x;
                y = SIDE - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s /= 2;
    }
    d
}

fn hilbert_order(points: &[[f64; 2]]) -> Vec<u32> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let grid = |v: f64, k: usize| -> u32 {
        if span > 0.0 {
            (((v - lo[k]) / span) * 65535.0).clamp(0.0, 65535.0) as u32
        } else {
            0
        }
    };
    let mut keyed: Vec<(u64, u32)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (hilbert_index(grid(p[0], 0), grid(p[1], 1)), i as u32))
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

const GHOST: u32 = u32::MAX;
const NONE: u32 = u32::MAX;

/// Triangle mesh with adjacency. `nbr[t][s]` is the triangle across the
/// edge opposite `tri[t][s]`. Real triangles are counter-clockwise; a ghost
/// triangle `[a, b, GHOST]` sits outside the hull edge `a -> b`.
struct Mesh<'a> {
    pts: &'a [[f64; 2]],
    tri: Vec<[u32; 3]>,
    nbr: Vec<[u32; 3]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    last: u32,
    walk_rng: u32,
    stack: Vec<u32>,
    cavity: Vec<u32>,
    boundary: Vec<Boundary>,
    created: Vec<u32>,
}

#[derive(Clone, Copy)]
struct Boundary {
    u: u32,
    v: u32,
    outside: u32,
    outside_slot: usize,
}

impl<'a> Mesh<'a> {
    fn build(pts: &'a [[f64; 2]]) -> Result<Self, DelaunayError> {
        let order = hilbert_order(pts);
        let a = order[0];
        let b = order[1];
        let c = order[2..]
            .iter()
            .copied()
            .find(|&c| orient(pts[a as usize], pts[b as usize], pts[c as usize]) != 0.0)
            .ok_or(DelaunayError::Collinear)?;
        let mut mesh = Mesh {
            pts,
            tri: Vec::with_capacity(2 * pts.len() + 4),
            nbr: Vec::with_capacity(2 * pts.len() + 4),
            alive: Vec::with_capacity(2 * pts.len() + 4),
            free: Vec::new(),
            stamp: Vec::new(),
            epoch: 0,
            last: 0,
            walk_rng: 0x9e37_79b9,
            stack: Vec::new(),
            cavity: Vec::new(),
            boundary: Vec::new(),
            created: Vec::new(),
        };
        let third = c;
        let (b, c) = if orient(pts[a as usize], pts[b as usize], pts[c as usize]) > 0.0 {
            (b, c)
        } else {
            (c, b)
        };
        let t0 = mesh.alloc([a, b, c]);
        let g_ab = mesh.alloc([b, a, GHOST]);
        let g_bc = mesh.alloc([c, b, GHOST]);
        let g_ca = mesh.alloc([a, c, GHOST]);
        mesh.link_all(&[t0, g_ab, g_bc, g_ca]);
        mesh.last = t0;
        for &p in &order[2..] {
            if p != third {
                mesh.insert(p);
            }
        }
        Ok(mesh)
    }

    fn pt(&self, v: u32) -> [f64; 2] {
        self.pts[v as usize]
    }

    fn alloc(&mut self, verts: [u32; 3]) -> u32 {
        if let Some(t) = self.free.pop() {
            self.tri[t as usize] = verts;
            self.nbr[t as usize] = [NONE; 3];
            self.alive[t as usize] = true;
            t
        } else {
            self.tri.push(verts);
            self.nbr.push([NONE; 3]);
            self.alive.push(true);
            self.stamp.push(0);
            (self.tri.len() - 1) as u32
        }
    }

    fn is_ghost(&self, t: u32) -> bool {
        self.tri[t as usize][2] == GHOST
    }

    fn slot_of(&self, t: u32, v: u32) -> usize {
        self.tri[t as usize]
            .iter()
            .position(|&x| x == v)
            .expect("vertex in triangle")
    }

    /// Links every pair of triangles in `ts` that share an edge.
    fn link_all(&mut self, ts: &[u32]) {
        let mut half: Vec<(u32, u32, u32, usize)> = Vec::with_capacity(ts.len() * 3);
        for &t in ts {
            let v = self.tri[t as usize];
            for s in 0..3 {
                let (x, y) = (v[(s + 1) % 3], v[(s + 2) % 3]);
                half.push((x.min(y), x.max(y), t, s));
            }
        }
        half.sort_unstable_by_key(|h| (h.0, h.1));
        for w in half.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                self.nbr[w[0].2 as usize][w[0].3] = w[1].2;
                self.nbr[w[1].2 as usize][w[1].3] = w[0].2;
            }
        }
    }

    fn in_conflict(&self, t: u32, p: [f64; 2]) -> bool {
        let [a, b, c] = self.tri[t as usize];
        if c == GHOST {
            let (pa, pb) = (self.pt(a), self.pt(b));
            let o = orient(pa, pb, p);
            if o > 0.0 {
                return true;
            }
            if o < 0.0 {
                return false;
            }
            // collinear with the hull edge: conflict only strictly inside it
            let dot = (p[0] - pa[0]) * (pb[0] - pa[0]) + (p[1] - pa[1]) * (pb[1] - pa[1]);
            let len2 = (pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2);
            dot > 0.0 && dot < len2
        } else {
            incircle(self.pt(a), self.pt(b), self.pt(c), p) > 0.0
        }
    }

    fn next_rand(&mut self) -> u32 {
        self.walk_rng ^= self.walk_rng << 13;
        self.walk_rng ^= self.walk_rng >> 17;
        self.walk_rng ^= self.walk_rng << 5;
        self.walk_rng
    }

    /// A triangle in conflict with `p`: the real triangle containing it or,
    /// when `p` is outside the hull, a ghost whose edge `p` sees.
    fn locate(&mut self, p: [f64; 2]) -> u32 {
        let mut t = self.last;
        if !self.alive[t as usize] {
            t = (0..self.tri.len() as u32)
                .find(|&i| self.alive[i as usize])
                .expect("mesh has triangles");
        }
        if self.is_ghost(t) {
            t = self.nbr[t as usize][2];
        }
        'walk: loop {
            let v = self.tri[t as usize];
            let start = (self.next_rand() % 3) as usize;
            for k in 0..3 {
                let s = (start + k) % 3;
                let (x, y) = (v[(s + 1) % 3], v[(s + 2) % 3]);
                if orient(self.pt(x), self.pt(y), p) < 0.0 {
                    let next = self.nbr[t as usize][s];
                    if self.is_ghost(next) {
                        return next;
                    }
                    t = next;
                    continue 'walk;
                }
            }
            return t;
        }
    }

    fn insert(&mut self, pv: u32) {
        let p = self.pt(pv);
        let seed = self.locate(p);
        debug_assert!(self.in_conflict(seed, p));

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.cavity.clear();
        self.boundary.clear();
        self.stack.clear();
        self.stamp[seed as usize] = epoch;
        self.stack.push(seed);
        while let Some(t) = self.stack.pop() {
            self.cavity.push(t);
            for s in 0..3 {
                let nb = self.nbr[t as usize][s];
                if self.stamp[nb as usize] == epoch {
                    continue;
                }
                if self.in_conflict(nb, p) {
                    self.stamp[nb as usize] = epoch;
                    self.stack.push(nb);
                } else {
                    let v = self.tri[t as usize];
                    let outside_slot = self.nbr[nb as usize]
                        .iter()
                        .position(|&x| x == t)
                        .expect("adjacency is symmetric");
                    self.boundary.push(Boundary {
                        u: v[(s + 1) % 3],
                        v: v[(s + 2) % 3],
                        outside: nb,
                        outside_slot,
                    });
                }
            }
        }

        for &t in &self.cavity {
            self.alive[t as usize] = false;
            self.free.push(t);
        }
        self.created.clear();
        let boundary = std::mem::take(&mut self.boundary);
        for b in &boundary {
            let verts = if b.u == GHOST {
                [b.v, pv, GHOST]
            } else if b.v == GHOST {
                [pv, b.u, GHOST]
            } else {
                [b.u, b.v, pv]
            };
            let t = self.alloc(verts);
            let s = self.slot_of(t, pv);
            self.nbr[t as usize][s] = b.outside;
            self.nbr[b.outside as usize][b.outside_slot] = t;
            self.created.push(t);
        }
        self.boundary = boundary;

        // pair up the new triangles along their edges through p
        let mut spokes: Vec<(u32, u32, usize)> = Vec::with_capacity(self.created.len() * 2);
        for &t in &self.created {
            let v = self.tri[t as usize];
            for s in 0..3 {
                let (x, y) = (v[(s + 1) % 3], v[(s + 2) % 3]);
                if x == pv {
                    spokes.push((y, t, s));
                } else if y == pv {
                    spokes.push((x, t, s));
                }
            }
        }
        spokes.sort_unstable_by_key(|s| s.0);
        for w in spokes.chunks_exact(2) {
            debug_assert_eq!(w[0].0, w[1].0);
            self.nbr[w[0].1 as usize][w[0].2] = w[1].1;
            self.nbr[w[1].1 as usize][w[1].2] = w[0].1;
        }
        self.last = self
            .created
            .iter()
            .copied()
            .find(|&t| !self.is_ghost(t))
            .unwrap_or(self.created[0]);
    }

    /// Flips cocircular quadrilaterals so that their diagonal contains the
    /// quadrilateral's smallest vertex index.
    fn enforce_tie_break(&mut self) {
        let mut work: Vec<u32> = (0..self.tri.len() as u32)
            .filter(|&t| self.alive[t as usize] && !self.is_ghost(t))
            .collect();
        while let Some(t) = work.pop() {
            if !self.alive[t as usize] || self.is_ghost(t) {
                continue;
            }
            for s in 0..3 {
                let u = self.nbr[t as usize][s];
                if self.is_ghost(u) {
                    continue;
                }
                let [c, a, b] = rotate(self.tri[t as usize], s);
                let su = self.nbr[u as usize]
                    .iter()
                    .position(|&x| x == t)
                    .expect("adjacency is symmetric");
                let d = self.tri[u as usize][su];
                let lowest = a.min(b).min(c).min(d);
                if lowest != c && lowest != d {
                    continue;
                }
                if incircle(self.pt(c), self.pt(a), self.pt(b), self.pt(d)) != 0.0 {
                    continue;
                }
                self.flip(t, s, u, su);
                work.push(t);
                work.push(u);
                break;
            }
        }
    }

    fn flip(&mut self, t: u32, s: usize, u: u32, su: usize) {
        let [c, a, b] = rotate(self.tri[t as usize], s);
        let d = self.tri[u as usize][su];
        let n_bc = self.nbr[t as usize][(s + 1) % 3];
        let n_ca = self.nbr[t as usize][(s + 2) % 3];
        let ud = rotate(self.tri[u as usize], su);
        debug_assert_eq!(ud, [d, b, a]);
        let n_ad = self.nbr[u as usize][(su + 1) % 3];
        let n_db = self.nbr[u as usize][(su + 2) % 3];

        self.tri[t as usize] = [c, a, d];
        self.nbr[t as usize] = [n_ad, u, n_ca];
        self.tri[u as usize] = [d, b, c];
        self.nbr[u as usize] = [n_bc, t, n_db];
        self.relink(n_ad, u, t);
        self.relink(n_bc, t, u);
    }

    fn relink(&mut self, t: u32, old: u32, new: u32) {
        for x in self.nbr[t as usize].iter_mut() {
            if *x == old {
                *x = new;
            }
        }
    }

    fn real_triangles(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        (0..self.tri.len())
            .filter(|&t| self.alive[t] && self.tri[t][2] != GHOST)
            .map(|t| self.tri[t])
    }
}

fn rotate(v: [u32; 3], s: usize) -> [u32; 3] {
    [v[s], v[(s + 1) % 3], v[(s + 2) % 3]]
}
