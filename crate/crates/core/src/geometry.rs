//! Planar Poisson deployments and window-clipped Voronoi tessellations.
//!
//! All lengths are in kilometres. The observation window is a square centred
//! on the origin. Cells are built by clipping the window against the
//! perpendicular bisectors of nearby sites, visiting candidates ring by ring
//! through a bucket grid until no remaining site can cut the cell (the
//! classic "security radius" stopping rule). Each clipped polygon edge keeps a
//! tag naming the site that produced it, which yields the adjacency relation
//! directly.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

/// Sites closer than this are treated as coincident and jittered apart.
pub const COINCIDENT_TOLERANCE_KM: f64 = 1e-9;
/// Displacement applied to a coincident site.
pub const JITTER_KM: f64 = 1e-6;
/// A shared edge shorter than this does not make two cells adjacent.
pub const MIN_SHARED_EDGE_KM: f64 = 1e-9;

const CLIP_EPS: f64 = 1e-12;
const MAX_REJECTION_DRAWS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        self.distance_sq(other).sqrt()
    }

    pub fn distance_sq(&self, other: &Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn midpoint(&self, other: &Point2D) -> Point2D {
        Point2D::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Square observation window of side `side` km centred on the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    side: f64,
}

impl Window {
    pub fn new(side: f64) -> Result<Self> {
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::Parameter(format!(
                "window side must be positive and finite, got {side}"
            )));
        }
        Ok(Self { side })
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn half_side(&self) -> f64 {
        0.5 * self.side
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    pub fn center(&self) -> Point2D {
        Point2D::ORIGIN
    }

    /// Closed containment test.
    pub fn contains(&self, p: &Point2D) -> bool {
        let h = self.half_side();
        p.x.abs() <= h && p.y.abs() <= h
    }

    /// Concentric sub-window keeping the central `(1 - guard_fraction)` of the side.
    pub fn interior(&self, guard_fraction: f64) -> Result<Window> {
        if !(0.0..1.0).contains(&guard_fraction) {
            return Err(Error::Parameter(format!(
                "guard fraction must lie in [0, 1), got {guard_fraction}"
            )));
        }
        Window::new(self.side * (1.0 - guard_fraction))
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2D {
        let h = self.half_side();
        Point2D::new(rng.random_range(-h..=h), rng.random_range(-h..=h))
    }

    fn corners_ccw(&self) -> [Point2D; 4] {
        let h = self.half_side();
        [
            Point2D::new(-h, -h),
            Point2D::new(h, -h),
            Point2D::new(h, h),
            Point2D::new(-h, h),
        ]
    }
}

/// A set of base-station sites drawn in (or supplied for) a window.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    points: Vec<Point2D>,
    intensity: f64,
    window: Window,
}

impl Deployment {
    /// Wraps user-supplied sites. Every site must be finite and inside the window.
    pub fn new(points: Vec<Point2D>, intensity: f64, window: Window) -> Result<Self> {
        check_intensity(intensity)?;
        if let Some((i, p)) = points
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || !window.contains(p))
        {
            return Err(Error::Parameter(format!(
                "site {i} at ({}, {}) is outside the {} km window",
                p.x,
                p.y,
                window.side()
            )));
        }
        Ok(Self {
            points,
            intensity,
            window,
        })
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Index of the site nearest to `q` (lowest index on ties).
    pub fn nearest(&self, q: &Point2D) -> Option<usize> {
        nearest_index(&self.points, q)
    }
}

fn check_intensity(intensity: f64) -> Result<()> {
    if !(intensity.is_finite() && intensity >= 0.0) {
        return Err(Error::Parameter(format!(
            "intensity must be finite and non-negative, got {intensity}"
        )));
    }
    Ok(())
}

pub(crate) fn nearest_index(points: &[Point2D], q: &Point2D) -> Option<usize> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.distance_sq(q)))
        .fold(None, |best: Option<(usize, f64)>, (i, d)| match best {
            Some((_, bd)) if bd <= d => best,
            _ => Some((i, d)),
        })
        .map(|(i, _)| i)
}

/// Draws a homogeneous Poisson point process of the given intensity
/// (points per km²) in `window`.
pub fn sample_ppp<R: Rng + ?Sized>(
    intensity: f64,
    window: Window,
    rng: &mut R,
) -> Result<Deployment> {
    check_intensity(intensity)?;
    let mean = intensity * window.area();
    let count = if mean > 0.0 {
        let poisson = Poisson::new(mean)
            .map_err(|e| Error::Parameter(format!("poisson mean {mean}: {e}")))?;
        poisson.sample(rng) as usize
    } else {
        0
    };
    let points = (0..count).map(|_| window.sample_uniform(rng)).collect();
    Ok(Deployment {
        points,
        intensity,
        window,
    })
}

/// Which boundary produced a polygon edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSource {
    Window,
    Site(usize),
}

/// Convex cell polygon with counter-clockwise vertices. Edge `k` runs from
/// vertex `k` to vertex `k + 1` and was produced by `sources[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    vertices: Vec<Point2D>,
    sources: Vec<EdgeSource>,
}

impl Cell {
    fn from_window(window: &Window) -> Self {
        Self {
            vertices: window.corners_ccw().to_vec(),
            sources: vec![EdgeSource::Window; 4],
        }
    }

    pub fn vertices(&self) -> &[Point2D] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2D, Point2D, EdgeSource)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| {
            (
                self.vertices[k],
                self.vertices[(k + 1) % n],
                self.sources[k],
            )
        })
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let twice: f64 = (0..n)
            .map(|k| {
                let a = self.vertices[k];
                let b = self.vertices[(k + 1) % n];
                a.x * b.y - b.x * a.y
            })
            .sum();
        0.5 * twice
    }

    /// Inclusive point-in-polygon test for the convex cell.
    pub fn contains(&self, q: &Point2D) -> bool {
        if self.vertices.len() < 3 {
            return false;
        }
        self.edges().all(|(a, b, _)| {
            let cross = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x);
            cross >= -CLIP_EPS * (1.0 + a.distance(&b))
        })
    }

    pub fn bounding_box(&self) -> (Point2D, Point2D) {
        let mut lo = Point2D::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2D::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    fn max_distance_from(&self, p: &Point2D) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.distance_sq(p))
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// Keeps the half-plane of points at least as close to `site` as to `other`.
    fn clip(&mut self, site: &Point2D, other: &Point2D, other_index: usize) {
        let dx = other.x - site.x;
        let dy = other.y - site.y;
        let mid = site.midpoint(other);
        let offset = dx * mid.x + dy * mid.y;
        let scale = (dx * dx + dy * dy).sqrt();
        let side = |q: &Point2D| (dx * q.x + dy * q.y - offset) / scale;

        let n = self.vertices.len();
        let values: Vec<f64> = self.vertices.iter().map(side).collect();
        if values.iter().all(|&f| f <= CLIP_EPS) {
            return;
        }

        let mut vertices = Vec::with_capacity(n + 1);
        let mut sources = Vec::with_capacity(n + 1);
        for k in 0..n {
            let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
            let (fa, fb) = (values[k], values[(k + 1) % n]);
            let a_in = fa <= CLIP_EPS;
            let b_in = fb <= CLIP_EPS;
            if a_in {
                vertices.push(a);
                sources.push(self.sources[k]);
                if !b_in {
                    vertices.push(intersect(a, b, fa, fb));
                    sources.push(EdgeSource::Site(other_index));
                }
            } else if b_in {
                vertices.push(intersect(a, b, fa, fb));
                sources.push(self.sources[k]);
            }
        }
        self.vertices = vertices;
        self.sources = sources;
        self.drop_degenerate_edges();
    }

    fn drop_degenerate_edges(&mut self) {
        let mut k = 0;
        while self.vertices.len() > 1 && k < self.vertices.len() {
            let n = self.vertices.len();
            let next = (k + 1) % n;
            if self.vertices[k].distance(&self.vertices[next]) < CLIP_EPS {
                self.vertices.remove(k);
                self.sources.remove(k);
            } else {
                k += 1;
            }
        }
    }
}

fn intersect(a: Point2D, b: Point2D, fa: f64, fb: f64) -> Point2D {
    let t = fa / (fa - fb);
    Point2D::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}

/// Window-clipped Voronoi cells of a deployment plus the symmetric
/// edge-sharing adjacency between them.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiAdjacency {
    sites: Vec<Point2D>,
    window: Window,
    cells: Vec<Cell>,
    neighbors: Vec<Vec<usize>>,
}

impl VoronoiAdjacency {
    /// Sites actually tessellated (coincident inputs are jittered apart).
    pub fn sites(&self) -> &[Point2D] {
        &self.sites
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Sorted indices of cells sharing an edge of positive length with cell `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    /// True when `q` lies in cell `i` and no site bounding that cell is
    /// strictly closer to `q` than site `i`.
    pub fn cell_contains(&self, i: usize, q: &Point2D) -> bool {
        let cell = &self.cells[i];
        let own = self.sites[i].distance_sq(q);
        cell.contains(q)
            && cell.edges().all(|(_, _, src)| match src {
                EdgeSource::Site(j) => self.sites[j].distance_sq(q) >= own,
                EdgeSource::Window => true,
            })
    }

    /// Index of the site nearest to `q`.
    pub fn locate(&self, q: &Point2D) -> Option<usize> {
        nearest_index(&self.sites, q)
    }
}

/// Builds the clipped Voronoi tessellation and adjacency of `deployment`.
pub fn voronoi_adjacency(deployment: &Deployment) -> Result<VoronoiAdjacency> {
    if deployment.is_empty() {
        return Err(Error::Parameter(
            "cannot tessellate an empty deployment".into(),
        ));
    }
    let window = deployment.window();
    let mut sites = deployment.points().to_vec();
    let grid = separate_coincident(&mut sites, &window);

    let cells: Vec<Cell> = (0..sites.len())
        .map(|i| build_cell(i, &sites, &grid, &window))
        .collect();

    let n = sites.len();
    let mut candidate: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, cell) in cells.iter().enumerate() {
        for (a, b, src) in cell.edges() {
            if let EdgeSource::Site(j) = src {
                if a.distance(&b) > MIN_SHARED_EDGE_KM {
                    candidate[i].push(j);
                }
            }
        }
        candidate[i].sort_unstable();
        candidate[i].dedup();
    }
    // Keep only mutually reported contacts so the relation is symmetric.
    let neighbors = (0..n)
        .map(|i| {
            candidate[i]
                .iter()
                .copied()
                .filter(|&j| j != i && candidate[j].binary_search(&i).is_ok())
                .collect()
        })
        .collect();

    Ok(VoronoiAdjacency {
        sites,
        window,
        cells,
        neighbors,
    })
}

/// Uniform bucket grid over the window for ring-ordered neighbour search.
struct BucketGrid {
    origin: f64,
    size: f64,
    dim: usize,
    buckets: Vec<Vec<usize>>,
}

impl BucketGrid {
    fn new(sites: &[Point2D], window: &Window) -> Self {
        let dim = ((sites.len() as f64).sqrt().ceil() as usize).clamp(1, 1024);
        let size = window.side() / dim as f64;
        let mut grid = Self {
            origin: -window.half_side(),
            size,
            dim,
            buckets: vec![Vec::new(); dim * dim],
        };
        for (i, p) in sites.iter().enumerate() {
            let (cx, cy) = grid.coords(p);
            grid.buckets[cy * dim + cx].push(i);
        }
        grid
    }

    fn coords(&self, p: &Point2D) -> (usize, usize) {
        let clamp =
            |v: f64| (((v - self.origin) / self.size).floor().max(0.0) as usize).min(self.dim - 1);
        (clamp(p.x), clamp(p.y))
    }

    /// Site indices in buckets at Chebyshev ring distance exactly `ring`.
    fn ring(&self, center: (usize, usize), ring: usize, out: &mut Vec<usize>) {
        out.clear();
        let (cx, cy) = (center.0 as isize, center.1 as isize);
        let r = ring as isize;
        let dim = self.dim as isize;
        let mut visit = |x: isize, y: isize| {
            if x >= 0 && y >= 0 && x < dim && y < dim {
                out.extend_from_slice(&self.buckets[(y * dim + x) as usize]);
            }
        };
        if r == 0 {
            visit(cx, cy);
            return;
        }
        for x in (cx - r)..=(cx + r) {
            visit(x, cy - r);
            visit(x, cy + r);
        }
        for y in (cy - r + 1)..=(cy + r - 1) {
            visit(cx - r, y);
            visit(cx + r, y);
        }
    }
}

fn separate_coincident(sites: &mut [Point2D], window: &Window) -> BucketGrid {
    let mut ring = Vec::new();
    for _ in 0..8 {
        let grid = BucketGrid::new(sites, window);
        let mut moved = false;
        for i in 0..sites.len() {
            let home = grid.coords(&sites[i]);
            for r in 0..=1 {
                grid.ring(home, r, &mut ring);
                for &j in &ring {
                    if j < i && sites[i].distance(&sites[j]) < COINCIDENT_TOLERANCE_KM {
                        let h = window.half_side();
                        let p = sites[i];
                        let dx = if p.x + JITTER_KM <= h {
                            JITTER_KM
                        } else {
                            -JITTER_KM
                        };
                        let dy = if p.y + JITTER_KM <= h {
                            JITTER_KM
                        } else {
                            -JITTER_KM
                        };
                        sites[i] = Point2D::new(p.x + dx * 0.6, p.y + dy * 0.8);
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            return grid;
        }
    }
    BucketGrid::new(sites, window)
}

fn build_cell(i: usize, sites: &[Point2D], grid: &BucketGrid, window: &Window) -> Cell {
    let site = sites[i];
    let mut cell = Cell::from_window(window);
    let home = grid.coords(&site);
    let mut ring_sites = Vec::new();
    for ring in 0..=grid.dim {
        grid.ring(home, ring, &mut ring_sites);
        for &j in &ring_sites {
            if j != i {
                cell.clip(&site, &sites[j], j);
            }
        }
        // Unvisited sites lie at least `ring * size` away; none of them can
        // cut the cell once that exceeds twice its circumradius about the site.
        let reach = 2.0 * cell.max_distance_from(&site);
        if ring as f64 * grid.size >= reach {
            break;
        }
    }
    cell
}

/// Draws a point uniformly from cell `cell_index` by rejection from its
/// bounding box.
pub fn uniform_point_in_cell<R: Rng + ?Sized>(
    adjacency: &VoronoiAdjacency,
    cell_index: usize,
    rng: &mut R,
) -> Result<Point2D> {
    let cell = adjacency.cells.get(cell_index).ok_or_else(|| {
        Error::Parameter(format!(
            "cell index {cell_index} out of range for {} cells",
            adjacency.len()
        ))
    })?;
    if cell.area() <= 0.0 {
        return Err(Error::Geometry(format!("cell {cell_index} has zero area")));
    }
    let (lo, hi) = cell.bounding_box();
    for _ in 0..MAX_REJECTION_DRAWS {
        let q = Point2D::new(rng.random_range(lo.x..=hi.x), rng.random_range(lo.y..=hi.y));
        if adjacency.cell_contains(cell_index, &q) {
            return Ok(q);
        }
    }
    Err(Error::Geometry(format!(
        "rejection sampling in cell {cell_index} exceeded {MAX_REJECTION_DRAWS} draws"
    )))
}
