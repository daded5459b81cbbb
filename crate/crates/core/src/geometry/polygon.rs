use thiserror::Error;

pub type Point = [f64; 2];

/// Half-plane `a1*s1 + a2*s2 <= b` in outcome units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearConstraint {
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
}

impl LinearConstraint {
    pub const fn new(a1: f64, a2: f64, b: f64) -> Self {
        LinearConstraint { a1, a2, b }
    }

    pub fn slack(&self, p: Point) -> f64 {
        self.b - (self.a1 * p[0] + self.a2 * p[1])
    }

    fn norm(&self) -> f64 {
        self.a1.hypot(self.a2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("outcome space is empty")]
    Empty,
    #[error("outcome space is unbounded")]
    Unbounded,
    #[error("constraint {0} has a non-finite coefficient")]
    NonFinite(usize),
    #[error("resolution must be at least {min}, got {got}")]
    Resolution { min: usize, got: usize },
}

/// Bounded convex feasible region of the outcome space.
///
/// Vertices are computed once at construction and kept counterclockwise,
/// starting from the lexicographically smallest `(s1, s2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePolygon {
    constraints: Vec<LinearConstraint>,
    vertices: Vec<Point>,
    scale: f64,
}

impl FeasiblePolygon {
    pub fn new(constraints: Vec<LinearConstraint>) -> Result<Self, GeometryError> {
        for (i, c) in constraints.iter().enumerate() {
            if !(c.a1.is_finite() && c.a2.is_finite() && c.b.is_finite()) {
                return Err(GeometryError::NonFinite(i));
            }
        }
        let scale = constraints.iter().fold(1.0_f64, |m, c| m.max(c.b.abs()));
        let tol = 1e-9 * scale;

        // Zero-normal rows are either vacuous or infeasible.
        let mut rows = Vec::with_capacity(constraints.len());
        for c in &constraints {
            let n = c.norm();
            if n == 0.0 {
                if c.b < -tol {
                    return Err(GeometryError::Empty);
                }
            } else {
                rows.push(*c);
            }
        }
        if recession_direction(&rows).is_some() {
            // infeasibility takes precedence over an open recession cone
            return Err(if is_empty(&rows, tol) {
                GeometryError::Empty
            } else {
                GeometryError::Unbounded
            });
        }
        let points = candidate_vertices(&rows, tol);
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        let vertices = convex_hull(&points, tol);
        Ok(FeasiblePolygon {
            constraints,
            vertices,
            scale,
        })
    }

    /// `{s1 >= 0, s2 >= 0, s1 + s2 <= budget}`.
    pub fn budget(budget: f64) -> Result<Self, GeometryError> {
        Self::new(vec![
            LinearConstraint::new(-1.0, 0.0, 0.0),
            LinearConstraint::new(0.0, -1.0, 0.0),
            LinearConstraint::new(1.0, 1.0, budget),
        ])
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// `max(|b|, 1)` over all constraints.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Feasibility/degeneracy tolerance, `1e-9 * scale`.
    pub fn tolerance(&self) -> f64 {
        1e-9 * self.scale
    }

    pub fn contains(&self, p: Point) -> bool {
        let tol = self.tolerance();
        self.constraints
            .iter()
            .all(|c| c.slack(p) >= -tol * c.norm().max(1.0))
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    /// Boundary segments in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        let count = if n < 2 { 0 } else if n == 2 { 1 } else { n };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Mirror image with `s1` and `s2` exchanged.
    pub fn transposed(&self) -> Self {
        let constraints = self
            .constraints
            .iter()
            .map(|c| LinearConstraint::new(c.a2, c.a1, c.b))
            .collect();
        Self::new(constraints).expect("transpose preserves validity")
    }

    /// Pareto-efficient boundary chain: from the vertex maximizing `s2`
    /// (ties broken by larger `s1`) clockwise to the vertex maximizing `s1`.
    pub fn efficient_chain(&self) -> Vec<Point> {
        efficient_chain(&self.vertices)
    }
}

fn is_empty(rows: &[LinearConstraint], tol: f64) -> bool {
    // Bounding the region with a large box leaves emptiness unchanged.
    let big = rows.iter().fold(1.0_f64, |m, c| m.max(c.b.abs())) * 1e6;
    let mut boxed = rows.to_vec();
    boxed.extend([
        LinearConstraint::new(1.0, 0.0, big),
        LinearConstraint::new(-1.0, 0.0, big),
        LinearConstraint::new(0.0, 1.0, big),
        LinearConstraint::new(0.0, -1.0, big),
    ]);
    candidate_vertices(&boxed, tol).is_empty()
}

/// A nonzero direction `v` with `a·v <= 0` for every row, if one exists.
///
/// The recession cone of a 2-D polyhedron is nontrivial iff one of its
/// boundary rays, all of which are orthogonal to some row normal, lies in it.
fn recession_direction(rows: &[LinearConstraint]) -> Option<Point> {
    if rows.is_empty() {
        return Some([1.0, 0.0]);
    }
    for r in rows {
        let n = r.norm();
        let perp = [-r.a2 / n, r.a1 / n];
        for dir in [perp, [-perp[0], -perp[1]]] {
            if rows
                .iter()
                .all(|c| (c.a1 * dir[0] + c.a2 * dir[1]) / c.norm() <= 1e-12)
            {
                return Some(dir);
            }
        }
    }
    None
}

fn candidate_vertices(rows: &[LinearConstraint], tol: f64) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            let (r, s) = (rows[i], rows[j]);
            let det = r.a1 * s.a2 - r.a2 * s.a1;
            if det.abs() <= 1e-14 * r.norm() * s.norm() {
                continue;
            }
            let x = (r.b * s.a2 - r.a2 * s.b) / det;
            let y = (r.a1 * s.b - r.b * s.a1) / det;
            let p = [x, y];
            if rows.iter().all(|c| c.slack(p) >= -tol * c.norm().max(1.0)) {
                out.push(p);
            }
        }
    }
    out
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise convex hull (monotone chain) with near-duplicate and
/// collinear points removed. Starts at the lexicographically smallest point.
pub fn convex_hull(points: &[Point], tol: f64) -> Vec<Point> {
    let mut pts: Vec<Point> = points.iter().copied().filter(|p| p[0].is_finite() && p[1].is_finite()).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut uniq: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        if !uniq
            .iter()
            .any(|q| (q[0] - p[0]).abs() <= tol && (q[1] - p[1]).abs() <= tol)
        {
            uniq.push(p);
        }
    }
    if uniq.len() <= 2 {
        return uniq;
    }
    // collinearity threshold scaled by the point spread
    let span = uniq
        .iter()
        .fold(0.0_f64, |m, p| m.max(p[0].abs()).max(p[1].abs()))
        .max(1.0);
    let eps = tol * span;
    let mut lower: Vec<Point> = Vec::new();
    for &p in &uniq {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in uniq.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Clips a convex polygon (counterclockwise, possibly degenerate) to the
/// half-plane `a1*x + a2*y <= b`.
pub fn clip_half_plane(poly: &[Point], a1: f64, a2: f64, b: f64) -> Vec<Point> {
    let n = poly.len();
    if n == 0 {
        return Vec::new();
    }
    let side = |p: Point| b - (a1 * p[0] + a2 * p[1]);
    if n == 1 {
        return if side(poly[0]) >= 0.0 { poly.to_vec() } else { Vec::new() };
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let (fc, fn_) = (side(cur), side(next));
        if fc >= 0.0 {
            out.push(cur);
        }
        if (fc >= 0.0) != (fn_ >= 0.0) {
            let t = fc / (fc - fn_);
            out.push([cur[0] + t * (next[0] - cur[0]), cur[1] + t * (next[1] - cur[1])]);
        }
    }
    out
}

/// Shoelace area of an ordered vertex list. Fewer than three vertices give 0.
pub fn polygon_area(vertices: &[Point]) -> f64 {
    if vertices.len() < 3 {
        return 0.0;
    }
    let n = vertices.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (p, q) = (vertices[i], vertices[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    (twice / 2.0).abs()
}

pub fn polygon_vertices(poly: &FeasiblePolygon) -> Vec<Point> {
    poly.vertices().to_vec()
}

pub(crate) fn efficient_chain(ccw: &[Point]) -> Vec<Point> {
    if ccw.is_empty() {
        return Vec::new();
    }
    let n = ccw.len();
    let by = |k: usize, j: usize| {
        move |a: &usize, b: &usize| {
            ccw[*a][k]
                .total_cmp(&ccw[*b][k])
                .then(ccw[*a][j].total_cmp(&ccw[*b][j]))
        }
    };
    let top = (0..n).max_by(by(1, 0)).unwrap();
    let right = (0..n).max_by(by(0, 1)).unwrap();
    // walk clockwise (decreasing index) from top to right
    let mut chain = vec![ccw[top]];
    let mut i = top;
    while i != right {
        i = (i + n - 1) % n;
        chain.push(ccw[i]);
    }
    chain
}

/// Evenly spaced allocations along the Pareto-efficient boundary, ordered
/// from the `s2`-maximal end to the `s1`-maximal end, endpoints included.
pub fn efficient_frontier(poly: &FeasiblePolygon, resolution: usize) -> Result<Vec<Point>, GeometryError> {
    if resolution < 2 {
        return Err(GeometryError::Resolution { min: 2, got: resolution });
    }
    let chain = poly.efficient_chain();
    let seg_len: Vec<f64> = chain
        .windows(2)
        .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
        .collect();
    let total: f64 = seg_len.iter().sum();
    if total == 0.0 {
        return Ok(vec![chain[0]; resolution]);
    }
    let mut out = Vec::with_capacity(resolution);
    let mut seg = 0;
    let mut start = 0.0;
    for k in 0..resolution {
        if k + 1 == resolution {
            out.push(*chain.last().unwrap());
            break;
        }
        let target = total * k as f64 / (resolution - 1) as f64;
        while seg + 1 < seg_len.len() && start + seg_len[seg] < target {
            start += seg_len[seg];
            seg += 1;
        }
        let t = if seg_len[seg] > 0.0 {
            ((target - start) / seg_len[seg]).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (a, b) = (chain[seg], chain[seg + 1]);
        out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
    }
    Ok(out)
}
