//! Exact 2D geometric kernels.
//!
//! Everything here works on axis-aligned rectangular cells and oriented
//! half-planes. A [`HalfPlane`] describes the fluid region
//! `{ x : (x - anchor) . normal + offset <= 0 }`, so the normal points out of
//! the fluid and a positive offset pushes the line towards the fluid side.
//! With the anchor at the cell center, an empty cell has `offset >= d/2` and a
//! full cell `offset <= -d/2`, where `d` is the cell diagonal.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::GeometryError;

/// Plain 2-vector used for positions and directions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Unit vector in the same direction, or `None` for a (near) zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        if n > 1e-300 && n.is_finite() {
            Some(Vec2::new(self.x / n, self.y / n))
        } else {
            None
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Axis-aligned rectangle `[min.x, max.x] x [min.y, max.y]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub min: Vec2,
    pub max: Vec2,
}

impl Rect {
    pub fn new(min: Vec2, max: Vec2) -> Self {
        Self { min, max }
    }

    pub fn from_center(center: Vec2, width: f64, height: f64) -> Self {
        let h = Vec2::new(0.5 * width, 0.5 * height);
        Self {
            min: center - h,
            max: center + h,
        }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    #[inline]
    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    #[inline]
    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    #[inline]
    pub fn center(&self) -> Vec2 {
        Vec2::new(
            0.5 * (self.min.x + self.max.x),
            0.5 * (self.min.y + self.max.y),
        )
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    /// Counterclockwise polygon with the same corners.
    pub fn to_polygon(&self) -> ConvexPolygon {
        ConvexPolygon {
            vertices: vec![
                self.min,
                Vec2::new(self.max.x, self.min.y),
                self.max,
                Vec2::new(self.min.x, self.max.y),
            ],
        }
    }

    fn is_valid(&self) -> bool {
        self.min.is_finite() && self.max.is_finite() && self.width() > 0.0 && self.height() > 0.0
    }
}

/// Oriented line with the fluid on its negative side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    /// Unit normal pointing out of the fluid.
    pub normal: Vec2,
    /// Signed offset measured from `anchor`.
    pub offset: f64,
    /// Reference point of the offset, normally a cell center.
    pub anchor: Vec2,
}

impl HalfPlane {
    /// Builds a half-plane, normalizing `normal`.
    pub fn new(normal: Vec2, offset: f64, anchor: Vec2) -> Result<Self, GeometryError> {
        if !normal.is_finite() || !offset.is_finite() || !anchor.is_finite() {
            return Err(GeometryError::InvalidArgument(
                "half-plane with non-finite data".into(),
            ));
        }
        let normal = normal.normalized().ok_or(GeometryError::DegenerateNormal)?;
        Ok(Self {
            normal,
            offset,
            anchor,
        })
    }

    /// Signed level of the line function at `p`; the fluid is where this is `<= 0`.
    #[inline]
    pub fn level(&self, p: Vec2) -> f64 {
        (p - self.anchor).dot(self.normal) + self.offset
    }

    #[inline]
    pub fn contains(&self, p: Vec2) -> bool {
        self.level(p) <= 0.0
    }

    /// The same line expressed relative to another anchor.
    #[inline]
    pub fn reanchored(&self, anchor: Vec2) -> HalfPlane {
        HalfPlane {
            normal: self.normal,
            offset: self.offset + (anchor - self.anchor).dot(self.normal),
            anchor,
        }
    }

    /// The complementary half-plane (flipped normal, negated offset).
    pub fn complement(&self) -> HalfPlane {
        HalfPlane {
            normal: -self.normal,
            offset: -self.offset,
            anchor: self.anchor,
        }
    }
}

/// Convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvexPolygon {
    pub vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        Self { vertices }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Signed shoelace area, evaluated relative to the first vertex.
    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            return 0.0;
        }
        let p0 = self.vertices[0];
        let mut twice = 0.0;
        for w in self.vertices[1..].windows(2) {
            let a = w[0] - p0;
            let b = w[1] - p0;
            twice += a.x * b.y - a.y * b.x;
        }
        0.5 * twice
    }
}

/// Fraction of the unit square `[0,1]^2` below `c1 u + c2 w = s` for
/// `c1, c2 >= 0`, written in the branch form that stays well conditioned when
/// one coefficient vanishes.
#[inline]
fn unit_square_fraction(c1: f64, c2: f64, s: f64) -> f64 {
    let (a, b) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
    let total = a + b;
    if s <= 0.0 {
        return 0.0;
    }
    if s >= total {
        return 1.0;
    }
    let lower = |s: f64| {
        if s < a {
            s * s / (2.0 * a * b)
        } else {
            (s - 0.5 * a) / b
        }
    };
    if s <= 0.5 * total {
        lower(s)
    } else {
        1.0 - lower(total - s)
    }
}

/// Inverse of [`unit_square_fraction`] for `frac` in `[0, 1]`.
#[inline]
fn unit_square_level(c1: f64, c2: f64, frac: f64) -> f64 {
    let (a, b) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
    let total = a + b;
    let lower = |f: f64| {
        if f < 0.5 * a / b {
            (2.0 * a * b * f).sqrt()
        } else {
            f * b + 0.5 * a
        }
    };
    if frac <= 0.5 {
        lower(frac)
    } else {
        total - lower(1.0 - frac)
    }
}

/// Fluid fraction of a `width x height` rectangle for the unit `normal` and an
/// offset measured from the rectangle center. No argument checking.
#[inline]
pub(crate) fn rect_fraction(normal: Vec2, offset: f64, width: f64, height: f64) -> f64 {
    let c1 = normal.x.abs() * width;
    let c2 = normal.y.abs() * height;
    unit_square_fraction(c1, c2, 0.5 * (c1 + c2) - offset)
}

/// Offset (from the rectangle center) that makes [`rect_fraction`] equal to
/// `frac`. Empty and full targets map to `+-` half the diagonal.
#[inline]
pub(crate) fn rect_offset(normal: Vec2, frac: f64, width: f64, height: f64) -> f64 {
    if frac <= 0.0 {
        return 0.5 * width.hypot(height);
    }
    if frac >= 1.0 {
        return -0.5 * width.hypot(height);
    }
    let c1 = normal.x.abs() * width;
    let c2 = normal.y.abs() * height;
    0.5 * (c1 + c2) - unit_square_level(c1, c2, frac)
}

/// Area fraction of `cell` lying in the fluid half-plane of `h`.
pub fn area_fraction_halfplane(h: &HalfPlane, cell: &Rect) -> Result<f64, GeometryError> {
    if !h.normal.is_finite() || !h.offset.is_finite() || !h.anchor.is_finite() {
        return Err(GeometryError::InvalidArgument(
            "half-plane with non-finite data".into(),
        ));
    }
    if !cell.is_valid() {
        return Err(GeometryError::InvalidArgument(format!(
            "cell must have finite positive extents, got {cell:?}"
        )));
    }
    let local = h.reanchored(cell.center());
    Ok(rect_fraction(
        local.normal,
        local.offset,
        cell.width(),
        cell.height(),
    ))
}

/// Positions a line with the given unit normal so that it cuts exactly
/// `target` of `cell`. The result is anchored at the cell center.
pub fn position_plic(normal: Vec2, target: f64, cell: &Rect) -> Result<HalfPlane, GeometryError> {
    const SLACK: f64 = 1e-12;
    if !target.is_finite() || !(-SLACK..=1.0 + SLACK).contains(&target) {
        return Err(GeometryError::InvalidArgument(format!(
            "target fraction {target} outside [0, 1]"
        )));
    }
    if !cell.is_valid() {
        return Err(GeometryError::InvalidArgument(format!(
            "cell must have finite positive extents, got {cell:?}"
        )));
    }
    if !normal.is_finite() {
        return Err(GeometryError::InvalidArgument("non-finite normal".into()));
    }
    let normal = normal.normalized().ok_or(GeometryError::DegenerateNormal)?;
    let target = target.clamp(0.0, 1.0);
    Ok(HalfPlane {
        normal,
        offset: rect_offset(normal, target, cell.width(), cell.height()),
        anchor: cell.center(),
    })
}

/// Intersection of a convex polygon with the fluid side of `h`
/// (successive-edge clipping).
pub fn clip_polygon_halfplane(p: &ConvexPolygon, h: &HalfPlane) -> ConvexPolygon {
    let verts = &p.vertices;
    let n = verts.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return ConvexPolygon::default();
    }
    let mut prev = verts[n - 1];
    let mut prev_level = h.level(prev);
    for &cur in verts {
        let cur_level = h.level(cur);
        let prev_in = prev_level <= 0.0;
        let cur_in = cur_level <= 0.0;
        if prev_in != cur_in {
            let t = prev_level / (prev_level - cur_level);
            push_distinct(&mut out, prev + (cur - prev) * t);
        }
        if cur_in {
            push_distinct(&mut out, cur);
        }
        prev = cur;
        prev_level = cur_level;
    }
    if out.len() > 1 && out[0] == out[out.len() - 1] {
        out.pop();
    }
    if out.len() < 3 {
        out.clear();
    }
    ConvexPolygon { vertices: out }
}

fn push_distinct(out: &mut Vec<Vec2>, p: Vec2) {
    if out.last() != Some(&p) {
        out.push(p);
    }
}

const CIRCLE_DEPTH_CAP: u32 = 20;

/// Area fraction of `cell` covered by the disk of `radius` around `center`.
///
/// The cell is subdivided as a quadtree. Sub-cells that the distance bounds
/// prove full or empty are short-circuited. Once a sub-cell is smaller than
/// the radius and the circle enters and leaves it exactly once, its covered
/// area is the chord-clipped polygon plus the circular segment, both in
/// closed form. The depth cap is a safety net for tangencies.
pub fn circle_cell_fraction(center: Vec2, radius: f64, cell: &Rect) -> f64 {
    if !(radius > 0.0) || !cell.is_valid() || !center.is_finite() {
        return 0.0;
    }
    (disk_rect_area(center, radius, cell, 0) / cell.area()).clamp(0.0, 1.0)
}

fn disk_rect_area(c: Vec2, r: f64, rect: &Rect, depth: u32) -> f64 {
    let r2 = r * r;
    let near = Vec2::new(
        (rect.min.x - c.x).max(0.0).max(c.x - rect.max.x),
        (rect.min.y - c.y).max(0.0).max(c.y - rect.max.y),
    );
    if near.dot(near) >= r2 {
        return 0.0;
    }
    let far = Vec2::new(
        (c.x - rect.min.x).abs().max((rect.max.x - c.x).abs()),
        (c.y - rect.min.y).abs().max((rect.max.y - c.y).abs()),
    );
    if far.dot(far) <= r2 {
        return rect.area();
    }
    if rect.diagonal() < r {
        if let Some(area) = single_arc_area(c, r, rect) {
            return area;
        }
    }
    if depth >= CIRCLE_DEPTH_CAP {
        // Tangent-line approximation; only reached on pathological tangencies.
        let rc = rect.center();
        return match (rc - c).normalized() {
            Some(n) => {
                rect.area() * rect_fraction(n, (rc - c).norm() - r, rect.width(), rect.height())
            }
            None => rect.area(),
        };
    }
    let m = rect.center();
    let quads = [
        Rect::new(rect.min, m),
        Rect::new(Vec2::new(m.x, rect.min.y), Vec2::new(rect.max.x, m.y)),
        Rect::new(Vec2::new(rect.min.x, m.y), Vec2::new(m.x, rect.max.y)),
        Rect::new(m, rect.max),
    ];
    quads
        .iter()
        .map(|q| disk_rect_area(c, r, q, depth + 1))
        .sum()
}

/// Covered area when the circle crosses the rectangle boundary at exactly two
/// points; `None` otherwise.
fn single_arc_area(c: Vec2, r: f64, rect: &Rect) -> Option<f64> {
    let scale = rect.diagonal();
    let mut pts: Vec<Vec2> = Vec::with_capacity(4);
    let mut add = |p: Vec2| {
        if !pts.iter().any(|q| (*q - p).norm() <= 1e-13 * scale) {
            pts.push(p);
        }
    };
    let r2 = r * r;
    for y in [rect.min.y, rect.max.y] {
        let rhs = r2 - (y - c.y) * (y - c.y);
        if rhs >= 0.0 {
            let s = rhs.sqrt();
            for x in [c.x - s, c.x + s] {
                if x >= rect.min.x && x <= rect.max.x {
                    add(Vec2::new(x, y));
                }
            }
        }
    }
    for x in [rect.min.x, rect.max.x] {
        let rhs = r2 - (x - c.x) * (x - c.x);
        if rhs >= 0.0 {
            let s = rhs.sqrt();
            for y in [c.y - s, c.y + s] {
                if y >= rect.min.y && y <= rect.max.y {
                    add(Vec2::new(x, y));
                }
            }
        }
    }
    if pts.len() != 2 {
        return None;
    }
    let (p, q) = (pts[0], pts[1]);
    let chord = (q - p).norm();
    if chord <= 1e-13 * scale {
        return None;
    }
    let mid = (p + q) * 0.5;
    let n = (mid - c).normalized()?;
    let chord_side = HalfPlane {
        normal: n,
        offset: -(mid - c).dot(n),
        anchor: c,
    };
    let inner = clip_polygon_halfplane(&rect.to_polygon(), &chord_side).area();
    let phi = 2.0 * (0.5 * chord / r).min(1.0).asin();
    Some(inner + 0.5 * r2 * phi_minus_sin(phi))
}

/// `phi - sin(phi)` without cancellation for small angles.
fn phi_minus_sin(phi: f64) -> f64 {
    if phi < 1e-2 {
        let p2 = phi * phi;
        phi * p2 / 6.0 * (1.0 - p2 / 20.0 * (1.0 - p2 / 42.0 * (1.0 - p2 / 72.0)))
    } else {
        phi - phi.sin()
    }
}
