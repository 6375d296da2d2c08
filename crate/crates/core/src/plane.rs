//! The incidence structure of PG(2,q).
//!
//! Points and lines are homogeneous triples normalized so that the first
//! nonzero coordinate is 1, ordered lexicographically on the coordinate
//! indices. Both directions of incidence are precomputed: a bitmask of
//! points per line for counting, plus join/meet lookup tables, since
//! tangent counting sits in the innermost search loops.

use crate::bits::Mask;
use crate::gf::{Field, FieldError};
use std::sync::OnceLock;

pub type PointId = u16;
pub type LineId = u16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneError {
    Field(FieldError),
    OrderTooLarge(u32),
    EqualPoints,
    EqualLines,
}

impl std::fmt::Display for PlaneError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlaneError::Field(e) => write!(f, "{}", e),
            PlaneError::OrderTooLarge(q) => write!(f, "plane order {} not supported (q <= 13)", q),
            PlaneError::EqualPoints => write!(f, "the two points coincide"),
            PlaneError::EqualLines => write!(f, "the two lines coincide"),
        }
    }
}

impl std::error::Error for PlaneError {}

impl From<FieldError> for PlaneError {
    fn from(e: FieldError) -> Self {
        PlaneError::Field(e)
    }
}

pub struct Plane {
    pub field: Field,
    pub q: u32,
    /// q^2 + q + 1, the number of points and of lines.
    pub n: usize,
    points: Vec<[u8; 3]>,
    lines: Vec<[u8; 3]>,
    point_id: Vec<u16>,
    line_id: Vec<u16>,
    lines_through: Vec<Vec<LineId>>,
    points_on: Vec<Vec<PointId>>,
    line_mask: Vec<Mask>,
    pencil_mask: Vec<Mask>,
    join_t: Vec<LineId>,
    meet_t: Vec<PointId>,
    /// Point permutation induced by the Frobenius x -> x^p.
    frob_perm: Vec<PointId>,
    pub(crate) canon_tables: OnceLock<crate::collineation::CanonTables>,
}

impl std::fmt::Debug for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Plane(PG(2,{}))", self.q)
    }
}

impl Plane {
    pub fn new(field: Field) -> Result<Plane, PlaneError> {
        let q = field.q;
        if q > 13 {
            return Err(PlaneError::OrderTooLarge(q));
        }
        let n = (q * q + q + 1) as usize;
        let qs = q as usize;

        // normalized representatives, in lexicographic coordinate order
        let mut points: Vec<[u8; 3]> = Vec::with_capacity(n);
        for a in 0..qs {
            for b in 0..qs {
                for c in 0..qs {
                    let v = [a as u8, b as u8, c as u8];
                    if v == [0, 0, 0] {
                        continue;
                    }
                    if normalize(&field, v) == v {
                        points.push(v);
                    }
                }
            }
        }
        debug_assert_eq!(points.len(), n);
        let lines = points.clone();

        let code = |v: [u8; 3]| -> usize { (v[0] as usize * qs + v[1] as usize) * qs + v[2] as usize };
        let mut point_id = vec![u16::MAX; qs * qs * qs];
        let mut line_id = vec![u16::MAX; qs * qs * qs];
        for (i, &v) in points.iter().enumerate() {
            point_id[code(v)] = i as u16;
        }
        for (i, &v) in lines.iter().enumerate() {
            line_id[code(v)] = i as u16;
        }

        let dot = |a: [u8; 3], b: [u8; 3]| -> u8 {
            let f = &field;
            f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]))
        };

        let mut points_on = vec![Vec::with_capacity(qs + 1); n];
        let mut lines_through = vec![Vec::with_capacity(qs + 1); n];
        let mut line_mask = vec![Mask::EMPTY; n];
        let mut pencil_mask = vec![Mask::EMPTY; n];
        for li in 0..n {
            for pi in 0..n {
                if dot(lines[li], points[pi]) == 0 {
                    points_on[li].push(pi as u16);
                    lines_through[pi].push(li as u16);
                    line_mask[li].set(pi as u16);
                    pencil_mask[pi].set(li as u16);
                }
            }
        }

        let cross = |a: [u8; 3], b: [u8; 3]| -> [u8; 3] {
            let f = &field;
            [
                f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
                f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
                f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
            ]
        };

        let mut join_t = vec![u16::MAX; n * n];
        let mut meet_t = vec![u16::MAX; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let c = normalize(&field, cross(points[i], points[j]));
                join_t[i * n + j] = line_id[code(c)];
                let m = normalize(&field, cross(lines[i], lines[j]));
                meet_t[i * n + j] = point_id[code(m)];
            }
        }

        let mut frob_perm = vec![0u16; n];
        for (i, &v) in points.iter().enumerate() {
            let w = normalize(&field, [field.frob(v[0], 1), field.frob(v[1], 1), field.frob(v[2], 1)]);
            frob_perm[i] = point_id[code(w)];
        }

        Ok(Plane {
            field,
            q,
            n,
            points,
            lines,
            point_id,
            line_id,
            lines_through,
            points_on,
            line_mask,
            pencil_mask,
            join_t,
            meet_t,
            frob_perm,
            canon_tables: OnceLock::new(),
        })
    }

    pub fn with_order(q: u32) -> Result<Plane, PlaneError> {
        Ok(Plane::new(Field::with_order(q)?)?)
    }

    #[inline]
    pub fn point_coords(&self, p: PointId) -> [u8; 3] {
        self.points[p as usize]
    }

    #[inline]
    pub fn line_coeffs(&self, l: LineId) -> [u8; 3] {
        self.lines[l as usize]
    }

    /// Id of the normalized point with the given homogeneous coordinates.
    pub fn point_from_coords(&self, v: [u8; 3]) -> Option<PointId> {
        if v == [0, 0, 0] {
            return None;
        }
        let w = normalize(&self.field, v);
        let qs = self.q as usize;
        let id = self.point_id[(w[0] as usize * qs + w[1] as usize) * qs + w[2] as usize];
        Some(id)
    }

    #[inline]
    pub(crate) fn point_id_normalized(&self, w: [u8; 3]) -> PointId {
        let qs = self.q as usize;
        self.point_id[(w[0] as usize * qs + w[1] as usize) * qs + w[2] as usize]
    }

    pub fn line_from_coeffs(&self, v: [u8; 3]) -> Option<LineId> {
        if v == [0, 0, 0] {
            return None;
        }
        let w = normalize(&self.field, v);
        let qs = self.q as usize;
        Some(self.line_id[(w[0] as usize * qs + w[1] as usize) * qs + w[2] as usize])
    }

    #[inline]
    pub fn lines_through(&self, p: PointId) -> &[LineId] {
        &self.lines_through[p as usize]
    }

    #[inline]
    pub fn points_on(&self, l: LineId) -> &[PointId] {
        &self.points_on[l as usize]
    }

    #[inline]
    pub fn line_mask(&self, l: LineId) -> &Mask {
        &self.line_mask[l as usize]
    }

    #[inline]
    pub fn pencil_mask(&self, p: PointId) -> &Mask {
        &self.pencil_mask[p as usize]
    }

    #[inline]
    pub fn incident(&self, p: PointId, l: LineId) -> bool {
        self.line_mask[l as usize].test(p)
    }

    pub fn line_through(&self, p: PointId, r: PointId) -> Result<LineId, PlaneError> {
        if p == r {
            return Err(PlaneError::EqualPoints);
        }
        Ok(self.join_t[p as usize * self.n + r as usize])
    }

    #[inline]
    pub(crate) fn join(&self, p: PointId, r: PointId) -> LineId {
        self.join_t[p as usize * self.n + r as usize]
    }

    pub fn meet(&self, l1: LineId, l2: LineId) -> Result<PointId, PlaneError> {
        if l1 == l2 {
            return Err(PlaneError::EqualLines);
        }
        Ok(self.meet_t[l1 as usize * self.n + l2 as usize])
    }

    #[inline]
    pub(crate) fn meet_raw(&self, l1: LineId, l2: LineId) -> PointId {
        self.meet_t[l1 as usize * self.n + l2 as usize]
    }

    #[inline]
    pub fn collinear(&self, a: PointId, b: PointId, c: PointId) -> bool {
        if a == b || a == c || b == c {
            return true;
        }
        self.line_mask[self.join(a, b) as usize].test(c)
    }

    #[inline]
    pub fn frobenius_point(&self, p: PointId) -> PointId {
        self.frob_perm[p as usize]
    }

    pub fn full_mask(&self) -> Mask {
        Mask::all_below(self.n)
    }

    pub fn format_point(&self, p: PointId) -> String {
        let v = self.points[p as usize];
        format!(
            "{}:{}:{}",
            self.field.format_elem(v[0]),
            self.field.format_elem(v[1]),
            self.field.format_elem(v[2])
        )
    }

    /// Exhaustive incidence-axiom check, used by the property suites.
    /// Covers point/line counts, degrees, unique joins and meets, and the
    /// self-duality of the structure.
    pub fn check_axioms(&self) {
        let n = self.n;
        let q = self.q as usize;
        assert_eq!(self.points.len(), n);
        assert_eq!(self.lines.len(), n);
        for l in 0..n {
            assert_eq!(self.points_on[l].len(), q + 1, "line degree");
            assert_eq!(self.line_mask[l].count() as usize, q + 1);
        }
        for p in 0..n {
            assert_eq!(self.lines_through[p].len(), q + 1, "point degree");
        }
        for a in 0..n as u16 {
            for b in (a + 1)..n as u16 {
                let l = self.join(a, b);
                assert!(self.incident(a, l) && self.incident(b, l));
                // uniqueness: no other line contains both
                let common = self.pencil_mask[a as usize].and_count(&self.pencil_mask[b as usize]);
                assert_eq!(common, 1, "two points on a unique line");
                let m = self.meet_raw(a, b);
                let common_pts = self.line_mask[a as usize].and_count(&self.line_mask[b as usize]);
                assert_eq!(common_pts, 1, "two lines meet in a unique point");
                assert!(self.incident(m, a) && self.incident(m, b));
            }
        }
    }
}

pub(crate) fn normalize(field: &Field, v: [u8; 3]) -> [u8; 3] {
    for i in 0..3 {
        if v[i] != 0 {
            if v[i] == 1 {
                return v;
            }
            let s = field.inv(v[i]);
            let mut w = [0u8; 3];
            for k in i..3 {
                w[k] = field.mul(v[k], s);
            }
            return w;
        }
    }
    v
}
