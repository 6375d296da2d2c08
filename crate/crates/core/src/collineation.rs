//! The collineation groups PGL(3,q) and PGammaL(3,q) acting on PG(2,q):
//! equivalence testing, canonical forms and set stabilizers.
//!
//! Canonical forms use frame normalization: every collineation mapping
//! some 4-subset of the set in general position onto the standard frame
//! {(1:0:0),(0:1:0),(0:0:1),(1:1:1)} is a candidate, and the least
//! resulting point-id set (ties in the fixed set order) is the canonical
//! image. A set of s points yields C(s,4) subsets, h field automorphisms
//! and 24 frame reorderings; the reorderings are applied through
//! precomputed point permutations so the matrix work is done once per
//! subset. Counting the candidates that achieve the minimum gives the
//! stabilizer order for free, since transporters to the canonical image
//! biject with achieving candidates.
//!
//! Sets with no 4 points in general position are collinear, or one point
//! plus a collinear rest. These fall back to transporting the span onto a
//! standard line and minimizing over the induced PGL(2,q) (resp.
//! PGammaL(2,q)) permutation action, with the kernel of the restriction
//! accounted for exactly.

use crate::bits::Mask;
use crate::gf::Field;
use crate::groups;
use crate::plane::{normalize, Plane, PointId};
use serde::Serialize;
use std::collections::BTreeMap;

pub type Matrix = [[u8; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    Pgl,
    PGammaL,
}

impl GroupKind {
    pub fn label(&self) -> &'static str {
        match self {
            GroupKind::Pgl => "pgl",
            GroupKind::PGammaL => "pgammal",
        }
    }
}

/// A scalar-normalized invertible 3x3 matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Projectivity {
    pub mat: Matrix,
}

impl Projectivity {
    pub fn into_collineation(self) -> Collineation {
        Collineation { mat: self.mat, frob: 0 }
    }
}

/// A collineation x -> M * x^(p^frob): Frobenius first, then the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Collineation {
    pub mat: Matrix,
    pub frob: u8,
}

impl Collineation {
    pub fn identity() -> Collineation {
        Collineation { mat: [[1, 0, 0], [0, 1, 0], [0, 0, 1]], frob: 0 }
    }

    pub fn normalized(mut self, field: &Field) -> Collineation {
        self.mat = mat_normalize(field, self.mat);
        self
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose(&self, field: &Field, other: &Collineation) -> Collineation {
        let m2 = mat_frob(field, other.mat, self.frob);
        Collineation {
            mat: mat_normalize(field, mat_mul(field, self.mat, m2)),
            frob: ((self.frob + other.frob) as u32 % field.h.max(1)) as u8,
        }
    }

    pub fn inverse(&self, field: &Field) -> Collineation {
        let h = field.h.max(1);
        let k = ((h - self.frob as u32) % h) as u8;
        let adj = mat_adjugate(field, self.mat);
        Collineation { mat: mat_normalize(field, mat_frob(field, adj, k)), frob: k }
    }

    pub fn apply(&self, plane: &Plane, p: PointId) -> PointId {
        let f = &plane.field;
        let mut v = plane.point_coords(p);
        if self.frob > 0 {
            for c in v.iter_mut() {
                *c = f.frob(*c, self.frob);
            }
        }
        let w = mat_vec(f, self.mat, v);
        plane.point_id_normalized(normalize(f, w))
    }

    pub fn apply_set(&self, plane: &Plane, set: &Mask) -> Mask {
        let mut out = Mask::EMPTY;
        for p in set.iter() {
            out.set(self.apply(plane, p));
        }
        out
    }

    /// The permutation induced on the points.
    pub fn point_perm(&self, plane: &Plane) -> Vec<PointId> {
        (0..plane.n as u16).map(|p| self.apply(plane, p)).collect()
    }
}

pub fn mat_vec(f: &Field, m: Matrix, v: [u8; 3]) -> [u8; 3] {
    let mut out = [0u8; 3];
    for r in 0..3 {
        let mut acc = 0u8;
        for c in 0..3 {
            acc = f.add(acc, f.mul(m[r][c], v[c]));
        }
        out[r] = acc;
    }
    out
}

pub fn mat_mul(f: &Field, a: Matrix, b: Matrix) -> Matrix {
    let mut out = [[0u8; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            let mut acc = 0u8;
            for k in 0..3 {
                acc = f.add(acc, f.mul(a[r][k], b[k][c]));
            }
            out[r][c] = acc;
        }
    }
    out
}

pub fn mat_det(f: &Field, m: Matrix) -> u8 {
    let t1 = f.mul(m[0][0], f.sub(f.mul(m[1][1], m[2][2]), f.mul(m[1][2], m[2][1])));
    let t2 = f.mul(m[0][1], f.sub(f.mul(m[1][0], m[2][2]), f.mul(m[1][2], m[2][0])));
    let t3 = f.mul(m[0][2], f.sub(f.mul(m[1][0], m[2][1]), f.mul(m[1][1], m[2][0])));
    f.add(f.sub(t1, t2), t3)
}

pub fn mat_adjugate(f: &Field, m: Matrix) -> Matrix {
    let co = |r1: usize, c1: usize, r2: usize, c2: usize| f.sub(f.mul(m[r1][c1], m[r2][c2]), f.mul(m[r1][c2], m[r2][c1]));
    [
        [co(1, 1, 2, 2), f.neg(co(0, 1, 2, 2)), co(0, 1, 1, 2)],
        [f.neg(co(1, 0, 2, 2)), co(0, 0, 2, 2), f.neg(co(0, 0, 1, 2))],
        [co(1, 0, 2, 1), f.neg(co(0, 0, 2, 1)), co(0, 0, 1, 1)],
    ]
}

pub fn mat_frob(f: &Field, m: Matrix, k: u8) -> Matrix {
    if k == 0 {
        return m;
    }
    let mut out = m;
    for row in out.iter_mut() {
        for e in row.iter_mut() {
            *e = f.frob(*e, k);
        }
    }
    out
}

pub fn mat_normalize(f: &Field, m: Matrix) -> Matrix {
    for r in 0..3 {
        for c in 0..3 {
            if m[r][c] != 0 {
                if m[r][c] == 1 {
                    return m;
                }
                let s = f.inv(m[r][c]);
                let mut out = [[0u8; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        out[i][j] = f.mul(m[i][j], s);
                    }
                }
                return out;
            }
        }
    }
    m
}

/// |PGL(3,q)| = q^3 (q^3-1)(q^2-1); PGammaL multiplies by h.
pub fn group_order(q: u32, kind: GroupKind) -> u64 {
    let (_, h) = crate::gf::FieldSpec::for_order(q).map(|s| (s.p, s.h)).unwrap_or((q, 1));
    let q = q as u64;
    let pgl = q.pow(3) * (q.pow(3) - 1) * (q * q - 1);
    match kind {
        GroupKind::Pgl => pgl,
        GroupKind::PGammaL => pgl * h as u64,
    }
}

/// Matrix with columns scaled so that the standard frame maps to the
/// ordered tuple (a, b, c, d); the tuple must be in general position.
fn tuple_matrix(f: &Field, a: [u8; 3], b: [u8; 3], c: [u8; 3], d: [u8; 3]) -> Matrix {
    // solve [a b c] (x,y,z)^T = d by Cramer
    let m = [[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]];
    let det = mat_det(f, m);
    debug_assert!(det != 0);
    let inv_det = f.inv(det);
    let rep = |col: usize| -> u8 {
        let mut mm = m;
        for r in 0..3 {
            mm[r][col] = d[r];
        }
        f.mul(mat_det(f, mm), inv_det)
    };
    let (x, y, z) = (rep(0), rep(1), rep(2));
    debug_assert!(x != 0 && y != 0 && z != 0);
    [
        [f.mul(x, a[0]), f.mul(y, b[0]), f.mul(z, c[0])],
        [f.mul(x, a[1]), f.mul(y, b[1]), f.mul(z, c[1])],
        [f.mul(x, a[2]), f.mul(y, b[2]), f.mul(z, c[2])],
    ]
}

/// Matrix mapping the ordered tuple onto the standard frame.
fn tuple_to_frame_matrix(f: &Field, a: [u8; 3], b: [u8; 3], c: [u8; 3], d: [u8; 3]) -> Matrix {
    mat_adjugate(f, tuple_matrix(f, a, b, c, d))
}

/// Matrix mapping one general-position tuple onto another.
fn frame_to_frame(f: &Field, src: [[u8; 3]; 4], dst: [[u8; 3]; 4]) -> Matrix {
    let to_dst = tuple_matrix(f, dst[0], dst[1], dst[2], dst[3]);
    let from_src = tuple_to_frame_matrix(f, src[0], src[1], src[2], src[3]);
    mat_mul(f, to_dst, from_src)
}

/// Solve c = x*a + y*b for projective triples with a, b independent.
fn solve_two(f: &Field, a: [u8; 3], b: [u8; 3], c: [u8; 3]) -> (u8, u8) {
    for i in 0..3 {
        for j in (i + 1)..3 {
            let det = f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
            if det != 0 {
                let inv = f.inv(det);
                let x = f.mul(f.sub(f.mul(c[i], b[j]), f.mul(c[j], b[i])), inv);
                let y = f.mul(f.sub(f.mul(a[i], c[j]), f.mul(a[j], c[i])), inv);
                return (x, y);
            }
        }
    }
    unreachable!("dependent triples");
}

/// Matrix taking the collinear triple (a,b,c) to the collinear triple
/// (ta,tb,tc) and the off-span point d to td.
fn collinear_transport(
    f: &Field,
    a: [u8; 3],
    b: [u8; 3],
    c: [u8; 3],
    d: [u8; 3],
    ta: [u8; 3],
    tb: [u8; 3],
    tc: [u8; 3],
    td: [u8; 3],
) -> Matrix {
    let (x, y) = solve_two(f, a, b, c);
    let (u, v) = solve_two(f, ta, tb, tc);
    debug_assert!(x != 0 && y != 0 && u != 0 && v != 0);
    // M(a) = (u/x) ta, M(b) = (v/y) tb forces M(c) ~ tc
    let sa = f.mul(u, f.inv(x));
    let sb = f.mul(v, f.inv(y));
    let col = |p: [u8; 3], s: u8| [f.mul(p[0], s), f.mul(p[1], s), f.mul(p[2], s)];
    let (ca, cb, cd) = (col(ta, sa), col(tb, sb), td);
    let src = [[a[0], b[0], d[0]], [a[1], b[1], d[1]], [a[2], b[2], d[2]]];
    let dst = [[ca[0], cb[0], cd[0]], [ca[1], cb[1], cd[1]], [ca[2], cb[2], cd[2]]];
    mat_mul(f, dst, mat_adjugate(f, src))
}

struct InducedElt {
    col: Collineation,
    /// position permutation on the standard line, one row per frobenius power
    pos_perm: Vec<Vec<u8>>,
}

pub(crate) struct CanonTables {
    /// Point permutations of the 24 collineations permuting the frame set.
    frame_perms: Vec<Vec<PointId>>,
    frame_mats: Vec<Matrix>,
    std_line_pts: Vec<PointId>,
    std_line_pos: Vec<u8>,
    off_point: PointId,
    line_targets: [[u8; 3]; 4],
    single_target: [[u8; 3]; 4],
    induced: Vec<InducedElt>,
}

fn build_canon_tables(plane: &Plane) -> CanonTables {
    let f = &plane.field;
    let e1 = plane.point_from_coords([1, 0, 0]).unwrap();
    let e2 = plane.point_from_coords([0, 1, 0]).unwrap();
    let e3 = plane.point_from_coords([0, 0, 1]).unwrap();
    let e = plane.point_from_coords([1, 1, 1]).unwrap();
    let frame_ids = [e1, e2, e3, e];
    let coords = |p: PointId| plane.point_coords(p);

    let mut frame_perms = Vec::with_capacity(24);
    let mut frame_mats = Vec::with_capacity(24);
    let mut order = [0usize; 4];
    let mut perms_4 = Vec::new();
    permutations4(&mut order, 0, &mut perms_4);
    // identity ordering first
    perms_4.sort();
    for perm in &perms_4 {
        let tup: Vec<[u8; 3]> = perm.iter().map(|&i| coords(frame_ids[i])).collect();
        let m = tuple_matrix(f, tup[0], tup[1], tup[2], tup[3]);
        let table: Vec<PointId> = (0..plane.n as u16)
            .map(|p| plane.point_id_normalized(normalize(f, mat_vec(f, m, coords(p)))))
            .collect();
        frame_mats.push(m);
        frame_perms.push(table);
    }
    debug_assert_eq!(frame_perms[0], (0..plane.n as u16).collect::<Vec<_>>());

    let std_line = plane.line_from_coeffs([0, 0, 1]).unwrap();
    let std_line_pts: Vec<PointId> = plane.points_on(std_line).to_vec();
    let mut std_line_pos = vec![255u8; plane.n];
    for (i, &p) in std_line_pts.iter().enumerate() {
        std_line_pos[p as usize] = i as u8;
    }
    let off_point = plane.point_from_coords([0, 0, 1]).unwrap();
    debug_assert!(!plane.incident(off_point, std_line));

    let line_targets = [
        coords(std_line_pts[0]),
        coords(std_line_pts[1]),
        coords(std_line_pts[2]),
        coords(off_point),
    ];

    // a frame whose first point is the off point
    let mut single_target = [[0u8; 3]; 4];
    'outer: for b in 0..plane.n as u16 {
        for c in 0..plane.n as u16 {
            if plane.collinear(off_point, b, c) {
                continue;
            }
            for d in 0..plane.n as u16 {
                if d == off_point || d == b || d == c {
                    continue;
                }
                if !plane.collinear(off_point, b, d) && !plane.collinear(off_point, c, d) && !plane.collinear(b, c, d) {
                    single_target = [coords(off_point), coords(b), coords(c), coords(d)];
                    break 'outer;
                }
            }
        }
    }

    let h = f.h.max(1) as usize;
    let mut frob_pos = vec![(0..std_line_pts.len() as u8).collect::<Vec<u8>>()];
    for k in 1..h {
        let prev = &frob_pos[k - 1];
        let next: Vec<u8> = (0..std_line_pts.len())
            .map(|i| {
                let p = std_line_pts[prev[i] as usize];
                std_line_pos[plane.frobenius_point(p) as usize]
            })
            .collect();
        frob_pos.push(next);
    }

    // the block subgroup fixing the standard line and the off point,
    // inducing the full PGL(2,q) on the line
    let q = plane.q as u8;
    let mut induced = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
                        continue;
                    }
                    let norm2 = {
                        let first = [a, b, c, d].into_iter().find(|&x| x != 0).unwrap();
                        let s = f.inv(first);
                        [f.mul(a, s), f.mul(b, s), f.mul(c, s), f.mul(d, s)]
                    };
                    if !seen.insert(norm2) {
                        continue;
                    }
                    let m: Matrix = [[norm2[0], norm2[1], 0], [norm2[2], norm2[3], 0], [0, 0, 1]];
                    let col = Collineation { mat: m, frob: 0 };
                    let base: Vec<u8> = std_line_pts
                        .iter()
                        .map(|&p| std_line_pos[col.apply(plane, p) as usize])
                        .collect();
                    // row k: apply frobenius^k first, then the block matrix
                    let pos_perm: Vec<Vec<u8>> = (0..h)
                        .map(|k| (0..base.len()).map(|i| base[frob_pos[k][i] as usize]).collect())
                        .collect();
                    induced.push(InducedElt { col, pos_perm });
                }
            }
        }
    }

    let _ = frame_ids;
    CanonTables {
        frame_perms,
        frame_mats,
        std_line_pts,
        std_line_pos,
        off_point,
        line_targets,
        single_target,
        induced,
    }
}

fn permutations4(order: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == 4 {
        out.push(*order);
        return;
    }
    for v in 0..4 {
        if order[..k].contains(&v) {
            continue;
        }
        order[k] = v;
        permutations4(order, k + 1, out);
    }
}

impl Plane {
    pub(crate) fn canon(&self) -> &CanonTables {
        self.canon_tables.get_or_init(|| build_canon_tables(self))
    }
}

#[derive(Clone, Debug)]
pub struct CanonOutcome {
    pub canon: Mask,
    /// A collineation with transporter(S) = canon.
    pub transporter: Collineation,
    pub stab_order: u64,
    pub stab_elements: Option<Vec<Collineation>>,
}

/// Stabilizer elements are enumerated only when the order is at most this.
pub const PROFILE_CAP: u64 = 20_000;

pub(crate) fn canonicalize(plane: &Plane, set: &Mask, kind: GroupKind, want_elements: bool) -> CanonOutcome {
    let s = set.count() as usize;
    if s == 0 || s == plane.n {
        return CanonOutcome {
            canon: *set,
            transporter: Collineation::identity(),
            stab_order: group_order(plane.q, kind),
            stab_elements: None,
        };
    }
    if s == 1 {
        return canonical_single(plane, set, kind);
    }
    let ids = set.ids();
    let frames = frame_subsets(plane, &ids);
    if !frames.is_empty() {
        return canonical_framed(plane, &ids, &frames, kind, want_elements);
    }
    // no frame: collinear, or a collinear set plus one point off the span
    let all_collinear = s >= 2 && {
        let l = plane.join(ids[0], ids[1]);
        ids.iter().all(|&p| plane.incident(p, l))
    };
    if all_collinear {
        canonical_collinear(plane, &ids, kind, want_elements)
    } else {
        canonical_line_plus_point(plane, &ids, kind, want_elements)
    }
}

fn frame_subsets(plane: &Plane, ids: &[u16]) -> Vec<[u8; 4]> {
    let s = ids.len();
    let mut out = Vec::new();
    if s < 4 {
        return out;
    }
    // pairwise join lines
    let mut joins = vec![0u16; s * s];
    for i in 0..s {
        for j in (i + 1)..s {
            let l = plane.join(ids[i], ids[j]);
            joins[i * s + j] = l;
            joins[j * s + i] = l;
        }
    }
    let coll = |i: usize, j: usize, k: usize| plane.line_mask(joins[i * s + j]).test(ids[k]);
    for a in 0..s {
        for b in (a + 1)..s {
            for c in (b + 1)..s {
                if coll(a, b, c) {
                    continue;
                }
                for d in (c + 1)..s {
                    if coll(a, b, d) || coll(a, c, d) || coll(b, c, d) {
                        continue;
                    }
                    out.push([a as u8, b as u8, c as u8, d as u8]);
                }
            }
        }
    }
    out
}

fn canonical_framed(plane: &Plane, ids: &[u16], frames: &[[u8; 4]], kind: GroupKind, want_elements: bool) -> CanonOutcome {
    let tables = plane.canon();
    let f = &plane.field;
    let s = ids.len();
    let h_eff = match kind {
        GroupKind::Pgl => 1usize,
        GroupKind::PGammaL => f.h.max(1) as usize,
    };

    let mut best: Option<Mask> = None;
    let mut best_count: u64 = 0;
    let mut achievers: Vec<(u8, [u8; 4], u8)> = Vec::new();

    let mut cur_ids: Vec<u16> = ids.to_vec();
    let mut base = vec![0u16; s];
    for sigma in 0..h_eff {
        if sigma > 0 {
            for id in cur_ids.iter_mut() {
                *id = plane.frobenius_point(*id);
            }
        }
        let coords: Vec<[u8; 3]> = cur_ids.iter().map(|&p| plane.point_coords(p)).collect();
        for &fr in frames {
            let [a, b, c, d] = fr;
            let m = tuple_to_frame_matrix(
                f,
                coords[a as usize],
                coords[b as usize],
                coords[c as usize],
                coords[d as usize],
            );
            for (i, &co) in coords.iter().enumerate() {
                base[i] = plane.point_id_normalized(normalize(f, mat_vec(f, m, co)));
            }
            for (pi, table) in tables.frame_perms.iter().enumerate() {
                let mut img = Mask::EMPTY;
                for &bp in &base {
                    img.set(table[bp as usize]);
                }
                match &best {
                    Some(bm) => match img.set_cmp(bm) {
                        std::cmp::Ordering::Less => {
                            best = Some(img);
                            best_count = 1;
                            achievers.clear();
                            achievers.push((sigma as u8, fr, pi as u8));
                        }
                        std::cmp::Ordering::Equal => {
                            best_count += 1;
                            if achievers.len() as u64 <= PROFILE_CAP {
                                achievers.push((sigma as u8, fr, pi as u8));
                            }
                        }
                        std::cmp::Ordering::Greater => {}
                    },
                    None => {
                        best = Some(img);
                        best_count = 1;
                        achievers.push((sigma as u8, fr, pi as u8));
                    }
                }
            }
        }
    }

    let rebuild = |(sigma, fr, pi): (u8, [u8; 4], u8)| -> Collineation {
        let mut tup = [[0u8; 3]; 4];
        for (k, &idx) in fr.iter().enumerate() {
            let mut p = ids[idx as usize];
            for _ in 0..sigma {
                p = plane.frobenius_point(p);
            }
            tup[k] = plane.point_coords(p);
        }
        let m = tuple_to_frame_matrix(f, tup[0], tup[1], tup[2], tup[3]);
        Collineation {
            mat: mat_normalize(f, mat_mul(f, tables.frame_mats[pi as usize], m)),
            frob: sigma,
        }
    };

    let transporter = rebuild(achievers[0]);
    let canon = best.unwrap();
    debug_assert_eq!(transporter.apply_set(plane, &Mask::from_ids(ids.iter().copied())), canon);

    let stab_elements = if want_elements && best_count <= PROFILE_CAP && achievers.len() as u64 == best_count {
        let g0_inv = transporter.inverse(f);
        Some(
            achievers
                .iter()
                .map(|&a| g0_inv.compose(f, &rebuild(a)))
                .collect(),
        )
    } else {
        None
    };

    CanonOutcome { canon, transporter, stab_order: best_count, stab_elements }
}

fn canonical_single(plane: &Plane, set: &Mask, kind: GroupKind) -> CanonOutcome {
    let tables = plane.canon();
    let f = &plane.field;
    let p = set.first().unwrap();
    // complete p greedily to a frame
    let mut tup = [p, 0, 0, 0];
    let mut k = 1;
    for cand in 0..plane.n as u16 {
        if tup[..k].contains(&cand) {
            continue;
        }
        let ok = match k {
            1 => cand != p,
            2 => !plane.collinear(tup[0], tup[1], cand),
            3 => {
                !plane.collinear(tup[0], tup[1], cand)
                    && !plane.collinear(tup[0], tup[2], cand)
                    && !plane.collinear(tup[1], tup[2], cand)
            }
            _ => false,
        };
        if ok {
            tup[k] = cand;
            k += 1;
            if k == 4 {
                break;
            }
        }
    }
    let src = [
        plane.point_coords(tup[0]),
        plane.point_coords(tup[1]),
        plane.point_coords(tup[2]),
        plane.point_coords(tup[3]),
    ];
    let m = frame_to_frame(f, src, tables.single_target);
    let transporter = Collineation { mat: mat_normalize(f, m), frob: 0 };
    let canon = Mask::from_ids([tables.off_point]);
    debug_assert_eq!(transporter.apply(plane, p), tables.off_point);
    CanonOutcome {
        canon,
        transporter,
        stab_order: group_order(plane.q, kind) / plane.n as u64,
        stab_elements: None,
    }
}

/// Kernel of restriction to the standard line: maps fixing it pointwise.
fn line_kernel_mats(plane: &Plane, fix_off: bool) -> Vec<Matrix> {
    let q = plane.q as u8;
    let mut out = Vec::new();
    for w in 1..q {
        if fix_off {
            out.push([[1, 0, 0], [0, 1, 0], [0, 0, w]]);
        } else {
            for a in 0..q {
                for b in 0..q {
                    out.push([[1, 0, a], [0, 1, b], [0, 0, w]]);
                }
            }
        }
    }
    if fix_off {
        // w = 1 .. include identity
        out.push([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    } else {
        for a in 0..q {
            for b in 0..q {
                out.push([[1, 0, a], [0, 1, b], [0, 0, 1]]);
            }
        }
    }
    out
}

fn canonical_collinear(plane: &Plane, ids: &[u16], kind: GroupKind, want_elements: bool) -> CanonOutcome {
    let tables = plane.canon();
    let f = &plane.field;
    let line = plane.join(ids[0], ids[1]);
    let a = ids[0];
    let b = ids[1];
    let c = *plane.points_on(line).iter().find(|&&p| p != a && p != b).unwrap();
    let d = (0..plane.n as u16).find(|&p| !plane.incident(p, line)).unwrap();
    let m = collinear_transport(
        f,
        plane.point_coords(a),
        plane.point_coords(b),
        plane.point_coords(c),
        plane.point_coords(d),
        tables.line_targets[0],
        tables.line_targets[1],
        tables.line_targets[2],
        tables.line_targets[3],
    );
    let transport = Collineation { mat: mat_normalize(f, m), frob: 0 };

    // positions of the transported set on the standard line
    let mut pos_mask: u16 = 0;
    for &p in ids {
        let ip = transport.apply(plane, p);
        let pos = tables.std_line_pos[ip as usize];
        debug_assert!(pos != 255);
        pos_mask |= 1 << pos;
    }

    let h_eff = match kind {
        GroupKind::Pgl => 1usize,
        GroupKind::PGammaL => f.h.max(1) as usize,
    };

    let mut best: Option<u16> = None;
    let mut achievers: Vec<(usize, usize)> = Vec::new(); // (induced index, sigma)
    for (ei, elt) in tables.induced.iter().enumerate() {
        for sigma in 0..h_eff {
            let perm = &elt.pos_perm[sigma];
            let mut img: u16 = 0;
            let mut rest = pos_mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                img |= 1 << perm[i];
            }
            match best {
                None => {
                    best = Some(img);
                    achievers.push((ei, sigma));
                }
                Some(b) => match cmp_low16(img, b) {
                    std::cmp::Ordering::Less => {
                        best = Some(img);
                        achievers.clear();
                        achievers.push((ei, sigma));
                    }
                    std::cmp::Ordering::Equal => achievers.push((ei, sigma)),
                    std::cmp::Ordering::Greater => {}
                },
            }
        }
    }

    let mut canon = Mask::EMPTY;
    let mut rest = best.unwrap();
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        canon.set(tables.std_line_pts[i]);
    }

    let lift = |(ei, sigma): (usize, usize)| -> Collineation {
        let block = tables.induced[ei].col;
        Collineation { mat: block.mat, frob: sigma as u8 }
    };
    let q = plane.q as u64;
    let kernel = q * q * (q - 1);
    let stab_order = achievers.len() as u64 * kernel;
    let transporter = lift(achievers[0]).compose(f, &transport);
    debug_assert_eq!(transporter.apply_set(plane, &Mask::from_ids(ids.iter().copied())), canon);

    let stab_elements = if want_elements && stab_order <= PROFILE_CAP {
        let kmats = line_kernel_mats(plane, false);
        let g0_inv = transporter.inverse(f);
        let mut elems = Vec::with_capacity(stab_order as usize);
        for &ach in &achievers {
            let la = lift(ach).compose(f, &transport);
            for &km in &kmats {
                let kc = Collineation { mat: km, frob: 0 };
                elems.push(g0_inv.compose(f, &kc).compose(f, &la));
            }
        }
        Some(elems)
    } else {
        None
    };

    CanonOutcome { canon, transporter, stab_order, stab_elements }
}

fn canonical_line_plus_point(plane: &Plane, ids: &[u16], kind: GroupKind, want_elements: bool) -> CanonOutcome {
    let tables = plane.canon();
    let f = &plane.field;
    let s = ids.len();
    // decompositions: a line carrying all points but one
    let mut decomps: Vec<(u16, u16)> = Vec::new(); // (line, off point)
    for (i, &x) in ids.iter().enumerate() {
        let (p0, p1) = if i == 0 { (ids[1], ids[2]) } else if i == 1 { (ids[0], ids[2]) } else { (ids[0], ids[1]) };
        let l = plane.join(p0, p1);
        if ids.iter().all(|&p| p == x || plane.incident(p, l)) && !plane.incident(x, l) {
            decomps.push((l, x));
        }
    }
    assert!(!decomps.is_empty(), "set has no frame but is not line-plus-point: {:?}", ids);

    let h_eff = match kind {
        GroupKind::Pgl => 1usize,
        GroupKind::PGammaL => f.h.max(1) as usize,
    };

    let mut best: Option<u16> = None;
    let mut achievers: Vec<(usize, usize, usize)> = Vec::new(); // (decomp, induced, sigma)
    let mut transports: Vec<Collineation> = Vec::new();
    let mut pos_masks: Vec<u16> = Vec::new();
    for &(l, x) in &decomps {
        let on: Vec<u16> = ids.iter().copied().filter(|&p| p != x).collect();
        let a = on[0];
        let b = on[1];
        let c = *plane.points_on(l).iter().find(|&&p| p != a && p != b).unwrap();
        let m = collinear_transport(
            f,
            plane.point_coords(a),
            plane.point_coords(b),
            plane.point_coords(c),
            plane.point_coords(x),
            tables.line_targets[0],
            tables.line_targets[1],
            tables.line_targets[2],
            tables.line_targets[3],
        );
        let transport = Collineation { mat: mat_normalize(f, m), frob: 0 };
        let mut pos_mask: u16 = 0;
        for &p in &on {
            let pos = tables.std_line_pos[transport.apply(plane, p) as usize];
            debug_assert!(pos != 255);
            pos_mask |= 1 << pos;
        }
        debug_assert_eq!(transport.apply(plane, x), tables.off_point);
        transports.push(transport);
        pos_masks.push(pos_mask);
    }
    for (di, &pm) in pos_masks.iter().enumerate() {
        for (ei, elt) in tables.induced.iter().enumerate() {
            for sigma in 0..h_eff {
                let perm = &elt.pos_perm[sigma];
                let mut img: u16 = 0;
                let mut rest = pm;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    img |= 1 << perm[i];
                }
                match best {
                    None => {
                        best = Some(img);
                        achievers.push((di, ei, sigma));
                    }
                    Some(b) => match cmp_low16(img, b) {
                        std::cmp::Ordering::Less => {
                            best = Some(img);
                            achievers.clear();
                            achievers.push((di, ei, sigma));
                        }
                        std::cmp::Ordering::Equal => achievers.push((di, ei, sigma)),
                        std::cmp::Ordering::Greater => {}
                    },
                }
            }
        }
    }

    let mut canon = Mask::from_ids([tables.off_point]);
    let mut rest = best.unwrap();
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        canon.set(tables.std_line_pts[i]);
    }
    debug_assert_eq!(canon.count() as usize, s);

    let build = |(di, ei, sigma): (usize, usize, usize)| -> Collineation {
        let block = Collineation { mat: tables.induced[ei].col.mat, frob: sigma as u8 };
        block.compose(f, &transports[di])
    };
    let q = plane.q as u64;
    let stab_order = achievers.len() as u64 * (q - 1);
    let transporter = build(achievers[0]);
    debug_assert_eq!(transporter.apply_set(plane, &Mask::from_ids(ids.iter().copied())), canon);

    let stab_elements = if want_elements && stab_order <= PROFILE_CAP {
        let kmats = line_kernel_mats(plane, true);
        let g0_inv = transporter.inverse(f);
        let mut elems = Vec::with_capacity(stab_order as usize);
        for &ach in &achievers {
            let la = build(ach);
            for &km in &kmats {
                let kc = Collineation { mat: km, frob: 0 };
                elems.push(g0_inv.compose(f, &kc).compose(f, &la));
            }
        }
        Some(elems)
    } else {
        None
    };

    CanonOutcome { canon, transporter, stab_order, stab_elements }
}

/// Compare full 16-bit position sets by lowest set bit of the difference.
fn cmp_low16(a: u16, b: u16) -> std::cmp::Ordering {
    if a == b {
        return std::cmp::Ordering::Equal;
    }
    let d = a ^ b;
    let low = d & d.wrapping_neg();
    if a & low != 0 {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

/// The canonical representative of the orbit of `set` under the chosen group.
pub fn canonical_form(plane: &Plane, set: &Mask, kind: GroupKind) -> Mask {
    canonicalize(plane, set, kind, false).canon
}

/// A witness collineation mapping s1 onto s2, if the two are equivalent.
pub fn are_equivalent(plane: &Plane, s1: &Mask, s2: &Mask, kind: GroupKind) -> Option<Collineation> {
    if s1.count() != s2.count() {
        return None;
    }
    let c1 = canonicalize(plane, s1, kind, false);
    let c2 = canonicalize(plane, s2, kind, false);
    if c1.canon != c2.canon {
        return None;
    }
    let g = c2.transporter.inverse(&plane.field).compose(&plane.field, &c1.transporter);
    debug_assert_eq!(g.apply_set(plane, s1), *s2);
    Some(g)
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizerReport {
    pub order: u64,
    pub order_pgl: u64,
    pub order_pgammal: u64,
    /// Multiset of element orders (order -> multiplicity); present when the
    /// group was small enough to enumerate.
    pub profile: Option<BTreeMap<u64, u64>>,
    pub name: Option<String>,
}

/// The set stabilizer of `set` in the chosen group: exact order, both
/// ambient orders, and the element-order profile when enumerable.
pub fn stabilizer(plane: &Plane, set: &Mask, kind: GroupKind) -> StabilizerReport {
    let pgl = canonicalize(plane, set, GroupKind::Pgl, kind == GroupKind::Pgl);
    let pgg = canonicalize(plane, set, GroupKind::PGammaL, kind == GroupKind::PGammaL);
    let picked = match kind {
        GroupKind::Pgl => &pgl,
        GroupKind::PGammaL => &pgg,
    };
    let profile = picked.stab_elements.as_ref().map(|elems| {
        let mut prof: BTreeMap<u64, u64> = BTreeMap::new();
        for e in elems {
            *prof.entry(element_order(plane, e)).or_insert(0) += 1;
        }
        prof
    });
    let name = profile
        .as_ref()
        .and_then(|p| groups::recognize(picked.stab_order, p).map(|s| s.to_string()));
    StabilizerReport {
        order: picked.stab_order,
        order_pgl: pgl.stab_order,
        order_pgammal: pgg.stab_order,
        profile,
        name,
    }
}

pub fn element_order(plane: &Plane, c: &Collineation) -> u64 {
    let perm = c.point_perm(plane);
    let mut seen = vec![false; perm.len()];
    let mut order: u64 = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur] as usize;
            len += 1;
        }
        order = lcm(order, len);
    }
    order
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Deterministic pseudo-random collineation from a seed; used by the
/// verification suites.
pub fn seeded_collineation(plane: &Plane, kind: GroupKind, seed: u64) -> Collineation {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let f = &plane.field;
    let n = plane.n as u64;
    let pick_frame = |rng: &mut dyn FnMut() -> u64| -> [[u8; 3]; 4] {
        loop {
            let a = (rng() % n) as u16;
            let b = (rng() % n) as u16;
            let c = (rng() % n) as u16;
            let d = (rng() % n) as u16;
            if a == b || a == c || a == d || b == c || b == d || c == d {
                continue;
            }
            if plane.collinear(a, b, c) || plane.collinear(a, b, d) || plane.collinear(a, c, d) || plane.collinear(b, c, d) {
                continue;
            }
            return [a, b, c, d].map(|p| plane.point_coords(p));
        }
    };
    let src = pick_frame(&mut next);
    let dst = pick_frame(&mut next);
    let frob = match kind {
        GroupKind::Pgl => 0u8,
        GroupKind::PGammaL => (next() % f.h.max(1) as u64) as u8,
    };
    // map the frobenius image of src onto dst
    let src_f: [[u8; 3]; 4] = src.map(|v| {
        let mut w = v;
        for e in w.iter_mut() {
            *e = f.frob(*e, frob);
        }
        normalize(f, w)
    });
    Collineation { mat: mat_normalize(f, frame_to_frame(f, src_f, dst)), frob }
}
