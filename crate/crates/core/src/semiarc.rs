//! Tangent and secant analysis of point sets: the t-semiarc predicate,
//! the hereditary admissibility relaxation used by the search, secant
//! distributions and the induced linear-space check.

use crate::bits::Mask;
use crate::plane::{Plane, PointId};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemiarcError {
    EmptySet,
    NotAMember(PointId),
    NotASemiarc,
}

impl std::fmt::Display for SemiarcError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SemiarcError::EmptySet => write!(f, "the point set is empty"),
            SemiarcError::NotAMember(p) => write!(f, "point {} is not in the set", p),
            SemiarcError::NotASemiarc => write!(f, "the set is not a t-semiarc"),
        }
    }
}

impl std::error::Error for SemiarcError {}

/// A point set in a plane, kept as a bitmask with its sorted members.
#[derive(Clone)]
pub struct PointSet<'a> {
    pub plane: &'a Plane,
    pub mask: Mask,
}

impl<'a> PointSet<'a> {
    pub fn new(plane: &'a Plane, mask: Mask) -> PointSet<'a> {
        PointSet { plane, mask }
    }

    pub fn members(&self) -> Vec<PointId> {
        self.mask.ids()
    }

    pub fn size(&self) -> u32 {
        self.mask.count()
    }
}

/// Number of lines meeting the set exactly in {p}; requires p in the set.
pub fn tangent_count(plane: &Plane, set: &Mask, p: PointId) -> Result<u32, SemiarcError> {
    if !set.test(p) {
        return Err(SemiarcError::NotAMember(p));
    }
    let mut t = 0;
    for &l in plane.lines_through(p) {
        if plane.line_mask(l).and_count(set) == 1 {
            t += 1;
        }
    }
    Ok(t)
}

/// Number of lines through p meeting the set in at least two points.
pub fn secant_count_at(plane: &Plane, set: &Mask, p: PointId) -> Result<u32, SemiarcError> {
    Ok(plane.q + 1 - tangent_count(plane, set, p)?)
}

/// True iff every member lies on exactly t tangents.
pub fn is_t_semiarc(plane: &Plane, set: &Mask, t: u32) -> Result<bool, SemiarcError> {
    if set.is_empty() {
        return Err(SemiarcError::EmptySet);
    }
    for p in set.iter() {
        if tangent_count(plane, set, p)? != t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff every member lies on at least t tangents. This is hereditary:
/// every nonempty subset of an admissible set is admissible.
pub fn is_admissible(plane: &Plane, set: &Mask, t: u32) -> Result<bool, SemiarcError> {
    if set.is_empty() {
        return Err(SemiarcError::EmptySet);
    }
    for p in set.iter() {
        if tangent_count(plane, set, p)? < t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The vector (x_0, ..., x_{q+1}) counting lines by intersection size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecantDistribution {
    pub x: Vec<u64>,
}

impl SecantDistribution {
    /// The standard double-counting identities tie the distribution to the
    /// set size: sum x_i = q^2+q+1, sum i x_i = (q+1)s, sum i(i-1) x_i = s(s-1).
    pub fn check_identities(&self, q: u64, s: u64) -> bool {
        let n = q * q + q + 1;
        let sum: u64 = self.x.iter().sum();
        let inc: u64 = self.x.iter().enumerate().map(|(i, &v)| i as u64 * v).sum();
        let pairs: u64 = self.x.iter().enumerate().skip(2).map(|(i, &v)| (i as u64) * (i as u64 - 1) * v).sum();
        sum == n && inc == (q + 1) * s && pairs == s * s.saturating_sub(1)
    }
}

pub fn secant_distribution(plane: &Plane, set: &Mask) -> SecantDistribution {
    let q = plane.q as usize;
    let mut x = vec![0u64; q + 2];
    for l in 0..plane.n as u16 {
        x[plane.line_mask(l).and_count(set) as usize] += 1;
    }
    let d = SecantDistribution { x };
    assert!(d.check_identities(plane.q as u64, set.count() as u64));
    d
}

/// A t-semiarc's points and secants form a linear space with exactly
/// q+1-t lines through each point.
pub fn design_check(plane: &Plane, set: &Mask, t: u32) -> Result<bool, SemiarcError> {
    if !is_t_semiarc(plane, set, t)? {
        return Err(SemiarcError::NotASemiarc);
    }
    let r = plane.q + 1 - t;
    for p in set.iter() {
        if secant_count_at(plane, set, p)? != r {
            return Ok(false);
        }
    }
    Ok(true)
}
