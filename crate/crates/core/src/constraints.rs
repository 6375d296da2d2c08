//! Theoretical filters on 2-semiarc sizes and secant distributions:
//! the size interval, divisibility conditions at sizes q+1 and q+2,
//! long-secant exclusion, the exact integer solver for secant
//! distributions, and the labeled census of size-q examples.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeBounds {
    pub lower: u32,
    pub upper: u32,
}

/// q <= |S| <= 1 + floor(q(1 + sqrt(8q-7))/4) for a 2-semiarc in a plane
/// of order q.
pub fn size_bounds(q: u32) -> SizeBounds {
    let disc = 8 * q as u64 - 7;
    let r = isqrt(disc);
    let upper = if r * r == disc {
        1 + (q as u64 * (1 + r)) / 4
    } else {
        // floor(q(1+sqrt(d))/4) = floor((q + floor(sqrt(q^2 d)))/4) for non-square d
        let t = isqrt(q as u64 * q as u64 * disc);
        1 + (q as u64 + t) / 4
    };
    SizeBounds { lower: q, upper: upper as u32 }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub reason: String,
    /// For s = q+2: a pair (alpha, beta) with 4a + 3b = q+2, b != 1.
    pub witness: Option<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    SizeOutOfBounds { s: u32, bounds: SizeBounds },
    EvenOrder(u32),
}

impl std::fmt::Display for ConstraintError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstraintError::SizeOutOfBounds { s, bounds } => {
                write!(f, "size {} outside [{}, {}]", s, bounds.lower, bounds.upper)
            }
            ConstraintError::EvenOrder(q) => write!(f, "census formula requires odd q, got {}", q),
        }
    }
}

impl std::error::Error for ConstraintError {}

/// Necessary divisibility conditions: a 2-semiarc of size q+1 forces
/// 3 | q+1, and one of size q+2 forces q+2 = 4a + 3b with b != 1.
/// Feasible never asserts existence.
pub fn size_feasibility(q: u32, s: u32) -> Result<FeasibilityVerdict, ConstraintError> {
    let bounds = size_bounds(q);
    if s < bounds.lower || s > bounds.upper {
        return Err(ConstraintError::SizeOutOfBounds { s, bounds });
    }
    if s == q + 1 {
        if (q + 1) % 3 != 0 {
            return Ok(FeasibilityVerdict {
                feasible: false,
                reason: format!("size q+1 = {} requires 3 | q+1", s),
                witness: None,
            });
        }
        return Ok(FeasibilityVerdict {
            feasible: true,
            reason: "3 | q+1".into(),
            witness: None,
        });
    }
    if s == q + 2 {
        for beta in (0..=(q + 2) / 3).rev() {
            if beta == 1 {
                continue;
            }
            let rest = q + 2 - 3 * beta;
            if rest % 4 == 0 {
                return Ok(FeasibilityVerdict {
                    feasible: true,
                    reason: format!("q+2 = 4*{} + 3*{}", rest / 4, beta),
                    witness: Some((rest / 4, beta)),
                });
            }
        }
        return Ok(FeasibilityVerdict {
            feasible: false,
            reason: format!("size q+2 = {} is not 4a + 3b with b != 1", s),
            witness: None,
        });
    }
    Ok(FeasibilityVerdict { feasible: true, reason: "no divisibility obstruction".into(), witness: None })
}

/// The longest secant a t-semiarc not contained in a line can have:
/// q-t when t < (q-1)/2 (no (q+1-t)-secants then), else q+1-t.
pub fn max_secant_length(q: u32, t: u32) -> u32 {
    assert!(t >= 1 && t <= q + 1);
    if 2 * t < q - 1 {
        q - t
    } else {
        q + 1 - t
    }
}

/// All nonnegative integer vectors (x_0..x_max_len) satisfying the
/// distribution identities for a t-semiarc of size s in a plane of
/// order q, with optional extra upper bounds per index, sorted
/// lexicographically. An empty result means combinatorial infeasibility.
///
/// x_1 = t*s is forced; x_4..x_max_len are enumerated and the remaining
/// 3x3 integer system determines x_0, x_2, x_3 exactly.
pub fn enumerate_secant_distributions(
    q: u32,
    s: u32,
    t: u32,
    max_len: u32,
    caps: &[(u32, u64)],
) -> Vec<Vec<u64>> {
    let n = (q * q + q + 1) as i64;
    let implicit = long_secant_pair_cap(q, s, t);
    let s = s as i64;
    let t = t as i64;
    let max_len = max_len as usize;
    let x1 = t * s;
    let mut out = Vec::new();
    if max_len < 1 || x1 > n {
        return out;
    }
    let cap_of = |i: usize| -> i64 {
        let user = caps
            .iter()
            .find(|&&(idx, _)| idx as usize == i)
            .map(|&(_, v)| v as i64)
            .unwrap_or(i64::MAX);
        let geo = match implicit {
            Some((idx, v)) if idx as usize == i => v as i64,
            _ => i64::MAX,
        };
        user.min(geo)
    };

    // remaining sums over indices != 1
    let rem_count = n - x1;
    let rem_inc = (q as i64 + 1) * s - x1;
    let rem_pairs = s * (s - 1);
    if rem_count < 0 || rem_inc < 0 || rem_pairs < 0 {
        return out;
    }

    let hi = max_len.max(3);
    let mut x = vec![0i64; hi + 1];
    fn rec(
        i: usize,
        max_len: usize,
        x: &mut Vec<i64>,
        count: i64,
        inc: i64,
        pairs: i64,
        cap_of: &dyn Fn(usize) -> i64,
        out: &mut Vec<Vec<u64>>,
        x1: i64,
    ) {
        if i < 4 {
            // solve for x2, x3 from the two weighted sums, then x0
            // 2 x2 + 3 x3 = inc, 2 x2 + 6 x3 = pairs
            let diff = pairs - inc;
            if diff < 0 || diff % 3 != 0 {
                return;
            }
            let x3 = diff / 3;
            let rest = inc - 3 * x3;
            if rest < 0 || rest % 2 != 0 {
                return;
            }
            let x2 = rest / 2;
            let x0 = count - x2 - x3;
            if x0 < 0 || x2 > cap_of(2) || x3 > cap_of(3) || x0 > cap_of(0) {
                return;
            }
            if max_len < 3 && x3 > 0 {
                return;
            }
            if max_len < 2 && x2 > 0 {
                return;
            }
            x[0] = x0;
            x[2] = x2;
            x[3] = x3;
            let mut row: Vec<u64> = vec![0; max_len + 1];
            for (k, item) in row.iter_mut().enumerate() {
                *item = if k == 1 { x1 as u64 } else { x[k] as u64 };
            }
            out.push(row);
            return;
        }
        if i > max_len {
            rec(3, max_len, x, count, inc, pairs, cap_of, out, x1);
            return;
        }
        let w_inc = i as i64;
        let w_pairs = (i as i64) * (i as i64 - 1);
        let max_i = (pairs / w_pairs).min(inc / w_inc).min(count).min(cap_of(i));
        for v in 0..=max_i {
            x[i] = v;
            rec(
                i + 1,
                max_len,
                x,
                count - v,
                inc - v * w_inc,
                pairs - v * w_pairs,
                cap_of,
                out,
                x1,
            );
        }
        x[i] = 0;
    }
    // enumerate from the top down so indices beyond max_len stay zero
    rec(4, max_len, &mut x, rem_count, rem_inc, rem_pairs, &cap_of, &mut out, x1);
    out.sort();
    out
}

/// How many (q-t)-secants a t-semiarc of size s can carry. When
/// t < (q-1)/2 a (q-t)-secant cannot grow, and under the gcd conditions
/// two of them meeting off the set force the set to be their union. So
/// for s != 2(q-t) all pairs meet inside the set: one common member
/// already forces s >= 3(q-t)-2, and while s < 4(q-t)-4 no member lies
/// on three of them, so m such secants cover mk - m(m-1)/2 distinct
/// points. Returns the sharpest resulting cap, if any.
fn long_secant_pair_cap(q: u32, s: u32, t: u32) -> Option<(u32, u64)> {
    if 2 * t >= q - 1 {
        return None;
    }
    let g = |a: u32, b: u32| -> u32 {
        let (mut a, mut b) = (a, b);
        while b != 0 {
            let r = a % b;
            a = b;
            b = r;
        }
        a
    };
    if g(q, t) != 1 || g(q - 1, t - 1) != 1 {
        return None;
    }
    let k = q - t;
    if s == 2 * k {
        return Some((k, 2));
    }
    if s < 3 * k - 2 {
        return Some((k, 1));
    }
    if s < 4 * k - 4 {
        let (k64, s64) = (k as u64, s as u64);
        let mut best = 1u64;
        for m in 2..=k64 + 1 {
            if m * k64 - m * (m - 1) / 2 <= s64 {
                best = m;
            }
        }
        return Some((k, best));
    }
    None
}

/// Check a full distribution vector against the solver's constraint set.
pub fn distribution_feasible(q: u32, s: u32, t: u32, max_len: u32, x: &[u64]) -> bool {
    let n = (q * q + q + 1) as u64;
    if x.iter().enumerate().any(|(i, &v)| i as u32 > max_len && i != 1 && v > 0) {
        return false;
    }
    if x.len() < 2 || x[1] != (t * s) as u64 {
        return false;
    }
    let sum: u64 = x.iter().sum();
    let inc: u64 = x.iter().enumerate().map(|(i, &v)| i as u64 * v).sum();
    let pairs: u64 = x.iter().enumerate().skip(2).map(|(i, &v)| i as u64 * (i as u64 - 1) * v).sum();
    sum == n && inc == (q as u64 + 1) * s as u64 && pairs == s as u64 * (s as u64 - 1)
}

/// Labeled count of size-q 2-semiarcs in PG(2,q) for odd q, with the
/// stabilizer order h*q*(q-1) of the unique class.
pub fn expected_size_q_census(q: u32, h: u32) -> Result<(u64, u64), ConstraintError> {
    if q % 2 == 0 {
        return Err(ConstraintError::EvenOrder(q));
    }
    let q = q as u64;
    let count = q * q * (q * q + q + 1) * (q - 1) * (q + 1);
    let stab = h as u64 * q * (q - 1);
    Ok((count, stab))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_match_known_values() {
        for (q, lo, hi) in [
            (2u32, 2u32, 3u32),
            (3, 3, 4),
            (4, 4, 7),
            (5, 5, 9),
            (7, 7, 15),
            (8, 8, 18),
            (9, 9, 21),
            (11, 11, 28),
            (13, 13, 36),
        ] {
            assert_eq!(size_bounds(q), SizeBounds { lower: lo, upper: hi }, "q={}", q);
        }
    }

    #[test]
    fn feasibility_rejections() {
        assert!(!size_feasibility(4, 5).unwrap().feasible);
        assert!(!size_feasibility(7, 8).unwrap().feasible);
        assert!(!size_feasibility(5, 7).unwrap().feasible);
        assert!(size_feasibility(8, 9).unwrap().feasible);
        assert!(size_feasibility(8, 10).unwrap().feasible);
        assert!(size_feasibility(11, 12).unwrap().feasible);
        assert!(size_feasibility(7, 9).unwrap().feasible);
        assert!(size_feasibility(7, 16).is_err());
    }

    #[test]
    fn secant_length_limits() {
        assert_eq!(max_secant_length(7, 2), 5);
        assert_eq!(max_secant_length(13, 2), 11);
        assert_eq!(max_secant_length(4, 2), 3);
        assert_eq!(max_secant_length(5, 2), 4);
        assert_eq!(max_secant_length(8, 2), 6);
        assert_eq!(max_secant_length(4, 3), 2);
    }

    #[test]
    fn q7_distribution_tables() {
        // size 14: exactly nine solutions
        let rows = enumerate_secant_distributions(7, 14, 2, 5, &[]);
        let expect14: Vec<Vec<u64>> = vec![
            vec![0, 28, 10, 15, 1, 3],
            vec![0, 28, 11, 12, 4, 2],
            vec![0, 28, 12, 9, 7, 1],
            vec![0, 28, 13, 6, 10, 0],
            vec![1, 28, 5, 20, 1, 2],
            vec![1, 28, 6, 17, 4, 1],
            vec![1, 28, 7, 14, 7, 0],
            vec![2, 28, 0, 25, 1, 1],
            vec![2, 28, 1, 22, 4, 0],
        ];
        assert_eq!(rows, expect14);

        // size 13: exactly twelve solutions
        let rows = enumerate_secant_distributions(7, 13, 2, 5, &[]);
        assert_eq!(rows.len(), 12);
        assert!(rows.contains(&vec![5, 26, 0, 26, 0, 0]));
        assert!(rows.contains(&vec![1, 26, 21, 3, 3, 3]));

        // size 12 with at most one 5-secant: the five B-cases
        let rows = enumerate_secant_distributions(7, 12, 2, 5, &[(5, 1)]);
        let expect12: Vec<Vec<u64>> = vec![
            vec![5, 24, 17, 7, 3, 1],
            vec![5, 24, 18, 4, 6, 0],
            vec![6, 24, 11, 15, 0, 1],
            vec![6, 24, 12, 12, 3, 0],
            vec![7, 24, 6, 20, 0, 0],
        ];
        assert_eq!(rows, expect12);

        // size 15 is combinatorially impossible
        assert!(enumerate_secant_distributions(7, 15, 2, 5, &[]).is_empty());
    }

    #[test]
    fn distributions_satisfy_identities() {
        for (q, s, t, ml) in [(7u32, 14u32, 2u32, 5u32), (7, 13, 2, 5), (5, 9, 2, 4), (8, 12, 2, 6)] {
            for row in enumerate_secant_distributions(q, s, t, ml, &[]) {
                let n = (q * q + q + 1) as u64;
                assert_eq!(row.iter().sum::<u64>(), n);
                let inc: u64 = row.iter().enumerate().map(|(i, &v)| i as u64 * v).sum();
                assert_eq!(inc, (q as u64 + 1) * s as u64);
                let pairs: u64 = row.iter().enumerate().skip(2).map(|(i, &v)| i as u64 * (i as u64 - 1) * v).sum();
                assert_eq!(pairs, (s * (s - 1)) as u64);
                assert!(distribution_feasible(q, s, t, ml, &row));
            }
        }
    }

    #[test]
    fn census_values() {
        assert_eq!(expected_size_q_census(5, 1).unwrap(), (18_600, 20));
        assert_eq!(expected_size_q_census(7, 1).unwrap(), (134_064, 42));
        assert_eq!(expected_size_q_census(9, 2).unwrap().1, 144);
        assert!(expected_size_q_census(8, 3).is_err());
    }
}
