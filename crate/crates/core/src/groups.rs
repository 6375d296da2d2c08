//! Recognition of small stabilizer groups by (order, element-order
//! multiset) fingerprints.
//!
//! The table covers the group names that occur as semiarc stabilizers in
//! planes of order at most 13. Recognition is honest about ambiguity: a
//! fingerprint shared by two table entries is dropped, and unknown
//! fingerprints report no name.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

type Profile = BTreeMap<u64, u64>;

fn cyclic(n: u64) -> Profile {
    let mut p = Profile::new();
    for k in 0..n {
        let d = n / gcd(n, k.max(1));
        let ord = if k == 0 { 1 } else { d };
        *p.entry(ord).or_insert(0) += 1;
    }
    p
}

fn direct(a: &Profile, b: &Profile) -> Profile {
    let mut p = Profile::new();
    for (&oa, &ca) in a {
        for (&ob, &cb) in b {
            *p.entry(lcm(oa, ob)).or_insert(0) += ca * cb;
        }
    }
    p
}

/// Dihedral group of order 2n (named D_n here, following the table
/// convention where D4 has order 8).
fn dihedral(n: u64) -> Profile {
    let mut p = cyclic(n);
    *p.entry(2).or_insert(0) += n;
    p
}

/// Dicyclic group of order 4n.
fn dicyclic(n: u64) -> Profile {
    let mut p = cyclic(2 * n);
    *p.entry(4).or_insert(0) += 2 * n;
    p
}

fn from_perm_group(gens: Vec<Vec<usize>>) -> Profile {
    // BFS closure over composition
    let n = gens[0].len();
    let id: Vec<usize> = (0..n).collect();
    let mut seen = std::collections::HashSet::new();
    let mut queue = vec![id.clone()];
    seen.insert(id);
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        for g in &gens {
            let nxt: Vec<usize> = (0..n).map(|i| g[cur[i]]).collect();
            if seen.insert(nxt.clone()) {
                queue.push(nxt);
            }
        }
    }
    let mut p = Profile::new();
    for perm in &queue {
        *p.entry(perm_order(perm)).or_insert(0) += 1;
    }
    p
}

fn perm_order(perm: &[usize]) -> u64 {
    let mut seen = vec![false; perm.len()];
    let mut ord = 1u64;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = perm[c];
            len += 1;
        }
        ord = lcm(ord, len);
    }
    ord
}

fn symmetric(n: usize) -> Profile {
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
    }
    let mut c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    if n == 1 {
        c = vec![0];
    }
    gens.push(c);
    from_perm_group(gens)
}

fn alternating4() -> Profile {
    let a = vec![1, 0, 3, 2]; // (01)(23)
    let b = vec![1, 2, 0, 3]; // (012)
    from_perm_group(vec![a, b])
}

/// The affine semilinear group AGammaL(1,q): x -> a x^(p^j) + b. With
/// semilinear = false this is AGL(1,q) of order q(q-1).
fn affine(q: u32, semilinear: bool) -> Profile {
    let field = crate::gf::Field::with_order(q).unwrap();
    let h = if semilinear { field.h } else { 1 };
    let mut gens: Vec<Vec<usize>> = Vec::new();
    // translation x+1, scaling by a generator, frobenius
    gens.push((0..q).map(|x| field.add(x as u8, 1) as usize).collect());
    let g = (1..q).map(|a| a as u8).find(|&a| field.mul_order(a) == q - 1).unwrap();
    gens.push((0..q).map(|x| field.mul(x as u8, g) as usize).collect());
    if h > 1 {
        gens.push((0..q).map(|x| field.frob(x as u8, 1) as usize).collect());
    }
    from_perm_group(gens)
}

fn psl32() -> Profile {
    // all invertible 3x3 matrices over GF(2), acting on the 7 nonzero vectors
    let field = crate::gf::Field::with_order(2).unwrap();
    let plane = crate::plane::Plane::new(field).unwrap();
    let mut gens = Vec::new();
    for mat in [
        [[0u8, 1, 0], [0, 0, 1], [1, 0, 0]],
        [[1u8, 1, 0], [0, 1, 0], [0, 0, 1]],
        [[0u8, 1, 0], [1, 0, 0], [0, 0, 1]],
    ] {
        let c = crate::collineation::Collineation { mat, frob: 0 };
        gens.push((0..7u16).map(|p| c.apply(&plane, p) as usize).collect());
    }
    from_perm_group(gens)
}

/// (Z4 x Z4) : S3 of order 96, as affine maps on Z4^2 generated by
/// translations, an order-3 matrix and a swap.
fn z4z4_s3() -> Profile {
    let idx = |x: usize, y: usize| (x % 4) * 4 + (y % 4);
    let mut gens = Vec::new();
    let mut t1 = vec![0; 16];
    let mut t2 = vec![0; 16];
    let mut a = vec![0; 16];
    let mut b = vec![0; 16];
    for x in 0..4 {
        for y in 0..4 {
            t1[idx(x, y)] = idx(x + 1, y);
            t2[idx(x, y)] = idx(x, y + 1);
            a[idx(x, y)] = idx(4 - y, (x + 4 - y) % 4); // (x,y) -> (-y, x-y)
            b[idx(x, y)] = idx(y, x);
        }
    }
    gens.push(t1);
    gens.push(t2);
    gens.push(a);
    gens.push(b);
    from_perm_group(gens)
}

fn profile_order(p: &Profile) -> u64 {
    p.values().sum()
}

fn table() -> &'static HashMap<(u64, Vec<(u64, u64)>), Option<&'static str>> {
    static TABLE: OnceLock<HashMap<(u64, Vec<(u64, u64)>), Option<&'static str>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let s3 = symmetric(3);
        let s4 = symmetric(4);
        let a4 = alternating4();
        let z = |n: u64| cyclic(n);
        let mut entries: Vec<(Profile, &'static str)> = vec![
            (z(1), "Z1"),
            (z(2), "Z2"),
            (z(3), "Z3"),
            (z(4), "Z4"),
            (z(5), "Z5"),
            (z(6), "Z6"),
            (z(7), "Z7"),
            (z(8), "Z8"),
            (z(9), "Z9"),
            (z(10), "Z10"),
            (z(11), "Z11"),
            (z(12), "Z12"),
            (z(13), "Z13"),
            (direct(&z(2), &z(2)), "Z2xZ2"),
            (direct(&z(2), &z(4)), "Z2xZ4"),
            (direct(&z(4), &z(4)), "Z4xZ4"),
            (direct(&z(3), &z(3)), "Z3xZ3"),
            (dihedral(4), "D4"),
            (dihedral(5), "D5"),
            (dihedral(6), "D6"),
            (dihedral(7), "D7"),
            (dihedral(8), "D8"),
            (dicyclic(3), "Q6"),
            (s3.clone(), "S3"),
            (s4.clone(), "S4"),
            (a4.clone(), "A4"),
            (direct(&a4, &z(2)), "A4xZ2"),
            (direct(&s4, &z(2)), "Z2xS4"),
            (direct(&s3, &z(3)), "S3xZ3"),
            (direct(&s3, &z(4)), "S3xZ4"),
            (direct(&s3, &z(6)), "Z6xS3"),
            (direct(&s3, &dihedral(8)), "D8xS3"),
            (direct(&dihedral(4), &z(2)), "D4xZ2"),
            (direct(&dihedral(4), &z(3)), "D4xZ3"),
            (direct(&dihedral(7), &z(3)), "(Z7xZ3):Z2"),
            (affine(5, false), "Z5:Z4"),
            (affine(7, false), "G42"),
            (affine(11, false), "(Z11:Z5):Z2"),
            (affine(13, false), "(Z13:Z4):Z3"),
            (affine(9, true), "((Z3xZ3):Z8):Z2"),
            (affine(8, true), "((Z2xZ2xZ2):Z7):Z3"),
            (psl32(), "PSL(3,2)"),
            (direct(&psl32(), &z(2)), "PSL(3,2)xZ2"),
            (z4z4_s3(), "((Z4xZ4):Z3):Z2"),
        ];
        // sanity on a few orders
        debug_assert_eq!(profile_order(&entries.iter().find(|e| e.1 == "G42").unwrap().0), 42);
        debug_assert_eq!(profile_order(&entries.iter().find(|e| e.1 == "((Z3xZ3):Z8):Z2").unwrap().0), 144);
        debug_assert_eq!(profile_order(&entries.iter().find(|e| e.1 == "((Z4xZ4):Z3):Z2").unwrap().0), 96);

        let mut map: HashMap<(u64, Vec<(u64, u64)>), Option<&'static str>> = HashMap::new();
        for (profile, name) in entries.drain(..) {
            let key = (profile_order(&profile), profile.iter().map(|(&o, &c)| (o, c)).collect::<Vec<_>>());
            match map.entry(key) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    if e.get() != &Some(name) {
                        e.insert(None); // ambiguous fingerprint
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(Some(name));
                }
            }
        }
        map
    })
}

pub fn recognize(order: u64, profile: &Profile) -> Option<&'static str> {
    let key = (order, profile.iter().map(|(&o, &c)| (o, c)).collect::<Vec<_>>());
    table().get(&key).copied().flatten()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
