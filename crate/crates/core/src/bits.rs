//! Fixed-width bitsets over point ids.
//!
//! PG(2,q) has q^2+q+1 <= 183 points for q <= 13, so a point set fits in
//! three 64-bit words. Sets are compared by the "lowest differing bit"
//! rule, which for sets of equal size coincides with lexicographic order
//! on the sorted id vectors.

use std::cmp::Ordering;

pub const WORDS: usize = 3;
pub const MAX_BITS: usize = WORDS * 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
pub struct Mask {
    pub w: [u64; WORDS],
}

impl Mask {
    pub const EMPTY: Mask = Mask { w: [0; WORDS] };

    /// Mask with bits 0..n set.
    pub fn all_below(n: usize) -> Mask {
        debug_assert!(n <= MAX_BITS);
        let mut m = Mask::EMPTY;
        for i in 0..WORDS {
            let lo = i * 64;
            if n >= lo + 64 {
                m.w[i] = !0;
            } else if n > lo {
                m.w[i] = (1u64 << (n - lo)) - 1;
            }
        }
        m
    }

    /// Mask with bits >= k set (up to MAX_BITS).
    pub fn all_from(k: usize) -> Mask {
        let mut m = Mask::EMPTY;
        for i in 0..WORDS {
            let lo = i * 64;
            if k <= lo {
                m.w[i] = !0;
            } else if k < lo + 64 {
                m.w[i] = !0 << (k - lo);
            }
        }
        m
    }

    #[inline]
    pub fn set(&mut self, id: u16) {
        self.w[(id >> 6) as usize] |= 1u64 << (id & 63);
    }

    #[inline]
    pub fn clear(&mut self, id: u16) {
        self.w[(id >> 6) as usize] &= !(1u64 << (id & 63));
    }

    #[inline]
    pub fn test(&self, id: u16) -> bool {
        self.w[(id >> 6) as usize] & (1u64 << (id & 63)) != 0
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.w.iter().map(|x| x.count_ones()).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.w == [0; WORDS]
    }

    #[inline]
    pub fn or(&self, o: &Mask) -> Mask {
        Mask { w: [self.w[0] | o.w[0], self.w[1] | o.w[1], self.w[2] | o.w[2]] }
    }

    #[inline]
    pub fn and(&self, o: &Mask) -> Mask {
        Mask { w: [self.w[0] & o.w[0], self.w[1] & o.w[1], self.w[2] & o.w[2]] }
    }

    #[inline]
    pub fn minus(&self, o: &Mask) -> Mask {
        Mask { w: [self.w[0] & !o.w[0], self.w[1] & !o.w[1], self.w[2] & !o.w[2]] }
    }

    #[inline]
    pub fn or_with(&mut self, o: &Mask) {
        for i in 0..WORDS {
            self.w[i] |= o.w[i];
        }
    }

    #[inline]
    pub fn and_count(&self, o: &Mask) -> u32 {
        (self.w[0] & o.w[0]).count_ones() + (self.w[1] & o.w[1]).count_ones() + (self.w[2] & o.w[2]).count_ones()
    }

    #[inline]
    pub fn intersects(&self, o: &Mask) -> bool {
        (self.w[0] & o.w[0]) | (self.w[1] & o.w[1]) | (self.w[2] & o.w[2]) != 0
    }

    pub fn is_subset_of(&self, o: &Mask) -> bool {
        (0..WORDS).all(|i| self.w[i] & !o.w[i] == 0)
    }

    /// Smallest set id, if any.
    pub fn first(&self) -> Option<u16> {
        for i in 0..WORDS {
            if self.w[i] != 0 {
                return Some((i * 64) as u16 + self.w[i].trailing_zeros() as u16);
            }
        }
        None
    }

    pub fn iter(&self) -> MaskIter {
        MaskIter { m: *self, word: 0 }
    }

    pub fn ids(&self) -> Vec<u16> {
        self.iter().collect()
    }

    pub fn from_ids<I: IntoIterator<Item = u16>>(ids: I) -> Mask {
        let mut m = Mask::EMPTY;
        for id in ids {
            m.set(id);
        }
        m
    }

    /// Total order: the set holding the lowest differing bit is smaller.
    /// For equal cardinalities this is lexicographic order on sorted ids.
    pub fn set_cmp(&self, o: &Mask) -> Ordering {
        for i in 0..WORDS {
            let d = self.w[i] ^ o.w[i];
            if d != 0 {
                let low = d & d.wrapping_neg();
                return if self.w[i] & low != 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.set_cmp(other))
    }
}

impl Ord for Mask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.set_cmp(other)
    }
}

impl std::fmt::Debug for Mask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, id) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", id)?;
        }
        write!(f, "}}")
    }
}

pub struct MaskIter {
    m: Mask,
    word: usize,
}

impl Iterator for MaskIter {
    type Item = u16;

    #[inline]
    fn next(&mut self) -> Option<u16> {
        while self.word < WORDS {
            let w = self.m.w[self.word];
            if w != 0 {
                let bit = w.trailing_zeros();
                self.m.w[self.word] = w & (w - 1);
                return Some((self.word * 64) as u16 + bit as u16);
            }
            self.word += 1;
        }
        None
    }
}
