//! Small subsets of {1, …, n} as bitmasks.
//!
//! Everything downstream (Plücker indices, matroid bases, region labels)
//! works with k-element subsets of a ground set of at most 16 columns, so a
//! `u32` mask with bit i−1 standing for element i is enough. Ordering is
//! lexicographic on the sorted element list, which keeps JSON key order and
//! necklace output stable.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_elems(elems: &[usize]) -> Subset {
        let mut mask = 0u32;
        for &e in elems {
            assert!((1..=16).contains(&e), "element {e} out of range");
            mask |= 1 << (e - 1);
        }
        Subset(mask)
    }

    pub fn full(n: usize) -> Subset {
        Subset((1u32 << n) - 1)
    }

    pub fn elems(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut m = self.0;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            out.push(b + 1);
            m &= m - 1;
        }
        out
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e >= 1 && e <= 16 && self.0 & (1 << (e - 1)) != 0
    }

    pub fn insert(self, e: usize) -> Subset {
        assert!((1..=16).contains(&e));
        Subset(self.0 | 1 << (e - 1))
    }

    pub fn remove(self, e: usize) -> Subset {
        assert!((1..=16).contains(&e));
        Subset(self.0 & !(1 << (e - 1)))
    }

    /// (self \ {i}) ∪ {j}.
    pub fn swap(self, i: usize, j: usize) -> Subset {
        self.remove(i).insert(j)
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Subset) -> Subset {
        Subset(self.0 ^ other.0)
    }

    pub fn min_elem(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// All k-element subsets of {1, …, n} in lexicographic order of their
    /// sorted element lists.
    pub fn k_subsets(n: usize, k: usize) -> Vec<Subset> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Subset>) {
            if cur.len() == k {
                out.push(Subset::from_elems(cur));
                return;
            }
            for e in start..=n {
                cur.push(e);
                rec(e + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(1, n, k, &mut current, &mut out);
        out
    }

    /// Concatenated index string, e.g. {1,2,5,7} → "1257". The element 10 is
    /// written as "10"; it can only occur last since elements are sorted.
    pub fn label(self) -> String {
        self.elems().iter().map(|e| e.to_string()).collect()
    }

    /// Parse a concatenated index string. Digits are single elements except
    /// that a trailing "10" is the element 10 when the ground set allows it.
    pub fn parse_label(s: &str, n: usize) -> Option<Subset> {
        let bytes = s.as_bytes();
        let mut elems = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if !c.is_ascii_digit() {
                return None;
            }
            if c == b'1' && n >= 10 && i + 1 < bytes.len() && bytes[i + 1] == b'0' {
                elems.push(10);
                i += 2;
                continue;
            }
            let d = (c - b'0') as usize;
            if d == 0 || d > n {
                return None;
            }
            elems.push(d);
            i += 1;
        }
        if elems.is_empty() {
            return None;
        }
        let mut sorted = elems.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != elems {
            return None;
        }
        Some(Subset::from_elems(&elems))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Subset) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    /// Lexicographic order on sorted element lists: {1,4} < {2,3}.
    fn cmp(&self, other: &Subset) -> std::cmp::Ordering {
        let mut a = self.0;
        let mut b = other.0;
        while a != 0 && b != 0 {
            let la = a.trailing_zeros();
            let lb = b.trailing_zeros();
            match la.cmp(&lb) {
                std::cmp::Ordering::Equal => {
                    a &= a - 1;
                    b &= b - 1;
                }
                ord => return ord,
            }
        }
        self.len().cmp(&other.len())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elems().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_elems() {
        let s = Subset::from_elems(&[1, 2, 5, 7]);
        assert_eq!(s.elems(), vec![1, 2, 5, 7]);
        assert_eq!(s.len(), 4);
        assert!(s.contains(5));
        assert!(!s.contains(3));
        assert_eq!(s.label(), "1257");
    }

    #[test]
    fn order_is_lex_on_lists() {
        // {1,4} before {2,3} even though its bitmask is larger.
        let a = Subset::from_elems(&[1, 4]);
        let b = Subset::from_elems(&[2, 3]);
        assert!(a < b);
    }

    #[test]
    fn k_subsets_count_and_order() {
        let all = Subset::k_subsets(4, 2);
        assert_eq!(all.len(), 6);
        let labels: Vec<String> = all.iter().map(|s| s.label()).collect();
        assert_eq!(labels, vec!["12", "13", "14", "23", "24", "34"]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn parse_labels() {
        assert_eq!(Subset::parse_label("1257", 9), Some(Subset::from_elems(&[1, 2, 5, 7])));
        assert_eq!(Subset::parse_label("110", 10), Some(Subset::from_elems(&[1, 10])));
        assert_eq!(Subset::parse_label("21", 9), None); // not sorted
        assert_eq!(Subset::parse_label("", 9), None);
    }

    #[test]
    fn swap_moves_one_element() {
        let s = Subset::from_elems(&[1, 2, 5, 7]);
        assert_eq!(s.swap(1, 3), Subset::from_elems(&[2, 3, 5, 7]));
    }
}
