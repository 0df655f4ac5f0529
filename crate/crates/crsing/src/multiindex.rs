//! Multiindices with graded lexicographic order.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial in `n` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multiindex(pub Vec<u32>);

impl Multiindex {
    pub fn zero(n: usize) -> Self {
        Multiindex(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        Multiindex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, o: &Multiindex) -> Multiindex {
        debug_assert_eq!(self.len(), o.len());
        Multiindex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` if any entry would go negative.
    pub fn checked_sub(&self, o: &Multiindex) -> Option<Multiindex> {
        debug_assert_eq!(self.len(), o.len());
        let mut v = Vec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            if a < b {
                return None;
            }
            v.push(a - b);
        }
        Some(Multiindex(v))
    }

    pub fn divides(&self, o: &Multiindex) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for Multiindex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Graded lex: lower total degree first, then lexicographic on exponents.
impl Ord for Multiindex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Multiindex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All multiindices in `n` variables of exact degree `d`, graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Multiindex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fill(&mut out, &mut cur, 0, d);
    out.sort();
    out
}

fn fill(out: &mut Vec<Multiindex>, cur: &mut Vec<u32>, pos: usize, rem: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = rem;
        out.push(Multiindex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for k in 0..=rem {
        cur[pos] = k;
        fill(out, cur, pos + 1, rem - k);
    }
    cur[pos] = 0;
}

/// All multiindices of degree `lo..=hi`.
pub fn monomials_in_range(n: usize, lo: u32, hi: u32) -> Vec<Multiindex> {
    let mut out = Vec::new();
    for d in lo..=hi {
        out.extend(monomials_of_degree(n, d));
    }
    out
}

/// Number of monomials of exact degree `d` in `n` variables.
pub fn count_of_degree(n: usize, d: u32) -> u128 {
    // C(d + n - 1, n - 1)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 1..n as u128 {
        num = num.saturating_mul(d as u128 + k);
        den *= k;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let mut v = monomials_in_range(2, 0, 2);
        let w = v.clone();
        v.sort();
        assert_eq!(v, w);
        // (0,2) < (1,1) < (2,0)
        assert!(Multiindex(vec![0, 2]) < Multiindex(vec![1, 1]));
        assert!(Multiindex(vec![1, 1]) < Multiindex(vec![2, 0]));
        // degree dominates
        assert!(Multiindex(vec![2, 0]) < Multiindex(vec![0, 3]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 4).len() as u128, count_of_degree(3, 4));
        assert_eq!(monomials_of_degree(1, 7).len(), 1);
    }
}
