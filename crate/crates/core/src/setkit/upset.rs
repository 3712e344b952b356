use std::fmt;

use num_integer::Integer;

use super::{CardClass, SetError};

/// An ultimately periodic subset of ω.
///
/// Membership of `n < prefix.len()` is `prefix[n]`; membership of larger `n`
/// is `period[(n - prefix.len()) % period.len()]`. Values are always kept in
/// canonical form (primitive period, shortest prefix), so `==` is set
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl UpSet {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self, SetError> {
        if period.is_empty() {
            return Err(SetError::EmptyPeriod);
        }
        Ok(Self::canonical(prefix, period))
    }

    fn canonical(mut prefix: Vec<bool>, mut period: Vec<bool>) -> Self {
        debug_assert!(!period.is_empty());
        let p = period.len();
        for d in 1..=p {
            if p % d == 0 && (d..p).all(|i| period[i] == period[i - d]) {
                period.truncate(d);
                break;
            }
        }
        while let Some(&last) = prefix.last() {
            if last != *period.last().unwrap() {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        UpSet { prefix, period }
    }

    pub fn empty() -> Self {
        UpSet { prefix: vec![], period: vec![false] }
    }

    pub fn omega() -> Self {
        UpSet { prefix: vec![], period: vec![true] }
    }

    /// `[n, ∞)`.
    pub fn tail(n: u64) -> Self {
        Self::canonical(vec![false; n as usize], vec![true])
    }

    /// `[a, b)`.
    pub fn interval(a: u64, b: u64) -> Self {
        let b = b.max(a);
        let mut prefix = vec![false; b as usize];
        for bit in &mut prefix[a as usize..] {
            *bit = true;
        }
        Self::canonical(prefix, vec![false])
    }

    pub fn finite<I: IntoIterator<Item = u64>>(elems: I) -> Self {
        let mut prefix = Vec::new();
        for e in elems {
            let e = e as usize;
            if prefix.len() <= e {
                prefix.resize(e + 1, false);
            }
            prefix[e] = true;
        }
        Self::canonical(prefix, vec![false])
    }

    /// `{n : n ≡ residue (mod modulus)}`.
    pub fn residue(modulus: u64, residue: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let mut period = vec![false; modulus as usize];
        period[(residue % modulus) as usize] = true;
        Self::canonical(vec![], period)
    }

    pub fn multiples(m: u64) -> Self {
        Self::residue(m, 0)
    }

    pub fn evens() -> Self {
        Self::residue(2, 0)
    }

    pub fn odds() -> Self {
        Self::residue(2, 1)
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    /// Index from which membership is purely periodic.
    pub fn threshold(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn period_len(&self) -> u64 {
        self.period.len() as u64
    }

    pub fn contains(&self, n: u64) -> bool {
        let l = self.prefix.len() as u64;
        if n < l {
            self.prefix[n as usize]
        } else {
            self.period[((n - l) % self.period.len() as u64) as usize]
        }
    }

    /// Pointwise combination of two sets, aligned on a common prefix length
    /// and the lcm of the periods.
    pub fn combine(&self, other: &UpSet, f: impl Fn(bool, bool) -> bool) -> UpSet {
        let l = self.prefix.len().max(other.prefix.len());
        let p = self.period.len().lcm(&other.period.len());
        let prefix = (0..l as u64)
            .map(|n| f(self.contains(n), other.contains(n)))
            .collect();
        let period = (l as u64..(l + p) as u64)
            .map(|n| f(self.contains(n), other.contains(n)))
            .collect();
        Self::canonical(prefix, period)
    }

    pub fn and(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn or(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn diff(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> UpSet {
        UpSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            period: self.period.iter().map(|b| !b).collect(),
        }
    }

    pub fn card_class(&self) -> CardClass {
        // canonical periods of constant words have length 1
        match self.period.as_slice() {
            [false] => CardClass::Finite,
            [true] => CardClass::Cofinite,
            _ => CardClass::InfiniteCoinfinite,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty() && self.period == [false]
    }

    pub fn is_omega(&self) -> bool {
        self.prefix.is_empty() && self.period == [true]
    }

    pub fn is_finite(&self) -> bool {
        self.card_class() == CardClass::Finite
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_cofinite(&self) -> bool {
        self.card_class() == CardClass::Cofinite
    }

    /// `self ⊆* other`.
    pub fn almost_subset(&self, other: &UpSet) -> bool {
        self.diff(other).is_finite()
    }

    pub fn is_subset(&self, other: &UpSet) -> bool {
        self.diff(other).is_empty()
    }

    /// Least element `≥ n`, if any.
    pub fn next_at_or_after(&self, n: u64) -> Option<u64> {
        let l = self.prefix.len() as u64;
        if n < l {
            if let Some(i) = self.prefix[n as usize..].iter().position(|&b| b) {
                return Some(n + i as u64);
            }
        }
        let start = n.max(l);
        let p = self.period.len() as u64;
        (0..p).map(|i| start + i).find(|&m| self.contains(m))
    }

    pub fn min_elem(&self) -> Option<u64> {
        self.next_at_or_after(0)
    }

    /// Largest element of a finite nonempty set.
    pub fn max_elem(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        self.prefix.iter().rposition(|&b| b).map(|i| i as u64)
    }

    /// Elements in increasing order starting at `from`.
    pub fn iter_from(&self, from: u64) -> impl Iterator<Item = u64> + '_ {
        let mut next = self.next_at_or_after(from);
        std::iter::from_fn(move || {
            let cur = next?;
            next = cur.checked_add(1).and_then(|n| self.next_at_or_after(n));
            Some(cur)
        })
    }

    pub fn elements_below(&self, bound: u64) -> Vec<u64> {
        self.iter_from(0).take_while(|&n| n < bound).collect()
    }

    pub fn count_below(&self, bound: u64) -> usize {
        self.iter_from(0).take_while(|&n| n < bound).count()
    }

    /// `Some(m)` iff the set is exactly `[m, ∞)`.
    pub fn as_tail(&self) -> Option<u64> {
        if self.period == [true] && self.prefix.iter().all(|&b| !b) {
            Some(self.prefix.len() as u64)
        } else {
            None
        }
    }

    /// Least `t` with `[t, ∞) ⊆ self`, for cofinite sets.
    pub fn tail_start(&self) -> Option<u64> {
        if !self.is_cofinite() {
            return None;
        }
        Some(self.prefix.iter().rposition(|&b| !b).map_or(0, |i| i as u64 + 1))
    }

    /// Horizon past which two sets' joint behaviour repeats: the bound
    /// used by window comparisons.
    pub fn joint_horizon(&self, other: &UpSet) -> u64 {
        let l = self.prefix.len().max(other.prefix.len()) as u64;
        let p = self.period.len().lcm(&other.period.len()) as u64;
        l + 4 * p
    }

    pub fn descriptor(&self) -> String {
        fn bits(v: &[bool]) -> String {
            v.iter().map(|&b| if b { '1' } else { '0' }).collect()
        }
        format!("up:pre={};per={}", bits(&self.prefix), bits(&self.period))
    }
}

impl fmt::Display for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl fmt::Debug for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UpSet({})", self.descriptor())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_are_structural() {
        let a = UpSet::new(vec![true, false], vec![true, false, true, false]).unwrap();
        assert_eq!(a, UpSet::evens());
        assert_eq!(a.prefix(), &[] as &[bool]);
        assert_eq!(UpSet::new(vec![false; 3], vec![true, true]).unwrap(), UpSet::tail(3));
        assert_eq!(UpSet::new(vec![], vec![]), Err(SetError::EmptyPeriod));
    }

    #[test]
    fn basic_sets() {
        assert!(UpSet::evens().contains(0) && !UpSet::evens().contains(1));
        assert_eq!(UpSet::evens().and(&UpSet::odds()), UpSet::empty());
        assert_eq!(UpSet::evens().or(&UpSet::odds()), UpSet::omega());
        assert_eq!(UpSet::tail(5).card_class(), CardClass::Cofinite);
        assert_eq!(UpSet::finite([1, 3]).max_elem(), Some(3));
        assert_eq!(UpSet::tail(7).as_tail(), Some(7));
        assert_eq!(UpSet::finite([0, 1]).complement().tail_start(), Some(2));
    }

    #[test]
    fn almost_inclusion_examples() {
        let evens_minus = UpSet::evens().diff(&UpSet::finite([0, 2]));
        assert!(evens_minus.almost_subset(&UpSet::evens()));
        assert!(UpSet::evens().almost_subset(&evens_minus));
        assert!(!UpSet::evens().almost_subset(&UpSet::odds()));
    }

    #[test]
    fn next_element_search() {
        let s = UpSet::multiples(4).and(&UpSet::tail(3));
        assert_eq!(s.next_at_or_after(0), Some(4));
        assert_eq!(s.next_at_or_after(5), Some(8));
        assert_eq!(UpSet::finite([2]).next_at_or_after(3), None);
        let v: Vec<u64> = UpSet::odds().iter_from(4).take(3).collect();
        assert_eq!(v, vec![5, 7, 9]);
    }
}
