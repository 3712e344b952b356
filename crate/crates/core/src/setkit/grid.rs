use std::collections::BTreeMap;
use std::fmt;

use super::{CardClass, UpSet};

/// `⟨n, m⟩ = 2ⁿ(2m+1) − 1`; `None` on overflow.
pub fn pair(n: u64, m: u64) -> Option<u64> {
    let odd = m.checked_mul(2)?.checked_add(1)?;
    if n >= 64 {
        return None;
    }
    let shifted = odd.checked_mul(1u64 << n)?;
    Some(shifted - 1)
}

/// Inverse of [`pair`]: column is the trailing-zero count of `x + 1`.
pub fn unpair(x: u64) -> (u64, u64) {
    let y = x as u128 + 1;
    let n = y.trailing_zeros() as u64;
    let m = ((y >> n) - 1) / 2;
    (n, m as u64)
}

/// A subset of ω×ω whose columns come from finitely many ultimately
/// periodic column classes plus finitely many explicit overrides.
///
/// The column classes partition `ω ∖ overrides.keys()`. The descriptor
/// form `grid:cols=..;def=..;out=..` is the two-class case: columns in
/// `cols` hold `def`, the rest hold `out`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridSet {
    classes: Vec<(UpSet, UpSet)>,
    overrides: BTreeMap<u64, UpSet>,
}

impl GridSet {
    pub fn new(
        covered: UpSet,
        default: UpSet,
        outside: UpSet,
        overrides: BTreeMap<u64, UpSet>,
    ) -> Self {
        let outside_cols = covered.complement();
        Self::from_parts(vec![(covered, default), (outside_cols, outside)], overrides)
    }

    /// Builds from possibly overlapping classes: earlier classes take
    /// precedence on shared columns.
    pub fn from_parts(parts: Vec<(UpSet, UpSet)>, overrides: BTreeMap<u64, UpSet>) -> Self {
        let mut taken = UpSet::finite(overrides.keys().copied());
        let mut classes = Vec::new();
        for (cols, content) in parts {
            let cols = cols.diff(&taken);
            taken = taken.or(&cols);
            classes.push((cols, content));
        }
        // columns nobody claimed are empty
        let rest = taken.complement();
        classes.push((rest, UpSet::empty()));
        Self::normalize(classes, overrides)
    }

    fn normalize(classes: Vec<(UpSet, UpSet)>, overrides: BTreeMap<u64, UpSet>) -> Self {
        // group columns by content: infinitely many columns make a class,
        // finitely many become overrides
        let keys = UpSet::finite(overrides.keys().copied());
        let mut groups: BTreeMap<UpSet, UpSet> = BTreeMap::new();
        for (cols, content) in classes {
            let cols = cols.diff(&keys);
            if cols.is_empty() {
                continue;
            }
            let entry = groups.entry(content).or_insert_with(UpSet::empty);
            *entry = entry.or(&cols);
        }
        for (k, v) in overrides {
            let entry = groups.entry(v).or_insert_with(UpSet::empty);
            *entry = entry.or(&UpSet::finite([k]));
        }
        let mut grid = GridSet { classes: Vec::new(), overrides: BTreeMap::new() };
        for (content, cols) in groups {
            if cols.is_infinite() {
                grid.classes.push((cols, content));
            } else {
                for k in cols.iter_from(0) {
                    grid.overrides.insert(k, content.clone());
                }
            }
        }
        grid
    }

    fn class_content(&self, n: u64) -> Option<UpSet> {
        self.classes
            .iter()
            .find(|(cols, _)| cols.contains(n))
            .map(|(_, content)| content.clone())
    }

    /// The plane ω×ω.
    pub fn full() -> Self {
        Self::new(UpSet::omega(), UpSet::omega(), UpSet::empty(), BTreeMap::new())
    }

    /// `rows × cols`: each column in `cols` holds `rows`, others are empty.
    pub fn lift_rows(rows: &UpSet, cols: &UpSet) -> Self {
        Self::new(cols.clone(), rows.clone(), UpSet::empty(), BTreeMap::new())
    }

    pub fn classes(&self) -> &[(UpSet, UpSet)] {
        &self.classes
    }

    pub fn overrides(&self) -> &BTreeMap<u64, UpSet> {
        &self.overrides
    }

    pub fn column(&self, n: u64) -> UpSet {
        if let Some(v) = self.overrides.get(&n) {
            return v.clone();
        }
        self.class_content(n).unwrap_or_else(UpSet::empty)
    }

    /// Membership of the flattened point `x = ⟨n, m⟩`.
    pub fn contains_flat(&self, x: u64) -> bool {
        let (n, m) = unpair(x);
        self.column(n).contains(m)
    }

    pub fn contains(&self, n: u64, m: u64) -> bool {
        self.column(n).contains(m)
    }

    fn contents(&self) -> impl Iterator<Item = (&UpSet, &UpSet, bool)> {
        // (columns, content, columns-finite)
        self.classes
            .iter()
            .map(|(c, x)| (c, x, c.is_finite()))
    }

    pub fn combine(&self, other: &GridSet, f: impl Fn(bool, bool) -> bool + Copy) -> GridSet {
        let mut classes = Vec::new();
        for (ca, xa) in &self.classes {
            for (cb, xb) in &other.classes {
                let cols = ca.and(cb);
                if !cols.is_empty() {
                    classes.push((cols, xa.combine(xb, f)));
                }
            }
        }
        let mut overrides = BTreeMap::new();
        for &k in self.overrides.keys().chain(other.overrides.keys()) {
            overrides.insert(k, self.column(k).combine(&other.column(k), f));
        }
        // columns overridden on one side only fall out of the class product
        Self::normalize(classes, overrides)
    }

    pub fn and(&self, other: &GridSet) -> GridSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn or(&self, other: &GridSet) -> GridSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn diff(&self, other: &GridSet) -> GridSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> GridSet {
        GridSet {
            classes: self
                .classes
                .iter()
                .map(|(c, x)| (c.clone(), x.complement()))
                .collect(),
            overrides: self
                .overrides
                .iter()
                .map(|(k, v)| (*k, v.complement()))
                .collect(),
        }
    }

    /// Cardinality class of the set of points.
    pub fn card_class(&self) -> CardClass {
        let finite = self
            .contents()
            .all(|(_, x, cols_finite)| x.is_empty() || (cols_finite && x.is_finite()))
            && self.overrides.values().all(UpSet::is_finite);
        if finite {
            return CardClass::Finite;
        }
        let cofinite = self
            .contents()
            .all(|(_, x, cols_finite)| x.is_omega() || (cols_finite && x.is_cofinite()))
            && self.overrides.values().all(UpSet::is_cofinite);
        if cofinite {
            CardClass::Cofinite
        } else {
            CardClass::InfiniteCoinfinite
        }
    }

    pub fn is_empty(&self) -> bool {
        self.classes.iter().all(|(_, x)| x.is_empty())
            && self.overrides.values().all(UpSet::is_empty)
    }

    /// Column indices whose column satisfies `pred`, as a periodic set.
    pub fn columns_where(&self, pred: impl Fn(&UpSet) -> bool) -> UpSet {
        let mut out = UpSet::empty();
        for (cols, x) in &self.classes {
            if pred(x) {
                out = out.or(cols);
            }
        }
        let hits = self
            .overrides
            .iter()
            .filter(|(_, v)| pred(v))
            .map(|(k, _)| *k);
        out.or(&UpSet::finite(hits))
    }

    /// Distinct column contents that actually occur.
    pub fn distinct_columns(&self) -> Vec<UpSet> {
        let mut v: Vec<UpSet> = self
            .classes
            .iter()
            .map(|(_, x)| x.clone())
            .chain(self.overrides.values().cloned())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Exact grid form of a flattened periodic set.
    pub fn from_flat(s: &UpSet) -> GridSet {
        let l = s.threshold();
        let p = s.period_len();
        let a = p.trailing_zeros() as u64;
        let q = p >> a;
        // order of 2 modulo the odd part of the period
        let r = if q == 1 {
            1
        } else {
            let mut x = 2 % q;
            let mut r = 1;
            while x != 1 {
                x = x * 2 % q;
                r += 1;
            }
            r
        };
        let mut n0 = a;
        while n0 < 64 && (1u128 << n0) <= l as u128 {
            n0 += 1;
        }
        let mut overrides = BTreeMap::new();
        for n in 0..n0 {
            overrides.insert(n, Self::flat_column_direct(s, n));
        }
        let mut parts = Vec::new();
        for j in 0..r {
            let n = n0 + j;
            let mut period = vec![false; r as usize];
            period[j as usize] = true;
            let cols = UpSet::new(vec![false; n0 as usize], period).expect("nonempty period");
            parts.push((cols, Self::flat_column_periodic(s, n)));
        }
        Self::from_parts(parts, overrides)
    }

    fn flat_column_direct(s: &UpSet, n: u64) -> UpSet {
        let l = s.threshold() as u128;
        let p = s.period_len() as u128;
        let step = 1u128 << (n + 1);
        let base = (1u128 << n) - 1;
        let m0 = if base >= l { 0 } else { (l - base).div_ceil(step) };
        let bit = |m: u128| {
            let x = base + step * m;
            if x < l {
                s.prefix()[x as usize]
            } else {
                s.period()[((x - l) % p) as usize]
            }
        };
        let prefix = (0..m0).map(bit).collect();
        let period = (m0..m0 + p).map(bit).collect();
        UpSet::new(prefix, period).expect("nonempty period")
    }

    // column n lies entirely in the periodic part of s
    fn flat_column_periodic(s: &UpSet, n: u64) -> UpSet {
        let l = s.threshold() as u128;
        let p = s.period_len() as u128;
        let pow = |e: u64| -> u128 {
            let mut acc = 1u128 % p;
            let mut b = 2u128 % p;
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % p;
                }
                b = b * b % p;
                e >>= 1;
            }
            acc
        };
        let step = pow(n + 1);
        let base = (pow(n) + p - 1 % p) % p;
        let off = (base + p - l % p) % p;
        let period = (0..p)
            .map(|m| s.period()[((off + step * m) % p) as usize])
            .collect();
        UpSet::new(vec![], period).expect("nonempty period")
    }

    /// Two-class view `(cols, def, out)` when the grid has at most two
    /// column classes.
    pub fn two_class(&self) -> Option<(UpSet, UpSet, UpSet)> {
        match self.classes.as_slice() {
            [] => Some((UpSet::empty(), UpSet::empty(), UpSet::empty())),
            [(c, x)] => Some((c.clone(), x.clone(), UpSet::empty())),
            [(c, x), (_, y)] => Some((c.clone(), x.clone(), y.clone())),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> String {
        let mut out = String::from("grid:");
        let (first, rest) = match self.classes.split_first() {
            Some((f, r)) => (f.clone(), r),
            None => ((UpSet::empty(), UpSet::empty()), &[][..]),
        };
        let outside = rest.first().map(|(_, x)| x.clone()).unwrap_or_else(UpSet::empty);
        out.push_str(&format!("cols={};def={};out={}", first.0, first.1, outside));
        if rest.len() > 1 {
            let extra: Vec<String> = rest[1..]
                .iter()
                .map(|(c, x)| format!("{c}/{x}"))
                .collect();
            out.push_str(&format!(";cls={}", extra.join(",")));
        }
        if !self.overrides.is_empty() {
            let ovr: Vec<String> = self
                .overrides
                .iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect();
            out.push_str(&format!(";ovr={}", ovr.join(",")));
        }
        out
    }
}

impl fmt::Display for GridSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl fmt::Debug for GridSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridSet({})", self.descriptor())
    }
}
