use std::cmp::Ordering;
use std::fmt;

use crate::expr::Sym;

/// Unordered multi-index `(j1, ..., jk)` over independent-variable names.
///
/// Stored as a sorted list, so `u[x,t]` and `u[t,x]` are the same coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<Sym>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Sym>,
    {
        let mut v: Vec<Sym> = vars.into_iter().map(Into::into).collect();
        v.sort();
        MultiIndex(v)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[Sym] {
        &self.0
    }

    /// Sign of `(-D)_J`.
    pub fn sign(&self) -> i64 {
        if self.0.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn with(&self, var: &Sym) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|s| s <= var);
        v.insert(pos, var.clone());
        MultiIndex(v)
    }

    pub fn concat(&self, other: &MultiIndex) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        MultiIndex(v)
    }

    /// Removes one occurrence of `var`, if present.
    pub fn without(&self, var: &Sym) -> Option<Self> {
        let pos = self.0.iter().position(|s| s == var)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(MultiIndex(v))
    }

    pub fn count(&self, var: &str) -> usize {
        self.0.iter().filter(|s| &***s == var).count()
    }

    /// True if `other` is a sub-multiset of `self`.
    pub fn contains(&self, other: &MultiIndex) -> bool {
        self.minus(other).is_some()
    }

    /// Multiset difference `self - other`, if `other` is contained in `self`.
    pub fn minus(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut rest = self.0.clone();
        for s in &other.0 {
            let pos = rest.iter().position(|r| r == s)?;
            rest.remove(pos);
        }
        Some(MultiIndex(rest))
    }

    /// Distinct variables with their multiplicities.
    pub fn counts(&self) -> Vec<(Sym, usize)> {
        let mut out: Vec<(Sym, usize)> = Vec::new();
        for s in &self.0 {
            match out.last_mut() {
                Some((last, n)) if last == s => *n += 1,
                _ => out.push((s.clone(), 1)),
            }
        }
        out
    }

    /// All sub-multisets `K` of `self` together with the Leibniz weight
    /// `prod_i C(J_i, K_i)`.
    pub fn sub_indices(&self) -> Vec<(MultiIndex, u64)> {
        let counts = self.counts();
        let mut out = vec![(Vec::<Sym>::new(), 1u64)];
        for (var, n) in counts {
            let mut next = Vec::new();
            for (base, w) in &out {
                for k in 0..=n {
                    let mut v = base.clone();
                    v.extend(std::iter::repeat(var.clone()).take(k));
                    next.push((v, w * binomial(n as u64, k as u64)));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(mut v, w)| {
                v.sort();
                (MultiIndex(v), w)
            })
            .collect()
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(","))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_insensitive() {
        assert_eq!(MultiIndex::new(["x", "t"]), MultiIndex::new(["t", "x"]));
        assert_eq!(MultiIndex::new(["x", "t", "x"]).count("x"), 2);
    }

    #[test]
    fn sub_indices_weights() {
        let j = MultiIndex::new(["x", "x", "t"]);
        let subs = j.sub_indices();
        assert_eq!(subs.len(), 6);
        let total: u64 = subs.iter().map(|(_, w)| w).sum();
        assert_eq!(total, 8);
        let xx = subs
            .iter()
            .find(|(k, _)| *k == MultiIndex::new(["x"]))
            .unwrap();
        assert_eq!(xx.1, 2);
    }

    #[test]
    fn minus_and_sign() {
        let j = MultiIndex::new(["x", "x", "t"]);
        assert_eq!(j.minus(&MultiIndex::new(["x"])), Some(MultiIndex::new(["x", "t"])));
        assert_eq!(j.minus(&MultiIndex::new(["y"])), None);
        assert_eq!(j.sign(), -1);
        assert_eq!(MultiIndex::empty().sign(), 1);
    }
}
