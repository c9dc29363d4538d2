//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::atom::Gen;

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Power product, sorted by generator id, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Mono(pub SmallVec<[(Gen, u32); 4]>);

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn var(g: Gen, e: u32) -> Self {
        if e == 0 {
            return Mono::one();
        }
        let mut v = SmallVec::new();
        v.push((g, e));
        Mono(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exp_of(&self, g: Gen) -> u32 {
        self.0
            .binary_search_by(|(h, _)| h.cmp(&g))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        self.0.iter().map(|(g, _)| *g)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    /// `self / other` if every exponent allows it.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        let b = &other.0;
        for &(g, e) in &self.0 {
            while j < b.len() && b[j].0 < g {
                return None;
            }
            if j < b.len() && b[j].0 == g {
                if b[j].1 > e {
                    return None;
                }
                if e > b[j].1 {
                    out.push((g, e - b[j].1));
                }
                j += 1;
            } else {
                out.push((g, e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Mono(out))
    }

    /// Componentwise minimum (monomial gcd).
    pub fn gcd(&self, other: &Mono) -> Mono {
        let mut out = SmallVec::new();
        for &(g, e) in &self.0 {
            let f = other.exp_of(g);
            if f > 0 {
                out.push((g, e.min(f)));
            }
        }
        Mono(out)
    }

    /// Componentwise maximum (monomial lcm).
    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut out: SmallVec<[(Gen, u32); 4]> = SmallVec::new();
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    pub fn without(&self, g: Gen) -> Mono {
        Mono(self.0.iter().copied().filter(|(h, _)| *h != g).collect())
    }

    pub fn with_exp(&self, g: Gen, e: u32) -> Mono {
        self.without(g).mul(&Mono::var(g, e))
    }

    pub fn pow(&self, n: u32) -> Mono {
        Mono(self.0.iter().map(|&(g, e)| (g, e * n)).collect())
    }

    /// Lexicographic monomial order, smaller generator id most significant.
    pub fn lex_cmp(&self, other: &Mono) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(g, e)), Some(&(h, f))) => match g.cmp(&h) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

/// Terms sorted by decreasing [`Mono::lex_cmp`]; no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    pub terms: Vec<(Mono, Q)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn monomial(m: Mono, c: Q) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(g: Gen) -> Self {
        Poly::monomial(Mono::var(g, 1), Q::one())
    }

    pub fn from_terms(mut terms: Vec<(Mono, Q)>) -> Self {
        terms.sort_by(|a, b| b.0.lex_cmp(&a.0));
        let mut out: Vec<(Mono, Q)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += c;
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    fn from_map(map: HashMap<Mono, Q>) -> Self {
        let mut terms: Vec<(Mono, Q)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.lex_cmp(&a.0));
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Mono, Q)> {
        self.terms.first()
    }

    pub fn gens(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = self.terms.iter().flat_map(|(m, _)| m.gens()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn degree_in(&self, g: Gen) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp_of(g)).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        merge(&self.terms, &other.terms, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        merge(&self.terms, &other.terms, true)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: HashMap<Mono, Q> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match map.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        Poly::from_map(map)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        for g in divisor.gens() {
            if divisor.degree_in(g) > self.degree_in(g) {
                return None;
            }
        }
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, Q)> = Vec::new();
        while let Some((rm, rc)) = rem.terms.first() {
            let m = rm.div(lm)?;
            let c = rc / lc;
            rem = rem.sub(&divisor.mul_term(&m, &c));
            quot.push((m, c));
        }
        Some(Poly::from_terms(quot))
    }

    /// Monomial content: the gcd of all monomials.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Mono::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.div(m).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }

    /// Splits `self = content * primitive`, where `primitive` has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn primitive_part(&self) -> (Q, Poly) {
        if self.is_zero() {
            return (Q::zero(), Poly::zero());
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut content = Q::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    pub fn partial(&self, g: Gen) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp_of(g);
            if e == 0 {
                continue;
            }
            terms.push((m.with_exp(g, e - 1), c * q_int(e as i64)));
        }
        Poly::from_terms(terms)
    }

    /// Coefficients with respect to powers of `g`: `self = sum_k c_k g^k`.
    pub fn coefficients_in(&self, g: Gen) -> Vec<(u32, Poly)> {
        let mut map: HashMap<u32, Vec<(Mono, Q)>> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.exp_of(g);
            map.entry(e).or_default().push((m.without(g), c.clone()));
        }
        let mut out: Vec<(u32, Poly)> = map.into_iter().map(|(e, t)| (e, Poly::from_terms(t))).collect();
        out.sort_by_key(|(e, _)| *e);
        out
    }

    pub fn total_cmp(&self, other: &Poly) -> Ordering {
        self.terms.len().cmp(&other.terms.len()).then_with(|| {
            for ((m1, c1), (m2, c2)) in self.terms.iter().zip(&other.terms) {
                let c = m1.lex_cmp(m2).then_with(|| c1.cmp(c2));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

fn merge(a: &[(Mono, Q)], b: &[(Mono, Q)], negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.lex_cmp(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for (m, c) in &b[j..] {
        out.push((m.clone(), if negate_b { -c } else { c.clone() }));
    }
    Poly { terms: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::atom::{sym, Atom};

    fn g(name: &str) -> Gen {
        Gen::intern(Atom::Const(sym(&format!("poly_test_{name}"))))
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = Poly::var(g("a"));
        let b = Poly::var(g("b"));
        let f = a.add(&b.scale(&q_int(2))).add(&Poly::one());
        let h = a.mul(&a).sub(&b);
        let p = f.mul(&h);
        assert_eq!(p.div_exact(&f), Some(h.clone()));
        assert_eq!(p.add(&Poly::one()).div_exact(&f), None);
    }

    #[test]
    fn primitive_part_normalizes_sign_and_content() {
        let a = Poly::var(g("a"));
        let p = a.scale(&q_frac(-4, 3)).add(&Poly::constant(q_frac(2, 3)));
        let (c, prim) = p.primitive_part();
        assert_eq!(c, q_frac(-2, 3));
        assert_eq!(prim, a.scale(&q_int(2)).sub(&Poly::one()));
    }
}
