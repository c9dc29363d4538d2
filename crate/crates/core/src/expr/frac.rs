//! Canonical fractions: numerator polynomial over a factored denominator.

use num_traits::{One, Zero};

use super::atom::{Atom, Elementary, Gen};
use super::poly::{Mono, Poly, Q};
use super::Expr;

/// `num / (den_mono * prod factor^k)`.
///
/// Factors are primitive, non-monomial, non-constant, with positive leading
/// coefficient, sorted and merged. All rational content lives in `num`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Frac {
    pub num: Poly,
    pub den_mono: Mono,
    pub den_factors: Vec<(Poly, u32)>,
}

impl Frac {
    pub fn zero() -> Frac {
        Frac::default()
    }

    pub fn constant(c: Q) -> Frac {
        Frac { num: Poly::constant(c), ..Frac::default() }
    }

    pub fn gen(g: Gen) -> Frac {
        Frac::from_poly(Poly::var(g))
    }

    pub fn from_poly(p: Poly) -> Frac {
        build(p, Mono::one(), Vec::new(), true)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn has_unit_den(&self) -> bool {
        self.den_mono.is_one() && self.den_factors.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.has_unit_den() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// All generators that occur at the top level.
    pub fn gens(&self) -> Vec<Gen> {
        let mut v = self.num.gens();
        v.extend(self.den_mono.gens());
        for (f, _) in &self.den_factors {
            v.extend(f.gens());
        }
        v.sort();
        v.dedup();
        v
    }

    pub fn den_poly(&self) -> Poly {
        let mut p = Poly::monomial(self.den_mono.clone(), Q::one());
        for (f, k) in &self.den_factors {
            p = p.mul(&f.pow(*k));
        }
        p
    }

    pub fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), ..self.clone() }
    }

    pub fn scale(&self, c: &Q) -> Frac {
        if c.is_zero() {
            return Frac::zero();
        }
        Frac { num: self.num.scale(c), ..self.clone() }
    }

    pub fn add(&self, other: &Frac) -> Frac {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.has_unit_den() && other.has_unit_den() {
            return build(self.num.add(&other.num), Mono::one(), Vec::new(), false);
        }
        if self.den_mono == other.den_mono && self.den_factors == other.den_factors {
            return build(
                self.num.add(&other.num),
                self.den_mono.clone(),
                self.den_factors.clone(),
                true,
            );
        }
        let lcm_mono = self.den_mono.lcm(&other.den_mono);
        let mut lcm_factors: Vec<(Poly, u32)> = self.den_factors.clone();
        for (f, k) in &other.den_factors {
            match lcm_factors.iter_mut().find(|(g, _)| g == f) {
                Some(entry) => entry.1 = entry.1.max(*k),
                None => lcm_factors.push((f.clone(), *k)),
            }
        }
        let cofactor = |fr: &Frac| -> Poly {
            let m = lcm_mono.div(&fr.den_mono).expect("lcm divisible");
            let mut p = Poly::monomial(m, Q::one());
            for (f, k) in &lcm_factors {
                let have = fr
                    .den_factors
                    .iter()
                    .find(|(g, _)| g == f)
                    .map(|(_, j)| *j)
                    .unwrap_or(0);
                if *k > have {
                    p = p.mul(&f.pow(*k - have));
                }
            }
            p
        };
        let num = self.num.mul(&cofactor(self)).add(&other.num.mul(&cofactor(other)));
        build(num, lcm_mono, lcm_factors, true)
    }

    pub fn sub(&self, other: &Frac) -> Frac {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        if self.is_zero() || other.is_zero() {
            return Frac::zero();
        }
        if self.has_unit_den() && other.has_unit_den() {
            return build(self.num.mul(&other.num), Mono::one(), Vec::new(), false);
        }
        // Each operand is reduced, so only cross pairs can cancel.
        let (n1, d1m, d1f) = cross_cancel(&self.num, &other.den_mono, &other.den_factors);
        let (n2, d2m, d2f) = cross_cancel(&other.num, &self.den_mono, &self.den_factors);
        let mut factors = d1f;
        for (f, k) in d2f {
            match factors.iter_mut().find(|(g, _)| *g == f) {
                Some(e) => e.1 += k,
                None => factors.push((f, k)),
            }
        }
        build(n1.mul(&n2), d1m.mul(&d2m), factors, false)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Frac> {
        if self.is_zero() {
            return None;
        }
        let num = self.den_poly();
        let mc = self.num.mono_content();
        let rest = self.num.div_mono(&mc);
        let (c, prim) = rest.primitive_part();
        let num = num.scale(&c.recip());
        let factors = if prim.as_constant().is_some() { Vec::new() } else { vec![(prim, 1)] };
        Some(build(num, mc, factors, false))
    }

    pub fn pow(&self, n: u32) -> Frac {
        let mut acc = Frac::constant(Q::one());
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

    /// `1 / den` as a fraction (numerator one).
    pub fn den_recip(&self) -> Frac {
        Frac {
            num: Poly::one(),
            den_mono: self.den_mono.clone(),
            den_factors: self.den_factors.clone(),
        }
    }

    pub fn numerator(&self) -> Frac {
        Frac { num: self.num.clone(), ..Frac::default() }
    }
}

/// Removes from `num` what divides it in the denominator parts.
fn cross_cancel(num: &Poly, dm: &Mono, df: &[(Poly, u32)]) -> (Poly, Mono, Vec<(Poly, u32)>) {
    let mut num = num.clone();
    let g = num.mono_content().gcd(dm);
    let dm = if g.is_one() {
        dm.clone()
    } else {
        num = num.div_mono(&g);
        dm.div(&g).expect("gcd divides")
    };
    let mut out = Vec::with_capacity(df.len());
    for (f, k) in df {
        let mut k = *k;
        while k > 0 {
            match num.div_exact(f) {
                Some(q) => {
                    num = q;
                    k -= 1;
                }
                None => break,
            }
        }
        if k > 0 {
            out.push((f.clone(), k));
        }
    }
    (num, dm, out)
}

fn needs_rewrite(g: Gen) -> bool {
    g.is_exp() || g.is_cosh() || g.root_degree().is_some()
}

/// Core normalizer. `cancel` asks for trial division of the numerator by
/// the denominator parts.
pub(crate) fn build(num: Poly, dm: Mono, factors: Vec<(Poly, u32)>, cancel: bool) -> Frac {
    if num.is_zero() {
        return Frac::zero();
    }
    let special_num = num.terms.iter().any(|(m, _)| m.gens().any(needs_rewrite));
    let special_den = dm.gens().any(needs_rewrite);
    if special_num || special_den {
        let has_root = num.terms.iter().any(|(m, _)| {
            m.0.iter().any(|(g, e)| g.root_degree().is_some_and(|q| *e >= q))
        }) || dm.gens().any(|g| g.root_degree().is_some());
        if has_root {
            return reduce_roots(num, dm, factors);
        }
        let mut num = rewrite_num(num);
        let mut dm = dm;
        let mut factors = factors;
        if special_den {
            let (n2, dm2, extra) = rewrite_den_mono(&num, &dm);
            num = n2;
            dm = dm2;
            factors.extend(extra);
        }
        return finish(num, dm, factors, true);
    }
    finish(num, dm, factors, cancel)
}

fn finish(mut num: Poly, mut dm: Mono, factors: Vec<(Poly, u32)>, cancel: bool) -> Frac {
    if num.is_zero() {
        return Frac::zero();
    }
    let mut fs: Vec<(Poly, u32)> = Vec::with_capacity(factors.len());
    for (f, k) in factors {
        if k == 0 {
            continue;
        }
        let mc = f.mono_content();
        let f = if mc.is_one() {
            f
        } else {
            dm = dm.mul(&mc.pow(k));
            f.div_mono(&mc)
        };
        let (c, prim) = f.primitive_part();
        num = num.scale(&c.pow(-(k as i32)));
        if prim.as_constant().is_some() {
            continue;
        }
        match fs.iter_mut().find(|(g, _)| *g == prim) {
            Some(e) => e.1 += k,
            None => fs.push((prim, k)),
        }
    }
    let scalar = split_nested(&mut fs);
    if !scalar.is_one() {
        num = num.scale(&scalar.recip());
    }
    if cancel || !dm.is_one() {
        let g = num.mono_content().gcd(&dm);
        if !g.is_one() {
            num = num.div_mono(&g);
            dm = dm.div(&g).expect("gcd divides");
        }
    }
    if cancel {
        for (f, k) in fs.iter_mut() {
            while *k > 0 {
                match num.div_exact(f) {
                    Some(q) => {
                        num = q;
                        *k -= 1;
                    }
                    None => break,
                }
            }
        }
        fs.retain(|(_, k)| *k > 0);
    }
    fs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Frac { num, den_mono: dm, den_factors: fs }
}

/// When one factor divides another, split the larger. Returns the scalar
/// the denominator picked up.
fn split_nested(fs: &mut Vec<(Poly, u32)>) -> Q {
    let mut scalar = Q::one();
    if fs.len() < 2 {
        return scalar;
    }
    let mut changed = true;
    while changed {
        changed = false;
        'outer: for i in 0..fs.len() {
            for j in 0..fs.len() {
                if i == j || fs[i].0.len() >= fs[j].0.len() {
                    continue;
                }
                if let Some(q) = fs[j].0.div_exact(&fs[i].0) {
                    let k = fs[j].1;
                    fs[i].1 += k;
                    fs.remove(j);
                    let (c, q) = q.primitive_part();
                    scalar *= c.pow(k as i32);
                    if q.as_constant().is_none() {
                        match fs.iter_mut().find(|(g, _)| *g == q) {
                            Some(e) => e.1 += k,
                            None => fs.push((q, k)),
                        }
                    }
                    changed = true;
                    break 'outer;
                }
            }
        }
    }
    scalar
}

fn exp_arg(g: Gen) -> &'static Expr {
    match g.atom() {
        Atom::Elem { func: Elementary::Exp, arg } => arg,
        _ => unreachable!("not an exp atom"),
    }
}

fn cosh_arg(g: Gen) -> &'static Expr {
    match g.atom() {
        Atom::Elem { func: Elementary::Cosh, arg } => arg,
        _ => unreachable!("not a cosh atom"),
    }
}

/// Exp collection and `cosh^2 -> 1 + sinh^2` on every monomial.
fn rewrite_num(num: Poly) -> Poly {
    let mut out: Vec<(Mono, Q)> = Vec::with_capacity(num.terms.len());
    let mut expanded: Option<Poly> = None;
    for (m, c) in num.terms {
        let exps = m.0.iter().filter(|(g, _)| g.is_exp()).count();
        let plain = exps <= 1
            && !m.0.iter().any(|(g, e)| (g.is_exp() && *e > 1) || (g.is_cosh() && *e >= 2));
        if plain {
            out.push((m, c));
            continue;
        }
        let (rest, exp_factor, cosh_extra) = split_special(&m);
        let mut mono = rest;
        if let Some(g) = exp_factor {
            mono = mono.mul(&Mono::var(g, 1));
        }
        match cosh_extra {
            None => out.push((mono, c)),
            Some(p) => {
                let t = p.mul_term(&mono, &c);
                let t = rewrite_num(t);
                expanded = Some(match expanded {
                    None => t,
                    Some(acc) => acc.add(&t),
                });
            }
        }
    }
    let base = Poly::from_terms(out);
    match expanded {
        None => base,
        Some(p) => base.add(&p),
    }
}

/// Returns (monomial without exp/extra cosh powers, collected exp atom,
/// polynomial from `cosh^2` reductions).
fn split_special(m: &Mono) -> (Mono, Option<Gen>, Option<Poly>) {
    let mut rest = Mono::one();
    let mut exp_arg_sum: Option<Expr> = None;
    let mut cosh_poly: Option<Poly> = None;
    for &(g, e) in &m.0 {
        if g.is_exp() {
            let a = exp_arg(g).scale_int(e as i64);
            exp_arg_sum = Some(match exp_arg_sum {
                None => a,
                Some(s) => &s + &a,
            });
        } else if g.is_cosh() && e >= 2 {
            rest = rest.mul(&Mono::var(g, e % 2));
            let s = Gen::intern(Atom::Elem { func: Elementary::Sinh, arg: cosh_arg(g).clone() });
            let one_plus = Poly::one().add(&Poly::monomial(Mono::var(s, 2), Q::one()));
            let p = one_plus.pow(e / 2);
            cosh_poly = Some(match cosh_poly {
                None => p,
                Some(acc) => acc.mul(&p),
            });
        } else {
            rest = rest.mul(&Mono::var(g, e));
        }
    }
    let exp_gen = exp_arg_sum.and_then(|a| {
        if a.is_zero() {
            None
        } else {
            Some(Gen::intern(Atom::Elem { func: Elementary::Exp, arg: a }))
        }
    });
    (rest, exp_gen, cosh_poly)
}

/// Moves exp atoms out of the denominator monomial and turns even cosh
/// powers there into `1 + sinh^2` factors.
fn rewrite_den_mono(num: &Poly, dm: &Mono) -> (Poly, Mono, Vec<(Poly, u32)>) {
    let mut keep = Mono::one();
    let mut neg_exp: Option<Expr> = None;
    let mut factors = Vec::new();
    for &(g, e) in &dm.0 {
        if g.is_exp() {
            let a = exp_arg(g).scale_int(-(e as i64));
            neg_exp = Some(match neg_exp {
                None => a,
                Some(s) => &s + &a,
            });
        } else if g.is_cosh() && e >= 2 {
            keep = keep.mul(&Mono::var(g, e % 2));
            let s = Gen::intern(Atom::Elem { func: Elementary::Sinh, arg: cosh_arg(g).clone() });
            factors.push((Poly::one().add(&Poly::monomial(Mono::var(s, 2), Q::one())), e / 2));
        } else {
            keep = keep.mul(&Mono::var(g, e));
        }
    }
    let num = match neg_exp {
        Some(a) if !a.is_zero() => {
            let g = Gen::intern(Atom::Elem { func: Elementary::Exp, arg: a });
            rewrite_num(num.mul(&Poly::var(g)))
        }
        _ => num.clone(),
    };
    (num, keep, factors)
}

fn root_base(g: Gen) -> (&'static Expr, u32) {
    match g.atom() {
        Atom::Root { base, q } => (base, *q),
        _ => unreachable!("not a root atom"),
    }
}

/// `r^q -> base` in the numerator; denominator powers of `r` are
/// rationalized through `1/r^k = r^(q-k)/base`.
fn reduce_roots(num: Poly, dm: Mono, factors: Vec<(Poly, u32)>) -> Frac {
    let mut acc = Frac::zero();
    for (m, c) in num.terms {
        let mut keep = Mono::one();
        let mut extra = Frac::constant(Q::one());
        for &(g, e) in &m.0 {
            match g.root_degree() {
                Some(q) if e >= q => {
                    keep = keep.mul(&Mono::var(g, e % q));
                    extra = extra.mul(&root_base(g).0.frac().pow(e / q));
                }
                _ => keep = keep.mul(&Mono::var(g, e)),
            }
        }
        let t = build(Poly::monomial(keep, c), Mono::one(), Vec::new(), false).mul(&extra);
        acc = acc.add(&t);
    }
    let mut keep = Mono::one();
    let mut den_extra = Frac::constant(Q::one());
    for &(g, e) in &dm.0 {
        match g.root_degree() {
            Some(q) => {
                let base = root_base(g).0.frac();
                let inv = base.recip().expect("root of zero");
                den_extra = den_extra.mul(&inv.pow(e / q));
                let r = e % q;
                if r > 0 {
                    den_extra = den_extra.mul(&Frac::gen(g).pow(q - r)).mul(&inv);
                }
            }
            None => keep = keep.mul(&Mono::var(g, e)),
        }
    }
    let rest = build(Poly::one(), keep, factors, false);
    acc.mul(&rest).mul(&den_extra)
}
