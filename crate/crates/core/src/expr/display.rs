//! Text rendering in the input syntax, independent of interning order.

use std::cmp::Ordering;

use num_traits::{One, Signed};

use super::atom::{Atom, Gen};
use super::poly::{Mono, Poly, Q};
use super::Expr;

pub fn atom_string(a: &Atom) -> String {
    match a {
        Atom::Indep(s) | Atom::Const(s) => s.to_string(),
        Atom::Jet { dep, index } => {
            if index.is_empty() {
                dep.to_string()
            } else {
                format!("{dep}[{index}]")
            }
        }
        Atom::Opaque { name, slots, args } => {
            let args: Vec<String> = args.iter().map(expr_string).collect();
            if slots.is_empty() {
                format!("{name}({})", args.join(","))
            } else {
                let s: Vec<String> = slots.iter().map(|k| (k + 1).to_string()).collect();
                format!("pd({name},{})({})", s.join(","), args.join(","))
            }
        }
        Atom::Elem { func, arg } => format!("{}({})", func.name(), expr_string(arg)),
        Atom::Root { base, q } => format!("({})^(1/{q})", expr_string(base)),
    }
}

fn sorted_mono(m: &Mono) -> Vec<(Gen, u32)> {
    let mut v: Vec<(Gen, u32)> = m.0.to_vec();
    v.sort_by(|a, b| a.0.display_cmp(&b.0));
    v
}

fn mono_cmp(a: &[(Gen, u32)], b: &[(Gen, u32)]) -> Ordering {
    let da: u32 = a.iter().map(|x| x.1).sum();
    let db: u32 = b.iter().map(|x| x.1).sum();
    db.cmp(&da).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            let c = x.0.display_cmp(&y.0).then_with(|| y.1.cmp(&x.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        a.len().cmp(&b.len())
    })
}

fn power_string(g: Gen, e: u32) -> String {
    let s = atom_string(g.atom());
    if e == 1 {
        s
    } else if matches!(g.atom(), Atom::Root { .. }) {
        format!("({s})^{e}")
    } else {
        format!("{s}^{e}")
    }
}

fn mono_string(m: &[(Gen, u32)]) -> String {
    m.iter().map(|&(g, e)| power_string(g, e)).collect::<Vec<_>>().join("*")
}

fn coeff_string(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn poly_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(Vec<(Gen, u32)>, &Q)> =
        p.terms.iter().map(|(m, c)| (sorted_mono(m), c)).collect();
    terms.sort_by(|a, b| mono_cmp(&a.0, &b.0).then_with(|| a.1.cmp(b.1)));
    let mut out = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_empty() {
            out.push_str(&coeff_string(&abs));
        } else if abs.is_one() {
            out.push_str(&mono_string(m));
        } else {
            out.push_str(&coeff_string(&abs));
            out.push('*');
            out.push_str(&mono_string(m));
        }
    }
    out
}

pub fn expr_string(e: &Expr) -> String {
    let f = e.frac();
    let num = poly_string(&f.num);
    if f.has_unit_den() {
        return num;
    }
    let mut parts: Vec<String> = Vec::new();
    let dm = sorted_mono(&f.den_mono);
    if !dm.is_empty() {
        parts.push(mono_string(&dm));
    }
    let mut factors: Vec<(String, u32)> =
        f.den_factors.iter().map(|(p, k)| (poly_string(p), *k)).collect();
    factors.sort();
    for (s, k) in factors {
        if k == 1 {
            parts.push(format!("({s})"));
        } else {
            parts.push(format!("({s})^{k}"));
        }
    }
    let single_atom = parts.len() == 1 && dm.len() == 1 && dm[0].1 == 1;
    let den = if single_atom || (parts.len() == 1 && dm.is_empty() && !parts[0].contains(")^")) {
        parts.join("*")
    } else {
        format!("({})", parts.join("*"))
    };
    let num_simple = f.num.len() == 1 && !num.starts_with('-');
    if num_simple {
        format!("{num}/{den}")
    } else {
        format!("({num})/{den}")
    }
}
