//! Expressions compiled to flat floating-point evaluators.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::lambert::lambert_w;
use crate::expr::{Atom, Elementary, Expr, Gen, Poly};

#[derive(Clone, Debug)]
struct CPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CPoly {
    fn new(p: &Poly, slot_of: &HashMap<Gen, usize>) -> CPoly {
        CPoly {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| {
                    let f = c.to_f64().unwrap_or(f64::NAN);
                    let v = m.0.iter().map(|(g, e)| (slot_of[g], *e as i32)).collect();
                    (f, v)
                })
                .collect(),
        }
    }

    fn eval(&self, vals: &[f64]) -> f64 {
        let mut s = 0.0;
        for (c, m) in &self.terms {
            let mut t = *c;
            for &(i, e) in m {
                t *= if e == 1 { vals[i] } else { vals[i].powi(e) };
            }
            s += t;
        }
        s
    }
}

#[derive(Clone, Debug)]
struct CFrac {
    num: CPoly,
    den: Vec<(CPoly, i32)>,
}

impl CFrac {
    fn eval(&self, vals: &[f64]) -> Result<f64, ()> {
        let n = self.num.eval(vals);
        let mut d = 1.0;
        for (p, k) in &self.den {
            d *= p.eval(vals).powi(*k);
        }
        if !d.is_finite() || d.abs() < 1e-12 {
            return Err(());
        }
        let v = n / d;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(())
        }
    }
}

#[derive(Clone, Debug)]
enum Slot {
    Input,
    Elem(Elementary, CFrac),
    Root(u32, CFrac),
}

/// A compiled expression. Inputs are the base coordinates and opaque atoms,
/// listed in [`Compiled::inputs`]; elementary and root atoms are computed.
#[derive(Clone, Debug)]
pub struct Compiled {
    inputs: Vec<Gen>,
    input_slots: Vec<usize>,
    slots: Vec<Slot>,
    out: CFrac,
}

/// Evaluation failure: a pole, a domain violation or a non-finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalFailure;

impl Compiled {
    pub fn new(e: &Expr) -> Compiled {
        let mut order: Vec<Gen> = Vec::new();
        let mut seen: HashMap<Gen, usize> = HashMap::new();
        visit(e, &mut order, &mut seen);
        let mut slots = Vec::with_capacity(order.len());
        for g in &order {
            let slot = match g.atom() {
                Atom::Elem { func, arg } => Slot::Elem(*func, cfrac(arg, &seen)),
                Atom::Root { base, q } => Slot::Root(*q, cfrac(base, &seen)),
                _ => Slot::Input,
            };
            slots.push(slot);
        }
        let mut inputs: Vec<(Gen, usize)> = order
            .iter()
            .enumerate()
            .filter(|(i, _)| matches!(slots[*i], Slot::Input))
            .map(|(i, g)| (*g, i))
            .collect();
        inputs.sort_by(|a, b| a.0.display_cmp(&b.0));
        Compiled {
            inputs: inputs.iter().map(|x| x.0).collect(),
            input_slots: inputs.iter().map(|x| x.1).collect(),
            slots,
            out: cfrac(e, &seen),
        }
    }

    pub fn inputs(&self) -> &[Gen] {
        &self.inputs
    }

    /// Evaluates with input values in the order of [`Compiled::inputs`].
    /// `scratch` is reused between calls.
    pub fn eval_with(&self, input: &[f64], scratch: &mut Vec<f64>) -> Result<f64, EvalFailure> {
        scratch.clear();
        scratch.resize(self.slots.len(), 0.0);
        for (k, &s) in self.input_slots.iter().enumerate() {
            scratch[s] = input[k];
        }
        for i in 0..self.slots.len() {
            match &self.slots[i] {
                Slot::Input => {}
                Slot::Elem(f, arg) => {
                    let a = arg.eval(scratch).map_err(|_| EvalFailure)?;
                    let v = match f {
                        Elementary::Exp => a.exp(),
                        Elementary::Sin => a.sin(),
                        Elementary::Cos => a.cos(),
                        Elementary::Sinh => a.sinh(),
                        Elementary::Cosh => a.cosh(),
                        Elementary::LambertW => lambert_w(a).map_err(|_| EvalFailure)?,
                    };
                    if !v.is_finite() {
                        return Err(EvalFailure);
                    }
                    scratch[i] = v;
                }
                Slot::Root(q, base) => {
                    let b = base.eval(scratch).map_err(|_| EvalFailure)?;
                    let v = if b >= 0.0 {
                        b.powf(1.0 / *q as f64)
                    } else if q % 2 == 1 {
                        -(-b).powf(1.0 / *q as f64)
                    } else {
                        return Err(EvalFailure);
                    };
                    scratch[i] = v;
                }
            }
        }
        self.out.eval(scratch).map_err(|_| EvalFailure)
    }

    pub fn eval(&self, input: &[f64]) -> Result<f64, EvalFailure> {
        let mut scratch = Vec::new();
        self.eval_with(input, &mut scratch)
    }

    /// Evaluates with inputs supplied by a lookup function.
    pub fn eval_by(&self, value: &mut dyn FnMut(Gen) -> f64) -> Result<f64, EvalFailure> {
        let input: Vec<f64> = self.inputs.iter().map(|g| value(*g)).collect();
        self.eval(&input)
    }
}

fn cfrac(e: &Expr, slot_of: &HashMap<Gen, usize>) -> CFrac {
    let f = e.frac();
    let mut den = Vec::new();
    if !f.den_mono.is_one() {
        den.push((CPoly::new(&Poly::monomial(f.den_mono.clone(), num_traits::One::one()), slot_of), 1));
    }
    for (p, k) in &f.den_factors {
        den.push((CPoly::new(p, slot_of), *k as i32));
    }
    CFrac { num: CPoly::new(&f.num, slot_of), den }
}

fn visit(e: &Expr, order: &mut Vec<Gen>, seen: &mut HashMap<Gen, usize>) {
    for g in e.gens() {
        if seen.contains_key(&g) {
            continue;
        }
        match g.atom() {
            Atom::Elem { arg, .. } => visit(arg, order, seen),
            Atom::Root { base, .. } => visit(base, order, seen),
            _ => {}
        }
        seen.insert(g, order.len());
        order.push(g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_nested_atoms() {
        let u = Expr::u("u", &[]);
        let e = Expr::exp(u.clone()) * &u + Expr::one().checked_div(&u).unwrap();
        let c = Compiled::new(&e);
        assert_eq!(c.inputs().len(), 1);
        let v = c.eval(&[2.0]).unwrap();
        assert!((v - (2.0 * 2f64.exp() + 0.5)).abs() < 1e-12_f64);
        assert!(c.eval(&[0.0]).is_err());
    }
}
