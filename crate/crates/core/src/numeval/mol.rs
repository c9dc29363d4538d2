//! Method of lines for 1+1-dimensional evolution systems: fourth-order
//! central differences in space, classical Runge-Kutta in time.

use std::collections::HashMap;
use std::sync::Arc;

use super::compile::Compiled;
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Gen, Sym};
use crate::systems::DifferentialSystem;

const MAX_ORDER: usize = 4;
const GHOST: usize = 3;
const BLOW_UP: f64 = 1e12;

/// Exact field values `(dep index, x, t)` used for ghost points.
pub type ExactFn = Arc<dyn Fn(usize, f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Boundary {
    Periodic,
    /// Ghost points taken from a known solution; for non-periodic data.
    Exact(ExactFn),
}

impl std::fmt::Debug for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Periodic => f.write_str("Periodic"),
            Boundary::Exact(_) => f.write_str("Exact(..)"),
        }
    }
}

/// Field values on `x_j = x0 + j h`, `j = 0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridState {
    pub x0: f64,
    pub h: f64,
    pub t: f64,
    pub fields: Vec<Vec<f64>>,
}

impl GridState {
    /// Samples `init(dep, x)` on `n` points of spacing `length / n`.
    pub fn sample(
        x0: f64,
        length: f64,
        n: usize,
        t: f64,
        deps: usize,
        init: impl Fn(usize, f64) -> f64,
    ) -> Result<Self> {
        if n < 16 || length <= 0.0 {
            return Err(Error::Invalid(format!("grid needs n >= 16 and positive length, got {n}, {length}")));
        }
        let h = length / n as f64;
        let fields = (0..deps).map(|d| (0..n).map(|j| init(d, x0 + j as f64 * h)).collect()).collect();
        Ok(GridState { x0, h, t, fields })
    }

    pub fn n(&self) -> usize {
        self.fields.first().map_or(0, Vec::len)
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.h
    }
}

#[derive(Clone, Debug)]
pub struct MolOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Keep every `sample_every`-th step in the trajectory.
    pub sample_every: usize,
    pub boundary: Boundary,
    /// Values of the system's symbolic constants.
    pub params: HashMap<String, f64>,
}

impl MolOptions {
    pub fn new(dt: f64, t_end: f64) -> Self {
        MolOptions { dt, t_end, sample_every: 1, boundary: Boundary::Periodic, params: HashMap::new() }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<GridState>,
    pub boundary: Boundary,
    pub space: Sym,
    pub time: Sym,
    pub deps: Vec<Sym>,
    pub params: HashMap<String, f64>,
    /// Set when integration stopped early.
    pub aborted: Option<String>,
}

impl Trajectory {
    pub fn last(&self) -> &GridState {
        self.states.last().expect("trajectory has the initial state")
    }
}

#[derive(Clone, Copy, Debug)]
enum Source {
    Time,
    Space,
    Param(f64),
    Field { dep: usize, order: usize },
}

/// An expression evaluated pointwise on a grid, derivatives by stencils.
#[derive(Clone, Debug)]
pub struct GridExpr {
    compiled: Compiled,
    sources: Vec<Source>,
    orders: Vec<(usize, usize)>,
}

impl GridExpr {
    pub fn new(e: &Expr, time: &str, space: &str, deps: &[Sym], params: &HashMap<String, f64>) -> Result<Self> {
        let compiled = Compiled::new(e);
        let mut sources = Vec::new();
        let mut orders = Vec::new();
        for g in compiled.inputs() {
            let s = source_of(*g, time, space, deps, params)?;
            if let Source::Field { dep, order } = s {
                if !orders.contains(&(dep, order)) {
                    orders.push((dep, order));
                }
            }
            sources.push(s);
        }
        Ok(GridExpr { compiled, sources, orders })
    }

    /// Values at every grid point.
    pub fn eval(&self, state: &GridState, boundary: &Boundary) -> Result<Vec<f64>> {
        let n = state.n();
        let mut derivs: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
        let mut padded: HashMap<usize, Vec<f64>> = HashMap::new();
        for &(dep, order) in &self.orders {
            let ext = padded.entry(dep).or_insert_with(|| pad(state, dep, boundary));
            derivs.insert((dep, order), stencil(ext, order, state.h, n));
        }
        let mut out = Vec::with_capacity(n);
        let mut input = vec![0.0; self.sources.len()];
        let mut scratch = Vec::new();
        for j in 0..n {
            for (k, s) in self.sources.iter().enumerate() {
                input[k] = match *s {
                    Source::Time => state.t,
                    Source::Space => state.x(j),
                    Source::Param(v) => v,
                    Source::Field { dep, order } => derivs[&(dep, order)][j],
                };
            }
            let v = self
                .compiled
                .eval_with(&input, &mut scratch)
                .map_err(|_| Error::Domain(format!("evaluation failed at x = {}", state.x(j))))?;
            out.push(v);
        }
        Ok(out)
    }
}

fn source_of(g: Gen, time: &str, space: &str, deps: &[Sym], params: &HashMap<String, f64>) -> Result<Source> {
    match g.atom() {
        Atom::Indep(v) if &**v == time => Ok(Source::Time),
        Atom::Indep(v) if &**v == space => Ok(Source::Space),
        Atom::Const(c) => params
            .get(&**c)
            .map(|v| Source::Param(*v))
            .ok_or_else(|| Error::Invalid(format!("no value for constant {c}"))),
        Atom::Jet { dep, index } => {
            let d = deps
                .iter()
                .position(|x| x == dep)
                .ok_or_else(|| Error::Invalid(format!("unknown field {dep}")))?;
            if index.count(time) > 0 || index.count(space) != index.order() {
                return Err(Error::Invalid(format!("{} is not a spatial derivative", Expr::gen(g))));
            }
            if index.order() > MAX_ORDER {
                return Err(Error::Invalid(format!("{} exceeds spatial order {MAX_ORDER}", Expr::gen(g))));
            }
            Ok(Source::Field { dep: d, order: index.order() })
        }
        _ => Err(Error::Invalid(format!("cannot evaluate {} on a grid", Expr::gen(g)))),
    }
}

fn pad(state: &GridState, dep: usize, boundary: &Boundary) -> Vec<f64> {
    let f = &state.fields[dep];
    let n = f.len();
    let mut ext = Vec::with_capacity(n + 2 * GHOST);
    for k in 0..GHOST {
        let j = k as isize - GHOST as isize;
        ext.push(match boundary {
            Boundary::Periodic => f[(j + n as isize) as usize],
            Boundary::Exact(u) => u(dep, state.x0 + j as f64 * state.h, state.t),
        });
    }
    ext.extend_from_slice(f);
    for k in 0..GHOST {
        ext.push(match boundary {
            Boundary::Periodic => f[k],
            Boundary::Exact(u) => u(dep, state.x(n + k), state.t),
        });
    }
    ext
}

fn stencil(ext: &[f64], order: usize, h: f64, n: usize) -> Vec<f64> {
    let w: &[f64] = match order {
        0 => return ext[GHOST..GHOST + n].to_vec(),
        1 => &[0.0, 1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0, 0.0],
        2 => &[0.0, -1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0, 0.0],
        3 => &[1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0],
        _ => &[-1.0 / 6.0, 2.0, -13.0 / 2.0, 28.0 / 3.0, -13.0 / 2.0, 2.0, -1.0 / 6.0],
    };
    let scale = h.powi(order as i32);
    (0..n)
        .map(|j| {
            let mut s = 0.0;
            for (k, wk) in w.iter().enumerate() {
                if *wk != 0.0 {
                    s += wk * ext[j + k];
                }
            }
            s / scale
        })
        .collect()
}

/// Space and time variables of an evolution system `u^a_t = P^a`.
fn evolution_vars(s: &DifferentialSystem) -> Result<(Sym, Sym)> {
    if s.indeps().len() != 2 {
        return Err(Error::Invalid("method of lines needs exactly one spatial variable".into()));
    }
    let first = s.equations().first().ok_or_else(|| Error::Invalid("empty system".into()))?;
    if first.lead.order() != 1 {
        return Err(Error::Invalid("method of lines needs first-order evolution equations".into()));
    }
    let time = first.lead.vars()[0].clone();
    let space = s.indeps().iter().find(|v| **v != time).expect("two variables").clone();
    for d in s.deps() {
        let n = s.equations().iter().filter(|e| e.dep == *d).count();
        if n != 1 {
            return Err(Error::Invalid(format!("need exactly one evolution equation for {d}")));
        }
    }
    for e in s.equations() {
        if e.lead.order() != 1 || e.lead.vars()[0] != time {
            return Err(Error::Invalid(format!("equation {} is not an evolution equation in {time}", e.name)));
        }
    }
    Ok((time, space))
}

/// Integrates from `u0` up to `opts.t_end`. Blow-up ends the trajectory
/// early with a diagnostic in [`Trajectory::aborted`].
pub fn integrate_mol(s: &DifferentialSystem, u0: GridState, opts: &MolOptions) -> Result<Trajectory> {
    let (time, space) = evolution_vars(s)?;
    if u0.fields.len() != s.deps().len() {
        return Err(Error::Dimension("initial state does not match the dependent variables".into()));
    }
    if !(opts.dt > 0.0) {
        return Err(Error::Invalid("time step must be positive".into()));
    }
    let deps = s.deps().to_vec();
    let mut rhs: Vec<Option<GridExpr>> = vec![None; deps.len()];
    for e in s.equations() {
        let d = deps.iter().position(|x| *x == e.dep).expect("validated");
        rhs[d] = Some(GridExpr::new(&e.rhs, &time, &space, &deps, &opts.params)?);
    }
    let rhs: Vec<GridExpr> = rhs.into_iter().map(|r| r.expect("one per field")).collect();
    let eval_all = |st: &GridState| -> Result<Vec<Vec<f64>>> {
        rhs.iter().map(|r| r.eval(st, &opts.boundary)).collect()
    };
    let steps = ((opts.t_end - u0.t) / opts.dt).round().max(0.0) as usize;
    let mut traj = Trajectory {
        states: vec![u0.clone()],
        boundary: opts.boundary.clone(),
        space,
        time,
        deps: deps.clone(),
        params: opts.params.clone(),
        aborted: None,
    };
    let mut cur = u0;
    let dt = opts.dt;
    let every = opts.sample_every.max(1);
    for step in 1..=steps {
        let k1 = eval_all(&cur)?;
        let s2 = shifted(&cur, &[&k1], &[0.5 * dt], 0.5 * dt);
        let k2 = eval_all(&s2)?;
        let s3 = shifted(&cur, &[&k2], &[0.5 * dt], 0.5 * dt);
        let k3 = eval_all(&s3)?;
        let s4 = shifted(&cur, &[&k3], &[dt], dt);
        let k4 = eval_all(&s4)?;
        let w = dt / 6.0;
        cur = shifted(&cur, &[&k1, &k2, &k3, &k4], &[w, 2.0 * w, 2.0 * w, w], dt);
        if let Some(bad) = cur.fields.iter().flatten().find(|v| !v.is_finite() || v.abs() > BLOW_UP) {
            traj.aborted = Some(format!("blow-up at t = {:.6}: value {bad:e}", cur.t));
            traj.states.push(cur);
            return Ok(traj);
        }
        if step % every == 0 || step == steps {
            traj.states.push(cur.clone());
        }
    }
    Ok(traj)
}

fn shifted(base: &GridState, ks: &[&Vec<Vec<f64>>], ws: &[f64], dt: f64) -> GridState {
    let mut out = base.clone();
    out.t = base.t + dt;
    for (d, f) in out.fields.iter_mut().enumerate() {
        for (j, v) in f.iter_mut().enumerate() {
            for (k, w) in ks.iter().zip(ws) {
                *v += w * k[d][j];
            }
        }
    }
    out
}

/// Quadrature of `density` over the grid: periodic sum for periodic data,
/// trapezoid rule otherwise.
pub fn integral(traj: &Trajectory, density: &GridExpr, state: &GridState) -> Result<f64> {
    let vals = density.eval(state, &traj.boundary)?;
    let n = vals.len();
    Ok(match traj.boundary {
        Boundary::Periodic => state.h * vals.iter().sum::<f64>(),
        Boundary::Exact(_) => state.h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[n - 1])),
    })
}

/// `max_t |I(t) - I(0)| / max(1, |I(0)|)` for `I(t) = int density dx`.
pub fn functional_drift(traj: &Trajectory, density: &Expr) -> Result<f64> {
    let g = GridExpr::new(density, &traj.time, &traj.space, &traj.deps, &traj.params)?;
    let i0 = integral(traj, &g, &traj.states[0])?;
    let mut worst: f64 = 0.0;
    for st in &traj.states[1..] {
        worst = worst.max((integral(traj, &g, st)? - i0).abs());
    }
    Ok(worst / i0.abs().max(1.0))
}

/// Largest `|e|` over all grid points of all states.
pub fn max_over_trajectory(traj: &Trajectory, e: &Expr) -> Result<f64> {
    let g = GridExpr::new(e, &traj.time, &traj.space, &traj.deps, &traj.params)?;
    let mut worst: f64 = 0.0;
    for st in &traj.states {
        for v in g.eval(st, &traj.boundary)? {
            worst = worst.max(v.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: &[&str]) -> Expr {
        Expr::u("u", v)
    }

    #[test]
    fn stencils_are_fourth_order_on_smooth_data() {
        let n = 64;
        let st = GridState::sample(0.0, std::f64::consts::TAU, n, 0.0, 1, |_, x| x.sin()).unwrap();
        let ext = pad(&st, 0, &Boundary::Periodic);
        let exact = [|x: f64| x.cos(), |x: f64| -x.sin(), |x: f64| -x.cos(), |x: f64| x.sin()];
        for (k, f) in exact.iter().enumerate() {
            let d = stencil(&ext, k + 1, st.h, n);
            let err = (0..n).map(|j| (d[j] - f(st.x(j))).abs()).fold(0.0, f64::max);
            assert!(err < 1e-4, "order {} error {err}", k + 1);
        }
    }

    #[test]
    fn frozen_equation_stays_constant() {
        let s = DifferentialSystem::scalar(&["t", "x"], "u", &["t"], Expr::zero()).unwrap();
        let u0 = GridState::sample(0.0, 1.0, 32, 0.0, 1, |_, x| (3.0 * x).cos()).unwrap();
        let tr = integrate_mol(&s, u0.clone(), &MolOptions::new(0.01, 0.5)).unwrap();
        assert_eq!(tr.last().fields, u0.fields);
    }

    #[test]
    fn heat_mode_decays_at_the_exact_rate() {
        let s = DifferentialSystem::scalar(&["t", "x"], "u", &["t"], u(&["x", "x"])).unwrap();
        let l = 2.0;
        let k = std::f64::consts::TAU / l;
        let u0 = GridState::sample(0.0, l, 64, 0.0, 1, |_, x| (k * x).sin()).unwrap();
        let tr = integrate_mol(&s, u0, &MolOptions::new(1e-4, 0.1)).unwrap();
        let last = tr.last();
        let decay = (-k * k * last.t).exp();
        let err = (0..last.n())
            .map(|j| (last.fields[0][j] - decay * (k * last.x(j)).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn blow_up_is_reported() {
        let s = DifferentialSystem::scalar(&["t", "x"], "u", &["t"], u(&[]).pow(2).unwrap()).unwrap();
        let u0 = GridState::sample(0.0, 1.0, 16, 0.0, 1, |_, _| 1.0).unwrap();
        let tr = integrate_mol(&s, u0, &MolOptions::new(0.01, 2.0)).unwrap();
        assert!(tr.aborted.is_some());
    }
}
