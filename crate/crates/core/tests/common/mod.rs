//! Random differential functions over (t, x) for the property suites.
#![allow(dead_code)]

use proptest::prelude::*;
use qnoether::expr::{sym, Elementary, Expr, Sym};
use qnoether::jet::MultiIndex;
use qnoether::variational::LinearDiffOperator;

/// Derivative orders drawn for jet atoms, all of order at most 3.
pub const ORDERS: [&[&str]; 8] =
    [&[], &["x"], &["t"], &["x", "x"], &["t", "x"], &["t", "t"], &["x", "x", "x"], &["t", "x", "x"]];

/// Header that declares every atom the generators can produce.
pub const SCOPE: &str = "indep t, x; dep u, v; const b; func F(u, u[x]);";

pub fn vars() -> Vec<Sym> {
    vec![sym("t"), sym("x")]
}

pub fn deps(n: usize) -> Vec<Sym> {
    ["u", "v"][..n].iter().map(|d| sym(d)).collect()
}

fn atoms(ndeps: usize) -> Vec<Expr> {
    let u = Expr::u("u", &[]);
    let mut out = vec![
        Expr::indep("x"),
        Expr::indep("t"),
        Expr::constant("b"),
        Expr::exp(u.clone()),
        Expr::elem(Elementary::Sin, Expr::indep("x")),
        Expr::opaque("F", vec![], vec![u.clone(), Expr::u("u", &["x"])]),
        Expr::opaque("F", vec![1], vec![u, Expr::u("u", &["x"])]),
    ];
    for d in ["u", "v"].iter().take(ndeps) {
        for j in ORDERS {
            out.push(Expr::u(d, j));
        }
    }
    out
}

fn build(table: &[Expr], terms: &[(i64, Vec<usize>)]) -> Expr {
    Expr::sum(terms.iter().map(|(c, fs)| {
        let m = Expr::product(fs.iter().map(|&k| table[k].clone()));
        m.scale_int(*c)
    }))
}

/// Sums of up to `max_terms` monomials, each with up to three factors.
pub fn diff_fn(ndeps: usize, max_terms: usize) -> BoxedStrategy<Expr> {
    let table = atoms(ndeps);
    let n = table.len();
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..n, 0..=3)), 1..=max_terms)
        .prop_map(move |terms| build(&table, &terms))
        .boxed()
}

/// Polynomials in x, u and its x-derivatives only: right-hand sides of
/// evolution equations `u_t = f`.
pub fn evolution_rhs() -> BoxedStrategy<Expr> {
    let table = vec![
        Expr::indep("x"),
        Expr::constant("b"),
        Expr::u("u", &[]),
        Expr::u("u", &["x"]),
        Expr::u("u", &["x", "x"]),
        Expr::u("u", &["x", "x", "x"]),
        Expr::exp(Expr::u("u", &[])),
    ];
    let n = table.len();
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..n, 0..=3)), 1..=3)
        .prop_map(move |terms| build(&table, &terms))
        .boxed()
}

pub fn tuple(ndeps: usize, len: usize, max_terms: usize) -> BoxedStrategy<Vec<Expr>> {
    prop::collection::vec(diff_fn(ndeps, max_terms), len).boxed()
}

/// Random `rows x cols` operators with up to three derivative terms per entry.
pub fn operator(rows: usize, cols: usize) -> BoxedStrategy<LinearDiffOperator> {
    let entry = prop::collection::vec((0..ORDERS.len(), diff_fn(1, 2)), 0..=3);
    prop::collection::vec(entry, rows * cols)
        .prop_map(move |entries| {
            let mut op = LinearDiffOperator::zero(rows, cols);
            for (k, terms) in entries.into_iter().enumerate() {
                for (j, c) in terms {
                    op.add_term(k / cols, k % cols, MultiIndex::new(ORDERS[j].iter().copied()), c);
                }
            }
            op
        })
        .boxed()
}

pub fn dot(a: &[Expr], b: &[Expr]) -> Expr {
    Expr::sum(a.iter().zip(b).map(|(x, y)| x * y))
}

pub fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        rng_seed: proptest::test_runner::RngSeed::Fixed(42),
        ..ProptestConfig::default()
    }
}

/// Residuals of the operator identities; each must be the zero expression.
pub mod residual {
    use qnoether::expr::Expr;
    use qnoether::jet::{prolong_apply, Characteristic};
    use qnoether::systems::DifferentialSystem;
    use qnoether::variational::{
        euler, euler_all, frechet, helmholtz_defect, lagrange_fluxes, noether_remainder,
        reduce_operator_cosymmetry, FluxVector, LinearDiffOperator,
    };

    use super::{deps, dot, vars};

    /// `X_alpha e - alpha . E(e) - D_i R^i`.
    pub fn noether(e: &Expr, alpha: &[Expr]) -> Expr {
        let ds = deps(alpha.len());
        let a = Characteristic::new(ds.clone(), alpha.to_vec()).unwrap();
        let r = noether_remainder(&vars(), &a, e).unwrap();
        &(&prolong_apply(&a, e).unwrap() - &dot(alpha, &euler_all(e, &ds))) - &r.divergence()
    }

    /// `E_a(D_i P^i)` for every dependent variable.
    pub fn euler_of_divergence(p: &[Expr], ndeps: usize) -> Vec<Expr> {
        let div = FluxVector::new(&vars(), p.to_vec()).unwrap().divergence();
        euler_all(&div, &deps(ndeps))
    }

    /// `beta . D_Delta alpha - alpha . D*_Delta beta - D_i Q^i`.
    pub fn lagrange(alpha: &[Expr], beta: &[Expr], delta: &[Expr]) -> Expr {
        let ds = deps(alpha.len());
        let f = frechet(delta, &ds);
        let q = lagrange_fluxes(&vars(), &ds, alpha, beta, delta).unwrap();
        let lhs = &dot(beta, &f.apply(alpha).unwrap()) - &dot(alpha, &f.adjoint().apply(beta).unwrap());
        &lhs - &q.divergence()
    }

    /// `E(beta . Delta) - D*_Delta beta - D*_beta Delta`, per component.
    pub fn product_rule(beta: &[Expr], delta: &[Expr]) -> Vec<Expr> {
        let ds = deps(delta.len());
        let e = euler_all(&dot(beta, delta), &ds);
        let a = frechet(delta, &ds).adjoint().apply(beta).unwrap();
        let b = frechet(beta, &ds).adjoint().apply(delta).unwrap();
        e.iter().zip(a.iter().zip(&b)).map(|(e, (a, b))| &(e - a) - b).collect()
    }

    pub fn adjoint_involution(op: &LinearDiffOperator) -> bool {
        op.adjoint().adjoint().sub(op).unwrap().is_zero()
    }

    /// `D_i (R^i(beta Delta) - Q^i[alpha, beta, Delta] - Q^i[alpha, Delta, beta])`.
    pub fn noether_lagrange(alpha: &[Expr], beta: &[Expr], delta: &[Expr]) -> Expr {
        let ds = deps(alpha.len());
        let a = Characteristic::new(ds.clone(), alpha.to_vec()).unwrap();
        let r = noether_remainder(&vars(), &a, &dot(beta, delta)).unwrap();
        let q1 = lagrange_fluxes(&vars(), &ds, alpha, beta, delta).unwrap();
        let q2 = lagrange_fluxes(&vars(), &ds, alpha, delta, beta).unwrap();
        r.sub(&q1).sub(&q2).divergence()
    }

    /// On solutions, `E(beta Delta) - (D* - D)_Delta beta - D_Delta beta`.
    pub fn helmholtz_relation(s: &DifferentialSystem, beta: &Expr) -> Expr {
        let delta = s.residuals();
        let e = euler(&s.pair(&[beta.clone()]).unwrap(), "u");
        let h = helmholtz_defect(&delta, s.deps()).unwrap().apply(&[beta.clone()]).unwrap();
        let d = frechet(&delta, s.deps()).apply(&[beta.clone()]).unwrap();
        s.on_shell_reduce(&(&(&e - &h[0]) - &d[0])).unwrap()
    }

    /// `E(row . D_J Delta) - E(collapsed row . Delta)`.
    pub fn operator_cosymmetry(row: &LinearDiffOperator, delta: &Expr) -> Expr {
        let lhs = euler(&row.apply(&[delta.clone()]).unwrap()[0], "u");
        let beta = reduce_operator_cosymmetry(row);
        &lhs - &euler(&(&beta[0] * delta), "u")
    }
}

/// `u_t = -6 u u_x - u_xxx` and its one-soliton solution of speed `c`.
pub mod soliton {
    use qnoether::expr::Expr;
    use qnoether::numeval::{integrate_mol, GridState, MolOptions, Trajectory};
    use qnoether::systems::DifferentialSystem;

    pub const SPEED: f64 = 1.0;
    pub const X0: f64 = -20.0;
    pub const LENGTH: f64 = 40.0;

    pub fn system() -> DifferentialSystem {
        let u = |v: &[&str]| Expr::u("u", v);
        let rhs = -&(&(&u(&[]) * &u(&["x"])).scale_int(6) + &u(&["x", "x", "x"]));
        DifferentialSystem::scalar(&["t", "x"], "u", &["t"], rhs).unwrap()
    }

    pub fn exact(x: f64, t: f64) -> f64 {
        let c = SPEED;
        // distance to the nearest periodic image of the crest
        let mut z = x - c * t + 5.0;
        z -= LENGTH * (z / LENGTH).round();
        let s = 1.0 / (0.5 * c.sqrt() * z).cosh();
        0.5 * c * s * s
    }

    pub fn evolve(n: usize, dt: f64, t_end: f64) -> Trajectory {
        let u0 = GridState::sample(X0, LENGTH, n, 0.0, 1, |_, x| exact(x, 0.0)).unwrap();
        let mut opts = MolOptions::new(dt, t_end);
        opts.sample_every = ((t_end / dt / 20.0).round() as usize).max(1);
        integrate_mol(&system(), u0, &opts).unwrap()
    }

    /// Largest pointwise error against the exact soliton at the final time.
    pub fn final_error(tr: &Trajectory) -> f64 {
        let last = tr.last();
        (0..last.n()).map(|j| (last.fields[0][j] - exact(last.x(j), last.t)).abs()).fold(0.0, f64::max)
    }
}
