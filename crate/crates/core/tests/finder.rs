use qnoether::corpus::{default_dir, parse_item_file};
use qnoether::expr::{q_int, Expr, Q};
use qnoether::finder::{candidate_residual, find_characteristics, find_cosymmetries, AnsatzBasis, SolutionSpace};
use qnoether::systems::{check_characteristic, check_cosymmetry, CheckConfig, DifferentialSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// System and ansatz of the first finder claim in a corpus file.
fn search_problem(file: &str) -> (DifferentialSystem, AnsatzBasis) {
    let path = default_dir().join(file);
    let (f, items) = parse_item_file(&std::fs::read_to_string(&path).unwrap(), &path).unwrap();
    let claim = items.iter().flat_map(|i| &i.claims).find(|c| c.check.starts_with("find-")).unwrap();
    (f.system().clone(), AnsatzBasis::scalar(claim.groups[0].clone()).unwrap())
}

fn spot_check_completeness(s: &DifferentialSystem, space: &SolutionSpace, on_shell: bool, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = space.basis.len();
    let mut tried = 0;
    while tried < 10 {
        let c: Vec<Q> = (0..m).map(|_| q_int(rng.gen_range(-3..=3))).collect();
        if space.contains(&c) {
            continue;
        }
        tried += 1;
        let r = candidate_residual(s, &space.basis.combine(&c), on_shell).unwrap();
        assert!(r.iter().any(|e| !e.is_zero()), "{c:?} left no residual");
    }
}

fn run(file: &str) -> (DifferentialSystem, SolutionSpace, SolutionSpace) {
    let (s, basis) = search_problem(file);
    let cos = find_cosymmetries(&s, &basis).unwrap();
    let chars = find_characteristics(&s, &basis).unwrap();
    let cfg = CheckConfig::default();
    for beta in cos.multipliers() {
        assert!(check_cosymmetry(&s, &beta, &cfg).unwrap().is_verified(), "{file}: {beta:?}");
    }
    for (v, beta) in chars.vectors.iter().zip(chars.multipliers()) {
        assert!(check_characteristic(&s, &beta, &cfg).unwrap().is_verified(), "{file}: {beta:?}");
        assert!(cos.contains(v));
    }
    spot_check_completeness(&s, &cos, true, 42);
    spot_check_completeness(&s, &chars, false, 43);
    (s, cos, chars)
}

#[test]
fn heat_type_equations_with_low_powers_have_multipliers() {
    for n in 0..3 {
        let (_, cos, _) = run(&format!("uxn-{n}.sys"));
        assert!(!cos.is_empty(), "n = {n}");
    }
    let (_, cos, _) = run("uxn-2.sys");
    let e = vec![Expr::exp(Expr::u("u", &[]))];
    assert!(cos.contains(&cos.basis.coordinates(&e).unwrap()));
}

#[test]
fn cubic_power_has_no_multiplier_in_the_ansatz() {
    let (_, cos, chars) = run("uxn-3.sys");
    assert!(cos.is_empty() && chars.is_empty());
}

#[test]
fn burgers_has_only_the_constant_multiplier() {
    let (_, cos, _) = run("burgers2.sys");
    let one = cos.basis.coordinates(&[Expr::one()]).unwrap();
    assert!(cos.spanned_by(&[one]));
    assert_eq!(cos.dim(), 1);
}

#[test]
fn basis_must_be_free_of_proportional_elements() {
    let u = Expr::u("u", &[]);
    assert!(AnsatzBasis::scalar(vec![u.clone(), u.scale_int(2)]).is_err());
    assert!(AnsatzBasis::scalar(vec![&Expr::constant("b") * &u]).is_err());
}
