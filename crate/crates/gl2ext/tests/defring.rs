mod common;

use std::collections::BTreeMap;

use gl2ext::defring::*;
use gl2ext::exactalg::{rat, ratio, MPoly, Rat, RatFunc};
use gl2ext::typesweights::{x_rho_lambda, AdmElt, HTWeight, RhoBarData};
use proptest::prelude::*;

fn v(name: &str) -> MPoly {
    MPoly::var(name)
}

fn fa() -> MPoly {
    v("fa")
}

fn k(c: i64) -> MPoly {
    MPoly::int(c)
}

fn table_lens(case: Case, m: i64, n: i64) -> [i64; 4] {
    match case {
        Case::T => [m + 1, n, m, n + 1],
        Case::WT => [m, n + 1, m, n + 1],
    }
}

#[test]
fn equations_agree_with_the_matrix_formulation() {
    for (case, m, n) in all_cases(5) {
        let sys = build_equations(case, m, n);
        let (hs, ms) = common::equations_from_matrix(table_lens(case, m, n), m + n);
        for (kk, h) in hs.iter().enumerate() {
            assert_eq!(sys.get(EqLabel::H(kk as i64)).unwrap(), h, "{case}({m},{n}) H({kk})");
        }
        for (&(kk, s, t), mm) in &ms {
            assert_eq!(sys.get(EqLabel::M { k: kk, s, t }).unwrap(), mm, "{case}({m},{n}) M_{kk}({s},{t})");
        }
        assert_eq!(sys.equations.len(), hs.len() + ms.len());
    }
}

#[test]
fn trace_identity_holds_for_every_system() {
    let mut total = 0;
    for (case, m, n) in all_cases(8) {
        total += build_equations(case, m, n).check_trace_identity().unwrap();
    }
    assert!(total > 100);
}

#[test]
fn small_systems() {
    let sys = build_equations(Case::T, 1, 0);
    assert_eq!(sys.equations.len(), 1);
    let sys = build_equations(Case::T, 2, 2);
    // a0 d0 + p b0 c0
    assert_eq!(sys.get(EqLabel::H(0)).unwrap().nterms(), 2);
    assert_eq!(sys.variables.len(), 3 + 2 + 2 + 3);
}

#[test]
fn closed_forms_verify_for_all_small_cases() {
    for (case, m, n) in all_cases(6) {
        let r = verify_solution(case, m, n).unwrap_or_else(|e| panic!("{case}({m},{n}): {e}"));
        assert_eq!(r.checks.len(), build_equations(case, m, n).equations.len());
    }
}

#[test]
fn relations_hold_for_all_small_cases() {
    for (case, m, n) in all_cases(6) {
        let r = verify_relations(case, m, n).unwrap_or_else(|e| panic!("{case}({m},{n}): {e}"));
        assert!(!r.identities.is_empty());
    }
}

#[test]
fn corrupted_solutions_are_rejected() {
    for (case, m, n, var) in [
        (Case::T, 2, 1, "c0"),
        (Case::T, 1, 1, "c0"),
        (Case::T, 3, 2, "a2"),
        (Case::T, 1, 2, "d1"),
        (Case::WT, 2, 1, "c0"),
        (Case::WT, 3, 1, "b0"),
        (Case::WT, 1, 2, "a0"),
    ] {
        let sys = build_equations(case, m, n);
        let sol = closed_form(case, m, n).unwrap().with_sign_flipped(var);
        let star = star_generator(case, m, n, false, StarRange::Adopted).unwrap();
        match verify_assignment(&sys, &sol, &star) {
            Err(DefRingError::VerificationFailed { remainder, .. }) => assert!(!remainder.is_zero()),
            other => panic!("{case}({m},{n}) flip {var}: expected failure, got {:?}", other.map(|_| ())),
        }
    }
}

#[test]
fn printed_wt_range_is_too_short() {
    for (_, m, n) in all_cases(5).into_iter().filter(|c| c.0 == Case::WT) {
        assert!(verify_solution_with(Case::WT, m, n, StarRange::Adopted).is_ok());
        let lit = verify_solution_with(Case::WT, m, n, StarRange::Literal);
        assert!(
            matches!(lit, Err(DefRingError::VerificationFailed { .. }) | Err(DefRingError::StarNotGenerated { .. })),
            "WT({m},{n}) {:?}",
            lit.map(|r| r.star)
        );
    }
}

#[test]
fn out_of_domain_is_an_error() {
    assert!(matches!(closed_form(Case::WT, 0, 2), Err(DefRingError::OutOfTableDomain { .. })));
    assert!(matches!(closed_form(Case::T, 0, 0), Err(DefRingError::OutOfTableDomain { .. })));
    assert!(matches!(bold(Case::T, 1, 2, Family::A, 1), Err(DefRingError::OutOfTableDomain { .. })));
}

#[test]
fn reflection_matches_the_swap_rule() {
    // T(1,2) from T(2,1): a ↔ d, c ↔ −b, 𝔞 ↔ 1 − 𝔞, applied by hand.
    let src = closed_form(Case::T, 2, 1).unwrap();
    let dst = closed_form(Case::T, 1, 2).unwrap();
    let map: BTreeMap<String, RatFunc> = [
        ("fa", RatFunc::one() - RatFunc::var("fa")),
        ("A0", RatFunc::var("D0")),
        ("D0", RatFunc::var("A0")),
        ("B0", -RatFunc::var("C0")),
        ("C0", -RatFunc::var("B0")),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b))
    .collect();
    for i in 0..2 {
        let want = src.assignment[&format!("d{i}")].subst_all(&map).unwrap();
        assert_eq!(dst.assignment[&format!("a{i}")], want);
        let want = -src.assignment[&format!("c{i}")].subst_all(&map).unwrap();
        assert_eq!(dst.assignment[&format!("b{i}")], want);
    }
    assert_eq!(dst.source, Some((Case::T, 2, 1)));
    // Z keeps the same shape after reflection, in both cases.
    for (case, m, n) in all_cases(6) {
        let sol = closed_form(case, m, n).unwrap();
        if sol.source.is_some() && !(case == Case::T && m == 0) {
            assert_eq!(sol.z, z_of(case, m, n), "{case}({m},{n})");
        }
    }
}

#[test]
fn star_generator_examples() {
    let t21 = star_generator(Case::T, 2, 1, false, StarRange::Adopted).unwrap();
    let z_2p = (fa() - k(1)) * (fa() - k(2)) * v("B0") * v("C0") - k(2) * v("p") * v("A0") * v("D0");
    assert_eq!(t21.polys(), vec![v("B0") * &z_2p]);
    let t11 = star_generator(Case::T, 1, 1, false, StarRange::Adopted).unwrap();
    let z_p = fa() * (fa() - k(1)) * v("B0") * v("C0") - v("p") * v("A0") * v("D0");
    assert_eq!(t11.polys(), vec![v("B0") * &z_p, v("C0") * &z_p]);
    // With γ ≠ 0, 𝒄₀ is a unit and the pair collapses.
    let t11g = star_generator(Case::T, 1, 1, true, StarRange::Adopted).unwrap();
    assert_eq!(t11g.polys(), vec![z_p]);
    // WT(1,0): one factor Z + (𝔞 − 1)𝔞 p under the adopted range, none printed.
    let wt10 = star_generator(Case::WT, 1, 0, false, StarRange::Adopted).unwrap();
    let f = (fa() - k(1)) * fa() * v("A0") * v("D0") + (fa() - k(1)) * fa() * v("p") * v("B0") * v("C0");
    assert_eq!(wt10.polys(), vec![f]);
    assert!(star_generator(Case::WT, 1, 0, false, StarRange::Literal).unwrap().zero);
}

#[test]
fn prime_ideal_examples() {
    let g = prime_ideal(Case::T, 2, 1, 0, false).unwrap();
    let want = (fa() - k(1)) * (fa() - k(2)) * v("B0") * v("C0") - k(2) * v("p") * v("A0") * v("D0");
    assert_eq!(g.poly(), &want);
    let g = prime_ideal(Case::T, 2, 1, 1, false).unwrap();
    assert!(matches!(g, PrimeGenerator::Exceptional { ref var, .. } if var == "B0"));
    let g = prime_ideal(Case::WT, 2, 1, 0, false).unwrap();
    let want = (fa() - k(1)) * fa() * v("A0") * v("D0") + (fa() - k(2)) * (fa() + k(1)) * v("p") * v("B0") * v("C0");
    assert_eq!(g.poly(), &want);
    for (case, m, n, l2) in [(Case::T, 2, 1, 2), (Case::T, 1, 1, 1), (Case::WT, 2, 1, 2), (Case::WT, 1, 3, 1)] {
        assert!(matches!(
            prime_ideal(case, m, n, l2, false),
            Err(DefRingError::InadmissibleWeight { .. })
        ));
    }
    // λ₂ = m < n: the 𝒄₀ generator exists only when γ = 0.
    assert!(matches!(
        prime_ideal(Case::T, 1, 2, 1, false).unwrap(),
        PrimeGenerator::Exceptional { ref var, .. } if var == "C0"
    ));
    assert!(prime_ideal(Case::T, 1, 2, 1, true).is_err());
}

#[test]
fn component_counts() {
    let r = component_count_consistency(Case::T, 2, 1, false, 0, StarRange::Adopted).unwrap();
    assert_eq!((r.star_components, r.s_count, r.matches), (2, 2, true));
    let r = component_count_consistency(Case::T, 1, 1, false, 0, StarRange::Adopted).unwrap();
    assert_eq!((r.star_components, r.s_count, r.matches), (1, 1, true));
    let r = component_count_consistency(Case::WT, 2, 1, false, 0, StarRange::Literal).unwrap();
    assert!(!r.matches);
    assert_eq!((r.star_components, r.s_count), (1, 2));
    let r = component_count_consistency(Case::WT, 2, 1, false, 0, StarRange::Adopted).unwrap();
    assert!(r.matches);
    for (case, m, n) in all_cases(6) {
        for gamma in [false, true] {
            for l2 in 0..=m.min(n) + 1 {
                let a = component_count_consistency(case, m, n, gamma, l2, StarRange::Adopted).unwrap();
                assert!(a.matches, "{case}({m},{n}) γ={gamma} λ₂={l2}: {a:?}");
                if case == Case::WT {
                    let l = component_count_consistency(case, m, n, gamma, l2, StarRange::Literal).unwrap();
                    assert!(!l.factorization_matches, "{case}({m},{n})");
                }
            }
        }
    }
}

#[test]
fn reports_serialize() {
    let r = verify_solution(Case::WT, 2, 1).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    assert!(s.contains("\"case\":\"WT\""));
    let sol = closed_form(Case::T, 1, 2).unwrap();
    let back: ClosedFormSolution = serde_json::from_str(&serde_json::to_string(&sol).unwrap()).unwrap();
    assert_eq!(back.assignment, sol.assignment);
}

fn rho(p: u64, irr: bool, r: &[i64], g: &[bool]) -> RhoBarData {
    RhoBarData::new(p, irr, r.to_vec(), g.to_vec()).unwrap()
}

#[test]
fn presentation_of_barsotti_tate_type() {
    for f in 1..=2usize {
        let r = rho(101, false, &vec![40; f], &vec![false; f]);
        let eta = HTWeight(vec![(1, 0); f]);
        let full: Vec<AdmElt> = x_rho_lambda(&r, &eta)
            .into_iter()
            .filter(|w| presentation(&r, &eta, w).map(|s| s.m_count == f).unwrap_or(false))
            .collect();
        assert!(!full.is_empty(), "f={f}");
        let spec = presentation(&r, &eta, &full[0]).unwrap();
        assert_eq!(spec.components.len(), 1 << f);
        assert_eq!(spec.free_vars, 4);
        assert_eq!(spec.relations.len(), f);
        // The weight with all b_j = 0 is cut out by the x-variables.
        let zero = spec.components.iter().find(|c| c.label.is_empty()).unwrap();
        assert!(zero.z.iter().all(|z| z.starts_with('x')));
        for c in &spec.components {
            assert_eq!(c.z.iter().filter(|z| z.starts_with('y')).count(), c.label.len());
        }
    }
}

#[test]
fn presentation_errors() {
    let r = rho(101, false, &[40, 50], &[false, false]);
    let eta = HTWeight(vec![(1, 0); 2]);
    // Something in Adm but outside X has an empty intersection.
    let outside: Vec<AdmElt> = gl2ext::typesweights::adm_set(&eta)
        .into_iter()
        .filter(|w| !x_rho_lambda(&r, &eta).contains(w))
        .collect();
    for w in outside {
        assert!(matches!(presentation(&r, &eta, &w), Err(DefRingError::EmptyIntersection)));
    }
    let small = rho(11, false, &[3, 5], &[false, false]);
    let w = x_rho_lambda(&small, &eta)[0].clone();
    assert!(matches!(presentation(&small, &eta, &w), Err(DefRingError::NotGeneric(_))));
}

/// Evaluates the closed form at a point on the component `λ₂` (chosen by
/// solving the prime generator for `B0` or `A0`) and checks that every
/// equation vanishes there.
fn equations_vanish_on_component(case: Case, m: i64, n: i64, l2: i64, vals: [i64; 5]) -> Result<(), String> {
    let [fa_v, p_v, x, y, z] = vals;
    let mut pt: BTreeMap<String, Rat> = BTreeMap::new();
    pt.insert("fa".into(), ratio(2 * fa_v + 1, 2));
    pt.insert("p".into(), rat(p_v));
    let gen = prime_ideal(case, m, n, l2, false).map_err(|e| e.to_string())?;
    let solve_for = match case {
        Case::T => "B0",
        Case::WT => "A0",
    };
    for (name, val) in [("A0", x), ("B0", y), ("C0", z), ("D0", x + y + 1)] {
        if name != solve_for {
            pt.insert(name.into(), rat(val));
        }
    }
    match &gen {
        PrimeGenerator::Exceptional { var, .. } => {
            pt.insert(var.clone(), Rat::from_integer(0.into()));
            if var != solve_for {
                pt.insert(solve_for.into(), rat(y));
            }
        }
        PrimeGenerator::Factor { poly, .. } => {
            // poly is linear in the solved variable.
            let cs = poly.coeffs_in(solve_for);
            let c0 = cs[0].eval(&pt).map_err(|e| e.to_string())?;
            let c1 = cs[1].eval(&pt).map_err(|e| e.to_string())?;
            pt.insert(solve_for.into(), -c0 / c1);
        }
    }
    let sol = closed_form(case, m, n).map_err(|e| e.to_string())?;
    let mut full = pt.clone();
    for (var, r) in &sol.assignment {
        let val = r.eval(&pt).map_err(|e| e.to_string())?.ok_or("pole")?;
        full.insert(var.clone(), val);
    }
    for eq in build_equations(case, m, n).equations {
        let val = eq.poly.eval(&full).map_err(|e| e.to_string())?;
        if val != Rat::from_integer(0.into()) {
            return Err(format!("{} = {val}", eq.label));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equations_vanish_on_each_component(
        idx in 0usize..1000,
        fa_v in 20i64..40,
        p_v in 2i64..50,
        x in 1i64..9,
        y in 1i64..9,
        z in 1i64..9,
    ) {
        let cases = all_cases(5);
        let (case, m, n) = cases[idx % cases.len()];
        let (adm, _) = admissible_lambda2(case, m, n, false);
        prop_assume!(!adm.is_empty());
        let l2 = adm[idx % adm.len()];
        prop_assert_eq!(equations_vanish_on_component(case, m, n, l2, [fa_v, p_v, x, y, z]), Ok(()));
    }
}
