mod common;

use std::collections::BTreeSet;

use common::jh_by_tensor_expansion;
use gl2ext::typesweights::*;
use gl2ext::weights::GraphPoint;
use proptest::prelude::*;

fn rho(p: u64, irr: bool, r: &[i64], g: &[bool]) -> RhoBarData {
    RhoBarData::new(p, irr, r.to_vec(), g.to_vec()).unwrap()
}

fn points(v: &[ChartedWeight]) -> BTreeSet<Vec<i64>> {
    v.iter().map(|c| c.point.0.clone()).collect()
}

fn weights_up_to(f: usize, top: i64) -> Vec<HTWeight> {
    // every dominant λ ≤ (top, 0) coordinatewise in the sense λ_{j,1} + λ_{j,2} ≤ top
    let mut per = Vec::new();
    for s in 1..=top {
        for b in 0..=s / 2 {
            per.push((s - b, b));
        }
    }
    let mut out = vec![Vec::new()];
    for _ in 0..f {
        let mut next = Vec::new();
        for pre in &out {
            for &c in &per {
                let mut v: Vec<(i64, i64)> = pre.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(HTWeight).collect()
}

fn rhos(f: usize) -> Vec<RhoBarData> {
    let r: Vec<i64> = (0..f).map(|j| 30 + 7 * j as i64).collect();
    let mut out = Vec::new();
    for g in 0..(1 << f) {
        let flags: Vec<bool> = (0..f).map(|j| g >> j & 1 == 1).collect();
        out.push(rho(101, false, &r, &flags));
    }
    out.push(rho(101, true, &r, &vec![false; f]));
    out
}

#[test]
fn adm_sizes_multiply() {
    let l = HTWeight(vec![(2, 0), (3, 1)]);
    let a = adm_set(&HTWeight(vec![(2, 0)])).len();
    let b = adm_set(&HTWeight(vec![(3, 1)])).len();
    assert_eq!(adm_set(&l).len(), a * b);
    // (2,0): t(0,2) t(1,1) t(2,0) wt(1,1) wt(2,0)
    assert_eq!(a, 5);
}

#[test]
fn jh_tau_has_two_to_the_f() {
    for f in 1..=3 {
        for r in rhos(f) {
            for w in adm_set(&HTWeight(vec![(2, 0); f])) {
                let tau = tau_of_wtilde(&r, &w).unwrap();
                let jh = jh_sigma_tau(&tau).unwrap();
                let distinct: BTreeSet<_> = jh.iter().map(|c| c.weight.clone()).collect();
                assert_eq!(distinct.len(), 1 << f);
                assert_eq!(jh_sigma_lambda_tau(&HTWeight::eta(f), &tau).unwrap(), jh);
            }
        }
    }
}

#[test]
fn jh_matches_tensor_expansion() {
    for f in 1..=2 {
        for r in rhos(f) {
            let s: Vec<bool> = r.s().0;
            for lambda in weights_up_to(f, 3).into_iter().filter(|l| l.is_regular()) {
                for w in adm_set(&lambda) {
                    let tau = tau_of_wtilde(&r, &w).unwrap();
                    let got = points(&jh_sigma_lambda_tau(&lambda, &tau).unwrap());
                    let wt: Vec<(bool, i64, i64)> = w.0.iter().map(|c| (c.flip, c.m, c.n)).collect();
                    let want = jh_by_tensor_expansion(101, &r.r, &s, &wt, &lambda.0, 6).unwrap();
                    assert_eq!(got, want, "ρ̄ {r:?} λ {lambda} w̃ {w}");
                }
            }
        }
    }
}

#[test]
fn f1_lambda_20_by_expansion() {
    let r = rho(101, false, &[40], &[false]);
    let lambda = HTWeight(vec![(2, 0)]);
    for w in adm_set(&lambda) {
        let tau = tau_of_wtilde(&r, &w).unwrap();
        let jh = jh_sigma_lambda_tau(&lambda, &tau).unwrap();
        let wt = [(w.0[0].flip, w.0[0].m, w.0[0].n)];
        let want = jh_by_tensor_expansion(101, &[40], &[false], &wt, &[(2, 0)], 6).unwrap();
        assert_eq!(jh.len(), want.len());
        assert_eq!(jh.len(), 4);
    }
}

#[test]
fn w_sizes_and_labels() {
    for f in 1..=3 {
        for r in rhos(f) {
            let w = w_of_rhobar(&r).unwrap();
            let zeros = r.gamma_nonzero.iter().filter(|&&g| !g).count();
            assert_eq!(w.len(), 1 << zeros);
            let labels: BTreeSet<_> = w.iter().map(|m| m.label.clone()).collect();
            assert_eq!(labels.len(), w.len());
            for m in &w {
                assert_eq!(point_of_label(&r, &m.label), Some(m.point.clone()));
            }
        }
    }
    let all = rho(101, false, &[30, 40], &[true, true]);
    let w = w_of_rhobar(&all).unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(w[0].point, GraphPoint::zero(2));
}

#[test]
fn x_lemma_matches_definition() {
    for f in 1..=2 {
        for r in rhos(f) {
            for lambda in weights_up_to(f, 3).into_iter().filter(|l| l.is_regular()) {
                let mut lemma = x_rho_lambda(&r, &lambda);
                let mut def = x_rho_lambda_by_definition(&r, &lambda).unwrap();
                lemma.sort();
                def.sort();
                assert_eq!(lemma, def, "ρ̄ {r:?} λ {lambda}");
            }
        }
    }
}

#[test]
fn x_all_gamma_zero_is_adm() {
    let r = rho(101, false, &[30, 40], &[false, false]);
    let l = HTWeight(vec![(3, 0), (2, 1)]);
    assert_eq!(x_rho_lambda(&r, &l), adm_set(&l));
    let r1 = rho(101, false, &[30, 40], &[true, false]);
    let removed: Vec<AdmElt> = adm_set(&l)
        .into_iter()
        .filter(|w| !x_rho_lambda(&r1, &l).contains(w))
        .collect();
    // γ_0 ≠ 0 governs entry 0, paired with λ_1 = (2,1).
    assert!(removed.iter().all(|w| w.0[0] == AdmComp::t(1, 2)));
    assert_eq!(removed.len(), adm_coord((3, 0)).len());
}

#[test]
fn s_total_matches_brute_force() {
    for f in 1..=2 {
        for r in rhos(f) {
            for lambda in weights_up_to(f, 3) {
                for w in adm_set(&lambda) {
                    let brute = lambda
                        .regular_below()
                        .iter()
                        .filter(|l2| x_rho_lambda_by_definition(&r, l2).unwrap().contains(&w))
                        .count() as i64;
                    assert_eq!(s_total(&w, &lambda, &r), brute, "ρ̄ {r:?} λ {lambda} w̃ {w}");
                }
            }
        }
    }
}

#[test]
fn shape_table_rows() {
    assert_eq!(shape_of(MatrixForm::Lower, 3, 1, true), AdmComp::t(3, 1));
    assert_eq!(shape_of(MatrixForm::Lower, 1, 3, true), AdmComp::wt(1, 3));
    assert_eq!(shape_of(MatrixForm::Lower, 1, 3, false), AdmComp::t(1, 3));
    assert_eq!(shape_of(MatrixForm::AntiDiag, 3, 1, true), AdmComp::t(3, 1));
    assert_eq!(shape_of(MatrixForm::AntiDiag, 3, 1, false), AdmComp::wt(3, 1));
    assert_eq!(shape_of(MatrixForm::AntiDiag, 1, 3, true), AdmComp::wt(1, 3));
}

#[test]
fn kisin_shape_round_trip() {
    for g in [false, true] {
        let r = rho(101, false, &[40], &[g]);
        for ell in 1..=4 {
            for w in x_rho_lambda(&r, &HTWeight(vec![(ell, 0)])) {
                let mats = kisin_matrix(&r, &w).unwrap();
                let back = shape_of_matrix(&mats[0]).unwrap();
                let c = w.0[0];
                let breaks = g && ((!c.flip && c.m <= c.n) || (c.flip && c.m > c.n));
                assert_eq!(back == c, !breaks, "γ≠0: {g}, w̃ {w}");
            }
        }
    }
}

#[test]
fn rho_json_round_trip() {
    let r = rho(101, true, &[30, 40], &[false, false]);
    let s = serde_json::to_string(&r).unwrap();
    let back: RhoBarData = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    let bad = r#"{"p":101,"f":1,"irreducible":true,"r":[3],"gamma_nonzero":[true]}"#;
    let parsed: RhoBarData = serde_json::from_str(bad).unwrap();
    assert!(parsed.validate().is_err());
}

proptest! {
    #[test]
    fn footer_congruence(r in 5i64..90, m in 0i64..4, n in 0i64..4, flip: bool, irr: bool) {
        let rb = rho(101, irr, &[r], &[false]);
        let c = AdmComp { flip, m, n };
        let t = tau_of_wtilde(&rb, &AdmElt(vec![c])).unwrap();
        let sgn_s = if irr { -1 } else { 1 };
        let want = if flip { sgn_s * (r + 1) + (m - n) } else { -sgn_s * (r + 1) + (m - n) };
        prop_assert_eq!(t.a_values[0].rem_euclid(101), want.rem_euclid(101));
    }

    #[test]
    fn jh_points_adjacent_pairs(r0 in 10i64..80, r1 in 10i64..80, w0 in 0usize..5, w1 in 0usize..5) {
        let rb = rho(101, false, &[r0, r1], &[false, true]);
        let adm = adm_set(&HTWeight(vec![(2, 0), (2, 0)]));
        let w = &adm[(w0 * 5 + w1) % adm.len()];
        let tau = tau_of_wtilde(&rb, w).unwrap();
        let jh = jh_sigma_tau(&tau).unwrap();
        // the type's constituents form a unit square in the graph
        let lo: Vec<i64> = (0..2).map(|j| jh.iter().map(|c| c.point.0[j]).min().unwrap()).collect();
        for c in &jh {
            prop_assert!((0..2).all(|j| c.point.0[j] - lo[j] <= 1));
        }
    }
}
