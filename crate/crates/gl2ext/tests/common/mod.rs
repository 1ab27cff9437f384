//! Independent oracles shared by the integration tests. Nothing here calls
//! the closed forms it is used to check.
#![allow(dead_code)]

use std::collections::BTreeSet;

use gl2ext::weights::{GraphPoint, Params, SerreWeight, WeightVector};

/// Brute-force search for `ω̃_j = t_x w_j`: every `w ∈ {1, 𝔴}` and
/// translation `x ∈ [-bound, bound]^2` with `0 < ⟨p x + w η, α^∨⟩ < p` and
/// determinant `x_1 + x_2 = -ω_{j+1}`. Returns all survivors.
pub fn omega_candidates(p: i64, omega: &[i64], j: usize, bound: i64) -> Vec<(bool, (i64, i64))> {
    let f = omega.len();
    let next = omega[(j + 1) % f];
    let mut out = Vec::new();
    for flip in [false, true] {
        let w_eta = if flip { (0, 1) } else { (1, 0) };
        for x1 in -bound..=bound {
            for x2 in -bound..=bound {
                let pairing = p * x1 + w_eta.0 - (p * x2 + w_eta.1);
                if 0 < pairing && pairing < p && x1 + x2 + next == 0 {
                    out.push((flip, (x1, x2)));
                }
            }
        }
    }
    out
}

/// `ω̃·(μ + ω)` assembled from the brute-force `ω̃`.
pub fn t_mu_brute(p: i64, mu: &[(i64, i64)], omega: &[i64]) -> Option<WeightVector> {
    let mut pairs = Vec::new();
    for j in 0..omega.len() {
        let c = omega_candidates(p, omega, j, omega.iter().map(|x| x.abs()).max().unwrap() + 2);
        if c.len() != 1 {
            return None;
        }
        let (flip, x) = c[0];
        let lam = (mu[j].0 + omega[j] + 1, mu[j].1);
        let w = if flip { (lam.1, lam.0) } else { lam };
        pairs.push((p * x.0 + w.0 - 1, p * x.1 + w.1));
    }
    Some(WeightVector(pairs))
}

/// All regular Serre weights with a given central character, by direct
/// enumeration of canonical representatives.
pub fn regular_weights_brute(params: &Params, cc: i128) -> BTreeSet<SerreWeight> {
    let p = params.p as i64;
    let m = params.det_modulus();
    let mut out = BTreeSet::new();
    let ds = cartesian(&vec![(0, p - 2); params.f]);
    for d in ds {
        for e in 0..m {
            let mut rest = e;
            let mut pairs = Vec::new();
            for &x in &d {
                let digit = (rest % params.p as i128) as i64;
                rest /= params.p as i128;
                pairs.push((x + digit, digit));
            }
            let w = WeightVector(pairs);
            if w.central_character(params) == cc {
                out.insert(SerreWeight::from_weight(params, &w).unwrap());
            }
        }
    }
    out
}

/// All integer vectors in a box, each coordinate in `[lo, hi]`.
pub fn cartesian(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for v in &out {
            for x in lo..=hi {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

pub fn gp(v: &[i64]) -> GraphPoint {
    GraphPoint(v.to_vec())
}

/// Points of the rectangle spanned by `a` and `b`, by filtering a bounding
/// box coordinate by coordinate.
pub fn rect_brute(a: &[i64], b: &[i64]) -> BTreeSet<Vec<i64>> {
    let ranges: Vec<(i64, i64)> = a.iter().zip(b).map(|(&x, &y)| (x.min(y) - 1, x.max(y) + 1)).collect();
    cartesian(&ranges)
        .into_iter()
        .filter(|k| {
            k.iter()
                .zip(a.iter().zip(b))
                .all(|(&z, (&x, &y))| (x <= z && z <= y) || (y <= z && z <= x))
        })
        .collect()
}

/// The determinant exponent `Σ_j λ_{j,2} p^j` and the `d_j = λ_{j,1} - λ_{j,2}`
/// of a weight, compared modulo `(p - π)X⁰`: two p-restricted weights give
/// the same Serre weight iff the `d_j` agree and the central characters agree.
pub fn same_serre_weight(params: &Params, a: &WeightVector, b: &WeightVector) -> bool {
    let p = params.p as i64;
    let ok = |w: &WeightVector| w.0.iter().all(|&(x, y)| (0..p).contains(&(x - y)));
    ok(a) && ok(b)
        && (0..a.0.len()).all(|j| a.bar(j) == b.bar(j))
        && a.central_character(params) == b.central_character(params)
}

/// Jordan–Hölder factors of `σ̄(λ, τ_{w̃})` computed the long way: take the
/// intrinsic lowest-alcove presentation `(s', μ')` of the type, write its
/// `2^f` constituents with the brute-force `ω̃`, tensor each with
/// `⊗_j L(λ_{j,1} - 1, λ_{j,2})` weight by weight, and locate every result
/// in the chart `(r_j, 0)` by exhaustive search. `wt[i] = (flip, m, n)` is
/// the entry `w̃_i`; `s_flip[j]` marks `s_j = 𝔴`.
pub fn jh_by_tensor_expansion(
    p: i64,
    r: &[i64],
    s_flip: &[bool],
    wt: &[(bool, i64, i64)],
    lambda: &[(i64, i64)],
    search: i64,
) -> Option<BTreeSet<Vec<i64>>> {
    let f = r.len();
    let params = Params { p: p as u64, f };
    let mut sp = Vec::new();
    let mut chart = Vec::new();
    for j in 0..f {
        let (eps, m, n) = wt[f - 1 - j];
        let flip = s_flip[j] != eps;
        let nu = if flip { (n, m) } else { (m, n) };
        let mup = (r[j] + 1 - nu.0, -nu.1);
        // μ' + s'(η) - η
        chart.push(if flip { (mup.0 - 1, mup.1 + 1) } else { mup });
        sp.push(flip);
    }
    let mut target = Vec::new();
    for jset in cartesian(&vec![(0, 1); f]) {
        let om: Vec<i64> = (0..f)
            .map(|j| if sp[j] { 1 - jset[j] } else { jset[j] - 1 })
            .collect();
        // t_mu_brute expects μ with the chart already shifted by -η.
        let w = t_mu_brute(p, &chart, &om)?;
        let ranges: Vec<(i64, i64)> = lambda.iter().map(|&(a, b)| (0, a - b - 1)).collect();
        for ii in cartesian(&ranges) {
            let x = WeightVector(
                (0..f)
                    .map(|j| {
                        (
                            w.0[j].0 + lambda[j].0 - 1 - ii[j],
                            w.0[j].1 + lambda[j].1 + ii[j],
                        )
                    })
                    .collect(),
            );
            target.push(x);
        }
    }
    let rho_chart: Vec<(i64, i64)> = r.iter().map(|&x| (x, 0)).collect();
    let mut out = BTreeSet::new();
    for x in target {
        let mut found = None;
        for b in cartesian(&vec![(-search, search); f]) {
            if let Some(cand) = t_mu_brute(p, &rho_chart, &b) {
                if same_serre_weight(&params, &cand, &x) {
                    found = Some(b);
                    break;
                }
            }
        }
        out.insert(found?);
    }
    Some(out)
}

/// Multiplicities of `JH(Inj_n σ)` by listing monomials: layer `l` of the
/// graded pieces is `Inj_1 ⊗ Sym^l(⊕_j V_j)`, `V_j` spanned by
/// `e_j^+, e_j^0, e_j^-`. Every monomial of degree `l` in the `3f`
/// variables has a weight `v`; it contributes the points `2v + a`,
/// `a ∈ {0, ±1}^f`, with multiplicity `2^{#{a_j = 0}}`.
pub fn inj_n_by_monomials(f: usize, n: usize) -> std::collections::BTreeMap<Vec<i64>, i64> {
    let mut out = std::collections::BTreeMap::new();
    for l in 0..n as i64 {
        for exps in cartesian(&vec![(0, l); 3 * f]) {
            if exps.iter().sum::<i64>() != l {
                continue;
            }
            let v: Vec<i64> = (0..f).map(|j| exps[3 * j] - exps[3 * j + 2]).collect();
            for a in cartesian(&vec![(-1, 1); f]) {
                let pt: Vec<i64> = (0..f).map(|j| 2 * v[j] + a[j]).collect();
                let m = 1i64 << a.iter().filter(|&&x| x == 0).count();
                *out.entry(pt).or_insert(0) += m;
            }
        }
    }
    out
}

/// Height and monodromy polynomials read off the matrix
/// `A(u) = [[Σ a_i u^i, Σ b_i u^i], [v Σ c_i u^i, Σ d_i u^i]]`, `u = v + p`:
/// `H(k) = [u^k] det A`, and with `N = (v A' − A diag(𝔞, 0)) adj A`,
/// `M_k(1,2) = [u^k] N₁₂`, `M_k(2,1) = −[u^k] N₂₁/v`,
/// `M_k(2,2) = −[u^k] N₂₂/v`, `M_k(1,1) = −[u^k] (N₁₁ + 𝔞 det A)/v`.
/// Family lengths are `(a, b, c, d)`.
pub fn equations_from_matrix(
    lens: [i64; 4],
    ell: i64,
) -> (Vec<gl2ext::exactalg::MPoly>, std::collections::BTreeMap<(i64, u8, u8), gl2ext::exactalg::MPoly>) {
    use gl2ext::exactalg::MPoly;
    let u = MPoly::var("u");
    let p = MPoly::var("p");
    let fa = MPoly::var("fa");
    let v = &u - &p;
    let series = |letter: char, len: i64| {
        (0..len).fold(MPoly::zero(), |acc, i| acc + MPoly::var(&format!("{letter}{i}")) * u.pow(i as u32))
    };
    let a = series('a', lens[0]);
    let b = series('b', lens[1]);
    let c = &v * &series('c', lens[2]);
    let d = series('d', lens[3]);
    let det = &a * &d - &b * &c;
    let du = |x: &MPoly| x.derivative("u");
    // v A' − A diag(𝔞, 0)
    let l = [[&v * &du(&a) - &a * &fa, &v * &du(&b)], [&v * &du(&c) - &c * &fa, &v * &du(&d)]];
    let adj = [[d.clone(), -&b], [-&c, a.clone()]];
    let nm = |i: usize, j: usize| &l[i][0] * &adj[0][j] + &l[i][1] * &adj[1][j];
    let over_v = |x: MPoly| {
        let (q, r) = x.div_rem(&v).unwrap();
        assert!(r.is_zero(), "entry not divisible by v");
        q
    };
    let coeff = |x: &MPoly, k: i64| x.coeffs_in("u").get(k as usize).cloned().unwrap_or_else(MPoly::zero);
    let hs = (0..ell).map(|k| coeff(&det, k)).collect();
    let n11 = over_v(nm(0, 0) + &fa * &det);
    let n12 = nm(0, 1);
    let n21 = over_v(nm(1, 0));
    let n22 = over_v(nm(1, 1));
    let mut ms = std::collections::BTreeMap::new();
    for k in 0..=ell - 2 {
        ms.insert((k, 1, 1), -coeff(&n11, k));
        ms.insert((k, 1, 2), coeff(&n12, k));
        ms.insert((k, 2, 1), -coeff(&n21, k));
        ms.insert((k, 2, 2), -coeff(&n22, k));
    }
    (hs, ms)
}
