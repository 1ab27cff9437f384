//! Jordan–Hölder and filtration data of the representations `Inj_n σ`,
//! `I(σ, τ)` and `D_0^n(ρ̄)`, modelled by sets of graph points.
//!
//! Everything is computed in a [`Chart`]: a choice of origin `μ` for the
//! parametrisation `ω ↦ t_μ(ω)`. Because change of origin is a signed
//! translation, rectangles, `ℓ¹` distances and the level `Σ_j ⌊|ω_j|/2⌋`
//! do not depend on which chart is used.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::typesweights::{w_of_rhobar, ChartedWeight, RhoBarData, TypesError};
use crate::weights::{
    box_points, in_lambda_mu, is_n_deep, leq, plus, rectangle, t_mu, tilde, GraphPoint, Params,
    SerreWeight, WeightError, WeightVector,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("{weight} is not {depth}-generic")]
    NotGeneric { weight: String, depth: i64 },
    #[error("{tau} is not a constituent of Inj_n of {sigma}")]
    TauNotInInjN { sigma: String, tau: String },
    #[error("the intersection with W(ρ̄) is empty")]
    EmptyIntersection,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Types(#[from] TypesError),
}

/// An origin for the graph parametrisation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub params: Params,
    pub mu: WeightVector,
}

impl Chart {
    pub fn new(params: Params, mu: WeightVector) -> Self {
        Chart { params, mu }
    }

    /// The chart whose origin is `σ` itself.
    pub fn centred_at(params: Params, sigma: &SerreWeight) -> Self {
        Chart {
            params,
            mu: sigma.canonical.clone(),
        }
    }

    pub fn contains(&self, omega: &GraphPoint) -> bool {
        in_lambda_mu(&self.params, &self.mu, omega)
    }

    pub fn weight(&self, omega: &GraphPoint) -> Result<SerreWeight, WeightError> {
        t_mu(&self.params, &self.mu, omega)
    }

    pub fn charted(&self, omega: &GraphPoint) -> Result<ChartedWeight, WeightError> {
        Ok(ChartedWeight {
            point: omega.clone(),
            weight: self.weight(omega)?,
        })
    }

    /// The graph point of `σ`, if `σ` is regular with the chart's central
    /// character. The parity of `ω_{j+1}` decides whether
    /// `d_j = μ̄_j + ω_j` or `d_j = p - 2 - μ̄_j - ω_j`; each of the `2^f`
    /// parity patterns gives one candidate, checked by recomputing `t_μ`.
    pub fn locate(&self, sigma: &SerreWeight) -> Option<GraphPoint> {
        let f = self.params.f;
        let p = self.params.p as i64;
        let d = sigma.d();
        if d.len() != f {
            return None;
        }
        (0u32..1 << f).find_map(|mask| {
            let odd = |j: usize| mask >> (j % f) & 1 == 1;
            let omega = GraphPoint(
                (0..f)
                    .map(|j| {
                        if odd(j + 1) {
                            p - 2 - d[j] - self.mu.bar(j)
                        } else {
                            d[j] - self.mu.bar(j)
                        }
                    })
                    .collect(),
            );
            let parity_ok = (0..f).all(|j| (omega.0[j].rem_euclid(2) == 1) == odd(j));
            (parity_ok && self.contains(&omega) && self.weight(&omega).ok()? == *sigma)
                .then_some(omega)
        })
    }
}

fn require_generic(params: &Params, sigma: &SerreWeight, depth: i64) -> Result<(), RepError> {
    if is_n_deep(params, &sigma.canonical, depth) {
        Ok(())
    } else {
        Err(RepError::NotGeneric {
            weight: sigma.to_string(),
            depth,
        })
    }
}

/// `JH(Inj_1 σ) = {t_μ(a) : a ∈ {0, ±1}^f}`.
pub fn jh_inj1(params: &Params, sigma: &SerreWeight) -> Result<Vec<ChartedWeight>, RepError> {
    require_generic(params, sigma, 0)?;
    let chart = Chart::centred_at(*params, sigma);
    let pts = box_points(&vec![-1; params.f], &vec![1; params.f]);
    if let Some(bad) = pts.iter().find(|w| !chart.contains(w)) {
        return Err(RepError::NotGeneric {
            weight: format!("{sigma} (neighbour {bad} leaves the alcove)"),
            depth: 1,
        });
    }
    Ok(pts
        .iter()
        .map(|w| chart.charted(w))
        .collect::<Result<_, _>>()?)
}

/// `[Inj_1 σ : t_μ(a)] = 2^{#{j : a_j = 0}}`.
pub fn inj1_multiplicity(a: &GraphPoint) -> u64 {
    1 << a.0.iter().filter(|&&x| x == 0).count()
}

/// A formal character of `∏_j SL_2`, with weights in units of `α_j / 2`
/// halved, i.e. the adjoint representation has weights `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CharVector(pub BTreeMap<Vec<i64>, i64>);

impl CharVector {
    pub fn trivial(f: usize) -> Self {
        CharVector(BTreeMap::from([(vec![0; f], 1)]))
    }

    /// `Sym^a` of the adjoint representation of the `j`-th factor.
    pub fn sym_adjoint(f: usize, j: usize, a: i64) -> Self {
        let mut out = BTreeMap::new();
        for plus in 0..=a {
            for minus in 0..=a - plus {
                let mut w = vec![0; f];
                w[j] = plus - minus;
                *out.entry(w).or_insert(0) += 1;
            }
        }
        CharVector(out)
    }

    /// The Weyl character of `⊗_j L(u_j)`: weights `v` with `|v_j| ≤ u_j`.
    pub fn weyl(u: &[i64]) -> Self {
        let lo: Vec<i64> = u.iter().map(|&x| -x).collect();
        CharVector(box_points(&lo, u).into_iter().map(|v| (v.0, 1)).collect())
    }

    pub fn mul(&self, other: &CharVector) -> CharVector {
        let mut out: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                let w: Vec<i64> = a.iter().zip(b).map(|(s, t)| s + t).collect();
                *out.entry(w).or_insert(0) += x * y;
            }
        }
        out.retain(|_, c| *c != 0);
        CharVector(out)
    }

    pub fn add_scaled(&mut self, other: &CharVector, c: i64) {
        for (w, x) in &other.0 {
            *self.0.entry(w.clone()).or_insert(0) += c * x;
        }
        self.0.retain(|_, c| *c != 0);
    }

    pub fn multiplicity(&self, w: &[i64]) -> i64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    /// `Sym^m(⊕_j V_j)` with `V_j` the adjoint of the `j`-th factor, via
    /// `Sym^m(A ⊕ B) = ⊕_{a+b=m} Sym^a A ⊗ Sym^b B`.
    pub fn sym_of_adjoint_sum(f: usize, m: i64) -> Self {
        // table[k] = Sym^k of the sum over the first `done` factors
        let mut table: Vec<CharVector> = (0..=m)
            .map(|k| {
                if k == 0 {
                    CharVector::trivial(f)
                } else {
                    CharVector::default()
                }
            })
            .collect();
        for j in 0..f {
            let mut next = vec![CharVector::default(); (m + 1) as usize];
            for (total, slot) in next.iter_mut().enumerate() {
                for a in 0..=total as i64 {
                    let prev = &table[total - a as usize];
                    if prev.0.is_empty() {
                        continue;
                    }
                    slot.add_scaled(&prev.mul(&CharVector::sym_adjoint(f, j, a)), 1);
                }
            }
            table = next;
        }
        table.pop().unwrap_or_default()
    }

    /// Decomposition into Weyl characters `⊗_j L(u_j)` by repeatedly
    /// subtracting the character of a highest weight.
    pub fn decompose(&self) -> BTreeMap<Vec<i64>, i64> {
        let mut rest = self.clone();
        let mut out = BTreeMap::new();
        while let Some((u, c)) = rest
            .0
            .iter()
            .filter(|(w, _)| w.iter().all(|&x| x >= 0))
            .max_by_key(|(w, _)| (w.iter().sum::<i64>(), (*w).clone()))
            .map(|(w, c)| (w.clone(), *c))
        {
            rest.add_scaled(&CharVector::weyl(&u), -c);
            out.insert(u, c);
        }
        debug_assert!(rest.0.is_empty(), "character is not Weyl-symmetric");
        out
    }
}

/// The coefficients `k_i` (`0 ≤ i ≤ n-1`) of `JH(Inj_n σ) = ⊎_i ⊎_{δ ∈ Δ^i} (Inj_1 δ)^{k_i}`:
/// `k_i` is the multiplicity of any weight `v` with `Σ|v_j| = i` in
/// `⊕_{l=0}^{n-1} Sym^l(⊕_j V_j)`, read off the Weyl decomposition.
pub fn level_coefficients(f: usize, n: usize) -> Vec<i64> {
    let mut k = vec![0i64; n];
    for l in 0..n as i64 {
        let dec = CharVector::sym_of_adjoint_sum(f, l).decompose();
        for (i, slot) in k.iter_mut().enumerate() {
            // the weight (i, 0, …, 0) lies in L(u) iff u_0 ≥ i
            *slot += dec
                .iter()
                .filter(|(u, _)| u[0] >= i as i64)
                .map(|(_, c)| c)
                .sum::<i64>();
        }
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JHEntry {
    pub point: GraphPoint,
    pub weight: SerreWeight,
    pub multiplicity: i64,
    /// `1 + Σ_j ⌊|ω_j| / 2⌋`.
    pub level: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JHProfile {
    pub sigma: SerreWeight,
    pub n: usize,
    pub level_coefficients: Vec<i64>,
    pub entries: Vec<JHEntry>,
}

impl JHProfile {
    pub fn support(&self) -> BTreeSet<GraphPoint> {
        self.entries.iter().map(|e| e.point.clone()).collect()
    }
}

pub fn level(omega: &GraphPoint) -> i64 {
    1 + omega.half_norm()
}

/// `JH(Inj_n σ)` with multiplicities, in the chart centred at `σ`.
pub fn jh_inj_n(params: &Params, sigma: &SerreWeight, n: usize) -> Result<JHProfile, RepError> {
    assert!(n >= 1, "n must be positive");
    require_generic(params, sigma, 2 * n as i64 - 1)?;
    let chart = Chart::centred_at(*params, sigma);
    let f = params.f;
    let k = level_coefficients(f, n);
    let r = 2 * n as i64 - 1;
    let mut entries: Vec<JHEntry> = box_points(&vec![-r; f], &vec![r; f])
        .into_par_iter()
        .filter(|w| w.half_norm() < n as i64)
        .map(|omega| {
            // sum over even δ with ω - δ ∈ {0, ±1}^f
            let per: Vec<Vec<i64>> = omega
                .0
                .iter()
                .map(|&x| {
                    [x - 1, x, x + 1]
                        .into_iter()
                        .filter(|d| d.rem_euclid(2) == 0)
                        .collect()
                })
                .collect();
            let mut mult = 0;
            for delta in box_cartesian(&per) {
                let i = delta.half_norm() as usize;
                if i < n {
                    mult += k[i] * inj1_multiplicity(&omega.sub(&delta)) as i64;
                }
            }
            Ok(JHEntry {
                weight: chart.weight(&omega)?,
                level: level(&omega),
                point: omega,
                multiplicity: mult,
            })
        })
        .collect::<Result<_, WeightError>>()?;
    entries.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(JHProfile {
        sigma: sigma.clone(),
        n,
        level_coefficients: k,
        entries,
    })
}

fn box_cartesian(per: &[Vec<i64>]) -> Vec<GraphPoint> {
    let mut out = vec![Vec::new()];
    for xs in per {
        let mut next = Vec::with_capacity(out.len() * xs.len());
        for pre in &out {
            for &x in xs {
                let mut v: Vec<i64> = pre.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(GraphPoint).collect()
}

/// `(Ω_k^ω, ⁰Ω_k^ω)`: points `ω' ≤ ω` of level `k + 1`, and the even ones.
pub fn omega_sets_for(omega: &GraphPoint, k: i64) -> (Vec<GraphPoint>, Vec<GraphPoint>) {
    let all: Vec<GraphPoint> = rectangle(&GraphPoint::zero(omega.len()), omega)
        .into_iter()
        .filter(|w| w.half_norm() == k)
        .collect();
    let even = all
        .iter()
        .filter(|w| w.0.iter().all(|x| x % 2 == 0))
        .cloned()
        .collect();
    (all, even)
}

pub fn omega_sets(
    params: &Params,
    sigma: &SerreWeight,
    tau: &SerreWeight,
    k: i64,
) -> Result<(Vec<GraphPoint>, Vec<GraphPoint>), RepError> {
    let omega = Chart::centred_at(*params, sigma)
        .locate(tau)
        .ok_or_else(|| not_in_inj(sigma, tau))?;
    Ok(omega_sets_for(&omega, k))
}

fn not_in_inj(sigma: &SerreWeight, tau: &SerreWeight) -> RepError {
    RepError::TauNotInInjN {
        sigma: sigma.to_string(),
        tau: tau.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub nu: GraphPoint,
    pub nu_plus: GraphPoint,
    pub members: Vec<GraphPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IModData {
    pub socle: SerreWeight,
    pub cosocle: SerreWeight,
    /// `τ` in the chart centred at the socle.
    pub omega: GraphPoint,
    pub n: i64,
    pub jh: Vec<ChartedWeight>,
    /// `layers[r]` holds the constituents at distance `r` from the socle.
    pub layers: Vec<Vec<GraphPoint>>,
    /// `graded_pieces[k]` lists `I(ν, ν₊)` for `ν ∈ ⁰Ω_k^τ`.
    pub graded_pieces: Vec<Vec<GradedPiece>>,
}

/// Filtration data of `I(σ, τ)`, the unique representation with socle `σ`,
/// cosocle `τ` and constituents `{κ : κ - σ ≤ τ - σ}`.
pub fn i_mod(params: &Params, sigma: &SerreWeight, tau: &SerreWeight) -> Result<IModData, RepError> {
    require_generic(params, sigma, 1)?;
    let chart = Chart::centred_at(*params, sigma);
    let omega = chart.locate(tau).ok_or_else(|| not_in_inj(sigma, tau))?;
    let n = level(&omega);
    require_generic(params, sigma, 2 * n - 1)?;
    imod_in_chart(&chart, &omega)
}

/// [`i_mod`] for graph points of a fixed chart.
pub fn imod_in_chart(chart: &Chart, omega: &GraphPoint) -> Result<IModData, RepError> {
    let origin = GraphPoint::zero(omega.len());
    let rect = rectangle(&origin, omega);
    let jh = rect
        .iter()
        .map(|w| chart.charted(w))
        .collect::<Result<Vec<_>, _>>()?;
    let mut layers = vec![Vec::new(); omega.l1() as usize + 1];
    for w in &rect {
        layers[w.l1() as usize].push(w.clone());
    }
    let n = level(omega);
    let graded_pieces = (0..n)
        .map(|k| {
            omega_sets_for(omega, k)
                .1
                .into_iter()
                .map(|nu| {
                    let nu_plus = plus(&nu, omega);
                    GradedPiece {
                        members: rectangle(&nu, &nu_plus),
                        nu,
                        nu_plus,
                    }
                })
                .collect()
        })
        .collect();
    Ok(IModData {
        socle: chart.weight(&origin)?,
        cosocle: chart.weight(omega)?,
        omega: omega.clone(),
        n,
        jh,
        layers,
        graded_pieces,
    })
}

/// `κ ∈ JH(I(ν, ν₊))` for the graded piece through `ν`, equivalently
/// `ν = κ̃` and `κ ≤ ω`.
pub fn in_graded_piece(kappa: &GraphPoint, nu: &GraphPoint, omega: &GraphPoint) -> bool {
    *nu == tilde(kappa) && leq(kappa, omega)
}

/// Whether `Ext^1` between two generic weights can be nonzero: the graph
/// points differ in exactly one coordinate, by exactly one.
pub fn ext1_adjacent(params: &Params, a: &SerreWeight, b: &SerreWeight) -> bool {
    Chart::centred_at(*params, a)
        .locate(b)
        .is_some_and(|w| w.l1() == 1)
}

/// `D_0^n(ρ̄)`: for each `σ ∈ W(ρ̄)` (keyed by its point in the chart of
/// `ρ̄`), the constituents `κ` of `Inj_n σ` with `rectangle(σ, κ) ∩ W(ρ̄) = {σ}`.
pub fn d0n(
    rho: &RhoBarData,
    n: usize,
) -> Result<BTreeMap<GraphPoint, Vec<ChartedWeight>>, RepError> {
    assert!(n >= 1, "n must be positive");
    if rho.genericity() < 2 * n as i64 {
        return Err(RepError::NotGeneric {
            weight: format!("ρ̄ with r = {:?}", rho.r),
            depth: 2 * n as i64,
        });
    }
    let chart = Chart::new(rho.params(), rho.chart());
    let w: BTreeSet<GraphPoint> = w_of_rhobar(rho)?.into_iter().map(|m| m.point).collect();
    let f = rho.f;
    let r = 2 * n as i64 - 1;
    let mut out = BTreeMap::new();
    for b in &w {
        let lo: Vec<i64> = b.0.iter().map(|x| x - r).collect();
        let hi: Vec<i64> = b.0.iter().map(|x| x + r).collect();
        let comp = box_points(&lo, &hi)
            .into_iter()
            .filter(|k| k.sub(b).half_norm() < n as i64)
            .filter(|k| {
                rectangle(b, k)
                    .iter()
                    .all(|x| x == b || !w.contains(x))
            })
            .map(|k| chart.charted(&k))
            .collect::<Result<Vec<_>, _>>()?;
        debug_assert!(comp.iter().all(|c| c.point.len() == f));
        out.insert(b.clone(), comp);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremes {
    /// The element farthest from `κ`.
    pub alpha: GraphPoint,
    /// The element closest to `κ`.
    pub beta: GraphPoint,
    /// `rectangle(α, β)`, equal to the set the extremes were taken in.
    pub rectangle: Vec<GraphPoint>,
}

/// The farthest and closest elements to `κ` of `W(ρ̄)`, or of
/// `W(ρ̄) ∩ JH` when a Jordan–Hölder hypercuboid is supplied. Both sets are
/// products of per-coordinate sets of at most two adjacent values, so the
/// extremes are unique and span the whole set.
pub fn extremes(
    kappa: &GraphPoint,
    rho: &RhoBarData,
    jh: Option<&[GraphPoint]>,
) -> Result<Extremes, RepError> {
    let f = rho.f;
    let st = rho.s_tilde();
    let mut per: Vec<Vec<i64>> = st
        .iter()
        .map(|&s| if s == 0 { vec![0] } else { vec![0, s] })
        .collect();
    if let Some(jh) = jh {
        let w = box_cartesian(&per);
        let jhs: BTreeSet<&GraphPoint> = jh.iter().collect();
        let inter: Vec<GraphPoint> = w.into_iter().filter(|x| jhs.contains(x)).collect();
        if inter.is_empty() {
            return Err(RepError::EmptyIntersection);
        }
        per = (0..f)
            .map(|j| {
                let vals: BTreeSet<i64> = inter.iter().map(|x| x.0[j]).collect();
                vals.into_iter().collect()
            })
            .collect();
        debug_assert_eq!(box_cartesian(&per).len(), inter.len());
    }
    let pick = |far: bool| {
        GraphPoint(
            (0..f)
                .map(|j| {
                    let key = |x: &&i64| (**x - kappa.0[j]).abs();
                    let it = per[j].iter();
                    *if far { it.max_by_key(key) } else { it.min_by_key(key) }.unwrap()
                })
                .collect(),
        )
    };
    let alpha = pick(true);
    let beta = pick(false);
    Ok(Extremes {
        rectangle: rectangle(&alpha, &beta),
        alpha,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, f: usize) -> Params {
        Params::new(p, f).unwrap()
    }

    fn sigma(p: &Params, pairs: &[(i64, i64)]) -> SerreWeight {
        SerreWeight::from_weight(p, &WeightVector(pairs.to_vec())).unwrap()
    }

    #[test]
    fn locate_round_trip() {
        let pr = params(31, 2);
        let chart = Chart::new(pr, WeightVector(vec![(12, 0), (15, 0)]));
        for w in box_points(&[-5, -5], &[5, 5]) {
            let s = chart.weight(&w).unwrap();
            assert_eq!(chart.locate(&s), Some(w));
        }
    }

    #[test]
    fn inj1_sizes() {
        let pr = params(101, 2);
        let s = sigma(&pr, &[(40, 0), (50, 3)]);
        let jh = jh_inj1(&pr, &s).unwrap();
        assert_eq!(jh.len(), 9);
        assert!(jh.iter().any(|c| c.weight == s));
    }

    #[test]
    fn sym_decomposition_small() {
        // Sym^1 of the adjoint sum is ⊕_j L(e_j).
        let d = CharVector::sym_of_adjoint_sum(2, 1).decompose();
        assert_eq!(d, BTreeMap::from([(vec![0, 1], 1), (vec![1, 0], 1)]));
        // Sym^2 of one adjoint: L(2) ⊕ L(0).
        let d = CharVector::sym_of_adjoint_sum(1, 2).decompose();
        assert_eq!(d, BTreeMap::from([(vec![0], 1), (vec![2], 1)]));
    }

    #[test]
    fn imod_example() {
        let pr = params(101, 2);
        let s = sigma(&pr, &[(40, 0), (50, 3)]);
        let chart = Chart::centred_at(pr, &s);
        let t = chart.weight(&GraphPoint(vec![2, 1])).unwrap();
        let data = i_mod(&pr, &s, &t).unwrap();
        assert_eq!(data.jh.len(), 6);
        let sizes: Vec<usize> = data.layers.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 1]);
        assert_eq!(data.graded_pieces[0][0].nu, GraphPoint(vec![0, 0]));
        assert_eq!(data.graded_pieces[0][0].nu_plus, GraphPoint(vec![1, 1]));
    }

    #[test]
    fn adjacency() {
        let pr = params(101, 2);
        let s = sigma(&pr, &[(40, 0), (50, 3)]);
        let chart = Chart::centred_at(pr, &s);
        let at = |v: Vec<i64>| chart.weight(&GraphPoint(v)).unwrap();
        assert!(!ext1_adjacent(&pr, &s, &s));
        assert!(ext1_adjacent(&pr, &s, &at(vec![0, -1])));
        assert!(!ext1_adjacent(&pr, &s, &at(vec![2, 0])));
        assert!(!ext1_adjacent(&pr, &s, &at(vec![1, 1])));
    }
}
