//! Tame inertial types, admissible sets, modular Serre weights and the shape
//! combinatorics of Kisin matrices.
//!
//! Indexing. A tuple `w̃ = (w̃_j)_j` in the admissible set is indexed so that
//! `w̃_{f-1-j}` is paired with the `j`-th Hodge–Tate weight `λ_j`, with the
//! `j`-th coordinate of `ρ̄` and with the flag `γ_{f-1-j}`. All of the helpers
//! below expose the pairing through [`AdmElt::for_coord`].
//!
//! Charts. Every Jordan–Hölder set and `W(ρ̄)` is reported as a set of graph
//! points in the chart of `ρ̄`, i.e. relative to `μ - η` with
//! `μ_j = (r_j + 1, 0)`, together with the Serre weight `t_{μ-η}(b)`. For
//! `λ ≠ η` the determinant of `σ̄(λ, τ)` depends on the normalisation of `ρ̄`
//! (one twists `ρ̄` by a power of the fundamental character so that the two
//! agree); the graph points are independent of that choice.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactalg::MPoly;
use crate::weights::{
    in_lambda_mu, is_n_deep, t_mu, GraphPoint, Params, SerreWeight, WeightError, WeightVector,
    WeylElt,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypesError {
    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),
    #[error("not generic enough: {0}")]
    NotGeneric(String),
    #[error("w̃ = {0} is not in X(ρ̄, λ)")]
    NotInX(AdmElt),
    #[error("invalid ρ̄ data: {0}")]
    InvalidRho(String),
    #[error("invalid Hodge–Tate weight: {0}")]
    InvalidWeight(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// Discrete data of `ρ̄` in normal form: `ρ̄|_{I}` is determined by the `r_j`,
/// the Weyl element `s` (nontrivial only at `j = 0` in the irreducible case),
/// and the extension classes `γ_j` of the reducible case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoBarData {
    pub p: u64,
    pub f: usize,
    pub irreducible: bool,
    pub r: Vec<i64>,
    pub gamma_nonzero: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<i64>>,
}

impl RhoBarData {
    pub fn new(
        p: u64,
        irreducible: bool,
        r: Vec<i64>,
        gamma_nonzero: Vec<bool>,
    ) -> Result<Self, TypesError> {
        let rho = RhoBarData {
            p,
            f: r.len(),
            irreducible,
            r,
            gamma_nonzero,
            gamma: None,
            alpha: None,
            beta: None,
        };
        rho.validate()?;
        Ok(rho)
    }

    pub fn validate(&self) -> Result<(), TypesError> {
        Params::new(self.p, self.f)?;
        if self.r.len() != self.f || self.gamma_nonzero.len() != self.f {
            return Err(TypesError::InvalidRho(format!(
                "expected {} entries in r and gamma_nonzero",
                self.f
            )));
        }
        if self.irreducible && self.gamma_nonzero.iter().any(|&g| g) {
            return Err(TypesError::InvalidRho(
                "an irreducible ρ̄ has all γ_j = 0".into(),
            ));
        }
        for (name, v) in [("gamma", &self.gamma), ("alpha", &self.alpha), ("beta", &self.beta)] {
            if let Some(v) = v {
                if v.len() != self.f {
                    return Err(TypesError::InvalidRho(format!("{name} needs {} entries", self.f)));
                }
            }
        }
        if let Some(g) = &self.gamma {
            let p = self.p as i64;
            for (j, (&x, &flag)) in g.iter().zip(&self.gamma_nonzero).enumerate() {
                if (x.rem_euclid(p) != 0) != flag {
                    return Err(TypesError::InvalidRho(format!(
                        "gamma[{j}] disagrees with gamma_nonzero[{j}]"
                    )));
                }
            }
        }
        if self.r.iter().any(|&r| r + 1 <= 0 || r + 1 >= self.p as i64) {
            return Err(TypesError::InvalidRho("need 0 < r_j + 1 < p".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Params {
        Params {
            p: self.p,
            f: self.f,
        }
    }

    /// `s_j = 𝔴` exactly when `ρ̄` is irreducible and `j = 0`.
    pub fn s(&self) -> WeylElt {
        WeylElt((0..self.f).map(|j| self.irreducible && j == 0).collect())
    }

    /// `μ - η = (r_j, 0)_j`, the origin of the chart of `ρ̄`.
    pub fn chart(&self) -> WeightVector {
        WeightVector(self.r.iter().map(|&r| (r, 0)).collect())
    }

    /// `μ = (r_j + 1, 0)_j`.
    pub fn mu(&self) -> WeightVector {
        WeightVector(self.r.iter().map(|&r| (r + 1, 0)).collect())
    }

    /// Largest `N` with `N < r_j + 1 < p - N` for all `j`.
    pub fn genericity(&self) -> i64 {
        depth(self.p as i64, self.r.iter().map(|&r| r + 1))
    }

    /// `γ_{f-1-j}`, the flag governing coordinate `j` of `W(ρ̄)`.
    pub fn gamma_for_coord(&self, j: usize) -> bool {
        self.gamma_nonzero[self.f - 1 - j]
    }

    /// `𝒦 = {j : γ_{f-1-j} = 0}`, the coordinates along which `W(ρ̄)` spreads.
    pub fn free_coords(&self) -> Vec<usize> {
        (0..self.f).filter(|&j| !self.gamma_for_coord(j)).collect()
    }

    /// `s̃_j = sgn(s_j)` for `j ∈ 𝒦` and `0` otherwise.
    pub fn s_tilde(&self) -> Vec<i64> {
        let s = self.s();
        (0..self.f)
            .map(|j| if self.gamma_for_coord(j) { 0 } else { s.sgn(j) })
            .collect()
    }
}

fn depth(p: i64, pairings: impl Iterator<Item = i64>) -> i64 {
    pairings
        .map(|v| (v - 1).min(p - v - 1))
        .min()
        .unwrap_or(i64::MAX)
}

/// A Hodge–Tate weight `λ = (λ_{j,1}, λ_{j,2})_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HTWeight(pub Vec<(i64, i64)>);

impl HTWeight {
    pub fn new(pairs: Vec<(i64, i64)>) -> Result<Self, TypesError> {
        let w = HTWeight(pairs);
        if !w.is_dominant() {
            return Err(TypesError::InvalidWeight(format!("{w} is not dominant")));
        }
        Ok(w)
    }

    pub fn eta(f: usize) -> Self {
        HTWeight(vec![(1, 0); f])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&(a, b)| a >= b)
    }

    pub fn is_regular(&self) -> bool {
        self.0.iter().all(|&(a, b)| a > b)
    }

    /// Dominance order: equal sums and `λ'_{j,1} ≤ λ_{j,1}` everywhere.
    pub fn leq(&self, other: &HTWeight) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(&(a, b), &(c, d))| a + b == c + d && a <= c)
    }

    /// Every regular `λ' ≤ λ`.
    pub fn regular_below(&self) -> Vec<HTWeight> {
        let mut out = vec![Vec::new()];
        for &(a, b) in &self.0 {
            let s = a + b;
            let mut next = Vec::new();
            for pre in &out {
                for k in b..=a {
                    if 2 * k < s {
                        let mut v: Vec<(i64, i64)> = pre.clone();
                        v.push((s - k, k));
                        next.push(v);
                    }
                }
            }
            out = next;
        }
        out.into_iter().map(HTWeight).collect()
    }
}

impl fmt::Display for HTWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{}", parts.join(""))
    }
}

fn integers_in(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_digit() || (ch == '-' && cur.is_empty()) {
            cur.push(ch);
        } else if !cur.is_empty() {
            out.push(cur.parse::<i64>().map_err(|e| format!("{cur}: {e}"))?);
            cur.clear();
        }
    }
    Ok(out)
}

impl FromStr for HTWeight {
    type Err = TypesError;

    /// Accepts `(3,0)(2,1)` or `3,0;2,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let xs = integers_in(s).map_err(TypesError::InvalidWeight)?;
        if xs.is_empty() || xs.len() % 2 != 0 {
            return Err(TypesError::InvalidWeight(format!("cannot read pairs from {s:?}")));
        }
        HTWeight::new(xs.chunks(2).map(|c| (c[0], c[1])).collect())
    }
}

/// One coordinate `𝔱_{(m,n)}` or `𝔴𝔱_{(m,n)}` of an admissible tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmComp {
    pub flip: bool,
    pub m: i64,
    pub n: i64,
}

impl AdmComp {
    pub fn t(m: i64, n: i64) -> Self {
        AdmComp { flip: false, m, n }
    }

    pub fn wt(m: i64, n: i64) -> Self {
        AdmComp { flip: true, m, n }
    }

    /// `sgn(w)`: `-1` for the `𝔴𝔱` case.
    pub fn sgn(&self) -> i64 {
        if self.flip {
            -1
        } else {
            1
        }
    }

    /// `⟨ν, α^∨⟩ = m - n`.
    pub fn nu_bar(&self) -> i64 {
        self.m - self.n
    }
}

impl fmt::Display for AdmComp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.flip { "wt" } else { "t" };
        write!(f, "{prefix}({},{})", self.m, self.n)
    }
}

impl FromStr for AdmComp {
    type Err = TypesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || TypesError::MalformedDecomposition(format!("cannot parse {s:?}"));
        let (flip, rest) = if let Some(r) = s.strip_prefix("wt") {
            (true, r)
        } else if let Some(r) = s.strip_prefix('t') {
            (false, r)
        } else {
            return Err(bad());
        };
        let xs = integers_in(rest).map_err(|_| bad())?;
        match xs.as_slice() {
            &[m, n] if m >= 0 && n >= 0 => Ok(AdmComp { flip, m, n }),
            _ => Err(bad()),
        }
    }
}

/// An admissible tuple `w̃ = (w̃_0, …, w̃_{f-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmElt(pub Vec<AdmComp>);

impl AdmElt {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w̃_{f-1-j}`, the entry paired with coordinate `j`.
    pub fn for_coord(&self, j: usize) -> AdmComp {
        self.0[self.0.len() - 1 - j]
    }
}

impl fmt::Display for AdmElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl FromStr for AdmElt {
    type Err = TypesError;

    /// Accepts `t(2,1);wt(1,0)` (also with whitespace separators).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let comps = s
            .split(|c: char| c == ';' || c == ')' || c.is_whitespace())
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| format!("{t})").parse())
            .collect::<Result<Vec<AdmComp>, _>>()?;
        if comps.is_empty() {
            return Err(TypesError::MalformedDecomposition("empty tuple".into()));
        }
        Ok(AdmElt(comps))
    }
}

/// Coordinate options of `Adm^∨(𝔱_{λ_j})`.
pub fn adm_coord(l: (i64, i64)) -> Vec<AdmComp> {
    let (l1, l2) = l;
    let s = l1 + l2;
    let mut out = Vec::new();
    for a in l2..=l1 {
        out.push(AdmComp::t(a, s - a));
        if a != l2 {
            out.push(AdmComp::wt(a, s - a));
        }
    }
    out.sort();
    out
}

fn product(options: Vec<Vec<AdmComp>>) -> Vec<AdmElt> {
    let mut out = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for pre in &out {
            for &c in &opts {
                let mut v: Vec<AdmComp> = pre.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(AdmElt).collect()
}

/// `Adm^∨(𝔱_λ)`: entry `f-1-j` ranges over `𝔱_{(a, S-a)}` and `𝔴𝔱_{(a, S-a)}`
/// for `λ_{j,2} ≤ a ≤ λ_{j,1}` (`S = λ_{j,1} + λ_{j,2}`), except `𝔴𝔱_{(λ_{j,2}, λ_{j,1})}`.
pub fn adm_set(lambda: &HTWeight) -> Vec<AdmElt> {
    let f = lambda.len();
    product((0..f).map(|i| adm_coord(lambda.0[f - 1 - i])).collect())
}

/// A tame inertial type `τ = τ(s(τ), μ(τ) + η)` in lowest-alcove form, with
/// the admissible tuple it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameTypeSpec {
    pub p: u64,
    /// `s(τ) = s w^{-1}`.
    pub s: WeylElt,
    /// `μ(τ)`.
    pub mu: WeightVector,
    /// Largest `N` for which `μ(τ)` is `N`-deep.
    pub depth: i64,
    /// Integer lifts of `𝔞^{(j)}`, indexed by the coordinate `j` of `ρ̄`.
    pub a_values: Vec<i64>,
    pub wtilde: AdmElt,
    /// Origin of the chart of `ρ̄` and the sign pattern of `s`.
    pub rho_chart: WeightVector,
    pub rho_s: WeylElt,
}

impl TameTypeSpec {
    pub fn f(&self) -> usize {
        self.mu.0.len()
    }

    /// `𝔞^{(j)} mod p` in `[0, p)`.
    pub fn a_mod_p(&self, j: usize) -> i64 {
        self.a_values[j].rem_euclid(self.p as i64)
    }

    /// `𝔞^{(j)} ± k` is a unit for every `0 ≤ k ≤ ℓ` and every `j`.
    pub fn a_units_up_to(&self, ell: i64) -> bool {
        let p = self.p as i64;
        (0..self.f()).all(|j| {
            let a = self.a_mod_p(j);
            (0..=ell).all(|k| (a + k) % p != 0 && (a - k).rem_euclid(p) != 0)
        })
    }

    /// `sgn(s_j) sgn(w_j)` for coordinate `j`.
    fn sign(&self, j: usize) -> i64 {
        self.rho_s.sgn(j) * self.wtilde.for_coord(j).sgn()
    }
}

/// `τ_{w̃} = τ(s w^{-1}, μ - s w^{-1}(ν))` where `w̃_{f-1-j}` supplies
/// `(w_j, ν_j)`. In coordinates:
/// `μ(τ)_j + η_j = (r_j + 1 - m, -n)` if `s_j w_j^{-1} = 1` and
/// `(r_j + 1 - n, -m)` otherwise, and
/// `𝔞^{(j)} = -(sgn(s_j w_j)(r_j + 1) - (m - n))`.
pub fn tau_of_wtilde(rho: &RhoBarData, w: &AdmElt) -> Result<TameTypeSpec, TypesError> {
    rho.validate()?;
    if w.len() != rho.f {
        return Err(TypesError::MalformedDecomposition(format!(
            "w̃ has {} entries, expected {}",
            w.len(),
            rho.f
        )));
    }
    if w.0.iter().any(|c| c.m < 0 || c.n < 0) {
        return Err(TypesError::MalformedDecomposition(format!(
            "negative exponent in {w}"
        )));
    }
    let s = rho.s();
    let mut s_tau = Vec::with_capacity(rho.f);
    let mut mu = Vec::with_capacity(rho.f);
    let mut a_values = Vec::with_capacity(rho.f);
    for j in 0..rho.f {
        let c = w.for_coord(j);
        let flip = s.0[j] != c.flip;
        let r1 = rho.r[j] + 1;
        let (x, y) = if flip { (r1 - c.n, -c.m) } else { (r1 - c.m, -c.n) };
        s_tau.push(flip);
        mu.push((x - 1, y));
        a_values.push(-(s.sgn(j) * c.sgn() * r1 - c.nu_bar()));
    }
    let mu = WeightVector(mu);
    let p = rho.p as i64;
    let depth = depth(p, (0..rho.f).map(|j| mu.bar(j) + 1));
    Ok(TameTypeSpec {
        p: rho.p,
        s: WeylElt(s_tau),
        mu,
        depth,
        a_values,
        wtilde: w.clone(),
        rho_chart: rho.chart(),
        rho_s: s,
    })
}

/// A Serre weight together with its graph point in the chart of `ρ̄`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChartedWeight {
    pub point: GraphPoint,
    pub weight: SerreWeight,
}

fn charted(
    params: &Params,
    chart: &WeightVector,
    points: BTreeSet<GraphPoint>,
) -> Result<Vec<ChartedWeight>, TypesError> {
    points
        .into_iter()
        .map(|b| {
            if !in_lambda_mu(params, chart, &b) {
                return Err(TypesError::NotGeneric(format!(
                    "point {b} leaves the lowest alcove of the chart"
                )));
            }
            let weight = t_mu(params, chart, &b)?;
            Ok(ChartedWeight { point: b, weight })
        })
        .collect()
}

fn cartesian(per_coord: &[Vec<i64>]) -> BTreeSet<GraphPoint> {
    let mut out = vec![Vec::new()];
    for xs in per_coord {
        let mut next = Vec::new();
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

/// Coordinate values of `JH(σ̄(τ))`:
/// `b_j ∈ {sgn(s_j w_j)(J_j - (m - n)) : J_j ∈ {0, 1}}`.
fn jh_tau_values(tau: &TameTypeSpec, j: usize) -> Vec<i64> {
    let c = tau.wtilde.for_coord(j);
    let sg = tau.sign(j);
    vec![-sg * c.nu_bar(), sg * (1 - c.nu_bar())]
}

/// `JH(σ̄(τ)) = {F(𝔱_{μ-η}(s w^{-1}(ω - ν̄))) : ω ∈ Σ}` with `Σ = {η̄_J : J ⊆ 𝒥}`.
pub fn jh_sigma_tau(tau: &TameTypeSpec) -> Result<Vec<ChartedWeight>, TypesError> {
    let params = Params::new(tau.p, tau.f())?;
    if !is_n_deep(&params, &tau.mu, 1) {
        return Err(TypesError::NotGeneric(format!(
            "μ(τ) = {:?} is not 1-deep",
            tau.mu.0
        )));
    }
    let per: Vec<Vec<i64>> = (0..tau.f()).map(|j| jh_tau_values(tau, j)).collect();
    charted(&params, &tau.rho_chart, cartesian(&per))
}

/// `JH(σ̄(λ, τ))` for `σ̄(λ, τ) = σ̄(τ) ⊗ V(λ - η)`. Tensoring coordinate `j`
/// with `L(λ_{j,1} - 1, λ_{j,2})` translates by `D - 2i`, `0 ≤ i ≤ D`, where
/// `D = λ_{j,1} - 1 - λ_{j,2}`; the result is a hypercuboid.
pub fn jh_sigma_lambda_tau(
    lambda: &HTWeight,
    tau: &TameTypeSpec,
) -> Result<Vec<ChartedWeight>, TypesError> {
    let params = Params::new(tau.p, tau.f())?;
    if lambda.len() != tau.f() {
        return Err(WeightError::LengthMismatch {
            expected: tau.f(),
            got: lambda.len(),
        }
        .into());
    }
    if !lambda.is_regular() {
        return Err(TypesError::InvalidWeight(format!("{lambda} is not regular")));
    }
    if !is_n_deep(&params, &tau.mu, 1) {
        return Err(TypesError::NotGeneric(format!(
            "μ(τ) = {:?} is not 1-deep",
            tau.mu.0
        )));
    }
    let per: Vec<Vec<i64>> = (0..tau.f())
        .map(|j| {
            let d = lambda.0[j].0 - 1 - lambda.0[j].1;
            let mut vals: BTreeSet<i64> = BTreeSet::new();
            for b in jh_tau_values(tau, j) {
                for i in 0..=d {
                    vals.insert(b + d - 2 * i);
                }
            }
            vals.into_iter().collect()
        })
        .collect();
    charted(&params, &tau.rho_chart, cartesian(&per))
}

/// A modular Serre weight of `ρ̄` with its label `J_σ = {j : b_j ≠ 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModularWeight {
    pub point: GraphPoint,
    pub label: BTreeSet<usize>,
    pub weight: SerreWeight,
}

/// `W(ρ̄) = {F(𝔱_{μ-η}(b))}` with `b_j ∈ {0, sgn(s_j)}` when `γ_{f-1-j} = 0`
/// and `b_j = 0` otherwise.
pub fn w_of_rhobar(rho: &RhoBarData) -> Result<Vec<ModularWeight>, TypesError> {
    rho.validate()?;
    let params = rho.params();
    if rho.genericity() < 1 {
        return Err(TypesError::NotGeneric("ρ̄ must be at least 1-generic".into()));
    }
    let st = rho.s_tilde();
    let per: Vec<Vec<i64>> = st
        .iter()
        .map(|&s| if s == 0 { vec![0] } else { vec![0, s] })
        .collect();
    let out = charted(&params, &rho.chart(), cartesian(&per))?;
    Ok(out
        .into_iter()
        .map(|c| ModularWeight {
            label: label_of(&c.point),
            point: c.point,
            weight: c.weight,
        })
        .collect())
}

pub fn label_of(b: &GraphPoint) -> BTreeSet<usize> {
    b.0.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(j, _)| j)
        .collect()
}

/// Inverse of [`label_of`] on `W(ρ̄)`.
pub fn point_of_label(rho: &RhoBarData, label: &BTreeSet<usize>) -> Option<GraphPoint> {
    let st = rho.s_tilde();
    if label.iter().any(|&j| j >= rho.f || st[j] == 0) {
        return None;
    }
    Some(GraphPoint(
        (0..rho.f)
            .map(|j| if label.contains(&j) { st[j] } else { 0 })
            .collect(),
    ))
}

/// `X(ρ̄, λ)`: drop `𝔱_{(λ_{j,2}, λ_{j,1})}` at entry `f-1-j` whenever
/// `γ_{f-1-j} ≠ 0`.
pub fn x_rho_lambda(rho: &RhoBarData, lambda: &HTWeight) -> Vec<AdmElt> {
    let f = lambda.len();
    product(
        (0..f)
            .map(|i| {
                let j = f - 1 - i;
                let (l1, l2) = lambda.0[j];
                adm_coord(lambda.0[j])
                    .into_iter()
                    .filter(|c| !(rho.gamma_nonzero[i] && *c == AdmComp::t(l2, l1)))
                    .collect()
            })
            .collect(),
    )
}

/// `X(ρ̄, λ)` straight from the definition: those `w̃ ∈ Adm^∨(𝔱_λ)` with
/// `JH(σ̄(λ, τ_{w̃})) ∩ W(ρ̄) ≠ ∅`.
pub fn x_rho_lambda_by_definition(
    rho: &RhoBarData,
    lambda: &HTWeight,
) -> Result<Vec<AdmElt>, TypesError> {
    let w: BTreeSet<GraphPoint> = w_of_rhobar(rho)?.into_iter().map(|m| m.point).collect();
    let mut out = Vec::new();
    for wt in adm_set(lambda) {
        let tau = tau_of_wtilde(rho, &wt)?;
        let jh = jh_sigma_lambda_tau(lambda, &tau)?;
        if jh.iter().any(|c| w.contains(&c.point)) {
            out.push(wt);
        }
    }
    Ok(out)
}

/// `W(ρ̄) ∩ JH(σ̄(λ, τ_{w̃}))` as graph points.
pub fn modular_intersection(
    rho: &RhoBarData,
    lambda: &HTWeight,
    w: &AdmElt,
) -> Result<Vec<ModularWeight>, TypesError> {
    let tau = tau_of_wtilde(rho, w)?;
    let jh: BTreeSet<GraphPoint> = jh_sigma_lambda_tau(lambda, &tau)?
        .into_iter()
        .map(|c| c.point)
        .collect();
    Ok(w_of_rhobar(rho)?
        .into_iter()
        .filter(|m| jh.contains(&m.point))
        .collect())
}

/// The number of layers `S(w̃_j)`:
/// * `𝔱_{(m,n)}`: `min(m,n) + 1` if `m > n`, or `m < n` with `γ = 0`;
///   `min(m,n)` if `m < n` with `γ ≠ 0`, or `m = n`;
/// * `𝔴𝔱_{(m,n)}`: `min(m, n + 1)`.
pub fn s_count(c: AdmComp, gamma_nonzero: bool) -> i64 {
    let lo = c.m.min(c.n);
    if c.flip {
        c.m.min(c.n + 1)
    } else if c.m > c.n || (c.m < c.n && !gamma_nonzero) {
        lo + 1
    } else {
        lo
    }
}

/// `S(w̃, λ) = ∏_j max(0, S(w̃_{f-1-j}) - λ_{j,2})`.
pub fn s_total(w: &AdmElt, lambda: &HTWeight, rho: &RhoBarData) -> i64 {
    (0..lambda.len())
        .map(|j| {
            let i = lambda.len() - 1 - j;
            (s_count(w.0[i], rho.gamma_nonzero[i]) - lambda.0[j].1).max(0)
        })
        .product()
}

/// The two normal forms of the example table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixForm {
    /// `[[α v^m, 0], [a v^m, β v^n]]`.
    Lower,
    /// `[[0, β v^n], [α v^m, a v^n]]`.
    AntiDiag,
}

/// Shape of a normal-form matrix.
pub fn shape_of(form: MatrixForm, m: i64, n: i64, a_nonzero: bool) -> AdmComp {
    let flip = match form {
        MatrixForm::Lower => m <= n && a_nonzero,
        MatrixForm::AntiDiag => m <= n || !a_nonzero,
    };
    AdmComp { flip, m, n }
}

/// A 2×2 matrix over `F[v]` (with symbolic residue-field constants when
/// `ρ̄` carries no explicit values).
pub type Mat2 = [[MPoly; 2]; 2];

fn entry_value(values: &Option<Vec<i64>>, name: &str, j: usize) -> MPoly {
    match values {
        Some(v) => MPoly::int(v[j]),
        None => MPoly::var(&format!("{name}{j}")),
    }
}

/// `Ā^{(f-1-j)}` for each `j`, returned in the order `j = 0, …, f-1`:
/// `[[α_j v^m, 0], [α_j γ_{f-1-j} v^m, β_j v^n]]` for `𝔱_{(m,n)}` and
/// `[[0, α_j v^n], [β_j v^m, α_j γ_{f-1-j} v^n]]` for `𝔴𝔱_{(m,n)}`.
pub fn kisin_matrix(rho: &RhoBarData, w: &AdmElt) -> Result<Vec<Mat2>, TypesError> {
    rho.validate()?;
    if w.len() != rho.f {
        return Err(TypesError::MalformedDecomposition(format!(
            "w̃ has {} entries, expected {}",
            w.len(),
            rho.f
        )));
    }
    let lambda = HTWeight(
        (0..rho.f)
            .map(|j| {
                let c = w.for_coord(j);
                (c.m + c.n, 0)
            })
            .collect(),
    );
    if !x_rho_lambda(rho, &lambda).contains(w) {
        return Err(TypesError::NotInX(w.clone()));
    }
    let v = MPoly::var("v");
    let mut out = Vec::with_capacity(rho.f);
    for j in 0..rho.f {
        let c = w.for_coord(j);
        let g = rho.f - 1 - j;
        let alpha = entry_value(&rho.alpha, "alpha", j);
        let beta = entry_value(&rho.beta, "beta", j);
        let gamma = if !rho.gamma_nonzero[g] {
            MPoly::zero()
        } else {
            entry_value(&rho.gamma, "gamma", g)
        };
        let vm = v.pow(c.m as u32);
        let vn = v.pow(c.n as u32);
        let corner = &(&alpha * &gamma) * if c.flip { &vn } else { &vm };
        out.push(if c.flip {
            [
                [MPoly::zero(), &alpha * &vn],
                [&beta * &vm, corner],
            ]
        } else {
            [
                [&alpha * &vm, MPoly::zero()],
                [corner, &beta * &vn],
            ]
        });
    }
    Ok(out)
}

/// Reads the shape back off a matrix produced by [`kisin_matrix`].
pub fn shape_of_matrix(mat: &Mat2) -> Result<AdmComp, TypesError> {
    let deg = |q: &MPoly| q.degree_in("v") as i64;
    if mat[0][1].is_zero() && !mat[0][0].is_zero() {
        Ok(shape_of(
            MatrixForm::Lower,
            deg(&mat[0][0]),
            deg(&mat[1][1]),
            !mat[1][0].is_zero(),
        ))
    } else if mat[0][0].is_zero() && !mat[0][1].is_zero() {
        Ok(shape_of(
            MatrixForm::AntiDiag,
            deg(&mat[1][0]),
            deg(&mat[0][1]),
            !mat[1][1].is_zero(),
        ))
    } else {
        Err(TypesError::MalformedDecomposition(
            "matrix is not in a normal form".into(),
        ))
    }
}
