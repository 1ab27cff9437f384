//! Lattices in a locally algebraic type and the monomial ideals of unions of
//! special-fibre components.
//!
//! The Jordan–Hölder factors of `σ̄(λ, τ)` at each place form a hypercuboid in
//! the extension graph. One point `κ∘` in the intersection with `W(ρ̄)` is
//! fixed as origin, and `σ_κ` denotes the lattice with cosocle `κ`,
//! normalized so that `σ_{κ∘} ↪ σ_κ` is saturated.
//!
//! * [`epsilon`]: `ε_δ(σ_κ)`, the least `e` with `p^e σ_δ ↪ σ_κ` saturated.
//!   It counts the steps *towards* `κ∘` along a coordinatewise monotone
//!   path from `δ` to `κ`. This is the unique additive choice with
//!   `ε_{κ∘}(σ_κ) = 0`, neighbour values `{0, 1}`, and equality in
//!   `ε_δ(σ_κ) + ε_κ(σ_{κ'}) ≥ ε_δ(σ_{κ'})` exactly when `κ − δ ≤ κ' − δ`.
//! * [`varpi_step`], [`varpi_total`]: the ring elements relating patched
//!   modules of neighbouring lattices, as monomials in `x_j, y_j, p` modulo
//!   `x_j y_j = p`.
//! * [`lattice_profile`]: the exponents `v(κ)` with
//!   `σ° = Σ_κ p^{v(κ)} σ_κ`, evaluated at a point with `val(x_j) = t_j`.
//! * [`interval_ideal`], [`interval_checks`]: square-free monomial ideals in
//!   `⊗_j F[X'_j, Y'_j]/(X'_j Y'_j)` cutting out unions of components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::Rat;
use crate::typesweights::{
    jh_sigma_lambda_tau, modular_intersection, tau_of_wtilde, AdmElt, ChartedWeight, HTWeight,
    RhoBarData, TypesError,
};
use crate::weights::{box_points, leq, GraphPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("point {0} is outside the Jordan–Hölder cuboid")]
    OutOfCuboid(String),
    #[error("{0} and {1} are not neighbours")]
    NotNeighbors(String, String),
    #[error("the inclusion σ_{0} ↪ σ_{1} is not saturated")]
    NotSaturated(String, String),
    #[error("W(ρ̄) ∩ JH(σ̄(λ, τ)) is empty")]
    EmptyIntersection,
    #[error("origin {0} is not a modular weight of the cuboid")]
    NotModular(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("the intervals are not capped intervals with a common cap")]
    NotCappedIntervals,
    #[error(transparent)]
    Types(#[from] TypesError),
}

/// One place: the cuboid `∏_j [lo_j, hi_j]`, the origin `κ∘` and `s̃`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub origin: GraphPoint,
    pub s_tilde: Vec<i64>,
    /// Serre weights of the cuboid points, when built from `ρ̄`, `λ`, `w̃`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<ChartedWeight>,
}

impl PlaceBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>, origin: GraphPoint, s_tilde: Vec<i64>) -> Result<Self, LatticeError> {
        let f = lo.len();
        if hi.len() != f || origin.len() != f || s_tilde.len() != f {
            return Err(LatticeError::Malformed("coordinate counts differ".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(LatticeError::Malformed("empty cuboid".into()));
        }
        if s_tilde.iter().any(|s| s.abs() > 1) {
            return Err(LatticeError::Malformed("s̃ entries lie in {-1, 0, 1}".into()));
        }
        if origin.0.iter().zip(&s_tilde).any(|(&b, &s)| b != 0 && b != s) {
            return Err(LatticeError::NotModular(origin.to_string()));
        }
        let place = PlaceBox { lo, hi, origin, s_tilde, weights: Vec::new() };
        if !place.contains(&place.origin) {
            return Err(LatticeError::NotModular(place.origin.to_string()));
        }
        Ok(place)
    }

    pub fn f(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, a: &GraphPoint) -> bool {
        a.len() == self.f()
            && a.0.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn points(&self) -> Vec<GraphPoint> {
        box_points(&self.lo, &self.hi)
    }

    /// Cuboid points that are modular, i.e. have `b_j ∈ {0, s̃_j}`.
    pub fn modular_points(&self) -> Vec<GraphPoint> {
        self.points()
            .into_iter()
            .filter(|a| a.0.iter().zip(&self.s_tilde).all(|(&x, &s)| x == 0 || x == s))
            .collect()
    }

    /// Mirror image through the middle of the modular band: `α ↦ s̃ − α`.
    pub fn reflected(&self) -> PlaceBox {
        let refl = |a: &GraphPoint| {
            GraphPoint(a.0.iter().zip(&self.s_tilde).map(|(x, s)| s - x).collect())
        };
        PlaceBox {
            lo: self.hi.iter().zip(&self.s_tilde).map(|(h, s)| s - h).collect(),
            hi: self.lo.iter().zip(&self.s_tilde).map(|(l, s)| s - l).collect(),
            origin: refl(&self.origin),
            s_tilde: self.s_tilde.clone(),
            weights: Vec::new(),
        }
    }

    pub fn reflect_point(&self, a: &GraphPoint) -> GraphPoint {
        GraphPoint(a.0.iter().zip(&self.s_tilde).map(|(x, s)| s - x).collect())
    }
}

/// A point `κ = ⊗_v κ_v`: one graph point per place.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint(pub Vec<GraphPoint>);

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

/// The product of the per-place cuboids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSite {
    pub places: Vec<PlaceBox>,
}

/// Input for one place of [`LatticeSite::from_places`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceInput {
    pub rho: RhoBarData,
    pub lambda: HTWeight,
    pub wtilde: AdmElt,
    /// The origin `κ∘`; defaults to the first modular point.
    #[serde(default)]
    pub origin: Option<GraphPoint>,
}

impl LatticeSite {
    pub fn single(place: PlaceBox) -> Self {
        LatticeSite { places: vec![place] }
    }

    /// Builds the site of `σ̄(λ, τ_{w̃})` in the chart of `ρ̄`.
    pub fn from_data(
        rho: &RhoBarData,
        lambda: &HTWeight,
        wtilde: &AdmElt,
        origin: Option<&GraphPoint>,
    ) -> Result<Self, LatticeError> {
        Ok(LatticeSite::single(place_from_data(rho, lambda, wtilde, origin)?))
    }

    pub fn from_places(inputs: &[PlaceInput]) -> Result<Self, LatticeError> {
        let places = inputs
            .iter()
            .map(|i| place_from_data(&i.rho, &i.lambda, &i.wtilde, i.origin.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LatticeSite { places })
    }

    pub fn origin(&self) -> LatticePoint {
        LatticePoint(self.places.iter().map(|p| p.origin.clone()).collect())
    }

    pub fn contains(&self, k: &LatticePoint) -> bool {
        k.0.len() == self.places.len() && self.places.iter().zip(&k.0).all(|(p, a)| p.contains(a))
    }

    fn check(&self, k: &LatticePoint) -> Result<(), LatticeError> {
        if self.contains(k) {
            Ok(())
        } else {
            Err(LatticeError::OutOfCuboid(k.to_string()))
        }
    }

    /// All points, lexicographically.
    pub fn points(&self) -> Vec<LatticePoint> {
        let mut out = vec![Vec::new()];
        for place in &self.places {
            let pts = place.points();
            let mut next = Vec::with_capacity(out.len() * pts.len());
            for pre in &out {
                for a in &pts {
                    let mut v: Vec<GraphPoint> = pre.clone();
                    v.push(a.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(LatticePoint).collect()
    }

    /// Neighbours of `k` inside the cuboid.
    pub fn neighbors(&self, k: &LatticePoint) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        for (v, place) in self.places.iter().enumerate() {
            for j in 0..place.f() {
                for d in [-1, 1] {
                    let mut n = k.clone();
                    n.0[v].0[j] += d;
                    if place.contains(&n.0[v]) {
                        out.push(n);
                    }
                }
            }
        }
        out
    }

    pub fn reflected(&self) -> LatticeSite {
        LatticeSite { places: self.places.iter().map(PlaceBox::reflected).collect() }
    }

    pub fn reflect_point(&self, k: &LatticePoint) -> LatticePoint {
        LatticePoint(self.places.iter().zip(&k.0).map(|(p, a)| p.reflect_point(a)).collect())
    }

    /// Serre weights of a point, when known.
    pub fn weights_of(&self, k: &LatticePoint) -> Option<Vec<ChartedWeight>> {
        self.places
            .iter()
            .zip(&k.0)
            .map(|(p, a)| p.weights.iter().find(|c| &c.point == a).cloned())
            .collect()
    }
}

fn place_from_data(
    rho: &RhoBarData,
    lambda: &HTWeight,
    wtilde: &AdmElt,
    origin: Option<&GraphPoint>,
) -> Result<PlaceBox, LatticeError> {
    let tau = tau_of_wtilde(rho, wtilde)?;
    let jh = jh_sigma_lambda_tau(lambda, &tau)?;
    let f = rho.f;
    let mut lo = vec![i64::MAX; f];
    let mut hi = vec![i64::MIN; f];
    for c in &jh {
        for j in 0..f {
            lo[j] = lo[j].min(c.point.0[j]);
            hi[j] = hi[j].max(c.point.0[j]);
        }
    }
    let expected: i64 = lo.iter().zip(&hi).map(|(l, h)| h - l + 1).product();
    if expected != jh.len() as i64 {
        return Err(LatticeError::Malformed("Jordan–Hölder set is not a cuboid".into()));
    }
    let modular = modular_intersection(rho, lambda, wtilde)?;
    if modular.is_empty() {
        return Err(LatticeError::EmptyIntersection);
    }
    let origin = match origin {
        Some(o) => {
            if !modular.iter().any(|m| &m.point == o) {
                return Err(LatticeError::NotModular(o.to_string()));
            }
            o.clone()
        }
        None => modular[0].point.clone(),
    };
    let mut place = PlaceBox::new(lo, hi, origin, rho.s_tilde())?;
    place.weights = jh;
    Ok(place)
}

// ---------------------------------------------------------------------------
// ε

/// Steps towards `0` on a monotone path from `a` to `b` along one axis.
fn inward_steps(a: i64, b: i64) -> u64 {
    if a == 0 || (a > 0) != (b > 0) || b == 0 {
        // opposite sides (or b at the origin): every step until 0 is inward
        if a == 0 {
            return 0;
        }
        return a.unsigned_abs();
    }
    a.unsigned_abs().saturating_sub(b.unsigned_abs())
}

/// `ε_δ(σ_κ)` relative to the origin `κ∘`, for raw coordinates.
pub fn epsilon_raw(delta: &LatticePoint, kappa: &LatticePoint, origin: &LatticePoint) -> u64 {
    delta
        .0
        .iter()
        .zip(&kappa.0)
        .zip(&origin.0)
        .flat_map(|((d, k), o)| {
            d.0.iter()
                .zip(&k.0)
                .zip(&o.0)
                .map(|((&dj, &kj), &oj)| inward_steps(dj - oj, kj - oj))
        })
        .sum()
}

/// `ε_δ(σ_κ)`: the least `e` such that `p^e σ_δ ↪ σ_κ` is saturated.
pub fn epsilon(site: &LatticeSite, delta: &LatticePoint, kappa: &LatticePoint) -> Result<u64, LatticeError> {
    site.check(delta)?;
    site.check(kappa)?;
    Ok(epsilon_raw(delta, kappa, &site.origin()))
}

/// `κ ≤ κ'` relative to `δ` in every place: `κ − δ ≤ κ' − δ`.
pub fn between(delta: &LatticePoint, kappa: &LatticePoint, kappa_prime: &LatticePoint) -> bool {
    delta
        .0
        .iter()
        .zip(kappa.0.iter().zip(&kappa_prime.0))
        .all(|(d, (k, kp))| leq(&k.sub(d), &kp.sub(d)))
}

/// Whether `σ_κ ↪ σ_{κ'}` is saturated.
pub fn saturated(site: &LatticeSite, kappa: &LatticePoint, kappa_prime: &LatticePoint) -> Result<bool, LatticeError> {
    Ok(epsilon(site, kappa, kappa_prime)? == 0)
}

/// One instance of the triangle law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCheck {
    /// `ε_δ(σ_κ) + ε_κ(σ_{κ'})`.
    pub via: u64,
    /// `ε_δ(σ_{κ'})`.
    pub direct: u64,
    pub between: bool,
}

impl TriangleCheck {
    /// The inequality holds, with equality exactly when `κ − δ ≤ κ' − δ`.
    pub fn holds(&self) -> bool {
        self.via >= self.direct && ((self.via == self.direct) == self.between)
    }
}

pub fn triangle(
    site: &LatticeSite,
    delta: &LatticePoint,
    kappa: &LatticePoint,
    kappa_prime: &LatticePoint,
) -> Result<TriangleCheck, LatticeError> {
    Ok(TriangleCheck {
        via: epsilon(site, delta, kappa)? + epsilon(site, kappa, kappa_prime)?,
        direct: epsilon(site, delta, kappa_prime)?,
        between: between(delta, kappa, kappa_prime),
    })
}

/// Counts over an exhaustive triangle-law run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleSummary {
    pub triples: u64,
    pub equalities: u64,
    pub failures: u64,
}

/// Checks the triangle law on every triple of points of the site.
pub fn triangle_law_exhaustive(site: &LatticeSite) -> TriangleSummary {
    let pts = site.points();
    let origin = site.origin();
    pts.par_iter()
        .map(|d| {
            let mut s = TriangleSummary::default();
            for k in &pts {
                let dk = epsilon_raw(d, k, &origin);
                for kp in &pts {
                    let via = dk + epsilon_raw(k, kp, &origin);
                    let direct = epsilon_raw(d, kp, &origin);
                    let btw = between(d, k, kp);
                    s.triples += 1;
                    if via == direct {
                        s.equalities += 1;
                    }
                    if via < direct || ((via == direct) != btw) {
                        s.failures += 1;
                    }
                }
            }
            s
        })
        .reduce(TriangleSummary::default, |a, b| TriangleSummary {
            triples: a.triples + b.triples,
            equalities: a.equalities + b.equalities,
            failures: a.failures + b.failures,
        })
}

// ---------------------------------------------------------------------------
// ϖ

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarpiSymbol {
    P,
    X { place: usize, j: usize },
    Y { place: usize, j: usize },
}

impl fmt::Display for VarpiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarpiSymbol::P => write!(f, "p"),
            VarpiSymbol::X { place: 0, j } => write!(f, "x_{j}"),
            VarpiSymbol::Y { place: 0, j } => write!(f, "y_{j}"),
            VarpiSymbol::X { place, j } => write!(f, "x_{j}^({place})"),
            VarpiSymbol::Y { place, j } => write!(f, "y_{j}^({place})"),
        }
    }
}

/// A monomial in `p, x_j, y_j`, reduced by `x_j y_j = p`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarpiElement {
    #[serde(with = "exps_as_pairs")]
    pub exps: BTreeMap<VarpiSymbol, u32>,
}

mod exps_as_pairs {
    use super::VarpiSymbol;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<VarpiSymbol, u32>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<VarpiSymbol, u32>, D::Error> {
        Ok(Vec::<(VarpiSymbol, u32)>::deserialize(d)?.into_iter().collect())
    }
}

impl VarpiElement {
    pub fn one() -> Self {
        VarpiElement::default()
    }

    pub fn symbol(s: VarpiSymbol) -> Self {
        VarpiElement { exps: BTreeMap::from([(s, 1)]) }
    }

    pub fn p() -> Self {
        Self::symbol(VarpiSymbol::P)
    }

    pub fn x(place: usize, j: usize) -> Self {
        Self::symbol(VarpiSymbol::X { place, j })
    }

    pub fn y(place: usize, j: usize) -> Self {
        Self::symbol(VarpiSymbol::Y { place, j })
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, s: VarpiSymbol) -> u32 {
        self.exps.get(&s).copied().unwrap_or(0)
    }

    fn reduce(mut self) -> Self {
        let xs: Vec<(usize, usize)> = self
            .exps
            .keys()
            .filter_map(|s| match *s {
                VarpiSymbol::X { place, j } => Some((place, j)),
                _ => None,
            })
            .collect();
        for (place, j) in xs {
            let (xk, yk) = (VarpiSymbol::X { place, j }, VarpiSymbol::Y { place, j });
            let m = self.exponent(xk).min(self.exponent(yk));
            if m > 0 {
                for k in [xk, yk] {
                    let e = self.exps.get_mut(&k).expect("present");
                    *e -= m;
                    if *e == 0 {
                        self.exps.remove(&k);
                    }
                }
                *self.exps.entry(VarpiSymbol::P).or_insert(0) += m;
            }
        }
        self
    }

    pub fn mul(&self, other: &VarpiElement) -> VarpiElement {
        let mut out = self.clone();
        for (&s, &e) in &other.exps {
            *out.exps.entry(s).or_insert(0) += e;
        }
        out.reduce()
    }

    /// Exchanges every `x_j` with `y_j`.
    pub fn swap_xy(&self) -> VarpiElement {
        VarpiElement {
            exps: self
                .exps
                .iter()
                .map(|(&s, &e)| {
                    let t = match s {
                        VarpiSymbol::X { place, j } => VarpiSymbol::Y { place, j },
                        VarpiSymbol::Y { place, j } => VarpiSymbol::X { place, j },
                        VarpiSymbol::P => VarpiSymbol::P,
                    };
                    (t, e)
                })
                .collect(),
        }
    }

    /// Valuation at a point: `x_j ↦ t_j`, `y_j ↦ 1 − t_j`, `p ↦ 1`.
    pub fn valuation(&self, point: &PadicPoint) -> Rat {
        self.exps.iter().fold(Rat::zero(), |acc, (&s, &e)| {
            let v = match s {
                VarpiSymbol::P => Rat::one(),
                VarpiSymbol::X { place, j } => point.t[place][j].clone(),
                VarpiSymbol::Y { place, j } => Rat::one() - &point.t[place][j],
            };
            acc + v * Rat::from_integer(e.into())
        })
    }
}

impl fmt::Display for VarpiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(s, &e)| if e == 1 { s.to_string() } else { format!("{s}^{e}") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Which of the four cases of a neighbour step applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepBranch {
    /// Moving away from the modular band: `1`.
    Outward,
    /// From `0` to `s̃_j ≠ 0`: `y_j`.
    IntoBand,
    /// From `s̃_j ≠ 0` to `0`: `x_j`.
    OutOfBand,
    /// Moving towards the modular band: `p`.
    Inward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarpiStep {
    pub place: usize,
    pub j: usize,
    pub branch: StepBranch,
    pub varpi: VarpiElement,
    /// `ϖ'`: `1 ↔ p` and `x_j ↔ y_j` exchanged, so that `ϖ·ϖ' = p`.
    pub varpi_prime: VarpiElement,
}

/// `ϖ(κ, κ')` for neighbours `κ, κ'` differing in coordinate `j` at one place.
pub fn varpi_step(site: &LatticeSite, kappa: &LatticePoint, kappa_prime: &LatticePoint) -> Result<VarpiStep, LatticeError> {
    site.check(kappa)?;
    site.check(kappa_prime)?;
    let not_nb = || LatticeError::NotNeighbors(kappa.to_string(), kappa_prime.to_string());
    let mut diff = None;
    for (v, (a, b)) in kappa.0.iter().zip(&kappa_prime.0).enumerate() {
        for (j, (x, y)) in a.0.iter().zip(&b.0).enumerate() {
            if x != y {
                if diff.is_some() || (x - y).abs() != 1 {
                    return Err(not_nb());
                }
                diff = Some((v, j));
            }
        }
    }
    let (place, j) = diff.ok_or_else(not_nb)?;
    let s = site.places[place].s_tilde[j];
    let (a, b) = (kappa.0[place].0[j], kappa_prime.0[place].0[j]);
    let (lo, hi) = (s.min(0), s.max(0));
    let branch = if s != 0 && a == 0 && b == s {
        StepBranch::IntoBand
    } else if s != 0 && a == s && b == 0 {
        StepBranch::OutOfBand
    } else if (b < a && a <= lo) || (hi <= a && a < b) {
        StepBranch::Outward
    } else {
        debug_assert!((a < b && b <= lo) || (hi <= b && b < a));
        StepBranch::Inward
    };
    let (varpi, varpi_prime) = match branch {
        StepBranch::Outward => (VarpiElement::one(), VarpiElement::p()),
        StepBranch::IntoBand => (VarpiElement::y(place, j), VarpiElement::x(place, j)),
        StepBranch::OutOfBand => (VarpiElement::x(place, j), VarpiElement::y(place, j)),
        StepBranch::Inward => (VarpiElement::p(), VarpiElement::one()),
    };
    Ok(VarpiStep { place, j, branch, varpi, varpi_prime })
}

/// `ϖ_j(κ_v)` for one coordinate, relative to `b = κ∘`.
fn varpi_coord(place: usize, j: usize, alpha: i64, b: i64, s: i64) -> VarpiElement {
    if s == 0 {
        return VarpiElement::one();
    }
    if b == s && ((s < 0 && alpha >= 0) || (s > 0 && alpha <= 0)) {
        VarpiElement::x(place, j)
    } else if b == 0 && ((s > 0 && alpha >= s) || (s < 0 && alpha <= s)) {
        VarpiElement::y(place, j)
    } else {
        VarpiElement::one()
    }
}

/// `ϖ(κ) = ∏_{v,j} ϖ_j(κ_v)`, with `M(σ_{κ∘}) = ϖ(κ)·M(σ_κ)`.
pub fn varpi_total(site: &LatticeSite, kappa: &LatticePoint) -> Result<VarpiElement, LatticeError> {
    site.check(kappa)?;
    let mut out = VarpiElement::one();
    for (v, (place, a)) in site.places.iter().zip(&kappa.0).enumerate() {
        for j in 0..place.f() {
            let factor = varpi_coord(v, j, a.0[j], place.origin.0[j], place.s_tilde[j]);
            out = out.mul(&factor);
        }
    }
    Ok(out)
}

/// The path from `κ∘` to `κ` changing one place at a time and, within a
/// place, one coordinate at a time.
pub fn canonical_path(site: &LatticeSite, kappa: &LatticePoint) -> Result<Vec<LatticePoint>, LatticeError> {
    site.check(kappa)?;
    let mut cur = site.origin();
    let mut path = vec![cur.clone()];
    for v in 0..site.places.len() {
        for j in 0..site.places[v].f() {
            while cur.0[v].0[j] != kappa.0[v].0[j] {
                cur.0[v].0[j] += (kappa.0[v].0[j] - cur.0[v].0[j]).signum();
                path.push(cur.clone());
            }
        }
    }
    Ok(path)
}

/// `∏ ϖ(κ_i, κ_{i+1})` along a path; every step must be a saturated inclusion.
pub fn path_product(site: &LatticeSite, path: &[LatticePoint]) -> Result<VarpiElement, LatticeError> {
    let mut out = VarpiElement::one();
    for w in path.windows(2) {
        if !saturated(site, &w[0], &w[1])? {
            return Err(LatticeError::NotSaturated(w[0].to_string(), w[1].to_string()));
        }
        out = out.mul(&varpi_step(site, &w[0], &w[1])?.varpi);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// cokernels

fn single_step(kappa: &LatticePoint, kappa_prime: &LatticePoint) -> Option<usize> {
    let mut place = None;
    let mut dist = 0;
    for (v, (a, b)) in kappa.0.iter().zip(&kappa_prime.0).enumerate() {
        let d = a.sub(b).l1();
        if d > 0 {
            place = Some(v);
            dist += d;
        }
    }
    if dist == 1 {
        place
    } else {
        None
    }
}

fn coker_filter(
    site: &LatticeSite,
    kappa: &LatticePoint,
    kappa_prime: &LatticePoint,
) -> Result<usize, LatticeError> {
    site.check(kappa)?;
    site.check(kappa_prime)?;
    let v = single_step(kappa, kappa_prime)
        .ok_or_else(|| LatticeError::NotNeighbors(kappa.to_string(), kappa_prime.to_string()))?;
    if !saturated(site, kappa, kappa_prime)? {
        return Err(LatticeError::NotSaturated(kappa.to_string(), kappa_prime.to_string()));
    }
    Ok(v)
}

/// `JH(Coker(σ_κ ↪ σ_{κ'}))` for a saturated neighbour step: those `δ`
/// with `κ'_v − κ_v ≤ δ_v − κ_v`.
pub fn coker_jh(site: &LatticeSite, kappa: &LatticePoint, kappa_prime: &LatticePoint) -> Result<Vec<LatticePoint>, LatticeError> {
    let v = coker_filter(site, kappa, kappa_prime)?;
    let step = kappa_prime.0[v].sub(&kappa.0[v]);
    Ok(site
        .points()
        .into_iter()
        .filter(|d| leq(&step, &d.0[v].sub(&kappa.0[v])))
        .collect())
}

/// `JH(Coker(p σ_{κ'} ↪ σ_κ))`: those `δ` with `κ_v − κ'_v ≤ δ_v − κ'_v`.
pub fn coker_jh_converse(
    site: &LatticeSite,
    kappa: &LatticePoint,
    kappa_prime: &LatticePoint,
) -> Result<Vec<LatticePoint>, LatticeError> {
    let v = coker_filter(site, kappa, kappa_prime)?;
    let step = kappa.0[v].sub(&kappa_prime.0[v]);
    Ok(site
        .points()
        .into_iter()
        .filter(|d| leq(&step, &d.0[v].sub(&kappa_prime.0[v])))
        .collect())
}

// ---------------------------------------------------------------------------
// profiles

/// `t_j = val(x_j)` for every place and coordinate; `val(y_j) = 1 − t_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicPoint {
    pub t: Vec<Vec<Rat>>,
}

impl PadicPoint {
    pub fn uniform(site: &LatticeSite, t: Rat) -> Self {
        PadicPoint { t: site.places.iter().map(|p| vec![t.clone(); p.f()]).collect() }
    }

    pub fn validate(&self, site: &LatticeSite) -> Result<(), LatticeError> {
        if self.t.len() != site.places.len()
            || self.t.iter().zip(&site.places).any(|(t, p)| t.len() != p.f())
        {
            return Err(LatticeError::Malformed("point shape does not match the site".into()));
        }
        if self.t.iter().flatten().any(|t| *t < Rat::zero() || *t > Rat::one()) {
            return Err(LatticeError::Malformed("valuations t_j lie in [0, 1]".into()));
        }
        Ok(())
    }

    /// `t ↦ 1 − t` everywhere.
    pub fn complement(&self) -> PadicPoint {
        PadicPoint {
            t: self.t.iter().map(|r| r.iter().map(|t| Rat::one() - t).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub point: LatticePoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<ChartedWeight>>,
    pub varpi: VarpiElement,
    pub value: Rat,
}

/// `κ ↦ v(κ)` with `σ° = Σ_κ p^{v(κ)} σ_κ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeProfile {
    pub origin: LatticePoint,
    pub entries: Vec<ProfileEntry>,
}

impl LatticeProfile {
    pub fn value(&self, k: &LatticePoint) -> Option<&Rat> {
        self.entries.iter().find(|e| &e.point == k).map(|e| &e.value)
    }

    pub fn distinct_values(&self) -> BTreeSet<Rat> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }

    /// Hasse diagram of saturated neighbour inclusions `σ_κ ↪ σ_{κ'}`,
    /// labelled by `ϖ(κ, κ')`, in DOT.
    pub fn to_dot(&self, site: &LatticeSite) -> String {
        let mut out = String::from("digraph saturation {\n  rankdir=BT;\n");
        let name = |k: &LatticePoint| format!("\"{k}\"");
        for e in &self.entries {
            let shape = if e.point == self.origin { ",shape=box" } else { "" };
            out += &format!("  {} [label=\"{}\\nv={}\"{}];\n", name(&e.point), e.point, e.value, shape);
        }
        for e in &self.entries {
            for n in site.neighbors(&e.point) {
                if saturated(site, &e.point, &n).unwrap_or(false) {
                    let w = varpi_step(site, &e.point, &n).map(|s| s.varpi.to_string()).unwrap_or_default();
                    out += &format!("  {} -> {} [label=\"{}\"];\n", name(&e.point), name(&n), w);
                }
            }
        }
        out += "}\n";
        out
    }
}

/// Evaluates `ϖ(κ)` at the point for every `κ` in the cuboid.
pub fn lattice_profile(site: &LatticeSite, point: &PadicPoint) -> Result<LatticeProfile, LatticeError> {
    point.validate(site)?;
    let entries = site
        .points()
        .into_iter()
        .map(|k| {
            let varpi = varpi_total(site, &k)?;
            Ok(ProfileEntry {
                value: varpi.valuation(point),
                weights: site.weights_of(&k),
                point: k,
                varpi,
            })
        })
        .collect::<Result<Vec<_>, LatticeError>>()?;
    Ok(LatticeProfile { origin: site.origin(), entries })
}

// ---------------------------------------------------------------------------
// interval ideals

/// A subset `J ⊆ 𝒦 = {0, …, k−1}` as a bit mask.
pub type JMask = u32;

pub fn mask_of(set: &BTreeSet<usize>) -> JMask {
    set.iter().fold(0, |m, &j| m | (1 << j))
}

pub fn set_of(mask: JMask) -> BTreeSet<usize> {
    (0..32).filter(|j| mask >> j & 1 == 1).collect()
}

/// Square-free monomial in `X'_j` (bit `2j`) and `Y'_j` (bit `2j+1`).
pub type Monomial = u64;

pub fn x_var(j: usize) -> Monomial {
    1 << (2 * j)
}

pub fn y_var(j: usize) -> Monomial {
    1 << (2 * j + 1)
}

fn kills(m: Monomial, k: usize) -> bool {
    (0..k).any(|j| m & x_var(j) != 0 && m & y_var(j) != 0)
}

fn minimize(gens: impl IntoIterator<Item = Monomial>) -> BTreeSet<Monomial> {
    let mut v: Vec<Monomial> = gens.into_iter().collect();
    v.sort_by_key(|m| (m.count_ones(), *m));
    v.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in v {
        if !out.iter().any(|g| g & m == *g) {
            out.push(m);
        }
    }
    out.into_iter().collect()
}

/// A radical monomial ideal of `⊗_j F[X'_j, Y'_j]/(X'_j Y'_j)`, stored by
/// its minimal generators none of which is divisible by `X'_j Y'_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalIdeal {
    pub k: usize,
    pub generators: BTreeSet<Monomial>,
}

impl IntervalIdeal {
    fn from_lift(k: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let all = minimize(gens.into_iter().chain((0..k).map(|j| x_var(j) | y_var(j))));
        IntervalIdeal { k, generators: all.into_iter().filter(|&m| !kills(m, k)).collect() }
    }

    fn lift(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .copied()
            .chain((0..self.k).map(|j| x_var(j) | y_var(j)))
            .collect()
    }

    /// The unit ideal, cutting out nothing.
    pub fn unit(k: usize) -> Self {
        Self::from_lift(k, [0])
    }

    /// `𝔭_J = (X'_j : j ∈ J) + (Y'_j : j ∉ J)`.
    pub fn prime(k: usize, j: JMask) -> Self {
        Self::from_lift(k, (0..k).map(|i| if j >> i & 1 == 1 { x_var(i) } else { y_var(i) }))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::from_lift(self.k, self.lift().into_iter().chain(other.lift()))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (self.lift(), other.lift());
        Self::from_lift(self.k, a.iter().flat_map(|g| b.iter().map(move |h| g | h)))
    }

    /// `(I : m)`, generated by `g / gcd(g, m)`.
    pub fn colon(&self, m: Monomial) -> Self {
        Self::from_lift(self.k, self.lift().into_iter().map(|g| g & !m))
    }

    pub fn contains(&self, m: Monomial) -> bool {
        kills(m, self.k) || self.generators.iter().any(|g| g & m == *g)
    }

    pub fn is_unit(&self) -> bool {
        self.generators.contains(&0)
    }
}

pub fn monomial_string(m: Monomial, k: usize) -> String {
    if m == 0 {
        return "1".into();
    }
    let mut parts = Vec::new();
    for j in 0..k {
        if m & x_var(j) != 0 {
            parts.push(format!("X{j}"));
        }
        if m & y_var(j) != 0 {
            parts.push(format!("Y{j}"));
        }
    }
    parts.join("*")
}

impl fmt::Display for IntervalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|&m| monomial_string(m, self.k)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `I_𝒲 = ⋂_{J ∈ 𝒲} 𝔭_J`; the empty family gives the unit ideal.
pub fn interval_ideal(k: usize, family: &BTreeSet<JMask>) -> IntervalIdeal {
    family
        .iter()
        .fold(IntervalIdeal::unit(k), |acc, &j| acc.intersect(&IntervalIdeal::prime(k, j)))
}

/// `ℱ(J₁, J₂) = {J : J₁ ⊆ J ⊆ J₂}`, or `ℱ^× = ℱ ∖ {J₁}` when punctured; the
/// cap is `J₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CappedInterval {
    pub lower: JMask,
    pub cap: JMask,
    pub punctured: bool,
}

impl CappedInterval {
    pub fn new(lower: JMask, cap: JMask, punctured: bool) -> Result<Self, LatticeError> {
        if lower & !cap != 0 {
            return Err(LatticeError::NotCappedIntervals);
        }
        Ok(CappedInterval { lower, cap, punctured })
    }

    pub fn members(&self) -> BTreeSet<JMask> {
        let free = self.cap & !self.lower;
        let mut out = BTreeSet::new();
        let mut sub = free;
        loop {
            let j = self.lower | sub;
            if !(self.punctured && j == self.lower) {
                out.insert(j);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        out
    }

    /// Every capped interval inside `{0, …, k−1}`.
    pub fn all(k: usize) -> Vec<CappedInterval> {
        let full: JMask = (1 << k) - 1;
        let mut out = Vec::new();
        for cap in 0..=full {
            for lower in 0..=full {
                if lower & !cap == 0 {
                    for punctured in [false, true] {
                        out.push(CappedInterval { lower, cap, punctured });
                    }
                }
            }
        }
        out
    }
}

/// `∏_{j ∈ J₂ ∖ J₁} X'_j`.
pub fn quotient_generator(interval: &CappedInterval) -> Monomial {
    set_of(interval.cap & !interval.lower).into_iter().fold(0, |m, j| m | x_var(j))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub generator: String,
    /// `I_{ℱ^×} = I_ℱ + (g)`.
    pub generates: bool,
    /// `(I_ℱ : g) = I_{{J₁}}`, so `I_{ℱ^×}/I_ℱ ≅ R/I_{{J₁}}`.
    pub annihilator_is_prime: bool,
}

impl QuotientReport {
    pub fn ok(&self) -> bool {
        self.generates && self.annihilator_is_prime
    }
}

/// Checks that `I_{ℱ(J₁,J₂)^×}/I_{ℱ(J₁,J₂)}` is cyclic, generated by
/// `∏_{j ∈ J₂∖J₁} X'_j`, with annihilator `𝔭_{J₁}`.
pub fn quotient_check(k: usize, lower: JMask, cap: JMask) -> Result<QuotientReport, LatticeError> {
    let full = CappedInterval::new(lower, cap, false)?;
    let punct = CappedInterval::new(lower, cap, true)?;
    let i_full = interval_ideal(k, &full.members());
    let i_punct = interval_ideal(k, &punct.members());
    let g = quotient_generator(&full);
    let generated = i_full.sum(&IntervalIdeal::from_lift(k, [g]));
    Ok(QuotientReport {
        generator: monomial_string(g, k),
        generates: generated == i_punct,
        annihilator_is_prime: i_full.colon(g) == IntervalIdeal::prime(k, lower),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub sum: IntervalIdeal,
    pub intersection: IntervalIdeal,
    pub sum_equals_intersection: bool,
}

/// `I_{𝒲₁} + I_{𝒲₂} = I_{𝒲₁ ∩ 𝒲₂}` for capped intervals with a common cap.
pub fn interval_checks(k: usize, w1: &CappedInterval, w2: &CappedInterval) -> Result<IntervalReport, LatticeError> {
    if w1.cap != w2.cap || w1.lower & !w1.cap != 0 || w2.lower & !w2.cap != 0 {
        return Err(LatticeError::NotCappedIntervals);
    }
    Ok(sum_vs_intersection(k, &w1.members(), &w2.members()))
}

/// The comparison for arbitrary families, with no cap hypothesis.
pub fn sum_vs_intersection(k: usize, w1: &BTreeSet<JMask>, w2: &BTreeSet<JMask>) -> IntervalReport {
    let sum = interval_ideal(k, w1).sum(&interval_ideal(k, w2));
    let common: BTreeSet<JMask> = w1.intersection(w2).copied().collect();
    let intersection = interval_ideal(k, &common);
    IntervalReport { sum_equals_intersection: sum == intersection, sum, intersection }
}

/// Summary of the exhaustive interval checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSummary {
    pub k: usize,
    pub pairs: usize,
    pub sum_failures: usize,
    pub quotients: usize,
    pub quotient_failures: usize,
    /// Pairs of intervals with different caps where the sum law fails.
    pub uncapped_counterexamples: usize,
}

impl IntervalSummary {
    pub fn ok(&self) -> bool {
        self.sum_failures == 0 && self.quotient_failures == 0
    }
}

/// Runs both lemmas over every capped interval (pair) in `{0, …, k−1}`.
pub fn interval_checks_exhaustive(k: usize) -> IntervalSummary {
    let all = CappedInterval::all(k);
    let pairs: Vec<(CappedInterval, CappedInterval)> = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (*a, *b)))
        .collect();
    let (same, diff): (Vec<_>, Vec<_>) = pairs.into_iter().partition(|(a, b)| a.cap == b.cap);
    let sum_failures = same
        .par_iter()
        .filter(|(a, b)| !interval_checks(k, a, b).map(|r| r.sum_equals_intersection).unwrap_or(false))
        .count();
    let uncapped_counterexamples = diff
        .par_iter()
        .filter(|(a, b)| !sum_vs_intersection(k, &a.members(), &b.members()).sum_equals_intersection)
        .count();
    let plain: Vec<&CappedInterval> = all.iter().filter(|c| !c.punctured).collect();
    let quotient_failures = plain
        .par_iter()
        .filter(|c| !quotient_check(k, c.lower, c.cap).map(|r| r.ok()).unwrap_or(false))
        .count();
    IntervalSummary {
        k,
        pairs: same.len(),
        sum_failures,
        quotients: plain.len(),
        quotient_failures,
        uncapped_counterexamples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inward_step_counts() {
        assert_eq!(inward_steps(0, 3), 0);
        assert_eq!(inward_steps(3, 0), 3);
        assert_eq!(inward_steps(3, 1), 2);
        assert_eq!(inward_steps(1, 3), 0);
        assert_eq!(inward_steps(-2, 1), 2);
        assert_eq!(inward_steps(-2, -3), 0);
    }

    #[test]
    fn reduction_by_xy() {
        let e = VarpiElement::x(0, 1).mul(&VarpiElement::y(0, 1));
        assert_eq!(e, VarpiElement::p());
        assert_eq!(VarpiElement::x(0, 0).mul(&VarpiElement::y(0, 1)).to_string(), "x_0·y_1");
    }

    #[test]
    fn masks() {
        let s: BTreeSet<usize> = [0, 2].into();
        assert_eq!(mask_of(&s), 0b101);
        assert_eq!(set_of(0b101), s);
        assert_eq!(monomial_string(x_var(0) | y_var(2), 3), "X0*Y2");
    }
}
