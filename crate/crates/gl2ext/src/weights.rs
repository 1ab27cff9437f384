//! Weight lattice, extension graph and the `t_mu` parametrisation of regular
//! Serre weights.
//!
//! Conventions. A weight is a vector of pairs `(λ_{j,1}, λ_{j,2})`, one per
//! embedding `j ∈ Z/f`. Write `λ̄_j = λ_{j,1} - λ_{j,2}`. A graph point `ω ∈ Z^f`
//! names the Serre weight `t_mu(μ, ω)`, computed coordinatewise from the
//! element `ω̃ = t_x·w` of the extended affine Weyl group:
//!
//! * `w_j = 𝔴` exactly when `ω_{j+1}` is odd;
//! * the translation part `x_j` satisfies `x_{j,1} + x_{j,2} = -ω_{j+1}` and
//!   `x_{j,1} - x_{j,2} ∈ {0, 1}` (0 for `w_j = 1`, 1 for `w_j = 𝔴`);
//! * `t_mu(μ, ω)_j = p·x_j + w_j(λ_j + η) - η` where `λ_j = μ_j + (ω_j, 0)`.
//!
//! Indices are cyclic, so `ω_{f}` means `ω_0`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("p = {0} must be a prime greater than 3")]
    InvalidPrime(u64),
    #[error("f must be positive")]
    InvalidDegree,
    #[error("length mismatch: expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("graph point {omega} is not in Λ_W^μ (coordinate {coord})")]
    NotInLambdaMu { omega: GraphPoint, coord: usize },
    #[error("weight is not p-restricted at coordinate {0}")]
    NotRestricted(usize),
}

/// The prime `p` and residue degree `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub p: u64,
    pub f: usize,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl Params {
    pub fn new(p: u64, f: usize) -> Result<Self, WeightError> {
        if p <= 3 || !is_prime(p) {
            return Err(WeightError::InvalidPrime(p));
        }
        if f == 0 {
            return Err(WeightError::InvalidDegree);
        }
        Ok(Params { p, f })
    }

    /// `p^f - 1`, the order of the determinant characters.
    pub fn det_modulus(&self) -> i128 {
        (self.p as i128).pow(self.f as u32) - 1
    }

    fn check_len(&self, len: usize) -> Result<(), WeightError> {
        if len != self.f {
            return Err(WeightError::LengthMismatch {
                expected: self.f,
                got: len,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<(i64, i64)>);

impl WeightVector {
    pub fn uniform(f: usize, pair: (i64, i64)) -> Self {
        WeightVector(vec![pair; f])
    }

    /// `⟨λ_j, α_j^∨⟩ = λ_{j,1} - λ_{j,2}`.
    pub fn bar(&self, j: usize) -> i64 {
        self.0[j].0 - self.0[j].1
    }

    /// Central character `Σ_j (λ_{j,1} + λ_{j,2}) p^j mod (p^f - 1)`.
    pub fn central_character(&self, params: &Params) -> i128 {
        let m = params.det_modulus();
        let mut acc = 0i128;
        let mut pj = 1i128;
        for &(a, b) in &self.0 {
            acc = (acc + (a + b) as i128 * pj).rem_euclid(m);
            pj = (pj * params.p as i128) % m;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphPoint(pub Vec<i64>);

impl GraphPoint {
    pub fn zero(f: usize) -> Self {
        GraphPoint(vec![0; f])
    }

    pub fn unit(f: usize, j: usize, sign: i64) -> Self {
        let mut v = vec![0; f];
        v[j] = sign;
        GraphPoint(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &GraphPoint) -> GraphPoint {
        GraphPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &GraphPoint) -> GraphPoint {
        GraphPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `Σ_j ⌊|ω_j| / 2⌋`, the level of a point in the injective-envelope
    /// filtration (minus one).
    pub fn half_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs() / 2).sum()
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A Serre weight, stored by its canonical representative.
///
/// Canonical form: `λ_j = (d_j + e_j, e_j)` where `d_j = λ̄_j ∈ [0, p-1]` and
/// `e = Σ_j e_j p^j` is the base-`p` expansion of the determinant exponent
/// `Σ_j λ_{j,2} p^j` reduced into `[0, p^f - 2]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SerreWeight {
    pub canonical: WeightVector,
}

impl SerreWeight {
    /// `F(λ)` for a p-restricted `λ`.
    pub fn from_weight(params: &Params, lambda: &WeightVector) -> Result<Self, WeightError> {
        params.check_len(lambda.0.len())?;
        let p = params.p as i64;
        let m = params.det_modulus();
        let mut e = 0i128;
        let mut pj = 1i128;
        for (j, &(a, b)) in lambda.0.iter().enumerate() {
            if !(0..p).contains(&(a - b)) {
                return Err(WeightError::NotRestricted(j));
            }
            e = (e + b as i128 * pj).rem_euclid(m);
            pj = (pj * params.p as i128) % m;
        }
        let mut pairs = Vec::with_capacity(params.f);
        for j in 0..params.f {
            let digit = (e % params.p as i128) as i64;
            e /= params.p as i128;
            pairs.push((lambda.bar(j) + digit, digit));
        }
        Ok(SerreWeight {
            canonical: WeightVector(pairs),
        })
    }

    pub fn d(&self) -> Vec<i64> {
        (0..self.canonical.0.len())
            .map(|j| self.canonical.bar(j))
            .collect()
    }

    /// Regular means `λ̄_j ≤ p - 2` for every `j`.
    pub fn is_regular(&self, params: &Params) -> bool {
        self.d().iter().all(|&d| d <= params.p as i64 - 2)
    }
}

impl fmt::Display for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .canonical
            .0
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        write!(f, "F[{}]", parts.join(","))
    }
}

/// An element of the finite Weyl group `∏_j {1, 𝔴}`; `true` is `𝔴`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElt(pub Vec<bool>);

impl WeylElt {
    pub fn identity(f: usize) -> Self {
        WeylElt(vec![false; f])
    }

    /// Sign of the `j`-th component: `-1` for `𝔴`.
    pub fn sgn(&self, j: usize) -> i64 {
        if self.0[j] {
            -1
        } else {
            1
        }
    }

    /// Acts on a graph point by negating the `𝔴` coordinates (the action on
    /// `X*(T)` through `α^∨`-coordinates).
    pub fn act(&self, omega: &GraphPoint) -> GraphPoint {
        GraphPoint(
            omega
                .0
                .iter()
                .enumerate()
                .map(|(j, &x)| self.sgn(j) * x)
                .collect(),
        )
    }
}

/// One coordinate of `ω̃ = t_x w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaComponent {
    pub flip: bool,
    pub x: (i64, i64),
}

/// Closed form for the element `ω̃ ∈ Ω ∩ t_{-π^{-1}(ω)} W_a`, coordinatewise.
pub fn omega_element(omega: &GraphPoint) -> Vec<OmegaComponent> {
    let f = omega.len();
    (0..f)
        .map(|j| {
            let next = omega.0[(j + 1) % f];
            if next.rem_euclid(2) == 0 {
                let a = -next / 2;
                OmegaComponent {
                    flip: false,
                    x: (a, a),
                }
            } else {
                let a = (1 - next) / 2;
                OmegaComponent {
                    flip: true,
                    x: (a, a - 1),
                }
            }
        })
        .collect()
}

/// The p-dot action `t_x w · λ = p x + w(λ + η) - η` on one coordinate.
pub fn dot_action(p: i64, c: &OmegaComponent, lambda: (i64, i64)) -> (i64, i64) {
    let shifted = (lambda.0 + 1, lambda.1);
    let w = if c.flip {
        (shifted.1, shifted.0)
    } else {
        shifted
    };
    (p * c.x.0 + w.0 - 1, p * c.x.1 + w.1)
}

pub fn in_lambda_mu(params: &Params, mu: &WeightVector, omega: &GraphPoint) -> bool {
    lambda_mu_violation(params, mu, omega).is_none()
}

fn lambda_mu_violation(params: &Params, mu: &WeightVector, omega: &GraphPoint) -> Option<usize> {
    (0..params.f).find(|&j| {
        let v = mu.bar(j) + omega.0[j];
        !(0..=params.p as i64 - 2).contains(&v)
    })
}

fn check_lambda_mu(
    params: &Params,
    mu: &WeightVector,
    omega: &GraphPoint,
) -> Result<(), WeightError> {
    params.check_len(mu.0.len())?;
    params.check_len(omega.len())?;
    match lambda_mu_violation(params, mu, omega) {
        Some(coord) => Err(WeightError::NotInLambdaMu {
            omega: omega.clone(),
            coord,
        }),
        None => Ok(()),
    }
}

/// The representative `ω̃·(μ + ω)` before reduction modulo `(p - π)X⁰`.
pub fn t_mu_rep(
    params: &Params,
    mu: &WeightVector,
    omega: &GraphPoint,
) -> Result<WeightVector, WeightError> {
    check_lambda_mu(params, mu, omega)?;
    let p = params.p as i64;
    let parts = omega_element(omega);
    Ok(WeightVector(
        (0..params.f)
            .map(|j| dot_action(p, &parts[j], (mu.0[j].0 + omega.0[j], mu.0[j].1)))
            .collect(),
    ))
}

/// The regular Serre weight `t_μ(ω)`.
pub fn t_mu(
    params: &Params,
    mu: &WeightVector,
    omega: &GraphPoint,
) -> Result<SerreWeight, WeightError> {
    SerreWeight::from_weight(params, &t_mu_rep(params, mu, omega)?)
}

/// The Weyl part `w_ω` of `ω̃`.
pub fn w_of(omega: &GraphPoint) -> WeylElt {
    WeylElt(omega_element(omega).iter().map(|c| c.flip).collect())
}

/// `w_ω^{-1}(β) + ω`: re-expresses the point `β` of the graph centred at
/// `t_μ(ω)` in the graph centred at `μ`.
pub fn change_origin(
    params: &Params,
    mu: &WeightVector,
    omega: &GraphPoint,
    beta: &GraphPoint,
) -> Result<GraphPoint, WeightError> {
    let lambda = t_mu_rep(params, mu, omega)?;
    check_lambda_mu(params, &lambda, beta)?;
    Ok(w_of(omega).act(beta).add(omega))
}

/// `N < ⟨μ + η, α_j^∨⟩ < p - N` for every `j`.
pub fn is_n_deep(params: &Params, mu: &WeightVector, n: i64) -> bool {
    let p = params.p as i64;
    (0..mu.0.len()).all(|j| {
        let v = mu.bar(j) + 1;
        n < v && v < p - n
    })
}

/// `ω' ≤ ω`: each coordinate of `ω'` lies between 0 and the corresponding
/// coordinate of `ω`.
pub fn leq(omega_prime: &GraphPoint, omega: &GraphPoint) -> bool {
    omega_prime.0.iter().zip(&omega.0).all(|(&a, &b)| {
        if b >= 0 {
            0 <= a && a <= b
        } else {
            b <= a && a <= 0
        }
    })
}

/// Rounds every coordinate towards zero to the nearest even integer.
pub fn tilde(omega: &GraphPoint) -> GraphPoint {
    GraphPoint(omega.0.iter().map(|&x| x.signum() * 2 * (x.abs() / 2)).collect())
}

/// One step from `ν` towards `target` in every coordinate where they differ.
pub fn plus(nu: &GraphPoint, target: &GraphPoint) -> GraphPoint {
    GraphPoint(
        nu.0.iter()
            .zip(&target.0)
            .map(|(&a, &b)| a + (b - a).signum())
            .collect(),
    )
}

/// Even vectors with `Σ_j |ω_j| / 2 = k`.
pub fn delta_set(k: usize, f: usize) -> BTreeSet<GraphPoint> {
    let mut out = BTreeSet::new();
    let mut cur = vec![0i64; f];
    fn rec(j: usize, left: i64, cur: &mut Vec<i64>, out: &mut BTreeSet<GraphPoint>) {
        if j == cur.len() {
            if left == 0 {
                out.insert(GraphPoint(cur.clone()));
            }
            return;
        }
        for h in 0..=left {
            for s in if h == 0 { vec![1] } else { vec![1, -1] } {
                cur[j] = 2 * h * s;
                rec(j + 1, left - h, cur, out);
            }
        }
        cur[j] = 0;
    }
    rec(0, k as i64, &mut cur, &mut out);
    out
}

pub fn graph_distance(a: &GraphPoint, b: &GraphPoint) -> i64 {
    a.sub(b).l1()
}

pub fn adjacent(a: &GraphPoint, b: &GraphPoint) -> bool {
    graph_distance(a, b) == 1
}

/// All points of the box `∏_j [lo_j, hi_j]`, in lexicographic order.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<GraphPoint> {
    let mut out = vec![GraphPoint(Vec::new())];
    for (&a, &b) in lo.iter().zip(hi) {
        let mut next = Vec::with_capacity(out.len() * (b - a + 1).max(0) as usize);
        for pt in &out {
            for x in a..=b {
                let mut v = pt.0.clone();
                v.push(x);
                next.push(GraphPoint(v));
            }
        }
        out = next;
    }
    out
}

/// The rectangle `{κ : κ - base ≤ corner - base}`.
pub fn rectangle(base: &GraphPoint, corner: &GraphPoint) -> Vec<GraphPoint> {
    let lo: Vec<i64> = base.0.iter().zip(&corner.0).map(|(&a, &b)| a.min(b)).collect();
    let hi: Vec<i64> = base.0.iter().zip(&corner.0).map(|(&a, &b)| a.max(b)).collect();
    box_points(&lo, &hi)
}

/// Every point of `Λ_W^μ`.
pub fn lambda_mu_points(params: &Params, mu: &WeightVector) -> Vec<GraphPoint> {
    let lo: Vec<i64> = (0..params.f).map(|j| -mu.bar(j)).collect();
    let hi: Vec<i64> = (0..params.f)
        .map(|j| params.p as i64 - 2 - mu.bar(j))
        .collect();
    box_points(&lo, &hi)
}

/// Every regular Serre weight with the given central character.
pub fn regular_weights_with_central_character(params: &Params, cc: i128) -> BTreeSet<SerreWeight> {
    let p = params.p as i64;
    let ds = box_points(&vec![0; params.f], &vec![p - 2; params.f]);
    let mut out = BTreeSet::new();
    let m = params.det_modulus();
    for d in ds {
        // Weight (d_j + e_j, e_j) with e = Σ e_j p^j ranging over [0, m).
        // The central character is Σ d_j p^j + 2e; solve for e.
        let mut base = 0i128;
        let mut pj = 1i128;
        for &x in &d.0 {
            base = (base + x as i128 * pj) % m;
            pj = (pj * params.p as i128) % m;
        }
        let target = (cc - base).rem_euclid(m);
        if target % 2 != 0 {
            continue;
        }
        for e in [target / 2, target / 2 + m / 2] {
            let mut pairs = Vec::new();
            let mut rest = e;
            for &x in &d.0 {
                let digit = (rest % params.p as i128) as i64;
                rest /= params.p as i128;
                pairs.push((x + digit, digit));
            }
            out.insert(SerreWeight::from_weight(params, &WeightVector(pairs)).unwrap());
        }
    }
    out
}
