//! Explicit certificates that a bounded power of `p` lies in the ideal
//! generated by a split polynomial and its logarithmic derivative.
//!
//! Two shapes are handled, both with rational roots `α_1..α_k` satisfying
//! `v_p(α_i) = 1` and `v_p(α_i − α_j) = 1`:
//!
//! * [`Variant::Monic`]: `G = ∏(z − α_i)`, ideal `(G, z·G′)`;
//! * [`Variant::XFactor`]: `F = z·∏(z − α_i)`, ideal `(F, F′)`.
//!
//! Write `d + 1` for the degree of the generator. Starting from the
//! derivative, the sequence `p_{i+1} = b_{i,d}·G − z·p_i` (with `b_{i,k}` the
//! coefficient of `z^k` in `p_i`) stays of degree `≤ d` and inside the ideal.
//! The `(d+1) × (d+1)` matrix of the coefficients of `d + 1` consecutive
//! members has determinant `±res(G, z·G′)` (resp. `±res(F, F′)`), and its
//! entries obey an explicit lower bound on their valuations (the *grid*).
//! Row reduction with minimal-valuation pivots, processed from the top
//! coefficient down, ends with a constant row `x₀` lying in the ideal; since
//! every transversal of the grid sums to `v_p(D)`, the pivots sit exactly on
//! the grid and `v_p(x₀)` is bounded by the grid's bottom-left entry.
//!
//! Root counts rather than the degree are used in reports: `k` roots give
//! `v_p(D) = k²` and `v_p(x₀) ≤ 2k − 1` for the monic shape, and
//! `v_p(D) = k² + k`, `v_p(x₀) ≤ 2k` for the shape with the extra factor `z`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::{determinant, resultant, vp_rat, AlgError, MPoly, Rat};

/// Name of the polynomial variable.
pub const Z: &str = "z";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("p = {0} is not a prime")]
    NotPrime(u64),
    #[error("at least one root is required")]
    NoRoots,
    #[error("condition violated: v_p({what}) = {valuation}, expected 1")]
    ConditionViolated { what: String, valuation: String },
    #[error("coefficient matrix is singular")]
    SingularReduction,
    #[error("certificate identity failed: u·G + v·H − x₀ = {residual}")]
    IdentityFailed { residual: MPoly },
    #[error("cannot parse root `{0}`")]
    BadRoot(String),
    #[error("unknown variant `{0}` (expected monic or xfactor)")]
    BadVariant(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `G = ∏(z − α_i)` against `z·G′`.
    Monic,
    /// `F = z·∏(z − α_i)` against `F′`.
    XFactor,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Monic => "monic",
            Variant::XFactor => "xfactor",
        })
    }
}

impl FromStr for Variant {
    type Err = PadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "monic" => Ok(Variant::Monic),
            "xfactor" | "x-factor" | "x" => Ok(Variant::XFactor),
            _ => Err(PadicError::BadVariant(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSpec {
    pub p: u64,
    pub roots: Vec<Rat>,
    pub variant: Variant,
}

impl RootSpec {
    pub fn new(p: u64, roots: Vec<Rat>, variant: Variant) -> Self {
        RootSpec { p, roots, variant }
    }

    /// Integer roots.
    pub fn from_ints(p: u64, roots: &[i64], variant: Variant) -> Self {
        let roots = roots.iter().map(|&a| Rat::from_integer(a.into())).collect();
        RootSpec { p, roots, variant }
    }

    /// Parses a comma-separated list such as `7,14,-21/2`.
    pub fn parse_roots(text: &str) -> Result<Vec<Rat>, PadicError> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<Rat>().map_err(|_| PadicError::BadRoot(s.to_string())))
            .collect()
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    /// `d` such that the generator has degree `d + 1`.
    pub fn top_degree(&self) -> usize {
        match self.variant {
            Variant::Monic => self.roots.len() - 1,
            Variant::XFactor => self.roots.len(),
        }
    }

    /// Expected `v_p(D)`.
    pub fn expected_det_valuation(&self) -> i64 {
        let k = self.roots.len() as i64;
        match self.variant {
            Variant::Monic => k * k,
            Variant::XFactor => k * k + k,
        }
    }

    /// Upper bound for `v_p(x₀)`.
    pub fn valuation_bound(&self) -> i64 {
        let k = self.roots.len() as i64;
        match self.variant {
            Variant::Monic => 2 * k - 1,
            Variant::XFactor => 2 * k,
        }
    }

    /// Checks that `p` is prime, that there is a root, and the valuation
    /// condition on roots and their differences.
    pub fn check(&self) -> Result<(), PadicError> {
        if !is_prime(self.p) {
            return Err(PadicError::NotPrime(self.p));
        }
        if self.roots.is_empty() {
            return Err(PadicError::NoRoots);
        }
        let show = |v: Option<i64>| v.map(|k| k.to_string()).unwrap_or_else(|| "inf".into());
        for (i, a) in self.roots.iter().enumerate() {
            let v = vp_rat(a, self.p);
            if v != Some(1) {
                return Err(PadicError::ConditionViolated {
                    what: format!("α_{} = {}", i + 1, a),
                    valuation: show(v),
                });
            }
        }
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                let v = vp_rat(&(&self.roots[i] - &self.roots[j]), self.p);
                if v != Some(1) {
                    return Err(PadicError::ConditionViolated {
                        what: format!("α_{} − α_{}", i + 1, j + 1),
                        valuation: show(v),
                    });
                }
            }
        }
        Ok(())
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

// Dense coefficient vectors, entry k = coefficient of z^k.
type Dense = Vec<Rat>;

fn dense_mul_linear(a: &Dense, root: &Rat) -> Dense {
    // a · (z − root)
    let mut out = vec![Rat::zero(); a.len() + 1];
    for (k, c) in a.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * root;
    }
    out
}

fn dense_derivative(a: &Dense) -> Dense {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rat::from_integer((k as i64).into()))
        .collect()
}

fn dense_to_poly(a: &[Rat]) -> MPoly {
    MPoly::from_terms(
        &[Z],
        a.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (vec![k as u32], c.clone())),
    )
    .expect("single variable")
}

fn coeff(a: &[Rat], k: usize) -> Rat {
    a.get(k).cloned().unwrap_or_else(Rat::zero)
}

/// The generator together with its partner in the ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyPair {
    pub variant: Variant,
    /// `G` or `F`.
    pub generator: MPoly,
    /// `G′` or `F′`: the first member of the recursion.
    pub derivative: MPoly,
    /// `z·G′` or `F′`: the second ideal generator.
    pub partner: MPoly,
}

/// Builds `(G, G′, z·G′)` or `(F, F′, F′)` after checking the root condition.
pub fn build_polys(spec: &RootSpec) -> Result<PolyPair, PadicError> {
    spec.check()?;
    let (g, _) = dense_generator(spec);
    let dg = dense_derivative(&g);
    let generator = dense_to_poly(&g);
    let derivative = dense_to_poly(&dg);
    let partner = match spec.variant {
        Variant::Monic => &MPoly::var(Z) * &derivative,
        Variant::XFactor => derivative.clone(),
    };
    Ok(PolyPair {
        variant: spec.variant,
        generator,
        derivative,
        partner,
    })
}

fn dense_generator(spec: &RootSpec) -> (Dense, Dense) {
    let mut g: Dense = match spec.variant {
        Variant::Monic => vec![Rat::one()],
        Variant::XFactor => vec![Rat::zero(), Rat::one()],
    };
    for a in &spec.roots {
        g = dense_mul_linear(&g, a);
    }
    let dg = dense_derivative(&g);
    (g, dg)
}

/// One member of the recursion, with its expression in the ideal
/// generators: `poly = u·G + v·H` (`H` the partner). The derivative
/// itself carries no such expression in the monic case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub index: i64,
    /// Coefficients `b_{index,k}`, `k = 0..=d`.
    pub coeffs: Vec<Rat>,
    pub cofactors: Option<(Vec<Rat>, Vec<Rat>)>,
}

/// One pivot choice of the row reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pivot {
    /// Column (power of `z`) being cleared.
    pub column: usize,
    /// Matrix row (position in [`ReductionTrace::rows`]).
    pub row: usize,
    pub value: Rat,
    pub valuation: i64,
    /// The grid bound at `(row, column)`.
    pub grid: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub spec: RootSpec,
    pub polys: PolyPair,
    /// The derivative followed by every later member of the recursion.
    pub sequence: Vec<SequenceEntry>,
    /// Sequence indices of the matrix rows.
    pub rows: Vec<i64>,
    /// `matrix[r][k]` = coefficient of `z^k` in row `r`.
    pub matrix: Vec<Vec<Rat>>,
    /// Lower bounds for `v_p(matrix[r][k])`.
    pub grid: Vec<Vec<i64>>,
    pub pivots: Vec<Pivot>,
    /// Determinant computed directly (fraction-free elimination).
    pub det_direct: Rat,
    /// Determinant as the product of pivots with the permutation sign.
    pub det_pivots: Rat,
    /// `res(G, z·G′)` or `res(F, F′)`.
    pub resultant: Rat,
    pub vp_det: i64,
}

impl ReductionTrace {
    /// `+1` or `−1` with `det_direct = sign · resultant`, `None` if the two
    /// disagree beyond sign.
    pub fn det_sign(&self) -> Option<i8> {
        if self.det_direct == self.resultant {
            Some(1)
        } else if self.det_direct == -self.resultant.clone() {
            Some(-1)
        } else {
            None
        }
    }

    /// Every matrix entry satisfies its grid bound.
    pub fn grid_holds(&self) -> bool {
        let p = self.spec.p;
        self.matrix.iter().zip(&self.grid).all(|(row, bounds)| {
            row.iter()
                .zip(bounds)
                .all(|(c, &b)| vp_rat(c, p).map_or(true, |v| v >= b))
        })
    }

    /// Every pivot valuation equals the grid value at its position. This is
    /// a diagnostic only: elimination can push an entry above its bound and
    /// a later one below it, so pivots may leave the grid while their
    /// valuations still sum to `v_p(D)` and `v_p(x₀)` stays within bound.
    pub fn pivots_on_grid(&self) -> bool {
        self.pivots.iter().all(|pv| pv.valuation == pv.grid)
    }

    /// Checks the recursion `p_{i+1} = b_{i,d}·G − z·p_i` on the stored
    /// sequence.
    pub fn recursion_holds(&self) -> bool {
        let g = &self.polys.generator;
        let d = self.spec.top_degree();
        let z = MPoly::var(Z);
        self.sequence.windows(2).all(|w| {
            let prev = dense_to_poly(&w[0].coeffs);
            let lead = MPoly::constant(coeff(&w[0].coeffs, d));
            let expect = &(&lead * g) - &(&z * &prev);
            expect == dense_to_poly(&w[1].coeffs)
        })
    }
}

/// Valuation lower bound for the coefficient of `z^k` in matrix row `r`.
pub fn grid_bound(variant: Variant, d: usize, r: usize, k: usize) -> i64 {
    let (d, r, k) = (d as i64, r as i64, k as i64);
    match variant {
        Variant::Monic => r + 1 + d - k,
        Variant::XFactor => r + d - k,
    }
}

pub fn grid(variant: Variant, d: usize) -> Vec<Vec<i64>> {
    (0..=d)
        .map(|r| (0..=d).map(|k| grid_bound(variant, d, r, k)).collect())
        .collect()
}

/// The set of sums over all transversals (one entry per row and column).
pub fn transversal_sums(grid: &[Vec<i64>]) -> std::collections::BTreeSet<i64> {
    fn go(
        grid: &[Vec<i64>],
        row: usize,
        used: &mut Vec<bool>,
        acc: i64,
        out: &mut std::collections::BTreeSet<i64>,
    ) {
        if row == grid.len() {
            out.insert(acc);
            return;
        }
        for c in 0..grid.len() {
            if !used[c] {
                used[c] = true;
                go(grid, row + 1, used, acc + grid[row][c], out);
                used[c] = false;
            }
        }
    }
    let mut out = std::collections::BTreeSet::new();
    go(grid, 0, &mut vec![false; grid.len()], 0, &mut out);
    out
}

fn const_of(p: &MPoly) -> Rat {
    if p.is_zero() {
        Rat::zero()
    } else {
        p.as_constant().expect("constant polynomial")
    }
}

// Cofactor vectors: (u, v) with poly = u·G + v·H.
type Cof = (Dense, Dense);

fn cof_axpy(acc: &mut Cof, c: &Rat, other: &Cof) {
    for (dst, src) in [(&mut acc.0, &other.0), (&mut acc.1, &other.1)] {
        if dst.len() < src.len() {
            dst.resize(src.len(), Rat::zero());
        }
        for (k, s) in src.iter().enumerate() {
            dst[k] += c * s;
        }
    }
}

fn trim(mut a: Dense) -> Dense {
    while a.last().map_or(false, Zero::is_zero) {
        a.pop();
    }
    a
}

struct Reduced {
    pivots: Vec<Pivot>,
    det: Rat,
    last_row: usize,
    last_value: Rat,
    last_cof: Cof,
}

fn reduce(
    spec: &RootSpec,
    matrix: &[Vec<Rat>],
    cofs: &[Cof],
    grid: &[Vec<i64>],
) -> Result<Reduced, PadicError> {
    let d = matrix.len() - 1;
    let p = spec.p;
    let mut m: Vec<Vec<Rat>> = matrix.to_vec();
    let mut cofs: Vec<Cof> = cofs.to_vec();
    let mut free: Vec<bool> = vec![true; d + 1];
    let mut pivots = Vec::with_capacity(d + 1);
    // perm[column] = row
    let mut perm = vec![0usize; d + 1];
    for column in (0..=d).rev() {
        let mut best: Option<(usize, i64)> = None;
        for r in 0..=d {
            if !free[r] {
                continue;
            }
            if let Some(v) = vp_rat(&m[r][column], p) {
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((r, v));
                }
            }
        }
        let (row, valuation) = best.ok_or(PadicError::SingularReduction)?;
        free[row] = false;
        perm[column] = row;
        let pivot = m[row][column].clone();
        for r in 0..=d {
            if !free[r] || m[r][column].is_zero() {
                continue;
            }
            let factor = -(&m[r][column] / &pivot);
            let src = m[row].clone();
            for (dst, s) in m[r].iter_mut().zip(&src) {
                *dst += &factor * s;
            }
            let src_cof = cofs[row].clone();
            cof_axpy(&mut cofs[r], &factor, &src_cof);
        }
        pivots.push(Pivot {
            column,
            row,
            value: pivot,
            valuation,
            grid: grid[row][column],
        });
    }
    // The matrix is now a row permutation of a triangular matrix.
    let mut det = pivots.iter().fold(Rat::one(), |acc, pv| acc * &pv.value);
    if permutation_is_odd(&perm) {
        det = -det;
    }
    let last = pivots.last().expect("nonempty");
    let last_row = last.row;
    Ok(Reduced {
        last_value: last.value.clone(),
        last_cof: cofs[last_row].clone(),
        last_row,
        det,
        pivots,
    })
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

fn run(spec: &RootSpec) -> Result<(ReductionTrace, Reduced), PadicError> {
    let polys = build_polys(spec)?;
    let (g, dg) = dense_generator(spec);
    let d = spec.top_degree();
    // The first member: the derivative. It lies in the ideal only for the
    // extra-factor shape, where it is itself a generator.
    let mut sequence = Vec::with_capacity(d + 2);
    let (first_index, first_cof) = match spec.variant {
        Variant::Monic => (-1, None),
        Variant::XFactor => (1, Some((vec![], vec![Rat::one()]))),
    };
    sequence.push(SequenceEntry {
        index: first_index,
        coeffs: (0..=d).map(|k| coeff(&dg, k)).collect(),
        cofactors: first_cof,
    });
    let rows_needed = match spec.variant {
        Variant::Monic => d + 2,
        Variant::XFactor => d + 1,
    };
    while sequence.len() < rows_needed {
        let prev = sequence.last().expect("nonempty");
        let lead = coeff(&prev.coeffs, d);
        // lead·G − z·prev; the z^{d+1} terms cancel.
        let mut next: Dense = g.iter().map(|c| c * &lead).collect();
        for (k, c) in prev.coeffs.iter().enumerate() {
            next[k + 1] -= c;
        }
        debug_assert!(next[d + 1].is_zero());
        next.truncate(d + 1);
        let cofactors = match &prev.cofactors {
            // p_0 = b·G − z·G′ = b·G − (z·G′).
            None => (vec![lead.clone()], vec![-Rat::one()]),
            Some((u, v)) => {
                let mut nu: Dense = vec![lead.clone()];
                nu.resize(u.len() + 1, Rat::zero());
                for (k, c) in u.iter().enumerate() {
                    nu[k + 1] -= c;
                }
                let mut nv: Dense = vec![Rat::zero(); v.len() + 1];
                for (k, c) in v.iter().enumerate() {
                    nv[k + 1] -= c;
                }
                (trim(nu), trim(nv))
            }
        };
        sequence.push(SequenceEntry {
            index: prev.index + 1,
            coeffs: next,
            cofactors: Some(cofactors),
        });
    }
    let members: Vec<&SequenceEntry> = sequence
        .iter()
        .filter(|e| e.cofactors.is_some())
        .collect();
    let rows: Vec<i64> = members.iter().map(|e| e.index).collect();
    let matrix: Vec<Vec<Rat>> = members.iter().map(|e| e.coeffs.clone()).collect();
    let cofs: Vec<Cof> = members
        .iter()
        .map(|e| e.cofactors.clone().expect("filtered"))
        .collect();
    let grid = grid(spec.variant, d);

    let det_direct = const_of(&determinant(
        matrix
            .iter()
            .map(|row| row.iter().cloned().map(MPoly::constant).collect())
            .collect(),
    ));
    let resultant = const_of(&resultant(&polys.generator, &polys.partner, Z)?);
    if det_direct.is_zero() {
        return Err(PadicError::SingularReduction);
    }
    let reduced = reduce(spec, &matrix, &cofs, &grid)?;
    let vp_det = vp_rat(&det_direct, spec.p).expect("nonzero");
    let trace = ReductionTrace {
        spec: spec.clone(),
        polys,
        sequence,
        rows,
        matrix,
        grid,
        pivots: reduced.pivots.clone(),
        det_direct,
        det_pivots: reduced.det.clone(),
        resultant,
        vp_det,
    };
    Ok((trace, reduced))
}

/// Runs the recursion and the pivoted row reduction.
pub fn reduction(spec: &RootSpec) -> Result<ReductionTrace, PadicError> {
    run(spec).map(|(t, _)| t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicCertificate {
    pub p: u64,
    pub variant: Variant,
    pub roots: Vec<Rat>,
    pub generator: MPoly,
    pub partner: MPoly,
    /// The constant `x₀ = u·generator + v·partner`.
    pub x0: Rat,
    pub u: MPoly,
    pub v: MPoly,
    pub valuation: i64,
    pub bound: i64,
    pub root_count: usize,
    /// Matrix row (sequence index) that reduced to the constant.
    pub source_row: i64,
}

impl PadicCertificate {
    /// Recomputes `u·G + v·H − x₀`; zero exactly when the certificate holds.
    pub fn residual(&self) -> MPoly {
        let lhs = &(&self.u * &self.generator) + &(&self.v * &self.partner);
        &lhs - &MPoly::constant(self.x0.clone())
    }

    pub fn verify(&self) -> Result<(), PadicError> {
        let residual = self.residual();
        if residual.is_zero() {
            Ok(())
        } else {
            Err(PadicError::IdentityFailed { residual })
        }
    }

    /// The certificate scaled by the unit `p^{valuation}/x₀`, so that the
    /// left-hand side is exactly `p^{valuation}`.
    pub fn normalized(&self) -> PadicCertificate {
        let target = Rat::from_integer(num_bigint::BigInt::from(self.p).pow(self.valuation as u32));
        let c = &target / &self.x0;
        PadicCertificate {
            x0: target,
            u: self.u.scale(&c),
            v: self.v.scale(&c),
            ..self.clone()
        }
    }

    pub fn within_bound(&self) -> bool {
        self.valuation <= self.bound
    }
}

/// Extracts `x₀` and its cofactors from the reduction and re-verifies the
/// Bézout identity by substitution.
pub fn extract_certificate(spec: &RootSpec) -> Result<PadicCertificate, PadicError> {
    let (trace, reduced) = run(spec)?;
    let (u, v) = &reduced.last_cof;
    let x0 = reduced.last_value.clone();
    let valuation = vp_rat(&x0, spec.p).ok_or(PadicError::SingularReduction)?;
    let cert = PadicCertificate {
        p: spec.p,
        variant: spec.variant,
        roots: spec.roots.clone(),
        generator: trace.polys.generator.clone(),
        partner: trace.polys.partner.clone(),
        x0,
        u: dense_to_poly(u),
        v: dense_to_poly(v),
        valuation,
        bound: spec.valuation_bound(),
        root_count: spec.root_count(),
        source_row: trace.rows[reduced.last_row],
    };
    cert.verify()?;
    Ok(cert)
}

/// Summary of every check for one spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecReport {
    pub spec: RootSpec,
    pub vp_det: i64,
    pub expected_vp_det: i64,
    pub det_sign: Option<i8>,
    pub det_pivots_match: bool,
    pub grid_holds: bool,
    pub pivots_on_grid: bool,
    pub recursion_holds: bool,
    pub valuation: i64,
    pub bound: i64,
    pub identity_exact: bool,
}

impl SpecReport {
    pub fn ok(&self) -> bool {
        self.vp_det == self.expected_vp_det
            && self.det_sign.is_some()
            && self.det_pivots_match
            && self.grid_holds
            && self.recursion_holds
            && self.valuation <= self.bound
            && self.identity_exact
    }
}

pub fn check_spec(spec: &RootSpec) -> Result<SpecReport, PadicError> {
    let trace = reduction(spec)?;
    let cert = extract_certificate(spec)?;
    Ok(SpecReport {
        spec: spec.clone(),
        vp_det: trace.vp_det,
        expected_vp_det: spec.expected_det_valuation(),
        det_sign: trace.det_sign(),
        det_pivots_match: trace.det_pivots == trace.det_direct,
        grid_holds: trace.grid_holds(),
        pivots_on_grid: trace.pivots_on_grid(),
        recursion_holds: trace.recursion_holds(),
        valuation: cert.valuation,
        bound: cert.bound,
        identity_exact: cert.residual().is_zero(),
    })
}

/// Runs [`check_spec`] over a batch in parallel, preserving order.
pub fn check_batch(specs: &[RootSpec]) -> Vec<Result<SpecReport, PadicError>> {
    specs.par_iter().map(check_spec).collect()
}

/// `α_i = c_i·p` for small coefficients `c_i` that are distinct and nonzero
/// mod `p`; always satisfies the root condition when such `c_i` exist.
pub fn scaled_roots(p: u64, coefficients: &[i64], variant: Variant) -> RootSpec {
    let pz = p as i64;
    RootSpec::from_ints(p, &coefficients.iter().map(|c| c * pz).collect::<Vec<_>>(), variant)
}

/// Multiplies every root by `c`.
pub fn scale_roots(spec: &RootSpec, c: &Rat) -> RootSpec {
    RootSpec {
        roots: spec.roots.iter().map(|a| a * c).collect(),
        ..spec.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_monic() {
        let spec = RootSpec::from_ints(7, &[7], Variant::Monic);
        let cert = extract_certificate(&spec).unwrap();
        assert_eq!(cert.valuation, 1);
        assert_eq!(cert.x0, Rat::from_integer((-7).into()));
    }

    #[test]
    fn parity_of_permutations() {
        assert!(!permutation_is_odd(&[0, 1, 2]));
        assert!(permutation_is_odd(&[1, 0, 2]));
        assert!(!permutation_is_odd(&[1, 2, 0]));
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(7) && !is_prime(1) && !is_prime(9));
    }
}
