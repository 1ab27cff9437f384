//! Height and monodromy equations for a single embedding, their closed-form
//! solutions, and the deformation-ring data built from them.
//!
//! For one coordinate the Kisin matrix has shape `𝔱_{(m,n)}` (case [`Case::T`])
//! or `𝔴𝔱_{(m,n)}` (case [`Case::WT`]); its entries are expanded in powers of
//! `v + p` with coefficients `a_i, b_i, c_i, d_i`. Counting from the top
//! coefficient down, the *bold* coefficients are `𝒂_{-k} = a_{len-1-k}` and so
//! on, and the closed forms express every `𝒂_{-k}, …, 𝒅_{-k}` through `𝔞`,
//! `p` and the four top coefficients `𝒂₀, 𝒃₀, 𝒄₀, 𝒅₀`.
//!
//! Polynomial variables: `fa` is `𝔞`, `p` is `p`, `A0 B0 C0 D0` are the bold
//! top coefficients, and `a0, a1, …, d0, …` are the system variables. Two of
//! the bold coefficients are units (`A0, D0` in case T, `B0, C0` in case WT)
//! and appear in denominators.
//!
//! Verification is ideal membership: after substituting the closed form into
//! an equation and clearing denominators, the numerator must lie in the ideal
//! of the star generator. The star generator is first made primitive over
//! `Q[fa]` and stripped of unit monomials, so by Gauss's lemma membership in
//! the localized ring is plain polynomial divisibility.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::{rat, ratio, substitute, AlgError, DenFactor, MPoly, Rat, RatFunc};
use crate::typesweights::{
    modular_intersection, s_count, tau_of_wtilde, AdmComp, AdmElt, HTWeight, RhoBarData,
    TypesError,
};
use crate::weights::GraphPoint;

/// Variable name of `𝔞`.
pub const FA: &str = "fa";
/// Variable name of `p`.
pub const P: &str = "p";

#[derive(Debug, thiserror::Error)]
pub enum DefRingError {
    #[error("{case}({m},{n}) is outside the solved tables and their reflections")]
    OutOfTableDomain { case: Case, m: i64, n: i64 },
    #[error("{equation} does not reduce into the star ideal; remainder has {} terms", remainder.nterms())]
    VerificationFailed { equation: String, remainder: MPoly },
    #[error("no equation reduces to the star generator {generator} times a unit")]
    StarNotGenerated { generator: String },
    #[error("identity {name} fails")]
    IdentityFailed { name: String, residual: String },
    #[error("λ₂ = {lambda2} is not admissible for {case}({m},{n})")]
    InadmissibleWeight { case: Case, m: i64, n: i64, lambda2: i64 },
    #[error("W(ρ̄) ∩ JH(σ̄(λ,τ)) is empty, so the deformation ring is zero")]
    EmptyIntersection,
    #[error("genericity: {0}")]
    NotGeneric(String),
    #[error(transparent)]
    Types(#[from] TypesError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    T,
    WT,
}

impl Case {
    pub fn of(c: AdmComp) -> Case {
        if c.flip {
            Case::WT
        } else {
            Case::T
        }
    }

    /// The two bold top coefficients that are units.
    pub fn units(self) -> [&'static str; 2] {
        match self {
            Case::T => ["A0", "D0"],
            Case::WT => ["B0", "C0"],
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::T => "T",
            Case::WT => "WT",
        })
    }
}

impl FromStr for Case {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "T" => Ok(Case::T),
            "WT" => Ok(Case::WT),
            _ => Err(format!("unknown case `{s}` (expected T or WT)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];

    pub fn letter(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
            Family::D => 'd',
        }
    }

    /// Name of the bold top coefficient.
    pub fn top(self) -> &'static str {
        match self {
            Family::A => "A0",
            Family::B => "B0",
            Family::C => "C0",
            Family::D => "D0",
        }
    }
}

/// Number of coefficients of a family.
pub fn family_len(case: Case, m: i64, n: i64, fam: Family) -> i64 {
    match (case, fam) {
        (Case::T, Family::A) => m + 1,
        (Case::T, Family::B) => n,
        (Case::WT, Family::A) => m,
        (Case::WT, Family::B) => n + 1,
        (_, Family::C) => m,
        (_, Family::D) => n + 1,
    }
    .max(0)
}

pub fn coeff_name(fam: Family, i: i64) -> String {
    format!("{}{}", fam.letter(), i)
}

fn check_domain(case: Case, m: i64, n: i64) -> Result<(), DefRingError> {
    let ok = m >= 0
        && n >= 0
        && m + n >= 1
        && match case {
            Case::T => true,
            Case::WT => m >= 1,
        };
    if ok {
        Ok(())
    } else {
        Err(DefRingError::OutOfTableDomain { case, m, n })
    }
}

/// Whether `(case, m, n)` is covered directly by a table (as opposed to a
/// reflection).
pub fn in_table(case: Case, m: i64, n: i64) -> bool {
    match case {
        Case::T => m >= n,
        Case::WT => m > n,
    }
}

/// The table case a reflected case is obtained from.
pub fn reflection_source(case: Case, m: i64, n: i64) -> (Case, i64, i64) {
    match case {
        Case::T => (Case::T, n, m),
        Case::WT => (Case::WT, n + 1, m - 1),
    }
}

/// Every case with `1 ≤ m + n ≤ max_ell` that the tables or their
/// reflections cover.
pub fn all_cases(max_ell: i64) -> Vec<(Case, i64, i64)> {
    let mut out = Vec::new();
    for case in [Case::T, Case::WT] {
        for ell in 1..=max_ell {
            for m in 0..=ell {
                if check_domain(case, m, ell - m).is_ok() {
                    out.push((case, m, ell - m));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Equations

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EqLabel {
    H(i64),
    M { k: i64, s: u8, t: u8 },
}

impl fmt::Display for EqLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqLabel::H(k) => write!(f, "H({k})"),
            EqLabel::M { k, s, t } => write!(f, "M_{k}({s},{t})"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Equation {
    pub label: EqLabel,
    pub poly: MPoly,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationSystem {
    pub case: Case,
    pub m: i64,
    pub n: i64,
    pub variables: Vec<String>,
    pub equations: Vec<Equation>,
}

struct Coeffs {
    case: Case,
    m: i64,
    n: i64,
}

impl Coeffs {
    fn get(&self, fam: Family, i: i64) -> MPoly {
        if i < 0 || i >= family_len(self.case, self.m, self.n, fam) {
            MPoly::zero()
        } else {
            MPoly::var(&coeff_name(fam, i))
        }
    }

    /// `Σ_{i+j=k} w(i,j) x_i y_j`.
    fn conv(&self, k: i64, x: Family, y: Family, w: impl Fn(i64, i64) -> MPoly) -> MPoly {
        let mut acc = MPoly::zero();
        for i in 0..=k.max(-1) {
            let j = k - i;
            let xi = self.get(x, i);
            if xi.is_zero() {
                continue;
            }
            let yj = self.get(y, j);
            if yj.is_zero() {
                continue;
            }
            acc = acc + w(i, j) * xi * yj;
        }
        acc
    }
}

fn c(k: i64) -> MPoly {
    MPoly::int(k)
}

fn fa() -> MPoly {
    MPoly::var(FA)
}

fn pp() -> MPoly {
    MPoly::var(P)
}

/// The height equations `H(k)`, `0 ≤ k < ℓ`, and the monodromy equations
/// `M_k(s,t)`, `0 ≤ k ≤ ℓ − 2`, with `ℓ = m + n`.
pub fn build_equations(case: Case, m: i64, n: i64) -> EquationSystem {
    use Family::*;
    let cf = Coeffs { case, m, n };
    let ell = m + n;
    let mut variables = Vec::new();
    for fam in Family::ALL {
        for i in 0..family_len(case, m, n, fam) {
            variables.push(coeff_name(fam, i));
        }
    }
    let one = |_: i64, _: i64| MPoly::one();
    let h = |k: i64| {
        cf.conv(k, A, D, one) + pp() * cf.conv(k, C, B, one) - cf.conv(k - 1, C, B, one)
    };
    let mut equations: Vec<Equation> = (0..ell)
        .map(|k| Equation {
            label: EqLabel::H(k),
            poly: h(k),
        })
        .collect();
    for k in 0..=ell - 2 {
        let m11 = cf.conv(k, C, B, |_, j| fa() + c(j))
            - cf.conv(k + 1, A, D, |i, _| c(i))
            - pp() * cf.conv(k + 1, C, B, |_, j| c(j));
        let m12 = cf.conv(k, A, B, |i, j| fa() + c(j - i)) + pp() * cf.conv(k + 1, A, B, |i, j| c(i - j));
        let m21 = cf.conv(k, C, D, |i, j| fa() + c(j - i - 1)) + pp() * cf.conv(k + 1, C, D, |i, j| c(i - j));
        let m22 = cf.conv(k, C, B, |i, _| c(i + 1) - fa())
            - cf.conv(k + 1, A, D, |_, j| c(j))
            - pp() * cf.conv(k + 1, C, B, |i, _| c(i));
        for ((s, t), poly) in [((1, 1), m11), ((1, 2), m12), ((2, 1), m21), ((2, 2), m22)] {
            equations.push(Equation {
                label: EqLabel::M { k, s, t },
                poly,
            });
        }
    }
    EquationSystem {
        case,
        m,
        n,
        variables,
        equations,
    }
}

impl EquationSystem {
    pub fn get(&self, label: EqLabel) -> Option<&MPoly> {
        self.equations.iter().find(|e| e.label == label).map(|e| &e.poly)
    }

    pub fn ell(&self) -> i64 {
        self.m + self.n
    }

    /// Checks `M_k(1,1) + M_k(2,2) + (k+1) H(k+1) = 0` for every `k`;
    /// returns the number of identities checked.
    pub fn check_trace_identity(&self) -> Result<usize, DefRingError> {
        let mut count = 0;
        for k in 0..=self.ell() - 2 {
            let m11 = self.get(EqLabel::M { k, s: 1, t: 1 }).unwrap();
            let m22 = self.get(EqLabel::M { k, s: 2, t: 2 }).unwrap();
            let h = self.get(EqLabel::H(k + 1)).unwrap();
            let r = m11 + m22 + c(k + 1) * h;
            if !r.is_zero() {
                return Err(DefRingError::IdentityFailed {
                    name: format!("M_{k}(1,1) + M_{k}(2,2) + {}·H({})", k + 1, k + 1),
                    residual: r.to_string(),
                });
            }
            count += 1;
        }
        Ok(count)
    }
}

// ---------------------------------------------------------------------------
// Closed forms

fn lin(root: i64) -> DenFactor {
    DenFactor::Linear {
        var: FA.into(),
        root: rat(root),
    }
}

fn factorial(k: i64) -> Rat {
    (1..=k).fold(Rat::one(), |acc, i| acc * rat(i))
}

/// Cleared numerator and denominator of `Z`.
fn z_parts(case: Case, m: i64, n: i64) -> (MPoly, MPoly) {
    let s = m - n;
    let v = MPoly::var;
    match case {
        Case::T => (
            (fa() - c(s)) * (fa() - c(s + 1)) * v("B0") * v("C0"),
            v("A0") * v("D0"),
        ),
        Case::WT => (
            (fa() - c(s)) * (fa() - c(s - 1)) * v("A0") * v("D0"),
            v("B0") * v("C0"),
        ),
    }
}

/// `Z = ((𝔞−m+n)(𝔞−m+n∓1) x y) / (u v)`.
pub fn z_of(case: Case, m: i64, n: i64) -> RatFunc {
    let (num, _) = z_parts(case, m, n);
    let [u, w] = case.units();
    RatFunc::new(num, BTreeMap::from([(DenFactor::Var(u.into()), 1), (DenFactor::Var(w.into()), 1)]))
}

/// `sign^k · top / (k! ∏ (𝔞 − r)) · ∏ (Z + q)` with cleared `Z`.
fn bold_term(case: Case, m: i64, n: i64, alternating: bool, top: MPoly, k: i64, roots: &[i64], shifts: &[MPoly]) -> RatFunc {
    let (zn, zd) = z_parts(case, m, n);
    let mut num = top;
    for q in shifts {
        num = num * (&zn + &(q * &zd));
    }
    let mut den: BTreeMap<DenFactor, u32> = BTreeMap::new();
    for u in case.units() {
        *den.entry(DenFactor::Var(u.into())).or_insert(0) += shifts.len() as u32;
    }
    for &r in roots {
        *den.entry(lin(r)).or_insert(0) += 1;
    }
    let mut scale = Rat::one() / factorial(k);
    if alternating && k % 2 == 1 {
        scale = -scale;
    }
    RatFunc::new(num.scale(&scale), den)
}

/// The bold coefficient `𝒙_{-k}` of a table case, for any `k` (zero when
/// `k < 0`). The formulas extend past the family's own range, which the
/// relation lemmas use.
pub fn bold(case: Case, m: i64, n: i64, fam: Family, k: i64) -> Result<RatFunc, DefRingError> {
    check_domain(case, m, n)?;
    if !in_table(case, m, n) {
        return Err(DefRingError::OutOfTableDomain { case, m, n });
    }
    if k < 0 {
        return Ok(RatFunc::zero());
    }
    let s = m - n;
    let top = MPoly::var(fam.top());
    let p = pp();
    let r: Vec<i64>;
    let q: Vec<MPoly>;
    let alt = matches!(fam, Family::A | Family::C);
    match (case, fam) {
        (Case::T, Family::A) => {
            r = (0..k).map(|i| s - i).collect();
            q = (0..k).map(|i| c(i * (s - i)) * &p).collect();
        }
        (Case::T, Family::B) => {
            r = (1..=k).map(|i| s + 1 + i).collect();
            q = (1..=k).map(|i| c(-i * (s + i)) * &p).collect();
        }
        (Case::T, Family::C) => {
            r = (1..=k).map(|i| s - i).collect();
            q = (1..=k).map(|i| c(-i * (i - s)) * &p).collect();
        }
        (Case::T, Family::D) => {
            r = (0..k).map(|i| s + 1 + i).collect();
            q = (0..k).map(|i| c(-i * (s + i)) * &p).collect();
        }
        (Case::WT, Family::A) => {
            r = (0..k).map(|i| s - 2 - i).collect();
            q = (1..=k).map(|i| (fa() - c(i)) * (fa() - c(s - i)) * &p).collect();
        }
        (Case::WT, Family::B) => {
            r = (0..k).map(|i| s + i).collect();
            q = (0..k).map(|i| (fa() + c(i)) * (fa() - c(s + i)) * &p).collect();
        }
        (Case::WT, Family::C) => {
            r = (0..k).map(|i| s - 1 - i).collect();
            q = (1..=k).map(|i| (fa() - c(i)) * (fa() - c(s - i)) * &p).collect();
        }
        (Case::WT, Family::D) => {
            r = (0..k).map(|i| s + 1 + i).collect();
            q = (0..k).map(|i| (fa() + c(i)) * (fa() - c(s + i)) * &p).collect();
        }
    }
    Ok(bold_term(case, m, n, alt, top, k, &r, &q))
}

/// A closed-form solution: every system variable as a rational function of
/// `𝔞`, `p` and the bold top coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub case: Case,
    pub m: i64,
    pub n: i64,
    /// For a reflected case, the table case it was obtained from.
    pub source: Option<(Case, i64, i64)>,
    pub z: RatFunc,
    pub assignment: BTreeMap<String, RatFunc>,
}

impl ClosedFormSolution {
    /// The same solution with one entry negated (a negative control).
    pub fn with_sign_flipped(&self, var: &str) -> ClosedFormSolution {
        let mut out = self.clone();
        if let Some(v) = out.assignment.get_mut(var) {
            *v = v.neg_ref();
        }
        out
    }
}

/// The reflection `𝔞 ↦ 1 − 𝔞`, `𝒂₀ ↔ 𝒅₀`, `𝒃₀ ↦ −𝒄₀`, `𝒄₀ ↦ −𝒃₀`.
fn reflect_params(r: &RatFunc) -> Result<RatFunc, AlgError> {
    let v = RatFunc::var;
    let map = BTreeMap::from([
        (FA.to_string(), RatFunc::one() - v(FA)),
        ("A0".to_string(), v("D0")),
        ("D0".to_string(), v("A0")),
        ("B0".to_string(), -v("C0")),
        ("C0".to_string(), -v("B0")),
    ]);
    r.subst_all(&map)
}

/// Closed form for `(case, m, n)`, via a reflection when the case lies
/// outside the tables: `a ↔ d`, `c ↔ −b`, `𝔞 ↔ 1 − 𝔞`, from `𝔱_{(n,m)}` or
/// `𝔴𝔱_{(n+1,m−1)}`.
pub fn closed_form(case: Case, m: i64, n: i64) -> Result<ClosedFormSolution, DefRingError> {
    check_domain(case, m, n)?;
    if in_table(case, m, n) {
        let mut assignment = BTreeMap::new();
        // With n = 0 in case T the b-family is empty, so 𝒃₀ = 0.
        let kill_b = case == Case::T && n == 0;
        let zero_b = BTreeMap::from([("B0".to_string(), RatFunc::zero())]);
        for fam in Family::ALL {
            let len = family_len(case, m, n, fam);
            for i in 0..len {
                let mut r = bold(case, m, n, fam, len - 1 - i)?;
                if kill_b {
                    r = r.subst_all(&zero_b)?;
                }
                assignment.insert(coeff_name(fam, i), r);
            }
        }
        let mut z = z_of(case, m, n);
        if kill_b {
            z = RatFunc::zero();
        }
        return Ok(ClosedFormSolution {
            case,
            m,
            n,
            source: None,
            z,
            assignment,
        });
    }
    let (sc, sm, sn) = reflection_source(case, m, n);
    let src = closed_form(sc, sm, sn)?;
    let mut assignment = BTreeMap::new();
    for fam in Family::ALL {
        let (from, sign) = match fam {
            Family::A => (Family::D, false),
            Family::D => (Family::A, false),
            Family::B => (Family::C, true),
            Family::C => (Family::B, true),
        };
        for i in 0..family_len(case, m, n, fam) {
            let old = &src.assignment[&coeff_name(from, i)];
            let mut r = reflect_params(old)?;
            if sign {
                r = r.neg_ref();
            }
            assignment.insert(coeff_name(fam, i), r);
        }
    }
    Ok(ClosedFormSolution {
        case,
        m,
        n,
        source: Some((sc, sm, sn)),
        z: reflect_params(&src.z)?,
        assignment,
    })
}

// ---------------------------------------------------------------------------
// Star generator and prime ideals

/// Which product range to use for the `𝔴𝔱` star generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StarRange {
    /// One factor per component, `∏_{0≤k≤n}` for `m > n`.
    #[default]
    Adopted,
    /// The shorter printed range `∏_{0≤k≤n−1}`.
    Literal,
}

/// The extra generator of the prime ideal for `λ₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeGenerator {
    /// `Z ∓ (…)p`, cleared of denominators.
    Factor { z_constant: MPoly, poly: MPoly },
    /// A single bold top coefficient (`B0` or `C0`), or zero when that
    /// family is empty.
    Exceptional { var: String, poly: MPoly },
}

impl PrimeGenerator {
    pub fn poly(&self) -> &MPoly {
        match self {
            PrimeGenerator::Factor { poly, .. } | PrimeGenerator::Exceptional { poly, .. } => poly,
        }
    }
}

/// Admissible `λ₂` values and which one (if any) is exceptional.
pub fn admissible_lambda2(case: Case, m: i64, n: i64, gamma_nonzero: bool) -> (Vec<i64>, Option<i64>) {
    match case {
        Case::T => {
            let l = m.min(n);
            if m > n {
                ((0..=l).collect(), Some(l))
            } else if m < n && !gamma_nonzero {
                ((0..=l).collect(), Some(l))
            } else {
                ((0..l).collect(), None)
            }
        }
        Case::WT => ((0..m.min(n + 1)).collect(), None),
    }
}

/// The generator added to `I^{reg}` to cut out the component of `λ₂`:
/// `Z − (m−λ₂)(n−λ₂)p` in case T (or `𝒃₀` / `𝒄₀` at the exceptional
/// weight), and `Z + (𝔞−m+λ₂)(𝔞+n−λ₂)p` in case WT. Denominators are
/// cleared.
pub fn prime_ideal(case: Case, m: i64, n: i64, lambda2: i64, gamma_nonzero: bool) -> Result<PrimeGenerator, DefRingError> {
    check_domain(case, m, n)?;
    let (adm, exc) = admissible_lambda2(case, m, n, gamma_nonzero);
    if !adm.contains(&lambda2) {
        return Err(DefRingError::InadmissibleWeight { case, m, n, lambda2 });
    }
    if exc == Some(lambda2) {
        let (var, present) = if m > n {
            ("B0", n > 0)
        } else {
            ("C0", m > 0)
        };
        let poly = if present { MPoly::var(var) } else { MPoly::zero() };
        return Ok(PrimeGenerator::Exceptional { var: var.into(), poly });
    }
    let (zn, zd) = z_parts(case, m, n);
    let zc = match case {
        Case::T => c(-(m - lambda2) * (n - lambda2)) * pp(),
        Case::WT => (fa() - c(m - lambda2)) * (fa() + c(n - lambda2)) * pp(),
    };
    let poly = zn + &zc * &zd;
    Ok(PrimeGenerator::Factor { z_constant: zc, poly })
}

/// Generators of the star ideal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarGenerator {
    pub case: Case,
    pub m: i64,
    pub n: i64,
    pub range: StarRange,
    pub gamma_nonzero: bool,
    /// The linear-in-`Z` factors, cleared.
    pub factors: Vec<MPoly>,
    /// Non-unit prefactors: one (`𝒃₀` or `𝒄₀`) for a principal star, two
    /// for the `m = n` pair.
    pub prefactors: Vec<String>,
    /// The ideal is the unit ideal (the ring is zero).
    pub unit: bool,
    /// The ideal is zero (no relation).
    pub zero: bool,
}

impl StarGenerator {
    /// `∏` of the factors.
    pub fn product(&self) -> MPoly {
        self.factors.iter().fold(MPoly::one(), |acc, f| acc * f)
    }

    /// Explicit generators.
    pub fn polys(&self) -> Vec<MPoly> {
        if self.zero {
            return vec![];
        }
        if self.unit {
            return vec![MPoly::one()];
        }
        let prod = self.product();
        if self.prefactors.is_empty() {
            vec![prod]
        } else {
            self.prefactors.iter().map(|v| MPoly::var(v) * &prod).collect()
        }
    }

    /// The generator when the ideal is principal: the product of factors
    /// and the single prefactor; zero for the zero ideal. `None` for the
    /// `m = n` pair.
    pub fn principal(&self) -> Option<MPoly> {
        match self.polys().as_slice() {
            [] => Some(MPoly::zero()),
            [g] => Some(g.clone()),
            _ => None,
        }
    }

    /// Number of irreducible components of maximal dimension cut out by the
    /// star ideal. The pair `(𝒃₀, 𝒄₀)·∏` has the extra component `𝒃₀ = 𝒄₀ = 0`
    /// of smaller dimension, which is not counted.
    pub fn component_count(&self) -> i64 {
        if self.zero {
            1
        } else if self.unit {
            0
        } else {
            self.factors.len() as i64 + if self.prefactors.len() == 1 { 1 } else { 0 }
        }
    }
}

pub fn star_generator(case: Case, m: i64, n: i64, gamma_nonzero: bool, range: StarRange) -> Result<StarGenerator, DefRingError> {
    check_domain(case, m, n)?;
    let (adm, exc) = admissible_lambda2(case, m, n, gamma_nonzero);
    let mut factors = Vec::new();
    for &l2 in &adm {
        if Some(l2) == exc || (case == Case::WT && range == StarRange::Literal && l2 == 0) {
            continue;
        }
        factors.push(prime_ideal(case, m, n, l2, gamma_nonzero)?.poly().clone());
    }
    let mut prefactors = Vec::new();
    let (mut unit, mut zero) = (false, false);
    if case == Case::T {
        if m > n {
            if n == 0 {
                zero = true;
            } else {
                prefactors.push("B0".to_string());
            }
        } else if m < n {
            match (m == 0, gamma_nonzero) {
                (true, false) => zero = true,
                // 𝒄₀ would have to be a unit but its family is empty.
                (true, true) => unit = true,
                (false, false) => prefactors.push("C0".to_string()),
                (false, true) => {}
            }
        } else if !gamma_nonzero {
            prefactors = vec!["B0".to_string(), "C0".to_string()];
        }
    }
    if case == Case::WT && factors.is_empty() {
        // An empty product is no relation at all.
        zero = true;
    }
    Ok(StarGenerator {
        case,
        m,
        n,
        range,
        gamma_nonzero,
        factors,
        prefactors,
        unit,
        zero,
    })
}

/// Strips unit monomials and the content over `Q[𝔞]`, then makes monic.
pub fn normalize_up_to_units(p: &MPoly, case: Case) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut q = p.clone();
    for u in case.units() {
        let k = q.min_exponent(u);
        q = q.shift_down(u, k);
    }
    let content = q.content_in(FA);
    if !content.is_constant() {
        q = q.exact_div(&content).expect("content divides");
    }
    q.monic()
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationCheck {
    pub label: String,
    /// Terms in the cleared numerator after substitution.
    pub numerator_terms: usize,
    /// Quotient by the (normalized) star product.
    pub quotient: MPoly,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: Case,
    pub m: i64,
    pub n: i64,
    pub source: Option<(Case, i64, i64)>,
    pub star: Vec<MPoly>,
    pub trace_identities: usize,
    pub checks: Vec<EquationCheck>,
    /// For each star generator, an equation whose substitution is that
    /// generator times a unit (so the star ideal is exactly the ideal of
    /// the substituted equations).
    pub generated_by: Vec<String>,
}

/// Whether `q` is a unit under genericity: a nonzero constant times a
/// monomial in the unit variables times `∏ (𝔞 − r)` with small integer `r`.
fn is_generic_unit(q: &MPoly, case: Case, bound: i64) -> bool {
    if q.is_zero() {
        return false;
    }
    let mut q = q.clone();
    for u in case.units() {
        let k = q.min_exponent(u);
        q = q.shift_down(u, k);
    }
    if q.support_vars().iter().any(|v| v != FA) {
        return false;
    }
    for r in -bound..=bound {
        loop {
            let f = fa() - c(r);
            match q.div_rem(&f) {
                Ok((quot, rem)) if rem.is_zero() && q.degree_in(FA) > 0 => q = quot,
                _ => break,
            }
        }
    }
    q.is_constant()
}

/// Membership of a cleared numerator in the star ideal; the quotient on
/// success, the remainder on failure.
fn star_membership(num: &MPoly, star: &StarGenerator) -> Result<MPoly, MPoly> {
    if star.unit {
        return Ok(num.clone());
    }
    if star.zero {
        return if num.is_zero() { Ok(MPoly::zero()) } else { Err(num.clone()) };
    }
    let prod = normalize_up_to_units(&star.product(), star.case);
    let (q, r) = num.div_rem(&prod).expect("nonzero divisor");
    if !r.is_zero() {
        return Err(r);
    }
    match star.prefactors.as_slice() {
        [] => Ok(q),
        [v] => {
            let (q2, r2) = q.div_rem(&MPoly::var(v)).expect("nonzero divisor");
            if r2.is_zero() {
                Ok(q2)
            } else {
                Err(r2)
            }
        }
        vs => {
            // q must lie in the ideal generated by the prefactor variables.
            let mut rest = q.clone();
            for v in vs {
                rest = rest.eval_var(v, &Rat::zero());
            }
            if rest.is_zero() {
                Ok(q)
            } else {
                Err(rest)
            }
        }
    }
}

/// Substitutes `sol` into every equation of `sys` and checks membership in
/// the star ideal.
pub fn verify_assignment(sys: &EquationSystem, sol: &ClosedFormSolution, star: &StarGenerator) -> Result<VerificationReport, DefRingError> {
    let trace_identities = sys.check_trace_identity()?;
    let results: Vec<Result<EquationCheck, DefRingError>> = sys
        .equations
        .par_iter()
        .map(|eq| {
            let sub = substitute(&eq.poly, &sol.assignment);
            let num = sub.numer().clone();
            match star_membership(&num, star) {
                Ok(quotient) => Ok(EquationCheck {
                    label: eq.label.to_string(),
                    numerator_terms: num.nterms(),
                    quotient,
                }),
                Err(remainder) => Err(DefRingError::VerificationFailed {
                    equation: eq.label.to_string(),
                    remainder,
                }),
            }
        })
        .collect();
    let checks = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let bound = 2 * (sys.m + sys.n) + 4;
    let mut generated_by = Vec::new();
    if !star.zero {
        // Quotients by the common product; for the pair, the two generators
        // are recognized as unit multiples of B0 and C0.
        let targets: Vec<Option<&str>> = match star.prefactors.as_slice() {
            [] | [_] => vec![None],
            vs => vs.iter().map(|v| Some(v.as_str())).collect(),
        };
        for t in targets {
            let hit = checks.iter().find(|ch| match t {
                None => is_generic_unit(&ch.quotient, sys.case, bound),
                Some(var) => match ch.quotient.div_rem(&MPoly::var(var)) {
                    Ok((q, r)) => r.is_zero() && is_generic_unit(&q, sys.case, bound),
                    Err(_) => false,
                },
            });
            match hit {
                Some(ch) => generated_by.push(ch.label.clone()),
                None => {
                    return Err(DefRingError::StarNotGenerated {
                        generator: star.polys().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
                    })
                }
            }
        }
    }
    Ok(VerificationReport {
        case: sys.case,
        m: sys.m,
        n: sys.n,
        source: sol.source,
        star: star.polys(),
        trace_identities,
        checks,
        generated_by,
    })
}

/// Verifies the closed form of `(case, m, n)` against its equation system,
/// with `γ = 0` (the stronger statement) and the adopted star range.
pub fn verify_solution(case: Case, m: i64, n: i64) -> Result<VerificationReport, DefRingError> {
    verify_solution_with(case, m, n, StarRange::Adopted)
}

pub fn verify_solution_with(case: Case, m: i64, n: i64, range: StarRange) -> Result<VerificationReport, DefRingError> {
    let sys = build_equations(case, m, n);
    let sol = closed_form(case, m, n)?;
    let star = star_generator(case, m, n, false, range)?;
    verify_assignment(&sys, &sol, &star)
}

// ---------------------------------------------------------------------------
// Relation lemmas

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationsReport {
    pub case: Case,
    pub m: i64,
    pub n: i64,
    /// The table case whose relations were checked.
    pub checked_case: (Case, i64, i64),
    /// Identity family name and number of instances checked.
    pub identities: Vec<(String, usize)>,
}

struct Bold {
    cache: BTreeMap<(Family, i64), RatFunc>,
    case: Case,
    m: i64,
    n: i64,
}

impl Bold {
    fn get(&mut self, fam: Family, k: i64) -> RatFunc {
        let (case, m, n) = (self.case, self.m, self.n);
        self.cache
            .entry((fam, k))
            .or_insert_with(|| bold(case, m, n, fam, k).expect("table case"))
            .clone()
    }
}

fn rf(p: MPoly) -> RatFunc {
    RatFunc::from_poly(p)
}

fn check_zero(name: String, r: RatFunc, counts: &mut BTreeMap<String, usize>) -> Result<(), DefRingError> {
    if !r.is_zero() {
        return Err(DefRingError::IdentityFailed {
            residual: r.to_string(),
            name,
        });
    }
    *counts.entry(name.split('[').next().unwrap().to_string()).or_insert(0) += 1;
    Ok(())
}

/// Checks the relation identities among the bold coefficients that drive
/// the inductive proof of the closed form, for `1 ≤ i ≤ m + n`. For a
/// reflected case the relations of its source table case are checked.
pub fn verify_relations(case: Case, m: i64, n: i64) -> Result<RelationsReport, DefRingError> {
    check_domain(case, m, n)?;
    let (tc, tm, tn) = if in_table(case, m, n) {
        (case, m, n)
    } else {
        reflection_source(case, m, n)
    };
    let mut b = Bold {
        cache: BTreeMap::new(),
        case: tc,
        m: tm,
        n: tn,
    };
    let s = tm - tn;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let v = |name: &str| rf(MPoly::var(name));
    let lc = |p: MPoly| rf(p);
    let pr = || rf(pp());
    use Family::*;
    for i in 1..=tm + tn {
        match tc {
            Case::T => {
                let lhs = lc(c(i)) * b.get(A, i) * v("D0") + lc(fa() - c(s + 1)) * b.get(C, i - 1) * v("B0");
                check_zero(format!("relations-1a[i={i}]"), lhs, &mut counts)?;
                let lhs = lc(c(i)) * v("A0") * b.get(D, i) - lc(fa() - c(s)) * v("C0") * b.get(B, i - 1);
                check_zero(format!("relations-1b[i={i}]"), lhs, &mut counts)?;
                for j in 1..i {
                    let rhs = (lc((fa() - c(s)) * (fa() - c(s + 1)) * MPoly::var("B0") * MPoly::var("C0"))
                        * b.get(B, j - 1)
                        * b.get(C, i - j - 1))
                    .try_div(&lc(MPoly::var("A0") * MPoly::var("D0") * c((i - j) * j)))?;
                    let lhs = b.get(A, i - j) * b.get(D, j) + rhs;
                    check_zero(format!("relations-1c[i={i},j={j}]"), lhs, &mut counts)?;
                }
                let r = |b: &mut Bold, j: i64| lc(c(-j)).scale(&ratio(1, i)) * lc(fa() - c(s + 1 + j)) * b.get(A, i - j) * b.get(B, j);
                let rp = |b: &mut Bold, j: i64| lc(c(-j)).scale(&ratio(1, i)) * lc(fa() - c(s - j)) * b.get(C, j) * b.get(D, i - j);
                for j in 0..i {
                    let t = lc(fa() - c(s + 1 - i + 2 * j)) * b.get(A, i - j) * b.get(B, j)
                        + pr() * lc(c(s + 2 - i + 2 * j)) * b.get(A, i - j - 1) * b.get(B, j);
                    let e = t + r(&mut b, j) - r(&mut b, j + 1);
                    check_zero(format!("bc-chain[i={i},j={j}]"), e, &mut counts)?;
                    let t = lc(fa() - c(s + i - 2 * j)) * b.get(C, j) * b.get(D, i - j)
                        + pr() * lc(c(s - 2 + i - 2 * j)) * b.get(C, j) * b.get(D, i - j - 1);
                    let e = t + rp(&mut b, j) - rp(&mut b, j + 1);
                    check_zero(format!("cd-chain[i={i},j={j}]"), e, &mut counts)?;
                }
                let r0 = r(&mut b, 0);
                check_zero(format!("chain-start[i={i}]"), r0, &mut counts)?;
            }
            Case::WT => {
                for j in 0..i {
                    let e = lc(c(j + 1)) * b.get(B, j + 1) * b.get(C, i - j - 1)
                        - pr() * lc(fa() + c(j)) * b.get(B, j) * b.get(C, i - j - 1)
                        - lc(fa() - c(s - i + j)) * b.get(A, i - j - 1) * b.get(D, j);
                    check_zero(format!("relations-2a[i={i},j={j}]"), e, &mut counts)?;
                    let e = lc(c(-(i - j))) * b.get(B, j) * b.get(C, i - j)
                        - pr() * lc(fa() - c(i - j)) * b.get(B, j) * b.get(C, i - j - 1)
                        - lc(fa() - c(s + j)) * b.get(A, i - j - 1) * b.get(D, j);
                    check_zero(format!("relations-2b[i={i},j={j}]"), e, &mut counts)?;
                }
                let r = |b: &mut Bold, j: i64| lc(c(-j)).scale(&ratio(1, i)) * lc(fa() - c(s - 1 - j)) * b.get(A, j) * b.get(B, i - j);
                let rp = |b: &mut Bold, j: i64| lc(c(-j)).scale(&ratio(1, i)) * lc(fa() - c(s + j)) * b.get(C, i - j) * b.get(D, j);
                for j in 0..i {
                    let t = lc(fa() - c(s - 1 + i - 2 * j)) * b.get(A, j) * b.get(B, i - j)
                        + pr() * lc(c(s - 2 + i - 2 * j)) * b.get(A, j) * b.get(B, i - j - 1);
                    let e = t + r(&mut b, j) - r(&mut b, j + 1);
                    check_zero(format!("ab-chain[i={i},j={j}]"), e, &mut counts)?;
                    let t = lc(fa() - c(s - i + 2 * j)) * b.get(C, i - j) * b.get(D, j)
                        + pr() * lc(c(s - i + 2 * j)) * b.get(C, i - j - 1) * b.get(D, j);
                    let e = t + rp(&mut b, j) - rp(&mut b, j + 1);
                    check_zero(format!("cd-chain[i={i},j={j}]"), e, &mut counts)?;
                }
            }
        }
    }
    Ok(RelationsReport {
        case,
        m,
        n,
        checked_case: (tc, tm, tn),
        identities: counts.into_iter().collect(),
    })
}

// ---------------------------------------------------------------------------
// Component counts

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub case: Case,
    pub m: i64,
    pub n: i64,
    pub gamma_nonzero: bool,
    pub lambda2: i64,
    pub range: StarRange,
    /// Components of the star ideal surviving the weight `λ₂`.
    pub star_components: i64,
    /// `max(0, S(w̃) − λ₂)`.
    pub s_count: i64,
    /// Whether the prime generators of all admissible weights multiply to
    /// the star generator (up to units).
    pub factorization_matches: bool,
    pub matches: bool,
}

/// Compares the component count implied by the star generator with the
/// number of layers `S(w̃)`, and checks that the prime-ideal generators
/// factor the star generator.
pub fn component_count_consistency(case: Case, m: i64, n: i64, gamma_nonzero: bool, lambda2: i64, range: StarRange) -> Result<ConsistencyReport, DefRingError> {
    let star = star_generator(case, m, n, gamma_nonzero, range)?;
    let comp = AdmComp {
        flip: case == Case::WT,
        m,
        n,
    };
    let s = (s_count(comp, gamma_nonzero) - lambda2).max(0);
    let star_components = (star.component_count() - lambda2).max(0);
    let (adm, _) = admissible_lambda2(case, m, n, gamma_nonzero);
    let primes: Vec<PrimeGenerator> = adm
        .iter()
        .map(|&l2| prime_ideal(case, m, n, l2, gamma_nonzero))
        .collect::<Result<_, _>>()?;
    let factorization_matches = {
        let prod = primes.iter().fold(MPoly::one(), |acc, g| acc * g.poly());
        let target = match star.principal() {
            Some(g) => g,
            // The pair: compare against the common product.
            None => star.product(),
        };
        normalize_up_to_units(&prod, case) == normalize_up_to_units(&target, case)
    };
    Ok(ConsistencyReport {
        case,
        m,
        n,
        gamma_nonzero,
        lambda2,
        range,
        star_components,
        s_count: s,
        factorization_matches,
        matches: star_components == s && factorization_matches,
    })
}

// ---------------------------------------------------------------------------
// Presentations

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoordPresentation {
    pub j: usize,
    /// `w̃_{f-1-j}`.
    pub component: AdmComp,
    pub case: Case,
    /// Integer lift of `𝔞^{(j)}`.
    pub a_value: i64,
    pub distinguished: bool,
    /// `(x_j, y_j)` as bold top coefficients.
    pub pair: Option<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub label: BTreeSet<usize>,
    pub point: GraphPoint,
    /// `z(σ)_j` for each distinguished `j`, as `x{j}` or `y{j}`.
    pub z: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub m_count: usize,
    pub distinguished: Vec<usize>,
    /// Number of free power-series variables, `f − m + 4`.
    pub free_vars: i64,
    /// `x_j y_j − p`.
    pub relations: Vec<MPoly>,
    pub coords: Vec<CoordPresentation>,
    pub components: Vec<ComponentEntry>,
}

/// The special-fibre data of `R^{λ,τ}` for `τ = τ_{w̃}`: the intersection
/// `W(ρ̄) ∩ JH(σ̄(λ,τ))` has `2^m` elements, the ring is
/// `𝒪⟦(x_j,y_j)_{j∈𝒦}, Z_1,…,Z_{f−m+4}⟧/(x_j y_j − p)`, and the component of
/// `σ` is cut out by `(z(σ)_j)_{j∈𝒦}`.
pub fn presentation(rho: &RhoBarData, lambda: &HTWeight, w: &AdmElt) -> Result<PresentationSpec, DefRingError> {
    let f = rho.f;
    let tau = tau_of_wtilde(rho, w)?;
    let ell = w.0.iter().map(|c| c.m + c.n).max().unwrap_or(0);
    if rho.genericity() < 4 * ell {
        return Err(DefRingError::NotGeneric(format!(
            "ρ̄ is {}-generic, need {}",
            rho.genericity(),
            4 * ell
        )));
    }
    if tau.depth < 2 * ell || !tau.a_units_up_to(ell) {
        return Err(DefRingError::NotGeneric(format!(
            "τ is {}-deep, need {}",
            tau.depth,
            2 * ell
        )));
    }
    let inter = modular_intersection(rho, lambda, w)?;
    if inter.is_empty() {
        return Err(DefRingError::EmptyIntersection);
    }
    let distinguished: Vec<usize> = (0..f)
        .filter(|&j| inter.iter().map(|s| s.point.0[j]).collect::<BTreeSet<_>>().len() > 1)
        .collect();
    debug_assert_eq!(inter.len(), 1 << distinguished.len());
    let coords: Vec<CoordPresentation> = (0..f)
        .map(|j| {
            let comp = w.for_coord(j);
            let case = Case::of(comp);
            let d = distinguished.contains(&j);
            let pair = d.then(|| match case {
                Case::T => (format!("B0^({j})"), format!("C0^({j})")),
                Case::WT => (format!("A0^({j})"), format!("D0^({j})")),
            });
            CoordPresentation {
                j,
                component: comp,
                case,
                a_value: tau.a_values[j],
                distinguished: d,
                pair,
            }
        })
        .collect();
    let relations = distinguished
        .iter()
        .map(|j| MPoly::var(&format!("x{j}")) * MPoly::var(&format!("y{j}")) - pp())
        .collect();
    let components = inter
        .into_iter()
        .map(|s| ComponentEntry {
            z: distinguished
                .iter()
                .map(|&j| if s.point.0[j] == 0 { format!("x{j}") } else { format!("y{j}") })
                .collect(),
            label: s.label,
            point: s.point,
        })
        .collect();
    Ok(PresentationSpec {
        m_count: distinguished.len(),
        free_vars: f as i64 - distinguished.len() as i64 + 4,
        distinguished,
        relations,
        coords,
        components,
    })
}
