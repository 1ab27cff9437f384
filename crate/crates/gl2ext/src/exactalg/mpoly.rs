//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A polynomial carries its own variable universe (a sorted list of symbol
//! names shared through an `Arc`). Binary operations on polynomials over
//! different universes first extend both operands to the union, so callers
//! never have to pre-declare a ring.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{AlgError, Rat};

/// Exponent vector, indexed like the owning polynomial's variable list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out))
    }
}

/// Graded lexicographic: total degree first, then lexicographic with the
/// first variable most significant.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct MPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Mono, Rat>,
}

fn empty_vars() -> Arc<Vec<String>> {
    Arc::new(Vec::new())
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            vars: empty_vars(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(vec![]), c);
        }
        MPoly {
            vars: empty_vars(),
            terms,
        }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono(vec![1]), Rat::one());
        MPoly {
            vars: Arc::new(vec![name.to_string()]),
            terms,
        }
    }

    /// Builds a polynomial from explicit terms. Variables need not be sorted;
    /// duplicate exponent vectors are summed.
    pub fn from_terms<S: AsRef<str>>(
        vars: &[S],
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Result<Self, AlgError> {
        let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(AlgError::Parse("duplicate variable name".into()));
        }
        let perm: Vec<usize> = names
            .iter()
            .map(|n| sorted.binary_search(n).unwrap())
            .collect();
        let mut out: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != names.len() {
                return Err(AlgError::Parse(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    names.len()
                )));
            }
            let mut e = vec![0; names.len()];
            for (i, x) in exps.into_iter().enumerate() {
                e[perm[i]] = x;
            }
            add_term(&mut out, Mono(e), c);
        }
        Ok(MPoly {
            vars: Arc::new(sorted),
            terms: out,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Rat::zero),
        )
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Variables that actually occur with positive exponent.
    pub fn support_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    pub fn leading_term(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Re-expresses the polynomial over a larger sorted universe.
    pub fn extend_to(&self, vars: &Arc<Vec<String>>) -> MPoly {
        if Arc::ptr_eq(&self.vars, vars) || *self.vars == **vars {
            return MPoly {
                vars: vars.clone(),
                terms: self.terms.clone(),
            };
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.binary_search(v)
                    .expect("target universe must contain all variables")
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; vars.len()];
                for (i, &x) in m.0.iter().enumerate() {
                    e[map[i]] = x;
                }
                (Mono(e), c.clone())
            })
            .collect();
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Drops variables that do not occur.
    pub fn trim(&self) -> MPoly {
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if keep.len() == self.vars.len() {
            return self.clone();
        }
        let vars = Arc::new(keep.iter().map(|&i| self.vars[i].clone()).collect());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Mono(keep.iter().map(|&i| m.0[i]).collect()), c.clone()))
            .collect();
        MPoly { vars, terms }
    }

    fn aligned(a: &MPoly, b: &MPoly) -> (MPoly, MPoly) {
        if Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars {
            let vars = a.vars.clone();
            return (
                a.clone(),
                MPoly {
                    vars,
                    terms: b.terms.clone(),
                },
            );
        }
        let u = Arc::new(union_vars(&a.vars, &b.vars));
        (a.extend_to(&u), b.extend_to(&u))
    }

    fn same_universe(a: &MPoly, b: &MPoly) -> bool {
        Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars
    }

    pub fn add_ref(&self, other: &MPoly) -> MPoly {
        if !Self::same_universe(self, other) {
            let (a, b) = Self::aligned(self, other);
            return a.add_ref(&b);
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn sub_ref(&self, other: &MPoly) -> MPoly {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul_ref(&self, other: &MPoly) -> MPoly {
        if !Self::same_universe(self, other) {
            let (a, b) = Self::aligned(self, other);
            return a.mul_ref(&b);
        }
        if self.is_zero() || other.is_zero() {
            return MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        let mut acc: HashMap<Mono, Rat> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        MPoly {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one().extend_to(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `NotDivisible`.
    ///
    /// Runs the multivariate division algorithm against the single divisor;
    /// for an exact division every intermediate leading term must be
    /// divisible by the divisor's leading term, so the first failure proves
    /// non-divisibility.
    pub fn exact_div(&self, divisor: &MPoly) -> Result<MPoly, AlgError> {
        if divisor.is_zero() {
            return Err(AlgError::DivisionByZeroPoly);
        }
        if !Self::same_universe(self, divisor) {
            let (a, b) = Self::aligned(self, divisor);
            return a.exact_div(&b);
        }
        let (lm, lc) = divisor.leading_term().unwrap();
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Mono, Rat> = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back() {
            let qm = m.checked_div(&lm).ok_or(AlgError::NotDivisible)?;
            let qc = c / &lc;
            for (dm, dc) in &divisor.terms {
                add_term(&mut rem, qm.mul(dm), -(&qc * dc));
            }
            quot.insert(qm, qc);
        }
        Ok(MPoly {
            vars: self.vars.clone(),
            terms: quot,
        })
    }

    /// Division with remainder by a single divisor: `self = q·divisor + r`
    /// where no term of `r` is divisible by the divisor's leading monomial.
    /// `r` is zero exactly when the division is exact.
    pub fn div_rem(&self, divisor: &MPoly) -> Result<(MPoly, MPoly), AlgError> {
        if divisor.is_zero() {
            return Err(AlgError::DivisionByZeroPoly);
        }
        if !Self::same_universe(self, divisor) {
            let (a, b) = Self::aligned(self, divisor);
            return a.div_rem(&b);
        }
        let (lm, lc) = divisor.leading_term().unwrap();
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Mono, Rat> = BTreeMap::new();
        let mut left: BTreeMap<Mono, Rat> = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back() {
            let (m, c) = (m.clone(), c.clone());
            match m.checked_div(&lm) {
                Some(qm) => {
                    let qc = &c / &lc;
                    for (dm, dc) in &divisor.terms {
                        add_term(&mut rem, qm.mul(dm), -(&qc * dc));
                    }
                    add_term(&mut quot, qm, qc);
                }
                None => {
                    rem.remove(&m);
                    left.insert(m, c);
                }
            }
        }
        let wrap = |terms| MPoly {
            vars: self.vars.clone(),
            terms,
        };
        Ok((wrap(quot), wrap(left)))
    }

    /// Substitutes `value` for the variable `name`.
    pub fn subst(&self, name: &str, value: &MPoly) -> MPoly {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        let maxdeg = self.degree_in(name) as usize;
        let mut powers = vec![MPoly::one()];
        for k in 1..=maxdeg {
            powers.push(powers[k - 1].mul_ref(value));
        }
        // Group terms by the power of the substituted variable.
        let mut buckets: Vec<BTreeMap<Mono, Rat>> = vec![BTreeMap::new(); maxdeg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i] as usize;
            e[i] = 0;
            buckets[k].insert(Mono(e), c.clone());
        }
        let mut acc = MPoly::zero();
        for (k, terms) in buckets.into_iter().enumerate() {
            if terms.is_empty() {
                continue;
            }
            let part = MPoly {
                vars: self.vars.clone(),
                terms,
            };
            acc = acc.add_ref(&part.mul_ref(&powers[k]));
        }
        acc.trim()
    }

    /// Evaluates one variable at a rational value.
    pub fn eval_var(&self, name: &str, value: &Rat) -> MPoly {
        self.subst(name, &MPoly::constant(value.clone()))
    }

    /// Evaluates every variable; missing variables are an error.
    pub fn eval(&self, point: &BTreeMap<String, Rat>) -> Result<Rat, AlgError> {
        let vals: Vec<&Rat> = self
            .vars
            .iter()
            .map(|v| {
                point
                    .get(v)
                    .ok_or_else(|| AlgError::MissingValue(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(vals[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn derivative(&self, name: &str) -> MPoly {
        let Some(i) = self.var_index(name) else {
            return MPoly::zero();
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            terms.insert(Mono(e), c * Rat::from_integer(BigInt::from(m.0[i])));
        }
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Coefficients with respect to `name`: entry `k` is the coefficient of
    /// `name^k`, a polynomial in the remaining variables.
    pub fn coeffs_in(&self, name: &str) -> Vec<MPoly> {
        let Some(i) = self.var_index(name) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(name) as usize;
        let mut out: Vec<BTreeMap<Mono, Rat>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i] as usize;
            e[i] = 0;
            out[k].insert(Mono(e), c.clone());
        }
        out.into_iter()
            .map(|terms| {
                MPoly {
                    vars: self.vars.clone(),
                    terms,
                }
                .trim()
            })
            .collect()
    }

    /// Splits the polynomial into coefficient polynomials in `name` keyed by
    /// the monomial in all other variables.
    pub fn coefficients_over(&self, name: &str) -> Vec<MPoly> {
        let Some(i) = self.var_index(name) else {
            return self
                .terms
                .values()
                .map(|c| MPoly::constant(c.clone()))
                .collect();
        };
        let mut groups: BTreeMap<Mono, BTreeMap<Mono, Rat>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rest = m.0.clone();
            let k = rest[i];
            rest[i] = 0;
            let mut only = vec![0; self.vars.len()];
            only[i] = k;
            groups
                .entry(Mono(rest))
                .or_default()
                .insert(Mono(only), c.clone());
        }
        groups
            .into_values()
            .map(|terms| {
                MPoly {
                    vars: self.vars.clone(),
                    terms,
                }
                .trim()
            })
            .collect()
    }

    /// The content with respect to the other variables: the monic gcd, in
    /// Q[name], of all coefficients of `self` viewed as a polynomial over
    /// Q[name].
    pub fn content_in(&self, name: &str) -> MPoly {
        let mut g = MPoly::zero();
        for c in self.coefficients_over(name) {
            g = univariate_gcd(&g, &c, name).expect("coefficients are univariate");
            if g.is_constant() && !g.is_zero() {
                return MPoly::one();
            }
        }
        g
    }

    /// Multiplies by a scalar so that the leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rat::one() / self.leading_coeff()))
    }

    /// Divides out the gcd of the integer contents so coefficients become
    /// coprime integers with positive leading coefficient.
    pub fn primitive_integer(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_integer::Integer::gcd(&num_gcd, &n);
        }
        let mut s = Rat::new(den_lcm, num_gcd);
        if self.leading_coeff().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Exponent of `name` dividing every term.
    pub fn min_exponent(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).min().unwrap_or(0),
            None => 0,
        }
    }

    /// Divides by `name^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, name: &str, k: u32) -> MPoly {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[i] -= k;
                    (Mono(e), c.clone())
                })
                .collect(),
        }
    }

    /// Renames variables (the map need not be total).
    pub fn rename(&self, map: &BTreeMap<String, String>) -> MPoly {
        let names: Vec<String> = self
            .vars
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        MPoly::from_terms(
            &names,
            self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())),
        )
        .expect("renaming must not merge variables")
    }

    /// Treats `self` as a univariate polynomial and checks that no other
    /// variable occurs.
    pub fn is_univariate_in(&self, name: &str) -> bool {
        self.support_vars().iter().all(|v| v == name)
    }
}

pub(crate) fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j].clone());
            j += 1;
        } else {
            out.push(a[i].clone());
            i += 1;
            j += 1;
        }
    }
    out
}

fn add_term(terms: &mut BTreeMap<Mono, Rat>, m: Mono, c: Rat) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
}

/// Division with remainder for polynomials univariate in `name`.
pub fn univariate_div_rem(a: &MPoly, b: &MPoly, name: &str) -> Result<(MPoly, MPoly), AlgError> {
    if b.is_zero() {
        return Err(AlgError::DivisionByZeroPoly);
    }
    for p in [a, b] {
        if !p.is_univariate_in(name) {
            return Err(AlgError::NotUnivariateInVar(name.to_string()));
        }
    }
    let x = MPoly::var(name);
    let db = b.degree_in(name);
    let lb = b.coeffs_in(name)[db as usize].as_constant().unwrap();
    let mut q = MPoly::zero();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(name) >= db {
        let dr = r.degree_in(name);
        let lr = r.coeffs_in(name)[dr as usize].as_constant().unwrap();
        let t = x.pow(dr - db).scale(&(lr / &lb));
        q = q + &t;
        r = r - &t * b;
    }
    Ok((q, r))
}

/// Monic gcd of two polynomials univariate in `name` (Euclid over Q).
pub fn univariate_gcd(a: &MPoly, b: &MPoly, name: &str) -> Result<MPoly, AlgError> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = univariate_div_rem(&a, &b, name)?;
        a = b;
        b = r;
    }
    Ok(a.monic().trim())
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        if Self::same_universe(self, other) {
            return self.terms == other.terms;
        }
        self.sub_ref(other).is_zero()
    }
}

impl Eq for MPoly {}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                self.$m(rhs)
            }
        }
        impl std::ops::$tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                self.$m(&rhs)
            }
        }
        impl std::ops::$tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                self.$m(rhs)
            }
        }
        impl std::ops::$tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl std::ops::Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
