//! Rational functions whose denominators are products of known irreducibles.
//!
//! Every denominator that arises in this crate is a product of variables
//! (formally inverted units) and linear factors `x - c` (generic-position
//! conditions such as `A - 3`). Keeping the denominator in factored, monic
//! form makes lowest terms cheap: cancellation only needs a divisibility test
//! against each listed factor, never a general multivariate gcd.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgError, MPoly, Rat};

/// An irreducible denominator factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DenFactor {
    /// The variable itself.
    Var(String),
    /// `var - root`.
    Linear { var: String, root: Rat },
}

impl DenFactor {
    pub fn to_poly(&self) -> MPoly {
        match self {
            DenFactor::Var(v) => MPoly::var(v),
            DenFactor::Linear { var, root } => MPoly::var(var) - MPoly::constant(root.clone()),
        }
    }

    /// Exact quotient of `p` by this factor, if it divides.
    fn divide(&self, p: &MPoly) -> Option<MPoly> {
        match self {
            DenFactor::Var(v) => {
                if p.min_exponent(v) >= 1 {
                    Some(p.shift_down(v, 1))
                } else {
                    None
                }
            }
            DenFactor::Linear { var, root } => {
                if !p.eval_var(var, root).is_zero() {
                    return None;
                }
                p.exact_div(&self.to_poly()).ok()
            }
        }
    }

    /// Recognises a polynomial that is a nonzero constant multiple of a
    /// single admissible factor.
    pub fn recognise(p: &MPoly) -> Option<(Rat, DenFactor)> {
        let vars = p.support_vars();
        if vars.len() != 1 || p.total_degree() != 1 {
            return None;
        }
        let v = &vars[0];
        let cs = p.coeffs_in(v);
        let lead = cs[1].as_constant()?;
        let c0 = cs[0].as_constant()?;
        if c0.is_zero() {
            Some((lead, DenFactor::Var(v.clone())))
        } else {
            Some((
                lead.clone(),
                DenFactor::Linear {
                    var: v.clone(),
                    root: -c0 / lead,
                },
            ))
        }
    }
}

impl fmt::Display for DenFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenFactor::Var(v) => write!(f, "{v}"),
            DenFactor::Linear { .. } => write!(f, "({})", self.to_poly()),
        }
    }
}

/// `num / ∏ factor^exp`, in lowest terms with a monic denominator.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: BTreeMap<DenFactor, u32>,
}

impl RatFunc {
    pub fn from_poly(p: MPoly) -> Self {
        RatFunc {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn int(c: i64) -> Self {
        Self::from_poly(MPoly::int(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(MPoly::var(name))
    }

    pub fn new(num: MPoly, den: BTreeMap<DenFactor, u32>) -> Self {
        let mut r = RatFunc { num, den };
        r.reduce();
        r
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &BTreeMap<DenFactor, u32> {
        &self.den
    }

    /// The expanded denominator polynomial.
    pub fn denom(&self) -> MPoly {
        let mut d = MPoly::one();
        for (f, &e) in &self.den {
            d = d * f.to_poly().pow(e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<DenFactor> = self.den.keys().cloned().collect();
        for f in keys {
            loop {
                let e = self.den[&f];
                if e == 0 {
                    break;
                }
                match f.divide(&self.num) {
                    Some(q) => {
                        self.num = q;
                        *self.den.get_mut(&f).unwrap() -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|_, e| *e > 0);
    }

    fn with_den(&self, target: &BTreeMap<DenFactor, u32>) -> MPoly {
        let mut n = self.num.clone();
        for (f, &e) in target {
            let have = self.den.get(f).copied().unwrap_or(0);
            if e > have {
                n = n * f.to_poly().pow(e - have);
            }
        }
        n
    }

    fn lcm_den(a: &RatFunc, b: &RatFunc) -> BTreeMap<DenFactor, u32> {
        let mut d = a.den.clone();
        for (f, &e) in &b.den {
            let x = d.entry(f.clone()).or_insert(0);
            *x = (*x).max(e);
        }
        d
    }

    pub fn add_ref(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return RatFunc::new(&self.num + &other.num, self.den.clone());
        }
        let d = Self::lcm_den(self, other);
        RatFunc::new(self.with_den(&d) + other.with_den(&d), d)
    }

    pub fn neg_ref(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub_ref(&self, other: &RatFunc) -> RatFunc {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        for (f, &e) in &other.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        RatFunc::new(&self.num * &other.num, den)
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.den.clone()
            },
        }
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.iter().map(|(f, x)| (f.clone(), x * e)).collect(),
        }
    }

    /// Divides by `factor^e`.
    pub fn div_factor(&self, factor: &DenFactor, e: u32) -> RatFunc {
        let mut den = self.den.clone();
        *den.entry(factor.clone()).or_insert(0) += e;
        RatFunc::new(self.num.clone(), den)
    }

    /// Divides by another rational function whose numerator is a product of
    /// a constant, variables and linear factors that are each recognisable.
    /// Arbitrary divisors are rejected with `NotFactorable`.
    pub fn try_div(&self, other: &RatFunc) -> Result<RatFunc, AlgError> {
        if other.is_zero() {
            return Err(AlgError::DivisionByZeroPoly);
        }
        let (c, factors) = factor_simple(&other.num).ok_or(AlgError::NotFactorable)?;
        let mut r = self.scale(&(Rat::one() / c));
        // The divisor's own denominator moves to the numerator.
        r.num = r.num * other.denom();
        for (f, e) in factors {
            r = r.div_factor(&f, e);
        }
        Ok(r)
    }

    /// Substitutes rational functions for variables of the numerator and
    /// denominator.
    pub fn subst_all(&self, map: &BTreeMap<String, RatFunc>) -> Result<RatFunc, AlgError> {
        let n = substitute(&self.num, map);
        let d = substitute(&self.denom(), map);
        n.try_div(&d)
    }

    /// Evaluates at a rational point; `None` when the denominator vanishes.
    pub fn eval(&self, point: &BTreeMap<String, Rat>) -> Result<Option<Rat>, AlgError> {
        let d = self.denom().eval(point)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(point)? / d))
    }
}

/// Splits `p` into `c · ∏ f_i^{e_i}` when it is a product of admissible
/// factors (monomials times linear univariate factors).
fn factor_simple(p: &MPoly) -> Option<(Rat, Vec<(DenFactor, u32)>)> {
    let mut out = Vec::new();
    let mut rest = p.clone();
    for v in rest.support_vars() {
        let k = rest.min_exponent(&v);
        if k > 0 {
            rest = rest.shift_down(&v, k);
            out.push((DenFactor::Var(v), k));
        }
    }
    rest = rest.trim();
    while !rest.is_constant() {
        let vars = rest.support_vars();
        if vars.len() != 1 {
            return None;
        }
        let v = &vars[0];
        // Find a rational root among the candidates given by the rational
        // root theorem; every factor we accept is linear.
        let root = rational_root(&rest, v)?;
        let f = DenFactor::Linear {
            var: v.clone(),
            root,
        };
        let mut e = 0;
        while let Some(q) = f.divide(&rest) {
            rest = q;
            e += 1;
        }
        out.push((f, e));
    }
    Some((rest.as_constant()?, out))
}

fn rational_root(p: &MPoly, v: &str) -> Option<Rat> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let prim = p.primitive_integer();
    let cs = prim.coeffs_in(v);
    let a0 = cs[0].as_constant()?.numer().clone();
    let an = cs.last()?.as_constant()?.numer().clone();
    if a0.is_zero() {
        return Some(Rat::zero());
    }
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = num_traits::Signed::abs(n);
        let mut ds = Vec::new();
        let mut i = BigInt::one();
        while &i * &i <= n {
            if n.is_multiple_of(&i) {
                ds.push(i.clone());
                ds.push(&n / &i);
            }
            i += 1;
        }
        ds
    };
    for q in divisors(&an) {
        for pnum in divisors(&a0) {
            for s in [1, -1] {
                let r = Rat::new(pnum.clone() * s, q.clone());
                if p.eval_var(v, &r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// Substitutes rational functions for the variables of a polynomial,
/// accumulating over a single common denominator.
pub fn substitute(p: &MPoly, map: &BTreeMap<String, RatFunc>) -> RatFunc {
    let vars: Vec<String> = p.vars().to_vec();
    let vals: Vec<RatFunc> = vars
        .iter()
        .map(|v| map.get(v).cloned().unwrap_or_else(|| RatFunc::var(v)))
        .collect();
    // Common denominator: per factor, the maximum total exponent used by any
    // term.
    let mut common: BTreeMap<DenFactor, u32> = BTreeMap::new();
    for (m, _) in p.terms() {
        let mut need: BTreeMap<&DenFactor, u32> = BTreeMap::new();
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            for (f, &x) in &vals[i].den {
                *need.entry(f).or_insert(0) += x * e;
            }
        }
        for (f, x) in need {
            let c = common.entry(f.clone()).or_insert(0);
            *c = (*c).max(x);
        }
    }
    let mut num_pows: Vec<Vec<MPoly>> = vals.iter().map(|v| vec![MPoly::one(), v.num.clone()]).collect();
    let mut acc = MPoly::zero();
    for (m, c) in p.terms() {
        let mut t = MPoly::constant(c.clone());
        let mut used: BTreeMap<&DenFactor, u32> = BTreeMap::new();
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = e as usize;
            while num_pows[i].len() <= e {
                let next = &num_pows[i][num_pows[i].len() - 1] * &vals[i].num;
                num_pows[i].push(next);
            }
            t = t * &num_pows[i][e];
            for (f, &x) in &vals[i].den {
                *used.entry(f).or_insert(0) += x * e as u32;
            }
        }
        for (f, &need) in &common {
            let have = used.get(f).copied().unwrap_or(0);
            if need > have {
                t = t * f.to_poly().pow(need - have);
            }
        }
        acc = acc + t;
    }
    RatFunc::new(acc, common)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: &RatFunc) -> RatFunc {
                self.$m(rhs)
            }
        }
        impl std::ops::$tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                self.$m(&rhs)
            }
        }
        impl std::ops::$tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: &RatFunc) -> RatFunc {
                self.$m(rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl std::ops::Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.neg_ref()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(x, &e)| if e == 1 { x.to_string() } else { format!("{x}^{e}") })
            .collect();
        write!(f, "({}) / ({})", self.num, parts.join("*"))
    }
}
