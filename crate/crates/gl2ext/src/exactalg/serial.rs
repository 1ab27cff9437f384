//! Text and JSON encodings of polynomials.
//!
//! S-expression form:
//!
//! ```text
//! (poly (vars x y) ((3/2 2 0) (-1 0 1)))
//! ```
//!
//! lists the variable names, then one `(coefficient exponents...)` group per
//! term. JSON form mirrors it: `{"vars": [...], "terms": [{"coef": "3/2",
//! "exps": [2, 0]}, ...]}`. Both list terms in descending graded-lex order,
//! so equal polynomials serialize identically.
//!
//! [`parse_infix`] reads the human form printed by `Display`
//! (`3*x^2*y - z + 1`), with integer coefficients and parentheses.

use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgError, DenFactor, MPoly, Rat, RatFunc};

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coef: String,
    exps: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

fn parse_rat(s: &str) -> Result<Rat, AlgError> {
    Rat::from_str(s).map_err(|_| AlgError::Parse(format!("bad coefficient `{s}`")))
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let t = self.trim();
        PolyRepr {
            vars: t.vars().to_vec(),
            terms: t
                .terms()
                .rev()
                .map(|(m, c)| TermRepr {
                    coef: c.to_string(),
                    exps: m.0.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let terms = r
            .terms
            .into_iter()
            .map(|t| Ok((t.exps, parse_rat(&t.coef)?)))
            .collect::<Result<Vec<_>, AlgError>>()
            .map_err(serde::de::Error::custom)?;
        MPoly::from_terms(&r.vars, terms).map_err(serde::de::Error::custom)
    }
}

pub fn to_sexpr(p: &MPoly) -> String {
    let t = p.trim();
    let terms: Vec<String> = t
        .terms()
        .rev()
        .map(|(m, c)| {
            let mut parts = vec![c.to_string()];
            parts.extend(m.0.iter().map(|e| e.to_string()));
            format!("({})", parts.join(" "))
        })
        .collect();
    format!("(poly (vars{}{}) ({}))",
        if t.vars().is_empty() { "" } else { " " },
        t.vars().join(" "),
        terms.join(" "))
}

#[derive(Debug, PartialEq)]
enum SExp {
    Atom(String),
    List(Vec<SExp>),
}

fn read_sexp(tokens: &[String], pos: &mut usize) -> Result<SExp, AlgError> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| AlgError::Parse("unexpected end of input".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(SExp::List(items));
                    }
                    Some(_) => items.push(read_sexp(tokens, pos)?),
                    None => return Err(AlgError::Parse("unbalanced parentheses".into())),
                }
            }
        }
        ")" => Err(AlgError::Parse("unexpected `)`".into())),
        atom => Ok(SExp::Atom(atom.to_string())),
    }
}

pub fn from_sexpr(text: &str) -> Result<MPoly, AlgError> {
    let tokens: Vec<String> = text
        .replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let mut pos = 0;
    let e = read_sexp(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(AlgError::Parse("trailing input".into()));
    }
    let bad = || AlgError::Parse("expected (poly (vars ...) (terms...))".into());
    let SExp::List(items) = e else { return Err(bad()) };
    if items.len() != 3 || items[0] != SExp::Atom("poly".into()) {
        return Err(bad());
    }
    let SExp::List(vs) = &items[1] else { return Err(bad()) };
    let mut vars = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        match (i, v) {
            (0, SExp::Atom(a)) if a == "vars" => {}
            (i, SExp::Atom(a)) if i > 0 => vars.push(a.clone()),
            _ => return Err(bad()),
        }
    }
    let SExp::List(ts) = &items[2] else { return Err(bad()) };
    let mut terms = Vec::new();
    for t in ts {
        let SExp::List(parts) = t else { return Err(bad()) };
        let mut atoms = parts.iter().map(|x| match x {
            SExp::Atom(a) => Ok(a.as_str()),
            SExp::List(_) => Err(bad()),
        });
        let coef = parse_rat(atoms.next().ok_or_else(bad)??)?;
        let exps = atoms
            .map(|a| {
                a?.parse::<u32>()
                    .map_err(|_| AlgError::Parse("bad exponent".into()))
            })
            .collect::<Result<Vec<u32>, _>>()?;
        terms.push((exps, coef));
    }
    MPoly::from_terms(&vars, terms)
}

/// Parses `+ - * ^` expressions over identifiers and integer literals.
pub fn parse_infix(text: &str) -> Result<MPoly, AlgError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let p = parse_sum(&chars, &mut pos)?;
    if pos != chars.len() {
        return Err(AlgError::Parse(format!("unexpected `{}`", chars[pos])));
    }
    Ok(p)
}

fn parse_sum(c: &[char], pos: &mut usize) -> Result<MPoly, AlgError> {
    let mut acc = if c.get(*pos) == Some(&'-') {
        *pos += 1;
        -parse_product(c, pos)?
    } else {
        parse_product(c, pos)?
    };
    while let Some(&op) = c.get(*pos) {
        match op {
            '+' => {
                *pos += 1;
                acc = acc + parse_product(c, pos)?;
            }
            '-' => {
                *pos += 1;
                acc = acc - parse_product(c, pos)?;
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_product(c: &[char], pos: &mut usize) -> Result<MPoly, AlgError> {
    let mut acc = parse_power(c, pos)?;
    while c.get(*pos) == Some(&'*') {
        *pos += 1;
        acc = acc * parse_power(c, pos)?;
    }
    Ok(acc)
}

fn parse_power(c: &[char], pos: &mut usize) -> Result<MPoly, AlgError> {
    let base = parse_atom(c, pos)?;
    if c.get(*pos) == Some(&'^') {
        *pos += 1;
        let start = *pos;
        while c.get(*pos).is_some_and(|x| x.is_ascii_digit()) {
            *pos += 1;
        }
        let e: u32 = c[start..*pos]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| AlgError::Parse("bad exponent".into()))?;
        return Ok(base.pow(e));
    }
    Ok(base)
}

fn parse_atom(c: &[char], pos: &mut usize) -> Result<MPoly, AlgError> {
    match c.get(*pos) {
        Some('(') => {
            *pos += 1;
            let inner = parse_sum(c, pos)?;
            if c.get(*pos) != Some(&')') {
                return Err(AlgError::Parse("missing `)`".into()));
            }
            *pos += 1;
            Ok(inner)
        }
        Some(x) if x.is_ascii_digit() => {
            let start = *pos;
            while c.get(*pos).is_some_and(|x| x.is_ascii_digit()) {
                *pos += 1;
            }
            let s: String = c[start..*pos].iter().collect();
            Ok(MPoly::constant(parse_rat(&s)?))
        }
        Some(x) if x.is_alphabetic() || *x == '_' => {
            let start = *pos;
            while c
                .get(*pos)
                .is_some_and(|x| x.is_alphanumeric() || *x == '_')
            {
                *pos += 1;
            }
            let s: String = c[start..*pos].iter().collect();
            Ok(MPoly::var(&s))
        }
        Some(x) => Err(AlgError::Parse(format!("unexpected `{x}`"))),
        None => Err(AlgError::Parse("unexpected end of input".into())),
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncRepr {
    num: MPoly,
    den: Vec<(DenFactor, u32)>,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatFuncRepr {
            num: self.numer().clone(),
            den: self.den_factors().iter().map(|(f, &e)| (f.clone(), e)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RatFuncRepr::deserialize(d)?;
        Ok(RatFunc::new(r.num, r.den.into_iter().collect()))
    }
}
