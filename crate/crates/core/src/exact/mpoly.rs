use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::rat::Rat;
use crate::error::{Error, Result};

/// Sparse polynomial over `Rat` in named variables.
///
/// Exponent vectors are indexed by `vars`; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(c: impl Into<Rat>) -> MPoly {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> MPoly {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rat::one());
        MPoly { vars: vec![name.to_string()], terms }
    }

    /// Builds a polynomial from `(coefficient, [(var, exp)])` pairs.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (Rat, Vec<(&'a str, u32)>)>) -> MPoly {
        let mut acc = MPoly::zero();
        for (c, mono) in terms {
            let mut t = MPoly::constant(c);
            for (v, e) in mono {
                t = &t * &MPoly::var(v).pow(e);
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(monomial, coefficient)` with the monomial listed by variable name.
    pub fn terms(&self) -> Vec<(Vec<(String, u32)>, Rat)> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono = self
                    .vars
                    .iter()
                    .zip(e)
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| (v.clone(), k))
                    .collect();
                (mono, c.clone())
            })
            .collect()
    }

    /// Coefficient of the monomial given as `(var, exp)` pairs; unlisted variables have exponent 0.
    pub fn coeff(&self, mono: &[(&str, u32)]) -> Rat {
        let mut e = vec![0u32; self.vars.len()];
        for (v, k) in mono {
            if *k == 0 {
                continue;
            }
            match self.vars.iter().position(|x| x == v) {
                Some(i) => e[i] += k,
                None => return Rat::zero(),
            }
        }
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Coefficient of `var^e`, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, var: &str, e: u32) -> MPoly {
        let Some(i) = self.vars.iter().position(|x| x == var) else {
            return if e == 0 { self.clone() } else { MPoly::zero() };
        };
        let mut out = MPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            if k[i] == e {
                let mut k2 = k.clone();
                k2[i] = 0;
                out.terms.insert(k2, c.clone());
            }
        }
        out.normalized()
    }

    pub fn is_coeff_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn with_vars(&self, vars: &[String]) -> BTreeMap<Vec<u32>, Rat> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("variable missing from union"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0u32; vars.len()];
                for (i, &k) in e.iter().enumerate() {
                    e2[map[i]] = k;
                }
                (e2, c.clone())
            })
            .collect()
    }

    fn union_vars(&self, o: &MPoly) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &o.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    /// Drops unused variables and sorts the rest by name.
    pub fn normalized(&self) -> MPoly {
        let mut used: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect();
        used.sort();
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let e2 = used
                .iter()
                .map(|v| e[self.vars.iter().position(|w| w == v).unwrap()])
                .collect();
            out.insert(e2, c.clone());
        }
        MPoly { vars: used, terms: out }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &BTreeMap<String, Rat>) -> Result<Rat> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match point.get(v) {
                Some(x) => vals.push(x.clone()),
                None => {
                    if self.terms.keys().any(|e| e[vals.len()] > 0) {
                        return Err(Error::InvalidParams(format!("no value for variable {v}")));
                    }
                    vals.push(Rat::zero());
                }
            }
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in vals.iter().zip(e) {
                if k > 0 {
                    t *= &x.pow(k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes polynomials for variables and expands. Assignments to absent variables are ignored.
    pub fn substitute(&self, assignments: &BTreeMap<String, MPoly>) -> MPoly {
        let images: Vec<MPoly> = self
            .vars
            .iter()
            .map(|v| assignments.get(v).cloned().unwrap_or_else(|| MPoly::var(v)))
            .collect();
        let mut cache: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::constant(1), p.clone()]).collect();
        let mut acc = MPoly::zero();
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while cache[i].len() <= k {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                if k > 0 {
                    t = &t * &cache[i][k];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        let vars = self.union_vars(d);
        let dv = d.with_vars(&vars);
        let (dl, dc) = dv.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut r = MPoly { vars: vars.clone(), terms: self.with_vars(&vars) };
        let dpoly = MPoly { vars: vars.clone(), terms: dv };
        let mut quot = MPoly { vars: vars.clone(), terms: BTreeMap::new() };
        while let Some((rl, rc)) = r.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if rl.iter().zip(&dl).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = rl.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let c = &rc / &dc;
            let mono = MPoly { vars: vars.clone(), terms: BTreeMap::from([(e, c)]) };
            r = &r - &(&mono * &dpoly);
            quot = &quot + &mono;
        }
        Some(quot)
    }
}

impl PartialEq for MPoly {
    fn eq(&self, o: &MPoly) -> bool {
        let a = self.normalized();
        let b = o.normalized();
        a.vars == b.vars && a.terms == b.terms
    }
}

impl Eq for MPoly {}

fn combine(a: &MPoly, b: &MPoly, sign: i64) -> MPoly {
    let vars = a.union_vars(b);
    let mut terms = a.with_vars(&vars);
    let s = Rat::int(sign);
    for (e, c) in b.with_vars(&vars) {
        let entry = terms.entry(e).or_default();
        *entry += &(&c * &s);
    }
    terms.retain(|_, c| !c.is_zero());
    MPoly { vars, terms }
}

impl std::ops::Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        combine(self, o, 1)
    }
}

impl std::ops::Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        combine(self, o, -1)
    }
}

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&Rat::int(-1))
    }
}

impl std::ops::Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        let vars = self.union_vars(o);
        let a = self.with_vars(&vars);
        let b = o.with_vars(&vars);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_default() += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { vars, terms }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.normalized();
        if p.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = p.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, e) in keys.into_iter().enumerate() {
            let c = &p.terms[e];
            let mono: Vec<String> = p
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            let body = if mono.is_empty() {
                a.to_string()
            } else if a == Rat::one() {
                mono.join("*")
            } else {
                format!("{}*{}", a, mono.join("*"))
            };
            match (n, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.bump();
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.bump();
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                Some(Tok::Op('/')) => {
                    self.bump();
                    let f = self.power()?;
                    let c = f.coeff(&[]);
                    if f.num_terms() != 1 || c.is_zero() || f != MPoly::constant(c.clone()) {
                        return Err(Error::Parse("division only by nonzero constants".into()));
                    }
                    acc = acc.scale(&c.recip().unwrap());
                }
                _ if self.starts_factor() => {
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("exponent must be a nonnegative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(MPoly::constant(Rat::from_big(n))),
            Some(Tok::Ident(v)) => Ok(MPoly::var(&v)),
            Some(Tok::Op('(')) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::Op(')')) => Ok(e),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

impl FromStr for MPoly {
    type Err = Error;

    /// Parses sums of products of integers, variables, powers and parentheses.
    /// Juxtaposition means multiplication, so `2 h t^2` is accepted.
    fn from_str(s: &str) -> Result<MPoly> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}

/// Parses a polynomial literal, panicking on malformed input. Intended for fixed formulas.
pub fn poly(s: &str) -> MPoly {
    s.parse().unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}

/// Substitution map from `(name, polynomial literal)` pairs.
pub fn assign(pairs: &[(&str, &str)]) -> BTreeMap<String, MPoly> {
    pairs.iter().map(|(v, p)| (v.to_string(), poly(p))).collect()
}

pub fn mpoly_substitute(p: &MPoly, assignments: &BTreeMap<String, MPoly>) -> MPoly {
    p.substitute(assignments)
}

pub fn mpoly_is_coeff_nonneg(p: &MPoly) -> bool {
    p.is_coeff_nonneg()
}
