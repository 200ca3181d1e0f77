//! Divisor classes on moduli of pointed rational curves with 2g+2 unordered and n ordered markings.
//!
//! A class is a coefficient map over a generating set, not a basis. Boundary symbols are stored
//! once per distinct divisor: the conjugate labels `[i]+S` and `[2g+2-i]+S^c` name the same
//! divisor and share one coefficient.

mod decomp;
mod proofs;

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::exact::Rat;

pub use decomp::{
    closed_form_d, effective_decomposition, ordered5_printed_value, decomposition_indices, DecompResult,
};
pub use proofs::{keel_coeff_poly, verify_proof_polynomials};

/// Largest n for which set-resolved symbols are enumerated.
pub const MAX_SET_N: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// 2g+2 unordered and n ordered markings.
    Sym { g: u32, n: u32 },
    /// m unordered markings.
    Full { m: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Unordered,
    /// Set-resolved branch divisor, kept on the symmetrized space.
    Ordered,
    /// Ordered branch divisor composed down to the symmetrized space.
    OrderedComposed,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Unordered => "unordered",
            Variant::Ordered => "ordered",
            Variant::OrderedComposed => "ordered_composed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenSymbol {
    PsiStar,
    Psi(u32),
    /// Sum of all distinct boundary divisors of type `[i]+j`.
    Delta(u32, u32),
    /// Boundary divisor `[i]+S`, with S sorted.
    DeltaSet(u32, Vec<u32>),
    /// Boundary divisor `[s]` on the fully symmetric space.
    DeltaFull(u32),
}

impl fmt::Display for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSymbol::PsiStar => write!(f, "psi_star"),
            GenSymbol::Psi(k) => write!(f, "psi:{k}"),
            GenSymbol::Delta(i, j) => write!(f, "delta[{i}]+{j}"),
            GenSymbol::DeltaSet(i, s) => {
                let body: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "delta[{i}]+{{{}}}", body.join(","))
            }
            GenSymbol::DeltaFull(s) => write!(f, "delta[{s}]"),
        }
    }
}

impl Space {
    pub fn sym(g: u32, n: u32) -> Result<Space> {
        if g < 2 {
            return invalid(format!("g = {g} < 2"));
        }
        Ok(Space::Sym { g, n })
    }

    pub fn full(m: u32) -> Result<Space> {
        if m < 4 {
            return invalid(format!("m = {m} < 4"));
        }
        Ok(Space::Full { m })
    }

    pub fn gn(&self) -> Result<(u32, u32)> {
        match *self {
            Space::Sym { g, n } => Ok((g, n)),
            Space::Full { .. } => invalid("operation needs the symmetrized space"),
        }
    }

    pub fn psi(&self, k: u32) -> Result<GenSymbol> {
        let (_, n) = self.gn()?;
        if k == 0 || k > n {
            return Err(Error::InvalidSymbol(format!("psi:{k} with n = {n}")));
        }
        Ok(GenSymbol::Psi(k))
    }

    fn check_type(&self, i: u32, j: u32) -> Result<(u32, u32)> {
        let (g, n) = self.gn()?;
        let b = 2 * g + 2;
        if i > b || j > n || i + j < 2 || (b - i) + (n - j) < 2 {
            return Err(Error::InvalidSymbol(format!("delta[{i}]+{j} on (g,n)=({g},{n})")));
        }
        Ok((g, n))
    }

    /// Aggregated symbol `delta[i]+j` in canonical form.
    pub fn delta(&self, i: u32, j: u32) -> Result<GenSymbol> {
        let (g, n) = self.check_type(i, j)?;
        let conj = (2 * g + 2 - i, n - j);
        let (a, b) = std::cmp::min((i, j), conj);
        Ok(GenSymbol::Delta(a, b))
    }

    /// Set-resolved symbol `delta[i]+S` in canonical form.
    pub fn delta_set(&self, i: u32, s: &[u32]) -> Result<GenSymbol> {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        let (g, n) = self.check_type(i, s.len() as u32)?;
        if s.iter().any(|&x| x == 0 || x > n) {
            return Err(Error::InvalidSymbol(format!("subset {s:?} of 1..{n}")));
        }
        let comp: Vec<u32> = (1..=n).filter(|x| !s.contains(x)).collect();
        let (a, b) = std::cmp::min((i, s), (2 * g + 2 - i, comp));
        Ok(GenSymbol::DeltaSet(a, b))
    }

    pub fn delta_full(&self, s: u32) -> Result<GenSymbol> {
        let Space::Full { m } = *self else {
            return invalid("delta[s] needs the fully symmetric space");
        };
        if s < 2 || s > m - 2 {
            return Err(Error::InvalidSymbol(format!("delta[{s}] with m = {m}")));
        }
        Ok(GenSymbol::DeltaFull(s.min(m - s)))
    }

    /// Aggregated type of a boundary symbol.
    pub fn agg_of(&self, sym: &GenSymbol) -> Option<GenSymbol> {
        match sym {
            GenSymbol::DeltaSet(i, s) => self.delta(*i, s.len() as u32).ok(),
            GenSymbol::Delta(..) => Some(sym.clone()),
            _ => None,
        }
    }

    pub fn validate(&self, sym: &GenSymbol) -> Result<()> {
        let canon = match sym {
            GenSymbol::PsiStar => {
                self.gn()?;
                GenSymbol::PsiStar
            }
            GenSymbol::Psi(k) => self.psi(*k)?,
            GenSymbol::Delta(i, j) => self.delta(*i, *j)?,
            GenSymbol::DeltaSet(i, s) => self.delta_set(*i, s)?,
            GenSymbol::DeltaFull(s) => self.delta_full(*s)?,
        };
        if &canon != sym {
            return Err(Error::InvalidSymbol(format!("{sym} is not canonical (use {canon})")));
        }
        Ok(())
    }

    /// psi classes and one aggregated boundary symbol per distinct type.
    pub fn aggregated_generators(&self) -> Vec<GenSymbol> {
        match *self {
            Space::Full { m } => (2..=m / 2).map(GenSymbol::DeltaFull).collect(),
            Space::Sym { g, n } => {
                let mut out = vec![GenSymbol::PsiStar];
                out.extend((1..=n).map(GenSymbol::Psi));
                for i in 0..=g + 1 {
                    for j in 0..=n {
                        if let Ok(s) = self.delta(i, j) {
                            if s == GenSymbol::Delta(i, j) {
                                out.push(s);
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// psi classes and every distinct set-resolved boundary divisor.
    pub fn set_generators(&self) -> Result<Vec<GenSymbol>> {
        let (g, n) = self.gn()?;
        if n > MAX_SET_N {
            return invalid(format!("set-resolved enumeration limited to n <= {MAX_SET_N}"));
        }
        let mut out = vec![GenSymbol::PsiStar];
        out.extend((1..=n).map(GenSymbol::Psi));
        let mut deltas = std::collections::BTreeSet::new();
        for i in 0..=2 * g + 2 {
            for s in subsets(n) {
                if let Ok(sym) = self.delta_set(i, &s) {
                    deltas.insert(sym);
                }
            }
        }
        out.extend(deltas);
        Ok(out)
    }
}

/// All subsets of {1..n}, ordered by size then lexicographically.
pub fn subsets(n: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (0u64..(1u64 << n))
        .map(|mask| (1..=n).filter(|k| mask >> (k - 1) & 1 == 1).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Divisor class as a map from canonical generator symbols to coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivClass0 {
    pub space: Space,
    coeffs: BTreeMap<GenSymbol, Rat>,
}

impl DivClass0 {
    pub fn zero(space: Space) -> DivClass0 {
        DivClass0 { space, coeffs: BTreeMap::new() }
    }

    pub fn coeff(&self, sym: &GenSymbol) -> Rat {
        self.coeffs.get(sym).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<GenSymbol, Rat> {
        &self.coeffs
    }

    /// Adds `c` to the coefficient of `sym`, which must be canonical for the space.
    pub fn add_term(&mut self, sym: GenSymbol, c: &Rat) -> Result<()> {
        self.space.validate(&sym)?;
        let e = self.coeffs.entry(sym).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    /// Sets the coefficient of `sym`. Repeated terms of a printed sum that name the same divisor
    /// land here with equal values, so the divisor is counted once.
    pub fn put(&mut self, sym: GenSymbol, c: Rat) -> Result<()> {
        self.space.validate(&sym)?;
        if c.is_zero() {
            self.coeffs.remove(&sym);
        } else {
            self.coeffs.insert(sym, c);
        }
        Ok(())
    }

    fn same_space(&self, o: &DivClass0) -> Result<()> {
        if self.space != o.space {
            return invalid(format!("classes on different spaces {:?} and {:?}", self.space, o.space));
        }
        Ok(())
    }

    pub fn plus(&self, o: &DivClass0) -> Result<DivClass0> {
        self.same_space(o)?;
        let mut out = self.clone();
        for (s, c) in &o.coeffs {
            let e = out.coeffs.entry(s.clone()).or_default();
            *e += c;
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn minus(&self, o: &DivClass0) -> Result<DivClass0> {
        self.plus(&o.scaled(&Rat::int(-1)))
    }

    pub fn scaled(&self, c: &Rat) -> DivClass0 {
        let mut out = DivClass0::zero(self.space);
        if !c.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(s, v)| (s.clone(), v * c)).collect();
        }
        out
    }

    pub fn is_effective_rep(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn has_set_symbols(&self) -> bool {
        self.coeffs.keys().any(|s| matches!(s, GenSymbol::DeltaSet(..)))
    }
}

impl Serialize for DivClass0 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut keys = self.space.aggregated_generators();
        for k in self.coeffs.keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
        let coeffs: Vec<(String, String)> = keys.iter().map(|k| (k.to_string(), self.coeff(k).to_string())).collect();
        let mut m = s.serialize_map(None)?;
        match self.space {
            Space::Sym { g, n } => {
                m.serialize_entry("g", &g)?;
                m.serialize_entry("n", &n)?;
                m.serialize_entry("mode", "sym")?;
            }
            Space::Full { m: pts } => {
                m.serialize_entry("m", &pts)?;
                m.serialize_entry("mode", "full")?;
            }
        }
        m.serialize_entry("coeffs", &OrderedPairs(&coeffs))?;
        m.end()
    }
}

struct OrderedPairs<'a>(&'a [(String, String)]);

impl Serialize for OrderedPairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

fn r(n: i64) -> Rat {
    Rat::int(n)
}

/// Canonical class of the moduli space of m unordered points:
/// coefficient s(m-s)/(m-1) - 2 on `delta[s]`.
pub fn canonical_fully_symmetric(m: u32) -> Result<DivClass0> {
    let space = Space::full(m)?;
    let mut c = DivClass0::zero(space);
    let mm = m as i64;
    for s in 2..=m / 2 {
        let si = s as i64;
        c.put(space.delta_full(s)?, Rat::new(si * (mm - si), mm - 1) - r(2))?;
    }
    Ok(c)
}

/// Canonical class of the symmetrized space in four families `[0]+j`, `[1]+j`, `[2]+j`, `[s]+j`.
///
/// n = 0 is accepted; the formula then gives the class on the quotient by all 2g+2 points
/// with `delta[2]` the reduced boundary divisor.
pub fn canonical_symmetrized(g: u32, n: u32) -> Result<DivClass0> {
    let space = Space::sym(g, n)?;
    let (gi, ni) = (g as i64, n as i64);
    let m = 2 * gi + 2 + ni;
    let mut c = DivClass0::zero(space);
    for j in 2..=ni {
        c.put(space.delta(0, j as u32)?, Rat::new(j * (m - j), m - 1) - r(2))?;
    }
    for j in 1..=ni {
        c.put(space.delta(1, j as u32)?, Rat::new((j + 1) * (m - j - 1), m - 1) - r(2))?;
    }
    for j in 0..=ni {
        let v = Rat::new((j + 2) * (2 * gi + ni - j), 2 * (2 * gi + 1 + ni)) - Rat::new(3, 2);
        c.put(space.delta(2, j as u32)?, v)?;
    }
    for s in 3..=gi + 1 {
        for j in 0..=ni {
            c.put(space.delta(s as u32, j as u32)?, Rat::new((s + j) * (m - s - j), m - 1) - r(2))?;
        }
    }
    Ok(c)
}

pub fn branch_divisor(g: u32, n: u32, variant: Variant) -> Result<DivClass0> {
    let space = Space::sym(g, n)?;
    let mut c = DivClass0::zero(space);
    match variant {
        Variant::Unordered | Variant::OrderedComposed => {
            for p in 0..=g / 2 {
                for j in 1..n {
                    c.put(space.delta(2 * p + 1, j)?, Rat::one())?;
                }
            }
            if variant == Variant::OrderedComposed {
                for j in 0..=n {
                    c.put(space.delta(2, j)?, Rat::one())?;
                }
            }
        }
        Variant::Ordered => {
            if n > MAX_SET_N {
                return invalid(format!("set-resolved branch divisor limited to n <= {MAX_SET_N}"));
            }
            for s in subsets(n) {
                if !s.is_empty() && (s.len() as u32) < n {
                    for p in 0..=g / 2 {
                        c.put(space.delta_set(2 * p + 1, &s)?, Rat::one())?;
                    }
                }
                c.put(space.delta_set(2, &s)?, Rat::one())?;
            }
        }
    }
    Ok(c)
}

pub fn k_plus_half_branch(g: u32, n: u32, variant: Variant) -> Result<DivClass0> {
    canonical_symmetrized(g, n)?.plus(&branch_divisor(g, n, variant)?.scaled(&Rat::half()))
}

/// The coefficient 2i(2g+2-i)j(n-j) - i(i-1)(n-j)(n-j-1) - (2g+2-i)(2g+1-i)j(j-1).
pub fn keel_coeff(g: u32, n: u32, i: u32, j: u32) -> Result<Rat> {
    if i > 2 * g + 2 || j > n {
        return invalid(format!("keel coefficient index ({i},{j}) out of range"));
    }
    let (g, n, i, j) = (g as i128, n as i128, i as i128, j as i128);
    let b = 2 * g + 2;
    let v = 2 * i * (b - i) * j * (n - j) - i * (i - 1) * (n - j) * (n - j - 1) - (b - i) * (b - i - 1) * j * (j - 1);
    Ok(Rat::from_big(v.into()))
}

/// The numerically trivial class obtained by symmetrizing the four-point relation.
pub fn keel_trivial_class(g: u32, n: u32) -> Result<DivClass0> {
    if n < 2 {
        return invalid(format!("Keel relation needs n >= 2, got {n}"));
    }
    let space = Space::sym(g, n)?;
    let mut c = DivClass0::zero(space);
    for j in 2..=n {
        c.put(space.delta(0, j)?, keel_coeff(g, n, 0, j)?)?;
    }
    for j in 1..=n {
        c.put(space.delta(1, j)?, keel_coeff(g, n, 1, j)?)?;
    }
    for j in 0..=n {
        c.put(space.delta(2, j)?, keel_coeff(g, n, 2, j)? * Rat::half())?;
    }
    for i in 3..=g + 1 {
        for j in 0..=n {
            c.put(space.delta(i, j)?, keel_coeff(g, n, i, j)?)?;
        }
    }
    Ok(c)
}

/// `delta[2]+0` written through the other boundary symbols via the Keel relation.
pub fn keel_d(g: u32, n: u32) -> Result<DivClass0> {
    let mut t = keel_trivial_class(g, n)?;
    let d20 = t.space.delta(2, 0)?;
    t.put(d20, Rat::zero())?;
    let nn = (n as i64) * (n as i64 - 1);
    Ok(t.scaled(&Rat::new(1, nn)))
}

/// `c + t (D - delta[2]+0)`: a different representative of the same class.
pub fn substitute_delta20(c: &DivClass0, t: &Rat) -> Result<DivClass0> {
    let (g, n) = c.space.gn()?;
    let mut shift = keel_d(g, n)?;
    shift.add_term(c.space.delta(2, 0)?, &Rat::int(-1))?;
    c.plus(&shift.scaled(t))
}

/// Values of t for which `substitute_delta20(c, t)` has no negative coefficient, as a closed
/// interval with open ends encoded by `None`. Returns `None` when the set is empty.
pub fn keel_nonnegative_interval(c: &DivClass0) -> Result<Option<(Option<Rat>, Option<Rat>)>> {
    let (g, n) = c.space.gn()?;
    let mut shift = keel_d(g, n)?;
    shift.add_term(c.space.delta(2, 0)?, &Rat::int(-1))?;
    let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
    let mut syms: Vec<&GenSymbol> = c.coeffs().keys().collect();
    syms.extend(shift.coeffs().keys());
    for sym in syms {
        // coefficient a + t b must be >= 0
        let (a, b) = (c.coeff(sym), shift.coeff(sym));
        if b.is_zero() {
            if a.is_negative() {
                return Ok(None);
            }
            continue;
        }
        let root = -(&a / &b);
        if b.is_positive() {
            lo = Some(match lo {
                Some(l) if l >= root => l,
                _ => root,
            });
        } else {
            hi = Some(match hi {
                Some(h) if h <= root => h,
                _ => root,
            });
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return Ok(None);
        }
    }
    Ok(Some((lo, hi)))
}

/// A representative of the class of `c` with nonnegative coefficients along the Keel line,
/// taking the admissible t of least absolute value.
pub fn keel_nonnegative_representative(c: &DivClass0) -> Result<Option<(Rat, DivClass0)>> {
    let Some((lo, hi)) = keel_nonnegative_interval(c)? else {
        return Ok(None);
    };
    let zero = Rat::zero();
    let t = match (lo, hi) {
        (Some(l), _) if l > zero => l,
        (_, Some(h)) if h < zero => h,
        _ => zero,
    };
    let rep = substitute_delta20(c, &t)?;
    Ok(Some((t, rep)))
}
