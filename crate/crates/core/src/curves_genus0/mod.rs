//! The curves B_{i,S}, their pairing with divisor classes, and Kodaira-dimension certificates.
//!
//! Table entries on the two boundary divisors adjacent to B_{i,S} use the conjugation-symmetric
//! factor: 2 for the ramified side `[2]` or `[2g]`, 1 otherwise. This is the form under which
//! the splitting identity and orthogonality to the Keel relation hold.

mod cert;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::Rat;
use crate::pic_genus0::{keel_trivial_class, subsets, DivClass0, GenSymbol, Space, MAX_SET_N};
use crate::report::Report;

pub use cert::{
    bigness_certificate, kodaira_report, lower_bound_certificate, upper_bound_certificate, Bound, CertKind,
    Certificate, Evidence, KodSpace,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BCurve {
    pub g: u32,
    pub n: u32,
    pub i: u32,
    pub s: Vec<u32>,
}

impl fmt::Display for BCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.s.iter().map(|x| x.to_string()).collect();
        write!(f, "B[{}]+{{{}}}", self.i, body.join(","))
    }
}

impl BCurve {
    pub fn new(g: u32, n: u32, i: u32, s: &[u32]) -> Result<BCurve> {
        Space::sym(g, n)?;
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.iter().any(|&x| x == 0 || x > n) {
            return invalid(format!("subset {s:?} of 1..{n}"));
        }
        let k = s.len() as u32;
        let zero = i == 0 && k == 0;
        if !zero && !(i <= 2 * g + 1 && i + k >= 2 && i + k < 2 * g + n) {
            return invalid(format!("B[{i}]+{s:?} outside the table at (g,n)=({g},{n})"));
        }
        Ok(BCurve { g, n, i, s })
    }

    pub fn b0(g: u32, n: u32) -> Result<BCurve> {
        BCurve::new(g, n, 0, &[])
    }

    pub fn space(&self) -> Space {
        Space::Sym { g: self.g, n: self.n }
    }

    pub fn complement(&self) -> Vec<u32> {
        (1..=self.n).filter(|x| !self.s.contains(x)).collect()
    }

    /// Every curve of the table, ordered by i, then |S|, then S.
    pub fn all(g: u32, n: u32) -> Result<Vec<BCurve>> {
        if n > MAX_SET_N {
            return invalid(format!("set-resolved enumeration limited to n <= {MAX_SET_N}"));
        }
        let subs = subsets(n);
        let mut out = vec![BCurve::b0(g, n)?];
        for i in 0..=2 * g + 1 {
            for s in &subs {
                if let Ok(b) = BCurve::new(g, n, i, s) {
                    if !(i == 0 && s.is_empty()) {
                        out.push(b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// One curve per (i, |S|), with S = {1..s}. Enough for classes symmetric in the ordered points.
    pub fn representatives(g: u32, n: u32) -> Result<Vec<BCurve>> {
        let mut out = vec![BCurve::b0(g, n)?];
        for i in 0..=2 * g + 1 {
            for k in 0..=n {
                let s: Vec<u32> = (1..=k).collect();
                if let Ok(b) = BCurve::new(g, n, i, &s) {
                    if !(i == 0 && k == 0) {
                        out.push(b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Nonzero intersection numbers with psi classes and set-resolved boundary divisors.
    pub fn rows(&self) -> Result<BTreeMap<GenSymbol, Rat>> {
        let (g, n, i) = (self.g as i64, self.n, self.i);
        let sp = self.space();
        let mut rows: BTreeMap<GenSymbol, Rat> = BTreeMap::new();
        let mut add = |sym: GenSymbol, v: i64| {
            *rows.entry(sym).or_default() += Rat::int(v);
        };
        let d20 = sp.delta_set(2, &[])?;
        let comp = self.complement();
        if i == 0 && self.s.is_empty() {
            add(d20, 2 * (2 * g + 1));
            for j in 1..=n {
                add(sp.delta_set(1, &[j])?, 1);
                add(GenSymbol::Psi(j), 1);
            }
            add(GenSymbol::PsiStar, 4 * g + n as i64);
        } else {
            let full = comp.is_empty();
            let ii = i as i64;
            let total = if ii == 2 * g - 1 && full {
                6
            } else if i == 2 && self.s.is_empty() {
                2 * (2 * g - 2)
            } else {
                2 * (2 * g + 1 - ii)
            };
            add(d20.clone(), total);
            let ramified = |x: i64| x == 2 || x == 2 * g;
            let own = sp.delta_set(i, &self.s)?;
            if own != d20 {
                add(own, if ramified(ii) { -2 } else { -1 });
            }
            let next = sp.delta_set(i + 1, &self.s)?;
            if next != d20 {
                add(next, if ramified(ii + 1) { 2 } else { 1 });
            }
            for &j in &comp {
                add(sp.delta_set(1, &[j])?, 1);
                add(GenSymbol::Psi(j), 1);
            }
            add(GenSymbol::PsiStar, 2 * (2 * g - ii) + 1 + comp.len() as i64);
        }
        rows.retain(|_, v| !v.is_zero());
        Ok(rows)
    }
}

/// Intersection numbers of a curve, with boundary rows also summed by aggregated type.
struct Rows {
    set: BTreeMap<GenSymbol, Rat>,
    agg: BTreeMap<GenSymbol, Rat>,
}

impl Rows {
    fn of(b: &BCurve) -> Result<Rows> {
        let set = b.rows()?;
        let sp = b.space();
        let mut agg: BTreeMap<GenSymbol, Rat> = BTreeMap::new();
        for (sym, v) in &set {
            if let Some(a) = sp.agg_of(sym) {
                *agg.entry(a).or_default() += v;
            }
        }
        Ok(Rows { set, agg })
    }

    fn value(&self, sym: &GenSymbol) -> Result<Rat> {
        Ok(match sym {
            GenSymbol::Delta(..) => self.agg.get(sym).cloned().unwrap_or_default(),
            GenSymbol::DeltaFull(_) => return invalid("fully symmetric classes do not pair with B curves"),
            _ => self.set.get(sym).cloned().unwrap_or_default(),
        })
    }

    /// Sums over the (few) nonzero rows rather than over the class.
    fn pair(&self, d: &DivClass0) -> Result<Rat> {
        if matches!(d.space, Space::Full { .. }) {
            return invalid("fully symmetric classes do not pair with B curves");
        }
        let coeffs = d.coeffs();
        let mut acc = Rat::zero();
        for (sym, v) in self.set.iter().chain(&self.agg) {
            if let Some(c) = coeffs.get(sym) {
                acc += v * c;
            }
        }
        Ok(acc)
    }
}

/// Intersection number B · D, linear in D.
pub fn pair(b: &BCurve, d: &DivClass0) -> Result<Rat> {
    if d.space != b.space() {
        return invalid(format!("curve on {:?}, class on {:?}", b.space(), d.space));
    }
    Rows::of(b)?.pair(d)
}

/// Intersection of B with a single generator symbol.
pub fn pair_symbol(b: &BCurve, sym: &GenSymbol) -> Result<Rat> {
    b.space().validate(sym)?;
    Rows::of(b)?.value(sym)
}

/// Checks B_{0,∅} = B_{i,S} + B_{2g+1-i,S^c} against every generator.
pub fn splitting_check(g: u32, n: u32, i: u32, s: &[u32]) -> Result<Report> {
    let left = BCurve::new(g, n, i, s)?;
    if 2 * g + 1 < i {
        return invalid(format!("no partner curve for i = {i}"));
    }
    let right = BCurve::new(g, n, 2 * g + 1 - i, &left.complement())?;
    let whole = BCurve::b0(g, n)?;
    let (rl, rr, rw) = (Rows::of(&left)?, Rows::of(&right)?, Rows::of(&whole)?);
    let sp = Space::Sym { g, n };
    let mut syms = sp.set_generators()?;
    syms.extend(sp.aggregated_generators().into_iter().filter(|s| matches!(s, GenSymbol::Delta(..))));
    let mut rep = Report::new(format!("splitting {whole} = {left} + {right}"));
    for sym in syms {
        let (a, b, w) = (rl.value(&sym)?, rr.value(&sym)?, rw.value(&sym)?);
        let ok = &a + &b == w;
        rep.push(format!("{sym}"), format!("{a} + {b}"), w, ok);
    }
    Ok(rep)
}

/// Pairs every curve of the table with the Keel trivial class.
pub fn keel_orthogonality(g: u32, n: u32) -> Result<Report> {
    let t = keel_trivial_class(g, n)?;
    let mut rep = Report::new(format!("Keel relation against all B curves at (g,n)=({g},{n})"));
    for b in BCurve::all(g, n)? {
        rep.check_eq(b.to_string(), pair(&b, &t)?, Rat::zero());
    }
    Ok(rep)
}

/// One subtraction step of the rigid reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub curve: String,
    pub divisor: String,
    pub multiple: Rat,
}

/// Curves tried by the reduction and the divisor each one covers.
///
/// Classes carrying set-resolved symbols use the full table; symmetric classes use one
/// representative per (i, |S|) and the aggregated divisor of that type.
fn reduction_pairs(d: &DivClass0) -> Result<Vec<(BCurve, GenSymbol)>> {
    let (g, n) = d.space.gn()?;
    let sp = d.space;
    let curves = if d.has_set_symbols() { BCurve::all(g, n)? } else { BCurve::representatives(g, n)? };
    let mut out = Vec::new();
    for b in curves {
        if b.i == 0 && b.s.is_empty() {
            continue;
        }
        let sym = sp.delta_set(b.i, &b.s)?;
        let sym = if d.has_set_symbols() { sym } else { sp.agg_of(&sym).expect("boundary symbol") };
        out.push((b, sym));
    }
    Ok(out)
}

/// Removes fixed boundary components detected by covering curves with negative self-intersection.
///
/// Repeatedly takes the first B (by i, |S|, S) with B·D < 0 and B·E < 0 for its divisor E and
/// replaces D by D - (B·D / B·E) E.
pub fn rigid_reduce(d: &DivClass0) -> Result<(DivClass0, Vec<Reduction>)> {
    if !d.is_effective_rep() {
        return Err(Error::Hypothesis("rigid reduction needs nonnegative coefficients".into()));
    }
    let pairs = reduction_pairs(d)?;
    let rows: Vec<Rows> = pairs.iter().map(|(b, _)| Rows::of(b)).collect::<Result<_>>()?;
    // Pairings are kept up to date incrementally: subtracting m E lowers B·D by m B·E.
    let mut current: Vec<Rat> = rows.iter().map(|r| r.pair(d)).collect::<Result<_>>()?;
    let self_pair: Vec<Rat> = rows.iter().zip(&pairs).map(|(r, (_, e))| r.value(e)).collect::<Result<_>>()?;
    let cap = 10 * d.space.aggregated_generators().len().max(pairs.len());
    let mut cur = d.clone();
    let mut log = Vec::new();
    for _ in 0..=cap {
        let hit = (0..pairs.len()).find(|&k| self_pair[k].is_negative() && current[k].is_negative());
        let Some(k) = hit else {
            return Ok((cur, log));
        };
        let (b, e) = &pairs[k];
        let m = &current[k] / &self_pair[k];
        let mut sub = DivClass0::zero(cur.space);
        sub.put(e.clone(), m.clone())?;
        cur = cur.minus(&sub)?;
        for (p, r) in current.iter_mut().zip(&rows) {
            let be = r.value(e)?;
            if !be.is_zero() {
                *p -= &(&m * &be);
            }
        }
        log.push(Reduction { curve: b.to_string(), divisor: e.to_string(), multiple: m });
    }
    Err(Error::IterationCap(cap))
}

/// All B pairings of a class: the full table for set-resolved classes, representatives otherwise.
pub fn all_pairings(d: &DivClass0) -> Result<Vec<(BCurve, Rat)>> {
    let (g, n) = d.space.gn()?;
    let curves = if d.has_set_symbols() { BCurve::all(g, n)? } else { BCurve::representatives(g, n)? };
    curves.into_iter().map(|b| Ok((b.clone(), pair(&b, d)?))).collect()
}
