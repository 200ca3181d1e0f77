//! Divisor classes on the moduli stack of n-pointed hyperelliptic curves of genus g.
//!
//! Generators: ψ_k, η_irr, η_{i:j} for 1 ≤ i ≤ ⌊(g-1)/2⌋, δ_{i:j} for 1 ≤ i ≤ ⌊g/2⌋ and δ_{0:j}
//! for j ≥ 2. The `j` index aggregates all marking sets of that size. λ and δ_irr are never stored,
//! they are expanded on construction. As on the genus 0 side, one coefficient per distinct divisor:
//! when the two sides of a node have the same genus, `j` and `n-j` label the same divisor and the
//! smaller one is canonical.

mod cone;

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::exact::Rat;
use crate::pic_genus0::{canonical_fully_symmetric, DivClass0, GenSymbol, Space};
use crate::report::Report;

pub use cone::{
    bd_family_identity, bd_pair, cone_report, dk_class, ek_class, extremality_system, ft_closed_form,
    ft_pair, ft_symbolic_check, ConeReport, Extremality, Family, PartialClass, DELTA12, PSI1, PSI2,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HypSym {
    Psi(u32),
    EtaIrr,
    Eta(u32, u32),
    /// `Delta(0, j)` is δ_{0:j}, rational tails with j markings.
    Delta(u32, u32),
}

impl fmt::Display for HypSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypSym::Psi(k) => write!(f, "psi:{k}"),
            HypSym::EtaIrr => write!(f, "eta_irr"),
            HypSym::Eta(i, j) => write!(f, "eta[{i}]+{j}"),
            HypSym::Delta(i, j) => write!(f, "delta[{i}]+{j}"),
        }
    }
}

fn check_g(g: u32) -> Result<()> {
    if g < 2 {
        return invalid(format!("g = {g} < 2"));
    }
    Ok(())
}

/// Canonical symbol for the divisor, or an error if it is not a generator on (g, n).
pub fn canonical_symbol(g: u32, n: u32, sym: &HypSym) -> Result<HypSym> {
    let bad = || Err(Error::InvalidSymbol(format!("{sym} on (g,n)=({g},{n})")));
    match *sym {
        HypSym::Psi(k) if k >= 1 && k <= n => Ok(sym.clone()),
        HypSym::EtaIrr => Ok(HypSym::EtaIrr),
        HypSym::Eta(i, j) if i >= 1 && 2 * i < g && j <= n => {
            let j = if 2 * i + 1 == g { j.min(n - j) } else { j };
            Ok(HypSym::Eta(i, j))
        }
        HypSym::Delta(0, j) if j >= 2 && j <= n => Ok(sym.clone()),
        HypSym::Delta(i, j) if i >= 1 && 2 * i <= g && j <= n => {
            let j = if 2 * i == g { j.min(n - j) } else { j };
            Ok(HypSym::Delta(i, j))
        }
        _ => bad(),
    }
}

/// All canonical generators on (g, n), in a fixed order.
pub fn generators(g: u32, n: u32) -> Vec<HypSym> {
    let mut out: Vec<HypSym> = (1..=n).map(HypSym::Psi).collect();
    out.push(HypSym::EtaIrr);
    for i in 1..=(g.saturating_sub(1)) / 2 {
        let top = if 2 * i + 1 == g { n / 2 } else { n };
        out.extend((0..=top).map(|j| HypSym::Eta(i, j)));
    }
    out.extend((2..=n).map(|j| HypSym::Delta(0, j)));
    for i in 1..=g / 2 {
        let top = if 2 * i == g { n / 2 } else { n };
        out.extend((0..=top).map(|j| HypSym::Delta(i, j)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypDivClass {
    pub g: u32,
    pub n: u32,
    coeffs: BTreeMap<HypSym, Rat>,
}

impl HypDivClass {
    pub fn zero(g: u32, n: u32) -> Result<HypDivClass> {
        check_g(g)?;
        Ok(HypDivClass { g, n, coeffs: BTreeMap::new() })
    }

    pub fn coeff(&self, sym: &HypSym) -> Result<Rat> {
        let s = canonical_symbol(self.g, self.n, sym)?;
        Ok(self.coeffs.get(&s).cloned().unwrap_or_default())
    }

    pub fn coeffs(&self) -> &BTreeMap<HypSym, Rat> {
        &self.coeffs
    }

    /// Sets the coefficient of a divisor (conjugate labels land on the same entry).
    pub fn put(&mut self, sym: HypSym, c: Rat) -> Result<()> {
        let s = canonical_symbol(self.g, self.n, &sym)?;
        if c.is_zero() {
            self.coeffs.remove(&s);
        } else {
            self.coeffs.insert(s, c);
        }
        Ok(())
    }

    pub fn add_term(&mut self, sym: HypSym, c: &Rat) -> Result<()> {
        let s = canonical_symbol(self.g, self.n, &sym)?;
        let e = self.coeffs.entry(s.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&s);
        }
        Ok(())
    }

    pub fn plus(&self, o: &HypDivClass) -> Result<HypDivClass> {
        if (self.g, self.n) != (o.g, o.n) {
            return invalid(format!("classes on (g,n)=({},{}) and ({},{})", self.g, self.n, o.g, o.n));
        }
        let mut out = self.clone();
        for (s, c) in &o.coeffs {
            out.add_term(s.clone(), c)?;
        }
        Ok(out)
    }

    pub fn scaled(&self, c: &Rat) -> HypDivClass {
        let mut out = HypDivClass { g: self.g, n: self.n, coeffs: BTreeMap::new() };
        if !c.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(s, v)| (s.clone(), v * c)).collect();
        }
        out
    }

    pub fn minus(&self, o: &HypDivClass) -> Result<HypDivClass> {
        self.plus(&o.scaled(&Rat::int(-1)))
    }
}

impl Serialize for HypDivClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("g", &self.g)?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("coeffs", &Coeffs(self))?;
        m.end()
    }
}

struct Coeffs<'a>(&'a HypDivClass);

impl Serialize for Coeffs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let c = self.0;
        let gens = generators(c.g, c.n);
        let mut m = s.serialize_map(Some(gens.len()))?;
        for k in &gens {
            let v = c.coeffs.get(k).cloned().unwrap_or_default();
            m.serialize_entry(&k.to_string(), &v.to_string())?;
        }
        m.end()
    }
}

/// λ in terms of the generators: (8g+4)λ = g η_irr + 2ΣΣ (i+1)(g-i) η_{i:S} + 4ΣΣ i(g-i) δ_{i:S}.
pub fn lambda_relation(g: u32, n: u32) -> Result<HypDivClass> {
    let mut c = HypDivClass::zero(g, n)?;
    let gi = g as i64;
    let den = 8 * gi + 4;
    c.put(HypSym::EtaIrr, Rat::new(gi, den))?;
    for i in 1..=(g - 1) / 2 {
        let ii = i as i64;
        for j in 0..=n {
            c.put(HypSym::Eta(i, j), Rat::new(2 * (ii + 1) * (gi - ii), den))?;
        }
    }
    for i in 1..=g / 2 {
        let ii = i as i64;
        for j in 0..=n {
            c.put(HypSym::Delta(i, j), Rat::new(4 * ii * (gi - ii), den))?;
        }
    }
    Ok(c)
}

/// δ_irr = η_irr + 2 Σ η_{i:S}.
pub fn delta_irr_expand(g: u32, n: u32) -> Result<HypDivClass> {
    let mut c = HypDivClass::zero(g, n)?;
    c.put(HypSym::EtaIrr, Rat::one())?;
    for i in 1..=(g - 1) / 2 {
        for j in 0..=n {
            c.put(HypSym::Eta(i, j), Rat::int(2))?;
        }
    }
    Ok(c)
}

/// Pullback along H̄_g → M̄_{0,[2g+2]}: δ_[2] ↦ ½η_irr, δ_[2i+2] ↦ η_i, δ_[2i+1] ↦ 2δ_i.
///
/// δ_i here is half the pullback of δ_i from M̄_g, a general point having an extra involution.
pub fn alpha_pullback(c: &DivClass0) -> Result<HypDivClass> {
    let m = match c.space {
        Space::Full { m } => m,
        _ => return invalid("alpha pullback needs a class on the fully symmetric space"),
    };
    if m % 2 == 1 || m < 6 {
        return invalid(format!("m = {m} is not 2g+2 with g >= 2"));
    }
    let g = (m - 2) / 2;
    let mut out = HypDivClass::zero(g, 0)?;
    for (sym, v) in c.coeffs() {
        let s = match sym {
            GenSymbol::DeltaFull(s) => *s,
            other => return Err(Error::InvalidSymbol(format!("{other} in alpha pullback"))),
        };
        match s {
            2 => out.add_term(HypSym::EtaIrr, &(v * Rat::half()))?,
            s if s % 2 == 0 => out.add_term(HypSym::Eta((s - 2) / 2, 0), v)?,
            s => out.add_term(HypSym::Delta((s - 1) / 2, 0), &(v * Rat::int(2)))?,
        }
    }
    Ok(out)
}

fn eta_coeff(g: i64, i: i64) -> Rat {
    Rat::int(2) * (Rat::new((i + 1) * (2 * g - 2 * i), 2 * g + 1) - Rat::one())
}

fn delta_core(g: i64, i: i64) -> Rat {
    Rat::new(2 * (2 * i + 1) * (2 * g - 2 * i + 1), 2 * g + 1)
}

fn eta_irr_coeff(g: i64) -> Rat {
    -(Rat::half() + Rat::new(1, 2 * g + 1))
}

/// Canonical class of the coarse space H̄_g, as displayed.
pub fn canonical_hg(g: u32) -> Result<HypDivClass> {
    let mut c = HypDivClass::zero(g, 0)?;
    let gi = g as i64;
    c.put(HypSym::EtaIrr, eta_irr_coeff(gi))?;
    for i in 1..=(g - 1) / 2 {
        c.put(HypSym::Eta(i, 0), eta_coeff(gi, i as i64))?;
    }
    for i in 1..=g / 2 {
        c.put(HypSym::Delta(i, 0), delta_core(gi, i as i64) - Rat::int(4))?;
    }
    Ok(c)
}

/// Second route: pull back K of M̄_{0,[2g+2]} minus δ_[2], the order-two automorphism along δ_[2]
/// (δ_{0:[2]} is half of the KM boundary class there).
pub fn canonical_hg_via_pullback(g: u32) -> Result<HypDivClass> {
    check_g(g)?;
    let k = canonical_fully_symmetric(2 * g + 2)?;
    let mut d2 = DivClass0::zero(k.space);
    d2.put(k.space.delta_full(2)?, Rat::one())?;
    alpha_pullback(&k.minus(&d2)?)
}

/// Both routes for K_{H̄_g}, coefficient by coefficient.
pub fn canonical_hg_report(g: u32) -> Result<Report> {
    let a = canonical_hg(g)?;
    let b = canonical_hg_via_pullback(g)?;
    let mut rep = Report::new(format!("canonical class of Hbar_{g}, two routes"));
    for s in generators(g, 0) {
        rep.check_eq(s.to_string(), a.coeff(&s)?, b.coeff(&s)?);
    }
    Ok(rep)
}

/// Canonical class of H̄_{g,n}. The -1 on δ_{i:∅} sits on the j = 0 slot.
pub fn canonical_hgn(g: u32, n: u32) -> Result<HypDivClass> {
    if n < 1 {
        return invalid("canonical_hgn needs n >= 1; use canonical_hg");
    }
    let mut c = HypDivClass::zero(g, n)?;
    let gi = g as i64;
    for k in 1..=n {
        c.put(HypSym::Psi(k), Rat::one())?;
    }
    c.put(HypSym::EtaIrr, eta_irr_coeff(gi))?;
    for i in 1..=(g - 1) / 2 {
        for j in 0..=n {
            c.put(HypSym::Eta(i, j), eta_coeff(gi, i as i64))?;
        }
    }
    for i in 1..=g / 2 {
        let base = delta_core(gi, i as i64) - Rat::int(3);
        for j in 1..=n {
            c.put(HypSym::Delta(i, j), base.clone())?;
        }
        c.put(HypSym::Delta(i, 0), base - Rat::one())?;
    }
    for j in 2..=n {
        c.put(HypSym::Delta(0, j), Rat::int(-2))?;
    }
    Ok(c)
}

/// The four printed slots of the symmetric pullback D̄_n of Logan's divisor:
/// λ = -n/g, ψ = 1, δ_irr = 0, δ_{0:2} = -(2 + (g-1)/(n-1)). Everything else is unknown.
pub fn logan_dn(g: u32, n: u32) -> Result<PartialClass> {
    check_g(g)?;
    if n < g {
        return invalid(format!("symmetric pullback needs n >= g, got n = {n}"));
    }
    let (gi, ni) = (g as i64, n as i64);
    let mut known = BTreeMap::new();
    known.insert("lambda".to_string(), Rat::new(-ni, gi));
    known.insert("psi".to_string(), Rat::one());
    known.insert("delta_irr".to_string(), Rat::zero());
    known.insert("delta0:2".to_string(), -(Rat::int(2) + Rat::new(gi - 1, ni - 1)));
    Ok(PartialClass { g, known, tail_unknown: true })
}

/// η_irr coefficient of a class given by its λ, ψ, δ_irr slots. Only η_irr is determined this way:
/// the unknown higher boundary terms never touch it.
pub fn eta_irr_of(c: &PartialClass, n: u32) -> Result<Rat> {
    let lam = c.get("lambda")?;
    let dirr = c.get("delta_irr")?;
    let l = lambda_relation(c.g, n)?;
    let d = delta_irr_expand(c.g, n)?;
    Ok(lam * l.coeff(&HypSym::EtaIrr)? + dirr * d.coeff(&HypSym::EtaIrr)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoganResult {
    pub g: u32,
    pub n: u32,
    pub eps: Rat,
    pub e_irr: Rat,
    pub closed_form: Rat,
    pub report: Report,
}

/// e_irr for K = ε Σψ + (1-ε) D̄_n + E, computed from the η_irr slot and compared with
/// ((1-ε)n - (4g+6))/(8g+4).
pub fn logan_decomposition(g: u32, n: u32, eps: &Rat) -> Result<LoganResult> {
    if eps.is_negative() || *eps >= Rat::one() {
        return invalid(format!("eps = {eps} outside [0, 1)"));
    }
    let dn = logan_dn(g, n)?;
    let k = canonical_hgn(g, n)?;
    let one_m = Rat::one() - eps;
    let e_irr = k.coeff(&HypSym::EtaIrr)? - &one_m * eta_irr_of(&dn, n)?;
    let (gi, ni) = (g as i64, n as i64);
    let closed_form = (&one_m * Rat::int(ni) - Rat::int(4 * gi + 6)) / Rat::int(8 * gi + 4);
    let mut report = Report::new(format!("Logan decomposition g={g} n={n} eps={eps}"));
    report.check_eq("e_irr", e_irr.clone(), closed_form.clone());
    // ψ slot of E: 1 - ε - (1-ε)·1
    let e_psi = k.coeff(&HypSym::Psi(1))? - eps - &one_m * dn.get("psi")?;
    report.check_eq("e_psi", e_psi, Rat::zero());
    Ok(LoganResult { g, n, eps: eps.clone(), e_irr, closed_form, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn lambda_g2() {
        let l = lambda_relation(2, 3).unwrap();
        assert_eq!(l.coeff(&HypSym::EtaIrr).unwrap(), q(1, 10));
        assert_eq!(l.coeff(&HypSym::Delta(1, 2)).unwrap(), q(1, 5));
        assert!(l.coeff(&HypSym::Psi(1)).unwrap().is_zero());
    }

    #[test]
    fn delta_irr_terms() {
        assert_eq!(delta_irr_expand(2, 0).unwrap().coeffs().len(), 1);
        let d = delta_irr_expand(5, 0).unwrap();
        assert_eq!(d.coeff(&HypSym::Eta(2, 0)).unwrap(), q(2, 1));
        assert_eq!(d.coeffs().len(), 3);
    }

    #[test]
    fn canonical_values() {
        let k = canonical_hg(2).unwrap();
        assert_eq!(k.coeff(&HypSym::EtaIrr).unwrap(), q(-7, 10));
        assert_eq!(k.coeff(&HypSym::Delta(1, 0)).unwrap(), q(-2, 5));
        assert_eq!(canonical_hg(3).unwrap().coeff(&HypSym::Eta(1, 0)).unwrap(), q(2, 7));
        assert_eq!(canonical_hgn(2, 1).unwrap().coeff(&HypSym::EtaIrr).unwrap(), q(-7, 10));
    }

    #[test]
    fn pullback_examples() {
        let sp = Space::full(6).unwrap();
        let mut c = DivClass0::zero(sp);
        c.put(sp.delta_full(3).unwrap(), Rat::one()).unwrap();
        assert_eq!(alpha_pullback(&c).unwrap().coeff(&HypSym::Delta(1, 0)).unwrap(), q(2, 1));
        let sp = Space::full(8).unwrap();
        let mut c = DivClass0::zero(sp);
        c.put(sp.delta_full(4).unwrap(), Rat::one()).unwrap();
        assert_eq!(alpha_pullback(&c).unwrap().coeff(&HypSym::Eta(1, 0)).unwrap(), q(1, 1));
        assert!(alpha_pullback(&DivClass0::zero(sp)).unwrap().coeffs().is_empty());
        assert!(alpha_pullback(&DivClass0::zero(Space::full(7).unwrap())).is_err());
    }

    #[test]
    fn self_conjugate_slots_merge() {
        let mut c = HypDivClass::zero(2, 4).unwrap();
        c.put(HypSym::Delta(1, 3), Rat::one()).unwrap();
        assert_eq!(c.coeff(&HypSym::Delta(1, 1)).unwrap(), Rat::one());
        assert!(canonical_symbol(2, 4, &HypSym::Eta(1, 0)).is_err());
    }

    #[test]
    fn logan_examples() {
        assert_eq!(logan_decomposition(2, 15, &Rat::zero()).unwrap().e_irr, q(1, 20));
        assert_eq!(logan_decomposition(2, 14, &Rat::zero()).unwrap().e_irr, q(0, 1));
        assert_eq!(logan_decomposition(3, 19, &Rat::zero()).unwrap().e_irr, q(1, 28));
        assert!(logan_decomposition(3, 2, &Rat::zero()).is_err());
        assert!(logan_decomposition(3, 5, &Rat::one()).is_err());
    }

    #[test]
    fn unknown_slot_errors() {
        let d = logan_dn(2, 5).unwrap();
        assert!(matches!(d.get("delta[1]+0"), Err(Error::UnknownSlot(_))));
    }
}
