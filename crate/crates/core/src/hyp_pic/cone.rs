use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::exact::{MPoly, Rat};
use crate::report::Report;

pub const PSI1: &str = "psi:1";
pub const PSI2: &str = "psi:2";
pub const DELTA12: &str = "delta0:{1,2}";

/// A class of which only a few coefficients are known; the rest ("+ ...") is an unknown tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialClass {
    pub g: u32,
    pub known: BTreeMap<String, Rat>,
    pub tail_unknown: bool,
}

impl PartialClass {
    pub fn get(&self, slot: &str) -> Result<Rat> {
        match self.known.get(slot) {
            Some(v) => Ok(v.clone()),
            None if self.tail_unknown => Err(Error::UnknownSlot(slot.to_string())),
            None => Ok(Rat::zero()),
        }
    }

    /// (ψ₁, ψ₂, δ_{0:{1,2}}).
    pub fn triple(&self) -> Result<(Rat, Rat, Rat)> {
        Ok((self.get(PSI1)?, self.get(PSI2)?, self.get(DELTA12)?))
    }

    pub fn from_triple(g: u32, c1: Rat, c2: Rat, cd: Rat) -> PartialClass {
        let known = [(PSI1, c1), (PSI2, c2), (DELTA12, cd)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        PartialClass { g, known, tail_unknown: true }
    }
}

impl Serialize for PartialClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("g", &self.g)?;
        let coeffs: BTreeMap<&str, String> = self.known.iter().map(|(k, v)| (k.as_str(), v.to_string())).collect();
        m.serialize_entry("coeffs", &coeffs)?;
        if self.tail_unknown {
            m.serialize_entry("tail", "unknown")?;
        }
        m.end()
    }
}

fn check(g: u32, k: i64) -> Result<()> {
    if g < 2 {
        return invalid(format!("g = {g} < 2"));
    }
    if k < 2 {
        return invalid(format!("k = {k} < 2"));
    }
    Ok(())
}

fn shared_delta(g: i64, k: &Rat) -> Rat {
    -(Rat::half() * (Rat::int(g) * k.pow(2 * g as u32) - k.pow(2 * g as u32) + Rat::int(2)) * Rat::int(g))
}

/// D̄_k on H̄_{g,2}: known ψ₁, ψ₂, δ_{0:{1,2}} coefficients.
pub fn dk_class(g: u32, k: i64) -> Result<PartialClass> {
    check(g, k)?;
    let (gi, kr) = (g as i64, Rat::int(k));
    let p = kr.pow(2 * g - 2);
    let c1 = Rat::half() * Rat::int((gi * k + 1) * (gi * k - k + 1)) * &p;
    let c2 = Rat::half() * Rat::int(1 - k) * &p;
    Ok(PartialClass::from_triple(g, c1, c2, shared_delta(gi, &kr)))
}

/// Ē_k on H̄_{g,2}: same δ coefficient as D̄_k.
pub fn ek_class(g: u32, k: i64) -> Result<PartialClass> {
    check(g, k)?;
    let (gi, kr) = (g as i64, Rat::int(k));
    let p = kr.pow(2 * g - 2);
    let c1 = Rat::half() * Rat::int((gi * k - 1) * (gi * k - k - 1)) * &p;
    let c2 = Rat::half() * Rat::int(k + 1) * &p;
    Ok(PartialClass::from_triple(g, c1, c2, shared_delta(gi, &kr)))
}

/// [F^t]·c with F^t·ψ₁ = 1, F^t·ψ₂ = 2g-1+t, F^t·δ_{0:{1,2}} = 1.
pub fn ft_pair(c: &PartialClass, t: &Rat) -> Result<Rat> {
    let (c1, c2, cd) = c.triple()?;
    Ok(c1 + (Rat::int(2 * c.g as i64 - 1) + t) * c2 + cd)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    D,
    E,
}

/// Printed closed forms: (k^{2g-2}-1)g + t·½(1-k)k^{2g-2} for D̄_k, (k^{2g-2}-1)g + t·½k^{2g-2}(k+1) for Ē_k.
pub fn ft_closed_form(family: Family, g: u32, k: i64, t: &Rat) -> Rat {
    let p = Rat::int(k).pow(2 * g - 2);
    let base = (&p - Rat::one()) * Rat::int(g as i64);
    let slope = match family {
        Family::D => Rat::half() * Rat::int(1 - k) * &p,
        Family::E => Rat::half() * Rat::int(k + 1) * &p,
    };
    base + t * slope
}

/// ft_pair as a polynomial in t against the closed form, for both families at fixed (g, k).
pub fn ft_symbolic_check(g: u32, k: i64) -> Result<Report> {
    let mut rep = Report::new(format!("F^t pairing as a polynomial in t, g={g} k={k}"));
    let t = MPoly::var("t");
    let p = Rat::int(k).pow(2 * g - 2);
    let gi = g as i64;
    for (family, cls) in [(Family::D, dk_class(g, k)?), (Family::E, ek_class(g, k)?)] {
        let (c1, c2, cd) = cls.triple()?;
        let lhs = MPoly::constant(c1) + &(&MPoly::constant(Rat::int(2 * gi - 1)) + &t) * &MPoly::constant(c2) + MPoly::constant(cd);
        let slope = match family {
            Family::D => Rat::half() * Rat::int(1 - k) * &p,
            Family::E => Rat::half() * Rat::int(k + 1) * &p,
        };
        let rhs = MPoly::constant((&p - Rat::one()) * Rat::int(gi)) + &t * &MPoly::constant(slope);
        rep.check_eq(format!("{family:?}: F^t pairing"), lhs, rhs);
    }
    Ok(rep)
}

/// (2g-2)((4g-4)c₁c₂ + (c₁+c₂)² - c_δ²).
pub fn bd_pair(c: &PartialClass) -> Result<Rat> {
    let (c1, c2, cd) = c.triple()?;
    let g = Rat::int(c.g as i64);
    let two = Rat::int(2);
    let four = Rat::int(4);
    let s = &c1 + &c2;
    Ok((&two * &g - &two) * ((&four * &g - &four) * &c1 * &c2 + &s * &s - &cd * &cd))
}

/// The form on ((1-2g)a - b, a, b) equals -8a²(g-1)²g identically in (g, a, b).
pub fn bd_family_identity() -> Report {
    let (g, a, b) = (MPoly::var("g"), MPoly::var("a"), MPoly::var("b"));
    let one = MPoly::constant(1);
    let two = MPoly::constant(2);
    let four = MPoly::constant(4);
    let c1 = &(&one - &(&two * &g)) * &a - b.clone();
    let c2 = a.clone();
    let cd = b;
    let s = &c1 + &c2;
    let inner = &(&(&(&four * &g) - &four) * &c1) * &c2 + &s * &s - &cd * &cd;
    let lhs = &(&(&two * &g) - &two) * &inner;
    let gm1 = &g - &one;
    let rhs = &(&(&(&MPoly::constant(-8) * &a) * &a) * &(&gm1 * &gm1)) * &g;
    let mut rep = Report::new("BD form on the (1-2g)a-b, a, b family");
    rep.check_eq("-8a^2(g-1)^2 g", lhs, rhs);
    rep
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub g: u32,
    pub k: i64,
    pub t: Rat,
    pub d_class: PartialClass,
    pub e_class: PartialClass,
    pub ft_d: Rat,
    pub ft_e: Rat,
    pub bd_d: Rat,
    pub bd_e: Rat,
    pub report: Report,
}

pub fn cone_report(g: u32, k: i64, t: &Rat) -> Result<ConeReport> {
    let d = dk_class(g, k)?;
    let e = ek_class(g, k)?;
    let ft_d = ft_pair(&d, t)?;
    let ft_e = ft_pair(&e, t)?;
    let mut report = Report::new(format!("effective cone checks g={g} k={k} t={t}"));
    report.check_eq("F^t . D_k closed form", ft_d.clone(), ft_closed_form(Family::D, g, k, t));
    report.check_eq("F^t . E_k closed form", ft_e.clone(), ft_closed_form(Family::E, g, k, t));
    report.extend(ft_symbolic_check(g, k)?);
    report.extend(bd_family_identity());
    Ok(ConeReport { g, k, t: t.clone(), bd_d: bd_pair(&d)?, bd_e: bd_pair(&e)?, d_class: d, e_class: e, ft_d, ft_e, report })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extremality {
    pub g: u32,
    pub n: u32,
    pub diagonal: Rat,
    pub matrix: Vec<Vec<Rat>>,
    pub determinant: Rat,
    pub solution: Vec<Rat>,
}

/// The n-1 relations (2g-1)t_j + Σ_{i≠j} t_i = 0 on a nef summand of F, solved by exact elimination.
pub fn extremality_system(g: u32, n: u32) -> Result<Extremality> {
    if g < 2 {
        return invalid(format!("g = {g} < 2"));
    }
    if n < 3 {
        return invalid(format!("n = {n} < 3"));
    }
    let m = (n - 1) as usize;
    let diagonal = Rat::int(2 * g as i64 - 1);
    let matrix: Vec<Vec<Rat>> =
        (0..m).map(|r| (0..m).map(|c| if r == c { diagonal.clone() } else { Rat::one() }).collect()).collect();
    // augmented with the zero right-hand side
    let mut a: Vec<Vec<Rat>> = matrix.iter().map(|row| row.iter().cloned().chain([Rat::zero()]).collect()).collect();
    let mut det = Rat::one();
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            let (top, bottom) = a.split_at_mut(r);
            for (dst, src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= &(&f * src);
            }
        }
    }
    let mut x = vec![Rat::zero(); m];
    for r in (0..m).rev() {
        let mut s = a[r][m].clone();
        for c in r + 1..m {
            s -= &(&a[r][c] * &x[c]);
        }
        x[r] = s / &a[r][r];
    }
    Ok(Extremality { g, n, diagonal, matrix, determinant: det, solution: x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn dk_triple_g2k2() {
        assert_eq!(dk_class(2, 2).unwrap().triple().unwrap(), (q(30, 1), q(-2, 1), q(-18, 1)));
        assert_eq!(ek_class(2, 2).unwrap().get(PSI2).unwrap(), q(6, 1));
        assert!(dk_class(2, 1).is_err());
    }

    #[test]
    fn ft_examples() {
        assert_eq!(ft_pair(&dk_class(2, 2).unwrap(), &Rat::zero()).unwrap(), q(6, 1));
        assert_eq!(ft_pair(&dk_class(2, 10).unwrap(), &Rat::one()).unwrap(), q(-252, 1));
        assert_eq!(ft_pair(&ek_class(2, 10).unwrap(), &Rat::int(-1)).unwrap(), q(-352, 1));
    }

    #[test]
    fn bd_examples() {
        let c = PartialClass::from_triple(2, Rat::int(-3), Rat::one(), Rat::zero());
        assert_eq!(bd_pair(&c).unwrap(), q(-16, 1));
        let z = PartialClass::from_triple(2, Rat::zero(), Rat::zero(), Rat::zero());
        assert!(bd_pair(&z).unwrap().is_zero());
        assert!(bd_family_identity().passed());
    }

    #[test]
    fn missing_slot_errors() {
        let mut c = dk_class(3, 4).unwrap();
        c.known.remove(DELTA12);
        assert!(matches!(ft_pair(&c, &Rat::zero()), Err(Error::UnknownSlot(_))));
    }

    #[test]
    fn extremality_small() {
        let e = extremality_system(2, 3).unwrap();
        assert_eq!(e.determinant, q(8, 1));
        assert!(e.solution.iter().all(|x| x.is_zero()));
        let e = extremality_system(2, 4).unwrap();
        assert_eq!(e.determinant, q(20, 1));
        assert!(extremality_system(2, 2).is_err());
    }
}
