//! Reid–Tai ages of cyclic automorphisms of pointed rational curves, acting on the space of
//! quadratic differentials with simple poles at the markings, and of automorphisms of admissible
//! double covers.

mod cover;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::Rat;

pub use cover::{cover_age, cover_total_age, is_noncanonical_cover, Component, CoverAge, CoverAutGraph, Node, NodeStatus, NodeType};

/// Position of the fixed points of z ↦ ηz among the markings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    /// no ordered point, no fixed unordered point
    A1,
    /// no ordered point, one or two fixed unordered points
    A2,
    /// one ordered point, at 0
    B,
    /// two ordered points, at 0 and ∞
    C,
}

impl Case {
    pub fn s(self) -> u32 {
        match self {
            Case::A1 | Case::A2 => 0,
            Case::B => 1,
            Case::C => 2,
        }
    }

    pub const ALL: [Case; 4] = [Case::A1, Case::A2, Case::B, Case::C];
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Case> {
        match s {
            "A1" => Ok(Case::A1),
            "A2" => Ok(Case::A2),
            "B" => Ok(Case::B),
            "C" => Ok(Case::C),
            _ => Err(Error::Parse(format!("unknown case {s:?}, expected A1, A2, B or C"))),
        }
    }
}

/// z ↦ ηz of order ℓ on P¹ with r unordered and s ordered markings; the unordered points are
/// δ fixed points plus a free orbits of size ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CyclicAction {
    pub case: Case,
    pub r: u32,
    pub s: u32,
    pub ell: u32,
    pub delta: u32,
    pub a: u32,
}

impl CyclicAction {
    pub fn new(case: Case, r: u32, s: u32, ell: u32, delta: u32) -> Result<CyclicAction> {
        if ell < 2 {
            return invalid(format!("order ell = {ell} < 2"));
        }
        if s != case.s() {
            return invalid(format!("case {case} has s = {}, got s = {s}", case.s()));
        }
        let ok_delta = match case {
            Case::A1 | Case::C => delta == 0,
            Case::A2 => (1..=2).contains(&delta),
            Case::B => delta <= 1,
        };
        if !ok_delta {
            return invalid(format!("case {case} does not allow {delta} fixed unordered points"));
        }
        if r < delta || !(r - delta).is_multiple_of(ell) {
            return invalid(format!("r = {r} is not {ell}*a + {delta}"));
        }
        if r + s < 4 {
            return invalid(format!("r + s = {} < 4, the pointed curve is rigid", r + s));
        }
        Ok(CyclicAction { case, r, s, ell, delta, a: (r - delta) / ell })
    }

    pub fn dim(&self) -> u32 {
        self.r + self.s - 3
    }

    /// Exponent of the pole factor Z^m of the basic differential.
    fn m(&self) -> u32 {
        if self.case == Case::A1 {
            0
        } else {
            1
        }
    }
}

/// Exponents (i, i+1, …, i+r+s-4) mod ℓ, with i = 2 in case A1 and 1 otherwise.
pub fn diag_exponents(act: &CyclicAction) -> Vec<u32> {
    let i = if act.case == Case::A1 { 2 } else { 1 };
    (0..act.dim()).map(|k| (i + k) % act.ell).collect()
}

/// Oracle: weights of the basis ω·Z^j, ω = dZ²/(Z^m ∏(Z^ℓ - t_j)), under Z ↦ ηZ, with the
/// basis size read off from pole orders at 0 and ∞.
pub fn bruteforce_exponents(act: &CyclicAction) -> Result<Vec<u32>> {
    let (ell, m, a) = (act.ell as i64, act.m() as i64, act.a as i64);
    // expanded denominator: monomials Z^{m + ℓk}, k = 0..a; all must scale alike
    let degs: Vec<i64> = (0..=a).map(|k| (m + ell * k).rem_euclid(ell)).collect();
    if degs.iter().any(|d| *d != degs[0]) {
        return Err(Error::Hypothesis("denominator is not an eigenvector".into()));
    }
    let den = degs[0];
    let inf_marked = matches!((act.case, act.delta), (Case::A2, 2) | (Case::B, 1) | (Case::C, _));
    let zero_marked = m == 1;
    // ω Z^j near ∞ has order (m + ℓa) - j - 4; near 0 order j - m
    let allowed_inf = if inf_marked { -1 } else { 0 };
    let mut out = Vec::new();
    for j in 0..=(m + ell * a) {
        let at_inf = m + ell * a - j - 4;
        let at_zero = j - m;
        if at_inf < allowed_inf || at_zero < if zero_marked { -1 } else { 0 } {
            continue;
        }
        out.push((2 + j - den).rem_euclid(ell) as u32);
    }
    if out.len() != act.dim() as usize {
        return Err(Error::Hypothesis(format!("basis has {} elements, expected {}", out.len(), act.dim())));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    QrI,
    QrIi,
    QrIii,
    QrIv,
    #[serde(rename = "exception_3_4")]
    Exception34,
    CanonicalGe1,
    Trivial,
    /// not covered by the clause list; never produced on the enumerated range
    Unlisted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QrPower {
    pub k: u32,
    pub clause: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgeResult {
    pub action: CyclicAction,
    #[serde(serialize_with = "ser_exponents")]
    pub exponents: (Vec<u32>, u32),
    pub age: Rat,
    pub is_quasi_reflection: bool,
    pub modified_age: Rat,
    pub classification: Classification,
    /// smallest power that is a quasi-reflection, when h itself is not one
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qr_power: Option<QrPower>,
    /// no power of h is a quasi-reflection; modified_age is then the plain age
    pub no_qr_power: bool,
}

fn ser_exponents<S: serde::Serializer>(e: &(Vec<u32>, u32), s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<String> = e.0.iter().map(|x| Rat::new(*x, e.1).to_string()).collect();
    v.serialize(s)
}

fn age_of(exps: &[u32], ell: u32) -> Rat {
    exps.iter().map(|e| Rat::new(*e, ell)).sum()
}

fn nonzero(exps: &[u32]) -> usize {
    exps.iter().filter(|e| **e != 0).count()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Which quasi-reflection clause holds, taking the orbit descriptions as part of each clause.
pub fn qr_clause(act: &CyclicAction) -> Option<Classification> {
    let trivial = diag_exponents(act).iter().all(|e| *e == 0);
    let (r, s, ell) = (act.r, act.s, act.ell);
    if r + s == 4 && !trivial {
        Some(Classification::QrI)
    } else if s == 0 && r == 5 && ell == 2 && act.delta >= 1 {
        Some(Classification::QrIi)
    } else if s == 0 && r == 6 && ell == 2 && act.delta == 0 {
        Some(Classification::QrIii)
    } else if s == 1 && r == 4 && ell == 2 && act.delta == 0 {
        Some(Classification::QrIv)
    } else {
        None
    }
}

fn is_listed_exception(act: &CyclicAction) -> bool {
    (act.case == Case::A2 && act.r == 5 && act.ell == 4 && act.delta == 1)
        || (act.case == Case::B && act.r == 4 && act.ell == 4 && act.delta == 0)
}

pub fn classify(act: &CyclicAction) -> AgeResult {
    let exps = diag_exponents(act);
    let ell = act.ell;
    let age = age_of(&exps, ell);
    let nz = nonzero(&exps);
    let is_qr = nz == 1;
    let classification = if nz == 0 {
        Classification::Trivial
    } else if is_qr {
        qr_clause(act).unwrap_or(Classification::Unlisted)
    } else if age >= Rat::one() {
        Classification::CanonicalGe1
    } else if age == Rat::new(3, 4) && is_listed_exception(act) {
        Classification::Exception34
    } else {
        Classification::Unlisted
    };
    // order of h on the deformation space
    let m = exps.iter().fold(ell, |acc, e| gcd(acc, *e));
    let m = if nz == 0 { 1 } else { ell / m };
    let mut qr_power = None;
    let mut modified_age = age.clone();
    let mut no_qr_power = false;
    if nz > 0 {
        let k = (1..m).find(|k| {
            let p: Vec<u32> = exps.iter().map(|e| e * k % ell).collect();
            nonzero(&p) == 1
        });
        match k {
            Some(k) => {
                let pos = exps.iter().position(|e| e * k % ell != 0).unwrap_or(0);
                let r1 = Rat::new(exps[pos], ell);
                modified_age = &age + Rat::int((m / k) as i64) * r1;
                if k > 1 {
                    // h^k is z ↦ η^k z, of order ℓ/gcd(k,ℓ), on the same markings
                    let ell_k = ell / gcd(k, ell);
                    let clause = CyclicAction::new(act.case, act.r, act.s, ell_k, act.delta)
                        .ok()
                        .and_then(|p| qr_clause(&p))
                        .unwrap_or(Classification::Unlisted);
                    qr_power = Some(QrPower { k, clause });
                }
            }
            None => no_qr_power = true,
        }
    }
    AgeResult {
        action: *act,
        exponents: (exps, ell),
        age,
        is_quasi_reflection: is_qr,
        modified_age,
        classification,
        qr_power,
        no_qr_power,
    }
}

/// Every valid action with 2 ≤ ℓ ≤ max_ell and r ≤ max_r.
pub fn enumerate_actions(max_ell: u32, max_r: u32) -> Vec<CyclicAction> {
    let mut out = Vec::new();
    for ell in 2..=max_ell {
        for case in Case::ALL {
            for delta in 0..=2 {
                for a in 0..=max_r / ell {
                    let r = ell * a + delta;
                    if r > max_r {
                        continue;
                    }
                    if let Ok(act) = CyclicAction::new(case, r, case.s(), ell, delta) {
                        out.push(act);
                    }
                }
            }
        }
    }
    out
}
