use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{k_plus_half_branch, keel_coeff, substitute_delta20, DivClass0, Space, Variant};
use crate::error::{invalid, Error, Result};
use crate::exact::Rat;

/// Coefficients of an effective decomposition on the index set
/// `[0]+j` (j = 2..n), `[1]+j` (j = 1..n), `[i]+j` (i = 2..g+1, j = 0..n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompResult {
    pub space: Space,
    pub variant: Variant,
    /// Multiple of `D - delta[2]+0` added to K + Br/2.
    pub t: Rat,
    pub d: BTreeMap<(u32, u32), Rat>,
    pub zeros: Vec<(u32, u32)>,
    pub strictly_positive: bool,
    pub class: DivClass0,
}

impl DecompResult {
    pub fn g(&self) -> u32 {
        self.space.gn().map(|x| x.0).unwrap_or(0)
    }

    pub fn n(&self) -> u32 {
        self.space.gn().map(|x| x.1).unwrap_or(0)
    }

    pub fn negatives(&self) -> Vec<(u32, u32)> {
        self.d.iter().filter(|(_, v)| v.is_negative()).map(|(k, _)| *k).collect()
    }

    /// Zero set asserted for this (g, n, variant), or `None` outside the claimed ranges.
    pub fn claimed_zeros(&self) -> Option<Vec<(u32, u32)>> {
        claimed_zeros(self.g(), self.n(), self.variant)
    }

    /// True iff the decomposition has no negative entry and exactly the claimed zero set.
    pub fn matches_claim(&self) -> Option<bool> {
        let claim = self.claimed_zeros()?;
        Some(self.negatives().is_empty() && self.zeros == claim)
    }
}

pub fn claimed_zeros(g: u32, n: u32, variant: Variant) -> Option<Vec<(u32, u32)>> {
    let three = vec![(1, 1), (2, 0), (2, 1)];
    match variant {
        Variant::Unordered if n == 4 * g + 6 => Some(three),
        Variant::Unordered if n > 4 * g + 6 => Some(vec![]),
        Variant::OrderedComposed if n == 4 => Some(three),
        Variant::OrderedComposed if n == 5 => Some(vec![]),
        _ => None,
    }
}

impl Serialize for DecompResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<(String, String)> =
            self.d.iter().map(|((i, j), v)| (format!("[{i}]+{j}"), v.to_string())).collect();
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("g", &self.g())?;
        m.serialize_entry("n", &self.n())?;
        m.serialize_entry("variant", self.variant.name())?;
        m.serialize_entry("t", &self.t)?;
        m.serialize_entry("d", &Pairs(&entries))?;
        m.serialize_entry("zeros", &self.zeros)?;
        m.serialize_entry("strictly_positive", &self.strictly_positive)?;
        m.serialize_entry("claim_holds", &self.matches_claim())?;
        m.end()
    }
}

struct Pairs<'a>(&'a [(String, String)]);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

pub fn decomposition_indices(g: u32, n: u32) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = (2..=n).map(|j| (0, j)).collect();
    out.extend((1..=n).map(|j| (1, j)));
    for i in 2..=g + 1 {
        out.extend((0..=n).map(|j| (i, j)));
    }
    out
}

fn default_t(g: u32, n: u32, variant: Variant, kappa: &Rat) -> Result<Rat> {
    let (gi, ni) = (g as i64, n as i64);
    match variant {
        Variant::Unordered if n >= 4 * g + 6 => Ok(kappa - Rat::new(ni - 4 * gi - 6, 12 * gi + 6)),
        Variant::OrderedComposed if n == 4 => Ok(kappa.clone()),
        Variant::OrderedComposed if n == 5 => Ok(kappa * Rat::new(5 * gi + 7, 4 * (gi + 1))),
        _ => Err(Error::NoDefaultParameter(format!("(g,n)=({g},{n}) variant {}", variant.name()))),
    }
}

/// Rewrites K + Br/2 through the Keel relation and reads off the coefficients.
///
/// With `t = None` the substitution parameter is the one from the effectivity argument,
/// available for unordered n >= 4g+6 and ordered n in {4, 5}.
pub fn effective_decomposition(g: u32, n: u32, variant: Variant, t: Option<Rat>) -> Result<DecompResult> {
    if variant == Variant::Ordered {
        return invalid("decompositions use the unordered or ordered_composed branch divisor");
    }
    let space = Space::sym(g, n)?;
    if n < 2 {
        return invalid(format!("Keel substitution needs n >= 2, got {n}"));
    }
    let base = k_plus_half_branch(g, n, variant)?;
    let kappa = base.coeff(&space.delta(2, 0)?);
    let t = match t {
        Some(t) => t,
        None => default_t(g, n, variant, &kappa)?,
    };
    let class = substitute_delta20(&base, &t)?;
    let mut d = BTreeMap::new();
    for (i, j) in decomposition_indices(g, n) {
        d.insert((i, j), class.coeff(&space.delta(i, j)?));
    }
    let zeros: Vec<(u32, u32)> = d.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| *k).collect();
    let strictly_positive = d.values().all(|v| v.is_positive());
    Ok(DecompResult { space, variant, t, d, zeros, strictly_positive, class })
}

fn r(v: i64) -> Rat {
    Rat::int(v)
}

fn c(g: u32, n: u32, i: u32, j: u32) -> Rat {
    keel_coeff(g, n, i, j).expect("index checked by caller")
}

/// The printed case formulas for the decomposition coefficients.
pub fn closed_form_d(g: u32, n: u32, i: u32, j: u32, variant: Variant) -> Result<Rat> {
    Space::sym(g, n)?;
    if !decomposition_indices(g, n).contains(&(i, j)) {
        return invalid(format!("({i},{j}) is not in the decomposition index set"));
    }
    let (gi, ni, ii, ji) = (g as i64, n as i64, i as i64, j as i64);
    let interior_odd = i % 2 == 1 && j != 0 && j != n;
    match variant {
        Variant::Unordered => {
            if n < 4 * g + 6 {
                return invalid(format!("closed forms are stated for n >= 4g+6, got n = {n}"));
            }
            if (i, j) == (2, 0) {
                return Ok(Rat::new(ni - 4 * gi - 6, 12 * gi + 6));
            }
            if (i, j) == (1, 1) {
                return Ok(Rat::new(ni - 4 * gi - 6, 6 * ni));
            }
            if (i, j) == (1, n) {
                return Ok(Rat::new(2 * gi * gi + gi * ni + 3 * gi - 3, 3));
            }
            let den = 6 * (2 * gi + 1) * ni * (ni - 1);
            if i == 2 {
                if n == 4 * g + 6 {
                    return Ok(Rat::new((gi - 1) * ji * (ji - 1), 4 * (4 * gi + 5)));
                }
                let (h, t) = (gi - 2, ni - 4 * gi - 6);
                let hh = h * h;
                let jj = ji * ji;
                let big = t * t * t
                    + (2 * h * ji + 5 * ji + 8 * h + 27) * t * t
                    + (2 * hh * jj + 5 * h * jj + 6 * hh * ji + 41 * h * ji + 65 * ji + 16 * hh + 108 * h + 182) * t
                    + 12 * hh * h * jj
                    + 84 * hh * jj
                    + 177 * h * jj
                    + 105 * jj
                    - 12 * hh * h * ji
                    - 84 * hh * ji
                    - 177 * h * ji
                    - 105 * ji;
                return Ok(Rat::new(big, den));
            }
            let f = ni * (ni - 1) * (ii * ii * ni - ii * ni + 2 * gi * ii * ii - 3 * ii * ii + 10 * gi * ii + 9 * ii - 24 * gi - 12);
            let gg = 2
                * (2 * gi + 1)
                * ji
                * ((2 * gi * gi + 5 * gi + 3 + gi * ni - 2 * ni) * ji + 3 * ni * ni - ii * ni * ni - 2 * gi * ii * ni - 2 * ii * ni
                    - gi * ni
                    - ni
                    + 2 * gi * ii
                    + 3 * ii
                    - 2 * gi * gi
                    - 5 * gi
                    - 3);
            let mut v = Rat::new(f + gg, den);
            if interior_odd {
                v += Rat::half();
            }
            Ok(v)
        }
        Variant::OrderedComposed if n == 4 => {
            if i == 2 {
                return Ok(Rat::new((gi - 1) * ji * (ji - 1), 12));
            }
            let base = (gi - 1) * ji * ji - 3 * ii * ji - gi * ji + 7 * ji + 6 * ii;
            Ok(Rat::new(base + if interior_odd { -9 } else { -12 }, 6))
        }
        Variant::OrderedComposed if n == 5 => {
            if let Some(v) = ordered5_printed_value(g, i, j) {
                if (i, j) != (1, 5) {
                    return Ok(v);
                }
            }
            // Case table rows for i in {0, 1}.
            let m = 2 * gi + 7;
            let k = Rat::new((ii + ji) * (m - ii - ji), m - 1) - if interior_odd { Rat::new(3, 2) } else { r(2) };
            Ok(k - c(g, n, i, j) * Rat::new(5 * gi + 7, 160 * (gi + 3) * (gi + 1)))
        }
        _ => invalid(format!("no printed closed form for (g,n)=({g},{n}) variant {}", variant.name())),
    }
}

/// Simplified n = 5 expressions as printed, including the value 2g-1 given for `[1]+5`.
/// Returns `None` for i = 0, which has no simplified form.
pub fn ordered5_printed_value(g: u32, i: u32, j: u32) -> Option<Rat> {
    if j > 5 || i == 0 || i > g + 1 {
        return None;
    }
    let (gi, ii, ji) = (g as i64, i as i64, j as i64);
    let g2 = gi * gi;
    let jj = ji * ji;
    if i == 2 {
        return Some(Rat::new((10 * g2 - gi - 11) * jj + (-10 * g2 + gi + 19) * ji + 20, 160 * (gi + 1)));
    }
    if i == 1 {
        if j == 5 {
            return Some(r(2 * gi - 1));
        }
        if j == 0 {
            return None;
        }
        return Some(Rat::new((10 * g2 - gi - 11) * jj + (-10 * g2 + 41 * gi + 55) * ji - 40 - 40 * gi, 80 * (gi + 1)));
    }
    let c0 = if i % 2 == 1 && j != 0 && j != 5 { 120 } else { 160 };
    let num = 10 * ii * ii + (80 * gi - 36 * ji - 40 * gi * ji + 70) * ii - c0 - c0 * gi + 91 * ji + 81 * gi * ji
        - 10 * g2 * ji
        - 11 * jj
        - gi * jj
        + 10 * g2 * jj;
    Some(Rat::new(num, 80 * (gi + 1)))
}
