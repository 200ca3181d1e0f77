use serde::{Serialize, Serializer};

use super::{all_pairings, pair, rigid_reduce, BCurve};
use crate::error::{invalid, Error, Result};
use crate::exact::Rat;
use crate::pic_genus0::{
    effective_decomposition, k_plus_half_branch, keel_nonnegative_representative, DecompResult, DivClass0, Variant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    LowerBound,
    UpperBound,
    KodairaRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Value(i64),
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::NegInf => s.serialize_str("-inf"),
            Bound::Value(v) => s.serialize_i64(*v),
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub bound: Bound,
    pub citation: String,
    pub evidence: Vec<Evidence>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub attached: Vec<Certificate>,
}

impl Certificate {
    fn new(kind: CertKind, bound: Bound, citation: &str) -> Certificate {
        Certificate { kind, bound, citation: citation.to_string(), evidence: Vec::new(), attached: Vec::new() }
    }

    fn note(&mut self, label: impl Into<String>, value: impl std::fmt::Display) {
        self.evidence.push(Evidence { label: label.into(), value: value.to_string() });
    }
}

/// Which moduli space of hyperelliptic curves: unordered or ordered Weierstrass points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KodSpace {
    Unordered,
    Ordered,
}

impl KodSpace {
    pub fn variant(self) -> Variant {
        match self {
            KodSpace::Unordered => Variant::Unordered,
            KodSpace::Ordered => Variant::OrderedComposed,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KodSpace::Unordered => "unordered",
            KodSpace::Ordered => "ordered",
        }
    }
}

fn dim(g: u32, n: u32) -> i64 {
    2 * g as i64 - 1 + n as i64
}

/// Upper bound n-3 on the Iitaka dimension of D.
///
/// Needs B_{0,∅}·D = 0. If some B pairs negatively, D is rigidly reduced first, starting from a
/// representative with nonnegative coefficients (D itself, or one found along the Keel relation);
/// afterwards every B pairing must vanish.
pub fn upper_bound_certificate(d: &DivClass0) -> Result<Certificate> {
    let (g, n) = d.space.gn()?;
    if n < 4 {
        return invalid(format!("upper bound certificate needs n >= 4, got {n}"));
    }
    let p0 = pair(&BCurve::b0(g, n)?, d)?;
    if !p0.is_zero() {
        return Err(Error::Hypothesis(format!("B[0]+{{}} pairs to {p0}, not 0")));
    }
    let mut cert = Certificate::new(CertKind::UpperBound, Bound::Value(n as i64 - 3), "upper bound n-3: class orthogonal to every B curve after removing rigid boundary components");
    cert.note("B[0]+{} . D", &p0);
    let mut pairings = all_pairings(d)?;
    if pairings.iter().any(|(_, v)| v.is_negative()) {
        let start = if d.is_effective_rep() || n < 2 {
            d.clone()
        } else {
            match keel_nonnegative_representative(d)? {
                Some((t, rep)) => {
                    cert.note("nonnegative representative via Keel substitution, t", &t);
                    rep
                }
                None => return Err(Error::Hypothesis("no nonnegative representative along the Keel relation".into())),
            }
        };
        let (reduced, log) = rigid_reduce(&start)?;
        for step in &log {
            cert.note(format!("subtract via {}", step.curve), format!("{} * {}", step.multiple, step.divisor));
        }
        if !reduced.is_effective_rep() {
            return Err(Error::Hypothesis("rigid reduction left a negative coefficient".into()));
        }
        pairings = all_pairings(&reduced)?;
    }
    if let Some((b, v)) = pairings.iter().find(|(_, v)| !v.is_zero()) {
        return Err(Error::Hypothesis(format!("{b} pairs to {v} after reduction")));
    }
    cert.note("curves checked, all pairings 0", pairings.len());
    Ok(cert)
}

/// Lower bound n-3 from a decomposition with nonnegative coefficients whose zeros lie in
/// {[2]+0, [1]+1, [2]+1}.
pub fn lower_bound_certificate(dec: &DecompResult) -> Result<Certificate> {
    let n = dec.n();
    if n < 4 {
        return invalid(format!("lower bound certificate needs n >= 4, got {n}"));
    }
    if let Some(k) = dec.negatives().first() {
        return Err(Error::Hypothesis(format!("d[{}]+{} = {} < 0", k.0, k.1, dec.d[k])));
    }
    let allowed = [(2, 0), (1, 1), (2, 1)];
    if let Some(k) = dec.zeros.iter().find(|k| !allowed.contains(k)) {
        return Err(Error::Hypothesis(format!("d[{}]+{} = 0 outside the admissible zero set", k.0, k.1)));
    }
    let mut cert = Certificate::new(CertKind::LowerBound, Bound::Value(n as i64 - 3), "lower bound n-3: nonnegative boundary decomposition, zeros only on [2]+0, [1]+1, [2]+1");
    cert.note("variant", dec.variant.name());
    cert.note("substitution parameter", &dec.t);
    let zs: Vec<String> = dec.zeros.iter().map(|(i, j)| format!("[{i}]+{j}")).collect();
    cert.note("zero coefficients", format!("{{{}}}", zs.join(", ")));
    cert.note("coefficients checked", dec.d.len());
    Ok(cert)
}

/// Maximal Kodaira dimension from a strictly positive decomposition (a big class).
pub fn bigness_certificate(dec: &DecompResult) -> Result<Certificate> {
    if !dec.strictly_positive {
        let k = dec.d.iter().find(|(_, v)| !v.is_positive()).map(|(k, _)| *k).unwrap_or((0, 0));
        return Err(Error::Hypothesis(format!("d[{}]+{} = {} is not positive", k.0, k.1, dec.d[&k])));
    }
    let mut cert = Certificate::new(CertKind::LowerBound, Bound::Value(dim(dec.g(), dec.n())), "general type: strictly positive boundary decomposition");
    cert.note("variant", dec.variant.name());
    cert.note("substitution parameter", &dec.t);
    cert.note("coefficients checked, all positive", dec.d.len());
    Ok(cert)
}

/// Expected value of B_{0,∅}·(K + Br/2).
fn expected_pairing(g: u32, n: u32, space: KodSpace) -> Rat {
    let (g, n) = (g as i64, n as i64);
    match (space, n) {
        (KodSpace::Unordered, 1) => Rat::int(-(2 * g + 3)),
        (KodSpace::Unordered, _) => Rat::new(n - 4 * g - 6, 2),
        (KodSpace::Ordered, 1) => Rat::int(-2),
        (KodSpace::Ordered, _) => Rat::new(n - 4, 2),
    }
}

/// Kodaira dimension of the moduli space of n-pointed hyperelliptic curves of genus g.
///
/// The sign of p = B_{0,∅}·(K + Br/2) decides the regime: p < 0 gives -inf, p = 0 gives n-3
/// with both bound certificates, p > 0 gives 2g-1+n with a bigness certificate.
pub fn kodaira_report(g: u32, n: u32, space: KodSpace) -> Result<Certificate> {
    let cls = k_plus_half_branch(g, n, space.variant())?;
    let p = pair(&BCurve::b0(g, n)?, &cls)?;
    let expected = expected_pairing(g, n, space);
    if p != expected {
        return Err(Error::Hypothesis(format!("B[0]+{{}} . (K + Br/2) = {p}, expected {expected}")));
    }
    let threshold = match space {
        KodSpace::Unordered => 4 * g + 6,
        KodSpace::Ordered => 4,
    };
    let mut cert = if p.is_negative() {
        let mut c = Certificate::new(CertKind::KodairaRegime, Bound::NegInf, "uniruled: the covering curve B[0]+{} meets K + Br/2 negatively");
        c.note("threshold n", threshold);
        c
    } else if p.is_zero() {
        let dec = effective_decomposition(g, n, space.variant(), None)?;
        let mut c = Certificate::new(CertKind::KodairaRegime, Bound::Value(n as i64 - 3), "Kodaira dimension n-3: effective decomposition and B-orthogonality");
        c.attached.push(lower_bound_certificate(&dec)?);
        c.attached.push(upper_bound_certificate(&dec.class)?);
        c
    } else {
        let mut c = Certificate::new(CertKind::KodairaRegime, Bound::Value(dim(g, n)), "general type: K + Br/2 is big");
        if space == KodSpace::Ordered && n > 5 {
            c.citation = "general type: big at n = 5, extended by subadditivity along forgetful maps with hyperelliptic fibres".into();
            let dec = effective_decomposition(g, 5, space.variant(), None)?;
            c.attached.push(bigness_certificate(&dec)?);
        } else {
            let dec = effective_decomposition(g, n, space.variant(), None)?;
            c.attached.push(bigness_certificate(&dec)?);
        }
        c
    };
    cert.evidence.insert(0, Evidence { label: "space".into(), value: space.name().into() });
    cert.evidence.insert(1, Evidence { label: "(g, n)".into(), value: format!("({g}, {n})") });
    cert.evidence.insert(2, Evidence { label: "B[0]+{} . (K + Br/2)".into(), value: p.to_string() });
    Ok(cert)
}
