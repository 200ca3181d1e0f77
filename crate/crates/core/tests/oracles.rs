//! Library results against independent computations done here from scratch.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use hypdiv::exact::Rat;
use hypdiv::hyp_pic::{canonical_hgn, extremality_system, generators, lambda_relation, HypSym};
use hypdiv::pic_genus0::{canonical_fully_symmetric, Space};

fn big(r: &Rat) -> BigRational {
    BigRational::new(r.numer().clone(), r.denom().clone())
}

proptest! {
    // Rat against num-rational on chained expressions with large intermediates
    #[test]
    fn rat_matches_bigrational(xs in prop::collection::vec((-10_000i64..10_000, 1i64..10_000), 2..8)) {
        let mut acc = Rat::one();
        let mut want = BigRational::from_integer(BigInt::from(1));
        for (k, (a, b)) in xs.iter().enumerate() {
            let r = Rat::new(*a, *b);
            let w = BigRational::new(BigInt::from(*a), BigInt::from(*b));
            match k % 3 {
                0 => { acc = &acc * &r; want *= &w; }
                1 => { acc = &acc + &r; want += &w; }
                _ => { acc = &acc - &r.pow(3); want -= &w * &w * &w; }
            }
            prop_assert_eq!(big(&acc), want.clone());
        }
    }
}

#[test]
fn canonical_fully_symmetric_formula() {
    for m in 4..=30u32 {
        let k = canonical_fully_symmetric(m).unwrap();
        let sp = Space::full(m).unwrap();
        for s in 2..=m / 2 {
            let (si, mi) = (s as i64, m as i64);
            let want = Rat::new(si * (mi - si), mi - 1) - Rat::int(2);
            assert_eq!(k.coeff(&sp.delta_full(s).unwrap()), want, "m={m} s={s}");
        }
    }
}

#[test]
fn lambda_formula() {
    for g in 2..=9u32 {
        for n in 0..=4u32 {
            let l = lambda_relation(g, n).unwrap();
            let gi = g as i64;
            let den = 8 * gi + 4;
            assert_eq!(l.coeff(&HypSym::EtaIrr).unwrap(), Rat::new(gi, den));
            for sym in generators(g, n) {
                let want = match sym {
                    HypSym::Eta(i, _) => Rat::new(2 * (i as i64 + 1) * (gi - i as i64), den),
                    HypSym::Delta(i, _) if i >= 1 => Rat::new(4 * i as i64 * (gi - i as i64), den),
                    HypSym::EtaIrr => continue,
                    _ => Rat::zero(),
                };
                assert_eq!(l.coeff(&sym).unwrap(), want, "g={g} n={n} {sym}");
            }
        }
    }
}

#[test]
fn pointed_canonical_class_slots() {
    for g in 2..=8u32 {
        for n in 1..=5u32 {
            let k = canonical_hgn(g, n).unwrap();
            let gi = g as i64;
            let d = 2 * gi + 1;
            for sym in generators(g, n) {
                let want = match sym {
                    HypSym::Psi(_) => Rat::one(),
                    HypSym::EtaIrr => -(Rat::half() + Rat::new(1, d)),
                    HypSym::Eta(i, _) => {
                        let i = i as i64;
                        Rat::int(2) * (Rat::new((i + 1) * (2 * gi - 2 * i), d) - Rat::one())
                    }
                    HypSym::Delta(0, _) => Rat::int(-2),
                    HypSym::Delta(i, j) => {
                        let i = i as i64;
                        let base = Rat::new(2 * (2 * i + 1) * (2 * gi - 2 * i + 1), d) - Rat::int(3);
                        if j == 0 {
                            base - Rat::one()
                        } else {
                            base
                        }
                    }
                };
                assert_eq!(k.coeff(&sym).unwrap(), want, "g={g} n={n} {sym}");
            }
        }
    }
}

fn leibniz_det(m: &[Vec<Rat>]) -> Rat {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let size = m.len();
    let mut total = Rat::zero();
    for p in perms(size) {
        let inversions = (0..size).flat_map(|a| (a + 1..size).map(move |b| (a, b))).filter(|&(a, b)| p[a] > p[b]).count();
        let mut term = Rat::one();
        for (row, &col) in p.iter().enumerate() {
            term = &term * &m[row][col];
        }
        if inversions % 2 == 1 {
            term = -term;
        }
        total = &total + &term;
    }
    total
}

#[test]
fn extremality_determinant_by_permutations() {
    for g in 2..=6u32 {
        for n in 3..=8u32 {
            let e = extremality_system(g, n).unwrap();
            assert_eq!(e.matrix.len(), (n - 1) as usize);
            for (r, row) in e.matrix.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    let want = if r == c { Rat::int(2 * g as i64 - 1) } else { Rat::one() };
                    assert_eq!(x, &want);
                }
            }
            assert_eq!(e.determinant, leibniz_det(&e.matrix), "(g,n)=({g},{n})");
            let closed = Rat::int(2 * g as i64 - 2).pow(n - 2) * Rat::int(2 * g as i64 - 2 + n as i64 - 1);
            assert_eq!(e.determinant, closed);
        }
    }
}
