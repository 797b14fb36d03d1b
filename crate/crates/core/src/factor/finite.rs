//! Factorization over finite fields: squarefree decomposition with p-th root
//! extraction, distinct-degree factorization and Cantor-Zassenhaus splitting
//! (trace splitting in characteristic 2).

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Factorization;
use crate::arith::prime_divisors;
use crate::field::FiniteField;
use crate::poly::Poly;

const SPLIT_SEED: u64 = 0x6e65_7772_6564;

/// `f(x)^(1/p)` for `f` with zero derivative.
fn poly_frobenius_root<F: FiniteField>(f: &Poly<F>) -> Poly<F> {
    let k = f.field();
    let p = k.characteristic() as usize;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|c| k.frobenius_root(c))
        .collect();
    Poly::new(k.clone(), coeffs)
}

/// Monic squarefree parts with multiplicities; their product (with
/// multiplicities) is `f` made monic.
pub fn squarefree_decomposition<F: FiniteField>(f: &Poly<F>) -> Vec<(Poly<F>, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    sff_rec(&f.monic(), 1, &mut out);
    out.sort();
    out
}

fn sff_rec<F: FiniteField>(f: &Poly<F>, scale: u32, out: &mut Vec<(Poly<F>, u32)>) {
    let p = f.field().characteristic() as u32;
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).unwrap();
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.exact_div(&w).unwrap();
        i += 1;
    }
    if !c.is_one() {
        sff_rec(&poly_frobenius_root(&c), scale * p, out);
    }
}

/// `x^(q^k) mod f` for k = 1, 2, ... is produced by repeated q-th powers.
fn frobenius_step<F: FiniteField>(h: &Poly<F>, f: &Poly<F>) -> Poly<F> {
    h.pow_mod(f.field().order(), f)
}

/// Distinct-degree factorization of a monic squarefree `f`: pairs
/// `(g, d)` where `g` is the product of all degree-`d` factors.
pub fn distinct_degree<F: FiniteField>(f: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let k = f.field().clone();
    let x = Poly::x(k.clone());
    let mut rest = f.monic();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = frobenius_step(&h, &rest);
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g).unwrap();
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

fn random_poly<F: FiniteField>(k: &F, deg: usize, rng: &mut ChaCha8Rng) -> Poly<F> {
    let q = k.order();
    Poly::new(k.clone(), (0..deg).map(|_| rng.gen_range(0..q)).collect())
}

/// Splits a monic squarefree `g` whose irreducible factors all have
/// degree `d`.
pub fn equal_degree<F: FiniteField>(g: &Poly<F>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<F>> {
    if g.deg() == d {
        return vec![g.clone()];
    }
    let k = g.field().clone();
    let q = k.order();
    let one = Poly::one(k.clone());
    loop {
        let a = random_poly(&k, g.deg(), rng);
        if a.is_constant() {
            continue;
        }
        let b = if k.characteristic() == 2 {
            // a + a^2 + a^4 + ... + a^(2^(m d - 1)), q = 2^m
            let steps = k.degree() as usize * d;
            let mut term = a.rem(g);
            let mut acc = term.clone();
            for _ in 1..steps {
                term = term.mul_mod(&term, g);
                acc = &acc + &term;
            }
            acc
        } else {
            let e = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1;
            &a.pow_mod_big(&e, g) - &one
        };
        let h = b.gcd(g);
        if !h.is_one() && h.deg() < g.deg() {
            let other = g.exact_div(&h).unwrap();
            let mut out = equal_degree(&h, d, rng);
            out.extend(equal_degree(&other, d, rng));
            return out;
        }
    }
}

pub fn factor<F: FiniteField>(f: &Poly<F>) -> Factorization<F> {
    let k = f.field().clone();
    let unit = f.lc();
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (g, d) in distinct_degree(&part) {
            for h in equal_degree(&g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    if f.is_zero() {
        return Factorization::new(k.zero(), Vec::new());
    }
    Factorization::new(unit, factors)
}

/// Degrees of the irreducible factors of a squarefree `f`.
pub fn factor_degrees_squarefree<F: FiniteField>(f: &Poly<F>) -> Vec<usize> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f) {
        out.extend(std::iter::repeat_n(d, g.deg() / d));
    }
    out
}

/// Rabin's test.
pub fn is_irreducible<F: FiniteField>(f: &Poly<F>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = f.monic();
    let x = Poly::x(f.field().clone());
    let mut powers = Vec::with_capacity(n + 1);
    let mut h = x.clone();
    powers.push(h.clone());
    for _ in 0..n {
        h = frobenius_step(&h, &f);
        powers.push(h.clone());
    }
    if powers[n] != x {
        return false;
    }
    prime_divisors(n as u64)
        .into_iter()
        .all(|r| (&powers[n / r as usize] - &x).gcd(&f).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtensionField, Field, PrimeField};
    use crate::parse::parse_poly_in;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    /// All monic polynomials of degree `d` over a small field.
    fn monic_polys<F: FiniteField>(k: &F, d: usize) -> Vec<Poly<F>> {
        let q = k.order();
        (0..q.pow(d as u32))
            .map(|mut idx| {
                let mut cs: Vec<u64> = (0..d)
                    .map(|_| {
                        let c = idx % q;
                        idx /= q;
                        c
                    })
                    .collect();
                cs.push(1);
                Poly::new(k.clone(), cs)
            })
            .collect()
    }

    /// Irreducibility by trial division over all monic polynomials of degree
    /// at most deg/2.
    fn brute_irreducible<F: FiniteField>(f: &Poly<F>) -> bool {
        let n = f.deg();
        n >= 1
            && (1..=n / 2).all(|d| monic_polys(f.field(), d).iter().all(|g| !g.divides(f)))
    }

    #[test]
    fn x4_x_1_irreducible_over_f2() {
        let f = parse_poly_in(&f2(), "x^4+x+1").unwrap();
        assert!(brute_irreducible(&f));
        assert!(is_irreducible(&f));
        assert!(factor(&f).is_irreducible());
    }

    #[test]
    fn x4_plus_1_is_a_fourth_power_over_f2() {
        let f = parse_poly_in(&f2(), "x^4+1").unwrap();
        let fac = factor(&f);
        assert_eq!(fac.factors, vec![(parse_poly_in(&f2(), "x+1").unwrap(), 4)]);
    }

    #[test]
    fn squarefree_with_frobenius_extraction() {
        let g = parse_poly_in(&f2(), "x^2+x+1").unwrap();
        let sq = &g * &g;
        assert_eq!(squarefree_decomposition(&sq), vec![(g.clone(), 2)]);
        let mixed = &(&sq * &sq) * &parse_poly_in(&f2(), "x").unwrap();
        let dec = squarefree_decomposition(&mixed);
        assert_eq!(dec, vec![(parse_poly_in(&f2(), "x").unwrap(), 1), (g, 4)]);
    }

    #[test]
    fn f4_second_iterate_splits_into_two_quadratics() {
        let k = ExtensionField::with_order(4).unwrap();
        let f = parse_poly_in(&k, "x^2+x+g").unwrap();
        let f2 = f.iterate(2);
        let fac = factor(&f2);
        assert_eq!(fac.degree_pattern(), vec![2, 2]);
        // exhaustive oracle: count monic quadratic divisors
        let divisors: Vec<_> = monic_polys(&k, 2).into_iter().filter(|g| g.divides(&f2)).collect();
        let irreducible: Vec<_> = divisors.into_iter().filter(brute_irreducible).collect();
        assert_eq!(irreducible.len(), 2);
        assert_eq!(fac.factors.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>(), irreducible);
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for q in [2u64, 3, 4, 5] {
            let k = ExtensionField::with_order(q).unwrap();
            for d in 1..=4usize {
                if q.pow(d as u32) > 700 {
                    continue;
                }
                for f in monic_polys(&k, d) {
                    assert_eq!(is_irreducible(&f), brute_irreducible(&f), "q={q} f={f}");
                }
            }
        }
    }

    #[test]
    fn factorizations_reconstruct() {
        for q in [2u64, 3, 4, 8, 9] {
            let k = ExtensionField::with_order(q).unwrap();
            for (i, f) in monic_polys(&k, 4).into_iter().enumerate() {
                if i % 3 != 0 {
                    continue;
                }
                let f = &f * &f.shift(&k.one());
                let fac = factor(&f);
                assert_eq!(fac.expand(&k), f, "q={q}");
                assert!(fac.factors.iter().all(|(p, _)| p.is_monic() && is_irreducible(p)));
            }
        }
    }

    #[test]
    fn odd_characteristic_splitting() {
        let k = PrimeField::new(101).unwrap();
        let f = parse_poly_in(&k, "(x-1)(x-2)(x-3)(x^2+1)(x^2+2)(x^3+x+1)").unwrap();
        let fac = factor(&f);
        assert_eq!(fac.expand(&k), f);
        assert_eq!(fac.count(), factor_degrees_squarefree(&f).len());
    }
}
