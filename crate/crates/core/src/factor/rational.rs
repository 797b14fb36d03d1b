//! Factorization over Q: Yun squarefree decomposition, then Zassenhaus
//! (modular factorization, quadratic Hensel lifting, subset recombination)
//! on each squarefree part.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{finite, nmod, Factorization, DEGREE_CAP};
use crate::arith::{in_minus4_fourth_powers, is_nth_power, prime_divisors, primes, rational_is_square, Rational};
use crate::error::{Error, Result};
use crate::field::{PrimeField, RationalField};
use crate::poly::Poly;

type QPoly = Poly<RationalField>;
/// Integer polynomial, ascending coefficients, no trailing zeros.
type ZPoly = Vec<BigInt>;

/// Good primes tried before factoring.
const SIEVE_PRIMES: usize = 5;
/// Good primes tried when only irreducibility is asked.
const IRREDUCIBILITY_SIEVE_PRIMES: usize = 40;

fn znorm(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zdeg(a: &ZPoly) -> usize {
    a.len().saturating_sub(1)
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    znorm(out)
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    znorm((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    znorm((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn zscale(a: &ZPoly, c: &BigInt) -> ZPoly {
    znorm(a.iter().map(|x| x * c).collect())
}

/// Coefficients reduced into `[0, m)`.
fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    znorm(a.iter().map(|x| x.mod_floor(m)).collect())
}

/// Coefficients reduced into `(-m/2, m/2]`.
fn zsym(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m >> 1;
    znorm(
        a.iter()
            .map(|x| {
                let r = x.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Division by a monic `b` modulo `m`.
fn zdivrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let db = zdeg(b);
    let mut r = zmod(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] = (&r[i + j] - &c * bc).mod_floor(m);
        }
        q[i] = c;
    }
    r.truncate(db);
    (znorm(q), zmod(&r, m))
}

/// `a / b` over Z when `b` divides `a` exactly.
fn zexact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = zdeg(b);
    if a.len() <= db {
        return a.is_empty().then(Vec::new);
    }
    let lb = b.last().unwrap();
    if !(a.last().unwrap() % lb).is_zero() || (!b[0].is_zero() && !(&a[0] % &b[0]).is_zero()) {
        return None;
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let (c, rem) = r[i + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &c * bc;
        }
        q[i] = c;
    }
    r[..db].iter().all(Zero::is_zero).then(|| znorm(q))
}

fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
fn primitive(a: &ZPoly) -> ZPoly {
    let mut c = content(a);
    if a.last().is_some_and(|l| l.is_negative()) {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

/// Primitive integer polynomial proportional to `f`.
fn to_primitive_z(f: &QPoly) -> ZPoly {
    let den = f.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let z: ZPoly = f.coeffs().iter().map(|c| (c * &den).to_integer()).collect();
    primitive(&z)
}

fn z_to_monic_q(a: &ZPoly) -> QPoly {
    let lc = a.last().unwrap().clone();
    Poly::new(
        RationalField,
        a.iter().map(|c| Rational::new(c.clone(), lc.clone())).collect(),
    )
}

fn z_to_fp(a: &ZPoly, k: &PrimeField) -> Poly<PrimeField> {
    let p = BigInt::from(k.p());
    let coeffs = a
        .iter()
        .map(|c| c.mod_floor(&p).try_into().expect("residue fits in u64"))
        .collect();
    Poly::new(*k, coeffs)
}

fn fp_to_z(a: &Poly<PrimeField>) -> ZPoly {
    a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn inv_mod_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// One quadratic Hensel step: from `f = g h`, `s g + t h = 1` modulo `m`
/// to the same identities modulo `m^2`, `h` monic.
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m2: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = zmod(&zsub(f, &zmul(g, h)), m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, m2);
    let g2 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), m2);
    let h2 = zmod(&zadd(h, &r), m2);
    let b = zmod(&zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &vec![BigInt::one()]), m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h2, m2);
    let s2 = zmod(&zsub(s, &d), m2);
    let t2 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), m2);
    (g2, h2, s2, t2)
}

/// Lifts the monic factorization `facs` of `f` mod `p` to monic factors
/// modulo `modulus = p^(2^j)`.
fn lift_tree(f: &ZPoly, facs: &[Poly<PrimeField>], k: &PrimeField, modulus: &BigInt) -> Vec<ZPoly> {
    let p = BigInt::from(k.p());
    if facs.len() == 1 {
        let inv = inv_mod_big(f.last().unwrap(), modulus);
        return vec![zmod(&zscale(f, &inv), modulus)];
    }
    let split = facs.len() / 2;
    let lc = z_to_fp(&vec![f.last().unwrap().clone()], k);
    let g0 = facs[..split].iter().fold(lc, |acc, u| &acc * u);
    let h0 = facs[split..].iter().fold(Poly::one(*k), |acc, u| &acc * u);
    let (one, s0, t0) = g0.ext_gcd(&h0);
    debug_assert!(one.is_one());
    let (mut g, mut h, mut s, mut t) = (fp_to_z(&g0), fp_to_z(&h0), fp_to_z(&s0), fp_to_z(&t0));
    let mut m = p;
    while &m < modulus {
        m = &m * &m;
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &m);
    }
    let mut out = lift_tree(&g, &facs[..split], k, modulus);
    out.extend(lift_tree(&h, &facs[split..], k, modulus));
    out
}

/// Degrees reachable as sums of sub-multisets of `degs`, as a bitmask.
pub(crate) fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Outcome of reducing a primitive squarefree integer polynomial modulo
/// several primes.
struct Sieve {
    /// Proper factor degrees consistent with every prime tried.
    allowed: BTreeSet<usize>,
    /// Prime with the fewest modular factors.
    best: u64,
}

fn degree_sieve(f: &ZPoly, wanted: usize) -> Sieve {
    let n = zdeg(f);
    let lc = f.last().unwrap();
    let mut allowed: BTreeSet<usize> = (1..n).collect();
    let mut best = (usize::MAX, 0u64);
    let mut good = 0;
    for p in primes().take(5000) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let pb = BigInt::from(p);
        let fp: Vec<u64> = f.iter().map(|c| u64::try_from(c.mod_floor(&pb)).expect("residue")).collect();
        let Some(degs) = nmod::degrees_squarefree(&fp, p, n) else {
            continue;
        };
        let reach = subset_sums(&degs, n);
        allowed.retain(|&d| reach[d]);
        if degs.len() < best.0 {
            best = (degs.len(), p);
        }
        good += 1;
        if good >= wanted || allowed.is_empty() {
            break;
        }
    }
    assert!(good > 0, "squarefree polynomial has a good prime");
    Sieve { allowed, best: best.1 }
}

/// Visits index subsets of `0..len` of size `size` in lexicographic order
/// until `visit` returns true.
fn find_subset(len: usize, size: usize, mut visit: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = (0..size).collect();
    if size > len {
        return None;
    }
    loop {
        if visit(&idx) {
            return Some(idx);
        }
        let mut i = size;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < len - size + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Irreducible factors of a primitive squarefree integer polynomial with
/// positive leading coefficient, each primitive with positive leading
/// coefficient.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    if zdeg(f) <= 1 {
        return vec![f.clone()];
    }
    zassenhaus_sieved(f, degree_sieve(f, SIEVE_PRIMES))
}

fn zassenhaus_sieved(f: &ZPoly, sieve: Sieve) -> Vec<ZPoly> {
    let n = zdeg(f);
    if sieve.allowed.is_empty() {
        return vec![f.clone()];
    }
    let k = PrimeField::new(sieve.best).expect("prime");
    let modular: Vec<Poly<PrimeField>> = finite::factor(&z_to_fp(f, &k))
        .factors
        .into_iter()
        .map(|(u, _)| u)
        .collect();

    // coefficients of any factor, scaled by lc(f), are bounded by this
    let norm2: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let lc = f.last().unwrap().abs();
    let bound = (&lc * norm2 * (BigInt::one() << n)) << 1;
    let p = BigInt::from(sieve.best);
    let mut modulus = p;
    while modulus <= bound {
        modulus = &modulus * &modulus;
    }

    let mut lifted = lift_tree(f, &modular, &k, &modulus);
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = None;
        let rest_lc = rest.last().unwrap().clone();
        find_subset(lifted.len(), size, |sub| {
            let deg: usize = sub.iter().map(|&i| zdeg(&lifted[i])).sum();
            if !sieve.allowed.contains(&deg) {
                return false;
            }
            let prod = sub.iter().fold(vec![rest_lc.clone()], |acc, &i| zmod(&zmul(&acc, &lifted[i]), &modulus));
            let cand = primitive(&zsym(&prod, &modulus));
            match zexact_div(&rest, &cand) {
                Some(q) => {
                    found = Some((cand, q));
                    true
                }
                None => false,
            }
        })
        .map(|sub| {
            let (cand, q) = found.take().unwrap();
            out.push(cand);
            rest = primitive(&q);
            for &i in sub.iter().rev() {
                lifted.remove(i);
            }
        })
        .unwrap_or_else(|| size += 1);
    }
    out.push(rest);
    out
}

/// Yun's algorithm: monic squarefree parts with multiplicities.
pub fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let b = f.gcd(&df);
    let mut c = f.exact_div(&b).unwrap();
    let mut d = &df.exact_div(&b).unwrap() - &c.derivative();
    let mut i = 1;
    while !c.is_one() {
        let a = c.gcd(&d);
        c = c.exact_div(&a).unwrap();
        d = &d.exact_div(&a).unwrap() - &c.derivative();
        if !a.is_one() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// `(gamma, c, d)` with `f = lc * ((x - gamma)^d - c)`, if `f` has that shape.
pub fn shifted_binomial(f: &QPoly) -> Option<(Rational, Rational, usize)> {
    let d = f.degree()?;
    if d == 0 {
        return None;
    }
    let f = f.monic();
    let gamma = -f.coeff(d - 1) / Rational::from_integer(BigInt::from(d));
    // the x^(d-2) coefficient of (x - gamma)^d is C(d, 2) gamma^2
    if d >= 2 && f.coeff(d - 2) != &gamma * &gamma * Rational::from_integer(BigInt::from(d * (d - 1) / 2)) {
        return None;
    }
    let g = f.shift(&gamma);
    if (1..d).any(|i| !g.coeff(i).is_zero()) {
        return None;
    }
    Some((gamma, -g.coeff(0), d))
}

/// Irreducibility of `x^d - c` over Q: `c` is not a `p`-th power for any
/// prime `p | d`, and `c` is not of the form `-4 k^4` when `4 | d`.
pub fn binomial_irreducible(c: &Rational, d: usize) -> bool {
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if c.is_zero() {
        return false;
    }
    if prime_divisors(d as u64).into_iter().any(|p| is_nth_power(c, p as u32).is_some()) {
        return false;
    }
    !(d.is_multiple_of(4) && in_minus4_fourth_powers(c).is_some())
}

fn squarefree_q(f: &QPoly) -> bool {
    let z = to_primitive_z(f);
    let lc = z.last().unwrap().clone();
    for p in primes().take(20) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let pb = BigInt::from(p);
        let fp: Vec<u64> = z.iter().map(|c| u64::try_from(c.mod_floor(&pb)).expect("residue")).collect();
        if nmod::is_squarefree(&fp, p, zdeg(&z)) {
            return true;
        }
    }
    f.gcd(&f.derivative()).is_one()
}

fn check_nonzero(f: &QPoly) -> Result<usize> {
    f.degree().ok_or_else(|| Error::Precondition("zero polynomial".into()))
}

/// Irreducibility over Q. Closed forms and the binomial criterion are tried
/// first, then a modular degree sieve, then full factorization (which is
/// refused above the degree cap).
pub fn irreducible_q(f: &QPoly) -> Result<bool> {
    let n = check_nonzero(f)?;
    match n {
        0 => return Ok(false),
        1 => return Ok(true),
        2 => {
            let f = f.monic();
            let disc = f.coeff(1) * f.coeff(1) - f.coeff(0) * Rational::from_integer(4.into());
            return Ok(rational_is_square(&disc).is_none());
        }
        _ => {}
    }
    if let Some((_, c, d)) = shifted_binomial(f) {
        return Ok(binomial_irreducible(&c, d));
    }
    if !squarefree_q(f) {
        return Ok(false);
    }
    let z = to_primitive_z(f);
    let sieve = degree_sieve(&z, IRREDUCIBILITY_SIEVE_PRIMES);
    if sieve.allowed.is_empty() {
        return Ok(true);
    }
    if n > DEGREE_CAP {
        return Err(Error::DegreeCap { degree: n, cap: DEGREE_CAP });
    }
    Ok(zassenhaus_sieved(&z, sieve).len() == 1)
}

/// Complete factorization over Q with monic factors.
pub fn factor_over_q(f: &QPoly) -> Result<Factorization<RationalField>> {
    let n = check_nonzero(f)?;
    let unit = f.lc();
    if n == 0 {
        return Ok(Factorization::new(unit, Vec::new()));
    }
    if n > DEGREE_CAP {
        return match shifted_binomial(f) {
            Some((_, c, d)) if binomial_irreducible(&c, d) => {
                Ok(Factorization::new(unit, vec![(f.monic(), 1)]))
            }
            _ => Err(Error::DegreeCap { degree: n, cap: DEGREE_CAP }),
        };
    }
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for z in zassenhaus(&to_primitive_z(&part)) {
            factors.push((z_to_monic_q(&z), mult));
        }
    }
    Ok(Factorization::new(unit, factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::parse::parse_poly_in;
    use proptest::prelude::*;

    fn q(s: &str) -> QPoly {
        parse_poly_in(&RationalField, s).unwrap()
    }

    #[test]
    fn golden_ratio_third_iterate() {
        let f3 = q("x^2-x-1").iterate(3);
        let fac = factor_over_q(&f3).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.factors[0].0, q("x^4-3x^3+4x-1"));
        assert_eq!(fac.factors[1].0, q("x^4-x^3-3x^2+x+1"));
        assert_eq!(fac.expand(&RationalField), f3);
    }

    #[test]
    fn binomials() {
        assert!(binomial_irreducible(&rat(2, 1), 8));
        assert!(!binomial_irreducible(&rat(-4, 1), 4));
        assert!(!binomial_irreducible(&rat(-64, 1), 6));
        assert!(!binomial_irreducible(&rat(9, 4), 2));
        assert!(binomial_irreducible(&rat(-9, 4), 2));
        assert!(!binomial_irreducible(&rat(-8, 27), 3));
        assert!(irreducible_q(&q("(x-3)^5-2")).unwrap());
        assert!(!irreducible_q(&q("(x+1/2)^4+4")).unwrap());
        // degree above the cap settled by the binomial criterion
        assert!(irreducible_q(&q("x^36 - 3")).unwrap());
        assert!(factor_over_q(&q("x^30 - 3")).unwrap().is_irreducible());
        assert!(matches!(factor_over_q(&q("x^30 - 4")), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn x6_minus_64_shifted_splits() {
        let fac = factor_over_q(&q("(x-64)^6+64")).unwrap();
        assert_eq!(fac.degree_pattern(), vec![2, 4]);
        assert_eq!(fac.factors[0].0, q("x^2-128x+4100"));
    }

    #[test]
    fn squarefree_parts() {
        let f = q("3(x-1)^3 (x^2+1)^2 (x+5)");
        let dec = squarefree_decomposition(&f);
        assert_eq!(dec, vec![(q("x+5"), 1), (q("x^2+1"), 2), (q("x-1"), 3)]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.expand(&RationalField), f);
        assert!(!irreducible_q(&q("(x^2+1)^2")).unwrap());
    }

    #[test]
    fn swinnerton_dyer_style_product() {
        // many modular factors, few rational ones
        let f = q("x^8 - 40x^6 + 352x^4 - 960x^2 + 576");
        let fac = factor_over_q(&f).unwrap();
        assert!(fac.is_irreducible());
        let g = q("(x^4-10x^2+1)(x^4-16x^2+4)");
        assert_eq!(factor_over_q(&g).unwrap().degree_pattern(), vec![4, 4]);
    }

    #[test]
    fn non_monic_and_rational_input() {
        let f = q("(6x^2 + 5x - 7)(10x^3 - 1/3)");
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.unit, rat(60, 1));
        assert_eq!(fac.degree_pattern(), vec![2, 3]);
        assert_eq!(fac.expand(&RationalField), f);
    }

    #[test]
    fn above_cap_without_criterion_is_refused() {
        let f = q("x^2 + x + 3").iterate(5);
        assert!(matches!(factor_over_q(&f), Err(Error::DegreeCap { degree: 32, .. })));
    }

    /// Rational root test by enumerating p/q with p | a0 and q | lc.
    fn has_rational_root(f: &QPoly) -> bool {
        let z = to_primitive_z(f);
        if z[0].is_zero() {
            return true;
        }
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            let n = n.abs();
            let mut out = Vec::new();
            let mut d = BigInt::one();
            while d <= n {
                if (&n % &d).is_zero() {
                    out.push(d.clone());
                }
                d += 1;
            }
            out
        };
        for p in divisors(&z[0]) {
            for qd in divisors(z.last().unwrap()) {
                for sgn in [1, -1] {
                    let r = Rational::new(&p * sgn, qd.clone());
                    if f.evaluate(&r).is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn arb_small_poly() -> impl Strategy<Value = QPoly> {
        (prop::collection::vec(-6i64..7, 1..4), 1i64..4).prop_map(|(mut cs, lc)| {
            cs.push(lc);
            Poly::from_ints(RationalField, &cs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn products_factor_back(a in arb_small_poly(), b in arb_small_poly(), c in arb_small_poly()) {
            let f = &(&a * &b) * &c;
            let fac = factor_over_q(&f).unwrap();
            prop_assert_eq!(fac.expand(&RationalField), f.clone());
            prop_assert!(fac.count() >= 3);
            for (g, _) in &fac.factors {
                prop_assert!(g.is_monic());
                prop_assert!(g.deg() == 1 || !has_rational_root(g));
            }
        }
    }
}
