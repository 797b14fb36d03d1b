//! Dense polynomials over `Z/p` for small primes (`p < 2^24`), used by the
//! degree sieve where the generic field layer is too slow. Vectors are
//! ascending coefficients reduced into `[0, p)` with no trailing zeros.
//! Products are accumulated unreduced: with `p < 2^24` a sum of up to
//! `2^16` products fits in a `u64`.

const P_MAX: u64 = 1 << 24;

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i64, 1i64, p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i64) as u64
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    debug_assert!(p < P_MAX && a.len().min(b.len()) <= 1 << 16);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out.into_iter().map(|c| c % p).collect())
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

/// Remainder of `a` modulo a nonzero `m`.
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return r;
    }
    debug_assert!(p < P_MAX && r.len() <= 1 << 16);
    let lc_inv = inv(m[dm], p);
    // entries below the current lead stay unreduced until read
    for i in (dm..r.len()).rev() {
        let c = (r[i] % p) * lc_inv % p;
        if c == 0 {
            continue;
        }
        let neg = p - c;
        for (j, &mc) in m[..dm].iter().enumerate() {
            r[i - dm + j] += neg * mc;
        }
    }
    r.truncate(dm);
    trim(r.into_iter().map(|c| c % p).collect())
}

fn monic(a: &[u64], p: u64) -> Vec<u64> {
    let li = inv(*a.last().unwrap(), p);
    a.iter().map(|&c| c * li % p).collect()
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(&a, p)
    }
}

fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(&b, &b, m, p);
        }
    }
    acc
}

/// `g(h(x))` modulo `p`.
pub fn compose(g: &[u64], h: &[u64], p: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::new();
    for &c in g.iter().rev() {
        acc = mul(&acc, h, p);
        if acc.is_empty() {
            acc.push(c);
        } else {
            acc[0] = (acc[0] + c) % p;
        }
        acc = trim(acc);
    }
    acc
}

/// Whether `f` keeps its degree mod `p` and is squarefree there.
pub fn is_squarefree(f: &[u64], p: u64, degree: usize) -> bool {
    let f = trim(f.to_vec());
    f.len() == degree + 1 && gcd(&f, &derivative(&f, p), p).len() == 1
}

/// Degrees of the irreducible factors of `f` mod `p`, or `None` when `f`
/// is not squarefree mod `p` or its degree drops.
pub fn degrees_squarefree(f: &[u64], p: u64, degree: usize) -> Option<Vec<usize>> {
    if !is_squarefree(f, p, degree) {
        return None;
    }
    let f = monic(&trim(f.to_vec()), p);
    let n = f.len() - 1;
    let x = vec![0, 1];
    // rows of the Frobenius map: x^(i p) mod f
    let xp = pow_mod(&x, p, &f, p);
    let mut rows = Vec::with_capacity(n);
    let mut row = vec![1u64];
    for _ in 0..n {
        rows.push(row.clone());
        row = mul_mod(&row, &xp, &f, p);
    }
    let frobenius = |h: &[u64]| {
        let mut acc = vec![0u64; n];
        for (&hc, r) in h.iter().zip(&rows) {
            if hc == 0 {
                continue;
            }
            for (a, &rc) in acc.iter_mut().zip(r) {
                *a += hc * rc;
            }
        }
        trim(acc.into_iter().map(|c| c % p).collect())
    };
    let mut rest = f.clone();
    // h = x^(p^d) mod f
    let mut h = rem(&x, &f, p);
    let mut out = Vec::new();
    let mut d = 0;
    while rest.len() > 2 * (d + 1) {
        d += 1;
        h = frobenius(&h);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        let gd = g.len() - 1;
        if gd > 0 {
            out.extend(std::iter::repeat_n(d, gd / d));
            rest = div_exact(&rest, &g, p);
        }
    }
    if rest.len() > 1 {
        out.push(rest.len() - 1);
    }
    out.sort_unstable();
    Some(out)
}

fn div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lc_inv = inv(b[db], p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * lc_inv % p;
        q[i] = c;
        if c == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bc % p) % p;
        }
    }
    debug_assert!(r[..db].iter().all(|&c| c == 0));
    trim(q)
}

/// Reduces signed integers mod `p`.
pub fn reduce_i64(a: &[i64], p: u64) -> Vec<u64> {
    trim(a.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::finite;
    use crate::field::PrimeField;
    use crate::poly::Poly;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn degrees_agree_with_generic_layer(
            coeffs in prop::collection::vec(0u64..13, 2..10),
            p in prop::sample::select(vec![2u64, 3, 5, 7, 13]),
        ) {
            let mut f: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
            f.push(1);
            let k = PrimeField::new(p).unwrap();
            let g = Poly::new(k, f.clone());
            let generic = g.gcd(&g.derivative()).is_one().then(|| {
                let mut d = finite::factor_degrees_squarefree(&g);
                d.sort_unstable();
                d
            });
            prop_assert_eq!(degrees_squarefree(&f, p, f.len() - 1), generic);
        }

        #[test]
        fn compose_matches_generic(
            g in prop::collection::vec(0u64..7, 1..5),
            h in prop::collection::vec(0u64..7, 1..4),
        ) {
            let k = PrimeField::new(7).unwrap();
            let (pg, ph) = (Poly::new(k, g.clone()), Poly::new(k, h.clone()));
            prop_assert_eq!(compose(&g, &h, 7), pg.compose(&ph).unwrap().coeffs().to_vec());
        }
    }
}
