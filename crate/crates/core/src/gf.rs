//! Finite-field services: absolute trace and the explicit quadratic
//! witnesses over F_{2^n}.

use crate::error::{Error, Result};
use crate::field::FiniteField;

/// `x + x^p + ... + x^(p^(n-1))`, an element of the prime field.
pub fn trace_to_prime<F: FiniteField>(k: &F, x: &u64) -> u64 {
    let p = k.characteristic();
    let mut term = *x;
    let mut acc = *x;
    for _ in 1..k.degree() {
        term = k.pow(&term, p);
        acc = k.add(&acc, &term);
    }
    acc
}

fn require_char2<F: FiniteField>(k: &F) -> Result<()> {
    if k.characteristic() != 2 {
        return Err(Error::Precondition(format!(
            "witnesses are defined over F_(2^n), got characteristic {}",
            k.characteristic()
        )));
    }
    Ok(())
}

fn first_with_trace<F: FiniteField>(k: &F, tr: u64, nonzero: bool) -> Option<u64> {
    k.elements()
        .find(|x| (!nonzero || *x != 0) && trace_to_prime(k, x) == tr)
}

/// `(a, b)` such that `x^2 + a x + b` is irreducible with reducible second
/// iterate: `a = 1/r`, `b = s/r^2` for the first `r != 0` of trace 0 and
/// the first `s` of trace 1.
pub fn fintwo_n22_witness<F: FiniteField>(k: &F) -> Result<(u64, u64)> {
    require_char2(k)?;
    if k.order() == 2 {
        return Err(Error::NoWitness(
            "F_2 has no quadratic with newly reducible second iterate".into(),
        ));
    }
    let r = first_with_trace(k, 0, true).expect("trace kernel is nontrivial when q > 2");
    let s = first_with_trace(k, 1, false).expect("trace is surjective");
    let a = k.inv(&r).unwrap();
    let b = k.mul(&s, &k.mul(&a, &a));
    Ok((a, b))
}

/// `(a, a)` with `a = 1/r` for the first `r` of trace 1: `x^2 + a x + a`
/// has irreducible second iterate.
pub fn fintwo_n23_witness<F: FiniteField>(k: &F) -> Result<(u64, u64)> {
    require_char2(k)?;
    let r = first_with_trace(k, 1, true).expect("trace is surjective");
    let a = k.inv(&r).unwrap();
    Ok((a, a))
}
