//! Text input for polynomials and field elements.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   = [ "+" | "-" ] term { ( "+" | "-" ) term } ;
//! term   = factor { [ "*" ] factor } ;          (* implicit multiplication *)
//! factor = atom [ "^" uint ] ;
//! atom   = uint [ "/" uint ] | "x" | "g" | "(" expr ")" ;
//! ```
//!
//! `x` is the polynomial variable and `g` the generator of an extension
//! field. Rational literals such as `3/4` bind tighter than `*`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

/// Polynomial in `x` and `g` with rational coefficients, keyed by
/// `(deg_x, deg_g)`.
type Bivariate = BTreeMap<(u32, u32), Rational>;

fn constant(c: Rational) -> Bivariate {
    let mut m = Bivariate::new();
    if !c.is_zero() {
        m.insert((0, 0), c);
    }
    m
}

fn add_into(acc: &mut Bivariate, other: &Bivariate, sign: i32) {
    for (k, v) in other {
        let e = acc.entry(*k).or_insert_with(Rational::zero);
        if sign < 0 {
            *e -= v;
        } else {
            *e += v;
        }
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

fn mul(a: &Bivariate, b: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for ((ax, ag), av) in a {
        for ((bx, bg), bv) in b {
            let e = out.entry((ax + bx, ag + bg)).or_insert_with(Rational::zero);
            *e += av * bv;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn pow(base: &Bivariate, mut e: u32) -> Bivariate {
    let mut acc = constant(Rational::one());
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mul(&b, &b);
        }
    }
    acc
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at position {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.peek();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn expr(&mut self) -> Result<Bivariate> {
        let mut acc = Bivariate::new();
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        loop {
            let t = self.term()?;
            add_into(&mut acc, &t, sign);
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(c: Option<u8>) -> bool {
        matches!(c, Some(b'0'..=b'9' | b'x' | b'g' | b'('))
    }

    fn term(&mut self) -> Result<Bivariate> {
        let mut acc = self.factor()?;
        // explicit `*` or juxtaposition
        while self.eat(b'*') || Self::starts_factor(self.peek()) {
            acc = mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Bivariate> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|&e| e <= 100_000)
                .ok_or_else(|| self.err("exponent too large"))?;
            return Ok(pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Bivariate> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Bivariate::from([((1, 0), Rational::one())]))
            }
            Some(b'g') => {
                self.pos += 1;
                Ok(Bivariate::from([((0, 1), Rational::one())]))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'0'..=b'9') => {
                let n = self.uint()?;
                if self.eat(b'/') {
                    let d = self.uint()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(constant(Rational::new(n, d)))
                } else {
                    Ok(constant(Rational::from_integer(n)))
                }
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

fn parse_bivariate(s: &str) -> Result<Bivariate> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses a polynomial in `x` with coefficients in `field`.
pub fn parse_poly_in<F: Field>(field: &F, s: &str) -> Result<Poly<F>> {
    let bi = parse_bivariate(s)?;
    let deg = bi.keys().map(|k| k.0).max().unwrap_or(0) as usize;
    let mut residues: Vec<Vec<Rational>> = vec![Vec::new(); deg + 1];
    for ((dx, dg), c) in bi {
        let r = &mut residues[dx as usize];
        if r.len() <= dg as usize {
            r.resize(dg as usize + 1, Rational::zero());
        }
        r[dg as usize] = c;
    }
    let coeffs = residues
        .iter()
        .map(|r| field.from_residue(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(field.clone(), coeffs))
}

/// Parses a field element (an expression without `x`).
pub fn parse_elem<F: Field>(field: &F, s: &str) -> Result<F::Elem> {
    let p = parse_poly_in(field, s)?;
    if p.deg() > 0 {
        return Err(Error::Parse(format!("{s:?} is not a field element")));
    }
    Ok(p.coeff(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::field::{ExtensionField, PrimeField, RationalField};

    #[test]
    fn parses_standard_forms() {
        let f = parse_poly_in(&RationalField, "x^2-x-1").unwrap();
        assert_eq!(f, Poly::from_ints(RationalField, &[-1, -1, 1]));
        let g = parse_poly_in(&RationalField, "(x+185)^4 - 192").unwrap();
        assert_eq!(g.coeff(0), rat(185i64.pow(4) - 192, 1));
        let h = parse_poly_in(&RationalField, "3/4x^2 + 2(x-1)").unwrap();
        assert_eq!(h, Poly::new(RationalField, vec![rat(-2, 1), rat(2, 1), rat(3, 4)]));
        let k = parse_poly_in(&RationalField, "-2*x*x").unwrap();
        assert_eq!(k, Poly::from_ints(RationalField, &[0, 0, -2]));
    }

    #[test]
    fn display_round_trips() {
        for s in ["x^4 - 3*x^3 + 4*x - 1", "1/2*x^2 - 5/4", "-x^3 - x", "7"] {
            let p = parse_poly_in(&RationalField, s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        let k = ExtensionField::with_order(4).unwrap();
        let p = parse_poly_in(&k, "x^2 + (g+1)*x + g").unwrap();
        assert_eq!(p.to_string(), "x^2 + (g+1)*x + g");
        assert_eq!(Poly::from_json(k.clone(), &p.to_json()).unwrap(), p);
    }

    #[test]
    fn finite_field_reduction() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(parse_poly_in(&f2, "x^2+3x+1").unwrap(), Poly::from_ints(f2, &[1, 1, 1]));
        let k = ExtensionField::with_order(4).unwrap();
        // g^2 reduces to g + 1
        assert_eq!(parse_elem(&k, "g^2").unwrap(), 3);
        assert!(parse_poly_in(&RationalField, "g*x").is_err());
        assert!(parse_poly_in(&f2, "x/2").is_err());
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x^", "(x+1", "x+*1", "y", "1/0", "x 1 )"] {
            assert!(parse_poly_in(&RationalField, s).is_err(), "{s}");
        }
    }
}
