use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::RatMatrix;
use super::rat::{common_denominator, Rat};

/// Univariate polynomial over the rationals, coefficients in ascending degree.
/// Trailing zeros are never stored, so the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Rat::one()])
    }

    /// `t − r`.
    pub fn linear(r: &Rat) -> Self {
        Poly(vec![-r, Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip();
                Poly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] -= b;
        }
        Poly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead = d.leading().unwrap().recip();
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() * &lead;
            for (i, x) in d.0.iter().enumerate() {
                r[k + i] -= &c * x;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Rat::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from(i as i64))
                .collect(),
        )
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free decomposition (Yun): monic factors `f_i` with `self = c·∏ f_i^i`.
    /// Returns `(factor, multiplicity)` pairs with non-constant factors only.
    pub fn squarefree(&self) -> Vec<(Poly, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut i = 1;
        loop {
            let d = c.sub(&b.derivative());
            if b.degree() == Some(0) {
                break;
            }
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            i += 1;
        }
        out
    }

    /// Rational roots, ascending, each once.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut p = self.clone();
        if p.0[0].is_zero() {
            roots.push(Rat::zero());
            let k = p.0.iter().position(|c| !c.is_zero()).unwrap();
            p = Poly(p.0[k..].to_vec());
        }
        if p.degree().unwrap_or(0) > 0 {
            let ints = p.integer_coeffs();
            let a0 = ints.first().unwrap().abs();
            let an = ints.last().unwrap().abs();
            let num_divs = divisors(&a0);
            let den_divs = divisors(&an);
            let mut cands: Vec<Rat> = Vec::new();
            for n in &num_divs {
                for d in &den_divs {
                    let r = Rat::new(n.clone(), d.clone());
                    cands.push(r.clone());
                    cands.push(-r);
                }
            }
            cands.sort();
            cands.dedup();
            roots.extend(cands.into_iter().filter(|r| p.eval(r).is_zero()));
        }
        roots.sort();
        roots
    }

    fn integer_coeffs(&self) -> Vec<BigInt> {
        let den = common_denominator(&self.0);
        self.0
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect()
    }

    /// Characteristic polynomial `det(t·I − m)` via Faddeev–LeVerrier.
    pub fn charpoly(m: &RatMatrix) -> Poly {
        assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
        let n = m.rows();
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut mk = RatMatrix::zeros(n, n);
        let ident = RatMatrix::identity(n);
        for k in 1..=n {
            let prev = &mk + &ident.scale(&coeffs[n - k + 1]);
            mk = m * &prev;
            coeffs[n - k] = -(mk.trace() / Rat::from(k as i64));
        }
        Poly::new(coeffs)
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            let e = n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
        if d.to_u64().is_none() {
            break;
        }
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coeff = if mag.is_one() && i > 0 { String::new() } else { mag.to_string() };
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coeff}t")?,
                _ => write!(f, "{coeff}t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(xs: &[(i64, i64)]) -> Poly {
        Poly::new(xs.iter().map(|&(a, b)| Rat::new(a, b)).collect())
    }

    #[test]
    fn charpoly_of_nilpotent() {
        let m = RatMatrix::from_fractions(&[&[(-1, 4), (1, 1)], &[(-1, 16), (1, 4)]]);
        assert_eq!(Poly::charpoly(&m), p(&[(0, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn charpoly_of_diagonal() {
        let m = RatMatrix::from_fractions(&[
            &[(1, 2), (0, 1), (0, 1)],
            &[(0, 1), (-3, 1), (0, 1)],
            &[(0, 1), (0, 1), (1, 2)],
        ]);
        let cp = Poly::charpoly(&m);
        let expect = Poly::linear(&Rat::new(1, 2))
            .mul(&Poly::linear(&Rat::new(1, 2)))
            .mul(&Poly::linear(&Rat::from(-3)));
        assert_eq!(cp, expect);
        assert_eq!(cp.rational_roots(), vec![Rat::from(-3), Rat::new(1, 2)]);
    }

    #[test]
    fn squarefree_splits_multiplicities() {
        // (t − 1)^2 (t^2 + 1)
        let f = Poly::linear(&Rat::one())
            .mul(&Poly::linear(&Rat::one()))
            .mul(&p(&[(1, 1), (0, 1), (1, 1)]));
        let sf = f.squarefree();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (p(&[(1, 1), (0, 1), (1, 1)]), 1));
        assert_eq!(sf[1], (Poly::linear(&Rat::one()), 2));
        assert_eq!(f.rational_roots(), vec![Rat::one()]);
    }

    #[test]
    fn division() {
        let f = p(&[(-1, 1), (0, 1), (1, 1)]);
        let (q, r) = f.div_rem(&Poly::linear(&Rat::one()));
        assert_eq!(q, p(&[(1, 1), (1, 1)]));
        assert!(r.is_zero());
        assert_eq!(f.to_string(), "t^2 - 1");
    }
}
