//! The symmetric function `f(a,b,c,d)` of `2 x 2` exponent matrices and the
//! two conjectured finite sums for it.
//!
//! ```text
//! f(a,b,c,d) = I([[a, c], [b, d]]) / ((a+d+n-2)!! (b+c+n-2)!!)
//! ```
//!
//! The conjecture sums are evaluators only. They are compared against
//! [`f_value`] by the verifier and never used as a source of truth.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::closed_forms::integral_two_row;
use crate::error::{Error, Result};
use crate::exact_arith::{binomial, fact, pdf, pdf_signed, ExactRational};
use crate::matrix::ExponentMatrix;
use crate::weingarten::{integral_oracle_with, SingularPolicy, DEFAULT_ORACLE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    AllEven,
    AllOdd,
    Mixed,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quad {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Quad {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Quad { a, b, c, d }
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_entries(e: [u32; 4]) -> Self {
        Quad::new(e[0], e[1], e[2], e[3])
    }

    pub fn parity(&self) -> Parity {
        let odd = self.entries().iter().filter(|&&x| x % 2 == 1).count();
        match odd {
            0 => Parity::AllEven,
            4 => Parity::AllOdd,
            _ => Parity::Mixed,
        }
    }

    pub fn sum(&self) -> u32 {
        self.entries().iter().sum()
    }

    pub fn min_entry(&self) -> u32 {
        *self.entries().iter().min().expect("four entries")
    }

    /// The matrix `[[a, c], [b, d]]`.
    pub fn matrix(&self) -> ExponentMatrix {
        ExponentMatrix::from_rows(&[[self.a, self.c], [self.b, self.d]]).expect("2x2")
    }

    /// All 24 orderings of the entries.
    pub fn permutations(&self) -> Vec<Quad> {
        let e = self.entries();
        let mut out = Vec::with_capacity(24);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let mut seen = [false; 4];
                        for x in [i, j, k, l] {
                            seen[x] = true;
                        }
                        if seen.iter().all(|&s| s) {
                            out.push(Quad::new(e[i], e[j], e[k], e[l]));
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_n(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::domain(format!("n must be at least {min} (got {n})")));
    }
    Ok(())
}

/// `f(a,b,c,d)` at `n`, refusing singular Gram matrices in the odd case.
pub fn f_value(q: Quad, n: u32) -> Result<ExactRational> {
    f_value_with(q, n, SingularPolicy::Refuse)
}

pub fn f_value_with(q: Quad, n: u32, policy: SingularPolicy) -> Result<ExactRational> {
    check_n(n, 2)?;
    let i = match q.parity() {
        Parity::Mixed => return Ok(ExactRational::zero()),
        Parity::AllEven => integral_two_row(&[q.a / 2, q.c / 2], &[q.b / 2, q.d / 2], n)?,
        Parity::AllOdd => integral_oracle_with(&q.matrix(), n, DEFAULT_ORACLE_LIMIT, policy)?,
    };
    Ok(i / (pdf(q.a + q.d + n - 2) * pdf(q.b + q.c + n - 2)))
}

/// `S_k = prod (x + k)` over the four entries.
pub fn quantity_s(k: i64, q: Quad) -> BigInt {
    q.entries().iter().map(|&x| BigInt::from(x as i64 + k)).product()
}

/// `F_k = prod (x + k)!!` over the four entries.
pub fn quantity_f(k: i64, q: Quad) -> Result<ExactRational> {
    q.entries().iter().map(|&x| pdf_signed(x as i64 + k)).product()
}

/// `P_k = (a + b + c + d + k)!!`.
pub fn quantity_p(k: i64, q: Quad) -> Result<ExactRational> {
    pdf_signed(q.sum() as i64 + k)
}

fn even_prefactor(q: Quad, n: u32) -> Result<ExactRational> {
    let n64 = n as i64;
    Ok(fact(n - 2) * pdf(n - 2) * quantity_f(0, q)?
        / (quantity_p(n64 - 1, q)? * quantity_f(n64 - 2, q)?))
}

/// Closed form of `f(a, b, c, 0)` for even `a, b, c`.
pub fn f_triangular(a: u32, b: u32, c: u32, n: u32) -> Result<ExactRational> {
    check_n(n, 3)?;
    if let Some(x) = [a, b, c].into_iter().find(|x| x % 2 == 1) {
        return Err(Error::parity(format!("odd entry {x}")));
    }
    even_prefactor(Quad::new(a, b, c, 0), n)
}

fn ratio(num: BigInt, den: BigInt) -> ExactRational {
    ExactRational::new(num, den)
}

/// The conjectured finite sum for all-even quads.
pub fn conjecture_even_sum(q: Quad, n: u32) -> Result<ExactRational> {
    check_n(n, 4)?;
    if q.parity() != Parity::AllEven {
        return Err(Error::parity(format!("{q} is not all-even")));
    }
    let n64 = n as i64;
    let mut sum = ExactRational::zero();
    let mut top = BigInt::from(1);
    let mut bottom = BigInt::from(1);
    for r in 0..=q.min_entry() / 2 {
        let r64 = r as i64;
        let lead = ExactRational::new(n64 + 4 * r64 - 3, n64 - 3);
        let choose = ExactRational::from(binomial(n + 2 * r - 4, 2 * r));
        sum += lead * choose * ratio(top.clone(), bottom.clone());
        top *= quantity_s(-2 * r64, q);
        bottom *= quantity_s(n64 - 1 + 2 * r64, q);
    }
    Ok(even_prefactor(q, n)? * sum)
}

/// The conjectured finite sum for all-odd quads.
pub fn conjecture_odd_sum(q: Quad, n: u32) -> Result<ExactRational> {
    check_n(n, 4)?;
    if q.parity() != Parity::AllOdd {
        return Err(Error::parity(format!("{q} is not all-odd")));
    }
    let n64 = n as i64;
    let prefactor = -(fact(n - 2) * pdf(n) * quantity_f(1, q)?
        / (quantity_p(n64 - 1, q)? * quantity_f(n64 - 1, q)?));
    let mut sum = ExactRational::zero();
    let mut top = BigInt::from(1);
    let mut bottom = BigInt::from(1);
    for r in 0..=(q.min_entry() - 1) / 2 {
        let r64 = r as i64;
        let lead = ExactRational::new(n64 + 4 * r64 - 1, (n64 - 1) * (n64 - 3));
        let choose = ExactRational::from(binomial(n + 2 * r - 3, 2 * r + 1));
        sum += lead * choose * ratio(top.clone(), bottom.clone());
        top *= quantity_s(-1 - 2 * r64, q);
        bottom *= quantity_s(n64 + 2 * r64, q);
    }
    Ok(prefactor * sum)
}
