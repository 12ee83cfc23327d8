//! Closed-form evaluators: one-row and `n = 2` integrals, the `Phi`
//! normalization, the elementary expansion, the triangular formula, joint
//! moments and the two-row formula.
//!
//! `Phi` is the two-row integral divided by the two one-row integrals over
//! `O_{n-1}`:
//!
//! ```text
//! I(a; b) = I_{n-1}(a) I_{n-1}(b) Phi(a; b)
//! ```
//!
//! and is only defined here for even exponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{fact, pdf, ExactRational};
use crate::matrix::ExponentMatrix;

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2 (got {n})")));
    }
    Ok(())
}

fn check_even(v: &[u32], what: &str) -> Result<()> {
    if let Some(x) = v.iter().find(|&&x| x % 2 != 0) {
        return Err(Error::parity(format!("{what} has odd entry {x}")));
    }
    Ok(())
}

/// Every row sum and every column sum is even.
pub fn admissible(a: &ExponentMatrix) -> bool {
    a.row_sums().iter().chain(a.col_sums().iter()).all(|s| s % 2 == 0)
}

/// One-row integral `I(a_1 ... a_q)` for even exponents.
pub fn one_row_integral(a: &[u32], n: u32) -> Result<ExactRational> {
    check_n(n)?;
    check_even(a, "row")?;
    let sum: u32 = a.iter().sum();
    let num: ExactRational = a.iter().map(|&x| pdf(x)).product();
    Ok(pdf(n - 1) * num / pdf(sum + n - 1))
}

/// `I([[a, b], [c, d]])` over `O_2`.
pub fn integral_n2(a: u32, b: u32, c: u32, d: u32) -> ExactRational {
    let odd = [a, b, c, d].iter().filter(|&&x| x % 2 == 1).count();
    let sign = match odd {
        0 => ExactRational::one(),
        4 => -ExactRational::one(),
        _ => return ExactRational::zero(),
    };
    sign * pdf(a + d) * pdf(b + c) / pdf(a + b + c + d + 1)
}

/// Literal exponents of a two-row integral: top row `a`, bottom row `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoRowSpec {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl TwoRowSpec {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::contract(format!(
                "two-row spec needs equal nonempty lengths (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        Ok(TwoRowSpec { a, b })
    }

    pub fn q(&self) -> usize {
        self.a.len()
    }

    pub fn check_even(&self) -> Result<()> {
        check_even(&self.a, "top row")?;
        check_even(&self.b, "bottom row")
    }

    /// Half-exponent vectors, after an even check.
    pub fn halves(&self) -> Result<(Vec<u32>, Vec<u32>)> {
        self.check_even()?;
        Ok((
            self.a.iter().map(|x| x / 2).collect(),
            self.b.iter().map(|x| x / 2).collect(),
        ))
    }

    pub fn to_matrix(&self) -> ExponentMatrix {
        ExponentMatrix::two_row(&self.a, &self.b).expect("equal lengths")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiValue {
    pub value: ExactRational,
    pub n: u32,
    pub spec: TwoRowSpec,
}

/// `I = factor * Phi`'s inverse factor: `Phi / I`.
fn phi_over_integral(spec: &TwoRowSpec, n: u32) -> Result<ExactRational> {
    check_n(n)?;
    spec.check_even()?;
    let sa: u32 = spec.a.iter().sum();
    let sb: u32 = spec.b.iter().sum();
    let prods: ExactRational = spec.a.iter().chain(&spec.b).map(|&x| pdf(x)).product();
    Ok(pdf(sa + n - 2) * pdf(sb + n - 2) / (pdf(n - 2) * pdf(n - 2) * prods))
}

pub fn phi_from_integral(spec: &TwoRowSpec, i_value: &ExactRational, n: u32) -> Result<PhiValue> {
    let factor = phi_over_integral(spec, n)?;
    Ok(PhiValue { value: factor * i_value, n, spec: spec.clone() })
}

pub fn integral_from_phi(phi: &PhiValue) -> Result<ExactRational> {
    let factor = phi_over_integral(&phi.spec, phi.n)?;
    Ok(&phi.value / &factor)
}

/// `Phi(a; 0) = I_n(a) / I_{n-1}(a)` for even `a`.
pub fn phi_one_row(a: &[u32], n: u32) -> Result<ExactRational> {
    check_n(n)?;
    check_even(a, "row")?;
    let s: u32 = a.iter().sum();
    Ok(pdf(n - 1) / pdf(n - 2) * pdf(s + n - 2) / pdf(s + n - 1))
}

/// Coefficient `K_r(a, b) = 4^r a! b! / ((2r)! (a-r)! (b-r)!)` of the
/// elementary expansion.
pub fn expansion_coefficient(r: u32, a: u32, b: u32) -> Result<ExactRational> {
    if r > a.min(b) {
        return Err(Error::contract(format!("r={r} exceeds min(a, b) = {}", a.min(b))));
    }
    let four_r = ExactRational::from(4u32).pow(r as i32);
    Ok(four_r * fact(a) * fact(b) / (fact(2 * r) * fact(a - r) * fact(b - r)))
}

/// `Phi` of the elementary matrix with `2r` columns `(1;1)`, `a` columns
/// `(2;0)` and `b` columns `(0;2)`.
pub fn elementary_phi(r: u32, a: u32, b: u32, n: u32) -> Result<ExactRational> {
    check_n(n)?;
    let v = pdf(n - 1) / pdf(n - 2) * pdf(2 * r) * pdf(2 * a + 2 * b + 2 * r + n - 2)
        / pdf(2 * a + 2 * b + 4 * r + n - 1);
    Ok(if r % 2 == 1 { -v } else { v })
}

fn check_half_pair(a: &[u32], b: &[u32]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::contract(format!(
            "vectors of different lengths ({} and {})",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `Phi(2a; 2b)` by the two-row formula. Inputs are half-exponents.
///
/// The sum over `r_1..r_q` only depends on `R = sum r_i` through the
/// double factorials, so the products of coefficients are first collected
/// by `R` (a polynomial product over the columns).
pub fn phi_two_row(a: &[u32], b: &[u32], n: u32) -> Result<ExactRational> {
    check_n(n)?;
    check_half_pair(a, b)?;
    let s: u32 = a.iter().sum::<u32>() + b.iter().sum::<u32>();

    // by_r[R] = sum over r with |r| = R of prod K_{r_i}(a_i, b_i)
    let mut by_r = vec![ExactRational::one()];
    for (&ai, &bi) in a.iter().zip(b) {
        let m = ai.min(bi) as usize;
        let coeffs: Vec<ExactRational> = (0..=m as u32)
            .map(|r| expansion_coefficient(r, ai, bi))
            .collect::<Result<_>>()?;
        let mut next = vec![ExactRational::zero(); by_r.len() + m];
        for (i, x) in by_r.iter().enumerate() {
            for (j, c) in coeffs.iter().enumerate() {
                next[i + j] += &(x * c);
            }
        }
        by_r = next;
    }

    let mut total = ExactRational::zero();
    for (big_r, c) in by_r.iter().enumerate() {
        let big_r = big_r as u32;
        let term = c * &(pdf(2 * big_r) * pdf(2 * s - 2 * big_r + n - 2));
        if big_r % 2 == 1 {
            total -= &term;
        } else {
            total += &term;
        }
    }
    Ok(pdf(n - 1) / pdf(n - 2) * total / pdf(2 * s + n - 1))
}

/// `Phi(2a; 2b)` through the elementary expansion: an explicit sum over
/// every `(r_1, ..., r_q)` of `prod K_{r_i}` times [`elementary_phi`].
/// Independent of [`phi_two_row`]'s grouping.
pub fn phi_elementary_expansion(a: &[u32], b: &[u32], n: u32) -> Result<ExactRational> {
    check_n(n)?;
    check_half_pair(a, b)?;
    let big_a: u32 = a.iter().sum();
    let big_b: u32 = b.iter().sum();
    let bounds: Vec<u32> = a.iter().zip(b).map(|(&x, &y)| x.min(y)).collect();
    let mut r = vec![0u32; a.len()];
    let mut total = ExactRational::zero();
    loop {
        let big_r: u32 = r.iter().sum();
        let mut coeff = ExactRational::one();
        for ((&ri, &ai), &bi) in r.iter().zip(a).zip(b) {
            coeff *= expansion_coefficient(ri, ai, bi)?;
        }
        total += coeff * elementary_phi(big_r, big_a - big_r, big_b - big_r, n)?;
        // odometer
        let mut i = 0;
        loop {
            if i == r.len() {
                return Ok(total);
            }
            if r[i] < bounds[i] {
                r[i] += 1;
                break;
            }
            r[i] = 0;
            i += 1;
        }
    }
}

/// `Phi` for literal even exponents.
pub fn phi_literal(spec: &TwoRowSpec, n: u32) -> Result<ExactRational> {
    let (a, b) = spec.halves()?;
    phi_two_row(&a, &b, n)
}

/// `I(2a; 2b)` from the two-row formula. Inputs are half-exponents.
pub fn integral_two_row(a: &[u32], b: &[u32], n: u32) -> Result<ExactRational> {
    check_half_pair(a, b)?;
    if a.is_empty() {
        return Ok(ExactRational::one());
    }
    let phi = phi_two_row(a, b, n)?;
    let spec = TwoRowSpec {
        a: a.iter().map(|x| 2 * x).collect(),
        b: b.iter().map(|x| 2 * x).collect(),
    };
    integral_from_phi(&PhiValue { value: phi, n, spec })
}

/// `Phi(a c; b 0)` for even `a, b, c`.
pub fn phi_triangular(a: u32, b: u32, c: u32, n: u32) -> Result<ExactRational> {
    check_n(n)?;
    check_even(&[a, b, c], "triangular argument")?;
    Ok(pdf(n - 1) / pdf(n - 2) * pdf(a + c + n - 2) * pdf(b + c + n - 2)
        / (pdf(c + n - 2) * pdf(a + b + c + n - 1)))
}

/// `Phi(a c_1 .. c_q; b 0 .. 0)`: the triangular formula with `c = sum c_i`.
pub fn phi_compressed(a: u32, b: u32, c: &[u32], n: u32) -> Result<ExactRational> {
    check_even(c, "compressed block")?;
    phi_triangular(a, b, c.iter().sum(), n)
}

/// Joint moment `int x^alpha y^beta` of two coordinates in generic position.
pub fn joint_moments(alpha: u32, beta: u32, n: u32) -> Result<ExactRational> {
    check_n(n)?;
    if alpha % 2 == 1 || beta % 2 == 1 {
        return Ok(ExactRational::zero());
    }
    Ok(fact(n - 2) * pdf(alpha) * pdf(beta) * pdf(alpha + beta + n - 2)
        / (pdf(alpha + n - 2) * pdf(beta + n - 2) * pdf(alpha + beta + n - 1)))
}
