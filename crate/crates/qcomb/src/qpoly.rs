//! Exact integer-coefficient polynomials in `q`.
//!
//! Every identity in this crate is an equality of such polynomials, so the
//! arithmetic is deliberately strict: coefficients are `i64` and every
//! operation is overflow-checked. An overflow panics with the operation and
//! degree instead of wrapping, and an inexact division inside the q-binomial
//! product panics as well — both indicate a bug upstream, never valid data.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use crate::Error;

/// Polynomial in `q`, stored densely by ascending degree.
///
/// Trailing zero coefficients are trimmed; the zero polynomial stores an
/// empty vector. Values are immutable after construction and safe to share
/// between threads.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<i64>,
}

fn checked_add(op: &str, degree: usize, a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("coefficient overflow in {op} at degree {degree}"))
}

fn checked_mul(op: &str, degree: usize, a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .unwrap_or_else(|| panic!("coefficient overflow in {op} at degree {degree}"))
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    /// The monomial `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        QPoly { coeffs }
    }

    /// Coefficients listed by ascending degree; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, degree: usize) -> i64 {
        self.coeffs.get(degree).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Multiplication by `q^k`.
    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![0; k + self.coeffs.len()];
        coeffs[k..].copy_from_slice(&self.coeffs);
        QPoly { coeffs }
    }

    pub fn scaled(&self, c: i64) -> Self {
        QPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(d, &a)| checked_mul("scale", d, a, c))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of coefficients, i.e. the value at `q = 1`.
    pub fn eval_at_one(&self) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .fold(0i64, |acc, (d, &c)| checked_add("eval_at_one", d, acc, c))
    }

    /// Exact division; panics if the divisor is zero or does not divide
    /// `self` exactly. Used for the q-binomial product, where an inexact
    /// step is an arithmetic bug rather than an input error.
    pub fn div_exact(&self, divisor: &QPoly) -> QPoly {
        assert!(!divisor.is_zero(), "exact division by zero polynomial");
        if self.is_zero() {
            return QPoly::zero();
        }
        let dd = divisor.coeffs.len() - 1;
        let dl = divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            panic!("inexact polynomial division: degree too small");
        }
        let mut quot = vec![0i64; rem.len() - dd];
        for qd in (0..quot.len()).rev() {
            let lead = rem[qd + dd];
            if lead == 0 {
                continue;
            }
            assert!(lead % dl == 0, "inexact polynomial division at degree {}", qd + dd);
            let f = lead / dl;
            quot[qd] = f;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                let sub = checked_mul("div_exact", qd + i, dc, f);
                rem[qd + i] = rem[qd + i]
                    .checked_sub(sub)
                    .unwrap_or_else(|| panic!("coefficient overflow in div_exact at degree {}", qd + i));
            }
        }
        assert!(
            rem.iter().all(|&c| c == 0),
            "inexact polynomial division: nonzero remainder"
        );
        QPoly::from_coeffs(quot)
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let mut coeffs = vec![0i64; self.coeffs.len().max(rhs.coeffs.len())];
        for (d, c) in coeffs.iter_mut().enumerate() {
            *c = checked_add("add", d, self.coeff(d), rhs.coeff(d));
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Add for QPoly {
    type Output = QPoly;

    fn add(self, rhs: QPoly) -> QPoly {
        &self + &rhs
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        *self = &*self + rhs;
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(d, &c)| {
                    c.checked_neg()
                        .unwrap_or_else(|| panic!("coefficient overflow in neg at degree {d}"))
                })
                .collect(),
        )
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let t = checked_mul("mul", i + j, a, b);
                coeffs[i + j] = checked_add("mul", i + j, coeffs[i + j], t);
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Mul for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |acc, p| &acc + &p)
    }
}

/// The q-integer `[n]_q = 1 + q + ... + q^(n-1)`, defined for `n >= 1`.
pub fn qint(n: u64) -> QPoly {
    assert!(n >= 1, "q-integer [n]_q is undefined for n = 0");
    QPoly::from_coeffs(vec![1; n as usize])
}

/// The q-analog of the odd double factorial: the product of `[2k-1]_q`
/// for `k = 1..=n`. The empty product (`n = 0`) is 1.
pub fn odd_double_factorial(n: u64) -> QPoly {
    let mut acc = QPoly::one();
    for k in 1..=n {
        acc = &acc * &qint(2 * k - 1);
    }
    acc
}

/// The Gaussian binomial coefficient; zero when `k < 0` or `k > n`.
///
/// Computed by the product of q-integers with exact division; each partial
/// product is itself a q-binomial, so every division step stays exact.
pub fn gaussian_binomial(n: u64, k: i64) -> QPoly {
    if k < 0 || k as u64 > n {
        return QPoly::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = QPoly::one();
    for i in 1..=k {
        acc = (&acc * &qint(n - k + i)).div_exact(&qint(i));
    }
    acc
}

impl fmt::Display for QPoly {
    /// Renders as `c0 + c1*q + c2*q^2 + ...` with zero terms omitted and
    /// unit coefficients suppressed, e.g. `1 + 2*q + q^2` or `-1 + q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.unsigned_abs();
            match (a, d) {
                (_, 0) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "q^{d}")?,
                (_, 1) => write!(f, "{a}*q")?,
                (_, _) => write!(f, "{a}*q^{d}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for QPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut coeffs: Vec<i64> = Vec::new();
        let mut chars = s.chars().peekable();
        let mut any = false;

        fn skip_ws(chars: &mut std::iter::Peekable<std::str::Chars>) {
            while chars.peek().is_some_and(|c| c.is_whitespace()) {
                chars.next();
            }
        }

        loop {
            skip_ws(&mut chars);
            let mut sign = 1i64;
            match chars.peek() {
                None => break,
                Some('+') => {
                    chars.next();
                }
                Some('-') => {
                    sign = -1;
                    chars.next();
                }
                _ => {
                    if any {
                        return Err(Error::Parse(format!("expected + or - in '{s}'")));
                    }
                }
            }
            skip_ws(&mut chars);

            let mut digits = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                digits.push(chars.next().unwrap());
            }
            let mut coeff: i64 = if digits.is_empty() {
                1
            } else {
                digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in '{s}'")))?
            };
            coeff *= sign;

            skip_ws(&mut chars);
            if !digits.is_empty() && chars.peek() == Some(&'*') {
                chars.next();
                skip_ws(&mut chars);
            }

            let degree = if chars.peek() == Some(&'q') {
                chars.next();
                if chars.peek() == Some(&'^') {
                    chars.next();
                    let mut exp = String::new();
                    while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        exp.push(chars.next().unwrap());
                    }
                    exp.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{s}'")))?
                } else {
                    1
                }
            } else {
                if digits.is_empty() {
                    return Err(Error::Parse(format!("expected term in '{s}'")));
                }
                0
            };

            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, 0);
            }
            coeffs[degree] = checked_add("parse", degree, coeffs[degree], coeff);
            any = true;
        }

        if !any {
            return Err(Error::Parse("empty polynomial".into()));
        }
        Ok(QPoly::from_coeffs(coeffs))
    }
}
