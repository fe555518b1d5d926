use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, sign, Rational};

/// How far a [`HalfLaurent`] is known.
///
/// `Through(hi)` means every coefficient of `s^u` with `u <= hi` is exact and
/// nothing is known above `hi`. `Polynomial` means the value is exact
/// everywhere and has finite support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Window {
    Polynomial,
    Through(i64),
}

impl Window {
    pub fn hi(self) -> Option<i64> {
        match self {
            Window::Polynomial => None,
            Window::Through(hi) => Some(hi),
        }
    }

    /// The less precise of two windows.
    pub fn meet(self, other: Window) -> Window {
        match (self, other) {
            (Window::Polynomial, w) | (w, Window::Polynomial) => w,
            (Window::Through(a), Window::Through(b)) => Window::Through(a.min(b)),
        }
    }

    /// Window in integer powers of `q = s^2`, exact through `q^hi`.
    pub fn through_q(hi: i64) -> Window {
        Window::Through(2 * hi)
    }

    pub fn covers(self, u: i64) -> bool {
        match self {
            Window::Polynomial => true,
            Window::Through(hi) => u <= hi,
        }
    }
}

/// Laurent polynomial or truncated Laurent series in a variable `s` whose
/// square is the ambient variable (`q` or `y`).
///
/// Exponents are stored in half-units: the key `u` stands for `s^u`. Zero
/// coefficients are never stored and every stored exponent lies inside the
/// window, so derived equality is equality of values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfLaurent {
    coeffs: BTreeMap<i64, Rational>,
    window: Window,
}

impl HalfLaurent {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, Rational)>, window: Window) -> Self {
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (u, c) in coeffs {
            if window.covers(u) {
                *map.entry(u).or_insert_with(Rational::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        HalfLaurent { coeffs: map, window }
    }

    pub fn polynomial(coeffs: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        Self::new(coeffs, Window::Polynomial)
    }

    /// Builds from integer exponents of `q` (or `y`), i.e. even half-units.
    pub fn from_q(coeffs: impl IntoIterator<Item = (i64, Rational)>, window: Window) -> Self {
        Self::new(coeffs.into_iter().map(|(n, c)| (2 * n, c)), window)
    }

    pub fn zero() -> Self {
        Self::polynomial([])
    }

    /// Zero known only through `s^hi`.
    pub fn zero_through(hi: i64) -> Self {
        Self::new([], Window::Through(hi))
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial([(0, c)])
    }

    pub fn monomial(u: i64, c: Rational) -> Self {
        Self::polynomial([(u, c)])
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, u: i64) -> Rational {
        self.coeffs.get(&u).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `q^n`, i.e. of `s^{2n}`.
    pub fn coeff_q(&self, n: i64) -> Rational {
        self.coeff(2 * n)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.window == Window::Polynomial
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lower end of the window as serialized: the lowest stored exponent, or
    /// the upper end when nothing is stored.
    pub fn lo(&self) -> i64 {
        match (self.min_exponent(), self.window) {
            (Some(u), _) => u,
            (None, Window::Through(hi)) => hi,
            (None, Window::Polynomial) => 0,
        }
    }

    /// A lower bound for the true valuation, counting the unknown tail.
    /// `None` for the exact zero polynomial.
    pub(crate) fn valuation_bound(&self) -> Option<i64> {
        match (self.min_exponent(), self.window) {
            (None, Window::Polynomial) => None,
            (Some(u), Window::Polynomial) => Some(u),
            (None, Window::Through(hi)) => Some(hi + 1),
            (Some(u), Window::Through(hi)) => Some(u.min(hi + 1)),
        }
    }

    /// True when every exponent is an integer power of the ambient variable.
    pub fn has_integer_exponents(&self) -> bool {
        self.coeffs.keys().all(|u| u.is_even())
    }

    pub(crate) fn require_integer_exponents(&self) -> Result<()> {
        match self.coeffs.keys().find(|u| u.is_odd()) {
            Some(&u) => Err(Error::HalfIntegerExponent(u)),
            None => Ok(()),
        }
    }

    pub fn with_window(&self, window: Window) -> Self {
        Self::new(self.coeffs.clone(), window)
    }

    /// Restricts the window to exponents `<= hi`.
    pub fn truncate(&self, hi: i64) -> Self {
        self.with_window(self.window.meet(Window::Through(hi)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|(u, x)| (*u, x * c)), self.window)
    }

    /// Multiplies by `s^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        let window = match self.window {
            Window::Polynomial => Window::Polynomial,
            Window::Through(hi) => Window::Through(hi + shift),
        };
        Self::new(self.coeffs.iter().map(|(u, c)| (u + shift, c.clone())), window)
    }

    /// Substitutes `q -> q^k` (exponents scale by `k`).
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k >= 1, "dilation factor must be positive");
        let window = match self.window {
            Window::Polynomial => Window::Polynomial,
            // O(s^{hi+1}) becomes O(s^{k(hi+1)})
            Window::Through(hi) => Window::Through(k * (hi + 1) - 1),
        };
        Self::new(self.coeffs.iter().map(|(u, c)| (u * k, c.clone())), window)
    }

    /// Substitutes `q -> -q`; needs integer exponents of `q`.
    pub fn negate_variable(&self) -> Result<Self> {
        self.require_integer_exponents()?;
        Ok(Self::new(
            self.coeffs.iter().map(|(u, c)| (*u, c * sign(u / 2))),
            self.window,
        ))
    }

    /// Symmetric under `u -> -u`; only meaningful for polynomials.
    pub fn is_symmetric(&self) -> bool {
        self.is_polynomial() && self.coeffs.iter().all(|(u, c)| self.coeff(-u) == *c)
    }

    /// Value at `y = -1` of a polynomial in integer powers of `y`.
    pub fn eval_minus_one(&self) -> Result<Rational> {
        self.require_integer_exponents()?;
        if !self.is_polynomial() {
            return Err(Error::Window("evaluation needs a polynomial".into()));
        }
        Ok(self
            .coeffs
            .iter()
            .fold(Rational::zero(), |acc, (u, c)| acc + c * sign(u / 2)))
    }

    fn product_window(&self, other: &Self) -> Window {
        match (self.window, other.window) {
            (Window::Polynomial, Window::Polynomial) => Window::Polynomial,
            (Window::Polynomial, Window::Through(hb)) => match self.min_exponent() {
                None => Window::Polynomial,
                Some(va) => Window::Through(hb + va),
            },
            (Window::Through(ha), Window::Polynomial) => match other.min_exponent() {
                None => Window::Polynomial,
                Some(vb) => Window::Through(ha + vb),
            },
            (Window::Through(ha), Window::Through(hb)) => {
                let va = self.valuation_bound().unwrap_or(ha + 1);
                let vb = other.valuation_bound().unwrap_or(hb + 1);
                Window::Through((ha + vb).min(hb + va))
            }
        }
    }

    /// Product that refuses when the operands share no resolved coefficient.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let product = self * other;
        if let (Some(va), Some(vb), Window::Through(hi)) =
            (self.min_exponent(), other.min_exponent(), product.window)
        {
            if hi < va + vb {
                return Err(Error::Window(format!(
                    "product of windows resolves nothing (exact through s^{hi}, leading term s^{})",
                    va + vb
                )));
            }
        }
        Ok(product)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = HalfLaurent::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse. Polynomials with more than one term have an
    /// infinite inverse and need `target`, the last exponent to compute.
    pub fn inverse(&self, target: Option<i64>) -> Result<Self> {
        let v = self
            .min_exponent()
            .ok_or_else(|| Error::Window("cannot invert zero".into()))?;
        let lead = self.coeff(v);
        if self.is_polynomial() && self.coeffs.len() == 1 {
            return Ok(HalfLaurent::monomial(-v, Rational::one() / lead));
        }
        let hi = match (self.window, target) {
            (Window::Through(h), Some(t)) => (h - 2 * v).min(t),
            (Window::Through(h), None) => h - 2 * v,
            (Window::Polynomial, Some(t)) => t,
            (Window::Polynomial, None) => {
                return Err(Error::Window(
                    "inverse of a multi-term polynomial needs a truncation target".into(),
                ))
            }
        };
        let inv_lead = Rational::one() / &lead;
        let steps = (hi + v).max(-1);
        let mut d: Vec<Rational> = Vec::with_capacity((steps + 1).max(0) as usize);
        for n in 0..=steps {
            if n == 0 {
                d.push(inv_lead.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for j in 1..=n {
                if let Some(c) = self.coeffs.get(&(v + j)) {
                    acc += c * &d[(n - j) as usize];
                }
            }
            d.push(-(acc * &inv_lead));
        }
        Ok(Self::new(
            d.into_iter().enumerate().map(|(n, c)| (n as i64 - v, c)),
            Window::Through(hi),
        ))
    }
}

impl Add for &HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, other: &HalfLaurent) -> HalfLaurent {
        let window = self.window.meet(other.window);
        HalfLaurent::new(
            self.coeffs
                .iter()
                .chain(other.coeffs.iter())
                .map(|(u, c)| (*u, c.clone())),
            window,
        )
    }
}

impl Sub for &HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, other: &HalfLaurent) -> HalfLaurent {
        self + &(-other)
    }
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        self.scale(&int(-1))
    }
}

impl Mul for &HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, other: &HalfLaurent) -> HalfLaurent {
        let window = self.product_window(other);
        let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ua, ca) in &self.coeffs {
            for (ub, cb) in &other.coeffs {
                let u = ua + ub;
                if window.covers(u) {
                    *acc.entry(u).or_insert_with(Rational::zero) += ca * cb;
                }
            }
        }
        HalfLaurent::new(acc, window)
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (u, c)) in self.coeffs.iter().enumerate() {
            let (sign, c) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            match (*u, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "s^{u}")?,
                _ => write!(f, "{c}*s^{u}")?,
            }
        }
        if let Window::Through(hi) = self.window {
            write!(f, " + O(s^{})", hi + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[(i64, i64)]) -> HalfLaurent {
        HalfLaurent::from_q(coeffs.iter().map(|&(n, c)| (n, int(c))), Window::Polynomial)
    }

    #[test]
    fn binomial_square() {
        let a = HalfLaurent::polynomial([(1, int(1)), (-1, int(1))]);
        let expected = HalfLaurent::polynomial([(2, int(1)), (0, int(2)), (-2, int(1))]);
        assert_eq!(&a * &a, expected);
        assert_eq!(&a * &HalfLaurent::one(), a);
    }

    #[test]
    fn truncated_product_cancels_inside_window() {
        // q/(1-q)^2 through q^5, computed by long division
        let mut series = Vec::new();
        let mut rem: BTreeMap<i64, i64> = [(1, 1)].into();
        let denom = [(0, 1), (1, -2), (2, 1)];
        for n in 0..=5 {
            let c = rem.get(&n).copied().unwrap_or(0);
            if c != 0 {
                series.push((n, int(c)));
                for (d, dc) in denom {
                    *rem.entry(n + d).or_insert(0) -= c * dc;
                }
            }
        }
        let s = HalfLaurent::from_q(series, Window::through_q(5));
        let u = q(&[(1, 1), (0, -2), (-1, 1)]);
        let product = u.try_mul(&s).unwrap();
        assert_eq!(product.window(), Window::through_q(4));
        assert_eq!(product, HalfLaurent::one().with_window(Window::through_q(4)));
    }

    #[test]
    fn zero_times_series_is_exact_zero() {
        let s = HalfLaurent::from_q([(1, int(3))], Window::through_q(4));
        assert_eq!(&HalfLaurent::zero() * &s, HalfLaurent::zero());
    }

    #[test]
    fn inverse_of_geometric_denominator() {
        let one_minus_q = q(&[(0, 1), (1, -1)]);
        let inv = one_minus_q.inverse(Some(8)).unwrap();
        for n in 0..=4 {
            assert_eq!(inv.coeff_q(n), int(1));
        }
        assert_eq!(inv.window(), Window::Through(8));
        let back = &inv * &one_minus_q;
        assert_eq!(back, HalfLaurent::one().with_window(Window::Through(8)));
        assert!(HalfLaurent::zero().inverse(Some(3)).is_err());
        assert!(one_minus_q.inverse(None).is_err());
    }

    #[test]
    fn negate_variable_and_symmetry() {
        let p = q(&[(1, 1), (0, 2), (-1, 1)]);
        assert!(p.is_symmetric());
        assert_eq!(p.negate_variable().unwrap(), q(&[(1, -1), (0, 2), (-1, -1)]));
        assert_eq!(p.eval_minus_one().unwrap(), int(0));
        let half = HalfLaurent::monomial(1, int(1));
        assert_eq!(half.negate_variable(), Err(Error::HalfIntegerExponent(1)));
    }

    #[test]
    fn dilation_window() {
        let s = HalfLaurent::from_q([(1, int(1)), (2, int(2))], Window::through_q(2));
        let d = s.dilate(2);
        assert_eq!(d.coeff_q(2), int(1));
        assert_eq!(d.coeff_q(4), int(2));
        // the unknown tail O(s^5) becomes O(s^10)
        assert_eq!(d.window(), Window::Through(9));
    }
}
