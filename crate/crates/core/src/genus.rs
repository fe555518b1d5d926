//! The genus basis `(y^{1/2} + y^{-1/2})^{2g}` and the q-kernels of the
//! stable-pair/BPS correspondence.
//!
//! Exponents are in half-units throughout, so `q = s^2`. Functions that take
//! `hi` truncate infinite expansions after `s^hi`; finite kernels are
//! returned exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{binomial, from_bigint, sign, to_integer, Rational};
use crate::series::{HalfLaurent, Window};

/// Integers `n_g` indexed by genus. Zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenusVector {
    entries: BTreeMap<i64, BigInt>,
}

impl GenusVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut v = GenusVector::new();
        for (g, n) in entries {
            v.add(g, &n);
        }
        v
    }

    /// Convenience for small tables.
    pub fn from_i64(entries: &[(i64, i64)]) -> Self {
        Self::from_entries(entries.iter().map(|&(g, n)| (g, BigInt::from(n))))
    }

    pub fn get(&self, g: i64) -> BigInt {
        self.entries.get(&g).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, g: i64, n: BigInt) {
        if n.is_zero() {
            self.entries.remove(&g);
        } else {
            self.entries.insert(g, n);
        }
    }

    pub fn add(&mut self, g: i64, n: &BigInt) {
        let sum = self.get(g) + n;
        self.set(g, sum);
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.entries.iter().map(|(g, n)| (*g, n))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_genus(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_genus(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    /// True when no negative genus carries a nonzero entry.
    pub fn vanishes_below_zero(&self) -> bool {
        self.min_genus().is_none_or(|g| g >= 0)
    }

    pub fn scaled(&self, c: &BigInt) -> GenusVector {
        GenusVector::from_entries(self.iter().map(|(g, n)| (g, n * c)))
    }
}

impl fmt::Display for GenusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (g, n)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "n{g}={n}")?;
        }
        write!(f, "}}")
    }
}

/// `(s^a + sign * s^-a)^power` expanded, with `a` in half-units.
fn binomial_power(a: i64, minus: bool, power: u64) -> HalfLaurent {
    let n = power as i64;
    HalfLaurent::polynomial((0..=power).map(|i| {
        let c = from_bigint(&binomial(power, i));
        let c = if minus { c * sign(i as i64) } else { c };
        (a * (n - 2 * i as i64), c)
    }))
}

/// `(y^{1/2} + y^{-1/2})^{2g}` for `g >= 0`.
pub fn genus_basis(g: i64) -> HalfLaurent {
    assert!(g >= 0, "genus basis needs g >= 0");
    binomial_power(1, false, 2 * g as u64)
}

fn to_integer_at(value: &Rational, g: i64) -> Result<BigInt> {
    to_integer(value).ok_or_else(|| Error::NotIntegral {
        location: format!("g={g}"),
        value: value.clone(),
    })
}

/// Rewrites a symmetric Laurent polynomial in `y` as
/// `Σ n_g (y^{1/2} + y^{-1/2})^{2g}`, peeling off the top degree each step.
pub fn decompose_symmetric(p: &HalfLaurent) -> Result<GenusVector> {
    if !p.is_polynomial() {
        return Err(Error::Window("decomposition needs a polynomial".into()));
    }
    p.require_integer_exponents()?;
    if !p.is_symmetric() {
        return Err(Error::Asymmetric);
    }
    let mut rest = p.clone();
    let mut out = GenusVector::new();
    while let Some(top) = rest.max_exponent() {
        let g = top / 2;
        let c = rest.coeff(top);
        out.set(g, to_integer_at(&c, g)?);
        rest = &rest - &genus_basis(g).scale(&c);
    }
    Ok(out)
}

/// `Σ n_g (y^{1/2} + y^{-1/2})^{2g}`.
pub fn recompose(n: &GenusVector) -> Result<HalfLaurent> {
    if let Some(g) = n.min_genus().filter(|g| *g < 0) {
        return Err(Error::NegativeGenus(g));
    }
    Ok(n.iter().fold(HalfLaurent::zero(), |acc, (g, c)| {
        &acc + &genus_basis(g).scale(&from_bigint(c))
    }))
}

/// Value at `y = -1`; for `recompose(n)` this is `n_0`.
pub fn eval_minus_one(p: &HalfLaurent) -> Result<Rational> {
    p.eval_minus_one()
}

/// `(q^{1/2} + q^{-1/2})^{2g-2}`, expanded as a power series in `q` for
/// `g <= 0` and truncated after `s^hi`.
pub fn kernel_plus(g: i64, hi: i64) -> HalfLaurent {
    if g >= 1 {
        return binomial_power(1, false, 2 * (g - 1) as u64);
    }
    // q^m / (1+q)^{2m} with m = 1 - g
    let m = 1 - g;
    let terms = (0..)
        .map(|j: i64| (m + j, j))
        .take_while(|(e, _)| 2 * e <= hi)
        .map(|(e, j)| {
            let c = from_bigint(&binomial((2 * m + j - 1) as u64, j as u64)) * sign(j);
            (e, c)
        });
    HalfLaurent::from_q(terms, Window::Through(hi))
}

/// `(q^{k/2} - q^{-k/2})^{2g-2}`, expanded as a power series in `q` for
/// `g <= 0` and truncated after `s^hi`.
pub fn kernel_minus(g: i64, k: i64, hi: i64) -> HalfLaurent {
    assert!(k >= 1, "multiple-cover index must be positive");
    if g >= 1 {
        return binomial_power(k, true, 2 * (g - 1) as u64);
    }
    // q^{km} / (1 - q^k)^{2m} with m = 1 - g
    let m = 1 - g;
    let terms = (0..)
        .map(|j: i64| (k * (m + j), j))
        .take_while(|(e, _)| 2 * e <= hi)
        .map(|(e, j)| (e, from_bigint(&binomial((2 * m + j - 1) as u64, j as u64))));
    HalfLaurent::from_q(terms, Window::Through(hi))
}

/// `Σ_g n_g (-1)^{g-1} (q^{1/2} - q^{-1/2})^{2g-2}` through `s^hi`.
pub fn qseries_from_genus(n: &GenusVector, hi: i64) -> HalfLaurent {
    let window = if n.vanishes_below_zero() && n.get(0).is_zero() {
        Window::Polynomial
    } else {
        Window::Through(hi)
    };
    let sum = n.iter().fold(HalfLaurent::new([], window), |acc, (g, c)| {
        &acc + &kernel_minus(g, 1, hi).scale(&(from_bigint(c) * sign(g - 1)))
    });
    sum
}

/// `q - 2 + q^{-1} = (q^{1/2} - q^{-1/2})^2`.
fn u_kernel() -> HalfLaurent {
    binomial_power(1, true, 2)
}

/// Inverts `L = Σ_g n_g (-1)^{g-1} (q^{1/2} - q^{-1/2})^{2g-2}`.
///
/// After multiplying by `(1-q)^2/q` the genus-`g` piece is `(-1)^{g-1} u^g`
/// with `u = q - 2 + q^{-1}`. Genera `g_max..=0` are read off the lowest
/// exponent `q^{-g}` from the top down; negative genera are read off the
/// lowest positive exponent, as far as the window resolves them. Any
/// principal part below `q^{-g_max}` is reported as a residual.
pub fn extract_genus_from_qseries(l: &HalfLaurent, g_max: i64) -> Result<GenusVector> {
    if g_max < 0 {
        return Err(Error::Invalid("g_max must be nonnegative".into()));
    }
    l.require_integer_exponents()?;
    let u = u_kernel();
    let mut rest = &u * l;
    let mut out = GenusVector::new();

    if let Some(low) = rest.min_exponent() {
        if low < -2 * g_max {
            return Err(Error::Residual {
                location: String::new(),
                reason: format!(
                    "term q^{} below q^-{g_max}: genus support exceeds g_max",
                    low / 2
                ),
            });
        }
    }
    if let Window::Through(hi) = rest.window() {
        if hi < 0 {
            return Err(Error::Window(format!(
                "series known only through s^{} cannot resolve genus 0",
                hi + 2
            )));
        }
    }

    for g in (0..=g_max).rev() {
        let c = rest.coeff_q(-g);
        if c.is_zero() {
            continue;
        }
        let n = c.clone() * sign(g - 1);
        out.set(g, to_integer_at(&n, g)?);
        let piece = if g == 0 {
            HalfLaurent::constant(c)
        } else {
            u.pow(g as u32).scale(&c)
        };
        rest = &rest - &piece;
    }

    match rest.window() {
        Window::Polynomial => {
            if !rest.is_zero() {
                return Err(Error::Residual {
                    location: String::new(),
                    reason: "negative-genus tail of an exact polynomial does not terminate".into(),
                });
            }
        }
        Window::Through(hi) => {
            let mut m = 1;
            while 2 * m <= hi {
                let c = rest.coeff_q(m);
                if !c.is_zero() {
                    let n = c.clone() * sign(m + 1);
                    out.set(-m, to_integer_at(&n, -m)?);
                    rest = &rest - &kernel_minus(1 - m, 1, hi).scale(&c);
                }
                m += 1;
            }
        }
    }
    debug_assert!(rest.is_zero());
    Ok(out)
}

/// `Σ n_g kernel_plus(g)`: the stable-pair series of an irreducible cycle.
pub fn pt_local_irreducible(n: &GenusVector, hi: i64) -> Result<HalfLaurent> {
    if let Some(g) = n.min_genus().filter(|g| *g < 0) {
        return Err(Error::NegativeGenus(g));
    }
    let window = if n.get(0).is_zero() {
        Window::Polynomial
    } else {
        Window::Through(hi)
    };
    Ok(n.iter().fold(HalfLaurent::new([], window), |acc, (g, c)| {
        &acc + &kernel_plus(g, hi).scale(&from_bigint(c))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn y(coeffs: &[(i64, i64)]) -> HalfLaurent {
        HalfLaurent::from_q(coeffs.iter().map(|&(e, c)| (e, int(c))), Window::Polynomial)
    }

    /// Power series of `num/den` by long division, through `q^hi`.
    fn long_division(num: &[(i64, i64)], den: &[(i64, i64)], hi: i64) -> Vec<(i64, i64)> {
        let mut rem: BTreeMap<i64, i64> = num.iter().copied().collect();
        let (d0e, d0c) = den[0];
        let mut out = Vec::new();
        let start = *rem.keys().next().unwrap() - d0e;
        for e in start..=hi {
            let c = rem.get(&(e + d0e)).copied().unwrap_or(0);
            if c == 0 {
                continue;
            }
            assert_eq!(c % d0c, 0);
            let coeff = c / d0c;
            out.push((e, coeff));
            for &(de, dc) in den {
                *rem.entry(e + de).or_insert(0) -= coeff * dc;
            }
        }
        out
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose_symmetric(&y(&[(0, 7)])).unwrap(), GenusVector::from_i64(&[(0, 7)]));
        assert_eq!(
            decompose_symmetric(&y(&[(1, 1), (0, 2), (-1, 1)])).unwrap(),
            GenusVector::from_i64(&[(1, 1)])
        );
        assert_eq!(
            decompose_symmetric(&y(&[(1, 4), (0, 8 + 5), (-1, 4)])).unwrap(),
            GenusVector::from_i64(&[(1, 4), (0, 5)])
        );
        // (y^{1/2}+y^{-1/2})^4 = y^2+4y+6+4y^-1+y^-2, so the difference is -(y+2+y^-1)
        assert_eq!(
            decompose_symmetric(&y(&[(2, 1), (1, 3), (0, 4), (-1, 3), (-2, 1)])).unwrap(),
            GenusVector::from_i64(&[(2, 1), (1, -1)])
        );
    }

    #[test]
    fn decompose_errors() {
        assert_eq!(decompose_symmetric(&y(&[(1, 1)])), Err(Error::Asymmetric));
        let half = HalfLaurent::polynomial([(1, int(1)), (-1, int(1))]);
        assert_eq!(decompose_symmetric(&half), Err(Error::HalfIntegerExponent(-1)));
        let frac = HalfLaurent::constant(crate::rational::ratio(1, 2));
        assert!(matches!(decompose_symmetric(&frac), Err(Error::NotIntegral { .. })));
    }

    #[test]
    fn recompose_examples() {
        assert_eq!(recompose(&GenusVector::from_i64(&[(0, 1)])).unwrap(), HalfLaurent::one());
        assert_eq!(
            recompose(&GenusVector::from_i64(&[(1, 1)])).unwrap(),
            y(&[(1, 1), (0, 2), (-1, 1)])
        );
        assert_eq!(
            recompose(&GenusVector::from_i64(&[(1, 4)])).unwrap(),
            y(&[(1, 4), (0, 8), (-1, 4)])
        );
        assert_eq!(
            recompose(&GenusVector::from_i64(&[(-1, 1)])),
            Err(Error::NegativeGenus(-1))
        );
    }

    #[test]
    fn evaluation_at_minus_one() {
        assert_eq!(eval_minus_one(&y(&[(1, 1), (0, 2), (-1, 1)])).unwrap(), int(0));
        assert_eq!(eval_minus_one(&y(&[(0, 5)])).unwrap(), int(5));
        let nodal = recompose(&GenusVector::from_i64(&[(0, -1), (1, 1)])).unwrap();
        assert_eq!(eval_minus_one(&nodal).unwrap(), int(-1));
    }

    #[test]
    fn kernels_against_long_division() {
        assert_eq!(kernel_plus(1, 10), HalfLaurent::one());
        assert_eq!(kernel_plus(2, 10), y(&[(1, 1), (0, 2), (-1, 1)]));
        let expected = long_division(&[(1, 1)], &[(0, 1), (1, 2), (2, 1)], 4);
        assert_eq!(expected, vec![(1, 1), (2, -2), (3, 3), (4, -4)]);
        assert_eq!(
            kernel_plus(0, 8),
            HalfLaurent::from_q(expected.iter().map(|&(e, c)| (e, int(c))), Window::Through(8))
        );

        assert_eq!(kernel_minus(1, 3, 10), HalfLaurent::one());
        let expected = long_division(&[(1, 1)], &[(0, 1), (1, -2), (2, 1)], 3);
        assert_eq!(expected, vec![(1, 1), (2, 2), (3, 3)]);
        assert_eq!(
            kernel_minus(0, 1, 6),
            HalfLaurent::from_q(expected.iter().map(|&(e, c)| (e, int(c))), Window::Through(6))
        );
        let expected = long_division(&[(2, 1)], &[(0, 1), (2, -2), (4, 1)], 6);
        assert_eq!(expected, vec![(2, 1), (4, 2), (6, 3)]);
        assert_eq!(
            kernel_minus(0, 2, 12),
            HalfLaurent::from_q(expected.iter().map(|&(e, c)| (e, int(c))), Window::Through(12))
        );
        // deeper negative genus: q^2/(1-q)^4
        let expected = long_division(&[(2, 1)], &[(0, 1), (1, -4), (2, 6), (3, -4), (4, 1)], 7);
        assert_eq!(
            kernel_minus(-1, 1, 14),
            HalfLaurent::from_q(expected.iter().map(|&(e, c)| (e, int(c))), Window::Through(14))
        );
    }

    #[test]
    fn kernel_inverse_laws() {
        let w = 16;
        let plus = y(&[(1, 1), (0, 2), (-1, 1)]);
        assert_eq!((&kernel_plus(0, w) * &plus).coeffs(), HalfLaurent::one().coeffs());
        let minus = y(&[(1, 1), (0, -2), (-1, 1)]);
        assert_eq!((&kernel_minus(0, 1, w) * &minus).coeffs(), HalfLaurent::one().coeffs());
    }

    #[test]
    fn extraction_examples() {
        assert_eq!(
            extract_genus_from_qseries(&HalfLaurent::one(), 3).unwrap(),
            GenusVector::from_i64(&[(1, 1)])
        );
        let l = kernel_minus(0, 1, 12).scale(&int(-1));
        assert_eq!(extract_genus_from_qseries(&l, 2).unwrap(), GenusVector::from_i64(&[(0, 1)]));
        let l = &y(&[(1, -1), (0, 2), (-1, -1)]) - &kernel_minus(0, 1, 12);
        assert_eq!(
            extract_genus_from_qseries(&l, 2).unwrap(),
            GenusVector::from_i64(&[(2, 1), (0, 1)])
        );
    }

    #[test]
    fn extraction_errors() {
        let l = y(&[(-3, 1), (3, 1)]);
        assert!(matches!(extract_genus_from_qseries(&l, 2), Err(Error::Residual { .. })));
        let l = HalfLaurent::from_q([(1, crate::rational::ratio(1, 2))], Window::through_q(6));
        assert!(matches!(extract_genus_from_qseries(&l, 1), Err(Error::NotIntegral { .. })));
        let exact_tail = y(&[(1, 1)]);
        assert!(matches!(
            extract_genus_from_qseries(&exact_tail, 1),
            Err(Error::Residual { .. })
        ));
    }

    #[test]
    fn forward_and_back_with_negative_genera() {
        let n = GenusVector::from_i64(&[(-3, 2), (-1, -1), (0, 5), (2, 3)]);
        let l = qseries_from_genus(&n, 30);
        assert_eq!(extract_genus_from_qseries(&l, 2).unwrap(), n);
    }

    #[test]
    fn irreducible_local_series() {
        let nodal = pt_local_irreducible(&GenusVector::from_i64(&[(0, -1), (1, 1)]), 6).unwrap();
        assert_eq!(
            nodal,
            HalfLaurent::from_q([(0, 1), (1, -1), (2, 2), (3, -3)].map(|(e, c)| (e, int(c))), Window::Through(6))
        );
        let cusp = pt_local_irreducible(&GenusVector::from_i64(&[(0, -2), (1, 1)]), 6).unwrap();
        assert_eq!(
            cusp,
            HalfLaurent::from_q([(0, 1), (1, -2), (2, 4), (3, -6)].map(|(e, c)| (e, int(c))), Window::Through(6))
        );
    }
}
