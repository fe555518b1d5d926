use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::tables::{GVTable, GWTable};
use crate::error::{Error, Result};
use crate::rational::{factorial, from_bigint, int, sign, to_integer, Rational};
use crate::series::{CurveClass, DegreeCutoff, HalfLaurent, Window};

/// Truncated Laurent series in `λ` with a finite principal part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSeries(HalfLaurent);

impl LambdaSeries {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, Rational)>, window: Window) -> Self {
        LambdaSeries(HalfLaurent::new(coeffs, window))
    }

    /// Coefficient of `λ^e`.
    pub fn coeff(&self, e: i64) -> Rational {
        self.0.coeff(e)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.0.coeffs().iter().map(|(e, c)| (*e, c))
    }

    pub fn window(&self) -> Window {
        self.0.window()
    }

    /// The series as a plain Laurent object keyed by `λ` exponents.
    pub fn as_laurent(&self) -> &HalfLaurent {
        &self.0
    }
}

impl fmt::Display for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})λ^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Window::Through(hi) = self.window() {
            write!(f, " + O(λ^{})", hi + 1)?;
        }
        Ok(())
    }
}

/// `2 sin(kλ/2) / (kλ)` through `λ^hi`.
fn normalized_sine(k: i64, hi: i64) -> HalfLaurent {
    let k2 = int(k * k);
    let terms = (0..=hi.max(0) / 2).map(|j| {
        let num = sign(j) * num_traits::pow(k2.clone(), j as usize);
        let den = from_bigint(&factorial(2 * j as u64 + 1)) * num_traits::pow(int(4), j as usize);
        (2 * j, num / den)
    });
    HalfLaurent::new(terms, Window::Through(hi))
}

/// `(2 sin(kλ/2))^{2g-2}` through `λ^order`.
pub fn sin_kernel_lambda(g: i64, k: i64, order: i64) -> Result<LambdaSeries> {
    if g < 0 {
        return Err(Error::NegativeGenus(g));
    }
    if k < 1 {
        return Err(Error::Invalid(format!("cover degree {k} must be positive")));
    }
    if order < 2 * g - 2 {
        return Err(Error::LambdaOrder { order, genus: g });
    }
    if g == 1 {
        return Ok(LambdaSeries(HalfLaurent::one()));
    }
    let e = 2 * g - 2;
    let depth = order - e;
    let t = normalized_sine(k, depth);
    let body = if g == 0 {
        (&t * &t).inverse(Some(depth))?
    } else {
        t.pow(e as u32)
    };
    let lead = num_traits::pow(int(k), e.unsigned_abs() as usize);
    let lead = if e < 0 { lead.recip() } else { lead };
    Ok(LambdaSeries(body.scale(&lead).shift(e)))
}

fn check_rank(cutoff: &DegreeCutoff, rank: usize) -> Result<()> {
    if cutoff.rank() != rank {
        return Err(Error::RankMismatch {
            left: cutoff.rank(),
            right: rank,
        });
    }
    Ok(())
}

/// Memoized `sin_kernel_lambda` at a fixed order.
struct KernelCache {
    order: i64,
    cache: BTreeMap<(i64, i64), HalfLaurent>,
}

impl KernelCache {
    fn new(order: i64) -> Self {
        KernelCache {
            order,
            cache: BTreeMap::new(),
        }
    }

    fn get(&mut self, g: i64, k: i64) -> Result<&HalfLaurent> {
        if !self.cache.contains_key(&(g, k)) {
            let kernel = sin_kernel_lambda(g, k, self.order)?;
            self.cache.insert((g, k), kernel.0);
        }
        Ok(&self.cache[&(g, k)])
    }
}

/// Multiple-cover resummation
/// `Σ GW_{g,β} λ^{2g-2} t^β = Σ n_{g,β}/k (2 sin(kλ/2))^{2g-2} t^{kβ}`.
///
/// `order` defaults to `2·g_max + 2` for the largest input genus; every
/// genus whose coefficient `λ^{2g-2}` falls inside the order is reported.
pub fn gw_from_gv(n: &GVTable, cutoff: &DegreeCutoff, order: Option<i64>) -> Result<GWTable> {
    check_rank(cutoff, n.rank())?;
    if let Some(g) = n.min_genus().filter(|g| *g < 0) {
        return Err(Error::NegativeGenus(g));
    }
    let g_max = n.max_genus().unwrap_or(0);
    let order = order.unwrap_or(2 * g_max + 2);
    if let Some(g) = n.max_genus().filter(|g| 2 * g - 2 > order) {
        return Err(Error::LambdaOrder { order, genus: g });
    }
    let mut kernels = KernelCache::new(order);
    let mut sums: BTreeMap<CurveClass, HalfLaurent> = BTreeMap::new();
    for (beta, g, value) in n.iter() {
        let mut k = 1;
        loop {
            let target = beta.scale(k);
            if !cutoff.contains(&target) {
                break;
            }
            let term = kernels.get(g, k)?.scale(&(from_bigint(value) / int(k)));
            let entry = sums
                .entry(target)
                .or_insert_with(|| HalfLaurent::zero_through(order));
            *entry = &*entry + &term;
            k += 1;
        }
    }
    let top = (order + 2) / 2;
    let mut table = GWTable::new(n.rank());
    for (beta, series) in sums {
        for g in 0..=top {
            table.set(beta.clone(), g, series.coeff(2 * g - 2))?;
        }
    }
    Ok(table)
}

/// Inverts [`gw_from_gv`] for genera `0..=g_max`, class by class in monoid
/// order, failing on the first non-integral invariant.
pub fn gv_from_gw(gw: &GWTable, cutoff: &DegreeCutoff, g_max: i64) -> Result<GVTable> {
    check_rank(cutoff, gw.rank())?;
    if g_max < 0 {
        return Err(Error::Invalid("g_max must be nonnegative".into()));
    }
    if let Some((beta, _, _)) = gw.iter().find(|(b, _, _)| !cutoff.contains(b)) {
        return Err(Error::Invalid(format!("class {beta} exceeds the cutoff")));
    }
    let order = 2 * g_max - 2;
    let mut kernels = KernelCache::new(order);
    let mut table = GVTable::new(gw.rank());
    for beta in cutoff.classes().into_iter().filter(|b| !b.is_zero()) {
        let known = (0..=g_max).map(|g| (2 * g - 2, gw.get(&beta, g)));
        let mut rest = HalfLaurent::new(known, Window::Through(order));
        for k in 2..=cutoff.max_chain() {
            let Some(base) = beta.divide(k) else { continue };
            for (g, n) in table.genus_vector(&base).iter() {
                let term = kernels.get(g, k)?.scale(&(from_bigint(n) / int(k)));
                rest = &rest - &term;
            }
        }
        for g in 0..=g_max {
            let c = rest.coeff(2 * g - 2);
            if c.is_zero() {
                continue;
            }
            let n = to_integer(&c).ok_or_else(|| Error::NotIntegral {
                location: format!("beta={beta} g={g}"),
                value: c.clone(),
            })?;
            rest = &rest - &kernels.get(g, 1)?.scale(&c);
            table.set(beta.clone(), g, n)?;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn sine_kernel_expansions() {
        assert_eq!(sin_kernel_lambda(1, 5, 6).unwrap().coeffs().count(), 1);
        let k0 = sin_kernel_lambda(0, 1, 2).unwrap();
        assert_eq!(k0.coeff(-2), int(1));
        assert_eq!(k0.coeff(0), ratio(1, 12));
        assert_eq!(k0.coeff(2), ratio(1, 240));
        assert_eq!(k0.window(), Window::Through(2));
        let k2 = sin_kernel_lambda(2, 1, 4).unwrap();
        assert_eq!(k2.coeff(2), int(1));
        assert_eq!(k2.coeff(4), ratio(-1, 12));
        let k0_3 = sin_kernel_lambda(0, 3, 2).unwrap();
        assert_eq!(k0_3.coeff(-2), ratio(1, 9));
        assert_eq!(k0_3.coeff(2), ratio(9, 240));
        assert_eq!(
            sin_kernel_lambda(3, 1, 2),
            Err(Error::LambdaOrder { order: 2, genus: 3 })
        );
    }

    #[test]
    fn genus_one_multiple_covers() {
        let cutoff = DegreeCutoff::total_degree(1, 4).unwrap();
        let n = GVTable::from_i64(1, &[(&[1], 1, 1)]).unwrap();
        let gw = gw_from_gv(&n, &cutoff, None).unwrap();
        for k in 1..=4 {
            let beta = CurveClass::new([k]);
            assert_eq!(gw.get(&beta, 1), ratio(1, k));
            assert_eq!(gw.get(&beta, 0), int(0));
            assert_eq!(gw.get(&beta, 2), int(0));
        }
    }

    #[test]
    fn empty_and_non_integral() {
        let cutoff = DegreeCutoff::total_degree(1, 3).unwrap();
        assert!(gw_from_gv(&GVTable::new(1), &cutoff, None).unwrap().is_empty());
        assert!(gv_from_gw(&GWTable::new(1), &cutoff, 2).unwrap().is_empty());
        let gw = GWTable::from_entries(1, [(CurveClass::new([1]), 0, ratio(1, 2))]).unwrap();
        match gv_from_gw(&gw, &cutoff, 1) {
            Err(Error::NotIntegral { location, value }) => {
                assert_eq!(location, "beta=(1) g=0");
                assert_eq!(value, ratio(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn roundtrip_with_mixed_genera() {
        let cutoff = DegreeCutoff::new(vec![1, 1], 4).unwrap();
        let n = GVTable::from_i64(
            2,
            &[(&[1, 0], 0, 1), (&[0, 1], 1, -2), (&[1, 1], 2, 3), (&[2, 0], 0, -5)],
        )
        .unwrap();
        let gw = gw_from_gv(&n, &cutoff, None).unwrap();
        assert_eq!(gv_from_gw(&gw, &cutoff, 2).unwrap(), n);
    }
}
