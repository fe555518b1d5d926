use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::half_laurent::{HalfLaurent, Window};
use super::lattice::{CurveClass, DegreeCutoff, LatticeMap};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Coefficients indexed by monoid elements.
///
/// A key missing from the map is exactly zero. A stored zero with a
/// truncated window records that the coefficient vanishes only as far as it
/// is known. Each stored coefficient carries its own window, which keeps
/// products of series with principal parts from losing more precision than
/// the class actually forces.
pub(crate) type Terms<K> = BTreeMap<K, HalfLaurent>;

fn keep(coeff: &HalfLaurent) -> bool {
    !(coeff.is_zero() && coeff.is_polynomial())
}

pub(crate) fn add_terms<K: Ord + Clone>(a: &Terms<K>, b: &Terms<K>) -> Terms<K> {
    let mut out = a.clone();
    for (k, v) in b {
        let sum = match out.get(k) {
            Some(existing) => existing + v,
            None => v.clone(),
        };
        out.insert(k.clone(), sum);
    }
    out.retain(|_, v| keep(v));
    out
}

pub(crate) fn scale_terms<K: Ord + Clone>(a: &Terms<K>, c: &Rational) -> Terms<K> {
    let mut out: Terms<K> = a.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect();
    out.retain(|_, v| keep(v));
    out
}

/// Monoid-ring product. `combine` maps a pair of keys to the target key and
/// an optional scalar weight, or `None` when the product falls outside the
/// truncation.
pub(crate) fn product_terms<K, F>(a: &Terms<K>, b: &Terms<K>, combine: F) -> Result<Terms<K>>
where
    K: Ord + Clone,
    F: Fn(&K, &K) -> Result<Option<(K, Option<Rational>)>>,
{
    let mut out: Terms<K> = BTreeMap::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let Some((target, weight)) = combine(ka, kb)? else {
                continue;
            };
            let mut prod = va * vb;
            if let Some(w) = weight {
                prod = prod.scale(&w);
            }
            let sum = match out.remove(&target) {
                Some(existing) => &existing + &prod,
                None => prod,
            };
            out.insert(target, sum);
        }
    }
    out.retain(|_, v| keep(v));
    Ok(out)
}

/// `exp(x)` for `x` with no component at the unit key.
pub(crate) fn exp_terms<K, M>(x: &Terms<K>, unit: K, mul: M) -> Result<Terms<K>>
where
    K: Ord + Clone,
    M: Fn(&Terms<K>, &Terms<K>) -> Result<Terms<K>>,
{
    let mut result: Terms<K> = [(unit.clone(), HalfLaurent::one())].into();
    let mut power = result.clone();
    let mut j = 1i64;
    loop {
        power = scale_terms(&mul(&power, x)?, &(Rational::one() / int(j)));
        if power.is_empty() {
            break;
        }
        result = add_terms(&result, &power);
        j += 1;
    }
    Ok(result)
}

/// `log(1 + x)` for `x` with no component at the unit key.
pub(crate) fn log_terms<K, M>(x: &Terms<K>, mul: M) -> Result<Terms<K>>
where
    K: Ord + Clone,
    M: Fn(&Terms<K>, &Terms<K>) -> Result<Terms<K>>,
{
    let mut result: Terms<K> = BTreeMap::new();
    let mut power = x.clone();
    let mut j = 1i64;
    while !power.is_empty() {
        let sign = if j % 2 == 1 { int(1) } else { int(-1) };
        result = add_terms(&result, &scale_terms(&power, &(sign / int(j))));
        power = mul(&power, x)?;
        j += 1;
    }
    Ok(result)
}

/// `1 / (1 + y)` for `y` with no component at the unit key.
pub(crate) fn inverse_terms<K, M>(y: &Terms<K>, unit: K, mul: M) -> Result<Terms<K>>
where
    K: Ord + Clone,
    M: Fn(&Terms<K>, &Terms<K>) -> Result<Terms<K>>,
{
    let minus_y = scale_terms(y, &int(-1));
    let mut result: Terms<K> = [(unit, HalfLaurent::one())].into();
    let mut power = minus_y.clone();
    while !power.is_empty() {
        result = add_terms(&result, &power);
        power = mul(&power, &minus_y)?;
    }
    Ok(result)
}

/// Series graded by effective curve classes inside a degree cutoff, with
/// [`HalfLaurent`] coefficients.
#[derive(Clone, Debug)]
pub struct GradedSeries {
    cutoff: DegreeCutoff,
    terms: Terms<CurveClass>,
}

impl GradedSeries {
    /// Builds from explicit coefficients; classes not listed are exactly zero.
    pub fn new(
        cutoff: DegreeCutoff,
        terms: impl IntoIterator<Item = (CurveClass, HalfLaurent)>,
    ) -> Result<Self> {
        let mut map: Terms<CurveClass> = BTreeMap::new();
        for (beta, coeff) in terms {
            cutoff.check_rank(beta.rank())?;
            if !beta.is_effective() {
                return Err(Error::Invalid(format!("class {beta} is not effective")));
            }
            if !cutoff.contains(&beta) {
                return Err(Error::Invalid(format!("class {beta} exceeds the cutoff")));
            }
            let sum = match map.remove(&beta) {
                Some(existing) => &existing + &coeff,
                None => coeff,
            };
            map.insert(beta, sum);
        }
        map.retain(|_, v| keep(v));
        Ok(GradedSeries { cutoff, terms: map })
    }

    /// Builds a series known uniformly through `window`: every class in the
    /// cutoff, listed or not, carries that window.
    pub fn from_uniform(
        cutoff: DegreeCutoff,
        window: Window,
        terms: impl IntoIterator<Item = (CurveClass, HalfLaurent)>,
    ) -> Result<Self> {
        let mut series = Self::new(cutoff, terms)?;
        if let Window::Through(hi) = window {
            for beta in series.cutoff.classes() {
                let coeff = series
                    .terms
                    .get(&beta)
                    .map(|c| c.with_window(c.window().meet(window)))
                    .unwrap_or_else(|| HalfLaurent::zero_through(hi));
                series.terms.insert(beta, coeff);
            }
        } else {
            for coeff in series.terms.values_mut() {
                *coeff = coeff.with_window(coeff.window().meet(window));
            }
        }
        Ok(series)
    }

    /// The multiplicative unit `t^0`.
    pub fn one(cutoff: DegreeCutoff) -> Self {
        let zero = CurveClass::zero(cutoff.rank());
        GradedSeries {
            cutoff,
            terms: [(zero, HalfLaurent::one())].into(),
        }
    }

    pub fn zero(cutoff: DegreeCutoff) -> Self {
        GradedSeries {
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn from_terms(cutoff: DegreeCutoff, terms: Terms<CurveClass>) -> Self {
        GradedSeries { cutoff, terms }
    }

    pub fn rank(&self) -> usize {
        self.cutoff.rank()
    }

    pub fn cutoff(&self) -> &DegreeCutoff {
        &self.cutoff
    }

    /// Coefficient of `t^beta`; exactly zero when nothing is stored.
    pub fn coeff(&self, beta: &CurveClass) -> HalfLaurent {
        self.terms.get(beta).cloned().unwrap_or_else(HalfLaurent::zero)
    }

    /// Nonzero coefficients, in lexicographic class order.
    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &HalfLaurent)> {
        self.terms.iter().filter(|(_, v)| !v.is_zero())
    }

    /// The common window: the least precise of all coefficients.
    pub fn window(&self) -> Window {
        self.terms
            .values()
            .fold(Window::Polynomial, |w, v| w.meet(v.window()))
    }

    /// Truncates every coefficient to the common window.
    pub fn uniform(&self) -> GradedSeries {
        let window = self.window();
        let terms = self
            .terms()
            .map(|(k, v)| (k.clone(), v.with_window(window)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        GradedSeries {
            cutoff: self.cutoff.clone(),
            terms,
        }
    }

    pub fn truncate(&self, hi: i64) -> GradedSeries {
        let mut terms: Terms<CurveClass> = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v.truncate(hi)))
            .collect();
        terms.retain(|_, v| keep(v));
        GradedSeries {
            cutoff: self.cutoff.clone(),
            terms,
        }
    }

    /// True when both series agree on every class as far as both are known.
    pub fn agrees_with(&self, other: &GradedSeries) -> bool {
        if self.cutoff != other.cutoff {
            return false;
        }
        let keys: std::collections::BTreeSet<&CurveClass> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| (&self.coeff(k) - &other.coeff(k)).is_zero())
    }

    /// Rewrites each coefficient with `q -> -q`.
    pub fn negate_variable(&self) -> Result<GradedSeries> {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.negate_variable()?)))
            .collect::<Result<_>>()?;
        Ok(GradedSeries {
            cutoff: self.cutoff.clone(),
            terms,
        })
    }

    fn check_compatible(&self, other: &GradedSeries) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other)?;
        Ok(Self::from_terms(
            self.cutoff.clone(),
            add_terms(&self.terms, &other.terms),
        ))
    }

    pub fn sub(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> GradedSeries {
        Self::from_terms(self.cutoff.clone(), scale_terms(&self.terms, c))
    }

    /// Monoid-ring product, truncated to the cutoff.
    pub fn mul(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other)?;
        let terms = mul_in_cutoff(&self.cutoff, &self.terms, &other.terms)?;
        Ok(Self::from_terms(self.cutoff.clone(), terms))
    }

    /// Splits off the coefficient at the zero class, which must be exactly
    /// `expected` as far as it is known.
    fn without_constant(&self, expected: &HalfLaurent, label: &'static str) -> Result<Terms<CurveClass>> {
        let zero = CurveClass::zero(self.rank());
        let constant = self.coeff(&zero);
        if constant.coeffs() != expected.coeffs() {
            return Err(Error::ConstantTerm { expected: label });
        }
        let mut x = self.terms.clone();
        x.remove(&zero);
        Ok(x)
    }

    /// `log` of a series with constant term 1.
    pub fn log(&self) -> Result<GradedSeries> {
        let x = self.without_constant(&HalfLaurent::one(), "1")?;
        let cutoff = &self.cutoff;
        let terms = log_terms(&x, |a, b| mul_in_cutoff(cutoff, a, b))?;
        Ok(Self::from_terms(self.cutoff.clone(), terms))
    }

    /// `exp` of a series with vanishing constant term.
    pub fn exp(&self) -> Result<GradedSeries> {
        let x = self.without_constant(&HalfLaurent::zero(), "0")?;
        let cutoff = &self.cutoff;
        let unit = CurveClass::zero(self.rank());
        let terms = exp_terms(&x, unit, |a, b| mul_in_cutoff(cutoff, a, b))?;
        Ok(Self::from_terms(self.cutoff.clone(), terms))
    }

    /// `self / divisor` for a divisor with constant term 1.
    pub fn div(&self, divisor: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(divisor)?;
        let y = divisor
            .without_constant(&HalfLaurent::one(), "1")
            .map_err(|_| Error::NonUnit)?;
        let cutoff = &self.cutoff;
        let unit = CurveClass::zero(self.rank());
        let inv = inverse_terms(&y, unit, |a, b| mul_in_cutoff(cutoff, a, b))?;
        let terms = mul_in_cutoff(cutoff, &self.terms, &inv)?;
        Ok(Self::from_terms(self.cutoff.clone(), terms))
    }

    /// Variable change `t^beta -> t^{phi(beta)}` into a new cutoff.
    ///
    /// Fails, listing every offending class, when a nonzero term leaves the
    /// effective cone. Terms whose image exceeds `target` and classes of
    /// `target` whose preimage lies outside this series' cutoff are reported
    /// in the result rather than silently dropped; the latter are unknown
    /// and are left out of the returned series.
    pub fn push_class(&self, phi: &LatticeMap, target: &DegreeCutoff) -> Result<PushForward> {
        self.cutoff.check_rank(phi.rank())?;
        target.check_rank(phi.rank())?;
        let mut offending = Vec::new();
        let mut beyond_cutoff = Vec::new();
        let mut terms: Terms<CurveClass> = BTreeMap::new();
        for (beta, coeff) in &self.terms {
            let image = phi.apply(beta);
            if !image.is_effective() {
                if !coeff.is_zero() {
                    offending.push((beta.clone(), image));
                }
                continue;
            }
            if !target.contains(&image) {
                if !coeff.is_zero() {
                    beyond_cutoff.push(image);
                }
                continue;
            }
            terms.insert(image, coeff.clone());
        }
        if !offending.is_empty() {
            return Err(Error::LeavesEffectiveCone(offending));
        }
        let inverse = phi.inverse();
        let unresolved = target
            .classes()
            .into_iter()
            .filter(|b| {
                let pre = inverse.apply(b);
                pre.is_effective() && !self.cutoff.contains(&pre)
            })
            .collect();
        Ok(PushForward {
            series: GradedSeries {
                cutoff: target.clone(),
                terms,
            },
            beyond_cutoff,
            unresolved,
        })
    }

    /// Variable change onto arbitrary (possibly non-effective) classes.
    pub fn push_signed(&self, phi: &LatticeMap) -> BTreeMap<CurveClass, HalfLaurent> {
        self.terms
            .iter()
            .map(|(beta, coeff)| (phi.apply(beta), coeff.clone()))
            .collect()
    }
}

pub(crate) fn mul_in_cutoff(
    cutoff: &DegreeCutoff,
    a: &Terms<CurveClass>,
    b: &Terms<CurveClass>,
) -> Result<Terms<CurveClass>> {
    product_terms(a, b, |x, y| {
        let sum = x.add(y);
        Ok(cutoff.contains(&sum).then_some((sum, None)))
    })
}

/// Result of [`GradedSeries::push_class`].
#[derive(Clone, Debug)]
pub struct PushForward {
    pub series: GradedSeries,
    /// Images of nonzero terms that exceed the target cutoff.
    pub beyond_cutoff: Vec<CurveClass>,
    /// Target classes whose preimage is effective but outside the source cutoff.
    pub unresolved: Vec<CurveClass>,
}

impl PartialEq for GradedSeries {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.uniform(), other.uniform());
        a.cutoff == b.cutoff && self.window() == other.window() && a.terms == b.terms
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (beta, coeff) in self.terms() {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "t^{beta}: {coeff}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
