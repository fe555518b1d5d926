use std::collections::BTreeMap;
use std::fmt;

use super::model::{ChowModel, Cycle};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::series::{add_terms, exp_terms, log_terms, scale_terms, HalfLaurent, Terms, Window};

/// What to do with mass that lands on a cycle the model does not contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overflow {
    Error,
    /// Treat the model as a truncation and discard the mass.
    Drop,
}

/// Finitely supported function on the points of a Chow model with
/// [`HalfLaurent`] values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalFunction {
    values: Terms<Cycle>,
}

fn keep(v: &HalfLaurent) -> bool {
    !(v.is_zero() && v.is_polynomial())
}

impl LocalFunction {
    pub fn new(values: impl IntoIterator<Item = (Cycle, HalfLaurent)>) -> Self {
        let mut map: Terms<Cycle> = BTreeMap::new();
        for (c, v) in values {
            let sum = match map.remove(&c) {
                Some(existing) => &existing + &v,
                None => v,
            };
            map.insert(c, sum);
        }
        map.retain(|_, v| keep(v));
        LocalFunction { values: map }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The indicator of a single cycle.
    pub fn delta(cycle: Cycle) -> Self {
        Self::new([(cycle, HalfLaurent::one())])
    }

    pub(crate) fn from_terms(values: Terms<Cycle>) -> Self {
        LocalFunction { values }
    }

    pub fn get(&self, cycle: &Cycle) -> HalfLaurent {
        self.values.get(cycle).cloned().unwrap_or_else(HalfLaurent::zero)
    }

    /// Stored values, including zeros that are known only through a window.
    pub fn iter(&self) -> impl Iterator<Item = (&Cycle, &HalfLaurent)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(HalfLaurent::is_zero)
    }

    /// The least precise window among the stored values.
    pub fn window(&self) -> Window {
        self.values
            .values()
            .fold(Window::Polynomial, |w, v| w.meet(v.window()))
    }

    pub fn add(&self, other: &LocalFunction) -> LocalFunction {
        LocalFunction::from_terms(add_terms(&self.values, &other.values))
    }

    pub fn sub(&self, other: &LocalFunction) -> LocalFunction {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> LocalFunction {
        LocalFunction::from_terms(scale_terms(&self.values, c))
    }

    /// True when both functions agree at every point as far as both are known.
    pub fn agrees_with(&self, other: &LocalFunction) -> bool {
        self.sub(other).is_zero()
    }

    /// Substitutes `q -> -q` in every value.
    pub fn negate_variable(&self) -> Result<LocalFunction> {
        let values = self
            .values
            .iter()
            .map(|(c, v)| Ok((c.clone(), v.negate_variable()?)))
            .collect::<Result<_>>()?;
        Ok(LocalFunction { values })
    }

    /// Truncates every value after `s^hi` and records every model point
    /// as known through `s^hi`.
    pub fn uniform_through(&self, model: &ChowModel, hi: i64) -> LocalFunction {
        let mut values: Terms<Cycle> = self
            .values
            .iter()
            .map(|(c, v)| (c.clone(), v.truncate(hi)))
            .collect();
        for p in model.points() {
            values
                .entry(p.cycle.clone())
                .or_insert_with(|| HalfLaurent::zero_through(hi));
        }
        LocalFunction { values }
    }

    pub(crate) fn check_support(&self, model: &ChowModel) -> Result<()> {
        for c in self.values.keys() {
            model.require(c)?;
        }
        Ok(())
    }
}

impl fmt::Display for LocalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.values.iter().filter(|(_, v)| !v.is_zero()) {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{c}: {v}")?;
        }
        Ok(())
    }
}

/// Weighted pushforward of a point mass `e(from) · value` onto `to`.
fn weighted(
    model: &ChowModel,
    to: &Cycle,
    mass_weight: i64,
    value: HalfLaurent,
    overflow: Overflow,
) -> Result<Option<HalfLaurent>> {
    let Some(target) = model.euler(to) else {
        return match overflow {
            Overflow::Drop => Ok(None),
            Overflow::Error => {
                if value.is_zero() {
                    Ok(None)
                } else {
                    Err(Error::OutsideModel(to.to_string()))
                }
            }
        };
    };
    if target == 0 {
        if value.is_zero() || mass_weight == 0 {
            return Ok(None);
        }
        return Err(Error::ZeroWeight(to.to_string()));
    }
    Ok(Some(value.scale(&(int(mass_weight) / int(target)))))
}

fn insert_sum(out: &mut Terms<Cycle>, key: Cycle, value: HalfLaurent) {
    let sum = match out.remove(&key) {
        Some(existing) => &existing + &value,
        None => value,
    };
    out.insert(key, sum);
}

pub(crate) fn convolve_terms(
    model: &ChowModel,
    a: &Terms<Cycle>,
    b: &Terms<Cycle>,
    overflow: Overflow,
) -> Result<Terms<Cycle>> {
    let mut out: Terms<Cycle> = BTreeMap::new();
    for (ca, va) in a {
        let ea = model.require(ca)?.euler;
        for (cb, vb) in b {
            let eb = model.require(cb)?.euler;
            let target = ca.add(cb);
            if overflow == Overflow::Drop && !model.contains(&target) {
                continue;
            }
            if let Some(v) = weighted(model, &target, ea * eb, va * vb, overflow)? {
                insert_sum(&mut out, target, v);
            }
        }
    }
    out.retain(|_, v| keep(v));
    Ok(out)
}

/// Convolution along cycle addition.
///
/// Values are densities against the Euler measure, so
/// `(f·h)(γ) = Σ_{γ1+γ2=γ} e(γ1) e(γ2) f(γ1) h(γ2) / e(γ)`. This is
/// associative, has the indicator of the zero cycle as unit, and reduces to
/// the unweighted pushforward when every target weight is one.
pub fn convolve(
    f: &LocalFunction,
    h: &LocalFunction,
    model: &ChowModel,
    overflow: Overflow,
) -> Result<LocalFunction> {
    f.check_support(model)?;
    h.check_support(model)?;
    Ok(LocalFunction::from_terms(convolve_terms(
        model,
        &f.values,
        &h.values,
        overflow,
    )?))
}

fn split_constant(
    f: &LocalFunction,
    model: &ChowModel,
    expected: &HalfLaurent,
    label: &'static str,
) -> Result<Terms<Cycle>> {
    f.check_support(model)?;
    let zero = model.zero_cycle();
    if f.get(&zero).coeffs() != expected.coeffs() {
        return Err(Error::ConstantTerm { expected: label });
    }
    let mut x = f.values.clone();
    x.remove(&zero);
    Ok(x)
}

/// Logarithm with respect to [`convolve`], with the model as truncation.
pub fn conv_log(f: &LocalFunction, model: &ChowModel) -> Result<LocalFunction> {
    let x = split_constant(f, model, &HalfLaurent::one(), "1")?;
    let terms = log_terms(&x, |a, b| convolve_terms(model, a, b, Overflow::Drop))?;
    Ok(LocalFunction::from_terms(terms))
}

/// Exponential with respect to [`convolve`], with the model as truncation.
pub fn conv_exp(f: &LocalFunction, model: &ChowModel) -> Result<LocalFunction> {
    let x = split_constant(f, model, &HalfLaurent::zero(), "0")?;
    let unit = model.zero_cycle();
    let terms = exp_terms(&x, unit, |a, b| convolve_terms(model, a, b, Overflow::Drop))?;
    Ok(LocalFunction::from_terms(terms))
}

pub(crate) fn push_multiple_with(
    f: &LocalFunction,
    k: u32,
    model: &ChowModel,
    overflow: Overflow,
) -> Result<LocalFunction> {
    if k == 0 {
        return Err(Error::Invalid("multiple must be positive".into()));
    }
    f.check_support(model)?;
    let mut out: Terms<Cycle> = BTreeMap::new();
    for (c, v) in &f.values {
        let e = model.require(c)?.euler;
        let target = c.scale(k);
        if let Some(v) = weighted(model, &target, e, v.clone(), overflow)? {
            insert_sum(&mut out, target, v);
        }
    }
    out.retain(|_, v| keep(v));
    Ok(LocalFunction::from_terms(out))
}

/// Pushforward along `γ -> kγ`: `(k_* f)(kγ) = e(γ) f(γ) / e(kγ)`.
pub fn push_multiple(f: &LocalFunction, k: u32, model: &ChowModel) -> Result<LocalFunction> {
    push_multiple_with(f, k, model, Overflow::Error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::model::{Generator, Point};
    use crate::rational::ratio;
    use crate::series::CurveClass;

    fn line_model(weights: &[i64]) -> ChowModel {
        let points = weights
            .iter()
            .enumerate()
            .map(|(k, &e)| Point {
                cycle: Cycle::new([k as u32]),
                euler: e,
                label: None,
            })
            .collect();
        ChowModel::new(
            1,
            vec![Generator {
                label: "C".into(),
                class: CurveClass::new([1]),
            }],
            points,
        )
        .unwrap()
    }

    fn c(k: u32) -> Cycle {
        Cycle::new([k])
    }

    fn constant(x: i64) -> HalfLaurent {
        HalfLaurent::constant(int(x))
    }

    #[test]
    fn unit_and_simple_products() {
        let model = line_model(&[1, 1, 1]);
        let f = LocalFunction::new([(c(1), constant(3)), (c(2), constant(-1))]);
        let unit = LocalFunction::delta(c(0));
        assert_eq!(convolve(&f, &unit, &model, Overflow::Error).unwrap(), f);
        let g = LocalFunction::delta(c(1));
        assert_eq!(
            convolve(&g, &g, &model, Overflow::Error).unwrap(),
            LocalFunction::delta(c(2))
        );
        let weighted = line_model(&[1, 2, 1]);
        assert_eq!(
            convolve(&g, &g, &weighted, Overflow::Error).unwrap().get(&c(2)),
            constant(4)
        );
        assert_eq!(
            convolve(&f, &f, &model, Overflow::Error),
            Err(Error::OutsideModel("[3]".into()))
        );
    }

    #[test]
    fn zero_weight_target() {
        let model = line_model(&[1, 1, 0]);
        let g = LocalFunction::delta(c(1));
        assert_eq!(
            convolve(&g, &g, &model, Overflow::Error),
            Err(Error::ZeroWeight("[2]".into()))
        );
    }

    #[test]
    fn logarithms() {
        let model = line_model(&[1, 1]);
        assert!(conv_log(&LocalFunction::delta(c(0)), &model).unwrap().is_zero());
        let f = LocalFunction::new([(c(0), constant(1)), (c(1), constant(5))]);
        assert_eq!(
            conv_log(&f, &model).unwrap(),
            LocalFunction::new([(c(1), constant(5))])
        );

        let model = line_model(&[1, 1, 1]);
        let f = LocalFunction::new([(c(0), constant(1)), (c(1), constant(1)), (c(2), constant(1))]);
        let log = conv_log(&f, &model).unwrap();
        assert_eq!(
            log,
            LocalFunction::new([
                (c(1), constant(1)),
                (c(2), HalfLaurent::constant(ratio(1, 2)))
            ])
        );
        assert_eq!(conv_exp(&log, &model).unwrap(), f);
        assert!(matches!(
            conv_log(&LocalFunction::delta(c(1)), &model),
            Err(Error::ConstantTerm { .. })
        ));
    }

    #[test]
    fn multiples() {
        let model = line_model(&[1, 3, 2, 1, 1]);
        let f = LocalFunction::new([(c(1), constant(2)), (c(2), constant(1))]);
        assert_eq!(push_multiple(&f, 1, &model).unwrap(), f);
        let pushed = push_multiple(&f, 2, &model).unwrap();
        assert_eq!(pushed.get(&c(2)), HalfLaurent::constant(ratio(3 * 2, 2)));
        assert_eq!(pushed.get(&c(4)), HalfLaurent::constant(ratio(2, 1)));
        assert!(push_multiple(&f, 3, &model).is_err());
    }

    #[test]
    fn weighted_convolution_is_associative() {
        let model = line_model(&[1, 2, -3, 5]);
        let f = LocalFunction::new([(c(1), constant(1)), (c(2), constant(2))]);
        let g = LocalFunction::new([(c(0), constant(1)), (c(1), constant(-1))]);
        let h = LocalFunction::new([(c(1), constant(4))]);
        let left = convolve(
            &convolve(&f, &g, &model, Overflow::Drop).unwrap(),
            &h,
            &model,
            Overflow::Drop,
        )
        .unwrap();
        let right = convolve(
            &f,
            &convolve(&g, &h, &model, Overflow::Drop).unwrap(),
            &model,
            Overflow::Drop,
        )
        .unwrap();
        assert_eq!(left, right);
    }
}
