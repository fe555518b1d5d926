use std::collections::BTreeMap;

use super::tables::GVTable;
use super::Convention;
use crate::error::{Error, Result};
use crate::genus::{extract_genus_from_qseries, kernel_minus};
use crate::rational::{from_bigint, int, sign};
use crate::series::{CurveClass, DegreeCutoff, GradedSeries, Terms, Window};

/// `Σ (n/k) (-1)^{g-1} (q^{k/2} - q^{-k/2})^{2g-2} t^{kβ}` with each kernel
/// expanded through `s^hi`.
fn log_series(n: &GVTable, cutoff: &DegreeCutoff, hi: i64) -> GradedSeries {
    let mut terms: Terms<CurveClass> = BTreeMap::new();
    for (beta, g, value) in n.iter() {
        let mut k = 1;
        loop {
            let target = beta.scale(k);
            if !cutoff.contains(&target) {
                break;
            }
            let c = from_bigint(value) * sign(g - 1) / int(k);
            let term = kernel_minus(g, k, hi).scale(&c);
            let sum = match terms.remove(&target) {
                Some(existing) => &existing + &term,
                None => term,
            };
            terms.insert(target, sum);
            k += 1;
        }
    }
    GradedSeries::from_terms(cutoff.clone(), terms)
}

fn resolved_through(z: &GradedSeries, hi: i64) -> bool {
    z.window().covers(hi)
}

/// Stable-pair series from integer invariants of any genus.
///
/// In the global convention the coefficient of `t^β` is `Σ_n P_{n,β} (-q)^n`
/// written in the variable `q`; the local convention substitutes `q -> -q`.
/// The result is exact when every entry has positive genus, and otherwise
/// known uniformly through `s^hi` on every class of the cutoff.
pub fn pt_from_gv(
    n: &GVTable,
    cutoff: &DegreeCutoff,
    hi: i64,
    convention: Convention,
) -> Result<GradedSeries> {
    cutoff.check_rank(n.rank())?;
    if hi < 0 {
        return Err(Error::Window(format!(
            "window s^{hi} is too shallow to hold the constant term"
        )));
    }
    let exact = n.min_genus().is_none_or(|g| g >= 1);
    let pole = n.max_genus().map_or(0, |g| (g - 1).max(0));
    let mut margin = 2 * pole * cutoff.max_chain() + 2;
    let z = loop {
        let z = log_series(n, cutoff, hi + margin).exp()?;
        if exact || resolved_through(&z, hi) {
            break z;
        }
        margin *= 2;
    };
    let z = if exact {
        z
    } else {
        let truncated = z.truncate(hi);
        GradedSeries::from_uniform(
            cutoff.clone(),
            Window::Through(hi),
            truncated.terms().map(|(b, v)| (b.clone(), v.clone())),
        )?
    };
    match convention {
        Convention::GlobalQ => Ok(z),
        Convention::LocalMinusQ => z.negate_variable(),
    }
}

/// Smallest window at which [`gv_from_pt`] recovers `n` from
/// `pt_from_gv(n, cutoff, hi, _)`.
///
/// The logarithm of a truncated series loses as many half-units as the poles
/// of its factors add up to, and the deepest negative genus needs that many
/// more positive powers to be read off.
pub fn resolving_window(n: &GVTable, cutoff: &DegreeCutoff) -> i64 {
    let pole = n.max_genus().map_or(0, |g| (g - 1).max(0));
    let depth = n.min_genus().map_or(0, |g| (-g).max(0));
    2 * pole * cutoff.max_chain() + 2 + 2 * depth
}

/// Integer invariants of every genus in `g_max..` read off `log Z`,
/// stripping multiple covers class by class in monoid order.
pub fn gv_from_pt(z: &GradedSeries, g_max: i64, convention: Convention) -> Result<GVTable> {
    let z = match convention {
        Convention::GlobalQ => z.clone(),
        Convention::LocalMinusQ => z.negate_variable()?,
    };
    let log = z.log()?;
    let cutoff = z.cutoff();
    let mut table = GVTable::new(z.rank());
    for beta in cutoff.classes().into_iter().filter(|b| !b.is_zero()) {
        let mut rest = log.coeff(&beta);
        let hi = rest.window().hi().unwrap_or(0);
        for k in 2..=cutoff.max_chain() {
            let Some(base) = beta.divide(k) else { continue };
            for (g, value) in table.genus_vector(&base).iter() {
                let c = from_bigint(value) * sign(g - 1) / int(k);
                rest = &rest - &kernel_minus(g, k, hi).scale(&c);
            }
        }
        let v = extract_genus_from_qseries(&rest, g_max)
            .map_err(|e| e.at(format!("beta={beta}")))?;
        table.set_genus_vector(&beta, &v)?;
    }
    Ok(table)
}

/// The exact logarithm `Σ (n/k)(-1)^{g-1} kernel t^{kβ}` in the global
/// convention, through `s^hi`.
pub fn pt_log_from_gv(n: &GVTable, cutoff: &DegreeCutoff, hi: i64) -> Result<GradedSeries> {
    cutoff.check_rank(n.rank())?;
    Ok(log_series(n, cutoff, hi))
}
