//! Generators and roundtrip properties shared by the property suite and
//! the acceptance run.

#![allow(dead_code)]

use gvkit::chow::{
    conv_exp, conv_log, local_gv_from_pt, local_pt_from_gv, local_resolving_window, ChowModel,
    Cycle, Generator, LocalFunction, LocalGVTable, Point,
};
use gvkit::genus::{decompose_symmetric, recompose, GenusVector};
use gvkit::rational::ratio;
use gvkit::transforms::{
    gv_from_gw, gv_from_pt, gw_from_gv, pt_from_gv, resolving_window, Convention, GVTable,
};
use gvkit::{CurveClass, DegreeCutoff, HalfLaurent, Window};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Check = Result<(), TestCaseError>;

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

/// A cutoff of rank 1 or 2 with weights in 1..=2 and bound at most 6.
pub fn cutoff() -> impl Strategy<Value = DegreeCutoff> {
    (1usize..=2)
        .prop_flat_map(|rank| (prop::collection::vec(1i64..=2, rank), 1i64..=6))
        .prop_map(|(w, b)| DegreeCutoff::new(w, b).unwrap())
        .prop_filter("some nonzero class", |c| c.classes().len() > 1)
}

/// A table of at most three entries on nonzero classes of `cutoff`, genus
/// in `genera`.
pub fn table_in(cutoff: DegreeCutoff, genera: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = GVTable> {
    let classes: Vec<CurveClass> = cutoff.classes().into_iter().filter(|b| !b.is_zero()).collect();
    let rank = cutoff.rank();
    prop::collection::vec(
        (prop::sample::select(classes), genera, prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])),
        0..=3,
    )
    .prop_map(move |entries| {
        let mut t = GVTable::new(rank);
        for (beta, g, n) in entries {
            t.set(beta, g, n.into()).unwrap();
        }
        t
    })
}

pub fn table_and_cutoff(genera: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = (GVTable, DegreeCutoff)> {
    cutoff().prop_flat_map(move |c| (table_in(c.clone(), genera.clone()), Just(c)))
}

pub fn gv_pt_roundtrip((n, cutoff): (GVTable, DegreeCutoff)) -> Check {
    let hi = resolving_window(&n, &cutoff);
    for convention in [Convention::GlobalQ, Convention::LocalMinusQ] {
        let z = ok(pt_from_gv(&n, &cutoff, hi, convention))?;
        let g_max = n.max_genus().unwrap_or(0).max(0);
        let back = ok(gv_from_pt(&z, g_max, convention))?;
        prop_assert_eq!(&back, &n);
    }
    Ok(())
}

pub fn gv_gw_roundtrip((n, cutoff): (GVTable, DegreeCutoff)) -> Check {
    let g_max = n.max_genus().unwrap_or(0).max(0);
    let gw = ok(gw_from_gv(&n, &cutoff, None))?;
    let back = ok(gv_from_gw(&gw, &cutoff, g_max))?;
    prop_assert_eq!(back, n);
    Ok(())
}

pub fn genus_vector() -> impl Strategy<Value = GenusVector> {
    prop::collection::vec((0i64..=6, -20i64..=20), 0..=5).prop_map(|entries| GenusVector::from_i64(&entries))
}

pub fn decompose_recompose(v: GenusVector) -> Check {
    let p = ok(recompose(&v))?;
    prop_assert!(p.is_symmetric());
    prop_assert_eq!(ok(decompose_symmetric(&p))?, v);
    Ok(())
}

/// A model with one or two generators of classes in rank at most 2, all
/// cycles of total multiplicity at most `top` and nonzero Euler weights.
pub fn model() -> impl Strategy<Value = ChowModel> {
    (1usize..=2, 1usize..=2, 2u32..=4).prop_flat_map(|(rank, gens, top)| {
        let classes = prop::collection::vec(
            prop::collection::vec(0i64..=2, rank).prop_filter("nonzero", |c| c.iter().any(|&x| x > 0)),
            gens,
        );
        let cycles: Vec<Vec<u32>> = all_cycles(gens, top);
        let weights = prop::collection::vec(prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3, 5]), cycles.len());
        (Just(rank), classes, Just(cycles), weights).prop_map(|(rank, classes, cycles, weights)| {
            let generators = classes
                .into_iter()
                .enumerate()
                .map(|(i, c)| Generator { label: format!("g{i}"), class: CurveClass::new(c) })
                .collect();
            let points = cycles
                .into_iter()
                .zip(weights)
                .map(|(m, e)| {
                    let cycle = Cycle::new(m);
                    let euler = if cycle.is_zero() { 1 } else { e };
                    Point { cycle, euler, label: None }
                })
                .collect();
            ChowModel::new(rank, generators, points).unwrap()
        })
    })
}

fn all_cycles(gens: usize, top: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..gens {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=top).map(move |m| {
                    let mut c = prefix.clone();
                    c.push(m);
                    c
                })
            })
            .collect();
    }
    out.retain(|c| c.iter().sum::<u32>() <= top);
    out
}

/// A unit function on `model`: 1 at the zero cycle, random truncated
/// series elsewhere.
pub fn unit_function(model: ChowModel) -> impl Strategy<Value = (LocalFunction, ChowModel)> {
    let cycles: Vec<Cycle> = model.ordered_cycles().into_iter().filter(|c| !c.is_zero()).collect();
    let n = cycles.len();
    (
        prop::collection::vec(prop::collection::vec((-4i64..=6, -5i64..=5, 1i64..=3), 0..=3), n),
        4i64..=10,
    )
        .prop_map(move |(values, hi)| {
            let mut entries = vec![(model.zero_cycle(), HalfLaurent::one())];
            for (cycle, coeffs) in cycles.iter().zip(values) {
                let v = HalfLaurent::new(coeffs.into_iter().map(|(u, a, b)| (u, ratio(a, b))), Window::Through(hi));
                entries.push((cycle.clone(), v));
            }
            (LocalFunction::new(entries).uniform_through(&model, hi), model.clone())
        })
}

pub fn conv_roundtrip((f, model): (LocalFunction, ChowModel)) -> Check {
    let log = ok(conv_log(&f, &model))?;
    let back = ok(conv_exp(&log, &model))?;
    prop_assert!(back.agrees_with(&f), "exp(log f) != f");
    let again = ok(conv_log(&back, &model))?;
    prop_assert!(again.agrees_with(&log), "log(exp g) != g");
    Ok(())
}

pub fn local_table(model: ChowModel) -> impl Strategy<Value = (LocalGVTable, ChowModel)> {
    let cycles: Vec<Cycle> = model.ordered_cycles().into_iter().filter(|c| !c.is_zero()).collect();
    prop::collection::vec(
        (prop::sample::select(cycles), -1i64..=3, prop::sample::select(vec![-2i64, -1, 1, 2])),
        0..=3,
    )
    .prop_map(move |entries| {
        let mut t = LocalGVTable::new();
        for (c, g, n) in entries {
            let sum = t.get(&c, g) + n;
            t.set(c, g, sum).unwrap();
        }
        (t, model.clone())
    })
}

pub fn local_roundtrip((n, model): (LocalGVTable, ChowModel)) -> Check {
    let hi = local_resolving_window(&n, &model);
    let g_max = n.max_genus().unwrap_or(0).max(0);
    for convention in [Convention::LocalMinusQ, Convention::GlobalQ] {
        let p = ok(local_pt_from_gv(&n, &model, hi, convention))?;
        prop_assert_eq!(&ok(local_gv_from_pt(&p, &model, g_max, convention))?, &n);
    }
    Ok(())
}
