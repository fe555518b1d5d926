//! Fiber-class invariants of an elliptic fibration, globally and fiber by fiber.

use gvkit::chow::{integrate_table, LocalGVTable};
use gvkit::perverse::fixtures::{elliptic_fiberwise, elliptic_fibration};
use gvkit::perverse::gv_from_perverse;
use gvkit::{CurveClass, Result};

fn main() -> Result<()> {
    let (e_x, e_s) = (-480, 3);
    let global = elliptic_fibration(e_x, e_s)?.invariants()?;
    println!("from the total datum: {global}");

    let (model, datum) = elliptic_fiberwise(e_x, e_s)?;
    let mut local = LocalGVTable::new();
    for (label, v) in gv_from_perverse(&datum)? {
        println!("  {label}: {v}");
        local.set_genus_vector(model.cycle_by_label(&label).expect("labelled point"), &v)?;
    }
    let integrated = integrate_table(&local, &model)?;
    assert_eq!(integrated.genus_vector(&CurveClass::new([1])), global);
    println!("integrated: {integrated}");
    Ok(())
}
