//! Gromov-Witten invariants of a single rigid rational curve and back.

use gvkit::rational::format_rational;
use gvkit::transforms::{gv_from_gw, gw_from_gv, GVTable};
use gvkit::{CurveClass, DegreeCutoff, Result};

fn main() -> Result<()> {
    let n = GVTable::from_i64(1, &[(&[1], 0, 1)])?;
    let cutoff = DegreeCutoff::total_degree(1, 6)?;
    let gw = gw_from_gv(&n, &cutoff, Some(2))?;

    println!("{:>3}  {:>10}  {:>10}  {:>10}", "k", "GW_0", "GW_1", "GW_2");
    for k in 1..=6 {
        let beta = CurveClass::new([k]);
        let cell = |g| format_rational(&gw.get(&beta, g));
        println!("{k:>3}  {:>10}  {:>10}  {:>10}", cell(0), cell(1), cell(2));
    }

    let back = gv_from_gw(&gw, &cutoff, 2)?;
    assert_eq!(back, n);
    println!("recovered: {back}");
    Ok(())
}
