//! Stable-pair series of a rank-two table, then the table again from the series.

use gvkit::transforms::{gv_from_pt, pt_from_gv, resolving_window, Convention, GVTable};
use gvkit::{DegreeCutoff, Result};

fn main() -> Result<()> {
    let n = GVTable::from_i64(
        2,
        &[(&[1, 0], 0, 3), (&[0, 1], 0, -2), (&[1, 1], 1, 5), (&[2, 1], 2, 1), (&[1, 2], -1, 1)],
    )?;
    let cutoff = DegreeCutoff::new([1, 1], 4)?;
    let hi = resolving_window(&n, &cutoff);
    let z = pt_from_gv(&n, &cutoff, hi, Convention::GlobalQ)?;
    println!("window s^{hi}, {} nonzero classes", z.terms().count());
    for (beta, coeff) in z.terms().take(4) {
        println!("  t^{beta}: {coeff}");
    }

    let back = gv_from_pt(&z, 2, Convention::GlobalQ)?;
    assert_eq!(back, n);
    println!("recovered:\n{back}");
    Ok(())
}
