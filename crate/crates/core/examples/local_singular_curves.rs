//! Local invariants of a nodal and a cuspidal rational curve.

use gvkit::chow::{local_gv_from_pt, local_pt_from_gv, ChowModel, Cycle, LocalGVTable};
use gvkit::genus::pt_local_irreducible;
use gvkit::perverse::fixtures::{cusp_local, nodal_local};
use gvkit::transforms::Convention;
use gvkit::{CurveClass, Result};

fn main() -> Result<()> {
    let model = ChowModel::single_support(CurveClass::new([1]), 1)?;
    for fixture in [nodal_local()?, cusp_local()?] {
        let n = fixture.invariants()?;
        let series = pt_local_irreducible(&n, 6)?;
        println!("{}: {n}", fixture.name);
        println!("  local pair series: {series}");

        let mut table = LocalGVTable::new();
        table.set_genus_vector(&Cycle::new([1]), &n)?;
        let p = local_pt_from_gv(&table, &model, 6, Convention::LocalMinusQ)?;
        assert_eq!(p.get(&Cycle::new([1])), series);
        assert_eq!(local_gv_from_pt(&p, &model, 1, Convention::LocalMinusQ)?, table);
    }
    Ok(())
}
