//! The flop identity on a conifold-type pair, and what a wrong coefficient looks like.

use gvkit::flop::{flop_check, FlopFixture};
use gvkit::rational::int;
use gvkit::{CurveClass, GradedSeries, HalfLaurent, Result};

fn main() -> Result<()> {
    let fx = FlopFixture::conifold_pair(4, 6)?;
    let report = flop_check(&fx)?;
    println!("holds: {}, unresolved classes: {}", report.holds(), report.unresolved.len());

    let mut broken = fx.clone();
    let beta = CurveClass::new([1, 1]);
    let terms = fx.pt_xdag.terms().map(|(b, v)| {
        let v = if *b == beta { v + &HalfLaurent::monomial(4, int(1)) } else { v.clone() };
        (b.clone(), v)
    });
    broken.pt_xdag = GradedSeries::new(fx.pt_xdag.cutoff().clone(), terms.collect::<Vec<_>>())?;
    let report = flop_check(&broken)?;
    println!("perturbed holds: {}", report.holds());
    println!("{}", report.residual);
    Ok(())
}
