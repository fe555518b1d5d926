//! The three normalizations of the I_n double fiber on an Enriques surface.

use gvkit::perverse::behrend_euler_check;
use gvkit::perverse::fixtures::enriques_in;
use gvkit::Result;

fn main() -> Result<()> {
    println!("{:>2}  {:>5}  {:>4}  {:>4}  {:>4}", "n", "row", "n0", "n1", "y=-1");
    for n in 2..=9 {
        for f in enriques_in(n)? {
            let v = f.invariants()?;
            let at_minus_one = f.datum.total().eval_minus_one()?;
            println!("{n:>2}  {:>5}  {:>4}  {:>4}  {:>4}", f.name, v.get(0), v.get(1), at_minus_one);
            if let Some(strata) = &f.strata {
                assert_eq!(behrend_euler_check(strata), 0);
            }
        }
    }
    Ok(())
}
