//! Decompose symmetric Laurent polynomials in the basis (y^{1/2} + y^{-1/2})^{2g}.

use gvkit::genus::{decompose_symmetric, genus_basis, recompose, GenusVector};
use gvkit::rational::int;
use gvkit::{HalfLaurent, Result, Window};

fn main() -> Result<()> {
    for g in 0..=3 {
        println!("basis g={g}: {}", genus_basis(g));
    }

    // y + 3 + y^{-1} = (y^{1/2} + y^{-1/2})^2 + 1
    let p = HalfLaurent::from_q([(-1, int(1)), (0, int(3)), (1, int(1))], Window::Polynomial);
    let v = decompose_symmetric(&p)?;
    println!("{p}  ->  {v}");
    assert_eq!(v, GenusVector::from_i64(&[(0, 1), (1, 1)]));
    assert_eq!(recompose(&v)?, p);

    // y = -1 reads off n_0.
    println!("value at y = -1: {}", p.eval_minus_one()?);
    Ok(())
}
