//! Euler characteristics of Hilbert schemes of points from the compactified Jacobian.

use gvkit::genus::{recompose, GenusVector};
use gvkit::perverse::{hilbert_euler_from_jacobian, versal_identity_check};
use gvkit::Result;

fn main() -> Result<()> {
    for (name, g, n) in [
        ("smooth rational", 0, GenusVector::from_i64(&[(0, 1)])),
        ("nodal", 1, GenusVector::from_i64(&[(0, -1), (1, 1)])),
        ("cusp", 1, GenusVector::from_i64(&[(0, -2), (1, 1)])),
        ("smooth genus 2", 2, GenusVector::from_i64(&[(2, 1)])),
        ("smooth genus 3", 3, GenusVector::from_i64(&[(3, 1)])),
    ] {
        let jac = recompose(&n)?;
        let hilb = hilbert_euler_from_jacobian(&jac, g, 8)?;
        let check = versal_identity_check(&hilb, &jac, g)?;
        let shown: Vec<String> = hilb.iter().map(ToString::to_string).collect();
        println!("{name:>15}: [{}] holds={}", shown.join(", "), check.holds);
    }
    Ok(())
}
