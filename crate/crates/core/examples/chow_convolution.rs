//! Convolution on a two-generator Chow model and its compatibility with integration.

use gvkit::chow::{conv_exp, conv_log, convolve, integrate_function, ChowModel, Cycle, Generator, LocalFunction, Overflow, Point};
use gvkit::rational::int;
use gvkit::{CurveClass, HalfLaurent, Result};

fn main() -> Result<()> {
    let generators = vec![
        Generator { label: "A".into(), class: CurveClass::new([1, 0]) },
        Generator { label: "B".into(), class: CurveClass::new([0, 1]) },
    ];
    let points = [([1, 0], 2), ([0, 1], -1), ([1, 1], 3), ([2, 0], 1)]
        .into_iter()
        .map(|(m, e)| Point { cycle: Cycle::new(m), euler: e, label: None })
        .collect();
    let model = ChowModel::new(2, generators, points)?;

    let f = LocalFunction::new([
        (Cycle::new([0, 0]), HalfLaurent::one()),
        (Cycle::new([1, 0]), HalfLaurent::monomial(2, int(1))),
        (Cycle::new([0, 1]), HalfLaurent::monomial(-2, int(3))),
    ]);
    let square = convolve(&f, &f, &model, Overflow::Drop)?;
    for (cycle, value) in square.iter() {
        println!("(f*f)({cycle}) = {value}");
    }

    let log = conv_log(&f, &model)?;
    assert!(conv_exp(&log, &model)?.agrees_with(&f));

    for (class, value) in integrate_function(&square, &model)? {
        println!("integral at {class}: {value}");
    }
    Ok(())
}
