//! Shared oracles and corpora for the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use ptsym::template::{BinOp, Expr};

pub type C = Complex64;

/// `sqrt(x)` for real `x`, on the principal branch.
pub fn real_root(x: f64) -> C {
    if x >= 0.0 {
        C::new(x.sqrt(), 0.0)
    } else {
        C::new(0.0, (-x).sqrt())
    }
}

/// `shift ± sqrt(a² - b²)`, the two-level closed form all built-in families share.
pub fn closed_pair(shift: C, a: f64, b: f64) -> [C; 2] {
    let r = real_root(a * a - b * b);
    [shift + r, shift - r]
}

/// Worst mismatch between two 2-element spectra under the better pairing.
pub fn pair_distance(x: &[C], y: &[C]) -> f64 {
    assert_eq!((x.len(), y.len()), (2, 2));
    let straight = (x[0] - y[0]).norm().max((x[1] - y[1]).norm());
    let crossed = (x[0] - y[1]).norm().max((x[1] - y[0]).norm());
    straight.min(crossed)
}

pub fn uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

const NAMES: [&str; 5] = ["a", "b", "c", "gamma", "x_1"];

/// Random expression tree of bounded depth. Literals are non-negative;
/// negation only appears as an explicit `Neg` node.
pub fn random_expr(rng: &mut StdRng, depth: usize) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..4) {
            0 => Expr::I,
            1 => Expr::Param(NAMES[rng.gen_range(0..NAMES.len())].to_string()),
            2 => Expr::Num(rng.gen_range(0..100) as f64),
            _ => Expr::Num(rng.gen_range(0.0..1e3)),
        };
    }
    match rng.gen_range(0..6) {
        0 => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
        1 => Expr::Sqrt(Box::new(random_expr(rng, depth - 1))),
        k => {
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][k - 2];
            Expr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
        }
    }
}

/// Template sources that must be rejected with a located error.
pub const MALFORMED_TEMPLATES: &[(&str, &str)] = &[
    ("empty file", ""),
    ("only comments", "# nothing here\n# still nothing\n"),
    ("missing name", "params: a\ndim: 2\na | 0\n0 | a\n"),
    ("empty name", "name:\nparams: a\ndim: 2\na | 0\n0 | a\n"),
    ("headers out of order", "params: a\nname: x\ndim: 2\na | 0\n0 | a\n"),
    ("missing dim", "name: x\nparams: a\na | 0\n0 | a\n"),
    ("dim not a number", "name: x\nparams: a\ndim: two\na | 0\n0 | a\n"),
    ("dim too small", "name: x\nparams: a\ndim: 1\na\n"),
    ("dim too large", "name: x\nparams: a\ndim: 9\na\n"),
    ("negative dim", "name: x\nparams: a\ndim: -2\na | 0\n0 | a\n"),
    ("too few rows", "name: x\nparams: a\ndim: 2\na | 0\n"),
    ("too many rows", "name: x\nparams: a\ndim: 2\na | 0\n0 | a\n1 | 1\n"),
    ("short row", "name: x\nparams: a\ndim: 2\na\n0 | a\n"),
    ("long row", "name: x\nparams: a\ndim: 2\na | 0 | 1\n0 | a\n"),
    ("duplicate parameter", "name: x\nparams: a, a\ndim: 2\na | 0\n0 | a\n"),
    ("reserved parameter i", "name: x\nparams: i\ndim: 2\n1 | 0\n0 | 1\n"),
    ("reserved parameter sqrt", "name: x\nparams: sqrt\ndim: 2\n1 | 0\n0 | 1\n"),
    ("bad parameter name", "name: x\nparams: 2a\ndim: 2\n1 | 0\n0 | 1\n"),
    ("undeclared identifier", "name: x\nparams: a\ndim: 2\na | b\n0 | a\n"),
    ("dangling operator", "name: x\nparams: a\ndim: 2\na + | 0\n0 | a\n"),
    ("doubled operator", "name: x\nparams: a\ndim: 2\na +* a | 0\n0 | a\n"),
    ("unbalanced open paren", "name: x\nparams: a\ndim: 2\n(a + 1 | 0\n0 | a\n"),
    ("unbalanced close paren", "name: x\nparams: a\ndim: 2\na + 1) | 0\n0 | a\n"),
    ("empty entry", "name: x\nparams: a\ndim: 2\n | 0\n0 | a\n"),
    ("sqrt without parens", "name: x\nparams: a\ndim: 2\nsqrt a | 0\n0 | a\n"),
    ("unknown character", "name: x\nparams: a\ndim: 2\na $ 1 | 0\n0 | a\n"),
    ("malformed number", "name: x\nparams: a\ndim: 2\n1.2.3 | 0\n0 | a\n"),
    ("dangling exponent", "name: x\nparams: a\ndim: 2\n1e | 0\n0 | a\n"),
    ("implicit product", "name: x\nparams: a\ndim: 2\n2 a | 0\n0 | a\n"),
    ("deep nesting", concat!(
        "name: x\nparams: a\ndim: 2\n",
        "((((((((((((((((((((((((((((((((((((((((((((((((((((((((((((((((((((",
        "a",
        "))))))))))))))))))))))))))))))))))))))))))))))))))))))))))))))))))))",
        " | 0\n0 | a\n"
    )),
];
