use std::time::Instant;

use pdo_core::diffop::{parse_operator, ParseOptions};
use pdo_core::{OrderKind, Precision};

const P: &str = "d2^2 - 2*inv((1-x2)^2)*E";
const Q: &str = "d1*d2 + inv(1-x2)*E*d1";
const P3: &str = "d2^3 - 3*inv((1-x2)^2)*E*d2 - 3*inv((1-x2)^3)*E";

fn op(s: &str, n: u32) -> pdo_core::DiffOp {
    parse_operator(
        s,
        ParseOptions {
            nvars: Some(2),
            precision: n,
        },
    )
    .unwrap()
}

#[test]
fn glued_operators_commute_to_precision_six() {
    let start = Instant::now();
    let ops = [op(P, 9), op(Q, 9), op(P3, 9)];
    for i in 0..3 {
        for j in i + 1..3 {
            let c = ops[i].commutator(&ops[j]).unwrap();
            assert!(c.is_zero(), "[{i},{j}] = {c}");
            match c.precision() {
                Precision::Trunc(n) => assert!(n >= 6, "[{i},{j}] certified only mod M^{n}"),
                Precision::Exact => {}
            }
        }
    }
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn orders_of_glued_operators() {
    for n in [3, 5, 8] {
        let q = op(Q, n);
        assert_eq!(q.order(OrderKind::Stable), Ok(2));
        assert_eq!(q.order(OrderKind::Raw), Ok(n.max(2)));
    }
    assert_eq!(op(P, 6).order(OrderKind::Stable), Ok(2));
    assert_eq!(op(P3, 6).order(OrderKind::Stable), Ok(3));
}
