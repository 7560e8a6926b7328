//! Built-in instances, written out in the instance format by `hgl export`.

use hgl_core::bundle::{Bundle, RightModule};
use hgl_core::catalog::{
    action_bundle, braided_line_f7, broken_antipode, degenerate_comonoid_bundle, f7_z3, fun_z2, non_flat, q_s3, q_z2,
    q_z3, super_line, sweedler, trivial_bundle, trivial_comonoid_bundle, z4_over_z2,
};
use hgl_core::descent::regular_module;
use hgl_core::{Field, Fp};

use crate::instance::Writer;

pub const NAMES: &[&str] = &[
    "broken-antipode",
    "braided-line-f7",
    "comonoid-qz2",
    "degenerate-qz2",
    "free-z2",
    "free-z2-dual",
    "non-flat",
    "non-free-z2",
    "super-line",
    "sweedler",
    "trivial-f7z3",
    "trivial-funz2",
    "trivial-qs3",
    "trivial-qz2",
    "trivial-qz3",
    "z4-over-z2",
];

fn write<F: Field>(field: &str, comment: &str, b: &Bundle<F>, module: Option<RightModule<F>>) -> String {
    let mut w = Writer::new(b.hopf().carrier().grading(), field, comment);
    w.bundle(b);
    if let Some(m) = module {
        w.module("V", "B", &m);
    }
    w.finish()
}

fn prime_field(x: &Fp) -> String {
    format!("prime {}", x.modulus().expect("bound modulus"))
}

/// The instance text for a built-in name.
pub fn export(name: &str) -> Option<String> {
    let alg = |comment: &str, b: hgl_core::bundle::AlgebraBundle<hgl_core::Rational>| {
        let v = regular_module(&b.base);
        write("rational", comment, &Bundle::Algebra(b), Some(v))
    };
    Some(match name {
        "trivial-qz2" => alg("P = H = QZ2 over the ground field", trivial_bundle(&q_z2())),
        "trivial-qz3" => alg("P = H = QZ3 over the ground field", trivial_bundle(&q_z3())),
        "trivial-qs3" => alg("P = H = QS3 over the ground field", trivial_bundle(&q_s3())),
        "trivial-funz2" => alg("P = H = Fun(Z2) over the ground field", trivial_bundle(&fun_z2())),
        "sweedler" => alg("P = H = Sweedler's four-dimensional Hopf algebra", trivial_bundle(&sweedler())),
        "super-line" => alg("P = H = the super line k[x]/x^2, x odd", trivial_bundle(&super_line())),
        "free-z2" => alg("Fun(X) for the free Z2-action swapping two points", action_bundle(&[1, 0])),
        "free-z2-dual" => {
            let b = Bundle::Algebra(action_bundle(&[1, 0])).dualize();
            write("rational", "transpose of free-z2: a module coalgebra over the dual of Fun(Z2)", &b, None)
        }
        "non-free-z2" => alg("Fun(X) for a Z2-action on three points with a fixed point", action_bundle(&[1, 0, 2])),
        "z4-over-z2" => alg("QZ4 coacted on by QZ2, over QZ2", z4_over_z2()),
        "non-flat" => alg("P = k over B = k[t]/t^2 with H = 1", non_flat()),
        "broken-antipode" => alg("QZ2 with the antipode replaced by zero", trivial_bundle(&broken_antipode())),
        "comonoid-qz2" => write("rational", "P = H = QZ2 acting on itself", &Bundle::Comonoid(trivial_comonoid_bundle(&q_z2())), None),
        "degenerate-qz2" => {
            let c = &q_z2().coalgebra;
            write("rational", "the coalgebra of QZ2 with H = 1", &Bundle::Comonoid(degenerate_comonoid_bundle(c)), None)
        }
        "trivial-f7z3" => {
            let h = f7_z3();
            let b = trivial_bundle(&h);
            let v = regular_module(&b.base);
            write(&prime_field(&h.carrier().grading().one()), "P = H = F7Z3, graded by Z3", &Bundle::Algebra(b), Some(v))
        }
        "braided-line-f7" => {
            let h = braided_line_f7();
            let b = trivial_bundle(&h);
            let v = regular_module(&b.base);
            write(&prime_field(&h.carrier().grading().one()), "P = H = F7[x]/x^3 with q = 2", &Bundle::Algebra(b), Some(v))
        }
        _ => return None,
    })
}
