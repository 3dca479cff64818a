//! Fixtures shared by the benchmarks.

use boomspec_core::{FieldCtx, FuncTable};

/// F_{3^n} with the default modulus.
pub fn field(n: u32) -> FieldCtx {
    FieldCtx::new(3, n).expect("benchmark field")
}

/// `x^{3^n-3} (1 + chi(x))`, the binomial whose boomerang spectrum has a closed form.
pub fn last_binomial(f: &FieldCtx) -> FuncTable<'_> {
    FuncTable::binomial(f, f.q() as i128 - 3, 1).expect("u = 1 is nonzero")
}
