//! Maximal orders of `L = Q(∛p)` and `k = Q(∛p, ζ₃)`, prime decomposition,
//! ideal arithmetic and the Galois action on `k`.

mod factor;
mod ideal;
pub mod lll;
mod order;
mod special;

pub use factor::PrimeIdeal;
pub use ideal::IdealHNF;
pub use order::{
    build_cubic_order, build_pure_cubic_order, build_pure_sextic_order, build_sextic_order, Automorphism,
    FieldKind, FieldLabel, GaloisAction, Generator, NumberFieldOrder,
};
pub(crate) use order::row_times;
pub use special::{cubic_special_ideals, sextic_special_ideals, CubicIdeals, SexticIdeals};
