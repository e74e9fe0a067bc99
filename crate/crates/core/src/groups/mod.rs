//! Fully enumerated groups `GL_n(F_q)` and `SL_n(F_q)` with conjugacy classes,
//! rational parabolics, F-stable maximal tori and their characters.

mod ext;
mod mat;
mod parabolic;
mod table;
mod torus;

pub use ext::{permutation_matrix, ExtMat};
pub use mat::{is_squarefree, Fq, Mat, MAX_N};
pub use parabolic::{
    opposite_parabolic, parabolic_with_block_order, parabolics_with_levi, standard_parabolic,
    ParabolicData,
};
pub use table::{
    build_group, cached_group, group_budget, supported_targets, ConjClass, Family, GroupSpec, GroupTable,
    DEFAULT_GROUP_BUDGET,
};
pub use torus::{
    maximal_torus, tower_with_level, twisted_parabolic_datum, BorelChoice, Frame, LangShadow,
    TorusData, TwistedDatum,
};
