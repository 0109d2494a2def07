//! Independent brute-force checks: linear algebra over small fields, form
//! classification, and small projective groups.

pub mod forms;
pub mod gf;
pub mod group;
pub mod matrix;
pub mod search;

pub use forms::{classify_quadratic_form, FormData, FormType};
pub use gf::Gf;
pub use group::{small_group_closure, ProjGroup, DEFAULT_CAP};
pub use matrix::{jordan_partition, Matrix};
pub use search::{count_classes_of_order, derangement_search, find_a5, find_isometry, psl2_generators, sl_generators};
