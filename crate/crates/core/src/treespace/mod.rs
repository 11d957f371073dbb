//! The tree space `T_ℓ`: schedule-aligned trees with one or two extensions per
//! level, plus finite tree classes and shape diagnostics.

pub mod class;
mod level_tree;
mod shape;

pub use class::{enumerate_class, Constraint, TreeClass, DEFAULT_CAP};
pub use level_tree::{
    all_prefixes, branching_defects, count_prefixes, sample_tree, sample_tree_with, LevelTree,
};
pub use shape::{
    branching_budget, density_profile, is_skeletal, prune_to_branching, two_child_nodes,
};
