//! Builders for the worked examples, truncated to finite size.

mod basic;
mod blocks;
mod fi;
mod fig;
mod indexed;
mod slice;

pub use basic::{
    arrow_category, codiscrete, discrete, idempotent_monoid, preorder, preorder_with_iso, product_category,
    square_poset, terminal, two_parallel_arrows, two_parallel_arrows_to_distinct_targets,
};
pub use blocks::{block_hom_count, block_perm_indexed, counting_functor, power_category};
pub use fi::{compose_injections, fi_truncated, injection_name, injections, parse_injection};
pub use fig::{
    disjoint_union_groupoid, fi_g_direct, fi_gh_comparison, fi_over_groupoid, fig_comparison, fig_compose, fig_name,
};
pub use indexed::{delta_const, gpow_decorations, gpow_name, indexed_gpow};
pub use slice::{codomain_check, codomain_functor, slice, slice_comparison, slice_indexed, CodomainReport, SliceError};
