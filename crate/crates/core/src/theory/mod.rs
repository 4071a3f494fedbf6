//! Numeric and Monte Carlo checks of the claims the estimators rest on.

mod bounds;
mod moments;
pub mod suites;

pub use bounds::{
    has_unique_reconstruction, is_uniquely_determined, labeled_tree_distances, long_leaves,
    min_unique_source_count, separating_size_bound, LeafReading,
};
pub use moments::{
    default_eps_grid, edge_vs_path_distribution_distinct, ks_coefficient, ks_statistic, log_grid,
    min_tv_check, moment_gap, path_moment_inequality, tv_bound_at, tv_upper_bound, DetourSurvival,
    KsReport, MinTvReport, MomentGapReport, PathMomentReport,
};
pub use suites::{run_suite, write_report, Suite, SuiteOptions, TheoryRow};
