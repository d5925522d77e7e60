//! Parallel evaluation of a [`SearchPlan`].

use rayon::prelude::*;
use semitop_core::maps::{SearchOutcome, SearchPlan};

/// Evaluates every unit of the plan on `jobs` threads (all cores when
/// `None`). `find_map_first` keeps the canonical-minimal witness, so the
/// answer matches the sequential [`SearchPlan::run`].
pub fn run_parallel(plan: &SearchPlan, jobs: Option<usize>) -> SearchOutcome {
    let search = || {
        (0..plan.units())
            .into_par_iter()
            .find_map_first(|u| plan.search_unit(u))
            .map_or(SearchOutcome::NoneWithinBounds { max_points: plan.max_points() }, SearchOutcome::Found)
    };
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(search),
            Err(_) => plan.run(),
        },
        None => search(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use semitop_core::maps::PropertyQuery;

    #[test]
    fn agrees_with_sequential() {
        for q in ["so1-compose-closed", "so2-compose-closed", "so1-implies-continuous", "identity-so3"] {
            let plan = SearchPlan::new(q.parse::<PropertyQuery>().unwrap(), 3).unwrap();
            let seq = plan.run();
            assert_eq!(run_parallel(&plan, Some(4)), seq, "{q}");
            assert_eq!(run_parallel(&plan, Some(1)), seq, "{q}");
        }
    }
}
