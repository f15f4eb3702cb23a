//! Fixtures shared by the criterion benchmarks.

use ssg_core::generate::{self, GenSpec};
use ssg_core::harness::Instance;
use ssg_core::Ssg;

/// A random 2-SSG of moderate size, fixed by `seed`.
pub fn random_game(seed: u64) -> Ssg {
    generate::gen_random(&GenSpec::new(5, 4, 4, 2, seed)).expect("valid spec")
}

/// A few random games with the q each was generated for.
pub fn random_fixtures(count: usize) -> Vec<Instance> {
    ssg_core::harness::random_suite(count, 11).expect("valid suite")
}

/// Chain of length `r` with q = 2.
pub fn chain(r: usize) -> Ssg {
    generate::gen_chain(2, r).expect("valid chain")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        assert!(random_game(1).validate().is_ok());
        assert_eq!(random_fixtures(3).len(), 3);
        assert_eq!(chain(4).r(), 4);
    }
}
