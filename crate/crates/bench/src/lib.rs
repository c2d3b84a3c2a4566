//! Shared fixtures for the benchmarks.

use mathieu_core::harness::{generate_family, parse_input, Input, RandomFamilySpec};
use mathieu_core::{corpus, Admissible, SU2Function};

pub fn corpus_input(name: &str) -> Input {
    parse_input(corpus::get(name).expect("corpus entry")).expect("corpus parses")
}

pub fn random_admissible(k: usize, l: usize, terms: usize, seed: u64) -> Admissible {
    match generate_family(&RandomFamilySpec::admissible(k, l, terms, 2, 5, seed)) {
        Ok(Input::Admissible(h)) => h,
        other => panic!("unexpected {other:?}"),
    }
}

pub fn random_su2(terms: usize, seed: u64) -> SU2Function {
    match generate_family(&RandomFamilySpec::su2(terms, 3, 5, seed)) {
        Ok(Input::Su2(f)) => f,
        other => panic!("unexpected {other:?}"),
    }
}
