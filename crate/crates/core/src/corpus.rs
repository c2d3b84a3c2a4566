//! Built-in fixtures, addressable from the command line as `corpus:NAME`.

const ENTRIES: &[(&str, &str)] = &[
    ("b-bstar", include_str!("../corpus/b-bstar.json")),
    ("a", include_str!("../corpus/a.json")),
    ("a-star", include_str!("../corpus/a-star.json")),
    ("worm-family", include_str!("../corpus/worm-family.json")),
    ("z-plus-zinv", include_str!("../corpus/z-plus-zinv.json")),
    ("xz-mix", include_str!("../corpus/xz-mix.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(name, _)| *name)
}

pub fn get(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, doc)| *doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{parse_input, Input};
    use crate::worm::Trinomial;

    #[test]
    fn every_entry_parses() {
        for name in names() {
            assert!(parse_input(get(name).unwrap()).is_ok(), "{name}");
        }
    }

    #[test]
    fn worm_fixture_matches_constructor() {
        let Input::Admissible(h) = parse_input(get("worm-family").unwrap()).unwrap() else { panic!() };
        assert_eq!(Trinomial::from_admissible(&h).unwrap(), Trinomial::worm_family());
    }
}
