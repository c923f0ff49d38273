use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use diam_ramsey::checker::{exists_solution, has_solution, IncrementalState, ProblemSpec};
use diam_ramsey::coloring::{parse_run_string, Coloring};

fn coloring(max_len: usize, r: u8) -> impl Strategy<Value = Coloring> {
    prop::collection::vec(0..r, 1..=max_len).prop_map(move |v| Coloring::new(v, r).unwrap())
}

fn small_spec() -> impl Strategy<Value = ProblemSpec> {
    (prop::collection::vec(2usize..=4, 1..=3), 2u8..=3, any::<bool>())
        .prop_map(|(sizes, r, strict)| ProblemSpec::new(sizes, r, strict).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn run_string_round_trips(c in coloring(60, 10)) {
        let s = c.to_run_string();
        prop_assert_eq!(parse_run_string(&s, 10).unwrap(), c);
    }

    #[test]
    fn witnesses_are_valid(c in coloring(24, 3), spec in small_spec()) {
        if let Some(w) = exists_solution(&c, &spec) {
            prop_assert!(w.validate(&c, &spec).is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn invariant_under_color_permutation(c in coloring(24, 3), spec in small_spec(), seed in any::<u64>()) {
        let mut perm = vec![0u8, 1, 2];
        perm.shuffle(&mut StdRng::seed_from_u64(seed));
        let spec = ProblemSpec::new(spec.sizes().to_vec(), 3, spec.strict()).unwrap();
        prop_assert_eq!(has_solution(&c, &spec), has_solution(&c.permuted(&perm).unwrap(), &spec));
    }

    #[test]
    fn monotone_in_length(c in coloring(24, 2), spec in small_spec()) {
        let found = has_solution(&c, &spec);
        for color in 0..2 {
            let longer = c.extended(color).unwrap();
            prop_assert!(!found || has_solution(&longer, &spec));
        }
        if c.len() > 1 && !found {
            prop_assert!(!has_solution(&c.prefix(c.len() - 1).unwrap(), &spec));
        }
    }

    #[test]
    fn strict_implies_nonstrict(c in coloring(24, 2), sizes in prop::collection::vec(2usize..=4, 1..=3)) {
        let strict = ProblemSpec::new(sizes.clone(), 2, true).unwrap();
        let loose = ProblemSpec::new(sizes, 2, false).unwrap();
        prop_assert!(!has_solution(&c, &strict) || has_solution(&c, &loose));
    }
}

#[test]
fn incremental_flag_tracks_prefixes() {
    let mut rng = StdRng::seed_from_u64(30);
    let specs = [
        ProblemSpec::uniform(2, 2, 2).unwrap(),
        ProblemSpec::uniform(3, 2, 2).unwrap(),
        ProblemSpec::uniform(2, 3, 2).unwrap(),
        ProblemSpec::new(vec![3, 2, 2], 3, false).unwrap(),
        ProblemSpec::new(vec![2, 2], 2, true).unwrap(),
    ];
    for k in 0..1000 {
        let spec = &specs[k % specs.len()];
        let len = rng.gen_range(1..=30);
        let colors: Vec<u8> = (0..len).map(|_| rng.gen_range(0..spec.num_colors())).collect();
        let mut state = IncrementalState::new(spec);
        for n in 1..=len {
            let solved = state.push(colors[n - 1]).unwrap();
            let prefix = Coloring::new(colors[..n].to_vec(), spec.num_colors()).unwrap();
            assert_eq!(solved, exists_solution(&prefix, spec).is_some(), "{spec} on {prefix}");
            if solved {
                break;
            }
        }
    }
}

#[test]
fn pop_restores_state() {
    let spec = ProblemSpec::uniform(3, 3, 2).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let mut state = IncrementalState::new(&spec);
    let mut reference = Vec::new();
    for _ in 0..2000 {
        if !reference.is_empty() && (state.is_solved() || rng.gen_bool(0.4)) {
            state.pop();
            reference.pop();
        } else {
            let color = rng.gen_range(0..2);
            state.push(color).unwrap();
            reference.push(color);
        }
        assert_eq!(state.colors(), &reference[..]);
        if !reference.is_empty() {
            let c = Coloring::new(reference.clone(), 2).unwrap();
            assert_eq!(state.is_solved(), has_solution(&c, &spec));
        }
    }
}
