//! Regression fixtures for tabulated design alternatives. Each row is filed
//! under the element budget implied by its own spacing sum.

use mlpa::search::{Landscape, Objective};
use mlpa::MlpaConfig;

fn budget(spacing: &[u32]) -> u32 {
    spacing.iter().sum::<u32>() + 1 - spacing.len() as u32
}

/// `row` must attain the maximum of every listed objective at its budget.
fn assert_optimal(row: &[u32], objectives: &[Objective]) {
    let n = budget(row);
    let l = row.len() as u32;
    let space = Landscape::explore(n, l, None);
    let c = MlpaConfig::from_spacing(row.to_vec()).unwrap();
    let scored = space
        .scored
        .iter()
        .find(|s| s.spacing == row)
        .unwrap_or_else(|| panic!("{row:?} missing from N={n} L={l}"));
    assert_eq!(c.total_elements, n);
    for &o in objectives {
        let best = match o {
            Objective::Consecutive => space.consecutive_max(),
            _ => space.unique_max(),
        };
        assert_eq!(Some(scored.value(o)), best, "{row:?} at N={n}: {o}");
        if o == Objective::Joint {
            assert_eq!(
                Some(scored.consecutive),
                space.consecutive_max(),
                "{row:?} joint"
            );
        }
    }
}

#[test]
fn four_level_rows() {
    use Objective::*;
    for row in [[7, 2, 3, 5], [3, 7, 2, 5], [3, 2, 7, 5]] {
        assert_optimal(&row, &[Joint]);
    }
    // listed under the consecutive objective, but these also maximise unique lags
    for row in [[11, 2, 3, 5], [3, 11, 2, 5], [3, 2, 11, 5]] {
        assert_optimal(&row, &[Joint]);
    }
    for row in [[11, 3, 5, 7], [5, 11, 3, 7], [5, 3, 11, 7]] {
        assert_optimal(&row, &[Consecutive]);
    }
    assert_optimal(&[5, 3, 11, 7], &[Joint]);
    for row in [[7, 13, 3, 11], [7, 3, 13, 11]] {
        assert_optimal(&row, &[Unique]);
    }
}

#[test]
fn five_level_rows() {
    use Objective::*;
    let joint: [[u32; 5]; 12] = [
        [5, 2, 3, 11, 7],
        [3, 5, 2, 11, 7],
        [3, 11, 2, 5, 7],
        [3, 5, 2, 13, 7],
        [3, 13, 2, 5, 7],
        [13, 3, 4, 5, 7],
        [5, 3, 13, 4, 7],
        [5, 3, 4, 13, 7],
        [4, 5, 3, 13, 7],
        [4, 13, 3, 5, 7],
        [4, 3, 13, 5, 7],
        [7, 3, 5, 13, 11],
    ];
    for row in joint {
        assert_optimal(&row, &[Joint]);
    }
    assert_optimal(&[5, 7, 3, 13, 11], &[Joint]);
    assert_optimal(&[5, 2, 13, 3, 11], &[Joint]);
    assert_optimal(&[5, 2, 3, 13, 11], &[Unique]);
    for row in [
        [3, 7, 2, 13, 11],
        [4, 5, 3, 13, 11],
        [7, 3, 5, 17, 13],
        [5, 7, 3, 17, 13],
    ] {
        assert_optimal(&row, &[Unique]);
    }
    for row in [
        [3, 5, 2, 19, 7],
        [3, 19, 2, 5, 7],
        [19, 3, 5, 7, 11],
        [7, 3, 19, 5, 11],
        [5, 19, 3, 7, 11],
    ] {
        assert_optimal(&row, &[Consecutive]);
    }
    assert_optimal(&[7, 2, 19, 3, 17], &[Joint]);
    assert_optimal(&[5, 3, 19, 4, 17], &[Unique]);
}

#[test]
fn six_level_rows() {
    use Objective::*;
    for row in [[7, 2, 3, 5, 13, 11], [3, 7, 2, 5, 13, 11]] {
        assert_optimal(&row, &[Joint]);
    }
    for row in [
        [7, 3, 4, 5, 13, 11],
        [5, 3, 7, 4, 13, 11],
        [4, 7, 3, 5, 13, 11],
    ] {
        assert_optimal(&row, &[Joint]);
    }
    for row in [[7, 2, 3, 5, 19, 11], [5, 2, 7, 3, 19, 11]] {
        assert_optimal(&row, &[Consecutive]);
    }
}

#[test]
fn joint_alternative_counts() {
    let count = |n, l| {
        Landscape::explore(n, l, None)
            .resolve(Objective::Joint)
            .unwrap()
            .optima
            .len()
    };
    assert_eq!(count(24, 5), 3);
    assert_eq!(count(26, 5), 2);
    assert_eq!(count(28, 5), 6);
    assert_eq!(count(35, 5), 2);
    assert_eq!(count(18, 4), 3);
}

#[test]
fn four_level_twenty_three_consecutive_options() {
    let space = Landscape::explore(23, 4, None);
    let c = space.resolve(Objective::Consecutive).unwrap();
    assert_eq!(c.optima.len(), 3);
    assert_eq!(
        c.recommended().unwrap().config.spacing.spacings(),
        &[5, 3, 11, 7]
    );
    assert!(c.is_joint);
}

#[test]
fn three_level_sweep_pattern() {
    for entry in mlpa::search::sweep(3, 8..=30) {
        if let mlpa::search::SweepOutcome::Feasible { unique, .. } = entry.outcome {
            let best = unique.recommended().unwrap();
            let n = best.config.partition.counts();
            assert_eq!(best.config.spacing.spacings(), &[n[2], n[0], n[1]]);
        }
    }
}

#[test]
fn five_level_thirty_has_joint_unique_optimum() {
    let u = Landscape::explore(30, 5, None)
        .resolve(Objective::Unique)
        .unwrap();
    assert!(u.optima.iter().any(|c| u.attains_both(c)));
}
