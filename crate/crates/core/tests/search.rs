//! Grid search against a plain Dijkstra oracle.

mod common;

use common::{dijkstra, random_grid};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snamo::geometry::{Cell, Grid};
use snamo::planner::{astar, astar_cells, multigoal_astar, search_cells, GridPath, SearchError};
use snamo::Configuration;

fn key((a, b): (u32, u32)) -> f64 {
    a as f64 + b as f64 * std::f64::consts::SQRT_2
}

/// Every step is a legal 8-connected move and the counts match the cells.
fn check_path(grid: &Grid, path: &GridPath, start: Cell, goal: Cell) -> Result<(), String> {
    if path.cells.first() != Some(&start) || path.cells.last() != Some(&goal) {
        return Err("endpoints differ".into());
    }
    let (mut orth, mut diag) = (0, 0);
    for w in path.cells.windows(2) {
        let (a, b) = (w[0], w[1]);
        if grid.is_occupied(b) {
            return Err(format!("{b:?} is occupied"));
        }
        let (di, dj) = (b.0 as i64 - a.0 as i64, b.1 as i64 - a.1 as i64);
        match (di.abs(), dj.abs()) {
            (1, 0) | (0, 1) => orth += 1,
            (1, 1) => {
                let side1 = (b.0, a.1);
                let side2 = (a.0, b.1);
                if grid.is_occupied(side1) && grid.is_occupied(side2) {
                    return Err(format!("{a:?} -> {b:?} cuts a blocked corner"));
                }
                diag += 1;
            }
            _ => return Err(format!("{a:?} -> {b:?} is not a neighbour step")),
        }
    }
    if (orth, diag) != (path.orthogonal, path.diagonal) {
        return Err("move counts disagree with the cells".into());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn astar_is_optimal_and_legal(seed in any::<u64>(), density in 0.0..0.45f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut grid = random_grid(&mut rng, 24, 18, density);
        let start = (0, 0);
        grid.set(start, false);
        let oracle = dijkstra(&grid, start);
        for idx in 0..grid.len() {
            let goal = grid.cell_of_index(idx);
            let found = astar_cells(&grid, start, goal).unwrap();
            match (found, oracle[idx]) {
                (None, None) => {}
                (Some(p), Some(best)) => {
                    prop_assert!((key((p.orthogonal, p.diagonal)) - key(best)).abs() < 1e-9);
                    if let Err(e) = check_path(&grid, &p, start, goal) {
                        prop_assert!(false, "{}", e);
                    }
                }
                (f, o) => prop_assert!(false, "goal {:?}: found {:?}, oracle {:?}", goal, f.is_some(), o),
            }
        }
    }

    #[test]
    fn multi_goal_search_equals_single_goal_searches(seed in any::<u64>(), n in 1usize..90) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut grid = random_grid(&mut rng, 20, 20, 0.3);
        let start = (10, 10);
        grid.set(start, false);
        let goals: Vec<Cell> = (0..n).map(|k| grid.cell_of_index((k * 7919 + seed as usize % 400) % grid.len())).collect();
        let together = search_cells(&grid, start, &goals).unwrap();
        for (g, p) in goals.iter().zip(&together) {
            let alone = astar_cells(&grid, start, *g).unwrap();
            prop_assert_eq!(alone.as_ref().map(|p| key((p.orthogonal, p.diagonal))), p.as_ref().map(|p| key((p.orthogonal, p.diagonal))));
        }
    }
}

#[test]
fn configuration_searches_report_errors_and_unreachable_goals() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut grid = random_grid(&mut rng, 10, 10, 0.0);
    grid.set((5, 5), true);
    let at = |i: usize, j: usize| Configuration::at(i as f64 + 0.5, j as f64 + 0.5, 0.0);
    assert_eq!(astar(&grid, at(5, 5), at(0, 0)), Err(SearchError::StartBlocked));
    assert_eq!(astar(&grid, Configuration::at(-3.0, 0.5, 0.0), at(0, 0)), Err(SearchError::StartOutsideGrid));
    assert_eq!(astar(&grid, at(0, 0), at(5, 5)), Ok(None));
    assert_eq!(multigoal_astar(&grid, at(0, 0), &[]), Err(SearchError::EmptyGoals));

    let found = multigoal_astar(&grid, at(0, 0), &[at(5, 5), at(9, 9), Configuration::at(40.0, 0.0, 0.0)]).unwrap();
    assert_eq!(found.keys().copied().collect::<Vec<_>>(), vec![1]);
    let path = &found[&1];
    let best = dijkstra(&grid, (0, 0))[grid.index((9, 9))].unwrap();
    assert!((path.cost - key(best)).abs() < 1e-9);
    assert_eq!(path.first().position, at(0, 0).position);
    assert_eq!(path.last().position, at(9, 9).position);
}

#[test]
fn a_sealed_start_reaches_only_itself() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut grid = random_grid(&mut rng, 5, 5, 0.0);
    for c in [(1, 2), (3, 2), (2, 1), (2, 3), (1, 1), (3, 3), (1, 3), (3, 1)] {
        grid.set(c, true);
    }
    let paths = search_cells(&grid, (2, 2), &[(2, 2), (0, 0), (4, 4)]).unwrap();
    assert_eq!(paths[0].as_ref().map(|p| p.cells.len()), Some(1));
    assert!(paths[1].is_none() && paths[2].is_none());
}
