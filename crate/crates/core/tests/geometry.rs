use std::collections::HashSet;

use lrcgeom::projgeom::{max_sunflower_size, point_count, Meet, PlaneObject};
use lrcgeom::{Field, ProjSpace};

fn space(q: u64, n: usize) -> ProjSpace {
    ProjSpace::new(&Field::with_order(q).unwrap(), n).unwrap()
}

#[test]
fn point_counts() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for n in [2usize, 3] {
            let expected = (q.pow(n as u32 + 1) - 1) / (q - 1);
            assert_eq!(point_count(n, q), expected);
            assert_eq!(space(q, n).num_points() as u64, expected, "PG({n},{q})");
        }
    }
}

#[test]
fn every_line_has_q_plus_one_points() {
    for q in [2u64, 3, 4, 5] {
        for n in [2usize, 3] {
            let s = space(q, n);
            let lines = s.lines();
            let expected_lines = if n == 2 { q * q + q + 1 } else { (q * q + 1) * (q * q + q + 1) };
            assert_eq!(lines.len() as u64, expected_lines);
            for l in &lines {
                assert_eq!(s.line_point_indices(l).len() as u64, q + 1);
            }
        }
    }
}

#[test]
fn two_lines_of_a_plane_meet_once() {
    for q in [2u64, 3, 4, 5, 7] {
        let s = space(q, 2);
        let lines = s.lines();
        let sets: Vec<HashSet<usize>> = lines.iter().map(|l| s.line_point_indices(l).into_iter().collect()).collect();
        for i in 0..lines.len() {
            assert_eq!(s.meet(&lines[i], &lines[i]), Meet::Equal);
            for j in i + 1..lines.len() {
                let common: Vec<usize> = sets[i].intersection(&sets[j]).copied().collect();
                assert_eq!(common.len(), 1);
                match s.meet(&lines[i], &lines[j]) {
                    Meet::Point(p) => assert_eq!(s.index_of(&p), common[0]),
                    other => panic!("PG(2,{q}) lines {i},{j}: {other:?}"),
                }
            }
        }
    }
}

#[test]
fn lines_through_a_point_of_pg3() {
    for q in [2u64, 3] {
        let s = space(q, 3);
        for p in s.points() {
            let through = s.lines_through_point(p);
            assert_eq!(through.len() as u64, q * q + q + 1);
            assert!(through.iter().all(|l| s.line_contains(l, p)));
        }
    }
    let s = space(4, 3);
    for p in s.points().iter().step_by(7) {
        assert_eq!(s.lines_through_point(p).len(), 21);
    }
}

#[test]
fn regular_spread_partitions_the_points() {
    for q in [2u64, 3, 4] {
        let s = space(q, 3);
        let spread = s.regular_spread().unwrap();
        assert_eq!(spread.len() as u64, q * q + 1);
        let mut seen = vec![false; s.num_points()];
        for l in &spread {
            for i in s.line_point_indices(l) {
                assert!(!seen[i], "PG(3,{q}): point {i} on two spread lines");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&x| x));
    }
}

#[test]
fn duality_preserves_incidence() {
    for q in [2u64, 3, 4] {
        let s = space(q, 2);
        let lines = s.lines();
        for p in s.points() {
            let dl = s.dual_line(p).unwrap();
            assert_eq!(&s.dual_point(&dl).unwrap(), p);
            assert_eq!(s.dualize(&PlaneObject::Point(p.clone())).unwrap(), PlaneObject::Line(dl.clone()));
            for l in &lines {
                let dp = s.dual_point(l).unwrap();
                assert_eq!(s.line_contains(l, p), s.line_contains(&dl, &dp));
            }
        }
    }
}

#[test]
fn sunflower_of_planes_through_a_line() {
    for q in [2u64, 3, 4] {
        let s = space(q, 3);
        for l in s.lines().iter().step_by(5) {
            let petals = s.planes_through_line(l).unwrap();
            assert_eq!(petals.len() as u64, q + 1);
            assert_eq!(petals.len() as u64, max_sunflower_size(q, 1, 3));
            for (i, a) in petals.iter().enumerate() {
                // pairwise sum is all of F_q^4, so pairwise intersection is exactly the center
                for b in &petals[i + 1..] {
                    assert_eq!(s.plane_join_rank(a, b), 4);
                }
                for p in s.points_on_line(l) {
                    assert!(s.plane_contains(a, &p));
                }
            }
            // the petals cover every point
            let covered = s.points().iter().filter(|p| petals.iter().any(|pi| s.plane_contains(pi, p))).count();
            assert_eq!(covered, s.num_points());
        }
    }
}
