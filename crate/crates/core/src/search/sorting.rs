use alloc::vec;
use alloc::vec::Vec;

use super::Objectives;

/// Minimisation dominance: no worse everywhere, strictly better somewhere.
pub fn dominates(a: &Objectives, b: &Objectives) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strictly |= x < y;
    }
    strictly
}

/// Deb's fast nondominated sort. Returns fronts of indices into `objs`,
/// best first; indices within a front are ascending.
pub fn fast_nondominated_sort(objs: &[Objectives]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            if dominates(&objs[p], &objs[q]) {
                dominated_by_me[p].push(q);
            } else if dominates(&objs[q], &objs[p]) {
                domination_count[p] += 1;
            }
        }
        if domination_count[p] == 0 {
            current.push(p);
        }
    }
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by_me[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(core::mem::replace(&mut current, next));
    }
    fronts
}

/// Indices of the nondominated members of `objs`.
pub fn nondominated_indices(objs: &[Objectives]) -> Vec<usize> {
    (0..objs.len())
        .filter(|&i| !objs.iter().any(|o| dominates(o, &objs[i])))
        .collect()
}

/// Crowding distance of each member of `front` (indices into `objs`), in
/// the order of `front`.
pub fn crowding_distance(objs: &[Objectives], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for m in 0..3 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| objs[front[a]][m].total_cmp(&objs[front[b]][m]));
        let lo = objs[front[order[0]]][m];
        let hi = objs[front[order[n - 1]]][m];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let gap = objs[front[order[w + 1]]][m] - objs[front[order[w - 1]]][m];
            dist[order[w]] += gap / span;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use rand::Rng;

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]));
        assert!(!dominates(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]));
        assert!(!dominates(&[1.0, 3.0, 1.0], &[2.0, 2.0, 2.0]));
        assert!(!dominates(&[2.0, 2.0, 2.0], &[1.0, 3.0, 1.0]));
    }

    #[test]
    fn sort_small_example() {
        let objs = [[1.0, 1.0, 1.0], [2.0, 2.0, 2.0], [1.0, 2.0, 3.0]];
        assert_eq!(fast_nondominated_sort(&objs), vec![vec![0], vec![1, 2]]);
        let same = [[1.0; 3]; 4];
        assert_eq!(fast_nondominated_sort(&same), vec![vec![0, 1, 2, 3]]);
    }

    /// Rank by repeatedly peeling off the nondominated set with an O(n^3)
    /// pairwise scan.
    fn brute_force_fronts(objs: &[Objectives]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..objs.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| !remaining.iter().any(|&j| dominates(&objs[j], &objs[i])))
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn sort_matches_brute_force() {
        let mut rng = seeded_rng(4);
        for _ in 0..50 {
            let objs: Vec<Objectives> = (0..20)
                .map(|_| {
                    [
                        rng.random_range(0..5) as f64,
                        rng.random_range(0..5) as f64,
                        rng.random::<f64>(),
                    ]
                })
                .collect();
            assert_eq!(fast_nondominated_sort(&objs), brute_force_fronts(&objs));
        }
    }

    #[test]
    fn crowding_examples() {
        let objs = [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]];
        assert!(crowding_distance(&objs, &[0, 1]).iter().all(|d| d.is_infinite()));

        // Equally spaced along a line in objectives 0 and 1, constant in 2.
        let objs = [[0.0, 2.0, 5.0], [1.0, 1.0, 5.0], [2.0, 0.0, 5.0]];
        let d = crowding_distance(&objs, &[0, 1, 2]);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        // (2 - 0) / 2 for each of the two varying objectives.
        assert!((d[1] - 2.0).abs() < 1e-12);

        let dup = [[1.0, 1.0, 1.0]; 4];
        let d = crowding_distance(&dup, &[0, 1, 2, 3]);
        assert_eq!(d.iter().filter(|v| v.is_finite()).count(), 2);
        assert!(d.iter().filter(|v| v.is_finite()).all(|&v| v == 0.0));
    }
}
