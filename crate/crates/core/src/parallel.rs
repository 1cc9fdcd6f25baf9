use std::thread;

/// Runs `work` once per partition on up to `workers` scoped threads.
///
/// Worker `w` owns one state built by `init` and processes partitions
/// `w, w + workers, ...` in increasing order. Per-partition results come
/// back indexed by partition, so they do not depend on the worker count;
/// worker states are returned in worker order.
pub(crate) fn run_partitions<S, R, I, W>(
    partitions: usize,
    workers: usize,
    init: I,
    work: W,
) -> (Vec<S>, Vec<R>)
where
    S: Send,
    R: Send,
    I: Fn() -> S + Sync,
    W: Fn(&mut S, usize) -> R + Sync,
{
    let workers = workers.clamp(1, partitions.max(1));
    if workers == 1 {
        let mut state = init();
        let results = (0..partitions).map(|p| work(&mut state, p)).collect();
        return (vec![state], results);
    }

    let (init, work) = (&init, &work);
    let per_worker: Vec<(S, Vec<(usize, R)>)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut state = init();
                    let results: Vec<(usize, R)> = (w..partitions)
                        .step_by(workers)
                        .map(|p| (p, work(&mut state, p)))
                        .collect();
                    (state, results)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
            .collect()
    });

    let mut slots: Vec<Option<R>> = (0..partitions).map(|_| None).collect();
    let mut states = Vec::with_capacity(workers);
    for (state, results) in per_worker {
        states.push(state);
        for (p, r) in results {
            slots[p] = Some(r);
        }
    }
    let results = slots
        .into_iter()
        .map(|r| r.expect("every partition is processed exactly once"))
        .collect();
    (states, results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_ordered_by_partition() {
        for workers in [1, 2, 3, 8] {
            let (states, results) = run_partitions(5, workers, || 0usize, |seen, p| {
                *seen += 1;
                p * 10
            });
            assert_eq!(results, vec![0, 10, 20, 30, 40]);
            assert_eq!(states.iter().sum::<usize>(), 5);
            assert_eq!(states.len(), workers.min(5));
        }
    }

    #[test]
    fn zero_partitions() {
        let (states, results) = run_partitions(0, 4, || (), |_, p| p);
        assert_eq!(states.len(), 1);
        assert!(results.is_empty());
    }
}
