use crate::analytics::FanOut;

/// CNOT list `(control, target)` over register nodes, where node 0 is T and
/// node `j >= 1` is `V_j`.
///
/// `LogDepth` runs steps `s = 1, 2, …`; step `s` applies `CNOT(T, V_{2^(s-1)})`
/// and `CNOT(V_j, V_{2^(s-1)+j})` for `1 <= j < 2^(s-1)`. The last step is cut
/// off once every register qubit is populated, so the depth is
/// `⌈log2(#V + 1)⌉` for any size.
pub fn fan_out_schedule(kind: FanOut, register_size: usize) -> Vec<(usize, usize)> {
    match kind {
        FanOut::Linear => (1..=register_size).map(|j| (0, j)).collect(),
        FanOut::LogDepth => {
            let mut pairs = Vec::with_capacity(register_size);
            let mut half = 1;
            while half <= register_size {
                for j in 0..half {
                    let target = half + j;
                    if target > register_size {
                        break;
                    }
                    pairs.push((j, target));
                }
                half *= 2;
            }
            pairs
        }
    }
}

/// Number of CNOTs between T and each register qubit `V_1..=V_#V`.
pub fn vote_depths(kind: FanOut, register_size: usize) -> Vec<usize> {
    let mut depth = vec![0usize; register_size + 1];
    for (from, to) in fan_out_schedule(kind, register_size) {
        depth[to] = depth[from] + 1;
    }
    depth.split_off(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_is_a_star() {
        assert_eq!(fan_out_schedule(FanOut::Linear, 3), vec![(0, 1), (0, 2), (0, 3)]);
        assert!(fan_out_schedule(FanOut::Linear, 0).is_empty());
    }

    #[test]
    fn log_depth_steps() {
        // steps: {T→V1}, {T→V2, V1→V3}, {T→V4, V1→V5, V2→V6, V3→V7}
        assert_eq!(
            fan_out_schedule(FanOut::LogDepth, 7),
            vec![(0, 1), (0, 2), (1, 3), (0, 4), (1, 5), (2, 6), (3, 7)]
        );
        assert_eq!(
            fan_out_schedule(FanOut::LogDepth, 5),
            vec![(0, 1), (0, 2), (1, 3), (0, 4), (1, 5)]
        );
    }

    #[test]
    fn every_qubit_populated_once() {
        for size in 0..70 {
            let pairs = fan_out_schedule(FanOut::LogDepth, size);
            let mut targets: Vec<_> = pairs.iter().map(|p| p.1).collect();
            targets.sort_unstable();
            assert_eq!(targets, (1..=size).collect::<Vec<_>>());
            // controls are populated before use
            for (i, (from, _)) in pairs.iter().enumerate() {
                assert!(*from == 0 || pairs[..i].iter().any(|p| p.1 == *from));
            }
        }
    }

    #[test]
    fn depth_is_popcount_and_bounded() {
        for size in 1..70usize {
            let depths = vote_depths(FanOut::LogDepth, size);
            let bound = (usize::BITS - size.leading_zeros()) as usize; // ⌈log2(size+1)⌉
            for (j, d) in depths.iter().enumerate() {
                assert_eq!(*d, (j + 1).count_ones() as usize);
                assert!(*d <= bound);
            }
            assert_eq!(vote_depths(FanOut::Linear, size), vec![1; size]);
        }
    }
}
