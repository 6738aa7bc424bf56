use thiserror::Error;
use vsp_core::Tick;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no separation-feasible slot in [{lower}, {upper}]")]
pub struct SlotWindowError {
    pub lower: Tick,
    pub upper: Tick,
}

/// Smallest `t >= lower` with `|t - stamp| >= gap` for every `(stamp, gap)`
/// blocker, failing if it exceeds `upper`.
///
/// Each blocker forbids the open interval `(stamp - gap, stamp + gap)`; the
/// intervals are scanned in order of their left end.
pub fn earliest_feasible_slot(
    lower: Tick,
    upper: Option<Tick>,
    blockers: impl IntoIterator<Item = (Tick, Tick)>,
) -> Result<Tick, SlotWindowError> {
    let mut blocked: Vec<(Tick, Tick)> =
        blockers.into_iter().filter(|&(_, gap)| gap > 0).map(|(stamp, gap)| (stamp - gap, stamp + gap)).collect();
    blocked.sort_unstable();

    let mut candidate = lower;
    for (lo, hi) in blocked {
        if lo >= candidate {
            break;
        }
        if candidate < hi {
            candidate = hi;
        }
    }
    match upper {
        Some(upper) if candidate > upper => Err(SlotWindowError { lower, upper }),
        _ => Ok(candidate),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Linear scan over every integer from `lower`.
    fn brute(lower: Tick, blockers: &[(Tick, Tick)]) -> Tick {
        (lower..).find(|&t| blockers.iter().all(|&(s, g)| (t - s).abs() >= g)).unwrap()
    }

    #[test]
    fn unconstrained() {
        assert_eq!(earliest_feasible_slot(50, None, []), Ok(50));
    }

    #[test]
    fn single_blocker() {
        assert_eq!(earliest_feasible_slot(50, None, [(50, 5)]), Ok(55));
    }

    #[test]
    fn overlapping_blockers() {
        // (43, 53) and (50, 60) leave 60 as the first free point >= 50
        assert_eq!(earliest_feasible_slot(50, None, [(48, 5), (55, 5)]), Ok(60));
        assert_eq!(brute(50, &[(48, 5), (55, 5)]), 60);
    }

    #[test]
    fn exact_gap_before_a_stamp_is_usable() {
        // |45 - 50| = 5 satisfies the separation
        assert_eq!(earliest_feasible_slot(45, None, [(50, 5)]), Ok(45));
    }

    #[test]
    fn zero_gap_never_blocks() {
        assert_eq!(earliest_feasible_slot(50, None, [(50, 0)]), Ok(50));
    }

    #[test]
    fn window_upper_enforced() {
        assert_eq!(earliest_feasible_slot(50, Some(54), [(50, 5)]), Err(SlotWindowError { lower: 50, upper: 54 }));
        assert_eq!(earliest_feasible_slot(50, Some(55), [(50, 5)]), Ok(55));
    }

    proptest::proptest! {
        #[test]
        fn matches_linear_scan(lower in 0i64..100, blockers in proptest::collection::vec((0i64..150, 0i64..12), 0..10)) {
            proptest::prop_assert_eq!(earliest_feasible_slot(lower, None, blockers.iter().copied()).unwrap(), brute(lower, &blockers));
        }
    }
}
