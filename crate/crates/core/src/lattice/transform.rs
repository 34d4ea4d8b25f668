//! Subset and superset minimum transforms over the Boolean lattice.
//!
//! Both run in `O(n·2ⁿ)` and carry the arg-min along. Ties resolve to the
//! smallest element id, which makes the combine step associative and the
//! results independent of the processing order.

use super::ElementId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub at: ElementId,
}

const NONE: Extremum = Extremum {
    value: f64::INFINITY,
    at: usize::MAX,
};

#[inline]
pub(crate) fn better(a: Extremum, b: Extremum) -> Extremum {
    if b.value < a.value || (b.value == a.value && b.at < a.at) {
        b
    } else {
        a
    }
}

/// Table indexed by mask; mask 0 (the empty set) holds the `NONE` sentinel.
fn seed(values: &[f64]) -> Vec<Extremum> {
    std::iter::once(NONE)
        .chain(
            values
                .iter()
                .enumerate()
                .map(|(i, &value)| Extremum { value, at: i }),
        )
        .collect()
}

/// `table[s] = min{ values[t] : t ⊆ s }`.
fn subset_table(ground: usize, values: &[f64]) -> Vec<Extremum> {
    let mut t = seed(values);
    for bit in 0..ground {
        let b = 1usize << bit;
        for s in 0..t.len() {
            if s & b != 0 {
                t[s] = better(t[s], t[s ^ b]);
            }
        }
    }
    t
}

/// `table[s] = min{ values[t] : t ⊇ s }`.
fn superset_table(ground: usize, values: &[f64]) -> Vec<Extremum> {
    let mut t = seed(values);
    for bit in 0..ground {
        let b = 1usize << bit;
        for s in 0..t.len() {
            if s & b == 0 {
                t[s] = better(t[s], t[s | b]);
            }
        }
    }
    t
}

fn finish(e: Extremum) -> Option<Extremum> {
    (e.at != usize::MAX).then_some(e)
}

pub(crate) fn down_min(ground: usize, values: &[f64], strict: bool) -> Vec<Option<Extremum>> {
    let t = subset_table(ground, values);
    (1..t.len())
        .map(|s| {
            if !strict {
                return finish(t[s]);
            }
            // a strict subset misses at least one bit of s
            let best = (0..ground)
                .filter(|&bit| s >> bit & 1 == 1)
                .map(|bit| t[s ^ (1 << bit)])
                .fold(NONE, better);
            finish(best)
        })
        .collect()
}

pub(crate) fn up_min(ground: usize, values: &[f64], strict: bool) -> Vec<Option<Extremum>> {
    let t = superset_table(ground, values);
    (1..t.len())
        .map(|s| {
            if !strict {
                return finish(t[s]);
            }
            let best = (0..ground)
                .filter(|&bit| s >> bit & 1 == 0)
                .map(|bit| t[s | (1 << bit)])
                .fold(NONE, better);
            finish(best)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(ground: usize, values: &[f64], below: bool, strict: bool) -> Vec<Option<Extremum>> {
        let full = (1usize << ground) - 1;
        (1..=full)
            .map(|s| {
                (1..=full)
                    .filter(|&t| {
                        let related = if below { t & !s == 0 } else { s & !t == 0 };
                        related && !(strict && t == s)
                    })
                    .map(|t| Extremum {
                        value: values[t - 1],
                        at: t - 1,
                    })
                    .reduce(better)
            })
            .collect()
    }

    proptest! {
        #[test]
        fn transforms_match_naive_scan(
            (ground, values) in (1usize..6).prop_flat_map(|g| {
                (Just(g), proptest::collection::vec(0u8..6, (1 << g) - 1))
            }),
        ) {
            let values: Vec<f64> = values.into_iter().map(f64::from).collect();
            for strict in [false, true] {
                prop_assert_eq!(down_min(ground, &values, strict), naive(ground, &values, true, strict));
                prop_assert_eq!(up_min(ground, &values, strict), naive(ground, &values, false, strict));
            }
        }
    }

    #[test]
    fn strict_extremes_missing_at_boundary() {
        // ground 2: masks 1,2,3 -> ids 0,1,2
        let v = [1.0, 2.0, 3.0];
        assert_eq!(down_min(2, &v, true)[0], None);
        assert_eq!(up_min(2, &v, true)[2], None);
        assert_eq!(up_min(2, &v, true)[0], Some(Extremum { value: 3.0, at: 2 }));
    }
}
