//! In-place fast Walsh-Hadamard transform over `i64`.
//!
//! The transform is unnormalized: applying it twice multiplies the input by
//! `len`. All spectra in this crate are dyadic rationals, so keeping the
//! butterfly in integers and dividing by a power of two at the end stays
//! exact where a floating-point pipeline would accumulate rounding error.

/// Replaces `data` with its Walsh-Hadamard transform.
///
/// `data.len()` must be a power of two. With inputs bounded by `B` in
/// absolute value every intermediate is bounded by `len * B`, so for the
/// workloads in this crate (`len <= 2^24`, `B <= 2^24`) nothing approaches
/// `i64` overflow.
pub fn fwht(data: &mut [i64]) {
    assert!(
        data.len().is_power_of_two(),
        "fwht input length must be a power of two, got {}",
        data.len()
    );
    let mut half = 1;
    while half < data.len() {
        let step = half * 2;
        for block in (0..data.len()).step_by(step) {
            for lo in block..block + half {
                let hi = lo + half;
                let a = data[lo];
                let b = data[hi];
                data[lo] = a + b;
                data[hi] = a - b;
            }
        }
        half = step;
    }
}

#[cfg(test)]
mod tests {
    use super::fwht;

    /// O(len^2) transform straight from the definition, as a cross-check.
    fn fwht_naive(data: &[i64]) -> Vec<i64> {
        let len = data.len();
        (0..len)
            .map(|row| {
                (0..len)
                    .map(|col| {
                        let sign = if (row & col).count_ones() % 2 == 0 {
                            1
                        } else {
                            -1
                        };
                        sign * data[col]
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_transform() {
        let cases: &[&[i64]] = &[
            &[7],
            &[1, -1],
            &[3, 0, -2, 5],
            &[1, 1, 1, -1, 1, -1, -1, -1],
        ];
        for case in cases {
            let mut out = case.to_vec();
            fwht(&mut out);
            assert_eq!(out, fwht_naive(case), "input {case:?}");
        }
    }

    #[test]
    fn double_application_scales_by_len() {
        let input: Vec<i64> = vec![4, -7, 0, 1, 2, 2, -3, 9];
        let mut out = input.clone();
        fwht(&mut out);
        fwht(&mut out);
        let scaled: Vec<i64> = input.iter().map(|v| v * 8).collect();
        assert_eq!(out, scaled);
    }

    #[test]
    #[should_panic(expected = "power of two")]
    fn rejects_non_power_of_two() {
        let mut data = vec![1, 2, 3];
        fwht(&mut data);
    }
}
