/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Weighted mean of `(weight, value)` pairs.
///
/// Values are shifted by their minimum before accumulation and the result is
/// clamped to `[min, max]`, so a constant input maps to itself and the result
/// never leaves the hull of the inputs through rounding. Returns `None` when
/// the total weight is zero.
pub(crate) fn weighted_mean<I>(pairs: I) -> Option<f64>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let pairs: Vec<(f64, f64)> = pairs.into_iter().filter(|(w, _)| *w > 0.0).collect();
    if pairs.is_empty() {
        return None;
    }
    let lo = pairs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = pairs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let mut num = CompensatedSum::default();
    let mut den = CompensatedSum::default();
    for (w, v) in &pairs {
        num.add(w * (v - lo));
        den.add(*w);
    }
    let den = den.total();
    if den <= 0.0 {
        return None;
    }
    Some((lo + num.total() / den).clamp(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let acc: CompensatedSum = [1e16, 1.0, -1e16].into_iter().collect();
        assert_eq!(acc.total(), 1.0);
    }

    #[test]
    fn weighted_mean_of_constant_is_exact() {
        let m = weighted_mean([(1.0, 0.1), (2.0, 0.1), (7.0, 0.1)]).unwrap();
        assert_eq!(m, 0.1);
    }

    #[test]
    fn weighted_mean_ignores_zero_weights() {
        assert_eq!(weighted_mean([(0.0, 5.0)]), None);
        assert_eq!(weighted_mean([(0.0, 5.0), (2.0, 1.0)]), Some(1.0));
    }
}
