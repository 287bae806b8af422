//! Small numeric helpers used across modules.

/// Compensated (Kahan) summation. Used wherever long prefix sums feed
/// tolerances of 1e-12 relative.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        KahanSum::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

pub(crate) fn kahan_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = KahanSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

/// n-th harmonic number 1 + 1/2 + ... + 1/n, compensated.
pub(crate) fn harmonic(n: usize) -> f64 {
    kahan_sum((1..=n).map(|i| 1.0 / i as f64))
}

/// |a - b| relative to max(1, |a|, |b|). The floor of 1 keeps comparisons
/// near zero meaningful.
pub(crate) fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0_f64.max(a.abs()).max(b.abs())
}

pub(crate) fn all_finite(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite())
}
