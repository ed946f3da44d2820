use crate::scalar::Real;

/// Number of whole steps of size `h` in `[0, t_end]`, i.e. `floor(t_end/h)`
/// with a relative guard against the quotient landing a few ulps below an
/// integer.
pub fn step_count<T: Real>(t_end: T, h: T) -> usize {
    let ratio = (t_end / h).to_f64().unwrap_or(0.0);
    let guarded = ratio + ratio.abs() * 1e-12 + 1e-12;
    guarded.floor().max(0.0) as usize
}

#[cfg(test)]
mod tests {
    use super::step_count;

    #[test]
    fn handles_inexact_quotients() {
        assert_eq!(step_count(0.3, 0.1), 3);
        assert_eq!(step_count(10.0, 1e-3), 10_000);
        assert_eq!(step_count(10.0, 1e-5), 1_000_000);
        assert_eq!(step_count(0.0, 0.1), 0);
        assert_eq!(step_count(0.25, 0.1), 2);
    }
}
