use crate::diffusion::Cascade;
use crate::error::{Error, Result};

/// Average-degree estimate from first arrivals.
///
/// Each cascade contributes `mu1 / t_min`, with `t_min` its smallest
/// positive arrival time. Since `t_min` is roughly exponential, `1 / t_min`
/// has an unbounded mean and a long right tail, so the contributions are
/// combined by an upper-trimmed mean dropping the `floor(trim * count)`
/// largest values. Cascades without a positive arrival are skipped with a
/// warning.
pub fn estimate_avg_degree(cascades: &[Cascade], mu1: f64, trim: f64) -> Result<f64> {
    if !(mu1 > 0.0 && mu1.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "mu1 must be positive, got {mu1}"
        )));
    }
    if !(0.0..0.5).contains(&trim) {
        return Err(Error::InvalidParameter(format!(
            "trim must lie in [0, 0.5), got {trim}"
        )));
    }
    if cascades.is_empty() {
        return Err(Error::NoCascades);
    }
    let mut values = Vec::with_capacity(cascades.len());
    for c in cascades {
        match c.t_min() {
            Some(t) => values.push(mu1 / t),
            None => log::warn!(
                "cascade from {} has no positive arrival time; skipped",
                c.source()
            ),
        }
    }
    if values.is_empty() {
        return Err(Error::InvalidParameter(
            "no cascade has a positive arrival time".into(),
        ));
    }
    Ok(upper_trimmed_mean(&mut values, trim))
}

pub(crate) fn upper_trimmed_mean(values: &mut [f64], trim: f64) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let cut = (trim * values.len() as f64).floor() as usize;
    let kept = &values[..values.len() - cut];
    kept.iter().sum::<f64>() / kept.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cascade_formula() {
        let c = Cascade::new(0, vec![Some(0.0), Some(0.5), Some(2.0)]).unwrap();
        assert_eq!(estimate_avg_degree(&[c], 1.0, 0.1).unwrap(), 2.0);
    }

    #[test]
    fn trimming_drops_largest() {
        let mut v = vec![100.0, 1.0, 2.0, 3.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0];
        assert_eq!(upper_trimmed_mean(&mut v, 0.1), 2.0);
        let mut v = vec![1.0, 3.0];
        assert_eq!(upper_trimmed_mean(&mut v, 0.1), 2.0);
        let mut v = vec![1.0, 3.0, 5.0, 7.0];
        assert_eq!(upper_trimmed_mean(&mut v, 0.25), 3.0);
    }

    #[test]
    fn cascades_without_arrivals_are_skipped() {
        let a = Cascade::new(0, vec![Some(0.0), None]).unwrap();
        let b = Cascade::new(1, vec![Some(0.25), Some(0.0)]).unwrap();
        assert_eq!(estimate_avg_degree(&[a.clone(), b], 1.0, 0.0).unwrap(), 4.0);
        assert!(estimate_avg_degree(&[a], 1.0, 0.0).is_err());
    }
}
