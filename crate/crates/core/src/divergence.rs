//! Distances between candidate distributions and model distributions.
//!
//! Throughout, `p` is the candidate (observed) distribution and `q` the
//! model's. KL uses the natural logarithm and the `0 * ln(0 / q) = 0`
//! convention.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item_bank::JoinedItem;
use crate::numeric::mean;
use crate::reshape::{distribution, Source};

fn same_length(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::Domain(format!(
            "distribution lengths differ ({} vs {})",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

/// `sum_i p_i ln(p_i / q_i)`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    same_length(p, q)?;
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return Err(Error::Domain(format!(
                "KL divergence is infinite: q has zero mass where p = {pi}"
            )));
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total)
}

/// `0.5 * sum_i |p_i - q_i|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    same_length(p, q)?;
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `sqrt(sum_i (sqrt(p_i) - sqrt(q_i))^2) / sqrt(2)`.
pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64> {
    same_length(p, q)?;
    let sq: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    Ok(sq.sqrt() / std::f64::consts::SQRT_2)
}

/// Mean per-item divergences for one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub level: String,
    pub kl: f64,
    pub hellinger: f64,
    pub total_variation: f64,
    pub n_items: usize,
}

/// Unweighted mean over items of each divergence between the candidate
/// distribution and the distribution chosen by `source`.
pub fn aggregate_divergences(
    level: &str,
    items: &[JoinedItem],
    source: Source,
) -> Result<DivergenceRow> {
    if items.is_empty() {
        return Err(Error::Empty("divergences need at least one item"));
    }
    let mut kl = Vec::with_capacity(items.len());
    let mut h = Vec::with_capacity(items.len());
    let mut tv = Vec::with_capacity(items.len());
    for item in items {
        let q = distribution(item, source)?;
        kl.push(kl_divergence(&item.candidate, &q)?);
        h.push(hellinger(&item.candidate, &q)?);
        tv.push(total_variation(&item.candidate, &q)?);
    }
    Ok(DivergenceRow {
        level: level.to_string(),
        kl: mean(&kl, "kl")?,
        hellinger: mean(&h, "hellinger")?,
        total_variation: mean(&tv, "total variation")?,
        n_items: items.len(),
    })
}

/// One step of an empirical CDF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub threshold: f64,
    /// Fraction of values `<= threshold`.
    pub cumulative: f64,
}

/// Right-continuous empirical CDF, one point per distinct value.
pub fn empirical_cdf(values: &[f64]) -> Result<Vec<CdfPoint>> {
    if values.is_empty() {
        return Err(Error::Empty("empirical CDF needs at least one value"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("empirical CDF values must be finite".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points: Vec<CdfPoint> = Vec::new();
    for (i, v) in sorted.iter().enumerate() {
        let cumulative = (i + 1) as f64 / n;
        match points.last_mut() {
            Some(last) if last.threshold == *v => last.cumulative = cumulative,
            _ => points.push(CdfPoint {
                threshold: *v,
                cumulative,
            }),
        }
    }
    Ok(points)
}

/// Every option probability of every item, pooled, for the given source.
pub fn pooled_probabilities(items: &[JoinedItem], source: Source) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in items {
        out.extend_from_slice(&distribution(item, source)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reshape::Shaping;

    fn item(model: Vec<f64>, candidate: Vec<f64>, answer: usize) -> JoinedItem {
        let k = model.len();
        JoinedItem {
            item: crate::item_bank::Item {
                item_id: "i".into(),
                context_id: "c".into(),
                context: String::new(),
                question: String::new(),
                options: (0..k).map(|j| j.to_string()).collect(),
                answer_index: answer,
                level: "B1".into(),
                discrimination: None,
                candidate_count: None,
            },
            candidate,
            model,
        }
    }

    #[test]
    fn kl_fixtures() {
        assert_eq!(kl_divergence(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        let ln2 = kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((ln2 - std::f64::consts::LN_2).abs() < 1e-12);
        let v = kl_divergence(&[0.5, 0.5], &[0.25, 0.75]).unwrap();
        let expected = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 0.1438).abs() < 1e-4);
    }

    #[test]
    fn kl_rejects_zero_model_mass_and_length_mismatch() {
        assert!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).is_err());
        assert!(kl_divergence(&[1.0], &[0.5, 0.5]).is_err());
        assert!(total_variation(&[1.0], &[0.5, 0.5]).is_err());
        assert!(hellinger(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn tv_and_hellinger_fixtures() {
        assert_eq!(total_variation(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!((total_variation(&[0.7, 0.3], &[0.3, 0.7]).unwrap() - 0.4).abs() < 1e-15);

        assert_eq!(hellinger(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert!((hellinger(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        let h = hellinger(&[0.5, 0.5], &[0.25, 0.75]).unwrap();
        assert!((h - 0.1846).abs() < 1e-4, "{h}");
    }

    #[test]
    fn aggregate_means() {
        let same = [item(vec![0.6, 0.4], vec![0.6, 0.4], 0)];
        let row = aggregate_divergences("B1", &same, Source::Model).unwrap();
        assert_eq!((row.kl, row.hellinger, row.total_variation), (0.0, 0.0, 0.0));

        let two = [
            item(vec![0.3, 0.7], vec![0.7, 0.3], 0),
            item(vec![0.5, 0.5], vec![0.5, 0.5], 0),
        ];
        let row = aggregate_divergences("B1", &two, Source::Model).unwrap();
        assert!((row.total_variation - 0.2).abs() < 1e-15);
        assert_eq!(row.n_items, 2);

        let single = aggregate_divergences("B1", &two[..1], Source::Model).unwrap();
        assert_eq!(
            single.hellinger,
            hellinger(&two[0].candidate, &two[0].model).unwrap()
        );
        assert!(aggregate_divergences("B1", &[], Source::Model).is_err());
    }

    #[test]
    fn reshaped_source_is_used() {
        let items = [item(vec![0.9, 0.1], vec![0.75, 0.25], 0)];
        let raw = aggregate_divergences("B1", &items, Source::Model).unwrap();
        let fixed = aggregate_divergences(
            "B1",
            &items,
            Source::Reshaped(Shaping { alpha: 0.0, tau: 2.0 }),
        )
        .unwrap();
        assert!(fixed.kl < 1e-12 && raw.kl > 0.01);
    }

    #[test]
    fn cdf_fixtures() {
        let one = empirical_cdf(&[0.5]).unwrap();
        assert_eq!(one, vec![CdfPoint { threshold: 0.5, cumulative: 1.0 }]);
        let two = empirical_cdf(&[0.8, 0.2]).unwrap();
        assert_eq!(
            two,
            vec![
                CdfPoint { threshold: 0.2, cumulative: 0.5 },
                CdfPoint { threshold: 0.8, cumulative: 1.0 }
            ]
        );
        let dup = empirical_cdf(&[0.1, 0.4, 0.1, 0.4]).unwrap();
        assert_eq!(
            dup,
            vec![
                CdfPoint { threshold: 0.1, cumulative: 0.5 },
                CdfPoint { threshold: 0.4, cumulative: 1.0 }
            ]
        );
        assert!(empirical_cdf(&[]).is_err());
        assert!(empirical_cdf(&[f64::NAN]).is_err());
    }
}
