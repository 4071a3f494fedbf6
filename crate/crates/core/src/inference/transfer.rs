use crate::diffusion::Cascade;
use crate::error::{Error, Result};

/// Reinterprets the cascade from `v_i` as one started at `v_j`.
///
/// Each time is shifted by `T_i(v_j)` up or down, whichever lands closer to
/// the time observed in the cascade from `v_j`; ties go to the upward shift.
/// Vertices untimed in either cascade stay untimed.
pub fn transfer(ci: &Cascade, cj: &Cascade) -> Result<Cascade> {
    if ci.n() != cj.n() {
        return Err(Error::InvalidParameter(format!(
            "cascades cover {} and {} vertices",
            ci.n(),
            cj.n()
        )));
    }
    let offset = ci.time(cj.source()).ok_or(Error::MissingTime {
        source_vertex: ci.source(),
        vertex: cj.source(),
    })?;
    let times = ci
        .times()
        .iter()
        .zip(cj.times())
        .map(|(ti, tj)| match (ti, tj) {
            (Some(ti), Some(tj)) => Some(pick(*ti, offset, *tj)),
            _ => None,
        })
        .collect();
    Cascade::new(cj.source(), times)
}

#[inline]
pub(crate) fn pick(ti: f64, offset: f64, tj: f64) -> f64 {
    let up = ti + offset;
    let down = ti - offset;
    if (down - tj).abs() < (up - tj).abs() {
        down
    } else {
        up
    }
}

/// Row form of [`transfer`] over NaN-marked time rows.
pub(crate) fn transfer_row(row_i: &[f64], offset: f64, row_j: &[f64], out: &mut Vec<f64>) {
    out.clear();
    out.extend(row_i.iter().zip(row_j).map(|(&ti, &tj)| {
        if ti.is_nan() || tj.is_nan() {
            f64::NAN
        } else {
            pick(ti, offset, tj)
        }
    }));
}
