use serde::{Deserialize, Serialize};

use super::{ComponentChange, Edges, NodeGluingData, NormalFormResult};
use crate::error::{Error, Result};
use crate::series::{LaurentSeries2, TruncatedSeries2};

/// Largest coefficient defects found by [`verify_conjugacy`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualBreakdown {
    /// `|H^- o F - H^+ G|`.
    pub conjugacy: f64,
    /// `|T_hat o F - t xi0_hat|` and `|xi_inf_hat o F - S_hat|`.
    pub standard_form: f64,
    /// Disagreement of the three charts of `h` on their overlaps.
    pub gluing: f64,
}

impl ResidualBreakdown {
    pub fn total(&self) -> f64 {
        self.conjugacy.max(self.standard_form).max(self.gluing)
    }
}

/// Re-derives `H` from the stored `h` and checks every edge in the `(S, xi0)`
/// chart of the `S`-end.
pub fn verify_conjugacy(data: &NodeGluingData, result: &NormalFormResult) -> Result<f64> {
    if result.components.len() != 1 {
        return Err(Error::Invalid(format!(
            "a node has one component, the result has {}",
            result.components.len()
        )));
    }
    let edges = result.scaling.apply(&Edges {
        t: vec![data.t.t()],
        g: vec![data.g.clone()],
    });
    Ok(edge_residual(&edges, &result.components)?.total())
}

pub(crate) fn edge_residual(edges: &Edges, components: &[ComponentChange]) -> Result<ResidualBreakdown> {
    let n = edges.n();
    if components.len() != n {
        return Err(Error::Invalid(format!(
            "{n} edges but {} components",
            components.len()
        )));
    }
    let fresh = components
        .iter()
        .map(|c| ComponentChange::build(c.h_plus.clone(), c.h_middle.clone(), c.h_minus.clone()))
        .collect::<Result<Vec<_>>>()?;
    let maps = edges.maps()?;
    let mut out = ResidualBreakdown {
        conjugacy: 0.0,
        standard_form: 0.0,
        gluing: 0.0,
    };
    for i in 0..n {
        let (u, v) = &maps[i];
        let (here, next) = (&fresh[i], &fresh[(i + 1) % n]);
        let pulled = here.big_h_minus.compose(u, v)?;
        out.conjugacy = out
            .conjugacy
            .max(pulled.max_abs_diff(&(&next.big_h_plus * &edges.g[i])));
        let t_new = here.t_hat.compose(u, v)?;
        let xi_new = here.xi_inf_hat.compose(u, v)?;
        out.standard_form = out
            .standard_form
            .max(t_new.max_abs_diff(&next.xi0_hat.scale(edges.t[i])))
            .max(xi_new.max_abs_diff(&next.s_hat));
    }
    for c in components {
        out.gluing = out
            .gluing
            .max(gluing_defect(&c.h_plus, &c.h_middle, &c.h_minus));
    }
    Ok(out)
}

/// `S^a xi0^b` and `T^a xi_inf^b` both sit at slice `b` of the curve chart, at
/// modes `a - b` and `b - a`; modes with `|k| > m` must vanish.
pub(crate) fn gluing_defect(plus: &TruncatedSeries2, middle: &LaurentSeries2, minus: &TruncatedSeries2) -> f64 {
    let n = plus.order();
    let mut worst: f64 = 0.0;
    let lookup = |m: usize, k: i64| {
        if m <= middle.order() && k.unsigned_abs() as usize <= middle.l_max() {
            middle.coeff(m, k)
        } else {
            super::zero_complex()
        }
    };
    for a in 0..=n {
        for b in 0..=n {
            let k = a as i64 - b as i64;
            worst = worst.max((plus.coeff(a, b) - lookup(b, k)).norm());
            worst = worst.max((minus.coeff(a, b) - lookup(b, -k)).norm());
        }
    }
    for (m, slice) in middle.slices().iter().enumerate() {
        for (k, c) in slice.modes() {
            if k.unsigned_abs() as usize > m {
                worst = worst.max(c.norm());
            }
        }
    }
    worst
}

pub(crate) fn gluing_max(components: &[ComponentChange]) -> f64 {
    components
        .iter()
        .map(|c| gluing_defect(&c.h_plus, &c.h_middle, &c.h_minus))
        .fold(0.0, f64::max)
}
