use super::verify::edge_residual;
use super::{linearize, Edges, NodeGluingData, NormalFormResult, Scaling, ONE};
use crate::cocycle::DomainGeometry;
use crate::error::Result;
use crate::series::TruncatedSeries2;

/// Linearizes a node: rescales the fiber so `G(0, 0) = 1`, then solves
/// `h^- o F_G - h^+ = log(G) / (2 pi i)` by defect correction.
pub fn normalize_node(data: &NodeGluingData, geometry: &DomainGeometry) -> Result<NormalFormResult> {
    let scaling = Scaling {
        fiber: ONE / data.g.constant_term(),
        base: vec![ONE],
        branch: "fiber scale 1/G(0,0)".into(),
    };
    let edges = scaling.apply(&Edges {
        t: vec![data.t.t()],
        g: vec![data.g.clone()],
    });
    let acc = linearize(&edges, geometry)?;
    let (components, diagnostics) = acc.into_components()?;
    let residual = edge_residual(&edges, &components)?.total();
    Ok(NormalFormResult {
        components,
        scaling,
        residual,
        diagnostics,
    })
}

/// `F^* eta / eta` for `eta = dS ^ dxi0 / (S xi0)` on the `S`-end, as a series in
/// `(S, xi0)`. Equals `1 + (S G_S - xi0 G_xi0) / G`; identically 1 iff `G` depends
/// on `S xi0` only.
pub fn two_form_factor(data: &NodeGluingData) -> Result<TruncatedSeries2> {
    let n = data.order();
    // one order of headroom so the derivatives are exact on the output box
    let g = data.g.with_order(n + 1);
    let s = TruncatedSeries2::monomial(n + 1, 1, 0, ONE);
    let xi = TruncatedSeries2::monomial(n + 1, 0, 1, ONE);
    let u = &xi * &g.invert_unit()?;
    let v = &g * &s;
    let jac = &(&u.diff_first() * &v.diff_second()) - &(&u.diff_second() * &v.diff_first());
    Ok((-&jac).with_order(n))
}
