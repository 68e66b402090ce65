use serde::{Deserialize, Serialize};

use super::chain::transport;
use super::verify::edge_residual;
use super::{linearize, normalize_chain, ChainResult, CycleGluingData, NormalFormResult, Scaling, ONE};
use crate::cocycle::DomainGeometry;
use crate::error::{Error, Result};
use crate::series::Complex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleNormalForm {
    /// First stage: open edges made standard.
    pub chain: ChainResult,
    /// Second stage, on `chain.data` rescaled by `result.scaling`.
    pub result: NormalFormResult,
    /// `prod t_edge`, unchanged by both stages.
    pub product_t: Complex,
    pub residual: f64,
}

/// Chain stage, then `c = (prod G(0,0))^{-1/n}` on the principal branch with
/// base scales `a_{i+1} = a_i c G_i(0,0)`, then the coupled Cousin solve
/// around the whole cycle.
pub fn normalize_cycle(data: &CycleGluingData, geometry: &DomainGeometry) -> Result<CycleNormalForm> {
    let chain = normalize_chain(data)?;
    let scaling = root_scaling(&chain.data);
    let edges = scaling.apply(&chain.data.edges());
    let acc = linearize(&edges, geometry)?;
    let (components, diagnostics) = acc.into_components()?;
    let final_residual = edge_residual(&edges, &components)?.total();
    let residual = final_residual.max(chain.residual);
    Ok(CycleNormalForm {
        product_t: chain.data.product_t(),
        chain,
        result: NormalFormResult {
            components,
            scaling,
            residual: final_residual,
            diagnostics,
        },
        residual,
    })
}

fn root_scaling(data: &CycleGluingData) -> Scaling {
    let n = data.n();
    let gamma: Complex = data.g_edge.iter().map(|g| g.constant_term()).product();
    let c = (-gamma.ln() / n as f64).exp();
    let mut base = vec![ONE; n];
    for i in 0..n - 1 {
        base[i + 1] = base[i] * c * data.g_edge[i].constant_term();
    }
    Scaling {
        fiber: c,
        base,
        branch: "principal n-th root".into(),
    }
}

/// Recomputes both stages from `data` and the stored `h`: the chain transport
/// must reproduce `chain.data`, and the final stage must be standard.
pub fn verify_cycle(data: &CycleGluingData, form: &CycleNormalForm) -> Result<f64> {
    let n = data.n();
    if form.chain.components.len() != n || form.result.components.len() != n {
        return Err(Error::Invalid("component count does not match the data".into()));
    }
    let edges = form.chain.scaling.apply(&data.edges());
    let fresh = form
        .chain
        .components
        .iter()
        .map(|c| super::ComponentChange::build(c.h_plus.clone(), c.h_middle.clone(), c.h_minus.clone()))
        .collect::<Result<Vec<_>>>()?;
    let moved = transport(&edges, &fresh)?;
    let mut worst = super::verify::gluing_max(&fresh);
    for (a, b) in moved.iter().zip(&form.chain.data.g_edge) {
        worst = worst.max(a.max_abs_diff(b));
    }
    let second = form.result.scaling.apply(&form.chain.data.edges());
    worst = worst.max(edge_residual(&second, &form.result.components)?.total());
    if data.product_t() != form.product_t {
        return Err(Error::Invalid("product of edge constants changed".into()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{DiophantineAngle, UnitCircleConstant};
    use crate::series::TruncatedSeries2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn data(n: usize, order: usize, size: f64, seed: u64) -> CycleGluingData {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gs = (0..n)
            .map(|_| {
                let mut g = TruncatedSeries2::one(order);
                for a in 0..=order {
                    for b in 0..=order {
                        if a + b > 0 && size > 0.0 {
                            g.set(a, b, Complex::new(rng.gen_range(-size..size), rng.gen_range(-size..size)));
                        }
                    }
                }
                g
            })
            .collect();
        let mut ts = vec![UnitCircleConstant::new(ONE).unwrap(); n];
        ts[n - 1] = UnitCircleConstant::from_angle(DiophantineAngle::golden());
        CycleGluingData::new(ts, gs).unwrap()
    }

    #[test]
    fn three_cycle_is_linearized() {
        let d = data(3, 5, 0.05, 21);
        let res = normalize_cycle(&d, &DomainGeometry::default()).unwrap();
        assert!(res.residual <= 1e-10, "{}", res.residual);
        assert_eq!(res.product_t, d.product_t());
        let v = verify_cycle(&d, &res).unwrap();
        assert!(v <= 1e-10, "{v}");
    }

    #[test]
    fn root_scaling_makes_constants_one() {
        let mut d = data(3, 3, 0.0, 1);
        d.g_edge[2] = d.g_edge[2].scale(Complex::from_polar(1.0, std::f64::consts::PI / 7.0));
        let res = normalize_cycle(&d, &DomainGeometry::default()).unwrap();
        let s = &res.result.scaling;
        let edges = s.apply(&res.chain.data.edges());
        for g in &edges.g {
            assert_eq!(g.constant_term(), ONE);
        }
        let expect = Complex::from_polar(1.0, -std::f64::consts::PI / 21.0);
        assert!((s.fiber - expect).norm() < 1e-15);
    }

    #[test]
    fn corrupted_h_is_detected() {
        let d = data(2, 4, 0.05, 22);
        let mut res = normalize_cycle(&d, &DomainGeometry::default()).unwrap();
        res.result.components[1].h_plus.add_to(1, 1, Complex::new(1e-4, 0.0));
        assert!(verify_cycle(&d, &res).unwrap() > 1e-6);
    }
}
