use serde::{Deserialize, Serialize};

use super::{fiber_charts, operator, ComponentChange, CycleGluingData, Edges, Scaling, ONE};
use crate::cocycle::DomainGeometry;
use crate::error::Result;
use crate::series::{Complex, LaurentSeries2, TruncatedSeries2};

use std::f64::consts::PI;

/// Output of [`normalize_chain`]: every edge but the closing one is standard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainResult {
    /// Equivalent data; `G_edge[i] = 1` to order `N` for `i < n - 1`.
    pub data: CycleGluingData,
    /// Base scales making the open edges' constants 1.
    pub scaling: Scaling,
    pub components: Vec<ComponentChange>,
    /// Worst of the open-edge conjugacy defect and the transport round trip.
    pub residual: f64,
    pub iterations: usize,
}

/// Makes edges `0..n-1` standard without small divisors. The linear problem
/// `t_i^b c^i_{a,a-b} - c^{i+1}_{b,a-b} = rho_{i,ab}` is solved by
/// back-substitution: modes `d >= 0` from `c^{n-1} = 0` downward, modes `d < 0`
/// from `c^0 = 0` upward. The closing edge absorbs everything and ends up
/// with constant term `prod G_edge(0, 0)`.
pub fn normalize_chain(data: &CycleGluingData) -> Result<ChainResult> {
    let n = data.n();
    let order = data.order();
    let mut base = vec![ONE; n];
    for i in 0..n - 1 {
        base[i + 1] = base[i] * data.g_edge[i].constant_term();
    }
    let scaling = Scaling {
        fiber: ONE,
        base,
        branch: "base scales only".into(),
    };
    let edges = scaling.apply(&data.edges());
    let inv = Complex::new(0.0, -1.0 / (2.0 * PI));
    let g = edges.g[..n - 1]
        .iter()
        .map(|g| Ok(g.log()?.scale(inv)))
        .collect::<Result<Vec<_>>>()?;
    let maps = edges.maps()?;
    let annulus = DomainGeometry::default().curve_annulus();
    let mut global = vec![LaurentSeries2::zero(order, order, annulus); n];
    let mut plus = vec![TruncatedSeries2::zero(order); n];
    let mut minus = vec![TruncatedSeries2::zero(order); n];
    let gmax = g.iter().map(|x| x.max_abs()).fold(0.0, f64::max);
    let mut iterations = 0;
    for _ in 0..(2 * order + 2) {
        let lh = operator(&maps, &plus, &minus, 0..n - 1)?;
        let rho: Vec<TruncatedSeries2> = g.iter().zip(&lh).map(|(a, b)| a - b).collect();
        let defect = rho.iter().map(|r| r.max_abs()).fold(0.0, f64::max);
        if defect <= 1e-15 * (1.0 + gmax) {
            break;
        }
        let inc = chain_solve(&edges.t, &rho, order, &global[0])?;
        for c in 0..n {
            global[c] = global[c].add(&inc[c])?;
            (plus[c], minus[c]) = fiber_charts(&global[c], order)?;
        }
        iterations += 1;
    }
    let components = (0..n)
        .map(|c| ComponentChange::build(plus[c].clone(), global[c].clone(), minus[c].clone()))
        .collect::<Result<Vec<_>>>()?;
    let new_g = transport(&edges, &components)?;
    let residual = chain_residual(&edges, &components, &new_g)?;
    let out = CycleGluingData::new(data.t_edge.clone(), new_g)?;
    Ok(ChainResult {
        data: out,
        scaling,
        components,
        residual,
        iterations,
    })
}

fn chain_solve(
    t: &[Complex],
    rho: &[TruncatedSeries2],
    order: usize,
    template: &LaurentSeries2,
) -> Result<Vec<LaurentSeries2>> {
    let n = t.len();
    let zero = LaurentSeries2::zero(order, order, template.annulus());
    let mut c = vec![zero; n];
    let tp: Vec<Vec<Complex>> = t.iter().map(|t| (0..=order).map(|b| t.powi(b as i32)).collect()).collect();
    for d in 0..=order as i64 {
        for i in (0..n - 1).rev() {
            for b in 0..=order - d as usize {
                let a = b + d as usize;
                let next = if b as i64 >= d { c[i + 1].coeff(b, d) } else { Complex::new(0.0, 0.0) };
                c[i].set(a, d, (rho[i].coeff(a, b) + next) / tp[i][b])?;
            }
        }
    }
    for d in 1..=order as i64 {
        for i in 0..n - 1 {
            for a in 0..=order - d as usize {
                let b = a + d as usize;
                let here = if a as i64 >= d { c[i].coeff(a, -d) } else { Complex::new(0.0, 0.0) };
                c[i + 1].set(b, -d, tp[i][b] * here - rho[i].coeff(a, b))?;
            }
        }
    }
    Ok(c)
}

/// Edge `i` in the new coordinates of component `i + 1`:
/// `G_hat = G H^+ / (H^- o F)`, composed with the inverse of
/// `(S, xi0) -> (S / H^+, xi0 H^+)`.
pub(crate) fn transport(edges: &Edges, components: &[ComponentChange]) -> Result<Vec<TruncatedSeries2>> {
    let n = edges.n();
    let order = edges.order();
    let maps = edges.maps()?;
    (0..n)
        .map(|i| {
            let next = &components[(i + 1) % n];
            let pulled = components[i].big_h_minus.compose(&maps[i].0, &maps[i].1)?;
            let old = &(&edges.g[i] * &next.big_h_plus) * &pulled.invert_unit()?;
            let (s, xi) = invert_coordinates(&next.big_h_plus, order)?;
            old.compose(&s, &xi)
        })
        .collect()
}

/// `(S, xi0)` as series in `(S_hat, xi0_hat)` from `S = S_hat H`, `xi0 = xi0_hat / H`.
fn invert_coordinates(h: &TruncatedSeries2, order: usize) -> Result<(TruncatedSeries2, TruncatedSeries2)> {
    let s_hat = TruncatedSeries2::monomial(order, 1, 0, ONE);
    let xi_hat = TruncatedSeries2::monomial(order, 0, 1, ONE);
    let h_inv = h.invert_unit()?;
    let (mut s, mut xi) = (s_hat.clone(), xi_hat.clone());
    for _ in 0..(2 * order + 2) {
        let s_next = &s_hat * &h.compose(&s, &xi)?;
        let xi_next = &xi_hat * &h_inv.compose(&s, &xi)?;
        if s_next == s && xi_next == xi {
            break;
        }
        (s, xi) = (s_next, xi_next);
    }
    Ok((s, xi))
}

fn chain_residual(edges: &Edges, components: &[ComponentChange], new_g: &[TruncatedSeries2]) -> Result<f64> {
    let n = edges.n();
    let order = edges.order();
    let one = TruncatedSeries2::one(order);
    let mut worst: f64 = 0.0;
    // the closing edge is not standard yet
    let maps = edges.maps()?;
    for i in 0..n - 1 {
        let next = &components[i + 1];
        let pulled = components[i].big_h_minus.compose(&maps[i].0, &maps[i].1)?;
        worst = worst.max(pulled.max_abs_diff(&(&next.big_h_plus * &edges.g[i])));
        worst = worst.max(new_g[i].max_abs_diff(&one));
    }
    // composing the closing edge back through the forward map recovers G H^+ / (H^- o F)
    let c0 = &components[0];
    let back = new_g[n - 1].compose(&c0.s_hat, &c0.xi0_hat)?;
    let pulled = components[n - 1].big_h_minus.compose(&maps[n - 1].0, &maps[n - 1].1)?;
    let old = &(&edges.g[n - 1] * &c0.big_h_plus) * &pulled.invert_unit()?;
    worst = worst.max(back.max_abs_diff(&old));
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{DiophantineAngle, UnitCircleConstant};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn data(n: usize, order: usize, size: f64, seed: u64) -> CycleGluingData {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gs = Vec::new();
        for _ in 0..n {
            let mut g = TruncatedSeries2::one(order);
            for a in 0..=order {
                for b in 0..=order {
                    if a + b > 0 {
                        g.set(a, b, Complex::new(rng.gen_range(-size..size), rng.gen_range(-size..size)));
                    }
                }
            }
            gs.push(g);
        }
        let mut ts = vec![UnitCircleConstant::new(ONE).unwrap(); n];
        ts[n - 1] = UnitCircleConstant::from_angle(DiophantineAngle::golden());
        CycleGluingData::new(ts, gs).unwrap()
    }

    #[test]
    fn open_edges_become_standard() {
        let d = data(3, 5, 0.05, 11);
        let res = normalize_chain(&d).unwrap();
        assert!(res.residual < 1e-12, "{}", res.residual);
        assert_eq!(res.data.product_t(), d.product_t());
    }

    #[test]
    fn closing_constant_is_the_product() {
        let mut d = data(2, 4, 0.05, 12);
        let c = [Complex::from_polar(1.3, 0.2), Complex::from_polar(0.8, -0.9)];
        for (g, c) in d.g_edge.iter_mut().zip(c) {
            *g = g.scale(c);
        }
        let res = normalize_chain(&d).unwrap();
        let got = res.data.g_edge[1].constant_term();
        assert!((got - c[0] * c[1]).norm() < 1e-13, "{got}");
        assert!(res.residual < 1e-12);
    }

    #[test]
    fn standard_input_is_untouched() {
        let t = UnitCircleConstant::from_angle(DiophantineAngle::golden());
        let d = CycleGluingData::new(vec![t.clone(), t], vec![TruncatedSeries2::one(4); 2]).unwrap();
        let res = normalize_chain(&d).unwrap();
        assert_eq!(res.data, d);
        assert_eq!(res.iterations, 0);
    }
}
