use super::{
    node_term, CocycleRhs, CocycleSolution, DomainGeometry, Extension, OrderDiagnostics,
    OrderSolution,
};
use crate::diophantine::{divisor_of, TOL_RESONANCE};
use crate::error::{Error, Result};
use crate::series::{
    compose_chart, Annulus, ChartMap, Complex, LaurentPolynomial, LaurentSeries2,
    TruncatedSeries1, TruncatedSeries2,
};

const ONE: Complex = Complex::new(1.0, 0.0);

/// `|t_+^{-n} - t_-^{-n}|`, through the reduced angle when both are unit.
pub(crate) fn node_divisor(n: usize, t_plus: Complex, t_minus: Complex) -> f64 {
    divisor_of(t_minus / t_plus, n as u64) / t_minus.norm().powi(n as i32)
}

/// Solves one order by Laurent-mode matching. Modes `k != 0` are read off
/// directly; the zero mode is the only place a small divisor appears.
pub fn solve_order(
    n: usize,
    bplus: &LaurentPolynomial,
    bminus: &LaurentPolynomial,
    t_plus: Complex,
    t_minus: Complex,
) -> Result<OrderSolution> {
    let divisor = node_divisor(n, t_plus, t_minus);
    if !(divisor >= TOL_RESONANCE) {
        return Err(Error::Torsion { n, divisor });
    }
    let l = bplus.bandwidth().max(bminus.bandwidth());
    let hull = Annulus::new(
        bplus.annulus().inner.min(bminus.annulus().inner),
        bplus.annulus().outer.max(bminus.annulus().outer),
    )?;
    let tp_n = t_plus.powi(n as i32);
    let tm_n = t_minus.powi(n as i32);
    let mut a1 = LaurentPolynomial::zero(l, hull);
    let mut p = TruncatedSeries1::zero(l);
    let mut q = TruncatedSeries1::zero(l);
    for k in 1..=l as i64 {
        let ak = -bminus.coeff(k);
        a1.set(k, ak)?;
        p.set(k as usize, tp_n * (bplus.coeff(k) + ak));
        let ak = -bplus.coeff(-k);
        a1.set(-k, ak)?;
        q.set(k as usize, tm_n * (bminus.coeff(-k) + ak));
    }
    let inv_p = ONE / tp_n;
    let r = (bplus.coeff(0) - bminus.coeff(0)) / (inv_p - ONE / tm_n);
    a1.set(0, inv_p * r - bplus.coeff(0))?;
    Ok(OrderSolution {
        p,
        q,
        r,
        a1,
        divisor,
    })
}

/// `h^+_m` and `h^-_m`: the order-`m` re-expansions of `q_nu(y) (x y)^nu` in
/// the `x`-side chart and of `p_nu(x) (x y)^nu` in the `y`-side chart, over
/// the already solved orders `nu < m` (given in order, starting at 1).
pub fn correction_terms<'a, I>(
    m: usize,
    lower: I,
    t_plus: Complex,
    t_minus: Complex,
    geometry: &DomainGeometry,
) -> Result<(LaurentPolynomial, LaurentPolynomial)>
where
    I: IntoIterator<Item = (&'a TruncatedSeries1, &'a TruncatedSeries1)>,
{
    let zero1 = TruncatedSeries1::zero(0);
    let mut qs = TruncatedSeries2::zero(m);
    let mut ps = TruncatedSeries2::zero(m);
    for (i, (p, q)) in lower.into_iter().take(m.saturating_sub(1)).enumerate() {
        let nu = i + 1;
        qs = &qs + &node_term(&zero1, q, Complex::new(0.0, 0.0), nu, m);
        ps = &ps + &node_term(p, &zero1, Complex::new(0.0, 0.0), nu, m);
    }
    let hplus = compose_chart(&qs, ChartMap::NodePlus { t_plus }, m, geometry.plus_annulus())?;
    let hminus = compose_chart(
        &ps,
        ChartMap::NodeMinus { t_minus },
        m,
        geometry.minus_annulus(),
    )?;
    Ok((hplus.slice(m).clone(), hminus.slice(m).clone()))
}

/// Runs orders `1..=N`, each against `b_{+-,m} - h^{+-}_m`.
pub fn solve_cousin(
    rhs: &CocycleRhs,
    geometry: &DomainGeometry,
    t_plus: Complex,
    t_minus: Complex,
) -> Result<CocycleSolution> {
    let n = rhs.order();
    let mut orders: Vec<OrderSolution> = Vec::with_capacity(n);
    let mut diagnostics = Vec::with_capacity(n);
    for m in 1..=n {
        let (hp, hm) = correction_terms(
            m,
            orders.iter().map(|o| (&o.p, &o.q)),
            t_plus,
            t_minus,
            geometry,
        )?;
        let bp = rhs.bplus(m).sub(&hp)?;
        let bm = rhs.bminus(m).sub(&hm)?;
        let sol = solve_order(m, &bp, &bm, t_plus, t_minus)?;
        let mid = geometry.middle_annulus();
        diagnostics.push(OrderDiagnostics {
            order: m,
            divisor: sol.divisor,
            sup_a1: sol.sup_a1(geometry),
            sup_a0: sol.sup_a0(geometry),
            radii: (mid.inner, mid.outer, geometry.disk_radius()),
        });
        orders.push(sol);
    }
    Ok(CocycleSolution {
        orders,
        diagnostics,
    })
}

/// Splits off the order-0 data as `G0 = p(x) + q(y) + r` and returns the
/// right-hand side with `G0`'s chart expansions subtracted, so both sides
/// vanish on the curve.
pub fn reduce_to_vanishing(
    fplus: &LaurentSeries2,
    fminus: &LaurentSeries2,
    t_plus: Complex,
    t_minus: Complex,
) -> Result<(CocycleRhs, Extension)> {
    let order = fplus.order().min(fminus.order());
    let l = fplus.l_max().max(fminus.l_max());
    let s_plus = fplus.slice(0);
    let s_minus = fminus.slice(0);
    if let Some((k, _)) = s_plus.modes().find(|(k, c)| *k < 0 && c.norm() > 0.0) {
        return Err(Error::NotExtendable {
            reason: format!("x-side order-0 data has the pole mode z^{k}"),
        });
    }
    if let Some((k, _)) = s_minus.modes().find(|(k, c)| *k > 0 && c.norm() > 0.0) {
        return Err(Error::NotExtendable {
            reason: format!("y-side order-0 data has the mode z^{k}"),
        });
    }
    let (r, r_minus) = (s_plus.coeff(0), s_minus.coeff(0));
    let scale = 1.0 + r.norm().max(r_minus.norm());
    if (r - r_minus).norm() > 1e-12 * scale {
        return Err(Error::NotExtendable {
            reason: format!("constant terms {r} and {r_minus} differ"),
        });
    }
    let mut p = TruncatedSeries1::zero(l);
    let mut q = TruncatedSeries1::zero(l);
    for k in 1..=l {
        p.set(k, s_plus.coeff(k as i64));
        q.set(k, s_minus.coeff(-(k as i64)));
    }
    let g0 = node_term(&p, &q, r, 0, order);
    let plus = fplus.sub(&compose_chart(
        &g0,
        ChartMap::NodePlus { t_plus },
        l,
        fplus.annulus(),
    )?)?;
    let minus = fminus.sub(&compose_chart(
        &g0,
        ChartMap::NodeMinus { t_minus },
        l,
        fminus.annulus(),
    )?)?;
    let rhs = CocycleRhs::new(
        plus.slices()[1..=order].to_vec(),
        minus.slices()[1..=order].to_vec(),
    )?;
    Ok((rhs, Extension { p, q, r }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::DiophantineAngle;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn geo() -> DomainGeometry {
        DomainGeometry::default()
    }

    fn lp(annulus: Annulus, modes: &[(i64, Complex)]) -> LaurentPolynomial {
        LaurentPolynomial::from_modes(3, annulus, modes.iter().copied()).unwrap()
    }

    #[test]
    fn zero_in_zero_out() {
        let g = geo();
        let s = solve_order(
            2,
            &lp(g.plus_annulus(), &[]),
            &lp(g.minus_annulus(), &[]),
            DiophantineAngle::golden().t(),
            ONE,
        )
        .unwrap();
        assert_eq!(s.r, c(0.0));
        assert!(s.a1.is_zero() && s.p.max_abs() == 0.0 && s.q.max_abs() == 0.0);
    }

    #[test]
    fn zero_mode_two_by_two() {
        let g = geo();
        let tp = DiophantineAngle::golden().t();
        let s = solve_order(1, &lp(g.plus_annulus(), &[(0, ONE)]), &lp(g.minus_annulus(), &[]), tp, ONE)
            .unwrap();
        // tp^-1 r - a = 1, r - a = 0
        let r = ONE / (ONE / tp - ONE);
        assert!((s.r - r).norm() < 1e-14);
        assert!((s.a1.coeff(0) - (r / tp - ONE)).norm() < 1e-14);
        for k in [-3, -2, -1, 1, 2, 3] {
            assert_eq!(s.a1.coeff(k), c(0.0));
        }
    }

    #[test]
    fn pure_z_mode_goes_to_p() {
        let g = geo();
        let tp = Complex::from_polar(1.0, 0.9);
        let tm = Complex::from_polar(1.0, -0.2);
        for n in 1..4 {
            let s = solve_order(n, &lp(g.plus_annulus(), &[(1, ONE)]), &lp(g.minus_annulus(), &[]), tp, tm)
                .unwrap();
            assert!(s.a1.is_zero());
            assert!((s.p.coeff(1) - tp.powi(n as i32)).norm() < 1e-15);
            assert_eq!(s.q.max_abs(), 0.0);
            assert_eq!(s.r, c(0.0));
        }
    }

    #[test]
    fn torsion_is_reported_with_order() {
        let g = geo();
        let t = Complex::from_polar(1.0, std::f64::consts::PI / 2.0);
        let err = solve_order(4, &lp(g.plus_annulus(), &[]), &lp(g.minus_annulus(), &[]), t, ONE)
            .unwrap_err();
        assert!(matches!(err, Error::Torsion { n: 4, .. }));
    }

    #[test]
    fn correction_examples() {
        let g = geo();
        let none: Vec<(&TruncatedSeries1, &TruncatedSeries1)> = Vec::new();
        let (hp, hm) = correction_terms(1, none, ONE, ONE, &g).unwrap();
        assert!(hp.is_zero() && hm.is_zero());

        let y = TruncatedSeries1::from_coeffs(vec![c(0.0), c(1.0)]).unwrap();
        let zero = TruncatedSeries1::zero(1);
        let (hp, hm) = correction_terms(2, [(&zero, &y)], ONE, ONE, &g).unwrap();
        assert_eq!(hp.coeff(-1), ONE);
        assert!(hm.is_zero());
        let (hp, hm) = correction_terms(2, [(&y, &zero)], ONE, ONE, &g).unwrap();
        assert!(hp.is_zero());
        assert_eq!(hm.coeff(1), ONE);
    }

    #[test]
    fn reduce_examples() {
        let g = geo();
        let tp = Complex::from_polar(1.0, 0.4);
        let tm = Complex::from_polar(1.0, 1.3);
        let mut fp = LaurentSeries2::zero(3, 3, g.plus_annulus());
        let fm = LaurentSeries2::zero(3, 3, g.minus_annulus());
        let (rhs, ext) = reduce_to_vanishing(&fp, &fm, tp, tm).unwrap();
        assert!(rhs.sups().iter().all(|s| *s == 0.0) && ext.r == c(0.0));

        fp.set(0, 1, ONE).unwrap();
        let (rhs, ext) = reduce_to_vanishing(&fp, &fm, tp, tm).unwrap();
        assert_eq!(ext.p.coeff(1), ONE);
        // x = z w / t_- lands in slice 1 on the y-side
        assert!((rhs.bminus(1).coeff(1) + ONE / tm).norm() < 1e-15);
        assert!(rhs.bplus(1).is_zero());

        let mut fp = LaurentSeries2::zero(3, 3, g.plus_annulus());
        let mut fm = LaurentSeries2::zero(3, 3, g.minus_annulus());
        fp.set(0, 0, ONE).unwrap();
        fm.set(0, 0, ONE).unwrap();
        let (rhs, ext) = reduce_to_vanishing(&fp, &fm, tp, tm).unwrap();
        assert_eq!(ext.r, ONE);
        assert!(rhs.sups().iter().all(|s| *s == 0.0));

        fp.set(0, -1, ONE).unwrap();
        assert!(matches!(
            reduce_to_vanishing(&fp, &fm, tp, tm),
            Err(Error::NotExtendable { .. })
        ));
    }
}
