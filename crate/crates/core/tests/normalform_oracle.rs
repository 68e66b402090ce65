mod common;

use std::f64::consts::PI;

use common::*;
use cyclenf_core::diophantine::{DiophantineAngle, UnitCircleConstant};
use cyclenf_core::series::{laurent_to_fiber_chart, Complex, FiberEnd, LaurentSeries2, TruncatedSeries2};
use cyclenf_core::{normalize_node, verify_conjugacy, NodeGluingData};
use nalgebra::{DMatrix, DVector};

/// `(T, xi_inf) = (t xi0 / G, G S)`.
fn maps(t: Complex, g: &TruncatedSeries2) -> (TruncatedSeries2, TruncatedSeries2) {
    let n = g.order();
    let s = TruncatedSeries2::monomial(n, 1, 0, ONE);
    let xi = TruncatedSeries2::monomial(n, 0, 1, ONE);
    ((&xi * &g.invert_unit().unwrap()).scale(t), g * &s)
}

/// Global coefficients `c_{m,d}`, `m <= N`, `|d| <= m`, without `c_{0,0}`.
fn index(order: usize) -> Vec<(usize, i64)> {
    (0..=order)
        .flat_map(|m| (-(m as i64)..=m as i64).map(move |d| (m, d)))
        .filter(|&(m, _)| m > 0)
        .collect()
}

fn global(x: &[Complex], order: usize) -> LaurentSeries2 {
    let mut h = LaurentSeries2::zero(order, order, geometry().curve_annulus());
    for (&(m, d), c) in index(order).iter().zip(x) {
        h.set(m, d, *c).unwrap();
    }
    h
}

fn charts(h: &LaurentSeries2, order: usize) -> (TruncatedSeries2, TruncatedSeries2) {
    (
        laurent_to_fiber_chart(h, FiberEnd::Zero, order).unwrap(),
        laurent_to_fiber_chart(h, FiberEnd::Infinity, order).unwrap(),
    )
}

/// Box monomials `(a, b) != (0, 0)` of `h^- o F_G - h^+`.
fn apply(x: &[Complex], t: Complex, g: &TruncatedSeries2) -> Vec<Complex> {
    let order = g.order();
    let (u, v) = maps(t, g);
    let (plus, minus) = charts(&global(x, order), order);
    let lhs = &minus.compose(&u, &v).unwrap() - &plus;
    let mut out = Vec::new();
    for a in 0..=order {
        for b in 0..=order {
            if a + b > 0 {
                out.push(lhs.coeff(a, b));
            }
        }
    }
    out
}

/// Exact solution of `h^- o F_G - h^+ = log(G) / (2 pi i)` by one dense solve.
fn dense_h(t: Complex, g: &TruncatedSeries2) -> LaurentSeries2 {
    let order = g.order();
    let size = index(order).len();
    let mut mat = DMatrix::<Complex>::zeros(size, size);
    let mut e = vec![ZERO; size];
    for j in 0..size {
        e[j] = ONE;
        for (i, v) in apply(&e, t, g).into_iter().enumerate() {
            mat[(i, j)] = v;
        }
        e[j] = ZERO;
    }
    let rhs = g.log().unwrap().scale(Complex::new(0.0, -1.0 / (2.0 * PI)));
    let mut b = Vec::new();
    for a in 0..=order {
        for c in 0..=order {
            if a + c > 0 {
                b.push(rhs.coeff(a, c));
            }
        }
    }
    let sol = mat.lu().solve(&DVector::from_vec(b)).expect("nonsingular");
    global(sol.as_slice(), order)
}

fn golden() -> UnitCircleConstant {
    UnitCircleConstant::from_angle(DiophantineAngle::golden())
}

#[test]
fn node_matches_dense_solve() {
    for inst in 0..20u64 {
        let order = 1 + inst as usize % 4;
        let mut r = rng(500 + inst);
        let g = random_unit_series(&mut r, order, 0.1);
        let data = NodeGluingData::new(golden(), g.clone()).unwrap();
        let res = normalize_node(&data, &geometry()).unwrap();
        let h = dense_h(golden().t(), &g);
        let (plus, minus) = charts(&h, order);
        let c = &res.components[0];
        let d = c.h_plus.max_abs_diff(&plus).max(c.h_minus.max_abs_diff(&minus));
        assert!(d <= 1e-10, "instance {inst}: {d}");
    }
}

/// `G_{k+1} = (H^- o F_{G_k}) / H^+` converges to the data conjugated to the
/// standard model by `H = exp(2 pi i h)`.
fn manufacture(h: &LaurentSeries2, t: Complex, order: usize) -> TruncatedSeries2 {
    let (plus, minus) = charts(h, order);
    let two_pi_i = Complex::new(0.0, 2.0 * PI);
    let hp = plus.scale(two_pi_i).exp().unwrap();
    let hm = minus.scale(two_pi_i).exp().unwrap();
    let mut g = TruncatedSeries2::one(order);
    for _ in 0..(2 * order + 2) {
        let (u, v) = maps(t, &g);
        g = &hm.compose(&u, &v).unwrap() * &hp.invert_unit().unwrap();
    }
    g
}

#[test]
fn manufactured_h_is_recovered() {
    for order in 1..=10usize {
        let mut r = rng(600 + order as u64);
        let size = index(order).len();
        let x: Vec<Complex> = (0..size).map(|_| rand_c(&mut r, 0.02)).collect();
        let h = global(&x, order);
        let g = manufacture(&h, golden().t(), order);
        let data = NodeGluingData::new(golden(), g).unwrap();
        let res = normalize_node(&data, &geometry()).unwrap();
        let (plus, minus) = charts(&h, order);
        let c = &res.components[0];
        let d = c.h_plus.max_abs_diff(&plus).max(c.h_minus.max_abs_diff(&minus));
        assert!(d <= 1e-11, "N={order}: {d}");
        assert!(res.residual <= 1e-11);
    }
}

#[test]
fn composition_closure_round_trip() {
    let order = 6;
    let mut r = rng(700);
    let g = random_unit_series(&mut r, order, 0.1);
    let data = NodeGluingData::new(golden(), g.clone()).unwrap();
    let res = normalize_node(&data, &geometry()).unwrap();
    let back = manufacture(&res.components[0].h_middle, golden().t(), order);
    assert!(back.max_abs_diff(&g) <= 1e-11, "{}", back.max_abs_diff(&g));
}

#[test]
fn deterministic_and_verifiable() {
    let mut r = rng(800);
    let g = random_unit_series(&mut r, 5, 0.1);
    let data = NodeGluingData::new(golden(), g).unwrap();
    let a = normalize_node(&data, &geometry()).unwrap();
    let b = normalize_node(&data, &geometry()).unwrap();
    assert_eq!(a, b);
    assert_eq!(verify_conjugacy(&data, &a).unwrap(), a.residual);
}
