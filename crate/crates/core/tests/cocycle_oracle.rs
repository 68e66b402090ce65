mod common;

use common::*;
use cyclenf_core::cocycle::{solve_cousin, solve_cousin_cycle, CocycleRhs, DomainGeometry};
use cyclenf_core::diophantine::DiophantineAngle;
use cyclenf_core::series::{ChartMap, Complex, LaurentPolynomial};
use nalgebra::{DMatrix, DVector};

/// Forward map of a cycle with `n` edges; `n = 1` is the node.
/// Unknown layout: every edge block, then every component block.
fn forward(x: &[Complex], t: &[(Complex, Complex)], order: usize, l: usize, geo: &DomainGeometry) -> Vec<Complex> {
    let n = t.len();
    let (el, cl) = (edge_len(order, l), comp_len(order, l));
    let hull = geo.curve_annulus();
    let comps: Vec<Vec<LaurentPolynomial>> = (0..n)
        .map(|c| comp_from_vec(&x[n * el + c * cl..n * el + (c + 1) * cl], order, l, hull))
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        let e = edge_from_vec(&x[i * el..(i + 1) * el], order, l);
        let a0 = edge_series(&e, order, l);
        let next = (i + 1) % n;
        out.extend(side(&a0, &comps[next], ChartMap::NodePlus { t_plus: t[i].0 }, order, l, geo.plus_annulus()));
        out.extend(side(&a0, &comps[i], ChartMap::NodeMinus { t_minus: t[i].1 }, order, l, geo.minus_annulus()));
    }
    out
}

fn dense_solve(rhs: &[Complex], t: &[(Complex, Complex)], order: usize, l: usize, geo: &DomainGeometry) -> Vec<Complex> {
    let n = t.len();
    let size = n * (edge_len(order, l) + comp_len(order, l));
    let mut mat = DMatrix::<Complex>::zeros(size, size);
    let mut e = vec![ZERO; size];
    for j in 0..size {
        e[j] = ONE;
        let col = forward(&e, t, order, l, geo);
        assert_eq!(col.len(), size);
        for (i, v) in col.into_iter().enumerate() {
            mat[(i, j)] = v;
        }
        e[j] = ZERO;
    }
    let sol = mat.lu().solve(&DVector::from_vec(rhs.to_vec())).expect("nonsingular");
    sol.iter().copied().collect()
}

/// Splits a flattened right-hand side into per-edge `CocycleRhs`.
fn to_rhs(b: &[Complex], n: usize, order: usize, l: usize, geo: &DomainGeometry) -> Vec<CocycleRhs> {
    let block = order * (2 * l + 1);
    (0..n)
        .map(|i| {
            let plus = comp_from_vec(&b[2 * i * block..(2 * i + 1) * block], order, l, geo.plus_annulus());
            let minus = comp_from_vec(&b[(2 * i + 1) * block..(2 * i + 2) * block], order, l, geo.minus_annulus());
            CocycleRhs::new(plus, minus).unwrap()
        })
        .collect()
}

fn node_vec(sol: &cyclenf_core::cocycle::CocycleSolution, l: usize) -> Vec<Complex> {
    let mut edge = Vec::new();
    let mut comp = Vec::new();
    for o in &sol.orders {
        for k in 1..=l {
            edge.push(o.p.coeff(k));
            edge.push(o.q.coeff(k));
        }
        edge.push(o.r);
        for k in -(l as i64)..=l as i64 {
            comp.push(o.a1.coeff(k));
        }
    }
    edge.extend(comp);
    edge
}

fn cycle_vec(sol: &cyclenf_core::cocycle::CycleCocycleSolution, n: usize, l: usize) -> Vec<Complex> {
    let mut out = Vec::new();
    for i in 0..n {
        for o in &sol.orders {
            let e = &o.edges[i];
            for k in 1..=l {
                out.push(if k <= e.p.order() { e.p.coeff(k) } else { ZERO });
                out.push(if k <= e.q.order() { e.q.coeff(k) } else { ZERO });
            }
            out.push(e.r);
        }
    }
    for c in 0..n {
        for o in &sol.orders {
            for k in -(l as i64)..=l as i64 {
                out.push(o.components[c].coeff(k));
            }
        }
    }
    out
}

fn max_diff(a: &[Complex], b: &[Complex]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn golden_pair() -> (Complex, Complex) {
    (ONE / DiophantineAngle::golden().t(), ONE)
}

fn cycle_t(n: usize) -> Vec<(Complex, Complex)> {
    let mut t = vec![(ONE, ONE); n];
    t[n - 1] = golden_pair();
    t
}

#[test]
fn node_matches_dense_solve() {
    let geo = geometry();
    let t = [golden_pair()];
    for inst in 0..20u64 {
        let order = 1 + (inst as usize % 4);
        let l = order;
        let mut r = rng(100 + inst);
        let b: Vec<Complex> = (0..2 * order * (2 * l + 1)).map(|_| rand_c(&mut r, 1.0)).collect();
        let rhs = to_rhs(&b, 1, order, l, &geo);
        let sol = solve_cousin(&rhs[0], &geo, t[0].0, t[0].1).unwrap();
        let dense = dense_solve(&b, &t, order, l, &geo);
        let d = max_diff(&node_vec(&sol, l), &dense);
        assert!(d <= 1e-10, "instance {inst}: {d}");
    }
}

#[test]
fn cycle_matches_dense_solve() {
    let geo = geometry();
    for n in [2usize, 3] {
        let t = cycle_t(n);
        for inst in 0..20u64 {
            let order = 1 + (inst as usize % 4);
            let l = order;
            let mut r = rng(200 + inst + 50 * n as u64);
            let b: Vec<Complex> = (0..2 * n * order * (2 * l + 1)).map(|_| rand_c(&mut r, 1.0)).collect();
            let rhs = to_rhs(&b, n, order, l, &geo);
            let sol = solve_cousin_cycle(&rhs, &t, &geo).unwrap();
            let dense = dense_solve(&b, &t, order, l, &geo);
            let d = max_diff(&cycle_vec(&sol, n, l), &dense);
            assert!(d <= 1e-10, "n={n} instance {inst}: {d}");
        }
    }
}

#[test]
fn manufactured_solutions_are_recovered() {
    let geo = geometry();
    let t = [golden_pair()];
    for order in 1..=10usize {
        let l = order;
        let mut r = rng(300 + order as u64);
        let x: Vec<Complex> = (0..edge_len(order, l) + comp_len(order, l)).map(|_| rand_c(&mut r, 1.0)).collect();
        let b = forward(&x, &t, order, l, &geo);
        let rhs = to_rhs(&b, 1, order, l, &geo);
        let sol = solve_cousin(&rhs[0], &geo, t[0].0, t[0].1).unwrap();
        let d = max_diff(&node_vec(&sol, l), &x);
        assert!(d <= 1e-11, "N={order}: {d}");
    }
}

#[test]
fn solver_is_linear() {
    let geo = geometry();
    let t = [golden_pair()];
    let (order, l) = (4, 4);
    let mut r = rng(400);
    let b1: Vec<Complex> = (0..2 * order * (2 * l + 1)).map(|_| rand_c(&mut r, 1.0)).collect();
    let b2: Vec<Complex> = (0..b1.len()).map(|_| rand_c(&mut r, 1.0)).collect();
    let c = Complex::new(0.3, -1.1);
    let mix: Vec<Complex> = b1.iter().zip(&b2).map(|(x, y)| x + c * y).collect();
    let solve = |b: &[Complex]| {
        let rhs = to_rhs(b, 1, order, l, &geo);
        node_vec(&solve_cousin(&rhs[0], &geo, t[0].0, t[0].1).unwrap(), l)
    };
    let (s1, s2, sm) = (solve(&b1), solve(&b2), solve(&mix));
    let lin: Vec<Complex> = s1.iter().zip(&s2).map(|(x, y)| x + c * y).collect();
    assert!(max_diff(&sm, &lin) <= 1e-12);
    assert_eq!(solve(&b1), s1);
}
