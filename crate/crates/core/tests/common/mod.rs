#![allow(dead_code)]

use cyclenf_core::cocycle::DomainGeometry;
use cyclenf_core::series::{ChartMap, Complex, LaurentPolynomial, LaurentSeries2, TruncatedSeries1, TruncatedSeries2};
use cyclenf_core::{compose_chart, Annulus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const ZERO: Complex = Complex::new(0.0, 0.0);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c(rng: &mut ChaCha8Rng, size: f64) -> Complex {
    Complex::new(rng.gen_range(-size..=size), rng.gen_range(-size..=size))
}

/// Random `1 + O(S, xi0)` with coefficients bounded by `size`.
pub fn random_unit_series(rng: &mut ChaCha8Rng, order: usize, size: f64) -> TruncatedSeries2 {
    let mut g = TruncatedSeries2::one(order);
    for a in 0..=order {
        for b in 0..=order {
            if a + b > 0 {
                g.set(a, b, rand_c(rng, size));
            }
        }
    }
    g
}

/// Modes scaled by the annulus so every coefficient contributes `O(size)` to the sup.
pub fn random_laurent(rng: &mut ChaCha8Rng, l: usize, annulus: Annulus, size: f64) -> LaurentPolynomial {
    let modes: Vec<(i64, Complex)> = (-(l as i64)..=l as i64)
        .map(|k| (k, rand_c(rng, size) / annulus.monomial_sup(k)))
        .collect();
    LaurentPolynomial::from_modes(l, annulus, modes).unwrap()
}

/// Unknowns of one node chart: `p_nu, q_nu` (modes `1..=L`), `r_nu` for each order.
#[derive(Clone, Debug)]
pub struct EdgeUnknowns {
    pub p: Vec<TruncatedSeries1>,
    pub q: Vec<TruncatedSeries1>,
    pub r: Vec<Complex>,
}

pub fn edge_len(order: usize, l: usize) -> usize {
    order * (2 * l + 1)
}

pub fn comp_len(order: usize, l: usize) -> usize {
    order * (2 * l + 1)
}

pub fn edge_from_vec(v: &[Complex], order: usize, l: usize) -> EdgeUnknowns {
    let mut e = EdgeUnknowns {
        p: vec![TruncatedSeries1::zero(l); order],
        q: vec![TruncatedSeries1::zero(l); order],
        r: vec![ZERO; order],
    };
    let mut it = v.iter();
    for nu in 0..order {
        for k in 1..=l {
            e.p[nu].set(k, *it.next().unwrap());
            e.q[nu].set(k, *it.next().unwrap());
        }
        e.r[nu] = *it.next().unwrap();
    }
    e
}

pub fn comp_from_vec(v: &[Complex], order: usize, l: usize, annulus: Annulus) -> Vec<LaurentPolynomial> {
    let mut it = v.iter();
    (0..order)
        .map(|_| {
            let modes: Vec<(i64, Complex)> = (-(l as i64)..=l as i64).map(|k| (k, *it.next().unwrap())).collect();
            LaurentPolynomial::from_modes(l, annulus, modes).unwrap()
        })
        .collect()
}

/// `sum_nu (p_nu(x) + q_nu(y) + r_nu) (x y)^nu` in a box large enough to keep every term.
pub fn edge_series(e: &EdgeUnknowns, order: usize, l: usize) -> TruncatedSeries2 {
    let big = order + l;
    let mut s = TruncatedSeries2::zero(big);
    for nu in 1..=order {
        s.add_to(nu, nu, e.r[nu - 1]);
        for k in 1..=l {
            s.add_to(nu + k, nu, e.p[nu - 1].coeff(k));
            s.add_to(nu, nu + k, e.q[nu - 1].coeff(k));
        }
    }
    s
}

/// Slices `1..=order` of a chart image, flattened mode by mode.
pub fn flatten(f: &LaurentSeries2, order: usize, l: usize) -> Vec<Complex> {
    let mut out = Vec::new();
    for m in 1..=order {
        for k in -(l as i64)..=l as i64 {
            out.push(f.coeff(m, k));
        }
    }
    out
}

/// Forward map of one edge side: chart image of `A0` minus `A1` of the adjacent component.
pub fn side(
    a0: &TruncatedSeries2,
    a1: &[LaurentPolynomial],
    map: ChartMap,
    order: usize,
    l: usize,
    annulus: Annulus,
) -> Vec<Complex> {
    let img = compose_chart(a0, map, l, annulus).unwrap();
    let mut out = flatten(&img, order, l);
    let mut i = 0;
    for a in a1 {
        for k in -(l as i64)..=l as i64 {
            out[i] -= a.coeff(k);
            i += 1;
        }
    }
    out
}

pub fn geometry() -> DomainGeometry {
    DomainGeometry::default()
}
