//! Seeded fixtures shared by the benchmarks.

use cyclenf_core::cocycle::{CocycleRhs, DomainGeometry};
use cyclenf_core::diophantine::{DiophantineAngle, UnitCircleConstant};
use cyclenf_core::series::{Complex, LaurentPolynomial, TruncatedSeries2};
use cyclenf_core::NodeGluingData;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_c(rng: &mut ChaCha8Rng, size: f64) -> Complex {
    Complex::new(rng.gen_range(-size..=size), rng.gen_range(-size..=size))
}

pub fn golden() -> UnitCircleConstant {
    UnitCircleConstant::from_angle(DiophantineAngle::golden())
}

/// Node data with `G = 1 + O(S, xi0)`, coefficients at most `size`.
pub fn node_data(order: usize, size: f64, seed: u64) -> NodeGluingData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = TruncatedSeries2::one(order);
    for a in 0..=order {
        for b in 0..=order {
            if a + b > 0 {
                g.set(a, b, rand_c(&mut rng, size));
            }
        }
    }
    NodeGluingData::new(golden(), g).expect("unit data")
}

/// Cocycle right-hand side with unit-sup Laurent slices on both overlaps.
pub fn cocycle_rhs(order: usize, geometry: &DomainGeometry, seed: u64) -> CocycleRhs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slices = |annulus| -> Vec<LaurentPolynomial> {
        (0..order)
            .map(|_| {
                let modes: Vec<(i64, Complex)> = (-(order as i64)..=order as i64)
                    .map(|k| (k, rand_c(&mut rng, 1.0)))
                    .collect();
                let p = LaurentPolynomial::from_modes(order, annulus, modes).expect("modes");
                let s = p.sup_bound();
                p.scale(Complex::new(1.0 / s, 0.0))
            })
            .collect()
    };
    let plus = slices(geometry.plus_annulus());
    let minus = slices(geometry.minus_annulus());
    CocycleRhs::new(plus, minus).expect("matching orders")
}
