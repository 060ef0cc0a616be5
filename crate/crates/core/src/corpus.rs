//! Seeded random fat point schemes for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::FieldSpec;
use crate::scheme::FatPointScheme;

/// Shape of the random schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    pub dims: &'static [usize],
    pub max_points: usize,
    pub max_mult: u32,
    /// Coordinates are drawn from `-coord_bound..=coord_bound`.
    pub coord_bound: i64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            dims: &[2, 3],
            max_points: 5,
            max_mult: 3,
            coord_bound: 9,
        }
    }
}

/// One random scheme. About one point in six lies on `x_0 = 0`.
pub fn random_scheme(rng: &mut impl Rng, field: FieldSpec, params: &CorpusParams) -> FatPointScheme {
    let n = params.dims[rng.gen_range(0..params.dims.len())];
    let s = rng.gen_range(1..=params.max_points);
    loop {
        let points = (0..s)
            .map(|_| {
                let mut p = vec![field.from_i64(if rng.gen_range(0..6) == 0 { 0 } else { 1 })];
                p.extend((0..n).map(|_| field.from_i64(rng.gen_range(-params.coord_bound..=params.coord_bound))));
                p
            })
            .collect();
        let mults = (0..s).map(|_| rng.gen_range(1..=params.max_mult)).collect();
        // Zero or repeated points are redrawn.
        if let Ok(z) = FatPointScheme::new(n, field, points, mults) {
            return z;
        }
    }
}

/// `count` schemes from `seed`; the same seed always yields the same list.
pub fn random_schemes(seed: u64, count: usize, field: FieldSpec, params: &CorpusParams) -> Vec<FatPointScheme> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_scheme(&mut rng, field, params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let params = CorpusParams::default();
        let a = random_schemes(7, 20, FieldSpec::Rational, &params);
        let b = random_schemes(7, 20, FieldSpec::Rational, &params);
        assert_eq!(a, b);
        for z in &a {
            assert!([2, 3].contains(&z.n()));
            assert!((1..=5).contains(&z.len()));
            assert!(z.mults().iter().all(|&m| (1..=3).contains(&m)));
        }
        assert_ne!(a, random_schemes(8, 20, FieldSpec::Rational, &params));
    }
}
