//! Seeded generators shared by the acceptance tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semicayley::{AbelianGroup, GroupElement, GroupSubset, SemiCayleySpec};

/// Every factor list (non-decreasing) whose product is at most 12.
pub const GROUPS: &[&[u64]] = &[
    &[1],
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[8],
    &[9],
    &[10],
    &[11],
    &[12],
    &[2, 2],
    &[2, 3],
    &[2, 4],
    &[2, 5],
    &[2, 6],
    &[3, 3],
    &[3, 4],
    &[2, 2, 2],
    &[2, 2, 3],
];

/// `PST_SEED` from the environment, or a fixed default.
pub fn rng() -> ChaCha8Rng {
    let seed = std::env::var("PST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_240_611u64);
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_group(rng: &mut ChaCha8Rng) -> AbelianGroup {
    let factors = GROUPS.choose(rng).unwrap();
    AbelianGroup::new(factors.to_vec()).unwrap()
}

/// Inverse-closed subset avoiding the identity.
pub fn symmetric_subset(rng: &mut ChaCha8Rng, g: &AbelianGroup, density: f64) -> GroupSubset {
    let mut chosen: Vec<GroupElement> = Vec::new();
    for x in g.elements() {
        if x == g.identity() || chosen.contains(&x) {
            continue;
        }
        if rng.gen_bool(density) {
            let inv = g.inverse(&x).unwrap();
            chosen.push(x);
            if !chosen.contains(&inv) {
                chosen.push(inv);
            }
        }
    }
    g.subset(chosen).unwrap()
}

pub fn any_subset(rng: &mut ChaCha8Rng, g: &AbelianGroup, density: f64) -> GroupSubset {
    let chosen: Vec<GroupElement> = g.elements().filter(|_| rng.gen_bool(density)).collect();
    g.subset(chosen).unwrap()
}

/// Random spec over a group of order at most 12; `balanced` forces `L = R`.
pub fn random_spec(rng: &mut ChaCha8Rng, balanced: bool) -> SemiCayleySpec {
    let g = random_group(rng);
    let density = rng.gen_range(0.2..0.8);
    let r = symmetric_subset(rng, &g, density);
    let l = if balanced { r.clone() } else { symmetric_subset(rng, &g, density) };
    let spoke_density = rng.gen_range(0.1..0.7);
    let s = any_subset(rng, &g, spoke_density);
    SemiCayleySpec::new(g, r, l, s).unwrap()
}
