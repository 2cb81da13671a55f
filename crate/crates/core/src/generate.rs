//! Seeded random contexts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::AttributeSet;
use crate::context::FormalContext;

/// A context with `objects × attributes` cells, each incident with
/// probability `density`. The same seed always yields the same context.
pub fn random_context(objects: usize, attributes: usize, density: f64, seed: u64) -> FormalContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = density.clamp(0.0, 1.0);
    let rows = (0..objects)
        .map(|_| {
            AttributeSet::from_indices(attributes, (0..attributes).filter(|_| rng.gen_bool(density)))
        })
        .collect();
    FormalContext::new(
        (0..objects).map(|i| format!("g{i}")).collect(),
        (0..attributes).map(|j| format!("m{j}")).collect(),
        rows,
    )
    .expect("generated names are unique")
}
