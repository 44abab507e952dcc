//! Fixtures shared by the benchmarks.

use fbas_reward::generators::{gen_organizational, gen_symmetric, hub_example, with_leaves};
use fbas_reward::Fbas;

/// Named systems of increasing size from both generated families.
pub fn systems() -> Vec<(String, Fbas)> {
    let mut out = vec![("hub+3".to_string(), with_leaves(&hub_example(), 3))];
    for n in [8, 12, 16] {
        out.push((format!("symmetric-{n}"), gen_symmetric(n)));
    }
    for orgs in [3, 5] {
        out.push((
            format!("organizational-{}", 3 * orgs),
            gen_organizational(orgs),
        ));
    }
    out
}
