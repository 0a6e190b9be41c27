//! Standard small schemes used across unit tests.

use crate::schemes::CoherentConfiguration;

/// Complete (one-class) scheme on `n ≥ 2` points: identity plus one class.
pub fn complete(n: usize) -> CoherentConfiguration {
    let mut colors = vec![1u32; n * n];
    for x in 0..n {
        colors[x * n + x] = 0;
    }
    CoherentConfiguration::validate(n, colors).expect("complete scheme is coherent")
}

/// Thin scheme of the cyclic group: color of `(x,y)` is `(y - x) mod n`.
pub fn thin_cyclic(n: usize) -> CoherentConfiguration {
    let mut colors = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            colors[x * n + y] = ((y + n - x) % n) as u32;
        }
    }
    CoherentConfiguration::validate(n, colors).expect("cyclic thin scheme is coherent")
}

/// Distance scheme of the n-cycle: color of `(x,y)` is the graph distance.
/// Quasi-thin for every n: all classes have valency 2 except the identity
/// and, for even n, the antipodal class.
pub fn cycle_distance(n: usize) -> CoherentConfiguration {
    let mut colors = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let d = (y + n - x) % n;
            colors[x * n + y] = d.min(n - d) as u32;
        }
    }
    CoherentConfiguration::validate(n, colors).expect("cycle distance scheme is coherent")
}

/// Distance scheme of the 5-cycle: colors are graph distances 0, 1, 2.
pub fn pentagon() -> CoherentConfiguration {
    cycle_distance(5)
}

/// Discrete configuration on two points: every pair its own color.
pub fn discrete_pair() -> CoherentConfiguration {
    CoherentConfiguration::from_rows(&[&[0, 1], &[2, 3]]).expect("coherent")
}
