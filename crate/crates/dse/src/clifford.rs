//! Single-qubit Clifford decompositions over the x/y rotation set
//! {I, X, Y, X90, Y90, XM90, YM90}. The 24 group elements take 45
//! primitive gates in total, 1.875 on average, which is the figure the
//! randomized-benchmarking generator relies on.

/// One decomposition per Clifford, in application order.
pub const CLIFFORD_DECOMPOSITIONS: [&[&str]; 24] = [
    // Paulis (with Z as two axis flips).
    &["I"],
    &["X"],
    &["Y"],
    &["Y", "X"],
    // 2pi/3 rotations about the cube diagonals.
    &["X90", "Y90"],
    &["X90", "YM90"],
    &["XM90", "Y90"],
    &["XM90", "YM90"],
    &["Y90", "X90"],
    &["Y90", "XM90"],
    &["YM90", "X90"],
    &["YM90", "XM90"],
    // pi/2 rotations.
    &["X90"],
    &["XM90"],
    &["Y90"],
    &["YM90"],
    &["XM90", "Y90", "X90"],
    &["XM90", "YM90", "X90"],
    // Hadamard-like axis swaps.
    &["X", "Y90"],
    &["X", "YM90"],
    &["Y", "X90"],
    &["Y", "XM90"],
    &["X90", "Y90", "X90"],
    &["XM90", "Y90", "XM90"],
];

/// Mean primitive-gate count over the uniform Clifford distribution.
pub fn mean_primitives() -> f64 {
    let total: usize = CLIFFORD_DECOMPOSITIONS.iter().map(|d| d.len()).sum();
    total as f64 / CLIFFORD_DECOMPOSITIONS.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_table_averages_1_875_primitives() {
        let total: usize = CLIFFORD_DECOMPOSITIONS.iter().map(|d| d.len()).sum();
        assert_eq!(CLIFFORD_DECOMPOSITIONS.len(), 24);
        assert_eq!(total, 45);
        assert!((mean_primitives() - 1.875).abs() < 1e-12);
    }

    #[test]
    fn every_primitive_is_in_the_rotation_set() {
        let allowed = ["I", "X", "Y", "X90", "Y90", "XM90", "YM90"];
        for row in CLIFFORD_DECOMPOSITIONS {
            for gate in row {
                assert!(allowed.contains(gate), "unexpected primitive {gate}");
            }
        }
    }
}
