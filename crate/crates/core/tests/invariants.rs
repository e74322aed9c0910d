use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::sample::select;

use groupring::linalg::max_abs_diff;
use groupring::ring::{involution, is_rg_matrix, ring_multiply, sigma, GroupRingElement};
use groupring::{build_group, CMatrix, FiniteGroup};

const GROUPS: &[&str] = &["C1", "C5", "C8", "D6", "D8", "D10", "Q8", "C2xC4", "C3xC3", "D6xC2", "Q8xC3", "D24"];

fn group(spec: &str) -> Arc<FiniteGroup> {
    Arc::new(build_group(&spec.parse().unwrap()).unwrap())
}

fn element(g: &Arc<FiniteGroup>, raw: &[(f64, f64)]) -> GroupRingElement {
    let coeffs = (0..g.order()).map(|i| Complex64::new(raw[i].0, raw[i].1)).collect();
    GroupRingElement::new(g.clone(), coeffs).unwrap()
}

fn coefficients() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 24)
}

/// A permutation of `0..n` fixing 0, from a seed list of sort keys.
fn permutation(n: usize, keys: &[u32]) -> Vec<usize> {
    let mut rest: Vec<usize> = (1..n).collect();
    rest.sort_by_key(|&i| keys[i]);
    std::iter::once(0).chain(rest).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_is_multiplicative(spec in select(GROUPS), a in coefficients(), b in coefficients()) {
        let g = group(spec);
        let (w, v) = (element(&g, &a), element(&g, &b));
        let lhs = sigma(&ring_multiply(&w, &v).unwrap()).into_inner();
        let rhs = sigma(&w).into_inner() * sigma(&v).into_inner();
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-9 * g.order() as f64);
    }

    #[test]
    fn sigma_is_linear_and_star_preserving(spec in select(GROUPS), a in coefficients(), b in coefficients()) {
        let g = group(spec);
        let (w, v) = (element(&g, &a), element(&g, &b));
        let sum = sigma(&(&w + &v)).into_inner();
        prop_assert!(max_abs_diff(&sum, &(sigma(&w).into_inner() + sigma(&v).into_inner())) < 1e-12);
        let adj = sigma(&involution(&w)).into_inner();
        prop_assert_eq!(adj, sigma(&w).matrix().adjoint());
    }

    #[test]
    fn pattern_detection_roundtrip(spec in select(GROUPS), a in coefficients()) {
        let g = group(spec);
        let w = element(&g, &a);
        let recovered = is_rg_matrix(&g, sigma(&w).matrix(), None).unwrap();
        let recovered = recovered.expect("pattern recognized");
        prop_assert_eq!(recovered.coeffs(), w.coeffs());
    }

    #[test]
    fn perturbed_matrix_is_not_group_ring(spec in select(&GROUPS[1..]), a in coefficients(), pos in 0usize..1000) {
        let g = group(spec);
        let n = g.order();
        let mut m = sigma(&element(&g, &a)).into_inner();
        let (i, j) = (pos % n, (pos / n) % n);
        m[(i, j)] += Complex64::new(0.5, 0.0);
        prop_assert!(is_rg_matrix(&g, &m, None).unwrap().is_none());
    }

    /// Changing the listing conjugates every group ring matrix by the
    /// same permutation matrix.
    #[test]
    fn relisting_conjugates_by_a_permutation(
        spec in select(GROUPS),
        a in coefficients(),
        keys in proptest::collection::vec(any::<u32>(), 24),
    ) {
        let g = group(spec);
        let n = g.order();
        let perm = permutation(n, &keys);
        let h = Arc::new(g.relabel(&perm).unwrap());
        let w = element(&g, &a);
        let w_new = GroupRingElement::new(h, perm.iter().map(|&old| w.coeff(old)).collect()).unwrap();
        let q = CMatrix::from_fn(n, n, |old, new| {
            if perm[new] == old { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        let conjugated = q.transpose() * sigma(&w).matrix() * &q;
        prop_assert_eq!(sigma(&w_new).into_inner(), conjugated);
    }
}
