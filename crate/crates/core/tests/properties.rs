use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;

use canonlab::curve::{self, NodalCurve, Subcurve};
use canonlab::linalg::Matrix;
use canonlab::multiplication::power_normality;
use canonlab::scalar::{int, ratio};
use canonlab::verifier::corpus::{binary_curve, cubic_graphs, graph_curve, random_stable_curve};
use canonlab::{sections_basis, BundleSpec, Execution, Param, Scalar, TwistDivisor, TwistPoint};

fn small_curve() -> impl Strategy<Value = Arc<NodalCurve>> {
    prop_oneof![
        (2i64..5, any::<u64>()).prop_map(|(g, s)| binary_curve(g, s).unwrap()),
        (0usize..3).prop_map(|i| {
            let mut all = cubic_graphs(4);
            all.extend(cubic_graphs(6));
            graph_curve(all[i].len() * 2 / 3, &all[i]).unwrap()
        }),
        (5usize..7, any::<u64>()).prop_map(|(n, s)| random_stable_curve(3, n, s).unwrap()),
    ]
    .prop_map(Arc::new)
}

fn h0(curve: &Arc<NodalCurve>, k: i64) -> usize {
    sections_basis(&BundleSpec::canonical_power(curve, k)).unwrap().h0()
}

fn mobius() -> impl Strategy<Value = [Scalar; 4]> {
    [-3i64..4, -3i64..4, -3i64..4, -3i64..4]
        .prop_filter("invertible", |[a, b, c, d]| a * d - b * c != 0)
        .prop_map(|m| m.map(int))
}

/// A twist on the smooth locus of `z`, drawn from `(component slot, t, mult)` triples.
fn twist_on(z: &Subcurve, raw: &[(usize, i64, i64)]) -> TwistDivisor {
    let curve = z.curve();
    let mut pts = Vec::new();
    for &(slot, t, mult) in raw {
        let c = z.members()[slot % z.members().len()];
        let p = Param::Finite(ratio(t, 7));
        if mult != 0 && !curve.is_branch_point(c, &p) && !pts.iter().any(|q: &TwistPoint| q.component == c && q.param == p) {
            pts.push(TwistPoint { component: c, param: p, mult });
        }
    }
    TwistDivisor::new(pts)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn dimensions_ignore_reparameterization(x in small_curve(), m in mobius(), c in 0usize..8) {
        let c = c % x.num_components();
        let y = Arc::new(x.reparameterize(c, &m));
        for k in 1..3 {
            prop_assert_eq!(h0(&x, k), h0(&y, k));
        }
        let w = |z: &Arc<NodalCurve>| power_normality(&BundleSpec::canonical_power(z, 1), 2, Execution::Sequential).unwrap();
        prop_assert_eq!(w(&x).stages[1].corank, w(&y).stages[1].corank);
    }

    #[test]
    fn dimensions_ignore_branch_order(x in small_curve(), i in 0usize..16) {
        let i = i % x.nodes().len();
        let y = Arc::new(x.swap_branches(i));
        for k in 0..3 {
            prop_assert_eq!(h0(&x, k), h0(&y, k));
        }
    }

    #[test]
    fn dimensions_ignore_labels(x in small_curve(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..x.num_components()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let y = Arc::new(x.permute_components(&perm));
        prop_assert_eq!(h0(&x, 1), h0(&y, 1));
        prop_assert_eq!(h0(&x, 2), h0(&y, 2));
        let cx = curve::connectivity(&x, 16, Execution::Sequential).unwrap();
        let cy = curve::connectivity(&y, 16, Execution::Sequential).unwrap();
        prop_assert_eq!(cx.m_max, cy.m_max);
        prop_assert_eq!(x.arithmetic_genus(), y.arithmetic_genus());
    }

    #[test]
    fn riemann_roch_with_serre_duality(
        x in small_curve(),
        k in -1i64..3,
        raw in prop::collection::vec((0usize..8, -20i64..20, -2i64..4), 0..4),
        side in any::<bool>(),
    ) {
        let z = if side && x.num_components() > 1 {
            Subcurve::new(x.clone(), [0]).unwrap()
        } else {
            Subcurve::whole(x.clone())
        };
        let l = BundleSpec::new(z.clone(), k, twist_on(&z, &raw)).unwrap();
        let h0 = sections_basis(&l).unwrap().h0() as i64;
        let h1 = sections_basis(&l.serre_dual()).unwrap().h0() as i64;
        prop_assert_eq!(h0 - h1, l.degree() + 1 - z.arithmetic_genus());
    }

    #[test]
    fn canonical_dimension_is_genus(x in small_curve()) {
        let g = x.arithmetic_genus();
        prop_assert_eq!(h0(&x, 1) as i64, g);
        prop_assert_eq!(h0(&x, 2) as i64, 3 * (g - 1));
    }
}

/// Textbook Gauss-Jordan over `Q`.
fn oracle_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut a = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Scalar::one() / &a[r][c];
        let pivot: Vec<Scalar> = a[r].iter().map(|x| x * &inv).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        a[r] = pivot;
        r += 1;
    }
    r
}

fn matrix() -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec((-4i64..5, 1i64..4), n), m)
            .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(|(a, b)| ratio(a, b)).collect()).collect())
    })
}

proptest! {
    #[test]
    fn fraction_free_rank_matches_oracle(rows in matrix(), dup in any::<bool>()) {
        let mut rows = rows;
        if dup && rows.len() > 1 {
            // force a dependency
            let sum: Vec<Scalar> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a + b).collect();
            rows.push(sum);
        }
        let n = rows[0].len();
        let m = Matrix::from_rows(rows.clone(), n);
        let r = oracle_rank(&rows);
        prop_assert_eq!(m.rank(), r);
        prop_assert_eq!(m.echelon(false).pivots.len(), r);
        let ns = m.nullspace();
        prop_assert_eq!(ns.basis.len(), n - r);
        for v in &ns.basis {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn modular_rank_never_exceeds_rational_rank(rows in matrix()) {
        let n = rows[0].len();
        let m = Matrix::from_rows(rows, n);
        if let Some(rp) = m.rank_mod(1_000_003) {
            prop_assert!(rp <= m.rank());
        }
    }
}
