mod common;

use common::*;
use fitzrep::calculus::{
    chain_representative_value, infconv2_value, skew_shift_identity_check, sum_as_chain_check, sum_operator,
    DiagonalMap,
};
use fitzrep::lpkernel::{solve_lp, LinearProgram, LpStatus, Matrix};
use fitzrep::operators::{
    discretize_graph, is_monotone_finite, maximality_probe, monotone_related_inf, BoxProbe, FiniteGraph, LinearMap,
    OperatorRep, SkewOp,
};
use fitzrep::oracle::{dot_of, grid_extremum, p_of, pairwise_monotone_bruteforce, simplex_grid_convexhull_value, Mode};
use fitzrep::qualification::{
    difference_map_equivalence, domain_invariance_check, minkowski_diff, ncone_sum_check, qualification_sum,
    relint_contains_zero, relint_contains_zero_probe, ConvexSetRep,
};
use fitzrep::representatives::{
    conjugate_value, fitzpatrick_altform_value, fitzpatrick_value, ni_probe, penot_value, representability_probe,
    RepFunction,
};
use fitzrep::{dual_product, pairing_p, vector, PairedPoint, Vector, Verdict};
use proptest::prelude::*;
use rand::Rng;

fn paired(n: usize) -> impl Strategy<Value = PairedPoint> {
    (prop::collection::vec(-10.0..10.0f64, n), prop::collection::vec(-10.0..10.0f64, n))
        .prop_map(|(x, xs)| PairedPoint::from_slices(&x, &xs).unwrap())
}

fn two_points() -> impl Strategy<Value = (PairedPoint, PairedPoint)> {
    (1usize..=4).prop_flat_map(|n| (paired(n), paired(n)))
}

fn magnitude(z: &PairedPoint) -> f64 {
    z.x().iter().zip(z.xstar().iter()).map(|(a, b)| (a * b).abs()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn self_product_is_twice_pairing(z in (1usize..=4).prop_flat_map(paired)) {
        prop_assert_eq!(dual_product(&z, &z).unwrap(), 2.0 * pairing_p(&z));
    }

    #[test]
    fn pairing_is_quadratic(z in (1usize..=4).prop_flat_map(paired), t in -5.0..5.0f64) {
        let lhs = pairing_p(&z.scale(t));
        let rhs = t * t * pairing_p(&z);
        prop_assert!(rel_close(lhs, rhs, 1e-12, t * t * magnitude(&z)));
    }

    #[test]
    fn pairing_of_sum_and_difference((z1, z2) in two_points()) {
        let cross = dual_product(&z1, &z2).unwrap();
        let scale = magnitude(&z1) + magnitude(&z2) + cross.abs() + 400.0;
        let (p1, p2) = (pairing_p(&z1), pairing_p(&z2));
        prop_assert!(rel_close(pairing_p(&z1.add(&z2)), p1 + p2 + cross, 1e-12, scale));
        prop_assert!(rel_close(pairing_p(&z1.sub(&z2)), p1 + p2 - cross, 1e-12, scale));
        let par = pairing_p(&z1.add(&z2)) + pairing_p(&z1.sub(&z2));
        prop_assert!(rel_close(par, 2.0 * (p1 + p2), 1e-12, scale));
    }

    #[test]
    fn dual_product_is_symmetric((z1, z2) in two_points()) {
        prop_assert_eq!(dual_product(&z1, &z2).unwrap(), dual_product(&z2, &z1).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sum_value_is_minkowski_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let (a, b) = (random_polyhedral(&mut r, n), random_polyhedral(&mut r, n));
        let s = sum_operator(a.clone(), b.clone()).unwrap();
        let x = uniform_vec(&mut r, n, 0.9);
        let (va, vb, vs) = (a.evaluate(&x).unwrap(), b.evaluate(&x).unwrap(), s.evaluate(&x).unwrap());
        for _ in 0..16 {
            let d = uniform_vec(&mut r, n, 1.0);
            let want = va.support(&d) + vb.support(&d);
            let got = vs.support(&d);
            prop_assert!(got == want || (got - want).abs() <= 1e-9 * (1.0 + want.abs()), "{got} vs {want}");
        }
    }

    #[test]
    fn discretized_points_lie_on_graph(seed in any::<u64>()) {
        let mut r = rng(seed);
        let op = random_polyhedral(&mut r, 1);
        let g = discretize_graph(&op, &BoxProbe::cube(2, 1.5, 0.25, 1e-9).unwrap()).unwrap();
        for p in g.points() {
            prop_assert!(op.evaluate(p.x()).unwrap().contains(p.xstar(), 1e-9).unwrap(), "{p}");
        }
        prop_assert!(is_monotone_finite(&g, 1e-9).passed());
    }

    #[test]
    fn related_inf_vanishes_on_graph(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=3);
        let g = random_monotone_graph(&mut r, n, 6);
        let op = OperatorRep::finite(g.clone());
        let probe = BoxProbe::default_for(n);
        for a in g.points() {
            let v = monotone_related_inf(&op, a, &probe).unwrap();
            prop_assert!(v.exact);
            prop_assert_eq!(v.value, 0.0);
        }
    }

    #[test]
    fn penot_function_properties(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=3);
        let m = r.random_range(1..=8);
        let g = random_monotone_graph(&mut r, n, m);
        let op = OperatorRep::finite(g.clone());
        let probe = BoxProbe::default_for(n);
        for a in g.points() {
            let p = pairing_p(a);
            prop_assert!((penot_value(&g, a).unwrap().to_f64() - p).abs() <= 1e-9);
            prop_assert!((fitzpatrick_value(&op, a, &probe).unwrap().to_f64() - p).abs() <= 1e-9);
            // z with z.x in the domain
            let z = PairedPoint::new(a.x().clone(), uniform_vec(&mut r, n, 2.0)).unwrap();
            prop_assert!(fitzpatrick_value(&op, &z, &probe).unwrap().to_f64() >= pairing_p(&z) - 1e-9);
        }
        for _ in 0..10 {
            // convex combinations, so that phi is finite
            let w: Vec<f64> = (0..m).map(|_| r.random_range(0.0..1.0)).collect();
            let total: f64 = w.iter().sum();
            let mut zc = vec![0.0; 2 * n];
            for (a, wi) in g.points().iter().zip(&w) {
                for (c, v) in zc.iter_mut().zip(a.concat()) {
                    *c += wi / total * v;
                }
            }
            for z in [PairedPoint::from_concat(&zc).unwrap(), random_point(&mut r, n, 1.5)] {
                let phi = penot_value(&g, &z).unwrap().to_f64();
                let h = fitzpatrick_value(&op, &z, &probe).unwrap().to_f64();
                if phi.is_finite() {
                    prop_assert!(phi >= pairing_p(&z) - 1e-9, "phi {phi} below p");
                    prop_assert!(h <= phi + 1e-9, "h {h} above phi {phi}");
                }
                let alt = fitzpatrick_altform_value(&op, &z, &probe).unwrap().to_f64();
                prop_assert!((alt - h).abs() <= 1e-12 * (1.0 + h.abs()), "{alt} vs {h}");
            }
        }
    }

    #[test]
    fn penot_conjugate_is_fitzpatrick(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.random_range(1..=5);
        let g = random_monotone_graph(&mut r, 1, m);
        let op = OperatorRep::finite(g.clone());
        let probe = BoxProbe::cube(2, 1.0, 0.5, 1e-9).unwrap();
        let phi = RepFunction::penot(g).unwrap();
        for z in probe.points() {
            let zp = PairedPoint::from_concat(&z).unwrap();
            let lhs = conjugate_value(&phi, &zp, &probe).unwrap().to_f64();
            let rhs = fitzpatrick_value(&op, &zp, &probe).unwrap().to_f64();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()), "{lhs} vs {rhs} at {zp}");
        }
    }

    #[test]
    fn representable_graphs_are_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.random_range(1..=4);
        let g = random_graph(&mut r, 1, m);
        let probe = BoxProbe::cube(2, 1.0, 0.25, 1e-9).unwrap();
        let rep = representability_probe(&OperatorRep::finite(g.clone()), &probe).unwrap();
        if rep.passed() {
            prop_assert!(is_monotone_finite(&g, 1e-9).passed());
        }
    }

    #[test]
    fn monotonicity_oracle_agrees(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=3);
        let m = r.random_range(1..=6);
        let g = if r.random_bool(0.5) { random_graph(&mut r, n, m) } else { random_monotone_graph(&mut r, n, m) };
        prop_assert_eq!(pairwise_monotone_bruteforce(g.points()), is_monotone_finite(&g, 1e-12).passed());
        let s = sorted_graph(&mut r, 1 + m);
        prop_assert!(pairwise_monotone_bruteforce(s.points()));
    }

    #[test]
    fn fitzpatrick_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=3);
        let m = r.random_range(1..=8);
        let g = random_monotone_graph(&mut r, n, m);
        let op = OperatorRep::finite(g.clone());
        let rows: Vec<Vec<f64>> = g.points().iter().map(|a| a.concat()).collect();
        // one extra index keeps the box non-degenerate for a single point
        let last = rows.len() - 1;
        let index = BoxProbe::new(vec![0.0], vec![rows.len() as f64], 1.0, 1e-9).unwrap();
        let probe = BoxProbe::default_for(n);
        for _ in 0..20 {
            let z = random_point(&mut r, n, 2.0);
            let zc = z.concat();
            let row = |i: &[f64]| &rows[(i[0] as usize).min(last)];
            let oracle = grid_extremum(|i| dot_of(&zc, row(i)) - p_of(row(i)), &index, Mode::Sup);
            prop_assert_eq!(fitzpatrick_value(&op, &z, &probe).unwrap().to_f64(), oracle);
        }
    }

    #[test]
    fn penot_below_simplex_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.random_range(1..=4);
        let g = random_monotone_graph(&mut r, 1, m);
        let pts = g.points().to_vec();
        let values: Vec<f64> = pts.iter().map(pairing_p).collect();
        let steps = 8;
        // a barycenter on the weight grid is hit exactly
        let mut counts = vec![0usize; pts.len()];
        for _ in 0..steps {
            counts[r.random_range(0..pts.len())] += 1;
        }
        let mut zc = vec![0.0; 2];
        for (a, c) in pts.iter().zip(&counts) {
            for (z, v) in zc.iter_mut().zip(a.concat()) {
                *z += *c as f64 / steps as f64 * v;
            }
        }
        let z = PairedPoint::from_concat(&zc).unwrap();
        let lp = penot_value(&g, &z).unwrap().to_f64();
        let oracle = simplex_grid_convexhull_value(&pts, &values, &z, steps);
        let direct: f64 = counts.iter().zip(&values).map(|(c, v)| *c as f64 / steps as f64 * v).sum();
        prop_assert!(lp <= oracle + 1e-9, "{lp} > {oracle}");
        prop_assert!(oracle <= direct + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sum_agrees_with_chain_of_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let (a, b) = (random_polyhedral(&mut r, n), random_polyhedral(&mut r, n));
        let samples: Vec<Vector> = (0..20).map(|_| uniform_vec(&mut r, n, 1.0)).collect();
        let rep = sum_as_chain_check(&a, &b, &samples, seed).unwrap();
        prop_assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn chain_representative_dominates_pairing(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = r.random_range(1..=2);
        let m = random_monotone_graph(&mut r, 2, 6);
        let l = LinearMap::new(random_matrix(&mut r, 2, k, 1.0)).unwrap();
        for _ in 0..10 {
            let (x, xs) = (uniform_vec(&mut r, k, 1.0), uniform_vec(&mut r, k, 1.0));
            let v = chain_representative_value(&l, &m, &x, &xs).unwrap();
            prop_assert_ne!(v.status, LpStatus::Unbounded);
            let v = v.value.to_f64();
            prop_assert!(v >= x.dot(&xs) - 1e-9, "{v} < p");
        }
    }

    #[test]
    fn infconv_with_skew_is_exact_shift(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_monotone_matrix(&mut r, 2);
        let q = uniform_vec(&mut r, 2, 0.5);
        let t = r.random_range(-2.0..2.0);
        let b = SkewOp::new(SkewOp::rotation().matrix() * t).unwrap();
        let ha = RepFunction::fitz_affine(m, q).unwrap();
        let hb = RepFunction::fitz_affine(b.matrix().clone(), Vector::zeros(2)).unwrap();
        for _ in 0..8 {
            let (x, xs) = (uniform_vec(&mut r, 2, 1.0), uniform_vec(&mut r, 2, 1.0));
            let lhs = infconv2_value(&ha, &hb, &x, &xs).unwrap().to_f64();
            let rhs = ha.value(&PairedPoint::new(x.clone(), &xs - b.matrix() * &x).unwrap()).unwrap().to_f64();
            prop_assert!(lhs == rhs || (lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn skew_shift_holds_for_affine(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = OperatorRep::affine(random_monotone_matrix(&mut r, 2), uniform_vec(&mut r, 2, 0.5)).unwrap();
        let b = SkewOp::new(SkewOp::rotation().matrix() * r.random_range(-2.0..2.0)).unwrap();
        let rep = skew_shift_identity_check(&a, &b, &BoxProbe::cube(4, 1.0, 0.5, 1e-9).unwrap()).unwrap();
        prop_assert_eq!(rep.verdict, Verdict::Holds);
    }

    #[test]
    fn difference_map_forms_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (u, v) = (random_polygon(&mut r), random_polygon(&mut r));
        let rep = difference_map_equivalence(&DiagonalMap::new(2).unwrap(), &u, &v).unwrap();
        prop_assert_eq!(rep.verdict, Verdict::Holds);
    }

    #[test]
    fn relint_paths_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_polygon(&mut r);
        // shift so that a vertex, an edge midpoint or the centroid sits at 0
        let vs = s.polytope().vertices().to_vec();
        let anchor = match r.random_range(0..3) {
            0 => vs[0].clone(),
            1 => (&vs[0] + &vs[vs.len() - 1]) * 0.5,
            _ => vs.iter().fold(Vector::zeros(2), |acc, v| acc + v) / vs.len() as f64,
        };
        let s = minkowski_diff(&s, &ConvexSetRep::point(anchor)).unwrap();
        prop_assert_eq!(relint_contains_zero(&s).unwrap(), relint_contains_zero_probe(&s).unwrap());
    }

    #[test]
    fn maximal_operators_are_domain_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let op = random_polyhedral(&mut r, 1);
        let samples: Vec<Vector> = (0..8).map(|_| uniform_vec(&mut r, 1, 2.0)).collect();
        let rep = domain_invariance_check(&op, &samples, None, seed).unwrap();
        prop_assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn qualified_sums_have_no_witness(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lo = [r.random_range(-1.0..0.0), r.random_range(-1.0..0.0)];
        let hi = [lo[0] + r.random_range(0.3..1.5), lo[1] + r.random_range(0.3..1.5)];
        let a = OperatorRep::normal_cone_box(&[lo[0]], &[hi[0]]).unwrap();
        let b = OperatorRep::normal_cone_box(&[lo[1]], &[hi[1]]).unwrap();
        let probe = BoxProbe::cube(2, 2.0, 0.25, 1e-9).unwrap();
        if qualification_sum(&a, &b).unwrap().passed() {
            let s = sum_operator(a.clone(), b.clone()).unwrap();
            prop_assert!(maximality_probe(&s, &probe).unwrap().passed());
            let (ca, cb) = match (&a, &b) {
                (OperatorRep::NormalCone(ca), OperatorRep::NormalCone(cb)) => (ca, cb),
                _ => unreachable!(),
            };
            let x = vector(&[lo[0].max(lo[1])]);
            if ncone_sum_check(ca, cb, &[x]).unwrap().passed() {
                prop_assert!(ni_probe(&s, &probe).unwrap().passed());
            }
        }
    }

    #[test]
    fn lp_duality_certificate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..=5);
        let (me, mu) = (r.random_range(0..=2), r.random_range(1..=4));
        let mut lp = LinearProgram::new(n);
        let c: Vec<f64> = (0..n).map(|_| r.random_range(0.0..2.0)).collect();
        lp.set_objective(c.clone()).unwrap();
        // feasible by construction around a positive point
        let x0: Vec<f64> = (0..n).map(|_| r.random_range(0.1..1.0)).collect();
        let mut eqs = Vec::new();
        let mut ubs = Vec::new();
        for _ in 0..me {
            let a: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
            let b = a.iter().zip(&x0).map(|(s, t)| s * t).sum::<f64>();
            lp.add_eq(a.clone(), b).unwrap();
            eqs.push((a, b));
        }
        for _ in 0..mu {
            let a: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
            let b = a.iter().zip(&x0).map(|(s, t)| s * t).sum::<f64>() + r.random_range(0.0..0.5);
            lp.add_le(a.clone(), b).unwrap();
            ubs.push((a, b));
        }
        let sol = solve_lp(&lp);
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        let again = solve_lp(&lp);
        prop_assert_eq!(&sol.point, &again.point);
        prop_assert!(sol.duals_ub.iter().all(|u| *u <= 1e-9));
        let mut dual_value = 0.0;
        let mut reduced = c.clone();
        for ((a, b), y) in eqs.iter().zip(&sol.duals_eq).chain(ubs.iter().zip(&sol.duals_ub)) {
            dual_value += b * y;
            for (rj, aj) in reduced.iter_mut().zip(a) {
                *rj -= aj * y;
            }
        }
        prop_assert!(reduced.iter().all(|rj| *rj >= -1e-7), "{reduced:?}");
        prop_assert!((dual_value - sol.value).abs() <= 1e-7 * (1.0 + sol.value.abs()));
    }
}

#[test]
fn maximal_reps_separate_off_graph() {
    let probe = BoxProbe::cube(2, 2.0, 0.1, 1e-9).unwrap();
    let fine = BoxProbe::cube(2, 2.5, 0.01, 1e-9).unwrap();
    for op in [
        OperatorRep::identity(1),
        OperatorRep::subdiff_l1(1),
        OperatorRep::normal_cone_box(&[0.0], &[1.0]).unwrap(),
    ] {
        let graph: FiniteGraph = discretize_graph(&op, &fine).unwrap();
        let mut min_margin = f64::INFINITY;
        for z in probe.points() {
            let zp = PairedPoint::from_concat(&z).unwrap();
            let d = graph.points().iter().map(|a| a.distance(&zp)).fold(f64::INFINITY, f64::min);
            let gap = fitzpatrick_value(&op, &zp, &probe).unwrap().to_f64() - pairing_p(&zp);
            if d < 1e-12 {
                assert!(gap.abs() <= 1e-9, "{} at {zp}: {gap}", op.kind_name());
            } else if d >= 0.1 {
                min_margin = min_margin.min(gap);
            }
        }
        assert!(min_margin > 0.0, "{}: margin {min_margin}", op.kind_name());
    }
}

#[test]
fn matrix_helpers_are_consistent() {
    let mut r = rng(3);
    let m = random_monotone_matrix(&mut r, 3);
    let s: Matrix = (&m + m.transpose()) * 0.5;
    assert!(s.symmetric_eigenvalues().iter().all(|e| *e >= -1e-12));
}
