use kappamu_core::catalog;
use kappamu_core::contact::check_structure_isomorphism;
use kappamu_core::format::{AlgebraFile, Definition, LoadedDefinition};
use kappamu_core::{LieAlgebra, Matrix, MetricLieAlgebra, MuValue, QSqrt2, Scalar, SolitonStatus, Subspace};
use proptest::prelude::*;

fn q(s: &str) -> QSqrt2 {
    s.parse().unwrap()
}

fn rational() -> impl Strategy<Value = QSqrt2> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| QSqrt2::from_ratio(n, d))
}

fn positive() -> impl Strategy<Value = QSqrt2> {
    (1i64..=6, 1i64..=4, 0i64..=1)
        .prop_map(|(n, d, r)| QSqrt2::from_ratio(n, d) + QSqrt2::from_i64(r) * QSqrt2::sqrt2())
}

/// Same metric Lie algebra in the basis given by the columns of `p`.
fn rebase<S: Scalar>(m: &MetricLieAlgebra<S>, p: &Matrix<S>) -> MetricLieAlgebra<S> {
    let n = m.dim();
    let p_inv = p.inverse().unwrap();
    let labels: Vec<String> = (0..n).map(|i| format!("f{i}")).collect();
    let mut b = LieAlgebra::builder("rebased", labels);
    for i in 0..n {
        for j in i + 1..n {
            let br = m.alg().bracket(&p.column(i), &p.column(j)).unwrap();
            let terms: Vec<(usize, S)> = p_inv
                .mul_vec(&br)
                .into_iter()
                .enumerate()
                .filter(|t| !t.1.is_zero())
                .collect();
            b.add(i, j, &terms);
        }
    }
    let gram = p.transpose().mul(m.gram()).mul(p);
    MetricLieAlgebra::new(b.build().unwrap(), gram).unwrap()
}

/// Unipotent upper-triangular change of basis, always invertible.
fn unipotent(n: usize, entries: &[QSqrt2]) -> Matrix<QSqrt2> {
    let mut it = entries.iter().cycle();
    Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => QSqrt2::one(),
        std::cmp::Ordering::Less => it.next().unwrap().clone(),
        std::cmp::Ordering::Greater => QSqrt2::zero(),
    })
}

fn catalog_exact() -> Vec<Definition<QSqrt2>> {
    vec![
        Definition::from_contact(catalog::build_g_alpha_beta(&q("0"), &q("2"), 2).unwrap()),
        Definition::from_contact(catalog::build_g_alpha_beta(&q("1/3"), &q("1+r2"), 3).unwrap()),
        {
            let m = catalog::build_solvable_model(&q("2*r2"), 2).unwrap();
            Definition::new(m.metric).with_complex(m.j)
        },
        Definition::from_contact(catalog::build_s_n::<QSqrt2>(3).unwrap().structure),
        Definition::new(catalog::heisenberg()),
        Definition::new(
            catalog::build_so2n_iwasawa(4, &q("r2"))
                .unwrap()
                .model_metric()
                .unwrap(),
        ),
    ]
}

#[test]
fn definition_files_round_trip_for_every_catalog_algebra() {
    for def in catalog_exact() {
        let json = def.to_file().to_json();
        let file = AlgebraFile::parse(&json).unwrap();
        assert_eq!(file.to_json(), json);
        let LoadedDefinition::Exact(back) = file.load().unwrap() else {
            panic!("exact file loaded as float");
        };
        assert_eq!(back.metric, def.metric);
        assert_eq!(
            back.contact.as_ref().map(|c| c.phi().clone()),
            def.contact.as_ref().map(|c| c.phi().clone())
        );
        assert_eq!(back.complex, def.complex);
    }
    for seed in 0..5 {
        let def = Definition::new(catalog::random_solvable(seed));
        let json = def.to_file().to_json();
        let LoadedDefinition::Float(back) = AlgebraFile::parse(&json).unwrap().load().unwrap() else {
            panic!("float file loaded as exact");
        };
        assert_eq!(back.metric, def.metric, "float scalars must round-trip bit for bit");
    }
}

#[test]
fn inverse_isomorphism_verifies_in_reverse() {
    for n in 2..=4 {
        let src = catalog::build_s_n::<QSqrt2>(n).unwrap().structure;
        let dst = catalog::build_g_alpha_beta(&q("0"), &q("2"), n).unwrap();
        let map = catalog::s_n_isomorphism_map::<QSqrt2>(n).unwrap();
        let inv = map.inverse().unwrap();
        assert!(check_structure_isomorphism(&inv, &dst, &src).unwrap().strictly_passed());
    }
}

#[test]
fn singular_map_is_an_error() {
    let src = catalog::build_s_n::<QSqrt2>(2).unwrap().structure;
    let dst = catalog::build_g_alpha_beta(&q("0"), &q("2"), 2).unwrap();
    let zero = Matrix::zeros(5, 5);
    assert!(check_structure_isomorphism(&zero, &src, &dst).is_err());
}

#[test]
fn s_n_soliton_constant_scales_inversely() {
    let h = catalog::build_s_n::<QSqrt2>(2).unwrap();
    let base = h.metric().algebraic_soliton_solve();
    for t in ["2", "1/3", "r2"] {
        let v = h.metric().scaled(&q(t)).unwrap().algebraic_soliton_solve();
        assert_eq!(v.status, SolitonStatus::NontrivialSolvsoliton);
        assert_eq!(v.soliton_constant, base.soliton_constant.clone() / q(t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ricci_operator_is_frame_independent(entries in proptest::collection::vec(rational(), 1..6)) {
        let m = catalog::build_g_alpha_beta(&q("1/2"), &q("3/2"), 2).unwrap().base().clone();
        let p = unipotent(m.dim(), &entries);
        let r = rebase(&m, &p);
        let expected = p.inverse().unwrap().mul(&m.ricci_operator()).mul(&p);
        prop_assert_eq!(r.ricci_operator(), expected);
        prop_assert_eq!(r.scalar_curvature(), m.scalar_curvature());
    }

    #[test]
    fn sectional_curvature_is_frame_independent(
        entries in proptest::collection::vec(rational(), 1..6),
        x in proptest::collection::vec(rational(), 5),
        y in proptest::collection::vec(rational(), 5),
    ) {
        let m = catalog::build_g_alpha_beta(&q("0"), &q("2"), 2).unwrap().base().clone();
        let p = unipotent(5, &entries);
        let r = rebase(&m, &p);
        let p_inv = p.inverse().unwrap();
        match m.sectional_curvature(&x, &y) {
            Ok(k) => prop_assert_eq!(r.sectional_curvature(&p_inv.mul_vec(&x), &p_inv.mul_vec(&y)).unwrap(), k),
            Err(_) => prop_assert!(r.sectional_curvature(&p_inv.mul_vec(&x), &p_inv.mul_vec(&y)).is_err()),
        }
    }

    #[test]
    fn ricci_scales_inversely_with_the_metric(t in positive()) {
        let m = catalog::build_s_n::<QSqrt2>(2).unwrap().metric().clone();
        let scaled = m.scaled(&t).unwrap();
        prop_assert_eq!(scaled.ricci_operator(), m.ricci_operator().scale(&t.recip()));
    }

    #[test]
    fn exact_fit_matches_closed_form(alpha in (0i64..=8, 1i64..=4), gap in (1i64..=8, 1i64..=4), n in 2usize..=3) {
        let alpha = QSqrt2::from_ratio(alpha.0, alpha.1);
        let beta = alpha.clone() + QSqrt2::from_ratio(gap.0, gap.1);
        let fit = catalog::build_g_alpha_beta(&alpha, &beta, n).unwrap().kappa_mu_fit();
        let (kappa, mu) = catalog::closed_form_kappa_mu(&alpha, &beta).unwrap();
        prop_assert!(fit.residual.is_zero());
        prop_assert_eq!(fit.kappa, kappa);
        prop_assert_eq!(fit.mu, MuValue::Value(mu));
    }

    #[test]
    fn d_homothetic_deformations_compose(a in positive(), b in positive()) {
        let s = catalog::build_g_alpha_beta(&q("0"), &q("2"), 2).unwrap();
        let ab = s.d_homothetic(&(a.clone() * b.clone())).unwrap();
        let a_then_b = s.d_homothetic(&a).unwrap().d_homothetic(&b).unwrap();
        prop_assert_eq!(a_then_b.base().gram(), ab.base().gram());
        prop_assert_eq!(a_then_b.xi(), ab.xi());
        prop_assert_eq!(a_then_b.kappa_mu_fit(), ab.kappa_mu_fit());
    }

    #[test]
    fn random_solvable_algebras_satisfy_identities(seed in 0u64..1000) {
        let m = catalog::random_solvable(seed);
        prop_assert!(m.alg().series_analysis().is_solvable);
        for c in m.verify_identities().checks {
            let r = c.residual.map_or(0.0, |v| v.float);
            prop_assert!(r <= 1e-9, "seed {}: {} residual {}", seed, c.name, r);
        }
    }
}

#[test]
fn float_backend_agrees_with_exact_backend() {
    for def in catalog_exact() {
        let exact = &def.metric;
        let float = exact.to_f64();
        let diff = exact.ricci_operator().map(|x| x.to_f64()).sub(&float.ricci_operator());
        assert!(
            diff.max_abs() <= 1e-9,
            "{}: ricci differs by {}",
            exact.alg().name(),
            diff.max_abs()
        );
        let s = (exact.scalar_curvature().to_f64() - float.scalar_curvature()).abs();
        assert!(s <= 1e-9, "{}: scalar curvature differs by {s}", exact.alg().name());
        let v = exact.algebraic_soliton_solve().soliton_constant.to_f64();
        let w = float.algebraic_soliton_solve().soliton_constant;
        assert!(
            (v - w).abs() <= 1e-9,
            "{}: soliton constant {v} vs {w}",
            exact.alg().name()
        );
    }
}

#[test]
fn mean_curvature_vanishes_exactly_on_unimodular_algebras() {
    for def in catalog_exact() {
        let m = &def.metric;
        let unimodular = (0..m.dim()).all(|i| m.alg().ad_basis(i).trace().is_zero());
        let h = m.mean_curvature_vector();
        assert_eq!(h.iter().all(Scalar::is_zero), unimodular, "{}", m.alg().name());
    }
}

/// Solved constant is negative exactly when the four conditions hold at it,
/// and the conditions fail at any other constant.
fn assert_solve_matches_lauret(m: &MetricLieAlgebra<QSqrt2>) {
    let v = m.algebraic_soliton_solve();
    assert_ne!(v.status, SolitonStatus::NoneFound, "{}", m.name());
    let c = v.soliton_constant;
    assert!(c.is_negative(), "{}: constant {c}", m.name());
    assert!(m.lauret_conditions(&c).unwrap().overall(), "{} at {c}", m.name());
    let off = c.clone() * q("2");
    assert!(!m.lauret_conditions(&off).unwrap().overall(), "{} at {off}", m.name());
}

#[test]
fn soliton_solve_agrees_with_lauret_conditions() {
    assert_solve_matches_lauret(catalog::build_s_n::<QSqrt2>(3).unwrap().metric());
    let s = catalog::build_solvable_model(&q("2*r2"), 2).unwrap().metric;
    assert_solve_matches_lauret(&s);
    let lines = [[1, 0], [0, 1], [-1, 1], [1, 3], [2, -5], [3, 1]];
    let mut spans: Vec<Vec<Vec<QSqrt2>>> = lines
        .iter()
        .map(|&[a, b]| {
            let mut v = vec![QSqrt2::zero(); s.dim()];
            v[0] = QSqrt2::from_i64(a);
            v[1] = QSqrt2::from_i64(b);
            vec![v]
        })
        .collect();
    spans.push(
        (0..2)
            .map(|i| (0..s.dim()).map(|k| QSqrt2::from_i64((k == i) as i64)).collect())
            .collect(),
    );
    for vectors in spans {
        let full = vectors.len() == 2;
        let r = s.rank_reduction(&Subspace::span(s.dim(), &vectors)).unwrap();
        assert_solve_matches_lauret(&r.sub);
        if full {
            assert_eq!(r.heber_einstein, Some(true));
            assert_eq!(r.sub.ricci_operator(), s.ricci_operator());
        }
    }
}
