use legpath_core::cartan_forms::{
    assemble_phi, bianchi_defect, curvature, maurer_cartan_form, sp_defect, Convention, SpValuedOneForm,
};
use legpath_core::contact_jets::{base_chart, JetChart, PathSystem};
use legpath_core::flat_model::{is_lagrangian, quadric_to_lagrangian, SymplecticSpace};
use legpath_core::quadric_osculation::{osculating_quadric, QuadricCoefficients};
use legpath_core::random;
use legpath_core::rep_decomp::{
    character, character_dim, tensor_decompose, weyl_dimension, AlgebraId, IrrepLabel, VProjector,
};
use legpath_core::report_io::{emit_problem, load_problem, Problem};
use legpath_core::torsion_normalizer::{
    apply_gauge, apply_second_gauge, first_normalization_check, residual_gauge, second_normalization_check,
    solve_first_normalization, solve_second_normalization, GaugeParameters,
};
use legpath_symbolic::{Chart, Q};
use num_traits::Zero;
use proptest::prelude::*;

fn show(v: &Q) -> String {
    v.to_string()
}

fn random_gauge(rng: &mut random::ChaCha8Rng, n: usize) -> GaugeParameters<Q> {
    let dim = legpath_core::torsion_normalizer::gauge_dim(n);
    let v: Vec<Q> = (0..dim).map(|_| random::rational(rng)).collect();
    GaugeParameters::from_vector(n, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_keeps_symmetries_and_inverts(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let t = random::torsion(&mut rng, n);
        let g = random_gauge(&mut rng, n);
        let moved = apply_gauge(&t, &g).unwrap();
        prop_assert!(moved.validate().is_ok());
        prop_assert_eq!(apply_gauge(&moved, &g.neg()).unwrap(), t);
    }

    #[test]
    fn first_normalization_solves_and_is_idempotent(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let t = random::torsion(&mut rng, n);
        let normalized = apply_gauge(&t, &solve_first_normalization(&t).unwrap()).unwrap();
        prop_assert!(first_normalization_check(&normalized, show).pass);
        prop_assert!(solve_first_normalization(&normalized).unwrap().is_zero());
        let p = random::rational(&mut rng);
        let again = apply_gauge(&normalized, &residual_gauge(n, p)).unwrap();
        prop_assert!(first_normalization_check(&again, show).pass);
    }

    #[test]
    fn second_normalization_solves(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let pt = random::p_tensor(&mut rng, n);
        let h = solve_second_normalization(&pt).unwrap();
        let out = apply_second_gauge(&pt, &h, &Q::zero()).unwrap();
        prop_assert!(out.validate().is_ok());
        prop_assert!(second_normalization_check(&out, show).pass);
    }

    #[test]
    fn symmetric_quadrics_are_lagrangian(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let m = random::symmetric(&mut rng, n);
        let aa = (0..n).map(|i| (0..n).map(|j| m[(i, j)].clone()).collect()).collect();
        let a = (0..n).map(|_| random::rational(&mut rng)).collect();
        let quad = QuadricCoefficients::from_rationals(random::rational(&mut rng), a, aa).unwrap();
        let space = SymplecticSpace::new(n).unwrap();
        let plane = quadric_to_lagrangian(&quad, &space).unwrap();
        prop_assert_eq!(plane.dim(), n + 1);
        prop_assert!(is_lagrangian(&plane, &space).unwrap());
    }

    #[test]
    fn osculating_quadric_is_symmetric(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let chart = base_chart(n, &[] as &[&str]).unwrap();
        let f = random::polynomial(&mut rng, &chart, 4, 4);
        let x0: Vec<Q> = (0..n).map(|_| random::rational(&mut rng)).collect();
        let quad = osculating_quadric(&f, &x0).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(quad.aa(i, j), quad.aa(j, i));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn maurer_cartan_is_sp_valued_and_flat(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = random::rng(seed);
        let chart = Chart::new("c", &["x1", "x2"]).unwrap();
        let g = random::symplectic_element(&mut rng, &chart, n, 1);
        for conv in [Convention::PathGeometry, Convention::NormalSymplectic] {
            let phi = maurer_cartan_form(&g, conv).unwrap();
            prop_assert!(sp_defect(&phi.full()).is_zero());
            prop_assert!(curvature(&phi).unwrap().is_zero());
        }
    }

    #[test]
    fn bianchi_holds(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = random::rng(seed);
        let chart = Chart::new("c", &["x1", "x2", "x3"]).unwrap();
        let m = random::sp_one_form(&mut rng, &chart, n, 2);
        let phi = SpValuedOneForm::from_full(&m, Convention::PathGeometry).unwrap();
        let omega = curvature(&phi).unwrap();
        prop_assert!(sp_defect(&omega.omega).is_zero());
        prop_assert!(bianchi_defect(&phi, &omega).unwrap().is_zero());
    }

    #[test]
    fn assembled_blocks_are_sp_valued(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = random::rng(seed);
        let jet = JetChart::new(n).unwrap();
        let mut blocks = legpath_core::cartan_forms::flat_blocks(&jet);
        blocks.rho = random::form(&mut rng, jet.chart(), 1, 1, 2);
        blocks.alpha[0][n - 1] = random::form(&mut rng, jet.chart(), 1, 1, 2);
        for conv in [Convention::PathGeometry, Convention::NormalSymplectic] {
            let phi = assemble_phi(&blocks, conv).unwrap();
            prop_assert!(sp_defect(&phi.full()).is_zero());
        }
    }

    #[test]
    fn problems_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let jet = JetChart::new(n).unwrap();
        let base = base_chart(n, &[] as &[&str]).unwrap();
        let fs: Vec<_> = (0..n * n * n).map(|_| random::polynomial(&mut rng, &base, 2, 2)).collect();
        let system = PathSystem::new(&jet, |i, j, k| fs[(i * n + j) * n + k].clone()).ok();
        let mut problems = vec![
            Problem::Torsion(random::torsion(&mut rng, n)),
            Problem::PTensor(random::p_tensor(&mut rng, n)),
            Problem::Function(random::polynomial(&mut rng, &base, 3, 3)),
        ];
        if let Some(s) = system {
            problems.push(Problem::PathSystem(s));
        }
        for p in problems {
            let text = emit_problem(&p);
            prop_assert_eq!(load_problem(&text).unwrap(), p, "{}", text);
        }
    }
}

fn labels(algebra: AlgebraId) -> Vec<IrrepLabel> {
    let rank = algebra.rank();
    let mut out = Vec::new();
    let mut coords = vec![0u32; rank];
    loop {
        if coords.iter().sum::<u32>() <= 3 {
            if let Ok(l) = IrrepLabel::new(algebra, coords.clone()) {
                out.push(l);
            }
        }
        let mut k = 0;
        while k < rank {
            coords[k] += 1;
            if coords[k] <= 3 {
                break;
            }
            coords[k] = 0;
            k += 1;
        }
        if k == rank {
            return out;
        }
    }
}

#[test]
fn weyl_dimension_matches_character() {
    for algebra in [AlgebraId::Symplectic(2), AlgebraId::Symplectic(3), AlgebraId::Orthogonal(5), AlgebraId::Orthogonal(6)] {
        for l in labels(algebra) {
            assert_eq!(weyl_dimension(&l).unwrap(), character_dim(&character(&l).unwrap()), "{l}");
        }
    }
}

#[test]
fn tensor_decomposition_conserves_dimension_and_commutes() {
    for algebra in [AlgebraId::Symplectic(2), AlgebraId::Orthogonal(5)] {
        let ls: Vec<IrrepLabel> = labels(algebra).into_iter().filter(|l| l.coords.iter().sum::<u32>() <= 2).collect();
        for a in &ls {
            for b in &ls {
                let mut ab = tensor_decompose(a, b).unwrap();
                let mut ba = tensor_decompose(b, a).unwrap();
                let total: u64 = ab.iter().map(|(l, m)| m * weyl_dimension(l).unwrap()).sum();
                assert_eq!(total, weyl_dimension(a).unwrap() * weyl_dimension(b).unwrap(), "{a} x {b}");
                ab.sort_by(|x, y| x.0.coords.cmp(&y.0.coords));
                ba.sort_by(|x, y| x.0.coords.cmp(&y.0.coords));
                assert_eq!(ab, ba);
            }
        }
    }
}

#[test]
fn projector_is_equivariant() {
    let mut rng = random::rng(11);
    for n in 2..=3 {
        let p = VProjector::new(n).unwrap();
        assert!(p.is_idempotent());
        assert_eq!(p.rank(), 2 * n);
        for _ in 0..4 {
            let x = legpath_core::rep_decomp::sp_element(&random::symmetric(&mut rng, 2 * n));
            assert!(p.commutes_with(&x));
        }
    }
}
