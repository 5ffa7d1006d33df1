use std::f64::consts::PI;
use std::sync::Arc;

use fracwave::solvers::{
    solve_cauchy, solve_inner, solve_inner_boundary, CauchySpec, EquationParams, InnerBoundarySpec, InnerSpec,
    SolverError, SourceTerm,
};
use fracwave::special::{gamma, ml_value, recip_gamma};
use fracwave::spectral::{solve_pde, DirichletLaplacian, PdeProblem, SpatialData};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// `(α, β, γ)` with `1 < α ≤ 2`, `0 ≤ β ≤ 2-α`, `0 < γ ≤ α-1`.
fn orders() -> impl Strategy<Value = (f64, f64, f64)> {
    (1.05f64..=2.0, 0.0f64..=1.0, 0.05f64..=1.0).prop_map(|(a, sb, sg)| (a, sb * (2.0 - a), sg * (a - 1.0)))
}

fn source() -> impl Strategy<Value = SourceTerm> {
    prop_oneof![
        Just(SourceTerm::Zero),
        (-2.0f64..2.0).prop_map(|c| SourceTerm::Constant { c }),
        (-2.0f64..2.0, 0.0f64..2.0).prop_map(|(coef, p)| SourceTerm::Power { coef, p }),
        (-2.0f64..2.0, -2.0f64..1.0).prop_map(|(coef, k)| SourceTerm::Exp { coef, k }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ml_recurrence(alpha in 0.2f64..=2.0, beta in -2.0f64..3.0, z in -30.0f64..4.0) {
        let lhs = ml_value(alpha, beta, z).unwrap();
        let rhs = z * ml_value(alpha, alpha + beta, z).unwrap() + recip_gamma(beta);
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn reflection_of_gamma(x in -6.0f64..6.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        prop_assert!(close(gamma(x) * recip_gamma(x), 1.0, 1e-13));
    }

    #[test]
    fn cauchy_solution_is_linear_in_data(
        (alpha, beta, _) in orders(),
        m in -3.0f64..2.0,
        d in prop::array::uniform4(-2.0f64..2.0),
        f in source(),
        s in -2.0f64..2.0,
    ) {
        let eq = EquationParams::new(alpha, m, 1.0).unwrap();
        let g = alpha - 1.0;
        let u = solve_cauchy(&CauchySpec::new(eq, beta, g, d[0], d[1], f.clone())).unwrap();
        let v = solve_cauchy(&CauchySpec::new(eq, beta, g, d[2], d[3], SourceTerm::Zero)).unwrap();
        let w = solve_cauchy(&CauchySpec::new(eq, beta, g, d[0] + s * d[2], d[1] + s * d[3], f)).unwrap();
        for &t in &[0.1, 0.5, 1.0] {
            let lin = u.eval(t).unwrap() + s * v.eval(t).unwrap();
            prop_assert!(close(w.eval(t).unwrap(), lin, 1e-11));
        }
    }

    #[test]
    fn inner_data_is_reproduced(
        (alpha, beta, gamma) in orders(),
        m in -3.0f64..1.0,
        a in 0.1f64..1.0,
        d in prop::array::uniform2(-2.0f64..2.0),
        f in source(),
    ) {
        let eq = EquationParams::new(alpha, m, 1.0).unwrap();
        match solve_inner(&InnerSpec::new(eq, beta, gamma, a, d[0], d[1], f)) {
            Ok(u) => {
                prop_assert!(close(u.ibeta(beta, a).unwrap(), d[0], 1e-9));
                prop_assert!(close(u.dgamma(gamma, a).unwrap(), d[1], 1e-9));
            }
            Err(SolverError::DegenerateSystem(r)) => prop_assert!(!r.solvable),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn inner_boundary_data_is_reproduced(
        (alpha, beta, gamma) in orders(),
        m in -3.0f64..1.0,
        a in 0.1f64..1.0,
        b in 0.1f64..1.0,
        d in prop::array::uniform2(-2.0f64..2.0),
    ) {
        let eq = EquationParams::new(alpha, m, 1.0).unwrap();
        let f = SourceTerm::Constant { c: 0.5 };
        match solve_inner_boundary(&InnerBoundarySpec::new(eq, beta, gamma, a, b, d[0], d[1], f)) {
            Ok(u) => {
                prop_assert!(close(u.ibeta(beta, a).unwrap(), d[0], 1e-9));
                prop_assert!(close(u.dgamma(gamma, b).unwrap(), d[1], 1e-9));
            }
            Err(SolverError::DegenerateSystem(r)) => prop_assert!(!r.solvable),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn source_json_round_trip(f in source()) {
        let s = serde_json::to_string(&f).unwrap();
        let g: SourceTerm = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(f, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn modes_do_not_interact(
        alpha in 1.1f64..=2.0,
        coefs in prop::collection::vec(-1.0f64..1.0, 6),
        j in 0usize..6,
        bump in 0.1f64..1.0,
    ) {
        let sp = Arc::new(DirichletLaplacian::new(PI));
        let mut p = PdeProblem::cauchy(alpha, 0.0, alpha - 1.0, 1.0, 6);
        p.u1 = SpatialData::Coefficients(coefs.clone());
        let base = solve_pde(&p, sp.clone()).unwrap();
        let mut c = coefs;
        c[j] += bump;
        p.u1 = SpatialData::Coefficients(c);
        let moved = solve_pde(&p, sp).unwrap();
        for &t in &[0.2, 1.0] {
            let (x, y) = (base.mode_values(t).unwrap(), moved.mode_values(t).unwrap());
            for i in (0..6).filter(|&i| i != j) {
                prop_assert_eq!(x[i], y[i]);
            }
        }
    }
}
