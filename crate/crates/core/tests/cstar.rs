use gb_core::abelian::{FiniteAbelianGroup, Phase};
use gb_core::cstar::{
    is_unitary_action, root_of_unity, spectrum_enumerate, stone_von_neumann, unitary_tensor_iso, ActionDatum, Automorphism, CMat, CVec,
    CrossedProduct, FiberAlgebra, UnitaryActionDatum, UnitaryOutcome,
};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn pauli(k: u8) -> CMat {
    let (o, z, i) = (root_of_unity(0, 1), root_of_unity(0, 1) * 0.0, root_of_unity(1, 4));
    match k {
        0 => CMat::identity(2, 2),
        1 => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        2 => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

fn pauli_string(s: [u8; 2]) -> CMat {
    pauli(s[0]).kronecker(&pauli(s[1]))
}

/// Pauli strings anticommute iff they differ at an odd number of positions
/// where both are non-identity.
fn anticommute(a: [u8; 2], b: [u8; 2]) -> bool {
    a.iter().zip(&b).filter(|(x, y)| **x != 0 && **y != 0 && x != y).count() % 2 == 1
}

fn nonidentity_string() -> impl Strategy<Value = [u8; 2]> {
    (0u8..4, 0u8..4).prop_filter("non-identity", |(a, b)| *a != 0 || *b != 0).prop_map(|(a, b)| [a, b])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pauli_pairs_lift_iff_they_commute(a in nonidentity_string(), b in nonidentity_string()) {
        prop_assume!(a != b);
        let g = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        let gens = vec![Automorphism::Conjugation(pauli_string(a)), Automorphism::Conjugation(pauli_string(b))];
        let alpha = ActionDatum::from_generators(g, FiberAlgebra::Matrix(4), gens, TOL).unwrap();
        let x = CrossedProduct::new(&alpha, TOL).unwrap();
        let dims: Vec<usize> = x.wedderburn(TOL).unwrap().iter().map(|s| s.dim).collect();
        match is_unitary_action(&alpha, TOL).unwrap() {
            UnitaryOutcome::Obstructed(table) => {
                prop_assert!(anticommute(a, b));
                prop_assert!(table.iter().all(|(_, _, p)| *p == Phase::new(1, 2)));
                prop_assert_eq!(dims, vec![8]);
            }
            UnitaryOutcome::Lift(u) => {
                prop_assert!(!anticommute(a, b));
                prop_assert!(u.implements(&alpha, TOL).unwrap());
                let sp = spectrum_enumerate(&u, TOL).unwrap();
                prop_assert_eq!(sp.entries.len(), 4);
                prop_assert_eq!(sp.sum_of_squares, 64);
                prop_assert_eq!(dims, vec![4, 4, 4, 4]);
            }
            UnitaryOutcome::NotPointwiseInner => prop_assert!(false, "conjugations are inner"),
        }
    }

    #[test]
    fn diagonal_phase_actions(m in 2i64..=4, n in 1usize..=3, ks in proptest::collection::vec(0i64..12, 3)) {
        let g = FiniteAbelianGroup::cyclic(m);
        let v = CMat::from_diagonal(&CVec::from_vec((0..n).map(|j| root_of_unity(ks[j], m)).collect()));
        let alpha = ActionDatum::from_generators(g.clone(), FiberAlgebra::Matrix(n), vec![Automorphism::Conjugation(v)], TOL).unwrap();
        let x = CrossedProduct::new(&alpha, TOL).unwrap();
        prop_assert!(x.table().check_axioms(1e-9).is_ok());
        let UnitaryOutcome::Lift(u) = is_unitary_action(&alpha, TOL).unwrap() else {
            return Err(TestCaseError::fail("cyclic groups always lift"));
        };
        prop_assert!(u.implements(&alpha, TOL).unwrap());
        let sp = spectrum_enumerate(&u, TOL).unwrap();
        prop_assert_eq!(sp.entries.len() as i64, m);
        prop_assert_eq!(sp.sum_of_squares, x.dim());
        let iso = unitary_tensor_iso(&u, TOL).unwrap();
        prop_assert!(iso.check.holds());
        // the summands of M_n ⋊ Z_m: one M_n per character
        let dims: Vec<usize> = x.wedderburn(TOL).unwrap().iter().map(|s| s.dim).collect();
        prop_assert_eq!(dims, vec![n; m as usize]);
    }

    #[test]
    fn permutation_actions(perm in Just(vec![1usize, 2, 0, 4, 3]), power in 0usize..6) {
        // Z6 acting through the permutation (012)(34) raised to `power`
        let g = FiniteAbelianGroup::cyclic(6);
        let mut p: Vec<usize> = (0..5).collect();
        for _ in 0..power {
            p = p.iter().map(|&x| perm[x]).collect();
        }
        let alpha = ActionDatum::from_generators(g, FiberAlgebra::Functions(5), vec![Automorphism::Permutation(p.clone())], TOL).unwrap();
        let x = CrossedProduct::new(&alpha, TOL).unwrap();
        prop_assert!(x.table().check_axioms(1e-9).is_ok());
        let total: usize = x.wedderburn(TOL).unwrap().iter().map(|s| s.dim * s.dim).sum();
        prop_assert_eq!(total, 30);
        let trivial = p.iter().enumerate().all(|(i, &j)| i == j);
        let inner = !matches!(is_unitary_action(&alpha, TOL).unwrap(), UnitaryOutcome::NotPointwiseInner);
        prop_assert_eq!(inner, trivial);
    }
}

/// Brute-force oracle for the orbit structure: `C(X) ⋊ Z_m` has one
/// summand `M_|O|` repeated `|Stab|` times per orbit `O`.
#[test]
fn permutation_summands_match_orbit_count() {
    let g = FiniteAbelianGroup::cyclic(6);
    let p = vec![1usize, 2, 0, 4, 3];
    let alpha = ActionDatum::from_generators(g, FiberAlgebra::Functions(5), vec![Automorphism::Permutation(p)], TOL).unwrap();
    let dims: Vec<usize> = CrossedProduct::new(&alpha, TOL).unwrap().wedderburn(TOL).unwrap().iter().map(|s| s.dim).collect();
    // orbit {0,1,2}: stabilizer of order 2; orbit {3,4}: stabilizer of order 3
    assert_eq!(dims, vec![2, 2, 2, 3, 3]);
}

#[test]
fn stone_von_neumann_z2_checks_sixteen_products() {
    let iso = stone_von_neumann(&FiniteAbelianGroup::cyclic(2), TOL).unwrap();
    assert_eq!(iso.check.products_checked, 16);
    assert!(iso.check.holds());
    let z3 = CrossedProduct::new(&ActionDatum::translation(&FiniteAbelianGroup::cyclic(3)), TOL).unwrap();
    assert_eq!(z3.dim(), 9);
}

#[test]
fn z3_diagonal_lift_is_recovered() {
    let g = FiniteAbelianGroup::cyclic(3);
    let v = CMat::from_diagonal(&CVec::from_vec(vec![root_of_unity(0, 1), root_of_unity(1, 3)]));
    let u = UnitaryActionDatum::from_generators(g, vec![v.clone()], TOL).unwrap();
    let UnitaryOutcome::Lift(w) = is_unitary_action(&u.action(TOL).unwrap(), TOL).unwrap() else { panic!() };
    assert!((w.unitary(&[1]) - v).norm() < 1e-9);
}
