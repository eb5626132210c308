use hysmooth_core::groebner::{
    ideal_dimension, ideal_membership, localized_dimension, radical_membership, saturate, Budget, Ideal,
};
use hysmooth_core::polyalg::{parse_poly, Monomial, Poly, Ring};
use hysmooth_core::smoothness::{
    chart_codimension, chart_decompose, cofactor_matrix, delta_check, descent, drop_redundant_minors,
    embedded_jacobian, hybrid_smoothness_test, hybrid_tree, jacobian_matrix, nonzero_minor_selections,
    relative_jacobian, ChartStatus, ChartTriple, MinorSelection, Mode, PolyMatrix, SmoothnessError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn b() -> Budget {
    Budget::default()
}

fn ring(vars: &[&str]) -> Ring {
    Ring::degrevlex(103, vars).unwrap()
}

fn polys(r: &Ring, gens: &[&str]) -> Vec<Poly> {
    gens.iter().map(|g| parse_poly(g, r).unwrap()).collect()
}

fn triple(r: &Ring, w: &[&str], x: &[&str], q: &str) -> ChartTriple {
    let mut all = polys(r, w);
    all.extend(polys(r, x));
    ChartTriple::new(
        Ideal::new(r, polys(r, w)).unwrap(),
        Ideal::new(r, all).unwrap(),
        parse_poly(q, r).unwrap(),
        0,
    )
    .unwrap()
}

fn affine(r: &Ring, x: &[&str]) -> ChartTriple {
    triple(r, &[], x, "1")
}

/// Rank of a matrix of field elements by Gaussian elimination mod p.
fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: u64| {
        let mut r = 1u64;
        let (mut base, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let iv = inv(m[rank][c]);
        for i in 0..rows {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c] * iv % p;
                for k in 0..cols {
                    m[i][k] = (m[i][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether some F_p-rational point of V(I) has Jacobian rank below the
/// codimension. Exhaustive over F_p^n.
fn has_rational_singular_point(gens: &[Poly], codim: usize) -> bool {
    let r = gens[0].ring().clone();
    let p = r.field().modulus() as u64;
    let n = r.nvars();
    let partials: Vec<Vec<Poly>> = gens
        .iter()
        .map(|g| (0..n).map(|j| g.partial_derivative(j).unwrap()).collect())
        .collect();
    let mut point = vec![0u32; n];
    loop {
        if gens.iter().all(|g| g.evaluate(&point) == 0) {
            let m: Vec<Vec<u64>> = partials
                .iter()
                .map(|row| row.iter().map(|d| d.evaluate(&point) as u64).collect())
                .collect();
            if rank_mod_p(m, p) < codim {
                return true;
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            point[k] += 1;
            if (point[k] as u64) < p {
                break;
            }
            point[k] = 0;
            k += 1;
        }
    }
}

// ---- jacobian_matrix ----

#[test]
fn jacobian_examples() {
    let r = ring(&["x", "y"]);
    let j = jacobian_matrix(&polys(&r, &["x^2 + y^2 - 1"])).unwrap();
    assert_eq!(j.entries(), polys(&r, &["2*x", "2*y"]).as_slice());
    let j = jacobian_matrix(&polys(&r, &["y^2 - x^3"])).unwrap();
    assert_eq!(j.entries(), polys(&r, &["100*x^2", "2*y"]).as_slice());
    let r3 = ring(&["x", "y", "z"]);
    let j = jacobian_matrix(&polys(&r3, &["x", "y", "z"])).unwrap();
    assert_eq!(j, PolyMatrix::identity(&r3, 3));
    assert!(jacobian_matrix(&[]).is_err());
}

// ---- nonzero_minor_selections ----

#[test]
fn minor_selection_examples() {
    let r = ring(&["x", "y"]);
    let circle = Ideal::new(&r, polys(&r, &["x^2 + y^2 - 1"])).unwrap();
    let j = jacobian_matrix(circle.gens()).unwrap();
    let sels = nonzero_minor_selections(&j, 1, &circle, &b()).unwrap();
    assert_eq!(
        sels,
        vec![
            MinorSelection::new(vec![0], vec![0]).unwrap(),
            MinorSelection::new(vec![0], vec![1]).unwrap()
        ]
    );
    let m = PolyMatrix::from_rows(&r, vec![polys(&r, &["0", "2*y"])]).unwrap();
    let y2 = Ideal::new(&r, polys(&r, &["y^2"])).unwrap();
    let sels = nonzero_minor_selections(&m, 1, &y2, &b()).unwrap();
    assert_eq!(sels, vec![MinorSelection::new(vec![0], vec![1]).unwrap()]);
    let sels = nonzero_minor_selections(&m, 0, &y2, &b()).unwrap();
    assert_eq!(sels, vec![MinorSelection::empty()]);
    assert!(nonzero_minor_selections(&m, 2, &y2, &b()).is_err());
}

// ---- cofactor_matrix ----

#[test]
fn cofactor_examples() {
    let r = ring(&["a", "b", "c", "d"]);
    let one = PolyMatrix::from_rows(&r, vec![polys(&r, &["a*b + 1"])]).unwrap();
    assert_eq!(cofactor_matrix(&one).unwrap(), PolyMatrix::identity(&r, 1));
    let m = PolyMatrix::from_rows(&r, vec![polys(&r, &["a", "b"]), polys(&r, &["c", "d"])]).unwrap();
    let expected = PolyMatrix::from_rows(&r, vec![polys(&r, &["d", "-b"]), polys(&r, &["-c", "a"])]).unwrap();
    assert_eq!(cofactor_matrix(&m).unwrap(), expected);
    let rect = PolyMatrix::from_rows(&r, vec![polys(&r, &["a", "b"])]).unwrap();
    assert!(matches!(cofactor_matrix(&rect), Err(SmoothnessError::NotSquare { .. })));
}

#[test]
fn cofactor_identity_on_random_matrices() {
    let r = ring(&["x", "y", "z"]);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for size in [2usize, 3, 4] {
        for _ in 0..15 {
            let entries: Vec<Poly> = (0..size * size)
                .map(|_| {
                    let k = rng.gen_range(0..3);
                    Poly::from_terms(
                        &r,
                        (0..k).map(|_| {
                            let e: Vec<u16> = (0..3).map(|_| rng.gen_range(0..2)).collect();
                            (Monomial::from_exponents(&e), rng.gen_range(1..103))
                        }),
                    )
                })
                .collect();
            let m = PolyMatrix::new(&r, size, size, entries).unwrap();
            let a = cofactor_matrix(&m).unwrap();
            let det = m.determinant().unwrap();
            let scaled = PolyMatrix::identity(&r, size).scale(&det).unwrap();
            assert_eq!(a.mul(&m).unwrap(), scaled);
            assert_eq!(m.mul(&a).unwrap(), scaled);
        }
    }
}

// ---- relative_jacobian ----

#[test]
fn relative_jacobian_examples() {
    let r = ring(&["x", "y"]);
    let t = triple(&r, &["x^2 + y^2 - 1"], &["x"], "1");
    let sel = MinorSelection::new(vec![0], vec![1]).unwrap();
    let rel = relative_jacobian(&t, &sel).unwrap();
    assert_eq!((rel.rows(), rel.cols()), (1, 1));
    assert_eq!(rel.get(0, 0), &parse_poly("2*y", &r).unwrap());

    let r3 = ring(&["x", "y", "z"]);
    let t = affine(&r3, &["x^2 - y", "y*z"]);
    let rel = relative_jacobian(&t, &MinorSelection::empty()).unwrap();
    assert_eq!(rel, jacobian_matrix(t.i_x().gens()).unwrap());

    let bad = MinorSelection::new(vec![0, 1], vec![0, 1]).unwrap();
    assert!(relative_jacobian(&t, &bad).is_err());
}

#[test]
fn generators_of_w_have_vanishing_relative_derivatives() {
    // f_3 = f_1 · (x + 2) lies in I_W, so its relative derivatives vanish on X
    let r = ring(&["x", "y", "z"]);
    let t = triple(&r, &["x^2 + y^2 + z^2 - 1"], &["z", "(x^2 + y^2 + z^2 - 1)*(x + 2)"], "1");
    let jw = jacobian_matrix(t.i_w().gens()).unwrap();
    for sel in nonzero_minor_selections(&jw, 1, t.i_x(), &b()).unwrap() {
        let rel = relative_jacobian(&t, &sel).unwrap();
        let gb = t.i_x().groebner(&b()).unwrap();
        for j in 0..rel.cols() {
            assert!(gb.normal_form(rel.get(1, j)).unwrap().is_zero());
        }
    }
    // the defining equation itself relative to its own chart is identically zero
    let t = triple(&r, &["x^2 + y^2 + z^2 - 1"], &["x^2 + y^2 + z^2 - 1"], "1");
    let jw = jacobian_matrix(t.i_w().gens()).unwrap();
    for sel in nonzero_minor_selections(&jw, 1, t.i_x(), &b()).unwrap() {
        let rel = relative_jacobian(&t, &sel).unwrap();
        assert!(rel.entries().iter().all(Poly::is_zero));
    }
}

#[test]
fn relative_derivative_matches_implicit_differentiation() {
    // W: z = x^2 + y^2 (solve for z), f = z - x*y restricted is x^2 + y^2 - x*y
    let r = ring(&["x", "y", "z"]);
    let t = triple(&r, &["z - x^2 - y^2"], &["z - x*y"], "1");
    let sel = MinorSelection::new(vec![0], vec![2]).unwrap();
    let rel = relative_jacobian(&t, &sel).unwrap();
    // det = 1, free variables x, y
    assert_eq!(rel.get(0, 0), &parse_poly("2*x - y", &r).unwrap());
    assert_eq!(rel.get(0, 1), &parse_poly("2*y - x", &r).unwrap());
}

#[test]
fn chart_consistency_between_selections() {
    let r = ring(&["x", "y", "z"]);
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let cases = [
        (vec!["x^2 + y^2 + z^2 - 1"], vec!["x*y - z"]),
        (vec!["x^2 + y^2 + z^2 - 1"], vec!["z"]),
        (vec!["x*y - z^2 - 1"], vec!["x + y + z"]),
    ];
    for (w, x) in cases {
        let t = triple(&r, &w, &x, "1");
        let jac = jacobian_matrix(t.i_x().gens()).unwrap();
        let jw = jacobian_matrix(t.i_w().gens()).unwrap();
        let sels = nonzero_minor_selections(&jw, 1, t.i_x(), &b()).unwrap();
        assert!(sels.len() >= 2);
        for a in 0..sels.len() {
            for c in a + 1..sels.len() {
                let qa = jac.minor(&sels[a]).unwrap();
                let qc = jac.minor(&sels[c]).unwrap();
                let ia = t.i_x().plus(relative_jacobian(&t, &sels[a]).unwrap().entries()).unwrap();
                let ic = t.i_x().plus(relative_jacobian(&t, &sels[c]).unwrap().entries()).unwrap();
                for _ in 0..4 {
                    let g = Poly::from_terms(
                        &r,
                        (0..2).map(|_| {
                            let e: Vec<u16> = (0..3).map(|_| rng.gen_range(0..2)).collect();
                            (Monomial::from_exponents(&e), rng.gen_range(1..103))
                        }),
                    );
                    let probe = qa.try_mul(&qc).unwrap().try_mul(&g).unwrap();
                    assert_eq!(
                        radical_membership(&probe, &ia, &b()).unwrap(),
                        radical_membership(&probe, &ic, &b()).unwrap()
                    );
                }
            }
        }
    }
}

// ---- delta_check ----

#[test]
fn delta_check_examples() {
    let r = ring(&["x", "y", "z"]);
    assert!(delta_check(&affine(&r, &["x^2 + y^2 + z^2 - 1"]), &b()).unwrap());
    assert!(delta_check(&affine(&r, &["x"]), &b()).unwrap());
    let r2 = ring(&["x", "y"]);
    let cusp = affine(&r2, &["y^2 - x^3"]);
    assert!(!delta_check(&cusp, &b()).unwrap());
    // oracle: the ideal of the test is proper
    let ideal = Ideal::new(&r2, polys(&r2, &["y^2 - x^3", "100*x^2", "2*y"])).unwrap();
    assert!(!ideal.is_unit(&b()).unwrap());
}

#[test]
fn delta_check_general_case() {
    let r = ring(&["x", "y", "z"]);
    // X = sphere ∩ {z = 0}, a smooth circle inside a smooth sphere
    assert!(delta_check(&triple(&r, &["x^2 + y^2 + z^2 - 1"], &["z"], "1"), &b()).unwrap());
    // X = sphere ∩ {z = 1} is a double point at (0,0,1): order two along W
    assert!(!delta_check(&triple(&r, &["x^2 + y^2 + z^2 - 1"], &["z - 1"], "1"), &b()).unwrap());
    // away from that point the check passes
    assert!(delta_check(&triple(&r, &["x^2 + y^2 + z^2 - 1"], &["z - 1"], "x"), &b()).unwrap());
    // order two on W = ⟨0⟩ with q ≠ 1 uses the general branch
    let r2 = ring(&["x", "y"]);
    assert!(!delta_check(&triple(&r2, &[], &["y^2 - x^3"], "y + 1"), &b()).unwrap());
    assert!(delta_check(&triple(&r2, &[], &["y^2 - x^3"], "x"), &b()).unwrap());
}

// ---- embedded_jacobian ----

#[test]
fn embedded_jacobian_examples() {
    let r = ring(&["x", "y"]);
    assert!(embedded_jacobian(&affine(&r, &["x^2 + y^2 - 1"]), &b()).unwrap());
    assert!(!embedded_jacobian(&affine(&r, &["y^2 - x^2*(x + 1)"]), &b()).unwrap());
    // oracle: the global Jacobian ideal of the nodal cubic is proper
    let j = Ideal::new(&r, polys(&r, &["y^2 - x^3 - x^2", "100*x^2 - 2*x", "2*y"])).unwrap();
    assert!(!j.is_unit(&b()).unwrap());
    // I_X = I_W
    let t = triple(&r, &["x^2 + y^2 - 1"], &[], "1");
    assert!(embedded_jacobian(&t, &b()).unwrap());
}

#[test]
fn embedded_jacobian_relative_cases() {
    let r = ring(&["x", "y", "z"]);
    assert!(embedded_jacobian(&triple(&r, &["x^2 + y^2 + z^2 - 1"], &["z"], "1"), &b()).unwrap());
    assert!(!embedded_jacobian(&triple(&r, &["x^2 + y^2 + z^2 - 1"], &["z - 1"], "1"), &b()).unwrap());
    // the tangency point is removed by q
    assert!(embedded_jacobian(&triple(&r, &["x^2 + y^2 + z^2 - 1"], &["z - 1"], "x + 2"), &b()).is_ok());
    // det(M) divides q: only that selection is used
    assert!(embedded_jacobian(&triple(&r, &["x^2 + y^2 + z^2 - 1"], &["z"], "2*x"), &b()).unwrap());
}

// ---- drop_redundant_minors ----

#[test]
fn drop_redundant_examples() {
    let r = ring(&["x", "y"]);
    let base = Ideal::new(&r, polys(&r, &["x^2 + y^2 - 1"])).unwrap();
    let one = Poly::one(&r);
    let minors = polys(&r, &["2*x", "2*y", "x^2 + y^2 - 1"]);
    let kept = drop_redundant_minors(&minors, &one, &base, &b()).unwrap();
    assert_eq!(kept.len(), 2);
    assert!(radical_membership(&one, &base.plus(&kept).unwrap(), &b()).unwrap());

    let single = polys(&r, &["x"]);
    let base_y = Ideal::new(&r, polys(&r, &["y - 1"])).unwrap();
    assert_eq!(
        drop_redundant_minors(&single, &parse_poly("x", &r).unwrap(), &base_y, &b()).unwrap(),
        single
    );

    let dup = polys(&r, &["x", "x", "y"]);
    let line = Ideal::new(&r, polys(&r, &["x + y - 1"])).unwrap();
    let kept = drop_redundant_minors(&dup, &one, &line, &b()).unwrap();
    assert_eq!(kept, polys(&r, &["x", "y"]));

    let err = drop_redundant_minors(&polys(&r, &["x"]), &one, &Ideal::zero(&r), &b());
    assert!(matches!(err, Err(SmoothnessError::Precondition(_))));
}

// ---- descent ----

fn check_descent_soundness(t: &ChartTriple, children: &[ChartTriple]) {
    let q_cover: Vec<Poly> = children
        .iter()
        .map(|c| c.q().exact_div(t.q()).unwrap().expect("q divides child q"))
        .collect();
    assert!(radical_membership(t.q(), &t.i_x().plus(&q_cover).unwrap(), &b()).unwrap() || children.len() == 1);
    let base = match chart_codimension(t, &b()).unwrap() {
        ChartStatus::Codim(c) => c,
        ChartStatus::Empty => unreachable!(),
    };
    for c in children {
        assert_eq!(c.depth(), t.depth() + 1);
        assert_eq!(c.r(), t.r() + 1);
        assert_eq!(c.i_x().gens().len(), t.i_x().gens().len());
        assert!(c.i_x().gens().iter().all(|g| ideal_membership(g, t.i_x(), &b()).unwrap()));
        // W' is smooth on D(q')
        let w_only = ChartTriple::new(Ideal::zero(c.ring()), c.i_w().clone(), c.q().clone(), 0).unwrap();
        assert!(embedded_jacobian(&w_only, &b()).unwrap(), "{c}");
        // codimension drops by one
        match chart_codimension(c, &b()).unwrap() {
            ChartStatus::Codim(k) => assert_eq!(k + 1, base, "{c}"),
            ChartStatus::Empty => {}
        }
        let dw = localized_dimension(t.i_w(), c.q(), &b()).unwrap();
        let dw1 = localized_dimension(c.i_w(), c.q(), &b()).unwrap();
        assert_eq!(dw1 + 1, dw);
    }
}

#[test]
fn direct_descent_example() {
    let r = ring(&["x", "y", "z"]);
    let t = affine(&r, &["x^2 + y^2 - 1", "z"]);
    let out = descent(&t, &b()).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].i_w().gens(), polys(&r, &["z"]).as_slice());
    assert_eq!(out[0].i_x().gens(), polys(&r, &["z", "x^2 + y^2 - 1"]).as_slice());
    assert!(out[0].q().is_one());
    check_descent_soundness(&t, &out);
}

#[test]
fn covering_descent_example() {
    // two reduced points; each hypersurface through them is singular elsewhere
    let r = ring(&["x", "y"]);
    let t = affine(&r, &["x*y - x", "x*y - y"]);
    assert!(delta_check(&t, &b()).unwrap());
    let out = descent(&t, &b()).unwrap();
    assert!(out.len() >= 2);
    let qs: Vec<String> = out.iter().map(|c| c.q().to_string()).collect();
    assert_eq!(qs, vec!["y - 1", "x"]);
    check_descent_soundness(&t, &out);
    assert!(hybrid_smoothness_test(&t, 0, &b()).unwrap());

    let r3 = ring(&["x", "y", "z"]);
    let t3 = affine(&r3, &["x*y - x", "x*y - y", "z"]);
    let out = descent(&t3, &b()).unwrap();
    check_descent_soundness(&t3, &out);
}

#[test]
fn descent_requires_something_to_descend() {
    let r = ring(&["x", "y"]);
    let t = triple(&r, &["x"], &[], "1");
    assert!(matches!(descent(&t, &b()), Err(SmoothnessError::Precondition(_))));
}

// ---- hybrid driver ----

#[test]
fn hybrid_examples() {
    let r2 = ring(&["x", "y"]);
    assert!(!hybrid_smoothness_test(&affine(&r2, &["y^2 - x^3"]), 1, &b()).unwrap());
    let r3 = ring(&["x", "y", "z"]);
    let sphere = affine(&r3, &["x^2 + y^2 + z^2 - 1"]);
    assert!(hybrid_smoothness_test(&sphere, 0, &b()).unwrap());
    let tree = hybrid_tree(&sphere, 0, &b()).unwrap();
    assert!(tree.nodes >= 2 && tree.max_depth == 1 && tree.smooth);
    let same = triple(&r3, &["x^2 + y^2 + z^2 - 1"], &[], "1");
    assert!(hybrid_smoothness_test(&same, 0, &b()).unwrap());
}

const SMALL_CORPUS: &[(&[&str], &[&str], bool)] = &[
    (&["x", "y"], &["y^2 - x^3"], false),
    (&["x", "y"], &["x^2 + y^2 - 1"], true),
    (&["x", "y"], &["y - x^2"], true),
    (&["x", "y"], &["y^2 - x^2*(x + 1)"], false),
    (&["x", "y"], &["x*y"], false),
    (&["x", "y"], &["x*y - x", "x*y - y"], true),
    (&["x", "y", "z"], &["x^2 + y^2 + z^2 - 1"], true),
    (&["x", "y", "z"], &["x^2 - y^2*z"], false),
    (&["x", "y", "z"], &["x^2 + y^2 - z^2"], false),
    (&["x", "y", "z"], &["x^2 + y^2 + z^2 - 1", "z"], true),
    (&["x", "y", "z"], &["y^2 - x^3", "z"], false),
    (&["x", "y", "z"], &["x*y", "y*z", "x*z"], false),
    (&["x", "y", "z"], &["y - x^2", "z - x^3"], true),
    (&["x", "y", "z"], &["x^2 + y^2 - 1", "z - x*y"], true),
];

#[test]
fn verdicts_agree_across_codim_limits_and_with_global_criterion() {
    for (vars, gens, expected) in SMALL_CORPUS {
        let r = ring(vars);
        let t = affine(&r, gens);
        let global = embedded_jacobian(&t, &b()).unwrap();
        assert_eq!(global, *expected, "{gens:?}");
        for c in 0..=3 {
            assert_eq!(hybrid_smoothness_test(&t, c, &b()).unwrap(), *expected, "{gens:?} c={c}");
            let tree = hybrid_tree(&t, c, &b()).unwrap();
            assert_eq!(tree.smooth, *expected);
            let codim = r.nvars() as i64 - ideal_dimension(t.i_x(), &b()).unwrap();
            assert!(tree.max_depth as i64 <= codim, "{gens:?}: depth {}", tree.max_depth);
        }
        // rational points: singular verdicts here all have an F_p-rational witness
        let codim = (r.nvars() as i64 - ideal_dimension(t.i_x(), &b()).unwrap()) as usize;
        assert_eq!(has_rational_singular_point(t.i_x().gens(), codim), !expected, "{gens:?}");
    }
}

// ---- chart_decompose ----

#[test]
fn chart_decompose_examples() {
    let r = ring(&["x", "y", "z"]);
    let cone = Ideal::new(&r, polys(&r, &["x^2 + y^2 - z^2"])).unwrap();
    let charts = chart_decompose(&cone, Mode::Projective).unwrap();
    assert_eq!(charts.len(), 3);
    let texts: Vec<String> = charts.iter().map(|c| c.i_x().gens()[0].to_string()).collect();
    assert_eq!(texts, vec!["y^2 - z^2 + 1", "x^2 - z^2 + 1", "x^2 + y^2 - 1"]);
    for c in &charts {
        assert_eq!(c.ring().nvars(), 2);
        assert!(c.i_w().gens().is_empty() && c.q().is_one());
    }

    let plain = Ideal::new(&r, polys(&r, &["x^2 + y - 1"])).unwrap();
    let charts = chart_decompose(&plain, Mode::Affine).unwrap();
    assert_eq!(charts.len(), 1);
    assert_eq!(charts[0].i_x().gens(), plain.gens());
    assert!(matches!(
        chart_decompose(&plain, Mode::Projective),
        Err(SmoothnessError::NotHomogeneous(_))
    ));
    assert!(matches!(chart_decompose(&plain, Mode::Cone), Err(SmoothnessError::NotHomogeneous(_))));

    let charts = chart_decompose(&cone, Mode::Cone).unwrap();
    assert_eq!(charts.len(), 3);
    assert_eq!(charts[0].ring().vars(), &["x", "y", "z", "t"]);
    assert_eq!(charts[1].i_x().gens()[1].to_string(), "y*t - 1");
    // the punctured cone is smooth, the affine cone is not
    for c in &charts {
        assert!(hybrid_smoothness_test(c, 2, &b()).unwrap());
    }
    assert!(!hybrid_smoothness_test(&ChartTriple::affine(cone), 2, &b()).unwrap());
}

#[test]
fn projective_conic_and_nodal_cubic() {
    let r = ring(&["x", "y", "z"]);
    let conic = Ideal::new(&r, polys(&r, &["x^2 + y^2 - z^2"])).unwrap();
    for c in chart_decompose(&conic, Mode::Projective).unwrap() {
        assert!(hybrid_smoothness_test(&c, 1, &b()).unwrap());
    }
    let cubic = Ideal::new(&r, polys(&r, &["y^2*z - x^3 - x^2*z"])).unwrap();
    let verdicts: Vec<bool> = chart_decompose(&cubic, Mode::Projective)
        .unwrap()
        .iter()
        .map(|c| hybrid_smoothness_test(c, 1, &b()).unwrap())
        .collect();
    assert_eq!(verdicts, vec![true, true, false]);
}

#[test]
fn empty_chart_is_smooth() {
    let r = ring(&["x"]);
    let t = affine(&r, &["x", "x - 1"]);
    assert_eq!(chart_codimension(&t, &b()).unwrap(), ChartStatus::Empty);
    assert!(hybrid_smoothness_test(&t, 0, &b()).unwrap());
    let sat = saturate(t.i_x(), t.q(), &b()).unwrap();
    assert!(sat.is_unit(&b()).unwrap());
}

#[test]
fn triple_invariants_are_checked() {
    let r = ring(&["x", "y"]);
    let w = Ideal::new(&r, polys(&r, &["x"])).unwrap();
    let x = Ideal::new(&r, polys(&r, &["y", "x"])).unwrap();
    assert!(ChartTriple::new(w.clone(), x, Poly::one(&r), 0).is_err());
    let x = Ideal::new(&r, polys(&r, &["x", "y"])).unwrap();
    assert!(ChartTriple::new(w.clone(), x.clone(), Poly::zero(&r), 0).is_err());
    assert!(ChartTriple::new(w, x, Poly::one(&r), 0).is_ok());
}
