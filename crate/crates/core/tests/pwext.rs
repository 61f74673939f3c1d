use pwlab_core::fixtures::{cotton_n2, curved_n3, e2, e3, flat, nonspecial_n2};
use pwlab_core::projective::{curvature, special_part, AffineConnection};
use pwlab_core::pwext::*;
use pwlab_core::symcore::{parse_field, Base, Rsf, Slot, TensorField};
use pwlab_core::Error;

fn f(s: &str, n: usize) -> Rsf {
    parse_field(s, n).unwrap()
}

fn all_fixtures() -> Vec<AffineConnection> {
    vec![flat(2), flat(3), e2(), e3(), cotton_n2(), curved_n3()]
}

/// Brute-force frame data: brackets of the frame vector fields computed as
/// coordinate vector fields, then expanded back in the frame.
struct FrameOracle {
    n: usize,
    dim: usize,
    /// `c[a][b][e]`: `[e_a, e_b] = c[a][b][e] e_e`.
    c: Vec<Vec<Vec<Rsf>>>,
    /// `omega[a][b][c]`: `D_{e_a} e_c = omega[a][b][c] e_b`.
    omega: Vec<Vec<Vec<Rsf>>>,
    /// `g(e_b, D_{e_a} e_c)`.
    gamma: Vec<Vec<Vec<Rsf>>>,
}

fn g_frame(n: usize, a: usize, b: usize) -> i64 {
    ((a < n && b == a + n) || (b < n && a == b + n)) as i64
}

fn partner(n: usize, a: usize) -> usize {
    if a < n {
        a + n
    } else {
        a - n
    }
}

impl FrameOracle {
    fn new(pw: &PWGeometry) -> FrameOracle {
        let n = pw.n();
        let dim = 2 * n;
        let fr = pw.frame();
        let cof = pw.coframe();
        let bracket = |a: usize, b: usize| -> Vec<Rsf> {
            let coord: Vec<Rsf> = (0..dim)
                .map(|k| {
                    (0..dim)
                        .map(|i| {
                            fr.get(&[a, i]) * fr.get(&[b, k]).partial(coord_var(n, i))
                                - fr.get(&[b, i]) * fr.get(&[a, k]).partial(coord_var(n, i))
                        })
                        .sum()
                })
                .collect();
            (0..dim).map(|e| (0..dim).map(|k| cof.get(&[e, k]) * &coord[k]).sum()).collect()
        };
        let c: Vec<Vec<Vec<Rsf>>> = (0..dim).map(|a| (0..dim).map(|b| bracket(a, b)).collect()).collect();
        // c_low[a][b][z] = g([e_a, e_b], e_z)
        let low = |a: usize, b: usize, z: usize| c[a][b][partner(n, z)].clone();
        let gamma: Vec<Vec<Vec<Rsf>>> = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| {
                        (0..dim)
                            .map(|cc| (low(a, cc, b) - low(cc, b, a) + low(b, a, cc)).scale(&pwlab_core::symcore::q(1, 2)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let omega = (0..dim)
            .map(|a| (0..dim).map(|b| (0..dim).map(|cc| gamma[a][partner(n, b)][cc].clone()).collect()).collect())
            .collect();
        FrameOracle { n, dim, c, omega, gamma }
    }

    fn christoffels(&self) -> TensorField {
        TensorField::from_fn(Base::Mt, vec![Slot::down_t(self.n); 3], |i| self.gamma[i[0]][i[1]][i[2]].clone())
    }

    /// Lowered frame Riemann tensor `g(e_c, R(e_a, e_b) e_d)`.
    #[allow(clippy::needless_range_loop)]
    fn riemann(&self, pw: &PWGeometry) -> TensorField {
        let dim = self.dim;
        let w = &self.omega;
        TensorField::from_fn(Base::Mt, vec![Slot::down_t(self.n); 4], |i| {
            let (a, b, c_low, d) = (i[0], i[1], i[2], i[3]);
            let c = partner(self.n, c_low);
            let mut acc = pw.apply_frame(a, &w[b][c][d]) - pw.apply_frame(b, &w[a][c][d]);
            for e in 0..dim {
                acc = acc + &w[a][c][e] * &w[b][e][d] - &w[b][c][e] * &w[a][e][d] - &self.c[a][b][e] * &w[e][c][d];
            }
            acc
        })
    }
}

#[test]
fn build_examples() {
    let pw = build(&flat(2)).unwrap();
    assert_eq!(pw.metric().residual_string(), "[1,3]=1; [2,4]=1; [3,1]=1; [4,2]=1");
    let pw = build(&e2()).unwrap();
    assert_eq!(pw.metric().get(&[0, 0]), &f("-2*x2*p2", 2));
    assert_eq!(pw.metric().residual_string(), "[1,1]=-2*x2*p2; [1,3]=1; [2,4]=1; [3,1]=1; [4,2]=1");
    let pw = build(&e3()).unwrap();
    assert_eq!(pw.metric().get(&[0, 0]), &f("-2*x3*p2", 3));
}

#[test]
fn build_rejects_trace() {
    let err = build(&nonspecial_n2()).unwrap_err();
    match err {
        Error::NotSpecial(msg) => assert!(msg.contains("special_part")),
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn frame_is_null_and_paired() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        let gf = pw.to_frame(pw.metric()).unwrap();
        let dim = pw.dim();
        for a in 0..dim {
            for b in 0..dim {
                assert_eq!(gf.get(&[a, b]), &Rsf::int(g_frame(pw.n(), a, b)));
            }
        }
        let prod = pw.metric().outer(pw.inverse_metric()).contract(1, 2).unwrap();
        assert_eq!(prod, TensorField::delta(Base::Mt, Slot::down_t(pw.n())));
        assert_eq!(pw.from_frame(&gf).unwrap(), *pw.metric());
    }
}

#[test]
fn commutators_match_connection_data() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        let n = pw.n();
        let o = FrameOracle::new(&pw);
        let r = curvature(&d).unwrap().riemann;
        for a in 0..2 * n {
            for b in 0..2 * n {
                for e in 0..2 * n {
                    let expect = match (a < n, b < n, e < n) {
                        // [v^A, h_B] = Gamma_B^A_C v^C
                        (false, true, false) => d.g(b, a - n, e - n).clone(),
                        (true, false, false) => -d.g(a, b - n, e - n),
                        // [h_A, h_B] = R_AB^C_D p_C v^D
                        (true, true, false) => (0..n).map(|c| r.get(&[a, b, c, e - n]) * Rsf::p(c + 1)).sum(),
                        _ => Rsf::zero(),
                    };
                    assert_eq!(o.c[a][b][e], expect, "[{a},{b}] along {e}");
                }
            }
        }
    }
}

#[test]
fn frame_christoffels_match_koszul() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        let oracle = FrameOracle::new(&pw).christoffels();
        let closed = frame_christoffels(&pw).unwrap();
        assert_eq!(closed, oracle, "closed form vs Koszul\n{}", closed.sub(&oracle).unwrap().residual_string());
        assert_eq!(frame_christoffels_intrinsic(&pw), oracle);
    }
}

#[test]
fn frame_christoffels_examples() {
    assert!(frame_christoffels(&build(&flat(3)).unwrap()).unwrap().is_zero());
    let g = frame_christoffels(&build(&e2()).unwrap()).unwrap();
    // h_1, v^2, h_1 -> Gamma_1^2_1 = x2; h_1, h_1, v^2 -> -x2; h-h-h -> R_BC^D_A p_D
    assert_eq!(g.residual_string(), "[1,1,2]=-p2; [1,1,4]=-x2; [1,2,1]=p2; [1,4,1]=x2");
}

#[test]
fn riemann_matches_oracle() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        let oracle = FrameOracle::new(&pw).riemann(&pw);
        let intrinsic = pw.to_frame(&pw.curvature().riemann_lowered).unwrap();
        assert_eq!(intrinsic, oracle);
        let closed = riemann_closed(&pw).unwrap();
        assert_eq!(closed, oracle, "{}", closed.sub(&oracle).unwrap().residual_string());
    }
}

#[test]
fn dictionary_agrees_on_fixtures() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        let dict = curvature_dictionary(&pw).unwrap();
        for e in dict.entries() {
            assert!(e.agrees(), "{} differs: {}", e.name, e.difference().residual_string());
        }
    }
}

#[test]
fn printed_weyl_block_sign() {
    // the printed placement flips the hv block; it disagrees wherever W is nonzero
    let pw = build(&e3()).unwrap();
    let printed = weyl_closed(&pw, WeylBlockSign::Printed).unwrap();
    let intrinsic = pw.to_frame(&pw.curvature().weyl).unwrap();
    assert_ne!(printed, intrinsic);
    let pw = build(&flat(2)).unwrap();
    assert!(weyl_closed(&pw, WeylBlockSign::Printed).unwrap().is_zero());
}

#[test]
fn dictionary_examples() {
    let dict = curvature_dictionary(&build(&flat(2)).unwrap()).unwrap();
    assert!(dict.entries().iter().all(|e| e.intrinsic.is_zero()));
    let dict = curvature_dictionary(&build(&e2()).unwrap()).unwrap();
    assert_eq!(dict.schouten.intrinsic.residual_string(), "[1,1]=1");
    // E2 has vanishing Cotton tensor, so the conformal Weyl tensor vanishes too
    assert!(dict.weyl.intrinsic.is_zero());
    let dict = curvature_dictionary(&build(&cotton_n2()).unwrap()).unwrap();
    assert!(!dict.weyl.intrinsic.is_zero());
    assert!(!dict.cotton.intrinsic.is_zero());
    let dict = curvature_dictionary(&build(&e3()).unwrap()).unwrap();
    assert!(dict.schouten.intrinsic.is_zero());
    assert!(!dict.weyl.intrinsic.is_zero());
}

#[test]
fn intrinsic_weyl_is_trace_free() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        let w = pw.curvature().weyl.clone();
        let raised = pw.raise(&w, 0).unwrap();
        assert!(raised.contract(0, 2).unwrap().is_zero());
        assert!(raised.contract(0, 3).unwrap().is_zero());
    }
}

#[test]
fn walker_and_weyl_vertical_conditions() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        assert!(walker_condition(&pw).unwrap());
        assert!(weyl_vertical_condition(&pw).unwrap());
    }
}

#[test]
fn einstein_only_if_ricci_flat() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        let (pure, zero) = einstein_implies_ricci_flat(&pw);
        assert_eq!(pure, zero);
        assert_eq!(pw.curvature().scalar, Rsf::zero());
    }
}

#[test]
fn k_and_mu() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        let rep = k_properties(&pw).unwrap();
        assert!(rep.all_zero(), "{rep:?}");
        assert_eq!(k_form(&pw).residual_string(), (1..=pw.n()).map(|a| format!("[{a}]=2*p{a}")).collect::<Vec<_>>().join("; "));
    }
}

#[test]
fn conformal_covariance_examples() {
    let s = f("x1^2 + x2^2 + 1", 2);
    for w in [-1, 0, 1, 2, 3] {
        for d in [flat(2), e2(), cotton_n2()] {
            let rep = conformal_covariance_check(&d, &s, w).unwrap();
            assert!(rep.difference.is_zero());
            assert_eq!(rep.equals_s2_g, w == 2);
            assert!(rep.holds());
        }
        let rep = conformal_covariance_check(&e2(), &Rsf::one(), w).unwrap();
        assert!(rep.equals_s2_g && rep.holds());
    }
    let s3 = f("x1*x3 + 2", 3);
    assert!(conformal_covariance_check(&e3(), &s3, 2).unwrap().holds());
}

#[test]
fn conformal_covariance_rejects_vanishing_scale() {
    assert!(conformal_covariance_check(&flat(2), &Rsf::zero(), 2).is_err());
    assert!(conformal_covariance_check(&flat(2), &f("x1", 2), 2).is_err());
    assert!(conformal_covariance_check(&flat(2), &f("p1 + 1", 2), 2).is_err());
}

#[test]
fn recover_round_trip() {
    for d in all_fixtures() {
        let pw = build(&d).unwrap();
        match recover_connection(&WalkerNormalForm::from_geometry(&pw)).unwrap() {
            Recovery::Connection(r) => assert_eq!(r.gamma(), d.gamma()),
            r => panic!("rejected {r:?}"),
        }
    }
}

fn theta11(n: usize, s: &str) -> WalkerNormalForm {
    let mut t = TensorField::zeros(Base::Mt, vec![Slot::down(n); 2]);
    t.set(&[0, 0], f(s, n));
    WalkerNormalForm::new(n, t).unwrap()
}

#[test]
fn recover_rejections() {
    let cond = |s: &str| match recover_connection(&theta11(2, s)).unwrap() {
        Recovery::Rejected { condition, .. } => Some(condition),
        Recovery::Connection(_) => None,
    };
    assert_eq!(cond("p1^2"), Some(WalkerCondition::Linearity));
    assert_eq!(cond("p1"), Some(WalkerCondition::Trace));
    assert_eq!(cond("x2 + p2"), Some(WalkerCondition::Homogeneity));
    assert_eq!(cond("x2*p2"), None);
    assert!(recover_connection(&theta11(2, "1/p1")).is_err());
}

#[test]
fn walker_normal_form_requires_symmetry() {
    let mut t = TensorField::zeros(Base::Mt, vec![Slot::down(2); 2]);
    t.set(&[0, 1], f("p1", 2));
    assert!(WalkerNormalForm::new(2, t).is_err());
}

#[test]
fn thomas_pw_examples() {
    for d in all_fixtures() {
        assert_eq!(thomas_pw(&d).unwrap(), build(&d).unwrap());
    }
    let d = nonspecial_n2();
    let (_, special) = special_part(&d).unwrap();
    assert_eq!(thomas_pw(&d).unwrap(), build(&special).unwrap());
    assert!(thomas_pw(&flat(3)).unwrap().metric().components().iter().all(|c| c.constant_value().is_some()));
}

#[test]
fn curvature_cache_is_shared() {
    let pw = build(&e3()).unwrap();
    let a = pw.curvature() as *const IntrinsicCurvature;
    let b = std::thread::scope(|s| s.spawn(|| pw.curvature() as *const IntrinsicCurvature as usize).join().unwrap());
    assert_eq!(a as usize, b);
}
