//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qgraph::adjacency::{
    self, axiom_report, complement, complete_adjacency, empty_adjacency, from_classical,
    to_classical, AdjacencyOp, ClassicalGraph, ComplementMode,
};
use qgraph::algebra::{make_context, AlgebraElement, BlockAlgebra, GnsContext};
use qgraph::channels;
use qgraph::choi::{self, LinearMap};
use qgraph::correspondence::{
    self, adjacency_to_bimodule, bimodule_to_adjacency, bimodule_to_projection, classify_m2,
    generate_bimodule, psi_inv, psi_map, tracial_reduce, Bimodule, Representation,
};
use qgraph::linalg::{self, cr, spectral_norm, CMat, CVec};
use qgraph::sample;
use qgraph::symmetry::{
    classical_certificate, corep_check, is_graph_automorphism, AutoCandidate,
};

fn conclude(number: u8, name: &str, pass: bool) {
    println!(
        "acceptance {:>2} {:.<52} {}",
        number,
        name,
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {number} ({name}) failed");
}

/// All reflexive undirected graphs on `n` vertices (loops at every vertex,
/// each non-loop pair free).
fn reflexive_graphs(n: usize) -> Vec<ClassicalGraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, v)).collect();
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                edges.push((u, v));
                edges.push((v, u));
            }
        }
        out.push(ClassicalGraph::new(n, edges).unwrap());
    }
    out
}

#[test]
fn criterion_01_classical_soundness() {
    let started = Instant::now();
    let mut pass = true;
    for n in [3usize, 4] {
        let graphs = reflexive_graphs(n);
        assert_eq!(graphs.len(), if n == 3 { 8 } else { 64 });
        for g in graphs {
            let (ctx, a) = from_classical(&g).unwrap();
            let report = axiom_report(&ctx, &a).unwrap();
            pass &= report.axiom(1) && report.axiom(2) && report.axiom(3);

            let rep = Representation::gns(&ctx);
            let s = adjacency_to_bimodule(&ctx, &a, &rep).unwrap();
            let units: Vec<CMat> = g
                .edges
                .iter()
                .map(|&(u, v)| {
                    let mut m = linalg::zeros(n, n);
                    m[(u, v)] = cr(1.0);
                    m
                })
                .collect();
            let expected = Bimodule::from_span(rep.clone(), &units, 1e-12);
            pass &= s.distance(&expected) <= 1e-9;

            pass &= to_classical(&ctx, &a).unwrap() == g;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    pass &= elapsed < 10.0;
    conclude(1, "classical soundness (exhaustive, <10s)", pass);
}

fn acceptance_algebras() -> Vec<Vec<usize>> {
    vec![vec![1, 1, 1], vec![2], vec![1, 2], vec![2, 2]]
}

#[test]
fn criterion_02_three_picture_roundtrip() {
    let mut pass = true;
    for (ai, dims) in acceptance_algebras().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + ai as u64);
        for _trial in 0..100 {
            let ctx = sample::random_context(&mut rng, &dims, true);
            let a = sample::random_quantum_graph(&mut rng, &ctx, false);
            let e = psi_map(&ctx, &a, 0.5, 0.0, true).unwrap();
            let s = correspondence::projection_to_bimodule(&ctx, &e).unwrap();
            let e_back = bimodule_to_projection(&ctx, &s).unwrap();
            let a_back = psi_inv(&ctx, &e_back, 0.5, 0.0, true).unwrap();
            let err = spectral_norm(&(&a_back.matrix - &a.matrix));
            if err > 1e-8 {
                pass = false;
            }
        }
    }
    conclude(2, "three-picture round-trip (400 random graphs)", pass);
}

#[test]
fn criterion_03_modular_commutation() {
    let mut pass = true;
    for (ai, dims) in acceptance_algebras().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + ai as u64);
        for _trial in 0..100 {
            let ctx = sample::random_context(&mut rng, &dims, true);
            let a = sample::random_quantum_graph(&mut rng, &ctx, false);
            let md = ctx.modular_data();
            let nabla = md.nabla_pow(cr(1.0));
            let nabla_comm = spectral_norm(&(&a.matrix * &nabla - &nabla * &a.matrix));
            // A J = J A for antilinear J is the matrix identity A K = K Ā.
            let k = &md.conjugation().k;
            let j_comm = spectral_norm(&(&a.matrix * k - k * a.matrix.map(|z| z.conj())));
            if nabla_comm > 1e-8 || j_comm > 1e-8 {
                pass = false;
            }
        }
    }
    conclude(3, "modular commutation ‖A∇-∇A‖, ‖AJ-JA‖ ≤ 1e-8", pass);
}

#[test]
fn criterion_04_m2_classification() {
    let mut pass = true;
    for q in [0.3, 0.5, 0.9] {
        let cls = classify_m2(q).unwrap();
        let dims: Vec<usize> = cls.graphs.iter().map(|g| g.dim()).collect();
        pass &= dims == vec![1, 2, 3, 4];
        let ctx = &cls.context;
        let [s1, s2b, s2a, s3] = [&cls.graphs[0], &cls.graphs[1], &cls.graphs[2], &cls.graphs[3]];
        // complement exchanges S1 <-> S3 and S2A <-> S2B
        pass &= correspondence::bimodule_complement(ctx, s1).distance(s3) <= 1e-8;
        pass &= correspondence::bimodule_complement(ctx, s3).distance(s1) <= 1e-8;
        pass &= correspondence::bimodule_complement(ctx, s2a).distance(s2b) <= 1e-8;
        pass &= correspondence::bimodule_complement(ctx, s2b).distance(s2a) <= 1e-8;
        // tracial reduction: (S1)0 = C·1, (S2A)0 = span{1, e12, e21}
        let one_span = Bimodule::from_span(cls.rep.clone(), &[linalg::identity(2)], 1e-12);
        pass &= tracial_reduce(ctx, s1).unwrap().distance(&one_span) <= 1e-8;
        let mut e12 = linalg::zeros(2, 2);
        e12[(0, 1)] = cr(1.0);
        let mut e21 = linalg::zeros(2, 2);
        e21[(1, 0)] = cr(1.0);
        let expected =
            Bimodule::from_span(cls.rep.clone(), &[linalg::identity(2), e12, e21], 1e-12);
        pass &= tracial_reduce(ctx, s2a).unwrap().distance(&expected) <= 1e-8;
    }
    conclude(4, "M2 classification at q in {0.3, 0.5, 0.9}", pass);
}

#[test]
fn criterion_05_standard_examples() {
    let mut pass = true;
    for (ai, dims) in acceptance_algebras().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(700 + ai as u64);
        let ctx = sample::random_context(&mut rng, &dims, true);
        let rep = Representation::gns(&ctx);
        let h = rep.h_dim();

        let s_empty = adjacency_to_bimodule(&ctx, &empty_adjacency(&ctx), &rep).unwrap();
        let expected_empty =
            generate_bimodule(&rep, &[rep.pi(&ctx.q_power(-0.5))], ctx.tol());
        pass &= s_empty.distance(&expected_empty) <= 1e-8;

        let s_complete = adjacency_to_bimodule(&ctx, &complete_adjacency(&ctx), &rep).unwrap();
        pass &= s_complete.dim() == h * h;
    }
    conclude(5, "empty = B'Q^{-1/2}B', complete = B(H)", pass);
}

#[test]
fn criterion_06_choi_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(1100);
    let alg = BlockAlgebra::new(vec![2]).unwrap();
    let ctx = make_context(vec![2], alg.one().scale(cr(0.5)), true).unwrap();

    let textbook_choi = |f: &LinearMap| -> CMat {
        let mut out = linalg::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                let unit = ctx.algebra().matrix_unit(0, i, j);
                let img = f.apply(&unit).unwrap();
                let mut e_ij = linalg::zeros(2, 2);
                e_ij[(i, j)] = cr(1.0);
                out += linalg::kron(&e_ij, &img.blocks[0]);
            }
        }
        out
    };

    let mut pass = true;
    let mut checked = 0usize;
    while checked < 100 {
        let images: Vec<AlgebraElement> = (0..4)
            .map(|_| sample::random_element(&mut rng, ctx.algebra()))
            .collect();
        let f = LinearMap::from_images(ctx.clone(), ctx.algebra().clone(), &images).unwrap();
        let tb = textbook_choi(&f);
        let herm = spectral_norm(&(&tb - tb.adjoint())) <= 1e-9;
        let (vals, _) = linalg::herm_eig(&tb);
        if herm && vals[0].abs() <= 1e-7 {
            continue; // borderline instance; regenerate
        }
        let oracle = herm && vals[0] > 0.0;
        if choi::is_cp(&f) != oracle {
            pass = false;
        }
        checked += 1;
    }

    // the transpose map is rejected
    let transpose_images: Vec<AlgebraElement> = ctx
        .basis_indices()
        .iter()
        .map(|&idx| {
            let g = ctx.gns_basis_element(idx);
            AlgebraElement { blocks: vec![g.blocks[0].transpose()] }
        })
        .collect();
    let transpose =
        LinearMap::from_images(ctx.clone(), ctx.algebra().clone(), &transpose_images).unwrap();
    pass &= !choi::is_cp(&transpose);

    conclude(6, "Choi positivity matches the textbook oracle", pass);
}

#[test]
fn criterion_07_super_operator_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(1300);
    let mut pass = true;
    let mut count = 0usize;

    // (a) engineered side (1)/(2): f a random projection in B ⊗ B^op
    for _ in 0..40 {
        let dims: &[usize] = if count % 2 == 0 { &[2] } else { &[1, 2] };
        let ctx = sample::random_context(&mut rng, dims, true);
        let rep = Representation::gns(&ctx);
        let coeffs = sample::random_matrix(&mut rng, ctx.dim(), ctx.dim());
        let x = correspondence::opp_from_coeffs(&ctx, &rep, &coeffs);
        let x = (&x + x.adjoint()).unscale(2.0);
        let (vals, vecs) = linalg::herm_eig(&x);
        let sel: Vec<CVec> = vals
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v > 0.0)
            .map(|(i, _)| CVec::from_column_slice(vecs.column(i).as_slice()))
            .collect();
        let f_proj = correspondence::OppTensor::from_matrix_unchecked(
            &ctx,
            rep.clone(),
            linalg::projector_onto(&sel),
        );
        let a = psi_inv(&ctx, &f_proj, 0.0, 0.5, true).unwrap();
        let f_map = LinearMap::from_adjacency(&ctx, &a).unwrap();
        match choi::super_operator_report(&ctx, &f_map) {
            Ok(rpt) => {
                pass &= rpt.cp && rpt.schur_idempotent && rpt.real && rpt.axiom1;
            }
            Err(_) => pass = false,
        }
        count += 1;
    }

    // (b) engineered side (3)/(4): genuine quantum graphs
    for _ in 0..30 {
        let ctx = sample::random_context(&mut rng, &[2], true);
        let a = sample::random_quantum_graph(&mut rng, &ctx, count % 2 == 0);
        let f_map = LinearMap::from_adjacency(&ctx, &a).unwrap();
        match choi::super_operator_report(&ctx, &f_map) {
            Ok(rpt) => {
                pass &= rpt.selfadjoint && rpt.axiom1 && rpt.axiom2 && rpt.cp;
            }
            Err(_) => pass = false,
        }
        count += 1;
    }

    // (c) random CP maps from Kraus pairs (typically not idempotent)
    for _ in 0..30 {
        let ctx = sample::random_context(&mut rng, &[2], true);
        let k1 = sample::random_matrix(&mut rng, 2, 2);
        let k2 = sample::random_matrix(&mut rng, 2, 2);
        let images: Vec<AlgebraElement> = ctx
            .basis_indices()
            .iter()
            .map(|&idx| {
                let g = &ctx.gns_basis_element(idx).blocks[0];
                AlgebraElement {
                    blocks: vec![k1.adjoint() * g * &k1 + k2.adjoint() * g * &k2],
                }
            })
            .collect();
        let f_map =
            LinearMap::from_images(ctx.clone(), ctx.algebra().clone(), &images).unwrap();
        if choi::super_operator_report(&ctx, &f_map).is_err() {
            pass = false;
        }
        count += 1;
    }

    pass &= count == 100;
    conclude(7, "super-operator equivalences, zero violations", pass);
}

#[test]
fn criterion_08_channel_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(1700);
    let mut pass = true;
    for trial in 0..50 {
        let num_ops = 2 + (trial % 2);
        let theta = sample::random_ucp_kraus(&mut rng, 2, 2, num_ops);
        let s = channels::confusability(&theta, 1e-10).unwrap();

        // equals span{E_k* E_l}
        let mut span = Vec::new();
        for ek in &theta.kraus {
            for el in &theta.kraus {
                span.push(ek.adjoint() * el);
            }
        }
        let direct = Bimodule::from_span(theta.target.clone(), &span, 1e-10);
        pass &= s.distance(&direct) <= 1e-8;

        // zero padding
        let mut padded = theta.kraus.clone();
        padded.push(linalg::zeros(2, 2));
        let theta_pad =
            channels::KrausMap::new(theta.source.clone(), theta.target.clone(), padded, 1e-9)
                .unwrap();
        pass &= s
            .distance(&channels::confusability(&theta_pad, 1e-10).unwrap())
            <= 1e-8;

        // environment rotation E_k ↦ Σ_l u_{kl} E_l
        let u = sample::random_unitary(&mut rng, theta.kraus.len());
        let rotated: Vec<CMat> = (0..theta.kraus.len())
            .map(|k| {
                let mut out = linalg::zeros(2, 2);
                for (l, el) in theta.kraus.iter().enumerate() {
                    out += el.map(|z| z * u[(k, l)]);
                }
                out
            })
            .collect();
        let theta_rot =
            channels::KrausMap::new(theta.source.clone(), theta.target.clone(), rotated, 1e-9)
                .unwrap();
        pass &= s
            .distance(&channels::confusability(&theta_rot, 1e-10).unwrap())
            <= 1e-8;

        // pullback of the trivial graph C' equals the confusability graph
        let trivial = Bimodule::from_span(
            theta.source.clone(),
            &theta.source.commutant_basis(),
            1e-10,
        );
        let pulled = channels::pullback(&theta, &trivial, 1e-10).unwrap();
        pass &= s.distance(&pulled) <= 1e-8;
    }
    conclude(8, "confusability invariance + trivial pullback", pass);
}

#[test]
fn criterion_09_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(1900);
    let trace = |rep: &Representation| {
        let alg = BlockAlgebra::new(rep.block_dims.clone()).unwrap();
        qgraph::algebra::FaithfulFunctional { q: alg.one(), normalized: false }
    };
    let mut pass = true;
    for trial in 0..50 {
        // generic UCP channels for the duality identity
        let theta = sample::random_ucp_kraus(&mut rng, 2, 2, 2 + (trial % 2));
        let psi1 = trace(&theta.target);
        let psi2 = trace(&theta.source);
        let hat = channels::cp_adjoint(&theta, &psi1, &psi2, 1e-9).unwrap();
        for _ in 0..50 {
            let a = sample::random_matrix(&mut rng, 2, 2);
            let b = sample::random_matrix(&mut rng, 2, 2);
            let lhs: Complex64 = (&a * theta.apply(&b)).trace();
            let rhs: Complex64 = (hat.apply(&a) * &b).trace();
            if (lhs - rhs).norm() > 1e-10 {
                pass = false;
            }
        }

        // trace-preserving (mixed unitary) channels: θ̂ is unital and the
        // pushforward equals the pullback along the adjoint
        let theta_mu = sample::random_mixed_unitary(&mut rng, 2, 2 + (trial % 2));
        let hat_mu = channels::cp_adjoint(&theta_mu, &psi1, &psi2, 1e-9).unwrap();
        let s1 = channels::confusability(&theta_mu, 1e-10).unwrap();
        let pushed = channels::pushforward(&theta_mu, &s1, 1e-10).unwrap();
        let pulled = channels::pullback(&hat_mu, &s1, 1e-10).unwrap();
        pass &= pushed.distance(&pulled) <= 1e-8;
    }
    conclude(9, "cp_adjoint duality + pushforward = pullback(adjoint)", pass);
}

#[test]
fn criterion_10_counterexample_reproduction() {
    let t = 0.3;
    let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
    let mut qel = alg.zero();
    qel.blocks[0][(0, 0)] = cr(t);
    qel.blocks[0][(1, 1)] = cr(1.0 - t);
    qel.blocks[1][(0, 0)] = cr(1.0 - t);
    qel.blocks[1][(1, 1)] = cr(t);
    let ctx = make_context(vec![2, 2], qel, false).unwrap();
    let rep = Representation::defining(&[2, 2]);
    let h = rep.h_dim();

    let mut x = linalg::zeros(h, h);
    x[(0, 3)] = cr(1.0);
    x[(1, 2)] = cr(1.0);
    let w = rep.pi(ctx.frame_unitary());
    let x = w.adjoint() * x * &w;
    let tspan = Bimodule::from_span(rep.clone(), &[x.clone(), x.adjoint()], 1e-12);

    let q = rep.pi(&ctx.q_power(1.0));
    let qinv = rep.pi(&ctx.q_power(-1.0));
    let conjugated = Bimodule::from_span(
        rep.clone(),
        &tspan.basis.iter().map(|b| &q * b * &qinv).collect::<Vec<_>>(),
        1e-12,
    );
    let invariance = tspan.distance(&conjugated);

    let mut span = tspan.basis.clone();
    span.extend(rep.commutant_basis());
    let t_plus_comm = Bimodule::from_span(rep, &span, 1e-12);
    let residual = t_plus_comm.residual(&(&q * &x));

    let pass = invariance <= 1e-10 && residual > 0.1;
    conclude(10, "M2+M2 counterexample: QTQ^{-1}=T, Qx far from T+B'", pass);
}

#[test]
fn criterion_11_symmetry() {
    let mut pass = true;

    // K3 with counting measure: the S3 certificate passes everything,
    // including commutation with the complete graph.
    let mut k3_edges = Vec::new();
    for u in 0..3 {
        for v in 0..3 {
            if u != v {
                k3_edges.push((u, v));
            }
        }
    }
    let k3 = ClassicalGraph::new(3, k3_edges).unwrap();
    let (ctx3, _) = from_classical(&k3).unwrap();
    let s3_cert = classical_certificate(&k3).unwrap();
    pass &= s3_cert.symmetry_algebra.num_blocks() == 6;
    let complete = complete_adjacency(&ctx3);
    let rpt = corep_check(&ctx3, &s3_cert, Some(&complete)).unwrap();
    pass &= rpt.all_coaction_relations() && rpt.commutes_with_adjacency == Some(true);

    // against the 3-path with loops: commutation fails, while the 2-element
    // subgroup certificate passes.
    let path = ClassicalGraph::new(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)])
        .unwrap();
    let (ctx_p, a_p) = from_classical(&path).unwrap();
    let rpt_s3 = corep_check(&ctx_p, &s3_cert, Some(&a_p)).unwrap();
    pass &= rpt_s3.all_coaction_relations() && rpt_s3.commutes_with_adjacency == Some(false);
    let sub = classical_certificate(&path).unwrap();
    pass &= sub.symmetry_algebra.num_blocks() == 2;
    let rpt_sub = corep_check(&ctx_p, &sub, Some(&a_p)).unwrap();
    pass &= rpt_sub.all_coaction_relations() && rpt_sub.commutes_with_adjacency == Some(true);

    // 200 random (θ, A) pairs: the commutation and fixed-point criteria of
    // is_graph_automorphism never disagree (a disagreement raises
    // VerdictMismatch).
    let mut rng = ChaCha8Rng::seed_from_u64(2300);
    let mut pairs = 0usize;
    while pairs < 200 {
        let (ctx, th, a): (GnsContext, AutoCandidate, AdjacencyOp) = match pairs % 4 {
            0 => {
                // classical counting measure with a random permutation
                let n = 3 + pairs % 2;
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u..n {
                        if u == v || rng.gen_bool(0.5) {
                            edges.push((u, v));
                            edges.push((v, u));
                        }
                    }
                }
                let g = ClassicalGraph::new(n, edges).unwrap();
                let (ctx, a) = from_classical(&g).unwrap();
                let mut perm: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    let j = rng.gen_range(0..=i);
                    perm.swap(i, j);
                }
                let th = AutoCandidate::new(
                    ctx.algebra(),
                    perm,
                    vec![linalg::identity(1); n],
                    1e-9,
                )
                .unwrap();
                (ctx, th, a)
            }
            1 => {
                // tracial M2 with a random unitary
                let alg = BlockAlgebra::new(vec![2]).unwrap();
                let ctx = make_context(vec![2], alg.one().scale(cr(0.5)), true).unwrap();
                let u = sample::random_unitary(&mut rng, 2);
                let th = AutoCandidate::new(ctx.algebra(), vec![0], vec![u], 1e-9).unwrap();
                let a = sample::random_quantum_graph(&mut rng, &ctx, pairs % 8 < 4);
                (ctx, th, a)
            }
            2 => {
                // M2 ⊕ M2 with equal tracial blocks: swap + unitaries
                let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
                let ctx = make_context(vec![2, 2], alg.one().scale(cr(0.25)), true).unwrap();
                let th = AutoCandidate::new(
                    ctx.algebra(),
                    vec![1, 0],
                    vec![
                        sample::random_unitary(&mut rng, 2),
                        sample::random_unitary(&mut rng, 2),
                    ],
                    1e-9,
                )
                .unwrap();
                let a = if pairs % 8 < 4 {
                    complete_adjacency(&ctx)
                } else {
                    sample::random_quantum_graph(&mut rng, &ctx, false)
                };
                (ctx, th, a)
            }
            _ => {
                // Powers state on M2 with a diagonal phase unitary
                let qv = 0.6f64;
                let alg = BlockAlgebra::new(vec![2]).unwrap();
                let mut qel = alg.zero();
                qel.blocks[0][(0, 0)] = cr(1.0 / (1.0 + qv * qv));
                qel.blocks[0][(1, 1)] = cr(qv * qv / (1.0 + qv * qv));
                let ctx = make_context(vec![2], qel, true).unwrap();
                let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let mut u = linalg::identity(2);
                u[(1, 1)] = Complex64::from_polar(1.0, phase);
                let th = AutoCandidate::new(ctx.algebra(), vec![0], vec![u], 1e-9).unwrap();
                let a = sample::random_quantum_graph(&mut rng, &ctx, false);
                (ctx, th, a)
            }
        };
        match is_graph_automorphism(&ctx, &th, &a) {
            Ok(_) => {}
            Err(_) => pass = false, // VerdictMismatch would land here
        }
        pairs += 1;
    }

    conclude(11, "symmetry certificates and automorphism criteria", pass);
}

#[test]
fn criterion_12_complement_calculus() {
    let mut pass = true;
    for (ai, dims) in acceptance_algebras().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + ai as u64);
        for _trial in 0..25 {
            let ctx = sample::random_context(&mut rng, &dims, true);
            let a = sample::random_quantum_graph(&mut rng, &ctx, true);
            let report = axiom_report(&ctx, &a).unwrap();
            pass &= report.axiom(1) && report.axiom(2) && report.axiom(3);

            // complement is an involution mapping {1,2,3} into itself
            let c = complement(&ctx, &a, ComplementMode::Complement).unwrap();
            let c_report = axiom_report(&ctx, &c).unwrap();
            pass &= c_report.axiom(1) && c_report.axiom(2) && c_report.axiom(3);
            let back = complement(&ctx, &c, ComplementMode::Complement).unwrap();
            pass &= spectral_norm(&(&back.matrix - &a.matrix)) <= 1e-9;

            // delooping lands in {1,2,6}; ncomplement is an involution there
            let loopless = complement(&ctx, &a, ComplementMode::Deloop).unwrap();
            let l_report = axiom_report(&ctx, &loopless).unwrap();
            pass &= l_report.axiom(1) && l_report.axiom(2) && l_report.axiom(6);
            let nc = complement(&ctx, &loopless, ComplementMode::Ncomplement).unwrap();
            let nc_report = axiom_report(&ctx, &nc).unwrap();
            pass &= nc_report.axiom(1) && nc_report.axiom(2) && nc_report.axiom(6);
            let nc_back = complement(&ctx, &nc, ComplementMode::Ncomplement).unwrap();
            pass &= spectral_norm(&(&nc_back.matrix - &loopless.matrix)) <= 1e-9;
        }
    }
    conclude(12, "complement calculus on random quantum graphs", pass);
}

// Round-trip stability of every convert cycle is asserted at the library
// level; the bimodule route through a non-GNS representation exercises the
// transport path as well.
#[test]
fn convert_cycles_return_to_start() {
    let mut rng = ChaCha8Rng::seed_from_u64(31415);
    let ctx = sample::random_context(&mut rng, &[1, 2], true);
    let a = sample::random_quantum_graph(&mut rng, &ctx, true);
    for rep in [Representation::gns(&ctx), Representation::defining(ctx.algebra().block_dims())] {
        let s = adjacency_to_bimodule(&ctx, &a, &rep).unwrap();
        let a_back = bimodule_to_adjacency(&ctx, &s).unwrap();
        assert!(spectral_norm(&(&a_back.matrix - &a.matrix)) < 1e-8);
    }
    // adjacency-level complement transported to the bimodule level agrees
    // with the subspace formula S^⊥ + B'Q^{-1/2}B'
    let rep = Representation::gns(&ctx);
    let s = adjacency_to_bimodule(&ctx, &a, &rep).unwrap();
    let c = complement(&ctx, &a, ComplementMode::Complement).unwrap();
    let s_c = adjacency_to_bimodule(&ctx, &c, &rep).unwrap();
    let s_c_direct = correspondence::bimodule_complement(&ctx, &s);
    assert!(s_c.distance(&s_c_direct) < 1e-8);
}

/// Seed sweep over the full three-picture pipeline; run with
/// `cargo test --test acceptance -- --ignored` when touching the numerics.
#[test]
#[ignore]
fn stress_three_picture_roundtrip_many_seeds() {
    for seed in 0..40u64 {
        for dims in acceptance_algebras() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ctx = sample::random_context(&mut rng, &dims, true);
            for with_loops in [false, true] {
                let a = sample::random_quantum_graph(&mut rng, &ctx, with_loops);
                let report = axiom_report(&ctx, &a).unwrap();
                assert!(
                    report.is_quantum_graph(),
                    "seed {seed} dims {dims:?}: {:?}",
                    report.residuals
                );
                if with_loops {
                    // loops are only guaranteed, not excluded, by the flag
                    assert!(report.axiom(3), "seed {seed} dims {dims:?}");
                }
                let e = psi_map(&ctx, &a, 0.5, 0.0, true).unwrap();
                let s = correspondence::projection_to_bimodule(&ctx, &e).unwrap();
                let back =
                    psi_inv(&ctx, &bimodule_to_projection(&ctx, &s).unwrap(), 0.5, 0.0, true)
                        .unwrap();
                let err = spectral_norm(&(&back.matrix - &a.matrix));
                assert!(err <= 1e-8, "seed {seed} dims {dims:?}: {err:.3e}");
            }
        }
    }
}

#[test]
fn to_classical_of_quantum_context_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(27182);
    let ctx = sample::random_context(&mut rng, &[2], true);
    let a = complete_adjacency(&ctx);
    assert!(matches!(
        to_classical(&ctx, &a),
        Err(qgraph::Error::NotClassicalContext)
    ));
}

#[test]
fn loop_modes_match_axiom_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(16180);
    let ctx = sample::random_context(&mut rng, &[1, 2], true);
    for with_loops in [true, false] {
        let a = sample::random_quantum_graph(&mut rng, &ctx, with_loops);
        let report = axiom_report(&ctx, &a).unwrap();
        let e = psi_map(&ctx, &a, 0.5, 0.0, true).unwrap();
        let all = correspondence::loop_check(&ctx, &e, correspondence::LoopMode::AllLoops)
            .unwrap();
        assert_eq!(all, report.axiom(3));
        assert_eq!(all, report.axiom(5));
    }
    // adjacency module: from a reflexive graph, adding loops to its deloop
    // restores it
    let a = sample::random_quantum_graph(&mut rng, &ctx, true);
    let deloop = adjacency::complement(&ctx, &a, ComplementMode::Deloop).unwrap();
    let again = adjacency::complement(&ctx, &deloop, ComplementMode::AddLoops).unwrap();
    assert!(spectral_norm(&(&again.matrix - &a.matrix)) < 1e-10);
}
