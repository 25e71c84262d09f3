use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snft::interference::{
    all_mode_lists, fourier_unitary, random_unitary, summed_immanant_modulus, ScatteringSetup,
};
use snft::partition::gamas_admissible;
use snft::perm::Permutation;
use snft::suppression::*;
use snft::Partition;

fn part(p: &[usize]) -> Partition {
    Partition::new(p.to_vec()).unwrap()
}

fn fourier(i: &[usize], o: &[usize], m: usize) -> ScatteringSetup {
    ScatteringSetup::new(fourier_unitary(m), i.to_vec(), o.to_vec()).unwrap()
}

fn statuses(a: &Analysis) -> Vec<(Partition, Status)> {
    a.verdicts
        .iter()
        .map(|v| (v.sector.clone(), v.status))
        .collect()
}

#[test]
fn weights_table_examples() {
    let an = Analyzer::new(2).unwrap();
    let w = sector_weights_table(&fourier(&[0, 1], &[0, 1], 2), &an).unwrap();
    assert!(w[&part(&[2])] < 1e-30);
    assert!(w[&part(&[1, 1])] > 0.1);
    let an6 = Analyzer::new(6).unwrap();
    let s = fourier(&[0, 0, 2, 2, 4, 4], &[0, 0, 0, 1, 3, 3], 6);
    let w = sector_weights_table(&s, &an6).unwrap();
    let max = w.values().copied().fold(0.0, f64::max);
    for (p, x) in &w {
        if *p == part(&[5, 1]) {
            assert!(*x > 1e-3 * max.max(1e-300));
        } else {
            assert!(*x < 1e-10 * max, "{p} {x:e}");
        }
    }
    let an3 = Analyzer::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s =
        ScatteringSetup::new(random_unitary(3, &mut rng), vec![0, 0, 1], vec![1, 2, 2]).unwrap();
    let w = sector_weights_table(&s, &an3).unwrap();
    assert!(w[&Partition::sign(3)] < 1e-28);
    assert!(w[&Partition::trivial(3)] > 1e-6);
}

#[test]
fn weights_equal_summed_immanants_for_distinct_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 2..=5 {
        let an = Analyzer::new(n).unwrap();
        let input: Vec<usize> = (0..n).collect();
        let output: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let s = ScatteringSetup::new(random_unitary(n, &mut rng), input, output).unwrap();
        let w = sector_weights_table(&s, &an).unwrap();
        let order: f64 = (1..=n).product::<usize>() as f64;
        for (p, x) in &w {
            let imm = summed_immanant_modulus(s.scattering_matrix(), p).unwrap();
            assert!((x - p.dimension() as f64 / order * imm).abs() < 1e-10);
        }
    }
}

#[test]
fn symmetry_examples() {
    let syms = find_state_symmetries(&[0, 1, 2, 3, 4, 5], 6);
    for p in 0..6 {
        assert!(syms
            .iter()
            .any(|s| s.kind == SymmetryKind::Translation && s.p == p));
    }
    let p1 = syms
        .iter()
        .find(|s| s.kind == SymmetryKind::Translation && s.p == 1)
        .unwrap();
    assert_eq!(p1.tau.cycle_type(), part(&[6]));
    for s in &syms {
        assert!(s.holds_for(&[0, 1, 2, 3, 4, 5], 6));
    }

    let syms = find_state_symmetries(&[0, 0, 2, 2, 4, 4], 6);
    let p2 = syms
        .iter()
        .find(|s| s.kind == SymmetryKind::Translation && s.p == 2)
        .unwrap();
    let paper = Permutation::parse("(1 3 6 2 4 5)", 6).unwrap();
    assert_eq!(p2.tau.cycle_type(), paper.cycle_type());

    let syms = find_state_symmetries(&[0, 0, 0, 1, 3, 5], 6);
    let refl = syms
        .iter()
        .find(|s| s.kind == SymmetryKind::Reflection && s.p == 0)
        .unwrap();
    assert_eq!(refl.tau, Permutation::parse("(4 6)", 6).unwrap());
    assert!(refl.holds_for(&[0, 0, 0, 1, 3, 5], 6));
}

#[test]
fn witness_cosets_cover_reference_classes() {
    // The reference lists τ' = (1 2)(3 4)(5 6) for p' = 3 on this output; the
    // canonical witness differs but the coset holds that class.
    let cosets = symmetry_cosets(&[0, 0, 1, 2, 3, 3], 6);
    let c = cosets
        .iter()
        .find(|c| c.symmetry.kind == SymmetryKind::Reflection && c.symmetry.p == 3)
        .unwrap();
    let classes: Vec<Partition> = c.classes.iter().map(Permutation::cycle_type).collect();
    assert!(classes.contains(&part(&[2, 2, 2])), "{classes:?}");
    for t in &c.classes {
        let sym = DihedralSymmetry {
            tau: t.clone(),
            ..c.symmetry.clone()
        };
        assert!(sym.holds_for(&[0, 0, 1, 2, 3, 3], 6));
    }
}

#[test]
fn symmetry_verdict_examples() {
    let an = Analyzer::new(6).unwrap();
    let input = [0, 1, 2, 3, 4, 5];
    let bosonic = Partition::trivial(6);
    let standard = Partition::standard(6);
    let mut saw_lambda_one = false;
    for o in all_mode_lists(6, 6).into_iter().step_by(7) {
        let s = fourier(&input, &o, 6);
        let v = symmetry_suppression_verdicts(&s, &an).unwrap();
        let sum: usize = o.iter().sum();
        let flagged = |p: &Partition| {
            v.iter()
                .any(|x| x.sector == *p && x.status == Status::SymmetrySuppressed)
        };
        if sum % 6 != 0 {
            assert!(flagged(&bosonic), "{o:?}");
        } else {
            assert!(flagged(&standard), "{o:?}");
            saw_lambda_one = true;
        }
        for x in &v {
            if x.status.is_suppressed() {
                let a = analyze(&s, &an).unwrap();
                assert!(x.weight < a.tolerance);
            }
        }
    }
    assert!(saw_lambda_one);
    let a = analyze(&fourier(&[0, 0, 0, 1, 3, 5], &[0, 0, 1, 2, 3, 3], 6), &an).unwrap();
    let v = a.verdict(&bosonic).unwrap();
    assert_eq!(v.status, Status::SymmetrySuppressed);
    match v.witness.as_ref().unwrap() {
        Witness::Symmetry { lambda, .. } => assert!(lambda.matches(&Phase::exact(1, 2))),
        w => panic!("unexpected witness {w}"),
    }
}

#[test]
fn pauli_like_examples() {
    let an = Analyzer::new(4).unwrap();
    let a = analyze(&fourier(&[0, 0, 2, 2], &[0, 0, 2, 2], 4), &an).unwrap();
    for (p, st) in statuses(&a) {
        assert_eq!(st.is_suppressed(), p != Partition::trivial(4), "{p} {st}");
    }
    let a = analyze(&fourier(&[0, 0, 2, 2], &[0, 0, 2, 1], 4), &an).unwrap();
    for (p, st) in statuses(&a) {
        if p != Partition::trivial(4) && p != Partition::standard(4) {
            assert!(st.is_suppressed(), "{p} {st}");
        }
    }
    let s = fourier(&[0, 0, 1, 3], &[0, 1, 2, 3], 4);
    let cands = default_candidates(&s, &an).unwrap();
    let v = pauli_like_verdicts(&s, &cands, &an).unwrap();
    let sign = v.iter().find(|x| x.sector == Partition::sign(4)).unwrap();
    assert!(sign.status.is_suppressed());
    assert!(matches!(
        sign.witness,
        Some(Witness::Subgroup { .. }) | Some(Witness::Pauli { .. })
    ));
}

#[test]
fn pauli_forbidden_cites_side() {
    let an = Analyzer::new(4).unwrap();
    let a = analyze(&fourier(&[0, 0, 1, 2], &[0, 1, 2, 3], 4), &an).unwrap();
    let v = a.verdict(&Partition::sign(4)).unwrap();
    assert_eq!(v.status, Status::PauliForbidden);
    assert_eq!(v.witness, Some(Witness::Pauli { side: Side::Input }));
    let a = analyze(&fourier(&[0, 1, 2, 3], &[1, 1, 1, 2], 4), &an).unwrap();
    let v = a.verdict(&part(&[2, 2])).unwrap();
    assert_eq!(v.status, Status::PauliForbidden);
    assert_eq!(v.witness, Some(Witness::Pauli { side: Side::Output }));
}

#[test]
fn phase_profile_examples() {
    let p = phase_profile(&fourier(&[0, 0, 0], &[1, 2, 0], 3)).unwrap();
    assert!(p.values().iter().all(|&k| k == 0));
    let p = phase_profile(&fourier(&[0, 1], &[0, 1], 2)).unwrap();
    assert_eq!(p.at(Permutation::identity(2).rank()), 1);
    assert_eq!(p.at(Permutation::parse("(1 2)", 2).unwrap().rank()), 0);
    let p = phase_profile(&fourier(&[0, 0, 0, 1, 3, 5], &[0, 0, 1, 2, 3, 3], 6)).unwrap();
    assert!(p.point_symmetric());
    let h = p.histogram();
    for k in 0..6 {
        assert_eq!(h[k], h[(k + 3) % 6]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s =
        ScatteringSetup::new(random_unitary(3, &mut rng), vec![0, 1, 2], vec![0, 1, 2]).unwrap();
    assert!(matches!(phase_profile(&s), Err(snft::Error::NotFourier)));
}

#[test]
fn cloud_multiplicities_sum_to_order() {
    let cloud = amplitude_cloud(&fourier(&[0, 0, 0, 1, 3, 5], &[0, 0, 1, 2, 3, 3], 6)).unwrap();
    assert_eq!(cloud.iter().map(|c| c.multiplicity).sum::<usize>(), 720);
    let total: f64 = cloud.iter().map(|c| c.re * c.multiplicity as f64).sum();
    let imag: f64 = cloud.iter().map(|c| c.im * c.multiplicity as f64).sum();
    assert!(total.abs() < 1e-12 && imag.abs() < 1e-12);
}

#[test]
fn cyclic_spectrum_facts() {
    for n in 2..=6 {
        let an = Analyzer::new(n).unwrap();
        let std = an.table().index_of(&Partition::standard(n)).unwrap();
        let cyc = an.spectrum(std, &Partition::trivial(n)).unwrap();
        assert!(!cyc.contains(&Phase::one()));
        for k in 1..n as i64 {
            assert!(cyc.contains(&Phase::exact(k, n as i64)));
        }
        for ct in snft::partition::partitions_of(n) {
            let sp = an.spectrum(std, &ct).unwrap();
            assert_eq!(sp.multiplicity(&Phase::one()), ct.len() - 1, "{ct}");
        }
    }
}

#[test]
fn scan_small_tables() {
    let an = Analyzer::new(2).unwrap();
    let t = scan(2, 2, &fourier_unitary(2), ScanOptions::default(), &an).unwrap();
    assert_eq!(t.rows.len(), 9);
    let hom = t
        .rows
        .iter()
        .find(|r| r.input == vec![0, 1] && r.output == vec![0, 1])
        .unwrap();
    assert!(hom
        .verdict(&Partition::trivial(2))
        .unwrap()
        .status
        .is_suppressed());
    assert_eq!(
        hom.verdict(&Partition::sign(2)).unwrap().status,
        Status::Allowed
    );
    let opts = ScanOptions {
        dedupe: Dedupe::Dihedral,
        allow_large: false,
    };
    let an3 = Analyzer::new(3).unwrap();
    let full = scan(3, 3, &fourier_unitary(3), ScanOptions::default(), &an3).unwrap();
    let dd = scan(3, 3, &fourier_unitary(3), opts, &an3).unwrap();
    assert_eq!(full.rows.len(), 100);
    assert_eq!(dd.rows.iter().map(|r| r.multiplicity).sum::<usize>(), 100);
    for r in &dd.rows {
        assert_eq!(
            canonical_pair(&r.input, &r.output, 3),
            (r.input.clone(), r.output.clone())
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    assert!(matches!(
        scan(2, 2, &random_unitary(2, &mut rng), opts, &an),
        Err(snft::Error::NotFourier)
    ));
    let an1 = Analyzer::new(1).unwrap();
    let big = ScanOptions {
        dedupe: Dedupe::None,
        allow_large: false,
    };
    assert!(matches!(
        scan(1, 9, &fourier_unitary(9), big, &an1),
        Err(snft::Error::ResourceGuard(_))
    ));
}

fn weights(i: &[usize], o: &[usize], m: usize, an: &Analyzer) -> Vec<f64> {
    sector_weights_table(&fourier(i, o, m), an)
        .unwrap()
        .into_values()
        .collect()
}

fn close(a: &[f64], b: &[f64]) -> bool {
    let scale = a.iter().copied().fold(1e-300, f64::max);
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= 1e-10 * scale.max(1e-14))
}

#[test]
fn weights_invariant_under_relabelings() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, m) in [(4, 4), (4, 5), (5, 5), (5, 6)] {
        let an = Analyzer::new(n).unwrap();
        for _ in 0..6 {
            let i: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let o: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let base = weights(&i, &o, m, &an);
            let (mut ip, mut op) = (i.clone(), o.clone());
            ip.shuffle(&mut rng);
            op.shuffle(&mut rng);
            assert!(close(&base, &weights(&ip, &op, m, &an)));
            let shift = rng.gen_range(0..m);
            let tr = |v: &[usize]| v.iter().map(|x| (x + shift) % m).collect::<Vec<_>>();
            let rf = |v: &[usize]| v.iter().map(|x| (shift + m - x) % m).collect::<Vec<_>>();
            assert!(close(&base, &weights(&tr(&i), &tr(&o), m, &an)));
            assert!(close(&base, &weights(&rf(&i), &rf(&o), m, &an)));
            assert!(close(&base, &weights(&o, &i, m, &an)));
        }
    }
}

#[test]
fn soundness_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 2..=6 {
        let an = Analyzer::new(n).unwrap();
        let lists = all_mode_lists(n, n);
        for _ in 0..15 {
            let i = lists[rng.gen_range(0..lists.len())].clone();
            let o = lists[rng.gen_range(0..lists.len())].clone();
            let a = analyze(&fourier(&i, &o, n), &an).unwrap();
            for v in &a.verdicts {
                if v.status.is_suppressed() {
                    assert!(v.weight < a.tolerance);
                }
                if v.status == Status::PauliForbidden {
                    let forbidden = !gamas_admissible(&v.sector, &i).unwrap()
                        || !gamas_admissible(&v.sector, &o).unwrap();
                    assert!(forbidden);
                }
            }
        }
    }
}

#[test]
fn phase_arithmetic() {
    assert!(Phase::exact(2, 4).matches(&Phase::exact(1, 2)));
    assert!(Phase::exact(3, 3).is_one());
    assert!(Phase::from_turns(0.5 + 1e-12).matches(&Phase::exact(-1, 2)));
    assert_eq!(Phase::exact(1, 2).to_string(), "-1");
    assert_eq!("dihedral".parse::<Dedupe>().unwrap(), Dedupe::Dihedral);
    assert!("other".parse::<Dedupe>().is_err());
    assert_eq!(Status::ALL.map(Status::as_str)[0], "pauli_forbidden");
}
