use super::*;
use crate::linalg2::{frobenius_norm, hermitian_eigenvalues, random_density_matrix};

const P_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Independent oracle: the standard channel written out entry by entry for
/// `ρ = [[a, b], [c, d]]`, using XρX = [[d, c], [b, a]], YρY = [[d, −c], [−b, a]],
/// ZρZ = [[a, −b], [−c, d]].
fn standard_by_entries(rho: &Mat2, p: f64) -> Mat2 {
    let [a, b, c, d] = rho.entries;
    let keep = 1.0 - p;
    let w = p / 3.0;
    Mat2::new(
        a.scale(keep) + (d + d + a).scale(w),
        b.scale(keep) + (c + (-c) + (-b)).scale(w),
        c.scale(keep) + (b + (-b) + (-c)).scale(w),
        d.scale(keep) + (a + a + d).scale(w),
    )
}

#[test]
fn maximally_mixed_is_fixed_point() {
    let mixed = DensityMatrix::maximally_mixed();
    for p in P_GRID {
        let s = depolarize_standard(&mixed, p, None).unwrap();
        let m = depolarize_modified(&mixed, p, None).unwrap();
        assert!(frobenius_dist(s.mat(), mixed.mat()) < 1e-16);
        assert!(frobenius_dist(m.mat(), mixed.mat()) < 1e-16);
    }
    let iterated = iterate_channel(&mixed, 0.37, 10, ChannelKind::Modified).unwrap();
    assert!(frobenius_dist(iterated.mat(), mixed.mat()) < 1e-15);
}

#[test]
fn basis_state_at_p_point_three() {
    // 1 − 2p/3 = 0.8 and 2p/3 = 0.2
    let expected = Mat2::diag(0.8, 0.2);
    let s = depolarize_standard(&DensityMatrix::ket0(), 0.3, None).unwrap();
    let m = depolarize_modified(&DensityMatrix::ket0(), 0.3, None).unwrap();
    assert!(frobenius_dist(s.mat(), &expected) < 1e-15);
    assert!(frobenius_dist(m.mat(), &expected) < 1e-15);
}

#[test]
fn zero_rate_is_identity() {
    for seed in 0..20 {
        let rho = random_density_matrix(seed, false);
        assert_eq!(depolarize_standard(&rho, 0.0, None).unwrap(), rho);
        assert_eq!(depolarize_modified(&rho, 0.0, None).unwrap(), rho);
    }
}

#[test]
fn rate_out_of_range_is_rejected() {
    let rho = DensityMatrix::ket0();
    for p in [-0.01, 1.01, f64::NAN] {
        assert!(matches!(
            depolarize_standard(&rho, p, None),
            Err(Error::InvalidRate(_))
        ));
        assert!(matches!(
            depolarize_modified(&rho, p, None),
            Err(Error::InvalidRate(_))
        ));
        assert!(make_kraus(ChannelKind::Modified, p).is_err());
    }
}

#[test]
fn standard_matches_entrywise_oracle() {
    for seed in 0..200 {
        let rho = random_density_matrix(seed, false);
        for p in P_GRID {
            let direct = depolarize_standard(&rho, p, None).unwrap();
            let oracle = standard_by_entries(rho.mat(), p);
            assert!(frobenius_dist(direct.mat(), &oracle) < 1e-15);
        }
    }
}

#[test]
fn real_states_agree_across_channels() {
    for seed in 0..1000 {
        let rho = random_density_matrix(seed, true);
        for p in P_GRID {
            let s = depolarize_standard(&rho, p, None).unwrap();
            let m = depolarize_modified(&rho, p, None).unwrap();
            assert!(
                frobenius_dist(s.mat(), m.mat()) <= 1e-14,
                "seed {seed} p {p}"
            );
        }
    }
}

#[test]
fn complex_states_agree_on_diagonal() {
    for seed in 0..1000 {
        let rho = random_density_matrix(seed, false);
        for p in P_GRID {
            let diff = channel_difference(&rho, p).unwrap();
            assert!(diff.max_diag_diff <= 1e-14);
        }
    }
}

#[test]
fn channel_difference_vanishes_at_zero_rate() {
    let rho = random_density_matrix(4, false);
    let diff = channel_difference(&rho, 0.0).unwrap();
    assert_eq!(diff.frobenius, 0.0);
}

#[test]
fn modified_output_is_valid_density() {
    for seed in 0..500 {
        let rho = random_density_matrix(seed, seed % 2 == 0);
        for p in P_GRID {
            let out = depolarize_modified(&rho, p, None).unwrap();
            let report = validate_density(out.mat(), 1e-10);
            assert!(report.pass, "seed {seed} p {p}: {report:?}");
        }
    }
}

#[test]
fn validity_report_flags() {
    let short = validate_density(&Mat2::diag(0.6, 0.3), 1e-10);
    assert!(!short.pass);
    assert!((short.trace_dev - 0.1).abs() < 1e-15);
    let upper = validate_density(&Mat2::from_real(0.0, 1.0, 0.0, 0.0), 1e-10);
    assert!(!upper.pass);
    assert!(upper.hermitian_dev >= 1.0);
    let negative = validate_density(&Mat2::diag(1.5, -0.5), 1e-10);
    assert!(!negative.pass);
    assert!((negative.min_eigenvalue + 0.5).abs() < 1e-15);
    assert!(validate_density(DensityMatrix::ket0().mat(), 0.0).pass);
    assert!(DensityMatrix::new(Mat2::diag(0.6, 0.3)).is_err());
}

#[test]
fn kraus_completeness() {
    for kind in [ChannelKind::Standard, ChannelKind::Modified] {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let ks = make_kraus(kind, p).unwrap();
            assert!(ks.completeness_deviation() <= 1e-15, "{kind} {p}");
            assert_eq!(ks.kind(), Some(kind));
        }
    }
}

#[test]
fn modified_k1_at_half() {
    let ks = make_kraus(ChannelKind::Modified, 0.5).unwrap();
    let k1 = ks.operators()[1];
    let gram = mat_mul(&adjoint(&k1), &k1, None);
    assert!(frobenius_dist(&gram, &Mat2::identity().scale(1.0 / 3.0)) < 1e-15);
    let gram_rev = mat_mul(&k1, &adjoint(&k1), None);
    assert!(frobenius_dist(&gram_rev, &Mat2::identity().scale(1.0 / 3.0)) < 1e-15);
}

#[test]
fn standard_kraus_at_zero_rate() {
    let ks = make_kraus(ChannelKind::Standard, 0.0).unwrap();
    assert_eq!(ks.operators()[0], Mat2::identity());
    for k in &ks.operators()[1..] {
        assert_eq!(frobenius_norm(k), 0.0);
    }
}

#[test]
fn kraus_apply_matches_direct() {
    for seed in 0..300 {
        let complex = random_density_matrix(seed, false);
        let real = random_density_matrix(seed, true);
        for p in P_GRID {
            let ks = make_kraus(ChannelKind::Standard, p).unwrap();
            let via_kraus = kraus_apply(&complex, &ks, None).unwrap();
            let direct = depolarize_standard(&complex, p, None).unwrap();
            assert!(frobenius_dist(via_kraus.mat(), direct.mat()) <= 1e-12);

            let ks = make_kraus(ChannelKind::Modified, p).unwrap();
            let via_kraus = kraus_apply(&real, &ks, None).unwrap();
            let direct = depolarize_modified(&real, p, None).unwrap();
            assert!(frobenius_dist(via_kraus.mat(), direct.mat()) <= 1e-12);
        }
    }
}

#[test]
fn modified_kraus_departs_from_direct_on_complex_states() {
    // K₁ ∝ ZX = iY, so the Kraus form applies YρY where the direct formula
    // applies Yρᵀ Y; they differ exactly by the imaginary part of ρ₀₁.
    let rho = DensityMatrix::from_pure(Complex::real(1.0), Complex::I).unwrap();
    let p = 0.3;
    let via_kraus =
        kraus_apply(&rho, &make_kraus(ChannelKind::Modified, p).unwrap(), None).unwrap();
    let direct = depolarize_modified(&rho, p, None).unwrap();
    let gap = via_kraus.into_mat() - direct.into_mat();
    assert!(gap.get(0, 0).abs() < 1e-16 && gap.get(1, 1).abs() < 1e-16);
    // ρ₀₁ = −i/2; Kraus gives (1−2p/3)b − (2p/3)c, direct gives (1−4p/3)b.
    let expected = (2.0 * p / 3.0) * 1.0;
    assert!((gap.get(0, 1).abs() - expected).abs() < 1e-15);
}

#[test]
fn kraus_apply_identity_and_incomplete() {
    let rho = random_density_matrix(8, false);
    let id = KrausSet::new(vec![Mat2::identity()]);
    assert_eq!(kraus_apply(&rho, &id, None).unwrap(), rho);
    let broken = KrausSet::new(vec![Mat2::identity().scale(0.9)]);
    assert!(matches!(
        kraus_apply(&rho, &broken, None),
        Err(Error::IncompleteKraus { .. })
    ));
}

#[test]
fn kraus_apply_counts_two_per_operator() {
    let rho = random_density_matrix(2, false);
    let mut counter = MulCounter::new();
    kraus_apply(
        &rho,
        &make_kraus(ChannelKind::Standard, 0.1).unwrap(),
        Some(&mut counter),
    )
    .unwrap();
    assert_eq!(counter.count(), 8);
    counter.reset();
    kraus_apply(
        &rho,
        &make_kraus(ChannelKind::Modified, 0.1).unwrap(),
        Some(&mut counter),
    )
    .unwrap();
    assert_eq!(counter.count(), 4);
}

#[test]
fn iterate_channel_edges() {
    let rho = random_density_matrix(12, false);
    for kind in [ChannelKind::Standard, ChannelKind::Modified] {
        assert_eq!(iterate_channel(&rho, 0.2, 0, kind).unwrap(), rho);
        assert_eq!(
            iterate_channel(&rho, 0.2, 1, kind).unwrap(),
            depolarize(kind, &rho, 0.2, None).unwrap()
        );
    }
}

#[test]
fn first_order_reduces_to_single_application() {
    for seed in 0..50 {
        let rho = random_density_matrix(seed, false);
        let p = 0.013 * seed as f64 / 50.0;
        assert_eq!(
            first_order_modified_m(&rho, p, 1).unwrap(),
            depolarize_modified(&rho, p, None).unwrap().into_mat()
        );
        assert_eq!(
            first_order_standard_m(&rho, p, 1).unwrap(),
            depolarize_standard(&rho, p, None).unwrap().into_mat()
        );
        assert_eq!(first_order_modified_m(&rho, p, 0).unwrap(), *rho.mat());
        assert_eq!(first_order_standard_m(&rho, p, 0).unwrap(), *rho.mat());
    }
}

#[test]
fn first_order_error_bound_at_small_rate() {
    let (p, m) = (0.01, 5);
    for seed in 0..100 {
        let rho = random_density_matrix(seed, false);
        let exact = iterate_channel(&rho, p, m, ChannelKind::Modified).unwrap();
        let approx = first_order_modified_m(&rho, p, m).unwrap();
        let bound = 2.0 * (m as f64 * p).powi(2);
        assert!(frobenius_dist(exact.mat(), &approx) <= bound);
    }
}

#[test]
fn first_order_diagonals_agree() {
    for seed in 0..200 {
        let rho = random_density_matrix(seed, false);
        for m in [0, 1, 3, 10] {
            let s = first_order_standard_m(&rho, 0.01, m).unwrap();
            let q = first_order_modified_m(&rho, 0.01, m).unwrap();
            assert!((s.get(0, 0) - q.get(0, 0)).abs() <= 1e-12);
            assert!((s.get(1, 1) - q.get(1, 1)).abs() <= 1e-12);
        }
    }
}

#[test]
fn expval_cases() {
    let z = Observable::pauli_z();
    assert_eq!(expval(&z, DensityMatrix::ket0().mat(), None).unwrap(), 1.0);
    assert_eq!(
        expval(&z, DensityMatrix::maximally_mixed().mat(), None).unwrap(),
        0.0
    );
    let v = expval(&z, &Mat2::diag(0.8, 0.2), None).unwrap();
    assert!((v - 0.6).abs() < 1e-15);
    let mut counter = MulCounter::new();
    expval(&z, &Mat2::diag(0.8, 0.2), Some(&mut counter)).unwrap();
    assert_eq!(counter.count(), 1);
}

#[test]
fn expval_rejects_imaginary_trace() {
    let z = Observable::pauli_z();
    let bad = Mat2::new(
        Complex::new(0.5, 0.1),
        Complex::ZERO,
        Complex::ZERO,
        Complex::real(0.5),
    );
    assert!(matches!(
        expval(&z, &bad, None),
        Err(Error::NonRealExpectation { .. })
    ));
}

#[test]
fn observable_must_be_hermitian() {
    assert!(Observable::new(Mat2::from_real(0.0, 1.0, 0.0, 0.0)).is_err());
    assert!(Observable::new(Mat2::pauli_y()).is_ok());
}

#[test]
fn expectation_paths_count_and_agree() {
    let observables = [
        Observable::pauli_x(),
        Observable::pauli_y(),
        Observable::pauli_z(),
    ];
    for seed in 0..100 {
        let rho = random_density_matrix(seed, false);
        for obs in &observables {
            for m in [0, 1, 4, 10] {
                let p = 0.007;
                let mut counter = MulCounter::new();
                let modified = expval_modified_m(obs, &rho, p, m, &mut counter).unwrap();
                assert_eq!(counter.count(), 6);
                let via_state =
                    expval(obs, &first_order_modified_m(&rho, p, m).unwrap(), None).unwrap();
                assert!((modified - via_state).abs() <= 1e-12);

                let mut counter = MulCounter::new();
                let standard = expval_standard_m(obs, &rho, p, m, &mut counter).unwrap();
                assert_eq!(counter.count(), 10);
                let via_state =
                    expval(obs, &first_order_standard_m(&rho, p, m).unwrap(), None).unwrap();
                assert!((standard - via_state).abs() <= 1e-12);

                if m == 0 {
                    let plain = expval(obs, rho.mat(), None).unwrap();
                    assert!((modified - plain).abs() <= 1e-15);
                    assert!((standard - plain).abs() <= 1e-15);
                }
            }
        }
    }
}

#[test]
fn evolution_counts() {
    let rho = random_density_matrix(0, false);
    let mut counter = MulCounter::new();
    depolarize_standard(&rho, 0.1, Some(&mut counter)).unwrap();
    assert_eq!(counter.count(), 6);
    counter.reset();
    depolarize_modified(&rho, 0.1, Some(&mut counter)).unwrap();
    assert_eq!(counter.count(), 4);
}

#[test]
fn random_density_eigenvalues() {
    for seed in 0..1000 {
        let rho = random_density_matrix(seed, seed % 3 == 0);
        let (lo, hi) = hermitian_eigenvalues(rho.mat()).unwrap();
        assert!(lo >= -1e-12);
        assert!((lo + hi - 1.0).abs() <= 1e-12);
        assert!(validate_density(rho.mat(), 1e-12).pass);
    }
}

#[test]
fn depolarization_params_validate() {
    assert!(DepolarizationParams::new(0.5, 3).is_ok());
    assert!(DepolarizationParams::new(1.5, 3).is_err());
    let params = DepolarizationParams::new(0.25, 2).unwrap();
    assert_eq!((params.p(), params.m()), (0.25, 2));
}

#[test]
fn sweep_shape_and_zero_cells() {
    let p_values: Vec<f64> = vec![0.0, 0.005, 0.01];
    let grid = expectation_sweep(
        &[3, 8],
        &p_values,
        &[0, 1, 5, 10],
        42,
        SweepPlacement::Terminal,
    )
    .unwrap();
    assert_eq!(grid.shape(), (2, 3, 4));
    assert_eq!(grid.cells.len(), 24);
    for cell in &grid.cells {
        if cell.p == 0.0 || cell.m == 0 {
            assert!(cell.abs_diff <= 1e-12);
        }
        if cell.m == 1 {
            assert!(cell.abs_diff <= 1e-14);
        }
    }
    let again = expectation_sweep(
        &[3, 8],
        &p_values,
        &[0, 1, 5, 10],
        42,
        SweepPlacement::Terminal,
    )
    .unwrap();
    assert_eq!(grid.to_csv(), again.to_csv());
    assert!(expectation_sweep(&[], &p_values, &[1], 42, SweepPlacement::Terminal).is_err());
}

#[test]
fn sweep_interleaved_zero_cells() {
    let grid =
        expectation_sweep(&[3], &[0.0, 0.01], &[0, 2], 7, SweepPlacement::Interleaved).unwrap();
    for cell in &grid.cells {
        if cell.p == 0.0 || cell.m == 0 {
            assert!(cell.abs_diff <= 1e-12);
        }
    }
}

#[test]
fn sweep_circuits_are_independent_of_list() {
    let alone = alternating_circuit(8, 42);
    let _ = alternating_circuit(3, 42);
    assert_eq!(alone, alternating_circuit(8, 42));
    assert_eq!(alone[0].kind(), crate::gates::GateKind::Ry);
    assert_eq!(alone[1].kind(), crate::gates::GateKind::Rx);
}

#[test]
fn sweep_csv_header() {
    let grid = expectation_sweep(&[3], &[0.001], &[2], 1, SweepPlacement::Terminal).unwrap();
    let csv = grid.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(SWEEP_CSV_HEADER));
    assert!(lines
        .next()
        .unwrap()
        .starts_with("3,1.0000000000000000e-3,2,"));
}

#[test]
fn pure_state_from_amplitudes() {
    let plus = DensityMatrix::from_pure(Complex::ONE, Complex::ONE).unwrap();
    assert!(frobenius_dist(plus.mat(), &Mat2::from_real(0.5, 0.5, 0.5, 0.5)) < 1e-16);
    assert!(DensityMatrix::from_pure(Complex::ZERO, Complex::ZERO).is_err());
}
