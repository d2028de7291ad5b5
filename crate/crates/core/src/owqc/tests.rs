use super::*;
use crate::analytics::misid_prob;
use crate::qsim::single_qubit;

const SHOTS: usize = 100_000;

fn ket(amps: [Complex64; 2]) -> StateVector {
    single_qubit(amps[0], amps[1]).unwrap()
}

fn product(kets: &[[Complex64; 2]]) -> StateVector {
    let mut s = ket(kets[0]);
    for k in &kets[1..] {
        s = s.tensor(&ket(*k)).unwrap();
    }
    s
}

fn flipped(amps: [Complex64; 2]) -> [Complex64; 2] {
    [amps[1], amps[0]]
}

fn superpose(a: &StateVector, b: &StateVector) -> StateVector {
    let amps = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x + y)
        .collect();
    StateVector::from_amplitudes(amps).unwrap()
}

// (|α⟩^{⊗(1+#V)} on T,V with C0) + (|-α⟩^{⊗(1+#V)} with C1), normalized
fn verified_state_oracle(alpha: f64, register_size: usize) -> StateVector {
    let c0 = continuation_target(alpha);
    let branch = |bit: u8, cont: [Complex64; 2]| {
        let mut kets = vec![alpha_basis_state(alpha, bit), cont];
        kets.extend(std::iter::repeat_n(alpha_basis_state(alpha, bit), register_size));
        product(&kets)
    };
    superpose(&branch(0, c0), &branch(1, flipped(c0)))
}

fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn within_3_sigma(count: usize, trials: usize, p: f64) -> bool {
    let freq = count as f64 / trials as f64;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    (freq - p).abs() <= 3.0 * sigma
}

fn alphas(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, 0);
    (0..n).map(|_| rng.angle()).collect()
}

#[test]
fn graph_state_matches_direct_construction() {
    for alpha in alphas(20, 1) {
        let g = prepare_graph_state(alpha).unwrap();
        let direct = verified_state_oracle(alpha, 0);
        assert!(max_diff(&g.state, &direct) < 1e-10, "alpha = {alpha}");
        assert!((g.state.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn graph_state_at_zero_angle() {
    // (|+⟩|0⟩ + |-⟩|1⟩)/√2 with T as the low qubit
    let g = prepare_graph_state(0.0).unwrap();
    let want = [0.5, 0.5, 0.5, -0.5];
    for (a, w) in g.state.amplitudes().iter().zip(want) {
        assert!((a - c(w, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn projecting_target_leaves_gate_output() {
    for alpha in alphas(20, 2) {
        let g = prepare_graph_state(alpha).unwrap();
        let plus = alpha_basis_state(alpha, 0);
        let amps = g.state.amplitudes();
        let cont = [
            plus[0].conj() * amps[0] + plus[1].conj() * amps[1],
            plus[0].conj() * amps[2] + plus[1].conj() * amps[3],
        ];
        let norm = (cont[0].norm_sqr() + cont[1].norm_sqr()).sqrt();
        let cont = [cont[0] / norm, cont[1] / norm];
        assert!((qubit_fidelity(cont, continuation_target(alpha)) - 1.0).abs() < 1e-12);
    }
}

fn prepared(alpha: f64, register_size: usize) -> StateVector {
    prepare_graph_state(alpha)
        .unwrap()
        .state
        .tensor(&StateVector::new(register_size).unwrap())
        .unwrap()
}

#[test]
fn rotated_attach_matches_verified_state() {
    let mut rng = RngStream::new(3, 0);
    for alpha in alphas(10, 3) {
        for kind in [FanOut::Linear, FanOut::LogDepth] {
            for size in [1, 2, 4, 5] {
                let mut s = prepared(alpha, size);
                let topo = VerificationTopology::new(kind, size);
                attach_verification(&mut s, topo, alpha, &ErrorModel::noiseless(), &mut rng, MeasurementMode::Rotated)
                    .unwrap();
                assert!(max_diff(&s, &verified_state_oracle(alpha, size)) < 1e-10);
            }
        }
    }
}

#[test]
fn empty_register_is_a_no_op() {
    let mut rng = RngStream::new(4, 0);
    let mut s = prepare_graph_state(1.1).unwrap().state;
    let before = s.clone();
    let topo = VerificationTopology::new(FanOut::LogDepth, 0);
    attach_verification(&mut s, topo, 1.1, &ErrorModel::noiseless(), &mut rng, MeasurementMode::Rotated).unwrap();
    assert_eq!(s, before);
}

#[test]
fn ideal_fan_outs_agree() {
    let mut rng = RngStream::new(5, 0);
    for size in 1..=6 {
        for mode in [MeasurementMode::Rotated, MeasurementMode::Computational] {
            let mut a = prepared(0.9, size);
            let mut b = a.clone();
            let noise = ErrorModel::noiseless();
            attach_verification(&mut a, VerificationTopology::new(FanOut::Linear, size), 0.9, &noise, &mut rng, mode).unwrap();
            attach_verification(&mut b, VerificationTopology::new(FanOut::LogDepth, size), 0.9, &noise, &mut rng, mode).unwrap();
            assert!(max_diff(&a, &b) < 1e-12);
        }
    }
}

#[test]
fn attach_rejects_dirty_register() {
    let mut rng = RngStream::new(6, 0);
    let mut s = prepared(0.3, 2);
    s.apply(Gate::X(verification_qubit(2))).unwrap();
    let topo = VerificationTopology::new(FanOut::Linear, 2);
    assert!(attach_verification(&mut s, topo, 0.3, &ErrorModel::noiseless(), &mut rng, MeasurementMode::Rotated).is_err());
}

fn wrong_verdicts(
    noise: &ErrorModel,
    topo: VerificationTopology,
    options: ProtocolOptions,
    shots: usize,
    seed: u64,
) -> usize {
    let mut rng = RngStream::new(seed, 0);
    (0..shots)
        .filter(|_| {
            let alpha = rng.angle();
            let mut s = prepared(alpha, topo.register_size);
            attach_verification(&mut s, topo, alpha, noise, &mut rng, options.mode).unwrap();
            let vote = mitigated_measure(&mut s, topo.register_size, alpha, noise, &mut rng, options).unwrap();
            vote.verdict != vote.true_branch()
        })
        .count()
}

#[test]
fn noiseless_vote_is_always_right() {
    for mode in [MeasurementMode::Rotated, MeasurementMode::Computational] {
        let options = ProtocolOptions { mode, ..Default::default() };
        let topo = VerificationTopology::new(FanOut::Linear, 2);
        assert_eq!(wrong_verdicts(&ErrorModel::noiseless(), topo, options, 2000, 7), 0);
    }
}

#[test]
fn even_vote_count_is_rejected() {
    let mut rng = RngStream::new(8, 0);
    let mut s = prepared(0.2, 1);
    let result = mitigated_measure(&mut s, 1, 0.2, &ErrorModel::noiseless(), &mut rng, ProtocolOptions::default());
    assert_eq!(result, Err(Error::EvenVoteCount(2)));
}

#[test]
fn projection_errors_reduce_to_binomial_vote() {
    let noise = ErrorModel::uniform(0.1, 0.0, 0.0).unwrap();
    let topo = VerificationTopology::new(FanOut::Linear, 2);
    let want = misid_prob(3, 0.1).unwrap();
    for (seed, mode) in [(9, MeasurementMode::Rotated), (10, MeasurementMode::Computational)] {
        let options = ProtocolOptions { mode, ..Default::default() };
        let wrong = wrong_verdicts(&noise, topo, options, SHOTS, seed);
        assert!(within_3_sigma(wrong, SHOTS, want), "{mode:?}: {wrong}");
    }
}

#[test]
fn modes_are_statistically_indistinguishable() {
    let noise = ErrorModel::uniform(0.08, 0.03, 0.02).unwrap();
    let topo = VerificationTopology::new(FanOut::LogDepth, 4);
    let rot = wrong_verdicts(&noise, topo, ProtocolOptions { mode: MeasurementMode::Rotated, ..Default::default() }, SHOTS, 11);
    let comp = wrong_verdicts(&noise, topo, ProtocolOptions::default(), SHOTS, 12);
    let (a, b) = (rot as f64 / SHOTS as f64, comp as f64 / SHOTS as f64);
    let pooled = 0.5 * (a + b);
    let sigma = (2.0 * pooled * (1.0 - pooled) / SHOTS as f64).sqrt();
    assert!((a - b).abs() <= 3.0 * sigma, "{a} vs {b}");
}

#[test]
fn cnot_noise_accounting() {
    // T's vote is error-free here; each register vote is wrong with γ = 0.1
    let noise = ErrorModel::uniform(0.0, 0.0, 0.1).unwrap();
    let topo = VerificationTopology::new(FanOut::Linear, 2);
    let register_only = wrong_verdicts(&noise, topo, ProtocolOptions::default(), SHOTS, 13);
    assert!(within_3_sigma(register_only, SHOTS, 0.01), "{register_only}");

    let all = ProtocolOptions { accounting: GammaAccounting::AllVotes, ..Default::default() };
    let uniform = wrong_verdicts(&noise, topo, all, SHOTS, 14);
    assert!(within_3_sigma(uniform, SHOTS, misid_prob(3, 0.1).unwrap()), "{uniform}");
}

#[test]
fn log_depth_faults_propagate_down_the_tree() {
    // #V = 4: V1 = f1, V2 = f2, V3 = f1 ^ f3, V4 = f4. Wrong verdict needs >= 3
    // wrong register votes (T is error-free). Enumerate fault patterns.
    let gamma: f64 = 0.15;
    let mut want = 0.0;
    for mask in 0u32..16 {
        let f = |i: u32| (mask >> i) & 1;
        let wrong = f(0) + f(1) + (f(0) ^ f(2)) + f(3);
        if wrong >= 3 {
            let k = mask.count_ones() as i32;
            want += gamma.powi(k) * (1.0 - gamma).powi(4 - k);
        }
    }
    let noise = ErrorModel::uniform(0.0, 0.0, gamma).unwrap();
    let topo = VerificationTopology::new(FanOut::LogDepth, 4);
    let wrong = wrong_verdicts(&noise, topo, ProtocolOptions::default(), SHOTS, 15);
    assert!(within_3_sigma(wrong, SHOTS, want), "{wrong} vs {want}");
}

#[test]
fn correction_cases() {
    let alpha = 2.2;
    let target = continuation_target(alpha);
    let mut s = ket(target);
    apply_correction(&mut s, 0, 0).unwrap();
    assert!((qubit_fidelity(s.qubit_state(0).unwrap(), target) - 1.0).abs() < 1e-12);

    let mut wrong = ket(flipped(target));
    apply_correction(&mut wrong, 0, 1).unwrap();
    assert!((qubit_fidelity(wrong.qubit_state(0).unwrap(), target) - 1.0).abs() < 1e-12);
}

#[test]
fn noiseless_shots_succeed() {
    let mut rng = RngStream::new(16, 0);
    for alpha in alphas(20, 16) {
        for size in [0, 2, 4] {
            for mode in [MeasurementMode::Rotated, MeasurementMode::Computational] {
                let topo = VerificationTopology::new(FanOut::LogDepth, size);
                let out = run_owqc_shot(alpha, &ErrorModel::noiseless(), topo, &mut rng, ProtocolOptions { mode, ..Default::default() }).unwrap();
                assert_eq!(out.output_bit, 0);
                assert!((out.fidelity_to_target - 1.0).abs() < 1e-10);
                assert!(!out.misidentified);
            }
        }
    }
}

#[test]
fn right_verdict_means_perfect_continuation() {
    let noise = ErrorModel::uniform(0.2, 0.1, 0.05).unwrap();
    let mut rng = RngStream::new(17, 0);
    let topo = VerificationTopology::new(FanOut::LogDepth, 4);
    for _ in 0..3000 {
        let alpha = rng.angle();
        let out = run_owqc_shot(alpha, &noise, topo, &mut rng, ProtocolOptions::default()).unwrap();
        if out.verdict == out.true_branch {
            assert!((out.fidelity_to_target - 1.0).abs() < 1e-10);
        } else {
            assert!(out.fidelity_to_target < 1e-10);
        }
    }
}

#[test]
fn end_to_end_misidentification_rate() {
    let noise = ErrorModel::uniform(0.05, 0.0, 0.0).unwrap();
    let topo = VerificationTopology::new(FanOut::Linear, 4);
    let want = misid_prob(5, 0.05).unwrap();
    assert!((want - 1.158e-3).abs() < 1e-6);
    let mut rng = RngStream::new(18, 0);
    let misid = (0..SHOTS)
        .filter(|_| {
            let alpha = rng.angle();
            run_owqc_shot(alpha, &noise, topo, &mut rng, ProtocolOptions::default())
                .unwrap()
                .misidentified
        })
        .count();
    assert!(within_3_sigma(misid, SHOTS, want), "{misid}");
}

#[test]
fn register_lowers_wrong_outputs() {
    let noise = ErrorModel::uniform(0.05, 0.0, 0.0).unwrap();
    let wrong_outputs = |size: usize, seed: u64| {
        let mut rng = RngStream::new(seed, 0);
        (0..20_000)
            .filter(|_| {
                let alpha = rng.angle();
                let topo = VerificationTopology::new(FanOut::Linear, size);
                run_owqc_shot(alpha, &noise, topo, &mut rng, ProtocolOptions::default())
                    .unwrap()
                    .output_bit
                    == 1
            })
            .count()
    };
    assert!(wrong_outputs(2, 19) < wrong_outputs(0, 20));
}
