import threading

import numpy as np
import pytest

from conftest import makeScenario, randomComplex
import constants
from experimentcontainer import nmse
from physics import addNoise, unfold
from receivers import costmodel, pilotreceiver
from receivers.krfstage import krfDecouple
from receivers.leastsquares import estimateTheta
from receivers.pilotreceiver import (
    PilotKrfReceiver,
    PilotLsReceiver,
    PilotSolveCache,
    pilotBaselines,
)
from receivers.receiver import (
    BalsOptions,
    InitMode,
    Receiver,
    ReceiverReport,
    hasConverged,
    initialSymbols,
    withRestarts,
)
from receivers.talsreceiver import (
    TalsReceiver,
    buildGSystem,
    buildHSystem,
    estimateG,
    estimateH,
    removeTalsAmbiguity,
    talsBaseline,
)
from receivers.tsbreceiver import TsbReceiver, bals, tsb
from subsystems.channelsubsystem import combine
from subsystems.framesubsystem import detectNearest
from systemconfig import SystemConfig
from util.convenientmath import vec
from util.simerrors import (
    ConfigError,
    DegenerateInputError,
    DimensionError,
    EstimationSingularError,
)


def relativeError(expected: np.ndarray, actual: np.ndarray) -> float:
    return np.linalg.norm(expected - actual) / np.linalg.norm(expected)


def noisy(scenario, snrDb, rng):
    return unfold(addNoise(scenario.received, snrDb, rng))


class TestKrf:
    def test_rank_one_columns_are_recovered(self, noiselessScenario):
        scenario = noiselessScenario
        cfg, theta = scenario.cfg, scenario.channel.theta
        Ghat, Hhat, thetaHat = krfDecouple(theta, cfg.M, cfg.L, cfg.N)
        assert Ghat.shape == (cfg.N, cfg.L)
        assert Hhat.shape == (cfg.M, cfg.N)
        assert relativeError(theta, thetaHat) <= 1e-12
        np.testing.assert_allclose(combine(Ghat, Hhat), thetaHat)

    def test_factors_match_up_to_column_scaling(self, noiselessScenario):
        scenario = noiselessScenario
        cfg, channel = scenario.cfg, scenario.channel
        Ghat, Hhat, _ = krfDecouple(channel.theta, cfg.M, cfg.L, cfg.N)
        for n in range(cfg.N):
            ratio = Hhat[:, n] / channel.H[:, n]
            np.testing.assert_allclose(ratio, ratio[0], atol=1e-10)
            np.testing.assert_allclose(Ghat[n] * ratio[0], channel.G[n], atol=1e-10)

    def test_balanced_factor_norms(self, noiselessScenario):
        scenario = noiselessScenario
        cfg = scenario.cfg
        Ghat, Hhat, _ = krfDecouple(scenario.channel.theta, cfg.M, cfg.L, cfg.N)
        np.testing.assert_allclose(
            np.linalg.norm(Ghat, axis=1), np.linalg.norm(Hhat, axis=0), rtol=1e-12
        )

    def test_scalar(self):
        Ghat, Hhat, thetaHat = krfDecouple(np.array([[4.0 + 0j]]), 1, 1, 1)
        assert abs(Ghat[0, 0]) == pytest.approx(2.0)
        assert abs(Hhat[0, 0]) == pytest.approx(2.0)
        np.testing.assert_allclose(thetaHat, [[4.0]])

    def test_zero_column(self, noiselessScenario):
        scenario = noiselessScenario
        cfg = scenario.cfg
        theta = scenario.channel.theta.copy()
        theta[:, 2] = 0
        with pytest.raises(DegenerateInputError) as error:
            krfDecouple(theta, cfg.M, cfg.L, cfg.N)
        assert error.value.index == 2

    def test_shape_mismatch(self, rng):
        with pytest.raises(DimensionError):
            krfDecouple(randomComplex(rng, 6, 4), 4, 2, 4)

    def test_denoises_perturbed_columns(self, noiselessScenario, rng):
        scenario = noiselessScenario
        cfg, theta = scenario.cfg, scenario.channel.theta
        perturbed = theta + 0.05 * randomComplex(rng, *theta.shape)
        _, _, refined = krfDecouple(perturbed, cfg.M, cfg.L, cfg.N)
        assert np.linalg.norm(refined - theta) < np.linalg.norm(perturbed - theta)


class TestConvergence:
    def test_residual_floor(self):
        assert hasConverged([1e-30], 1.0, 1e-6)

    def test_needs_two_entries(self):
        assert not hasConverged([1.0], 1.0, 1e-6)

    def test_relative_change(self):
        assert hasConverged([1.0, 1.0 - 1e-8], 10.0, 1e-6)
        assert not hasConverged([1.0, 0.5], 10.0, 1e-6)

    def test_options_validation(self):
        with pytest.raises(ConfigError, match="maxIterations"):
            BalsOptions(maxIterations=0)
        with pytest.raises(ConfigError, match="relTol"):
            BalsOptions(relTol=0.0)

    @pytest.mark.parametrize("initMode", [InitMode.RandomConstellation, InitMode.Gaussian])
    def test_initial_symbols_carry_pilot(self, smallConfig, rng, initMode):
        X = initialSymbols(smallConfig, initMode, rng)
        assert X.shape == (smallConfig.L, smallConfig.T)
        np.testing.assert_array_equal(X[:, 0], 1)


class TestRestarts:
    def test_first_iteration_singularity_draws_a_new_start(self):
        attempts = []
        report = ReceiverReport(np.zeros((2, 1)), np.ones((1, 1)))

        def attempt():
            attempts.append(len(attempts))
            if len(attempts) < 3:
                raise EstimationSingularError(1, 2, 1)
            return report

        assert withRestarts(attempt) is report
        assert len(attempts) == 3

    def test_later_singularity_is_reported(self):
        attempts = []

        def attempt():
            attempts.append(len(attempts))
            raise EstimationSingularError(1, 2, 4)

        with pytest.raises(EstimationSingularError) as error:
            withRestarts(attempt)
        assert error.value.iteration == 4
        assert len(attempts) == 1

    def test_attempts_are_bounded(self):
        attempts = []

        def attempt():
            attempts.append(len(attempts))
            raise EstimationSingularError(1, 2, 1)

        with pytest.raises(EstimationSingularError):
            withRestarts(attempt)
        assert len(attempts) == constants.kMaxStartAttempts

    @pytest.mark.parametrize("order", [4, 16])
    def test_constellation_starts_recover_noiseless_frames(self, smallConfig, rng, order):
        cfg = smallConfig.withOverrides(constellationOrder=order)
        for _ in range(200):
            scenario = makeScenario(cfg, rng)
            report = tsb(scenario.unf, scenario.design, cfg, BalsOptions(), rng)
            assert nmse(scenario.channel.theta, report.thetaHat) <= 1e-12
            detected = detectNearest(report.Xhat, order)
            np.testing.assert_array_equal(detected.X, scenario.frame.X)

    def test_fast_updates_recover_noiseless_frames(self, smallConfig, rng):
        cfg = smallConfig.withOverrides(constellationOrder=4)
        opts = BalsOptions(useFastUpdates=True)
        for _ in range(100):
            scenario = makeScenario(cfg, rng)
            report = tsb(scenario.unf, scenario.design, cfg, opts, rng)
            assert nmse(scenario.channel.theta, report.thetaHat) <= 1e-12


class TestBals:
    def test_noiseless_recovery(self, noiselessScenario, rng):
        scenario = noiselessScenario
        report = bals(scenario.unf, scenario.design, scenario.cfg, BalsOptions(), rng)
        assert relativeError(scenario.channel.theta, report.thetaHat) <= 1e-10
        assert relativeError(scenario.frame.X, report.Xhat) <= 1e-10
        assert report.iterations >= 1
        assert report.flops == costmodel.flopsBals(scenario.cfg).total(report.iterations)

    def test_fast_updates_match_pseudo_inverse(self, noiselessScenario, rng):
        scenario = noiselessScenario
        unf = noisy(scenario, 10.0, rng)
        results = []
        for useFastUpdates in (False, True):
            opts = BalsOptions(maxIterations=5, relTol=1e-15, useFastUpdates=useFastUpdates)
            results.append(
                bals(unf, scenario.design, scenario.cfg, opts, np.random.default_rng(4))
            )
        assert results[0].iterations == results[1].iterations
        assert relativeError(results[0].thetaHat, results[1].thetaHat) <= 1e-8
        assert results[1].flops < results[0].flops

    def test_residual_never_increases(self, smallConfig, rng):
        for _ in range(100):
            scenario = makeScenario(smallConfig, rng)
            report = bals(noisy(scenario, 10.0, rng), scenario.design, smallConfig, BalsOptions(), rng)
            trace = report.residualTrace
            for previous, current in zip(trace, trace[1:]):
                assert current <= previous * (1 + 1e-9)

    def test_iteration_cap(self, noiselessScenario, rng):
        scenario = noiselessScenario
        opts = BalsOptions(maxIterations=2, relTol=1e-15)
        report = bals(noisy(scenario, 0.0, rng), scenario.design, scenario.cfg, opts, rng)
        assert report.iterations <= 2
        assert len(report.residualTrace) == report.iterations


class TestTsb:
    def test_noiseless_recovery(self, noiselessScenario, rng):
        scenario = noiselessScenario
        report = tsb(scenario.unf, scenario.design, scenario.cfg, BalsOptions(), rng)
        assert relativeError(scenario.channel.theta, report.thetaHat) <= 1e-10
        assert relativeError(scenario.channel.theta, report.rawEstimate) <= 1e-10
        expected = costmodel.flopsTsb(scenario.cfg).total(report.iterations)
        assert report.flops == expected

    def test_refinement_usually_helps(self, smallConfig, rng):
        improved = 0
        trials = 100
        for _ in range(trials):
            scenario = makeScenario(smallConfig, rng)
            report = tsb(noisy(scenario, 10.0, rng), scenario.design, smallConfig, BalsOptions(), rng)
            theta = scenario.channel.theta
            if np.linalg.norm(report.thetaHat - theta) <= np.linalg.norm(report.thetaRaw - theta):
                improved += 1
        assert improved >= 0.9 * trials

    def test_refined_symbols(self, noiselessScenario, rng):
        scenario = noiselessScenario
        opts = BalsOptions(refineSymbols=True)
        receiver = TsbReceiver(opts)
        assert receiver.label == "tsbref"
        report = receiver.estimate(scenario.unf, scenario.design, scenario.cfg, scenario.frame, rng)
        assert relativeError(scenario.frame.X, report.Xhat) <= 1e-10
        expected = costmodel.flopsTsb(scenario.cfg).total(report.iterations)
        assert report.flops == expected + costmodel.xStepFlops(scenario.cfg)

    def test_labels(self):
        assert TsbReceiver().label == "tsb"
        assert TsbReceiver(BalsOptions(useFastUpdates=True)).label == "tsbfast"


class TestTals:
    def test_h_system(self, noiselessScenario):
        scenario = noiselessScenario
        channel = scenario.channel
        system = buildHSystem(channel.G, scenario.frame.X, scenario.design)
        np.testing.assert_allclose(channel.H @ system, scenario.unf.asMatrix(), atol=1e-10)

    def test_g_system(self, noiselessScenario):
        scenario = noiselessScenario
        channel = scenario.channel
        system = buildGSystem(channel.H, scenario.frame.X, scenario.design)
        np.testing.assert_allclose(system @ vec(channel.G), scenario.unf.y3, atol=1e-10)

    def test_exact_factor_updates(self, noiselessScenario):
        scenario = noiselessScenario
        channel, X, design = scenario.channel, scenario.frame.X, scenario.design
        assert relativeError(channel.H, estimateH(scenario.unf, channel.G, X, design)) <= 1e-10
        assert relativeError(channel.G, estimateG(scenario.unf, channel.H, X, design)) <= 1e-10

    def test_ambiguity_removal(self, noiselessScenario, rng):
        scenario = noiselessScenario
        G, X = scenario.channel.G, scenario.frame.X
        d = randomComplex(rng, scenario.cfg.L)
        Ghat, Xhat = removeTalsAmbiguity(G / d, d.reshape(-1, 1) * X)
        assert relativeError(G, Ghat) <= 1e-12
        assert relativeError(X, Xhat) <= 1e-12

    @pytest.mark.parametrize("order", [4, 16])
    def test_noiseless_recovery(self, smallConfig, rng, order):
        cfg = smallConfig.withOverrides(constellationOrder=order)
        for _ in range(50):
            scenario = makeScenario(cfg, rng)
            report = talsBaseline(scenario.unf, scenario.design, cfg, BalsOptions(), rng)
            assert nmse(scenario.channel.theta, report.thetaHat) <= 1e-12
            detected = detectNearest(report.Xhat, order)
            np.testing.assert_array_equal(detected.X, scenario.frame.X)

    def test_residual_never_increases(self, smallConfig, rng):
        for _ in range(20):
            scenario = makeScenario(smallConfig, rng)
            report = talsBaseline(
                noisy(scenario, 20.0, rng), scenario.design, smallConfig, BalsOptions(), rng
            )
            trace = report.residualTrace
            for previous, current in zip(trace, trace[1:]):
                assert current <= previous * (1 + 1e-9)

    def test_report(self, noiselessScenario, rng):
        scenario = noiselessScenario
        receiver = TalsReceiver(BalsOptions(maxIterations=20))
        assert receiver.label == "tals"
        report = receiver.estimate(scenario.unf, scenario.design, scenario.cfg, scenario.frame, rng)
        np.testing.assert_allclose(report.Xhat[:, 0], 1, atol=1e-12)
        np.testing.assert_allclose(report.thetaHat, combine(report.Ghat, report.Hhat))
        assert 1 <= report.iterations <= 20
        assert report.flops == costmodel.flopsTals(scenario.cfg).total(report.iterations)


class TestPilotBaselines:
    def test_noiseless_recovery(self, noiselessScenario):
        scenario = noiselessScenario
        ls, krf = pilotBaselines(scenario.unf, scenario.design, scenario.cfg, scenario.frame.X)
        assert relativeError(scenario.channel.theta, ls.thetaHat) <= 1e-10
        assert relativeError(scenario.channel.theta, krf.thetaHat) <= 1e-10
        assert relativeError(scenario.frame.X, ls.Xhat) <= 1e-10
        assert ls.iterations == krf.iterations == 0
        assert ls.flops == costmodel.flopsPilotLs(scenario.cfg).total(0)
        assert krf.flops == ls.flops + costmodel.flopsKrf(scenario.cfg).oneShot

    def test_receivers_use_the_known_frame(self, noiselessScenario, rng):
        scenario = noiselessScenario
        unf = noisy(scenario, 10.0, rng)
        ls, krf = pilotBaselines(unf, scenario.design, scenario.cfg, scenario.frame.X)
        for receiver, expected in ((PilotLsReceiver(), ls), (PilotKrfReceiver(), krf)):
            report = receiver.estimate(unf, scenario.design, scenario.cfg, scenario.frame, rng)
            np.testing.assert_allclose(report.thetaHat, expected.thetaHat)
        np.testing.assert_array_equal(krf.thetaRaw, ls.thetaHat)

    def test_shared_cache_solves_once_per_realization(
        self, noiselessScenario, rng, monkeypatch
    ):
        scenario = noiselessScenario
        solves = []

        def countingEstimate(*args):
            solves.append(args)
            return estimateTheta(*args)

        monkeypatch.setattr(pilotreceiver, "estimateTheta", countingEstimate)
        cache = PilotSolveCache()
        receivers = (PilotLsReceiver(cache), PilotKrfReceiver(cache))
        for unf in (scenario.unf, noisy(scenario, 10.0, rng)):
            ls, krf = (
                receiver.estimate(unf, scenario.design, scenario.cfg, scenario.frame, rng)
                for receiver in receivers
            )
            np.testing.assert_array_equal(krf.thetaRaw, ls.thetaHat)
        assert len(solves) == 2

    def test_cache_is_per_thread(self, noiselessScenario):
        scenario = noiselessScenario
        cache = PilotSolveCache()
        cache.thetaFor(scenario.unf, scenario.design, scenario.cfg, scenario.frame.X)
        seen = []
        worker = threading.Thread(target=lambda: seen.append(cache.unf))
        worker.start()
        worker.join()
        assert seen == [None]
        assert cache.unf is scenario.unf


def test_receiver_must_be_subclassed(noiselessScenario, rng):
    scenario = noiselessScenario
    with pytest.raises(NotImplementedError):
        Receiver().estimate(scenario.unf, scenario.design, scenario.cfg, scenario.frame, rng)


def test_tsb_at_minimum_frame_length(rng):
    cfg = SystemConfig(M=2, N=2, L=2, T=3, K=4)
    scenario = makeScenario(cfg, rng)
    report = tsb(scenario.unf, scenario.design, cfg, BalsOptions(), rng)
    assert relativeError(scenario.channel.theta, report.thetaHat) <= 1e-10
