import numpy as np
import pytest

from conftest import makeScenario
from experimentcontainer import nmse, runSweep
from receivers.receiver import BalsOptions
from receivers.talsreceiver import talsBaseline
from receivers.tsbreceiver import tsb
from subsystems.framesubsystem import detectNearest, validateIdentifiability
from systemconfig import SystemConfig

kSemiBlindReceivers = (tsb, talsBaseline)


def assertExactRecovery(cfg: SystemConfig, rng: np.random.Generator) -> None:
    scenario = makeScenario(cfg, rng)
    for receiver in kSemiBlindReceivers:
        report = receiver(scenario.unf, scenario.design, cfg, BalsOptions(), rng)
        assert nmse(scenario.channel.theta, report.thetaHat) <= 1e-12, receiver.__name__
        detected = detectNearest(report.Xhat, cfg.constellationOrder).X
        np.testing.assert_array_equal(detected, scenario.frame.X)


def test_noiseless_recovery_over_random_dimensions():
    rng = np.random.default_rng(31)
    for _ in range(50):
        M, N, L = (int(value) for value in rng.integers(1, [5, 5, 4]))
        cfg = SystemConfig(
            M=M,
            N=N,
            L=L,
            T=int(rng.integers(1, 5)),
            K=int(N * L + rng.integers(0, 5)),
            constellationOrder=16,
            channelKind="rayleigh",
        )
        assertExactRecovery(cfg, rng)


@pytest.mark.parametrize("M, N, L", [(4, 4, 2), (2, 3, 2), (3, 2, 3)])
def test_noiseless_recovery_at_channel_bound(M, N, L, rng):
    # with K >= LN the bound KT = NL is only met at T = 1
    cfg = SystemConfig(M=M, N=N, L=L, T=1, K=N * L, channelKind="rayleigh")
    assert cfg.K * cfg.T == cfg.N * cfg.L
    assert validateIdentifiability(cfg).passed
    for _ in range(10):
        assertExactRecovery(cfg, rng)


def receiverRows(result, label):
    return result.aggregates[result.aggregates["receiver"] == label].set_index("snr_db")


def test_reference_dimensions_small_campaign():
    cfg = SystemConfig(snrGridDb=(10.0, 20.0, 30.0), runs=12, baseSeed=5)
    result = runSweep(cfg, ["tsb", "tals"], workers=4)
    tsbRows = receiverRows(result, "tsb")
    talsRows = receiverRows(result, "tals")
    balsRows = receiverRows(result, "bals")

    assert (result.aggregates["runs"] == cfg.runs).all()
    ratio = tsbRows["mean_iters"] / talsRows["mean_iters"]
    assert ((ratio <= 2) & (ratio >= 0.5)).all()
    assert ((tsbRows["mean_nmse_db"] - talsRows["mean_nmse_db"]).abs() <= 1.5).all()
    assert (balsRows["mean_nmse_db"] > tsbRows["mean_nmse_db"]).all()


@pytest.fixture(scope="module")
def referenceCampaign():
    cfg = SystemConfig(runs=200, baseSeed=7)
    return cfg, runSweep(cfg, ["tsb", "tals", "ls", "krf"], workers=8)


@pytest.mark.slow
class TestReferenceCampaign:
    def test_every_trial_succeeds(self, referenceCampaign):
        cfg, result = referenceCampaign
        assert (result.aggregates["runs"] == cfg.runs).all()

    def test_bals_trails_tals(self, referenceCampaign):
        _, result = referenceCampaign
        gap = receiverRows(result, "bals")["mean_nmse_db"] - receiverRows(result, "tals")[
            "mean_nmse_db"
        ]
        midToHigh = gap[gap.index >= 10.0]
        assert ((midToHigh >= 1.0) & (midToHigh <= 3.0)).all()

    def test_tsb_matches_tals(self, referenceCampaign):
        _, result = referenceCampaign
        gap = receiverRows(result, "tsb")["mean_nmse_db"] - receiverRows(result, "tals")[
            "mean_nmse_db"
        ]
        assert (gap.abs() <= 1.0).all()

    def test_symbol_error_rates_agree(self, referenceCampaign):
        cfg, result = referenceCampaign
        # one wrong symbol over the whole point
        slack = 1 / (cfg.runs * cfg.L * (cfg.T - 1))
        tsbSer = receiverRows(result, "tsb")["mean_ser"]
        talsSer = receiverRows(result, "tals")["mean_ser"]
        for snrDb in tsbSer.index[tsbSer.index >= 10.0]:
            assert tsbSer[snrDb] <= 2 * talsSer[snrDb] + slack
            assert talsSer[snrDb] <= 2 * tsbSer[snrDb] + slack

    def test_refinement_never_raises_median_error(self, referenceCampaign):
        _, result = referenceCampaign
        trials = result.trialsFrame()
        for label in ("tsb", "krf"):
            medians = trials[trials["receiver"] == label].groupby("snr_db")[
                ["nmse_raw", "nmse_refined"]
            ].median()
            assert (medians["nmse_refined"] <= medians["nmse_raw"]).all(), label

    def test_iteration_counts_match(self, referenceCampaign):
        _, result = referenceCampaign
        tsbIterations = receiverRows(result, "tsb")["mean_iters"]
        talsIterations = receiverRows(result, "tals")["mean_iters"]
        ratio = tsbIterations / talsIterations
        assert ((ratio <= 2) & (ratio >= 0.5)).all()

        trials = result.trialsFrame()
        for label in ("tsb", "tals"):
            medians = trials[trials["receiver"] == label].groupby("snr_db")["iterations"].median()
            assert medians.iloc[-1] <= medians.iloc[0], label

    def test_high_snr_accuracy(self, referenceCampaign):
        _, result = referenceCampaign
        rows = result.aggregates[result.aggregates["snr_db"] == 30.0].set_index("receiver")
        assert rows.loc["tsb", "mean_nmse_db"] <= -20
        assert rows.loc["krf", "mean_nmse_db"] <= rows.loc["ls", "mean_nmse_db"]
