import math

import numpy as np
import pytest

from udwharvest.errors import ConfigError, OrderingViolated
from udwharvest.field import SmearingProfile
from udwharvest.scenario import (
    CausalClass,
    DetectorParams,
    ScenarioConfig,
    ScenarioKind,
    WindowSpec,
    causal_relation,
    scenario_from_dict,
    window_pairs,
    window_value,
)


def make_config(**kw):
    profile = kw.pop("profile", SmearingProfile.uniform_disk(kw.pop("sigma", 1.0)))
    s = kw.pop("separation", 4.0)
    args = dict(
        det_a=DetectorParams(kw.pop("gap", 3.0), kw.pop("coupling", 1.0), profile, 0.0),
        det_b=DetectorParams(3.0, 1.0, profile, s),
        scenario=ScenarioKind(kw.pop("scenario", "PF")),
        spatial_dim=kw.pop("spatial_dim", 2),
        window_kind=kw.pop("window_kind", "delta"),
        eta=kw.pop("eta", 1.0),
        separation=s,
        offset=kw.pop("offset", 1e-5),
        branch_gap=kw.pop("branch_gap", 1.0),
        start_time=kw.pop("start_time", 0.0),
    )
    args["det_b"] = DetectorParams(args["det_a"].gap, args["det_a"].coupling, profile, s)
    args.update(kw)
    return ScenarioConfig(**args)


class TestWindows:
    def test_cosine_peak(self):
        w = WindowSpec("cosine", 2.0, 0.0)
        assert window_value(w, 0.0) == pytest.approx(1.0)

    def test_cosine_compact_support(self):
        w = WindowSpec("cosine", 2.0, 0.0)
        edge = 0.25 * math.pi * 2.0
        assert window_value(w, edge + 0.3) == 0.0
        assert window_value(w, -(edge + 5.0)) == 0.0
        assert window_value(w, edge) == pytest.approx(0.0, abs=1e-15)

    def test_delta_pointwise_convention(self):
        w = WindowSpec("delta", 1.0, 2.0)
        assert window_value(w, 1.9) == 0.0
        assert window_value(w, 2.0) == math.inf

    def test_event_enumeration_pf(self):
        cfg = make_config(offset=0.1, branch_gap=5.0)
        events = window_pairs(cfg)
        assert [(d, i, t) for d, i, t, _ in events] == [
            ("A", 0, 0.0),
            ("B", 0, 0.1),
            ("A", 1, 5.0),
            ("B", 1, 5.1),
        ]
        assert all(w == 1.0 for *_, w in events)

    def test_ds_half_coupling_weights(self):
        cfg = make_config(scenario="DS", offset=0.1, branch_gap=5.0)
        events = window_pairs(cfg)
        assert len(events) == 4
        assert all(w == 0.5 for *_, w in events)

    def test_ce_relabeling_invariance(self):
        # swapping branch labels 0<->1 together with A<->B leaves the CE
        # event set invariant
        cfg = make_config(scenario="CE", offset=0.25, branch_gap=3.0)
        events = {(t, cfg.detector(d).position) for d, i, t, _ in window_pairs(cfg)}
        swapped = set()
        for d, i, t, _ in window_pairs(cfg):
            other = "B" if d == "A" else "A"
            swapped.add((cfg.switch_time(other, 1 - i), cfg.detector(other).position))
        # the event multiset coincides branchwise up to the A<->B offset
        assert {round(t, 12) for t, _ in events} == {round(t, 12) for t, _ in swapped}


class TestOrdering:
    def test_pf_ordering_ok(self):
        make_config(offset=0.5, branch_gap=2.0).require_nonperturbative_ordering()

    def test_pf_ordering_violated(self):
        cfg = make_config(offset=3.0, branch_gap=1.0)
        with pytest.raises(OrderingViolated) as exc:
            cfg.require_nonperturbative_ordering()
        assert "T_A0" in str(exc.value)

    def test_ce_ordering(self):
        make_config(scenario="CE", offset=0.5, branch_gap=2.0).require_nonperturbative_ordering()
        with pytest.raises(OrderingViolated):
            make_config(scenario="CE", offset=4.0, branch_gap=2.0).require_nonperturbative_ordering()


class TestCausalRelation:
    def test_figure_condition_spacelike(self):
        # T < s - 2 sigma - offset with s > 2 sigma: all pairs spacelike
        cfg = make_config(sigma=1.0, offset=1e-5, separation=4.0, branch_gap=1.0)
        assert causal_relation(cfg) is CausalClass.SPACELIKE_ALL_BRANCHES

    def test_coincident_positions_timelike(self):
        cfg = make_config(separation=0.0, branch_gap=1.0)
        assert causal_relation(cfg) is CausalClass.TIMELIKE_SOME_BRANCH

    def test_pointlike_cosine_endpoint_check(self):
        # support pi*eta/2 < s keeps every pair spacelike at T=0
        eta = 1.0
        cfg = make_config(
            profile=SmearingProfile.pointlike(),
            window_kind="cosine",
            eta=eta,
            separation=2.0,
            branch_gap=0.0,
            offset=0.0,
        )
        assert math.pi * eta / 2 < 2.0
        assert causal_relation(cfg) is CausalClass.SPACELIKE_ALL_BRANCHES

    def test_gaussian_unclassifiable(self):
        cfg = make_config(profile=SmearingProfile.gaussian(1.0), spatial_dim=3)
        assert causal_relation(cfg) is CausalClass.NO_STRICT_CLASSIFICATION

    def test_symmetry_under_time_translation(self):
        a = make_config(branch_gap=2.0, start_time=0.0)
        b = make_config(branch_gap=2.0, start_time=17.3)
        assert causal_relation(a) is causal_relation(b)


class TestConfigParsing:
    BASE = {
        "detectors": {"gap": 3.0, "coupling": 1.0, "profile": "uniform_disk", "width": 1.0},
        "windows": {"kind": "delta", "eta": 1.0},
        "scenario": {
            "kind": "PF",
            "spatial_dim": 2,
            "separation": 4.0,
            "offset": 1e-5,
            "branch_gap": 1.0,
        },
    }

    def test_round_trip(self):
        cfg = scenario_from_dict(self.BASE)
        assert cfg.scenario is ScenarioKind.PF
        assert cfg.det_a.gap == 3.0
        assert cfg.det_b.position == 4.0
        assert cfg.window("B", 1).center == pytest.approx(1.0 + 1e-5)

    def test_unknown_key_rejected(self):
        bad = {k: dict(v) for k, v in self.BASE.items()}
        bad["scenario"]["typo_key"] = 1
        with pytest.raises(ConfigError):
            scenario_from_dict(bad)

    def test_unequal_needs_flag(self):
        bad = {k: dict(v) for k, v in self.BASE.items()}
        bad["detectors"]["b"] = {"gap": 2.0}
        with pytest.raises(ConfigError):
            scenario_from_dict(bad)
        ok = {k: dict(v) for k, v in self.BASE.items()}
        ok["detectors"]["allow_unequal"] = True
        ok["detectors"]["b"] = {"gap": 2.0}
        cfg = scenario_from_dict(ok)
        assert cfg.det_b.gap == 2.0
        assert not cfg.identical_detectors

    def test_dimension_profile_mismatch(self):
        bad = {k: dict(v) for k, v in self.BASE.items()}
        bad["scenario"]["spatial_dim"] = 3
        with pytest.raises(ConfigError):
            scenario_from_dict(bad)


class TestSchedules:
    def test_pf_and_ce_share_time_sets(self):
        pf = make_config(offset=0.3, branch_gap=2.0)
        ce = pf.with_scenario(ScenarioKind.CE)
        pf_times = sorted(t for _, _, t, _ in window_pairs(pf))
        ce_times = sorted(t for _, _, t, _ in window_pairs(ce))
        assert pf_times == pytest.approx(ce_times)

    def test_ce_cross_pairing(self):
        ce = make_config(scenario="CE", offset=0.3, branch_gap=2.0)
        assert ce.switch_time("B", 0) == pytest.approx(2.3)
        assert ce.switch_time("B", 1) == pytest.approx(0.3)
