"""Detector pairs, switching windows and the three control scenarios.

A scenario fixes four switching windows, one per (detector, branch) pair:

* PF   both detectors fire on the same time slice in each branch
       (T_B,i = T_A,i + offset), the control superposes two slices;
* CE   the firing order of the detectors is opposite in the two branches
       (T_B,i = T_A,0 + (1-i) branch_gap + offset);
* DS   no control: each detector really fires at both of its times, with
       the coupling halved.

All three use the same four switching times for equal parameters, which
is what makes the double-switch decomposition into the PF and CE
projected states exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import ConfigError, OrderingViolated
from .field import SmearingProfile

__all__ = [
    "ScenarioKind",
    "CausalClass",
    "DetectorParams",
    "WindowSpec",
    "ScenarioConfig",
    "window_value",
    "window_pairs",
    "causal_relation",
    "scenario_from_dict",
]


class ScenarioKind(str, Enum):
    PF = "PF"
    CE = "CE"
    DS = "DS"


class CausalClass(str, Enum):
    SPACELIKE_ALL_BRANCHES = "spacelike_all_branches"
    TIMELIKE_SOME_BRANCH = "timelike_some_branch"
    LIGHTLIKE_TOUCHING = "lightlike_touching"
    NO_STRICT_CLASSIFICATION = "no_strict_classification"


@dataclass(frozen=True)
class DetectorParams:
    """Energy gap, coupling, spatial profile and position of one detector."""

    gap: float
    coupling: float
    profile: SmearingProfile
    position: float  # coordinate along the separation axis

    def __post_init__(self):
        if self.coupling < 0:
            raise ConfigError("coupling must be >= 0")


@dataclass(frozen=True)
class WindowSpec:
    """Switching window chi(t).

    delta:  chi(t) = eta * delta(t - center); support is the single point.
    cosine: chi(t) = cos(2 (t - center)/eta) on |t - center| <= pi eta / 4,
            zero outside; support length is pi eta / 2.
    """

    kind: str
    eta: float
    center: float

    def __post_init__(self):
        if self.kind not in ("delta", "cosine"):
            raise ConfigError(f"unknown window kind {self.kind!r}")
        if self.eta <= 0:
            raise ConfigError("window eta must be > 0")

    @property
    def half_support(self):
        return 0.0 if self.kind == "delta" else 0.25 * math.pi * self.eta

    @property
    def support(self):
        return (self.center - self.half_support, self.center + self.half_support)

    def value(self, t):
        return window_value(self, t)


def window_value(w: WindowSpec, t):
    """Pointwise window value chi(t).

    A delta window has no finite pointwise value on its support; by
    convention this returns 0 away from the center and inf at it.
    """
    import numpy as np

    t = np.asarray(t, dtype=float)
    if w.kind == "delta":
        out = np.where(t == w.center, np.inf, 0.0)
        return out if out.shape else float(out)
    u = t - w.center
    inside = np.abs(u) <= w.half_support
    out = np.where(inside, np.cos(2.0 * u / w.eta), 0.0)
    return out if out.shape else float(out)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one two-detector run."""

    det_a: DetectorParams
    det_b: DetectorParams
    scenario: ScenarioKind
    spatial_dim: int
    window_kind: str
    eta: float
    separation: float
    offset: float
    branch_gap: float
    start_time: float = 0.0

    def __post_init__(self):
        if self.spatial_dim not in (2, 3):
            raise ConfigError("spatial_dim must be 2 or 3")
        if self.separation < 0:
            raise ConfigError("separation must be >= 0")

    # -- window schedule ---------------------------------------------------

    def switch_time(self, detector, branch):
        """Window center T_{D,i} under the scenario parametrisation."""
        t0 = self.start_time
        if detector == "A":
            return t0 + branch * self.branch_gap
        if self.scenario is ScenarioKind.CE:
            return t0 + (1 - branch) * self.branch_gap + self.offset
        # PF and DS share the slice pairing
        return t0 + branch * self.branch_gap + self.offset

    def window(self, detector, branch) -> WindowSpec:
        return WindowSpec(self.window_kind, self.eta, self.switch_time(detector, branch))

    def detector(self, name) -> DetectorParams:
        return self.det_a if name == "A" else self.det_b

    @property
    def identical_detectors(self):
        da, db = self.det_a, self.det_b
        return (
            da.gap == db.gap
            and da.coupling == db.coupling
            and da.profile == db.profile
        )

    def require_nonperturbative_ordering(self):
        """The exact delta-window assemblies fix one switching order per
        branch; reject schedules that break it, naming the times."""
        ta0, ta1 = (self.switch_time("A", i) for i in (0, 1))
        tb0, tb1 = (self.switch_time("B", i) for i in (0, 1))
        if self.scenario is ScenarioKind.CE:
            ok = ta0 <= tb1 <= ta1 <= tb0
            wanted = "T_A0 <= T_B1 <= T_A1 <= T_B0"
        else:
            ok = ta0 <= tb0 <= ta1 <= tb1
            wanted = "T_A0 <= T_B0 <= T_A1 <= T_B1"
        if not ok:
            raise OrderingViolated(
                f"{self.scenario.value} needs {wanted}; got "
                f"T_A0={ta0:g}, T_A1={ta1:g}, T_B0={tb0:g}, T_B1={tb1:g}"
            )

    def with_scenario(self, kind: ScenarioKind) -> "ScenarioConfig":
        return replace(self, scenario=kind)


def window_pairs(config: ScenarioConfig):
    """Activation events (detector, branch, time, coupling_weight), sorted
    by time.  The double-switch scenario keeps all four events and halves
    the coupling of each."""
    weight = 0.5 if config.scenario is ScenarioKind.DS else 1.0
    events = [
        (d, i, config.switch_time(d, i), weight)
        for d in ("A", "B")
        for i in (0, 1)
    ]
    events.sort(key=lambda e: (e[2], e[0], e[1]))
    return events


def causal_relation(config: ScenarioConfig) -> CausalClass:
    """Classify the causal relation of all cross-detector activation
    regions, across branches as well as within them.

    Regions are (time-interval) x (ball of the profile's support radius).
    Profiles without compact support (gaussian) admit no strict statement
    and get the distinguished no-classification value.
    """
    ra = config.det_a.profile.compact_radius
    rb = config.det_b.profile.compact_radius
    if ra is None or rb is None:
        return CausalClass.NO_STRICT_CLASSIFICATION

    gap = config.separation - ra - rb
    touching = False
    for i in (0, 1):
        wa = config.window("A", i)
        for j in (0, 1):
            wb = config.window("B", j)
            reach = abs(wa.center - wb.center) + wa.half_support + wb.half_support
            if gap < reach:
                return CausalClass.TIMELIKE_SOME_BRANCH
            if gap == reach:
                touching = True
    return CausalClass.LIGHTLIKE_TOUCHING if touching else CausalClass.SPACELIKE_ALL_BRANCHES


# -- config files ----------------------------------------------------------

_PROFILE_NAMES = {
    "pointlike": lambda sigma: SmearingProfile.pointlike(),
    "gaussian": SmearingProfile.gaussian,
    "uniform_disk": SmearingProfile.uniform_disk,
    "uniform_ball": SmearingProfile.uniform_ball,
}


def _reject_unknown(table, allowed, where):
    unknown = set(table) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in [{where}]")


def scenario_from_dict(data: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from parsed config-file data.

    Expected tables: [detectors] (gap, coupling, profile, width,
    allow_unequal, optional [detectors.b] overrides) and [scenario]
    (kind, spatial_dim, separation, offset, branch_gap, start_time) plus
    [windows] (kind, eta).  Unknown keys are rejected.
    """
    try:
        det = dict(data["detectors"])
        win = dict(data["windows"])
        sc = dict(data["scenario"])
    except KeyError as missing:
        raise ConfigError(f"missing config table {missing}") from None

    b_over = det.pop("b", None)
    _reject_unknown(det, {"gap", "coupling", "profile", "width", "allow_unequal"}, "detectors")
    _reject_unknown(win, {"kind", "eta"}, "windows")
    _reject_unknown(
        sc,
        {"kind", "spatial_dim", "separation", "offset", "branch_gap", "start_time"},
        "scenario",
    )

    profile_name = det.get("profile", "gaussian")
    if profile_name not in _PROFILE_NAMES:
        raise ConfigError(f"unknown profile {profile_name!r}")
    width = float(det.get("width", 0.0))
    profile = _PROFILE_NAMES[profile_name](width)

    n = int(sc.get("spatial_dim", 3))
    if profile_name == "uniform_disk" and n != 2:
        raise ConfigError("uniform_disk is a planar (spatial_dim = 2) profile")
    if profile_name == "uniform_ball" and n != 3:
        raise ConfigError("uniform_ball needs spatial_dim = 3")

    separation = float(sc.get("separation", 0.0))
    gap = float(det.get("gap", 1.0))
    coupling = float(det.get("coupling", 1.0))
    det_a = DetectorParams(gap, coupling, profile, 0.0)
    det_b = DetectorParams(gap, coupling, profile, separation)

    if b_over is not None:
        if not det.get("allow_unequal", False):
            raise ConfigError(
                "[detectors.b] overrides need detectors.allow_unequal = true"
            )
        b_over = dict(b_over)
        _reject_unknown(b_over, {"gap", "coupling", "profile", "width"}, "detectors.b")
        b_profile = profile
        if "profile" in b_over or "width" in b_over:
            b_name = b_over.get("profile", profile_name)
            if b_name not in _PROFILE_NAMES:
                raise ConfigError(f"unknown profile {b_name!r}")
            b_profile = _PROFILE_NAMES[b_name](float(b_over.get("width", width)))
        det_b = DetectorParams(
            float(b_over.get("gap", gap)),
            float(b_over.get("coupling", coupling)),
            b_profile,
            separation,
        )

    kind_name = sc.get("kind", "PF")
    try:
        kind = ScenarioKind(kind_name)
    except ValueError:
        raise ConfigError(f"unknown scenario kind {kind_name!r}") from None

    return ScenarioConfig(
        det_a=det_a,
        det_b=det_b,
        scenario=kind,
        spatial_dim=n,
        window_kind=win.get("kind", "delta"),
        eta=float(win.get("eta", 1.0)),
        separation=separation,
        offset=float(sc.get("offset", 0.0)),
        branch_gap=float(sc.get("branch_gap", 0.0)),
        start_time=float(sc.get("start_time", 0.0)),
    )
