"""Smearing profiles and vacuum correlators of the massless scalar field.

Conventions
-----------
The field mode expansion is normalised so that every momentum integral in
this package carries a (2pi)^-n factor:

    phi(x, t) = integral d^n k (2pi)^(-n/2) (2|k|)^(-1/2)
                  [ a_k e^{i(k.x - |k|t)} + h.c. ]

With that choice the smeared equal-point correlator of a Gaussian profile
of width sigma in 3+1 dimensions is 1/(4 pi^2 sigma^2), and the pointlike
closed-form two-point function is

    W(dx, dt) = (1/4 pi^2) / (dx^2 - (dt - i eps)^2).

Absolute magnitudes of detector matrix elements depend on this (2pi)
choice; every inequality, sign and zero-crossing the package reports is
invariant under the common rescaling.

All supported profiles are radially symmetric, so n-dimensional momentum
integrals reduce to radial ones: the angular average of e^{i k.dx} is
J0(k s) for n = 2 and sin(k s)/(k s) for n = 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import j0, j1

from .errors import UVDivergent
from .quadrature import (
    QuadratureResult,
    QuadratureSpec,
    TailStrategy,
    integrate_1d,
)

__all__ = [
    "SmearingProfile",
    "FieldConvention",
    "fourier_profile",
    "smeared_momentum_integral",
    "correlator_kernel",
    "pointlike_wightman",
]

_PROFILE_KINDS = ("pointlike", "gaussian", "uniform_disk", "uniform_ball")


@dataclass(frozen=True)
class SmearingProfile:
    """Unit-normalised spatial profile S(x) of a detector.

    * pointlike      S = delta^n(x)
    * gaussian       S = exp(-x^2/sigma^2) / (sigma sqrt(pi))^n
    * uniform_disk   S = indicator(|x| <= sigma) / (pi sigma^2), n = 2
    * uniform_ball   S = indicator(|x| <= sigma) / (4/3 pi sigma^3), n = 3

    The Fourier transform S~(k) = integral S(x) e^{i k.x} d^n x satisfies
    S~(0) = 1 for every kind because the profiles integrate to one.
    """

    kind: str
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in _PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind != "pointlike" and self.sigma <= 0:
            raise ValueError("extended profiles need sigma > 0")

    @classmethod
    def pointlike(cls):
        return cls("pointlike", 0.0)

    @classmethod
    def gaussian(cls, sigma):
        return cls("gaussian", float(sigma))

    @classmethod
    def uniform_disk(cls, sigma):
        return cls("uniform_disk", float(sigma))

    @classmethod
    def uniform_ball(cls, sigma):
        return cls("uniform_ball", float(sigma))

    @property
    def compact_radius(self):
        """Support radius: 0 for pointlike, sigma for disk/ball, None when
        the profile has no compact support (gaussian)."""
        if self.kind == "pointlike":
            return 0.0
        if self.kind in ("uniform_disk", "uniform_ball"):
            return self.sigma
        return None

    def fourier(self, k):
        """S~(|k|), vectorised over |k| >= 0."""
        k = np.asarray(k, dtype=float)
        if self.kind == "pointlike":
            return np.ones_like(k)
        z = k * self.sigma
        if self.kind == "gaussian":
            return np.exp(-0.25 * z * z)
        small = np.abs(z) < 1e-6
        zs = np.where(small, 1.0, z)
        if self.kind == "uniform_disk":
            out = 2.0 * j1(zs) / zs
            series = 1.0 - z * z / 8.0
        else:  # uniform_ball
            out = 3.0 * (np.sin(zs) - zs * np.cos(zs)) / zs**3
            series = 1.0 - z * z / 10.0
        return np.where(small, series, out)

    # --- quadrature hints -------------------------------------------------

    def cutoff_momentum(self):
        """|k| beyond which |S~|^2 is negligible, or None if only algebraic
        decay is available (compact profiles)."""
        if self.kind == "gaussian":
            # |S~|^2 = exp(-sigma^2 k^2 / 2) ~ 1e-22 at this k
            return 10.5 / self.sigma
        return None

    def tail_oscillation(self):
        """Frequency (in k) of the large-k ringing of S~(k) itself; a
        product S~_a S~_b rings at the sum of the factors' frequencies."""
        if self.kind in ("uniform_disk", "uniform_ball"):
            return self.sigma
        return 0.0


@dataclass(frozen=True)
class FieldConvention:
    """Dimension and regulator choices for field correlators.

    epsilon_scale fixes the top of the i-epsilon ladder used when the
    pointlike closed-form correlator is integrated against windows; the
    ladder is {1, 1/2, 1/4} x epsilon_scale x (window width).
    """

    spatial_dim: int = 3
    epsilon_scale: float = 1e-3

    def __post_init__(self):
        if self.spatial_dim not in (2, 3):
            raise ValueError("spatial_dim must be 2 or 3")
        if self.epsilon_scale <= 0:
            raise ValueError("epsilon_scale must be positive")

    @property
    def momentum_measure_normalization(self):
        return (2.0 * math.pi) ** (-self.spatial_dim)


def fourier_profile(profile: SmearingProfile, k):
    """Fourier transform S~(|k|) of a smearing profile."""
    return profile.fourier(k)


def _radial_prefactor(n, k):
    # (2pi)^-n * (unit sphere area) * k^(n-1) / (2k)
    if n == 2:
        return np.full_like(k, 1.0 / (4.0 * math.pi))
    return k / (4.0 * math.pi**2)


def _angular_average(n, k, s):
    if s == 0.0:
        return np.ones_like(k)
    z = k * s
    if n == 2:
        return j0(z)
    return np.sinc(z / math.pi)


def smeared_momentum_integral(
    profile_a,
    n,
    weight=None,
    *,
    profile_b=None,
    separation=0.0,
    weight_oscillation=0.0,
    spec=None,
):
    """integral d^n k (2pi)^-n S~_a(k) S~_b(k) / (2|k|) weight(|k|) <e^{ik.dx}>.

    The angular part is reduced analytically (J0 for n = 2, sinc for
    n = 3); the radial integral is adaptive, with the conditionally
    convergent tails of compact profiles partitioned at half-periods of the
    combined oscillation (profile ringing + J0/sinc + the declared
    ``weight_oscillation``) and accelerated.

    ``weight`` may be None (constant 1) or a vectorised callable of |k|.
    Pointlike-pointlike inputs with no decaying weight are UV divergent and
    reported as such.
    """
    if profile_b is None:
        profile_b = profile_a
    if n not in (2, 3):
        raise ValueError("spatial dimension must be 2 or 3")
    s = float(separation)
    if s < 0:
        raise ValueError("separation must be >= 0")
    if spec is None:
        spec = QuadratureSpec()

    cut_a = profile_a.cutoff_momentum()
    cut_b = profile_b.cutoff_momentum()
    cutoffs = [c for c in (cut_a, cut_b) if c is not None]
    osc = (
        profile_a.tail_oscillation()
        + profile_b.tail_oscillation()
        + (s if n == 2 or s > 0 else 0.0)
        + abs(float(weight_oscillation))
    )

    def integrand(k):
        base = (
            _radial_prefactor(n, k)
            * profile_a.fourier(k)
            * profile_b.fourier(k)
            * _angular_average(n, k, s)
        )
        if weight is None:
            return base.astype(complex)
        return base * np.asarray(weight(k), dtype=complex)

    if cutoffs:
        # super-exponential decay: a finite interval suffices
        k_max = min(cutoffs)
        return integrate_1d(integrand, 0.0, k_max, spec)

    both_algebraic = profile_a.kind != "pointlike" and profile_b.kind != "pointlike"
    if not both_algebraic and profile_a.kind == "pointlike" and profile_b.kind == "pointlike":
        if osc <= 0.0:
            raise UVDivergent(
                "pointlike-pointlike momentum integral with non-decaying "
                "weight diverges at large |k|"
            )

    if osc <= 0.0 and both_algebraic:
        # |S~|^2 of compact profiles decays algebraically but monotonically
        # only on average; there is still ringing at 2 sigma, so osc > 0
        # whenever a compact profile is present.  Reaching here means both
        # profiles are gaussian-free and non-oscillatory, which cannot
        # happen; guard anyway.
        raise UVDivergent("momentum integral has no decay mechanism")

    tail_spec = QuadratureSpec(
        abs_tol=spec.abs_tol,
        rel_tol=spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
        tail_strategy=TailStrategy.HALF_PERIOD,
    )
    sigma_scale = max(
        [p.sigma for p in (profile_a, profile_b) if p.kind != "pointlike"],
        default=1.0,
    )
    k0 = max(14.0 / sigma_scale, 8.0 * math.pi / osc)
    return integrate_1d(
        integrand, 0.0, np.inf, tail_spec, tail_frequency=osc, tail_start=k0
    )


def correlator_kernel(
    profile_a,
    profile_b,
    n,
    separation,
    tau,
    spec=None,
):
    """Coupling-free smeared Wightman kernel

        K = integral d^n k (2pi)^-n S~_a S~_b / (2|k|) <e^{ik.dx}> e^{-i|k| tau}

    evaluated with dx = separation and time argument tau equal to the time
    of the left operator minus the right one.  Every delta-window matrix
    element and every displacement-overlap integral is built from this.
    """
    t = float(tau)
    if t == 0.0:
        return smeared_momentum_integral(
            profile_a,
            n,
            None,
            profile_b=profile_b,
            separation=separation,
            spec=spec,
        )
    return smeared_momentum_integral(
        profile_a,
        n,
        lambda k: np.exp(-1j * k * t),
        profile_b=profile_b,
        separation=separation,
        weight_oscillation=abs(t),
        spec=spec,
    )


def pointlike_wightman(separation, dt, eps, n=3):
    """Closed-form vacuum two-point function of pointlike operators in 3+1:

        W = (1/4 pi^2) / (dx^2 - (dt - i eps)^2)

    ``dt`` is the time of the left operator minus the right one; ``dt`` may
    be an array.  With eps = 0 the expression is evaluated directly and a
    domain error is raised if any point sits exactly on the light cone.
    """
    if n != 3:
        raise ValueError("closed-form pointlike correlator implemented for n=3")
    dx = float(separation)
    dt = np.asarray(dt, dtype=float)
    denom = dx * dx - (dt - 1j * float(eps)) ** 2
    if eps == 0.0 and np.any(denom == 0):
        raise ZeroDivisionError(
            "pointlike correlator evaluated on the light cone with eps = 0"
        )
    return (1.0 / (4.0 * math.pi**2)) / denom
