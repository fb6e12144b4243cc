"""Deterministic adaptive quadrature for damped and oscillatory integrals.

Every correlator in this package reduces to one- or two-dimensional
integrals of smooth-except-near-lightcone complex integrands.  The engines
here are built around a vectorised 15-point Gauss-Kronrod rule:

* ``integrate_1d`` subdivides breadth-first, evaluating all pending cells
  in batched calls to the integrand.  Infinite upper limits are handled
  either by a decay-preserving rational substitution (default) or, for
  conditionally convergent oscillatory tails, by partitioning the tail at
  half-periods of a caller-declared phase frequency and accelerating the
  partial sums with Wynn's epsilon algorithm.

* ``integrate_2d`` runs an anisotropic tensor-product version of the same
  scheme: a failing cell is split along the axis that dominates its error
  indicator, so quasi-one-dimensional structure (a near-singular line
  aligned with an axis) costs close to 1D work.

Integrands must be vectorised: they receive numpy arrays and return arrays
of matching shape (real or complex).

Determinism: evaluation and accumulation orders are fixed functions of the
inputs, so repeated calls produce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonConvergence

__all__ = [
    "TailStrategy",
    "QuadratureSpec",
    "QuadratureResult",
    "integrate_1d",
    "integrate_2d",
    "integrate_2d_triangle",
    "wynn_epsilon",
]


class TailStrategy(str, Enum):
    NONE = "none"
    HALF_PERIOD = "half_period_partition_with_acceleration"


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and budget settings for one integral."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 4096
    tail_strategy: TailStrategy = TailStrategy.NONE

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def tolerance(self, scale: float) -> float:
        return max(self.abs_tol, self.rel_tol * scale)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    evaluations: int
    converged: bool

    def __post_init__(self):
        if self.error_estimate < 0:
            raise ValueError("error_estimate must be nonnegative")


# 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 constants).
_XGK_HALF = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK_HALF = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG_HALF = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# Full 15-node arrays on [-1, 1], ascending.
_NODES = np.concatenate([-_XGK_HALF[:-1], _XGK_HALF[::-1]])
_WK = np.concatenate([_WGK_HALF[:-1], _WGK_HALF[::-1]])
# The embedded Gauss rule uses Kronrod nodes 1, 3, ..., 13.
_GAUSS_IDX = np.arange(1, 15, 2)
_WGAUSS = np.concatenate([_WG_HALF[:-1], _WG_HALF[::-1]])


def _eval_cells_1d(f, lo, hi):
    """K15 value and K15-G7 error for a batch of intervals."""
    if lo.size == 0:
        return np.zeros(0, complex), np.zeros(0), 0
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    k15 = half * (vals @ _WK)
    g7 = half * (vals[:, _GAUSS_IDX] @ _WGAUSS)
    return k15, np.abs(k15 - g7), x.size


def _adaptive_finite_1d(f, a, b, spec, split_points=()):
    """Breadth-first adaptive K15/G7 on a finite interval."""
    edges = sorted({float(a), float(b), *(float(p) for p in split_points if a < p < b)})
    lo = np.asarray(edges[:-1])
    hi = np.asarray(edges[1:])
    vals, errs, neval = _eval_cells_1d(f, lo, hi)

    while True:
        total = vals.sum()
        toterr = float(errs.sum())
        tol = spec.tolerance(abs(total))
        if toterr <= tol:
            return total, toterr, neval
        if lo.size > spec.max_subdivisions:
            raise NonConvergence(
                f"1d quadrature exceeded {spec.max_subdivisions} intervals "
                f"(error {toterr:.3e} > tol {tol:.3e})",
                result=QuadratureResult(total, toterr, neval, False),
            )
        cut = tol / (2.0 * lo.size)
        split = errs > cut
        if not split.any():
            split = errs >= errs.max()
        mids = 0.5 * (lo[split] + hi[split])
        child_lo = np.concatenate([lo[split], mids])
        child_hi = np.concatenate([mids, hi[split]])
        child_vals, child_errs, extra = _eval_cells_1d(f, child_lo, child_hi)
        lo = np.concatenate([lo[~split], child_lo])
        hi = np.concatenate([hi[~split], child_hi])
        vals = np.concatenate([vals[~split], child_vals])
        errs = np.concatenate([errs[~split], child_errs])
        neval += extra


def wynn_epsilon(partial_sums):
    """Diagonal (even-column) estimates of Wynn's epsilon table.

    Accelerates sequences whose tails are mixtures of geometric components,
    which is what half-period partial sums of multi-frequency oscillatory
    tails look like.  Returns the successive extrapolated values; the last
    entries are the best available.  Safe for complex input.
    """
    cur = [complex(v) for v in partial_sums]
    if not cur:
        return []
    prev = [0j] * (len(cur) + 1)
    diag = [cur[-1]]
    col = 0
    while len(cur) >= 2:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                nxt.append(prev[i + 1])
            else:
                nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur:
            diag.append(cur[-1])
    return diag


def levin_u(segment_values, beta=1.0):
    """Levin u-transform estimates for the series with the given terms.

    Complements Wynn's epsilon: the u-transform converges fast on the
    monotone algebraically-decaying component that half-period partitions
    of Bessel-type tails leave behind, where epsilon stalls.  Returns the
    successive highest-order estimates (one per added term).
    """
    terms = [complex(v) for v in segment_values]
    numer = []
    denom = []
    out = []
    s = 0j
    for n, a in enumerate(terms):
        s += a
        omega = (beta + n) * a
        if omega == 0:
            omega = 1e-300
        term = 1.0 / (beta + n)
        denom.append(term / omega)
        numer.append(s * denom[n])
        if n > 0:
            ratio = (beta + n - 1) * term
            for j in range(1, n + 1):
                fact = (n - j + beta) * term
                numer[n - j] = numer[n - j + 1] - fact * numer[n - j]
                denom[n - j] = denom[n - j + 1] - fact * denom[n - j]
                term *= ratio
        if abs(denom[0]) < 1e-300:
            out.append(out[-1] if out else s)
        else:
            out.append(numer[0] / denom[0])
    return out


def _plateau_estimate(seq):
    """Pick the self-consistency plateau of an extrapolation sequence.

    Acceleration estimates improve and then degrade once floating-point
    cancellation takes over; the most trustworthy value is where
    consecutive estimates agree best.  Returns (error, estimate) or None.
    """
    if len(seq) < 4:
        return None
    arr = np.asarray(seq, dtype=complex)
    diffs = np.abs(np.diff(arr))
    scale = max(np.max(np.abs(arr)), 1e-300)
    i = int(np.argmin(diffs[2:]) + 2)
    # Harden against a narrow random walk faking a plateau: the spread of
    # the trailing estimates bounds the walk width.
    tail = arr[max(i - 2, 0) : min(i + 3, arr.size)]
    spread = float(np.max(np.abs(tail[:, None] - tail[None, :])))
    err = max(float(diffs[i]), 0.5 * spread, 1e-16 * scale)
    return err, complex(arr[i + 1])


def _accelerated_segments(f, start, h, spec, eval_cost=1, max_segments=256):
    """Half-period partial sums of f over [start, inf), extrapolated with
    Wynn's epsilon algorithm and the Levin u-transform (plateau-picked,
    smaller internal error wins).

    A tail whose raw segment contributions do not shrink is reported as
    NonConvergence rather than silently Abel-summed.
    """
    block = 16
    seg_vals = []
    seg_errs = 0.0
    neval = 0
    best = None

    for m0 in range(0, max_segments, block):
        lo = start + h * np.arange(m0, m0 + block, dtype=float)
        hi = lo + h
        vals, errs, extra = _eval_cells_1d(f, lo, hi)
        neval += extra * eval_cost
        seg_errs += float(errs.sum())
        seg_vals.extend(vals.tolist())

        quarter = max(4, len(seg_vals) // 4)
        mags = np.abs(seg_vals)
        early = float(np.median(mags[:quarter]))
        late = float(np.median(mags[-quarter:]))
        decaying = late < 0.98 * early or late <= spec.abs_tol
        if len(seg_vals) >= 2 * block and not decaying:
            raise NonConvergence(
                "oscillatory tail segments are not decaying "
                f"(|seg| ~ {late:.3e}); integral treated as divergent",
                result=QuadratureResult(
                    complex(np.sum(seg_vals)),
                    float("inf") if best is None else best[1],
                    neval,
                    False,
                ),
            )

        sums = np.cumsum(seg_vals)
        if decaying:
            candidates = []
            # The Levin recursion loses conditioning on long inputs.
            for seq in (wynn_epsilon(sums), levin_u(seg_vals[:48])):
                cand = _plateau_estimate(seq)
                if cand is not None:
                    candidates.append(cand)
            if candidates:
                acc_err, est = min(candidates, key=lambda c: c[0])
                best = (est, acc_err + seg_errs, neval)
                tol = spec.tolerance(abs(est))
                if acc_err <= max(tol, 4.0 * seg_errs, 1e-15 * float(np.max(np.abs(sums)))):
                    return best

    est, err, _ = (
        best if best is not None else (complex(np.sum(seg_vals)), seg_errs, neval)
    )
    raise NonConvergence(
        f"oscillatory tail acceleration stalled after {max_segments} segments "
        f"(error {err:.3e})",
        result=QuadratureResult(est, err, neval, False),
    )


def _oscillatory_tail(f, start, frequency, spec, depth=0, eval_cost=1):
    """Value of the tail integral over [start, +inf) for an oscillatory,
    decaying integrand.

    Half-period partial sums accelerate cleanly only when the integrand is
    a mixture of oscillations and a fast-falling mean; products of
    Bessel-type factors leave a slowly-decaying zero-frequency part plus
    ringing at several beat frequencies, on which the accelerators
    stagnate.  The integrand is split as f = fbar + (f - fbar), where fbar
    averages f over one full period of the declared frequency:

    * f - fbar has zero local mean, so its partial sums are a mixture of
      decaying geometric components, the accelerators' home turf;

    * fbar keeps the mean plus ringing at the surviving beat frequencies.
      It is summed directly when the accelerators manage, and otherwise
      split again at half the frequency (the wider window wipes out the
      next band of beats), until the remainder cooperates.
    """
    if frequency <= 0:
        raise ValueError("tail oscillation frequency must be positive")
    h = math.pi / frequency
    avg_nodes = h * _NODES
    mean_w = 0.5 * _WK

    def f_mean(k):
        k = np.asarray(k, dtype=float)
        pts = k[:, None] + avg_nodes[None, :]
        vals = np.asarray(f(pts.ravel()), dtype=complex).reshape(pts.shape)
        return vals @ mean_w

    def f_osc(k):
        return np.asarray(f(k), dtype=complex) - f_mean(k)

    osc_val, osc_err, osc_ne = _accelerated_segments(
        f_osc, start, h, spec, eval_cost * 17
    )

    mono_spec = QuadratureSpec(
        abs_tol=0.5 * spec.abs_tol,
        rel_tol=0.5 * spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
        tail_strategy=TailStrategy.NONE,
    )
    mono = None
    try:
        mono = _accelerated_segments(
            f_mean, start, h, mono_spec, eval_cost * 16, max_segments=64
        )
    except NonConvergence:
        mono = None
    if mono is None:
        # ring-free means compress well; cap the budget so a still-ringing
        # mean fails over to the recursive split quickly
        capped = QuadratureSpec(
            abs_tol=mono_spec.abs_tol,
            rel_tol=mono_spec.rel_tol,
            max_subdivisions=min(1024, mono_spec.max_subdivisions),
        )
        try:
            far = integrate_1d(f_mean, start, np.inf, capped)
            mono = (far.value, far.error_estimate, far.evaluations * 16 * eval_cost)
        except NonConvergence:
            mono = None
    if mono is None and depth < 3:
        try:
            mono = _oscillatory_tail(
                f_mean, start, 0.5 * frequency, spec, depth + 1, eval_cost * 16
            )
        except NonConvergence as exc:
            err = exc.result.error_estimate
            mono = (
                exc.result.value,
                err if math.isfinite(err) else abs(exc.result.value),
                exc.result.evaluations,
            )
    if mono is None:
        # last resort: compress the far range; accept the achieved error
        try:
            far = integrate_1d(f_mean, start, np.inf, mono_spec)
            mono = (far.value, far.error_estimate, far.evaluations * 16 * eval_cost)
        except NonConvergence as exc:
            mono = (
                exc.result.value,
                exc.result.error_estimate,
                exc.result.evaluations * 16 * eval_cost,
            )

    mono_val, mono_err, mono_ne = mono
    return mono_val + osc_val, mono_err + osc_err, mono_ne + osc_ne


def integrate_1d(
    f,
    a,
    b,
    spec=QuadratureSpec(),
    *,
    split_points=(),
    tail_frequency=None,
    tail_start=None,
):
    """Adaptive integral of a vectorised complex integrand over (a, b).

    ``b`` may be ``numpy.inf``.  With the default tail strategy an infinite
    upper limit is mapped to a finite one by x = a + t/(1-t), which is
    appropriate for absolutely convergent (decaying) integrands.  With
    ``TailStrategy.HALF_PERIOD`` the range [tail_start, inf) is partitioned
    at half-periods of ``tail_frequency`` and the partial sums accelerated;
    use this for conditionally convergent oscillatory tails.

    ``split_points`` are interior abscissae where the integrand is known to
    be non-smooth; the initial partition is cut there.

    Raises NonConvergence when the subdivision or segment budget runs out,
    with the partial result attached to the exception.
    """
    a = float(a)
    if not math.isinf(b):
        val, err, ne = _adaptive_finite_1d(f, a, float(b), spec, split_points)
        return QuadratureResult(val, err, ne, True)

    if spec.tail_strategy is TailStrategy.HALF_PERIOD:
        if tail_frequency is None:
            raise ValueError("HALF_PERIOD tail strategy needs tail_frequency")
        k0 = float(tail_start) if tail_start is not None else a + 8.0 * math.pi / tail_frequency
        # the core, the tail mean and the tail oscillation each get a
        # fraction of the budget so their errors sum within tolerance
        share = QuadratureSpec(
            abs_tol=0.25 * spec.abs_tol,
            rel_tol=0.25 * spec.rel_tol,
            max_subdivisions=spec.max_subdivisions,
            tail_strategy=spec.tail_strategy,
        )
        core_val, core_err, core_ne = _adaptive_finite_1d(f, a, k0, share, split_points)
        tail_val, tail_err, tail_ne = _oscillatory_tail(f, k0, tail_frequency, share)
        total = core_val + tail_val
        toterr = core_err + tail_err
        if toterr > spec.tolerance(abs(total)):
            raise NonConvergence(
                f"tail-accelerated integral reached error {toterr:.3e}, above "
                f"tolerance {spec.tolerance(abs(total)):.3e}",
                result=QuadratureResult(total, toterr, core_ne + tail_ne, False),
            )
        return QuadratureResult(total, toterr, core_ne + tail_ne, True)

    # Rational decay substitution: x = a + t/(1-t), dx = dt/(1-t)^2.
    def g(t):
        one_minus = 1.0 - t
        x = a + t / one_minus
        return np.asarray(f(x), dtype=complex) / one_minus**2

    val, err, ne = _adaptive_finite_1d(g, 0.0, 1.0, spec, split_points=())
    return QuadratureResult(val, err, ne, True)


# ---------------------------------------------------------------------------
# two-dimensional integration


def _eval_cells_2d(f, ax, bx, ay, by):
    """Tensor K15 values plus per-axis error indicators for cell batches."""
    n = ax.size
    if n == 0:
        z = np.zeros(0)
        return np.zeros(0, complex), z, z, 0
    midx = 0.5 * (ax + bx)
    halfx = 0.5 * (bx - ax)
    midy = 0.5 * (ay + by)
    halfy = 0.5 * (by - ay)
    x = midx[:, None] + halfx[:, None] * _NODES[None, :]
    y = midy[:, None] + halfy[:, None] * _NODES[None, :]
    xx = np.repeat(x[:, :, None], 15, axis=2)
    yy = np.repeat(y[:, None, :], 15, axis=1)
    vals = np.asarray(f(xx.ravel(), yy.ravel()), dtype=complex).reshape(n, 15, 15)
    area = halfx * halfy
    kk = area * np.einsum("i,nij,j->n", _WK, vals, _WK)
    gk = area * np.einsum("i,nij,j->n", _WGAUSS, vals[:, _GAUSS_IDX, :], _WK)
    kg = area * np.einsum("i,nij,j->n", _WK, vals[:, :, _GAUSS_IDX], _WGAUSS)
    err_x = np.abs(kk - gk)  # error dominated by x-variation
    err_y = np.abs(kk - kg)
    return kk, err_x, err_y, vals.size


def _adaptive_2d(f, ax, bx, ay, by, spec):
    """Anisotropic breadth-first tensor quadrature over one rectangle."""
    ax = np.atleast_1d(np.asarray(ax, float))
    bx = np.atleast_1d(np.asarray(bx, float))
    ay = np.atleast_1d(np.asarray(ay, float))
    by = np.atleast_1d(np.asarray(by, float))
    vals, ex, ey, neval = _eval_cells_2d(f, ax, bx, ay, by)

    while True:
        total = vals.sum()
        errs = ex + ey
        toterr = float(errs.sum())
        tol = spec.tolerance(abs(total))
        if toterr <= tol:
            return total, toterr, neval
        if ax.size > spec.max_subdivisions:
            raise NonConvergence(
                f"2d quadrature exceeded {spec.max_subdivisions} cells "
                f"(error {toterr:.3e} > tol {tol:.3e})",
                result=QuadratureResult(total, toterr, neval, False),
            )
        cut = tol / (2.0 * ax.size)
        split = errs > cut
        if not split.any():
            split = errs >= errs.max()

        sx, sy = ex[split], ey[split]
        in_x = sx > 2.0 * sy
        in_y = sy > 2.0 * sx
        in_both = ~(in_x | in_y)

        cl_ax, cl_bx, cl_ay, cl_by = [], [], [], []

        def push(a1, b1, a2, b2):
            cl_ax.append(a1)
            cl_bx.append(b1)
            cl_ay.append(a2)
            cl_by.append(b2)

        pax, pbx, pay, pby = ax[split], bx[split], ay[split], by[split]
        for i in range(pax.size):
            mx = 0.5 * (pax[i] + pbx[i])
            my = 0.5 * (pay[i] + pby[i])
            if in_x[i]:
                push(pax[i], mx, pay[i], pby[i])
                push(mx, pbx[i], pay[i], pby[i])
            elif in_y[i]:
                push(pax[i], pbx[i], pay[i], my)
                push(pax[i], pbx[i], my, pby[i])
            else:
                push(pax[i], mx, pay[i], my)
                push(mx, pbx[i], pay[i], my)
                push(pax[i], mx, my, pby[i])
                push(mx, pbx[i], my, pby[i])

        c_ax = np.asarray(cl_ax)
        c_bx = np.asarray(cl_bx)
        c_ay = np.asarray(cl_ay)
        c_by = np.asarray(cl_by)
        c_vals, c_ex, c_ey, extra = _eval_cells_2d(f, c_ax, c_bx, c_ay, c_by)
        keep = ~split
        ax = np.concatenate([ax[keep], c_ax])
        bx = np.concatenate([bx[keep], c_bx])
        ay = np.concatenate([ay[keep], c_ay])
        by = np.concatenate([by[keep], c_by])
        vals = np.concatenate([vals[keep], c_vals])
        ex = np.concatenate([ex[keep], c_ex])
        ey = np.concatenate([ey[keep], c_ey])
        neval += extra


def _ordered_pieces(xr, yr):
    """Decompose {(x, y) in xr x yr : y < x} into smooth map pieces.

    Returns a list of (kind, params) where kind is "rect" for plain
    rectangles and "wedge" for the diagonal-bounded part parametrised as
    y in [c, d], x in (y, bx].
    """
    ax, bx = xr
    ay, by = yr
    pieces = []
    if by <= ax:
        pieces.append(("rect", (ax, bx, ay, by)))
        return pieces
    if ay >= bx:
        return pieces
    if ay < ax:
        pieces.append(("rect", (ax, bx, ay, min(ax, by))))
    c = max(ax, ay)
    d = min(bx, by)
    if c < d:
        pieces.append(("wedge", (c, d, bx)))
    return pieces


def integrate_2d(f, x_range, y_range=None, spec=QuadratureSpec(), *, ordered=False):
    """Adaptive integral of f(x, y) over a rectangle or ordered wedge.

    ``ordered=True`` restricts the domain to y < x (the time-ordered
    simplex when both ranges coincide).  The wedge part is parametrised so
    the diagonal maps to a cell edge, keeping the subdivision anisotropic
    there.  f must be vectorised over coordinate arrays.
    """
    if y_range is None:
        y_range = x_range
    ax, bx = map(float, x_range)
    ay, by = map(float, y_range)
    if not ordered:
        val, err, ne = _adaptive_2d(f, ax, bx, ay, by, spec)
        return QuadratureResult(val, err, ne, True)

    total = 0j
    toterr = 0.0
    neval = 0
    for kind, params in _ordered_pieces((ax, bx), (ay, by)):
        if kind == "rect":
            ra, rb, rc, rd = params
            if ra >= rb or rc >= rd:
                continue
            val, err, ne = _adaptive_2d(f, ra, rb, rc, rd, spec)
        else:
            c, d, xb = params

            def g(u, v):
                # u in [0,1] spans x in (y, xb]; v spans y in [c, d]
                y = c + (d - c) * v
                x = y + (xb - y) * u
                return np.asarray(f(x, y), dtype=complex) * (d - c) * (xb - y)

            val, err, ne = _adaptive_2d(g, 0.0, 1.0, 0.0, 1.0, spec)
        total += val
        toterr += err
        neval += ne
    return QuadratureResult(total, toterr, neval, True)


def integrate_2d_triangle(f, t_range, ordered=True, spec=QuadratureSpec()):
    """Spec-named wrapper: square domain t_range x t_range, optionally
    restricted to the time-ordered simplex t' < t (second argument is the
    earlier time)."""
    return integrate_2d(f, t_range, t_range, spec, ordered=ordered)
