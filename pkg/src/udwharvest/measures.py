"""Entanglement and correlation measures on two-qubit states.

Concurrence uses the Wootters spin-flip spectrum for arbitrary density
matrices; for X-shaped matrices (the only shape this package produces)
the closed form

    C = 2 max{0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44)}

is evaluated as well and the two are required to agree.

Entropies default to base 2 (bits); pass ``base=np.e`` for nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotAState, UDWError
from .states import DensityMatrix, partial_trace_qubit

__all__ = [
    "XStateView",
    "concurrence",
    "concurrence_x_state",
    "entanglement_of_formation",
    "eof_from_concurrence",
    "binary_entropy",
    "mutual_information",
    "mutual_information_exact",
    "nogo_margin",
]

_SYSY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


def _as_array(rho):
    if isinstance(rho, DensityMatrix):
        return rho.entries
    return np.asarray(rho, dtype=complex)


def _check_state(m, herm_tol=1e-10, trace_tol=1e-8):
    scale = max(float(np.max(np.abs(m))), 1e-300)
    if np.max(np.abs(m - m.conj().T)) > herm_tol * scale:
        raise NotAState("matrix is not Hermitian")
    if abs(np.trace(m) - 1.0) > trace_tol:
        raise NotAState(f"trace {np.trace(m):.8g} is not 1")


@dataclass(frozen=True)
class XStateView:
    """Diagonal and anti-diagonal data of an X-shaped two-qubit matrix."""

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: complex
    rho23: complex

    @classmethod
    def from_matrix(cls, rho, tol=1e-10):
        m = _as_array(rho)
        scale = max(float(np.max(np.abs(m))), 1e-300)
        off = m.copy()
        for i, j in ((0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0), (1, 2), (2, 1)):
            off[i, j] = 0.0
        if np.max(np.abs(off)) > tol * scale:
            raise DomainError("matrix is not X-shaped")
        return cls(
            m[0, 0].real, m[1, 1].real, m[2, 2].real, m[3, 3].real, m[0, 3], m[1, 2]
        )


def _is_x_shaped(m, tol=1e-10):
    try:
        XStateView.from_matrix(m, tol)
        return True
    except DomainError:
        return False


def concurrence_x_state(rho):
    """Closed-form concurrence of an X-shaped two-qubit matrix."""
    x = XStateView.from_matrix(rho) if not isinstance(rho, XStateView) else rho
    branch_m = abs(x.rho14) - math.sqrt(max(x.rho22 * x.rho33, 0.0))
    branch_l = abs(x.rho23) - math.sqrt(max(x.rho11 * x.rho44, 0.0))
    return 2.0 * max(0.0, branch_m, branch_l)


def concurrence(rho):
    """Wootters concurrence of a two-qubit density matrix.

    w_i are the decreasing square roots of the eigenvalues of
    rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y); the concurrence is
    max{0, w1 - w2 - w3 - w4}.  For X-shaped input the closed form is
    cross-checked to 1e-10.
    """
    m = _as_array(rho)
    if m.shape != (4, 4):
        raise NotAState("concurrence needs a 4x4 two-qubit matrix")
    _check_state(m)
    flipped = _SYSY @ m.conj() @ _SYSY
    ev = np.linalg.eigvals(m @ flipped)
    # tiny negative / imaginary parts are roundoff of the truncation order
    w = np.sqrt(np.clip(ev.real, 0.0, None))
    w.sort()
    c = max(0.0, w[-1] - w[-2] - w[-3] - w[-4])
    if _is_x_shaped(m):
        closed = concurrence_x_state(m)
        if abs(closed - c) > 1e-10:
            raise UDWError(
                f"X-state concurrence {closed:.12g} disagrees with the "
                f"spin-flip spectrum value {c:.12g}"
            )
    return c


def binary_entropy(x, base=2.0):
    """h(x) = -x log x - (1-x) log(1-x), with 0 log 0 = 0."""
    if x < 0.0 or x > 1.0:
        if -1e-12 < x < 0.0 or 1.0 < x < 1.0 + 1e-12:
            x = min(max(x, 0.0), 1.0)
        else:
            raise DomainError(f"binary entropy argument {x} outside [0, 1]")
    ln_base = math.log(base)
    terms = 0.0
    for p in (x, 1.0 - x):
        if p > 0.0:
            terms -= p * math.log(p) / ln_base
    return terms


def eof_from_concurrence(c, base=2.0):
    c = min(max(float(c), 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)), base)


def entanglement_of_formation(rho, base=2.0):
    """E_f = h((1 + sqrt(1 - C^2))/2), the Bell-pair cost of preparation."""
    return eof_from_concurrence(concurrence(rho), base)


def _plogp(p, ln_base):
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    out = np.zeros_like(p)
    pos = p > 0.0
    out[pos] = p[pos] * np.log(p[pos]) / ln_base
    return out


def mutual_information(p_a, p_b, l_ab, base=2.0, tol=1e-12):
    """Leading-order mutual information from excitation probabilities and
    the cross-correlation element:

        I = L+ log L+ + L- log L- - P_A log P_A - P_B log P_B
        L+- = (P_A + P_B +- sqrt((P_A - P_B)^2 + 4 |L_AB|^2)) / 2

    Valid for P_A, P_B >= 0 with |L_AB|^2 <= P_A P_B.
    """
    p_a = float(p_a)
    p_b = float(p_b)
    labs2 = abs(l_ab) ** 2
    scale = max(p_a * p_b, tol * tol)
    if p_a < -tol or p_b < -tol:
        raise DomainError("negative excitation probability")
    if labs2 > p_a * p_b + tol * scale + 1e-300:
        raise DomainError(
            f"|L_AB|^2 = {labs2:.6g} exceeds P_A P_B = {p_a * p_b:.6g}"
        )
    if labs2 == 0.0:
        return 0.0
    root = math.sqrt((p_a - p_b) ** 2 + 4.0 * labs2)
    l_plus = 0.5 * (p_a + p_b + root)
    l_minus = max(0.5 * (p_a + p_b - root), 0.0)
    ln_base = math.log(base)
    total = _plogp([l_plus, l_minus, p_a, p_b], ln_base)
    # nonnegative on the valid domain; drop roundoff residue
    return max(float(total[0] + total[1] - total[2] - total[3]), 0.0)


def _von_neumann(m, ln_base):
    ev = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    return float(-np.sum(_plogp(ev, ln_base)))


def mutual_information_exact(rho, base=2.0):
    """I = S(rho_A) + S(rho_B) - S(rho_AB) from the full 4x4 state."""
    m = _as_array(rho)
    if m.shape != (4, 4):
        raise NotAState("mutual information needs a 4x4 two-qubit matrix")
    _check_state(m)
    ln_base = math.log(base)
    s_a = _von_neumann(partial_trace_qubit(m, "A"), ln_base)
    s_b = _von_neumann(partial_trace_qubit(m, "B"), ln_base)
    s_ab = _von_neumann(m, ln_base)
    return s_a + s_b - s_ab


def nogo_margin(m_element, p_a, p_b):
    """Signed harvesting margin |M| - sqrt(P_A P_B).

    Positive values mean the corner element beats the geometric mean of
    the excitation probabilities, i.e. entanglement can be extracted; the
    trace-out treatment keeps this nonpositive for once-switched delta
    windows.
    """
    return abs(m_element) - math.sqrt(max(float(p_a) * float(p_b), 0.0))
