"""Closed-form gates of the tilted-measurement MBQC patterns.

Angles: ``theta`` is the polar angle of the tilted measurement axis and
``epsilon = pi/2 - theta`` its tilt out of the xy plane.  The weak-measurement
strength is ``a = cot(theta/2) = cos(epsilon) / (1 - sin(epsilon))``.

Global phases are never promised; compare gates with
:func:`nonunitary_mbqc.linalg.equal_up_to_scalar`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import linalg
from .linalg import H, SWAP, X, Z


class NormConvention(str, Enum):
    POVM = "povm"
    UNIT_FROBENIUS = "unit_frobenius"
    UNIT_MAX_EIG = "unit_max_eig"


@dataclass(frozen=True)
class GateParams:
    epsilon: float

    @classmethod
    def from_theta(cls, theta: float) -> "GateParams":
        return cls(np.pi / 2 - theta)

    @property
    def theta(self) -> float:
        return np.pi / 2 - self.epsilon

    @property
    def a(self) -> float:
        return a_of_theta(self.theta)


def a_of_theta(theta: float) -> float:
    """``cot(theta/2)``; infinite at ``theta = 0``."""
    s = np.sin(theta / 2)
    if s == 0:
        return np.inf
    return float(np.cos(theta / 2) / s)


def a_of_epsilon(epsilon: float) -> float:
    return float(np.cos(epsilon) / (1 - np.sin(epsilon)))


def epsilon_of_a(a: float) -> float:
    """Inverse of :func:`a_of_epsilon` for ``a > 0``; negative ``a`` maps to
    ``epsilon < -pi/2`` (polar angle beyond ``pi``)."""
    theta = 2 * np.arctan2(1.0, a)
    return float(np.pi / 2 - theta)


@dataclass(frozen=True)
class BlochState:
    """``cos(beta/2)|0> + e^{i varphi} sin(beta/2)|1>``."""

    beta: float
    varphi: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        return np.array(
            [np.cos(self.beta / 2), np.exp(1j * self.varphi) * np.sin(self.beta / 2)],
            dtype=complex,
        )


def m_povm(theta: float, s: int) -> np.ndarray:
    """Weak-measurement POVM element of the tilted measurement.

    ``M_0 = diag(cos(theta/2), sin(theta/2))`` and
    ``M_1 = diag(sin(theta/2), -cos(theta/2))``, which equal
    ``diag(a, 1)/sqrt(1+a^2)`` and ``diag(1, -a)/sqrt(1+a^2)`` but stay finite
    at ``theta = 0``.
    """
    c, sn = np.cos(theta / 2), np.sin(theta / 2)
    if s == 0:
        return np.diag([c, sn]).astype(complex)
    if s == 1:
        return np.diag([sn, -c]).astype(complex)
    raise ValueError(f"outcome must be 0 or 1, got {s}")


def m_povm_a(a: float, s: int) -> np.ndarray:
    """The same POVM parameterized by any real ``a`` (negative allowed)."""
    if np.isinf(a):
        return m_povm(0.0, s)
    norm = np.hypot(1.0, a)
    if s == 0:
        return np.diag([a / norm, 1 / norm]).astype(complex)
    if s == 1:
        return np.diag([1 / norm, -a / norm]).astype(complex)
    raise ValueError(f"outcome must be 0 or 1, got {s}")


def byproduct(s1: int, s2: int) -> np.ndarray:
    """``X^{s2} Z^{s1}``."""
    return np.linalg.matrix_power(X, s2) @ np.linalg.matrix_power(Z, s1)


def gate_fig1c(epsilon: float, s1: int, s2: int) -> np.ndarray:
    """Input measured along x, middle tilted: ``H M_{s2} H Z^{s1} / sqrt(2)``."""
    m = m_povm(np.pi / 2 - epsilon, s2)
    return H @ m @ H @ np.linalg.matrix_power(Z, s1) / np.sqrt(2)


def gate_fig1d(epsilon: float, s1: int, s2: int) -> np.ndarray:
    """Input tilted, middle along x: ``X^{s2} M_{s1} / sqrt(2)``."""
    m = m_povm(np.pi / 2 - epsilon, s1)
    return np.linalg.matrix_power(X, s2) @ m / np.sqrt(2)


def gate_fig1e(epsilon: float, s: int = 0) -> np.ndarray:
    """Two-qubit weak ``X1 X2`` measurement followed by SWAP, unit Frobenius norm.

    ``(cos(e/2) I - sin(e/2) X1 X2) SWAP`` with ``e = epsilon + s*pi``.
    """
    e = epsilon + s * np.pi
    xx = np.kron(X, X)
    n = (np.cos(e / 2) * np.eye(4) - np.sin(e / 2) * xx) @ SWAP
    return n / np.linalg.norm(n)


def unitary_xx(phi: float) -> np.ndarray:
    """``exp(-i phi/2 X1 X2) SWAP``."""
    xx = np.kron(X, X)
    return (np.cos(phi / 2) * np.eye(4) - 1j * np.sin(phi / 2) * xx) @ SWAP


def bubble_gate(epsilon: float) -> np.ndarray:
    """``I - tan(epsilon/2) X``, the single-qubit nonunitary core of the
    two-qubit gate."""
    return np.eye(2) - np.tan(epsilon / 2) * X


def ite_step(epsilon: float) -> np.ndarray:
    """``sqrt(2) gate_fig1d(epsilon, 0, 0)``, which is ``M_0``."""
    return np.sqrt(2) * gate_fig1d(epsilon, 0, 0)


def povm_pair_for_target(n, c: complex) -> tuple[np.ndarray, np.ndarray]:
    """POVM pair ``(c N~, sqrt(1 - |c|^2 N~^dag N~))`` with ``N~`` scaled to
    unit largest singular value."""
    if abs(c) > 1 + 1e-12:
        raise ValueError(f"|c| = {abs(c):.6g} exceeds 1")
    n = linalg.as_matrix(n)
    if n.shape[0] != n.shape[1]:
        raise ValueError("target map must be square")
    smax = np.linalg.svd(n, compute_uv=False)[0]
    if smax == 0:
        raise ValueError("target map is zero")
    m0 = c * n / smax
    m1 = linalg.matrix_sqrt_psd(np.eye(n.shape[0]) - m0.conj().T @ m0)
    return m0, m1


def p_max(n, psi) -> float:
    """Largest achievable success probability of applying ``n`` to ``psi``."""
    n = linalg.as_matrix(n)
    psi = linalg.normalize(psi)
    nn = n.conj().T @ n
    top = linalg.max_eigenvalue_psd(nn)
    if top == 0:
        raise ValueError("target map is zero")
    return float(np.vdot(psi, nn @ psi).real / top)


def renormalize(m, convention: NormConvention | str, *, family: Sequence | None = None) -> np.ndarray:
    """Rescale ``m`` by a positive real to satisfy ``convention``.

    ``povm`` needs the outcome ``family`` the map belongs to (``m`` among
    them); the family's ``sum M^dag M`` must be proportional to the identity.
    """
    convention = NormConvention(convention)
    m = linalg.as_matrix(m)
    if np.linalg.norm(m) == 0:
        raise ValueError("cannot renormalize the zero map")
    if convention is NormConvention.UNIT_FROBENIUS:
        return m / np.linalg.norm(m)
    if convention is NormConvention.UNIT_MAX_EIG:
        return m / np.linalg.svd(m, compute_uv=False)[0]
    if family is None:
        raise ValueError("povm normalization needs the outcome family")
    total = sum(linalg.as_matrix(f).conj().T @ linalg.as_matrix(f) for f in family)
    scale = np.trace(total).real / total.shape[0]
    if not np.allclose(total, scale * np.eye(total.shape[0]), atol=1e-10 * max(scale, 1)):
        raise ValueError("family does not sum to a multiple of the identity")
    return m / np.sqrt(scale)
