"""Built-in gate table: the full qelib1 set, every gate a simulator primitive.

Matrix convention: for a k-qubit gate the basis index of the 2^k matrix reads
the operands left to right, first operand = most significant bit. Rotation
gates use the half-angle convention ``R_P(t) = exp(-i t P / 2)``.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

# gate id -> (number of angle parameters, number of qubit operands)
GATE_SIGNATURES: dict[str, tuple[int, int]] = {
    "u3": (3, 1), "u2": (2, 1), "u1": (1, 1),
    "cx": (0, 2), "id": (0, 1),
    "x": (0, 1), "y": (0, 1), "z": (0, 1), "h": (0, 1),
    "s": (0, 1), "sdg": (0, 1), "t": (0, 1), "tdg": (0, 1),
    "rx": (1, 1), "ry": (1, 1), "rz": (1, 1),
    "cz": (0, 2), "cy": (0, 2), "ch": (0, 2), "ccx": (0, 3),
    "crz": (1, 2), "cu1": (1, 2), "cu3": (3, 2),
}

_SQRT2_INV = 1.0 / math.sqrt(2.0)


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array(
        [[c, -cmath.exp(1j * lam) * s],
         [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])


def _controlled(target: np.ndarray) -> np.ndarray:
    """4x4 block matrix: identity on control |0>, ``target`` on control |1>."""
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = target
    return out


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0 + 0j, -1.0 + 0j])
_H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV

_FIXED: dict[str, np.ndarray] = {
    "id": np.eye(2, dtype=complex),
    "x": _X,
    "y": _Y,
    "z": _Z,
    "h": _H,
    "s": np.diag([1.0 + 0j, 1j]),
    "sdg": np.diag([1.0 + 0j, -1j]),
    "t": np.diag([1.0 + 0j, cmath.exp(0.25j * math.pi)]),
    "tdg": np.diag([1.0 + 0j, cmath.exp(-0.25j * math.pi)]),
    "cx": _controlled(_X),
    "cy": _controlled(_Y),
    "cz": _controlled(_Z),
    "ch": _controlled(_H),
}

_CCX = np.eye(8, dtype=complex)
_CCX[[6, 7]] = _CCX[[7, 6]]
_FIXED["ccx"] = _CCX

_PARAMETRIC = {
    "u3": lambda p: _u3(*p),
    "u2": lambda p: _u3(math.pi / 2.0, p[0], p[1]),
    "u1": lambda p: np.diag([1.0 + 0j, cmath.exp(1j * p[0])]),
    "rx": lambda p: _rx(p[0]),
    "ry": lambda p: _ry(p[0]),
    "rz": lambda p: _rz(p[0]),
    "crz": lambda p: _controlled(_rz(p[0])),
    "cu1": lambda p: np.diag([1.0, 1.0, 1.0, cmath.exp(1j * p[0])]).astype(complex),
    "cu3": lambda p: _controlled(_u3(*p)),
}


def gate_matrix(gate_id: str, params: Sequence[float] = ()) -> np.ndarray:
    """Unitary matrix of a built-in gate at concrete parameter values."""
    if gate_id not in GATE_SIGNATURES:
        raise ValueError(f"unknown gate: {gate_id!r}")
    n_params, _ = GATE_SIGNATURES[gate_id]
    if len(params) != n_params:
        raise ValueError(f"gate {gate_id!r} takes {n_params} parameter(s), got {len(params)}")
    if gate_id in _FIXED:
        return _FIXED[gate_id].copy()
    return _PARAMETRIC[gate_id](tuple(float(p) for p in params))
