"""Bundled walkthrough models for the demo subcommands.

Both demos use a qubit control and qubit target with fixed, hand-picked
unitaries so their output is deterministic.  Rows carry the compared values
and their difference so a reader (or test) can see each check directly.
"""

from __future__ import annotations

import numpy as np

from . import oracle
from .states import FuzzBranch, FuzzModel, SwitchModel

_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
_S = np.array([[1.0, 0.0], [0.0, 1.0j]])
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_T = np.array([[1.0, 0.0], [0.0, np.exp(0.25j * np.pi)]])
_KET0 = np.array([1.0, 0.0], dtype=complex)
_KET1 = np.array([0.0, 1.0], dtype=complex)
_PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)

_SEGMENTS = {
    "vx0": _H, "xy0": _S, "yu0": _X,
    "vy1": _T, "yx1": _H, "xu1": _S,
}


def _c(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _switch_with_control(control: np.ndarray) -> SwitchModel:
    psi = np.kron(control, _KET0)
    return SwitchModel(
        2, psi,
        _SEGMENTS["vx0"], _SEGMENTS["xy0"], _SEGMENTS["yu0"],
        _SEGMENTS["vy1"], _SEGMENTS["yx1"], _SEGMENTS["xu1"],
    )


def _fixed_order_value(order: str, x: np.ndarray, y: np.ndarray) -> complex:
    """omega(e, x*y) for a control concentrated on one order, recomputed
    as an explicit operator chain."""
    if order == "yx":
        full = _SEGMENTS["vx0"] @ _SEGMENTS["xy0"] @ _SEGMENTS["yu0"]
        ops = [full.conj().T, _SEGMENTS["vx0"], x, _SEGMENTS["xy0"], y, _SEGMENTS["yu0"]]
    else:
        full = _SEGMENTS["vy1"] @ _SEGMENTS["yx1"] @ _SEGMENTS["xu1"]
        ops = [full.conj().T, _SEGMENTS["vy1"], y, _SEGMENTS["yx1"], x, _SEGMENTS["xu1"]]
    return oracle.chain_amplitude(ops, _KET0, _KET0)


def demo_switch_report() -> dict:
    """omega(e, x*y) for control |0>, |1> and (|0>+|1>)/sqrt(2), checked
    against fixed-order chains and amplitude branch linearity."""
    x_mat, y_mat = _X, np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    rows = []
    references = {"yx": _fixed_order_value("yx", x_mat, y_mat),
                  "xy": _fixed_order_value("xy", x_mat, y_mat)}
    controls = [("|0>", _KET0), ("|1>", _KET1), ("(|0>+|1>)/sqrt2", _PLUS)]
    values = {}
    for label, control in controls:
        model = _switch_with_control(control)
        word = model.algebra.embed(1, x_mat) * model.algebra.embed(2, y_mat)
        value = model.eval_bilinear(model.algebra.unit(), word)
        values[label] = value
        if label == "|0>":
            reference = references["yx"]
        elif label == "|1>":
            reference = references["xy"]
        else:
            reference = 0.5 * (references["yx"] + references["xy"])
        rows.append({
            "control": label,
            "omega": _c(value),
            "reference": _c(reference),
            "difference": float(abs(value - reference)),
            "ok": bool(abs(value - reference) <= 1e-10),
        })
    # amplitude branch linearity: superposed control = weighted branch sum
    sup = _switch_with_control(_PLUS)
    m0 = _switch_with_control(_KET0)
    m1 = _switch_with_control(_KET1)
    phi = np.kron(_PLUS, _KET0)
    args = (phi, x_mat, y_mat, np.eye(4), np.eye(4))
    lhs = sup.amplitude(*args)
    rhs = (m0.amplitude(*args) + m1.amplitude(*args)) / np.sqrt(2.0)
    rows.append({
        "control": "branch-linearity",
        "omega": _c(lhs),
        "reference": _c(rhs),
        "difference": float(abs(lhs - rhs)),
        "ok": bool(abs(lhs - rhs) <= 1e-10),
    })
    return {"demo": "switch", "rows": rows}


def demo_fuzz_report() -> dict:
    """Single-branch measure degeneracy and the two-branch reduction."""
    x_mat, y_mat = _X, np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    rows = []

    single = FuzzModel(
        2, _KET0,
        [FuzzBranch(1.0, "yx", pre=_SEGMENTS["yu0"], mid=_SEGMENTS["xy0"],
                    post=_SEGMENTS["vx0"])],
    )
    fixed = _switch_with_control(_KET0)
    word_s = single.algebra.embed(1, x_mat) * single.algebra.embed(2, y_mat)
    word_f = fixed.algebra.embed(1, x_mat) * fixed.algebra.embed(2, y_mat)
    val_single = single.eval_bilinear(single.algebra.unit(), word_s)
    val_fixed = fixed.eval_bilinear(fixed.algebra.unit(), word_f)
    rows.append({
        "check": "single-branch equals concentrated-control model",
        "fuzz": _c(val_single),
        "reference": _c(val_fixed),
        "difference": float(abs(val_single - val_fixed)),
        "ok": bool(abs(val_single - val_fixed) <= 1e-10),
    })

    sup = _switch_with_control(_PLUS)
    two = sup.as_fuzz()
    word_t = two.algebra.embed(1, x_mat) * two.algebra.embed(2, y_mat)
    word_w = sup.algebra.embed(1, x_mat) * sup.algebra.embed(2, y_mat)
    val_two = two.eval_bilinear(two.algebra.unit(), word_t)
    val_sw = sup.eval_bilinear(sup.algebra.unit(), word_w)
    rows.append({
        "check": "two weight-1 branches reproduce the control superposition",
        "fuzz": _c(val_two),
        "reference": _c(val_sw),
        "difference": float(abs(val_two - val_sw)),
        "ok": bool(abs(val_two - val_sw) <= 1e-10),
    })
    return {"demo": "fuzz", "rows": rows}
