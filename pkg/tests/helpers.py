"""Shared test utilities: finite-difference oracles and seeded generators."""

from __future__ import annotations

import numpy as np

from circulant3 import MetricFunctions, eval_jet, eval_value, induces_q_basis, parse
from circulant3.errors import CirculantError
from circulant3.parallelism import MIRROR_MATRIX

BOX = ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))


# -- finite differences (independent of the jet implementation) ---------------


def fd_gradient(f, p, h=1e-5):
    p = np.asarray(p, dtype=float)
    grad = np.zeros(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        grad[i] = (eval_value(f, p + e) - eval_value(f, p - e)) / (2 * h)
    return grad


def fd_hessian(f, p, h=1e-5):
    p = np.asarray(p, dtype=float)
    H = np.zeros((3, 3))
    f0 = eval_value(f, p)
    for i in range(3):
        ei = np.zeros(3)
        ei[i] = h
        H[i, i] = (eval_value(f, p + ei) - 2 * f0 + eval_value(f, p - ei)) / (h * h)
        for j in range(i + 1, 3):
            ej = np.zeros(3)
            ej[j] = h
            val = (
                eval_value(f, p + ei + ej)
                - eval_value(f, p + ei - ej)
                - eval_value(f, p - ei + ej)
                + eval_value(f, p - ei - ej)
            ) / (4 * h * h)
            H[i, j] = H[j, i] = val
    return H


# -- random expressions --------------------------------------------------------

_COORDS = ("x1", "x2", "x3")


def _linear_combo(rng) -> str:
    terms = []
    for c in _COORDS:
        w = rng.uniform(-1.0, 1.0)
        terms.append(f"{w:.3f}*{c}")
    return " + ".join(terms)


def _unit_source(rng) -> str:
    kind = rng.integers(0, 7)
    if kind == 0:
        return f"sin({_linear_combo(rng)})"
    if kind == 1:
        return f"cos({_linear_combo(rng)})"
    if kind == 2:
        return rng.choice(_COORDS)
    if kind == 3:
        a, b = rng.choice(_COORDS, size=2, replace=False)
        return f"{a}*{b}"
    if kind == 4:
        return f"{rng.choice(_COORDS)}^2"
    if kind == 5:
        return f"exp({_linear_combo(rng)} / 4)"
    return f"sqrt(2.5 + {_linear_combo(rng)})"


def random_expression(rng, max_terms: int = 3) -> str:
    """Grammar-valid source whose value/derivatives stay moderate on BOX.

    Built from bounded units with small coefficients, then checked by
    evaluating jets at probe points; unsuitable candidates are regenerated.
    """
    for _ in range(100):
        n = int(rng.integers(1, max_terms + 1))
        terms = [f"{rng.uniform(-0.8, 0.8):.3f}*({_unit_source(rng)})" for _ in range(n)]
        src = f"{rng.uniform(-2.0, 2.0):.3f} + " + " + ".join(terms)
        expr = parse(src)
        ok = True
        for _ in range(20):
            p = rng.uniform(-1.1, 1.1, size=3)
            try:
                jet = eval_jet(expr, p)
            except CirculantError:
                ok = False
                break
            if abs(jet.value) > 10 or np.max(np.abs(jet.grad)) > 10 or np.max(np.abs(jet.hess)) > 10:
                ok = False
                break
        if ok:
            return src
    raise RuntimeError("random expression generator failed to produce a bounded field")


def _bounded_field(rng, n_terms: int) -> str:
    """Source with |value| <= ~0.35 on BOX by construction."""
    terms = []
    for _ in range(n_terms):
        c = rng.uniform(-0.15, 0.15)
        terms.append(f"{c:.4f}*({_unit_source_bounded(rng)})")
    return " + ".join(terms) if terms else "0"


def _unit_source_bounded(rng) -> str:
    kind = rng.integers(0, 6)
    if kind == 0:
        return f"sin({_linear_combo(rng)})"
    if kind == 1:
        return f"cos({_linear_combo(rng)})"
    if kind == 2:
        return rng.choice(_COORDS)
    if kind == 3:
        a, b = rng.choice(_COORDS, size=2, replace=False)
        return f"{a}*{b}"
    if kind == 4:
        return f"{rng.choice(_COORDS)}^2"
    return f"{rng.choice(_COORDS)}^3"


def random_manifold(rng) -> MetricFunctions:
    """Admissible metric fields on BOX: A > B > 0 holds structurally.

    B = c1 + (bounded field), A = B + gap + (bounded field) with
    c1 >= 1, gap >= 0.5 and each bounded field below 0.38 in magnitude.
    """
    c1 = rng.uniform(1.0, 2.5)
    gap = rng.uniform(0.5, 1.5)
    fB = _bounded_field(rng, int(rng.integers(1, 3)))
    fA = _bounded_field(rng, int(rng.integers(1, 3)))
    B_src = f"{c1:.4f} + {fB}"
    A_src = f"{B_src} + {gap:.4f} + {fA}"
    return MetricFunctions.from_sources(A_src, B_src)


def random_parallel_manifold(rng) -> MetricFunctions:
    """Metric fields satisfying the gradient parallelism criterion on BOX.

    Either linear fields with grad A = grad B . MIRROR (possibly curved)
    or a pair A = B + gap with B a function of x1 + x2 + x3 (flat family).
    """
    if rng.integers(0, 2) == 0:
        b = rng.uniform(0.3, 1.5, size=3)
        a = b @ MIRROR_MATRIX
        cB = 1.0 + 1.2 * float(np.sum(np.abs(b)))
        cA = cB + 0.5 + 1.2 * float(np.sum(np.abs(a - b)))
        B_src = f"{b[0]:.4f}*x1 + {b[1]:.4f}*x2 + {b[2]:.4f}*x3 + {cB:.4f}"
        A_src = f"{a[0]:.4f}*x1 + {a[1]:.4f}*x2 + {a[2]:.4f}*x3 + {cA:.4f}"
        return MetricFunctions.from_sources(A_src, B_src)
    c1 = rng.uniform(1.5, 3.0)
    gap = rng.uniform(0.5, 1.5)
    amp = rng.uniform(0.1, 0.4)
    B_src = f"{c1:.4f} + {amp:.4f}*sin((x1 + x2 + x3) / 3)"
    A_src = f"{B_src} + {gap:.4f}"
    return MetricFunctions.from_sources(A_src, B_src)


def random_point(rng, box=BOX) -> np.ndarray:
    return np.array([rng.uniform(lo, hi) for lo, hi in box])


def random_q_basis_vector(rng) -> np.ndarray:
    while True:
        v = rng.standard_normal(3)
        if induces_q_basis(v):
            return v


def random_admissible_AB(rng) -> tuple[float, float]:
    B = rng.uniform(0.2, 4.0)
    A = B + rng.uniform(0.1, 4.0)
    return A, B
