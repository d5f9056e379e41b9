"""Christoffel symbols, the Riemann tensor, sectional curvature and the
q-invariance property of the curvature.

All derivatives of the metric come from jets of A and B; nothing here is
finite-differenced. The numeric route is

    2 Gamma_ij^h = g^{th} (d_i g_tj + d_j g_ti - d_t g_ij)
    R_ijk^h      = d_j Gamma_ik^h - d_k Gamma_ij^h
                   + Gamma_ik^t Gamma_tj^h - Gamma_ij^t Gamma_tk^h

with the (0,4) tensor low[i,j,k,h] = g(R(e_i, e_j) e_k, e_h), the index
order and sign being pinned by the built-in example manifold (its
R_1212 at (2,-1,-1) equals -1/8). This route agrees with independent
computer-algebra implementations of the Levi-Civita curvature.

closed_form_components evaluates a set of six reference component
formulas verbatim. The two routes agree on the built-in example's
diagonal components yet differ elsewhere (the reference formulas'
first-order terms do not belong to any curvature of these metrics); the
comparison is reported, never patched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePlane, IdentityRNotSatisfied, NotAQBasis
from .metric import MetricAtPoint, MetricFunctions, inner, metric_at
from .qstructure import (
    apply_q,
    construct_orthogonal_vector,
    construct_special_angle_vector,
    induces_q_basis,
    q_basis_angles,
)

_EYE = np.eye(3)
_ONES = np.ones((3, 3))

COMPONENT_INDEX = {
    "R1212": (0, 1, 0, 1),
    "R1313": (0, 2, 0, 2),
    "R2323": (1, 2, 1, 2),
    "R1213": (0, 1, 0, 2),
    "R1223": (0, 1, 1, 2),
    "R1323": (0, 2, 1, 2),
}


@dataclass(frozen=True)
class ChristoffelTable:
    """gamma[i,j,h] = Gamma_ij^h and dgamma[k,i,j,h] = d_k Gamma_ij^h."""

    gamma: np.ndarray
    dgamma: np.ndarray


@dataclass(frozen=True)
class CurvatureTensor:
    """up[i,j,k,h] = R_ijk^h (first slot transported); low = (0,4) tensor."""

    up: np.ndarray
    low: np.ndarray

    def component(self, i: int, j: int, k: int, h: int) -> float:
        """Lowered component by 1-based indices."""
        return float(self.low[i - 1, j - 1, k - 1, h - 1])


@dataclass(frozen=True)
class ClosedFormComponents:
    R1212: float
    R1313: float
    R2323: float
    R1213: float
    R1223: float
    R1323: float

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in COMPONENT_INDEX}


def _metric_derivatives(M: MetricAtPoint):
    dA, dB = M.A_jet.grad, M.B_jet.grad
    HA, HB = M.A_jet.hess, M.B_jet.hess
    dg = dA[:, None, None] * _EYE + dB[:, None, None] * (_ONES - _EYE)
    ddg = HA[:, :, None, None] * _EYE + HB[:, :, None, None] * (_ONES - _EYE)
    return dg, ddg


def christoffel_from_metric(M: MetricAtPoint) -> ChristoffelTable:
    """Christoffel symbols and their first derivatives from metric jets."""
    dg, ddg = _metric_derivatives(M)
    ginv = M.g_inv
    # C[i,j,t] = d_i g_tj + d_j g_ti - d_t g_ij
    C = np.einsum("itj->ijt", dg) + np.einsum("jti->ijt", dg) - np.einsum("tij->ijt", dg)
    gamma = 0.5 * np.einsum("ijt,th->ijh", C, ginv)
    dginv = -np.einsum("ab,kbc,cd->kad", ginv, dg, ginv)
    dC = (
        np.einsum("kitj->kijt", ddg)
        + np.einsum("kjti->kijt", ddg)
        - np.einsum("ktij->kijt", ddg)
    )
    dgamma = 0.5 * (
        np.einsum("kth,ijt->kijh", dginv, C) + np.einsum("th,kijt->kijh", ginv, dC)
    )
    return ChristoffelTable(gamma, dgamma)


def christoffel(m: MetricFunctions, p) -> ChristoffelTable:
    return christoffel_from_metric(metric_at(m, p))


def riemann_from_metric(M: MetricAtPoint) -> CurvatureTensor:
    ct = christoffel_from_metric(M)
    gamma, dgamma = ct.gamma, ct.dgamma
    up = (
        np.einsum("jikh->ijkh", dgamma)
        - np.einsum("kijh->ijkh", dgamma)
        + np.einsum("ikt,tjh->ijkh", gamma, gamma)
        - np.einsum("ijt,tkh->ijkh", gamma, gamma)
    )
    low = np.einsum("kijt,th->ijkh", up, M.g)
    return CurvatureTensor(up, low)


def riemann(m: MetricFunctions, p) -> CurvatureTensor:
    """The curvature tensor at p; low[i,j,k,h] = g(R(e_i,e_j)e_k, e_h)."""
    return riemann_from_metric(metric_at(m, p))


def closed_form_components(m: MetricFunctions, p) -> ClosedFormComponents:
    """Evaluate the six reference closed-form (0,4) components verbatim.

    D = (A - B)(A + 2B). See the module docstring for how these relate
    to the numeric tensor.
    """
    return closed_form_from_metric(metric_at(m, p))


def closed_form_from_metric(M: MetricAtPoint) -> ClosedFormComponents:
    A, B = M.A, M.B
    A1, A2, A3 = M.A_jet.grad
    B1, B2, B3 = M.B_jet.grad
    HA, HB = M.A_jet.hess, M.B_jet.hess
    A11, A22, A33 = HA[0, 0], HA[1, 1], HA[2, 2]
    A12, A13, A23 = HA[0, 1], HA[0, 2], HA[1, 2]
    B11, B22, B33 = HB[0, 0], HB[1, 1], HB[2, 2]
    B12, B13, B23 = HB[0, 1], HB[0, 2], HB[1, 2]
    B21, B31 = B12, B13
    D = M.D
    cAB = (A + B) / (4.0 * D)
    cB = B / (4.0 * D)
    R1212 = (
        0.5 * (2 * B21 - A11 - A22)
        + cAB * (2 * A3 * B2 - A3**2 + (B1 - B2 - B3) * (B1 + B2 - B3))
        - cB * (2 * A1 * (B1 + B2 - B3) - 2 * B2 * (B1 + B2 - B3) - 2 * A1 * A3 + 2 * A3 * B2)
    )
    R1313 = (
        0.5 * (2 * B31 - A11 - A33)
        + cAB * (2 * A2 * B3 - A2**2 + (-B1 + B2 + B3) * (-B1 + B2 - B3))
        - cB * (2 * A1 * (B1 - B2 + B3) - 2 * B3 * (B1 - B2 + B3) - 2 * A1 * A2 + 2 * A2 * B3)
    )
    R2323 = (
        0.5 * (2 * B23 - A22 - A33)
        + cAB * (2 * B3 * A1 - A1**2 + (B1 - B2 + B3) * (B1 - B2 - B3))
        - cB * (2 * A2 * (B2 + B3 - B1) + 2 * B3 * (B1 - B2 - B3) - 2 * A1 * A2 + 2 * A1 * B3)
    )
    R1213 = (
        0.5 * (B21 + B31 - B11 - A23)
        + cAB * (A1 * (B2 - B3 + B1) + 2 * B3 * (-B1 - B2 + B3) + A2 * A3)
        - cB * (
            A1**2 + A2**2 + A3**2 + 2 * A1 * (A2 - B3) - 2 * A3 * (B1 - B3) - 2 * A2 * B3
            + (B1 - B2 - B3) * (B1 + B2 - B3)
        )
    )
    R1223 = (
        0.5 * (B22 - B12 - B23 + A13)
        + cAB * (A2 * (B2 + B3 - B1) - (2 * B3 - A1) * (2 * B2 - A3))
        - cB * (
            -(A1**2) + A2**2 + A3**2 + 2 * A1 * (B2 + B3) + 2 * A2 * (B2 - B3) - 4 * B2 * B3
            + 2 * A3 * (B3 - B1) + (B1 + B2 - B3) * (B1 - B2 - B3)
        )
    )
    # the last product reads "+(-B1+B2+B3)(B1-B2+B3)": the source text drops
    # the opening parenthesis
    R1323 = (
        0.5 * (B23 - B33 + B13 - A12)
        + cAB * ((2 * B2 - A1) * (2 * B3 - A2) - A3 * (-B1 + B2 + B3))
        - cB * (
            A1**2 - A2**2 - A3**2 - 2 * A1 * (B2 + B3) + 2 * A2 * (B1 - B2) + 4 * B2 * B3
            + 2 * A3 * (B2 - B3) + (-B1 + B2 + B3) * (B1 - B2 + B3)
        )
    )
    return ClosedFormComponents(
        float(R1212), float(R1313), float(R2323), float(R1213), float(R1223), float(R1323)
    )


def riemann_apply(R: CurvatureTensor, x, y, z, u) -> float:
    """Full contraction R(x, y, z, u) of the lowered tensor."""
    x, y, z, u = (np.asarray(v, dtype=float) for v in (x, y, z, u))
    return float(np.einsum("ijkh,i,j,k,h->", R.low, x, y, z, u))


def sectional_curvature(M: MetricAtPoint, R: CurvatureTensor, x, y) -> float:
    """R(x,y,x,y) / (g(x,x) g(y,y) - g(x,y)^2) for a non-degenerate plane."""
    gxx = inner(M, x, x)
    gyy = inner(M, y, y)
    gxy = inner(M, x, y)
    den = gxx * gyy - gxy * gxy
    if not den > 1e-12 * gxx * gyy:
        raise DegeneratePlane(f"vectors {tuple(np.asarray(x, float))} and {tuple(np.asarray(y, float))} span no plane")
    return riemann_apply(R, x, y, x, y) / den


def is_flat(R: CurvatureTensor, tol: float) -> bool:
    """True iff every lowered component is below tol in magnitude."""
    return bool(np.max(np.abs(R.low)) <= tol)


@dataclass(frozen=True)
class QInvarianceCheck:
    """Verdict of R(qx,qy,qz,qu) = R(x,y,z,u) via components and via sampling."""

    passed: bool
    diagonal_residual: float  # spread of R1212, R1313, R2323
    cross_residual: float  # spread of R1213, R1323, -R1223
    scale: float
    sampled_passed: bool
    sampled_residual: float
    tol: float


def check_q_invariance(R: CurvatureTensor, tol: float = 1e-9, seed: int = 0, samples: int = 20) -> QInvarianceCheck:
    """Check the curvature identity R(qx,qy,qz,qu) = R(x,y,z,u).

    Component route: R_1212 = R_1313 = R_2323 and R_1213 = R_1323 = -R_1223.
    (Transporting each slot through q permutes coordinate indices by
    1->3->2->1 with signs cancelling; the minus on R_1223 follows from the
    tensor antisymmetries and is confirmed by the sampling route below.)
    Sampling route: evaluates both sides of the identity on random vector
    4-tuples. The headline verdict is the component route's.
    """
    lo = R.low
    threshold = tol * (1.0 + float(np.max(np.abs(lo))))
    diag = np.array([lo[0, 1, 0, 1], lo[0, 2, 0, 2], lo[1, 2, 1, 2]])
    cross = np.array([lo[0, 1, 0, 2], lo[0, 2, 1, 2], -lo[0, 1, 1, 2]])
    diag_res = float(diag.max() - diag.min())
    cross_res = float(cross.max() - cross.min())
    passed = diag_res <= threshold and cross_res <= threshold

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        vecs = rng.standard_normal((4, 3))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        qvecs = [apply_q(v) for v in vecs]
        lhs = riemann_apply(R, *qvecs)
        rhs = riemann_apply(R, *vecs)
        worst = max(worst, abs(lhs - rhs))
    sampled_passed = worst <= threshold
    return QInvarianceCheck(
        passed=passed,
        diagonal_residual=diag_res,
        cross_residual=cross_res,
        scale=float(np.max(np.abs(lo))),
        sampled_passed=sampled_passed,
        sampled_residual=worst,
        tol=tol,
    )


@dataclass(frozen=True)
class RelationCheck:
    """Residual of one verified equality, with both sides kept for tolerances."""

    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


def _orthonormal_generator(M: MetricAtPoint) -> np.ndarray:
    x = construct_orthogonal_vector(M.A, M.B)
    return x / np.sqrt(inner(M, x, x))


def _require_identity_and_basis(M, R, u, tol, require_identity):
    check = check_q_invariance(R, tol=tol)
    if require_identity and not check.passed:
        raise IdentityRNotSatisfied(
            "curvature q-invariance fails at this point "
            f"(diagonal spread {check.diagonal_residual:.3e}, cross spread {check.cross_residual:.3e})"
        )
    if not induces_q_basis(u):
        raise NotAQBasis(f"vector {tuple(np.asarray(u, float))} does not induce a q-basis")


def check_sectional_difference_formula(
    m: MetricFunctions, p, u, tol: float = 1e-9, require_identity: bool = True
) -> RelationCheck:
    """mu(u,qu) - mu(x,qx) = (2 cos phi / (1 - cos phi)) R(x, qx, x, q^2 x).

    x is the normalized orthogonal-basis generator, phi = angle(u, qu).
    Valid on manifolds whose curvature is q-invariant; refuses elsewhere
    unless require_identity=False (diagnostic use).
    """
    M = metric_at(m, p)
    R = riemann_from_metric(M)
    _require_identity_and_basis(M, R, u, tol, require_identity)
    x = _orthonormal_generator(M)
    qx = apply_q(x)
    q2x = apply_q(qx)
    cphi = q_basis_angles(M, u).cos_phi_x_qx
    lhs = sectional_curvature(M, R, u, apply_q(u)) - sectional_curvature(M, R, x, qx)
    rhs = (2.0 * cphi / (1.0 - cphi)) * riemann_apply(R, x, qx, x, q2x)
    return RelationCheck(lhs, rhs)


def check_sectional_combination_formula(
    m: MetricFunctions, p, u, tol: float = 1e-9, require_identity: bool = True
) -> RelationCheck:
    """mu(u,qu) = ((1+2cos phi) mu(x,qx) - 3 cos phi mu(y,qy)) / (1 - cos phi).

    y is a constructed vector with angle(y, qy) = 2 pi / 3.
    """
    M = metric_at(m, p)
    R = riemann_from_metric(M)
    _require_identity_and_basis(M, R, u, tol, require_identity)
    x = _orthonormal_generator(M)
    y = construct_special_angle_vector(M.A, M.B)
    cphi = q_basis_angles(M, u).cos_phi_x_qx
    mu_x = sectional_curvature(M, R, x, apply_q(x))
    mu_y = sectional_curvature(M, R, y, apply_q(y))
    lhs = sectional_curvature(M, R, u, apply_q(u))
    rhs = ((1.0 + 2.0 * cphi) * mu_x - 3.0 * cphi * mu_y) / (1.0 - cphi)
    return RelationCheck(lhs, rhs)


@dataclass(frozen=True)
class EqualSectionalCheck:
    mu_u_qu: float
    mu_qu_q2u: float
    mu_q2u_u: float

    @property
    def residuals(self) -> tuple[float, float]:
        return (abs(self.mu_u_qu - self.mu_qu_q2u), abs(self.mu_u_qu - self.mu_q2u_u))


def check_equal_sectional_curvatures(
    m: MetricFunctions, p, u, tol: float = 1e-9, require_identity: bool = True
) -> EqualSectionalCheck:
    """Sectional curvatures of the planes {u,qu}, {qu,q^2u}, {q^2u,u}.

    Equal on manifolds with q-invariant curvature.
    """
    M = metric_at(m, p)
    R = riemann_from_metric(M)
    _require_identity_and_basis(M, R, u, tol, require_identity)
    qu = apply_q(u)
    q2u = apply_q(qu)
    return EqualSectionalCheck(
        mu_u_qu=sectional_curvature(M, R, u, qu),
        mu_qu_q2u=sectional_curvature(M, R, qu, q2u),
        mu_q2u_u=sectional_curvature(M, R, q2u, u),
    )
