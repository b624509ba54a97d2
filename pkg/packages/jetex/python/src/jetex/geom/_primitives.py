"""Local inversion radius of smooth maps and the radial primitive of closed 2-forms."""

from __future__ import annotations

import itertools
import math
import warnings
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from jetex._errors import PreconditionError

from ._comparison import sample_tangent_ball
from ._models import FD_STEP, central_difference

SmoothMap = Callable[[np.ndarray], np.ndarray]
TwoForm = Callable[[np.ndarray], np.ndarray]

# Second differences lose digits as step^-2; this step keeps them near 1e-10.
HESSIAN_STEP = 1e-3


def _jacobian(f: SmoothMap, x: np.ndarray) -> np.ndarray:
    columns = [central_difference(lambda p: np.atleast_1d(f(p)), x, e)[0] for e in np.eye(len(x))]
    return np.stack(columns, axis=1)


def _hessian_norm(f: SmoothMap, x: np.ndarray, step: float = HESSIAN_STEP) -> float:
    """``sqrt(sum_i |Hess f_i|_2^2)``, an upper bound of the bilinear norm of ``d^2 f``."""
    d = len(x)
    eye = np.eye(d)

    def value(p: np.ndarray) -> np.ndarray:
        return np.atleast_1d(np.asarray(f(p), dtype=float))

    hessians = np.zeros((len(value(x)), d, d))
    for i in range(d):
        for j in range(i, d):
            ei, ej = step * eye[i], step * eye[j]
            mixed = (
                value(x + ei + ej) - value(x + ei - ej) - value(x - ei + ej) + value(x - ei - ej)
            ) / (4 * step**2)
            hessians[:, i, j] = hessians[:, j, i] = mixed
    return math.sqrt(sum(np.linalg.norm(h, 2) ** 2 for h in hessians))


def inversion_radius(
    f: SmoothMap,
    a: np.ndarray | float,
    radius: float,
    n_sup: int = 256,
    n_pairs: int = 10_000,
    seed: int = 0,
) -> dict[str, float | bool]:
    """``rho = 1 / (6 |df_a^{-1}| sup_U |d^2 f|)`` on ``U = B(a, radius)``, with a certificate.

    Derivatives are finite differences; ``sup_U`` is taken over ``a`` and
    ``n_sup`` seeded points of ``U``. Injectivity on ``B(a, rho)`` is certified
    by ``n_pairs`` seeded pairs through the smallest ratio
    ``|f(x) - f(y)| / |x - y|``. A radius beyond ``U`` (for example a linear
    ``f``) is capped at ``radius`` with a warning.

    Raises:
        PreconditionError: If ``df_a`` is singular

    Example:
        >>> report = inversion_radius(lambda x: x + x**2 / 2, 0.0, 1.0, n_pairs=100)
        >>> round(report["rho"], 6), report["injective"]
        (0.166667, True)
    """
    center = np.atleast_1d(np.asarray(a, dtype=float))
    d = len(center)
    jac = _jacobian(f, center)
    singular_values = np.linalg.svd(jac, compute_uv=False)
    if singular_values[-1] <= 1e-12 * max(1.0, singular_values[0]):
        raise PreconditionError(f"df_a is singular at a={center.tolist()}")
    inverse_norm = 1.0 / float(singular_values[-1])

    points = [center, *(center + sample_tangent_ball(d, radius, n_sup, seed))]
    sup = max(_hessian_norm(f, p) for p in points)
    raw = 1.0 / (6.0 * inverse_norm * sup) if sup > 0 else math.inf
    capped = raw >= radius
    if capped:
        warnings.warn(
            f"Inversion radius is unbounded on U (raw value {raw:.3g}); capped at {radius}",
            UserWarning,
            stacklevel=2,
        )
    rho = min(raw, radius)

    rng_seed = seed + 1
    first = center + sample_tangent_ball(d, rho, n_pairs, rng_seed)
    second = center + sample_tangent_ball(d, rho, n_pairs, rng_seed + 1)
    images_first = np.array([np.atleast_1d(f(p)) for p in first])
    images_second = np.array([np.atleast_1d(f(p)) for p in second])
    gaps = np.linalg.norm(first - second, axis=1)
    keep = gaps > 0
    ratios = np.linalg.norm(images_first - images_second, axis=1)[keep] / gaps[keep]
    min_ratio = float(np.min(ratios)) if ratios.size else math.inf
    return {
        "rho": rho,
        "raw_rho": raw,
        "capped": capped,
        "df_inverse_norm": inverse_norm,
        "second_derivative_sup": sup,
        "pairs": n_pairs,
        "min_ratio": min_ratio,
        "expansion_bound": 1.0 / (2.0 * inverse_norm),
        "injective": min_ratio > 0,
    }


def primitive_one_form(form: TwoForm, x: np.ndarray, n_quad: int = 16) -> np.ndarray:
    """``U(x) = sum_{i<j} (int_0^1 t v_ij(t x) dt)(x_i dx_j - x_j dx_i)`` as components ``U_l``.

    ``form(x)`` returns the antisymmetric matrix ``v_ij``. The radial integral
    uses Gauss-Legendre on ``[0, 1]``.
    """
    point = np.asarray(x, dtype=float)
    nodes, weights = np.polynomial.legendre.leggauss(n_quad)
    t = 0.5 * (nodes + 1.0)
    averaged = sum(
        0.5 * w * s * np.asarray(form(s * point), dtype=float)
        for s, w in zip(t, weights, strict=True)
    )
    # For antisymmetric c: sum_{i<j} c_ij (x_i e_j - x_j e_i) = c^T x
    return averaged.T @ point


@dataclass(frozen=True, eq=False)
class PoincarePrimitive:
    """Radial primitive ``U`` of a closed 2-form on a ball, sampled.

    Attributes:
        points: Sample points, the center first, shape ``(n, d)``
        values: ``U`` at the points, shape ``(n, d)``
        radius: Radius of the ball
        d_residual: ``max |dU - v|`` over the points
        closed_residual: ``max |dv|`` over the points (0 in dimension 2)
        constant: ``max |U| / max |v|_2``, the measured ``C_1``
    """

    points: np.ndarray
    values: np.ndarray
    radius: float
    d_residual: float
    closed_residual: float
    constant: float

    def holds(self, tol: float = 1e-8) -> bool:
        return self.d_residual <= tol and self.constant <= self.radius


def _exterior_derivative(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> np.ndarray:
    """Partial derivatives ``D[k] = d fn / d x_k`` by Richardson differences."""
    return np.stack([central_difference(fn, x, e, FD_STEP)[0] for e in np.eye(len(x))])


def poincare_primitive(
    form: TwoForm,
    dim: int = 2,
    radius: float = 1.0,
    n_points: int = 64,
    n_quad: int = 16,
    seed: int = 0,
    closed_tol: float = 1e-6,
) -> PoincarePrimitive:
    """Build ``U`` with ``dU = v`` on ``B(0, radius)`` and measure it.

    Raises:
        PreconditionError: If ``v`` is not closed within ``closed_tol``

    Example:
        >>> area = lambda x: np.array([[0.0, 1.0], [-1.0, 0.0]])
        >>> primitive = poincare_primitive(area, n_points=4)
        >>> np.round(primitive_one_form(area, np.array([0.2, 0.4])), 12).tolist()
        [-0.2, 0.1]
    """
    points = np.vstack([np.zeros(dim), sample_tangent_ball(dim, radius, n_points, seed)])

    closed_residual = 0.0
    if dim >= 3:
        for p in points:
            dv = _exterior_derivative(form, p)
            for i, j, k in itertools.combinations(range(dim), 3):
                cyclic = dv[i, j, k] + dv[j, k, i] + dv[k, i, j]
                closed_residual = max(closed_residual, abs(float(cyclic)))
        if closed_residual > closed_tol:
            raise PreconditionError(
                f"The 2-form is not closed: |dv| reaches {closed_residual:.3g}"
            )

    def primitive(p: np.ndarray) -> np.ndarray:
        return primitive_one_form(form, p, n_quad)

    values = np.array([primitive(p) for p in points])
    d_residual = 0.0
    form_sup = 0.0
    for p in points:
        du = _exterior_derivative(primitive, p)  # du[i, j] = d U_j / d x_i
        target = np.asarray(form(p), dtype=float)
        d_residual = max(d_residual, float(np.max(np.abs(du - du.T - target))))
        form_sup = max(form_sup, float(np.linalg.norm(target, 2)))
    u_sup = float(np.max(np.linalg.norm(values, axis=1)))
    constant = u_sup / form_sup if form_sup > 0 else 0.0
    return PoincarePrimitive(points, values, radius, d_residual, closed_residual, constant)


def random_exact_form(dim: int, degree: int = 2, seed: int = 0) -> TwoForm:
    """``d alpha`` for a seeded random polynomial 1-form ``alpha`` of ``degree``."""
    rng = np.random.default_rng(seed)
    exponents = np.array(
        [b for b in itertools.product(range(degree + 1), repeat=dim) if sum(b) <= degree]
    )
    coefficients = rng.standard_normal((dim, len(exponents)))
    eye = np.eye(dim, dtype=int)

    def form(x: np.ndarray) -> np.ndarray:
        point = np.asarray(x, dtype=float)
        # grad[i, j] = d alpha_j / d x_i
        grad = np.zeros((dim, dim))
        for i in range(dim):
            lowered = np.clip(exponents - eye[i], 0, None)
            monomials = exponents[:, i] * np.prod(point ** lowered, axis=1)
            grad[i] = coefficients @ monomials
        return grad - grad.T

    return form


__all__ = [
    "HESSIAN_STEP",
    "PoincarePrimitive",
    "SmoothMap",
    "TwoForm",
    "inversion_radius",
    "poincare_primitive",
    "primitive_one_form",
    "random_exact_form",
]
