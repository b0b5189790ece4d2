"""Single-chart Riemannian geometry on the closed ball in R^d.

The manifold is {|x| <= radius} with a smooth closed-form metric. Metric
entries are evaluated through dual-number arithmetic, so Christoffel symbols
(one metric derivative) and the curvature operator (two) are available at
machine precision, also when the evaluation point itself carries dual seeds
from an outer differentiation. A central-difference mode exists purely as a
cross-check.

Points and vectors are passed as lists of scalar-likes (floats, numpy arrays
or duals), one entry per coordinate, so that every routine works on batches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dual as dm
from .dual import Dual, dual_part, value
from .errors import DomainError, GeometryError, InputError, NormalizationError
from .expressions import coordinate_names, parse_expression

__all__ = [
    "MetricChart", "CurvatureOperator", "make_chart", "builtin_charts",
    "christoffel", "curvature_tensor", "curvature_operator", "curvature_apply",
    "fiber_frame", "transverse_frame",
]


@dataclass(frozen=True)
class MetricChart:
    """Chart domain {|x| <= radius} in R^d with metric x -> g_ij(x)."""

    dim: int
    radius: float
    metric_fn: object                   # callable: list of d coords -> d x d nested list
    name: str = "custom"
    params: dict = field(default_factory=dict)
    derivative_mode: str = "dual"       # "dual" | "central"
    fd_step: float = None               # central-difference step; default 1e-5 * radius

    def __post_init__(self):
        if self.dim < 2:
            raise InputError("chart dimension must be >= 2")
        if self.radius <= 0:
            raise InputError("chart radius must be positive")
        if self.derivative_mode not in ("dual", "central"):
            raise InputError(f"unknown derivative_mode {self.derivative_mode!r}")
        if self.fd_step is None:
            object.__setattr__(self, "fd_step", 1e-5 * self.radius)

    # -- metric evaluation ------------------------------------------------

    def metric(self, x, check=False):
        g = self.metric_fn(x)
        if check:
            self._check_spd(g)
        return g

    def _check_spd(self, g):
        d = self.dim
        for i in range(d):
            for j in range(i):
                sym = value(g[i][j]) - value(g[j][i])
                if np.max(np.abs(sym)) > 1e-12:
                    raise GeometryError("metric matrix is not symmetric")
        # leading principal minors > 0  <=>  SPD
        minor = 1.0
        for k in range(1, d + 1):
            minor = _det([[value(g[i][j]) for j in range(k)] for i in range(k)])
            if np.min(np.asarray(minor)) <= 0.0:
                raise GeometryError(f"metric is not positive definite (minor {k} <= 0)")

    def metric_det(self, x):
        return _det(self.metric(x))

    def sqrt_det(self, x):
        return dm.sqrt(self.metric_det(x))

    def metric_inv(self, x):
        return _inv(self.metric(x), self.dim)

    def metric_derivs(self, x):
        """dg[p][i][j] = d g_ij / d x^p."""
        d = self.dim
        if self.derivative_mode == "central":
            return self._metric_derivs_central(x)
        out = []
        for p in range(d):
            seeded = [Dual(c, 1.0 if q == p else 0.0) for q, c in enumerate(x)]
            g = self.metric_fn(seeded)
            out.append([[dual_part(g[i][j]) for j in range(d)] for i in range(d)])
        return out

    def _metric_derivs_central(self, x):
        d, h = self.dim, self.fd_step
        out = []
        for p in range(d):
            xp = list(x)
            xm = list(x)
            xp[p] = xp[p] + h
            xm[p] = xm[p] - h
            gp = self.metric_fn(xp)
            gm = self.metric_fn(xm)
            out.append([[(gp[i][j] - gm[i][j]) / (2.0 * h) for j in range(d)] for i in range(d)])
        return out

    # -- inner products ----------------------------------------------------

    def inner(self, x, u, v):
        g = self.metric(x)
        d = self.dim
        tot = 0.0
        for i in range(d):
            for j in range(d):
                tot = tot + g[i][j] * u[i] * v[j]
        return tot

    def norm_sq(self, x, v):
        return self.inner(x, v, v)

    def unit(self, x, v):
        n = dm.sqrt(self.norm_sq(x, v))
        return [vi / n for vi in v]

    def contains(self, x, tol=1e-12):
        r2 = sum(value(c) ** 2 for c in x)
        return np.all(np.asarray(r2) <= self.radius ** 2 * (1.0 + tol) + tol)

    def require_inside(self, x):
        if not self.contains(x):
            raise DomainError("point outside the chart ball")


@dataclass(frozen=True)
class CurvatureOperator:
    """Matrix of w -> R_x(w, v)v on {v}^perp in a g-orthonormal frame."""

    matrix: np.ndarray          # (d-1, d-1)
    frame: np.ndarray           # (d, d-1), columns are the frame vectors
    base_point: np.ndarray
    direction: np.ndarray


# ---------------------------------------------------------------------------
# small dense linear algebra on nested lists (dual-friendly)

def _det(g):
    n = len(g)
    if n == 1:
        return g[0][0]
    if n == 2:
        return g[0][0] * g[1][1] - g[0][1] * g[1][0]
    if n == 3:
        return (g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
                - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]))
    raise InputError("determinants implemented for d <= 3 only")


def _inv(g, d):
    det = _det(g)
    if d == 2:
        return [[g[1][1] / det, -g[0][1] / det],
                [-g[1][0] / det, g[0][0] / det]]
    if d == 3:
        c = [[(g[(i + 1) % 3][(j + 1) % 3] * g[(i + 2) % 3][(j + 2) % 3]
               - g[(i + 1) % 3][(j + 2) % 3] * g[(i + 2) % 3][(j + 1) % 3])
              for i in range(3)] for j in range(3)]
        return [[c[i][j] / det for j in range(3)] for i in range(3)]
    raise InputError("metric inverses implemented for d <= 3 only")


# ---------------------------------------------------------------------------
# built-in metric families

def _euclidean(dim):
    def fn(x):
        return [[1.0 if i == j else 0.0 for j in range(dim)] for i in range(dim)]
    return fn


def _scaled_flat(dim, scale):
    def fn(x):
        return [[scale if i == j else 0.0 for j in range(dim)] for i in range(dim)]
    return fn


def _conformal(dim, lam):
    def fn(x):
        factor = dm.exp(2.0 * lam(x))
        return [[factor if i == j else 0.0 * factor for j in range(dim)] for i in range(dim)]
    return fn


def _cap(dim, curvature, sign):
    # 4 delta / (1 + K|x|^2)^2  (sign=+1, curvature +K) or (1 - K|x|^2)^2 (sign=-1)
    def fn(x):
        r2 = sum(c * c for c in x)
        denom = 1.0 + sign * curvature * r2
        factor = 4.0 / (denom * denom)
        return [[factor if i == j else 0.0 * factor for j in range(dim)] for i in range(dim)]
    return fn


def make_chart(family, dim=2, radius=1.0, params=None, derivative_mode="dual", fd_step=None):
    """Build a built-in chart: euclidean | scaled_flat | conformal | sphere_cap | hyperbolic."""
    params = dict(params or {})
    if family == "euclidean":
        fn = _euclidean(dim)
    elif family == "scaled_flat":
        scale = float(params.get("scale", 2.0))
        if scale <= 0:
            raise InputError("scaled_flat needs scale > 0")
        fn = _scaled_flat(dim, scale)
    elif family == "conformal":
        lam_src = params.get("lambda", "0.25*x1")
        params["lambda"] = lam_src
        expr = parse_expression(lam_src, coordinate_names(dim))
        names = coordinate_names(dim)

        def lam(x, _expr=expr, _names=names):
            return _expr(dict(zip(_names, x)))

        fn = _conformal(dim, lam)
    elif family in ("sphere_cap", "hyperbolic"):
        curv = float(params.get("curvature", 1.0))
        if curv <= 0:
            raise InputError(f"{family} needs curvature > 0")
        if family == "hyperbolic" and curv * radius ** 2 >= 1.0:
            raise GeometryError("hyperbolic chart needs curvature * radius^2 < 1")
        fn = _cap(dim, curv, +1 if family == "sphere_cap" else -1)
    else:
        raise InputError(f"unknown metric family {family!r}")
    return MetricChart(dim=dim, radius=radius, metric_fn=fn, name=family,
                       params=params, derivative_mode=derivative_mode, fd_step=fd_step)


def builtin_charts(dim=2, radius=1.0):
    """The standard verification suite of charts at a common radius."""
    charts = {
        "euclidean": make_chart("euclidean", dim, radius),
        "conformal": make_chart("conformal", dim, radius, {"lambda": "0.25*x1"}),
    }
    if dim == 2:
        charts["scaled_flat"] = make_chart("scaled_flat", dim, radius, {"scale": 1.7})
        charts["sphere_cap"] = make_chart("sphere_cap", dim, radius, {"curvature": 1.0})
        if radius < 1.0:
            charts["hyperbolic"] = make_chart("hyperbolic", dim, radius, {"curvature": 1.0})
    return charts


# ---------------------------------------------------------------------------
# Christoffel symbols and curvature

def christoffel(chart, x, check_domain=True):
    """Gamma^l_jk = 1/2 g^lp (d_j g_pk + d_k g_pj - d_p g_jk); symmetric in (j,k)."""
    d = chart.dim
    if check_domain and not isinstance(x[0], Dual):
        chart.require_inside(x)
        chart.metric(x, check=True)
    dg = chart.metric_derivs(x)
    ginv = chart.metric_inv(x)
    gam = [[[None] * d for _ in range(d)] for _ in range(d)]
    for j in range(d):
        for k in range(j, d):
            # assemble the lowered symbol once, raise for each l
            low = [dg[j][p][k] + dg[k][p][j] - dg[p][j][k] for p in range(d)]
            for l in range(d):
                tot = 0.0
                for p in range(d):
                    tot = tot + ginv[l][p] * low[p]
                val = 0.5 * tot
                gam[l][j][k] = val
                gam[l][k][j] = val
    return gam


def _christoffel_derivs(chart, x):
    """dGam[p][l][j][k] = d Gamma^l_jk / d x^p."""
    d = chart.dim
    if chart.derivative_mode == "central":
        h = chart.fd_step
        out = []
        for p in range(d):
            xp = list(x)
            xm = list(x)
            xp[p] = xp[p] + h
            xm[p] = xm[p] - h
            gp = christoffel(chart, xp, check_domain=False)
            gm = christoffel(chart, xm, check_domain=False)
            out.append([[[(gp[l][j][k] - gm[l][j][k]) / (2.0 * h)
                          for k in range(d)] for j in range(d)] for l in range(d)])
        return out
    out = []
    for p in range(d):
        seeded = [Dual(c, 1.0 if q == p else 0.0) for q, c in enumerate(x)]
        gam = christoffel(chart, seeded, check_domain=False)
        out.append([[[dual_part(gam[l][j][k]) for k in range(d)]
                     for j in range(d)] for l in range(d)])
    return out


def curvature_tensor(chart, x):
    """R^i_jkl with (R(e_k, e_l) e_j)^i = R^i_jkl, from Gamma and its derivative."""
    d = chart.dim
    gam = christoffel(chart, x, check_domain=False)
    dgam = _christoffel_derivs(chart, x)
    R = [[[[None] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    tot = dgam[k][i][l][j] - dgam[l][i][k][j]
                    for p in range(d):
                        tot = tot + gam[i][k][p] * gam[p][l][j] - gam[i][l][p] * gam[p][k][j]
                    R[i][j][k][l] = tot
    return R


def curvature_apply(chart, x, Z, v):
    """(R(x,v) Z)^i = R^i_jkl v^j Z^k v^l; x must be numeric (batched ok)."""
    if isinstance(x[0], Dual):
        raise InputError("curvature_apply requires a numeric base point")
    d = chart.dim
    R = curvature_tensor(chart, x)
    out = []
    for i in range(d):
        tot = 0.0
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    Rijkl = R[i][j][k][l]
                    if isinstance(Rijkl, float) and Rijkl == 0.0:
                        continue
                    tot = tot + Rijkl * v[j] * Z[k] * v[l]
        out.append(tot)
    return out


def curvature_operator(chart, x, v):
    """Frame matrix of the Jacobi curvature operator on {v}^perp at (x, v)."""
    x = [float(c) for c in x]
    v = [float(c) for c in v]
    n2 = value(chart.norm_sq(x, v))
    if abs(n2 - 1.0) > 1e-10:
        raise NormalizationError(f"direction must be g-unit (|v|_g^2 = {n2})")
    frame = transverse_frame(chart, _cols(np.array([x])), np.array([v]))[0]
    mat = _curvature_frame_matrix(chart, _cols(np.array([x])), np.array([v]), frame[None])[0]
    return CurvatureOperator(matrix=mat, frame=frame,
                             base_point=np.array(x), direction=np.array(v))


def _curvature_frame_matrix(chart, x_cols, v, frames):
    """Batched A[a,b] = <R(E_b, v)v, E_a>_g; x_cols list of (n,), v (n,d), frames (n,d,d-1)."""
    d = chart.dim
    n = v.shape[0]
    R = curvature_tensor(chart, x_cols)
    g = chart.metric(x_cols)
    A = np.zeros((n, d - 1, d - 1))
    # Rv[i][k] = R^i_jkl v^j v^l
    Rv = [[sum(np.asarray(R[i][j][k][l]) * v[:, j] * v[:, l]
               for j in range(d) for l in range(d)) for k in range(d)] for i in range(d)]
    for b in range(d - 1):
        w = [sum(Rv[i][k] * frames[:, k, b] for k in range(d)) for i in range(d)]
        for a in range(d - 1):
            acc = 0.0
            for i in range(d):
                for p in range(d):
                    acc = acc + np.asarray(g[i][p]) * w[i] * frames[:, p, a]
            A[:, a, b] = acc
    return A


# ---------------------------------------------------------------------------
# orthonormal frames

def _cols(arr):
    """(n, d) array -> list of d column arrays."""
    return [arr[:, i] for i in range(arr.shape[1])]


def _metric_matrices(chart, x_cols):
    """Stack the metric at a batch of points into an (n, d, d) array."""
    g = chart.metric(x_cols)
    d = chart.dim
    n = np.broadcast(*(np.asarray(value(c)) for c in x_cols)).shape[0]
    out = np.empty((n, d, d))
    for i in range(d):
        for j in range(d):
            out[:, i, j] = np.broadcast_to(np.asarray(value(g[i][j])), (n,))
    return out


def fiber_frame(chart, x_cols, offset=0.0):
    """g-orthonormal frame of T_xM per point: columns e_i = L^{-T} ehat_i.

    ``offset`` rotates the reference basis in the (1,2)-plane; used to check
    that fiber quadratures do not depend on the parametrization.
    """
    g = _metric_matrices(chart, x_cols)
    L = np.linalg.cholesky(g)
    Linv = np.linalg.inv(L)
    frame = np.transpose(Linv, (0, 2, 1))  # columns L^{-T} e_i
    if offset:
        d = chart.dim
        rot = np.eye(d)
        c, s = math.cos(offset), math.sin(offset)
        rot[0, 0], rot[0, 1], rot[1, 0], rot[1, 1] = c, -s, s, c
        frame = frame @ rot
    return frame


def transverse_frame(chart, x_cols, v):
    """Batched g-orthonormal frame of {v}^perp; deterministic completion of v.

    Works in the Euclidean picture vhat = L^T v, completes with the coordinate
    vectors least aligned with vhat (ties to the smaller index), Gram-Schmidts,
    and maps back with L^{-T}.
    """
    d = chart.dim
    g = _metric_matrices(chart, x_cols)
    L = np.linalg.cholesky(g)
    vhat = np.einsum("nji,nj->ni", L, np.asarray(v, dtype=float))
    n = vhat.shape[0]
    vhat = vhat / np.linalg.norm(vhat, axis=1, keepdims=True)
    # stable argsort of |vhat_i| gives the completion order
    order = np.argsort(np.abs(vhat) - 1e-18 * np.arange(d)[None, :], axis=1, kind="stable")
    basis = [vhat]
    for a in range(d - 1):
        e = np.zeros((n, d))
        e[np.arange(n), order[:, a]] = 1.0
        w = e
        for prev in basis:
            w = w - np.sum(w * prev, axis=1, keepdims=True) * prev
        w = w / np.linalg.norm(w, axis=1, keepdims=True)
        basis.append(w)
    ehat = np.stack(basis[1:], axis=2)           # (n, d, d-1), Euclidean-orthonormal, perp vhat
    Linv = np.linalg.inv(L)
    return np.einsum("nji,njb->nib", Linv, ehat)  # L^{-T} ehat
