"""Riemannian geometry of a homogeneous frame.

A :class:`FrameManifold` is a global frame ``e_1..e_n`` with constant bracket
coefficients ``[e_i, e_j] = c[i, j, k] e_k`` and a constant metric.  Vector
fields with constant frame components are then globally defined, and every
derivative of them reduces to exact algebra in ``c`` and the connection
coefficients.

Curvature convention: ``R(X, Y) = ∇_X ∇_Y - ∇_Y ∇_X - ∇_[X,Y]``, stored as the
(3,1) tensor ``R[i, j, l, k] = (R(e_i, e_j) e_l)^k``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .exact import Tensor, rational_inverse
from .linalg import nullspace


class GeometryError(ValueError):
    """Raised when a frame cannot carry the requested structure."""


@dataclass(frozen=True, eq=False)
class FrameManifold:
    m: int
    structure: np.ndarray  # c[i, j, k]
    metric: np.ndarray

    def __post_init__(self):
        n = 2 * self.m + 1
        if self.m < 1:
            raise GeometryError(f"m must be positive, got {self.m}")
        c = np.array(self.structure, dtype=object)
        g = np.array(self.metric, dtype=object)
        if c.shape != (n, n, n):
            raise GeometryError(f"structure coefficients must have shape {(n, n, n)}, got {c.shape}")
        if g.shape != (n, n):
            raise GeometryError(f"metric must have shape {(n, n)}, got {g.shape}")
        c = Tensor(c, (2, 1)).components
        g = Tensor(g, (2, 0)).components
        for i, j, k in itertools.product(range(n), repeat=3):
            if c[i, j, k] != -c[j, i, k]:
                raise GeometryError(
                    f"bracket not antisymmetric at ({i + 1},{j + 1},{k + 1})")
        if not all(g[i, j] == (1 if i == j else 0) for i in range(n) for j in range(n)):
            # an orthonormal frame keeps every trace rational
            raise GeometryError("only the identity frame metric is supported")
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "metric", g)

    @property
    def dim(self) -> int:
        return 2 * self.m + 1

    @classmethod
    def from_brackets(cls, m: int, brackets: dict[tuple[int, int], dict[int, Fraction]]):
        """Build from ``{(i, j): {k: c}}`` with 1-based ``i < j``."""
        n = 2 * m + 1
        c = np.full((n, n, n), Fraction(0), dtype=object)
        for (i, j), terms in brackets.items():
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise GeometryError(f"bad bracket index pair ({i},{j})")
            for k, val in terms.items():
                if not 1 <= k <= n:
                    raise GeometryError(f"bad bracket target index {k}")
                c[i - 1, j - 1, k - 1] += Fraction(val)
                c[j - 1, i - 1, k - 1] -= Fraction(val)
        return cls(m, c, _identity(n))

    @classmethod
    def abelian(cls, m: int) -> "FrameManifold":
        n = 2 * m + 1
        return cls(m, np.full((n, n, n), Fraction(0), dtype=object), _identity(n))

    @property
    def g(self) -> Tensor:
        return Tensor(self.metric, (2, 0))

    @property
    def g_inv(self) -> np.ndarray:
        return rational_inverse(self.metric)


def _identity(n: int) -> np.ndarray:
    arr = np.full((n, n), Fraction(0), dtype=object)
    for i in range(n):
        arr[i, i] = Fraction(1)
    return arr


def jacobi_check(M: FrameManifold) -> tuple[bool, list[tuple[int, int, int]]]:
    """Exact Jacobi identity test; violating triples are 1-based, ``i<j<l``."""
    c = M.structure
    n = M.dim
    bad = []
    for i, j, l in itertools.combinations(range(n), 3):
        cyc = (np.dot(c[i, j, :], c[:, l, :]) + np.dot(c[j, l, :], c[:, i, :])
               + np.dot(c[l, i, :], c[:, j, :]))
        if any(x != 0 for x in cyc):
            bad.append((i + 1, j + 1, l + 1))
    return not bad, bad


@dataclass(frozen=True, eq=False)
class Connection:
    """``coeffs[i, j, k] = (∇_{e_i} e_j)^k``."""

    coeffs: np.ndarray

    def nabla(self, X: Tensor, Y: Tensor) -> Tensor:
        """``∇_X Y`` for constant-component vector fields."""
        return Tensor(np.einsum("i,j,ijk->k", X.components, Y.components, self.coeffs), (0, 1))

    def derivative_of(self, V: Tensor) -> np.ndarray:
        """``D[x, k] = (∇_{e_x} V)^k``."""
        return np.einsum("j,xjk->xk", V.components, self.coeffs)


def levi_civita(M: FrameManifold) -> Connection:
    """Frame Koszul formula with constant inner products:
    ``2 g(∇_i e_j, e_k) = g([e_i,e_j],e_k) - g([e_j,e_k],e_i) + g([e_k,e_i],e_j)``.
    """
    ok, bad = jacobi_check(M)
    if not ok:
        raise GeometryError(f"Jacobi identity fails for triple {bad[0]}")
    c, g = M.structure, M.metric
    try:
        g_inv = rational_inverse(g)
    except ZeroDivisionError:
        raise GeometryError("singular metric") from None
    lowered = np.einsum("ija,ak->ijk", c, g)  # g([e_i,e_j], e_k)
    koszul = (lowered - np.transpose(lowered, (2, 0, 1)) + np.transpose(lowered, (1, 2, 0))) / 2
    # transpose(lowered,(2,0,1))[i,j,k] = lowered[j,k,i]; (1,2,0) gives lowered[k,i,j]
    coeffs = np.einsum("ija,ak->ijk", koszul, g_inv)
    return Connection(Tensor(coeffs, (2, 1)).components)


def torsion(M: FrameManifold, conn: Connection) -> Tensor:
    G = conn.coeffs
    return Tensor(G - np.transpose(G, (1, 0, 2)) - M.structure, (2, 1))


def riemann(M: FrameManifold, conn: Connection) -> Tensor:
    G, c = conn.coeffs, M.structure
    R = (np.einsum("jla,iak->ijlk", G, G) - np.einsum("ila,jak->ijlk", G, G)
         - np.einsum("ija,alk->ijlk", c, G))
    return Tensor(R, (3, 1))


def ricci(R: Tensor, M: FrameManifold) -> tuple[Tensor, Fraction]:
    """``Ric(X, Y) = trace(Z -> R(Z, X) Y)`` and the scalar curvature."""
    ric = Tensor(np.einsum("ixyi->xy", R.components), (2, 0))
    return ric, metric_trace(ric, M)


def metric_trace(t: Tensor, M: FrameManifold) -> Fraction:
    return np.einsum("xy,xy->", t.components, M.g_inv)


def raise_last(t: Tensor, M: FrameManifold) -> Tensor:
    """Turn the last covariant slot of a (r,0) tensor into a contravariant one."""
    r, s = t.valence
    if s != 0 or r < 1:
        raise ValueError("raise_last expects a purely covariant tensor")
    return Tensor(np.tensordot(t.components, M.g_inv, axes=([r - 1], [0])), (r - 1, 1))


def lower_last(t: Tensor, M: FrameManifold) -> Tensor:
    r, s = t.valence
    if s != 1:
        raise ValueError("lower_last expects exactly one contravariant slot")
    return Tensor(np.tensordot(t.components, M.metric, axes=([r], [0])), (r + 1, 0))


def _derivation(arr: np.ndarray, D: np.ndarray, r: int, s: int) -> np.ndarray:
    """Extend a frame derivation ``e_i -> D[..., i, k] e_k`` to a tensor.

    ``D`` may carry leading batch axes (one per direction of differentiation);
    they become leading axes of the result.
    """
    batch = D.ndim - 2
    # contract over integers and divide once: object-dtype Fraction products are slow
    D, d_den = _clear_denominators(D)
    arr, a_den = _clear_denominators(arr)
    out = np.zeros(D.shape[:batch] + arr.shape, dtype=object)
    for p in range(r):
        term = np.tensordot(D, arr, axes=([batch + 1], [p]))
        out = out - np.moveaxis(term, batch, batch + p)
    for q in range(s):
        ax = r + q
        term = np.tensordot(D, arr, axes=([batch], [ax]))
        out = out + np.moveaxis(term, batch, batch + ax)
    den = d_den * a_den
    return np.frompyfunc(lambda x: Fraction(x, den), 1, 1)(out).astype(object).reshape(out.shape)


def _clear_denominators(arr: np.ndarray) -> tuple[np.ndarray, int]:
    """``(ints, d)`` with ``arr == ints / d`` and ``ints`` holding Python ints."""
    values = [Fraction(x) for x in arr.flat]
    den = math.lcm(1, *(x.denominator for x in values))
    ints = np.empty(arr.shape, dtype=object)
    ints.flat[:] = [x.numerator * (den // x.denominator) for x in values]
    return ints, den


def covariant_derivative(t: Tensor, conn: Connection) -> Tensor:
    """``∇t`` with the differentiation slot first: ``(∇t)[w, ...] = (∇_{e_w} t)[...]``.

    Components are constant, so only the connection terms survive.
    """
    r, s = t.valence
    return Tensor(_derivation(t.components, conn.coeffs, r, s), (r + 1, s))


def adjoint(V: Tensor, M: FrameManifold) -> np.ndarray:
    """``ad[x, k] = ([V, e_x])^k``."""
    return np.einsum("i,ixk->xk", V.components, M.structure)


def lie_bracket(V: Tensor, W: Tensor, M: FrameManifold) -> Tensor:
    if V.dim != W.dim or V.dim != M.dim:
        raise ValueError("dimension mismatch")
    return Tensor(np.einsum("i,j,ijk->k", V.components, W.components, M.structure), (0, 1))


def lie_derivative(t: Tensor, V: Tensor, M: FrameManifold) -> Tensor:
    """Lie derivative of a constant-component tensor along a constant field,
    from brackets alone (no connection involved)."""
    r, s = t.valence
    return Tensor(_derivation(t.components, adjoint(V, M), r, s), (r, s))


def lie_derivative_metric(V: Tensor, M: FrameManifold, conn: Connection) -> Tensor:
    """``(£_V g)(X, Y) = g(∇_X V, Y) + g(X, ∇_Y V)``."""
    B = np.einsum("xk,ky->xy", conn.derivative_of(V), M.metric)
    return Tensor(B + B.T, (2, 0))


def lie_derivative_connection(V: Tensor, M: FrameManifold, conn: Connection) -> Tensor:
    """``(£_V ∇)(X, Y)`` as the (2,1) tensor ``L[x, y, k]``, via the metric
    identity ``g((£_V∇)(X,Y), W) = ½(∇_X £g)(Y,W) + ½(∇_Y £g)(X,W) - ½(∇_W £g)(X,Y)``.
    """
    A = covariant_derivative(lie_derivative_metric(V, M, conn), conn).components
    low = (A + np.transpose(A, (1, 0, 2)) - np.transpose(A, (1, 2, 0))) / 2
    # transpose(A,(1,2,0))[x,y,w] = A[w,x,y]
    return raise_last(Tensor(low, (3, 0)), M)


def lie_derivative_connection_direct(V: Tensor, M: FrameManifold, conn: Connection) -> Tensor:
    """``(£_V ∇)(X, Y) = [V, ∇_X Y] - ∇_[V,X] Y - ∇_X [V, Y]`` on frame fields."""
    G = conn.coeffs
    ad = adjoint(V, M)
    L = (np.einsum("xyj,jk->xyk", G, ad)
         - np.einsum("xa,ayk->xyk", ad, G)
         - np.einsum("yb,xbk->xyk", ad, G))
    return Tensor(L, (2, 1))


def lie_derivative_curvature(V: Tensor, M: FrameManifold, conn: Connection,
                             R: Tensor) -> tuple[Tensor, Tensor]:
    """``£_V R`` and the residual of the commutation formula
    ``(£_V R)(X,Y)W = (∇_X £_V∇)(Y,W) - (∇_Y £_V∇)(X,W)``.

    The residual vanishes for every V; it exercises the whole derivative stack.
    """
    lie_R = lie_derivative(R, V, M)
    dL = covariant_derivative(lie_derivative_connection(V, M, conn), conn).components
    rhs = dL - np.transpose(dL, (1, 0, 2, 3))
    return lie_R, Tensor(lie_R.components - rhs, (3, 1))


def bianchi_first(R: Tensor) -> Tensor:
    A = R.components
    return Tensor(A + np.transpose(A, (1, 2, 0, 3)) + np.transpose(A, (2, 0, 1, 3)), (3, 1))


def bianchi_second(R: Tensor, conn: Connection) -> Tensor:
    """Cyclic sum over (W, X, Y) of ``(∇_W R)(X, Y)``."""
    D = covariant_derivative(R, conn).components
    return Tensor(D + np.transpose(D, (1, 2, 0, 3, 4)) + np.transpose(D, (2, 0, 1, 3, 4)), (4, 1))


Mode = Literal["killing", "conformal", "parallel"]


def find_special_fields(M: FrameManifold, conn: Connection,
                        mode: Mode) -> list[tuple[Tensor, Fraction]]:
    """Basis of constant-component fields that are Killing, conformal
    (``£_V g = 2ρ g``, ρ solved jointly) or parallel.

    Returns ``(V, ρ)`` pairs; ρ is zero except in conformal mode.  Fields with
    non-constant components are not representable, so an empty list only
    rules out the constant ones.
    """
    n = M.dim
    basis = [Tensor.basis_vector(n, a) for a in range(n)]
    if mode == "parallel":
        columns = [conn.derivative_of(e).ravel() for e in basis]
    else:
        columns = [lie_derivative_metric(e, M, conn).components.ravel() for e in basis]
        if mode == "conformal":
            columns.append((-2 * M.g).components.ravel())
        elif mode != "killing":
            raise ValueError(f"unknown mode {mode!r}")
    rows = [list(r) for r in zip(*columns)]
    out = []
    for vec in nullspace(rows, len(columns)):
        V = Tensor(vec[:n], (0, 1))
        rho = vec[n] if mode == "conformal" else Fraction(0)
        out.append((V, rho))
    return out
