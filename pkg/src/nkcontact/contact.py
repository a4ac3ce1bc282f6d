"""Almost contact metric structures on a homogeneous frame.

Validation of the structure equations, the tensor ``h = ½ £_ζ φ``, the
``(k, μ)``-nullity fit and the curvature identities that hold on N(k)-contact
metric manifolds.  Every check returns a :class:`Check` carrying the exact
residual (max absolute component of the difference of both sides).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .exact import Tensor, apply, compose, pair, tensor_product, trace
from .frame import (
    Connection,
    FrameManifold,
    GeometryError,
    covariant_derivative,
    levi_civita,
    lie_derivative,
    ricci,
    riemann,
)
from .linalg import solve_affine


@dataclass(frozen=True)
class Check:
    tag: str
    name: str
    residual: Fraction
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.residual == 0


def residual_check(tag: str, name: str, lhs: Tensor, rhs: Tensor, note: str = "") -> Check:
    return Check(tag, name, (lhs - rhs).max_abs(), note)


def scalar_check(tag: str, name: str, lhs, rhs, note: str = "") -> Check:
    return Check(tag, name, abs(Fraction(lhs) - Fraction(rhs)), note)


def flag_check(tag: str, name: str, ok: bool, note: str = "") -> Check:
    """Boolean condition expressed as a 0/1 residual."""
    return Check(tag, name, Fraction(0 if ok else 1), note)


@dataclass(frozen=True, eq=False)
class ContactStructure:
    phi: Tensor
    zeta: Tensor
    eta: Tensor
    h: Tensor | None = None
    k: Fraction | None = None
    mu: Fraction | None = None

    @classmethod
    def from_data(cls, M: FrameManifold, phi_matrix, zeta, eta=None) -> "ContactStructure":
        """``phi_matrix[a][b]`` is the ``e_a`` component of ``φ(e_b)`` (the usual
        matrix acting on column vectors).  ``eta`` defaults to the metric dual
        of ``zeta``."""
        n = M.dim
        mat = np.array(phi_matrix, dtype=object)
        if mat.shape != (n, n):
            raise GeometryError(f"phi must be {n}x{n}, got shape {mat.shape}")
        phi = Tensor(mat.T, (1, 1))
        zeta_t = Tensor.vector(zeta)
        if zeta_t.dim != n:
            raise GeometryError(f"zeta must have {n} components")
        if eta is None:
            eta_t = Tensor(M.metric @ zeta_t.components, (1, 0))
        else:
            eta_t = Tensor.covector(eta)
            if eta_t.dim != n:
                raise GeometryError(f"eta must have {n} components")
        return cls(phi, zeta_t, eta_t)

    @property
    def dim(self) -> int:
        return self.zeta.dim

    @property
    def is_nk(self) -> bool:
        return self.k is not None and self.mu == 0


@dataclass
class StructureReport:
    checks: list[Check] = field(default_factory=list)
    alpha: Fraction | None = None
    pairing: str | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)


def _frame(n: int) -> list[Tensor]:
    return [Tensor.basis_vector(n, i) for i in range(n)]


def _bilinear(M: FrameManifold, fn) -> Tensor:
    basis = _frame(M.dim)
    return Tensor.from_function(M.dim, (2, 0), lambda x, y: fn(basis[x], basis[y]))


def _g(M: FrameManifold, X: Tensor, Y: Tensor) -> Fraction:
    return X.components @ M.metric @ Y.components


def d_eta(M: FrameManifold, S: ContactStructure, alpha) -> Tensor:
    """``dη(X, Y) = α(Xη(Y) - Yη(X) - η([X,Y])) = -α η([X,Y])`` on frame fields."""
    return Tensor(-Fraction(alpha) * np.einsum("xyk,k->xy", M.structure, S.eta.components), (2, 0))


def validate_structure(M: FrameManifold, S: ContactStructure) -> StructureReport:
    """Almost contact metric equations plus the contact condition.

    The contact condition is tested under both normalisations of ``dη``
    (α = 1 and α = ½) and both orderings ``g(φX,Y)`` / ``g(X,φY)`` of the
    fundamental 2-form; the first combination that holds on every index pair
    is reported.
    """
    n = M.dim
    if S.phi.dim != n or S.zeta.dim != n or S.eta.dim != n:
        raise GeometryError("structure tensors do not match the frame dimension")
    rep = StructureReport()
    phi, zeta, eta = S.phi, S.zeta, S.eta
    ident = Tensor.identity(n)
    eta_zeta = tensor_product(eta, zeta)
    rep.checks.append(residual_check("Eq2.1", "phi^2 = -I + eta(x)zeta",
                                     compose(phi, phi), -ident + eta_zeta))
    rep.checks.append(scalar_check("Eq2.1", "eta(zeta) = 1", pair(eta, zeta), 1))
    rep.checks.append(residual_check("Eq2.2", "phi zeta = 0", apply(phi, zeta), Tensor.zeros(n, (0, 1))))
    rep.checks.append(residual_check("Eq2.2", "eta o phi = 0",
                                     Tensor(phi.components @ eta.components, (1, 0)),
                                     Tensor.zeros(n, (1, 0))))
    g = M.g
    gphiphi = _bilinear(M, lambda X, Y: _g(M, apply(phi, X), apply(phi, Y)))
    rep.checks.append(residual_check("Eq2.3", "g(phiX,phiY) = g(X,Y) - eta(X)eta(Y)",
                                     gphiphi, g - tensor_product(eta, eta)))
    rep.checks.append(residual_check("Eq2.3", "g(X,zeta) = eta(X)",
                                     Tensor(M.metric @ zeta.components, (1, 0)), eta))
    fund = _bilinear(M, lambda X, Y: _g(M, apply(phi, X), Y))  # g(φX, Y)
    rep.checks.append(residual_check("Eq2.4", "g(phiX,Y) = -g(X,phiY)",
                                     fund, -_bilinear(M, lambda X, Y: _g(M, X, apply(phi, Y)))))
    best = None
    for pairing, form in (("g(phiX,Y)", fund), ("g(X,phiY)", -fund)):
        for alpha in (Fraction(1), Fraction(1, 2)):
            if form == d_eta(M, S, alpha):
                best = (alpha, pairing)
                break
        if best:
            break
    if best:
        rep.alpha, rep.pairing = best
        rep.checks.append(Check("Eq2.5", "contact condition g(phiX,Y) = d eta(X,Y)", Fraction(0),
                                f"holds with alpha={rep.alpha} and 2-form {rep.pairing}"))
    else:
        resid = min((fund - d_eta(M, S, a)).max_abs() for a in (1, Fraction(1, 2)))
        rep.checks.append(Check("Eq2.5", "contact condition g(phiX,Y) = d eta(X,Y)", resid,
                                "no normalisation of d eta matches"))
    return rep


def lie_h(M: FrameManifold, S: ContactStructure) -> Tensor:
    """``h = ½ £_ζ φ`` from brackets: ``(£_ζφ)X = [ζ, φX] - φ[ζ, X]``."""
    return lie_derivative(S.phi, S.zeta, M) / 2


def h_checks(M: FrameManifold, conn: Connection, S: ContactStructure, h: Tensor) -> list[Check]:
    n = M.dim
    phi, zeta = S.phi, S.zeta
    zero11 = Tensor.zeros(n, (1, 1))
    phih = compose(phi, h)
    nabla_zeta = Tensor(conn.derivative_of(zeta), (1, 1))
    return [
        residual_check("Eq2.6", "h phi + phi h = 0", compose(h, phi) + phih, zero11),
        scalar_check("Eq2.6", "trace(h) = 0", trace(h), 0),
        scalar_check("Eq2.6", "trace(phi h) = 0", trace(phih), 0),
        residual_check("Eq2.6", "h zeta = 0", apply(h, zeta), Tensor.zeros(n, (0, 1))),
        residual_check("Eq2.6", "h symmetric",
                       _bilinear(M, lambda X, Y: _g(M, apply(h, X), Y)),
                       _bilinear(M, lambda X, Y: _g(M, X, apply(h, Y)))),
        residual_check("Eq2.7", "nabla_X zeta = -phi X - phi h X",
                       nabla_zeta, -phi - phih),
    ]


def compute_h(M: FrameManifold, conn: Connection, S: ContactStructure) -> Tensor:
    """``h = ½ £_ζ φ``; raises when ``∇ζ = -φ - φh`` fails (not contact metric)."""
    h = lie_h(M, S)
    for chk in h_checks(M, conn, S, h):
        if not chk.passed:
            raise GeometryError(f"{chk.tag} violated: {chk.name} (residual {chk.residual})")
    return h


@dataclass(frozen=True)
class NullityFit:
    k: Fraction | None
    mu: Fraction | None
    checks: tuple[Check, ...] = ()

    @property
    def is_nullity(self) -> bool:
        return self.k is not None

    @property
    def is_nk(self) -> bool:
        return self.k is not None and self.mu == 0


def nullity_fit(M: FrameManifold, R: Tensor, S: ContactStructure,
                h: Tensor | None = None) -> NullityFit:
    """Exact fit of ``R(X,Y)ζ = (kI + μh)(η(Y)X - η(X)Y)`` over all frame pairs.

    Underdetermined systems report the canonical solution with free unknowns
    set to zero (e.g. μ = 0 when h = 0).
    """
    n = M.dim
    h = lie_h(M, S) if h is None else h
    Rz = np.einsum("ijlk,l->ijk", R.components, S.zeta.components)
    eta = S.eta.components
    ident = Tensor.identity(n).components
    # (η(Y)X - η(X)Y) on frame pairs: base[i, j, a]
    base = np.einsum("j,ia->ija", eta, ident) - np.einsum("i,ja->ija", eta, ident)
    k_col = base
    mu_col = np.einsum("ija,ak->ijk", base, h.components)
    rows = [[a, b] for a, b in zip(k_col.ravel(), mu_col.ravel())]
    sol = solve_affine(rows, list(Rz.ravel()), 2)
    if sol is None:
        return NullityFit(None, None, (flag_check("Eq(a)", "(k,mu)-nullity condition", False,
                                                  "inconsistent system: not a nullity manifold"),))
    k, mu = sol.particular
    note = f"k={k}, mu={mu}"
    if sol.directions:
        note += " (underdetermined; free unknowns set to 0)"
    checks = [Check("Eq(a)", "(k,mu)-nullity condition", Fraction(0), note)]
    zeta = S.zeta.components
    g = M.metric
    R29 = k * base
    checks.append(residual_check("Eq2.9", "R(X,Y)zeta = k(eta(Y)X - eta(X)Y)",
                                 Tensor(Rz, (2, 1)), Tensor(R29, (2, 1))))
    Rzeta_first = np.einsum("i,ixyk->xyk", zeta, R.components)
    R210 = k * (np.einsum("xy,k->xyk", g, zeta) - np.einsum("y,xk->xyk", eta, ident))
    checks.append(residual_check("Eq2.10", "R(zeta,X)Y = k(g(X,Y)zeta - eta(Y)X)",
                                 Tensor(Rzeta_first, (2, 1)), Tensor(R210, (2, 1))))
    return NullityFit(k, mu, tuple(checks))


def identity_suite_nk(M: FrameManifold, conn: Connection, R: Tensor, S: ContactStructure,
                      k: Fraction, h: Tensor) -> list[Check]:
    """Both sides of the N(k) identities for h², ∇η, ∇φ, ∇(φh) and Ricci,
    over every frame index combination."""
    n, m = M.dim, M.m
    phi, zeta, eta = S.phi, S.zeta, S.eta
    P, H, Z, E = phi.components, h.components, zeta.components, eta.components
    g = M.metric
    ident = Tensor.identity(n).components
    one_h = ident + H  # X -> X + hX
    checks = [residual_check("Eq2.8", "h^2 = (k-1) phi^2", compose(h, h),
                             (k - 1) * compose(phi, phi))]

    # (∇_X η)Y = g(X + hX, φY)
    rhs211 = np.einsum("xa,ab,yb->xy", one_h, g, P)
    checks.append(residual_check("Eq2.11", "(nabla_X eta)Y = g(X+hX, phiY)",
                                 covariant_derivative(eta, conn), Tensor(rhs211, (2, 0))))

    # (∇_X φ)Y = g(X+hX, Y)ζ - η(Y)(X+hX)
    gxy = np.einsum("xa,ay->xy", one_h, g)
    rhs212 = np.einsum("xy,k->xyk", gxy, Z) - np.einsum("y,xk->xyk", E, one_h)
    checks.append(residual_check("Eq2.12", "(nabla_X phi)Y = g(X+hX,Y)zeta - eta(Y)(X+hX)",
                                 covariant_derivative(phi, conn), Tensor(rhs212, (2, 1))))

    # (∇_X φh)Y = [g(X,hY) - (k-1)g(X, Y-η(Y)ζ)]ζ + η(Y)[hX - (k-1)(X - η(X)ζ)]
    phih = compose(phi, h)
    g_x_hy = np.einsum("ya,xa->xy", H, g)  # g(X, hY) with metric identity-general
    proj = ident - np.einsum("y,k->yk", E, Z)  # Y - η(Y)ζ
    g_x_proj = np.einsum("ya,xa->xy", proj, g)
    scal = g_x_hy - (k - 1) * g_x_proj
    vec = H - (k - 1) * (ident - np.einsum("x,k->xk", E, Z))
    rhs213 = np.einsum("xy,k->xyk", scal, Z) + np.einsum("y,xk->xyk", E, vec)
    checks.append(residual_check("Eq2.13", "(nabla_X phi h)Y closed form",
                                 covariant_derivative(phih, conn), Tensor(rhs213, (2, 1))))

    ric, _ = ricci(R, M)
    ghxy = np.einsum("xa,ay->xy", H, g)
    rhs214 = 2 * (m - 1) * (g + ghxy) + 2 * (m * k - m + 1) * np.multiply.outer(E, E)
    checks.append(residual_check("Eq2.14", "Ric = 2(m-1)(g + g(h.,.)) + 2(mk-m+1) eta(x)eta",
                                 ric, Tensor(rhs214, (2, 0))))
    checks.append(residual_check("Eq2.15", "Ric(X,zeta) = 2mk eta(X)",
                                 Tensor(ric.components @ Z, (1, 0)), 2 * m * k * eta))
    return checks


@dataclass(frozen=True, eq=False)
class StandardExample:
    delta: Fraction
    manifold: FrameManifold
    structure: ContactStructure


def standard_frame(delta) -> FrameManifold:
    """``[e1,e2] = (1+δ)e3, [e2,e3] = 2e1, [e3,e1] = (1-δ)e2``."""
    d = Fraction(delta)
    return FrameManifold.from_brackets(1, {
        (1, 2): {3: 1 + d},
        (2, 3): {1: Fraction(2)},
        (1, 3): {2: -(1 - d)},
    })


STANDARD_PHI = [[0, 0, 0], [0, 0, -1], [0, 1, 0]]  # e2 -> e3, e3 -> -e2


def build_standard_example(delta) -> StandardExample:
    """Three-dimensional N(1-δ²)-contact metric frame, self-validated."""
    d = Fraction(delta)
    M = standard_frame(d)
    S = ContactStructure.from_data(M, STANDARD_PHI, [1, 0, 0])
    rep = validate_structure(M, S)
    if not rep.passed:
        bad = rep.first_failure()
        raise GeometryError(f"standard example failed {bad.tag}: {bad.name}")
    conn = levi_civita(M)
    h = compute_h(M, conn, S)
    fit = nullity_fit(M, riemann(M, conn), S, h)
    if fit.k != 1 - d * d or fit.mu != 0:
        raise GeometryError(f"standard example nullity fit gave k={fit.k}, mu={fit.mu}")
    return StandardExample(d, M, replace(S, h=h, k=fit.k, mu=fit.mu))
