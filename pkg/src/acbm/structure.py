"""Almost contact structures with a B-metric on odd-dimensional spaces.

A structure is a tuple (phi, xi, eta, g) on a (2n+1)-dimensional space:
phi an endomorphism, xi a vector, eta a covector, g a symmetric metric,
subject to

    phi xi = 0,   phi^2 = -Id + eta (x) xi,   eta(phi .) = 0,   eta(xi) = 1,
    g(x, y) = -g(phi x, phi y) + eta(x) eta(y).

The metric is forced to have n+1 positive and n negative directions.
All matrices act on columns; phi[i][j] is the i-th component of
phi(e_j).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .checks import CheckReport
from .errors import BadDimension, ShapeMismatch, Singular
from .linalg import invert, signature
from .tensor import (
    Tensor,
    freeze,
    identity,
    is_zero,
    outer,
    pullback,
    pullback_all,
    tensor,
)


@dataclass(frozen=True, eq=False)
class AcbStructure:
    n: int
    phi: Tensor
    xi: Tensor
    eta: Tensor
    g: Tensor
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def g_inv(self) -> Tensor:
        return self.cached("g_inv", lambda: invert(self.g))

    @property
    def g_phi(self) -> Tensor:
        """Matrix of g(x, phi y)."""
        return self.cached("g_phi", lambda: pullback(self.g, self.phi, 1))

    @property
    def g_phiphi(self) -> Tensor:
        """Matrix of g(phi x, phi y)."""
        return self.cached("g_phiphi", lambda: pullback(self.g_phi, self.phi, 0))

    @property
    def eta_eta(self) -> Tensor:
        return self.cached("eta_eta", lambda: outer(self.eta, self.eta))

    @property
    def horizontal(self) -> Tensor:
        """Projector x -> x - eta(x) xi onto the kernel of eta."""
        return self.cached(
            "horizontal",
            lambda: freeze(identity(self.dim) - np.multiply.outer(self.xi, self.eta)),
        )

    def raise_covector(self, w: Tensor) -> Tensor:
        return freeze(np.dot(self.g_inv, w))

    def lower_vector(self, v: Tensor) -> Tensor:
        return freeze(np.dot(self.g, v))


def make_structure(n: int, phi, xi, eta, g) -> AcbStructure:
    """Normalize raw nested data into an exact structure (shapes only).

    Axioms are not enforced here; run validate_structure for that, so
    that invalid input can still be loaded and reported on.
    """
    if not isinstance(n, int) or n < 1:
        raise BadDimension(f"n must be a positive integer, got {n!r}")
    d = 2 * n + 1
    return AcbStructure(
        n=n,
        phi=tensor(phi, (d, d)),
        xi=tensor(xi, (d,)),
        eta=tensor(eta, (d,)),
        g=tensor(g, (d, d)),
    )


def canonical_structure(n: int) -> AcbStructure:
    """Reference structure: phi rotates horizontal pairs, g alternates signs.

    Basis (e_1, ..., e_2n, xi) with phi e_{2k-1} = e_{2k},
    phi e_{2k} = -e_{2k-1}, g = diag(1, -1, ..., 1, -1, 1).
    """
    if not isinstance(n, int) or n < 1:
        raise BadDimension(f"n must be a positive integer, got {n!r}")
    d = 2 * n + 1
    phi = [[0] * d for _ in range(d)]
    g = [[0] * d for _ in range(d)]
    for k in range(n):
        phi[2 * k + 1][2 * k] = 1
        phi[2 * k][2 * k + 1] = -1
        g[2 * k][2 * k] = 1
        g[2 * k + 1][2 * k + 1] = -1
    g[d - 1][d - 1] = 1
    xi = [0] * d
    xi[d - 1] = 1
    return make_structure(n, phi, xi, xi, g)


def validate_structure(s: AcbStructure) -> CheckReport:
    """Check every defining identity, reporting each one separately."""
    d = s.dim
    rep = CheckReport(subject=f"structure(n={s.n})")

    rep.add_zero("phi_xi_zero", np.dot(s.phi, s.xi))
    rep.add_zero(
        "phi_square", np.dot(s.phi, s.phi) + identity(d) - np.multiply.outer(s.xi, s.eta)
    )
    rep.add_zero("eta_phi_zero", np.dot(s.eta, s.phi))
    rep.add("eta_xi_one", np.dot(s.eta, s.xi) == 1)
    g_symmetric = is_zero(s.g - s.g.T)
    rep.add_zero("g_symmetric", s.g - s.g.T)
    rep.add_zero("b_metric_compat", s.g + pullback(pullback(s.g, s.phi, 1), s.phi, 0) - outer(s.eta, s.eta))
    try:
        s.g_inv
        rep.add("g_nondegenerate", True)
        if g_symmetric:
            pos, neg, zero = signature(s.g)
            rep.add(
                "g_signature",
                (pos, neg, zero) == (s.n + 1, s.n, 0),
                detail=f"positive={pos} negative={neg} null={zero}",
            )
        else:
            rep.add("g_signature", False, detail="skipped: metric not symmetric")
        rep.add_zero("g_xi_is_eta", np.dot(s.g, s.xi) - s.eta)
    except Singular:
        rep.add("g_nondegenerate", False, detail="metric is singular")
    return rep


def require_valid(s: AcbStructure) -> AcbStructure:
    from .errors import InvalidStructure

    rep = validate_structure(s)
    if not rep.ok:
        names = ", ".join(c.name for c in rep.failures())
        raise InvalidStructure(f"structure fails: {names}")
    return s


def associated_metric(s: AcbStructure) -> AcbStructure:
    """The companion structure with metric g~(x,y) = g(x, phi y) + eta(x) eta(y)."""
    g_assoc = s.g_phi + s.eta_eta
    return AcbStructure(n=s.n, phi=s.phi, xi=s.xi, eta=s.eta, g=freeze(g_assoc))


def change_basis(s: AcbStructure, p) -> AcbStructure:
    """Transport the structure to the basis given by the columns of p."""
    pm = tensor(p, (s.dim, s.dim))
    p_inv = invert(pm)
    return AcbStructure(
        n=s.n,
        phi=freeze(np.dot(p_inv, np.dot(s.phi, pm))),
        xi=freeze(np.dot(p_inv, s.xi)),
        eta=freeze(np.dot(s.eta, pm)),
        g=pullback_all(s.g, pm),
    )


def transport_covariant(t: Tensor, p) -> Tensor:
    """Transport a fully covariant tensor to the basis of the columns of p."""
    pm = tensor(p, (t.shape[0], t.shape[0]))
    return pullback_all(t, pm)
