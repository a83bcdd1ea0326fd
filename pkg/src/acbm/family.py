"""Connections compatible with the whole structure, through their torsion.

A connection D is natural for (phi, xi, eta, g) when D phi = 0 and
D g = 0 (parallelism of xi, eta and of the associated metric follows).
Writing D = nabla + Q against the Levi-Civita connection of g and
lowering everything, naturality of D is equivalent to

    Q(x,y,z) = -Q(x,z,y)                      (metric part)
    Q(x,y,phi z) - Q(x, phi y, z) = F(x,y,z)  (phi part)

and Q is recovered from the torsion T of D by the Hayden formula

    Q(x,y,z) = (T(x,y,z) - T(y,z,x) + T(z,x,y)) / 2.

Within the span of structures whose fundamental tensor is recoverable
from its trace forms, the natural connections form a four-parameter
family.  Its torsion is assembled from five curvature-like building
blocks pi_1 .. pi_5 contracted with the metric duals of the trace
forms; the same family can be written as an 18-coefficient ansatz on
the trace one-forms, and the two presentations are reconciled by
solve_natural_constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .checks import CheckReport
from .errors import InsufficientSamples, ShapeMismatch, ValidationError
from .fundamental import LeeForms, lee_forms
from .linalg import LinearSystem, SpanSolver
from .scalar import ONE, ZERO, rat
from .structure import AcbStructure
from .tensor import (
    Tensor,
    covec_mat,
    freeze,
    is_zero,
    mat_vec,
    pullback,
    zeros,
)

# A torsion tensor is stored fully lowered, antisymmetric in slots 0, 1.
Torsion3 = Tensor


def validate_torsion(t: Tensor, s: AcbStructure) -> CheckReport:
    d = s.dim
    if t.shape != (d, d, d):
        raise ShapeMismatch(f"torsion must have shape {(d, d, d)}, got {t.shape}")
    rep = CheckReport(subject="torsion tensor")
    rep.add_zero("antisymmetric_in_first_two", t + t.transpose(1, 0, 2))
    return rep


# ---------------------------------------------------------------------------
# building blocks


@dataclass(frozen=True)
class PiFamily:
    pi1: Tensor
    pi2: Tensor
    pi3: Tensor
    pi4: Tensor
    pi5: Tensor

    def as_tuple(self):
        return (self.pi1, self.pi2, self.pi3, self.pi4, self.pi5)


def _pair(m1: Tensor, m2: Tensor) -> Tensor:
    """X[x,y,z,w] = m1[y,z] * m2[x,w]."""
    return np.transpose(np.multiply.outer(m1, m2), (2, 0, 1, 3))


def _alt_xy(t4: Tensor) -> Tensor:
    return t4 - t4.transpose(1, 0, 2, 3)


def pi_family(s: AcbStructure) -> PiFamily:
    """The five lowered (0,4) blocks, cached on the structure."""

    def build():
        g = s.g
        g_phi = s.g_phi          # g(x, phi y)
        phi_g = freeze(np.asarray(s.g_phi.T))  # g(phi x, y)
        ee = s.eta_eta
        pi1 = freeze(_alt_xy(_pair(g, g)))
        pi2 = freeze(_alt_xy(_pair(g_phi, phi_g)))
        pi3 = freeze(-_alt_xy(_pair(g, phi_g) + _pair(g_phi, g)))
        pi4 = freeze(_alt_xy(_pair(ee, g) + _pair(g, ee)))
        pi5 = freeze(_alt_xy(_pair(ee, phi_g) + _pair(g_phi, ee)))
        return PiFamily(pi1, pi2, pi3, pi4, pi5)

    return s.cached("pi_family", build)


def plug(block: Tensor, v: Tensor) -> Tensor:
    """Contract the final covariant slot of a (0,4) block with a vector."""
    if block.shape[-1] != v.shape[0]:
        raise ShapeMismatch("vector does not fit the final slot")
    return freeze(np.tensordot(block, v, axes=([3], [0])))


# ---------------------------------------------------------------------------
# the four-parameter family


@dataclass(frozen=True)
class FamilyParams:
    """Coefficients (a1, a2, a3, a4) of the torsion family."""

    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(rat(a) for a in self.alpha))
        if len(self.alpha) != 4:
            raise ShapeMismatch("family parameters need exactly 4 entries")

    @classmethod
    def canonical(cls, n: int) -> "FamilyParams":
        return cls((ZERO, mpq(1, 4 * n), ZERO, ZERO))


def family_direction(p: FamilyParams, forms: LeeForms, s: AcbStructure) -> Tensor:
    """The horizontal vector steering the parameter-dependent part."""
    a1, a2, a3, a4 = p.alpha

    def phi2(v):
        return mat_vec(s.phi, mat_vec(s.phi, v))

    q = (
        a1 * phi2(forms.a_star)
        - a2 * phi2(forms.a)
        - a3 * mat_vec(s.phi, forms.a_hat)
        + a4 * forms.a_hat
    )
    return freeze(q)


def torsion_family(p: FamilyParams, forms: LeeForms, s: AcbStructure) -> Torsion3:
    """Torsion of the natural connection with parameters p."""
    pi = pi_family(s)
    n2 = mpq(1, 2 * s.n)
    p35 = s.cached("pi3+pi5", lambda: freeze(pi.pi3 + pi.pi5))
    p24 = s.cached("pi2+pi4", lambda: freeze(pi.pi2 + pi.pi4))
    q = family_direction(p, forms, s)
    t = (
        plug(p35, q)
        + n2 * plug(p24, forms.a_star)
        + n2 * plug(pi.pi5, forms.a)
        - plug(pi.pi5, forms.a_hat)
    )
    return freeze(t)


def hayden_Q(t: Torsion3) -> Tensor:
    """Difference tensor of the metric connection with torsion t:

    Q(x,y,z) = (T(x,y,z) - T(y,z,x) + T(z,x,y)) / 2.
    """
    return freeze((t - t.transpose(2, 0, 1) + t.transpose(1, 2, 0)) * mpq(1, 2))


def naturality_check(q: Tensor, f: Tensor, s: AcbStructure) -> CheckReport:
    """Is nabla + Q a natural connection, given the fundamental tensor f?"""
    rep = CheckReport(subject="naturality")
    rep.add_zero("metric_compat", q + q.transpose(0, 2, 1))
    twist = pullback(q, s.phi, 2) - pullback(q, s.phi, 1)
    rep.add_zero("phi_compat", twist - f)
    return rep


# ---------------------------------------------------------------------------
# the 18-coefficient ansatz


@dataclass(frozen=True)
class AnsatzParams:
    """Coefficients of the general one-form ansatz for the torsion."""

    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(rat(x) for x in self.lam))
        if len(self.lam) != 18:
            raise ShapeMismatch("ansatz parameters need exactly 18 entries")

    @classmethod
    def basis(cls, j: int) -> "AnsatzParams":
        lam = [ZERO] * 18
        lam[j] = ONE
        return cls(tuple(lam))

    @classmethod
    def from_alpha(cls, p: FamilyParams, n: int) -> "AnsatzParams":
        """The ansatz coefficients realizing the family member p."""
        a1, a2, a3, a4 = p.alpha
        half = mpq(1, 2 * n)
        lam = [
            a1, a2, ZERO, -half, a3, a4,
            a2 - half, -a1, half, ZERO, -a4, a3,
            ZERO, ZERO, ZERO, ZERO, ZERO, -ONE,
        ]
        return cls(tuple(lam))


def _ansatz_covectors(lam, forms: LeeForms, s: AcbStructure):
    """The three one-forms of the ansatz, each a fixed 6-term combination."""
    th_phi = covec_mat(forms.theta_h, s.phi)
    th_phi2 = covec_mat(th_phi, s.phi)
    star_phi = covec_mat(forms.theta_star_h, s.phi)
    star_phi2 = covec_mat(star_phi, s.phi)
    om_phi = covec_mat(forms.omega, s.phi)
    th_xi = np.dot(forms.theta_h, s.xi)
    star_xi = np.dot(forms.theta_star_h, s.xi)
    basis6 = (th_phi2, star_phi2, th_xi * s.eta, star_xi * s.eta, forms.omega, om_phi)

    out = []
    for block in range(3):
        coeffs = lam[6 * block : 6 * block + 6]
        v = zeros(s.dim)
        for c, w in zip(coeffs, basis6):
            if c != 0:
                v = v + c * w
        out.append(freeze(v))
    return out


def ansatz_torsion(params: AnsatzParams, forms: LeeForms, s: AcbStructure) -> Torsion3:
    """Torsion built from the one-form ansatz:

    T(x,y,z) = g(phi y, phi z) v1(x) + g(y, phi z) v2(x)
             + eta(y) eta(z) v3(x)  -  (x <-> y).
    """
    v1, v2, v3 = _ansatz_covectors(params.lam, forms, s)
    a = (
        np.multiply.outer(v1, s.g_phiphi)
        + np.multiply.outer(v2, s.g_phi)
        + np.multiply.outer(v3, s.eta_eta)
    )
    return freeze(a - a.transpose(1, 0, 2))


# ---------------------------------------------------------------------------
# solving for the naturality constraints on the ansatz


@dataclass
class NaturalitySolution:
    """Affine solution set of the naturality conditions on the ansatz.

    particular has every free coefficient set to zero; nullspace spans
    the degrees of freedom.  pinned lists coefficients that no sampled
    equation touched (their one-form combinations contribute nothing to
    the torsion) and that were normalized to zero.
    """

    n: int
    sample_count: int
    rank: int
    pinned: list[int]
    particular: list
    nullspace: list[list]

    @property
    def solution_dim(self) -> int:
        return len(self.nullspace)

    def functional_value(self, coeffs):
        """Value of sum(c_j lam_j) when constant on the set, else None."""
        coeffs = [rat(c) for c in coeffs]
        for vec in self.nullspace:
            if sum(c * v for c, v in zip(coeffs, vec)) != 0:
                return None
        return sum(c * p for c, p in zip(coeffs, self.particular))

    def contains(self, lam) -> bool:
        if isinstance(lam, AnsatzParams):
            lam = lam.lam
        lam = [rat(x) for x in lam]
        diff = [x - p for x, p in zip(lam, self.particular)]
        if not self.nullspace:
            return all(x == 0 for x in diff)
        return SpanSolver(self.nullspace).contains(diff)

    def constraint_lines(self) -> list[str]:
        """Human-readable description, one line per coefficient.

        A coefficient is reported with a value exactly when the
        evaluation functional is constant on the solution set.
        """
        from .scalar import format_rational as fr

        lines = []
        for j in range(18):
            e = [ZERO] * 18
            e[j] = ONE
            val = self.functional_value(e)
            if j in self.pinned:
                lines.append(f"lam{j + 1} = 0 (gauge: never enters the torsion)")
            elif val is not None:
                lines.append(f"lam{j + 1} = {fr(val)}")
            else:
                lines.append(f"lam{j + 1} free")
        return lines


def solve_natural_constraints(
    s: AcbStructure, sample_count: int = 20, seed: int = 0
) -> NaturalitySolution:
    """Determine all ansatz coefficients compatible with naturality.

    For each sampled fundamental tensor the 18 basis torsions are pushed
    through the Hayden formula and the phi-compatibility condition,
    giving linear equations lam . L = F pointwise.  Gauge coefficients
    (columns never touched) are pinned to zero; a rank defect beyond
    that raises InsufficientSamples.
    """
    from .fundamental import build_class_F
    from .sampling import main_class_data

    sys = LinearSystem(18)
    for k in range(sample_count):
        data = main_class_data(s, seed=seed * 1000003 + k)
        f = build_class_F("MAIN", data, s)
        forms = lee_forms(f, s)
        images = []
        for j in range(18):
            t_j = ansatz_torsion(AnsatzParams.basis(j), forms, s)
            q_j = hayden_Q(t_j)
            images.append(pullback(q_j, s.phi, 2) - pullback(q_j, s.phi, 1))
        d = s.dim
        for idx in np.ndindex((d, d, d)):
            row = [img[idx] for img in images]
            if all(c == 0 for c in row) and f[idx] == 0:
                continue
            sys.add_equation(row, f[idx])
    if not sys.consistent:
        raise ValidationError("sampled naturality equations are inconsistent")

    pinned = sys.untouched_columns()
    for col in pinned:
        sys.pin(col)
    expected_rank = 18 - 4  # four genuine degrees of freedom remain
    if sys.rank < expected_rank:
        raise InsufficientSamples(
            f"rank {sys.rank} < {expected_rank}; supply more or richer samples"
        )
    return NaturalitySolution(
        n=s.n,
        sample_count=sample_count,
        rank=sys.rank,
        pinned=pinned,
        particular=sys.particular(),
        nullspace=sys.nullspace(),
    )


# ---------------------------------------------------------------------------
# distinguished members: canonical, standard, dual


@dataclass(frozen=True)
class ConnectionDelta:
    """Lowered difference tensor Q of a connection nabla + Q."""

    q: Tensor

    def torsion(self) -> Torsion3:
        return freeze(self.q - self.q.transpose(1, 0, 2))


def phiB_delta(f: Tensor, s: AcbStructure) -> ConnectionDelta:
    """Difference tensor of the phi-B connection, straight from f:

    Q0(x,y,z) = (F(x, phi y, z) + eta(z) F(x, phi y, xi)
                 - 2 eta(y) F(x, phi z, xi)) / 2.
    """
    f_phi = pullback(f, s.phi, 1)
    c = np.tensordot(f_phi, s.xi, axes=([2], [0]))  # c[x,y] = F(x, phi y, xi)
    b1 = f_phi
    b2 = np.multiply.outer(c, s.eta)
    b3 = 2 * np.transpose(np.multiply.outer(s.eta, c), (1, 0, 2))
    return ConnectionDelta(q=freeze((b1 + b2 - b3) * mpq(1, 2)))


def canonical_torsion_from_F(f: Tensor, s: AcbStructure) -> Torsion3:
    """Torsion of the canonical connection, straight from f:

    T0(x,y,z) = (F(x, phi y, z) + eta(z) F(x, phi y, xi)
                 + 2 eta(x) F(y, phi z, xi)) / 2  -  (x <-> y).
    """
    f_phi = pullback(f, s.phi, 1)
    c = np.tensordot(f_phi, s.xi, axes=([2], [0]))
    a = f_phi + np.multiply.outer(c, s.eta) + 2 * np.multiply.outer(s.eta, c)
    return freeze((a - a.transpose(1, 0, 2)) * mpq(1, 2))


def canonical_torsion_closed(forms: LeeForms, s: AcbStructure) -> Torsion3:
    """Canonical torsion in closed form over the trace-form duals."""
    pi = pi_family(s)
    p124 = s.cached("pi1+pi2+pi4", lambda: freeze(pi.pi1 + pi.pi2 + pi.pi4))
    t = (
        mpq(1, 4 * s.n) * plug(p124, forms.a_star)
        + mpq(1, 2 * s.n) * plug(pi.pi5, forms.a)
        - plug(pi.pi5, forms.a_hat)
    )
    return freeze(t)


def standard_torsion(forms: LeeForms, s: AcbStructure) -> Torsion3:
    """Family member at parameters (0,0,0,0)."""
    pi = pi_family(s)
    p24 = s.cached("pi2+pi4", lambda: freeze(pi.pi2 + pi.pi4))
    n2 = mpq(1, 2 * s.n)
    t = n2 * plug(p24, forms.a_star) + n2 * plug(pi.pi5, forms.a) - plug(pi.pi5, forms.a_hat)
    return freeze(t)


def dual_torsion(forms: LeeForms, s: AcbStructure) -> Torsion3:
    """The member conjugate to the standard one; the canonical connection
    is the average of the two."""
    pi = pi_family(s)
    p35 = s.cached("pi3+pi5", lambda: freeze(pi.pi3 + pi.pi5))
    p24 = s.cached("pi2+pi4", lambda: freeze(pi.pi2 + pi.pi4))
    n2 = mpq(1, 2 * s.n)
    t = (
        n2 * plug(p35, forms.a)
        + n2 * plug(p24, forms.a_star)
        + n2 * plug(pi.pi5, forms.a)
        - plug(pi.pi5, forms.a_hat)
    )
    return freeze(t)


def is_canonical_identity(t: Torsion3, s: AcbStructure) -> bool:
    return is_zero(canonical_identity_residual(t, s))


def canonical_identity_residual(t: Torsion3, s: AcbStructure) -> Tensor:
    """Residual of the defining identity of the canonical torsion.

    E(x,y,z) = T(x,y,z) - T(x, phi y, phi z)
             - eta(x) (T(xi,y,z) - T(xi, phi y, phi z))
             - eta(y) (T(x,xi,z) - T(x,z,xi) - eta(x) T(z,xi,xi));
    the identity is the vanishing of E alternated in (y, z).
    """
    t_pp = pullback(pullback(t, s.phi, 1), s.phi, 2)
    t_xi = np.tensordot(t, s.xi, axes=([0], [0]))  # [y,z] = T(xi,y,z)
    t_xi_pp = pullback(pullback(t_xi, s.phi, 0), s.phi, 1)
    a3 = np.multiply.outer(s.eta, t_xi - t_xi_pp)
    b = np.tensordot(t, s.xi, axes=([1], [0]))  # [x,z] = T(x,xi,z)
    m = np.tensordot(t, s.xi, axes=([2], [0]))  # [x,z] = T(x,z,xi)
    that = np.tensordot(b, s.xi, axes=([1], [0]))  # [x] = T(x,xi,xi)
    inner = b - m - np.multiply.outer(s.eta, that)
    a4 = np.transpose(np.multiply.outer(s.eta, inner), (1, 0, 2))
    e = t - t_pp - a3 - a4
    return freeze(e - e.transpose(0, 2, 1))
