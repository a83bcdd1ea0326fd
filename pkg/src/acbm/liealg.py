"""Left-invariant geometry on Lie algebras as a concrete test bed.

A Lie algebra is given by structure constants c[x,y,k] (the k-component
of [e_x, e_y]).  With a structure (phi, xi, eta, g) on the same space,
left-invariant metrics make every covariant derivative an algebraic
operation, so the whole connection story can be checked end to end with
exact arithmetic: Koszul gives the Levi-Civita connection, the derived
fundamental tensor is classified, and any candidate natural connection
can be verified axiom by axiom.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .checks import CheckReport
from .errors import InvalidStructure, ShapeMismatch
from .structure import AcbStructure, validate_structure
from .tensor import Tensor, freeze, pullback, tensor


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    c: Tensor  # c[x,y,k]: k-component of the bracket [e_x, e_y]

    def bracket(self, u: Tensor, v: Tensor) -> Tensor:
        return freeze(
            np.tensordot(np.tensordot(self.c, u, axes=([0], [0])), v, axes=([0], [0]))
        )


def make_lie_algebra(dim: int, c) -> LieAlgebra:
    if not isinstance(dim, int) or dim < 1:
        raise ShapeMismatch(f"dim must be a positive integer, got {dim!r}")
    return LieAlgebra(dim=dim, c=tensor(c, (dim, dim, dim)))


def jacobi_check(lie: LieAlgebra) -> CheckReport:
    rep = CheckReport(subject=f"lie algebra (dim={lie.dim})")
    c = lie.c
    rep.add_zero("antisymmetric", c + c.transpose(1, 0, 2))
    # [[x,y],z]^w, then the cyclic sum over (x,y,z)
    a = np.tensordot(c, c, axes=([2], [0]))
    rep.add_zero("jacobi", a + a.transpose(1, 2, 0, 3) + a.transpose(2, 0, 1, 3))
    return rep


def koszul_levi_civita(lie: LieAlgebra, s: AcbStructure) -> Tensor:
    """Connection coefficients gamma[x,y,k] of the Levi-Civita connection.

    On a left-invariant frame the Koszul formula loses its derivative
    terms:  2 g(nabla_x y, z) = g([x,y],z) - g([y,z],x) + g([z,x],y).
    """
    if lie.dim != s.dim:
        raise ShapeMismatch("lie algebra and structure dimensions differ")
    cg = np.tensordot(lie.c, s.g, axes=([2], [0]))  # g([x,y], z)
    low = (cg - cg.transpose(2, 0, 1) + cg.transpose(1, 2, 0)) * mpq(1, 2)
    return freeze(np.tensordot(low, s.g_inv, axes=([2], [0])))


def levi_civita_report(lie: LieAlgebra, s: AcbStructure) -> CheckReport:
    """Metric compatibility and torsion freeness of the Koszul output."""
    gamma = koszul_levi_civita(lie, s)
    low = np.tensordot(gamma, s.g, axes=([2], [0]))
    rep = CheckReport(subject="levi-civita")
    rep.add_zero("metric_parallel", low + low.transpose(0, 2, 1))
    rep.add_zero("torsion_free", gamma - gamma.transpose(1, 0, 2) - lie.c)
    return rep


def fundamental_from_nabla(gamma: Tensor, s: AcbStructure) -> Tensor:
    """F(x,y,z) = g((nabla_x phi) y, z) from connection coefficients."""
    rep = validate_structure(s)
    if not rep.ok:
        names = ", ".join(ch.name for ch in rep.failures())
        raise InvalidStructure(f"structure fails: {names}")
    if gamma.shape != (s.dim,) * 3:
        raise ShapeMismatch(f"gamma must have shape {(s.dim,) * 3}")
    # nabla_x (phi y) - phi (nabla_x y)
    a = pullback(gamma, s.phi, 1)
    b = np.tensordot(gamma, s.phi, axes=([2], [1]))
    return freeze(np.tensordot(a - b, s.g, axes=([2], [0])))


def verify_natural_connection(
    lie: LieAlgebra, s: AcbStructure, q: Tensor
) -> CheckReport:
    """Check that D = nabla + Q is natural, for lowered Q = q(x,y,z).

    Everything is left-invariant, so each parallelism condition is a
    finite identity on the frame.
    """
    gamma = koszul_levi_civita(lie, s)
    low_nabla = np.tensordot(gamma, s.g, axes=([2], [0]))
    d_low = low_nabla + q
    d_vec = freeze(np.tensordot(d_low, s.g_inv, axes=([2], [0])))
    f = fundamental_from_nabla(gamma, s)

    rep = CheckReport(subject="natural connection")
    rep.add_zero("metric_parallel", d_low + d_low.transpose(0, 2, 1))
    twist = pullback(q, s.phi, 2) - pullback(q, s.phi, 1)
    rep.add_zero("phi_parallel", twist - f)
    rep.add_zero("xi_parallel", np.tensordot(d_vec, s.xi, axes=([1], [0])))
    rep.add_zero("eta_parallel", np.tensordot(d_low, s.xi, axes=([2], [0])))

    g_assoc = s.g_phi + s.eta_eta
    resid = np.tensordot(d_vec, g_assoc, axes=([2], [0]))  # g~(D_x y, z)
    rep.add_zero("assoc_metric_parallel", resid + resid.transpose(0, 2, 1))

    t_d = d_low - d_low.transpose(1, 0, 2) - np.tensordot(lie.c, s.g, axes=([2], [0]))
    rep.add_zero("torsion_is_q_alternation", t_d - (q - q.transpose(1, 0, 2)))
    return rep


def survey_random_lie_algebras(n: int, count: int, seed: int = 0) -> list[dict]:
    """Seeded sweep over sparse bracket tables on the reference structure.

    Returns one record per Jacobi-passing algebra: its constants, the
    classification of the derived fundamental tensor, and whether the
    trace forms vanish.  Used to hunt for concrete witnesses of the
    basic classes.
    """
    import random

    from .fundamental import classify_F, lee_forms
    from .structure import canonical_structure
    from .tensor import is_zero, zeros

    s = canonical_structure(n)
    d = s.dim
    records = []
    for k in range(count):
        r = random.Random((seed << 24) ^ (k * 2654435761 % 2**31))
        c = zeros(d, d, d)
        entries = r.randint(1, max(2, d))
        for _ in range(entries):
            i = r.randrange(d)
            j = r.randrange(d)
            if i == j:
                continue
            m = r.randrange(d)
            v = mpq(r.choice((-2, -1, 1, 2)))
            c[i, j, m] += v
            c[j, i, m] -= v
        lie = LieAlgebra(dim=d, c=freeze(c))
        if not jacobi_check(lie).ok:
            continue
        gamma = koszul_levi_civita(lie, s)
        f = fundamental_from_nabla(gamma, s)
        forms = lee_forms(f, s)
        records.append(
            {
                "seed": k,
                "c": lie.c,
                "f_zero": is_zero(f),
                "classes": classify_F(f, s),
                "lee_zero": {
                    "theta_h": is_zero(forms.theta_h),
                    "theta_star_h": is_zero(forms.theta_star_h),
                    "omega": is_zero(forms.omega),
                },
            }
        )
    return records
