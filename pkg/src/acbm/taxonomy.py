"""Classification of torsion tensors of natural connections.

The torsion space splits into eleven basic subspaces named by a
position/sign scheme: T11..T14 (purely horizontal), T21/T22 (values
along eta on horizontal arguments), T31..T34 (vertical first argument),
T41 (totally vertical).  Each class is cut out by linear identities in
T, phi and eta, listed in _class_residuals; a tensor belongs to a class
exactly when all its residuals vanish.

Subspace bases are produced two independent ways:
  * class_subspace_basis, fast: algebraic projectors applied to the
    elementary antisymmetric tensors, plus a kernel step for the two
    classes with a cyclic-sum condition;
  * class_subspace_basis_literal, slow: the joint nullspace of the
    residual conditions over the whole antisymmetric space.
The test suite checks the two routes span the same subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .errors import UnknownClass
from .linalg import RowReducer, SpanSolver
from .structure import AcbStructure
from .tensor import (
    Tensor,
    cyclic_sum,
    eq,
    freeze,
    is_zero,
    pullback,
    zeros,
)

CLASS_IDS = (
    "T11", "T12", "T13", "T14",
    "T21", "T22",
    "T31", "T32", "T33", "T34",
    "T41",
)

ClassId = str


@dataclass(frozen=True)
class TorsionForms:
    """Trace one-forms of a torsion tensor."""

    t: Tensor
    t_star: Tensor
    t_hat: Tensor


def torsion_forms(t: Tensor, s: AcbStructure) -> TorsionForms:
    """t(x) = tr_g T(x,.,.),  t*(x) = tr_g T(x,., phi .),  t^(x) = T(x,xi,xi)."""
    lead = freeze(np.tensordot(t, s.g_inv, axes=([1, 2], [0, 1])))
    star = freeze(np.tensordot(pullback(t, s.phi, 2), s.g_inv, axes=([1, 2], [0, 1])))
    hat = freeze(
        np.tensordot(np.tensordot(t, s.xi, axes=([1], [0])), s.xi, axes=([1], [0]))
    )
    return TorsionForms(t=lead, t_star=star, t_hat=hat)


def _j12(t: Tensor, s: AcbStructure) -> Tensor:
    return pullback(pullback(t, s.phi, 0), s.phi, 1)


def _j23(t: Tensor, s: AcbStructure) -> Tensor:
    return pullback(pullback(t, s.phi, 1), s.phi, 2)


def _phi2(s: AcbStructure) -> Tensor:
    return s.cached("phi2", lambda: freeze(np.dot(s.phi, s.phi)))


def _class_residuals(class_id: ClassId, t: Tensor, s: AcbStructure) -> list[Tensor]:
    """Linear residuals whose joint vanishing defines the class."""
    if class_id not in CLASS_IDS:
        raise UnknownClass(f"unknown torsion class {class_id!r}")
    eta, xi = s.eta, s.xi
    t_xi = np.tensordot(t, xi, axes=([0], [0]))   # [y,z] = T(xi,y,z)
    m = np.tensordot(t, xi, axes=([2], [0]))      # [x,y] = T(x,y,xi)

    if class_id in ("T11", "T12", "T13", "T14"):
        res = [freeze(t_xi), freeze(m)]
        if class_id == "T11":
            res += [t + _j12(t, s), t + _j23(t, s)]
        elif class_id == "T12":
            res += [t + _j12(t, s), t - _j23(t, s)]
        elif class_id == "T13":
            res += [t - _j12(t, s), cyclic_sum(t)]
        else:
            res += [t - _j12(t, s), cyclic_sum(pullback(t, s.phi, 0))]
        return res

    if class_id in ("T21", "T22"):
        phi2 = _phi2(s)
        m2 = pullback(pullback(m, phi2, 0), phi2, 1)
        m_pp = pullback(pullback(m, s.phi, 0), s.phi, 1)
        res = [freeze(t - np.multiply.outer(m2, eta))]
        res.append(freeze(m2 + m_pp) if class_id == "T21" else freeze(m2 - m_pp))
        return res

    if class_id in ("T31", "T32", "T33", "T34"):
        phi2 = _phi2(s)
        b = pullback(pullback(t_xi, phi2, 0), phi2, 1)
        lifted = np.multiply.outer(eta, b)
        rebuild = lifted - np.transpose(lifted, (1, 0, 2))
        t_xi_pp = pullback(pullback(t_xi, s.phi, 0), s.phi, 1)
        sym = freeze(t_xi - t_xi.T) if class_id in ("T31", "T33") else freeze(t_xi + t_xi.T)
        twist = (
            freeze(t_xi + t_xi_pp) if class_id in ("T31", "T32") else freeze(t_xi - t_xi_pp)
        )
        return [freeze(t - rebuild), sym, twist]

    # T41
    that = np.tensordot(np.tensordot(t, xi, axes=([1], [0])), xi, axes=([1], [0]))
    a1 = np.multiply.outer(that, np.multiply.outer(eta, eta))
    rebuild = a1 - np.transpose(a1, (1, 0, 2))
    return [freeze(t - rebuild)]


def class_predicate(class_id: ClassId, t: Tensor, s: AcbStructure) -> bool:
    return all(is_zero(r) for r in _class_residuals(class_id, t, s))


def classify_torsion(t: Tensor, s: AcbStructure) -> dict[str, bool]:
    return {cid: class_predicate(cid, t, s) for cid in CLASS_IDS}


# ---------------------------------------------------------------------------
# subspace bases


def torsion_space_basis(s: AcbStructure) -> list[Tensor]:
    """Elementary antisymmetric tensors e^i ^ e^j (x) e^k, i < j."""

    def build():
        d = s.dim
        out = []
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(d):
                    e = zeros(d, d, d)
                    e[i, j, k] = mpq(1)
                    e[j, i, k] = mpq(-1)
                    out.append(freeze(e))
        return out

    return s.cached("torsion_space_basis", build)


def _collect_independent(candidates, d: int) -> list[Tensor]:
    red = RowReducer(d**3)
    basis = []
    for c in candidates:
        if not is_zero(c) and red.add(list(c.flat)):
            basis.append(freeze(c))
    return basis


def _horizontalize(t: Tensor, s: AcbStructure) -> Tensor:
    out = t
    for slot in range(t.ndim):
        out = pullback(out, s.horizontal, slot)
    return out


def _kernel_basis(space: list[Tensor], operator, d: int) -> list[Tensor]:
    """Basis of ker(operator) restricted to span(space)."""
    images = [operator(w) for w in space]
    red = RowReducer(len(space))
    for idx in np.ndindex((d, d, d)):
        row = [img[idx] for img in images]
        if any(c != 0 for c in row):
            red.add(row)
    basis = []
    for coeffs in red.nullspace():
        combo = zeros(d, d, d)
        for c, w in zip(coeffs, space):
            if c != 0:
                combo = combo + c * w
        basis.append(freeze(combo))
    return basis


def class_subspace_basis(class_id: ClassId, s: AcbStructure) -> list[Tensor]:
    """Basis of the class subspace via projector images (cached)."""
    if class_id not in CLASS_IDS:
        raise UnknownClass(f"unknown torsion class {class_id!r}")
    return s.cached(("class_basis", class_id), lambda: _build_class_basis(class_id, s))


def _build_class_basis(class_id: ClassId, s: AcbStructure) -> list[Tensor]:
    d = s.dim
    eta = s.eta
    half = mpq(1, 2)
    elems = torsion_space_basis(s)

    if class_id in ("T11", "T12", "T13", "T14"):
        sign12 = -1 if class_id in ("T11", "T12") else 1
        projected = []
        for e in elems:
            th = _horizontalize(e, s)
            p = half * (th + sign12 * _j12(th, s))
            projected.append(p)
        if class_id in ("T11", "T12"):
            sign23 = -1 if class_id == "T11" else 1
            projected = [half * (p + sign23 * _j23(p, s)) for p in projected]
            return _collect_independent(projected, d)
        even = _collect_independent(projected, d)
        if class_id == "T13":
            op = lambda w: cyclic_sum(w)
        else:
            op = lambda w: cyclic_sum(pullback(w, s.phi, 0))
        return _kernel_basis(even, op, d)

    if class_id in ("T21", "T22"):
        sign = -1 if class_id == "T21" else 1
        h = s.horizontal
        out = []
        for i in range(d):
            for j in range(i + 1, d):
                b = zeros(d, d)
                b[i, j] = mpq(1)
                b[j, i] = mpq(-1)
                bh = pullback(pullback(b, h, 0), h, 1)
                bp = half * (bh + sign * pullback(pullback(bh, s.phi, 0), s.phi, 1))
                out.append(np.multiply.outer(bp, eta))
        return _collect_independent(out, d)

    if class_id in ("T31", "T32", "T33", "T34"):
        symsign = 1 if class_id in ("T31", "T33") else -1
        jsign = -1 if class_id in ("T31", "T32") else 1
        h = s.horizontal
        out = []
        for i in range(d):
            for j in range(d):
                b = zeros(d, d)
                b[i, j] = mpq(1)
                bh = pullback(pullback(b, h, 0), h, 1)
                bs = half * (bh + symsign * bh.T)
                bj = half * (bs + jsign * pullback(pullback(bs, s.phi, 0), s.phi, 1))
                lifted = np.multiply.outer(eta, bj)
                out.append(lifted - np.transpose(lifted, (1, 0, 2)))
        return _collect_independent(out, d)

    # T41
    out = []
    for k in range(d):
        w = zeros(d)
        w[k] = mpq(1)
        wh = np.dot(w, s.horizontal)
        a1 = np.multiply.outer(wh, s.eta_eta)
        out.append(a1 - np.transpose(a1, (1, 0, 2)))
    return _collect_independent(out, d)


def class_subspace_basis_literal(class_id: ClassId, s: AcbStructure) -> list[Tensor]:
    """Independent slow route: nullspace of the defining residuals."""
    if class_id not in CLASS_IDS:
        raise UnknownClass(f"unknown torsion class {class_id!r}")
    d = s.dim
    elems = torsion_space_basis(s)
    residuals = [_class_residuals(class_id, e, s) for e in elems]
    red = RowReducer(len(elems))
    for block in range(len(residuals[0])):
        shape = residuals[0][block].shape
        for idx in np.ndindex(shape):
            row = [res[block][idx] for res in residuals]
            if any(c != 0 for c in row):
                red.add(row)
    basis = []
    for coeffs in red.nullspace():
        combo = zeros(d, d, d)
        for c, e in zip(coeffs, elems):
            if c != 0:
                combo = combo + c * e
        basis.append(freeze(combo))
    return basis


# ---------------------------------------------------------------------------
# membership in direct sums


@dataclass
class SumMembership:
    """Outcome of testing T against a direct sum of class subspaces."""

    classes: tuple
    member: bool
    components: dict | None
    basis_rank: int
    augmented_rank: int

    @property
    def rank_defect(self) -> int:
        return self.augmented_rank - self.basis_rank


def sum_membership(t: Tensor, classes, s: AcbStructure) -> SumMembership:
    """Test membership of t in the sum of the given classes.

    On success the witness decomposition is returned per class and is
    guaranteed to recombine to t exactly.
    """
    classes = tuple(classes)
    for cid in classes:
        if cid not in CLASS_IDS:
            raise UnknownClass(f"unknown torsion class {cid!r}")
    d = s.dim

    def build():
        vectors = []
        offsets = []
        for cid in classes:
            basis = class_subspace_basis(cid, s)
            offsets.append((cid, len(vectors), len(basis)))
            vectors.extend(list(b.flat) for b in basis)
        return SpanSolver(vectors), offsets

    solver, offsets = s.cached(("sum_span", classes), build)
    coeffs = solver.solve(list(t.flat))
    if coeffs is None:
        return SumMembership(
            classes=classes,
            member=False,
            components=None,
            basis_rank=solver.rank,
            augmented_rank=solver.rank + 1,
        )
    components = {}
    for cid, start, count in offsets:
        basis = class_subspace_basis(cid, s)
        piece = zeros(d, d, d)
        for c, b in zip(coeffs[start : start + count], basis):
            if c != 0:
                piece = piece + c * b
        components[cid] = freeze(piece)
    total = zeros(d, d, d)
    for piece in components.values():
        total = total + piece
    assert eq(freeze(total), t), "decomposition failed to recombine"
    return SumMembership(
        classes=classes,
        member=True,
        components=components,
        basis_rank=solver.rank,
        augmented_rank=solver.rank,
    )
