"""The fundamental (0,3)-tensor of a structure and its basic classes.

For a covariant derivative of phi, the tensor F(x,y,z) = g((D_x phi)y, z)
is symmetric in its last two slots and satisfies the twist property

    F(x,y,z) = F(x, phi y, phi z) + eta(y) F(x, xi, z) + eta(z) F(x, y, xi).

Traces of F give three one-forms (theta, theta*, omega).  The full trace
over the whole basis and the trace over the horizontal directions differ
exactly by omega in the theta slot; the horizontal forms are the ones
that enter every reconstruction formula below, the full ones are kept
for reporting.

Class tags:
  F0    F = 0
  F1    horizontal theta only, with theta* = -theta . phi
  F4    theta proportional to eta
  F5    theta* proportional to eta
  F11   omega only
  MAIN  the span of the four classes above; F is recoverable from its
        own trace forms via the closed reconstruction formula.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .checks import CheckReport
from .errors import BadData, UnknownClass
from .scalar import rat
from .structure import AcbStructure
from .tensor import (
    Tensor,
    covec_mat,
    eq,
    freeze,
    is_zero,
    outer,
    pullback,
    sym_last_two,
    tensor,
    zeros,
)

CLASS_TAGS = ("F0", "F1", "F4", "F5", "F11", "MAIN")


def validate_F(f: Tensor, s: AcbStructure) -> CheckReport:
    """Check the two defining identities of a fundamental tensor."""
    d = s.dim
    if f.shape != (d, d, d):
        from .errors import ShapeMismatch

        raise ShapeMismatch(f"F must have shape {(d, d, d)}, got {f.shape}")
    rep = CheckReport(subject="fundamental tensor")
    rep.add_zero("symmetric_in_last_two", f - f.transpose(0, 2, 1))

    twisted = pullback(pullback(f, s.phi, 1), s.phi, 2)
    f_xi_mid = np.tensordot(f, s.xi, axes=([1], [0]))  # [x,z] = F(x,xi,z)
    f_xi_last = np.tensordot(f, s.xi, axes=([2], [0]))  # [x,y] = F(x,y,xi)
    term_mid = np.transpose(np.multiply.outer(s.eta, f_xi_mid), (1, 0, 2))
    term_last = np.multiply.outer(f_xi_last, s.eta)
    rep.add_zero("phi_twist", f - twisted - term_mid - term_last)
    return rep


@dataclass(frozen=True)
class LeeForms:
    """Trace one-forms of a fundamental tensor, plus their metric duals."""

    theta_full: Tensor
    theta_star_full: Tensor
    omega: Tensor
    theta_h: Tensor
    theta_star_h: Tensor
    a: Tensor
    a_star: Tensor
    a_hat: Tensor


def lee_forms(f: Tensor, s: AcbStructure) -> LeeForms:
    theta_full = freeze(np.tensordot(s.g_inv, f, axes=([0, 1], [0, 1])))
    f_phi = pullback(f, s.phi, 1)
    theta_star_full = freeze(np.tensordot(s.g_inv, f_phi, axes=([0, 1], [0, 1])))
    omega = freeze(np.tensordot(np.tensordot(f, s.xi, axes=([0], [0])), s.xi, axes=([0], [0])))
    theta_h = freeze(theta_full - omega)
    theta_star_h = theta_star_full
    return LeeForms(
        theta_full=theta_full,
        theta_star_full=theta_star_full,
        omega=omega,
        theta_h=theta_h,
        theta_star_h=theta_star_h,
        a=s.raise_covector(theta_h),
        a_star=s.raise_covector(theta_star_h),
        a_hat=s.raise_covector(omega),
    )


@dataclass(frozen=True)
class ClassData:
    """Trace data used to synthesize a class member.

    All three fields are covectors; omitted ones mean zero.  Which parts
    may be nonzero depends on the class, see build_class_F.
    """

    theta: Tensor | None = None
    theta_star: Tensor | None = None
    omega: Tensor | None = None


def _cov(data, s: AcbStructure) -> Tensor:
    if data is None:
        return zeros(s.dim)
    return tensor(data, (s.dim,))


def class_data_f1(theta, s: AcbStructure) -> ClassData:
    th = _cov(theta, s)
    return ClassData(theta=th, theta_star=freeze(-covec_mat(th, s.phi)))


def class_data_f4(c, s: AcbStructure) -> ClassData:
    return ClassData(theta=freeze(rat(c) * s.eta))


def class_data_f5(c, s: AcbStructure) -> ClassData:
    return ClassData(theta_star=freeze(rat(c) * s.eta))


def class_data_f11(omega, s: AcbStructure) -> ClassData:
    return ClassData(omega=_cov(omega, s))


def class_data_main(theta, theta_star_xi, omega, s: AcbStructure) -> ClassData:
    """Free data of the reconstructible span: theta is unconstrained,
    theta* is pinned to -theta . phi plus a free eta-component, omega is
    horizontal."""
    th = _cov(theta, s)
    star = freeze(rat(theta_star_xi) * s.eta - covec_mat(th, s.phi))
    return ClassData(theta=th, theta_star=star, omega=_cov(omega, s))


def _formula_f1(theta: Tensor, s: AcbStructure) -> Tensor:
    th_phi = covec_mat(theta, s.phi)
    th_phi2 = covec_mat(th_phi, s.phi)
    a = outer(s.g_phi, th_phi) + outer(s.g_phiphi, th_phi2)
    return freeze(mpq(1, 2 * s.n) * sym_last_two(a))


def _formula_f4(c, s: AcbStructure) -> Tensor:
    a = outer(s.g_phiphi, s.eta)
    return freeze((-rat(c) / (2 * s.n)) * sym_last_two(a))


def _formula_f5(c, s: AcbStructure) -> Tensor:
    a = outer(s.g_phi, s.eta)
    return freeze((-rat(c) / (2 * s.n)) * sym_last_two(a))


def _formula_f11(omega: Tensor, s: AcbStructure) -> Tensor:
    a = outer(outer(s.eta, s.eta), omega)
    return sym_last_two(a)


def _formula_main(theta: Tensor, theta_star: Tensor, omega: Tensor, s: AcbStructure) -> Tensor:
    a = (
        outer(s.g_phiphi, theta)
        + outer(s.g_phi, theta_star)
        - (2 * s.n) * outer(s.eta_eta, omega)
    )
    return freeze(mpq(-1, 2 * s.n) * sym_last_two(a))


def _require_zero(w: Tensor, label: str) -> None:
    if not is_zero(w):
        raise BadData(f"{label} must vanish for this class")


def build_class_F(class_id: str, data: ClassData, s: AcbStructure) -> Tensor:
    """Synthesize a fundamental tensor of the given class from trace data.

    Raises BadData when the data carries components the class cannot
    absorb; silently dropping them would break the round trip between
    data, tensor and recovered trace forms.
    """
    if class_id not in CLASS_TAGS:
        raise UnknownClass(f"unknown class tag {class_id!r}")
    th = _cov(data.theta, s)
    star = _cov(data.theta_star, s)
    om = _cov(data.omega, s)
    th_xi = np.dot(th, s.xi)
    star_xi = np.dot(star, s.xi)

    if class_id == "F0":
        _require_zero(th, "theta")
        _require_zero(star, "theta*")
        _require_zero(om, "omega")
        return zeros(s.dim, s.dim, s.dim)
    if class_id == "F1":
        if th_xi != 0:
            raise BadData("theta must be horizontal for this class")
        if not eq(star, freeze(-covec_mat(th, s.phi))):
            raise BadData("theta* must equal -theta . phi for this class")
        _require_zero(om, "omega")
        return _formula_f1(th, s)
    if class_id == "F4":
        if not eq(th, freeze(th_xi * s.eta)):
            raise BadData("theta must be proportional to eta for this class")
        _require_zero(star, "theta*")
        _require_zero(om, "omega")
        return _formula_f4(th_xi, s)
    if class_id == "F5":
        if not eq(star, freeze(star_xi * s.eta)):
            raise BadData("theta* must be proportional to eta for this class")
        _require_zero(th, "theta")
        _require_zero(om, "omega")
        return _formula_f5(star_xi, s)
    if class_id == "F11":
        if np.dot(om, s.xi) != 0:
            raise BadData("omega must be horizontal")
        _require_zero(th, "theta")
        _require_zero(star, "theta*")
        return _formula_f11(om, s)
    # MAIN
    if np.dot(om, s.xi) != 0:
        raise BadData("omega must be horizontal")
    if not eq(freeze(star - star_xi * s.eta), freeze(-covec_mat(th, s.phi))):
        raise BadData("horizontal part of theta* must equal -theta . phi")
    return _formula_main(th, star, om, s)


def is_in_class(f: Tensor, class_id: str, s: AcbStructure) -> bool:
    """Membership by reconstruction: rebuild from the trace forms the
    class can see and compare with f exactly."""
    if class_id not in CLASS_TAGS:
        raise UnknownClass(f"unknown class tag {class_id!r}")
    if class_id == "F0":
        return is_zero(f)
    lee = lee_forms(f, s)
    if class_id == "F1":
        return eq(f, _formula_f1(lee.theta_h, s))
    if class_id == "F4":
        return eq(f, _formula_f4(np.dot(lee.theta_h, s.xi), s))
    if class_id == "F5":
        return eq(f, _formula_f5(np.dot(lee.theta_star_h, s.xi), s))
    if class_id == "F11":
        return eq(f, _formula_f11(lee.omega, s))
    return eq(f, _formula_main(lee.theta_h, lee.theta_star_h, lee.omega, s))


def classify_F(f: Tensor, s: AcbStructure) -> dict[str, bool]:
    return {tag: is_in_class(f, tag, s) for tag in CLASS_TAGS}
