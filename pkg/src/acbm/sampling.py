"""Seeded random generators for fixtures.

All randomness flows through random.Random with integer seeds, so any
fixture is reproducible from (kind, n, seed).  Scalars are small exact
rationals; "nonzero" generators resample until they really are nonzero.
"""

from __future__ import annotations

import random

import numpy as np
from gmpy2 import mpq

from .fundamental import ClassData, class_data_f1, class_data_f11, class_data_main
from .linalg import rank_of
from .structure import AcbStructure
from .tensor import Tensor, freeze, mat_vec, tensor, zeros

_DENOMINATORS = (1, 1, 1, 2, 3)


def _channel(seed: int, tag: str) -> random.Random:
    mix = sum((i + 1) * b for i, b in enumerate(tag.encode()))
    return random.Random((seed << 20) ^ mix)


def rand_rational(r: random.Random, lo: int = -4, hi: int = 4):
    return mpq(r.randint(lo, hi), r.choice(_DENOMINATORS))


def rand_covector(s: AcbStructure, r: random.Random, horizontal: bool = False) -> Tensor:
    while True:
        w = zeros(s.dim)
        for i in range(s.dim):
            w[i] = rand_rational(r)
        if horizontal:
            w = w - np.dot(w, s.xi) * s.eta
        if any(x != 0 for x in w.flat):
            return freeze(w)


def main_class_data(s: AcbStructure, seed: int) -> ClassData:
    """Generic trace data for a reconstructible fundamental tensor."""
    r = _channel(seed, "main")
    theta = rand_covector(s, r)
    star_xi = rand_rational(r)
    omega = rand_covector(s, r, horizontal=True)
    return class_data_main(theta, star_xi, omega, s)


def main_class_data_generic(s: AcbStructure, seed: int) -> ClassData:
    """Like main_class_data but with independent steering directions.

    Resamples until {a, phi a, a^, phi a^} has rank 4 (projected to the
    horizontal space), which needs dim >= 5.  Used where the family
    parameters must be recoverable from the torsion alone.
    """
    if s.dim < 5:
        raise ValueError("rank-4 steering data needs dim >= 5")
    from .fundamental import build_class_F, lee_forms

    k = 0
    while True:
        data = main_class_data(s, seed * 100000 + k)
        f = build_class_F("MAIN", data, s)
        forms = lee_forms(f, s)
        a_h = mat_vec(s.horizontal, forms.a)
        vecs = [
            list(a_h),
            list(mat_vec(s.phi, forms.a)),
            list(forms.a_hat),
            list(mat_vec(s.phi, forms.a_hat)),
        ]
        if rank_of(vecs) == 4:
            return data
        k += 1


def class_data_random(class_id: str, s: AcbStructure, seed: int) -> ClassData:
    r = _channel(seed, f"class:{class_id}")
    if class_id == "F1":
        return class_data_f1(rand_covector(s, r, horizontal=True), s)
    if class_id == "F4":
        c = mpq(0)
        while c == 0:
            c = rand_rational(r)
        return ClassData(theta=freeze(c * s.eta))
    if class_id == "F5":
        c = mpq(0)
        while c == 0:
            c = rand_rational(r)
        return ClassData(theta_star=freeze(c * s.eta))
    if class_id == "F11":
        return class_data_f11(rand_covector(s, r, horizontal=True), s)
    if class_id == "MAIN":
        return main_class_data(s, seed)
    from .errors import UnknownClass

    raise UnknownClass(f"no random data for class {class_id!r}")


def rand_alpha(seed: int):
    from .family import FamilyParams

    r = _channel(seed, "alpha")
    return FamilyParams(tuple(rand_rational(r) for _ in range(4)))


def rand_lambda(seed: int):
    from .family import AnsatzParams

    r = _channel(seed, "lambda")
    return AnsatzParams(tuple(rand_rational(r) for _ in range(18)))


def unimodular(d: int, seed: int, steps: int | None = None) -> Tensor:
    """Random integer matrix with determinant +-1 (product of shears)."""
    r = _channel(seed, "unimodular")
    if steps is None:
        steps = 2 * d + 4
    p = [[mpq(1) if i == j else mpq(0) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        i = r.randrange(d)
        j = r.randrange(d)
        if i == j:
            continue
        c = r.choice((-2, -1, 1, 2))
        for k in range(d):
            p[i][k] += c * p[j][k]
    return tensor(p, (d, d))


def rand_torsion(s: AcbStructure, seed: int) -> Tensor:
    """Random element of the full torsion space (no naturality imposed)."""
    r = _channel(seed, "torsion")
    d = s.dim
    t = zeros(d, d, d)
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                v = rand_rational(r)
                t[i, j, k] = v
                t[j, i, k] = -v
    return freeze(t)


def rand_vector(s: AcbStructure, seed: int) -> Tensor:
    r = _channel(seed, "vector")
    v = zeros(s.dim)
    for i in range(s.dim):
        v[i] = rand_rational(r)
    return freeze(v)
