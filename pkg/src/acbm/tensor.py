"""Dense exact tensors.

Tensors are numpy arrays with dtype=object holding gmpy2 rationals.
numpy only supplies the containers and index bookkeeping (tensordot,
einsum and outer all dispatch to mpq arithmetic on object arrays), so
every operation below is exact.  Arrays returned by this module are
frozen; callers that need to mutate should copy first.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeMismatch
from .scalar import ZERO, Scalar, rat

Tensor = np.ndarray


def freeze(a: Tensor) -> Tensor:
    a.flags.writeable = False
    return a


def zeros(*shape: int) -> Tensor:
    # mpq is immutable, sharing one instance across all cells is safe
    return np.full(shape, ZERO, dtype=object)


def identity(d: int) -> Tensor:
    out = zeros(d, d)
    for i in range(d):
        out[i, i] = rat(1)
    return freeze(out)


def tensor(nested, shape: tuple[int, ...] | None = None) -> Tensor:
    """Build an exact tensor from nested lists, validating rectangularity."""
    arr = np.array(nested, dtype=object)
    if arr.dtype == object and any(isinstance(x, (list, np.ndarray)) for x in arr.flat):
        raise ShapeMismatch("ragged nested data")
    if shape is not None and arr.shape != tuple(shape):
        raise ShapeMismatch(f"expected shape {tuple(shape)}, got {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = rat(arr[idx])
    return freeze(out)


def is_zero(a: Tensor) -> bool:
    return all(x == 0 for x in a.flat)


def eq(a: Tensor, b: Tensor) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def first_nonzero(a: Tensor) -> tuple[int, ...] | None:
    """Index of the first nonzero entry in C order, or None."""
    for idx in np.ndindex(a.shape):
        if a[idx] != 0:
            return idx
    return None


def contract(t: Tensor, u: Tensor, pairs: list[tuple[int, int]]):
    """Contract slot pairs (i in t, j in u).  Rank-0 results collapse to a scalar."""
    for i, j in pairs:
        if t.shape[i] != u.shape[j]:
            raise ShapeMismatch(
                f"slot {i} of shape {t.shape} cannot contract slot {j} of shape {u.shape}"
            )
    axes_t = [i for i, _ in pairs]
    axes_u = [j for _, j in pairs]
    out = np.tensordot(t, u, axes=(axes_t, axes_u))
    if out.ndim == 0:
        return rat(out.item())
    return freeze(out)


def pullback(t: Tensor, m: Tensor, slot: int) -> Tensor:
    """Compose covariant slot `slot` of t with the matrix m (column action).

    (pullback(t, m, s))[..., a, ...] = sum_i t[..., i, ...] m[i, a].
    Pulling every slot of t back along m transports t to the basis whose
    vectors are the columns of m.
    """
    if t.shape[slot] != m.shape[0]:
        raise ShapeMismatch(f"slot {slot} of {t.shape} vs matrix {m.shape}")
    moved = np.tensordot(t, m, axes=([slot], [0]))
    return freeze(np.moveaxis(moved, -1, slot))


def pullback_all(t: Tensor, m: Tensor) -> Tensor:
    out = t
    for slot in range(t.ndim):
        out = pullback(out, m, slot)
    return out


def outer(a: Tensor, b: Tensor) -> Tensor:
    return freeze(np.multiply.outer(a, b))


def scale(c, a: Tensor) -> Tensor:
    return freeze(rat(c) * a)


def mat_vec(m: Tensor, v: Tensor) -> Tensor:
    if m.shape[1] != v.shape[0]:
        raise ShapeMismatch(f"{m.shape} @ {v.shape}")
    return freeze(np.dot(m, v))


def covec_mat(w: Tensor, m: Tensor) -> Tensor:
    """Compose a covector with a matrix: (w . m)(x) = w(m x)."""
    if w.shape[0] != m.shape[0]:
        raise ShapeMismatch(f"{w.shape} . {m.shape}")
    return freeze(np.dot(w, m))


def transpose(t: Tensor, perm: tuple[int, ...]) -> Tensor:
    return freeze(np.transpose(t, perm))


def sym_last_two(t: Tensor) -> Tensor:
    """A(..., y, z) + A(..., z, y) over the final two slots."""
    perm = list(range(t.ndim))
    perm[-1], perm[-2] = perm[-2], perm[-1]
    return freeze(t + np.transpose(t, perm))


def alt_last_two(t: Tensor) -> Tensor:
    perm = list(range(t.ndim))
    perm[-1], perm[-2] = perm[-2], perm[-1]
    return freeze(t - np.transpose(t, perm))


def cyclic_sum(t: Tensor) -> Tensor:
    """T(x,y,z) + T(y,z,x) + T(z,x,y) for rank-3 tensors."""
    if t.ndim != 3:
        raise ShapeMismatch("cyclic_sum expects rank 3")
    return freeze(t + np.transpose(t, (1, 2, 0)) + np.transpose(t, (2, 0, 1)))
