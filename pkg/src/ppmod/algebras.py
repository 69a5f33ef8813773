"""Finite-dimensional unital algebras given by structure constants.

An algebra is a based F_q-space with multiplication table
``e_i * e_j = sum_k constants[i, j, k] e_k`` and a distinguished unit
vector.  Elements are coordinate vectors of length ``dim`` (numpy,
field-element codes).  Construction validates associativity on every
basis triple and both unit laws, so downstream code may assume a genuine
unital associative algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadUnit, DimensionMismatch, NonAssociative
from .fields import ELEM, Field


@dataclass(frozen=True, eq=False)
class Algebra:
    field: Field
    labels: tuple[str, ...]
    constants: np.ndarray  # (dim, dim, dim); e_i e_j = sum_k c[i,j,k] e_k
    unit: np.ndarray  # (dim,)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def mul_elems(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Product of two elements in basis coordinates."""
        f = self.field
        out = np.zeros(self.dim, dtype=ELEM)
        for i in np.nonzero(u)[0]:
            for j in np.nonzero(v)[0]:
                coef = f.mul(f.mul(u[i], v[j]), self.constants[i, j])
                out = f.add(out, coef)
        return out

    def elem_zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=ELEM)

    def basis_elem(self, i: int) -> np.ndarray:
        v = self.elem_zero()
        v[i] = 1
        return v

    def scalar_elem(self, c: int) -> np.ndarray:
        """The element c * 1 for a field scalar c."""
        return self.field.mul(np.full(self.dim, c, ELEM), self.unit)

    def elem_code(self, v: np.ndarray) -> int:
        """Integer code of an element (base-q digits = coordinates)."""
        return int(sum(int(c) * self.field.q**i for i, c in enumerate(v)))

    def elem_from_code(self, code: int) -> np.ndarray:
        q = self.field.q
        return np.array([(code // q**i) % q for i in range(self.dim)], dtype=ELEM)

    def enumerate_elements(self) -> np.ndarray:
        """All q^dim elements in code order, shape (q^dim, dim)."""
        return np.stack(
            [self.elem_from_code(c) for c in range(self.field.q**self.dim)]
        )

    def right_regular_actions(self) -> np.ndarray:
        """Matrices of right multiplication, row convention (v @ m)."""
        # row l of actions[i] is e_l * e_i
        return np.stack(
            [self.constants[:, i, :].astype(ELEM) for i in range(self.dim)]
        )

    def left_regular_actions(self) -> np.ndarray:
        """Matrices of left multiplication in row-applied storage."""
        # row l of actions[i] is e_i * e_l
        return np.stack(
            [self.constants[i, :, :].astype(ELEM) for i in range(self.dim)]
        )

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no basis label {label!r}") from None

    def render_elem(self, v: np.ndarray) -> str:
        """Human form of an element, e.g. ``(1 + t)`` or ``t``."""
        terms = []
        for i in np.nonzero(v)[0]:
            c = int(v[i])
            terms.append(self.labels[i] if c == 1 else f"{c}*{self.labels[i]}")
        if not terms:
            return "0"
        if len(terms) == 1:
            return terms[0]
        return "(" + " + ".join(terms) + ")"

    def fingerprint(self) -> tuple:
        return (
            self.field.fingerprint(),
            self.labels,
            self.constants.tobytes(),
            self.unit.tobytes(),
        )

    def __repr__(self) -> str:
        return f"Algebra(dim={self.dim}, labels={'/'.join(self.labels)})"


def make_algebra(
    field: Field,
    labels: list[str] | tuple[str, ...],
    constants: np.ndarray,
    unit: np.ndarray,
) -> Algebra:
    """Validate structure constants and build an :class:`Algebra`.

    Raises:
        DimensionMismatch: inconsistent shapes or duplicate labels.
        NonAssociative: some basis triple breaks associativity (the
            witness triple is attached to the error).
        BadUnit: the unit vector is not a two-sided identity.
    """
    labels = tuple(labels)
    m = len(labels)
    if len(set(labels)) != m or m == 0:
        raise DimensionMismatch("labels must be nonempty and distinct")
    constants = field.asarray(constants)
    unit = field.asarray(unit)
    if constants.shape != (m, m, m):
        raise DimensionMismatch(
            f"constants shape {constants.shape}, expected {(m, m, m)}"
        )
    if unit.shape != (m,):
        raise DimensionMismatch(f"unit shape {unit.shape}, expected ({m},)")
    alg = Algebra(field, labels, constants, unit)
    for i in range(m):
        for j in range(m):
            eiej = constants[i, j]
            for k in range(m):
                left = alg.mul_elems(eiej, alg.basis_elem(k))
                right = alg.mul_elems(alg.basis_elem(i), constants[j, k])
                if not np.array_equal(left, right):
                    raise NonAssociative((i, j, k), labels)
    for j in range(m):
        ej = alg.basis_elem(j)
        if not np.array_equal(alg.mul_elems(unit, ej), ej) or not np.array_equal(
            alg.mul_elems(ej, unit), ej
        ):
            raise BadUnit(f"unit laws fail on basis element {labels[j]!r}")
    return alg


def opposite_constants(constants: np.ndarray) -> np.ndarray:
    return np.swapaxes(constants, 0, 1)
