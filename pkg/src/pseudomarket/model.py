"""Instances, fractional assignments and the utility bookkeeping shared by all rules.

Every number is a :class:`fractions.Fraction`; floats are rejected on ingest so
that equality in tests and golden files is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from pseudomarket import errors

Matrix = tuple[tuple[Fraction, ...], ...]

BINARY = "binary"
BIVALUED = "bivalued"
GENERAL = "general"


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would smuggle rounding into an exact pipeline.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise errors.ValidationError(f"boolean {value!r} is not a utility")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise errors.ValidationError(f"cannot parse rational {value!r}") from exc
    if isinstance(value, float):
        raise errors.ValidationError(f"float {value!r} rejected; use 'p/q' strings")
    raise errors.ValidationError(f"unsupported number type {type(value).__name__}")


def to_matrix(raw) -> Matrix:
    try:
        rows = [list(row) for row in raw]
    except TypeError as exc:
        raise errors.NonRectangular("matrix must be a list of rows") from exc
    if not rows or not rows[0]:
        raise errors.EmptyInstance("matrix needs at least one row and one column")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise errors.NonRectangular(f"row {i} has {len(row)} entries, expected {width}")
    return tuple(tuple(to_fraction(v) for v in row) for row in rows)


def _is_matrix(value) -> bool:
    """True if value is already a non-empty rectangular tuple of Fraction tuples."""
    if not isinstance(value, tuple) or not value or not isinstance(value[0], tuple):
        return False
    width = len(value[0])
    return width > 0 and all(
        isinstance(r, tuple) and len(r) == width and all(type(v) is Fraction for v in r)
        for r in value
    )


@dataclass(frozen=True)
class UtilityClass:
    kind: str
    alpha: tuple[Fraction, ...] | None = None
    beta: tuple[Fraction, ...] | None = None

    @property
    def dichotomous(self) -> bool:
        return self.kind in (BINARY, BIVALUED)


def classify(u: Matrix) -> UtilityClass:
    """Binary if every entry is 0/1, bi-valued if each row uses at most two values."""
    if all(v in (0, 1) for row in u for v in row):
        return UtilityClass(BINARY)
    alpha, beta = [], []
    for row in u:
        values = sorted(set(row))
        if len(values) > 2:
            return UtilityClass(GENERAL)
        alpha.append(values[-1])
        # a row with a single distinct value is indifferent; beta 0 is never used
        beta.append(values[0] if len(values) == 2 else Fraction(0))
    return UtilityClass(BIVALUED, tuple(alpha), tuple(beta))


@dataclass(frozen=True)
class Instance:
    """An n-by-m nonnegative utility matrix in which every agent likes something.

    Items nobody values are allowed here because binary reduction produces
    them; :func:`validate_instance` additionally insists that every item is
    valued by someone.
    """

    u: Matrix

    def __post_init__(self):
        if not _is_matrix(self.u):
            object.__setattr__(self, "u", to_matrix(self.u))
        u = self.u
        for i, row in enumerate(u):
            for j, v in enumerate(row):
                if v < 0:
                    raise errors.NegativeUtility(i, j)
        for i, row in enumerate(u):
            if not any(row):
                raise errors.ZeroRow(i)

    @property
    def n(self) -> int:
        return len(self.u)

    @property
    def m(self) -> int:
        return len(self.u[0])

    @property
    def square(self) -> bool:
        return self.n == self.m

    @cached_property
    def utility_class(self) -> UtilityClass:
        return classify(self.u)

    @cached_property
    def liked(self) -> tuple[frozenset[int], ...]:
        """D_i: the items of maximal utility for each agent."""
        out = []
        for row in self.u:
            top = max(row)
            out.append(frozenset(j for j, v in enumerate(row) if v == top))
        return tuple(out)

    @classmethod
    def from_liked_sets(cls, liked: Sequence[Iterable[int]], m: int | None = None) -> Instance:
        liked = [set(d) for d in liked]
        if m is None:
            m = len(liked)
        return cls(tuple(tuple(Fraction(int(j in d)) for j in range(m)) for d in liked))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.u[i]

    def __repr__(self):
        body = [[str(v) for v in row] for row in self.u]
        return f"Instance({body})"


def validate_instance(raw) -> Instance:
    """Parse a raw rational matrix and check the positivity assumption.

    >>> validate_instance([[3, 2], [1, 0]]).utility_class.kind
    'bivalued'
    """
    inst = raw if isinstance(raw, Instance) else Instance(to_matrix(raw))
    for j in range(inst.m):
        if not any(row[j] for row in inst.u):
            raise errors.ZeroColumn(j)
    return inst


def liked_sets(inst: Instance) -> tuple[frozenset[int], ...]:
    return inst.liked


def binary_reduce(inst: Instance) -> Instance:
    """Map each agent's top value to 1 and lower value to 0."""
    cls = inst.utility_class
    if cls.kind == BINARY:
        return inst
    if cls.kind != BIVALUED:
        raise errors.NotDichotomous("binary reduction needs binary or bi-valued utilities")
    return Instance(
        tuple(
            tuple(Fraction(int(v == top)) for v in row)
            for row, top in zip(inst.u, cls.alpha)
        )
    )


def scale_shift(inst: Instance, scale: Sequence, shift: Sequence) -> Instance:
    """Return the instance with u'[i][j] = scale[i] * u[i][j] + shift[i]."""
    if len(scale) != inst.n or len(shift) != inst.n:
        raise errors.DimensionMismatch("need one scale and one shift per agent")
    a = [to_fraction(s) for s in scale]
    b = [to_fraction(s) for s in shift]
    if any(s <= 0 for s in a):
        raise errors.ValidationError("scale factors must be positive")
    rows = []
    for i, row in enumerate(inst.u):
        new = tuple(a[i] * v + b[i] for v in row)
        if any(v < 0 for v in new):
            raise errors.NegativeResult(f"shift makes agent {i} utilities negative", agent=i)
        rows.append(new)
    return Instance(tuple(rows))


@dataclass(frozen=True)
class FractionalAssignment:
    """A column-stochastic matrix of exact fractions.

    Rows need not sum to 1; :attr:`balanced` reports whether they do.
    """

    x: Matrix

    def __post_init__(self):
        if not _is_matrix(self.x):
            object.__setattr__(self, "x", to_matrix(self.x))
        x = self.x
        cols = [Fraction(0)] * len(x[0])
        for i, row in enumerate(x):
            for j, v in enumerate(row):
                if not v:
                    continue
                if v < 0 or v > 1:
                    raise errors.InvalidAssignment(
                        f"x[{i}][{j}] = {v} outside [0, 1]", agent=i, item=j
                    )
                cols[j] += v
        for j, total in enumerate(cols):
            if total != 1:
                raise errors.InvalidAssignment(
                    f"column {j} sums to {total}, not 1", item=j
                )

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def m(self) -> int:
        return len(self.x[0])

    @property
    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum((v for v in row if v), Fraction(0)) for row in self.x)

    @property
    def balanced(self) -> bool:
        return all(s == 1 for s in self.row_sums)

    @property
    def doubly_stochastic(self) -> bool:
        return self.n == self.m and self.balanced

    @classmethod
    def from_rows(cls, rows) -> FractionalAssignment:
        return cls(to_matrix(rows))

    def __getitem__(self, i):
        return self.x[i]

    def __repr__(self):
        body = [[str(v) for v in row] for row in self.x]
        return f"FractionalAssignment({body})"


def utility_vector(inst: Instance, x: FractionalAssignment) -> tuple[Fraction, ...]:
    """Expected utility of every agent: sum_j x[i][j] * u[i][j]."""
    if inst.n != x.n or inst.m != x.m:
        raise errors.DimensionMismatch(
            f"instance is {inst.n}x{inst.m}, assignment is {x.n}x{x.m}"
        )
    return tuple(
        sum((a * b for a, b in zip(xr, ur) if a), Fraction(0))
        for xr, ur in zip(x.x, inst.u)
    )


def bundle_utility(utilities: Sequence[Fraction], bundle: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(utilities, bundle) if a), Fraction(0))


def zero_matrix(n: int, m: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * m for _ in range(n)]


def freeze(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)
