"""Exact action of Dehn-twist words on the first homology of a closed surface.

Everything here is integer linear algebra over Z^(2g) with the standard
symplectic pairing.  Matrices are tuples of tuples of Python ints, so all
arithmetic is arbitrary precision; there is no overflow to check for.

Conventions (fixed once, used by every other module):

* basis order a_1, b_1, ..., a_g, b_g,
* pairing(a_i, b_i) = +1,
* the leftmost letter of a twist word acts last (function composition).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Matrix = tuple[tuple[int, ...], ...]


class InvalidDimension(ValueError):
    """A vector or matrix does not match the space's dimension 2g."""


class UnknownCurve(KeyError):
    """A twist word referenced a curve id with no assigned homology class."""


class InvalidModulus(ValueError):
    """Level test called with modulus < 2."""


@dataclass(frozen=True)
class SymplecticSpace:
    """The lattice Z^(2g) with the standard skew pairing.

    The pairing matrix J is block diagonal with 2x2 blocks [[0, 1], [-1, 0]],
    one block per handle, in the basis a_1, b_1, ..., a_g, b_g.
    """

    genus: int

    def __post_init__(self) -> None:
        if not isinstance(self.genus, int) or self.genus < 1:
            raise InvalidDimension(f"genus must be a positive integer, got {self.genus!r}")

    @property
    def dimension(self) -> int:
        return 2 * self.genus

    @property
    def pairing_matrix(self) -> Matrix:
        d = self.dimension
        rows = []
        for i in range(d):
            row = [0] * d
            if i % 2 == 0:
                row[i + 1] = 1
            else:
                row[i - 1] = -1
            rows.append(tuple(row))
        return tuple(rows)

    def zero(self) -> "H1Vector":
        return H1Vector((0,) * self.dimension)

    def basis_vector(self, index: int) -> "H1Vector":
        if not 0 <= index < self.dimension:
            raise InvalidDimension(f"basis index {index} out of range for dimension {self.dimension}")
        coords = [0] * self.dimension
        coords[index] = 1
        return H1Vector(tuple(coords))

    def a(self, i: int) -> "H1Vector":
        """Basis class a_i, 1-indexed."""
        if not 1 <= i <= self.genus:
            raise InvalidDimension(f"a_{i} does not exist at genus {self.genus}")
        return self.basis_vector(2 * (i - 1))

    def b(self, i: int) -> "H1Vector":
        """Basis class b_i, 1-indexed."""
        if not 1 <= i <= self.genus:
            raise InvalidDimension(f"b_{i} does not exist at genus {self.genus}")
        return self.basis_vector(2 * (i - 1) + 1)


@dataclass(frozen=True)
class H1Vector:
    """An integer homology class in coordinates over a_1, b_1, ..., a_g, b_g."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if len(self.coords) % 2 != 0 or not self.coords:
            raise InvalidDimension(f"coordinate length {len(self.coords)} is not an even positive number")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "H1Vector") -> "H1Vector":
        if other.dimension != self.dimension:
            raise InvalidDimension("cannot add vectors of different dimensions")
        return H1Vector(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "H1Vector") -> "H1Vector":
        if other.dimension != self.dimension:
            raise InvalidDimension("cannot subtract vectors of different dimensions")
        return H1Vector(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "H1Vector":
        return H1Vector(tuple(-x for x in self.coords))

    def scaled(self, k: int) -> "H1Vector":
        return H1Vector(tuple(k * x for x in self.coords))


_LETTER_RE = re.compile(r"^(?P<curve>[A-Za-z_][A-Za-z0-9_()\-]*)(?:\^(?P<exp>[+-]?\d+))?$")


@dataclass(frozen=True)
class TwistWord:
    """A finite product of Dehn twists, leftmost letter acting last.

    Each letter is a pair (curve_id, exponent) with nonzero exponent.
    """

    letters: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        normalized = []
        for letter in self.letters:
            curve, exp = letter
            exp = int(exp)
            if exp == 0:
                raise ValueError(f"letter {curve!r} has zero exponent")
            normalized.append((str(curve), exp))
        object.__setattr__(self, "letters", tuple(normalized))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((c, -e) for c, e in reversed(self.letters)))

    def curve_ids(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.letters)

    @classmethod
    def from_text(cls, text: str) -> "TwistWord":
        """Parse a word like ``"c1 c2^3 d1^-1"``; bare ids mean exponent +1."""
        letters = []
        for token in text.split():
            m = _LETTER_RE.match(token)
            if m is None:
                raise ValueError(f"cannot parse twist letter {token!r}")
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
            if exp == 0:
                raise ValueError(f"twist letter {token!r} has zero exponent")
            letters.append((m.group("curve"), exp))
        return cls(tuple(letters))

    def to_text(self) -> str:
        return " ".join(c if e == 1 else f"{c}^{e}" for c, e in self.letters)


def identity_matrix(dimension: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(dimension)) for i in range(dimension))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise InvalidDimension(f"cannot multiply {len(a)}x{len(a[0])} by {k}x{m}")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
        for row in a
    )


def mat_vec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    if len(a[0]) != len(v):
        raise InvalidDimension(f"cannot apply {len(a)}x{len(a[0])} matrix to length-{len(v)} vector")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def _check_vector(v: H1Vector, space: SymplecticSpace) -> None:
    if v.dimension != space.dimension:
        raise InvalidDimension(
            f"vector of dimension {v.dimension} does not live in Z^{space.dimension}"
        )


def intersection_pairing(x: H1Vector, y: H1Vector, space: SymplecticSpace) -> int:
    """Algebraic intersection number x^T J y.  Skew, integer valued, exact."""
    _check_vector(x, space)
    _check_vector(y, space)
    total = 0
    xc, yc = x.coords, y.coords
    for k in range(0, space.dimension, 2):
        total += xc[k] * yc[k + 1] - xc[k + 1] * yc[k]
    return total


def _pairing_row(c: H1Vector, space: SymplecticSpace) -> tuple[int, ...]:
    # row vector r with r[j] = pairing(c, e_j); r = c^T J
    r = [0] * space.dimension
    cc = c.coords
    for k in range(0, space.dimension, 2):
        r[k] = -cc[k + 1]
        r[k + 1] = cc[k]
    return tuple(r)


def transvection_matrix(c: H1Vector, power: int, space: SymplecticSpace) -> Matrix:
    """Matrix of x -> x + power * pairing(c, x) * c.

    This is the homology action of the Dehn twist along a curve of class c,
    raised to the given power.  A zero class (separating curve) gives the
    identity for every power.
    """
    _check_vector(c, space)
    d = space.dimension
    r = _pairing_row(c, space)
    cc = c.coords
    return tuple(
        tuple((1 if i == j else 0) + power * cc[i] * r[j] for j in range(d))
        for i in range(d)
    )


def _apply_transvection_left(c: H1Vector, power: int, m: Matrix, space: SymplecticSpace) -> Matrix:
    # T * M as a rank-one update: M + power * c * (r @ M), r = c^T J.
    r = _pairing_row(c, space)
    d = space.dimension
    u = [0] * d
    for t in range(d):
        rt = r[t]
        if rt:
            row = m[t]
            for j in range(d):
                u[j] += rt * row[j]
    cc = c.coords
    out = []
    for i in range(d):
        ci = cc[i]
        if ci:
            pci = power * ci
            out.append(tuple(m[i][j] + pci * u[j] for j in range(d)))
        else:
            out.append(m[i])
    return tuple(out)


def word_action(
    word: TwistWord,
    classes: Mapping[str, H1Vector],
    space: SymplecticSpace,
) -> Matrix:
    """Product of transvection matrices for a twist word, leftmost acting last.

    Parameters
    ----------
    word : TwistWord
        Letters (curve_id, exponent).
    classes : mapping
        Assigns each curve id appearing in the word its homology class.
    space : SymplecticSpace

    Returns
    -------
    Matrix
        The exact integer matrix of the composite map; always symplectic.
    """
    m = identity_matrix(space.dimension)
    # Rightmost letter acts first, so build the product from the right and
    # multiply each new letter in on the left.
    for curve, exp in reversed(word.letters):
        if curve not in classes:
            raise UnknownCurve(f"no homology class recorded for curve {curve!r}")
        c = classes[curve]
        _check_vector(c, space)
        m = _apply_transvection_left(c, exp, m, space)
    return m


def is_torelli(m: Matrix) -> bool:
    """True iff the matrix acts trivially on homology (equals the identity)."""
    n = len(m)
    for i, row in enumerate(m):
        if len(row) != n:
            raise InvalidDimension("matrix is not square")
        for j, entry in enumerate(row):
            if entry != (1 if i == j else 0):
                return False
    return True


def is_level_trivial(m: Matrix, modulus: int) -> bool:
    """True iff m is congruent to the identity entrywise mod ``modulus``."""
    if modulus < 2:
        raise InvalidModulus(f"modulus must be at least 2, got {modulus}")
    n = len(m)
    for i, row in enumerate(m):
        if len(row) != n:
            raise InvalidDimension("matrix is not square")
        for j, entry in enumerate(row):
            if (entry - (1 if i == j else 0)) % modulus != 0:
                return False
    return True


def is_symplectic(m: Matrix, space: SymplecticSpace) -> bool:
    """True iff M^T J M = J for the space's pairing matrix J."""
    d = space.dimension
    if len(m) != d or any(len(row) != d for row in m):
        return False
    # J @ M is a cheap signed row shuffle: block k contributes
    # (J M)[2k] = M[2k+1], (J M)[2k+1] = -M[2k].
    jm = []
    for k in range(0, d, 2):
        jm.append(m[k + 1])
        jm.append(tuple(-x for x in m[k]))
    prod = mat_mul(transpose(m), tuple(jm))
    return prod == space.pairing_matrix


def symplectic_inverse(m: Matrix, space: SymplecticSpace) -> Matrix:
    """Exact inverse of a symplectic matrix via M^-1 = -J M^T J."""
    d = space.dimension
    if len(m) != d or any(len(row) != d for row in m):
        raise InvalidDimension("matrix does not match the space's dimension")
    mt = transpose(m)
    # rows of (M^T J): column pairs of M^T get swapped with signs
    mtj = tuple(
        tuple(-row[j + 1] if j % 2 == 0 else row[j - 1] for j in range(d))
        for row in mt
    )
    # -J (M^T J): signed row shuffle as in is_symplectic, then negate
    out = []
    for k in range(0, d, 2):
        out.append(tuple(-x for x in mtj[k + 1]))
        out.append(mtj[k])
    return tuple(out)


def matrix_from_rows(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)
