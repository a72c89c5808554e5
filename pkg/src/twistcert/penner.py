"""Pseudo-Anosov certification for twist words on filling multicurve pairs.

A configuration is two transverse multicurve families: the c-family and the
d-family, with a nonnegative crossing matrix and (optionally) a ribbon
certificate that the union fills the surface.  A word of positive c-twists
and negative d-twists covering every curve is pseudo-Anosov; its stretch
factor is the Perron-Frobenius eigenvalue of an exact transition matrix.

The transition convention used here is bigon-track weight bookkeeping.  For
single-pair configurations it agrees exactly with the trace oracle built
from the two-multitwist representation into SL(2, R); for larger families it
is validated against that oracle and small exact cases only, and every
certificate records which method produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from . import jsonio
from .ribbon import FillingReport, RibbonConfig, verify_filling
from .symplectic import Matrix, TwistWord, UnknownCurve, identity_matrix, mat_mul


class InvalidPennerWord(ValueError):
    """Word shape violates the positive-c / negative-d / coverage rules."""


class NotPrimitive(ValueError):
    """No power of the matrix is strictly positive."""


class IterationLimit(RuntimeError):
    """Power iteration failed to converge within the iteration cap."""


class NotHyperbolic(ValueError):
    """Trace test failed: the two-multitwist product has |trace| <= 2."""


class NotFilling(ValueError):
    """Ribbon certificate shows the configuration does not fill."""


METHOD_TRANSITION = "penner-transition"
METHOD_TRACE = "thurston-trace"

RAYLEIGH_TOLERANCE = 1e-13
ITERATION_CAP = 100_000
CHARPOLY_TOLERANCE = 1e-9

TRANSITION_SCOPE_NOTE = (
    "transition matrices for families with several curves are validated "
    "against the two-multitwist trace oracle and small exact cases only"
)


@dataclass(frozen=True)
class PennerConfig:
    """Two multicurve families with their crossing counts.

    crossings[i][j] is the geometric intersection number of c_curves[i] with
    d_curves[j].  When a ribbon certificate is attached, every curve must
    cross the other family at least once; a curve disjoint from the other
    family cannot help fill.
    """

    c_curves: tuple[str, ...]
    d_curves: tuple[str, ...]
    crossings: Matrix
    ribbon: Optional[RibbonConfig] = None
    target_genus: int = 2

    def __post_init__(self) -> None:
        if not self.c_curves or not self.d_curves:
            raise ValueError("both curve families must be nonempty")
        ids = self.c_curves + self.d_curves
        if len(set(ids)) != len(ids):
            raise ValueError("curve ids must be distinct across both families")
        if len(self.crossings) != len(self.c_curves):
            raise ValueError(
                f"crossing matrix has {len(self.crossings)} rows "
                f"for {len(self.c_curves)} c-curves"
            )
        for row in self.crossings:
            if len(row) != len(self.d_curves):
                raise ValueError(
                    f"crossing matrix row has {len(row)} entries "
                    f"for {len(self.d_curves)} d-curves"
                )
            for value in row:
                if not isinstance(value, int) or value < 0:
                    raise ValueError(
                        f"crossing counts must be nonnegative integers, got {value!r}"
                    )
        if self.target_genus < 2:
            raise ValueError(f"target genus must be at least 2, got {self.target_genus}")
        if self.ribbon is not None:
            for i, cid in enumerate(self.c_curves):
                if all(v == 0 for v in self.crossings[i]):
                    raise ValueError(f"curve {cid!r} crosses nothing; it cannot help fill")
            for j, did in enumerate(self.d_curves):
                if all(row[j] == 0 for row in self.crossings):
                    raise ValueError(f"curve {did!r} crosses nothing; it cannot help fill")

    @classmethod
    def from_ribbon(cls, ribbon: RibbonConfig, target_genus: int = 2) -> "PennerConfig":
        return cls(
            c_curves=ribbon.c_family,
            d_curves=ribbon.d_family,
            crossings=tuple(tuple(row) for row in ribbon.crossing_matrix()),
            ribbon=ribbon,
            target_genus=target_genus,
        )

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.c_curves + self.d_curves

    def filling_report(self) -> Optional[FillingReport]:
        if self.ribbon is None:
            return None
        return verify_filling(self.ribbon, self.target_genus)


@dataclass(frozen=True)
class PowerIterationResult:
    lam: float
    l_teich: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class StretchCertificate:
    """A certified stretch factor with its provenance.

    lam is the Perron-Frobenius eigenvalue of the matrix, l_teich its log
    (the Teichmueller translation length), both stored already normalized to
    the 15-significant-digit artifact grid.
    """

    word: TwistWord
    lam: float
    l_teich: float
    matrix: Matrix
    method: str
    iterations: int
    residual: float

    def __post_init__(self) -> None:
        if self.method not in (METHOD_TRANSITION, METHOD_TRACE):
            raise ValueError(f"unknown certificate method {self.method!r}")
        if not self.lam > 1.0:
            raise ValueError(f"stretch factor must exceed 1, got {self.lam!r}")
        if abs(self.l_teich - math.log(self.lam)) > 1e-12 * max(1.0, abs(self.l_teich)):
            raise ValueError("l_teich is not the log of the stretch factor")
        for row in self.matrix:
            for value in row:
                if value < 0:
                    raise ValueError("certificate matrix must be nonnegative")

    def to_json_dict(self) -> dict:
        payload = {
            "word": self.word.to_text(),
            "lambda": self.lam,
            "l_teich": self.l_teich,
            "matrix": [list(row) for row in self.matrix],
            "method": self.method,
            "iterations": self.iterations,
            "residual": self.residual,
        }
        if self.method == METHOD_TRANSITION:
            payload["scope_note"] = TRANSITION_SCOPE_NOTE
        return payload

    @classmethod
    def from_json_dict(cls, payload: dict) -> "StretchCertificate":
        return cls(
            word=TwistWord.from_text(payload["word"]),
            lam=jsonio.parse_real(payload["lambda"]),
            l_teich=jsonio.parse_real(payload["l_teich"]),
            matrix=tuple(tuple(int(v) for v in row) for row in payload["matrix"]),
            method=payload["method"],
            iterations=int(payload["iterations"]),
            residual=jsonio.parse_real(payload["residual"]),
        )


def validate_penner_word(word: TwistWord, config: PennerConfig) -> bool:
    """Check the sign and coverage clauses; foreign ids are an error."""
    c_ids = set(config.c_curves)
    d_ids = set(config.d_curves)
    seen: set[str] = set()
    for curve_id, power in word.letters:
        if curve_id in c_ids:
            if power <= 0:
                return False
        elif curve_id in d_ids:
            if power >= 0:
                return False
        else:
            raise UnknownCurve(f"curve {curve_id!r} is not in the configuration")
        seen.add(curve_id)
    return seen == c_ids | d_ids


def transition_matrix(word: TwistWord, config: PennerConfig) -> Matrix:
    """Exact integer transition matrix of a valid word.

    Coordinates are indexed c_1..c_k, d_1..d_m.  A letter T_{c_i}^{+p}
    contributes the factor I + p*E_i, where E_i adds crossings[i][j] times the
    d_j coordinate into the c_i coordinate; a letter T_{d_j}^{-q} contributes
    I + q*F_j with the transposed role.  The result is the product of the
    factors in word order, leftmost first.
    """
    if not validate_penner_word(word, config):
        raise InvalidPennerWord(f"word {word.to_text()!r} is not a certified twist word shape")
    k = len(config.c_curves)
    m = len(config.d_curves)
    dim = k + m
    c_index = {cid: i for i, cid in enumerate(config.c_curves)}
    d_index = {did: k + j for j, did in enumerate(config.d_curves)}

    rows = [list(row) for row in identity_matrix(dim)]
    # right-to-left accumulation: each factor left-multiplies the product of
    # the letters after it, and (I + X) @ M is a single-row update
    for curve_id, power in reversed(word.letters):
        update = [0] * dim
        if curve_id in c_index:
            target = c_index[curve_id]
            for j in range(m):
                weight = power * config.crossings[target][j]
                if weight:
                    source = rows[k + j]
                    for t in range(dim):
                        update[t] += weight * source[t]
        else:
            target = d_index[curve_id]
            for i in range(k):
                weight = -power * config.crossings[i][target - k]
                if weight:
                    source = rows[i]
                    for t in range(dim):
                        update[t] += weight * source[t]
        row = rows[target]
        for t in range(dim):
            row[t] += update[t]
    return tuple(tuple(row) for row in rows)


def _is_primitive(m: Matrix) -> bool:
    """Some power of m is strictly positive (checked at the Wielandt bound).

    Once a boolean power is all-positive, higher powers stay positive, so
    repeated squaring past the bound (n-1)^2 + 1 decides primitivity.
    """
    n = len(m)
    reach = [[bool(v) for v in row] for row in m]
    bound = (n - 1) * (n - 1) + 1
    power = 1
    while True:
        if all(all(row) for row in reach):
            return True
        if power > bound:
            return False
        cols = list(zip(*reach))
        reach = [
            [any(a and b for a, b in zip(row, col)) for col in cols]
            for row in reach
        ]
        power *= 2


def _exact_det(m: Matrix, row_ids: tuple[int, ...], col_ids: tuple[int, ...]) -> int:
    if not row_ids:
        return 1
    first, rest = row_ids[0], row_ids[1:]
    total = 0
    for pos, col in enumerate(col_ids):
        entry = m[first][col]
        if entry:
            remaining = col_ids[:pos] + col_ids[pos + 1:]
            total += (-1) ** pos * entry * _exact_det(m, rest, remaining)
    return total


def _charpoly_coefficients(m: Matrix) -> list[int]:
    """Coefficients of det(xI - M) via exact principal-minor sums."""
    n = len(m)
    coeffs = [1]
    for size in range(1, n + 1):
        minors = sum(
            _exact_det(m, idx, idx) for idx in combinations(range(n), size)
        )
        coeffs.append((-1) ** size * minors)
    return coeffs


def stretch_factor(m: Matrix) -> PowerIterationResult:
    """Perron-Frobenius eigenvalue of a primitive nonnegative matrix.

    Power iteration with Rayleigh quotients, stopping when the relative
    quotient change drops below 1e-13; for matrices of size at most 4 the
    value is cross-checked against the characteristic polynomial roots.
    """
    n = len(m)
    if n == 0:
        raise ValueError("matrix must be nonempty")
    for row in m:
        if len(row) != n:
            raise ValueError("matrix must be square")
        for value in row:
            if value < 0:
                raise ValueError("matrix must be nonnegative")
    if not _is_primitive(m):
        raise NotPrimitive("no power of the matrix is strictly positive")

    a = np.array(m, dtype=float)
    v = np.ones(n) / math.sqrt(n)
    rayleigh = float(v @ (a @ v))
    iterations = 0
    residual = math.inf
    converged = False
    while iterations < ITERATION_CAP:
        w = a @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            raise NotPrimitive("matrix annihilated the positive cone")
        v = w / norm
        new_rayleigh = float(v @ (a @ v))
        iterations += 1
        residual = abs(new_rayleigh - rayleigh) / max(1.0, abs(new_rayleigh))
        rayleigh = new_rayleigh
        if residual < RAYLEIGH_TOLERANCE:
            converged = True
            break
    if not converged:
        raise IterationLimit(
            f"power iteration did not converge within {ITERATION_CAP} iterations"
        )

    lam = rayleigh
    if n <= 4:
        roots = np.roots(_charpoly_coefficients(m))
        spectral = max(abs(complex(r)) for r in roots)
        if abs(spectral - lam) > CHARPOLY_TOLERANCE * max(1.0, lam):
            raise ArithmeticError(
                f"power iteration {lam} disagrees with characteristic "
                f"polynomial spectral radius {spectral}"
            )
    return PowerIterationResult(
        lam=lam,
        l_teich=math.log(lam),
        iterations=iterations,
        residual=residual,
    )


def _oracle_mu(crossings: Matrix) -> float:
    n = np.array(crossings, dtype=float)
    if n.ndim != 2 or n.size == 0:
        raise ValueError("crossing matrix must be a nonempty two-dimensional array")
    return float(np.linalg.eigvalsh(n @ n.T).max())


def thurston_oracle(word: TwistWord, crossings: Matrix) -> float:
    """Stretch factor of a word in the two full multitwists T_c, T_d.

    mu is the largest eigenvalue of crossings @ crossings^T; the twists map
    to the parabolic matrices [[1, sqrt(mu)], [0, 1]] and
    [[1, 0], [-sqrt(mu), 1]].  The word is hyperbolic exactly when the
    product's |trace| exceeds 2, and then its spectral radius is returned.
    """
    root = math.sqrt(_oracle_mu(crossings))
    product = np.eye(2)
    for curve_id, power in word.letters:
        if curve_id == "c":
            factor = np.array([[1.0, power * root], [0.0, 1.0]])
        elif curve_id == "d":
            factor = np.array([[1.0, 0.0], [-power * root, 1.0]])
        else:
            raise UnknownCurve(f"oracle words use only 'c' and 'd', got {curve_id!r}")
        product = product @ factor
    trace = float(np.trace(product))
    if abs(trace) <= 2.0:
        raise NotHyperbolic(f"product trace {trace} has absolute value <= 2")
    return (abs(trace) + math.sqrt(trace * trace - 4.0)) / 2.0


def certify_stretch(word: TwistWord, config: PennerConfig) -> StretchCertificate:
    """Full certificate for a valid word: filling check (when a ribbon is
    attached), exact transition matrix, and its converged stretch factor."""
    if not validate_penner_word(word, config):
        raise InvalidPennerWord(f"word {word.to_text()!r} is not a certified twist word shape")
    report = config.filling_report()
    if report is not None and not report.filling:
        raise NotFilling(
            f"ribbon complement is not a union of disks on genus {config.target_genus}"
        )
    matrix = transition_matrix(word, config)
    result = stretch_factor(matrix)
    return StretchCertificate(
        word=word,
        lam=jsonio.normalize_real(result.lam),
        l_teich=jsonio.normalize_real(result.l_teich),
        matrix=matrix,
        method=METHOD_TRANSITION,
        iterations=result.iterations,
        residual=jsonio.normalize_real(result.residual),
    )


def oracle_certificate(word: TwistWord, crossings: Matrix) -> StretchCertificate:
    """Trace-method certificate; available when the representation is
    integral, which requires mu to be a perfect square (always true for
    single-pair configurations, where mu = n^2)."""
    lam = thurston_oracle(word, crossings)
    root = math.sqrt(_oracle_mu(crossings))
    if abs(root - round(root)) > 1e-9:
        raise ValueError("trace-method matrices are not integral for this configuration")
    r = int(round(root))
    product = identity_matrix(2)
    for curve_id, power in word.letters:
        if curve_id == "c":
            factor = ((1, power * r), (0, 1))
        else:
            factor = ((1, 0), (-power * r, 1))
        product = mat_mul(product, factor)
    return StretchCertificate(
        word=word,
        lam=jsonio.normalize_real(lam),
        l_teich=jsonio.normalize_real(math.log(lam)),
        matrix=product,
        method=METHOD_TRACE,
        iterations=0,
        residual=0.0,
    )


def random_penner_word(config: PennerConfig, rng, max_extra: int = 4, max_power: int = 3) -> TwistWord:
    """A uniformly scrambled valid word: one letter per curve plus extras."""
    letters = [(cid, rng.randint(1, max_power)) for cid in config.c_curves]
    letters += [(did, -rng.randint(1, max_power)) for did in config.d_curves]
    everything = list(config.coordinates)
    for _ in range(rng.randint(0, max_extra)):
        cid = rng.choice(everything)
        sign = 1 if cid in config.c_curves else -1
        letters.append((cid, sign * rng.randint(1, max_power)))
    rng.shuffle(letters)
    return TwistWord(tuple(letters))
