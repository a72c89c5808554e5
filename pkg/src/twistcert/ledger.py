"""Bookkeeping of geometric intersection numbers between named curves.

The ledger stores asserted intersection data and derives new entries with the
twist-image rules

    i(T_c^n x, x) = |n| * i(c, x)^2
    i(T_c^n x, y) = |n| * i(c, x) * i(c, y)    for y distinct from x and c,

recording a provenance tag per entry.  The second rule is an equality only
under the transversality assumptions of the configuration being modeled; the
tag keeps that visible.  An absent entry is Unknown, which is never the same
as 0 (0 asserts disjointness).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .symplectic import (
    H1Vector,
    SymplecticSpace,
    UnknownCurve,
    intersection_pairing,
)

PROV_ASSERTED = "asserted"
PROV_DERIVED = "derived-by-rule"


class DuplicateCurve(ValueError):
    """A curve id was registered twice."""


class InconsistentLedger(ValueError):
    """Two rule paths or assertions disagree about one entry."""


class UnknownIntersection(LookupError):
    """A required geometric intersection number has not been recorded."""


class UnknownCurveClass(LookupError):
    """An operation needed a homology class that was left unset."""


class LedgerFrozen(RuntimeError):
    """Mutation was attempted on a frozen ledger."""


@dataclass(frozen=True)
class LedgerCurve:
    """A named curve with an optional homology class.

    separating is True iff the class is zero (closed oriented surface); it is
    None when the class was left unset.
    """

    id: str
    h1_class: Optional[H1Vector]
    separating: Optional[bool]


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


class IntersectionLedger:
    """Symmetric partial map of geometric intersection numbers.

    Single writer until :meth:`freeze`; afterwards every mutator raises and
    :meth:`with_derived` hands back modified copies instead.
    """

    def __init__(self, space: SymplecticSpace):
        self.space = space
        self._curves: dict[str, LedgerCurve] = {}
        self._entries: dict[tuple[str, str], tuple[int, str]] = {}
        self._frozen = False

    # -- introspection ------------------------------------------------------

    @property
    def frozen(self) -> bool:
        return self._frozen

    def curve_ids(self) -> tuple[str, ...]:
        return tuple(self._curves)

    def curve(self, curve_id: str) -> LedgerCurve:
        try:
            return self._curves[curve_id]
        except KeyError:
            raise UnknownCurve(f"curve {curve_id!r} is not registered") from None

    def h1_class(self, curve_id: str) -> H1Vector:
        c = self.curve(curve_id)
        if c.h1_class is None:
            raise UnknownCurveClass(f"curve {curve_id!r} has no recorded homology class")
        return c.h1_class

    def geometric(self, a: str, b: str) -> Optional[int]:
        """Recorded value of i(a, b), or None for Unknown."""
        self.curve(a)
        self.curve(b)
        if a == b:
            return 0
        entry = self._entries.get(_pair_key(a, b))
        return entry[0] if entry is not None else None

    def geometric_known(self, a: str, b: str) -> int:
        value = self.geometric(a, b)
        if value is None:
            raise UnknownIntersection(f"i({a}, {b}) is not recorded")
        return value

    def provenance(self, a: str, b: str) -> Optional[str]:
        entry = self._entries.get(_pair_key(a, b))
        return entry[1] if entry is not None else None

    # -- mutation -----------------------------------------------------------

    def _require_mutable(self) -> None:
        if self._frozen:
            raise LedgerFrozen("ledger is frozen; use with_derived for derived copies")

    def freeze(self) -> "IntersectionLedger":
        self._frozen = True
        return self

    def _unfrozen_copy(self) -> "IntersectionLedger":
        clone = IntersectionLedger(self.space)
        clone._curves = dict(self._curves)
        clone._entries = dict(self._entries)
        return clone

    def register_curve(self, curve_id: str, h1_class: Optional[H1Vector]) -> LedgerCurve:
        """Record a curve; the separating flag is derived from its class."""
        self._require_mutable()
        if curve_id in self._curves:
            raise DuplicateCurve(f"curve {curve_id!r} is already registered")
        separating = None if h1_class is None else h1_class.is_zero()
        curve = LedgerCurve(id=str(curve_id), h1_class=h1_class, separating=separating)
        self._curves[curve.id] = curve
        return curve

    def set_geometric(self, a: str, b: str, value: int, provenance: str = PROV_ASSERTED) -> None:
        self._require_mutable()
        self._store(a, b, value, provenance)

    def _store(self, a: str, b: str, value: int, provenance: str) -> None:
        self.curve(a)
        self.curve(b)
        if value < 0:
            raise ValueError(f"geometric intersection numbers are nonnegative, got {value}")
        if a == b:
            if value != 0:
                raise InconsistentLedger(f"i({a}, {a}) must be 0, got {value}")
            return
        key = _pair_key(a, b)
        existing = self._entries.get(key)
        if existing is not None:
            if existing[0] != value:
                raise InconsistentLedger(
                    f"i({a}, {b}) already recorded as {existing[0]} "
                    f"({existing[1]}); refusing to overwrite with {value}"
                )
            return
        self._entries[key] = (value, provenance)

    def derive_twist_image(
        self,
        c: str,
        n: int,
        x: str,
        new_id: Optional[str] = None,
    ) -> LedgerCurve:
        """Register the image of x under the n-th power twist along c.

        The image's class is the transvection of [x]; its intersection numbers
        with x and with every curve of known data follow the displayed rules.
        Entries derived twice along different paths must agree.
        """
        self._require_mutable()
        if n == 0:
            raise ValueError("twist power must be nonzero")
        curve_c = self.curve(c)
        curve_x = self.curve(x)
        if new_id is None:
            new_id = f"T_{c}^{n}({x})"
        if new_id in self._curves:
            raise DuplicateCurve(f"curve {new_id!r} is already registered")

        i_cx = self.geometric(c, x)
        if i_cx is None:
            raise UnknownIntersection(f"i({c}, {x}) is required to derive the twist image")

        new_class = self._transvected_class(curve_c, curve_x, n)
        image = self.register_curve(new_id, new_class)

        self._store(new_id, x, abs(n) * i_cx * i_cx, PROV_DERIVED)
        # The twist along c maps c to itself, so the image meets c as x does.
        i_xc = self.geometric(x, c)
        if i_xc is not None:
            self._store(new_id, c, i_xc, PROV_DERIVED)
        for other in list(self._curves):
            if other in (new_id, x, c):
                continue
            i_cy = self.geometric(c, other)
            if i_cy is not None:
                self._store(new_id, other, abs(n) * i_cx * i_cy, PROV_DERIVED)
        return image

    def _transvected_class(
        self, curve_c: LedgerCurve, curve_x: LedgerCurve, n: int
    ) -> Optional[H1Vector]:
        # [T_c^n x] = [x] + n*pairing([c],[x])*[c]; computable without [c]
        # whenever [x] = 0, which kills the transvection term.
        if curve_x.h1_class is None:
            return None
        if curve_x.h1_class.is_zero():
            return curve_x.h1_class
        if curve_c.h1_class is None:
            raise UnknownCurveClass(
                f"cannot transvect [{curve_x.id}] without a class for {curve_c.id!r}"
            )
        k = intersection_pairing(curve_c.h1_class, curve_x.h1_class, self.space)
        return curve_x.h1_class + curve_c.h1_class.scaled(n * k)

    def with_derived(
        self,
        c: str,
        n: int,
        x: str,
        new_id: Optional[str] = None,
    ) -> "IntersectionLedger":
        """Frozen-safe variant: returns a new ledger containing the image."""
        clone = self._unfrozen_copy()
        clone.derive_twist_image(c, n, x, new_id)
        if self._frozen:
            clone.freeze()
        return clone

    # -- checks -------------------------------------------------------------

    def is_bounding_pair(self, a: str, b: str) -> bool:
        """Disjoint, both nonseparating, classes equal up to sign."""
        curve_a = self.curve(a)
        curve_b = self.curve(b)
        value = self.geometric(a, b)
        if value is None:
            raise UnknownIntersection(f"i({a}, {b}) is not recorded")
        if value != 0:
            return False
        for curve in (curve_a, curve_b):
            if curve.separating is None:
                raise UnknownCurveClass(f"curve {curve.id!r} has no recorded homology class")
            if curve.separating:
                return False
        assert curve_a.h1_class is not None and curve_b.h1_class is not None
        return curve_a.h1_class == curve_b.h1_class or curve_a.h1_class == -curve_b.h1_class

    def check_curve_sequence(
        self,
        seq: Sequence[str],
        endpoints: tuple[str, str],
    ) -> "SequenceReport":
        """Check the connecting-sequence conditions pairwise along seq.

        Condition (1): seq starts and ends at the supplied endpoints.
        Per consecutive pair: (2) disjoint, (3) both nonseparating, (4) not a
        bounding pair.
        """
        if not seq:
            raise ValueError("sequence must contain at least one curve")
        for curve_id in seq:
            self.curve(curve_id)
        endpoint_ok = (seq[0] == endpoints[0]) and (seq[-1] == endpoints[1])
        steps = []
        for left, right in zip(seq, seq[1:]):
            disjoint = self.geometric_known(left, right) == 0
            nonsep = []
            for curve_id in (left, right):
                flag = self.curve(curve_id).separating
                if flag is None:
                    raise UnknownCurveClass(f"curve {curve_id!r} has no recorded homology class")
                nonsep.append(not flag)
            not_bp = not self.is_bounding_pair(left, right)
            steps.append(
                SequenceStep(
                    pair=(left, right),
                    disjoint=disjoint,
                    both_nonseparating=all(nonsep),
                    not_bounding_pair=not_bp,
                )
            )
        passed = endpoint_ok and all(s.ok for s in steps)
        return SequenceReport(sequence=tuple(seq), endpoint_ok=endpoint_ok, steps=tuple(steps), passed=passed)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        curves = []
        for curve in self._curves.values():
            curves.append(
                {
                    "id": curve.id,
                    "class": list(curve.h1_class.coords) if curve.h1_class is not None else None,
                    "separating": curve.separating,
                }
            )
        entries = []
        for (a, b), (value, provenance) in sorted(self._entries.items()):
            entries.append({"pair": [a, b], "value": value, "provenance": provenance})
        return {"genus": self.space.genus, "curves": curves, "entries": entries}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "IntersectionLedger":
        ledger = cls(SymplecticSpace(int(payload["genus"])))
        for item in payload["curves"]:
            cls_coords = item.get("class")
            vec = H1Vector(tuple(cls_coords)) if cls_coords is not None else None
            ledger.register_curve(item["id"], vec)
        for item in payload["entries"]:
            a, b = item["pair"]
            ledger._store(a, b, int(item["value"]), item.get("provenance", PROV_ASSERTED))
        return ledger


@dataclass(frozen=True)
class SequenceStep:
    pair: tuple[str, str]
    disjoint: bool
    both_nonseparating: bool
    not_bounding_pair: bool

    @property
    def ok(self) -> bool:
        return self.disjoint and self.both_nonseparating and self.not_bounding_pair


@dataclass(frozen=True)
class SequenceReport:
    sequence: tuple[str, ...]
    endpoint_ok: bool
    steps: tuple[SequenceStep, ...]
    passed: bool


def base_construction(
    xi_beta: int = 6,
    xi_alpha: int = 2,
    alpha_beta: int = 0,
    eta_alpha: int = 1,
) -> IntersectionLedger:
    """The genus-2 configuration the cover certificates start from.

    Curves alpha, beta, xi, eta with classes a_2, 0, unset, b_2; base data
    i(xi, beta) = 6, i(xi, alpha) = 2, i(alpha, beta) = 0, i(eta, alpha) = 1.
    i(xi, eta) is deliberately Unknown, and [xi] is never needed.  The base
    values are parameters so perturbed runs can demonstrate mismatch reports.
    """
    space = SymplecticSpace(2)
    ledger = IntersectionLedger(space)
    ledger.register_curve("alpha", space.a(2))
    ledger.register_curve("beta", space.zero())
    ledger.register_curve("xi", None)
    ledger.register_curve("eta", space.b(2))
    ledger.set_geometric("xi", "beta", xi_beta)
    ledger.set_geometric("xi", "alpha", xi_alpha)
    ledger.set_geometric("alpha", "beta", alpha_beta)
    ledger.set_geometric("eta", "alpha", eta_alpha)
    return ledger


def derive_reference_table(ledger: Optional[IntersectionLedger] = None) -> dict[str, int]:
    """Run the standard derivation chain and return the four derived values.

    From the base data this produces lam = T_xi(beta) and the images
    phi_alpha = T_lam(alpha), phi_beta = T_lam(beta), yielding
    i(lam, beta), i(lam, alpha), i(phi_alpha, alpha), i(phi_beta, alpha).
    """
    if ledger is None:
        ledger = base_construction()
    ledger.derive_twist_image("xi", 1, "beta", new_id="lam")
    ledger.derive_twist_image("lam", 1, "alpha", new_id="phi_alpha")
    ledger.derive_twist_image("lam", 1, "beta", new_id="phi_beta")
    return {
        "i(lam,beta)": ledger.geometric_known("lam", "beta"),
        "i(lam,alpha)": ledger.geometric_known("lam", "alpha"),
        "i(phi_alpha,alpha)": ledger.geometric_known("phi_alpha", "alpha"),
        "i(phi_beta,alpha)": ledger.geometric_known("phi_beta", "alpha"),
    }
