"""Normal-generation verdicts from a profile of certified facts.

The engine is a combiner, not a classifier: pseudo-Anosov certificates are
checked objects, while finite-order and partial pseudo-Anosov facts are
asserted inputs and flagged as such in the output.  Obstructions are tried
before positive rules, so inconsistent profiles err toward refusal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import jsonio
from .cover import CoverCertificate
from .penner import StretchCertificate
from .symplectic import (
    Matrix,
    SymplecticSpace,
    identity_matrix,
    is_level_trivial,
    transvection_matrix,
)


class InconsistentProfile(ValueError):
    """Profile facts contradict each other; no verdict is issued."""


NORMAL_GENERATOR = "NormalGenerator"
NOT_NORMAL_GENERATOR = "NotNormalGenerator"
CONTAINS_COMMUTATOR = "ContainsCommutatorSubgroup"
INCONCLUSIVE = "Inconclusive"

# the positive-rule cutoff for Teichmueller translation length; the slack
# absorbs the 15-digit decimal grid certificates are stored on, and is far
# below any gap the rules need to resolve
LENGTH_THRESHOLD = 0.5 * math.log(2.0)
THRESHOLD_SLACK = 1e-12


@dataclass(frozen=True)
class PartlyPA:
    """Asserted invariant-subsurface data: the class preserves a subsurface
    of the stated genus and restricts to it as a pseudo-Anosov with the
    stated translation length."""

    subsurface_genus: int
    invariant: bool
    restriction_pa: bool
    l_teich: float

    def to_json_dict(self) -> dict:
        return {
            "subsurface_genus": self.subsurface_genus,
            "invariant": self.invariant,
            "restriction_pa": self.restriction_pa,
            "l_teich": self.l_teich,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "PartlyPA":
        return cls(
            subsurface_genus=int(payload["subsurface_genus"]),
            invariant=bool(payload["invariant"]),
            restriction_pa=bool(payload["restriction_pa"]),
            l_teich=jsonio.parse_real(payload["l_teich"]),
        )


@dataclass(frozen=True)
class FiniteOrder:
    order: int
    is_hyperelliptic_involution: bool

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "is_hyperelliptic_involution": self.is_hyperelliptic_involution,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "FiniteOrder":
        return cls(
            order=int(payload["order"]),
            is_hyperelliptic_involution=bool(payload["is_hyperelliptic_involution"]),
        )


@dataclass(frozen=True)
class MappingClassProfile:
    """Certified and asserted facts about one mapping class.

    homology_matrix, when present, is the verified action on first homology;
    the torelli flag covers the case where only the Torelli property itself
    has been asserted.  level_trivial_moduli lists moduli m for which the
    class is congruent to the identity mod m.
    """

    genus: int
    closed: bool
    punctures: int = 0
    pa_certificate: Optional[StretchCertificate] = None
    partly_pa: Optional[PartlyPA] = None
    finite_order: Optional[FiniteOrder] = None
    homology_matrix: Optional[Matrix] = None
    torelli: Optional[bool] = None
    level_trivial_moduli: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.genus < 2:
            raise ValueError(f"profile genus must be at least 2, got {self.genus}")
        if self.punctures < 0:
            raise ValueError(f"puncture count must be nonnegative, got {self.punctures}")
        if self.closed != (self.punctures == 0):
            raise InconsistentProfile(
                "closed flag and puncture count disagree; surfaces with boundary "
                "are out of scope"
            )
        if self.pa_certificate is not None and self.finite_order is not None:
            raise InconsistentProfile(
                "a class cannot carry both a stretch certificate and a finite-order fact"
            )
        if self.homology_matrix is not None:
            d = 2 * self.genus
            if len(self.homology_matrix) != d or any(
                len(row) != d for row in self.homology_matrix
            ):
                raise ValueError(f"homology matrix must be {d}x{d} for genus {self.genus}")
            identity = identity_matrix(d)
            matrix_is_identity = self.homology_matrix == identity
            if self.torelli is True and not matrix_is_identity:
                raise InconsistentProfile("Torelli flag set but homology matrix is not the identity")
            if self.torelli is False and matrix_is_identity:
                raise InconsistentProfile("Torelli flag denied but homology matrix is the identity")
            for m in self.level_trivial_moduli:
                if m >= 2 and not is_level_trivial(self.homology_matrix, m):
                    raise InconsistentProfile(
                        f"homology matrix is not congruent to the identity mod {m}"
                    )

    # -- torelli status ------------------------------------------------------

    def torelli_status(self) -> tuple[bool, bool]:
        """(is_torelli, verified): matrix evidence when present, else the flag."""
        if self.homology_matrix is not None:
            return self.homology_matrix == identity_matrix(2 * self.genus), True
        if self.torelli is not None:
            return self.torelli, False
        return False, False

    # -- JSON ------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        payload: dict = {
            "genus": self.genus,
            "closed": self.closed,
            "punctures": self.punctures,
            "level_trivial_moduli": list(self.level_trivial_moduli),
        }
        if self.pa_certificate is not None:
            payload["pa_certificate"] = self.pa_certificate.to_json_dict()
        if self.partly_pa is not None:
            payload["partly_pa"] = self.partly_pa.to_json_dict()
        if self.finite_order is not None:
            payload["finite_order"] = self.finite_order.to_json_dict()
        if self.homology_matrix is not None:
            payload["homology_matrix"] = [list(row) for row in self.homology_matrix]
        if self.torelli is not None:
            payload["torelli"] = self.torelli
        return payload

    @classmethod
    def from_json_dict(cls, payload: dict) -> "MappingClassProfile":
        matrix = None
        if "homology_matrix" in payload:
            matrix = tuple(tuple(int(v) for v in row) for row in payload["homology_matrix"])
        return cls(
            genus=int(payload["genus"]),
            closed=bool(payload["closed"]),
            punctures=int(payload.get("punctures", 0)),
            pa_certificate=(
                StretchCertificate.from_json_dict(payload["pa_certificate"])
                if "pa_certificate" in payload
                else None
            ),
            partly_pa=(
                PartlyPA.from_json_dict(payload["partly_pa"])
                if "partly_pa" in payload
                else None
            ),
            finite_order=(
                FiniteOrder.from_json_dict(payload["finite_order"])
                if "finite_order" in payload
                else None
            ),
            homology_matrix=matrix,
            torelli=payload.get("torelli"),
            level_trivial_moduli=tuple(int(m) for m in payload.get("level_trivial_moduli", ())),
        )


@dataclass(frozen=True)
class Verdict:
    decision: str
    rule: str
    anchors: tuple[str, ...]
    inputs_used: tuple[str, ...]
    asserted_inputs: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.decision != INCONCLUSIVE and not self.rule:
            raise ValueError("a decisive verdict must cite the rule that produced it")

    def to_json_dict(self) -> dict:
        return {
            "decision": self.decision,
            "rule": self.rule,
            "anchors": list(self.anchors),
            "inputs_used": list(self.inputs_used),
            "asserted_inputs": list(self.asserted_inputs),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "Verdict":
        return cls(
            decision=payload["decision"],
            rule=payload["rule"],
            anchors=tuple(payload["anchors"]),
            inputs_used=tuple(payload["inputs_used"]),
            asserted_inputs=tuple(payload.get("asserted_inputs", ())),
        )


def _below_threshold(l_teich: float) -> bool:
    # non-strict boundary: equality at half log 2 is accepted
    return l_teich <= LENGTH_THRESHOLD + THRESHOLD_SLACK


def _level_witness_verified(m: int) -> bool:
    """The a_1 twist is not trivial mod m, so the level-m kernel is proper.

    The transvection along a_1 is the identity outside the (a_1, b_1) block
    in every genus, so checking the genus-one block decides the question.
    """
    space = SymplecticSpace(1)
    block = transvection_matrix(space.a(1), 1, space)
    return not is_level_trivial(block, m)


def apply_rules(profile: MappingClassProfile, allow_weak_partly_pa: bool = False) -> Verdict:
    """First matching rule in fixed priority order decides.

    Obstructions (Torelli membership, level-kernel membership) come first;
    then the translation-length rule, the invariant-subsurface rule, and the
    finite-order rule.  Anything else is Inconclusive.
    """
    asserted: list[str] = []
    if profile.partly_pa is not None:
        asserted.append("partly_pa")
    if profile.finite_order is not None:
        asserted.append("finite_order")
    is_torelli, torelli_verified = profile.torelli_status()
    if profile.torelli is not None and profile.homology_matrix is None:
        asserted.append("torelli")
    if profile.level_trivial_moduli and profile.homology_matrix is None:
        asserted.append("level_trivial_moduli")
    asserted_inputs = tuple(asserted)

    # rule 1: trivial homology action places the class in a proper normal subgroup
    if is_torelli and profile.genus >= 2:
        return Verdict(
            decision=NOT_NORMAL_GENERATOR,
            rule="OBS-Torelli: the class acts trivially on homology, so it lies in "
            "a nontrivial proper normal subgroup and cannot normally generate",
            anchors=("obstruction:torelli-proper-subgroup",),
            inputs_used=(
                ("homology_matrix",) if torelli_verified else ("torelli",)
            ),
            asserted_inputs=asserted_inputs,
        )

    # rule 2: membership in a level-m kernel, witnessed proper
    for m in sorted(set(profile.level_trivial_moduli)):
        if m < 2:
            continue
        if _level_witness_verified(m):
            return Verdict(
                decision=NOT_NORMAL_GENERATOR,
                rule=f"OBS-level: the class is trivial mod {m}, so it lies in the "
                f"level-{m} kernel, which is proper because the a_1 twist is not "
                f"trivial mod {m}",
                anchors=("obstruction:level-kernel-proper-subgroup",),
                inputs_used=("level_trivial_moduli",),
                asserted_inputs=asserted_inputs,
            )

    # rule 3: short pseudo-Anosov
    if profile.pa_certificate is not None and _below_threshold(profile.pa_certificate.l_teich):
        if profile.closed and profile.genus >= 3:
            return Verdict(
                decision=NORMAL_GENERATOR,
                rule="LM-pA: a pseudo-Anosov with Teichmueller translation length "
                "at most half log 2 on a closed surface of genus at least 3 "
                "normally generates",
                anchors=("rule:short-pseudo-anosov-generates",),
                inputs_used=("pa_certificate",),
                asserted_inputs=asserted_inputs,
            )
        return Verdict(
            decision=CONTAINS_COMMUTATOR,
            rule="LM-pA: below genus 3 or with punctures, the normal closure of "
            "such a short pseudo-Anosov still contains the commutator subgroup",
            anchors=("rule:short-pseudo-anosov-commutator",),
            inputs_used=("pa_certificate",),
            asserted_inputs=asserted_inputs,
        )

    # rule 4: invariant subsurface with short pseudo-Anosov restriction
    bundle = profile.partly_pa
    if bundle is not None and bundle.invariant and bundle.restriction_pa and profile.closed:
        if _below_threshold(bundle.l_teich):
            if bundle.subsurface_genus >= 3:
                return Verdict(
                    decision=NORMAL_GENERATOR,
                    rule="BKW: an invariant subsurface of genus at least 3 whose "
                    "restriction is a short pseudo-Anosov forces normal generation",
                    anchors=("rule:invariant-subsurface-generates",),
                    inputs_used=("partly_pa",),
                    asserted_inputs=asserted_inputs,
                )
            if allow_weak_partly_pa and bundle.subsurface_genus >= 1 and profile.genus >= 3:
                return Verdict(
                    decision=NORMAL_GENERATOR,
                    rule="BKW-weak: opt-in variant accepting any invariant subsurface "
                    "of positive genus inside an ambient surface of genus at least 3",
                    anchors=("rule:invariant-subsurface-generates-weak",),
                    inputs_used=("partly_pa",),
                    asserted_inputs=asserted_inputs,
                )

    # rule 5: finite order, excluding hyperelliptic involutions
    if (
        profile.finite_order is not None
        and not profile.finite_order.is_hyperelliptic_involution
        and profile.genus >= 3
    ):
        return Verdict(
            decision=NORMAL_GENERATOR,
            rule="LM-finite: a finite-order class that is not a hyperelliptic "
            "involution on genus at least 3 normally generates",
            anchors=("rule:finite-order-generates",),
            inputs_used=("finite_order",),
            asserted_inputs=asserted_inputs,
        )

    return Verdict(
        decision=INCONCLUSIVE,
        rule="",
        anchors=(),
        inputs_used=(),
        asserted_inputs=asserted_inputs,
    )


def profile_for_cover(certificate: CoverCertificate) -> MappingClassProfile:
    """Profile of the lifted construction word on its cover surface.

    The certificate's facts give level-n triviality and a nonzero witness
    against the Torelli property; pseudo-Anosov shape is not needed because
    the level obstruction already decides the verdict.
    """
    if all(x == 0 for x in certificate.witness):
        raise InconsistentProfile("certificate carries a zero witness")
    return MappingClassProfile(
        genus=certificate.cover_genus,
        closed=True,
        punctures=0,
        torelli=False,
        level_trivial_moduli=(certificate.degree,),
    )
