"""Evaluation arithmetic: precision@K, recall against a gold list,
accuracy and Cohen's kappa for two annotators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import lingo


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class AgreementMatrix:
    """2x2 counts: first annotator's label, then the second's."""

    yes_yes: int
    yes_no: int
    no_yes: int
    no_no: int

    def __post_init__(self):
        if min(self.yes_yes, self.yes_no, self.no_yes, self.no_no) < 0:
            raise MetricError("agreement counts must be non-negative")
        if self.total < 1:
            raise MetricError("agreement matrix is empty")

    @property
    def total(self) -> int:
        return self.yes_yes + self.yes_no + self.no_yes + self.no_no

    def transpose(self) -> "AgreementMatrix":
        return AgreementMatrix(self.yes_yes, self.no_yes, self.yes_no, self.no_no)

    @classmethod
    def from_labels(cls, first: Sequence[bool], second: Sequence[bool]) -> "AgreementMatrix":
        if len(first) != len(second):
            raise MetricError("annotations differ in length")
        cells = [0, 0, 0, 0]
        for a, b in zip(first, second):
            cells[(0 if a else 2) + (0 if b else 1)] += 1
        return cls(*cells)


def precision_at_k(judgments: Sequence[int | bool], k: int) -> float:
    """Fraction of positive judgments among the first ``k`` ranked items."""
    if k <= 0:
        raise MetricError("k must be positive")
    if k > len(judgments):
        raise MetricError(f"k={k} exceeds the {len(judgments)} judged items")
    return sum(1 for j in judgments[:k] if j) / k


def _stemmed(phrase: str) -> tuple[str, ...]:
    return tuple(lingo.stem(w) for w in lingo.words(lingo.normalize_ocr(phrase)))


def exact_match(gold: str, extracted: str) -> bool:
    return gold == extracted


def stemmed_match(gold: str, extracted: str) -> bool:
    return _stemmed(gold) == _stemmed(extracted)


def containment_match(gold: str, extracted: str) -> bool:
    g, e = _stemmed(gold), _stemmed(extracted)
    return lingo.contains_phrase(g, e) or lingo.contains_phrase(e, g)


MATCHERS: dict[str, Callable[[str, str], bool]] = {
    "exact": exact_match,
    "stemmed": stemmed_match,
    "containment": containment_match,
}


def recall_vs_gold(
    gold: Iterable[str],
    extracted: Iterable[str],
    matcher: Callable[[str, str], bool] | str = "stemmed",
) -> float:
    gold = list(dict.fromkeys(gold))
    if not gold:
        raise MetricError("gold set is empty")
    match = MATCHERS[matcher] if isinstance(matcher, str) else matcher
    extracted = list(extracted)
    hit = sum(1 for g in gold if any(match(g, e) for e in extracted))
    return hit / len(gold)


def accuracy(correct: int, total: int) -> float:
    if total < 1:
        raise MetricError("total must be at least 1")
    if not 0 <= correct <= total:
        raise MetricError("correct must lie in [0, total]")
    return correct / total


def cohen_kappa(matrix: AgreementMatrix | Sequence[int]) -> float:
    """(p_o - p_e) / (1 - p_e) with chance agreement from the marginals."""
    if not isinstance(matrix, AgreementMatrix):
        matrix = AgreementMatrix(*matrix)
    n = matrix.total
    p_o = (matrix.yes_yes + matrix.no_no) / n
    first_yes = (matrix.yes_yes + matrix.yes_no) / n
    second_yes = (matrix.yes_yes + matrix.no_yes) / n
    p_e = first_yes * second_yes + (1 - first_yes) * (1 - second_yes)
    if p_e == 1.0:
        if p_o == 1.0:
            return 1.0
        raise MetricError("kappa undefined: degenerate marginals with disagreement")
    return (p_o - p_e) / (1 - p_e)
