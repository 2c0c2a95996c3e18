# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Corpus-level counts of ACC candidates, rejections and new labels."""

import collections
import logging
from typing import Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator
from tabulate import tabulate

from acc_treekit.acc.transformer import TransformRecord, transform_corpus
from acc_treekit.treebank_io import Tree

logger = logging.getLogger(__name__)


class CensusReport(BaseModel):
    total_acc_candidates: int = 0
    accepted: int = 0
    rejected: int = 0
    rejected_by_reason: dict[str, int] = Field(default_factory=dict)
    and_or_candidates: int = 0
    pattern_conformant_fraction: float = Field(default=0.0, ge=0.0, le=1.0)
    symmetric_count: int = 0
    symmetric_fraction: float = Field(default=0.0, ge=0.0, le=1.0)
    acc_label_histogram: dict[str, int] = Field(default_factory=dict)
    acc_label_fractions: dict[str, float] = Field(default_factory=dict)
    accph_label_histogram: dict[str, int] = Field(default_factory=dict)
    modified_tree_count: int = 0
    candidate_tree_count: int = 0

    @model_validator(mode="after")
    def _counts_add_up(self) -> "CensusReport":
        if self.accepted + self.rejected != self.total_acc_candidates:
            raise ValueError("accepted + rejected must equal total_acc_candidates")
        if sum(self.rejected_by_reason.values()) != self.rejected:
            raise ValueError("rejection histogram does not sum to rejected")
        return self


def _ratio(numerator: int, denominator: int) -> float:
    return float(numerator / denominator) if denominator else 0.0


def _fractions(histogram: dict[str, int]) -> dict[str, float]:
    if not histogram:
        return {}
    counts = np.fromiter(histogram.values(), dtype=float)
    return dict(zip(histogram, (counts / counts.sum()).tolist()))


def _sorted_counts(counter: collections.Counter) -> dict[str, int]:
    return {key: count for key, count in sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))}


def summarize(records: Sequence[TransformRecord]) -> CensusReport:
    """Aggregates the per-candidate records produced by transform_corpus."""
    applied = [r for r in records if r.applied]
    reasons = collections.Counter(r.rejection.code.value for r in records if not r.applied)
    and_or = sum(r.and_or for r in records)
    clusters = collections.Counter(label for r in applied for label in r.cluster_labels)
    phrases = collections.Counter(r.accph_label for r in applied)
    symmetric = sum(r.symmetric for r in applied)

    return CensusReport(
        total_acc_candidates=len(records),
        accepted=len(applied),
        rejected=len(records) - len(applied),
        rejected_by_reason=_sorted_counts(reasons),
        and_or_candidates=and_or,
        pattern_conformant_fraction=_ratio(len(applied), and_or),
        symmetric_count=symmetric,
        symmetric_fraction=_ratio(symmetric, len(applied)),
        acc_label_histogram=_sorted_counts(clusters),
        acc_label_fractions=_fractions(_sorted_counts(clusters)),
        accph_label_histogram=_sorted_counts(phrases),
        modified_tree_count=len({r.tree_id for r in applied}),
        candidate_tree_count=len({r.tree_id for r in records}),
    )


def census(trees: Sequence[Tree], jobs: int = 1) -> CensusReport:
    """Runs detection and transformation over ``trees`` and counts the outcomes.

    An empty corpus yields an all-zero report.
    """
    _, records = transform_corpus(trees, jobs=jobs)
    report = summarize(records)
    logger.info(
        "census: %d candidates in %d trees, %d accepted",
        report.total_acc_candidates,
        report.candidate_tree_count,
        report.accepted,
    )
    return report


def format_table(report: CensusReport) -> str:
    """Plain-text rendering used by ``stats --format table``."""
    summary = [
        ("candidates", report.total_acc_candidates),
        ("candidate trees", report.candidate_tree_count),
        ("and/or candidates", report.and_or_candidates),
        ("accepted", report.accepted),
        ("rejected", report.rejected),
        ("pattern conformant", f"{report.pattern_conformant_fraction:.1%}"),
        ("symmetric", f"{report.symmetric_count} ({report.symmetric_fraction:.1%})"),
        ("modified trees", report.modified_tree_count),
    ]
    blocks = [tabulate(summary, headers=["count", "value"])]
    if report.rejected_by_reason:
        blocks.append(
            tabulate(report.rejected_by_reason.items(), headers=["rejection", "count"])
        )
    if report.accph_label_histogram:
        blocks.append(
            tabulate(report.accph_label_histogram.items(), headers=["ACCPH label", "count"])
        )
    if report.acc_label_histogram:
        rows = [
            (label, count, f"{report.acc_label_fractions[label]:.1%}")
            for label, count in report.acc_label_histogram.items()
        ]
        blocks.append(tabulate(rows, headers=["ACC label", "count", "share"]))
    return "\n\n".join(blocks)
