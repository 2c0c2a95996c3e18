# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Rewrites accepted ACC coordinations into ACC_X clusters under ACCPH_X."""

import collections
import dataclasses
import logging
from typing import Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from acc_treekit.acc.detector import (
    AccInstance,
    RejectionReason,
    classify,
    find_candidates,
    flatten_conjunct,
    is_candidate,
)
from acc_treekit.constants import acc_constants, treebank_constants
from acc_treekit.errors import (
    AccLabelError,
    InvariantViolation,
    MalformedAccError,
    TransformError,
)
from acc_treekit.treebank_io import (
    Internal,
    Leaf,
    NodeLabel,
    Tree,
    TreePath,
    is_empty,
    is_verb_pos,
    label_indices,
    replace_subtree,
    strip_indices,
    subtree,
    yield_tokens,
)
from acc_treekit.utils.parallel import parallel_map

logger = logging.getLogger(__name__)

CLUSTER_PREFIX = acc_constants["cluster_prefix"]
PHRASE_PREFIX = acc_constants["phrase_prefix"]
VP = acc_constants["vp_category"]
CLAUSE = acc_constants["clause_category"]
SEPARATOR_POS = (treebank_constants["cc_pos"], treebank_constants["comma_pos"])


class TransformRecord(BaseModel):
    """Outcome of one candidate coordination during corpus transformation."""

    model_config = ConfigDict(frozen=True)

    tree_id: str
    coord_path: list[int]
    applied: bool
    accph_label: str | None = None
    cluster_labels: list[str] = []
    rejection: RejectionReason | None = None
    symmetric: bool = False
    and_or: bool = True

    @model_validator(mode="after")
    def _applied_iff_not_rejected(self) -> "TransformRecord":
        if self.applied == (self.rejection is not None):
            raise ValueError("applied must be true exactly when there is no rejection")
        if self.applied and not self.cluster_labels:
            raise ValueError("applied records need cluster labels")
        return self


def is_cluster_label(category: str) -> bool:
    return category.startswith(CLUSTER_PREFIX)


def is_phrase_label(category: str) -> bool:
    return category.startswith(PHRASE_PREFIX)


def cluster_label(sig: Sequence[str]) -> str:
    """``ACC_`` followed by the signature joined with ``-``."""
    if not sig:
        raise AccLabelError("cluster signature is empty", code="EMPTY_SIGNATURE")
    return CLUSTER_PREFIX + "-".join(sig)


def accph_label(sigs: Sequence[Sequence[str]]) -> str:
    """Coordination-level label for a set of cluster signatures.

    The head is the first of NP, PP, ADJP, SBAR found in any signature; an
    ADVP anywhere adds the ``-ADVP`` suffix.

    Raises:
        AccLabelError: No head category is present.
    """
    if not sigs or any(not sig for sig in sigs):
        raise AccLabelError("signatures must be non-empty", code="EMPTY_SIGNATURE")
    present = {category for sig in sigs for category in sig}
    head = next((c for c in acc_constants["head_priority"] if c in present), None)
    if head is None:
        raise AccLabelError(f"no head category among {sorted(present)}")
    label = PHRASE_PREFIX + head
    if acc_constants["suffix_category"] in present:
        label += "-" + acc_constants["suffix_category"]
    return label


def flatten_gap_s(tree: Tree, conjunct_path: TreePath) -> Tree:
    """Deletes empty-subject NPs and their extra S layer at a conjunct.

    Returns ``tree`` unchanged when the conjunct is already flat.

    Raises:
        FlattenError: The conjunct is a clause with an overt subject.
    """
    node = subtree(tree, conjunct_path)
    if not isinstance(node, Internal) or node.category not in (VP, CLAUSE):
        return tree
    flattened = flatten_conjunct(node)
    if flattened is node:
        return tree
    return replace_subtree(tree, conjunct_path, flattened)


def transform_instance(tree: Tree, inst: AccInstance) -> Tree:
    """Hoists the verb and non-indexed material and builds the ACCPH node.

    Raises:
        TransformError: ``inst`` was rejected.
        AccLabelError: The clusters admit no ACCPH head.
        InvariantViolation: The surface yield changed.
    """
    if inst.rejection is not None:
        raise TransformError(f"instance at {inst.coord_path} is rejected: {inst.rejection.code}")

    flattened = tree
    for conjunct in inst.conjuncts:
        flattened = flatten_gap_s(flattened, conjunct.path)
    coord = subtree(flattened, inst.coord_path)

    phrase = accph_label(inst.signatures)
    records = {c.path[-1]: c for c in inst.conjuncts}
    first_pos = inst.conjuncts[0].path[-1]
    last_pos = inst.conjuncts[-1].path[-1]

    first_node = coord.children[first_pos]
    hoisted = [first_node.children[p] for p in inst.conjuncts[0].non_indexed_positions]

    phrase_children: list[Tree] = []
    for position in range(first_pos, last_pos + 1):
        child = coord.children[position]
        record = records.get(position)
        if record is None:
            phrase_children.append(child)
            continue
        args = tuple(strip_indices(child.children[a.position]) for a in record.indexed_args)
        label = cluster_label([a.category for a in record.indexed_args])
        phrase_children.append(Internal(NodeLabel(label), args))

    new_coord = Internal(
        coord.label,
        coord.children[:first_pos]
        + tuple(hoisted)
        + (Internal(NodeLabel(phrase), tuple(phrase_children)),)
        + coord.children[last_pos + 1:],
    )
    result = replace_subtree(flattened, inst.coord_path, new_coord)
    if yield_tokens(result) != yield_tokens(tree):
        raise InvariantViolation(f"transformation at {inst.coord_path} changed the yield")
    return result


def _record(tree_id: str, inst: AccInstance, **fields) -> TransformRecord:
    return TransformRecord(
        tree_id=tree_id,
        coord_path=list(inst.coord_path),
        symmetric=inst.symmetric,
        and_or=inst.and_or,
        **fields,
    )


def transform_tree(tree: Tree, tree_id: str = "tree") -> tuple[Tree, list[TransformRecord]]:
    """Transforms every accepted candidate of one tree, innermost first.

    A candidate that only qualified through indices of a nested instance is
    no longer a candidate once that instance is rewritten; it gets no record.
    """
    records: list[TransformRecord] = []
    current = tree
    for path in find_candidates(tree):
        if not is_candidate(subtree(current, path)):
            logger.debug("%s %s: co-indexation absorbed by a nested instance", tree_id, path)
            continue
        inst = classify(current, path)
        if inst.rejection is not None:
            records.append(_record(tree_id, inst, applied=False, rejection=inst.rejection))
            continue
        current = transform_instance(current, inst)
        records.append(
            _record(
                tree_id,
                inst,
                applied=True,
                accph_label=accph_label(inst.signatures),
                cluster_labels=[cluster_label(sig) for sig in inst.signatures],
            )
        )
    return current, records


def _transform_item(item: tuple[Tree, str]) -> tuple[Tree, list[TransformRecord]]:
    return transform_tree(*item)


def transform_corpus(
    trees: Sequence[Tree], source: str = "corpus", jobs: int = 1
) -> tuple[list[Tree], list[TransformRecord]]:
    """Transforms a corpus; tree ids are ``<source>#<position>``.

    Output order equals input order for any ``jobs``.
    """
    items = [(tree, f"{source}#{i}") for i, tree in enumerate(trees)]
    results = parallel_map(_transform_item, items, jobs)
    out_trees = [t for t, _ in results]
    records = [r for _, rs in results for r in rs]
    logger.info(
        "transformed %d trees: %d/%d candidates applied",
        len(out_trees),
        sum(r.applied for r in records),
        len(records),
    )
    return out_trees, records


# ---------------------------------------------------------------------------
# Inverse mapping


class _IndexAllocator:
    """Hands out the lowest index numbers not used elsewhere in a tree."""

    def __init__(self, used: set[int]):
        self._used = set(used)

    def take(self, count: int) -> list[int]:
        numbers = []
        candidate = 1
        while len(numbers) < count:
            if candidate not in self._used:
                numbers.append(candidate)
                self._used.add(candidate)
            candidate += 1
        return numbers


def _check_phrase(node: Internal) -> list[Internal]:
    clusters = [c for c in node.children if isinstance(c, Internal)]
    for child in node.children:
        if isinstance(child, Leaf):
            if child.pos not in SEPARATOR_POS:
                raise MalformedAccError(f"{node.label} has a {child.pos} leaf")
        elif not is_cluster_label(child.category):
            raise MalformedAccError(f"{node.label} has a non-cluster child {child.label}")
    if len(clusters) < 2 or isinstance(node.children[0], Leaf) or isinstance(node.children[-1], Leaf):
        raise MalformedAccError(f"{node.label} needs at least two clusters at its edges")
    sigs = []
    for cluster in clusters:
        if any(isinstance(arg, Leaf) for arg in cluster.children):
            raise MalformedAccError(f"{cluster.label} has a leaf argument")
        sig = [arg.category for arg in cluster.children]
        if cluster_label(sig) != cluster.category:
            raise MalformedAccError(f"{cluster.label} does not match its children {sig}")
        sigs.append(sig)
    try:
        expected = accph_label(sigs)
    except AccLabelError as e:
        raise MalformedAccError(str(e)) from e
    if expected != node.category:
        raise MalformedAccError(f"{node.label} should be {expected}")
    if len({len(sig) for sig in sigs}) > 1:
        raise MalformedAccError(f"clusters of {node.label} differ in arity")
    return clusters


def _aligned_numbers(first: list[str], cluster: list[str], numbers: list[int]) -> list[int]:
    if sorted(first) != sorted(cluster):
        return list(numbers)
    queues: dict[str, collections.deque[int]] = collections.defaultdict(collections.deque)
    for category, number in zip(first, numbers):
        queues[category].append(number)
    return [queues[category].popleft() for category in cluster]


def _with_index(node: Internal, ref: int | None = None, gap: int | None = None) -> Internal:
    return Internal(dataclasses.replace(node.label, ref_index=ref, gap_index=gap), node.children)


def _expand_phrase(
    phrase: Internal, hoisted: list[Tree], allocator: _IndexAllocator
) -> list[Tree]:
    clusters = _check_phrase(phrase)
    first_sig = [arg.category for arg in clusters[0].children]
    numbers = allocator.take(len(first_sig))
    expanded: list[Tree] = []
    for child in phrase.children:
        if isinstance(child, Leaf):
            expanded.append(child)
        elif child is clusters[0]:
            args = [_with_index(a, ref=n) for a, n in zip(child.children, numbers)]
            expanded.append(Internal(NodeLabel(VP), tuple(hoisted + args)))
        else:
            sig = [arg.category for arg in child.children]
            aligned = _aligned_numbers(first_sig, sig, numbers)
            args = [_with_index(a, gap=n) for a, n in zip(child.children, aligned)]
            expanded.append(Internal(NodeLabel(VP), tuple(args)))
    return expanded


def _hoist_start(out: list[Tree], barrier: int) -> int:
    """First position of the material hoisted out of the first conjunct.

    The first conjunct opened with its verb, so hoisting starts at the last
    verb leaf before the phrase; verbs further left (auxiliaries) stay with
    the coordination. Empty elements directly before that verb move with it.
    """
    verbs = [
        i
        for i in range(barrier, len(out))
        if isinstance(out[i], Leaf) and is_verb_pos(out[i].pos)
    ]
    if not verbs:
        return barrier
    start = verbs[-1]
    while start > barrier and is_empty(out[start - 1]):
        start -= 1
    return start


def _detransform(node: Tree, allocator: _IndexAllocator) -> Tree:
    if isinstance(node, Leaf):
        return node
    children = [_detransform(child, allocator) for child in node.children]
    if is_phrase_label(node.category):
        return Internal(node.label, tuple(children))

    out: list[Tree] = []
    barrier = 0
    for child in children:
        if isinstance(child, Internal) and is_cluster_label(child.category):
            raise MalformedAccError(f"{child.label} outside an ACC phrase under {node.label}")
        if not (isinstance(child, Internal) and is_phrase_label(child.category)):
            out.append(child)
            continue
        start = _hoist_start(out, barrier)
        hoisted = out[start:]
        del out[start:]
        out.extend(_expand_phrase(child, hoisted, allocator))
        barrier = len(out)
    return Internal(node.label, tuple(out))


def detransform(tree: Tree) -> Tree:
    """Rewrites every ACCPH node back into PTB-style conjoined VPs.

    The first cluster's arguments receive fresh ``-N`` indices (1..k when the
    tree uses no other indices); later clusters receive ``=N`` indices aligned
    to the first cluster by category.

    Raises:
        MalformedAccError: An ACC/ACCPH node does not match its children or an
            ACCPH node is the root.
    """
    if isinstance(tree, Internal) and is_phrase_label(tree.category):
        raise MalformedAccError("an ACC phrase cannot be the root")
    return _detransform(tree, _IndexAllocator(label_indices(tree)))
