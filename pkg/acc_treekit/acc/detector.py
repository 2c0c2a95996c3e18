# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Detection and classification of argument cluster coordinations."""

import enum
import logging
from dataclasses import dataclass
from typing import Any, NamedTuple

from acc_treekit.constants import acc_constants, treebank_constants
from acc_treekit.errors import FlattenError, NotACandidateError
from acc_treekit.treebank_io import (
    Internal,
    Leaf,
    NodeLabel,
    Tree,
    TreePath,
    is_empty,
    is_verb_pos,
    iter_nodes,
    iter_postorder,
    leaves,
    subtree,
)

logger = logging.getLogger(__name__)
diagnostics = logging.getLogger("acc_treekit.diagnostics")

VP = acc_constants["vp_category"]
CLAUSE = acc_constants["clause_category"]
SUBJECT = acc_constants["subject_category"]
CC_POS = treebank_constants["cc_pos"]
COMMA_POS = treebank_constants["comma_pos"]


class RejectionCode(enum.StrEnum):
    """Why a candidate coordination is left untransformed.

    VERB_BETWEEN_ARGS: the first conjunct's verb sits between indexed arguments.
    NON_DIRECT_INDEXED_ARG: an indexed argument is nested below its conjunct.
    ARG_COUNT_MISMATCH: conjuncts disagree on their indexed arguments.
    ANNOTATION_ERROR: the tree is inconsistent, for instance stray material
        between conjuncts or clusters no category can head.
    NONINDEXED_AFTER_INDEXED: hoisting would reorder the surface string.
    UNSUPPORTED_CONJUNCTION: joined by a conjunction other than and/or.
    """

    VERB_BETWEEN_ARGS = "VERB_BETWEEN_ARGS"
    NON_DIRECT_INDEXED_ARG = "NON_DIRECT_INDEXED_ARG"
    ARG_COUNT_MISMATCH = "ARG_COUNT_MISMATCH"
    ANNOTATION_ERROR = "ANNOTATION_ERROR"
    NONINDEXED_AFTER_INDEXED = "NONINDEXED_AFTER_INDEXED"
    UNSUPPORTED_CONJUNCTION = "UNSUPPORTED_CONJUNCTION"


@dataclass(frozen=True)
class RejectionReason:
    code: RejectionCode
    detail: str = ""


class IndexedArg(NamedTuple):
    position: int
    category: str
    index: int


@dataclass(frozen=True)
class ConjunctRecord:
    """Inventory of one conjunct's children after gap-S flattening."""

    path: TreePath
    indexed_args: tuple[IndexedArg, ...]
    non_indexed_positions: tuple[int, ...]
    has_verb: bool


@dataclass(frozen=True)
class AccInstance:
    coord_path: TreePath
    conjuncts: tuple[ConjunctRecord, ...]
    conjunction_positions: tuple[int, ...]
    symmetric: bool
    rejection: RejectionReason | None = None
    diagnostics: tuple[str, ...] = ()
    conjunctions: tuple[str, ...] = ()

    @property
    def accepted(self) -> bool:
        return self.rejection is None

    @property
    def and_or(self) -> bool:
        """Every conjunction word is and/or; comma-only lists count too."""
        return all(word in acc_constants["conjunction_tokens"] for word in self.conjunctions)

    @property
    def signatures(self) -> list[list[str]]:
        return [[arg.category for arg in c.indexed_args] for c in self.conjuncts]

    def to_record(self, tree_id: str) -> dict[str, Any]:
        """JSON-ready record used by the ``detect`` subcommand."""
        return {
            "tree_id": tree_id,
            "coord_path": list(self.coord_path),
            "accepted": self.accepted,
            "rejection": self.rejection.code.value if self.rejection else None,
            "detail": self.rejection.detail if self.rejection else None,
            "signatures": self.signatures,
            "symmetric": self.symmetric,
            "conjunctions": list(self.conjunctions),
        }


@dataclass(frozen=True)
class _Layout:
    conjuncts: tuple[int, ...]
    separators: tuple[int, ...]
    strays: tuple[int, ...]


# ---------------------------------------------------------------------------
# Conjunct shapes and gap-S flattening


def _subject_position(node: Internal) -> int | None:
    nps = [
        i
        for i, child in enumerate(node.children)
        if isinstance(child, Internal) and child.category == SUBJECT
    ]
    for i in nps:
        if treebank_constants["subject_tag"] in node.children[i].label.function_tags:
            return i
    return nps[0] if nps else None


def _has_empty_subject(node: Internal) -> bool:
    position = _subject_position(node)
    return position is not None and is_empty(node.children[position])


def is_conjunct_shaped(node: Tree) -> bool:
    """VP, or a clause whose subject is an empty element."""
    if not isinstance(node, Internal) or is_empty(node):
        return False
    if node.category == VP:
        return True
    return node.category == CLAUSE and _has_empty_subject(node)


def _is_gap_clause(node: Tree) -> bool:
    """Unindexed S layer hosting an empty subject above an indexed argument."""
    if not isinstance(node, Internal) or node.category != CLAUSE:
        return False
    if node.label.index is not None or not _has_empty_subject(node):
        return False
    subject = _subject_position(node)
    return any(
        isinstance(child, Internal) and child.label.index is not None
        for i, child in enumerate(node.children)
        if i != subject
    )


def _overt_children(node: Internal, skip: int | None) -> list[Tree]:
    return [c for i, c in enumerate(node.children) if i != skip and not is_empty(c)]


def flatten_conjunct(node: Internal) -> Internal:
    """Removes empty-subject clause layers from a conjunct.

    A clause conjunct loses its empty subject and becomes a VP over its
    remaining material; inside the conjunct, every gap clause is spliced into
    its parent. Returns ``node`` itself when nothing changes.

    Raises:
        FlattenError: ``node`` is a clause with an overt (or missing) subject.
    """
    if node.category == CLAUSE:
        subject = _subject_position(node)
        if subject is None or not is_empty(node.children[subject]):
            raise FlattenError(f"clause {node.label} has an overt subject")
        rest = _overt_children(node, subject)
        if not rest:
            raise FlattenError(f"clause {node.label} has no overt material")
        if len(rest) == 1 and isinstance(rest[0], Internal) and rest[0].category == VP:
            node = rest[0]
        else:
            node = Internal(NodeLabel(VP), tuple(rest))

    children: list[Tree] = []
    changed = False
    for child in node.children:
        if _is_gap_clause(child):
            children.extend(_overt_children(child, _subject_position(child)))
            changed = True
        else:
            children.append(child)
    return Internal(node.label, tuple(children)) if changed else node


# ---------------------------------------------------------------------------
# Candidates


def _is_separator(node: Tree) -> bool:
    return isinstance(node, Leaf) and node.pos in (CC_POS, COMMA_POS)


def _descendant_indices(node: Tree) -> tuple[set[int], set[int]]:
    """(ref indices, gap indices) on labels strictly below ``node``."""
    refs: set[int] = set()
    gaps: set[int] = set()
    for path, descendant in iter_nodes(node):
        if path and isinstance(descendant, Internal):
            if descendant.label.ref_index is not None:
                refs.add(descendant.label.ref_index)
            if descendant.label.gap_index is not None:
                gaps.add(descendant.label.gap_index)
    return refs, gaps


def _linked_indices(first: Tree, later: list[Tree]) -> set[int]:
    first_refs, _ = _descendant_indices(first)
    linked: set[int] = set()
    for node in later:
        refs, gaps = _descendant_indices(node)
        linked |= (refs | gaps) & first_refs
    return linked


def _layout(node: Tree) -> _Layout | None:
    if not isinstance(node, Internal) or node.category != VP:
        return None
    conjuncts = [i for i, child in enumerate(node.children) if is_conjunct_shaped(child)]
    if len(conjuncts) < 2:
        return None
    between = range(conjuncts[0] + 1, conjuncts[-1])
    separators = [i for i in between if _is_separator(node.children[i])]
    if not separators:
        return None
    first, *later = (node.children[i] for i in conjuncts)
    if not _linked_indices(first, later):
        return None
    strays = [i for i in between if i not in conjuncts and i not in separators]
    return _Layout(tuple(conjuncts), tuple(separators), tuple(strays))


def is_candidate(node: Tree) -> bool:
    return _layout(node) is not None


def find_candidates(tree: Tree) -> list[TreePath]:
    """Paths of coordination VPs that look like ACC, innermost first."""
    return [path for path, node in iter_postorder(tree) if is_candidate(node)]


# ---------------------------------------------------------------------------
# Classification


def _conjunct_record(
    path: TreePath, node: Internal, first: bool, notes: list[str]
) -> ConjunctRecord:
    indexed: list[IndexedArg] = []
    non_indexed: list[int] = []
    for i, child in enumerate(node.children):
        index = None
        if isinstance(child, Internal):
            index = child.label.ref_index if first else child.label.index
            if not first and child.label.gap_index is None and index is not None:
                note = f"conjunct at {path} uses -{index} where ={index} is expected"
                diagnostics.warning(note)
                notes.append(note)
        if index is None:
            non_indexed.append(i)
        else:
            indexed.append(IndexedArg(i, child.category, index))
    has_verb = any(isinstance(c, Leaf) and is_verb_pos(c.pos) for c in node.children)
    return ConjunctRecord(path, tuple(indexed), tuple(non_indexed), has_verb)


def _verb_between_args(node: Internal, record: ConjunctRecord) -> bool:
    if len(record.indexed_args) < 2:
        return False
    low = record.indexed_args[0].position
    high = record.indexed_args[-1].position
    for position in record.non_indexed_positions:
        if low < position < high:
            if any(is_verb_pos(leaf.pos) for leaf in leaves(node.children[position])):
                return True
    return False


def _describe(node: Tree) -> str:
    return node.pos if isinstance(node, Leaf) else str(node.label)


def _reject(code: RejectionCode, detail: str) -> RejectionReason:
    return RejectionReason(code, detail)


def _check(
    coord: Internal,
    layout: _Layout,
    nodes: list[Internal],
    records: list[ConjunctRecord],
) -> RejectionReason | None:
    for position in layout.separators:
        leaf = coord.children[position]
        if leaf.pos == CC_POS and leaf.token.lower() not in acc_constants["conjunction_tokens"]:
            return _reject(
                RejectionCode.UNSUPPORTED_CONJUNCTION, f"conjunction {leaf.token!r}"
            )
    if layout.strays:
        labels = ", ".join(_describe(coord.children[i]) for i in layout.strays)
        return _reject(
            RejectionCode.ANNOTATION_ERROR, f"non-separator material between conjuncts: {labels}"
        )

    first_node, first = nodes[0], records[0]
    overt = [leaf for leaf in leaves(first_node) if not leaf.is_empty]
    if not is_verb_pos(overt[0].pos):
        if _verb_between_args(first_node, first):
            return _reject(RejectionCode.VERB_BETWEEN_ARGS, "main verb between indexed arguments")
        return _reject(
            RejectionCode.ANNOTATION_ERROR,
            f"first token {overt[0].token!r} is tagged {overt[0].pos}, not a verb",
        )

    linked = _linked_indices(first_node, nodes[1:])
    for k, (node, record) in enumerate(zip(nodes, records)):
        direct = {arg.index for arg in record.indexed_args}
        refs, gaps = _descendant_indices(node)
        nested = ((refs | gaps) & linked) - direct
        if nested:
            return _reject(
                RejectionCode.NON_DIRECT_INDEXED_ARG,
                f"index {sorted(nested)} is not a direct child of conjunct {k + 1}",
            )

    index_sets = [[arg.index for arg in r.indexed_args] for r in records]
    reference = sorted(index_sets[0])
    if any(sorted(s) != reference for s in index_sets):
        return _reject(
            RejectionCode.ARG_COUNT_MISMATCH, f"indexed arguments per conjunct: {index_sets}"
        )

    first_indexed = first.indexed_args[0].position
    late = [
        p
        for p in first.non_indexed_positions
        if p > first_indexed and not is_empty(first_node.children[p])
    ]
    if late:
        return _reject(
            RejectionCode.NONINDEXED_AFTER_INDEXED,
            f"non-indexed children {late} follow the first indexed argument",
        )

    for k, (node, record) in enumerate(zip(nodes[1:], records[1:]), start=2):
        extra = [p for p in record.non_indexed_positions if not is_empty(node.children[p])]
        if extra:
            return _reject(
                RejectionCode.ANNOTATION_ERROR,
                f"conjunct {k} has unindexed material at children {extra}",
            )

    present = {arg.category for r in records for arg in r.indexed_args}
    if not present & set(acc_constants["head_priority"]):
        return _reject(
            RejectionCode.ANNOTATION_ERROR,
            f"UNLABELABLE: no {'/'.join(acc_constants['head_priority'])} among {sorted(present)}",
        )
    return None


def classify(tree: Tree, coord_path: TreePath) -> AccInstance:
    """Checks a candidate coordination against the transformable pattern.

    Args:
        tree: The sentence tree.
        coord_path: Path of a node returned by find_candidates.

    Returns:
        An AccInstance; its rejection is None exactly when the first token of
        the first conjunct is a verb, indexed arguments are direct children,
        all conjuncts carry the same indices, no non-indexed material
        follows the first indexed argument and some clustered argument can
        head the ACC phrase.

    Raises:
        NotACandidateError: ``coord_path`` does not address a candidate.
    """
    coord = subtree(tree, coord_path)
    layout = _layout(coord)
    if layout is None:
        raise NotACandidateError(f"node at {tuple(coord_path)} is not an ACC candidate")

    notes: list[str] = []
    nodes = [flatten_conjunct(coord.children[i]) for i in layout.conjuncts]
    records = [
        _conjunct_record(tuple(coord_path) + (position,), node, k == 0, notes)
        for k, (position, node) in enumerate(zip(layout.conjuncts, nodes))
    ]
    signatures = [[arg.category for arg in r.indexed_args] for r in records]
    symmetric = all(s == signatures[0] for s in signatures)
    rejection = _check(coord, layout, nodes, records)
    if rejection:
        logger.debug("candidate %s rejected: %s", coord_path, rejection)
    return AccInstance(
        coord_path=tuple(coord_path),
        conjuncts=tuple(records),
        conjunction_positions=layout.separators,
        symmetric=symmetric,
        rejection=rejection,
        diagnostics=tuple(notes),
        conjunctions=tuple(
            coord.children[i].token.lower()
            for i in layout.separators
            if coord.children[i].pos == CC_POS
        ),
    )


def signature(tree: Tree, conjunct: ConjunctRecord) -> list[str]:
    """Categories of a conjunct's indexed arguments, tags and indices dropped."""
    node = flatten_conjunct(subtree(tree, conjunct.path))
    return [node.children[arg.position].category for arg in conjunct.indexed_args]


def detect_all(tree: Tree) -> list[AccInstance]:
    return [classify(tree, path) for path in find_candidates(tree)]
