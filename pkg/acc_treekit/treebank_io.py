# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Reading, writing and navigating Penn-Treebank bracketed trees."""

import bisect
import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator

import regex

from acc_treekit.constants import treebank_constants
from acc_treekit.errors import InvalidPathError, LabelError, TreebankParseError
from acc_treekit.utils.reports import write_text_atomic

logger = logging.getLogger(__name__)
diagnostics = logging.getLogger("acc_treekit.diagnostics")

EMPTY_POS = treebank_constants["empty_pos"]

_TOKEN_RE = regex.compile(r"\(|\)|[^\s()]+")
_CLUSTER_CATEGORY_RE = regex.compile(r"ACC(?:PH)?_[A-Z$]+(?:-[A-Z$]+)*")
_CATEGORY_RE = regex.compile(r"[^-=]+")
_LABEL_PART_RE = regex.compile(r"([-=])([^-=]+)")
_FORBIDDEN_RE = regex.compile(r"[\s()]")

TreePath = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class NodeLabel:
    """A PTB label split into category, function tags and co-indices."""

    category: str
    function_tags: tuple[str, ...] = ()
    ref_index: int | None = None
    gap_index: int | None = None

    def __post_init__(self):
        if not self.category or _FORBIDDEN_RE.search(self.category):
            raise LabelError(f"invalid category {self.category!r}")
        if ("-" in self.category or "=" in self.category) and not _is_atomic(self.category):
            raise LabelError(f"category {self.category!r} contains '-' or '='")
        for index in (self.ref_index, self.gap_index):
            if index is not None and index < 1:
                raise LabelError(f"index must be >= 1, got {index}")
        if not isinstance(self.function_tags, tuple):
            object.__setattr__(self, "function_tags", tuple(self.function_tags))

    @property
    def index(self) -> int | None:
        """Gap index if present, else reference index."""
        return self.gap_index if self.gap_index is not None else self.ref_index

    def without_indices(self) -> "NodeLabel":
        if self.ref_index is None and self.gap_index is None:
            return self
        return dataclasses.replace(self, ref_index=None, gap_index=None)

    def __str__(self) -> str:
        return format_label(self)


@dataclass(frozen=True, slots=True)
class Leaf:
    """A preterminal: POS tag over a single token."""

    pos: str
    token: str

    def __post_init__(self):
        if not self.pos or not self.token:
            raise ValueError("leaf needs a POS tag and a non-empty token")

    @property
    def is_empty(self) -> bool:
        return self.pos == EMPTY_POS


@dataclass(frozen=True, slots=True)
class Internal:
    """A phrasal node with at least one child."""

    label: NodeLabel
    children: tuple["Tree", ...]

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError(f"internal node {self.label} has no children")

    @property
    def category(self) -> str:
        return self.label.category


Tree = Internal | Leaf


def _is_atomic(text: str) -> bool:
    return text in treebank_constants["atomic_categories"] or bool(
        _CLUSTER_CATEGORY_RE.fullmatch(text)
    )


def parse_label(text: str) -> NodeLabel:
    """Decomposes a PTB label such as ``NP-SBJ-1`` or ``PP-TMP=2``.

    Args:
        text: The raw label.

    Returns:
        The decomposed label. When several ``-N`` suffixes occur, the last one
        is the reference index and earlier ones are kept as function tags.

    Raises:
        LabelError: The label has no category or a dangling separator.
    """
    if not text or _FORBIDDEN_RE.search(text):
        raise LabelError(f"invalid label {text!r}")
    if _is_atomic(text):
        return NodeLabel(text)

    match = _CATEGORY_RE.match(text)
    if match is None:
        raise LabelError(f"label {text!r} has no category")
    rest = text[match.end():]

    tags: list[str] = []
    ref_index = gap_index = None
    position = 0
    for part in _LABEL_PART_RE.finditer(rest):
        if part.start() != position:
            break
        position = part.end()
        separator, value = part.groups()
        if separator == "=":
            if not value.isdigit():
                raise LabelError(f"non-numeric gap index in {text!r}")
            if gap_index is not None:
                raise LabelError(f"several gap indices in {text!r}")
            gap_index = int(value)
        elif value.isdigit():
            if ref_index is not None:
                diagnostics.warning("label %r has several -N suffixes; keeping the last", text)
                tags.append(str(ref_index))
            ref_index = int(value)
        else:
            tags.append(value)
    if position != len(rest):
        raise LabelError(f"dangling separator in label {text!r}")
    return NodeLabel(match.group(), tuple(tags), ref_index, gap_index)


def format_label(label: NodeLabel) -> str:
    parts = [label.category]
    parts.extend(f"-{tag}" for tag in label.function_tags)
    if label.gap_index is not None:
        parts.append(f"={label.gap_index}")
    if label.ref_index is not None:
        parts.append(f"-{label.ref_index}")
    return "".join(parts)


# ---------------------------------------------------------------------------
# Parsing


class _Frame:
    __slots__ = ("label", "expects_label", "children", "tokens", "line", "column")

    def __init__(self, line: int, column: int):
        self.label: str | None = None
        self.expects_label = True
        self.children: list[Tree] = []
        self.tokens: list[str] = []
        self.line = line
        self.column = column


def parse_trees(text: str) -> list[Tree]:
    """Parses every top-level bracketed expression in ``text``.

    A label-less outer wrapper ``( (S ...) )`` is unwrapped.

    Raises:
        TreebankParseError: Unbalanced parentheses, an empty expression, a
            leaf without token or an undecomposable label.
    """
    line_starts = [0] + [i + 1 for i, ch in enumerate(text) if ch == "\n"]

    def locate(offset: int) -> tuple[int, int]:
        line = bisect.bisect_right(line_starts, offset)
        return line, offset - line_starts[line - 1] + 1

    trees: list[Tree] = []
    stack: list[_Frame] = []
    for match in _TOKEN_RE.finditer(text):
        value = match.group()
        line, column = locate(match.start())
        if value == "(":
            if stack and stack[-1].expects_label:
                stack[-1].expects_label = False
            stack.append(_Frame(line, column))
        elif value == ")":
            if not stack:
                raise TreebankParseError("unbalanced ')'", line, column)
            frame = stack.pop()
            node = _close(frame, at_top=not stack)
            if stack:
                stack[-1].children.append(node)
            else:
                trees.append(node)
        else:
            if not stack:
                raise TreebankParseError(f"token {value!r} outside brackets", line, column)
            frame = stack[-1]
            if frame.expects_label:
                frame.label = value
                frame.expects_label = False
            else:
                frame.tokens.append(value)
    if stack:
        frame = stack[-1]
        raise TreebankParseError("unbalanced '('", frame.line, frame.column)
    logger.debug("parsed %d trees", len(trees))
    return trees


def _close(frame: _Frame, at_top: bool) -> Tree:
    where = (frame.line, frame.column)
    if frame.expects_label:
        raise TreebankParseError("empty expression", *where)
    if frame.tokens:
        if frame.children or len(frame.tokens) > 1 or frame.label is None:
            raise TreebankParseError("leaf must be (POS token)", *where)
        return Leaf(frame.label, frame.tokens[0])
    if not frame.children:
        raise TreebankParseError(f"leaf {frame.label!r} has no token", *where)
    if frame.label is None:
        if at_top and len(frame.children) == 1 and isinstance(frame.children[0], Internal):
            return frame.children[0]
        raise TreebankParseError("label-less node is only allowed as outer wrapper", *where)
    try:
        label = parse_label(frame.label)
    except LabelError as e:
        raise TreebankParseError(str(e), *where) from e
    return Internal(label, tuple(frame.children))


# ---------------------------------------------------------------------------
# Serialization


def serialize(tree: Tree, pretty: bool = False) -> str:
    """Writes a tree in bracketed form, single-line unless ``pretty``."""
    if not pretty:
        return _single_line(tree)
    return "\n".join(_pretty_lines(tree, 0))


def _single_line(tree: Tree) -> str:
    if isinstance(tree, Leaf):
        return f"({tree.pos} {tree.token})"
    inner = " ".join(_single_line(child) for child in tree.children)
    return f"({format_label(tree.label)} {inner})"


def _pretty_lines(tree: Tree, depth: int) -> list[str]:
    pad = "  " * depth
    if isinstance(tree, Leaf) or all(isinstance(c, Leaf) for c in tree.children):
        return [pad + _single_line(tree)]
    lines = [f"{pad}({format_label(tree.label)}"]
    for child in tree.children:
        lines.extend(_pretty_lines(child, depth + 1))
    lines[-1] += ")"
    return lines


def read_corpus(path: str | Path, sections: str | None = None) -> list[Tree]:
    """Reads trees from a file, or from every ``*.mrg`` below a directory.

    Args:
        path: A bracketed file or a directory.
        sections: Optional PTB section range such as ``"02-21"``; only files
            below a two-digit directory in that range are read.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("**/*.mrg"))
        if sections:
            wanted = _section_names(sections)
            files = [f for f in files if wanted.intersection(f.parts)]
    else:
        files = [path]
    trees: list[Tree] = []
    for file in files:
        trees.extend(parse_trees(file.read_text(encoding="utf-8")))
    logger.info("read %d trees from %d file(s) under %s", len(trees), len(files), path)
    return trees


def _section_names(sections: str) -> set[str]:
    first, _, last = sections.partition("-")
    last = last or first
    return {f"{n:02d}" for n in range(int(first), int(last) + 1)}


def format_corpus(trees: Iterable[Tree], pretty: bool = False) -> str:
    separator = "\n\n" if pretty else "\n"
    return separator.join(serialize(t, pretty) for t in trees) + "\n"


def write_corpus(path: str | Path, trees: Iterable[Tree], pretty: bool = False) -> Path:
    """Atomically writes one tree per line (blank-line separated when pretty)."""
    return write_text_atomic(path, format_corpus(trees, pretty))


# ---------------------------------------------------------------------------
# Navigation


def leaves(tree: Tree) -> Iterator[Leaf]:
    if isinstance(tree, Leaf):
        yield tree
        return
    for child in tree.children:
        yield from leaves(child)


def yield_tokens(tree: Tree, include_empty: bool = False) -> list[str]:
    return [leaf.token for leaf in leaves(tree) if include_empty or not leaf.is_empty]


def is_empty(tree: Tree) -> bool:
    """True when the subtree dominates only empty elements."""
    return all(leaf.is_empty for leaf in leaves(tree))


def is_verb_pos(pos: str) -> bool:
    return pos.startswith(treebank_constants["verb_prefix"])


def subtree(tree: Tree, path: TreePath) -> Tree:
    node = tree
    for step, position in enumerate(path):
        if isinstance(node, Leaf) or not 0 <= position < len(node.children):
            raise InvalidPathError(f"path {tuple(path)} is invalid at step {step}")
        node = node.children[position]
    return node


def replace_subtree(tree: Tree, path: TreePath, replacement: Tree) -> Tree:
    """Returns a copy of ``tree`` with the node at ``path`` replaced."""
    if not path:
        return replacement
    if isinstance(tree, Leaf) or not 0 <= path[0] < len(tree.children):
        raise InvalidPathError(f"path {tuple(path)} is invalid")
    children = list(tree.children)
    children[path[0]] = replace_subtree(children[path[0]], path[1:], replacement)
    return Internal(tree.label, tuple(children))


def span_at(tree: Tree, path: TreePath) -> tuple[int, int]:
    """Half-open span of the node's non-empty yield."""
    start = 0
    node = tree
    for step, position in enumerate(path):
        if isinstance(node, Leaf) or not 0 <= position < len(node.children):
            raise InvalidPathError(f"path {tuple(path)} is invalid at step {step}")
        start += sum(len(yield_tokens(c)) for c in node.children[:position])
        node = node.children[position]
    return start, start + len(yield_tokens(node))


def iter_nodes(tree: Tree, path: TreePath = ()) -> Iterator[tuple[TreePath, Tree]]:
    """Pre-order traversal yielding (path, node)."""
    yield path, tree
    if isinstance(tree, Internal):
        for i, child in enumerate(tree.children):
            yield from iter_nodes(child, path + (i,))


def iter_postorder(tree: Tree, path: TreePath = ()) -> Iterator[tuple[TreePath, Tree]]:
    if isinstance(tree, Internal):
        for i, child in enumerate(tree.children):
            yield from iter_postorder(child, path + (i,))
    yield path, tree


def map_labels(tree: Tree, fn: Callable[[NodeLabel], NodeLabel]) -> Tree:
    if isinstance(tree, Leaf):
        return tree
    return Internal(fn(tree.label), tuple(map_labels(c, fn) for c in tree.children))


def strip_indices(tree: Tree) -> Tree:
    return map_labels(tree, NodeLabel.without_indices)


def strip_annotations(tree: Tree) -> Tree:
    """Keeps only categories: no function tags, no indices."""
    return map_labels(tree, lambda label: NodeLabel(label.category))


def remove_empty_elements(tree: Tree) -> Tree | None:
    """Drops empty elements and any constituent left without children."""
    if isinstance(tree, Leaf):
        return None if tree.is_empty else tree
    children = [c for c in (remove_empty_elements(c) for c in tree.children) if c is not None]
    if not children:
        return None
    return Internal(tree.label, tuple(children))


def label_indices(tree: Tree) -> set[int]:
    """All -N / =N numbers used on labels anywhere in the tree."""
    used = set()
    for _, node in iter_nodes(tree):
        if isinstance(node, Internal):
            used.update(i for i in (node.label.ref_index, node.label.gap_index) if i is not None)
    return used


def canonicalize_indices(tree: Tree) -> Tree:
    """Renumbers label indices 1, 2, ... in pre-order of first appearance."""
    mapping: dict[int, int] = {}
    for _, node in iter_nodes(tree):
        if isinstance(node, Internal):
            for index in (node.label.gap_index, node.label.ref_index):
                if index is not None and index not in mapping:
                    mapping[index] = len(mapping) + 1

    def renumber(label: NodeLabel) -> NodeLabel:
        if label.ref_index is None and label.gap_index is None:
            return label
        return dataclasses.replace(
            label,
            ref_index=mapping.get(label.ref_index),
            gap_index=mapping.get(label.gap_index),
        )

    return map_labels(tree, renumber)
