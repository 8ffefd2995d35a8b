"""Concrete tree types, canonical forms and exhaustive enumeration.

Shapes (unlabeled rooted non-plane binary trees) are held in a canonical
form: at every internal node the children are ordered by ``(size, code)``
where ``code`` is the balanced-parenthesis encoding, ``"o"`` for a leaf and
``"(" + left + right + ")"`` otherwise.  Two shapes are isomorphic iff their
codes are equal.

Everything here is brute force on purpose; the series module must agree
with it wherever both apply.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import CapacityError, SizeMismatchError

__all__ = [
    "OtterTree",
    "PhyloTree",
    "ShapeEntry",
    "ShapeTable",
    "LEAF",
    "N_MAX",
    "sym_count",
    "labeling_count",
    "canonicalize",
    "shape_of",
    "isomorphic",
    "enumerate_shapes",
    "enumerate_phylo",
    "count_phylo",
    "double_factorial",
    "parse_shape",
]

N_MAX = 20


class OtterTree:
    """Canonical unlabeled binary shape.  Build with :meth:`join`, never directly."""

    __slots__ = ("left", "right", "size", "sym", "code")

    def __init__(self, left=None, right=None, *, _trusted=False):
        if not _trusted and (left is not None or right is not None):
            raise TypeError("use OtterTree.join or canonicalize to build internal nodes")
        self.left = left
        self.right = right
        if left is None:
            self.size = 1
            self.sym = 0
            self.code = "o"
        else:
            self.size = left.size + right.size
            same = left.code == right.code
            self.sym = left.sym + right.sym + same
            self.code = "(" + left.code + right.code + ")"

    @staticmethod
    def join(a: OtterTree, b: OtterTree) -> OtterTree:
        if b.key < a.key:
            a, b = b, a
        return OtterTree(a, b, _trusted=True)

    @property
    def key(self):
        return (self.size, self.code)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __eq__(self, other):
        return isinstance(other, OtterTree) and self.code == other.code

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return hash(self.code)

    def __str__(self):
        return self.code

    def __repr__(self):
        return f"OtterTree({self.code!r})"


LEAF = OtterTree()


class PhyloTree:
    """Leaf-labeled rooted non-plane binary tree.

    Children are stored with the subtree holding the smaller minimum label
    first, so structural equality is equality of phylogenetic trees.
    """

    __slots__ = ("label", "left", "right", "size", "min_label", "_text")

    def __init__(self, label=None, left=None, right=None, *, _trusted=False):
        if label is not None:
            if left is not None or right is not None:
                raise ValueError("a leaf has no children")
            self.label = int(label)
            self.left = self.right = None
            self.size = 1
            self.min_label = self.label
            self._text = str(self.label)
            return
        if not _trusted:
            raise TypeError("use PhyloTree.join to build internal nodes")
        self.label = None
        self.left = left
        self.right = right
        self.size = left.size + right.size
        self.min_label = left.min_label
        self._text = "(" + left._text + "," + right._text + ")"

    @staticmethod
    def leaf(label: int) -> PhyloTree:
        return PhyloTree(label)

    @staticmethod
    def join(a: PhyloTree, b: PhyloTree) -> PhyloTree:
        if b.min_label < a.min_label:
            a, b = b, a
        return PhyloTree(None, a, b, _trusted=True)

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    @property
    def n(self) -> int:
        return self.size

    def labels(self) -> list[int]:
        out, stack = [], [self]
        while stack:
            t = stack.pop()
            if t.is_leaf:
                out.append(t.label)
            else:
                stack.append(t.right)
                stack.append(t.left)
        return out

    def validate(self) -> None:
        """Raise ValueError unless the labels are exactly 1..n."""
        if sorted(self.labels()) != list(range(1, self.size + 1)):
            raise ValueError(f"leaf labels of {self} are not exactly 1..{self.size}")

    @classmethod
    def from_string(cls, text: str) -> PhyloTree:
        """Parse nested label lists such as ``"((1,2),(3,4))"``."""
        tokens = re.findall(r"\d+|[(),]|\S", text)
        # each open group holds its children and whether the comma was seen
        stack: list[list] = [[[], True]]

        def push(node):
            items, comma = stack[-1]
            expected = 0 if len(stack) == 1 else int(comma)
            if len(items) != expected:
                raise ValueError(f"malformed phylogenetic tree: {text!r}")
            items.append(node)

        for tok in tokens:
            if tok == "(":
                push(None)
                stack.append([[], False])
            elif tok == ")":
                items, comma = stack[-1]
                if len(stack) < 2 or len(items) != 2 or not comma:
                    raise ValueError(f"malformed phylogenetic tree: {text!r}")
                stack.pop()
                stack[-1][0][-1] = cls.join(*items)
            elif tok == ",":
                if len(stack) < 2 or len(stack[-1][0]) != 1 or stack[-1][1]:
                    raise ValueError(f"malformed phylogenetic tree: {text!r}")
                stack[-1][1] = True
            elif tok.isdigit():
                push(cls.leaf(int(tok)))
            else:
                raise ValueError(f"unexpected token {tok!r} in {text!r}")
        if len(stack) != 1 or len(stack[0][0]) != 1:
            raise ValueError(f"malformed phylogenetic tree: {text!r}")
        tree = stack[0][0][0]
        tree.validate()
        return tree

    def __eq__(self, other):
        return isinstance(other, PhyloTree) and self._text == other._text

    def __hash__(self):
        return hash(self._text)

    def __str__(self):
        return self._text

    def __repr__(self):
        return f"PhyloTree({self._text!r})"


def sym_count(t: OtterTree) -> int:
    """Number of internal nodes whose two subtrees are identical shapes."""
    return t.sym


def labeling_count(t: OtterTree) -> int:
    """Number of distinct leaf labelings of ``t``: n! / 2**sym(t)."""
    return math.factorial(t.size) >> t.sym


def _is_pair(x) -> bool:
    return isinstance(x, (tuple, list)) and len(x) == 2


def canonicalize(raw) -> OtterTree:
    """Canonical shape of ``raw``.

    ``raw`` may be an OtterTree, a PhyloTree, a balanced-parenthesis string,
    or nested 2-sequences whose non-sequence items are leaves.  Children are
    treated as unordered.  Iterative, so deep caterpillars are fine.
    """
    if isinstance(raw, str):
        return parse_shape(raw)
    if isinstance(raw, PhyloTree):
        return shape_of(raw)

    def children(x):
        if isinstance(x, OtterTree):
            return None if x.is_leaf else (x.left, x.right)
        if _is_pair(x):
            return x
        return None

    done: list[OtterTree] = []
    stack = [(raw, False)]
    while stack:
        node, expanded = stack.pop()
        kids = children(node)
        if kids is None:
            done.append(LEAF)
        elif expanded:
            b = done.pop()
            a = done.pop()
            done.append(OtterTree.join(a, b))
        else:
            stack.append((node, True))
            stack.append((kids[1], False))
            stack.append((kids[0], False))
    return done[0]


def parse_shape(text: str) -> OtterTree:
    """Parse a balanced-parenthesis shape such as ``"((oo)(oo))"``."""
    stack: list[list[OtterTree]] = [[]]
    for ch in text:
        if ch == "(":
            stack.append([])
        elif ch == ")":
            if len(stack) < 2 or len(stack[-1]) != 2:
                raise ValueError(f"malformed shape string: {text!r}")
            a, b = stack.pop()
            stack[-1].append(OtterTree.join(a, b))
        elif ch == "o":
            stack[-1].append(LEAF)
        elif not ch.isspace():
            raise ValueError(f"unexpected character {ch!r} in {text!r}")
    if len(stack) != 1 or len(stack[0]) != 1:
        raise ValueError(f"malformed shape string: {text!r}")
    return stack[0][0]


def shape_of(t: PhyloTree) -> OtterTree:
    """Drop the labels of ``t``."""
    done: list[OtterTree] = []
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if node.is_leaf:
            done.append(LEAF)
        elif expanded:
            b = done.pop()
            a = done.pop()
            done.append(OtterTree.join(a, b))
        else:
            stack.extend(((node, True), (node.right, False), (node.left, False)))
    return done[0]


def isomorphic(t1: PhyloTree, t2: PhyloTree) -> bool:
    if t1.size != t2.size:
        raise SizeMismatchError(f"cannot compare trees of sizes {t1.size} and {t2.size}")
    return shape_of(t1) == shape_of(t2)


def double_factorial(m: int) -> int:
    """m!! with (-1)!! = 0!! = 1."""
    if m < -1:
        raise ValueError("double factorial defined here for m >= -1")
    return math.prod(range(m, 0, -2))


def count_phylo(n: int) -> int:
    """|B_n| = (2n-3)!!."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return double_factorial(2 * n - 3)


@dataclass(frozen=True)
class ShapeEntry:
    shape: OtterTree
    sym: int
    labelings: int


@dataclass(frozen=True)
class ShapeTable:
    n: int
    entries: tuple[ShapeEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[ShapeEntry]:
        return iter(self.entries)

    def total_labelings(self) -> int:
        return sum(e.labelings for e in self.entries)

    def sym_counts(self) -> list[int]:
        """Index k holds the number of shapes with sym = k."""
        counts = [0] * max(self.n, 1)
        for e in self.entries:
            counts[e.sym] += 1
        return counts


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple[OtterTree, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for k in range(1, n // 2 + 1):
        small, large = _shapes(k), _shapes(n - k)
        for i, a in enumerate(small):
            # equal halves: unordered pairs including a == b, each once
            for b in (large[i:] if k == n - k else large):
                out.append(OtterTree.join(a, b))
    out.sort(key=lambda t: t.key)
    return tuple(out)


def enumerate_shapes(n: int, max_n: int = N_MAX) -> ShapeTable:
    """All canonical shapes of size ``n`` with sym and labeling counts."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > max_n:
        raise CapacityError(f"n={n} exceeds the enumeration bound {max_n}")
    return ShapeTable(
        n, tuple(ShapeEntry(t, t.sym, labeling_count(t)) for t in _shapes(n))
    )


def _insert_everywhere(t: PhyloTree, label: int) -> Iterator[PhyloTree]:
    new = PhyloTree.leaf(label)
    yield PhyloTree.join(t, new)
    if not t.is_leaf:
        for s in _insert_everywhere(t.left, label):
            yield PhyloTree.join(s, t.right)
        for s in _insert_everywhere(t.right, label):
            yield PhyloTree.join(t.left, s)


def enumerate_phylo(n: int, max_n: int = 9) -> list[PhyloTree]:
    """Every tree of B_n, by inserting leaf m on each of the 2m-3 edges."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > max_n:
        raise CapacityError(f"n={n} exceeds the labeled enumeration bound {max_n}")
    trees = [PhyloTree.leaf(1)]
    for m in range(2, n + 1):
        trees = [s for t in trees for s in _insert_everywhere(t, m)]
    return trees

