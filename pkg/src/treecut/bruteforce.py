"""Exhaustive small-n oracles for the destruction process.

Trees are nested tuples: a node is the tuple of its subtrees, so ()
is a single vertex and ((), ()) is a root with two leaf children.
Everything here enumerates *all* weighted ordered trees of a size and
*all* cut outcomes exactly (Fractions), with no reference to the
splitting-probability formula or the moment recurrences, so it serves
as an independent ground truth for both.

Cost semantics match :mod:`treecut.moments`: cutting an edge in a
component of m >= 2 vertices costs t_m; a size-1 component costs the
toll's size-1 value (1 by default, 0 under the edges-only convention).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

from .family import FamilySpec, phi_coefficient
from .moments import ONE_SIDED, TWO_SIDED, TollSpec

Tree = Tuple  # nested tuples of subtrees


@lru_cache(maxsize=None)
def enumerate_trees(n: int) -> Tuple[Tree, ...]:
    """All ordered trees with n vertices (Catalan(n-1) of them)."""
    if n < 1:
        raise ValueError("tree size must be >= 1")
    if n == 1:
        return ((),)
    out: List[Tree] = []
    # First subtree takes i vertices, the rest of the root's forest n-1-i.
    for i in range(1, n):
        for first in enumerate_trees(i):
            for rest in _forests(n - 1 - i):
                out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(n: int) -> Tuple[Tuple[Tree, ...], ...]:
    """All ordered forests with n vertices total."""
    if n == 0:
        return ((),)
    out: List[Tuple[Tree, ...]] = []
    for i in range(1, n + 1):
        for first in enumerate_trees(i):
            for rest in _forests(n - i):
                out.append((first,) + rest)
    return tuple(out)


def tree_size(tree: Tree) -> int:
    return 1 + sum(tree_size(sub) for sub in tree)


def tree_weight(spec: FamilySpec, tree: Tree) -> Fraction:
    """Product of degree weights phi_{outdegree(v)} over all vertices."""
    w = phi_coefficient(spec, len(tree))
    for sub in tree:
        w *= tree_weight(spec, sub)
    return w


def all_cuts(tree: Tree) -> Iterator[Tuple[Tree, Tree]]:
    """(root side, cut-off side) for every one of the n-1 edges."""
    for i, sub in enumerate(tree):
        yield tree[:i] + tree[i + 1 :], sub
        for kept, removed in all_cuts(sub):
            yield tree[:i] + (kept,) + tree[i + 1 :], removed


def one_sided_tree_moments(tree: Tree, toll: TollSpec, s_max: int) -> List[Fraction]:
    """E[cost^s] of one-sided destruction of this fixed tree, s = 0..s_max."""
    memo: Dict[Tree, List[Fraction]] = {}

    def rec(t: Tree) -> List[Fraction]:
        if t in memo:
            return memo[t]
        n = tree_size(t)
        if n == 1:
            t1 = Fraction(toll.t1)
            result = [t1**s for s in range(s_max + 1)]
        else:
            tn = toll.exact_value(n)
            sums = [Fraction(0)] * (s_max + 1)
            for kept, _ in all_cuts(t):
                sub = rec(kept)
                for s in range(s_max + 1):
                    sums[s] += sub[s]
            result = []
            for s in range(s_max + 1):
                acc = Fraction(0)
                for j in range(s + 1):
                    acc += math.comb(s, j) * tn ** (s - j) * sums[j]
                result.append(acc / (n - 1))
        memo[t] = result
        return result

    return rec(tree)


def two_sided_tree_moments(tree: Tree, toll: TollSpec, s_max: int) -> List[Fraction]:
    """E[cost^s] of two-sided destruction of this fixed tree, s = 0..s_max.

    After a cut the two components evolve independently, so the moments
    of the sum expand multinomially from the component moments.
    """
    memo: Dict[Tree, List[Fraction]] = {}

    def rec(t: Tree) -> List[Fraction]:
        if t in memo:
            return memo[t]
        n = tree_size(t)
        if n == 1:
            t1 = Fraction(toll.t1)
            result = [t1**s for s in range(s_max + 1)]
        else:
            tn = toll.exact_value(n)
            sums = [Fraction(0)] * (s_max + 1)
            for kept, removed in all_cuts(t):
                a, b = rec(kept), rec(removed)
                for s in range(s_max + 1):
                    sums[s] += sum(
                        math.comb(s, j) * a[j] * b[s - j] for j in range(s + 1)
                    )
            result = []
            for s in range(s_max + 1):
                acc = Fraction(0)
                for j in range(s + 1):
                    acc += math.comb(s, j) * tn ** (s - j) * sums[j]
                result.append(acc / (n - 1))
        memo[t] = result
        return result

    return rec(tree)


def family_moments(
    spec: FamilySpec, n: int, toll: TollSpec, s_max: int, variant: str
) -> List[Fraction]:
    """Exact E[cost^s] over a random size-n tree of the family, s = 0..s_max."""
    per_tree = one_sided_tree_moments if variant == ONE_SIDED else two_sided_tree_moments
    if variant not in (ONE_SIDED, TWO_SIDED):
        raise ValueError(f"unknown variant {variant!r}")
    total_weight = Fraction(0)
    sums = [Fraction(0)] * (s_max + 1)
    for tree in enumerate_trees(n):
        w = tree_weight(spec, tree)
        if w == 0:
            continue
        values = per_tree(tree, toll, s_max)
        total_weight += w
        for s in range(s_max + 1):
            sums[s] += w * values[s]
    return [v / total_weight for v in sums]


def first_cut_distribution(spec: FamilySpec, n: int) -> List[Fraction]:
    """Exact law of the root-side size after one uniform cut, k = 1..n-1.

    Averages the per-tree edge counts over the weighted family; this is
    the ground truth the splitting-probability formula must reproduce.
    """
    total_weight = Fraction(0)
    hist = [Fraction(0)] * n  # hist[k], k = 1..n-1
    for tree in enumerate_trees(n):
        w = tree_weight(spec, tree)
        if w == 0:
            continue
        total_weight += w
        for kept, _ in all_cuts(tree):
            hist[tree_size(kept)] += w
    return [h / (total_weight * (n - 1)) for h in hist[1:]]
