"""Redistribution of negative weight exponents.

Starting from exponents ``lam`` with some negative entries, each step moves
an amount ``gamma`` from a positive entry ``j`` onto the most negative entry
``target``::

    beta  <-  beta - gamma * e_j + gamma * e_target

Inside one *level* (one target) the vectors are sorted by decreasing
exponent. Round ``t`` (0-based) uses ``gamma_t = min(lam[pos m+t], |beta[target]|)``
(1-based sorted position) and branches over the m sorted positions
``{1, ..., m+t}`` minus the branches already used on the path. When the
target reaches zero the next level starts on the next negative entry. The
leaves of the resulting tree are entrywise nonnegative, and every node is
re-verified against the sufficient index conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import InvariantError, PreconditionError
from .exact_linalg import solve_in_span
from .feasibility import IndexVector, sufficient_index_violations
from .structure import Flat, VectorSet, enumerate_flats, is_generic


@dataclass
class BetaNode:
    beta: tuple[Fraction, ...]
    alpha_path: tuple[int, ...] = ()
    gamma: Fraction | None = None
    target_index: int | None = None
    branch_index: int | None = None
    verified: bool = False
    children: list["BetaNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["BetaNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0) if self.children else 0


@dataclass
class BetaFamily:
    root_lambda: tuple[Fraction, ...]
    permutation: tuple[int, ...]
    root: BetaNode
    leaves: list[BetaNode]

    def nodes(self) -> list[BetaNode]:
        return list(self.root.walk())


def spread_coefficients(E: VectorSet, dependent: int, basis: Sequence[int]) -> list[Fraction]:
    """Coefficients ``alpha`` with ``v_dependent = sum(alpha_i * v_basis[i])``.

    ``basis`` must be independent and must not contain ``dependent``; it may
    span a proper subspace as long as ``v_dependent`` lies in it.
    """
    if dependent in basis:
        raise PreconditionError(f"dependent index {dependent} is part of the basis")
    return solve_in_span(E.vectors[dependent], [E.vectors[j] for j in basis])


def sorted_order(lam: Sequence[Fraction]) -> tuple[int, ...]:
    """Stable decreasing order with the target (lowest-index minimum) placed last."""
    target = min(range(len(lam)), key=lambda j: (lam[j], j))
    rest = sorted((j for j in range(len(lam)) if j != target), key=lambda j: (-lam[j], j))
    return tuple(rest) + (target,)


class _Builder:
    def __init__(self, E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None):
        self.E = E
        self.ix = ix
        self.m = E.m
        self.flats = enumerate_flats(E) if flats is None else flats

    def violations(self, beta) -> list:
        return sufficient_index_violations(self.E, self.ix.with_lambda(beta), self.flats)

    def check_hypotheses(self, lam) -> None:
        if not is_generic(self.E):
            raise PreconditionError("the vector set is not generic")
        bad = self.violations(lam)
        if bad:
            v = bad[0]
            raise PreconditionError(f"index conditions fail: {v.constraint} at {v.where_label()}: "
                                    f"{v.lhs} {v.relation} {v.rhs} is false")

    def verify(self, node: BetaNode) -> None:
        bad = self.violations(node.beta)
        if bad:
            v = bad[0]
            raise InvariantError(f"node {node.alpha_path} fails {v.constraint} at {v.where_label()}")
        node.verified = True

    def start_level(self, node: BetaNode) -> tuple[int, ...]:
        """Validate the pool bound for a new target and return the sorted order."""
        beta = node.beta
        order = sorted_order(beta)
        m = self.m
        ell = sum(1 for b in beta if b > 0)
        if ell < m:
            raise InvariantError(f"only {ell} positive entries, need at least m={m}")
        pool = sum((beta[order[i]] for i in range(m - 1, ell)), Fraction(0))
        if -beta[order[-1]] > pool:
            raise InvariantError("negative entry exceeds the positive pool at positions m..l")
        return order

    def round(self, node: BetaNode, order: tuple[int, ...], t: int, used: tuple[int, ...]) -> list[BetaNode]:
        m = self.m
        target = order[-1]
        current = node.beta[target]
        pool_pos = m + t - 1
        if pool_pos >= len(order) - 1 or node.beta[order[pool_pos]] <= 0:
            raise InvariantError("positive pool exhausted before the target reached zero")
        gamma = min(node.beta[order[pool_pos]], -current)
        children = []
        for pos in range(m + t):
            j = order[pos]
            if j in used:
                continue
            beta = list(node.beta)
            beta[j] -= gamma
            beta[target] += gamma
            child = BetaNode(tuple(beta), node.alpha_path + (j,), gamma, target, j)
            self.verify(child)
            children.append(child)
        return children

    def expand(self, node: BetaNode) -> None:
        if min(node.beta) >= 0:
            return
        order = self.start_level(node)
        self.expand_round(node, order, 0, ())

    def expand_round(self, node, order, t, used) -> None:
        node.children = self.round(node, order, t, used)
        for child in node.children:
            if child.beta[order[-1]] == 0:
                self.expand(child)
            else:
                self.expand_round(child, order, t + 1, used + (child.branch_index,))


def single_step(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> list[BetaNode]:
    """The m first-round branches for the current (most negative) target."""
    b = _Builder(E, ix, flats)
    if min(ix.lam) >= 0:
        raise PreconditionError("no negative exponent to redistribute")
    b.check_hypotheses(ix.lam)
    root = BetaNode(ix.lam, verified=True)
    return b.round(root, b.start_level(root), 0, ())


def decompose(E: VectorSet, ix: IndexVector, flats: Sequence[Flat] | None = None) -> BetaFamily:
    b = _Builder(E, ix, flats)
    b.check_hypotheses(ix.lam)
    root = BetaNode(ix.lam, verified=True)
    b.expand(root)
    leaves = [n for n in root.walk() if n.is_leaf]
    for leaf in leaves:
        if min(leaf.beta) < 0:
            raise InvariantError(f"leaf {leaf.alpha_path} still has a negative entry")
    perm = sorted_order(ix.lam) if min(ix.lam) < 0 else tuple(range(ix.N))
    return BetaFamily(ix.lam, perm, root, leaves)


def step_shifts(family: BetaFamily) -> list[tuple[tuple[int, ...], tuple[Fraction, ...]]]:
    """Per-edge shift ``parent.beta - child.beta`` (two nonzero entries, +gamma and -gamma)."""
    out = []

    def visit(node):
        for c in node.children:
            out.append((c.alpha_path, tuple(p - q for p, q in zip(node.beta, c.beta))))
            visit(c)

    visit(family.root)
    return out


def weight_shift_report(family: BetaFamily) -> list[tuple[BetaNode, tuple[Fraction, ...]]]:
    """For each leaf, the shift ``lambda - beta`` carried by the weight factors."""
    return [(leaf, tuple(l - b for l, b in zip(family.root_lambda, leaf.beta))) for leaf in family.leaves]


def naive_spread(E: VectorSet, ix: IndexVector, target: int, basis: Sequence[int]) -> list[tuple[int, tuple[Fraction, ...]]]:
    """One unverified redistribution step onto ``target`` along a dependency.

    Uses ``gamma = min(min_j lam[basis j], |lam[target]|)`` and returns one
    branch per basis index. Nothing is asserted about the result; this is
    the step that breaks down for non-generic configurations.
    """
    spread_coefficients(E, target, basis)
    lam = ix.lam
    if lam[target] >= 0:
        raise PreconditionError("target exponent must be negative")
    gamma = min(min(lam[j] for j in basis), -lam[target])
    branches = []
    for j in basis:
        beta = list(lam)
        beta[j] -= gamma
        beta[target] += gamma
        branches.append((j, tuple(beta)))
    return branches
