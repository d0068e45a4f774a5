"""Prefix trie over neighbor offsets, used for allgather routing.

Level ``L`` of the trie branches on dimension ``dim_order[L]``; a node at
level ``L`` stands for the block that has travelled the first ``L``
(permuted) coordinates of every neighbor below it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


@dataclass
class TrieNode:
    id: int
    level: int
    parent: int | None
    weight: int
    members: list[int] = field(default_factory=list)
    children: list[int] = field(default_factory=list)


def trie_dim_order(offsets: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Dimensions with the most coordinate sharing come first.

    Sort key is ``s - distinct values`` descending, then dimension index.
    """
    if not offsets:
        return ()
    s, d = len(offsets), len(offsets[0])
    shared = [s - len({c[j] for c in offsets}) for j in range(d)]
    return tuple(sorted(range(d), key=lambda j: (-shared[j], j)))


class PrefixTrie:
    def __init__(self, offsets: Sequence[Sequence[int]], dim_order: Sequence[int] | None = None):
        self.offsets = [tuple(c) for c in offsets]
        self.d = len(self.offsets[0]) if self.offsets else 0
        self.dim_order = tuple(dim_order) if dim_order is not None else trie_dim_order(self.offsets)
        if sorted(self.dim_order) != list(range(self.d)):
            raise ValueError(f"dim_order {self.dim_order} is not a permutation of range({self.d})")
        root = TrieNode(0, 0, None, 0, members=list(range(len(self.offsets))))
        self.nodes = [root]
        frontier = [root]
        # breadth-first construction numbers nodes level by level, children by value
        for level, dim in enumerate(self.dim_order):
            nxt = []
            for node in frontier:
                groups: dict[int, list[int]] = {}
                for i in node.members:
                    groups.setdefault(self.offsets[i][dim], []).append(i)
                for value in sorted(groups):
                    child = TrieNode(len(self.nodes), level + 1, node.id, value, members=groups[value])
                    self.nodes.append(child)
                    node.children.append(child.id)
                    nxt.append(child)
            frontier = nxt

    def level(self, level: int) -> list[TrieNode]:
        return [n for n in self.nodes if n.level == level]

    def leaves(self) -> list[TrieNode]:
        return self.level(self.d)

    def edge_weight_sum(self) -> int:
        return sum(abs(n.weight) for n in self.nodes)

    def zero_path_leaf(self, node_id: int) -> TrieNode | None:
        """Leaf reached from ``node_id`` along zero-weight edges only."""
        node = self.nodes[node_id]
        while node.level < self.d:
            zero = [c for c in node.children if self.nodes[c].weight == 0]
            if not zero:
                return None
            node = self.nodes[zero[0]]
        return node
