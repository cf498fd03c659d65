"""Disjoint sets over ball indices."""

from __future__ import annotations

from typing import Dict, Iterable, List, Tuple


class UnionFind:
    """Union-find with path compression; components come out sorted."""

    def __init__(self, size: int) -> None:
        self.size = size
        self.parents = list(range(size))
        self.num_components = size

    def find(self, elem: int) -> int:
        root = elem
        while root != self.parents[root]:
            root = self.parents[root]
        # point the walked path at the root
        while elem != root:
            self.parents[elem], elem = root, self.parents[elem]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # smaller root wins so labels do not depend on union order
        if rb < ra:
            ra, rb = rb, ra
        self.parents[rb] = ra
        self.num_components -= 1
        return True

    def union_all(self, pairs: Iterable[Tuple[int, int]]) -> "UnionFind":
        for a, b in pairs:
            self.union(a, b)
        return self

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def components(self) -> List[Tuple[int, ...]]:
        groups: Dict[int, List[int]] = {}
        for i in range(self.size):
            groups.setdefault(self.find(i), []).append(i)
        return sorted(tuple(g) for g in groups.values())
