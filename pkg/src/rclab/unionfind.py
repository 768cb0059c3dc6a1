class UnionFind:
    """Array-based disjoint sets with path compression."""

    __slots__ = ("parent", "n_components")

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.n_components = size

    def find(self, v: int) -> int:
        parent = self.parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
            self.n_components -= 1

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)
