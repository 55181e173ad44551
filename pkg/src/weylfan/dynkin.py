"""Automorphisms of a Dynkin diagram, i.e. node permutations fixing the
Cartan matrix entry by entry (so arrow directions count)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .linalg import LatticeMap


@dataclass(frozen=True, order=True)
class DiagramAutomorphism:
    perm: tuple[int, ...]  # 0-based: node i goes to node perm[i]

    def compose(self, other: DiagramAutomorphism) -> DiagramAutomorphism:
        """Apply ``other`` first, then ``self``."""
        return DiagramAutomorphism(tuple(self.perm[other.perm[i]] for i in range(len(self.perm))))

    def inverse(self) -> DiagramAutomorphism:
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return DiagramAutomorphism(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.perm)):
            if i in seen or self.perm[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.perm[j]
            out.append(tuple(cyc))
        return out


def _signature(c, i):
    # multiset of bond data at node i; must be preserved by any automorphism
    return tuple(sorted((c[i][j], c[j][i]) for j in range(len(c)) if j != i and c[i][j]))


def diagram_automorphisms(c) -> list[DiagramAutomorphism]:
    """All permutations ``p`` with ``c[p[i]][p[j]] == c[i][j]``, sorted."""
    n = len(c)
    sig = [_signature(c, i) for i in range(n)]
    allowed = [[j for j in range(n) if sig[j] == sig[i]] for i in range(n)]
    out = []

    def extend(partial, used):
        i = len(partial)
        if i == n:
            out.append(DiagramAutomorphism(tuple(partial)))
            return
        for j in allowed[i]:
            if j in used:
                continue
            if all(c[partial[k]][j] == c[k][i] and c[j][partial[k]] == c[i][k] for k in range(i)):
                partial.append(j)
                used.add(j)
                extend(partial, used)
                used.discard(j)
                partial.pop()

    extend([], set())
    return sorted(out)


def diagram_automorphisms_bruteforce(c) -> list[DiagramAutomorphism]:
    """Unpruned n! search; an oracle for ``diagram_automorphisms``."""
    n = len(c)
    return sorted(
        DiagramAutomorphism(p)
        for p in permutations(range(n))
        if all(c[p[i]][p[j]] == c[i][j] for i in range(n) for j in range(n))
    )


def as_lattice_map(d: DiagramAutomorphism) -> LatticeMap:
    """Permutation matrix sending the i-th fundamental coweight to the perm[i]-th."""
    n = len(d.perm)
    return LatticeMap([[int(d.perm[j] == i) for j in range(n)] for i in range(n)])
