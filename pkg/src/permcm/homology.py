"""Integer homology of finite chain complexes via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


@dataclass(frozen=True)
class HomologyGroup:
    """Z^free_rank plus the cyclic groups Z/d for d in torsion (a divisibility chain)."""

    free_rank: int = 0
    torsion: tuple[int, ...] = field(default=())

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def _dense_invariant_factors(rows: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form of a small dense integer matrix."""
    A = [list(r) for r in rows]
    factors = []
    while A and A[0]:
        nz = [(abs(v), i, j) for i, r in enumerate(A) for j, v in enumerate(r) if v]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[0], A[pi] = A[pi], A[0]
        for r in A:
            r[0], r[pj] = r[pj], r[0]
        while True:
            p = A[0][0]
            changed = False
            for i in range(1, len(A)):
                if A[i][0]:
                    q = A[i][0] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[0])]
                    if A[i][0]:
                        changed = True
            for j in range(1, len(A[0])):
                if A[0][j]:
                    q = A[0][j] // p
                    for r in A:
                        r[j] -= q * r[0]
                    if A[0][j]:
                        changed = True
            if not changed:
                bad = next((i for i in range(1, len(A)) if any(v % p for v in A[i][1:])), None)
                if bad is None:
                    break
                A[0] = [a + b for a, b in zip(A[0], A[bad])]
                changed = True
            # move the smallest nonzero entry of row 0 / column 0 to the corner
            cands = [(abs(A[i][0]), i, 0) for i in range(len(A)) if A[i][0]]
            cands += [(abs(A[0][j]), 0, j) for j in range(len(A[0])) if A[0][j]]
            _, pi, pj = min(cands)
            A[0], A[pi] = A[pi], A[0]
            for r in A:
                r[0], r[pj] = r[pj], r[0]
        factors.append(abs(A[0][0]))
        A = [r[1:] for r in A[1:]]
    return sorted(factors)


def invariant_factors(columns: Sequence[dict[int, int]]) -> tuple[int, list[int]]:
    """Rank and the invariant factors greater than 1 of a sparse integer matrix.

    ``columns[c]`` maps row index to entry.  Unit pivots are eliminated sparsely first
    (choosing short rows and columns to limit fill-in); whatever remains has no unit
    entries and is finished densely.
    """
    rows: dict[int, dict[int, int]] = {}
    for c, col in enumerate(columns):
        for r, v in col.items():
            if v:
                rows.setdefault(r, {})[c] = v
    col_rows: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    rank = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(col_rows):
            live = col_rows.get(c)
            if not live:
                continue
            units = [r for r in live if rows[r][c] in (1, -1)]
            if not units:
                continue
            r = min(units, key=lambda r: (len(rows[r]), r))
            prow = rows.pop(r)
            pv = prow[c]
            for c2 in prow:
                col_rows[c2].discard(r)
            for r2 in list(col_rows[c]):
                row2 = rows[r2]
                factor = row2[c] * pv  # pv is a unit, so this is row2[c] / pv
                for c2, v in prow.items():
                    nv = row2.get(c2, 0) - factor * v
                    if nv:
                        if c2 not in row2:
                            col_rows[c2].add(r2)
                        row2[c2] = nv
                    else:
                        row2.pop(c2, None)
                        col_rows[c2].discard(r2)
                if not row2:
                    del rows[r2]
            del col_rows[c]
            rank += 1
            progress = True
    rest_rows = [row for row in rows.values() if row]
    if not rest_rows:
        return rank, []
    cols = sorted({c for row in rest_rows for c in row})
    index = {c: k for k, c in enumerate(cols)}
    dense = []
    for row in rest_rows:
        line = [0] * len(cols)
        for c, v in row.items():
            line[index[c]] = v
        dense.append(line)
    factors = _dense_invariant_factors(dense)
    return rank + len(factors), [d for d in factors if d > 1]


def chain_complex_homology(dims: Sequence[int], boundaries: Sequence[Sequence[dict[int, int]]]
                           ) -> list[HomologyGroup]:
    """Homology of C_0 <- C_1 <- ... given the ranks ``dims[k]`` of C_k and, for k >= 1,
    ``boundaries[k]`` as the columns (one per basis element of C_k) of the map to C_{k-1}.
    ``boundaries[0]`` is ignored."""
    top = len(dims)
    ranks = [0] * (top + 1)
    torsion: list[list[int]] = [[] for _ in range(top + 1)]
    for k in range(1, top):
        ranks[k], torsion[k] = invariant_factors(boundaries[k])
    out = []
    for k in range(top):
        free = dims[k] - ranks[k] - ranks[k + 1]
        out.append(HomologyGroup(free, tuple(torsion[k + 1])))
    return out


def field_betti(groups: Sequence[HomologyGroup], p: int | None) -> list[int]:
    """Betti numbers over Q (p None) or F_p, by universal coefficients."""
    if p is None:
        return [g.free_rank for g in groups]
    out = []
    for k, g in enumerate(groups):
        below = groups[k - 1].torsion if k > 0 else ()
        out.append(g.free_rank + sum(1 for d in g.torsion if d % p == 0)
                   + sum(1 for d in below if d % p == 0))
    return out
