"""Finitely supported vectors over F_{p^f} and echelonized spans.

Vectors are dicts {index: nonzero element encoding}.  Spans keep a reduced
echelon basis under the centered index ordering 0, -1, 1, -2, 2, ...: each
row has leading coefficient 1 at its pivot, pivots are eliminated from all
other rows, and rows are stored sorted by pivot.  This makes the basis a
canonical function of the span, so identical inputs yield identical
states regardless of insertion order.
"""

from __future__ import annotations

from .gf import GF

Vec = dict[int, int]


def order_key(i: int) -> tuple[int, int]:
    """Centered ordering: 0 first, then -1, 1, -2, 2, ..."""
    return (abs(i), 0 if i <= 0 else 1)


def leading_index(v: Vec) -> int:
    return min(v, key=order_key)


def vec_scale(field: GF, v: Vec, s: int) -> Vec:
    if s == 0:
        return {}
    return {i: field.mul(c, s) for i, c in v.items()}


def vec_sub_scaled(field: GF, a: Vec, b: Vec, s: int) -> Vec:
    """a - s*b, dropping zeros."""
    out = dict(a)
    for i, c in b.items():
        d = field.sub(out.get(i, 0), field.mul(s, c))
        if d:
            out[i] = d
        else:
            out.pop(i, None)
    return out


def vec_eq(a: Vec, b: Vec) -> bool:
    return a == b


class Span:
    """A subspace of the finitely supported vectors, kept in reduced
    echelon form."""

    def __init__(self, field: GF):
        self.field = field
        self.rows: list[Vec] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vec) -> Vec:
        """Residual of v after elimination by the basis."""
        out = dict(v)
        for piv, row in zip(self.pivots, self.rows):
            c = out.get(piv)
            if c:
                out = vec_sub_scaled(self.field, out, row, c)
        return out

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def insert(self, v: Vec) -> tuple[bool, list[int]]:
        """Insert v; returns (grew, unit_pivots) where unit_pivots lists
        pivots of rows that are single-support (unit vectors) after the
        update, counting only rows touched by it."""
        res = self.reduce(v)
        if not res:
            return False, []
        lead = leading_index(res)
        inv = self.field.inv(res[lead])
        res = vec_scale(self.field, res, inv)
        units: list[int] = []
        for k, row in enumerate(self.rows):
            c = row.get(lead)
            if c:
                self.rows[k] = vec_sub_scaled(self.field, row, res, c)
                if len(self.rows[k]) == 1:
                    units.append(self.pivots[k])
        pos = 0
        key = order_key(lead)
        while pos < len(self.pivots) and order_key(self.pivots[pos]) < key:
            pos += 1
        self.rows.insert(pos, res)
        self.pivots.insert(pos, lead)
        if len(res) == 1:
            units.append(lead)
        return True, units

    def unit_pivots(self) -> list[int]:
        """Pivots of rows that are unit vectors (canonical membership of
        a unit in a reduced echelon span)."""
        return [p for p, row in zip(self.pivots, self.rows) if len(row) == 1]

    def basis(self) -> list[Vec]:
        return [dict(r) for r in self.rows]

    def to_json(self) -> list[list[list[int]]]:
        return [
            [[i, c] for i, c in sorted(row.items())] for row in self.rows
        ]


def complement_functional(
    field: GF, spans: list[Span], targets: list[int]
) -> tuple[Vec, int] | None:
    """A functional on the given coordinate window vanishing on every
    listed span, nonzero on some unit vector among targets.

    Returns (functional, witness_index) or None when every target unit
    lies in the combined span.  The functional is the dual vector of the
    first free coordinate of the combined row space.
    """
    combined = Span(field)
    for s in spans:
        for row in s.rows:
            combined.insert(dict(row))
    for t in sorted(targets, key=order_key):
        res = combined.reduce({t: 1})
        if res:
            j = leading_index(res)
            # phi(x) = x_j - sum over rows with pivot p of row_j * x_p
            phi: Vec = {j: 1}
            for piv, row in zip(combined.pivots, combined.rows):
                c = row.get(j)
                if c:
                    phi[piv] = field.neg(c)
            return phi, t
    return None


def apply_functional(field: GF, phi: Vec, v: Vec) -> int:
    acc = 0
    for i, c in v.items():
        p = phi.get(i)
        if p:
            acc = field.add(acc, field.mul(p, c))
    return acc
