"""Exact integer linear algebra on sublattices of Z^n.

Everything here works on plain Python ints, so there is no overflow to
worry about.  Matrices are :class:`IntMatrix` values (immutable, row-major);
most functions also accept a nested sequence of ints and wrap it.

Row Hermite normal form convention: upper echelon, positive pivots, every
entry above a pivot reduced into ``[0, pivot)``, zero rows last.  With that
convention two sublattices are equal exactly when their HNF bases are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class LatticeError(ValueError):
    """Raised on malformed lattice input (dimension mismatch, non-saturated basis, ...)."""


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for row in self.entries:
            if len(row) != self.ncols:
                raise LatticeError("matrix is not rectangular")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]] | "IntMatrix", ncols: int | None = None) -> "IntMatrix":
        if isinstance(rows, IntMatrix):
            return rows
        rows = [tuple(int(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise LatticeError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        return cls(tuple(rows), ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntMatrix":
        if not self.entries:
            return IntMatrix(((),) * self.ncols, 0)
        return IntMatrix(tuple(zip(*self.entries)), self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        other = IntMatrix.of(other)
        if self.ncols != other.nrows:
            raise LatticeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries)) if other.entries else [()] * other.ncols
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.entries),
            other.ncols,
        )

    def rows_slice(self, start: int, stop: int | None = None) -> "IntMatrix":
        return IntMatrix(self.entries[start:stop], self.ncols)

    def is_zero_row(self, i: int) -> bool:
        return not any(self.entries[i])


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``a*x + b*y = g``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def determinant(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = IntMatrix.of(m) if not isinstance(m, IntMatrix) else m
    n = m.nrows
    if n != m.ncols:
        raise LatticeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m: IntMatrix) -> list[list[Fraction]]:
    """Exact inverse over Q by Gauss-Jordan elimination."""
    n = m.nrows
    if n != m.ncols:
        raise LatticeError("inverse of a non-square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m.entries)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise LatticeError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    inv = inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise LatticeError("matrix is not unimodular")
    return IntMatrix(tuple(tuple(int(x) for x in row) for row in inv), m.nrows)


def hnf(m: IntMatrix | Sequence[Sequence[int]], ncols: int | None = None) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``.
    """
    m = IntMatrix.of(m, ncols)
    nrows, ncols = m.shape
    a = [list(r) for r in m.entries]
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r + 1, nrows):
            if a[i][c] == 0:
                continue
            p, q = a[r][c], a[i][c]
            g, x, y = xgcd(p, q)
            pg, qg = p // g, q // g
            # [[x, y], [-q/g, p/g]] has determinant 1
            a[r], a[i] = ([x * s + y * t for s, t in zip(a[r], a[i])],
                          [-qg * s + pg * t for s, t in zip(a[r], a[i])])
            u[r], u[i] = ([x * s + y * t for s, t in zip(u[r], u[i])],
                          [-qg * s + pg * t for s, t in zip(u[r], u[i])])
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-s for s in a[r]]
            u[r] = [-s for s in u[r]]
        piv = a[r][c]
        for i in range(r):
            f = a[i][c] // piv
            if f:
                a[i] = [s - f * t for s, t in zip(a[i], a[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return (IntMatrix(tuple(tuple(row) for row in a), ncols),
            IntMatrix(tuple(tuple(row) for row in u), nrows))


def is_hnf(h: IntMatrix) -> bool:
    last_pivot = -1
    seen_zero = False
    for i, row in enumerate(h.entries):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        p = nz[0]
        if p <= last_pivot or row[p] <= 0:
            return False
        for k in range(i):
            if not 0 <= h.entries[k][p] < row[p]:
                return False
        last_pivot = p
    return True


@dataclass(frozen=True)
class SmithForm:
    """``left @ m @ right == diag``; ``diagonal`` holds the nonzero entries d_1 | d_2 | ..."""
    diag: IntMatrix
    left: IntMatrix
    right: IntMatrix
    diagonal: tuple[int, ...]


def smith_form(m: IntMatrix | Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form with both transforms kept."""
    m = IntMatrix.of(m, ncols)
    nrows, ncols = m.shape
    left = IntMatrix.identity(nrows)
    right = IntMatrix.identity(ncols)
    a = m
    # alternate row and column HNF until every pivot is alone in its column
    while True:
        a, u = hnf(a)
        left = u @ left
        if _pivots_isolated(a):
            break
        at, v = hnf(a.transpose())
        a = at.transpose()
        right = right @ v.transpose()
        if _pivots_isolated(a) and is_hnf(a):
            break
    # a is now a row echelon matrix with one nonzero per row and per column
    pivots = []
    for row in a.entries:
        nz = [j for j, x in enumerate(row) if x]
        if nz:
            pivots.append(nz[0])
    perm = pivots + [j for j in range(ncols) if j not in pivots]
    pmat = IntMatrix(tuple(tuple(int(perm[j] == i) for j in range(ncols)) for i in range(ncols)), ncols)
    a = a @ pmat
    right = right @ pmat
    rank = len(pivots)
    d = [a.entries[i][i] for i in range(rank)]
    left_rows = [list(r) for r in left.entries]
    right_cols = [list(c) for c in zip(*right.entries)] if ncols else []
    for i in range(rank):
        for j in range(i + 1, rank):
            p, q = d[i], d[j]
            if q % p == 0:
                continue
            g, x, y = xgcd(p, q)
            pg, qg = p // g, q // g
            # left [[x, y], [-q/g, p/g]], right [[1, -y*q/g], [1, x*p/g]]
            li, lj = left_rows[i], left_rows[j]
            left_rows[i] = [x * s + y * t for s, t in zip(li, lj)]
            left_rows[j] = [-qg * s + pg * t for s, t in zip(li, lj)]
            ci, cj = right_cols[i], right_cols[j]
            right_cols[i] = [s + t for s, t in zip(ci, cj)]
            right_cols[j] = [-y * qg * s + x * pg * t for s, t in zip(ci, cj)]
            d[i], d[j] = g, p * q // g
    left = IntMatrix(tuple(tuple(r) for r in left_rows), nrows)
    right = IntMatrix(tuple(zip(*right_cols)), ncols) if ncols else right
    diag = IntMatrix(tuple(tuple(d[i] if (i == j and i < rank) else 0 for j in range(ncols))
                           for i in range(nrows)), ncols)
    return SmithForm(diag, left, right, tuple(d))


def _pivots_isolated(a: IntMatrix) -> bool:
    for i, row in enumerate(a.entries):
        nz = [j for j, x in enumerate(row) if x]
        if len(nz) > 1:
            return False
        if nz and any(a.entries[k][nz[0]] for k in range(a.nrows) if k != i):
            return False
    return True


@dataclass(frozen=True)
class TorsionProfile:
    """Torsion of sat(span) / span.

    ``factors`` are the invariant factors greater than one, in divisibility
    order.  ``generators`` are rows of an adapted basis of the saturation:
    the row span is generated by ``multipliers[i] * generators[i]``.
    """
    factors: tuple[int, ...]
    generators: IntMatrix
    multipliers: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out


def snf(m: IntMatrix | Sequence[Sequence[int]], ncols: int | None = None) -> TorsionProfile:
    m = IntMatrix.of(m, ncols)
    sf = smith_form(m)
    rank = len(sf.diagonal)
    vinv = unimodular_inverse(sf.right)
    return TorsionProfile(
        factors=tuple(f for f in sf.diagonal if f != 1),
        generators=vinv.rows_slice(0, rank),
        multipliers=sf.diagonal,
    )


@dataclass(frozen=True)
class LatticeBasis:
    """A sublattice of Z^n given by its canonical row HNF basis."""
    ambient_dim: int
    basis: IntMatrix

    @classmethod
    def span(cls, rows: Iterable[Sequence[int]], ambient_dim: int) -> "LatticeBasis":
        m = IntMatrix.of(list(rows), ambient_dim)
        h, _ = hnf(m)
        nonzero = tuple(r for r in h.entries if any(r))
        return cls(ambient_dim, IntMatrix(nonzero, ambient_dim))

    @classmethod
    def full(cls, n: int) -> "LatticeBasis":
        return cls(n, IntMatrix.identity(n))

    @classmethod
    def zero(cls, n: int) -> "LatticeBasis":
        return cls(n, IntMatrix((), n))

    @property
    def rank(self) -> int:
        return self.basis.nrows

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self.basis.entries

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.basis.entries]

    def __contains__(self, v) -> bool:
        return member(v, self)[0]

    def contains_lattice(self, other: "LatticeBasis") -> bool:
        return all(member(r, self)[0] for r in other.rows)


def saturate(rows: Iterable[Sequence[int]] | IntMatrix, ambient_dim: int | None = None
             ) -> tuple[LatticeBasis, TorsionProfile]:
    """Smallest direct summand containing the row span, plus the torsion of sat/span."""
    m = IntMatrix.of(rows if isinstance(rows, IntMatrix) else list(rows), ambient_dim)
    prof = snf(m)
    sat = LatticeBasis.span(prof.generators.entries, m.ncols)
    return sat, prof


def member(v: Sequence[int], b: LatticeBasis) -> tuple[bool, tuple[int, ...] | None]:
    """Membership of ``v`` in the row span of ``b``, with its integer coordinates."""
    v = [int(x) for x in v]
    if len(v) != b.ambient_dim:
        raise LatticeError(f"vector of length {len(v)} in ambient dimension {b.ambient_dim}")
    coords = []
    rest = v
    for row, p in zip(b.rows, b.pivots()):
        # entries left of the pivot must already be cleared
        if any(rest[:p]):
            return False, None
        q, r = divmod(rest[p], row[p])
        if r:
            return False, None
        coords.append(q)
        if q:
            rest = [s - q * t for s, t in zip(rest, row)]
    if any(rest):
        return False, None
    return True, tuple(coords)


def complete_unimodular(b: LatticeBasis) -> IntMatrix:
    """n x n unimodular matrix whose first ``b.rank`` rows are ``b``'s basis."""
    n, k = b.ambient_dim, b.rank
    if k == 0:
        return IntMatrix.identity(n)
    sf = smith_form(b.basis)
    if any(f != 1 for f in sf.diagonal):
        raise LatticeError("basis does not span a saturated sublattice")
    vinv = unimodular_inverse(sf.right)
    comp, _ = hnf(vinv.rows_slice(k))
    rows = [list(r) for r in comp.entries]
    for row in rows:
        for brow, p in zip(b.rows, b.pivots()):
            f = row[p] // brow[p]
            if f:
                row[:] = [s - f * t for s, t in zip(row, brow)]
    return IntMatrix(b.rows + tuple(tuple(r) for r in rows), n)


def is_saturated(b: LatticeBasis) -> bool:
    return all(f == 1 for f in smith_form(b.basis).diagonal) if b.rank else True


def content(v: Sequence[int]) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
