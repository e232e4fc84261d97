"""Finite semiquandles as integer operation tables.

Elements are the integers 1..n.  A table entry up[i][j] is the result of
x_i ^ x_j (row = first argument, column = second argument); dn[i][j] is
x_i operated by the subscript operation.  This matches the block-matrix
convention [U|L], so printed matrices can be transcribed verbatim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class StructureError(ValueError):
    """Malformed table data: non-square, wrong size, entry out of range."""


class AxiomError(ValueError):
    """A structure failed axiom checking at construction time."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(f"{v.axiom}@{v.witness}" for v in self.violations[:6])
        more = "" if len(self.violations) <= 6 else f" (+{len(self.violations) - 6} more)"
        super().__init__(f"axiom violations: {lines}{more}")


class OperationUnavailable(LookupError):
    """Requested an operation the bundle does not carry."""


@dataclass(frozen=True, order=True)
class Violation:
    axiom: str
    witness: tuple


def _freeze(rows) -> tuple:
    return tuple(tuple(int(v) for v in row) for row in rows)


def _structure_report(name: str, rows, n: int) -> list:
    out = []
    if len(rows) != n:
        out.append(Violation("structure", (name, "rows", len(rows))))
        return out
    for i, row in enumerate(rows):
        if len(row) != n:
            out.append(Violation("structure", (name, "row-length", i + 1)))
            return out
        for j, v in enumerate(row):
            if not isinstance(v, int) or not 1 <= v <= n:
                out.append(Violation("structure", (name, "entry", i + 1, j + 1)))
    return out


def _column_is_perm(t, j: int, n: int) -> bool:
    return sorted(t[i][j] for i in range(n)) == list(range(1, n + 1))


def check_semiquandle(up: Sequence[Sequence[int]], dn: Sequence[Sequence[int]]) -> list:
    """Report every axiom violation of the pair (up, dn); empty list = valid.

    Witnesses are 1-based; the report is sorted lexicographically by
    (axiom id, witness) so golden-file comparisons are stable.
    """
    n = len(up)
    report = _structure_report("up", up, n) + _structure_report("dn", dn, n)
    if report:
        return sorted(report)
    r = range(n)
    for j in r:
        if not _column_is_perm(up, j, n):
            report.append(Violation("0", ("up", j + 1)))
        if not _column_is_perm(dn, j, n):
            report.append(Violation("0", ("dn", j + 1)))
    for x in r:
        for y in r:
            if (dn[x][y] == y + 1) != (up[y][x] == x + 1):
                report.append(Violation("i", (x + 1, y + 1)))
            if up[dn[x][y] - 1][up[y][x] - 1] != x + 1:
                report.append(Violation("ii.a", (x + 1, y + 1)))
            if dn[up[x][y] - 1][dn[y][x] - 1] != x + 1:
                report.append(Violation("ii.b", (x + 1, y + 1)))
    for x in r:
        for y in r:
            for z in r:
                xy = up[x][y] - 1
                zy = dn[z][y] - 1
                yz = up[y][z] - 1
                if up[xy][z] != up[up[x][zy] - 1][yz]:
                    report.append(Violation("iii.a", (x + 1, y + 1, z + 1)))
                if up[dn[y][x] - 1][dn[z][xy] - 1] != dn[yz][up[x][zy] - 1]:
                    report.append(Violation("iii.b", (x + 1, y + 1, z + 1)))
                if dn[dn[z][xy] - 1][dn[y][x] - 1] != dn[zy][x]:
                    report.append(Violation("iii.c", (x + 1, y + 1, z + 1)))
    return sorted(report)


def check_singular(up, dn, hup, hdn) -> list:
    """Report violations of the hat axioms for (hup, hdn) over a valid (up, dn).

    No invertibility is required of the hat operations; singular crossings
    are never created or removed by moves.
    """
    n = len(up)
    report = _structure_report("hup", hup, n) + _structure_report("hdn", hdn, n)
    if report:
        return sorted(report)
    r = range(n)
    for x in r:
        for y in r:
            xy = up[x][y] - 1
            yx = dn[y][x] - 1
            if hup[yx][xy] != up[hdn[y][x] - 1][hup[x][y] - 1]:
                report.append(Violation("hi.a", (x + 1, y + 1)))
            if hdn[xy][yx] != dn[hup[x][y] - 1][hdn[y][x] - 1]:
                report.append(Violation("hi.b", (x + 1, y + 1)))
    for x in r:
        for y in r:
            for z in r:
                xy = up[x][y] - 1
                zy = dn[z][y] - 1
                yz = up[y][z] - 1
                if hup[xy][z] != up[hup[x][zy] - 1][yz]:
                    report.append(Violation("hii.a", (x + 1, y + 1, z + 1)))
                if up[dn[y][x] - 1][hdn[z][xy] - 1] != dn[yz][hup[x][zy] - 1]:
                    report.append(Violation("hii.b", (x + 1, y + 1, z + 1)))
                if dn[hdn[z][xy] - 1][dn[y][x] - 1] != hdn[zy][x]:
                    report.append(Violation("hii.c", (x + 1, y + 1, z + 1)))
    return sorted(report)


def check_virtual(up, dn, v, hup=None, hdn=None) -> list:
    """Report failures of v to be an automorphism of all present operations."""
    n = len(up)
    report = []
    if len(v) != n or sorted(v) != list(range(1, n + 1)):
        report.append(Violation("structure", ("v", "not-a-permutation")))
        return report
    r = range(n)
    for x in r:
        for y in r:
            vx, vy = v[x] - 1, v[y] - 1
            if v[up[x][y] - 1] != up[vx][vy]:
                report.append(Violation("v.up", (x + 1, y + 1)))
            if v[dn[x][y] - 1] != dn[vx][vy]:
                report.append(Violation("v.dn", (x + 1, y + 1)))
            if hup is not None and v[hup[x][y] - 1] != hup[vx][vy]:
                report.append(Violation("v.hup", (x + 1, y + 1)))
            if hdn is not None and v[hdn[x][y] - 1] != hdn[vx][vy]:
                report.append(Violation("v.hdn", (x + 1, y + 1)))
    return sorted(report)


@dataclass(frozen=True)
class SemiquandleTable:
    up: tuple
    dn: tuple

    def __post_init__(self):
        object.__setattr__(self, "up", _freeze(self.up))
        object.__setattr__(self, "dn", _freeze(self.dn))
        report = check_semiquandle(self.up, self.dn)
        if any(v.axiom == "structure" for v in report):
            raise StructureError(str(report[0]))
        if report:
            raise AxiomError(report)

    @property
    def n(self) -> int:
        return len(self.up)


@dataclass(frozen=True)
class SingularExtension:
    hup: tuple
    hdn: tuple

    def __post_init__(self):
        object.__setattr__(self, "hup", _freeze(self.hup))
        object.__setattr__(self, "hdn", _freeze(self.hdn))

    @property
    def n(self) -> int:
        return len(self.hup)


@dataclass(frozen=True)
class VirtualExtension:
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))

    @property
    def n(self) -> int:
        return len(self.v)


@dataclass(frozen=True)
class StructureBundle:
    """A semiquandle with optional singular and virtual extensions.

    An absent extension is semantically the trivial one (hup = hdn =
    projection to the first argument, v = identity), but the raw hat / v
    operations are only evaluable when the extension is actually present.
    """

    table: SemiquandleTable
    singular: Optional[SingularExtension] = None
    virtual: Optional[VirtualExtension] = None

    def __post_init__(self):
        if self.singular is not None:
            if self.singular.n != self.table.n:
                raise StructureError("singular extension order mismatch")
            report = check_singular(self.table.up, self.table.dn,
                                    self.singular.hup, self.singular.hdn)
            if report:
                raise AxiomError(report)
        if self.virtual is not None:
            if self.virtual.n != self.table.n:
                raise StructureError("virtual extension order mismatch")
            hup = self.singular.hup if self.singular else None
            hdn = self.singular.hdn if self.singular else None
            report = check_virtual(self.table.up, self.table.dn,
                                   self.virtual.v, hup, hdn)
            if report:
                raise AxiomError(report)

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def has_singular(self) -> bool:
        return self.singular is not None

    @property
    def has_virtual(self) -> bool:
        return self.virtual is not None

    def operations(self) -> frozenset:
        ops = {"up", "dn", "up_inv", "dn_inv"}
        if self.has_singular:
            ops |= {"hup", "hdn"}
        if self.has_virtual:
            ops |= {"v", "v_inv"}
        return frozenset(ops)

    def with_trivial_extensions(self) -> "StructureBundle":
        """Fill absent extensions with the trivial ones."""
        singular = self.singular or trivial_singular(self.n)
        virtual = self.virtual or VirtualExtension(identity_perm(self.n))
        return StructureBundle(self.table, singular, virtual)


def evaluate(bundle: StructureBundle, op: str, x: int, y: Optional[int] = None) -> int:
    """Evaluate one operation of the bundle at (x, y), or at x for v ops.

    up_inv / dn_inv are the column inverses guaranteed by axiom 0:
    evaluate(b, 'up_inv', evaluate(b, 'up', x, y), y) == x.
    """
    t = bundle.table
    n = t.n
    if not 1 <= x <= n or (y is not None and not 1 <= y <= n):
        raise ValueError(f"element out of range 1..{n}")
    if op in ("v", "v_inv"):
        if not bundle.has_virtual:
            raise OperationUnavailable("bundle has no virtual extension")
        v = bundle.virtual.v
        return v[x - 1] if op == "v" else v.index(x) + 1
    if y is None:
        raise ValueError(f"operation {op!r} is binary")
    if op == "up":
        return t.up[x - 1][y - 1]
    if op == "dn":
        return t.dn[x - 1][y - 1]
    if op == "up_inv":
        return next(w for w in range(1, n + 1) if t.up[w - 1][y - 1] == x)
    if op == "dn_inv":
        return next(w for w in range(1, n + 1) if t.dn[w - 1][y - 1] == x)
    if op in ("hup", "hdn"):
        if not bundle.has_singular:
            raise OperationUnavailable("bundle has no singular extension")
        s = bundle.singular
        return (s.hup if op == "hup" else s.hdn)[x - 1][y - 1]
    raise ValueError(f"unknown operation {op!r}")


def subclosure(bundle: StructureBundle, seed: Iterable[int]) -> frozenset:
    """Smallest superset of seed closed under all forward bundle operations.

    Closure under forward up/dn on a finite set implies closure under their
    inverses, and v-closure implies closure under v inverse, so only forward
    operations need iterating.
    """
    closed = set(seed)
    frontier = list(closed)
    binops = [bundle.table.up, bundle.table.dn]
    if bundle.has_singular:
        binops += [bundle.singular.hup, bundle.singular.hdn]
    while frontier:
        x = frontier.pop()
        others = list(closed)
        for y in others:
            for t in binops:
                for a, b in ((x, y), (y, x)):
                    z = t[a - 1][b - 1]
                    if z not in closed:
                        closed.add(z)
                        frontier.append(z)
        if bundle.has_virtual:
            z = bundle.virtual.v[x - 1]
            if z not in closed:
                closed.add(z)
                frontier.append(z)
    return frozenset(closed)


def automorphisms(bundle: StructureBundle) -> list:
    """All permutations preserving every operation of the bundle, sorted.

    Brute force over S_n; orders of interest are at most 6.
    """
    n = bundle.n
    tables = [bundle.table.up, bundle.table.dn]
    if bundle.has_singular:
        tables += [bundle.singular.hup, bundle.singular.hdn]
    found = []
    for images in itertools.permutations(range(1, n + 1)):
        ok = all(
            images[t[x][y] - 1] == t[images[x] - 1][images[y] - 1]
            for t in tables for x in range(n) for y in range(n)
        )
        if ok and bundle.has_virtual:
            v = bundle.virtual.v
            ok = all(images[v[x] - 1] == v[images[x] - 1] for x in range(n))
        if ok:
            found.append(tuple(images))
    return found


# ---------------------------------------------------------------------------
# constructions

def identity_perm(n: int) -> tuple:
    return tuple(range(1, n + 1))


def perm_from_cycles(n: int, cycles: Sequence[Sequence[int]]) -> tuple:
    """Build the image tuple of a permutation of 1..n from disjoint cycles."""
    images = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + type(cyc)([cyc[0]])):
            images[a - 1] = b
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError("cycles do not describe a permutation")
    return tuple(images)


def perm_inverse(p: Sequence[int]) -> tuple:
    inv = [0] * len(p)
    for i, img in enumerate(p):
        inv[img - 1] = i + 1
    return tuple(inv)


def perm_compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """Composition: (p * q)(x) = p(q(x))."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def make_constant_action(n: int, sigma: Sequence[int]) -> SemiquandleTable:
    """x^y = sigma(x), x_y = sigma^{-1}(x) for a fixed permutation sigma."""
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("sigma is not a permutation of 1..n")
    inv = perm_inverse(sigma)
    up = tuple(tuple(sigma[x] for _ in range(n)) for x in range(n))
    dn = tuple(tuple(inv[x] for _ in range(n)) for x in range(n))
    return SemiquandleTable(up, dn)


def make_operator_singular(table: SemiquandleTable) -> SingularExtension:
    """hup(x, y) = hdn(x, y) = y."""
    n = table.n
    row = tuple(range(1, n + 1))
    block = tuple(row for _ in range(n))
    return SingularExtension(block, block)


def make_flat_singular(table: SemiquandleTable) -> SingularExtension:
    """hup = up, hdn = dn."""
    return SingularExtension(table.up, table.dn)


def trivial_singular(n: int) -> SingularExtension:
    """hup(x, y) = hdn(x, y) = x."""
    block = tuple(tuple(x for _ in range(n)) for x in range(1, n + 1))
    return SingularExtension(block, block)


# ---------------------------------------------------------------------------
# text format

def format_table_text(bundle: StructureBundle) -> str:
    """Serialize a bundle in the table text format (see parse_table_text)."""
    head = f"semiquandle {bundle.n}"
    if bundle.has_singular:
        head += " singular"
    if bundle.has_virtual:
        head += " virtual"
    blocks = [bundle.table.up, bundle.table.dn]
    if bundle.has_singular:
        blocks += [bundle.singular.hup, bundle.singular.hdn]
    parts = [head]
    for block in blocks:
        parts.append("\n".join(" ".join(str(v) for v in row) for row in block))
    text = "\n\n".join(parts)
    if bundle.has_virtual:
        text += "\n\nv: " + " ".join(str(v) for v in bundle.virtual.v)
    return text + "\n"


def parse_table_text(text: str) -> StructureBundle:
    """Parse the table text format.

    Line 1 is `semiquandle <n> [singular] [virtual]`, followed by
    whitespace-separated 1-based n x n blocks (up, dn, and hup/hdn when
    singular), separated by blank lines, and a final `v: p1 ... pn` line
    when virtual.
    """
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if not lines:
        raise StructureError("empty table text")
    head = lines[0].split()
    if not head or head[0] != "semiquandle" or len(head) < 2:
        raise StructureError("first line must be 'semiquandle <n> [singular] [virtual]'")
    try:
        n = int(head[1])
    except ValueError:
        raise StructureError(f"bad order {head[1]!r}") from None
    flags = set(head[2:])
    if not flags <= {"singular", "virtual"}:
        raise StructureError(f"unknown flags {sorted(flags - {'singular', 'virtual'})}")
    v = None
    rows = []
    for ln in lines[1:]:
        if not ln:
            continue
        if ln.startswith("v:"):
            v = tuple(int(t) for t in ln[2:].split())
            continue
        rows.append(tuple(int(t) for t in ln.split()))
    want = 2 + (2 if "singular" in flags else 0)
    if len(rows) != want * n:
        raise StructureError(f"expected {want * n} table rows, got {len(rows)}")
    blocks = [tuple(rows[k * n:(k + 1) * n]) for k in range(want)]
    table = SemiquandleTable(blocks[0], blocks[1])
    singular = SingularExtension(blocks[2], blocks[3]) if "singular" in flags else None
    if "virtual" in flags:
        if v is None:
            raise StructureError("virtual flag set but no 'v:' line")
        virtual = VirtualExtension(v)
    else:
        if v is not None:
            raise StructureError("'v:' line without virtual flag")
        virtual = None
    return StructureBundle(table, singular, virtual)


# ---------------------------------------------------------------------------
# built-in structures used throughout the test and CLI surfaces

_T4_UP = ((1, 4, 2, 3), (2, 3, 1, 4), (4, 1, 3, 2), (3, 2, 4, 1))
_T4_DN = ((1, 3, 4, 2), (3, 1, 2, 4), (2, 4, 3, 1), (4, 2, 1, 3))

_T4_HUP = ((1, 1, 4, 4), (1, 1, 4, 4), (2, 2, 3, 3), (2, 2, 3, 3))
_T4_HDN = ((1, 2, 2, 1), (4, 3, 3, 4), (4, 3, 3, 4), (1, 2, 2, 1))

_TS3_UP = ((1, 3, 1), (2, 2, 2), (3, 1, 3))


def builtin_bundle(name: str) -> StructureBundle:
    """Bundles used as standard probes.

    t4        order-4 non-constant-action semiquandle
    t4_sing   t4 with its compatible 4x4 singular structure
    ca3       constant action semiquandle on {1,2,3} with sigma = (1 3 2)
    ca3_op    ca3 with the operator singular structure
    ts3_v13   order-3 semiquandle with virtual operation v = (1 3)
    """
    if name == "t4":
        return StructureBundle(SemiquandleTable(_T4_UP, _T4_DN))
    if name == "t4_sing":
        return StructureBundle(SemiquandleTable(_T4_UP, _T4_DN),
                               SingularExtension(_T4_HUP, _T4_HDN))
    if name == "ca3":
        return StructureBundle(make_constant_action(3, perm_from_cycles(3, [[1, 3, 2]])))
    if name == "ca3_op":
        table = make_constant_action(3, perm_from_cycles(3, [[1, 3, 2]]))
        return StructureBundle(table, make_operator_singular(table))
    if name == "ts3_v13":
        table = SemiquandleTable(_TS3_UP, _TS3_UP)
        return StructureBundle(table, virtual=VirtualExtension((3, 2, 1)))
    raise KeyError(f"unknown builtin bundle {name!r}")


BUILTIN_BUNDLES = ("t4", "t4_sing", "ca3", "ca3_op", "ts3_v13")
