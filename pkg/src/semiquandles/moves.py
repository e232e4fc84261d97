"""Reidemeister-style move rewriting on pass codes.

The catalog covers the flat moves fR1/fR2/fR3, the virtual moves
vR1/vR2/vR3, the mixed (virtual-virtual-flat) triangle move, the direct
singular slide sR2, and the flat-flat-singular triangle sR3.  Singular
crossings are never created or removed, so sR2/sR3 exist only as
rewrites while the R1/R2 moves also insert and delete crossings.

A triangle or slide site is matched against a frozen table of sound
configurations.  Soundness of a configuration means: the multiset of
boundary colorings (strand input and output colors admitting a
consistent internal coloring) is identical on both sides of the
rewrite, for every valid structure bundle, which makes the coloring
sets of the two codes correspond bijectively.  The table was produced
by exhaustive search over all role/order assignments, checked against
a diverse set of bundles, and the test suite re-verifies every entry
the same way.  The flat-flat-virtual triangle is the forbidden
move: no role assignment for it is sound, and `apply_forbidden` exposes
it separately so tests can demonstrate that it changes invariants.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .diagram import FLAT, SING, VIRT, CodeError, Pass, PassCode

MOVE_IDS = ("fR1", "fR2", "fR3", "vR1", "vR2", "vR3", "mixed", "sR2", "sR3")


class MoveError(ValueError):
    """Move pattern does not match the code at the given site."""


@dataclass(frozen=True, order=True)
class MoveSpec:
    """One applicable move: id, direction, site, and oriented variant.

    Sites are tuples of (component index, pass index) positions: for
    inserts, the semiarc positions receiving each inserted strand
    segment; for deletes and rewrites, the start position of each
    matched two-pass segment.
    """

    move: str
    direction: str      # insert | delete | apply
    site: tuple
    variant: str


# ---------------------------------------------------------------------------
# insert / delete templates
#
# Each template lists the inserted segments, one per strand, as
# (crossing placeholder, kind, role) pairs.  All entries are sound:
# the inserted relations have a unique internal solution whose outputs
# equal the inputs (fR1 by axioms 0 and i, parallel fR2 by axiom ii,
# antiparallel fR2 and the virtual moves checked exhaustively).

_INSERTS = {
    ("fR1", "sup_first"): ((("X", FLAT, "sup"), ("X", FLAT, "sub")),),
    ("fR1", "sub_first"): ((("X", FLAT, "sub"), ("X", FLAT, "sup")),),
    ("fR2", "direct"): ((("X", FLAT, "sup"), ("Y", FLAT, "sub")),
                        (("X", FLAT, "sub"), ("Y", FLAT, "sup"))),
    ("fR2", "mirror"): ((("X", FLAT, "sub"), ("Y", FLAT, "sup")),
                        (("X", FLAT, "sup"), ("Y", FLAT, "sub"))),
    ("fR2", "reverse"): ((("X", FLAT, "sup"), ("Y", FLAT, "sub")),
                         (("Y", FLAT, "sup"), ("X", FLAT, "sub"))),
    ("fR2", "reverse_mirror"): ((("X", FLAT, "sub"), ("Y", FLAT, "sup")),
                                (("Y", FLAT, "sub"), ("X", FLAT, "sup"))),
    ("vR1", "vp_first"): ((("X", VIRT, "v+"), ("X", VIRT, "v-")),),
    ("vR1", "vm_first"): ((("X", VIRT, "v-"), ("X", VIRT, "v+")),),
    ("vR2", "direct"): ((("X", VIRT, "v+"), ("Y", VIRT, "v-")),
                        (("X", VIRT, "v-"), ("Y", VIRT, "v+"))),
    ("vR2", "mirror"): ((("X", VIRT, "v-"), ("Y", VIRT, "v+")),
                        (("X", VIRT, "v+"), ("Y", VIRT, "v-"))),
    ("vR2", "reverse"): ((("X", VIRT, "v+"), ("Y", VIRT, "v-")),
                         (("Y", VIRT, "v+"), ("X", VIRT, "v-"))),
    ("vR2", "reverse_mirror"): ((("X", VIRT, "v-"), ("Y", VIRT, "v+")),
                                (("Y", VIRT, "v-"), ("X", VIRT, "v+"))),
}


# ---------------------------------------------------------------------------
# rewrite configurations
#
# A triangle configuration is kinds:firsts:prims where kinds gives the
# crossing kinds at A=(strand0,strand1), B=(strand0,strand2),
# C=(strand1,strand2); firsts says per strand which of its two
# crossings it meets first; prims says per crossing which strand takes
# the sup (or v+) role.  The list below is exactly the set of sound
# configurations found by exhaustive boundary-solution search.

_SOUND_TRIANGLES = """
FFF:000:000 FFF:000:111 FFF:001:011 FFF:001:100 FFF:010:010 FFF:010:101
FFF:011:001 FFF:011:110 FFF:100:001 FFF:100:110 FFF:101:010 FFF:101:101
FFF:110:011 FFF:110:100 FFF:111:000 FFF:111:111 SFF:000:000 SFF:000:111
SFF:001:011 SFF:001:100 SFF:010:010 SFF:010:101 SFF:011:001 SFF:011:110
SFF:100:001 SFF:100:110 SFF:101:010 SFF:101:101 SFF:110:011 SFF:110:100
SFF:111:000 SFF:111:111 FSF:000:000 FSF:000:111 FSF:001:011 FSF:001:100
FSF:010:010 FSF:010:101 FSF:011:001 FSF:011:110 FSF:100:001 FSF:100:110
FSF:101:010 FSF:101:101 FSF:110:011 FSF:110:100 FSF:111:000 FSF:111:111
FFS:000:000 FFS:000:111 FFS:001:011 FFS:001:100 FFS:010:010 FFS:010:101
FFS:011:001 FFS:011:110 FFS:100:001 FFS:100:110 FFS:101:010 FFS:101:101
FFS:110:011 FFS:110:100 FFS:111:000 FFS:111:111 VVV:000:000 VVV:000:001
VVV:000:010 VVV:000:011 VVV:000:100 VVV:000:101 VVV:000:110 VVV:000:111
VVV:001:000 VVV:001:001 VVV:001:010 VVV:001:011 VVV:001:100 VVV:001:101
VVV:001:110 VVV:001:111 VVV:010:000 VVV:010:001 VVV:010:010 VVV:010:011
VVV:010:100 VVV:010:101 VVV:010:110 VVV:010:111 VVV:011:000 VVV:011:001
VVV:011:010 VVV:011:011 VVV:011:100 VVV:011:101 VVV:011:110 VVV:011:111
VVV:100:000 VVV:100:001 VVV:100:010 VVV:100:011 VVV:100:100 VVV:100:101
VVV:100:110 VVV:100:111 VVV:101:000 VVV:101:001 VVV:101:010 VVV:101:011
VVV:101:100 VVV:101:101 VVV:101:110 VVV:101:111 VVV:110:000 VVV:110:001
VVV:110:010 VVV:110:011 VVV:110:100 VVV:110:101 VVV:110:110 VVV:110:111
VVV:111:000 VVV:111:001 VVV:111:010 VVV:111:011 VVV:111:100 VVV:111:101
VVV:111:110 VVV:111:111 FVV:000:000 FVV:000:001 FVV:000:010 FVV:000:011
FVV:000:100 FVV:000:101 FVV:000:110 FVV:000:111 FVV:001:000 FVV:001:001
FVV:001:010 FVV:001:011 FVV:001:100 FVV:001:101 FVV:001:110 FVV:001:111
FVV:010:000 FVV:010:001 FVV:010:010 FVV:010:011 FVV:010:100 FVV:010:101
FVV:010:110 FVV:010:111 FVV:011:000 FVV:011:001 FVV:011:010 FVV:011:011
FVV:011:100 FVV:011:101 FVV:011:110 FVV:011:111 FVV:100:000 FVV:100:001
FVV:100:010 FVV:100:011 FVV:100:100 FVV:100:101 FVV:100:110 FVV:100:111
FVV:101:000 FVV:101:001 FVV:101:010 FVV:101:011 FVV:101:100 FVV:101:101
FVV:101:110 FVV:101:111 FVV:110:000 FVV:110:001 FVV:110:010 FVV:110:011
FVV:110:100 FVV:110:101 FVV:110:110 FVV:110:111 FVV:111:000 FVV:111:001
FVV:111:010 FVV:111:011 FVV:111:100 FVV:111:101 FVV:111:110 FVV:111:111
VFV:000:000 VFV:000:001 VFV:000:010 VFV:000:011 VFV:000:100 VFV:000:101
VFV:000:110 VFV:000:111 VFV:001:000 VFV:001:001 VFV:001:010 VFV:001:011
VFV:001:100 VFV:001:101 VFV:001:110 VFV:001:111 VFV:010:000 VFV:010:001
VFV:010:010 VFV:010:011 VFV:010:100 VFV:010:101 VFV:010:110 VFV:010:111
VFV:011:000 VFV:011:001 VFV:011:010 VFV:011:011 VFV:011:100 VFV:011:101
VFV:011:110 VFV:011:111 VFV:100:000 VFV:100:001 VFV:100:010 VFV:100:011
VFV:100:100 VFV:100:101 VFV:100:110 VFV:100:111 VFV:101:000 VFV:101:001
VFV:101:010 VFV:101:011 VFV:101:100 VFV:101:101 VFV:101:110 VFV:101:111
VFV:110:000 VFV:110:001 VFV:110:010 VFV:110:011 VFV:110:100 VFV:110:101
VFV:110:110 VFV:110:111 VFV:111:000 VFV:111:001 VFV:111:010 VFV:111:011
VFV:111:100 VFV:111:101 VFV:111:110 VFV:111:111 VVF:000:000 VVF:000:001
VVF:000:010 VVF:000:011 VVF:000:100 VVF:000:101 VVF:000:110 VVF:000:111
VVF:001:000 VVF:001:001 VVF:001:010 VVF:001:011 VVF:001:100 VVF:001:101
VVF:001:110 VVF:001:111 VVF:010:000 VVF:010:001 VVF:010:010 VVF:010:011
VVF:010:100 VVF:010:101 VVF:010:110 VVF:010:111 VVF:011:000 VVF:011:001
VVF:011:010 VVF:011:011 VVF:011:100 VVF:011:101 VVF:011:110 VVF:011:111
VVF:100:000 VVF:100:001 VVF:100:010 VVF:100:011 VVF:100:100 VVF:100:101
VVF:100:110 VVF:100:111 VVF:101:000 VVF:101:001 VVF:101:010 VVF:101:011
VVF:101:100 VVF:101:101 VVF:101:110 VVF:101:111 VVF:110:000 VVF:110:001
VVF:110:010 VVF:110:011 VVF:110:100 VVF:110:101 VVF:110:110 VVF:110:111
VVF:111:000 VVF:111:001 VVF:111:010 VVF:111:011 VVF:111:100 VVF:111:101
VVF:111:110 VVF:111:111
"""

_TRIANGLE_MOVE = {"FFF": "fR3", "SFF": "sR3", "FSF": "sR3", "FFS": "sR3",
                  "VVV": "vR3", "FVV": "mixed", "VFV": "mixed", "VVF": "mixed"}

# the two sides of the direct singular slide: the flat crossing moves
# from before the singular crossing to after it on both strands
_SLIDE_SIDES = (
    ("flat_first", ((("X", FLAT, "sup"), ("Y", SING, "sub")),
                    (("X", FLAT, "sub"), ("Y", SING, "sup")))),
    ("sing_first", ((("X", SING, "sup"), ("Y", FLAT, "sub")),
                    (("X", SING, "sub"), ("Y", FLAT, "sup")))),
)

# antiparallel slide (the strands meet the two crossings in opposite
# orders): sound by boundary-solution equivalence, but kept out of the
# primitive catalog as the reverse singular R2 derived move
_REVERSE_SLIDE_SIDES = (
    ("sup_lead", ((("X", FLAT, "sup"), ("Y", SING, "sub")),
                  (("Y", SING, "sup"), ("X", FLAT, "sub")))),
    ("sub_lead", ((("X", FLAT, "sub"), ("Y", SING, "sup")),
                  (("Y", SING, "sub"), ("X", FLAT, "sup")))),
)

_CROSS_STRANDS = {"A": (0, 1), "B": (0, 2), "C": (1, 2)}
_STRAND_CROSSINGS = {0: "AB", 1: "AC", 2: "BC"}
_PRIMARY_ROLES = {FLAT: ("sup", "sub"), SING: ("sup", "sub"), VIRT: ("v+", "v-")}


def _config_strands(kinds: str, firsts: str, prims: str) -> list:
    """Expand a kinds:firsts:prims config into per-strand pass templates."""
    kind_of = dict(zip("ABC", kinds))
    roles = {}
    for ci, cx in enumerate("ABC"):
        p, q = _PRIMARY_ROLES[kind_of[cx]]
        s_pair = _CROSS_STRANDS[cx]
        bit = int(prims[ci])
        roles[(cx, s_pair[bit])] = p
        roles[(cx, s_pair[1 - bit])] = q
    strands = []
    for s in range(3):
        xs = _STRAND_CROSSINGS[s]
        order = xs if firsts[s] == "0" else xs[::-1]
        strands.append(tuple((cx, kind_of[cx], roles[(cx, s)]) for cx in order))
    return strands


def _canonical_descriptor(strands) -> tuple:
    """Relabel crossings by first appearance across the ordered strands."""
    names = {}
    desc = []
    for st in strands:
        seg = []
        for cx, kind, role in st:
            idx = names.setdefault(cx, len(names))
            seg.append((idx, kind, role))
        desc.append(tuple(seg))
    return tuple(desc)


def _expand_table(entries, action: str) -> dict:
    """Close a config list under strand reordering, keyed by descriptor."""
    table = {}
    for move, variant, strands in entries:
        for perm in itertools.permutations(range(len(strands))):
            desc = _canonical_descriptor([strands[i] for i in perm])
            table.setdefault(desc, (move, variant, action))
    return table


def _triangle_entries(packed: str):
    for tok in packed.split():
        kinds, firsts, prims = tok.split(":")
        yield (_TRIANGLE_MOVE.get(kinds, "forbidden"), tok,
               _config_strands(kinds, firsts, prims))


def _slide_entries(sides, move: str):
    for variant, strands in sides:
        yield (move, variant, strands)


_REWRITES = _expand_table(_triangle_entries(_SOUND_TRIANGLES), "swap")
_REWRITES.update(_expand_table(_slide_entries(_SLIDE_SIDES, "sR2"), "slide"))

# forbidden flat-flat-virtual triangles, every role/order assignment;
# deliberately not merged into _REWRITES
_FORBIDDEN = _expand_table(
    ((move, tok, strands) for move, tok, strands in _triangle_entries(
        " ".join(f"{k}:{f0}{f1}{f2}:{p0}{p1}{p2}"
                 for k in ("FFV", "FVF", "VFF")
                 for f0 in "01" for f1 in "01" for f2 in "01"
                 for p0 in "01" for p1 in "01" for p2 in "01"))),
    "swap")

_REVERSE_SLIDE = _expand_table(
    _slide_entries(_REVERSE_SLIDE_SIDES, "sR2_reverse"), "slide")


# ---------------------------------------------------------------------------
# matching

def _semiarc_positions(code: PassCode) -> list:
    out = []
    for ci, comp in enumerate(code.components):
        for i in range(max(len(comp), 1)):
            out.append((ci, i))
    return out


def _segments(code: PassCode) -> list:
    """Non-wrapping adjacent pass pairs whose passes sit at distinct
    crossings (candidate rewrite strands)."""
    out = []
    for ci, comp in enumerate(code.components):
        for i in range(len(comp) - 1):
            if comp[i].crossing != comp[i + 1].crossing:
                out.append((ci, i))
    return out


def _kink_sites(code: PassCode, kind: str) -> list:
    """Adjacent pairs that are the two passes of one crossing of `kind`."""
    out = []
    for ci, comp in enumerate(code.components):
        for i in range(len(comp) - 1):
            if comp[i].kind == kind and comp[i].crossing == comp[i + 1].crossing:
                out.append((ci, i))
    return out


def _disjoint(sites) -> bool:
    for (c1, i1), (c2, i2) in itertools.combinations(sites, 2):
        if c1 == c2 and abs(i1 - i2) < 2:
            return False
    return True


def _site_passes(code: PassCode, site) -> list:
    """The two passes of each segment site, as one list per segment."""
    segs = []
    for ci, i in site:
        comp = code.components[ci]
        if i < 0 or i + 1 >= len(comp):
            raise MoveError(f"no segment at {(ci, i)}")
        segs.append((comp[i], comp[i + 1]))
    return segs


def _descriptor_at(code: PassCode, site) -> tuple:
    segs = _site_passes(code, site)
    crossings = [p.crossing for seg in segs for p in seg]
    for x in set(crossings):
        if crossings.count(x) != 2:
            raise MoveError(f"crossing {x} does not occur twice in the site")
    return _canonical_descriptor(
        [tuple((p.crossing, p.kind, p.role) for p in seg) for seg in segs])


def _match_segment(passes, template, binding) -> bool:
    for p, (ph, kind, role) in zip(passes, template):
        if p.kind != kind or p.role != role:
            return False
        if ph in binding:
            if binding[ph] != p.crossing:
                return False
        elif p.crossing in binding.values():
            return False
        else:
            binding[ph] = p.crossing
    return True


def _delete_matches(code: PassCode, template) -> list:
    """Sites where the insert template's segments appear verbatim."""
    segs = _segments(code) + _kink_sites(code, template[0][0][1])
    found = []
    if len(template) == 1:
        for s in segs:
            if _match_segment(_site_passes(code, (s,))[0], template[0], {}):
                found.append((s,))
        return found
    for s0, s1 in itertools.permutations(segs, 2):
        if not _disjoint((s0, s1)):
            continue
        binding = {}
        (p0, p1) = _site_passes(code, (s0, s1))
        if _match_segment(p0, template[0], binding) and \
                _match_segment(p1, template[1], binding):
            found.append((s0, s1))
    return found


def _rewrite_matches(code: PassCode, table) -> list:
    """(site, move, variant, action) for every table descriptor present."""
    segs = _segments(code)
    found = []
    sizes = {len(d) for d in table}
    for k in sorted(sizes):
        for combo in itertools.combinations(segs, k):
            if not _disjoint(combo):
                continue
            try:
                desc = _descriptor_at(code, combo)
            except MoveError:
                continue
            hit = table.get(desc)
            if hit:
                found.append((combo, *hit))
    return found


# ---------------------------------------------------------------------------
# application

def _fresh_ids(code: PassCode, template) -> dict:
    used = {}
    for kind, cid in code.crossings():
        used[kind] = max(used.get(kind, 0), cid)
    ids = {}
    for seg in template:
        for ph, kind, _ in seg:
            if ph not in ids:
                used[kind] = used.get(kind, 0) + 1
                ids[ph] = (kind, used[kind])
    return ids


def _insert(code: PassCode, m: MoveSpec) -> PassCode:
    template = _INSERTS.get((m.move, m.variant))
    if template is None:
        raise MoveError(f"unknown insert {m.move}/{m.variant}")
    if len(m.site) != len(template):
        raise MoveError(f"{m.move} needs {len(template)} sites")
    positions = _semiarc_positions(code)
    for pos in m.site:
        if pos not in positions:
            raise MoveError(f"no semiarc at {pos}")
    if len(set(m.site)) != len(m.site):
        raise MoveError("insert sites must be distinct")
    ids = _fresh_ids(code, template)
    comps = [list(c) for c in code.components]
    order = sorted(range(len(template)), key=lambda k: m.site[k], reverse=True)
    for k in order:
        ci, i = m.site[k]
        passes = [Pass(kind, ids[ph][1], role) for ph, kind, role in template[k]]
        comps[ci][i:i] = passes
    return PassCode(tuple(tuple(c) for c in comps))


def _delete(code: PassCode, m: MoveSpec) -> PassCode:
    template = _INSERTS.get((m.move, m.variant))
    if template is None:
        raise MoveError(f"unknown delete {m.move}/{m.variant}")
    if not _disjoint(m.site):
        raise MoveError("delete sites overlap")
    binding = {}
    segs = _site_passes(code, m.site)
    if len(segs) != len(template) or not all(
            _match_segment(seg, tmpl, binding)
            for seg, tmpl in zip(segs, template)):
        raise MoveError(f"{m.move}/{m.variant} pattern absent at {m.site}")
    drop = sorted(((ci, j) for ci, i in m.site for j in (i, i + 1)), reverse=True)
    comps = [list(c) for c in code.components]
    for ci, j in drop:
        del comps[ci][j]
    return PassCode(tuple(tuple(c) for c in comps))


_FLIP = {"sup": "sub", "sub": "sup"}


def _apply_rewrite(code: PassCode, site, action: str) -> PassCode:
    comps = [list(c) for c in code.components]
    for ci, i in site:
        a, b = comps[ci][i], comps[ci][i + 1]
        if action == "slide":
            a = Pass(a.kind, a.cid, _FLIP[a.role])
            b = Pass(b.kind, b.cid, _FLIP[b.role])
        comps[ci][i], comps[ci][i + 1] = b, a
    return PassCode(tuple(tuple(c) for c in comps))


def apply_move(code: PassCode, m: MoveSpec) -> PassCode:
    """Apply one catalog move; raises MoveError on pattern mismatch.

    Rewrites (direction `apply`) are involutive at their site, so the
    same MoveSpec undoes them; inserts are undone by the delete of the
    same variant at the landing site (see inverse_of).
    """
    if m.direction == "insert":
        return _insert(code, m)
    if m.direction == "delete":
        return _delete(code, m)
    if m.direction != "apply":
        raise MoveError(f"unknown direction {m.direction!r}")
    desc = _descriptor_at(code, m.site)
    hit = _REWRITES.get(desc)
    if hit is None or hit[0] != m.move:
        raise MoveError(f"{m.move} pattern absent at {m.site}")
    move, variant, action = hit
    if variant != m.variant:
        raise MoveError(f"variant mismatch at {m.site}: found {variant}")
    return _apply_rewrite(code, m.site, action)


def inverse_of(code_after: PassCode, m: MoveSpec) -> MoveSpec:
    """The MoveSpec undoing m, given the code m produced.

    Rewrites are involutions on their site but the rewritten pattern
    carries its own variant tag, read back from the resulting code.
    """
    if m.direction == "apply":
        hit = _REWRITES.get(_descriptor_at(code_after, m.site))
        if hit is None:
            raise MoveError(f"no rewrite pattern at {m.site} after {m.move}")
        return MoveSpec(hit[0], "apply", m.site, hit[1])
    if m.direction == "insert":
        landed = []
        for ci, i in m.site:
            shift = 2 * sum(1 for cj, j in m.site if cj == ci and j < i)
            landed.append((ci, i + shift))
        return MoveSpec(m.move, "delete", tuple(landed), m.variant)
    # delete: re-insert at the collapsed positions (crossing ids are
    # regenerated, so compare the round trip with canonical())
    sites = []
    for ci, i in m.site:
        shift = 2 * sum(1 for cj, j in m.site if cj == ci and j < i)
        sites.append((ci, i - shift))
    return MoveSpec(m.move, "insert", tuple(sites), m.variant)


def applicable_moves(code: PassCode) -> list:
    """Every applicable (move, direction, site, variant), sorted."""
    out = []
    positions = _semiarc_positions(code)
    for (move, variant), template in sorted(_INSERTS.items()):
        if len(template) == 1:
            out.extend(MoveSpec(move, "insert", (p,), variant) for p in positions)
        else:
            out.extend(MoveSpec(move, "insert", (p, q), variant)
                       for p in positions for q in positions if p != q)
        out.extend(MoveSpec(move, "delete", site, variant)
                   for site in _delete_matches(code, template))
    for site, move, variant, _ in _rewrite_matches(code, _REWRITES):
        out.append(MoveSpec(move, "apply", site, variant))
    return sorted(out)


def forbidden_sites(code: PassCode) -> list:
    """Sites where the forbidden flat-flat-virtual triangle matches."""
    return sorted(
        MoveSpec("forbidden", "apply", site, variant)
        for site, _, variant, _ in _rewrite_matches(code, _FORBIDDEN))


def apply_forbidden(code: PassCode, m: MoveSpec) -> PassCode:
    """Apply the forbidden move; used only to demonstrate non-invariance."""
    desc = _descriptor_at(code, m.site)
    if _FORBIDDEN.get(desc, (None, None))[1] != m.variant:
        raise MoveError(f"forbidden pattern absent at {m.site}")
    return _apply_rewrite(code, m.site, "swap")


def reverse_slide_sites(code: PassCode) -> list:
    """Sites of the reverse singular R2 (a derived move, not catalog)."""
    return sorted(
        MoveSpec("sR2_reverse", "apply", site, variant)
        for site, _, variant, _ in _rewrite_matches(code, _REVERSE_SLIDE))


def apply_reverse_slide(code: PassCode, m: MoveSpec) -> PassCode:
    desc = _descriptor_at(code, m.site)
    if _REVERSE_SLIDE.get(desc, (None, None))[1] != m.variant:
        raise MoveError(f"reverse slide pattern absent at {m.site}")
    return _apply_rewrite(code, m.site, "slide")


# ---------------------------------------------------------------------------
# canonical labels, random codes, random moves

def canonical(code: PassCode) -> PassCode:
    """Normal form that also relabels crossing ids, for comparisons that
    must ignore id choices (e.g. delete-then-reinsert round trips).

    Minimizes the relabeled text over every rotation of each component
    and every reordering of equal-length components; an isomorphism of
    codes can only map components of equal length onto each other, so
    isomorphic codes share this normal form.
    """
    comps = sorted(code.components, key=len)
    blocks = []
    for _, group in itertools.groupby(comps, key=len):
        blocks.append(list(group))
    rotated = []
    for block in blocks:
        perms = [block] if len(block[0]) == 0 else \
            [list(p) for p in itertools.permutations(block)]
        rotated.append(perms)
    best = None
    for ordering in itertools.product(*rotated):
        ordered = [c for block in ordering for c in block]
        opts = [[c] if len(c) <= 1 else
                [c[i:] + c[:i] for i in range(len(c))] for c in ordered]
        for combo in itertools.product(*opts):
            ids = {}
            out_comps = []
            for comp in combo:
                out = []
                for p in comp:
                    key = p.crossing
                    if key not in ids:
                        ids[key] = sum(1 for k in ids if k[0] == p.kind) + 1
                    out.append(Pass(p.kind, ids[key], p.role, p.sign))
                out_comps.append(tuple(out))
            cand = PassCode(tuple(out_comps))
            if best is None or cand.text() < best.text():
                best = cand
    return best


def random_code(budget: dict, seed: int = 0) -> PassCode:
    """Random valid code within per-kind crossing bounds.

    budget keys: 'F', 'S', 'V' bound the number of crossings of each
    kind; 'components' fixes the component count (default 1).  An all-
    zero budget yields the crossing-free unknot.
    """
    rng = random.Random(seed)
    ncomp = max(1, budget.get("components", 1))
    passes = []
    for kind in (FLAT, SING, VIRT):
        count = rng.randint(0, budget.get(kind, 0))
        r1, r2 = _PRIMARY_ROLES[kind]
        for cid in range(1, count + 1):
            passes.append(Pass(kind, cid, r1))
            passes.append(Pass(kind, cid, r2))
    rng.shuffle(passes)
    comps = [[] for _ in range(ncomp)]
    for p in passes:
        comps[rng.randrange(ncomp)].append(p)
    return PassCode(tuple(tuple(c) for c in comps))


def random_applicable_move(code: PassCode, seed: int = 0):
    """Uniform choice among applicable (move, site, variant) triples,
    deterministic in the seed; None when no move applies."""
    moves = applicable_moves(code)
    if not moves:
        return None
    return random.Random(seed).choice(moves)


# ---------------------------------------------------------------------------
# randomized invariance trials

_REWRITE_IDS = ("fR3", "vR3", "mixed", "sR2", "sR3")
_INSERT_IDS = ("fR1", "fR2", "vR1", "vR2")


def _materialize(desc) -> PassCode:
    """A code realizing a rewrite descriptor, one component per segment."""
    comps = []
    for seg in desc:
        comps.append(tuple(Pass(kind, idx + 1, role) for idx, kind, role in seg))
    return PassCode(tuple(comps))


def _decorate(code: PassCode, rng: random.Random, kinds: str) -> PassCode:
    """Append unrelated crossings after the existing passes so rewrite
    sites keep their positions."""
    comps = [list(c) for c in code.components]
    for _ in range(rng.randint(0, 2)):
        kind = rng.choice(kinds)
        cid = max((c for k, c in code.crossings() if k == kind), default=0) \
            + rng.randint(1, 3)
        r1, r2 = _PRIMARY_ROLES[kind]
        ci = rng.randrange(len(comps))
        comps[ci] += [Pass(kind, cid, r1), Pass(kind, cid, r2)]
        code = PassCode(tuple(tuple(c) for c in comps))
    if rng.random() < 0.3:
        code = PassCode(tuple(code.components) + ((),))
    return code


def _descriptors_by_move() -> dict:
    by_move = {}
    for desc, (move, variant, _) in sorted(_REWRITES.items()):
        by_move.setdefault(move, []).append((desc, variant))
    return by_move


def _trial_case(move: str, kinds: str, rng: random.Random, by_move: dict):
    """A (code, MoveSpec) pair exercising the given move id."""
    if move in _INSERT_IDS:
        candidates = []
        while not candidates:
            budget = {k: 2 for k in kinds}
            budget["components"] = rng.randint(1, 2)
            code = random_code(budget, seed=rng.randrange(2 ** 30))
            candidates = [m for m in applicable_moves(code) if m.move == move]
        return code, rng.choice(candidates)
    pool = [(d, v) for d, v in by_move[move]
            if all(kind in kinds for seg in d for _, kind, _ in seg)]
    desc, variant = rng.choice(pool)
    code = _decorate(_materialize(desc), rng, kinds)
    site = tuple((ci, 0) for ci in range(len(desc)))
    return code, MoveSpec(move, "apply", site, variant)


def run_move_trials(bundles, trials: int = 500, seed: int = 0) -> dict:
    """Randomized move-invariance suite.

    bundles: sequence of (name, StructureBundle).  Each bundle is lifted
    by whichever trivial extensions its table actually admits; random
    codes for it use only the crossing kinds it can then color.  Every
    trial applies one move and its inverse, checking that the enhanced
    invariant is unchanged by the move and that the inverse restores
    the code.  Deterministic in the seed.
    """
    from .algebra import AxiomError, VirtualExtension, StructureBundle, \
        identity_perm, trivial_singular
    from .diagram import extract_relations
    from .present import enhanced_invariant

    lifted = []
    for name, b in bundles:
        singular = b.singular
        if singular is None:
            try:
                StructureBundle(b.table, trivial_singular(b.n))
                singular = trivial_singular(b.n)
            except AxiomError:
                singular = None
        virtual = b.virtual or VirtualExtension(identity_perm(b.n))
        kinds = FLAT + (SING if singular else "") + VIRT
        lifted.append((name, StructureBundle(b.table, singular, virtual), kinds))

    if not any(SING in kinds for _, _, kinds in lifted):
        raise ValueError("move trials need at least one bundle with a "
                         "singular extension to exercise sR2/sR3")
    rng = random.Random(seed)
    per_move = {m: 0 for m in MOVE_IDS}
    failures = []
    by_move = _descriptors_by_move()
    ids = [m for m in MOVE_IDS]
    for t in range(trials):
        move = ids[t % len(ids)]
        options = [x for x in lifted if
                   (SING in x[2] or move not in ("sR2", "sR3"))]
        name, bundle, kinds = options[(t // len(ids)) % len(options)]
        code, spec = _trial_case(move, kinds, rng, by_move)
        before = enhanced_invariant(extract_relations(code), bundle)
        moved = apply_move(code, spec)
        after = enhanced_invariant(extract_relations(moved), bundle)
        restored = apply_move(moved, inverse_of(moved, spec))
        ok = (before == after and
              canonical(restored) == canonical(code))
        per_move[move] += 1
        if not ok:
            failures.append({"trial": t, "bundle": name, "move": spec.move,
                             "direction": spec.direction,
                             "site": list(spec.site), "variant": spec.variant,
                             "code": code.text(),
                             "before": before.as_dict(), "after": after.as_dict()})
    return {"trials": trials, "seed": seed, "per_move": per_move,
            "failures": failures}
