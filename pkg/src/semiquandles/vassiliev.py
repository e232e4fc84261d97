"""Degree-one invariants of classical knot codes via crossing resolution.

Two formal sums are computed from a one-component classical code: the
smoothing sum S (each crossing smoothed, against a disjoint-unknot base
term) and the gluing sum G (each crossing made singular, against a
glued-kink base term).  Values live in the free abelian group on flat
link classes; classes are represented soundly-but-incompletely by
fingerprints of enhanced coloring invariants over a probe list of
structure bundles, so a difference of sums certifies inequivalence
while equality stays inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import StructureBundle
from .diagram import (PassCode, CodeError, extract_relations, flatten,
                      smooth_at, glue_at, glue_kink, disjoint_unknot,
                      CLASSICAL)
from .present import MissingExtensionError, enhanced_invariant


@dataclass(frozen=True)
class Fingerprint:
    """Tuple of enhanced-invariant polynomials, one per probe bundle.

    Comparable only across the same probe list; inequality of the
    fingerprints of two codes certifies the codes are inequivalent.
    """

    polynomials: tuple

    @classmethod
    def of(cls, code: PassCode, probes) -> "Fingerprint":
        pres = extract_relations(code)
        return cls(tuple(enhanced_invariant(pres, b).polynomial for b in probes))


@dataclass(frozen=True)
class FormalSum:
    """Finitely supported integer combination of fingerprints."""

    terms: tuple = ()      # sorted ((Fingerprint, coefficient), ...), no zeros

    @classmethod
    def from_dict(cls, d: dict) -> "FormalSum":
        items = tuple(sorted(
            ((fp, c) for fp, c in d.items() if c),
            key=lambda item: item[0].polynomials))
        return cls(items)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        d = self.as_dict()
        for fp, c in other.terms:
            d[fp] = d.get(fp, 0) + c
        return FormalSum.from_dict(d)

    def __neg__(self) -> "FormalSum":
        return FormalSum(tuple((fp, -c) for fp, c in self.terms))

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms


def _classical_crossings(code: PassCode) -> list:
    """(cid, sign) for each classical crossing of a one-component code."""
    if len(code.components) != 1:
        raise CodeError("the resolution sums are defined for one-component codes")
    out = []
    for p in code.components[0]:
        if p.kind == CLASSICAL and all(cid != p.cid for cid, _ in out):
            out.append((p.cid, p.sign))
    return out


def _signed_difference(code, sign, resolved, base, probes) -> dict:
    d = {}
    fp_res = Fingerprint.of(resolved, probes)
    fp_base = Fingerprint.of(base, probes)
    d[fp_res] = d.get(fp_res, 0) + sign
    d[fp_base] = d.get(fp_base, 0) - sign
    return d


def s_sum(code: PassCode, probes) -> FormalSum:
    """Smoothing sum: over each classical crossing d, add
    sign(d)*(fingerprint of the smoothing at d minus fingerprint of the
    flattened code with a disjoint unknot)."""
    acc: dict = {}
    base = disjoint_unknot(flatten(code))
    for cid, sign in _classical_crossings(code):
        for fp, c in _signed_difference(code, sign, smooth_at(code, cid),
                                        base, probes).items():
            acc[fp] = acc.get(fp, 0) + c
    return FormalSum.from_dict(acc)


def g_sum(code: PassCode, probes) -> FormalSum:
    """Gluing sum: over each classical crossing d, add
    sign(d)*(fingerprint of the code with d made singular minus
    fingerprint of the glued-kink base code).

    The glued codes carry hat relations, so every probe must have a
    singular extension.
    """
    lacking = [i for i, b in enumerate(probes) if not b.has_singular]
    if lacking:
        raise MissingExtensionError(
            f"gluing sum needs singular extensions; probes {lacking} lack one")
    acc: dict = {}
    base = glue_kink(code)
    for cid, sign in _classical_crossings(code):
        for fp, c in _signed_difference(code, sign, glue_at(code, cid),
                                        base, probes).items():
            acc[fp] = acc.get(fp, 0) + c
    return FormalSum.from_dict(acc)


def _witnesses(label: str, a: FormalSum, b: FormalSum) -> list:
    da, db = a.as_dict(), b.as_dict()
    out = []
    for fp in sorted(set(da) | set(db), key=lambda f: f.polynomials):
        ca, cb = da.get(fp, 0), db.get(fp, 0)
        if ca != cb:
            out.append({"invariant": label,
                        "term": list(fp.polynomials),
                        "coefficient_k1": ca,
                        "coefficient_k2": cb})
    return out


def distinguish(k1: PassCode, k2: PassCode, probes) -> dict:
    """Compare the resolution sums of two codes over shared probes.

    A difference in either sum certifies the codes are inequivalent;
    agreement is inconclusive and is never reported as equivalence.
    """
    s1, s2 = s_sum(k1, probes), s_sum(k2, probes)
    g1, g2 = g_sum(k1, probes), g_sum(k2, probes)
    witnesses = _witnesses("S", s1, s2) + _witnesses("G", g1, g2)
    s_differs = s1 != s2
    g_differs = g1 != g2
    return {
        "s_differs": s_differs,
        "g_differs": g_differs,
        "conclusion": "inequivalent" if (s_differs or g_differs) else "inconclusive",
        "witnesses": witnesses,
    }
