"""Encode diagrams as cyclic trace-words of W-segments and R-powers.

Each crossing contributes a 4-segment block
``W(under_in,w) W(w,over_out) W(over_in,w) W(w,under_out)``, blocks
ordered by first encounter along the oriented traversal.  Every segment
carries a precedence stamp recording when its strand piece is
traversed; the rewrite relations consult these stamps.

Merged segments inherit the minimum stamp of their parents and remember
the interior points they absorbed so concatenation stays invertible.
"""

from typing import NamedTuple

from .errors import MultiComponentInput


class Seg(NamedTuple):
    """One oriented piece of curve W(frm, to).

    A crossing point label is visited twice by the diagram (once on each
    strand); ``fpass``/``tpass`` record which visit each endpoint belongs
    to (0 = under-strand, 1 = over-strand), so that only genuine
    continuations of the same strand may concatenate.  ``interior``
    lists absorbed junction points as (label, left_stamp, right_stamp,
    pass), the stamps being those of the atomic pieces flanking the
    junction, for exact re-splitting.
    """
    frm: str
    to: str
    stamp: int = 0
    fpass: int = 0
    tpass: int = 0
    interior: tuple = ()
    comp: int = 1

    def is_loop(self):
        return self.frm == self.to and self.fpass == self.tpass


class Rpow(NamedTuple):
    """R^k braiding the pair of components named in ``pair``.

    Powers braiding different component pairs are distinct operators;
    they merge (and cancel) only when the pairs agree.
    """
    k: int
    pair: tuple = (1, 1)


class WilsonWord(NamedTuple):
    tokens: tuple

    def seg_count(self):
        return sum(1 for t in self.tokens if isinstance(t, Seg))

    def to_json(self):
        out = []
        for t in self.tokens:
            if isinstance(t, Seg):
                item = {"seg": [t.frm, t.to], "stamp": t.stamp,
                        "comp": t.comp}
                if t.fpass or t.tpass:
                    item["pass"] = [t.fpass, t.tpass]
                out.append(item)
            else:
                out.append({"rpow": t.k, "pair": list(t.pair)})
        return {"tokens": out}

    @classmethod
    def from_json(cls, obj):
        toks = []
        for item in obj["tokens"]:
            if "seg" in item:
                f, t = item["seg"]
                fp, tp = item.get("pass", [0, 0])
                toks.append(Seg(f, t, int(item.get("stamp", 0)), fp, tp,
                                comp=int(item.get("comp", 1))))
            else:
                toks.append(Rpow(int(item["rpow"]),
                                 tuple(item.get("pair", (1, 1)))))
        return cls(tuple(toks))


class CrossingPattern(NamedTuple):
    kind: str            # "positive" | "negative" | "none"
    tokens: tuple


def pattern_for_crossing(sign, z1, z2, z3, z4, w=None):
    """Token template for one crossing; (z1,z2) is the earlier strand.

    sign +1: strand (z1,z2) passes over; sign -1: it passes under;
    sign 0: no crossing (two free segments).
    """
    if sign > 0:
        return CrossingPattern(
            "positive", (Seg(z3, w, tpass=0), Seg(w, z2, fpass=1),
                         Seg(z1, w, tpass=1), Seg(w, z4, fpass=0)))
    if sign < 0:
        return CrossingPattern(
            "negative", (Seg(z1, w, tpass=0), Seg(w, z4, fpass=1),
                         Seg(z3, w, tpass=1), Seg(w, z2, fpass=0)))
    return CrossingPattern("none", (Seg(z1, z2), Seg(z3, z4)))


def _component_pieces(d, comp, compid):
    """Pieces (in_arc, crossing index, over?, out_arc, compid) of a component."""
    pieces = []
    for arc in comp:
        ci, over = d.crossing_entered_by(arc)
        c = d.crossings[ci]
        out = c.over_out_arc if over else c.under_out
        pieces.append((arc, ci, over, out, compid))
    return pieces


def _encode(d, schedule, z_of_arc):
    """Emit crossing blocks from a scheduled list of pieces.

    ``schedule`` is the global piece order; piece i gets stamps 2i, 2i+1.
    """
    w_of = {}
    block_order = []
    seg_at = {}   # (crossing, over?) -> (Seg(in,w), Seg(w,out))
    for i, (arc, ci, over, out, compid) in enumerate(schedule):
        if ci not in w_of:
            tag = "+" if d.crossings[ci].sign > 0 else "-"
            w_of[ci] = "w%d%s" % (len(w_of) + 1, tag)
            block_order.append(ci)
        w = w_of[ci]
        p = 1 if over else 0
        seg_at[(ci, over)] = (
            Seg(z_of_arc[arc], w, 2 * i, 0, p, comp=compid),
            Seg(w, z_of_arc[out], 2 * i + 1, p, 0, comp=compid),
        )
    tokens = []
    for ci in block_order:
        under_in, under_out = seg_at[(ci, False)]
        over_in, over_out = seg_at[(ci, True)]
        tokens.extend([under_in, over_out, over_in, under_out])
    return tokens


def _unknot_tokens(count, start_comp, start_stamp):
    return [Seg("u%d" % (i + 1), "u%d" % (i + 1),
                start_stamp + i, comp=start_comp + i)
            for i in range(count)]


def encode_knot(d, basepoint=None):
    """Wilson word of a 1-component diagram, traversed from ``basepoint``."""
    if d.component_count != 1:
        raise MultiComponentInput(
            "diagram has %d components" % d.component_count)
    if not d.crossings:
        return WilsonWord((Seg("z1", "z1", 0),))
    comp = d.components[0]
    if basepoint is not None:
        if basepoint not in comp:
            raise MultiComponentInput("basepoint arc %r not in component" % basepoint)
        k = comp.index(basepoint)
        comp = comp[k:] + comp[:k]
    z_of_arc = {arc: "z%d" % (i + 1) for i, arc in enumerate(comp)}
    schedule = _component_pieces(d, comp, 1)
    return WilsonWord(tuple(_encode(d, schedule, z_of_arc)))


def encode_link(d, ordering=None, basepoints=None):
    """Wilson word of a multi-component diagram.

    Components are interleaved in lockstep (round-robin over strand
    pieces) in the given ``ordering``; ``basepoints`` optionally fixes
    the starting arc of each component.
    """
    comps = list(d.components)
    if ordering is not None:
        comps = [comps[i] for i in ordering]
    if basepoints is not None:
        rotated = []
        for comp, bp in zip(comps, basepoints):
            if bp is None:
                rotated.append(comp)
            else:
                k = comp.index(bp)
                rotated.append(comp[k:] + comp[:k])
        comps = rotated

    z_of_arc = {}
    for comp in comps:
        for arc in comp:
            z_of_arc[arc] = "z%d" % (len(z_of_arc) + 1)

    piece_lists = [_component_pieces(d, comp, i + 1)
                   for i, comp in enumerate(comps)]
    schedule = []
    for t in range(max((len(p) for p in piece_lists), default=0)):
        for pieces in piece_lists:
            if t < len(pieces):
                schedule.append(pieces[t])
    tokens = _encode(d, schedule, z_of_arc)
    tokens.extend(_unknot_tokens(d.extra_unknots, len(comps) + 1,
                                 2 * len(schedule)))
    return WilsonWord(tuple(tokens))


def encode(d, **kw):
    """Dispatch to encode_knot or encode_link by component count."""
    if d.component_count <= 1:
        return encode_knot(d, **kw)
    return encode_link(d, **kw)
