"""Oriented link diagram model: PD codes, braid closures, mirrors.

A crossing is stored as the 4-tuple of incident arc identifiers listed
counterclockwise starting from the incoming under-strand, plus a sign.
Sign +1 means the over-strand passes left-to-right relative to the
under-strand orientation, which in the ccw listing puts the incoming
over-strand at position 3; sign -1 puts it at position 1.
"""

import json
import re
from dataclasses import dataclass, field

from .errors import (
    ArcCountError,
    DisconnectedArcCycle,
    IndexOutOfRange,
    MalformedSyntax,
)

_PD_TOKEN = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


@dataclass(frozen=True)
class PDCrossing:
    arcs: tuple          # (a, b, c, d) ccw from incoming under-strand
    sign: int            # +1 or -1

    @property
    def over_in(self):
        """Position (1 or 3) of the incoming over-strand arc."""
        return 3 if self.sign > 0 else 1

    @property
    def under_in(self):
        return self.arcs[0]

    @property
    def under_out(self):
        return self.arcs[2]

    @property
    def over_in_arc(self):
        return self.arcs[self.over_in]

    @property
    def over_out_arc(self):
        return self.arcs[(self.over_in + 2) % 4]


@dataclass(frozen=True)
class Diagram:
    crossings: tuple = ()
    extra_unknots: int = 0   # closed components that touch no crossing
    name: str = None
    _components: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self._components is None:
            object.__setattr__(self, "_components", _trace_components(self.crossings))

    @property
    def signs(self):
        return tuple(c.sign for c in self.crossings)

    @property
    def components(self):
        """Arc cycles (tuples of arc ids in traversal order), one per
        crossing-bearing component."""
        return self._components

    @property
    def component_count(self):
        return len(self._components) + self.extra_unknots

    @property
    def arcs(self):
        out = set()
        for c in self.crossings:
            out.update(c.arcs)
        return out

    def writhe(self):
        return sum(self.signs)

    def next_arc(self, arc):
        """The arc following ``arc`` in its oriented component."""
        for c in self.crossings:
            if c.under_in == arc:
                return c.under_out
            if c.over_in_arc == arc:
                return c.over_out_arc
        raise KeyError(arc)

    def crossing_entered_by(self, arc):
        """Index of the crossing at which ``arc`` is incoming, plus whether
        it enters as the over-strand."""
        for i, c in enumerate(self.crossings):
            if c.under_in == arc:
                return i, False
            if c.over_in_arc == arc:
                return i, True
        raise KeyError(arc)

    def to_json(self):
        return {
            "crossings": [list(c.arcs) for c in self.crossings],
            "signs": list(self.signs),
            "components": [list(comp) for comp in self.components],
            "extra_unknots": self.extra_unknots,
        }

    @classmethod
    def from_json(cls, obj):
        crossings = tuple(
            PDCrossing(tuple(arcs), sign)
            for arcs, sign in zip(obj["crossings"], obj["signs"])
        )
        return cls(crossings, extra_unknots=obj.get("extra_unknots", 0))


@dataclass(frozen=True)
class BraidWord:
    strand_count: int
    letters: tuple

    def permutation(self):
        """The underlying permutation (as a tuple) of the braid word."""
        perm = list(range(self.strand_count))
        for v in self.letters:
            i = abs(v) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return tuple(perm)


def _trace_components(crossings):
    nxt = {}
    incoming = {}
    for c in crossings:
        for arc, out in ((c.under_in, c.under_out),
                         (c.over_in_arc, c.over_out_arc)):
            if arc in nxt:
                raise DisconnectedArcCycle(
                    "arc %r is incoming at two crossings" % (arc,))
            nxt[arc] = out
        incoming[c.under_out] = incoming.get(c.under_out, 0) + 1
        incoming[c.over_out_arc] = incoming.get(c.over_out_arc, 0) + 1
    if set(incoming) != set(nxt) or any(v != 1 for v in incoming.values()):
        raise DisconnectedArcCycle("arc in/out occurrences do not pair up")
    seen = set()
    comps = []
    for start in sorted(nxt):
        if start in seen:
            continue
        cyc = []
        a = start
        while a not in seen:
            seen.add(a)
            cyc.append(a)
            a = nxt[a]
        if a != start:
            raise DisconnectedArcCycle("arc cycle through %r does not close" % (start,))
        comps.append(tuple(cyc))
    return tuple(comps)


def parse_pd(text, extra_unknots=0, name=None):
    """Parse a PD code string like ``"X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]"``.

    Crossing signs are recovered by propagating the orientation
    constraint that every arc is incoming at exactly one crossing and
    outgoing at exactly one.
    """
    stripped = _PD_TOKEN.sub("", text)
    if stripped.strip().strip(","):
        raise MalformedSyntax("unrecognized input near %r" % stripped.strip()[:30])
    tuples = [tuple(int(g) for g in m.groups()) for m in _PD_TOKEN.finditer(text)]
    if not tuples:
        return Diagram((), extra_unknots=extra_unknots, name=name)

    counts = {}
    for t in tuples:
        for a in t:
            counts[a] = counts.get(a, 0) + 1
    bad = sorted(a for a, n in counts.items() if n != 2)
    if bad:
        raise ArcCountError("arcs not appearing exactly twice: %s" % bad)

    signs = _resolve_signs(tuples)
    crossings = tuple(PDCrossing(t, s) for t, s in zip(tuples, signs))
    d = Diagram(crossings, extra_unknots=extra_unknots, name=name)
    d.components  # force validation
    return d


def _resolve_signs(tuples):
    """Assign each crossing's incoming-over position (hence its sign) so
    that every arc has one incoming and one outgoing occurrence."""
    occ = {}
    for ci, t in enumerate(tuples):
        for pos, a in enumerate(t):
            occ.setdefault(a, []).append((ci, pos))

    over_in = [None] * len(tuples)   # 1 or 3 per crossing
    # role[(ci, pos)] = "i" (incoming) or "o" (outgoing)
    role = {}
    for ci, t in enumerate(tuples):
        role[(ci, 0)] = "i"
        role[(ci, 2)] = "o"

    def set_over_in(ci, pos_in):
        if over_in[ci] is not None:
            if over_in[ci] != pos_in:
                raise DisconnectedArcCycle(
                    "inconsistent orientation at crossing %d" % ci)
            return []
        over_in[ci] = pos_in
        role[(ci, pos_in)] = "i"
        role[(ci, (pos_in + 2) % 4)] = "o"
        return [tuples[ci][pos_in], tuples[ci][(pos_in + 2) % 4]]

    def propagate(seed_arcs):
        work = list(seed_arcs)
        while work:
            arc = work.pop()
            pair = occ[arc]
            known = [role.get(d) for d in pair]
            if known[0] is not None and known[1] is not None:
                if known[0] == known[1]:
                    raise DisconnectedArcCycle(
                        "arc %r cannot be oriented consistently" % (arc,))
                continue
            for d, other_role in ((pair[0], known[1]), (pair[1], known[0])):
                if role.get(d) is None and other_role is not None:
                    want = "i" if other_role == "o" else "o"
                    ci, pos = d
                    pos_in = pos if want == "i" else (pos + 2) % 4
                    work.extend(set_over_in(ci, pos_in))

    propagate(list(occ))
    # Components that are never under-strands are orientation-free; fix
    # them deterministically as sign +1 at the lowest unresolved crossing.
    while None in over_in:
        ci = over_in.index(None)
        seeds = set_over_in(ci, 3)
        propagate(seeds)
    return [1 if p == 3 else -1 for p in over_in]


def parse_braid(text, strands):
    """Parse a braid word like ``"1 -2 1 -2"`` into a BraidWord."""
    if strands < 1:
        raise IndexOutOfRange("strand count must be >= 1")
    letters = []
    for tok in text.replace(",", " ").split():
        try:
            v = int(tok)
        except ValueError:
            raise MalformedSyntax("bad braid letter %r" % tok)
        if v == 0 or abs(v) >= strands:
            raise IndexOutOfRange(
                "letter %d out of range for %d strands" % (v, strands))
        letters.append(v)
    return BraidWord(strands, tuple(letters))


def braid_closure(b, name=None):
    """Close a braid into a Diagram.

    Strands run downward; a positive letter crosses the right strand
    over the left, giving a +1 crossing.
    """
    n = b.strand_count
    top = list(range(1, n + 1))
    cur = list(top)
    next_id = n + 1
    raw = []
    for v in b.letters:
        i = abs(v) - 1
        left, right = cur[i], cur[i + 1]
        bl, br = next_id, next_id + 1
        next_id += 2
        if v > 0:
            raw.append(((left, bl, br, right), 1))
        else:
            raw.append(((right, left, bl, br), -1))
        cur[i], cur[i + 1] = bl, br
    # close up: identify each bottom arc with the matching top arc
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for j in range(n):
        union(top[j], cur[j])
    # strand cycles that touch no crossing close into bare unknots
    used = {find(a) for t, _ in raw for a in t}
    extra = len({find(top[j]) for j in range(n)} - used)

    remap = {}
    crossings = []
    for t, s in raw:
        canon = []
        for a in t:
            r = find(a)
            if r not in remap:
                remap[r] = len(remap) + 1
            canon.append(remap[r])
        crossings.append(PDCrossing(tuple(canon), s))
    return Diagram(tuple(crossings), extra_unknots=extra, name=name)


def mirror(d):
    """Swap over- and under-strands at every crossing (negates all signs)."""
    out = []
    for c in d.crossings:
        k = c.over_in
        rotated = tuple(c.arcs[(i + k) % 4] for i in range(4))
        out.append(PDCrossing(rotated, -c.sign))
    return Diagram(tuple(out), extra_unknots=d.extra_unknots,
                   name=None if d.name is None else d.name + "*")


def writhe(d):
    return d.writhe()


def diagram_to_text(d):
    return " ".join("X[%d,%d,%d,%d]" % c.arcs for c in d.crossings)


def load_diagram(path_or_text, unknots=0):
    """Accept either a PD string or a path to a file/JSON document."""
    text = path_or_text
    try:
        obj = json.loads(text)
    except (ValueError, TypeError):
        obj = None
    if isinstance(obj, dict) and "crossings" in obj:
        return Diagram.from_json(obj)
    return parse_pd(text, extra_unknots=unknots)
