"""Kauffman-bracket state sum and the Jones polynomial.

Polynomials are exact integer Laurent polynomials.  The bracket lives in
the variable A; the Jones polynomial is returned in powers of t^(1/2)
(exponents are halves, A^(-4) = t).
"""

from fractions import Fraction

from .diagram import Diagram, PDCrossing, writhe
from .errors import TooManyCrossings, LinkOperand

MAX_CROSSINGS = 24


class Laurent:
    """Laurent polynomial with Fraction exponents and int coefficients."""

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for e, c in (coeffs or {}).items():
            if c:
                self.coeffs[Fraction(e)] = c

    @classmethod
    def term(cls, coeff, exp):
        return cls({Fraction(exp): coeff})

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.term(other, 0)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return Laurent({e: k * c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return Laurent(out)

    def is_zero(self):
        return not self.coeffs

    def substitute_power(self, factor):
        """Rescale every exponent by ``factor`` (variable change x -> y^factor)."""
        return Laurent({e * Fraction(factor): c for e, c in self.coeffs.items()})

    def to_json(self):
        return {str(e): c for e, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, obj):
        return cls({Fraction(e): int(c) for e, c in obj.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items()):
            parts.append("%+d*x^(%s)" % (c, e))
        return " ".join(parts)


def _loop_count(d, choices):
    """Loops after smoothing crossing i the A-way iff choices[i].

    The A-smoothing joins the crossing's (0,1) and (2,3) corners, the
    B-smoothing joins (1,2) and (3,0).
    """
    mate = {}
    for i, c in enumerate(d.crossings):
        if choices[i]:
            pairs = ((0, 1), (2, 3))
        else:
            pairs = ((1, 2), (3, 0))
        for p, q in pairs:
            mate[(i, p)] = (i, q)
            mate[(i, q)] = (i, p)
    ends = {}
    arc_mate = {}
    for i, c in enumerate(d.crossings):
        for p, a in enumerate(c.arcs):
            ends.setdefault(a, []).append((i, p))
    for a, ds in ends.items():
        d0, d1 = ds
        arc_mate[d0] = d1
        arc_mate[d1] = d0
    loops = 0
    seen = set()
    for start in mate:
        if start in seen:
            continue
        loops += 1
        cur = start
        while cur not in seen:
            seen.add(cur)
            nxt = arc_mate[cur]
            seen.add(nxt)
            cur = mate[nxt]
    return loops + d.extra_unknots


def kauffman_bracket(d):
    """State-sum bracket of a diagram, normalized to 1 on one circle."""
    n = len(d.crossings)
    if n > MAX_CROSSINGS:
        raise TooManyCrossings("%d crossings exceed the bracket cap" % n)
    if n == 0:
        loops = max(d.extra_unknots, 1)
        delta = Laurent({2: -1, -2: -1})
        out = Laurent.term(1, 0)
        for _ in range(loops - 1):
            out = out * delta
        return out
    delta = Laurent({2: -1, -2: -1})
    total = Laurent()
    for mask in range(1 << n):
        choices = [(mask >> i) & 1 for i in range(n)]
        a_count = sum(choices)
        loops = _loop_count(d, choices)
        term = Laurent.term(1, 2 * a_count - n)
        for _ in range(loops - 1):
            term = term * delta
        total = total + term
    return total


def jones(d):
    """Jones polynomial in half-integer powers of t."""
    br = kauffman_bracket(d)
    w = writhe(d)
    twist = Laurent.term((-1) ** w, -3 * w)
    f = twist * br
    # A = t^(-1/4)
    return f.substitute_power(Fraction(-1, 4))


def _flip_crossing(c):
    o = c.over_in
    arcs = tuple(c.arcs[(o + k) % 4] for k in range(4))
    return PDCrossing(arcs, -c.sign)


def _smooth_crossing(d, i):
    """Oriented smoothing of crossing i (the two strands run parallel)."""
    c = d.crossings[i]
    under_pair = (c.under_in, c.over_out_arc)
    over_pair = (c.over_in_arc, c.under_out)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    extra = d.extra_unknots
    for a, b in (under_pair, over_pair):
        if a == b:
            extra += 1
        else:
            union(a, b)
    rest = [d.crossings[j] for j in range(len(d.crossings)) if j != i]
    merged = [PDCrossing(tuple(find(a) for a in c2.arcs), c2.sign)
              for c2 in rest]
    if not merged and extra == d.extra_unknots:
        extra += 1
    used = sorted({a for c2 in merged for a in c2.arcs})
    remap = {a: k + 1 for k, a in enumerate(used)}
    merged = [PDCrossing(tuple(remap[a] for a in c2.arcs), c2.sign)
              for c2 in merged]
    return Diagram(crossings=tuple(merged), extra_unknots=extra)


def skein_triple(d, site):
    """(L+, L-, L0) diagrams differing only at crossing ``site``."""
    c = d.crossings[site]
    flipped = list(d.crossings)
    flipped[site] = _flip_crossing(c)
    other = Diagram(crossings=tuple(flipped), extra_unknots=d.extra_unknots)
    if c.sign > 0:
        plus, minus = d, other
    else:
        plus, minus = other, d
    zero = _smooth_crossing(d, site)
    return plus, minus, zero


def skein_residual(d, site, labeling=0):
    """t^-1 V(L+) - t V(L-) - (t^1/2 - t^-1/2) V(L0); zero when Jones obeys
    the skein relation at this crossing.  ``labeling`` swaps the roles of
    the positive and negative diagrams (the opposite sign convention).
    """
    plus, minus, zero = skein_triple(d, site)
    if labeling:
        plus, minus = minus, plus
    vp, vm, v0 = jones(plus), jones(minus), jones(zero)
    tinv = Laurent.term(1, -1)
    t = Laurent.term(1, 1)
    bridge = Laurent({Fraction(1, 2): 1, Fraction(-1, 2): -1})
    return tinv * vp - t * vm - bridge * v0


def verify_skein(d, labeling=0):
    """True if the skein residual vanishes at every crossing."""
    return all(skein_residual(d, i, labeling).is_zero()
               for i in range(len(d.crossings)))
