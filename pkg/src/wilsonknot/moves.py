"""Reidemeister moves as PD-level diagram surgery.

Moves are exposed two ways: direct helpers (insert_r1, remove_r2, ...)
and the uniform apply_reidemeister dispatcher.  Site enumerators report
every location where a move applies, so invariance can be tested
exhaustively on small diagrams.
"""

from .diagram import Diagram, PDCrossing
from .errors import InvalidSite


def _fresh_arcs(d, count):
    """``count`` arc identifiers unused by the diagram."""
    arcs = d.arcs
    ints = [a for a in arcs if isinstance(a, int)]
    if len(ints) == len(arcs):
        base = max(ints, default=0)
        return [base + i + 1 for i in range(count)]
    out = []
    i = 1
    while len(out) < count:
        cand = "n%d" % i
        if cand not in arcs:
            out.append(cand)
        i += 1
    return out


def _replace_arc(crossings, old, new):
    return [PDCrossing(tuple(new if a == old else a for a in c.arcs), c.sign)
            for c in crossings]


def _crossing_tuple(u_in, u_out, o_in, o_out, sign):
    """PD tuple from role assignments (ccw from incoming under)."""
    arcs = [None] * 4
    arcs[0], arcs[2] = u_in, u_out
    if sign > 0:
        arcs[3], arcs[1] = o_in, o_out
    else:
        arcs[1], arcs[3] = o_in, o_out
    return PDCrossing(tuple(arcs), sign)


# --- R1 ----------------------------------------------------------------------

def insert_r1(d, arc, sign=1, over_first=False):
    """Insert a curl on ``arc``; the strand either crosses over itself
    first (over_first) or under itself first, with the given sign."""
    if arc not in d.arcs:
        raise InvalidSite("arc %r not in diagram" % (arc,))
    a2, loop = _fresh_arcs(d, 2)
    crossings = list(d.crossings)
    # The incoming half keeps the old id; the outgoing half gets a2, so
    # only the downstream occurrence of ``arc`` is renamed.
    ci, over = d.crossing_entered_by(arc)
    c = crossings[ci]
    pos = c.over_in if over else 0
    arcs = list(c.arcs)
    arcs[pos] = a2
    crossings[ci] = PDCrossing(tuple(arcs), c.sign)
    if over_first:
        kink = _crossing_tuple(loop, a2, arc, loop, sign)
    else:
        kink = _crossing_tuple(arc, loop, loop, a2, sign)
    crossings.append(kink)
    return Diagram(tuple(crossings), extra_unknots=d.extra_unknots)


def r1_removal_sites(d):
    """Crossing indices carrying a removable curl."""
    out = []
    for i, c in enumerate(d.crossings):
        if c.under_out == c.over_in_arc or c.over_out_arc == c.under_in:
            out.append(i)
    return out


def remove_r1(d, site):
    if not 0 <= site < len(d.crossings):
        raise InvalidSite("no crossing %r" % (site,))
    c = d.crossings[site]
    if c.under_out == c.over_in_arc:
        keep_in, keep_out = c.under_in, c.over_out_arc
    elif c.over_out_arc == c.under_in:
        keep_in, keep_out = c.over_in_arc, c.under_out
    else:
        raise InvalidSite("crossing %r is not a curl" % (site,))
    rest = [d.crossings[j] for j in range(len(d.crossings)) if j != site]
    extra = d.extra_unknots
    if keep_in == keep_out:
        extra += 1
    else:
        rest = _replace_arc(rest, keep_out, keep_in)
    return Diagram(tuple(rest), extra_unknots=extra)


# --- R2 ----------------------------------------------------------------------

def insert_r2(d, over_arc, under_arc, handedness=1):
    """Push ``over_arc`` across ``under_arc`` creating a cancelling pair.

    ``handedness`` picks which of the two crossings is positive.
    """
    if over_arc == under_arc:
        raise InvalidSite("need two distinct arcs")
    if over_arc not in d.arcs or under_arc not in d.arcs:
        raise InvalidSite("arc not in diagram")
    ma, mb, a2, b2 = _fresh_arcs(d, 4)
    crossings = _replace_arc(d.crossings, over_arc, "?over?")
    crossings = _replace_arc(crossings, under_arc, "?under?")
    # keep the incoming halves under the old ids
    fixed = []
    for c in crossings:
        arcs = list(c.arcs)
        for pos, a in enumerate(arcs):
            if a == "?over?":
                incoming = pos == 0 or pos == c.over_in
                arcs[pos] = over_arc if not incoming else a2
            elif a == "?under?":
                incoming = pos == 0 or pos == c.over_in
                arcs[pos] = under_arc if not incoming else b2
        fixed.append(PDCrossing(tuple(arcs), c.sign))
    s = 1 if handedness >= 0 else -1
    first = _crossing_tuple(under_arc, mb, over_arc, ma, s)
    second = _crossing_tuple(mb, b2, ma, a2, -s)
    return Diagram(tuple(fixed) + (first, second),
                   extra_unknots=d.extra_unknots)


def r2_removal_sites(d):
    """Pairs (i, j) of crossings forming a cancelling poke."""
    out = []
    n = len(d.crossings)
    for i in range(n):
        for j in range(i + 1, n):
            if _poke(d.crossings[i], d.crossings[j]) is not None:
                out.append((i, j))
    return out


def _poke(ci, cj):
    """Arcs (over middle, under middle) if ci, cj form an R2 pair."""
    if ci.sign == cj.sign:
        return None
    for a, b in ((ci, cj), (cj, ci)):
        x = a.over_out_arc
        y_candidates = []
        if x != b.over_in_arc:
            continue
        if a.under_out == b.under_in:
            y_candidates.append(a.under_out)
        if b.under_out == a.under_in:
            y_candidates.append(b.under_out)
        for y in y_candidates:
            if x != y:
                return x, y
    return None


def remove_r2(d, site):
    try:
        i, j = site
        ci, cj = d.crossings[i], d.crossings[j]
    except (TypeError, ValueError, IndexError):
        raise InvalidSite("bad crossing pair %r" % (site,))
    pk = _poke(ci, cj)
    if pk is None:
        raise InvalidSite("crossings %r do not form a poke" % (site,))
    x, y = pk
    if ci.over_out_arc != x:
        ci, cj = cj, ci
    # over strand: o_in(ci) -> x -> o_out(cj); under strand analogous
    o_in, o_out = ci.over_in_arc, cj.over_out_arc
    if ci.under_out == cj.under_in:
        u_in, u_out = ci.under_in, cj.under_out
    else:
        u_in, u_out = cj.under_in, ci.under_out
    rest = [d.crossings[k] for k in range(len(d.crossings))
            if k not in (site[0], site[1])]
    extra = d.extra_unknots
    for a_in, a_out, mid in ((o_in, o_out, x), (u_in, u_out, y)):
        if a_in == mid or a_in == a_out:
            extra += 1
        else:
            rest = _replace_arc(rest, a_out, a_in)
    return Diagram(tuple(rest), extra_unknots=extra)


# --- R3 ----------------------------------------------------------------------

def r3_sites(d):
    """Slide sites (p, q, r, level): a strand passing on one level
    (level "under" or "over") across both p and q via a single middle
    arc, while the other two strands of p and q meet directly at r.
    All nine arcs of the triangular tangle must be distinct."""
    out = []
    n = len(d.crossings)
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            for level in ("under", "over"):
                for r in range(n):
                    if r in (p, q):
                        continue
                    if _r3_data(d, p, q, r, level) is not None:
                        out.append((p, q, r, level))
    return out


def _far_side(cr, near):
    """(far arc, far-arc-is-incoming) for the strand of ``cr`` through
    the arc ``near``."""
    if cr.under_in == near:
        return cr.under_out, False
    if cr.under_out == near:
        return cr.under_in, True
    if cr.over_in_arc == near:
        return cr.over_out_arc, False
    return cr.over_in_arc, True


def _r3_data(d, p, q, r, level):
    """Arc layout of a candidate slide, or None when it does not apply."""
    cp, cq, cr = d.crossings[p], d.crossings[q], d.crossings[r]
    if level == "under":
        e = cp.under_out
        if e != cq.under_in:
            return None
        s_in, s_out = cp.under_in, cq.under_out
        ap = (cp.over_in_arc, cp.over_out_arc)
        bq = (cq.over_in_arc, cq.over_out_arc)
    else:
        e = cp.over_out_arc
        if e != cq.over_in_arc:
            return None
        s_in, s_out = cp.over_in_arc, cq.over_out_arc
        ap = (cp.under_in, cp.under_out)
        bq = (cq.under_in, cq.under_out)
    shared_a = [a for a in ap if a in cr.arcs]
    shared_b = [b for b in bq if b in cr.arcs]
    if len(shared_a) != 1 or len(shared_b) != 1:
        return None
    f, g = shared_a[0], shared_b[0]
    a_other = ap[1] if f == ap[0] else ap[0]
    b_other = bq[1] if g == bq[0] else bq[0]
    a_far, a_far_in = _far_side(cr, f)
    b_far, b_far_in = _far_side(cr, g)
    arcs = (e, s_in, s_out, f, g, a_other, b_other, a_far, b_far)
    if len(set(arcs)) != 9:
        return None
    return {"e": e, "s_in": s_in, "s_out": s_out, "f": f, "g": g,
            "a_other": a_other, "b_other": b_other,
            "a_far": a_far, "a_far_in": a_far_in,
            "b_far": b_far, "b_far_in": b_far_in}


def apply_r3(d, site):
    """Slide the middle strand across the third crossing."""
    try:
        p, q, r, level = site
        cp, cq = d.crossings[p], d.crossings[q]
    except (TypeError, ValueError, IndexError):
        raise InvalidSite("bad slide site %r" % (site,))
    data = _r3_data(d, p, q, r, level)
    if data is None:
        raise InvalidSite("site %r does not admit a slide" % (site,))
    e, s_in, s_out = data["e"], data["s_in"], data["s_out"]
    f, g = data["f"], data["g"]
    a_far, a_far_in = data["a_far"], data["a_far_in"]
    b_far, b_far_in = data["b_far"], data["b_far_in"]

    rest = [d.crossings[k] for k in range(len(d.crossings))
            if k not in (p, q)]
    # join the old near-side arcs across the removed crossings
    rest = _replace_arc(rest, f, data["a_other"]) \
        if _dir_out(cp, f, level) else _replace_arc(rest, data["a_other"], f)
    rest = _replace_arc(rest, g, data["b_other"]) \
        if _dir_out(cq, g, level) else _replace_arc(rest, data["b_other"], g)
    na, nb = _fresh_arcs(d, 2)
    # split the far-side arcs: the half touching the third crossing keeps
    # its name, the other half is renamed to feed the rebuilt crossing
    fixed = []
    for c in rest:
        arcs = list(c.arcs)
        for pos, a in enumerate(arcs):
            if a == b_far and _incoming(c, pos) != b_far_in:
                arcs[pos] = nb
            elif a == a_far and _incoming(c, pos) != a_far_in:
                arcs[pos] = na
        fixed.append(PDCrossing(tuple(arcs), c.sign))
    # the slider now meets the B strand first, then the A strand
    b_pair = (nb, b_far) if b_far_in else (b_far, nb)
    a_pair = (na, a_far) if a_far_in else (a_far, na)
    if level == "under":
        first = _crossing_tuple(s_in, e, b_pair[0], b_pair[1], cq.sign)
        second = _crossing_tuple(e, s_out, a_pair[0], a_pair[1], cp.sign)
    else:
        first = _crossing_tuple(b_pair[0], b_pair[1], s_in, e, cq.sign)
        second = _crossing_tuple(a_pair[0], a_pair[1], e, s_out, cp.sign)
    return Diagram(tuple(fixed) + (first, second),
                   extra_unknots=d.extra_unknots)


def _incoming(c, pos):
    """True when position ``pos`` of crossing ``c`` is an incoming arc.

    Returns the boolean; the caller compares with the expected direction
    of the far-side arc at the third crossing.
    """
    return pos == 0 or pos == c.over_in


def _dir_out(c, arc, level):
    """Whether ``arc`` leaves crossing ``c`` on the non-slider strand."""
    if level == "under":
        return c.over_out_arc == arc
    return c.under_out == arc


# --- dispatcher --------------------------------------------------------------

def apply_reidemeister(d, move, site, variant=None):
    """Apply one Reidemeister move.

    move 1: site ("insert", arc) with variant (sign, "over"|"under"),
            or ("remove", crossing).
    move 2: site ("insert", over_arc, under_arc) with variant sign,
            or ("remove", i, j).
    move 3: site (p, q, r, level) from r3_sites.
    """
    if move == 1:
        if site and site[0] == "insert":
            sign, side = variant if variant else (1, "under")
            return insert_r1(d, site[1], sign=sign, over_first=side == "over")
        if site and site[0] == "remove":
            return remove_r1(d, site[1])
        raise InvalidSite("bad R1 site %r" % (site,))
    if move == 2:
        if site and site[0] == "insert":
            return insert_r2(d, site[1], site[2],
                             handedness=1 if variant is None else variant)
        if site and site[0] == "remove":
            return remove_r2(d, (site[1], site[2]))
        raise InvalidSite("bad R2 site %r" % (site,))
    if move == 3:
        return apply_r3(d, site)
    raise InvalidSite("unknown move %r" % (move,))
