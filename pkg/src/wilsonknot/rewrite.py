"""Normalize Wilson words to the form Tr R^e · W(a,a)··· by guarded search.

Rewrite moves (all cyclic, applied after rotating the word so the site
sits at position 0):

* ``Concat``      -- W(a,b)W(b,c) = W(a,c); forward merges, backward
                     re-splits at a recorded interior point.
* ``QuasiCommute``-- swap two adjacent segments at the cost of a
                     conjugating R-pair; the sign depends on which
                     segment's strand piece is traversed first.  Loop
                     segments W(a,a) commute freely (they are scalar
                     multiples of the identity after averaging).
* ``CrossPos``    -- in a 4-segment crossing window whose incoming
                     segments appear against traversal order, swap them
                     and emit R^{+1} on the left.
* ``CrossNeg``    -- in a window whose outgoing segments end against
                     traversal order, swap them and emit R^{-1} on the
                     right.
* ``RMerge``      -- R-power arithmetic (also applied implicitly).
* ``Rotate``      -- trace cyclicity.

The search is best-first over (segment count, total |R| exponent) with a
canonical-cyclic visited set, so results are deterministic.
"""

import heapq
import os
from dataclasses import dataclass, field

from .errors import BudgetExceeded, NonWilsonInput, PatternMismatch
from .word import Rpow, Seg, WilsonWord


@dataclass(frozen=True)
class SearchConfig:
    max_states: int = 100000
    max_depth: int = 256
    deterministic_tiebreak: bool = True
    unguarded: bool = False

    @classmethod
    def from_env(cls, **kw):
        budget = os.environ.get("WILSON_KNOT_BUDGET")
        if budget is not None and "max_states" not in kw:
            kw["max_states"] = int(budget)
        return cls(**kw)


@dataclass(frozen=True)
class NormalForm:
    e: int
    loops: tuple
    partition_normalization: int = 1

    @property
    def m(self):
        return -self.e

    def to_json(self):
        return {"e": self.e, "m": self.m, "loops": list(self.loops)}


def power_index(nf):
    """m = -e: the word equals Tr R^{-m} W(z,z)···."""
    return -nf.e


@dataclass
class TraceLog:
    start: tuple = ()
    steps: list = field(default_factory=list)   # (rule, pos, arg, snapshot)

    def replay(self):
        toks = self.start
        for rule, pos, arg, snapshot in self.steps:
            toks = _dispatch(toks, rule, pos, arg)
            if toks != snapshot:
                raise AssertionError("trace log replay diverged")
        return toks

    def to_json_lines(self):
        out = []
        for i, (rule, pos, arg, snapshot) in enumerate(self.steps):
            out.append({
                "step": i,
                "rule": rule,
                "pos": pos,
                "arg": arg,
                "word": WilsonWord(snapshot).to_json(),
            })
        return out


# --- move application --------------------------------------------------------

def _collapse(tokens):
    """Merge adjacent same-pair R-powers (including at the cyclic seam)."""
    out = []
    for t in tokens:
        if (isinstance(t, Rpow) and out and isinstance(out[-1], Rpow)
                and out[-1].pair == t.pair):
            k = out[-1].k + t.k
            out.pop()
            if k:
                out.append(Rpow(k, t.pair))
        elif isinstance(t, Rpow) and t.k == 0:
            continue
        else:
            out.append(t)
    while (len(out) > 1 and isinstance(out[0], Rpow)
           and isinstance(out[-1], Rpow) and out[0].pair == out[-1].pair):
        k = out[-1].k + out[0].k
        out = ([Rpow(k, out[0].pair)] if k else []) + out[1:-1]
    if len(out) == 1 and isinstance(out[0], Rpow) and out[0].k == 0:
        out = []
    return tuple(out)


def _rot(tokens, i):
    return tokens[i:] + tokens[:i]


def _concat_fwd(tokens, i):
    rot = _rot(tokens, i)
    if len(rot) < 2:
        raise PatternMismatch("need two tokens")
    a, b = rot[0], rot[1]
    if not (isinstance(a, Seg) and isinstance(b, Seg)
            and a.to == b.frm and a.tpass == b.fpass):
        raise PatternMismatch("segments do not chain at %d" % i)
    left_rs = a.interior[-1][2] if a.interior else a.stamp
    right_rs = b.interior[0][1] if b.interior else b.stamp
    merged = Seg(a.frm, b.to, min(a.stamp, b.stamp), a.fpass, b.tpass,
                 a.interior + ((a.to, left_rs, right_rs, a.tpass),)
                 + b.interior,
                 a.comp)
    return (merged,) + rot[2:]


def _concat_bwd(tokens, i, j):
    rot = _rot(tokens, i)
    s = rot[0]
    if not (isinstance(s, Seg) and s.interior) or not 0 <= j < len(s.interior):
        raise PatternMismatch("no interior point %r at %d" % (j, i))
    pt, _, _, p = s.interior[j]
    head_stamp = min(e[1] for e in s.interior[:j + 1])
    tail_stamp = min(e[2] for e in s.interior[j:])
    head = Seg(s.frm, pt, head_stamp, s.fpass, p, s.interior[:j], s.comp)
    tail = Seg(pt, s.to, tail_stamp, p, s.tpass, s.interior[j + 1:], s.comp)
    return (head, tail) + rot[1:]


def _quasi(tokens, i, sigma):
    rot = _rot(tokens, i)
    if len(rot) < 2:
        raise PatternMismatch("need two tokens")
    p, q = rot[0], rot[1]
    if not (isinstance(p, Seg) and isinstance(q, Seg)):
        raise PatternMismatch("quasi-commute needs two segments")
    if sigma == 0:
        if not (p.is_loop() or q.is_loop()):
            raise PatternMismatch("free commutation only for loop segments")
        return (q, p) + rot[2:]
    pair = (min(p.comp, q.comp), max(p.comp, q.comp))
    return _collapse((Rpow(sigma, pair), q, p, Rpow(-sigma, pair)) + rot[2:])


def _window(rot):
    if len(rot) < 4:
        raise PatternMismatch("need four tokens")
    a, b, c, d = rot[:4]
    if not all(isinstance(t, Seg) for t in (a, b, c, d)):
        raise PatternMismatch("window tokens must be segments")
    w = a.to
    if not (b.frm == w and c.to == w and d.frm == w):
        raise PatternMismatch("window does not share a center label")
    return a, b, c, d


def _window_moves(a, b, c, d):
    """Tuple of (rule, sigma) moves resolving a crossing window.

    Which relation applies is read off the precedence stamps of the
    current segments: when the incoming segments appear against stamp
    order the swap costs R^{+1} on the left, and when the outgoing
    segments appear against stamp order the swap costs R^{-1} on the
    right.  A window can admit both, either, or neither.

    Two degenerate shapes are inert.  A curl window, where an outgoing
    segment continues straight into the incoming segment beside it
    (``b`` into ``a``, or ``d`` into ``c``), is a kink: swapping it
    would shift the R-power by the kink's writhe, making the normal
    form depend on how many kinks the diagram carries, so kinks are
    removed by concatenation instead.  A pinch window, where the swap
    would put a segment next to a continuation of itself (``c`` before
    ``b``, or ``a`` before ``d``) closing a loop ``W(x,x)``, would
    split a closed component off a connected strand.  A center label
    among the outer endpoints is likewise excluded.
    """
    w = a.to
    if not (w.endswith("+") or w.endswith("-")):
        return ()
    if w in (a.frm, b.to, c.frm, d.to):
        return ()
    if b.to == a.frm and b.tpass == a.fpass:
        return ()
    if d.to == c.frm and d.tpass == c.fpass:
        return ()
    if b.to == c.frm and c.tpass == b.fpass:
        return ()
    if d.to == a.frm and a.tpass == d.fpass:
        return ()
    out = []
    if c.stamp < a.stamp:
        out.append(("CrossPos", 1))
    if d.stamp < b.stamp:
        out.append(("CrossNeg", -1))
    return tuple(out)


def _window_pair(a, c):
    return (min(a.comp, c.comp), max(a.comp, c.comp))


def _swap13(tokens, i, sigma):
    rot = _rot(tokens, i)
    a, b, c, d = _window(rot)
    return _collapse((Rpow(sigma, _window_pair(a, c)), c, b, a, d) + rot[4:])


def _swap24(tokens, i, sigma):
    rot = _rot(tokens, i)
    a, b, c, d = _window(rot)
    return _collapse((a, d, c, b, Rpow(sigma, _window_pair(a, c))) + rot[4:])


def _rmerge(tokens, i):
    rot = _rot(tokens, i)
    if len(rot) < 2 or not (isinstance(rot[0], Rpow) and isinstance(rot[1], Rpow)):
        raise PatternMismatch("need two adjacent R-powers")
    if rot[0].pair != rot[1].pair:
        raise PatternMismatch("R-powers braid different component pairs")
    return _collapse(rot)


def _dispatch(tokens, rule, pos, arg):
    if rule == "Concat":
        return _concat_fwd(tokens, pos)
    if rule == "Split":
        return _concat_bwd(tokens, pos, arg)
    if rule == "QuasiCommute":
        return _quasi(tokens, pos, arg)
    if rule == "CrossPos":
        return _swap13(tokens, pos, arg)
    if rule == "CrossNeg":
        return _swap24(tokens, pos, arg)
    if rule == "RMerge":
        return _rmerge(tokens, pos)
    if rule == "Rotate":
        return _rot(tokens, pos)
    raise PatternMismatch("unknown rule %r" % rule)


def apply_rule(word, rule, pos, direction="forward", arg=None):
    """Apply one rewrite rule at a (cyclic) position; returns a new word.

    ``Concat`` backward re-splits a merged segment at interior point
    index ``arg``.  ``QuasiCommute``/``CrossPos``/``CrossNeg`` take the
    conjugation sign in ``arg`` (computed from stamps when omitted).
    """
    tokens = word.tokens if isinstance(word, WilsonWord) else tuple(word)
    if rule == "Concat" and direction == "backward":
        rule, arg = "Split", 0 if arg is None else arg
    if rule in ("QuasiCommute", "CrossPos", "CrossNeg") and arg is None:
        rot = _rot(tokens, pos)
        if rule == "QuasiCommute":
            p, q = rot[0], rot[1]
            if p.is_loop() or q.is_loop():
                arg = 0
            else:
                arg = 1 if q.stamp < p.stamp else -1
        else:
            a, b, c, d = _window(rot)
            match = [s for r, s in _window_moves(a, b, c, d) if r == rule]
            if not match:
                raise PatternMismatch("%s does not apply at %d" % (rule, pos))
            arg = match[0]
    return WilsonWord(_dispatch(tokens, rule, pos, arg))


# --- canonicalization --------------------------------------------------------

def canonical_cyclic(word):
    """String key equal for words identical up to rotation + renaming."""
    tokens = word.tokens if isinstance(word, WilsonWord) else tuple(word)
    best = _min_rotation(tokens, with_stamps=False)
    return repr(best)


def _min_rotation(tokens, with_stamps=True):
    n = len(tokens)
    if n == 0:
        return ()
    if with_stamps:
        stamps = set()
        for t in tokens:
            if isinstance(t, Seg):
                stamps.add(t.stamp)
                for _, ls, rs, _ in t.interior:
                    stamps.add(ls)
                    stamps.add(rs)
        rank = {s: i for i, s in enumerate(sorted(stamps))}
    else:
        rank = None
    best = None
    for r in range(n):
        names = {}
        comps = {}
        cand = []
        # Build the renamed rotation token-by-token, comparing against the
        # best candidate so far and bailing out as soon as it is beaten.
        cmp = -1 if best is None else 0
        for idx in range(n):
            t = tokens[(r + idx) % n]
            if isinstance(t, Rpow):
                pr = tuple(sorted(comps.setdefault(ci, len(comps))
                                  for ci in t.pair))
                item = (1, t.k, pr, 0, 0, 0, ())
            else:
                f = names.setdefault(t.frm, len(names))
                to = names.setdefault(t.to, len(names))
                cm = comps.setdefault(t.comp, len(comps))
                if rank is not None:
                    ints = tuple(
                        (names.setdefault(p, len(names)),
                         rank[ls], rank[rs], pp)
                        for p, ls, rs, pp in t.interior)
                    item = (0, f, to, cm, t.fpass, t.tpass,
                            rank[t.stamp], ints)
                else:
                    item = (0, f, to, cm, t.fpass, t.tpass, 0, ())
            if cmp == 0:
                ref = best[idx]
                if item < ref:
                    cmp = -1
                elif item > ref:
                    cmp = 1
                    break
            cand.append(item)
        if cmp == -1:
            best = tuple(cand)
    return best


def _state_key(tokens):
    """Search-internal canonical form.

    States reached during one search keep their original labels and
    stamps, and stamps are unique across segments, so rotating the raw
    token tuple to start at the minimum-stamp segment canonicalizes the
    cyclic word in a single pass (``canonical_cyclic`` additionally
    renames labels, which the search does not need).
    """
    anchor = 0
    lo = None
    for i, t in enumerate(tokens):
        if type(t) is Seg and (lo is None or t.stamp < lo):
            lo = t.stamp
            anchor = i
    return tokens[anchor:] + tokens[:anchor]


# --- search ------------------------------------------------------------------

def _validate(tokens):
    stamps = set()
    for t in tokens:
        if isinstance(t, Seg):
            if t.stamp in stamps:
                raise NonWilsonInput("duplicate stamp %s" % t.stamp)
            stamps.add(t.stamp)
        elif isinstance(t, Rpow):
            if t.k == 0:
                raise NonWilsonInput("zero R-power stored")
        else:
            raise NonWilsonInput("unknown token %r" % (t,))
    if not any(isinstance(t, Seg) for t in tokens):
        raise NonWilsonInput("word has no segments")


def _cost(tokens):
    segs = sum(1 for t in tokens if isinstance(t, Seg))
    rsum = sum(abs(t.k) for t in tokens if isinstance(t, Rpow))
    return (segs, rsum)


def _is_goal(tokens):
    """Goal: every segment a loop and a single merged R-power block.

    A word with R-powers trapped between loops is not Tr R^e W(a,a)...
    even when the exponents sum to zero, so it must keep rewriting.
    """
    if not all(t.is_loop() for t in tokens if isinstance(t, Seg)):
        return False
    return sum(1 for t in tokens if isinstance(t, Rpow)) <= 1


def _successors(tokens, unguarded=False):
    """Yield (record, child) pairs; record = (rule, pos, arg)."""
    n = len(tokens)
    for i in range(n):
        a = tokens[i]
        b = tokens[(i + 1) % n]
        seg_a = isinstance(a, Seg)
        seg_b = isinstance(b, Seg)
        if seg_a and seg_b and n > 1:
            if a.to == b.frm and a.tpass == b.fpass:
                yield ("Concat", i, None), _concat_fwd(tokens, i)
            if a.is_loop() or b.is_loop():
                yield ("QuasiCommute", i, 0), _quasi(tokens, i, 0)
            else:
                sigma = 1 if b.stamp < a.stamp else -1
                left = tokens[i - 1]
                right = tokens[(i + 2) % n]
                # Braiding is only productive where it can resolve a
                # junction (the pair closes a path through one point) or
                # where an emitted R-power is absorbed by a neighboring
                # one; elsewhere it just pumps R-pairs into the word.
                if (a.frm == b.to
                        or (isinstance(left, Rpow) and
                            (left.k < 0) == (sigma > 0))
                        or (isinstance(right, Rpow) and
                            (right.k < 0) == (sigma < 0))):
                    yield ("QuasiCommute", i, sigma), _quasi(tokens, i, sigma)
                if unguarded:
                    yield ("QuasiCommute", i, -sigma), _quasi(tokens, i, -sigma)
        if seg_a and a.interior:
            for j in range(len(a.interior)):
                yield ("Split", i, j), _concat_bwd(tokens, i, j)
    if n >= 4:
        for i in range(n):
            rot = _rot(tokens, i)
            try:
                a, b, c, d = _window(rot)
            except PatternMismatch:
                continue
            pr = _window_pair(a, c)
            for rule, s in _window_moves(a, b, c, d):
                if rule == "CrossPos":
                    yield ("CrossPos", i, s), _collapse(
                        (Rpow(s, pr), c, b, a, d) + rot[4:])
                else:
                    yield ("CrossNeg", i, s), _collapse(
                        (a, d, c, b, Rpow(s, pr)) + rot[4:])



# --- guided moves ------------------------------------------------------------
#
# The rewrite relation generated by the primitive moves is not
# single-valued: unrestricted commutations pump conjugating R-pairs
# around the word, and from a curl both Tr W(z,z) and Tr R W(z,z) are
# reachable.  The derivations that define the invariant only ever use
# four shapes of step, so normalization searches over those shapes
# (each one a short sequence of primitive moves, kept in the trace):
#
#   * a Concat wherever two segments chain;
#   * a crossing window fired in place, re-splitting the one or two
#     merged segments that still carry the crossing point inside;
#   * a junction commutation -- the pair closes a path through one
#     point, so the swap lines it up for an immediate Concat;
#   * an absorbing commutation -- an emitted R-power cancels into a
#     neighboring one, so the swap carries an R across the pair.
#
# Commutations are kept only when they are productive: both emitted
# R-powers cancel, or the swap exposes a new Concat or window.  The
# unrestricted primitive relation remains available as a fallback.

def _concat_pairs(tokens):
    n = len(tokens)
    out = set()
    for i in range(n):
        a, b = tokens[i], tokens[(i + 1) % n]
        if (isinstance(a, Seg) and isinstance(b, Seg) and n > 1
                and a.to == b.frm and a.tpass == b.fpass):
            out.add((a, b))
    return out


def _window_split_plans(base):
    """Split plans turning the head of ``base`` into a 4-segment window.

    A crossing point swallowed by Concat sits inside a merged segment;
    a window at that point reappears after re-splitting the first
    and/or third window slot.  Yields tuples of (position, interior
    index) Split applications.
    """
    yield ()
    t0 = base[0] if base else None
    if not isinstance(t0, Seg):
        return
    ints0 = {e[0]: j for j, e in enumerate(t0.interior)}
    t1 = base[1] if len(base) > 1 else None
    t2 = base[2] if len(base) > 2 else None
    if isinstance(t1, Seg):
        # first slot pair re-split from t0; (c, d) = (t1, t2)
        if isinstance(t2, Seg) and t1.to == t2.frm and t1.to in ints0:
            yield ((0, ints0[t1.to]),)
        # (a, b) = (t0, t1); third slot pair re-split from t2
        if isinstance(t2, Seg) and t1.frm == t0.to:
            ints2 = {e[0]: j for j, e in enumerate(t2.interior)}
            if t0.to in ints2:
                yield ((2, ints2[t0.to]),)
        # both pairs re-split, from t0 and t1
        ints1 = {e[0]: j for j, e in enumerate(t1.interior)}
        for w, j0 in ints0.items():
            if w in ints1:
                # after splitting t0 the old t1 sits at position 2
                yield ((0, j0), (2, ints1[w]))


def _window_macros(tokens):
    """Yield (records, quad signature, child) for every fireable window."""
    n = len(tokens)
    for i in range(n):
        base = _rot(tokens, i)
        recs0 = (("Rotate", i, None),) if i else ()
        for splits in _window_split_plans(base):
            cur = base
            recs = recs0
            try:
                for pos, j in splits:
                    cur = _concat_bwd(cur, pos, j)
                    recs += (("Split", pos, j),)
                a, b, c, d = _window(cur)
            except PatternMismatch:
                continue
            pr = _window_pair(a, c)
            for rule, s in _window_moves(a, b, c, d):
                if rule == "CrossPos":
                    child = _collapse((Rpow(s, pr), c, b, a, d) + cur[4:])
                else:
                    child = _collapse((a, d, c, b, Rpow(s, pr)) + cur[4:])
                yield recs + ((rule, 0, s),), (rule, a, b, c, d), child


def _swap_macros(tokens, concat_sites, window_sigs):
    n = len(tokens)
    for i in range(n):
        a, b = tokens[i], tokens[(i + 1) % n]
        if not (isinstance(a, Seg) and isinstance(b, Seg)) or n < 2:
            continue
        if a.to == b.frm and a.tpass == b.fpass:
            continue    # a Concat site, not a swap site
        if a.is_loop() or b.is_loop():
            sigma = 0
        else:
            sigma = 1 if b.stamp < a.stamp else -1
        junction = a.frm == b.to
        left, right = tokens[i - 1], tokens[(i + 2) % n]
        absorb_l = bool(sigma) and isinstance(left, Rpow) and (
            (left.k < 0) == (sigma > 0))
        absorb_r = bool(sigma) and isinstance(right, Rpow) and (
            (right.k < 0) == (sigma < 0))
        if not (junction or absorb_l or absorb_r or sigma == 0):
            continue
        child = _quasi(tokens, i, sigma)
        if absorb_l and absorb_r:
            yield (("QuasiCommute", i, sigma),), child
            continue
        if _concat_pairs(child) - concat_sites:
            yield (("QuasiCommute", i, sigma),), child
            continue
        for _recs, sig, _child in _window_macros(child):
            if sig not in window_sigs:
                yield (("QuasiCommute", i, sigma),), child
                break


def _macro_successors(tokens, unguarded=False):
    n = len(tokens)
    for i in range(n):
        a, b = tokens[i], tokens[(i + 1) % n]
        if (isinstance(a, Seg) and isinstance(b, Seg) and n > 1
                and a.to == b.frm and a.tpass == b.fpass):
            yield (("Concat", i, None),), _concat_fwd(tokens, i)
    window_sigs = set()
    for recs, sig, child in _window_macros(tokens):
        window_sigs.add(sig)
        yield recs, child
    for recs, child in _swap_macros(tokens, _concat_pairs(tokens),
                                    window_sigs):
        yield recs, child


def _primitive_successors(tokens, unguarded=False):
    for rec, child in _successors(tokens, unguarded):
        yield (rec,), child


def normalize(word, cfg=None):
    """Search for the normal form R^e · loops; returns (NormalForm, TraceLog).

    The guided move set is searched first; only if it is exhausted
    without reaching a normal form does the search fall back to the
    unrestricted primitive moves, both under one state budget.
    """
    if cfg is None:
        cfg = SearchConfig.from_env()
    tokens = word.tokens if isinstance(word, WilsonWord) else tuple(word)
    tokens = _collapse(tokens)
    _validate(tokens)
    budget = [cfg.max_states]
    found = _search(tokens, cfg, budget, _macro_successors)
    if found is None:
        found = _search(tokens, cfg, budget, _primitive_successors)
    if found is None:
        raise BudgetExceeded(
            "search space exhausted without reaching normal form")
    return found


def _search(tokens, cfg, budget, successors):
    start_key = _state_key(tokens)
    # key -> (concrete tokens, parent key, move records, depth)
    info = {start_key: (tokens, None, None, 0)}
    # discovery sequence breaks cost ties deterministically
    heap = [(_cost(tokens), 0, start_key)]
    seq = 0
    done = set()
    while heap:
        _, _, key = heapq.heappop(heap)
        if key in done:
            continue
        done.add(key)
        toks, _, _, depth = info[key]
        if _is_goal(toks):
            return _finish(toks, key, info)
        budget[0] -= 1
        if budget[0] <= 0:
            raise BudgetExceeded(
                "no normal form within %d expanded states" % cfg.max_states)
        if depth >= cfg.max_depth:
            continue
        for recs, child in successors(toks, cfg.unguarded):
            ck = _state_key(child)
            if ck in done or ck in info:
                continue
            info[ck] = (child, key, recs, depth + 1)
            seq += 1
            heapq.heappush(heap, (_cost(child), seq, ck))
    return None


def _finish(goal_tokens, key, info):
    e = sum(t.k for t in goal_tokens if isinstance(t, Rpow))
    loops = tuple(t.frm for t in goal_tokens if isinstance(t, Seg))
    chain = []
    while True:
        toks, parent, recs, _ = info[key]
        if parent is None:
            start = toks
            break
        chain.append(recs)
        key = parent
    chain.reverse()
    steps = []
    toks = start
    for recs in chain:
        for rule, pos, arg in recs:
            toks = _dispatch(toks, rule, pos, arg)
            steps.append((rule, pos, arg, toks))
    if toks != goal_tokens:
        raise AssertionError("macro expansion diverged from search state")
    log = TraceLog(start=start, steps=steps)
    return NormalForm(e=e, loops=loops), log
