"""Classification table keyed by the power index m, with the two
connected-sum operations on knots.

The table is shipped data: m-values beyond the ones the engine computes
directly are recorded claims, not derivations.  The star sum drops two
alternating crossings; the times sum keeps them all; both add crossing
counts.
"""

import json
from dataclasses import dataclass
from importlib import resources

from .errors import LinkOperand, MalformedSyntax

STAR = "⋆"
TIMES = "×"


@dataclass(frozen=True)
class SumExpr:
    op: str            # "star" | "times"
    left: "CatalogEntry"
    right: "CatalogEntry"

    @property
    def crossings(self):
        return self.left.crossings + self.right.crossings

    @property
    def alternating(self):
        drop = 2 if self.op == "star" else 0
        return self.left.alternating + self.right.alternating - drop

    @property
    def name(self):
        sym = STAR if self.op == "star" else TIMES
        return "%s%s%s" % (_wrap(self.left), sym, _wrap(self.right))


def _wrap(entry):
    if entry.construction is not None:
        return "(%s)" % entry.name
    return entry.name


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    m: int
    crossings: int
    alternating: int
    kind: str          # "prime-knot" | "composite-knot" | "link"
    construction: SumExpr = None

    def to_json(self):
        out = {"m": self.m, "name": self.name, "kind": self.kind,
               "crossings": self.crossings, "alternating": self.alternating}
        out["construction"] = (None if self.construction is None
                               else self.name)
        return out


def _entry_from_expr(expr):
    return CatalogEntry(name=expr.name, m=0, crossings=expr.crossings,
                        alternating=expr.alternating, kind="composite-knot",
                        construction=expr)


def star(a, b):
    """Connected sum dropping two alternating crossings."""
    if a.kind == "link" or b.kind == "link":
        raise LinkOperand("connected sums are defined for knots only")
    return SumExpr("star", a, b)


def times(a, b):
    """Connected sum keeping every alternating crossing."""
    if a.kind == "link" or b.kind == "link":
        raise LinkOperand("connected sums are defined for knots only")
    return SumExpr("times", a, b)


# Prime knots appearing in the table, with their crossing numbers
# (alternating count equals the crossing number for these).
_BASE = {name: int(name.split("_")[0])
         for name in ("3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3",
                      "7_1", "7_2", "7_3", "7_4")}


def _tokenize(text):
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "()":
            out.append(ch)
            i += 1
        elif ch in (STAR, "*"):
            out.append("star")
            i += 1
        elif ch in (TIMES, "x"):
            out.append("times")
            i += 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i:
                raise MalformedSyntax("bad character %r in %r" % (ch, text))
            out.append(text[i:j])
            i = j
    return out


def parse_construction(text):
    """Left-associative sum expression over prime-knot names."""
    tokens = _tokenize(text)
    pos = [0]

    def atom():
        if pos[0] >= len(tokens):
            raise MalformedSyntax("truncated expression %r" % text)
        t = tokens[pos[0]]
        pos[0] += 1
        if t == "(":
            node = chain()
            if pos[0] >= len(tokens) or tokens[pos[0]] != ")":
                raise MalformedSyntax("unbalanced parentheses in %r" % text)
            pos[0] += 1
            return node
        if t not in _BASE:
            raise MalformedSyntax("unknown knot %r in %r" % (t, text))
        return CatalogEntry(name=t, m=0, crossings=_BASE[t],
                            alternating=_BASE[t], kind="prime-knot")

    def chain():
        node = atom()
        while pos[0] < len(tokens) and tokens[pos[0]] in ("star", "times"):
            op = tokens[pos[0]]
            pos[0] += 1
            rhs = atom()
            fn = star if op == "star" else times
            node = _entry_from_expr(fn(node, rhs))
        return node

    node = chain()
    if pos[0] != len(tokens):
        raise MalformedSyntax("trailing tokens in %r" % text)
    if node.construction is None:
        raise MalformedSyntax("expression %r is not a sum" % text)
    return node.construction


def load_table():
    """The 32 entries, m = 1..32, as shipped."""
    text = (resources.files("wilsonknot") / "resources"
            / "classification_table.json").read_text()
    raw = json.loads(text)
    entries = []
    for item in raw["entries"]:
        construction = None
        if item.get("construction"):
            construction = parse_construction(item["construction"])
        entries.append(CatalogEntry(
            name=item["name"], m=int(item["m"]),
            crossings=int(item["crossings"]),
            alternating=int(item["alternating"]),
            kind=item["kind"], construction=construction))
    return entries


def lookup_by_m(m, table=None):
    if table is None:
        table = load_table()
    for entry in table:
        if entry.m == m:
            return entry
    return None


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_consistency_check(table=None):
    """Per-m report of (m odd prime) vs (entry is a prime knot).

    m=2 is the stated exception: the value is prime but the slot holds
    the Hopf link.
    """
    if table is None:
        table = load_table()
    report = []
    for entry in sorted(table, key=lambda e: e.m):
        if entry.m < 2:
            continue
        prime = _is_prime(entry.m)
        is_prime_knot = entry.kind == "prime-knot"
        exception = entry.m == 2
        consistent = exception or (prime == is_prime_knot)
        report.append({"m": entry.m, "name": entry.name,
                       "prime": prime, "kind": entry.kind,
                       "consistent": consistent, "exception": exception})
    return report
