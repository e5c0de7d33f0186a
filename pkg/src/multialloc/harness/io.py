"""Instance and report files.

Instance files are JSON with every number written as an ``"p/q"`` string::

    {
      "format": "multialloc-instance",
      "version": 1,
      "agents": 2,
      "items": 3,
      "item_names": ["a", "b", "c"],                      # optional
      "valuations": [
        {"kind": "additive", "weights": ["3/1", "2/1", "1/1"]},
        {"kind": "xos", "clauses": [["1/1", "0/1", "2/1"], ["0/1", "4/1", "0/1"]]},
        {"kind": "explicit", "table": {"0": "0/1", "1": "2/1", ...}}
      ],
      "multi_allocation": {"d": 2, "bundles": [[0, 1], [1, 2]]},   # optional
      "graph": {"edges": [[item, a, b], ...]}                       # optional
    }

Explicit tables are keyed by the decimal characteristic integer of the
subset (bit ``e`` set when item ``e`` is a member) and may carry an optional
``"ground"`` list of item indices (default: all items).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..allocation import MultiAllocation
from ..errors import InstanceFormatError
from ..itemsets import as_mask, members
from ..multigraph import Edge, MultiGraph
from ..valuations import Additive, Explicit, Valuation, Xos, fmt_fraction, to_fraction

FORMAT = "multialloc-instance"
VERSION = 1


@dataclass
class Instance:
    m: int
    valuations: list[Valuation]
    item_names: list[str] | None = None
    multi_allocation: MultiAllocation | None = None
    d: int | None = None
    graph_edges: list[tuple[int, int, int]] | None = None
    note: str | None = None

    @property
    def n(self) -> int:
        return len(self.valuations)

    @property
    def items(self) -> int:
        return (1 << self.m) - 1

    def graph(self) -> MultiGraph:
        """Explicit graph if given, else the graph of a width-2 multi-allocation."""
        if self.graph_edges is not None:
            edges = tuple(Edge(k, a, b, item) for k, (item, a, b) in enumerate(self.graph_edges))
            return MultiGraph(self.n, edges)
        if self.multi_allocation is None:
            raise InstanceFormatError("instance has neither a graph nor a multi-allocation")
        from ..multigraph import from_two_multi

        return from_two_multi(self.multi_allocation)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.m, self.valuations, self.item_names, self.multi_allocation, self.d,
                self.graph_edges) == (other.m, other.valuations, other.item_names,
                                      other.multi_allocation, other.d, other.graph_edges)


def _num(x) -> Fraction:
    try:
        return to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceFormatError(f"bad number {x!r}: {exc}") from None


def valuation_to_json(v: Valuation, m: int) -> dict:
    if isinstance(v, Additive):
        return {"kind": "additive", "weights": [fmt_fraction(w) for w in v.weights]}
    if isinstance(v, Xos):
        return {"kind": "xos", "clauses": [[fmt_fraction(w) for w in c] for c in v.clauses]}
    if isinstance(v, Explicit):
        out = {"kind": "explicit",
               "table": {str(k): fmt_fraction(v.table[k]) for k in sorted(v.table)}}
        if v.ground != (1 << m) - 1:
            out["ground"] = members(v.ground)
        return out
    raise InstanceFormatError(f"cannot serialize valuation of type {type(v).__name__}")


def valuation_from_json(obj: dict, m: int) -> Valuation:
    kind = obj.get("kind")
    try:
        if kind == "additive":
            ws = [_num(w) for w in obj["weights"]]
            if len(ws) != m:
                raise InstanceFormatError(f"additive valuation has {len(ws)} weights for {m} items")
            return Additive(ws)
        if kind == "xos":
            cl = [[_num(w) for w in c] for c in obj["clauses"]]
            if any(len(c) != m for c in cl):
                raise InstanceFormatError(f"xos clauses must have {m} weights")
            return Xos(cl)
        if kind == "explicit":
            ground = as_mask(obj.get("ground", range(m)))
            if ground >> m:
                raise InstanceFormatError("explicit ground set references unknown items")
            return Explicit({int(k): _num(x) for k, x in obj["table"].items()}, ground)
    except KeyError as exc:
        raise InstanceFormatError(f"{kind} valuation is missing field {exc}") from None
    raise InstanceFormatError(f"unknown valuation kind {kind!r}")


def to_json(inst: Instance) -> dict:
    out: dict = {
        "format": FORMAT,
        "version": VERSION,
        "agents": inst.n,
        "items": inst.m,
    }
    if inst.item_names is not None:
        out["item_names"] = list(inst.item_names)
    out["valuations"] = [valuation_to_json(v, inst.m) for v in inst.valuations]
    if inst.multi_allocation is not None:
        out["multi_allocation"] = {
            "d": inst.d if inst.d is not None else inst.multi_allocation.width,
            "bundles": inst.multi_allocation.lists(),
        }
    if inst.graph_edges is not None:
        out["graph"] = {"edges": [list(e) for e in inst.graph_edges]}
    if inst.note:
        out["note"] = inst.note
    return out


def from_json(obj: dict) -> Instance:
    if obj.get("format") != FORMAT:
        raise InstanceFormatError(f"not a {FORMAT} file")
    if obj.get("version") != VERSION:
        raise InstanceFormatError(f"unsupported version {obj.get('version')!r}")
    try:
        n = int(obj["agents"])
        m = int(obj["items"])
        vals = [valuation_from_json(v, m) for v in obj["valuations"]]
    except KeyError as exc:
        raise InstanceFormatError(f"missing field {exc}") from None
    if len(vals) != n:
        raise InstanceFormatError(f"{len(vals)} valuations for {n} agents")
    names = obj.get("item_names")
    if names is not None and len(names) != m:
        raise InstanceFormatError(f"{len(names)} item names for {m} items")
    alloc = None
    d = None
    if "multi_allocation" in obj:
        ma = obj["multi_allocation"]
        bundles = ma["bundles"]
        if len(bundles) != n:
            raise InstanceFormatError(f"{len(bundles)} bundles for {n} agents")
        for b in bundles:
            for e in b:
                if not 0 <= int(e) < m:
                    raise InstanceFormatError(f"bundle references item {e} outside 0..{m - 1}")
        alloc = MultiAllocation.from_lists(bundles, m)
        d = int(ma.get("d", alloc.width))
        if alloc.width > d:
            raise InstanceFormatError(f"declared d = {d} but bundles have width {alloc.width}")
    edges = None
    if "graph" in obj:
        edges = []
        for e in obj["graph"]["edges"]:
            item, a, b = (int(x) for x in e)
            if not 0 <= item < m or not (0 <= a < n and 0 <= b < n):
                raise InstanceFormatError(f"graph edge {e} references unknown items or agents")
            edges.append((item, a, b))
    return Instance(m, vals, names, alloc, d, edges, obj.get("note"))


def dumps(inst: Instance) -> str:
    return json.dumps(to_json(inst), indent=1) + "\n"


def loads(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid JSON: {exc}") from None
    return from_json(obj)


def save(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps(inst))


def load(path: str | Path) -> Instance:
    return loads(Path(path).read_text())


def digest(text: str | bytes) -> str:
    if isinstance(text, str):
        text = text.encode()
    return "sha256:" + hashlib.sha256(text).hexdigest()


# -- run reports ---------------------------------------------------------------


def check_row(name: str, value: Fraction, bound: Fraction) -> dict:
    """One certified inequality ``value >= bound``."""
    return {"name": name, "value": fmt_fraction(value), "bound": fmt_fraction(bound),
            "pass": value >= bound}


def recheck_report(report: dict) -> list[str]:
    """Recompute every pass flag from the serialized numbers; list mismatches."""
    bad = []
    for row in report.get("agents", []):
        for chk in row.get("checks", []):
            ok = Fraction(chk["value"]) >= Fraction(chk["bound"])
            if ok != chk["pass"]:
                bad.append(f"agent {row.get('agent')} check {chk['name']}")
    return bad


def report_passes(report: dict) -> bool:
    return all(chk["pass"] for row in report.get("agents", []) for chk in row.get("checks", []))
