"""Verification reports.

Every axiom check appends one entry: the check's name, the registry
label of the law it tests, pass/fail, and on failure a witness (the
offending basis tuple and both evaluated sides, in canonical
coordinates).  Reports serialize to JSON lines so runs are diffable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["Entry", "Report", "Rejected"]


@dataclass
class Entry:
    axiom: str
    eq: str
    status: str  # "pass" | "fail"
    witness: object = None

    def to_json(self):
        d = {"axiom": self.axiom, "eq": self.eq, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class Report:
    entries: list = field(default_factory=list)

    def check(self, ok, axiom, eq, witness=None):
        self.entries.append(
            Entry(axiom, eq, "pass" if ok else "fail", None if ok else witness)
        )
        return ok

    def note(self, axiom, eq, status, witness=None):
        self.entries.append(Entry(axiom, eq, status, witness))

    def merge(self, other, prefix=None):
        for e in other.entries:
            axiom = e.axiom if prefix is None else "%s:%s" % (prefix, e.axiom)
            self.entries.append(Entry(axiom, e.eq, e.status, e.witness))
        return self

    @property
    def ok(self):
        return all(e.status == "pass" for e in self.entries)

    def failures(self):
        return [e for e in self.entries if e.status == "fail"]

    def status_of(self, axiom):
        for e in self.entries:
            if e.axiom == axiom:
                return e.status
        return None

    def lines(self):
        out = []
        for e in self.entries:
            line = "%-4s  %-44s  [%s]" % (e.status, e.axiom, e.eq)
            if e.witness is not None:
                line += "  witness=%s" % (e.witness,)
            out.append(line)
        return out

    def to_json_lines(self):
        # witnesses may carry exact scalars and label tuples; render them
        return [
            json.dumps(e.to_json(), sort_keys=True, default=repr)
            for e in self.entries
        ]

    def __str__(self):
        return "\n".join(self.lines())


class Rejected(Exception):
    """A mathematically well-posed input fails a required condition."""

    def __init__(self, eq, message, report=None, hint=None):
        self.eq = eq
        self.hint = hint
        self.report = report
        super().__init__("%s [%s]%s" % (message, eq, " -- " + hint if hint else ""))
