"""Rows of inequality checks shared by the trace, eigenvalue and Kirchhoff reports."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

REL_TOL = 1e-9

# Rows whose published inequality has explicit counterexamples among small
# connected graphs.  They are still evaluated and reported as failures, but
# a failure does not indicate an implementation fault.
REFUTED = {
    "rho2_lower_standard[1]": "fails on P4: rho_{1,2} = 0.2344 < (1/2)(2 - sqrt 2)",
    "rho2_lower_normalized[-1]": "fails on two 8-vertex graphs, e.g. G@Q?~?",
    "kirchhoff_repelling_degree[1]": "fails on K_n: n(n-1) delta/Delta^2 = n > n - 1",
}


@dataclass(frozen=True)
class BoundRow:
    """One evaluated inequality ``lhs <= value <= rhs``.

    A one-sided bound carries ``-inf`` or ``+inf`` on the missing side.
    ``passed`` allows a relative slack of :data:`REL_TOL`; ``tight`` reports
    equality with either finite side at the same slack.
    """

    bound_id: str
    lhs: float
    value: float
    rhs: float
    passed: bool
    tight: bool

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "lhs": self.lhs,
            "value": self.value,
            "rhs": self.rhs,
            "pass": self.passed,
            "tight": self.tight,
        }


def _close(a: float, b: float, tol: float) -> bool:
    return math.isfinite(a) and math.isfinite(b) and abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


def check(bound_id: str, value: float, lhs: float = -math.inf, rhs: float = math.inf,
          tol: float = REL_TOL) -> BoundRow:
    value, lhs, rhs = float(value), float(lhs), float(rhs)
    ok_low = lhs <= value or _close(lhs, value, tol)
    ok_high = value <= rhs or _close(value, rhs, tol)
    tight = _close(lhs, value, tol) or _close(value, rhs, tol)
    return BoundRow(bound_id, lhs, value, rhs, bool(ok_low and ok_high), bool(tight))


def is_refuted(bound_id: str) -> bool:
    return bound_id in REFUTED


def failures(rows) -> list:
    return [r for r in rows if not r.passed]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bound_id", "lhs", "value", "rhs", "pass", "tight"])
    for r in rows:
        writer.writerow([r.bound_id, f"{r.lhs:.12g}", f"{r.value:.12g}", f"{r.rhs:.12g}",
                         int(r.passed), int(r.tight)])
    return buf.getvalue()
