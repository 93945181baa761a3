"""Stable serialization of verification records.

Rationals are written as ``"p/q"`` strings (``"p"`` for integers) so that every
value round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .theorems import ClassificationCase, VerificationRecord

SCHEMA_VERSION = 1

CSV_FIELDS = [
    "n", "r", "d", "D", "squarefree", "h", "invariants", "case",
    "status", "zeta_total", "zeta_by_classes", "closed_zeta",
]


def rat_to_str(x):
    return None if x is None else str(Fraction(x))


def rat_from_str(s):
    return None if s is None or s == "" else Fraction(s)


def case_to_dict(case: ClassificationCase):
    return {
        "label": case.label,
        "parameters": dict(case.parameters),
        "predicted_group": case.predicted_group,
        "predicted_zeta": case.predicted_zeta,
    }


def case_from_dict(obj):
    return ClassificationCase(obj["label"], dict(obj["parameters"]), obj["predicted_group"], obj["predicted_zeta"])


def record_to_dict(rec: VerificationRecord):
    return {
        "schema": SCHEMA_VERSION,
        "n": rec.n,
        "r": rec.r,
        "d": rec.d,
        "D": rec.D,
        "squarefree": rec.squarefree,
        "h": rec.h,
        "invariant_factors": rec.invariant_factors,
        "case": case_to_dict(rec.case),
        "zeta_total": rat_to_str(rec.zeta_total),
        "zeta_by_classes": rat_to_str(rec.zeta_by_classes),
        "closed_zeta": rat_to_str(rec.closed_zeta),
        "status": rec.status,
        "notes": list(rec.notes),
    }


def record_from_dict(obj) -> VerificationRecord:
    if obj.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported record schema {obj.get('schema')!r}")
    return VerificationRecord(
        n=obj["n"],
        r=obj["r"],
        d=obj["d"],
        D=obj["D"],
        squarefree=obj["squarefree"],
        h=obj["h"],
        invariant_factors=obj["invariant_factors"],
        case=case_from_dict(obj["case"]),
        zeta_total=rat_from_str(obj["zeta_total"]),
        zeta_by_classes=rat_from_str(obj["zeta_by_classes"]),
        closed_zeta=rat_from_str(obj["closed_zeta"]),
        status=obj["status"],
        notes=list(obj["notes"]),
    )


def to_json(rec) -> str:
    return json.dumps(record_to_dict(rec), sort_keys=True)


def from_json(text) -> VerificationRecord:
    return record_from_dict(json.loads(text))


def _case_to_str(case):
    # Label plus parameters, e.g. "T1_I;m=2;p=3;t=2".
    return ";".join([case.label] + [f"{k}={v}" for k, v in case.parameters.items()])


def _case_from_str(s):
    label, *rest = s.split(";")
    params = {}
    for item in rest:
        k, v = item.split("=")
        params[k] = int(v)
    return label, params


def csv_row(rec: VerificationRecord):
    return {
        "n": rec.n,
        "r": rec.r,
        "d": rec.d,
        "D": "" if rec.D is None else rec.D,
        "squarefree": int(rec.squarefree),
        "h": "" if rec.h is None else rec.h,
        "invariants": "" if rec.invariant_factors is None else " ".join(map(str, rec.invariant_factors)),
        "case": _case_to_str(rec.case),
        "status": rec.status,
        "zeta_total": rat_to_str(rec.zeta_total) or "",
        "zeta_by_classes": rat_to_str(rec.zeta_by_classes) or "",
        "closed_zeta": rat_to_str(rec.closed_zeta) or "",
    }


def write_csv(records, stream):
    w = csv.DictWriter(stream, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for rec in records:
        w.writerow(csv_row(rec))


def parse_csv_row(row):
    """Typed values of one CSV row (the case comes back as ``(label, params)``)."""

    def opt_int(s):
        return None if s == "" else int(s)

    return {
        "n": int(row["n"]),
        "r": int(row["r"]),
        "d": int(row["d"]),
        "D": opt_int(row["D"]),
        "squarefree": bool(int(row["squarefree"])),
        "h": opt_int(row["h"]),
        "invariants": None if row["h"] == "" else [int(x) for x in row["invariants"].split()],
        "case": _case_from_str(row["case"]),
        "status": row["status"],
        "zeta_total": rat_from_str(row["zeta_total"]),
        "zeta_by_classes": rat_from_str(row["zeta_by_classes"]),
        "closed_zeta": rat_from_str(row["closed_zeta"]),
    }


def read_csv(text):
    return [parse_csv_row(row) for row in csv.DictReader(io.StringIO(text))]
