"""Versioned JSON report documents.

Every analysis outcome is reported in a fixed vocabulary and always carries
the bounds at which it was certified; no document states an unbounded claim.
Key order is stable so identical runs produce identical bytes, except for the
generated_at stamp, which consumers exclude when comparing.
"""

from __future__ import annotations

import datetime
import json

from .errors import InvariantViolation

REPORT_VERSION = 1

VERDICTS = ("holds_up_to_bounds", "fails_with_witness", "inconclusive")


def report_document(command, verdict, bounds, result, inputs=None):
    if verdict not in VERDICTS:
        raise InvariantViolation("verdict", f"unknown verdict {verdict!r}")
    return {
        "locis_report": REPORT_VERSION,
        "command": command,
        "verdict": verdict,
        "bounds": dict(bounds),
        "result": result,
        "inputs": list(inputs or []),
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def dumps_report(doc):
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def write_report(doc, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_report(doc))


def partial_iso_summary(p, sample=10):
    """JSON-safe digest of a verified map; full mappings only when small."""
    pairs = sorted(p.mapping.items())
    body = {
        "anchor": p.anchor,
        "image_anchor": p.image_anchor(),
        "certified_radius": p.certified_radius,
        "reversed": p.reversed_target,
        "size": len(pairs),
    }
    if len(pairs) <= 200:
        body["mapping"] = {k: v for k, v in pairs}
    else:
        body["sample"] = [[k, v] for k, v in pairs[:sample]]
    return body
