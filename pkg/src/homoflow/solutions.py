"""Solution-file format: JSON documents that round-trip bit exactly.

Every document carries a schema version, the construction parameters, the
sampled fields, a residual summary, and provenance (tool version, seed,
timestamp).  Floats go through Python's shortest-round-trip repr, so a
load followed by a save reproduces the numbers exactly; only the
timestamp varies between otherwise identical runs.
"""

import datetime
import json

import numpy as np

from . import __version__

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "write_solution", "load_solution",
           "profile_document", "profile_from_document"]


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_solution(path, kind, n, params, grid, fields, residual_summary,
                   seed=None, extra=None):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "n": int(n),
        "params": _plain(params),
        "grid": _plain(grid),
        "fields": _plain(fields),
        "residual_summary": _plain(residual_summary),
        "provenance": {
            "tool_version": __version__,
            "seed": seed,
            "timestamp": datetime.datetime.now(
                datetime.timezone.utc).isoformat(),
        },
    }
    if extra:
        doc.update(_plain(extra))
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return doc


def load_solution(path):
    with open(path) as fh:
        doc = json.load(fh)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported solution schema version {version!r} "
            f"(this build reads version {SCHEMA_VERSION})")
    return doc


def profile_document(profile, residuals, matched_kappa=None, seed=None):
    """The on-disk shape of a sphere profile (kind = 'profile')."""
    doc_fields = {
        "thetas": profile.thetas, "g": profile.g,
        "f": profile.f, "p": profile.p,
    }
    extra = {
        "thetas": profile.thetas.tolist(),
        "g": profile.g.tolist(), "f": profile.f.tolist(),
        "p": profile.p.tolist(),
        "residuals": {k: float(v) for k, v in residuals.items()},
    }
    if matched_kappa is not None:
        extra["matched_kappa"] = float(matched_kappa)
    return doc_fields, extra


def profile_from_document(doc):
    from .sphere import SphereProfile
    return SphereProfile(
        n=int(doc["n"]),
        thetas=np.asarray(doc["thetas"], float),
        g=np.asarray(doc["g"], float),
        f=np.asarray(doc["f"], float),
        p=np.asarray(doc["p"], float),
    )
