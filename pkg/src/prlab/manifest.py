"""Experiment manifests: reproducible batch measurement runs.

A manifest is JSON:

    {
      "id": "experiment-name",
      "seed": 12345,
      "measurements": [ {"id": "...", "kind": "...", ...params}, ... ]
    }

Measurements execute independently (optionally across a process pool);
per-measurement randomness derives from sha256(manifest seed, measurement
id), so reports are byte-identical across runs and worker counts.
Reports deliberately carry no timestamps or runtimes; wall-clock timings
go to a separate ``.timings`` sidecar that is not part of the report.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
import time
from multiprocessing import get_context

from .errors import ParseError, PrlabError, UnknownDescriptor
from . import corrlab, prg
from .descriptors import function_from_descriptor
from .prg import generator_from_descriptor
from .acceptance import run_criterion

CSV_SCHEMA_VERSION = "1"
CSV_COLUMNS = [
    "schema_version",
    "experiment",
    "measurement_id",
    "kind",
    "value",
    "value_exact",
    "mode",
    "samples",
    "radius",
    "pass",
]


def _measurement_rng(seed: int, measurement_id: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{measurement_id}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _class_from_descriptor(desc: dict) -> corrlab.AdversaryClass:
    family = desc.get("family")
    if family == "affine":
        return corrlab.affine_class(int(desc["n"]))
    if family == "juntas":
        supports = desc.get("supports")
        return corrlab.all_juntas_class(
            int(desc["n"]), int(desc["width"]),
            supports=[tuple(s) for s in supports] if supports else None,
        )
    if family == "nof2":
        return corrlab.nof2_protocol_class(int(desc["block_bits"]))
    raise UnknownDescriptor(f"unknown adversary class family {family!r}")


def _dist_from_descriptor(desc) -> dict:
    if isinstance(desc, str):
        kind, _, arg = desc.partition(":")
        if kind == "uniform":
            return corrlab.uniform_distribution(int(arg))
        if kind == "point":
            value, _, bits = arg.partition(":")
            return corrlab.point_distribution(int(value), int(bits) if bits else 1)
        raise UnknownDescriptor(f"unknown distribution {desc!r}")
    return {int(k): v for k, v in desc.items()}


def execute_measurement(m: dict, seed: int) -> dict:
    """Run one measurement; returns a JSON-able result record."""
    kind = m.get("kind")
    mid = m.get("id", kind)
    rng = _measurement_rng(seed, str(mid))
    out = {"measurement_id": mid, "kind": kind}
    if kind == "eval":
        f = function_from_descriptor(m["f"])
        out["value"] = f.eval(int(m["input"], 0) if isinstance(m["input"], str) else m["input"])
    elif kind == "corr_exact":
        rep = corrlab.corr_exact(
            function_from_descriptor(m["f"]), function_from_descriptor(m["g"])
        )
        out.update(rep.to_json())
    elif kind == "corr_mc":
        rep = corrlab.corr_mc(
            function_from_descriptor(m["f"]), function_from_descriptor(m["g"]),
            int(m["samples"]), rng,
        )
        out.update(rep.to_json())
    elif kind == "corr_class_max":
        rep = corrlab.corr_class_max(
            function_from_descriptor(m["f"]), _class_from_descriptor(m["class"])
        )
        out.update(rep.to_json())
    elif kind == "kparty_norm":
        v = corrlab.kparty_norm(function_from_descriptor(m["f"]), int(m["k"]))
        out["value"] = float(v)
        out["value_exact"] = str(v)
        out["mode"] = "exact"
    elif kind == "fooling_error":
        gen = generator_from_descriptor(m["generator"])
        v = corrlab.fooling_error(gen, function_from_descriptor(m["f"]))
        out["value"] = float(v)
        out["value_exact"] = str(v)
        out["mode"] = "exact"
    elif kind == "tv_distance":
        v = corrlab.tv_distance(
            _dist_from_descriptor(m["dist_a"]), _dist_from_descriptor(m["dist_b"])
        )
        out["value"] = float(v)
        out["value_exact"] = str(v)
        out["mode"] = "exact"
    elif kind == "acceptance":
        rep = run_criterion(m["criterion"])
        out["value"] = 1.0 if rep["pass"] else 0.0
        out["pass"] = rep["pass"]
        out["report"] = rep
        out["mode"] = "exact"
    else:
        raise UnknownDescriptor(f"unknown measurement kind {kind!r}")
    return out


def _worker(args):
    index, m, seed = args
    try:
        return index, execute_measurement(m, seed), None
    except PrlabError as exc:
        return index, None, f"{type(exc).__name__}: {exc}"


def run_measurements(measurements: list[dict], seed: int, workers: int = 1) -> list[dict]:
    """Execute measurements, preserving manifest order in the results."""
    jobs = [(i, m, seed) for i, m in enumerate(measurements)]
    if workers <= 1 or len(jobs) <= 1:
        outcomes = [_worker(j) for j in jobs]
    else:
        with get_context("fork").Pool(workers) as pool:
            outcomes = pool.map(_worker, jobs)
    outcomes.sort(key=lambda t: t[0])
    results = []
    for index, result, error in outcomes:
        if error is not None:
            raise PrlabError(
                f"measurement {measurements[index].get('id', index)!r} failed: {error}"
            )
        results.append(result)
    return results


def load_manifest(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot parse manifest {path}: {exc}") from exc
    for key in ("id", "seed", "measurements"):
        if key not in doc:
            raise ParseError(f"manifest missing required key {key!r}")
    return doc


def report_json(doc: dict, results: list[dict], workers: int) -> str:
    report = {
        "experiment": doc["id"],
        "seed": doc["seed"],
        "csv_schema_version": CSV_SCHEMA_VERSION,
        # Resolved configuration travels with every report so pinned
        # constants are auditable.
        "configuration": {
            "prg_constants": dict(prg.DEFAULT_CONSTANTS),
            "corr_exhaustive_max_arity": corrlab.CORR_EXHAUSTIVE_MAX_ARITY,
            "fooling_exhaustive_max": corrlab.FOOLING_EXHAUSTIVE_MAX,
            "kparty_exhaustive_max_bits": corrlab.KPARTY_EXHAUSTIVE_MAX_BITS,
        },
        "results": results,
    }
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_csv(doc: dict, results: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow({
            "schema_version": CSV_SCHEMA_VERSION,
            "experiment": doc["id"],
            "measurement_id": r.get("measurement_id", ""),
            "kind": r.get("kind", ""),
            "value": r.get("value", ""),
            "value_exact": r.get("value_exact", ""),
            "mode": r.get("mode", ""),
            "samples": r.get("samples", ""),
            "radius": r.get("radius", ""),
            "pass": r.get("pass", ""),
        })
    return buf.getvalue()


def run_manifest_file(path: str, out_dir: str, workers: int = 1) -> dict:
    """Execute a manifest and write report files; returns a summary."""
    import os

    doc = load_manifest(path)
    t0 = time.time()
    results = run_measurements(doc["measurements"], int(doc["seed"]), workers)
    elapsed = time.time() - t0
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, doc["id"])
    with open(base + ".report.json", "w") as fh:
        fh.write(report_json(doc, results, workers))
    with open(base + ".report.csv", "w") as fh:
        fh.write(report_csv(doc, results))
    # Wall-clock sidecar, intentionally outside the deterministic reports.
    with open(base + ".timings", "w") as fh:
        fh.write(f"total_seconds={elapsed:.3f}\nworkers={workers}\n")
    failed = [r["measurement_id"] for r in results if r.get("pass") is False]
    return {
        "experiment": doc["id"],
        "measurements": len(results),
        "acceptance_failures": failed,
        "report_json": base + ".report.json",
        "report_csv": base + ".report.csv",
    }
