"""Exact JSON instance files and canonical report serialization.

Rationals travel as reduced strings ("3/4", "-2", "0"), never as JSON
numbers. Integers are accepted on input; floats are rejected.
"""

from __future__ import annotations

import csv
import io
import json
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import InputError
from .feasibility import Classification, IndexVector, Verdict, Violation
from .structure import Flat, VectorSet

SCHEMA_VERSION = 1
_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any, path: str = "$") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{path}: expected a rational string or integer, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise InputError(f"{path}: expected a rational string or integer, got {type(value).__name__}")
    mt = _RATIONAL.match(value)
    if not mt:
        raise InputError(f"{path}: malformed rational {value!r}")
    num, den = int(mt.group(1)), int(mt.group(2) or 1)
    if den == 0:
        raise InputError(f"{path}: zero denominator in {value!r}")
    return Fraction(num, den)


@dataclass(frozen=True)
class Instance:
    vectors: VectorSet
    indices: IndexVector | None = None
    metadata: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.vectors
        yield self.indices


def _require(doc: dict, key: str, path: str = "$"):
    if key not in doc:
        raise InputError(f"{path}: missing field {key!r}")
    return doc[key]


def _int_field(doc: dict, key: str) -> int:
    v = _require(doc, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"$.{key}: expected an integer, got {v!r}")
    return v


def _rational_list(value, path: str, length: int) -> tuple[Fraction, ...]:
    if not isinstance(value, list):
        raise InputError(f"{path}: expected an array")
    if len(value) != length:
        raise InputError(f"{path}: expected {length} entries, got {len(value)}")
    return tuple(parse_rational(v, f"{path}[{i}]") for i, v in enumerate(value))


def instance_from_dict(doc: Any, require_noncollinear: bool = False) -> Instance:
    if not isinstance(doc, dict):
        raise InputError("$: instance must be a JSON object")
    version = _require(doc, "schema_version")
    if version != SCHEMA_VERSION:
        raise InputError(f"$.schema_version: unsupported version {version!r}")
    m, k, N = _int_field(doc, "m"), _int_field(doc, "k"), _int_field(doc, "N")
    if m < 1 or k < 1 or N < 1:
        raise InputError("$: m, k and N must be >= 1")
    rows = _require(doc, "vectors")
    if not isinstance(rows, list):
        raise InputError("$.vectors: expected an array of rows")
    if len(rows) != N:
        raise InputError(f"$.vectors: N={N} but {len(rows)} rows given")
    vecs = tuple(_rational_list(r, f"$.vectors[{i}]", m) for i, r in enumerate(rows))
    E = VectorSet(m, k, vecs)
    pairs = E.collinear_pairs()
    if pairs:
        if require_noncollinear:
            E.require_noncollinear()
        i, j = pairs[0]
        warnings.warn(f"vectors {i} and {j} are collinear; necessity checks will refuse this set", stacklevel=2)
    ix = None
    if doc.get("indices") is not None:
        ind = doc["indices"]
        if not isinstance(ind, dict):
            raise InputError("$.indices: expected an object")
        p_inv = _rational_list(_require(ind, "p_inv", "$.indices"), "$.indices.p_inv", N)
        lam = _rational_list(_require(ind, "lambda", "$.indices"), "$.indices.lambda", N)
        ix = IndexVector(p_inv, lam, k)
    meta = doc.get("metadata") or {}
    if not isinstance(meta, dict):
        raise InputError("$.metadata: expected an object")
    return Instance(E, ix, meta)


def parse_instance(text: str | bytes, require_noncollinear: bool = False) -> Instance:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"instance is not UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(doc, require_noncollinear)


def load_instance(path: str | Path, require_noncollinear: bool = False) -> Instance:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(data, require_noncollinear)


def instance_to_dict(E: VectorSet, ix: IndexVector | None = None, metadata: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "m": E.m,
        "k": E.k,
        "N": E.N,
        "vectors": [[format_rational(x) for x in v] for v in E.vectors],
    }
    if ix is not None:
        doc["indices"] = {"p_inv": [format_rational(x) for x in ix.p_inv],
                          "lambda": [format_rational(x) for x in ix.lam]}
    if metadata:
        doc["metadata"] = dict(metadata)
    return doc


def serialize_instance(E: VectorSet, ix: IndexVector | None = None, metadata: dict | None = None) -> str:
    return canonical_json(instance_to_dict(E, ix, metadata))


def bundled_path(name: str) -> Path:
    """Path of a fixture shipped in ``blweight/data``."""
    p = resources.files("blweight") / "data" / name
    if not p.is_file():
        raise InputError(f"no bundled fixture named {name!r}")
    return Path(str(p))


def bundled_names() -> list[str]:
    return sorted(p.name for p in (resources.files("blweight") / "data").iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> Instance:
    return load_instance(bundled_path(name))


# reports

def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "item") and not hasattr(obj, "__len__"):  # numpy scalar
        return to_jsonable(obj.item())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise InputError(f"cannot serialize object of type {type(obj).__name__}")


def canonical_json(doc: Any) -> str:
    return json.dumps(to_jsonable(doc), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def make_report(kind: str, **payload) -> dict:
    return {"schema_version": SCHEMA_VERSION, "report": kind, **payload}


def write_report(report: dict) -> str:
    if not isinstance(report, dict) or "schema_version" not in report:
        raise InputError("a report must be an object with a schema_version field")
    return canonical_json(report)


def read_report(text: str) -> dict:
    """Parse report JSON. Rationals stay as strings so that writing back is byte-identical."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid report JSON: {exc.msg}") from None
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise InputError("report lacks schema_version")
    return doc


def flat_label(members) -> str:
    return "{" + ",".join(str(j + 1) for j in members) + "}"


def violation_to_dict(v: Violation) -> dict:
    return {"constraint": v.constraint, "where": v.where_label(), "lhs": v.lhs, "relation": v.relation, "rhs": v.rhs}


def verdict_to_dict(v: Verdict) -> dict:
    out = {"checklist": v.checklist, "passed": v.passed, "index_conditions_hold": v.index_conditions_hold,
           "violations": [violation_to_dict(x) for x in v.violations]}
    if v.generic is not None:
        out["generic"] = v.generic
    return out


def classification_to_dict(c: Classification) -> dict:
    return {"status": c.status, "sufficient": verdict_to_dict(c.sufficient),
            "necessary": None if c.necessary is None else verdict_to_dict(c.necessary)}


def flat_to_dict(F: Flat) -> dict:
    return {"rank": F.rank, "members": flat_label(F.members)}


def family_to_dict(family) -> dict:
    def node(n):
        d = {"beta": n.beta, "path": [j + 1 for j in n.alpha_path], "verified": n.verified}
        if n.gamma is not None:
            d.update(gamma=n.gamma, target=n.target_index + 1, branch=n.branch_index + 1)
        if n.children:
            d["children"] = [node(c) for c in n.children]
        return d

    return {"root_lambda": family.root_lambda,
            "order": [j + 1 for j in family.permutation],
            "leaf_count": len(family.leaves),
            "leaves": [{"path": [j + 1 for j in leaf.alpha_path], "beta": leaf.beta} for leaf in family.leaves],
            "tree": node(family.root)}


def vertices_to_dict(system, vertices) -> dict:
    return {"variables": [f"x{j + 1}" for j in range(system.N)] + [f"mu{j + 1}" for j in range(system.N)],
            "row_count": len(system.rows),
            "vertex_count": len(vertices),
            "vertices": [{"point": v.coordinates, "tight": list(v.tight)} for v in vertices]}


def fit_to_dict(fit) -> dict:
    return {"scales": fit.scales, "estimates": fit.estimates, "stderrs": fit.stderrs,
            "slope": fit.slope, "slope_stderr": fit.slope_stderr, "intercept": fit.intercept}


def slope_result_to_dict(res) -> dict:
    details = {k: (flat_label(v) if k == "flat" else v) for k, v in res.details.items()}
    return {"test": res.test, "fit": fit_to_dict(res.fit), "norm_fit": fit_to_dict(res.norm_fit),
            "geometric_exponent": res.geometric_exponent, "norm_exponent": res.norm_exponent,
            "exact_gap": res.exact_gap, "measured_gap": res.measured_gap, "details": details}


def integrability_to_dict(rep) -> dict:
    return {"test": "integrability", "p_inv_sum": rep.p_inv_sum, "epsilon": rep.epsilon, "terms": rep.terms,
            "exponent": rep.exponent, "partial_sums": [{"L": n, "sum": s} for n, s in rep.checkpoints],
            "last_decade_growth": rep.last_decade_growth, "increment_ratio": rep.increment_ratio,
            "verdict": rep.verdict, "boundary": rep.boundary, "norm_bound": rep.norm_bound, "w": rep.w}


def fit_to_csv(fit) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["scale", "estimate", "stderr"])
    for s, e, d in zip(fit.scales, fit.estimates, fit.stderrs):
        wr.writerow([repr(float(s)), repr(float(e)), repr(float(d))])
    return buf.getvalue()
