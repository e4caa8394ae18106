"""Batch front end: ``pinv <command> --surface FILE [--class ...]``.

Exit codes: 0 success, 2 invalid input, 3 engine failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import engine
from .errors import InvalidInput, InvariantViolation
from .exterior import ExtElement
from .lattice import fiber_solutions
from .surfaces import (
    BlowUp,
    BlowUpClass,
    Elliptic,
    MinimalPgPositive,
    MinimalPgZeroSpecial,
    Ruled,
    RuledClass,
    build_elliptic,
    build_log_transform,
    canonical_class,
    invariants,
)

COMMANDS = ("invariants", "compute", "wallcheck", "components", "basic-classes", "blowup", "snf")
CLASS_COMMANDS = {"compute", "wallcheck", "components", "blowup"}
# run once per class when classes are given, once without otherwise
OPTIONAL_CLASS_COMMANDS = {"snf"}


@dataclass
class ComputationRequest:
    surface_doc: dict
    model: Any
    class_docs: list = field(default_factory=list)
    classes: list = field(default_factory=list)
    commands: list = field(default_factory=list)


# -- validation helpers --------------------------------------------------------


def _get(obj: dict, key: str, path: str, required: bool = True):
    if not isinstance(obj, dict):
        raise InvalidInput(path, "expected an object")
    if key not in obj:
        if required:
            raise InvalidInput(f"{path}/{key}", "required field missing")
        return None
    return obj[key]


def _int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInput(path, f"expected an integer, got {json.dumps(value)}")
    return value


def _int_list(value, path: str) -> list[int]:
    if not isinstance(value, list):
        raise InvalidInput(path, "expected an array of integers")
    return [_int(x, f"{path}/{i}") for i, x in enumerate(value)]


def _check_keys(obj: dict, allowed: set, path: str):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise InvalidInput(f"{path}/{extra[0]}", "unknown field")


def parse_surface(doc, path: str = "/surface"):
    if not isinstance(doc, dict):
        raise InvalidInput(path, "surface descriptor must be an object")
    kind = _get(doc, "type", path)
    try:
        if kind == "ruled":
            _check_keys(doc, {"type", "base_genus"}, path)
            return Ruled(_int(_get(doc, "base_genus", path), f"{path}/base_genus"))
        if kind == "hirzebruch":
            _check_keys(doc, {"type", "n"}, path)
            n = _int(_get(doc, "n", path), f"{path}/n")
            if n < 0:
                raise InvalidInput(f"{path}/n", "Hirzebruch index must be nonnegative")
            return Ruled(0, n)
        if kind == "elliptic":
            _check_keys(doc, {"type", "base_genus", "chi", "q", "multiplicities", "extra_relations"}, path)
            mults = _int_list(_get(doc, "multiplicities", path, False) or [], f"{path}/multiplicities")
            extra = _get(doc, "extra_relations", path, False) or []
            if not isinstance(extra, list):
                raise InvalidInput(f"{path}/extra_relations", "expected an array of integer rows")
            rows = [_int_list(r, f"{path}/extra_relations/{i}") for i, r in enumerate(extra)]
            for i, r in enumerate(rows):
                if len(r) != len(mults) + 1:
                    raise InvalidInput(f"{path}/extra_relations/{i}", f"row must have length {len(mults) + 1}")
            return build_elliptic(
                _int(_get(doc, "base_genus", path), f"{path}/base_genus"),
                _int(_get(doc, "chi", path), f"{path}/chi"),
                _int(_get(doc, "q", path), f"{path}/q"),
                mults,
                rows,
            )
        if kind == "log_transform_elliptic":
            _check_keys(doc, {"type", "fibers"}, path)
            fibers = _get(doc, "fibers", path)
            if not isinstance(fibers, list):
                raise InvalidInput(f"{path}/fibers", "expected an array of [n, u, v] triples")
            triples = []
            for i, f in enumerate(fibers):
                t = _int_list(f, f"{path}/fibers/{i}")
                if len(t) != 3:
                    raise InvalidInput(f"{path}/fibers/{i}", "each fiber is a triple [n, u, v]")
                triples.append(tuple(t))
            try:
                return build_log_transform(triples)
            except ValueError as exc:
                raise InvalidInput(f"{path}/fibers", str(exc)) from exc
        if kind == "blow_up":
            _check_keys(doc, {"type", "base", "exceptional_count"}, path)
            base = parse_surface(_get(doc, "base", path), f"{path}/base")
            count = _get(doc, "exceptional_count", path, False)
            count = 1 if count is None else _int(count, f"{path}/exceptional_count")
            return BlowUp(base, count)
        if kind == "minimal_pg_positive":
            _check_keys(doc, {"type", "kind", "chi", "q"}, path)
            sub = _get(doc, "kind", path)
            chi = _get(doc, "chi", path, False)
            q = _get(doc, "q", path, False)
            return MinimalPgPositive(
                sub,
                None if chi is None else _int(chi, f"{path}/chi"),
                None if q is None else _int(q, f"{path}/q"),
            )
        if kind == "minimal_pg_zero_special":
            _check_keys(doc, {"type", "kind"}, path)
            return MinimalPgZeroSpecial(_get(doc, "kind", path))
    except InvalidInput:
        raise
    except ValueError as exc:
        raise InvalidInput(path, str(exc)) from exc
    raise InvalidInput(f"{path}/type", f"unknown surface type {json.dumps(kind)}")


def parse_class(model, doc, path: str):
    if isinstance(model, Ruled):
        if not isinstance(doc, dict):
            raise InvalidInput(path, "ruled classes are objects {fiber_pairing, nu}")
        _check_keys(doc, {"fiber_pairing", "nu"}, path)
        return RuledClass(_int(_get(doc, "fiber_pairing", path), f"{path}/fiber_pairing"),
                          _int(_get(doc, "nu", path), f"{path}/nu"))
    if isinstance(model, Elliptic):
        if doc == "zero":
            return (0,) * (len(model.multiplicities) + 1)
        if doc == "canonical":
            return canonical_class(model)
        vec = _int_list(doc, path)
        if len(vec) != len(model.multiplicities) + 1:
            raise InvalidInput(path, f"class vector must have length {len(model.multiplicities) + 1}")
        return tuple(vec)
    if isinstance(model, BlowUp):
        if not isinstance(doc, dict):
            raise InvalidInput(path, "blow-up classes are objects {base_class, l}")
        _check_keys(doc, {"base_class", "l"}, path)
        base = parse_class(model.base, _get(doc, "base_class", path), f"{path}/base_class")
        ls = _int_list(_get(doc, "l", path), f"{path}/l")
        if len(ls) != model.exceptional_count:
            raise InvalidInput(f"{path}/l", f"expected {model.exceptional_count} coefficients, got {len(ls)}")
        return BlowUpClass(base, tuple(ls))
    if isinstance(model, MinimalPgPositive):
        if doc not in ("zero", "canonical", "other"):
            raise InvalidInput(path, "class must be one of \"zero\", \"canonical\", \"other\"")
        return doc
    if isinstance(model, MinimalPgZeroSpecial):
        if not isinstance(doc, dict):
            raise InvalidInput(path, "classes are objects {nu, hilb_nonempty}")
        _check_keys(doc, {"nu", "hilb_nonempty"}, path)
        flag = _get(doc, "hilb_nonempty", path)
        if not isinstance(flag, bool):
            raise InvalidInput(f"{path}/hilb_nonempty", "expected a boolean")
        return {"nu": _int(_get(doc, "nu", path), f"{path}/nu"), "hilb_nonempty": flag}
    raise InvalidInput(path, "no class representation for this surface")


def parse_request(document: str | bytes) -> ComputationRequest:
    try:
        doc = json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InvalidInput("/", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidInput("/", "request must be a JSON object")
    _check_keys(doc, {"surface", "classes", "commands"}, "")
    model = parse_surface(_get(doc, "surface", ""))
    class_docs = doc.get("classes", [])
    if not isinstance(class_docs, list):
        raise InvalidInput("/classes", "expected an array")
    classes = [parse_class(model, c, f"/classes/{i}") for i, c in enumerate(class_docs)]
    commands = doc.get("commands", [])
    if not isinstance(commands, list):
        raise InvalidInput("/commands", "expected an array")
    for i, c in enumerate(commands):
        if c not in COMMANDS:
            raise InvalidInput(f"/commands/{i}", f"unknown command {json.dumps(c)}")
    return ComputationRequest(doc["surface"], model, class_docs, classes, list(commands))


# -- command execution -----------------------------------------------------------


class EngineFailure(Exception):
    def __init__(self, op: str, exc: Exception):
        super().__init__(f"{op}: {exc}")
        self.op = op


def _rational(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def _invariants_block(model) -> dict:
    inv = invariants(model)
    out = {"chi": inv.chi, "q": inv.q, "p_g": inv.p_g, "provenance": "classification_table"}
    if inv.canonical_fiber_degree is not None:
        out["k.F"] = inv.canonical_fiber_degree
    return out


def _class_json(cls):
    if isinstance(cls, RuledClass):
        return {"fiber_pairing": cls.fiber_pairing, "nu": cls.nu}
    if isinstance(cls, BlowUpClass):
        return {"base_class": _class_json(cls.base_class), "l": list(cls.l)}
    if isinstance(cls, tuple):
        return list(cls)
    return cls


def _basic_classes_block(model) -> dict:
    report = engine.basic_classes(model)
    return {
        "classes": [{"class": _class_json(c), "pair": p.to_json()} for c, p in report.classes],
        "simple_type": report.simple_type,
    }


def _blowup_block(model, cls) -> dict:
    if not isinstance(model, BlowUp):
        raise ValueError("blowup needs a blow_up surface")
    pair = engine.poincare(model.base, cls.base_class)
    mmk = engine.class_m_m_minus_k(model.base, cls.base_class)
    steps = []
    for l in cls.l:
        bound = engine.blowup_bound(mmk, l)
        pair = engine.blowup_transform(pair, mmk, l)
        steps.append({"l": l, "m(m-k)": mmk, "truncation_degree": bound, "pair": pair.to_json()})
        mmk = bound
    return {"base_pair": engine.poincare(model.base, cls.base_class).to_json(), "steps": steps}


def _snf_block(model, cls) -> dict:
    if not isinstance(model, Elliptic):
        raise ValueError("snf needs an elliptic surface with a class presentation")
    P = model.presentation
    snf = P.smith
    out = {
        "relations": [list(r) for r in P.relations],
        "D": snf.D, "U": snf.U, "V": snf.V,
        "invariant_factors": P.invariant_factors(),
        "torsion_order": P.torsion_order(),
        "fiber_order": P.order_of((1,) + (0,) * len(model.multiplicities)),
        "provenance": "smith_normal_form",
    }
    if cls is not None:
        out["coordinates"] = P.coordinates(cls)
        out["fiber_solutions"] = [{"d": s.d, "a": list(s.a)}
                                  for s in fiber_solutions(P, model.multiplicities, cls)]
    return out


def _components_block(model, cls) -> dict:
    if not isinstance(model, Elliptic):
        raise ValueError("components needs an elliptic surface")
    comps = engine.hilbert_components(model, cls)
    return {
        "components": [c.to_json() for c in comps],
        "count": len(comps),
        "nonempty": sum(1 for c in comps if not c.empty),
        "provenance": "twisted_linear_systems",
    }


def run_command(command: str, model, cls=None) -> dict:
    """Run one command; ``cls`` is required for the per-class commands."""
    try:
        if command == "invariants":
            return _invariants_block(model)
        if command == "basic-classes":
            return _basic_classes_block(model)
        if command == "snf":
            return _snf_block(model, cls)
        if cls is None:
            raise ValueError(f"{command} needs a class")
        if command == "compute":
            return engine.poincare(model, cls).to_json()
        if command == "wallcheck":
            return engine.wallcheck(model, cls).to_json()
        if command == "components":
            return _components_block(model, cls)
        if command == "blowup":
            return _blowup_block(model, cls)
    except (ValueError, ArithmeticError, TypeError) as exc:
        raise EngineFailure(command, exc) from exc
    raise InvalidInput("/commands", f"unknown command {command!r}")


def run(request: ComputationRequest) -> dict:
    results = []
    for command in request.commands:
        if command in CLASS_COMMANDS or (command in OPTIONAL_CLASS_COMMANDS and request.classes):
            for i, (doc, cls) in enumerate(zip(request.class_docs, request.classes)):
                results.append({"command": command, "class_index": i, "class": doc,
                                "output": run_command(command, request.model, cls)})
        else:
            results.append({"command": command, "output": run_command(command, request.model)})
    return {"surface": request.surface_doc, "results": results}


# -- rendering ---------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _fmt_ext(pairs) -> str:
    if not pairs:
        return "0"
    return str(ExtElement.from_pairs(_max_index(pairs), pairs))


def _max_index(pairs) -> int:
    top = 0
    for key, _ in pairs:
        if key:
            top = max(top, max(int(k) for k in key.split(".")))
    return top + top % 2


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        if set(value) >= {"p_plus", "p_minus"}:
            rows.append((prefix + "P+", _fmt_ext(value["p_plus"])))
            rows.append((prefix + "P-", _fmt_ext(value["p_minus"])))
            for k in sorted(value):
                if k not in ("p_plus", "p_minus"):
                    _flatten(f"{prefix}{k}.", value[k], rows)
            return
        for k in sorted(value):
            _flatten(f"{prefix}{k}.", value[k], rows)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}{i}.", v, rows)
    elif prefix.rstrip(".").rsplit(".", 1)[-1] in EXT_KEYS:
        rows.append((prefix.rstrip("."), _fmt_ext(value)))
    else:
        rows.append((prefix.rstrip("."), json.dumps(value, sort_keys=True)))


EXT_KEYS = {"direct", "wall_crossing_fibered", "wall_crossing_theta"}


def render_table(report: dict) -> str:
    lines = [f"surface: {json.dumps(report['surface'], sort_keys=True)}"]
    for block in report["results"]:
        head = block["command"]
        if "class" in block:
            head += f" [class {block['class_index']}: {json.dumps(block['class'], sort_keys=True)}]"
        lines.append("")
        lines.append(head)
        rows: list = []
        _flatten("", block["output"], rows)
        width = max((len(k) for k, _ in rows), default=0)
        lines.extend(f"  {k.ljust(width)}  {v}" for k, v in rows)
    return "\n".join(lines) + "\n"


# -- entry point ---------------------------------------------------------------


def _load(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput("/", f"cannot read {path}: {exc.strerror}") from exc


def _build_request(args) -> ComputationRequest:
    text = _load(args.surface)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput("/", f"not valid JSON: {exc}") from exc
    if args.command == "run":
        return parse_request(text)
    # a bare surface descriptor is accepted as well as a full request document
    if isinstance(doc, dict) and "surface" not in doc:
        doc = {"surface": doc}
    doc["commands"] = [args.command]
    if args.cls is not None:
        try:
            idx = int(args.cls)
        except ValueError:
            try:
                inline = json.loads(args.cls)
            except json.JSONDecodeError as exc:
                raise InvalidInput("/class", f"not an index or JSON: {exc}") from exc
            doc["classes"] = [inline]
        else:
            classes = doc.get("classes", [])
            if not isinstance(classes, list) or not 0 <= idx < len(classes):
                raise InvalidInput("/classes", f"no class with index {idx}")
            doc["classes"] = [classes[idx]]
    elif args.command in CLASS_COMMANDS and not doc.get("classes"):
        raise InvalidInput("/classes", f"{args.command} needs --class or a classes array")
    return parse_request(json.dumps(doc))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pinv", description="Poincare invariants of projective surfaces.")
    parser.add_argument("command", choices=COMMANDS + ("run",))
    parser.add_argument("--surface", required=True, help="surface descriptor or request document (JSON)")
    parser.add_argument("--class", dest="cls", help="class index into the document, or inline JSON")
    parser.add_argument("--format", choices=("table", "json"), default="table")
    parser.add_argument("--out", help="write the report here instead of stdout")
    args = parser.parse_args(argv)

    try:
        report = run(_build_request(args))
    except InvalidInput as exc:
        print(f"pinv: invalid input at {exc.location}: {exc.message}", file=sys.stderr)
        return 2
    except EngineFailure as exc:
        print(f"pinv: {exc.op} failed: {exc.__cause__}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"pinv: invariant violation: {exc}", file=sys.stderr)
        return 3

    text = render_json(report) if args.format == "json" else render_table(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
