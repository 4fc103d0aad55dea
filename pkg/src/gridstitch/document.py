"""Pattern file format: a versioned operation log, replayed on load.

The file stores the config and every accepted mutation in order. Loading
replays the log through the engine, which reproduces the identical grid
state; serializing again yields byte-identical output.
"""

from __future__ import annotations

import json

from . import edits, pattern as pat
from .config import PatternConfig
from .errors import CorruptDocument, PatternError, UnknownRef
from .pattern import Pattern

FORMAT_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=2,
                      ensure_ascii=False) + "\n"


def to_doc(pattern: Pattern) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "pattern",
        "config": pattern.config.to_dict(),
        "ops": pattern.op_log,
    }


def dumps(pattern: Pattern) -> str:
    return canonical_json(to_doc(pattern))


def loads(text: str) -> Pattern:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptDocument(f"not valid JSON: {exc}") from None
    return from_doc(doc)


def from_doc(doc: dict) -> Pattern:
    if not isinstance(doc, dict) or doc.get("kind") != "pattern":
        raise CorruptDocument("not a pattern document")
    if doc.get("format_version") != FORMAT_VERSION:
        raise CorruptDocument(f"unsupported format_version {doc.get('format_version')}")
    config = PatternConfig.from_dict(doc.get("config", {}))
    p = pat.new_pattern(config)
    for k, op in enumerate(doc.get("ops", [])):
        result = apply_op(p, op)
        if result is not None and not result.accepted:
            raise CorruptDocument(
                f"op {k} ({op.get('op')}) rejected on replay: {result.reason}: {result.detail}"
            )
    return p


def save(pattern: Pattern, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(pattern))


def load(path) -> Pattern:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def undo(pattern: Pattern) -> Pattern:
    """Replay of the log minus its last entry."""
    doc = to_doc(pattern)
    if not doc["ops"]:
        return pattern
    doc["ops"] = doc["ops"][:-1]
    return from_doc(doc)


def apply_op(pattern: Pattern, op: dict):
    """Run one logged operation. Phase-1 ops raise on error and return None;
    feature edits return an EditResult."""
    if not isinstance(op, dict) or "op" not in op:
        raise CorruptDocument(f"malformed op entry: {op!r}")
    name = op["op"]
    if name == "add_panel":
        pat.add_panel(pattern, [tuple(v) for v in op["outline"]], op.get("name"))
        return None
    if name == "rename_panel":
        pat.rename_panel(pattern, op["panel"], op["name"])
        return None
    if name == "move_panel":
        pat.move_panel(pattern, op["panel"], op["dx"], op["dy"])
        return None
    if name == "flip_panel":
        pat.flip_panel(pattern, op["panel"])
        return None
    if name == "enter_stitch":
        pat.enter_stitch_phase(pattern)
        return None
    if name == "break":
        pat.insert_break_point(pattern, op["panel"], tuple(op["point"]))
        return None
    if name == "stitch":
        pat.stitch(pattern, op["edge_a"], op["edge_b"])
        return None
    if name == "enter_features":
        pat.enter_features_phase(pattern)
        return None
    if name == "insert_strip":
        return edits.insert_strip(pattern, op["panel"], op["cell"], op["axis"], op["side"])
    if name == "delete_strip":
        return edits.delete_strip(pattern, op["panel"], op["cell"], op["axis"])
    if name == "gather":
        return edits.gather_edge(pattern, op["edge"])
    if name == "convert_pleat":
        return edits.convert_to_pleat(pattern, op["panel"], op["cell"], op["direction"])
    if name == "insert_pleat":
        return edits.insert_pleat(pattern, op["panel"], op["cell"], op["direction"])
    if name == "resolve_expand":
        return edits.resolve_by_expand(pattern, op["panel"], op["cell"], op["direction"])
    if name == "resolve_delete":
        return edits.resolve_by_delete(pattern, op["panel"], op["cell"], op["direction"])
    if name == "dart":
        return edits.add_dart(
            pattern, op["panel"], op["anchor"], op["orientation"],
            op["width_cm"], op["height_units"], op.get("style", "auto"),
        )
    raise CorruptDocument(f"unknown op {name!r}")
