"""``grz-lab`` command line.

Exit codes: 0 affirmative answer, 1 negative answer (a witness is printed),
2 usage or input error, 3 resource cap hit or bounded search inconclusive.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .bisim import is_bisimulation
from .construct import (is_regular_tree, powerset_button_model, ratchet_chain_model,
                        unravel_baled, unravel_tree)
from .control import (Labeling, check_control, check_frame_labeling, labeling_from_buttons,
                      labeling_from_ratchet, model_labeling_from_frame_labeling,
                      verify_model_labeling)
from .decide import LogicId, countermodel_search, verify_displayed_lemmas
from .errors import GrzLabError, ResourceLimitError
from .formula import parse, sorted_variables
from .frame import Frame, FrameClass, enumerate_frames, hasse_edges, least, properties
from .model import Model, PointedModel, extension, frame_valid, class_valid_upto

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


# --------------------------------------------------------------------------
# DOT export

def _dot_id(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(obj, out) -> None:
    """Write a frame, model, pointed model or labeling as a DOT digraph.

    Edges are the transitive reduction without loops; loops are drawn only
    when the frame is not reflexive everywhere.  Models annotate worlds
    with their true variables, labelings with their labels.
    """
    point = None
    labels = {}
    if isinstance(obj, PointedModel):
        point = obj.point
        obj = obj.model
    if isinstance(obj, Model):
        frame = obj.frame
        labels = {w: ", ".join(obj.true_at(w)) for w in frame.worlds}
    elif isinstance(obj, Labeling):
        frame = obj.frame
        point = obj.root
        labels = {w: str(f) for w, f in enumerate(obj.labels)}
    elif isinstance(obj, Frame):
        frame = obj
    else:
        raise TypeError(f"cannot export {type(obj).__name__} as DOT")
    reflexive = all(frame.related(w, w) for w in frame.worlds)
    lines = ["digraph frame {", "  rankdir=BT;"]
    for w in frame.worlds:
        text = f"{w}: {labels[w]}" if labels.get(w) else str(w)
        attrs = [f"label={_dot_id(text)}"]
        if w == point:
            attrs.append("shape=doublecircle")
        lines.append(f"  {w} [{', '.join(attrs)}];")
    for i, j in hasse_edges(frame):
        lines.append(f"  {i} -> {j};")
    if not reflexive:
        for w in frame.worlds:
            if frame.related(w, w):
                lines.append(f"  {w} -> {w};")
    lines.append("}")
    out.write("\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# helpers

def _read_json(path, stdin):
    try:
        if path == "-":
            return json.load(stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path}: invalid JSON: {exc}") from None


def _formula(args, stdin):
    if args.file:
        if args.file == "-":
            text = stdin.read()
        else:
            try:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise _UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    elif args.formula:
        text = " ".join(args.formula)
    else:
        raise _UsageError("a formula is required (positional argument or --file)")
    return parse(text.strip())


class _Out:
    def __init__(self, args, stdout):
        self.json = args.json
        self.stdout = stdout

    def emit(self, data: dict, text: str):
        if self.json:
            self.stdout.write(json.dumps(data, indent=None, sort_keys=True) + "\n")
        else:
            self.stdout.write(text.rstrip("\n") + "\n")


def _witness_text(pm: PointedModel) -> str:
    frame = pm.model.frame
    lines = [f"  worlds: {frame.size}", f"  edges: {hasse_edges(frame)} (Hasse, loops omitted)"
             if all(frame.related(w, w) for w in frame.worlds) else f"  edges: {frame.edges()}"]
    for name in pm.model.variables():
        lines.append(f"  {name}: {sorted(pm.model.valuation[name])}")
    lines.append(f"  fails at world {pm.point}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# commands

def cmd_parse(args, out, stdin):
    f = _formula(args, stdin)
    out.emit({"formula": str(f), "variables": sorted_variables(f)}, str(f))
    return EXIT_OK


def cmd_check(args, out, stdin):
    pm = PointedModel.from_dict(_read_json(args.model, stdin))
    if args.world is not None:
        pm = PointedModel(pm.model, args.world)
    f = _formula(args, stdin)
    ext = sorted(extension(pm.model, f))
    ok = pm.point in ext
    out.emit({"holds": ok, "world": pm.point, "extension": ext, "formula": str(f)},
             f"{'true' if ok else 'false'} at world {pm.point}; extension {ext}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_valid(args, out, stdin):
    f = _formula(args, stdin)
    if args.frame:
        frame = Frame.from_dict(_read_json(args.frame, stdin))
        result = frame_valid(frame, f, cap=args.valuation_cap)
        if result:
            out.emit({"valid": True}, "valid on the frame")
            return EXIT_OK
        pm = result.witness
        out.emit({"valid": False, "witness": pm.to_dict()},
                 "countermodel:\n" + _witness_text(pm))
        return EXIT_NEGATIVE
    if not args.frame_class:
        raise _UsageError("valid needs --frame FILE or --class NAME")
    report = class_valid_upto(FrameClass.parse(args.frame_class), f, args.max,
                              cap=args.valuation_cap, frame_cap=args.cap)
    if not report.found:
        out.emit(report.to_dict() | {"valid": True},
                 f"valid on all {report.frame_class.value} frames with at most {args.max} worlds "
                 f"({report.frames_examined} up to isomorphism)")
        return EXIT_OK
    out.emit(report.to_dict() | {"valid": False},
             f"countermodel after {report.frames_examined} frames:\n" + _witness_text(report.witness))
    return EXIT_NEGATIVE


def cmd_enumerate(args, out, stdin):
    c = FrameClass.parse(args.frame_class)
    frames = list(enumerate_frames(c, args.size, up_to_iso=not args.labeled, cap=args.cap))
    if out.json:
        for f in frames:
            out.stdout.write(json.dumps(f.to_dict()) + "\n")
    else:
        kind = "labeled" if args.labeled else "up to isomorphism"
        out.stdout.write(f"{len(frames)} {c.value} frames on {args.size} worlds ({kind})\n")
        for f in frames:
            out.stdout.write(f"  {hasse_edges(f)}\n")
    return EXIT_OK


def cmd_search(args, out, stdin):
    f = _formula(args, stdin)
    logic = LogicId.parse(args.logic)
    c = FrameClass.parse(args.frame_class) if args.frame_class else None
    report = countermodel_search(logic, f, args.max, c, cap=args.valuation_cap, frame_cap=args.cap)
    if report.found:
        out.emit(report.to_dict(),
                 f"{logic.value} does not prove the formula; countermodel on a "
                 f"{report.frame_class.value} frame:\n" + _witness_text(report.witness))
        return EXIT_NEGATIVE
    out.emit(report.to_dict(),
             f"no countermodel on {report.frame_class.value} frames up to {args.max} worlds "
             f"({report.frames_examined} examined); inconclusive")
    return EXIT_INCONCLUSIVE


def cmd_unravel(args, out, stdin):
    pm = PointedModel.from_dict(_read_json(args.model, stdin))
    if args.tree:
        result = unravel_tree(pm, regularize=args.regularize)
    else:
        result = unravel_baled(pm)
    check = is_bisimulation(result.copy_map, result.model, pm.model)
    props = sorted(properties(result.model.frame))
    data = result.to_dict() | {"bisimulation": check.ok, "properties": props}
    if args.tree:
        data["regular"] = is_regular_tree(result.model.frame)
    text = [f"{result.model.size} worlds, copy map {list(result.copy_map)}",
            f"properties: {', '.join(props)}",
            f"copy relation is a bisimulation: {check.ok}"]
    out.emit(data, "\n".join(text))
    return EXIT_OK if check else EXIT_NEGATIVE


def cmd_buttons(args, out, stdin):
    pm, buttons = powerset_button_model(args.n)
    check = check_control("independent_buttons", pm, buttons)
    out.emit(pm.to_dict() | {"buttons": [str(b) for b in buttons], "independent": check.ok,
                             "violations": [str(v) for v in check.violations]},
             f"powerset of {args.n}: {pm.model.size} worlds; "
             f"{args.n} independent buttons at the empty set: {check.ok}")
    return EXIT_OK if check else EXIT_NEGATIVE


def cmd_ratchet(args, out, stdin):
    pm, ratchet = ratchet_chain_model(args.n)
    check = check_control("ratchet", pm, ratchet)
    out.emit(pm.to_dict() | {"ratchet": [str(r) for r in ratchet], "ratchet_ok": check.ok,
                             "violations": [str(v) for v in check.violations]},
             f"chain of {args.n}: ratchet of length {args.n} at w0: {check.ok}")
    return EXIT_OK if check else EXIT_NEGATIVE


def cmd_label(args, out, stdin):
    frame = Frame.from_dict(_read_json(args.frame, stdin))
    if args.ratchet:
        target, stmts = ratchet_chain_model(frame.size)
        labeling = labeling_from_ratchet(frame, stmts)
    else:
        root = least(frame)
        target, stmts = powerset_button_model(frame.size - 1)
        labeling = labeling_from_buttons(frame, 0 if root is None else root, stmts)
    check = check_frame_labeling(labeling, target)
    ok = check.ok
    rng = random.Random(args.seed)
    sampled = []
    for _ in range(args.samples):
        model = Model(frame, {p: {w for w in frame.worlds if rng.random() < 0.5} for p in ("p", "q")})
        psi = model_labeling_from_frame_labeling(model, labeling)
        passed = verify_model_labeling(model, labeling.root, target, psi).ok
        sampled.append(passed)
        ok = ok and passed
    text = [f"node {w}: {f}" for w, f in enumerate(labeling.labels)]
    text.append(f"frame labeling conditions hold: {check.ok}")
    if sampled:
        text.append(f"model labelings verified: {sum(sampled)}/{len(sampled)}")
    out.emit(labeling.to_dict() | {"labeling_ok": check.ok, "model_labelings": sampled,
                                   "target": target.to_dict(),
                                   "violations": [str(v) for v in check.violations]},
             "\n".join(text + [str(v) for v in check.violations]))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_verify_labeling(args, out, stdin):
    labeling = Labeling.from_dict(_read_json(args.labeling, stdin))
    target = PointedModel.from_dict(_read_json(args.model, stdin))
    check = check_frame_labeling(labeling, target)
    out.emit({"ok": check.ok, "violations": [{"condition": v.kind, "detail": v.detail}
                                             for v in check.violations]},
             "labeling verified" if check else "\n".join(f"condition {v}" for v in check.violations))
    return EXIT_OK if check else EXIT_NEGATIVE


def cmd_lemmas(args, out, stdin):
    results = verify_displayed_lemmas(args.max)
    data = {k: {"description": r.description, "passed": r.passed,
                "frames_examined": r.frames_examined, "details": r.details}
            for k, r in results.items()}
    text = [f"({k}) {'PASS' if r.passed else 'FAIL'}  {r.description}  [{r.frames_examined} frames]"
            for k, r in results.items()]
    out.emit(data, "\n".join(text))
    return EXIT_OK if all(r.passed for r in results.values()) else EXIT_NEGATIVE


def cmd_export_dot(args, out, stdin):
    if args.labeling:
        obj = Labeling.from_dict(_read_json(args.labeling, stdin))
    elif args.model:
        data = _read_json(args.model, stdin)
        obj = PointedModel.from_dict(data) if "designated" in data else Model.from_dict(data)
    elif args.frame:
        obj = Frame.from_dict(_read_json(args.frame, stdin))
    else:
        raise _UsageError("export-dot needs --frame, --model or --labeling")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            export_dot(obj, fh)
    else:
        export_dot(obj, out.stdout)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cap", type=int, default=None, metavar="FRAMES",
                        help="maximum number of frames to enumerate per size")
    common.add_argument("--valuation-cap", type=int, default=1 << 24, metavar="N",
                        help="maximum valuations per frame")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled valuations")

    formula_args = _ArgumentParser(add_help=False)
    formula_args.add_argument("formula", nargs="*", help="formula text")
    formula_args.add_argument("--file", help="read the formula from a file ('-' for stdin)")

    parser = _ArgumentParser(prog="grz-lab", description="Finite-frame workbench for Grzegorczyk logics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    p = sub.add_parser("parse", parents=[common, formula_args], help="parse and print a formula")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", parents=[common, formula_args], help="evaluate at a pointed model")
    p.add_argument("--model", required=True, help="model file")
    p.add_argument("--world", type=int, help="world to check (default: designated)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("valid", parents=[common, formula_args], help="frame or class validity")
    p.add_argument("--frame", help="frame file")
    p.add_argument("--class", dest="frame_class", help="frame class to sweep")
    p.add_argument("--max", type=int, default=4, help="largest frame size")
    p.set_defaults(func=cmd_valid)

    p = sub.add_parser("enumerate", parents=[common], help="list frames of a class")
    p.add_argument("--class", dest="frame_class", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--labeled", action="store_true", help="all labeled frames, not iso classes")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("search", parents=[common, formula_args], help="bounded countermodel search")
    p.add_argument("--logic", required=True, help=", ".join(l.value for l in LogicId))
    p.add_argument("--class", dest="frame_class", help="override the logic's frame class")
    p.add_argument("--max", type=int, default=4)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("unravel", parents=[common], help="unravel a pointed model")
    p.add_argument("--model", required=True)
    p.add_argument("--tree", action="store_true", help="tree unraveling instead of baled tree")
    p.add_argument("--regularize", action="store_true", help="pad the tree to a regular one")
    p.set_defaults(func=cmd_unravel)

    p = sub.add_parser("buttons", parents=[common], help="powerset model with independent buttons")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_buttons)

    p = sub.add_parser("ratchet", parents=[common], help="chain model with a ratchet")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_ratchet)

    p = sub.add_parser("label", parents=[common], help="label a lattice (buttons) or chain (ratchet)")
    p.add_argument("--frame", required=True)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--buttons", action="store_true", help="button labeling (default)")
    kind.add_argument("--ratchet", action="store_true", help="ratchet labeling")
    p.add_argument("--samples", type=int, default=0,
                   help="also verify model labelings for this many sampled valuations")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("verify-labeling", parents=[common], help="check a frame labeling")
    p.add_argument("--labeling", required=True)
    p.add_argument("--model", required=True, help="pointed model file")
    p.set_defaults(func=cmd_verify_labeling)

    p = sub.add_parser("lemmas", parents=[common], help="check the displayed lemma formulas")
    p.add_argument("--max", type=int, default=4)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("export-dot", parents=[common], help="write a DOT diagram")
    p.add_argument("--frame")
    p.add_argument("--model")
    p.add_argument("--labeling")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)
    return parser


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        parser.print_usage(stderr)
        return EXIT_USAGE
    try:
        return args.func(args, _Out(args, stdout), stdin)
    except ResourceLimitError as exc:
        stderr.write(f"resource cap: {exc}\n")
        return EXIT_INCONCLUSIVE
    except (_UsageError, GrzLabError, ValueError, KeyError, TypeError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
