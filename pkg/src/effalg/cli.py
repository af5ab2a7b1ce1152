"""Command-line driver: validate, analyze, triple, laws, gen, enumerate.

Exit codes: 0 success, 1 domain failure (invalid algebra or law failure),
2 usage or parse error.  Parse failures produce no analysis output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import gen
from .core import EffectAlgebra, ValidationError, validate
from .decomp import basic_decomposition, sharp_envelope
from .eat import EATParseError, parse_eat, serialize_eat
from .lattice import NotLatticeError, is_lattice
from .laws import LAW_IDS, check_all, check_law
from .substructures import (
    blocks,
    center,
    compatibility_center,
    meager_elements,
    sharp_elements,
)
from .triple import build_tea, extract_triple, verify_iso


def _load(path, out):
    """Parse and validate; prints diagnostics and returns (E, exit code)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=out)
        return None, 2
    try:
        table = parse_eat(text)
    except EATParseError as exc:
        for issue in exc.issues:
            print(f"{path}: {issue}", file=out)
        return None, 2
    try:
        return validate(table), 0
    except ValidationError as exc:
        for v in exc.violations:
            print(f"{path}: {v}", file=out)
        return None, 1


def _cmd_validate(args, out, err):
    E, code = _load(args.file, err)
    if E is None:
        return code
    print(f"{args.file}: valid effect algebra with {E.n} elements", file=out)
    return 0


def analysis_report(E: EffectAlgebra) -> dict:
    """Structured analysis; field names are frozen (documented in README)."""
    names = E.names
    lat, witness = is_lattice(E)
    ords = E.isotropic_profile().ord
    report = {
        "elements": list(names),
        "zero": names[E.zero],
        "unit": names[E.unit],
        "conventions": {
            "ord_zero": "null: unbounded by convention",
            "blocks": "maximal pairwise-compatible sets; on a finite carrier "
                      "every block is atomic, so no separate atomic-block "
                      "notion is tracked",
        },
        "atoms": [names[a] for a in E.atoms()],
        "atomic": E.is_atomic(),
        "ord": {names[x]: ords[x] for x in range(E.n)},
        "less_than": sorted(
            [names[x], names[y]]
            for x in range(E.n)
            for y in range(E.n)
            if x != y and E.leq[x, y]
        ),
        "lattice": lat,
    }
    if not lat:
        x, y, kind = witness
        report["lattice_witness"] = [names[x], names[y], kind]
        report["skipped"] = {
            key: "requires a lattice order"
            for key in ("sharp", "meager", "blocks", "compatibility_center",
                        "center", "envelopes", "decompositions")
        }
        return report

    sh = sharp_elements(E)
    mea = meager_elements(E)
    bl = blocks(E)
    report["sharp"] = [names[x] for x in sh.members]
    report["meager"] = [names[x] for x in mea.members]
    report["blocks"] = [[names[x] for x in blk] for blk in bl.blocks]
    report["compatibility_center"] = [names[x] for x in compatibility_center(E)]
    report["center"] = [names[x] for x in center(E).members]
    envs = {}
    decs = {}
    for x in range(E.n):
        env = sharp_envelope(E, x)
        envs[names[x]] = {"below": names[env.below], "above": names[env.above]}
        dec = basic_decomposition(E, x)
        decs[names[x]] = {
            "sharp_part": names[dec.sharp_part],
            "meager_part": names[dec.meager_part],
            "support": [[names[a], k] for a, k in dec.support.pairs],
        }
    report["envelopes"] = envs
    report["decompositions"] = decs
    return report


def _print_text_report(report, out):
    print(f"elements ({len(report['elements'])}): " + " ".join(report["elements"]), file=out)
    print(f"zero: {report['zero']}   unit: {report['unit']}", file=out)
    print("atoms: " + " ".join(report["atoms"]), file=out)
    ords = " ".join(
        f"{k}:{'inf' if v is None else v}" for k, v in report["ord"].items()
    )
    print(f"ord: {ords}", file=out)
    if not report["lattice"]:
        x, y, kind = report["lattice_witness"]
        print(f"lattice: no ({x}, {y} have no {kind})", file=out)
        print("skipped: " + ", ".join(sorted(report["skipped"])), file=out)
        return
    print("lattice: yes", file=out)
    print("sharp: " + " ".join(report["sharp"]), file=out)
    print("meager: " + " ".join(report["meager"]), file=out)
    for i, blk in enumerate(report["blocks"], start=1):
        print(f"block {i}: " + " ".join(blk), file=out)
    print("compatibility center: " + " ".join(report["compatibility_center"]), file=out)
    print("center: " + " ".join(report["center"]), file=out)
    print("decompositions:", file=out)
    for name in report["elements"]:
        dec = report["decompositions"][name]
        env = report["envelopes"][name]
        supp = " ".join(f"{a}^{k}" for a, k in dec["support"]) or "-"
        print(
            f"  {name} = {dec['sharp_part']} + {dec['meager_part']}"
            f"   support: {supp}   envelope: [{env['below']}, {env['above']}]",
            file=out,
        )


def _cmd_analyze(args, out, err):
    E, code = _load(args.file, err)
    if E is None:
        return code
    report = analysis_report(E)
    if args.format == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        _print_text_report(report, out)
    return 0


def _cmd_triple(args, out, err):
    E, code = _load(args.file, err)
    if E is None:
        return code
    try:
        t = extract_triple(E)
    except NotLatticeError as exc:
        print(f"{args.file}: {exc}", file=err)
        return 1
    tea = build_tea(t)
    print("sharp part: " + " ".join(t.sharp.names), file=out)
    print("meager part: " + " ".join(t.meager.names), file=out)
    for s in range(t.sharp.n):
        fiber = [t.meager.names[m] for m in range(t.meager.n) if (t.h[s] >> m) & 1]
        print(f"h({t.sharp.names[s]}) = {{{', '.join(fiber)}}}", file=out)
    res = verify_iso(E, tea)
    print(f"isomorphic: {'true' if res.ok else 'false'}", file=out)
    if res.ok:
        for src, img in res.mapping:
            print(f"  {src} -> {img}", file=out)
        return 0
    print(f"  failure: {res.failure}", file=out)
    return 1


def _cmd_laws(args, out, err):
    E, code = _load(args.file, err)
    if E is None:
        return code
    try:
        if args.law:
            reports = [check_law(E, args.law)]
        else:
            reports = check_all(E)
    except NotLatticeError as exc:
        print(f"{args.file}: {exc}", file=err)
        return 1
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=err)
        return 2
    failed = False
    for rep in reports:
        flag = " [bounded]" if rep.bounded else ""
        line = f"{rep.law_id} {rep.verdict}{flag} ({rep.instances} instances)"
        if rep.witness is not None:
            line += f" witness={rep.witness!r}"
            failed = True
        print(line, file=out)
    return 1 if failed else 0


def _cmd_gen(args, out, err):
    try:
        E = gen.generate(args.spec)
    except gen.GenSpecError as exc:
        print(f"error: {exc}", file=err)
        return 2
    text = serialize_eat(E)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def _cmd_enumerate(args, out, err):
    try:
        algebras = list(gen.enumerate_small(args.max_order))
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return 2
    if args.emit:
        emit_dir = Path(args.emit)
        emit_dir.mkdir(parents=True, exist_ok=True)
        counters = {}
        for E in algebras:
            k = counters.get(E.n, 0)
            counters[E.n] = k + 1
            (emit_dir / f"order{E.n}_{k:03d}.eat").write_text(
                serialize_eat(E), encoding="utf-8"
            )
    else:
        for i, E in enumerate(algebras):
            if i:
                out.write("\n")
            out.write(serialize_eat(E))
    print(f"{len(algebras)} isomorphism classes up to order {args.max_order}", file=err)
    return 0


def run(argv=None, out=None, err=None) -> int:
    """Entry point; returns the exit code instead of exiting."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = argparse.ArgumentParser(
        prog="effalg",
        description="Finite lattice effect algebra toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the axioms of an .eat file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("analyze", help="full structural report")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("triple", help="extract the triple, rebuild, verify")
    p.add_argument("file")
    p.set_defaults(func=_cmd_triple)

    p = sub.add_parser("laws", help="run the law registry")
    p.add_argument("file")
    p.add_argument("--law", choices=LAW_IDS, default=None)
    p.set_defaults(func=_cmd_laws)

    p = sub.add_parser("gen", help="emit a standard construction as EAT")
    p.add_argument("spec")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("enumerate", help="enumerate small algebras up to isomorphism")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--emit", default=None, metavar="DIR")
    p.set_defaults(func=_cmd_enumerate)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args, out, err)


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
