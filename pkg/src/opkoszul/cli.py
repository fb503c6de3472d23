"""Command-line front end.

Every flag has an ``OPK_`` environment twin (``--max-degree`` reads
``OPK_MAX_DEGREE``); flags win over the environment, which wins over the
defaults.  Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
parse error, 3 the request needs degrees outside the certified window.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import yaml

from .algebras import AlgebraPresentation, Generator, PresentationError, quasifree_abelianize
from .bar import derived_abelianization, algebra_complex
from .complexes import ChainComplex, UncertifiedDegree
from .cubes import Affine, bm_estimate, dual_bm_estimate, uniformity_translate
from .koszul import completion_check, counit_exchange_check, counit_layer_check, unit_connectivity_check
from .linalg import SparseMatrix
from .poisson_en import en_ab_connectivity_check, en_completeness_check, en_connectivity_lemma_check, en_tower
from .reports import Report
from .towers import TowerOfSpaces, completeness_check, lim_lim1, nc_tower

log = logging.getLogger("opkoszul")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_WINDOW = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ parsing
def _line_index(text: str) -> Dict[str, int]:
    """Line (1-based) of each generator's differential entry, else of its declaration."""
    lines: Dict[str, int] = {}
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return lines
    if not isinstance(root, yaml.MappingNode):
        return lines
    for key, val in root.value:
        if key.value == "differential" and isinstance(val, yaml.MappingNode):
            for k, _ in val.value:
                lines[k.value] = k.start_mark.line + 1
        if key.value == "generators" and isinstance(val, yaml.SequenceNode):
            for item in val.value:
                if isinstance(item, yaml.MappingNode):
                    for k, v in item.value:
                        if k.value == "name" and v.value not in lines:
                            lines[v.value] = v.start_mark.line + 1
    return lines


def parse_presentation(path: str, cohomological: bool = False) -> AlgebraPresentation:
    """Read a YAML presentation: operad, generators [{name, degree, weight}],
    differential {generator: [[coefficient, [word...]], ...]}.

    Strict algebras add ``style: strict`` and ``multiplication`` as a list of
    ``[a, b, [[coefficient, c], ...]]``.  ``cohomological`` negates degrees.
    """
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" (line {mark.line + 1})" if mark else ""
        raise PresentationError(f"malformed YAML{where}: {getattr(e, 'problem', e)}") from None
    if not isinstance(data, dict):
        raise PresentationError("the presentation must be a mapping")
    for field in ("operad", "generators"):
        if field not in data:
            raise PresentationError(f"missing field {field!r}")
    sign = -1 if cohomological else 1
    gens = []
    for i, g in enumerate(data["generators"] or []):
        if not isinstance(g, dict) or "name" not in g or "degree" not in g:
            raise PresentationError(f"generator entry {i} needs name and degree")
        weight = int(g.get("weight", 1))
        if weight < 0:
            raise PresentationError(f"negative weight for {g['name']}", str(g["name"]))
        gens.append(Generator(str(g["name"]), sign * int(g["degree"]), weight))
    style = data.get("style", "quasi-free")
    mult = None
    if style == "strict":
        mult = {}
        for entry in data.get("multiplication") or []:
            a, b, terms = entry
            mult[(str(a), str(b))] = [(Fraction(str(c)), str(n)) for c, n in terms]
    diff = {}
    for gname, terms in (data.get("differential") or {}).items():
        diff[str(gname)] = [(Fraction(str(c)), w) for c, w in (terms or [])]
    try:
        return AlgebraPresentation(str(data["operad"]), gens, diff, style=style, multiplication=mult,
                                   name=str(data.get("name", Path(path).stem)))
    except PresentationError as e:
        line = _line_index(text).get(e.generator or "")
        if line:
            raise PresentationError(f"{e.detail} (line {line})", e.generator) from None
        raise


def _profile(path: str):
    """BM profile file: ``W: [1, 2]`` and ``k: {"1": 1, "1,2": 3}``."""
    data = yaml.safe_load(Path(path).read_text())
    if not isinstance(data, dict) or "W" not in data or "k" not in data:
        raise PresentationError("a profile needs fields W and k")
    W = [str(w) for w in data["W"]]
    prof = {}
    for key, v in data["k"].items():
        block = frozenset(s.strip() for s in str(key).split(",") if s.strip())
        if not block <= set(W):
            raise PresentationError(f"profile key {key!r} is not a subset of W")
        prof[block] = int(v)
    return W, prof


def _tower_file(path: str) -> TowerOfSpaces:
    """Tower file: ``dims: [d0, d1, ...]`` and ``maps: [M0, ...]`` with Mk: level k+1 -> k dense."""
    data = yaml.safe_load(Path(path).read_text())
    dims = [int(d) for d in data["dims"]]
    maps = []
    for k, m in enumerate(data.get("maps") or []):
        if dims[k] == 0 or dims[k + 1] == 0:
            maps.append(SparseMatrix(dims[k], dims[k + 1]))
            continue
        mat = SparseMatrix.from_dense([[Fraction(str(v)) for v in row] for row in m])
        if (mat.nrows, mat.ncols) != (dims[k], dims[k + 1]):
            raise PresentationError(f"map {k} has shape {(mat.nrows, mat.ncols)}, expected {(dims[k], dims[k + 1])}")
        maps.append(mat)
    if len(maps) != len(dims) - 1:
        raise PresentationError("a tower with N+1 levels needs N maps")
    return TowerOfSpaces(dims, maps)


# ------------------------------------------------------------------- output
def _table(c: ChainComplex) -> Dict[int, int]:
    return {i: c.betti(i) for i in range(c.valid[0], c.valid[1] + 1)}


def _write_rows(out, rows: List[dict]):
    if not rows:
        return
    keys: List[str] = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    w = csv.writer(out, delimiter="\t", lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([_plain(r.get(k, "")) for k in keys])


def _plain(v):
    if isinstance(v, dict):
        return " ".join(f"{k}:{_plain(x)}" for k, x in v.items())
    if isinstance(v, bool):
        return "yes" if v else "no"
    return v


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, frozenset):
        return sorted(v)
    if isinstance(v, Fraction):
        return str(v)
    return v


def emit(result: dict, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(_jsonable(result), sort_keys=True, indent=2) + "\n")
        return
    out.write(f"# {result['command']}\n")
    for key in ("window", "value"):
        if key in result:
            out.write(f"{key}\t{_plain(result[key])}\n")
    for name, table in result.get("tables", {}).items():
        out.write(f"\n## {name}\n")
        col = result.get("index", "degree")
        _write_rows(out, [{col: d, "dim": v} for d, v in table.items()])
    for rep in result.get("reports", []):
        out.write(f"\n## {rep['name']}: {'PASS' if rep['passed'] else 'FAIL'}\n")
        for n in rep["notes"]:
            out.write(f"# {n}\n")
        _write_rows(out, rep["rows"])
        for k, v in sorted(rep.get("data", {}).items()):
            if not isinstance(v, dict):
                out.write(f"{k}\t{_plain(v)}\n")


# ----------------------------------------------------------------- commands
def _load(args) -> AlgebraPresentation:
    return parse_presentation(args.input, args.cohomological)


def _window(args):
    if args.weight_cap:
        return {"weights": list(range(1, args.weight_cap + 1))}
    top = args.max_degree
    if args.bar_depth is not None and (top - 1) // 2 > args.bar_depth:
        raise UncertifiedDegree(f"degrees up to {top} need bar depth {(top - 1) // 2}, "
                                f"got {args.bar_depth}")
    return {"top": top}


def _need_top(args) -> int:
    w = _window(args)
    if "top" not in w:
        raise UsageError("this command needs a degree window (--max-degree)")
    return w["top"]


def cmd_homology(args):
    if args.input.endswith(".json"):
        c = ChainComplex.from_dict(json.loads(Path(args.input).read_text())["complex"])
        name = "complex"
    else:
        x = _load(args)
        c = algebra_complex(x, **_window(args)).complex
        name = x.name
    return {"command": "homology", "window": list(c.valid), "tables": {name: _table(c)},
            "complex": c.to_dict(), "figures": {"homology": {"kind": "homology", "title": name, "data": _table(c)}}}


def cmd_abelianize(args):
    x = _load(args)
    w = _window(args)
    bar_route = derived_abelianization(x, **w).complex
    tables = {"bar route": _table(bar_route)}
    rows, ok = [], True
    if not x.is_strict:
        qf = algebra_complex(quasifree_abelianize(x), **w).complex
        tables["quasi-free route"] = _table(qf)
        for d in sorted(set(tables["bar route"]) & set(tables["quasi-free route"])):
            a, b = tables["bar route"][d], tables["quasi-free route"][d]
            ok &= a == b
            rows.append({"degree": d, "bar route": a, "quasi-free route": b, "agree": a == b})
        notes = []
    else:
        notes = ["strict input: only the bar route applies"]
    rep = Report("routes agree", ok, rows, notes)
    return {"command": "abelianize", "window": list(bar_route.valid), "tables": tables,
            "reports": [rep.as_dict()],
            "figures": {"abelianization": {"kind": "homology", "title": "derived abelianization",
                                           "data": tables["bar route"]}}}


def _tower_result(command, tower, reports):
    stages = [_table(c) for c in tower.stages]
    return {"command": command, "window": list(tower.stages[0].valid),
            "tables": {f"stage {k}": t for k, t in enumerate(stages)},
            "reports": [r.as_dict() for r in reports],
            "figures": {command: {"kind": "tower", "title": tower.label, "data": stages}}}


def cmd_nc_tower(args):
    x = _load(args)
    top = _need_top(args)
    tower = nc_tower(x, args.stages, top=top)
    return _tower_result("nc-tower", tower, [completeness_check(x, args.stages, top)])


def cmd_en_tower(args):
    x = _load(args)
    top = _need_top(args)
    tower = en_tower(x, args.stages, top=top)
    reps = [en_completeness_check(x, args.stages, top), en_connectivity_lemma_check(x, min(args.stages, 2), top),
            en_ab_connectivity_check(x, top)]
    return _tower_result("en-tower", tower, reps)


def cmd_unit_check(args):
    x = _load(args)
    top = _need_top(args)
    n = args.cosimplicial_depth
    reps = [unit_connectivity_check(x, n, top), completion_check(x, n, top)]
    return {"command": "unit-check", "reports": [r.as_dict() for r in reps],
            "figures": {"unit_tothofib": {"kind": "homology", "title": f"unit cube n={n}",
                                          "data": {r["degree"]: r["dim H"] for r in reps[0].rows}}}}


def cmd_counit_check(args):
    y = _load(args)
    top = _need_top(args)
    if y.kind != "C":
        y = quasifree_abelianize(y)
    n = args.cosimplicial_depth
    reps = [counit_layer_check(y, n, top)]
    if args.exchange:
        reps.append(counit_exchange_check(y, 1, top))
    return {"command": "counit-check", "reports": [r.as_dict() for r in reps]}


def cmd_bm(args):
    W, prof = _profile(args.input)
    return {"command": "bm", "value": bm_estimate(W, prof)}


def cmd_dual_bm(args):
    W, prof = _profile(args.input)
    return {"command": "dual-bm", "value": dual_bm_estimate(W, prof)}


def cmd_uniformity(args):
    g = uniformity_translate(Affine(args.slope, args.offset), args.direction)
    return {"command": "uniformity", "value": str(g), "slope": g.slope, "offset": g.offset}


def cmd_dims(args):
    from .operads import make_ass, make_com, make_poisson, pbw_weight_distribution
    tag = args.operad.lower()
    cap = args.max_arity
    tables = {}
    if args.filtration:
        if tag != "ass":
            raise UsageError("--filtration applies to the associative operad")
        for n in range(1, cap + 1):
            tables[f"arity {n}"] = dict(enumerate(pbw_weight_distribution(n)))
        value = " / ".join(",".join(str(v) for v in t.values()) for t in tables.values())
    else:
        if tag == "ass":
            op = make_ass(cap, validate_cap=min(cap, 3))
        elif tag == "com":
            op = make_com(cap, validate_cap=min(cap, 3))
        elif tag.startswith("poisson:"):
            op = make_poisson(int(tag.split(":")[1]), cap, validate_cap=min(cap, 3))
        else:
            raise UsageError(f"unknown operad {args.operad!r}")
        tables["dimension by arity"] = {n: op.dim(n) for n in range(1, cap + 1)}
        value = " / ".join(str(v) for v in tables["dimension by arity"].values())
    return {"command": "dims", "value": value, "tables": tables,
            "index": "weight" if args.filtration else "arity"}


def cmd_lim1(args):
    t = _tower_file(args.input)
    r = lim_lim1(t)
    return {"command": "lim1", "value": {"lim": r.lim, "lim1": r.lim1},
            "reports": [Report("lim and lim1", True, [], [r.note] if r.note else [],
                               {"stabilized": r.stabilized, "constant_from": r.constant_from}).as_dict()]}


COMMANDS = {
    "homology": (cmd_homology, "homology of an algebra presentation or a dumped complex"),
    "abelianize": (cmd_abelianize, "derived abelianization by both routes"),
    "nc-tower": (cmd_nc_tower, "commutator tower and completeness check"),
    "unit-check": (cmd_unit_check, "unit cube connectivity and completion range"),
    "counit-check": (cmd_counit_check, "codegeneracy cube connectivity (and --exchange)"),
    "en-tower": (cmd_en_tower, "shifted Poisson tower and checks"),
    "bm": (cmd_bm, "Blakers-Massey estimate from a profile file"),
    "dual-bm": (cmd_dual_bm, "dual Blakers-Massey estimate from a profile file"),
    "uniformity": (cmd_uniformity, "translate id+k Cartesian <-> 2id+k-1 coCartesian"),
    "dims": (cmd_dims, "operad and filtration dimension tables"),
    "lim1": (cmd_lim1, "lim and lim1 of a tower of vector spaces"),
}

INPUT_COMMANDS = {"homology", "abelianize", "nc-tower", "unit-check", "counit-check", "en-tower",
                  "bm", "dual-bm", "lim1"}


def _env(name: str, default=None, kind=str):
    raw = os.environ.get(f"OPK_{name}")
    if raw is None or raw == "":
        return default
    if kind is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return kind(raw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default=_env("FORMAT", "table"))
    common.add_argument("--figures", metavar="DIR", default=_env("FIGURES"),
                        help="also write PNG figures (needs matplotlib)")
    common.add_argument("--cohomological", action="store_true", default=_env("COHOMOLOGICAL", False, bool),
                        help="input degrees are cohomological; negate on ingestion")
    common.add_argument("--max-degree", type=int, default=_env("MAX_DEGREE", 5, int))
    common.add_argument("--weight-cap", type=int, default=_env("WEIGHT_CAP", None, int),
                        help="weight mode: weights 1..cap instead of a degree window")
    common.add_argument("--bar-depth", type=int, default=_env("BAR_DEPTH", None, int),
                        help="refuse windows needing more bar levels than this")
    common.add_argument("--max-arity", type=int, default=_env("MAX_ARITY", 4, int))
    common.add_argument("--cosimplicial-depth", type=int, default=_env("COSIMPLICIAL_DEPTH", 1, int))
    common.add_argument("--stages", type=int, default=_env("STAGES", 3, int))
    common.add_argument("-v", "--verbose", action="count", default=_env("VERBOSE", 0, int))
    # options live on the subcommands only: argparse lets subparser defaults
    # overwrite values parsed before the command name
    p = argparse.ArgumentParser(prog="opkoszul", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_, parents=[common])
        if name in INPUT_COMMANDS:
            sp.add_argument("input")
        if name == "counit-check":
            sp.add_argument("--exchange", action="store_true", default=_env("EXCHANGE", False, bool))
        if name == "uniformity":
            sp.add_argument("--slope", type=int, default=_env("SLOPE", 1, int))
            sp.add_argument("--offset", type=int, default=_env("OFFSET", 1, int))
            sp.add_argument("--direction", choices=("cartesian", "cocartesian"),
                            default=_env("DIRECTION", "cartesian"))
        if name == "dims":
            sp.add_argument("--operad", default=_env("OPERAD", "ass"))
            sp.add_argument("--filtration", action="store_true", default=_env("FILTRATION", False, bool))
    return p


def _status(result: dict) -> int:
    for rep in result.get("reports", []):
        if rep["data"].get("uncertified"):
            return EXIT_WINDOW
    return EXIT_OK if all(r["passed"] for r in result.get("reports", [])) else EXIT_FAIL


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    handler = COMMANDS[args.command][0]
    try:
        result = handler(args)
    except UncertifiedDegree as e:
        sys.stderr.write(f"uncertified window: {e}\n")
        return EXIT_WINDOW
    except (PresentationError, UsageError, ValueError, OSError, yaml.YAMLError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    figures = result.pop("figures", {})
    if args.figures and figures:
        from .figures import render
        for path in render(figures, args.figures):
            log.info("wrote %s", path)
    emit(result, args.format, out)
    return _status(result)


def main(argv: Optional[Sequence[str]] = None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
