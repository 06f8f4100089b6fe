"""Command-line frontend.

One executable, subcommand per question: defect computations, quadratic
classification, branch shapes, predicted and measured relative
positions, the stem-distance formula, the realisability decision, and
the seeded self-test.  Output is text by default, JSON with
``--format json``; element and matrix arguments use the same grammar
everywhere (terms ``c*t^e`` joined by ``+``, matrices
``[[a,b],[c,d]]``).

Exit codes: 0 pass, 1 a comparison found a mismatch, 2 usage, 3 the
requested quantity was not determined at the working precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from .defects import classify
from .existence import (DegenerateForm, algebra_spec, decide, search_pair,
                        search_zero_divisor)
from .geometry import (InfiniteFoliage, branch_shape, check_agreement,
                       fake_distance, predict_relpos)
from .gf2 import field
from .mat2 import NonIntegral, ScalarMatrix, m_parse, m_render, make_pair
from .series import UndeterminedAtPrecision, s_parse, s_render
from .tree import dot_export, enumerate_window, measure_intersection, oracle_branch
from .selftest import run_selftest
from . import defects


@dataclass
class RunConfig:
    tau: int = 1
    modulus: int | None = None
    prec: int = 64
    window_radius: int = 8
    margin: int = 2
    seed: int = 7
    format: str = "text"
    dot: str | None = None

    def validate(self):
        if self.tau < 1:
            raise ValueError("--tau must be at least 1")
        if self.prec < 1:
            raise ValueError("--prec must be at least 1")
        if self.window_radius < 0 or self.margin < 0:
            raise ValueError("--radius and --margin must be nonnegative")
        if self.format not in ("text", "json"):
            raise ValueError("--format must be text or json")

    @property
    def fld(self):
        return field(self.tau, self.modulus)


def _config_from(args) -> RunConfig:
    cfg = RunConfig(args.tau, args.modulus, args.prec, args.radius,
                    args.margin, args.seed, args.format, args.dot)
    cfg.validate()
    return cfg


def _emit(cfg: RunConfig, text: str, record: dict) -> None:
    if cfg.format == "json":
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        print(text)


# -- JSON records ---------------------------------------------------

def _shape_record(shape) -> dict:
    if isinstance(shape, InfiniteFoliage):
        return {"shape": "foliage", "end": shape.end.render(),
                "level": shape.level}
    rec = {"shape": "thick", "stem_kind": shape.stem_kind,
           "depth": shape.depth}
    if shape.stem_kind == "maxpath":
        rec["ends"] = [e.render() for e in shape.ends]
    else:
        rec["stem"] = [v.render() for v in shape.stem]
    return rec


def _relpos_record(pred) -> dict:
    # the kind names match MeasuredShape so the two sides line up
    rec = {"kind": {"Disjoint": "disjoint", "Overlap": "path",
                    "SharedRay": "ray", "SharedMaxPath": "maxpath",
                    "FoliageMeet": "blob",
                    "FoliageContained": "contained"}[type(pred).__name__]}
    for attr in ("distance", "length", "diameter", "depth", "stem_is_edge"):
        if hasattr(pred, attr):
            rec[attr] = getattr(pred, attr)
    return rec


def _measured_record(meas) -> dict:
    return asdict(meas)


def _report_record(rep) -> dict:
    return {
        "seed": rep.seed, "tau": rep.tau, "radius": rep.radius,
        "margin": rep.margin, "count": rep.count,
        "pairs": {"attempted": rep.pair_attempted, "safe": rep.pair_safe,
                  "matched": rep.pair_matched,
                  "mismatched": rep.pair_mismatched,
                  "skipped": rep.pair_skipped},
        "cells": dict(sorted(rep.cells.items())),
        "coverage": dict(sorted(rep.coverage.items())),
        "branches": {"attempted": rep.branch_attempted,
                     "matched": rep.branch_matched,
                     "mismatched": rep.branch_mismatched,
                     "skipped": rep.branch_skipped},
        "branch_classes": dict(sorted(rep.branch_classes.items())),
        "defects": {"checked": rep.defect_checked,
                    "disagreements": rep.defect_disagreements},
        "symbols": {"specs": rep.symbol_specs,
                    "conclusive": rep.symbol_conclusive,
                    "disagreements": rep.symbol_disagreements},
        "sign_reading": {"instances": rep.tsign_total,
                         "negative_correction": rep.tsign_implemented,
                         "floor_reading": rep.tsign_floor},
        "skipped": sorted(rep.skipped_list),
        "mismatches": sorted(rep.mismatch_list),
        "passing": rep.passing,
    }


# -- subcommands ----------------------------------------------------

def _cmd_defect(cfg: RunConfig, args) -> int:
    fld = cfg.fld
    a = s_parse(fld, args.element)
    res = (defects.as_defect if args.map == "as" else defects.quad_defect)(a)
    _emit(cfg,
          f"defect {res.ideal.render()}  witness {s_render(res.witness)}",
          {"ideal": res.ideal.render(), "ideal_val": res.ideal.val,
           "witness": s_render(res.witness)})
    return 0


def _cmd_classify(cfg: RunConfig, args) -> int:
    fld = cfg.fld
    m = classify(s_parse(fld, args.a), s_parse(fld, args.b), cfg.prec)
    _emit(cfg,
          f"{m.kind} (cell {m.cell}), jump t={m.t}, "
          f"defect {m.defect.ideal.render()}",
          {"class": m.kind, "cell": m.cell, "t": m.t,
           "ideal_val": m.defect.ideal.val,
           "witness": s_render(m.defect.witness)})
    return 0


def _cmd_branch(cfg: RunConfig, args) -> int:
    fld = cfg.fld
    q = m_parse(fld, args.matrix)
    shape = branch_shape(q, cfg.prec)
    _emit(cfg, shape.render(), _shape_record(shape))
    if cfg.dot:
        window = enumerate_window(fld, cfg.window_radius)
        members = oracle_branch(q, window)
        with open(cfg.dot, "w") as fh:
            fh.write(dot_export(window, {"lightblue": members}, "branch"))
    return 0


def _cmd_relpos(cfg: RunConfig, args) -> int:
    fld = cfg.fld
    pair = make_pair(m_parse(fld, args.q1), m_parse(fld, args.q2), cfg.prec)
    pred = predict_relpos(pair)
    _emit(cfg, pred.render(), _relpos_record(pred))
    return 0


def _parse_quad(fld, text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'a,b', got {text!r}")
    return s_parse(fld, parts[0]), s_parse(fld, parts[1])


def _cmd_df(cfg: RunConfig, args) -> int:
    fld = cfg.fld
    lam = s_parse(fld, args.lam)
    a1, b1 = _parse_quad(fld, args.m1)
    a2, b2 = _parse_quad(fld, args.m2)
    d = fake_distance(lam, classify(a1, b1, cfg.prec),
                      classify(a2, b2, cfg.prec))
    _emit(cfg, f"stem distance {d.render()}",
          {"kind": d.kind, "twice": d.twice, "value": d.render()})
    return 0


def _cmd_oracle(cfg: RunConfig, args) -> int:
    fld = cfg.fld
    pair = make_pair(m_parse(fld, args.q1), m_parse(fld, args.q2), cfg.prec)
    pred = predict_relpos(pair)
    window = enumerate_window(fld, cfg.window_radius)
    meas = measure_intersection(pair, window, cfg.margin)
    ok, why = check_agreement(pred, meas)
    verdict = "MATCH" if ok else f"MISMATCH ({why})"
    meas_text = ", ".join(f"{k}={v}" for k, v in asdict(meas).items()
                          if v not in (None, ""))
    _emit(cfg,
          f"predicted: {pred.render()}\nmeasured:  {meas_text}\n"
          f"verdict: {verdict}",
          {"predicted": _relpos_record(pred),
           "measured": _measured_record(meas),
           "match": ok, "note": "" if ok else why})
    if cfg.dot:
        s1 = oracle_branch(pair.q1, window)
        s2 = oracle_branch(pair.q2, window)
        groups = {"violet": s1 & s2, "lightblue": s1 - s2, "salmon": s2 - s1}
        with open(cfg.dot, "w") as fh:
            fh.write(dot_export(window, groups, "oracle"))
    return 0 if ok else 1


def _cmd_exists(cfg: RunConfig, args) -> int:
    fld = cfg.fld
    lam = s_parse(fld, args.lam)
    a1, b1 = _parse_quad(fld, args.m1)
    a2, b2 = _parse_quad(fld, args.m2)
    spec = algebra_spec(lam, a1, b1, a2, b2, cfg.prec)
    verdict = decide(spec, cfg.prec)
    lines = [f"exists: {'yes' if verdict.exists else 'no'} "
             f"(condition {verdict.matched_condition})"]
    rec = {"exists": verdict.exists,
           "condition": verdict.matched_condition,
           "commutative_note": verdict.commutative_note,
           "witness": None}
    if verdict.commutative_note:
        lines.append("note: every realising pair is commutative")
    if args.witness and verdict.witness is not None:
        rec["witness"] = [m_render(q) for q in verdict.witness]
        lines.append(f"q1 = {m_render(verdict.witness[0])}")
        lines.append(f"q2 = {m_render(verdict.witness[1])}")
    if args.search_box:
        lo, hi = (int(x) for x in args.search_box.split(","))
        zd = search_zero_divisor(spec, lo, hi)
        pr = search_pair(spec, lo, hi)
        rec["zero_divisor"] = ([s_render(x) for x in zd] if zd else None)
        rec["pair_hit"] = ([s_render(x) for x in pr] if pr else None)
        lines.append(f"zero divisor search: "
                     f"{'hit' if zd else 'no hit in box'}")
        lines.append(f"norm-form search: {'hit' if pr else 'no hit in box'}")
    _emit(cfg, "\n".join(lines), rec)
    return 0


def _cmd_selftest(cfg: RunConfig, args) -> int:
    rep = run_selftest(cfg.seed, cfg.tau, cfg.modulus, args.count,
                       cfg.window_radius, cfg.margin, cfg.prec)
    _emit(cfg, rep.render().rstrip("\n"), _report_record(rep))
    return 0 if rep.passing else 1


# -- argument plumbing ----------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tau", type=int, default=1,
                        help="residue field is F_(2^tau)")
    common.add_argument("--modulus", type=lambda s: int(s, 0), default=None,
                        help="residue field modulus, e.g. 0b111")
    common.add_argument("--prec", type=int, default=64,
                        help="working precision for inexact arithmetic")
    common.add_argument("--radius", type=int, default=8,
                        help="window radius for measurements")
    common.add_argument("--margin", type=int, default=2,
                        help="boundary margin for certification")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--dot", metavar="PATH", default=None,
                        help="write a GraphViz view of the window")

    p = argparse.ArgumentParser(prog="btbranch",
                                description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    pd = sub.add_parser("defect", parents=[common],
                        help="defect ideal of an element")
    pd.add_argument("map", choices=("as", "quad"))
    pd.add_argument("element")
    pd.set_defaults(func=_cmd_defect)

    pc = sub.add_parser("classify", parents=[common],
                        help="classify X^2 + aX + b")
    pc.add_argument("a")
    pc.add_argument("b")
    pc.set_defaults(func=_cmd_classify)

    pb = sub.add_parser("branch", parents=[common],
                        help="branch shape of a matrix")
    pb.add_argument("matrix")
    pb.set_defaults(func=_cmd_branch)

    pr = sub.add_parser("relpos", parents=[common],
                        help="predicted relative position of two branches")
    pr.add_argument("q1")
    pr.add_argument("q2")
    pr.set_defaults(func=_cmd_relpos)

    pf = sub.add_parser("df", parents=[common],
                        help="stem distance from (lambda, m1, m2)")
    pf.add_argument("--lambda", dest="lam", required=True)
    pf.add_argument("--m1", required=True, metavar="A,B")
    pf.add_argument("--m2", required=True, metavar="A,B")
    pf.set_defaults(func=_cmd_df)

    po = sub.add_parser("oracle", parents=[common],
                        help="predicted vs measured, side by side")
    po.add_argument("q1")
    po.add_argument("q2")
    po.set_defaults(func=_cmd_oracle)

    pe = sub.add_parser("exists", parents=[common],
                        help="decide whether a pair with the datum exists")
    pe.add_argument("--lambda", dest="lam", required=True)
    pe.add_argument("--m1", required=True, metavar="A,B")
    pe.add_argument("--m2", required=True, metavar="A,B")
    pe.add_argument("--witness", action="store_true",
                    help="print the witness pair when one is constructed")
    pe.add_argument("--search-box", metavar="LO,HI", default=None,
                    help="also run the bounded searches on this exponent box")
    pe.set_defaults(func=_cmd_exists)

    ps = sub.add_parser("selftest", parents=[common],
                        help="run the seeded differential suite")
    ps.add_argument("--count", type=int, default=500)
    ps.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        return args.func(cfg, args)
    except UndeterminedAtPrecision as exc:
        print(f"precision: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ZeroDivisionError, ScalarMatrix, NonIntegral,
            DegenerateForm) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
