from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

import pandas as pd

from .charring import CharacterSeries, branch_verma, verma_character
from .config import get_config, validate_config, with_overrides
from .errors import BlocktiltError, ParseError
from .kl import KLCache, format_word, kl_polynomial, parse_word
from .lie_data import LieType, Weight, height, offset_of
from .mult import (
    block_weights,
    classify_weight,
    reciprocity_check,
    simple_character,
    tilting_character,
    translation_check,
    verma_in_tilting,
)
from .utils import log, set_quiet
from .weyl import (
    CoxeterDescriptor,
    dot_stabilizer,
    facet_scope,
    facet_signature,
    integral_subsystem,
    same_block,
    same_facet,
)

SCHEMA_VERSION = "1"


def parse_weight(t: LieType, text: str) -> Weight:
    text = text.strip()
    if not text:
        raise ParseError("empty weight")
    values: List[Fraction] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ParseError(f"empty coordinate in weight {text!r}")
        try:
            values.append(Fraction(token))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot parse coordinate {token!r} in weight {text!r}") from None
    return Weight.of(t, values)


def _parse_depth(depth: int) -> int:
    if depth < 0:
        raise ParseError(f"depth must be a non-negative integer, got {depth}")
    return depth


def _parse_type(text: str) -> LieType:
    try:
        return LieType(text.strip().upper())
    except ValueError:
        raise ParseError(f"unknown type {text!r} (expected A, B, C or D)") from None


def _emit(
    args: argparse.Namespace,
    payload: Dict,
    header: Dict[str, object],
    table: Optional[pd.DataFrame],
) -> None:
    if args.json:
        body = {"schema_version": SCHEMA_VERSION, **payload}
        print(json.dumps(body, sort_keys=True, indent=2))
        return
    for key, value in header.items():
        print(f"{key}: {value}")
    if table is not None and not table.empty:
        print(table.to_string(index=False))


def _open_cache(args: argparse.Namespace) -> KLCache:
    return KLCache.from_config(args.config).load()


def cmd_classify(args: argparse.Namespace) -> int:
    t = _parse_type(args.type)
    lam = parse_weight(t, args.weight)
    level = args.level or max(lam.support, t.min_level)
    flags = classify_weight(lam, level)
    scope = facet_scope(lam)
    sub = integral_subsystem(lam, scope)
    counts = facet_signature(lam, scope).counts()
    walls = [str(alpha) for alpha in dot_stabilizer(lam, scope)]
    payload = {
        "command": "classify",
        "type": t.value,
        "weight": str(lam),
        "flags": flags.flags(),
        "descriptor": str(sub.descriptor),
        "simple_roots": [str(alpha) for alpha in sub.simple],
        "facet_scope": scope,
        "facet_counts": counts,
        "walls": walls,
    }
    table = pd.DataFrame({"flag": list(flags.flags()), "value": list(flags.flags().values())})
    header = {
        "type": t.value,
        "weight": str(lam),
        "descriptor": str(sub.descriptor),
        "facet": f"+{counts['+']} 0{counts['0']} -{counts['-']} (scope {scope})",
    }
    _emit(args, payload, header, table)
    return 0


def cmd_tilting_mult(args: argparse.Namespace) -> int:
    t = _parse_type(args.type)
    lam, mu = parse_weight(t, args.lam), parse_weight(t, args.mu)
    cache = _open_cache(args)
    report = verma_in_tilting(lam, mu, cache, level=args.level, verify=args.config.verify)
    reciprocity = reciprocity_check(lam, mu, cache) if args.reciprocity else None
    cache.save()
    payload = {
        "command": "tilting-mult",
        "type": t.value,
        "lambda": str(lam),
        "mu": str(mu),
        "value": report.value,
        "costandard_value": report.costandard_value,
        "stabilization_level": report.stabilization_level,
        "same_block": report.same_block,
        "regular": report.regular,
        "descriptor": report.descriptor,
        "xi": str(report.xi),
        "x_word": format_word(report.x_word),
        "y_word": format_word(report.y_word),
        "level_values": {str(k): v for k, v in sorted(report.level_values.items())},
        "verified": report.verified,
        "reciprocity": reciprocity,
    }
    table = pd.DataFrame(
        {
            "level": list(report.level_values),
            "value": list(report.level_values.values()),
        }
    )
    header = {
        "value": report.value,
        "stabilization_level": report.stabilization_level,
        "descriptor": report.descriptor,
        "xi": str(report.xi),
        "x_word": format_word(report.x_word),
        "y_word": format_word(report.y_word),
    }
    if reciprocity is not None:
        header["reciprocity"] = reciprocity
    _emit(args, payload, header, table if args.config.verify else None)
    if report.verified is False or reciprocity is False:
        print("error: StabilizationMismatch: values differ across levels", file=sys.stderr)
        return 3
    return 0


def _series_payload(ch: CharacterSeries) -> List[Dict]:
    return [
        {"offset": list(beta), "weight": str(w), "coefficient": c, "height": height(beta)}
        for beta, w, c in ch.terms()
    ]


def cmd_character(args: argparse.Namespace) -> int:
    t = _parse_type(args.type)
    lam = parse_weight(t, args.weight)
    _parse_depth(args.depth)
    level = args.level or max(lam.support + args.depth + 1, t.min_level)
    if args.kind == "verma":
        ch = verma_character(lam, args.depth, level)
    else:
        cache = _open_cache(args)
        build = tilting_character if args.kind == "tilting" else simple_character
        ch = build(lam, args.depth, cache, level)
        cache.save()
    if args.json:
        payload = {
            "command": "character",
            "kind": args.kind,
            "type": t.value,
            "weight": str(lam),
            "depth": args.depth,
            "level": level,
            "terms": _series_payload(ch),
        }
        _emit(args, payload, {}, None)
        return 0
    print(f"level: {level}")
    for _, w, c in ch.terms():
        print(f"{w} {c}")
    return 0


def cmd_kl(args: argparse.Namespace) -> int:
    descriptor = CoxeterDescriptor.parse(args.descriptor)
    x, y = parse_word(args.x_word), parse_word(args.y_word)
    cache = _open_cache(args)
    poly = kl_polynomial(x, y, descriptor, cache)
    cache.save()
    payload = {
        "command": "kl",
        "descriptor": str(descriptor),
        "x_word": format_word(x),
        "y_word": format_word(y),
        "coeffs": list(poly.coeffs),
        "polynomial": str(poly),
        "at_one": poly.at_one(),
    }
    _emit(args, payload, {"polynomial": str(poly), "at_one": poly.at_one()}, None)
    return 0


def cmd_translate_check(args: argparse.Namespace) -> int:
    t = _parse_type(args.type)
    lam, mu = parse_weight(t, args.lam), parse_weight(t, args.mu)
    verdict = translation_check(lam, mu)
    nu = str(verdict.dominant_rep) if verdict.dominant_rep is not None else None
    payload = {
        "command": "translate-check",
        "type": t.value,
        "lambda": str(lam),
        "mu": str(mu),
        "admissible": verdict.admissible,
        "reasons": {name: ok for name, ok in verdict.reasons},
        "dominant_rep": nu,
        "dominant_level": verdict.dominant_level,
    }
    table = pd.DataFrame(
        {"condition": [n for n, _ in verdict.reasons], "passed": [ok for _, ok in verdict.reasons]}
    )
    header = {"admissible": verdict.admissible}
    if nu is not None:
        header["dominant_rep"] = f"{nu} (level {verdict.dominant_level})"
    _emit(args, payload, header, table)
    return 0


def cmd_block(args: argparse.Namespace) -> int:
    t = _parse_type(args.type)
    lam = parse_weight(t, args.lam)
    mu = parse_weight(t, args.mu) if args.mu else lam
    linked = same_block(lam, mu)
    payload: Dict[str, object] = {
        "command": "block",
        "type": t.value,
        "lambda": str(lam),
        "mu": str(mu),
        "same_block": linked,
        "same_facet": same_facet(lam, mu),
    }
    header: Dict[str, object] = {"same_block": linked, "same_facet": payload["same_facet"]}
    table = None
    if args.list:
        level = args.level or max(lam.support, t.min_level)
        rows = block_weights(lam, level)
        payload["level"] = level
        payload["members"] = [
            {"weight": str(w), "offset": list(beta) if beta is not None else None}
            for w, beta in rows
        ]
        header["level"] = level
        header["members"] = len(rows)
        table = pd.DataFrame(
            {
                "weight": [str(w) for w, _ in rows],
                "height_below": [height(beta) if beta is not None else "" for _, beta in rows],
            }
        )
    _emit(args, payload, header, table)
    return 0


def cmd_branch(args: argparse.Namespace) -> int:
    t = _parse_type(args.type)
    lam = parse_weight(t, args.weight)
    _parse_depth(args.depth)
    ambient = args.ambient or max(args.n, lam.support) + args.depth + 1
    mults = branch_verma(lam, args.n, args.depth, ambient)
    rows = sorted(
        ((offset_of(lam - nu) or (), nu, m) for nu, m in mults.items()),
        key=lambda item: (height(item[0]), item[0]),
    )
    payload = {
        "command": "branch",
        "type": t.value,
        "weight": str(lam),
        "n": args.n,
        "ambient_level": ambient,
        "depth": args.depth,
        "terms": [{"weight": str(nu), "multiplicity": m} for _, nu, m in rows],
    }
    table = pd.DataFrame(
        {"weight": [str(nu) for _, nu, _ in rows], "multiplicity": [m for _, _, m in rows]}
    )
    _emit(args, payload, {"ambient_level": ambient}, table)
    return 0


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of tables")
    common.add_argument("--cache-dir", dest="cache_dir", help="KL cache directory")
    common.add_argument(
        "--verify", action="store_true", default=None, help="recheck at two extra levels"
    )

    parser = argparse.ArgumentParser(
        prog="blocktilt",
        description="Exact invariants of BGG categories O for classical direct-limit Lie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="integrality flags and facet summary")
    p.add_argument("--type", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--level", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tilting-mult", parents=[common], help="{D(lambda) : Delta(mu)}")
    p.add_argument("--type", required=True)
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--level", type=int)
    p.add_argument("--reciprocity", action="store_true", help="also cross-check reciprocity")
    p.set_defaults(func=cmd_tilting_mult)

    p = sub.add_parser("character", parents=[common], help="truncated characters")
    p.add_argument("kind", choices=["verma", "tilting", "simple"])
    p.add_argument("--type", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--level", type=int)
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("kl", parents=[common], help="Kazhdan-Lusztig polynomial P_{x,y}")
    p.add_argument("descriptor")
    p.add_argument("x_word")
    p.add_argument("y_word")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("translate-check", parents=[common], help="translation admissibility")
    p.add_argument("--type", required=True)
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.set_defaults(func=cmd_translate_check)

    p = sub.add_parser("block", parents=[common], help="block membership and members")
    p.add_argument("--type", required=True)
    p.add_argument("--lam", required=True)
    p.add_argument("--mu")
    p.add_argument("--list", action="store_true")
    p.add_argument("--level", type=int)
    p.set_defaults(func=cmd_block)

    p = sub.add_parser("branch", parents=[common], help="restriction of a Verma module to level n")
    p.add_argument("--type", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--ambient", type=int)
    p.set_defaults(func=cmd_branch)

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = get_config()
        validate_config(config)
    except ValueError as exc:
        print(f"Configuration error: {exc}", file=sys.stderr)
        return 2
    args.config = with_overrides(config, cache_dir=args.cache_dir, verify=args.verify)
    set_quiet(args.config.quiet)

    try:
        return args.func(args)
    except BlocktiltError as exc:
        log(f"{args.command} failed: {type(exc).__name__}")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
