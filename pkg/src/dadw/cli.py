"""Command-line surface.

Exit codes: 0 success or Valid, 1 violation or Invalid, 2 Unknown or
Inconclusive or budget exhaustion, 3 malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .certificates import (
    SEARCH_ORDER,
    VerifyStatus,
    dumps_certificate,
    loads_certificate,
    verify_certificate,
)
from .corpus import ENTRIES, build_system, corpus_names
from .dad import build_cover, certify_dad_one, compute_f_set, quotient_pullback
from .errors import (
    CannotSeparate,
    CapExceeded,
    FixedPointFound,
    Inconclusive,
    InputError,
    NoMarkerFound,
    PeriodicObstruction,
)
from .freeness import check_free_ball
from .markers import find_marker, marker_from_json, marker_to_json, verify_marker, MarkerStatus
from .spaces import SUBSHIFT, SpacePresentation
from .substitution import SubstitutionOracle


def _load_system(path: str, budget: int | None) -> SpacePresentation:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read system file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"system file {path} is not valid JSON: {exc}") from exc
    space = SpacePresentation.from_json(data)
    if budget is not None:
        if space.kind != SUBSHIFT:
            raise InputError("--budget only applies to subshift systems")
        o = space.oracle
        space = SpacePresentation.subshift(
            space.group, SubstitutionOracle(o.alphabet, o.rules, o.seed, budget)
        )
    return space


def _write_out(text: str, path: str | None) -> None:
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _check_seed_order(value: str) -> None:
    if value != SEARCH_ORDER:
        raise InputError(
            f"search order is fixed at {SEARCH_ORDER!r}; got {value!r}"
        )


def _add_common(sub):
    sub.add_argument("--system", required=True, help="system presentation JSON file")
    sub.add_argument("--budget", type=int, default=None, help="substitution oracle budget override")
    sub.add_argument("--seed-order", default=SEARCH_ORDER, help="search-order tag (fixed)")


def _cmd_marker(args) -> int:
    space = _load_system(args.system, args.budget)
    marker = find_marker(space, args.radius)
    check = verify_marker(space, marker)
    payload = json.dumps(marker_to_json(space, marker), indent=2, sort_keys=True)
    _write_out(payload, args.out)
    print(
        f"marker: radius {marker.disjoint_radius}, M = {marker.M}, "
        f"|coverSet| = {len(marker.cover_set)}, recheck {check.status.value}",
        file=sys.stderr,
    )
    if check.status is MarkerStatus.FAILED:
        return 1
    if check.status is MarkerStatus.INCONCLUSIVE:
        return 2
    return 0


def _cmd_cover(args) -> int:
    space = _load_system(args.system, args.budget)
    try:
        with open(args.marker) as fh:
            marker = marker_from_json(space, json.load(fh))
    except OSError as exc:
        raise InputError(f"cannot read marker file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"marker file is not valid JSON: {exc}") from exc
    cover = build_cover(space, args.N, marker)
    out = {
        "N": cover.N,
        "U0": space.clopen_to_json(cover.U0),
        "U1": space.clopen_to_json(cover.U1),
    }
    _write_out(json.dumps(out, indent=2, sort_keys=True), args.out)
    return 0


def _cmd_fset(args) -> int:
    if args.set not in ("U0", "U1"):
        raise InputError(f"--set must be U0 or U1, got {args.set!r}")
    space = _load_system(args.system, args.budget)
    spec = space.group
    marker = find_marker(space, 5 * args.N)
    cover = build_cover(space, args.N, marker)
    U = cover.U0 if args.set == "U0" else cover.U1
    default_cap = 3 * args.N if args.set == "U0" else 2 * marker.M + args.N
    cap = args.cap if args.cap is not None else default_cap
    res = compute_f_set(space, U, list(spec.preimage_ball(args.N)), cap)
    out = {
        "set": args.set,
        "N": args.N,
        "cap": cap,
        "exact": res.exact,
        "capUsed": res.cap_used,
        "elements": [spec.element_to_json(g) for g in res.elements],
    }
    _write_out(json.dumps(out, indent=2, sort_keys=True), args.out)
    return 0 if res.exact else 2


def _cmd_certify(args) -> int:
    space = _load_system(args.system, args.budget)
    _check_seed_order(args.seed_order)
    cert = certify_dad_one(space, args.N, strict=args.strict)
    _write_out(dumps_certificate(space, cert), args.out)
    note = "exact" if cert.exact else "bounded above, non-exact"
    print(f"certificate issued: verdict {cert.verdict} ({note})", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    space = _load_system(args.system, args.budget)
    try:
        with open(args.certificate) as fh:
            cert = loads_certificate(space, fh.read())
    except OSError as exc:
        raise InputError(f"cannot read certificate: {exc}") from exc
    res = verify_certificate(space, cert)
    if res.reason:
        print(f"{res.status.value}: {res.reason}")
    else:
        print(res.status.value)
    if res.status is VerifyStatus.VALID:
        return 0
    if res.status is VerifyStatus.INVALID:
        return 1
    return 2


def _cmd_freeness(args) -> int:
    space = _load_system(args.system, args.budget)
    rep = check_free_ball(space, args.ball)
    print(
        f"free on the punctured radius-{rep.radius} ball: "
        f"{len(rep.certificates)} elements certified"
    )
    return 0


def _cmd_quotient(args) -> int:
    space = _load_system(args.system, args.budget)
    try:
        with open(args.K) as fh:
            kdata = json.load(fh)
        K = {int(h) for h in kdata["K"]}
    except OSError as exc:
        raise InputError(f"cannot read subgroup file: {exc}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"subgroup file must be {{\"K\": [h indices]}}: {exc}") from exc
    rep = quotient_pullback(space, K, args.N)
    for piece in rep.pieces:
        print(
            f"{piece['piece']}: upstairs {len(piece['upstairs'].elements)} elements, "
            f"downstairs {len(piece['downstairs'].elements)}, "
            f"containment {'holds' if not piece['missing'] else 'FAILS'}"
        )
    print("quotient containment:", "verified" if rep.contained else "violated")
    return 0 if rep.contained else 1


def _cmd_corpus(args) -> int:
    if args.action not in ("list", "emit"):
        raise InputError(f"corpus action must be list or emit, got {args.action!r}")
    if args.action == "list":
        for e in ENTRIES:
            props = ", ".join(f"{k}={v}" for k, v in sorted(e.expected.items()))
            print(f"{e.name:22s} {props}")
            print(f"{'':22s} {e.summary}")
        return 0
    if not args.name:
        raise InputError("corpus emit needs a system name")
    params = {}
    if args.budget is not None:
        params["budget"] = args.budget
    if args.depth is not None:
        params["depth"] = args.depth
    if args.k is not None:
        params["k"] = args.k
    space = build_system(args.name, params)
    _write_out(json.dumps(space.to_json(), indent=2, sort_keys=True), args.out)
    return 0


def _cmd_report(args) -> int:
    from .report import write_report

    space = _load_system(args.system, args.budget)
    paths = write_report(space, args.N, args.out)
    for p in paths:
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dadw",
        description="markers, covers, transition sets, and dimension-one "
        "certificates for group actions on Cantor-type spaces",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("marker", help="find and print a marker")
    _add_common(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_marker)

    p = subs.add_parser("cover", help="build the two-piece cover from a marker")
    _add_common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--marker", required=True, help="marker JSON file")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_cover)

    p = subs.add_parser("fset", help="compute a transition set")
    _add_common(p)
    p.add_argument("--set", required=True, metavar="{U0,U1}")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_fset)

    p = subs.add_parser("certify", help="run the full pipeline and emit a certificate")
    _add_common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--strict", action="store_true",
                   help="refuse to certify when any oracle answer is Unknown")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_certify)

    p = subs.add_parser("verify", help="independently verify a certificate")
    _add_common(p)
    p.add_argument("certificate", help="certificate JSON file")
    p.set_defaults(func=_cmd_verify)

    p = subs.add_parser("freeness", help="certify freeness over a ball")
    _add_common(p)
    p.add_argument("--ball", type=int, required=True)
    p.set_defaults(func=_cmd_freeness)

    p = subs.add_parser("quotient", help="check the quotient containment")
    _add_common(p)
    p.add_argument("--K", required=True, help='JSON file {"K": [h indices]}')
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=_cmd_quotient)

    p = subs.add_parser("corpus", help="list or emit the example systems")
    p.add_argument("action", metavar="{list,emit}")
    p.add_argument("name", nargs="?")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_corpus)

    p = subs.add_parser("report", help="render figures and delimited summaries")
    _add_common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("-o", "--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except (PeriodicObstruction, CapExceeded, FixedPointFound, CannotSeparate) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return 1
    except (NoMarkerFound, Inconclusive) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
