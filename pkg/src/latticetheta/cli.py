"""Command-line front end.

Exit codes: 0 when every checked property holds, 1 when a checked claim
fails (the JSON output lists witnesses), 2 for unusable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import NAMES, catalog
from .enumeration import count_vectors_with_norm
from .errors import LatticeError
from .exact_linalg import lll_reduce
from .fixpoint import fixed_sublattice, splitting_check, validate_automorphism
from .io import (
    FormatError,
    automorphism_to_json,
    dump,
    lattice_to_json,
    load_automorphism,
    load_lattice,
)
from .lattice import BinaryForm, Lattice, decompose, is_isometric_small, reduce_binary, validate_even_lattice
from .theta import (
    congruence_check_theta_op,
    fixed_congruence_check,
    singularity_check,
    theta_table,
)

# degree >= 2 work whose largest vector pool squared exceeds this needs --heavy
HEAVY_PAIRS = 10 ** 9


class UsageError(Exception):
    pass


def _emit(doc, out: str | None) -> None:
    text = dump(doc, out)
    if out is None:
        print(text)


def _valid_lattice(path: str) -> Lattice:
    lat = load_lattice(path)
    rep = validate_even_lattice(lat)
    if not rep.ok:
        raise UsageError(f"{path}: not a positive definite even lattice {rep.as_dict()}")
    return lat


def _aut(lat: Lattice, path: str):
    m, order = load_automorphism(path)
    return validate_automorphism(lat, m, order)


def cmd_catalog(args) -> int:
    entry = catalog(args.name)
    if args.aut:
        if args.aut not in entry.automorphisms:
            raise UsageError(f"{args.name} has no automorphism {args.aut!r}; "
                             f"known: {sorted(entry.automorphisms) or 'none'}")
        a = entry.automorphisms[args.aut]
        _emit(automorphism_to_json(a.matrix, a.order), args.out)
        return 0
    if args.dir:
        d = Path(args.dir)
        d.mkdir(parents=True, exist_ok=True)
        stem = args.name.replace("+", "_")
        written = [str(d / f"{stem}.json")]
        dump(lattice_to_json(entry.lattice), written[0])
        for an, a in entry.automorphisms.items():
            written.append(str(d / f"{stem}.{an}.json"))
            dump(automorphism_to_json(a.matrix, a.order), written[-1])
        print(json.dumps({"written": written}, indent=2))
        return 0
    _emit(lattice_to_json(entry.lattice), args.out)
    return 0


def cmd_validate(args) -> int:
    lat = load_lattice(args.lattice)
    rep = validate_even_lattice(lat)
    doc = {"label": lat.label, "rank": lat.rank, **rep.as_dict(), "ok": rep.ok}
    ok = rep.ok
    if args.aut:
        try:
            sigma = _aut(lat, args.aut) if ok else None
            doc["automorphism"] = {"valid": sigma is not None,
                                   "order": sigma.order if sigma else None}
            ok = ok and sigma is not None
        except LatticeError as exc:
            doc["automorphism"] = {"valid": False, "error": f"{type(exc).__name__}: {exc}"}
            ok = False
    _emit(doc, args.out)
    return 0 if ok else 1


def cmd_decompose(args) -> int:
    lat = _valid_lattice(args.lattice)
    comps = decompose(lat)
    doc = {"label": lat.label, "components": [
        {"rank": c.rank, "det": c.det, "coords": [list(r) for r in c.coords]} for c in comps]}
    _emit(doc, args.out)
    return 0


def _reduced_gram(gram) -> list[list[int]]:
    if len(gram) == 2:
        return [list(r) for r in reduce_binary(BinaryForm(gram[0][0], gram[0][1], gram[1][1])).gram]
    if not gram:
        return []
    return lll_reduce([list(r) for r in gram])[0]


def cmd_fixed(args) -> int:
    lat = _valid_lattice(args.lattice)
    sigma = _aut(lat, args.aut)
    report = splitting_check(lat, sigma)
    m0 = fixed_sublattice(lat, sigma)
    doc = report.as_dict()
    doc["M0_gram"] = [list(r) for r in m0.gram]
    doc["M0_reduced_gram"] = _reduced_gram(m0.gram)
    ok = report.ok
    if args.compare:
        other = load_lattice(args.compare)
        iso = m0.rank == other.rank and is_isometric_small(m0.as_lattice(), other)
        doc["isometric_to_compare"] = iso
        ok = ok and iso
    _emit(doc, args.out)
    return 0 if ok else 1


def cmd_theta(args) -> int:
    lat = _valid_lattice(args.lattice)
    _guard(lat, args.degree, args.bound, args.heavy)
    table = theta_table(lat, args.degree, args.bound)
    _emit(table.to_json(), args.out)
    return 0


def _guard(lat: Lattice, n: int, bound: int, heavy: bool) -> None:
    if n < 1 or bound < 0:
        raise UsageError("degree must be >= 1 and bound >= 0")
    if n >= 2 and not heavy:
        pool = max((count_vectors_with_norm(lat.gram, 2 * t) for t in range(1, bound + 1)), default=0)
        if pool * pool > HEAVY_PAIRS:
            raise UsageError(f"degree {n} with a pool of {pool} vectors is a long run; pass --heavy")


def cmd_opcheck(args) -> int:
    lat = _valid_lattice(args.lattice)
    sigma = _aut(lat, args.aut) if args.aut else None
    p = args.prime if args.prime is not None else (sigma.order if sigma else None)
    n = args.degree
    if n is None and sigma is not None:
        n = fixed_sublattice(lat, sigma).rank
    if p is None or n is None:
        raise UsageError("--prime and --degree are required without an automorphism")
    if p < 3 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise UsageError(f"--prime {p} is not an odd prime")
    if n < 1:
        raise UsageError("degree must be at least 1 (the fixed lattice is 0; pass --degree)")
    _guard(lat, n, args.bound, args.heavy)
    reports = []
    if args.singular:
        reports.append(singularity_check(lat, p, n, args.bound))
    else:
        reports.append(congruence_check_theta_op(lat, p, n, args.bound))
    if sigma is not None and not args.singular:
        reports.append(fixed_congruence_check(lat, sigma, n, args.bound))
    doc = {"label": lat.label, "reports": [r.to_json() for r in reports],
           "holds": all(r.holds for r in reports)}
    _emit(doc, args.out)
    return 0 if doc["holds"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latticetheta", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("-o", "--out", help="write JSON here instead of stdout")

    p = sub.add_parser("catalog", help="emit a named lattice or one of its automorphisms")
    p.add_argument("name", help=f"one of {', '.join(NAMES)}")
    p.add_argument("--aut", help="emit this named automorphism instead of the lattice")
    p.add_argument("--dir", help="write the lattice and all its automorphisms into this directory")
    out(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("validate", help="check evenness, definiteness and determinant")
    p.add_argument("lattice")
    p.add_argument("--aut", help="also validate this automorphism file")
    out(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="orthogonal decomposition into indecomposables")
    p.add_argument("lattice")
    out(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("fixed", help="fixed sublattice and its splitting checks")
    p.add_argument("lattice")
    p.add_argument("aut")
    p.add_argument("--compare", help="lattice file to test for isometry with the fixed lattice")
    out(p)
    p.set_defaults(func=cmd_fixed)

    p = sub.add_parser("theta", help="representation numbers for all forms up to a diagonal bound")
    p.add_argument("lattice")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--heavy", action="store_true", help="allow long degree >= 2 runs")
    out(p)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("opcheck", help="mod-p congruence reports")
    p.add_argument("lattice")
    p.add_argument("aut", nargs="?")
    p.add_argument("--prime", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--singular", action="store_true",
                   help="check p | A(M,T) for all positive definite T instead")
    p.add_argument("--heavy", action="store_true", help="allow long degree >= 2 runs")
    out(p)
    p.set_defaults(func=cmd_opcheck)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, LatticeError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OverflowError, RecursionError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
