"""Command-line front door: JSON in, JSON/DOT/verdict out.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 resource
bound.  Subcommands that sample take a required --seed so every run is
reproducible.  POSETSHEAF_MAX_ELEMS overrides the global element bound
for open-set enumeration.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import permutations, product

from . import covering as cov
from . import lattice as lat
from . import multipullback as mp
from . import poset as po
from . import projspace as pj
from . import sheaf as sh
from . import toeplitz as tp
from .errors import DomainError, InputError, PosetsheafError, ResourceError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _load_doc(arg: str) -> dict:
    text = arg
    if not arg.lstrip().startswith("{"):
        try:
            with open(arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _maybe_outputs(args, poset, rows=None, header=None, title=""):
    if getattr(args, "dot", None):
        text = po.to_dot(poset)
        if args.dot == "-":
            sys.stdout.write(text + "\n")
        else:
            with open(args.dot, "w") as fh:
                fh.write(text + "\n")
    if getattr(args, "fig", None):
        from .report import hasse_figure

        hasse_figure(poset, args.fig, title=title)
    if getattr(args, "csv", None) and rows is not None:
        from .report import write_delimited

        write_delimited(rows, args.csv, header)


# -- subcommand handlers ---------------------------------------------------


def cmd_partition(args) -> int:
    C = cov.covering_from_json(_load_doc(args.input))
    ps = cov.partition_space(C)
    rows = [(po.label_str(x), po.label_str(c)) for x, c in sorted(ps.projection.items(), key=repr)]
    _maybe_outputs(args, ps.poset, rows, ("element", "class"), title="partition space")
    _emit(
        {
            "classes": len(ps.poset),
            "poset": po.poset_to_json(ps.poset),
            "projection": {po.label_str(x): list(c) for x, c in ps.projection.items()},
        }
    )
    return EXIT_OK


def cmd_xi(args) -> int:
    C = cov.covering_from_json(_load_doc(args.input))
    mapping, report = cov.xi(C)
    _emit(
        {
            "map": {po.label_str(x): sorted(p.support) for x, p in mapping.items()},
            "report": {
                "monotone_from_opposite": report.monotone_from_opposite,
                "factors_through_partition": report.factors_through_partition,
                "embedding": report.embedding,
            },
        }
    )
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_lattice_gen(args) -> int:
    C = cov.covering_from_json(_load_doc(args.input))
    L = cov.covering_lattice(C)
    doc = lat.lattice_to_json(L)
    doc["elements"] = [sorted(map(po.label_str, e)) for e in L.elements]
    doc["generators"] = [sorted(map(po.label_str, g)) for g in (L.generators or ())]
    doc["size"] = len(L)
    status = EXIT_OK
    if args.check_free:
        verdict = lat.is_free_on(L, L.generators)
        doc["free"] = verdict.free
        if verdict.witness:
            doc["witness"] = {k: sorted(v) if isinstance(v, frozenset) else v
                              for k, v in verdict.witness.items()}
        status = EXIT_OK if verdict.free else EXIT_FAIL
        print(
            f"covering lattice: {len(L)} elements, free on parts: {verdict.free}",
            file=sys.stderr,
        )
    _emit(doc)
    return status


def cmd_birkhoff(args) -> int:
    L = lat.lattice_from_json(_load_doc(args.input))
    pair = lat.birkhoff(L)
    rec = lat.birkhoff_reconstruct(pair)
    ok = lat.lattice_isomorphic(L, rec)
    _maybe_outputs(args, pair.irreducible_poset, title="meet irreducibles")
    print(
        f"{len(pair.irreducible_poset)} meet irreducibles; "
        f"reconstruction isomorphic: {ok}",
        file=sys.stderr,
    )
    _emit(
        {
            "irreducible_poset": po.poset_to_json(pair.irreducible_poset),
            "transform": {
                po.label_str(a): sorted(map(po.label_str, up)) for a, up in pair.iso.items()
            },
            "roundtrip_isomorphic": ok,
        }
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_free_check(args) -> int:
    L = lat.free_distributive_lattice(args.n)
    verdict = lat.is_free_on(L, L.generators)
    rows = [(args.n, len(L), verdict.free)]
    if getattr(args, "csv", None):
        from .report import write_delimited

        write_delimited(rows, args.csv, ("generators", "elements", "free"))
    if getattr(args, "fig", None):
        from .report import hasse_figure

        pair = lat.birkhoff(L)
        hasse_figure(pair.irreducible_poset, args.fig, title=f"meet irreducibles, n={args.n}")
    print(
        f"free distributive lattice on {args.n} generators: {len(L)} elements, "
        f"free: {verdict.free}",
        file=sys.stderr,
    )
    _emit({"n": args.n, "elements": len(L), "free": verdict.free})
    return EXIT_OK if verdict.free else EXIT_FAIL


def cmd_sheaf_check(args) -> int:
    doc = _load_doc(args.input)
    try:
        kernels = [frozenset(map(str, k)) for k in doc["kernels"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"model document missing field: {exc}") from None
    horizon = int(doc.get("horizon", len(kernels) - 1))
    model = sh.IdealCoveringModel.make(kernels)
    F = sh.covering_to_sheaf(model, horizon)
    back = sh.sheaf_to_covering(F)
    roundtrip = back.kernels == tuple(model.kernel(i) for i in range(horizon + 1))
    opens = po.alexandrov_opens(F.base)
    rows = []
    all_pass = True
    for U in opens:
        if U.mask == 0:
            continue
        members = sorted(U.members, key=lambda t: (len(t), t))
        basic_cover = [
            [q for q in members if set(a) <= set(q)]
            for a in members
            if all(not (set(b) < set(a)) for b in members)
        ]
        ok = sh.check_sheaf_condition(F, members, basic_cover)
        all_pass = all_pass and ok
        rows.append(("|".join(map(po.label_str, members)), ok))
    for name, ok in rows:
        print(f"  [{'pass' if ok else 'FAIL'}] {name}", file=sys.stderr)
    if getattr(args, "csv", None):
        from .report import write_delimited

        write_delimited(rows, args.csv, ("open", "sheaf_condition"))
    _emit(
        {
            "horizon": horizon,
            "roundtrip_identity": roundtrip,
            "opens_checked": len(rows),
            "all_pass": all_pass,
        }
    )
    return EXIT_OK if (all_pass and roundtrip) else EXIT_FAIL


def cmd_pushforward(args) -> int:
    doc = _load_doc(args.input)
    alpha = pj.tame_from_json(doc.get("alpha", {}))
    try:
        kernels = [frozenset(map(str, k)) for k in doc["kernels"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"document missing field: {exc}") from None
    horizon = int(doc.get("horizon", len(kernels) - 1))
    target = doc.get("target_horizon")
    model = sh.IdealCoveringModel.make(kernels)
    F = sh.covering_to_sheaf(model, horizon)
    G = sh.pushforward(alpha, F, None if target is None else int(target))
    M = max(max(lab) for lab in G.base.elements)
    law = all(G.objects[(i,)] == F.objects[(alpha(i),)] for i in range(M + 1))
    _emit(
        {
            "target_horizon": M,
            "index_law": law,
            "objects": {po.label_str(k): sorted(map(str, v)) for k, v in G.objects.items()},
        }
    )
    return EXIT_OK if law else EXIT_FAIL


def cmd_toeplitz_member(args) -> int:
    t = mp.tuple_from_json(_load_doc(args.input))
    res = mp.is_member(t, antipode=not args.no_antipode)
    _emit({"member": res.ok, "failing_pair": list(res.failing_pair) if res.failing_pair else None})
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_toeplitz_extend(args) -> int:
    partial, n = mp.partial_from_json(_load_doc(args.input))
    t = mp.extend_partial(partial, n, antipode=not args.no_antipode)
    _emit(mp.tuple_to_json(t))
    return EXIT_OK


def cmd_verify_unipotent(args) -> int:
    n, e = args.n, args.max_exp
    antipode = not args.no_antipode
    exps = [(a, b) for a in range(e + 1) for b in range(e + 1)]
    circ = range(-e, e + 1)
    shape = (tp.T,) * (n - 1) + (tp.S,)
    failures = 0
    for tkey in product(exps, repeat=n - 1):
        for m in circ:
            x = tp.mt_basis(shape, tkey + (m,))
            if tp.psi(tp.psi(x, antipode), antipode) != x:
                failures += 1
    _emit({"n": n, "max_exp": e, "failures": failures})
    return EXIT_OK if failures == 0 else EXIT_FAIL


def _cocycle_worker(job):
    i, j, k, n, e, antipode = job
    return (i, j, k, mp.cocycle_check(i, j, k, n, max_exp=e, antipode=antipode))


def cmd_verify_cocycle(args) -> int:
    n, e = args.n, args.max_exp
    antipode = not args.no_antipode
    triples = [t for t in permutations(range(n + 1), 3)]
    jobs = [(i, j, k, n, e, antipode) for (i, j, k) in triples]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_cocycle_worker, jobs))
    else:
        results = [_cocycle_worker(j) for j in jobs]
    bad = [(i, j, k) for (i, j, k, ok) in results if not ok]
    _emit({"n": n, "max_exp": e, "triples": len(triples), "failures": [list(t) for t in bad]})
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_verify_freeness(args) -> int:
    rep = mp.verify_freeness(args.n, seed=args.seed, antipode=not args.no_antipode)
    for line in rep.lines():
        print(line, file=sys.stderr)
    rows = []
    for clause in (rep.gluing, rep.distinct_and_ordered, rep.meet_irreducible):
        if clause is not None:
            rows.append((clause.name, clause.ok, "; ".join(clause.details)))
    if getattr(args, "csv", None):
        from .report import write_delimited

        write_delimited(rows, args.csv, ("clause", "pass", "details"))
    if getattr(args, "fig", None):
        from .report import hasse_figure

        subsets = mp._proper_nonempty_subsets(args.n)
        labels = [tuple(sorted(s)) for s in subsets]
        rel = [
            (a, b)
            for a in labels
            for b in labels
            if set(a) <= set(b)
        ]
        P = po.FinitePoset(labels, rel)
        hasse_figure(P, args.fig, title=f"witnessed kernel-intersection order, n={args.n}")
    _emit(
        {
            "n": rep.n,
            "join_elements": rep.join_element_count,
            "clauses": [
                {"name": c.name, "pass": c.ok, "details": c.details}
                for c in (rep.gluing, rep.distinct_and_ordered, rep.meet_irreducible)
                if c is not None
            ],
            "pass": rep.ok,
        }
    )
    return EXIT_OK if rep.ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="posetsheaf", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_io(sp, dot=False, fig=True, csv=True):
        if dot:
            sp.add_argument("--dot", metavar="FILE", help="write a Hasse DOT file ('-' for stdout)")
        if fig:
            sp.add_argument("--fig", metavar="FILE", help="render a matplotlib figure to FILE")
        if csv:
            sp.add_argument("--csv", metavar="FILE", help="write a delimited verdict table to FILE")

    sp = sub.add_parser("partition", help="partition space of a covering")
    sp.add_argument("input", help="covering JSON (path or inline)")
    add_io(sp, dot=True)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("xi", help="classifying map of a covering")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_xi)

    sp = sub.add_parser("lattice-gen", help="lattice generated by the covering parts")
    sp.add_argument("input")
    sp.add_argument("--check-free", action="store_true")
    sp.set_defaults(func=cmd_lattice_gen)

    sp = sub.add_parser("birkhoff", help="Birkhoff transform of a lattice")
    sp.add_argument("input", help="lattice JSON (path or inline)")
    add_io(sp, dot=True, csv=False)
    sp.set_defaults(func=cmd_birkhoff)

    sp = sub.add_parser("free-check", help="free distributive lattice check")
    sp.add_argument("--n", type=int, required=True)
    add_io(sp)
    sp.set_defaults(func=cmd_free_check)

    sp = sub.add_parser("sheaf-check", help="sheaf-condition suite for an ideal model")
    sp.add_argument("input", help='model JSON: {"kernels": [[...], ...], "horizon": N}')
    add_io(sp, fig=False)
    sp.set_defaults(func=cmd_sheaf_check)

    sp = sub.add_parser("pushforward", help="push an ideal diagram along a tame surjection")
    sp.add_argument("input", help='JSON: {"alpha": {...}, "kernels": [...], "horizon": N}')
    sp.set_defaults(func=cmd_pushforward)

    tpl = sub.add_parser("toeplitz", help="Toeplitz-cube verifications")
    tsub = tpl.add_subparsers(dest="subcommand", required=True)

    sp = tsub.add_parser("member", help="multipullback membership of a tuple")
    sp.add_argument("input", help="tuple JSON (path or inline)")
    sp.add_argument("--no-antipode", action="store_true")
    sp.set_defaults(func=cmd_toeplitz_member)

    sp = tsub.add_parser("extend", help="complete a compatible partial family")
    sp.add_argument("input", help="partial JSON (path or inline)")
    sp.add_argument("--no-antipode", action="store_true")
    sp.set_defaults(func=cmd_toeplitz_extend)

    sp = tsub.add_parser("verify-unipotent", help="the gluing twist squares to the identity")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-exp", type=int, default=3)
    sp.add_argument("--no-antipode", action="store_true")
    sp.set_defaults(func=cmd_verify_unipotent)

    sp = tsub.add_parser("verify-cocycle", help="triangle law for class transport")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-exp", type=int, default=2)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--no-antipode", action="store_true")
    sp.set_defaults(func=cmd_verify_cocycle)

    sp = tsub.add_parser("verify-freeness", help="kernel lattice freeness witnesses")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True, help="seed for the sampled probes")
    sp.add_argument("--no-antipode", action="store_true")
    add_io(sp)
    sp.set_defaults(func=cmd_verify_freeness)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except PosetsheafError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
