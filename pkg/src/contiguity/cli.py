"""Command-line frontend.

Every subcommand builds a report: the command echo, the input files with
content hashes, a result payload, exactness and timing. ``--json`` prints the
report; otherwise a short human-readable summary is printed. With
``--deterministic`` timing is left out, so reports are byte-identical across
runs.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Callable

from . import formats
from .collapse import core, is_strongly_collapsible
from .complex import ComplexError, SimplicialComplex, SimplicialMap, bits, components, constant_map, identity_map
from .constructions import (
    DEFAULT_PRODUCT_CAP,
    DEFAULT_SD_CAP,
    SizeGuardError,
    barycentric_subdivision,
    categorical_product,
    sd_map,
)
from .distance import (
    DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_FARBER_CAP,
    DEFAULT_NODE_BUDGET,
    DistanceResult,
    contiguity_distance,
    farber_cover_tc,
)
from .engine import DEFAULT_STATE_CAP, ContiguityCertificate, is_contiguous, same_contiguity_class
from .oracle import OracleCapError, exhaustive_distance, exhaustive_same_class

SCHEMA = 1
EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
FIXTURES = Path(__file__).parent / "fixtures"


class Outcome:
    """What a subcommand hands back to the dispatcher."""

    def __init__(self, code: int, lines: list[str], result: dict, exact: bool | None = None):
        self.code = code
        self.lines = lines
        self.result = result
        self.exact = exact


class Inputs:
    """Records every file read, for the report's hash list."""

    def __init__(self) -> None:
        self.files: dict[str, str] = {}

    def note(self, path: Path) -> None:
        self.files.setdefault(os.path.normpath(str(path)), formats.content_hash(path))

    def complex(self, path: str | Path) -> SimplicialComplex:
        K = formats.read_complex(path)
        self.note(Path(path))
        return K

    def map(self, path: str | Path) -> SimplicialMap:
        f = formats.read_map(path)
        self.note(Path(path))
        for src in formats.map_sources(path):
            self.note(src)
        return f

    def report(self) -> list[dict]:
        return [{"path": p, "hash": h} for p, h in sorted(self.files.items())]


# -- serialisation helpers ----------------------------------------------------


def emit_dot(K: SimplicialComplex, name: str = "K") -> str:
    """DOT document of the 1-skeleton; facets of dimension at least 2 become comments."""
    out = [f"graph {json.dumps(name)} {{"]
    for j in range(K.n_facets):
        if len(K.facets[j]) >= 3:
            out.append("  // facet: " + " ".join(sorted(K.facet_names(j))))
    for v in range(K.n_vertices):
        out.append(f"  {json.dumps(K.names[v])};")
    for a, b in K.edges():
        out.append(f"  {json.dumps(K.names[a])} -- {json.dumps(K.names[b])};")
    out.append("}")
    return "\n".join(out) + "\n"


def certificate_doc(cert: ContiguityCertificate) -> dict:
    chain = None if cert.chain is None else [dict(sorted(f.as_names().items())) for f in cert.chain]
    return {"chain": chain, "explored": cert.explored}


def distance_doc(res: DistanceResult, K: SimplicialComplex) -> dict:
    return {
        "value": res.value,
        "exact": res.exact,
        "lower_bound": res.lower_bound,
        "pieces": [
            {
                "facets": list(bits(m)),
                "facet_names": [list(K.facet_names(j)) for j in bits(m)],
                "certificate": certificate_doc(c),
            }
            for m, c in zip(res.witness, res.certificates)
        ],
        "undecided": [list(bits(m)) for m in res.undecided],
    }


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _emit_files(out_dir: str | None, files: list[tuple[str, str]]) -> list[str]:
    """Write ``(name, text)`` pairs into ``out_dir``, or return them as stdout sections."""
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        for name, text in files:
            (Path(out_dir) / name).write_text(text, encoding="utf-8")
        return [f"wrote {os.path.join(out_dir, name)}" for name, _ in files]
    lines = []
    for i, (name, text) in enumerate(files):
        if len(files) > 1:
            lines.append(f"# {name}")
        lines.append(text.rstrip("\n"))
    return lines


def _rel(target: str | Path, out_dir: str | None) -> str:
    return os.path.relpath(target, out_dir or ".")


def _distance_kw(args) -> dict:
    return dict(
        exhaustive_cap=args.exhaustive_cap,
        node_budget=args.node_budget,
        state_cap=args.cap,
        threads=args.threads,
    )


def _distance_outcome(label: str, res: DistanceResult, K: SimplicialComplex, args,
                      oracle: Callable[[], int] | None = None) -> Outcome:
    doc = distance_doc(res, K)
    if res.exact:
        lines = [f"{label} = {res.value} (exact)"]
        code = EXIT_OK
    else:
        lines = [f"{label} <= {res.value} (upper bound; proven lower bound {res.lower_bound})"]
        if res.undecided:
            lines.append("undecided masks: " + " ".join("{" + ",".join(map(str, bits(m))) + "}"
                                                        for m in res.undecided))
        code = EXIT_CAP
    if args.witness:
        write_json(args.witness, dict(doc, schema=SCHEMA))
        lines.append(f"witness written to {args.witness}")
    if getattr(args, "oracle", False) and oracle is not None:
        try:
            ref = oracle()
        except (OracleCapError, RuntimeError, SizeGuardError) as exc:
            doc["oracle"] = {"status": "skipped", "reason": str(exc)}
            lines.append(f"oracle: skipped ({exc})")
        else:
            agree = res.exact and res.value == ref
            doc["oracle"] = {"status": "agree" if agree else "disagree", "value": ref}
            lines.append(f"oracle: {label} = {ref} ({'agrees' if agree else 'DISAGREES'})")
            if not agree and res.exact:
                code = EXIT_NO
    return Outcome(code, lines, doc, res.exact)


# -- subcommands ---------------------------------------------------------------


def cmd_info(args, inp: Inputs) -> Outcome:
    K = inp.complex(args.complex)
    fvec = [0] * (K.dim + 1)
    for s in K.simplices():
        fvec[len(s) - 1] += 1
    comps = components(K)
    res = {
        "vertices": K.n_vertices,
        "facets": K.n_facets,
        "dimension": K.dim,
        "f_vector": fvec,
        "euler_characteristic": sum((-1) ** i * c for i, c in enumerate(fvec)),
        "components": len(comps),
        "core_vertices": core(K).core.n_vertices,
        "strongly_collapsible": is_strongly_collapsible(K),
    }
    lines = [f"{k.replace('_', ' ')}: {v}" for k, v in res.items()]
    if args.dot:
        dot = emit_dot(K, Path(args.complex).stem)
        res["dot"] = dot
        if args.dot == "-":
            lines = dot.rstrip("\n").split("\n")
        else:
            Path(args.dot).write_text(dot, encoding="utf-8")
            lines.append(f"dot written to {args.dot}")
    return Outcome(EXIT_OK, lines, res)


def cmd_core(args, inp: Inputs) -> Outcome:
    K = inp.complex(args.complex)
    cr = core(K)
    trace = [{"step": i, "dominated": K.names[v], "dominator": K.names[w]}
             for i, (v, w) in enumerate(cr.elimination_trace)]
    src = _rel(args.complex, args.out_dir)
    files = [
        ("core.cplx", cr.core.to_text()),
        ("retraction.map", formats.map_text(cr.retraction, src, "core.cplx")),
        ("inclusion.map", formats.map_text(cr.inclusion, "core.cplx", src)),
    ]
    lines = []
    if args.trace:
        lines += [json.dumps(t, sort_keys=True) for t in trace]
    lines += _emit_files(args.out_dir, files)
    res = {
        "core": [list(cr.core.facet_names(j)) for j in range(cr.core.n_facets)],
        "unchanged": cr.core == K,
        "retraction": dict(sorted(cr.retraction.as_names().items())),
        "trace": trace,
    }
    return Outcome(EXIT_OK, lines, res)


def cmd_collapsible(args, inp: Inputs) -> Outcome:
    K = inp.complex(args.complex)
    cr = core(K)
    yes = cr.core.n_vertices == 1
    line = "strongly collapsible" if yes else f"not strongly collapsible (core has {cr.core.n_vertices} vertices)"
    return Outcome(EXIT_OK if yes else EXIT_NO, [line], {"strongly_collapsible": yes,
                                                          "core_vertices": cr.core.n_vertices})


def cmd_sd(args, inp: Inputs) -> Outcome:
    files: list[tuple[str, str]] = []
    if args.input.endswith(".map"):
        f = inp.map(args.input)
        sdK = barycentric_subdivision(f.domain, args.sd_cap)
        files.append(("sd_domain.cplx", sdK.to_text()))
        if args.with_maps:
            g = sd_map(f, args.sd_cap)
            files.append(("sd_codomain.cplx", g.codomain.to_text()))
            files.append(("sd.map", formats.map_text(g, "sd_domain.cplx", "sd_codomain.cplx")))
    else:
        sdK = barycentric_subdivision(inp.complex(args.input), args.sd_cap)
        files.append(("sd.cplx", sdK.to_text()))
    res = {"vertices": sdK.n_vertices, "facets": sdK.n_facets, "files": {n: t for n, t in files}}
    return Outcome(EXIT_OK, _emit_files(args.out_dir, files), res)


def cmd_product(args, inp: Inputs) -> Outcome:
    K1, K2 = inp.complex(args.left), inp.complex(args.right)
    prod = categorical_product(K1, K2, args.product_cap)
    files = [("product.cplx", prod.complex.to_text())]
    if args.with_maps:
        files.append(("p1.map", formats.map_text(prod.p1, "product.cplx", _rel(args.left, args.out_dir))))
        files.append(("p2.map", formats.map_text(prod.p2, "product.cplx", _rel(args.right, args.out_dir))))
    res = {"vertices": prod.complex.n_vertices, "facets": prod.complex.n_facets,
           "files": {n: t for n, t in files}}
    return Outcome(EXIT_OK, _emit_files(args.out_dir, files), res)


def cmd_contiguous(args, inp: Inputs) -> Outcome:
    f, g = inp.map(args.f), inp.map(args.g)
    yes = is_contiguous(f, g)
    return Outcome(EXIT_OK if yes else EXIT_NO, ["contiguous" if yes else "not contiguous"], {"contiguous": yes})


def cmd_same_class(args, inp: Inputs) -> Outcome:
    f, g = inp.map(args.f), inp.map(args.g)
    dec = same_contiguity_class(f, g, cap=args.cap, certificate=True)
    cert = certificate_doc(dec.certificate)
    res = {"same": dec.same, "certificate": cert}
    if dec.same is None:
        code, lines = EXIT_CAP, [f"unknown (state cap {args.cap} reached)"]
    elif dec.same:
        code, lines = EXIT_OK, [f"same contiguity class (chain of {len(dec.certificate.chain)} maps)"]
    else:
        code, lines = EXIT_NO, [f"different contiguity classes ({dec.certificate.explored} states exhausted)"]
    if args.certificate:
        write_json(args.certificate, {"schema": SCHEMA, "same": dec.same, **cert})
        lines.append(f"certificate written to {args.certificate}")
    if args.oracle:
        try:
            ref = exhaustive_same_class(f, g)
        except OracleCapError as exc:
            res["oracle"] = {"status": "skipped", "reason": str(exc)}
            lines.append(f"oracle: skipped ({exc})")
        else:
            agree = dec.same == ref
            res["oracle"] = {"status": "agree" if agree else "disagree", "same": ref}
            lines.append("oracle: agrees" if agree else f"oracle: DISAGREES (oracle says {ref})")
            if not agree and dec.same is not None:
                code = EXIT_NO
    return Outcome(code, lines, res, dec.same is not None)


def cmd_distance(args, inp: Inputs) -> Outcome:
    f, g = inp.map(args.f), inp.map(args.g)
    res = contiguity_distance(f, g, **_distance_kw(args))
    return _distance_outcome("SD", res, f.domain, args, lambda: exhaustive_distance(f, g))


def cmd_scat(args, inp: Inputs) -> Outcome:
    K = inp.complex(args.complex)
    idK, c = identity_map(K), constant_map(K, K, 0)
    res = contiguity_distance(idK, c, **_distance_kw(args))
    return _distance_outcome("scat", res, K, args, lambda: exhaustive_distance(idK, c))


def cmd_tc(args, inp: Inputs) -> Outcome:
    K = inp.complex(args.complex)
    square = categorical_product(K, K, args.product_cap)
    res = contiguity_distance(square.p1, square.p2, **_distance_kw(args))
    return _distance_outcome("TC", res, square.complex, args,
                             lambda: farber_cover_tc(K, cap=DEFAULT_FARBER_CAP, state_cap=args.cap)[0])


def cmd_scat_map(args, inp: Inputs) -> Outcome:
    f = inp.map(args.map)
    c = constant_map(f.domain, f.codomain, 0)
    res = contiguity_distance(f, c, **_distance_kw(args))
    return _distance_outcome("scat", res, f.domain, args, lambda: exhaustive_distance(f, c))


def cmd_verify(args, inp: Inputs) -> Outcome:
    from .verify import Limits, run_suite

    corpus = Path(args.corpus) if args.corpus else FIXTURES
    if not corpus.is_dir():
        raise ComplexError(f"{corpus}: not a directory")
    for path in sorted(corpus.glob("*.cplx")) + sorted(corpus.glob("*.map")):
        inp.note(path)
    limits = Limits(state_cap=args.cap, exhaustive_cap=args.exhaustive_cap, node_budget=args.node_budget)
    report = run_suite(seed=args.seed, n_complexes=args.complexes, n_pairs=args.pairs, threads=args.threads,
                       limits=limits, oracle_every=args.oracle_every, corpus_dir=corpus)
    lines = [f"seed {report['seed']}: {report['complexes']} complexes, {report['map_pairs']} map pairs"]
    undecided = 0
    for name, counts in report["checks"].items():
        undecided += counts.get("undecided", 0)
        lines.append(f"  {name}: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
    n_bad = len(report["violations"])
    lines.append(f"violations: {n_bad}; undecided checks: {undecided}")
    for v in report["violations"]:
        lines.append(f"VIOLATION {v['check']}: {v['detail']}")
        lines.append("  " + json.dumps(v["instance"], sort_keys=True))
    return Outcome(EXIT_NO if n_bad else EXIT_OK, lines, report, undecided == 0)


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--deterministic", action="store_true", help="omit timing so reports are byte-identical")
    common.add_argument("--threads", type=int, default=1, help="worker processes (results do not depend on it)")
    common.add_argument("--cap", type=int, default=DEFAULT_STATE_CAP, help="state cap for class searches")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--witness", metavar="PATH", help="write the witness cover and certificates")
    search.add_argument("--oracle", action="store_true", help="rerun with the brute-force oracle")
    search.add_argument("--exhaustive-cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP,
                        help="facet count up to which the cover search is exhaustive")
    search.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET,
                        help="search nodes allowed above the exhaustive cap")

    emit = argparse.ArgumentParser(add_help=False)
    emit.add_argument("--out-dir", metavar="DIR", help="write output files here instead of stdout")

    parser = argparse.ArgumentParser(prog="contiguity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", parents=[common], help="summary of a complex")
    p.add_argument("complex")
    p.add_argument("--dot", metavar="PATH", help="DOT export of the 1-skeleton ('-' for stdout)")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("core", parents=[common, emit], help="strong-collapse core and retraction")
    p.add_argument("complex")
    p.add_argument("--trace", action="store_true", help="print the elimination trace as JSON lines")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("collapsible", parents=[common], help="is the complex strongly collapsible")
    p.add_argument("complex")
    p.set_defaults(func=cmd_collapsible)

    p = sub.add_parser("sd", parents=[common, emit], help="barycentric subdivision of a complex or map")
    p.add_argument("input", help=".cplx file, or .map file to subdivide its domain (and the map)")
    p.add_argument("--with-maps", action="store_true", help="also emit the subdivided map")
    p.add_argument("--sd-cap", type=int, default=DEFAULT_SD_CAP)
    p.set_defaults(func=cmd_sd)

    p = sub.add_parser("product", parents=[common, emit], help="categorical product")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--with-maps", action="store_true", help="also emit the projections")
    p.add_argument("--product-cap", type=int, default=DEFAULT_PRODUCT_CAP)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("contiguous", parents=[common], help="one-step contiguity of two maps")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_contiguous)

    p = sub.add_parser("same-class", parents=[common], help="same contiguity class")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--certificate", metavar="PATH", help="write the chain or refutation")
    p.add_argument("--oracle", action="store_true", help="rerun with the brute-force oracle")
    p.set_defaults(func=cmd_same_class)

    p = sub.add_parser("distance", parents=[common, search], help="contiguity distance of two maps")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("scat", parents=[common, search], help="simplicial LS category")
    p.add_argument("complex")
    p.set_defaults(func=cmd_scat)

    p = sub.add_parser("tc", parents=[common, search], help="discrete topological complexity")
    p.add_argument("complex")
    p.add_argument("--product-cap", type=int, default=DEFAULT_PRODUCT_CAP)
    p.set_defaults(func=cmd_tc)

    p = sub.add_parser("scat-map", parents=[common, search], help="LS category of a map")
    p.add_argument("map")
    p.set_defaults(func=cmd_scat_map)

    p = sub.add_parser("verify", parents=[common], help="theorem suite over a corpus plus random instances")
    p.add_argument("corpus", nargs="?", help="corpus directory (default: bundled fixtures)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--complexes", type=int, default=200, help="random complexes")
    p.add_argument("--pairs", type=int, default=500, help="random map pairs")
    p.add_argument("--oracle-every", type=int, default=10, help="cross-check every n-th random instance")
    p.add_argument("--exhaustive-cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: list[str] | None = None, stdout=None) -> int:
    """Parse, dispatch and print; returns the exit code."""
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.threads < 1 or args.cap < 1:
        print("error: --threads and --cap must be positive", file=sys.stderr)
        return EXIT_INPUT
    inp = Inputs()
    start = time.perf_counter()
    try:
        out = args.func(args, inp)
    except (SizeGuardError, OracleCapError) as exc:
        out = Outcome(EXIT_CAP, [f"cap exceeded: {exc}"], {"error": str(exc)})
    except (ComplexError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    if args.json:
        report = {
            "schema": SCHEMA,
            "command": argv,
            "inputs": inp.report(),
            "result": out.result,
            "exact": out.exact,
            "exit_code": out.code,
            "timing": None if args.deterministic else {"wall_ms": elapsed_ms},
        }
        stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        for line in out.lines:
            stdout.write(line + "\n")
    return out.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
