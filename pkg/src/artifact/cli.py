"""Command-line frontend. Exit codes: 0 accept/success, 1 reject/negative, 2 error."""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from . import colouring, consistency, relaxations
from .config import CapExceeded, RunConfig
from .structures import (
    BudgetExhausted,
    ParseError,
    RelationalStructure,
    SignatureMismatch,
    clique,
    count_homomorphisms_bruteforce,
    directed_cycle,
    dump_structure,
    ensure_enhanced,
    line_digraph,
    load_structure,
)
from .tensors import tensor_power
from .witness import check_witness, dump_sa_witness, dump_xi_witness, parse_witness

EXIT_OK, EXIT_NEG, EXIT_ERR = 0, 1, 2

_BUILTIN = re.compile(r"^(K|C)(\d+)$")


def resolve_structure(name: str) -> RelationalStructure:
    """K<n> is a clique, C<n> a directed cycle; anything else is a structure file."""
    m = _BUILTIN.match(name)
    if m and not Path(name).exists():
        n = int(m.group(2))
        return clique(n) if m.group(1) == "K" else directed_cycle(n)
    return load_structure(name)


def _int_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",")]


class Reporter:
    def __init__(self, cfg: RunConfig, out=None):
        self.cfg = cfg
        self.out = out or sys.stdout
        self.fields: dict = {"seed": cfg.seed}

    def line(self, text: str, **fields):
        if self.cfg.report_format == "text":
            print(text, file=self.out)
        self.fields.update(fields)

    def finish(self, verdict: str):
        if self.cfg.report_format == "structured":
            self.fields["verdict"] = verdict
            print(json.dumps(self.fields, sort_keys=True, default=str), file=self.out)
        else:
            print(f"seed {self.cfg.seed}", file=self.out)


def _write(path: str | None, text: str, rep: Reporter, what: str):
    if path:
        Path(path).write_text(text, encoding="utf-8")
        rep.line(f"{what} {path}", **{what: path})


def _pair(args, k: int | None = None):
    X, A = resolve_structure(args.instance), resolve_structure(args.template)
    if k is not None and getattr(args, "enhance", False):
        X, A = ensure_enhanced(X, k), ensure_enhanced(A, k)
    return X, A


def cmd_sa(args, cfg, rep) -> int:
    X, A = _pair(args, args.level)
    res = relaxations.solve_sa(X, A, args.level, cap=cfg.enum_cap)
    verdict = "ACCEPT" if res.accepts else "REJECT"
    rep.line(verdict, accepts=res.accepts, reduced_shape=res.lp.reduced_shape if res.lp else None)
    if res.accepts:
        _write(args.witness, dump_sa_witness(res.solution, cfg.seed), rep, "witness")
        if args.xi:
            xi = relaxations.solution_to_ximap(res.solution)
            _write(args.xi, dump_xi_witness(xi, cfg.seed), rep, "xi")
    rep.finish(verdict)
    return EXIT_OK if res.accepts else EXIT_NEG


def cmd_blp(args, cfg, rep) -> int:
    X, A = _pair(args)
    ok, sol, _ = relaxations.blp_accepts(X, A, cfg.enum_cap)
    verdict = "ACCEPT" if ok else "REJECT"
    rep.line(verdict, accepts=ok)
    rep.finish(verdict)
    return EXIT_OK if ok else EXIT_NEG


def cmd_tensorize(args, cfg, rep) -> int:
    A = resolve_structure(args.structure)
    T = tensor_power(A, args.level, cfg.enum_cap).structure
    text = dump_structure(T)
    if args.out:
        _write(args.out, text, rep, "structure")
    else:
        rep.line(text.rstrip("\n"))
    rep.line(f"domain {T.n}", domain=T.n, hash=T.content_hash)
    rep.finish("OK")
    return EXIT_OK


def cmd_linedigraph(args, cfg, rep) -> int:
    A = resolve_structure(args.structure)
    D = line_digraph(A, args.symbol)
    text = dump_structure(D)
    if args.out:
        _write(args.out, text, rep, "structure")
    else:
        rep.line(text.rstrip("\n"))
    rep.line(f"domain {D.n}", domain=D.n, hash=D.content_hash)
    rep.finish("OK")
    return EXIT_OK


def cmd_kconsistency(args, cfg, rep) -> int:
    X, A = _pair(args)
    ok, fam = consistency.kconsistency(X, A, args.level, cap=cfg.enum_cap)
    verdict = "ACCEPT" if ok else "REJECT"
    rep.line(verdict, accepts=ok, family_size=len(fam))
    rep.line(f"family {len(fam)}")
    _write(args.family, fam.dump(), rep, "family")
    rep.finish(verdict)
    return EXIT_OK if ok else EXIT_NEG


def cmd_count(args, cfg, rep) -> int:
    X, A = _pair(args)
    n = relaxations.sa_count_homs(X, A, cfg.enum_cap)
    rep.line(str(n), count=n)
    if args.check:
        b = count_homomorphisms_bruteforce(X, A, cfg.enum_cap)
        rep.line(f"bruteforce {b}", bruteforce=b)
        if b != n:
            rep.finish("MISMATCH")
            return EXIT_NEG
    rep.finish("OK")
    return EXIT_OK


def cmd_table(args, cfg, rep) -> int:
    ks, cs, ds = _int_range(args.k), _int_range(args.c), _int_range(args.d)
    cells = []
    bad = 0
    for k in ks:
        for c in cs:
            for d in ds:
                ok, _ = relaxations.sa_accepts(clique(c), clique(d), k, cfg.enum_cap)
                want = min(k, c) <= d
                bad += ok != want
                cells.append({"k": k, "c": c, "d": d, "accepts": ok, "formula": want})
                rep.line(f"k={k} c={c} d={d} {'ACCEPT' if ok else 'REJECT'} {'match' if ok == want else 'MISMATCH'}")
    rep.line(f"cells {len(cells)} mismatches {bad}", cells=cells, mismatches=bad)
    rep.finish("OK" if not bad else "MISMATCH")
    return EXIT_OK if not bad else EXIT_NEG


def cmd_exhibit(args, cfg, rep) -> int:
    if args.line_digraph:
        ok, lines, arts = colouring.line_digraph_exhibit(args.c, args.d, cfg.enum_cap)
    else:
        ok, lines, arts = colouring.approx_colouring_exhibit(args.c, args.d, args.k, cfg.enum_cap)
    for ln in lines:
        rep.line(ln)
    if args.output_dir:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, art in arts.items():
            path = out / f"{name}.wit"
            if isinstance(art, relaxations.XiMap):
                path.write_text(dump_xi_witness(art, cfg.seed), encoding="utf-8")
            else:
                path.write_text(dump_sa_witness(art, cfg.seed), encoding="utf-8")
            rep.line(f"WITNESS {path}")
    rep.fields["steps"] = lines
    rep.finish("OK" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_NEG


def cmd_verify(args, cfg, rep) -> int:
    w = parse_witness(Path(args.witness).read_text(encoding="utf-8"))
    X = resolve_structure(args.instance) if args.instance else None
    A = resolve_structure(args.template) if args.template else None
    res = check_witness(w, X, A)
    verdict = "OK" if res.ok else "FAIL"
    rep.line(f"{verdict} {res.detail}", ok=res.ok, detail=res.detail, kind=w.kind, level=w.k)
    rep.finish(verdict)
    return EXIT_OK if res.ok else EXIT_NEG


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description=__doc__)
    p.add_argument("--format", choices=("text", "structured"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cap", type=int, default=None, help="enumeration cap")
    p.add_argument("--output-dir", default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def pair(sp):
        sp.add_argument("instance")
        sp.add_argument("template")

    sp = sub.add_parser("sa", help="decide SA^k(X, A)")
    pair(sp)
    sp.add_argument("--level", "-k", type=int, required=True)
    sp.add_argument("--enhance", action="store_true", help="add the level-k full relation to both structures")
    sp.add_argument("--witness", help="write the SA solution here when accepted")
    sp.add_argument("--xi", help="write the ξ-map here when accepted")
    sp.set_defaults(func=cmd_sa)

    sp = sub.add_parser("blp", help="decide BLP(X, A)")
    pair(sp)
    sp.set_defaults(func=cmd_blp)

    sp = sub.add_parser("tensorize", help="print the k-th tensor power")
    sp.add_argument("structure")
    sp.add_argument("--level", "-k", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_tensorize)

    sp = sub.add_parser("linedigraph", help="print the line digraph")
    sp.add_argument("structure")
    sp.add_argument("--symbol", default="E")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_linedigraph)

    sp = sub.add_parser("kconsistency", help="run k-consistency")
    pair(sp)
    sp.add_argument("--level", "-k", type=int, required=True)
    sp.add_argument("--family")
    sp.set_defaults(func=cmd_kconsistency)

    sp = sub.add_parser("count", help="count homomorphisms through SA at level |X|")
    pair(sp)
    sp.add_argument("--check", action="store_true", help="compare with brute force")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("table", help="clique acceptance table against min(k,c) <= d")
    sp.add_argument("--k", default="2..4")
    sp.add_argument("--c", default="2..4")
    sp.add_argument("--d", default="2..4")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("exhibit", help="approximate-colouring exhibit")
    sp.add_argument("--c", type=int, default=3)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--line-digraph", action="store_true")
    sp.set_defaults(func=cmd_exhibit)

    sp = sub.add_parser("verify", help="re-check a witness file")
    sp.add_argument("witness")
    sp.add_argument("--instance")
    sp.add_argument("--template")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    overrides = {k: v for k, v in (("report_format", args.format), ("seed", args.seed),
                                   ("enum_cap", args.cap), ("output_dir", args.output_dir)) if v is not None}
    try:
        cfg = RunConfig.from_env(**overrides)
        return args.func(args, cfg, Reporter(cfg))
    except (ParseError, SignatureMismatch, CapExceeded, BudgetExhausted, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERR


if __name__ == "__main__":
    sys.exit(main())
