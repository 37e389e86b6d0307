"""Self-describing witness files for SA solutions and ξ-maps.

A witness embeds both structures and their content hashes, so it can be
re-checked without trusting whatever produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .relaxations import SASolution, XiMap, first_sa_violation, key_name, verify_free_hom
from .structures import ParseError, RelationalStructure, dump_structure, parse_structure
from .tensors import CubicalTensor

MAGIC = "artifact-witness 1"


def _frac(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _ints(s: str) -> tuple:
    return tuple(int(e) for e in s.split(",")) if s else ()


def _graph_values(s: str) -> tuple:
    return tuple(int(p.split(">")[1]) for p in s.split(","))


def parse_key(name: str) -> tuple:
    parts = name.split("|")
    if parts[0] == "V" and len(parts) == 3:
        return "V", _ints(parts[1]), _graph_values(parts[2])
    if parts[0] == "C" and len(parts) == 4:
        return "C", parts[1], _ints(parts[2]), _graph_values(parts[3])
    raise ValueError(f"bad variable name {name!r}")


def _header(kind: str, X: RelationalStructure, A: RelationalStructure, k: int, seed: int | None) -> list[str]:
    lines = [MAGIC, f"kind {kind}", f"level {k}"]
    if seed is not None:
        lines.append(f"seed {seed}")
    lines += [f"hash X {X.content_hash}", f"hash A {A.content_hash}"]
    for tag, S in (("X", X), ("A", A)):
        lines.append(f"begin {tag}")
        lines += dump_structure(S).rstrip("\n").split("\n")
        lines.append(f"end {tag}")
    return lines


def dump_sa_witness(sol: SASolution, seed: int | None = None) -> str:
    lines = _header("sa", sol.X, sol.A, sol.k, seed)
    if sol.collapsed:
        lines.append("collapsed " + " ".join(sorted(sol.collapsed)))
    for (V, f), v in sorted(sol.lambdaV.items()):
        lines.append(f"value {key_name(('V', V, f))} {_frac(v)}")
    for (R, x, f), v in sorted(sol.lambdaC.items()):
        lines.append(f"value {key_name(('C', R, x, f))} {_frac(v)}")
    return "\n".join(lines) + "\n"


def dump_xi_witness(xi: XiMap, seed: int | None = None) -> str:
    lines = _header("xi", xi.X, xi.A, xi.k, seed)
    for x in sorted(xi.tensors):
        lines.append("tensor " + " ".join(map(str, x)))
        lines += ["  " + e for e in xi.tensors[x].dump()]
    return "\n".join(lines) + "\n"


@dataclass
class Witness:
    kind: str
    k: int
    X: RelationalStructure
    A: RelationalStructure
    hashes: dict
    seed: int | None
    payload: object


def parse_witness(text: str) -> Witness:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ParseError(1, f"missing '{MAGIC}' header")
    kind, k, seed, hashes, blocks = None, None, None, {}, {}
    collapsed: frozenset = frozenset()
    values: list = []
    tensors: dict = {}
    current_block, block_lines = None, []
    current_tensor = None
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if current_block is not None:
            if line == f"end {current_block}":
                blocks[current_block] = "\n".join(block_lines) + "\n"
                current_block, block_lines = None, []
            else:
                block_lines.append(raw)
            continue
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "kind":
                kind = parts[1]
            elif head == "level":
                k = int(parts[1])
            elif head == "seed":
                seed = int(parts[1])
            elif head == "hash":
                hashes[parts[1]] = parts[2]
            elif head == "begin":
                current_block = parts[1]
            elif head == "collapsed":
                collapsed = frozenset(parts[1:])
            elif head == "value":
                values.append((parse_key(parts[1]), Fraction(parts[2])))
            elif head == "tensor":
                current_tensor = tuple(int(p) for p in parts[1:])
                tensors[current_tensor] = []
            elif current_tensor is not None and len(parts) > 1:
                tensors[current_tensor].append(line)
            else:
                raise ParseError(lineno, f"unknown directive {head!r}")
        except (IndexError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, f"malformed line {line!r}") from None
    if current_block is not None:
        raise ParseError(len(lines), f"unterminated block {current_block}")
    if kind not in ("sa", "xi") or k is None or "X" not in blocks or "A" not in blocks:
        raise ParseError(0, "witness header incomplete")
    X, A = parse_structure(blocks["X"]), parse_structure(blocks["A"])
    if kind == "sa":
        sol = SASolution(X, A, k, collapsed=collapsed)
        for key, v in values:
            if key[0] == "V":
                sol.lambdaV[(key[1], key[2])] = v
            else:
                sol.lambdaC[(key[1], key[2], key[3])] = v
        payload = sol
    else:
        payload = XiMap(X, A, k, {x: CubicalTensor.parse(A.n, k, ls) for x, ls in tensors.items()})
    return Witness(kind, k, X, A, hashes, seed, payload)


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    detail: str


def check_witness(w: Witness, X: RelationalStructure | None = None,
                  A: RelationalStructure | None = None) -> WitnessCheck:
    for tag, S in (("X", w.X), ("A", w.A)):
        if w.hashes.get(tag) != S.content_hash:
            return WitnessCheck(False, f"embedded {tag} does not match its header hash")
    for tag, S in (("X", X), ("A", A)):
        if S is not None and S.content_hash != w.hashes[tag]:
            return WitnessCheck(False, f"{tag} given on the command line differs from the witness ({S.content_hash})")
    if w.kind == "sa":
        bad = first_sa_violation(w.payload)
        return WitnessCheck(bad is None, bad or f"SA^{w.k} solution satisfies every constraint")
    try:
        ver = verify_free_hom(w.payload)
    except ValueError as exc:
        return WitnessCheck(False, str(exc))
    return WitnessCheck(bool(ver), ver.failure or f"ξ verifies at level {w.k}")
