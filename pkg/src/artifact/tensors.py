"""Index tuples, equality patterns, Segre powers and sparse cubical tensors.

Index tuples and tensor positions are 1-based. A cubical tensor of order k
over base n is a sparse map [n]^k -> Fraction with no stored zeros.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .config import check_cap
from .structures import RelationalStructure, Signature, Tuple, encode

# equality patterns


def refines(s: Sequence, t: Sequence) -> bool:
    """s ≺ t: every equality among entries of s also holds in t."""
    if len(s) != len(t):
        raise ValueError(f"length mismatch {len(s)} vs {len(t)}")
    first: dict = {}
    for a, b in zip(s, t):
        if a in first:
            if first[a] != b:
                return False
        else:
            first[a] = b
    return True


def pattern_equiv(s: Sequence, t: Sequence) -> bool:
    return refines(s, t) and refines(t, s)


def pattern(s: Sequence) -> Tuple:
    """Canonical equality pattern: first occurrence order, starting at 1."""
    seen: dict = {}
    return tuple(seen.setdefault(a, len(seen) + 1) for a in s)


def projection(x: Sequence, i: Sequence[int]) -> tuple:
    """x_i = (x_{i_1}, ..., x_{i_l})."""
    m = len(x)
    out = []
    for j in i:
        if not 1 <= j <= m:
            raise IndexError(f"index {j} outside [1,{m}]")
        out.append(x[j - 1])
    return tuple(out)


def cube(n: int, k: int) -> Iterable[Tuple]:
    """[n]^k in mixed-radix order."""
    return itertools.product(range(1, n + 1), repeat=k)


def segre_power(a: Sequence, k: int, cap: int | None = None) -> dict[Tuple, tuple]:
    """Position i in [r]^k holds a_i."""
    r = len(a)
    check_cap(r**k, cap, "Segre power")
    return {i: projection(a, i) for i in cube(r, k)}


def segre_flat(a: Sequence[int], k: int, n: int) -> Tuple:
    """The Segre power of a as a tuple over [n^k], positions in mixed-radix order."""
    return tuple(encode(projection(a, i), n) for i in cube(len(a), k))


# sparse tensors


@dataclass(frozen=True, eq=False)
class CubicalTensor:
    base: int
    order: int
    entries: Mapping[Tuple, Fraction]
    stochastic: bool = False

    @classmethod
    def build(cls, base: int, order: int, entries: Mapping[Sequence[int], object] | Iterable,
              stochastic: bool = False) -> "CubicalTensor":
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean: dict[Tuple, Fraction] = {}
        for key, val in items:
            key = tuple(key)
            if len(key) != order or any(not 1 <= e <= base for e in key):
                raise ValueError(f"index {key} not in [{base}]^{order}")
            val = Fraction(val)
            if val:
                clean[key] = clean.get(key, 0) + val
        clean = {k: clean[k] for k in sorted(clean) if clean[k]}
        if stochastic:
            if any(v < 0 for v in clean.values()):
                raise ValueError("stochastic tensor has a negative entry")
            total = sum(clean.values(), Fraction(0))
            if total != 1:
                raise ValueError(f"stochastic tensor sums to {total}")
        return cls(base, order, clean, stochastic)

    @classmethod
    def unit(cls, base: int, a: Sequence[int]) -> "CubicalTensor":
        """E_a."""
        return cls.build(base, len(a), {tuple(a): 1}, stochastic=True)

    @classmethod
    def ones(cls, base: int, order: int) -> "CubicalTensor":
        """The all-one tensor J."""
        return cls.build(base, order, {i: 1 for i in cube(base, order)})

    @classmethod
    def scalar(cls, base: int, value) -> "CubicalTensor":
        return cls.build(base, 0, {(): value})

    def __getitem__(self, a: Sequence[int]) -> Fraction:
        return self.entries.get(tuple(a), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, CubicalTensor):
            return NotImplemented
        return self.base == other.base and self.order == other.order and dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.base, self.order, tuple(self.entries.items())))

    def __repr__(self):
        body = ", ".join(f"{k}:{v}" for k, v in list(self.entries.items())[:6])
        more = "" if len(self.entries) <= 6 else ", ..."
        return f"CubicalTensor(n={self.base}, k={self.order}, {{{body}{more}}})"

    def support(self) -> frozenset:
        return frozenset(self.entries)

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def value(self) -> Fraction:
        if self.order != 0:
            raise ValueError("not an order-0 tensor")
        return self[()]

    def is_stochastic(self) -> bool:
        return all(v >= 0 for v in self.entries.values()) and self.total() == 1

    def as_stochastic(self) -> "CubicalTensor":
        return CubicalTensor.build(self.base, self.order, self.entries, stochastic=True)

    def dump(self) -> list[str]:
        """Lines '<i1> ... <ik> <p>/<q>' in encoded-index order."""
        return [" ".join(map(str, a)) + f" {v.numerator}/{v.denominator}" for a, v in self.entries.items()]

    @classmethod
    def parse(cls, base: int, order: int, lines: Iterable[str], stochastic: bool = False) -> "CubicalTensor":
        entries = {}
        for line in lines:
            parts = line.split()
            if len(parts) != order + 1:
                raise ValueError(f"bad tensor line {line!r}")
            entries[tuple(int(p) for p in parts[:-1])] = Fraction(parts[-1])
        return cls.build(base, order, entries, stochastic)


def contract(M: CubicalTensor, N: CubicalTensor, k: int) -> CubicalTensor:
    """M ∗_k N: sum over the trailing k modes of M against the leading k modes of N."""
    if M.base != N.base:
        raise ValueError(f"base mismatch {M.base} vs {N.base}")
    if k > M.order or k > N.order or k < 0:
        raise ValueError(f"cannot contract {k} modes of orders {M.order}, {N.order}")
    grouped: dict[Tuple, list] = {}
    for key, v in N.entries.items():
        grouped.setdefault(key[:k], []).append((key[k:], v))
    out: dict[Tuple, Fraction] = {}
    split = M.order - k
    for key, v in M.entries.items():
        for rest, w in grouped.get(key[split:], ()):
            idx = key[:split] + rest
            out[idx] = out.get(idx, 0) + v * w
    return CubicalTensor.build(M.base, M.order + N.order - 2 * k, out)


def apply_pi(i: Sequence[int], T: CubicalTensor) -> CubicalTensor:
    """Π_i ∗ T computed lazily: entry at a is the sum of T(b) over b with b_i = a."""
    if len(i) != T.order:
        raise ValueError(f"index tuple of length {len(i)} for an order-{T.order} tensor")
    i = tuple(i)
    out: dict[Tuple, Fraction] = {}
    for b, v in T.entries.items():
        a = tuple(b[j - 1] for j in i)
        out[a] = out.get(a, 0) + v
    return CubicalTensor.build(T.base, T.order, out, stochastic=T.stochastic)


def apply_p(i: Sequence[int], relation: Sequence[Tuple], q: Sequence | Mapping, base: int) -> CubicalTensor:
    """P_i ∗ q computed lazily: entry at a is the sum of q(b) over b in R^A with b_i = a.

    ``q`` is aligned with ``relation`` (a sequence) or keyed by its tuples.
    """
    i = tuple(i)
    weights = q.items() if isinstance(q, Mapping) else zip(relation, q)
    out: dict[Tuple, Fraction] = {}
    for b, v in weights:
        r = len(b)
        if any(not 1 <= j <= r for j in i):
            raise IndexError(f"index tuple {i} outside [{r}]")
        if not v:
            continue
        a = tuple(b[j - 1] for j in i)
        out[a] = out.get(a, 0) + Fraction(v)
    return CubicalTensor.build(base, len(i), out)


def marginal(T: CubicalTensor, j: int) -> dict[int, Fraction]:
    """Vector c -> sum of T(b) over b with b_j = c."""
    out: dict[int, Fraction] = {}
    for b, v in T.entries.items():
        out[b[j - 1]] = out.get(b[j - 1], 0) + v
    return out


# tensor powers of structures


@dataclass(frozen=True)
class TensorisedStructure:
    structure: RelationalStructure
    source: RelationalStructure
    k: int


def tensor_power(A: RelationalStructure, k: int, cap: int | None = None) -> TensorisedStructure:
    """A^⊗k on [n^k]: each arity-r relation becomes the set of flattened Segre powers."""
    if k < 1:
        raise ValueError("tensor power needs k >= 1")
    check_cap(A.n**k, cap, "tensor power domain")
    syms, rels = [], {}
    for sym, r in A.signature.symbols:
        check_cap(A.size(sym) * r**k, cap, f"tensor power relation {sym}")
        syms.append((sym, r**k))
        rels[sym] = tuple(segre_flat(a, k, A.n) for a in A.tuples(sym))
    name = f"{A.name}^(x){k}" if A.name else ""
    S = RelationalStructure(Signature(tuple(syms)), A.n**k, rels, frozenset(), name)
    return TensorisedStructure(S, A, k)
