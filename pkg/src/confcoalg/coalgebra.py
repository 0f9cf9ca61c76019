"""Differential (super)coalgebras dual to conformal structure tables.

Dualization is the substitution functor on structure constants:

    Q^{ij}_k(x1, x2) = P^{ij}_k(x1, -x1-x2),

re-indexed from (i,j) -> k lists to k -> (i,j) lists.  The coproduct of a
dual generator a_k^* is  delta(a_k^*) = sum Q^{ij}_k(x1, x2) a_i^* (x) a_j^*,
where x_s stands for d acting on tensor slot s.  Because the substitution
d -> -x1-x2 is (after identifying x2 with d) an involution, applying it
twice is the identity -- the double-dual round trip.

Tensor arithmetic keeps one coefficient polynomial in x1..x_arity per tuple
of generator indices.  Swapping adjacent slots introduces the Koszul sign
(-1)^{p(a)p(b)} and permutes the matching slot variables; expanding a slot
with a coproduct splits its variable into the sum of the two new ones
(d is a coderivation on tensor products).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .conformal import Generator, LambdaStructure, Report, StructureError, Violation
from .poly import D, LAM, MultiPoly, P_ONE, X1, X2

_X = ("x1", "x2", "x3", "x4")
_MINUS_X1_X2 = -X1 - X2


class Coproduct:
    """Coproduct table of a differential (super)coalgebra on a dual basis."""

    def __init__(
        self,
        kind: str,
        generators: Sequence[Generator],
        table: Dict[int, List[Tuple[int, int, MultiPoly]]],
        name: str = "",
    ):
        self.kind = kind
        self.generators = list(generators)
        self.name = name
        self.index = {g.id: i for i, g in enumerate(self.generators)}
        self.table = {}
        for k in range(len(self.generators)):
            entries = [(i, j, q) for i, j, q in table.get(k, []) if not q.is_zero()]
            pk = self.generators[k].parity
            for i, j, _ in entries:
                if (self.generators[i].parity + self.generators[j].parity) & 1 != pk:
                    raise StructureError(
                        f"parity violation in delta({self.generators[k].id})"
                    )
            self.table[k] = entries

    @property
    def rank(self) -> int:
        return len(self.generators)

    def parity(self, i: int) -> int:
        return self.generators[i].parity

    def normalized(self, k: int) -> Dict[Tuple[int, int], MultiPoly]:
        """Collapse the (i, j) list of delta(a_k^*) into a merged map."""
        out: Dict[Tuple[int, int], MultiPoly] = {}
        for i, j, q in self.table[k]:
            prev = out.get((i, j))
            s = q if prev is None else prev + q
            if s.is_zero():
                out.pop((i, j), None)
            else:
                out[(i, j)] = s
        return out


def dual_generators(S: LambdaStructure) -> List[Generator]:
    return [
        Generator(g.id + "*", g.parity, (g.latex or g.id) + "^*")
        for g in S.generators
    ]


def dualize(S: LambdaStructure, name: Optional[str] = None) -> Coproduct:
    """The coproduct on the dual basis: Q^{ij}_k(x, y) = P^{ij}_k(x, -x-y)."""
    table: Dict[int, List[Tuple[int, int, MultiPoly]]] = {}
    for (i, j), entries in S.table.items():
        for k, p in entries:
            q = p.permute_vars({"lam": "x1"}).subst_general("d", _MINUS_X1_X2)
            table.setdefault(k, []).append((i, j, q))
    for k in table:
        table[k].sort(key=lambda t: (t[0], t[1]))
    return Coproduct(S.kind, dual_generators(S), table, name=name or (S.name + "^c"))


def double_dual_roundtrip(S: LambdaStructure) -> Report:
    """d -> -lam-d applied twice to every table entry returns it exactly."""
    rep = Report("roundtrip", S.name)
    img = -LAM - D
    for (i, j), entries in S.table.items():
        for k, p in entries:
            rep.total += 1
            back = p.subst_general("d", img).subst_general("d", img)
            if back != p:
                names = (S.generators[i].id, S.generators[j].id, S.generators[k].id)
                rep.violations.append(Violation(names, f"{p} -> {back}"))
    return rep


class TensorElement:
    """Element of the arity-fold tensor power with slot-variable coefficients."""

    __slots__ = ("arity", "terms", "parities")

    def __init__(
        self,
        arity: int,
        terms: Optional[Dict[Tuple[int, ...], MultiPoly]] = None,
        parities: Tuple[int, ...] = (),
    ):
        if not 1 <= arity <= 4:
            raise StructureError("tensor arity must be 1..4")
        self.arity = arity
        self.parities = parities
        self.terms = {}
        if terms:
            for key, p in terms.items():
                if len(key) != arity:
                    raise StructureError("tuple arity mismatch")
                if not p.is_zero():
                    self.terms[key] = p

    @staticmethod
    def seed(k: int, cop: Coproduct) -> "TensorElement":
        pars = tuple(g.parity for g in cop.generators)
        return TensorElement(1, {(k,): P_ONE}, pars)

    def _add_term(self, key, p):
        prev = self.terms.get(key)
        s = p if prev is None else prev + p
        if s.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = s

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if self.arity != other.arity:
            raise StructureError("tensor arity mismatch")
        out = TensorElement(self.arity, dict(self.terms), self.parities)
        for key, p in other.terms.items():
            out._add_term(key, p)
        return out

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(MultiPoly.const(-1))

    def scale(self, p: MultiPoly) -> "TensorElement":
        return TensorElement(
            self.arity, {k: p * q for k, q in self.terms.items()}, self.parities
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TensorElement)
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"({p})*{key}" for key, p in sorted(self.terms.items())
        )


def apply_delta_slot(t: TensorElement, cop: Coproduct, slot: int) -> TensorElement:
    """Expand the generator in position slot (1-based) by the coproduct.

    The slot variable splits into the sum of the two new slot variables and
    later slot variables shift up by one.  The coproduct is an even map, so
    no Koszul sign appears.
    """
    if not 1 <= slot <= t.arity:
        raise StructureError("slot out of range")
    if t.arity >= 4:
        raise StructureError("tensor arity overflow")
    out = TensorElement(t.arity + 1, {}, t.parities)
    xs = MultiPoly.var(_X[slot - 1])
    xs1 = MultiPoly.var(_X[slot])
    split = xs + xs1
    for key, p in t.terms.items():
        # shift variables of later slots up, then split the expanded slot
        shifted = p
        for v in range(t.arity, slot, -1):
            shifted = shifted.permute_vars({_X[v - 1]: _X[v]})
        shifted = shifted.subst_general(_X[slot - 1], split)
        g = key[slot - 1]
        sigma = {}
        if _X[slot - 1] != "x1":
            sigma["x1"] = _X[slot - 1]
        if _X[slot] != "x2":
            sigma["x2"] = _X[slot]
        for i, j, q in cop.table[g]:
            qq = q.permute_vars(sigma) if sigma else q
            nkey = key[: slot - 1] + (i, j) + key[slot:]
            out._add_term(nkey, shifted * qq)
    return out


def tau(t: TensorElement, slot: int = 1) -> TensorElement:
    """Swap adjacent tensor slots (slot, slot+1) with the Koszul sign."""
    if not 1 <= slot < t.arity:
        raise StructureError("invalid adjacent pair")
    out = TensorElement(t.arity, {}, t.parities)
    va, vb = _X[slot - 1], _X[slot]
    for key, p in t.terms.items():
        a, b = key[slot - 1], key[slot]
        nkey = key[: slot - 1] + (b, a) + key[slot + 1:]
        q = p.permute_vars({va: vb, vb: va})
        if (t.parities[a] * t.parities[b]) & 1:
            q = -q
        out._add_term(nkey, q)
    return out


def zeta(t: TensorElement) -> TensorElement:
    """Cyclic shift of the first three of four slots with the super sign.

    zeta(a (x) b (x) c (x) d) = (-1)^{p(a)(p(b)+p(c))} b (x) c (x) a (x) d,
    the slot variables following their factors.
    """
    if t.arity != 4:
        raise StructureError("zeta acts on arity-4 tensors")
    out = TensorElement(4, {}, t.parities)
    sigma = {"x1": "x3", "x2": "x1", "x3": "x2"}
    for key, p in t.terms.items():
        a, b, c, d = key
        q = p.permute_vars(sigma)
        if (t.parities[a] * (t.parities[b] + t.parities[c])) & 1:
            q = -q
        out._add_term((b, c, a, d), q)
    return out


def zeta_via_tau(t: TensorElement) -> TensorElement:
    """zeta as two adjacent swaps; used to cross-check the closed-form sign."""
    return tau(tau(t, 1), 2)


def check_lie_coalgebra(cop: Coproduct) -> Report:
    """Per dual generator: tau(delta a) = -delta a, and exact co-Jacobi.

    The antisymmetric-image condition of the definition is equivalent, over
    an exact field, to delta landing in the -1 eigenspace of tau.  Co-Jacobi:
    (I (x) delta) delta - (tau (x) I)(I (x) delta) delta = (delta (x) I) delta.
    """
    if cop.kind != "lie":
        raise StructureError("Lie coalgebra axioms apply to Lie kind")
    rep = Report("coalg", cop.name)
    for k in range(cop.rank):
        rep.total += 1
        d1 = apply_delta_slot(TensorElement.seed(k, cop), cop, 1)
        anti = tau(d1, 1) + d1
        a = apply_delta_slot(d1, cop, 2)          # (I x delta) delta
        b = tau(a, 1)                              # (tau x I)(I x delta) delta
        c = apply_delta_slot(d1, cop, 1)           # (delta x I) delta
        cojac = a - b - c
        gname = cop.generators[k].id
        if not anti.is_zero():
            rep.violations.append(Violation((gname, "antisymmetry"), repr(anti)))
        if not cojac.is_zero():
            rep.violations.append(Violation((gname, "co-jacobi"), repr(cojac)))
    return rep


def check_jordan_coalgebra(cop: Coproduct) -> Report:
    """Per dual generator: tau Delta = Delta, and the exact co-Jordan identity

    (1+zeta+zeta^2)(Delta (x) Delta) Delta
        = (1+zeta+zeta^2)(I (x) Delta (x) I)(I (x) Delta) Delta
    """
    if cop.kind != "jordan":
        raise StructureError("Jordan coalgebra axioms apply to Jordan kind")
    rep = Report("cojordan", cop.name)
    for k in range(cop.rank):
        rep.total += 1
        d1 = apply_delta_slot(TensorElement.seed(k, cop), cop, 1)
        gname = cop.generators[k].id
        cocomm = tau(d1, 1) - d1
        if not cocomm.is_zero():
            rep.violations.append(Violation((gname, "co-commutativity"), repr(cocomm)))
        # (Delta x Delta) Delta: expand slot 2 then slot 1
        lhs = apply_delta_slot(apply_delta_slot(d1, cop, 2), cop, 1)
        # (I x Delta x I)(I x Delta) Delta: expand slot 2 twice
        rhs = apply_delta_slot(apply_delta_slot(d1, cop, 2), cop, 2)
        resid = _cyclic_sum(lhs) - _cyclic_sum(rhs)
        if not resid.is_zero():
            rep.violations.append(Violation((gname, "co-jordan"), repr(resid)))
    return rep


def _cyclic_sum(t: TensorElement) -> TensorElement:
    z = zeta(t)
    return t + z + zeta(z)


# ---------------------------------------------------------------------------
# comparison of coproducts (machine-dual vs closed-form transcription)


@dataclass
class DiffLine:
    gen: str
    left: str
    right: str
    got: str
    expected: str

    def __str__(self):
        return (
            f"delta({self.gen}) @ {self.left} (x) {self.right}: "
            f"{self.got}  !=  {self.expected}"
        )


@dataclass
class DiffReport:
    name_a: str
    name_b: str
    lines: List[DiffLine] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.lines

    def summary(self) -> str:
        status = "empty diff" if self.ok else f"{len(self.lines)} differences"
        return f"crosscheck[{self.name_a} vs {self.name_b}]: {status}"

    def to_json(self) -> dict:
        return {
            "a": self.name_a,
            "b": self.name_b,
            "ok": self.ok,
            "diffs": [
                {
                    "gen": l.gen,
                    "left": l.left,
                    "right": l.right,
                    "a_poly": l.got,
                    "b_poly": l.expected,
                }
                for l in self.lines
            ],
        }


def compare(a: Coproduct, b: Coproduct) -> DiffReport:
    """Exact table diff after normalising both sides to merged k -> (i,j) maps."""
    ids_a = [g.id for g in a.generators]
    ids_b = [g.id for g in b.generators]
    if set(ids_a) != set(ids_b):
        raise StructureError(
            f"generator sets differ: {sorted(set(ids_a) ^ set(ids_b))}"
        )
    remap = {i: a.index[gid] for i, gid in enumerate(ids_b)}
    rep = DiffReport(a.name, b.name)
    for k in range(a.rank):
        na = a.normalized(k)
        kb = ids_b.index(ids_a[k])
        nb = {
            (remap[i], remap[j]): q for (i, j), q in b.normalized(kb).items()
        }
        for key in sorted(set(na) | set(nb)):
            qa = na.get(key, MultiPoly.zero())
            qb = nb.get(key, MultiPoly.zero())
            if qa != qb:
                rep.lines.append(
                    DiffLine(
                        ids_a[k],
                        a.generators[key[0]].id,
                        a.generators[key[1]].id,
                        repr(qa),
                        repr(qb),
                    )
                )
    return rep
