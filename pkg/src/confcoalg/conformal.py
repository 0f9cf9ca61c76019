"""Finite free conformal (super)algebras as exact structure-constant tables.

A ``LambdaStructure`` stores, for every ordered generator pair (i, j), the
polynomials P^{ij}_k(lam, d) of

    [a_i lam a_j] = sum_k P^{ij}_k(lam, d) a_k.

Everything downstream (axiom checking, dualization, the closed-form
cross-checks) works on these tables with exact Q(beta) arithmetic, so a
"pass" always means an identically-zero residual.

Spectral substitution convention: on a free C[d]-module the action of d on
values and the symbol d inside coefficient polynomials agree, so shifted
evaluations such as b_{-lam-d} a are literal polynomial substitutions.
Axioms are checked on generator tuples only; sesquilinearity extends them
to arbitrary elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import ALPHABET, D, LAM, MU, NU, MultiPoly, P_ONE, Scalar

LIE = "lie"
JORDAN = "jordan"

SPECTRAL_VARS = ("lam", "mu", "nu", "x1", "x2", "x3", "x4")


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    id: str
    parity: int
    latex: Optional[str] = None


class ConformalElement:
    """Element of a free conformal algebra: generator index -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[int, MultiPoly]] = None):
        self.terms = {}
        if terms:
            for g, p in terms.items():
                if not p.is_zero():
                    self.terms[g] = p

    @staticmethod
    def gen(i: int) -> "ConformalElement":
        return ConformalElement({i: P_ONE})

    def __add__(self, other: "ConformalElement") -> "ConformalElement":
        out = dict(self.terms)
        for g, p in other.terms.items():
            q = out.get(g)
            s = p if q is None else q + p
            if s.is_zero():
                out.pop(g, None)
            else:
                out[g] = s
        return ConformalElement(out)

    def __sub__(self, other: "ConformalElement") -> "ConformalElement":
        return self + (-other)

    def __neg__(self) -> "ConformalElement":
        return ConformalElement({g: -p for g, p in self.terms.items()})

    def scale(self, p: MultiPoly) -> "ConformalElement":
        return ConformalElement({g: p * q for g, q in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, ConformalElement) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({p})*<{g}>" for g, p in sorted(self.terms.items()))

    def map_coeffs(self, fn) -> "ConformalElement":
        return ConformalElement({g: fn(p) for g, p in self.terms.items()})

    def pretty(self, struct: "LambdaStructure") -> str:
        if not self.terms:
            return "0"
        names = struct.generators
        return " + ".join(
            f"({p})*{names[g].id}" for g, p in sorted(self.terms.items())
        )


class LambdaStructure:
    """Structure-constant table of a finite free conformal (super)algebra."""

    def __init__(
        self,
        kind: str,
        generators: Sequence[Generator],
        table: Dict[Tuple[int, int], List[Tuple[int, MultiPoly]]],
        name: str = "",
        meta: Optional[dict] = None,
        validate: bool = True,
    ):
        if kind not in (LIE, JORDAN):
            raise StructureError(f"unknown kind {kind!r}")
        self.kind = kind
        self.generators = list(generators)
        self.name = name
        self.meta = meta or {}
        ids = [g.id for g in self.generators]
        if len(set(ids)) != len(ids):
            raise StructureError("generator ids not unique")
        self.index = {g.id: i for i, g in enumerate(self.generators)}
        n = len(self.generators)
        self.table = {}
        for i in range(n):
            for j in range(n):
                merged: Dict[int, MultiPoly] = {}
                for k, p in table.get((i, j), []):
                    prev = merged.get(k)
                    s = p if prev is None else prev + p
                    if s.is_zero():
                        merged.pop(k, None)
                    else:
                        merged[k] = s
                self.table[(i, j)] = sorted(merged.items())
        if validate:
            self.validate()

    @property
    def rank(self) -> int:
        return len(self.generators)

    def parity(self, i: int) -> int:
        return self.generators[i].parity

    def validate(self):
        """Parity additivity and coefficient-variable discipline."""
        for (i, j), entries in self.table.items():
            pij = (self.parity(i) + self.parity(j)) & 1
            for k, p in entries:
                if self.parity(k) != pij:
                    raise StructureError(
                        f"parity violation in ({self.generators[i].id},"
                        f"{self.generators[j].id}) -> {self.generators[k].id}"
                    )
                bad = p.variables() - {"lam", "d"}
                if bad:
                    raise StructureError(f"table entry uses variables {bad}")

    def entry(self, i: int, j: int) -> "ConformalElement":
        return ConformalElement({k: p for k, p in self.table[(i, j)]})

    def pair_element(self, i: int, j: int, svar: str) -> "ConformalElement":
        """[a_i svar a_j] with the spectral variable renamed from lam."""
        if svar == "lam":
            return self.entry(i, j)
        out = {}
        for k, p in self.table[(i, j)]:
            out[k] = p.permute_vars({"lam": svar}) if "lam" in p.variables() else p
        return ConformalElement(out)

    def with_entry(self, i: int, j: int, value: "ConformalElement") -> "LambdaStructure":
        """Copy of the table with one (i, j) entry replaced (negative controls)."""
        table = {key: list(v) for key, v in self.table.items()}
        table[(i, j)] = sorted(value.terms.items())
        return LambdaStructure(
            self.kind, self.generators, table, name=self.name + "?", meta=dict(self.meta),
            validate=False,
        )


def bracket(
    S: LambdaStructure, x: ConformalElement, y: ConformalElement, svar: str
) -> ConformalElement:
    """Sesquilinear extension of the table: [p(d)a svar q(d)b] = p(-svar) q(svar+d) [a svar b].

    Coefficients of x and y may involve other spectral variables, which pass
    through untouched; svar itself must not occur in them.
    """
    if svar not in SPECTRAL_VARS:
        raise StructureError(f"invalid spectral variable {svar!r}")
    sv = MultiPoly.var(svar)
    out = ConformalElement()
    for i, p in x.terms.items():
        if svar in p.variables():
            raise StructureError(f"left coefficient already uses {svar}")
        pl = p.substitute("d", -sv)
        for j, q in y.terms.items():
            if svar in q.variables():
                raise StructureError(f"right coefficient already uses {svar}")
            qr = q.subst_general("d", sv + D)
            c = pl * qr
            if c.is_zero():
                continue
            acc = {}
            for k, P in S.table[(i, j)]:
                Pk = P if svar == "lam" else (
                    P.permute_vars({"lam": svar}) if "lam" in P.variables() else P
                )
                prev = acc.get(k)
                acc[k] = Pk if prev is None else prev + Pk
            out = out + ConformalElement({k: c * Pk for k, Pk in acc.items()})
    return out


def shift_spectral(
    x: ConformalElement, svar: str, image: MultiPoly
) -> ConformalElement:
    """Literal substitution svar -> image in every coefficient."""
    return x.map_coeffs(lambda p: p.subst_general(svar, image))


def element_parity(S: LambdaStructure, x: ConformalElement) -> int:
    """Parity of a homogeneous element; raises on mixed parities."""
    ps = {S.parity(g) for g in x.terms}
    if len(ps) > 1:
        raise StructureError("element is not parity-homogeneous")
    return ps.pop() if ps else 0


# ---------------------------------------------------------------------------
# axiom checkers


@dataclass
class Violation:
    where: Tuple[str, ...]
    residual: str


@dataclass
class Report:
    check: str
    structure: str
    total: int = 0
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, where, residual_elem, S):
        self.violations.append(Violation(tuple(where), residual_elem.pretty(S)))

    def summary(self) -> str:
        status = "pass" if self.ok else f"FAIL ({len(self.violations)} violations)"
        return f"{self.check}[{self.structure}]: {status} over {self.total} tuples"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "structure": self.structure,
            "ok": self.ok,
            "tuples": self.total,
            "violations": [
                {"where": list(v.where), "residual": v.residual}
                for v in self.violations
            ],
        }


def _gen_names(S: LambdaStructure, idxs) -> Tuple[str, ...]:
    return tuple(S.generators[i].id for i in idxs)


def check_skew(S: LambdaStructure) -> Report:
    """[a lam b] = -(-1)^{p(a)p(b)} [b -lam-d a], exactly, per generator pair."""
    if S.kind != LIE:
        raise StructureError("skew-symmetry applies to Lie kind")
    rep = Report("skew", S.name)
    minus_lam_d = -LAM - D
    for i in range(S.rank):
        for j in range(S.rank):
            rep.total += 1
            lhs = S.entry(i, j)
            flipped = shift_spectral(S.pair_element(j, i, "mu"), "mu", minus_lam_d)
            sign = -1 if (S.parity(i) * S.parity(j)) & 1 else 1
            resid = lhs + flipped.scale(MultiPoly.const(sign))
            if not resid.is_zero():
                rep.add(_gen_names(S, (i, j)), resid, S)
    return rep


def _jacobi_residual(S: LambdaStructure, i: int, j: int, k: int) -> ConformalElement:
    ei, ej, ek = map(ConformalElement.gen, (i, j, k))
    lhs = bracket(S, ei, bracket(S, ej, ek, "mu"), "lam")
    inner = bracket(S, ei, ej, "lam")
    r1 = shift_spectral(bracket(S, inner, ek, "nu"), "nu", LAM + MU)
    r2 = bracket(S, ej, bracket(S, ei, ek, "lam"), "mu")
    sign = -1 if (S.parity(i) * S.parity(j)) & 1 else 1
    return lhs - r1 - r2.scale(MultiPoly.const(sign))


def check_jacobi(S: LambdaStructure, workers: int = 1) -> Report:
    """[a lam [b mu c]] = [[a lam b] lam+mu c] + (-1)^{p(a)p(b)} [b mu [a lam c]]."""
    if S.kind != LIE:
        raise StructureError("Jacobi applies to Lie kind")
    rep = Report("jacobi", S.name)
    triples = list(itertools.product(range(S.rank), repeat=3))
    rep.total = len(triples)
    for where, resid in _run_tuples(S, triples, _jacobi_residual, workers):
        rep.violations.append(Violation(_gen_names(S, where), resid.pretty(S)))
    return rep


def check_jordan_comm(S: LambdaStructure) -> Report:
    """a lam b = (-1)^{p(a)p(b)} b_{-lam-d} a, exactly, per generator pair."""
    if S.kind != JORDAN:
        raise StructureError("commutativity applies to Jordan kind")
    rep = Report("jordan-comm", S.name)
    minus_lam_d = -LAM - D
    for i in range(S.rank):
        for j in range(S.rank):
            rep.total += 1
            lhs = S.entry(i, j)
            flipped = shift_spectral(S.pair_element(j, i, "mu"), "mu", minus_lam_d)
            sign = -1 if (S.parity(i) * S.parity(j)) & 1 else 1
            resid = lhs - flipped.scale(MultiPoly.const(sign))
            if not resid.is_zero():
                rep.add(_gen_names(S, (i, j)), resid, S)
    return rep


PRINTED = "printed"
CONSISTENT = "consistent"


def _jordan_residual(
    S: LambdaStructure, a: int, b: int, c: int, d: int, variant: str
) -> ConformalElement:
    """Six-term Jordan identity residual LHS - RHS for one generator quadruple.

    Terms (sign factors s1 = (-1)^{|a||c|}, s2 = (-1)^{|a||b|}, s3 = (-1)^{|b||c|}):

        s1 a_lam((b_mu c)_nu d) + s2 b_mu((c_{nu-mu} a)_{T} d)
            + s3 c_{nu-mu}((a_{-mu-d} b)_{lam+mu} d)
      = s1 (a_{-mu-d} b)_{lam+mu}(c_{nu-mu} d) + s2 (b_mu c)_nu(a_lam d)
            + s3 (c_{nu-mu} a)_{lam+nu-mu}(b_mu d)

    The subscript T of the second term is where the two variants differ:
    the printed form has lam-mu, which breaks the conservation of total
    spectral weight lam+nu satisfied by every other term (substituting
    d -> d'+d in the last slot rescales terms by (total + d)); the
    consistent variant uses lam+nu-mu, the unique total-conserving choice,
    which also matches the subscript of the sixth term sharing the same
    (c, a)-product.  Intermediate evaluations use scratch slot variables
    x1..x3, substituted away before returning.
    """
    ea, eb, ec, ed = map(ConformalElement.gen, (a, b, c, d))
    pa, pb, pc, pd = (S.parity(g) for g in (a, b, c, d))
    s1 = MultiPoly.const(-1 if (pa * pc) & 1 else 1)
    s2 = MultiPoly.const(-1 if (pa * pb) & 1 else 1)
    s3 = MultiPoly.const(-1 if (pb * pc) & 1 else 1)
    x1, x2, x3 = (MultiPoly.var(v) for v in ("x1", "x2", "x3"))
    nu_mu = NU - MU
    lam_mu_sub = (LAM + NU - MU) if variant == CONSISTENT else (LAM - MU)

    # T1 = a_lam((b_mu c)_nu d)
    t1 = bracket(S, ea, bracket(S, bracket(S, eb, ec, "mu"), ed, "nu"), "lam")

    # T2 = b_mu((c_{nu-mu} a)_{T} d)
    u = bracket(S, ec, ea, "x1")
    v = bracket(S, u, ed, "x2")
    t2 = bracket(S, eb, v, "mu")
    t2 = shift_spectral(shift_spectral(t2, "x1", nu_mu), "x2", lam_mu_sub)

    # T3 = c_{nu-mu}((a_{-mu-d} b)_{lam+mu} d)
    u = shift_spectral(bracket(S, ea, eb, "x1"), "x1", -MU - D)
    v = shift_spectral(bracket(S, u, ed, "x2"), "x2", LAM + MU)
    t3 = shift_spectral(bracket(S, ec, v, "x3"), "x3", nu_mu)

    # T4 = (a_{-mu-d} b)_{lam+mu}(c_{nu-mu} d)
    u = shift_spectral(bracket(S, ea, eb, "x1"), "x1", -MU - D)
    w = shift_spectral(bracket(S, ec, ed, "x1"), "x1", nu_mu)
    t4 = shift_spectral(bracket(S, u, w, "x2"), "x2", LAM + MU)

    # T5 = (b_mu c)_nu(a_lam d)
    t5 = bracket(S, bracket(S, eb, ec, "mu"), bracket(S, ea, ed, "lam"), "nu")

    # T6 = (c_{nu-mu} a)_{lam+nu-mu}(b_mu d)
    u = shift_spectral(bracket(S, ec, ea, "x1"), "x1", nu_mu)
    t6 = shift_spectral(bracket(S, u, bracket(S, eb, ed, "mu"), "x2"), "x2", LAM + NU - MU)

    lhs = t1.scale(s1) + t2.scale(s2) + t3.scale(s3)
    rhs = t4.scale(s1) + t5.scale(s2) + t6.scale(s3)
    return lhs - rhs


def check_jordan_identity(
    S: LambdaStructure, variant: str = CONSISTENT, workers: int = 1
) -> Report:
    """Exact six-term Jordan identity over all generator quadruples.

    variant "consistent" (default) uses the spectral-weight-conserving
    subscript lam+nu-mu in the second term; variant "printed" uses lam-mu
    and exists so that a failure can be reported with its minimal failing
    quadruple and residual instead of being silently papered over.
    """
    if S.kind != JORDAN:
        raise StructureError("Jordan identity applies to Jordan kind")
    if variant not in (PRINTED, CONSISTENT):
        raise StructureError(f"unknown variant {variant!r}")
    rep = Report(f"jordan-id[{variant}]", S.name)
    quads = list(itertools.product(range(S.rank), repeat=4))
    rep.total = len(quads)
    fn = lambda S, *q: _jordan_residual(S, *q, variant)  # noqa: E731
    for where, resid in _run_tuples(S, quads, fn, workers, _variant=variant):
        rep.violations.append(Violation(_gen_names(S, where), resid.pretty(S)))
    return rep


# -- worker plumbing ---------------------------------------------------------

def _chunk_jacobi(args):
    S, chunk = args
    out = []
    for t in chunk:
        r = _jacobi_residual(S, *t)
        if not r.is_zero():
            out.append((t, r))
    return out


def _chunk_jordan(args):
    S, chunk, variant = args
    out = []
    for t in chunk:
        r = _jordan_residual(S, *t, variant)
        if not r.is_zero():
            out.append((t, r))
    return out


def _run_tuples(S, tuples, fn, workers, _variant=None):
    """Evaluate fn over index tuples; violations in deterministic tuple order."""
    if workers <= 1:
        for t in tuples:
            r = fn(S, *t)
            if not r.is_zero():
                yield t, r
        return
    from concurrent.futures import ProcessPoolExecutor

    nchunks = workers * 4
    chunks = [tuples[i::nchunks] for i in range(nchunks)]
    runner = _chunk_jacobi if _variant is None else _chunk_jordan
    payload = [
        (S, c) if _variant is None else (S, c, _variant) for c in chunks if c
    ]
    results = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(runner, payload):
            results.extend(part)
    results.sort(key=lambda pair: pair[0])
    yield from results


# ---------------------------------------------------------------------------
# kernel of a C[d]-module map


class ModuleMap:
    """C[d]-linear map between free modules, entries polynomial in d only."""

    def __init__(self, source: Sequence[str], target: Sequence[str],
                 entries: Dict[Tuple[int, int], MultiPoly]):
        self.source = list(source)
        self.target = list(target)
        self.entries = {}
        for (ti, si), p in entries.items():
            if p.is_zero():
                continue
            if p.variables() - {"d"}:
                raise StructureError("module map entries must live in C[d]")
            self.entries[(ti, si)] = p

    def apply(self, coords: Dict[int, MultiPoly]) -> Dict[int, MultiPoly]:
        out: Dict[int, MultiPoly] = {}
        for (ti, si), p in self.entries.items():
            c = coords.get(si)
            if c is None:
                continue
            add = p * c
            prev = out.get(ti)
            s = add if prev is None else prev + add
            if s.is_zero():
                out.pop(ti, None)
            else:
                out[ti] = s
        return out


def _deg_d(p: MultiPoly) -> int:
    return p.degree_in("d")


def _divmod_d(a: MultiPoly, b: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    """Univariate division in Q(beta)[d]: a = q*b + r with deg r < deg b."""
    q = MultiPoly.zero()
    r = a
    db = _deg_d(b)
    lead_b = b.terms.get(db << 24) if db >= 0 else None  # d is variable #3
    while not r.is_zero() and _deg_d(r) >= db:
        dr = _deg_d(r)
        lead_r = r.terms.get(dr << 24)
        if lead_r is None:
            raise StructureError("non-univariate entry in kernel elimination")
        step = MultiPoly.monomial({"d": dr - db}, lead_r * lead_b.inverse())
        q = q + step
        r = r - step * b
    return q, r


def kernel_basis(M: ModuleMap) -> List[Dict[int, MultiPoly]]:
    """Free basis of ker M over Q(beta)[d], by tracked column elimination.

    Unimodular column operations reduce M; columns that become zero give the
    kernel, read off from the tracking matrix.  Returned as coordinate dicts
    over the source basis, content-normalised.
    """
    nrows = len(M.target)
    ncols = len(M.source)
    cols = []
    for j in range(ncols):
        col = {}
        for i in range(nrows):
            p = M.entries.get((i, j))
            if p is not None:
                col[i] = p
        cols.append(col)
    track = [{j: P_ONE} for j in range(ncols)]

    def combine(dst, src, q):
        """dst -= q*src, on both the matrix column and its tracker."""
        for store in (cols, track):
            d_, s_ = store[dst], store[src]
            for r, p in s_.items():
                add = q * p
                prev = d_.get(r)
                s = -add if prev is None else prev - add
                if s.is_zero():
                    d_.pop(r, None)
                else:
                    d_[r] = s

    active = list(range(ncols))
    for row in range(nrows):
        live = [j for j in active if row in cols[j]]
        while len(live) > 1:
            live.sort(key=lambda j: _deg_d(cols[j][row]))
            pivot, other = live[0], live[1]
            q, _ = _divmod_d(cols[other][row], cols[pivot][row])
            combine(other, pivot, q)
            live = [j for j in active if row in cols[j]]
        if live:
            active.remove(live[0])

    basis = []
    for j in range(ncols):
        if j in active and not cols[j]:
            coords = _normalise_content(track[j])
            basis.append(coords)
    return basis


def _normalise_content(coords: Dict[int, MultiPoly]) -> Dict[int, MultiPoly]:
    """Divide through by the rational content and fix the leading sign."""
    from fractions import Fraction

    nums = []
    for p in coords.values():
        for c in p.terms.values():
            nums.extend(x for x in (c.re, c.im) if x != 0)
    if not nums:
        return coords
    from math import gcd

    g = 0
    l = 1
    for f in nums:
        g = gcd(g, abs(f.numerator))
        l = l * f.denominator // gcd(l, f.denominator)
    scale = Scalar(Fraction(l, g))
    first = min(coords)
    lead = coords[first].terms[max(coords[first].terms)]
    if (lead * scale).re < 0 or ((lead * scale).re == 0 and (lead * scale).im < 0):
        scale = -scale
    return {g_: p.scalar_mul(scale) for g_, p in coords.items()}
