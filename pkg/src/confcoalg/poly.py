"""Exact sparse multivariate polynomials over the Gaussian rationals Q(beta).

The coefficient field is Q adjoined an element ``beta`` with ``beta**2 = -1``.
All structure constants in this package live in the fixed eight-variable
alphabet

    lam, mu, nu  -- spectral variables
    d            -- the symbol acting on free module generators
    x1 .. x4     -- tensor-slot variables (x_i tracks d acting on slot i)

A monomial is packed into a single int, eight bits of exponent per variable,
so monomial multiplication is integer addition.  Polynomials are dicts from
packed monomials to nonzero ``Scalar`` coefficients; the zero polynomial is
the empty dict, which makes equality structural and ``is_zero`` O(1).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Tuple

ALPHABET: Tuple[str, ...] = ("lam", "mu", "nu", "d", "x1", "x2", "x3", "x4")
_VAR_INDEX = {name: i for i, name in enumerate(ALPHABET)}
_VAR_SHIFT = {name: 8 * i for i, name in enumerate(ALPHABET)}
_NVARS = len(ALPHABET)


class Scalar:
    """An element re + im*beta of Q(beta), beta**2 = -1, in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def beta() -> "Scalar":
        return Scalar(0, 1)

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __mul__(self, other: "Scalar") -> "Scalar":
        a, b, c, d = self.re, self.im, other.re, other.im
        return Scalar(a * c - b * d, a * d + b * c)

    def inverse(self) -> "Scalar":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("scalar inverse of 0")
        return Scalar(self.re / n, -self.im / n)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Scalar)
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*beta"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*beta)"


ZERO = Scalar(0)
ONE = Scalar(1)


def _pack(exps: Dict[str, int]) -> int:
    key = 0
    for v, e in exps.items():
        if e < 0 or e > 255:
            raise ValueError(f"exponent out of range: {v}**{e}")
        key |= e << _VAR_SHIFT[v]
    return key


def _unpack(key: int) -> Dict[str, int]:
    out = {}
    for v, s in _VAR_SHIFT.items():
        e = (key >> s) & 0xFF
        if e:
            out[v] = e
    return out


def _exp_of(key: int, var: str) -> int:
    return (key >> _VAR_SHIFT[var]) & 0xFF


class MultiPoly:
    """Sparse polynomial; treat instances as immutable values."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[int, Scalar] | None = None):
        self.terms = terms if terms is not None else {}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "MultiPoly":
        return MultiPoly({})

    @staticmethod
    def const(c) -> "MultiPoly":
        sc = c if isinstance(c, Scalar) else Scalar(c)
        return MultiPoly({} if sc.is_zero() else {0: sc})

    @staticmethod
    def var(name: str, exp: int = 1, coeff=1) -> "MultiPoly":
        if name not in _VAR_INDEX:
            raise ValueError(f"unknown variable {name!r}")
        sc = coeff if isinstance(coeff, Scalar) else Scalar(coeff)
        if sc.is_zero():
            return MultiPoly({})
        return MultiPoly({exp << _VAR_SHIFT[name]: sc})

    @staticmethod
    def monomial(exps: Dict[str, int], coeff) -> "MultiPoly":
        sc = coeff if isinstance(coeff, Scalar) else Scalar(coeff)
        if sc.is_zero():
            return MultiPoly({})
        return MultiPoly({_pack(exps): sc})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            prev = out.get(k)
            if prev is None:
                out[k] = c
            else:
                s = prev + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return MultiPoly(out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({k: -c for k, c in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scalar_mul(other)
        if not self.terms or not other.terms:
            return MultiPoly({})
        out: Dict[int, Scalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                c = c1 * c2
                prev = out.get(k)
                if prev is None:
                    out[k] = c
                else:
                    s = prev + c
                    if s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
        return MultiPoly(out)

    __rmul__ = __mul__

    def scalar_mul(self, c) -> "MultiPoly":
        sc = c if isinstance(c, Scalar) else Scalar(c)
        if sc.is_zero():
            return MultiPoly({})
        return MultiPoly({k: v * sc for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((k, c.re, c.im) for k, c in self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- structure ---------------------------------------------------------

    def variables(self) -> set:
        seen = set()
        for k in self.terms:
            for v, s in _VAR_SHIFT.items():
                if (k >> s) & 0xFF:
                    seen.add(v)
        return seen

    def degree_in(self, var: str) -> int:
        if not self.terms:
            return -1
        return max(_exp_of(k, var) for k in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(_unpack(k).values()) for k in self.terms)

    def constant_coeff(self) -> Scalar:
        return self.terms.get(0, ZERO)

    def items(self) -> Iterator[Tuple[Dict[str, int], Scalar]]:
        for k in sorted(self.terms, key=_sort_key):
            yield _unpack(k), self.terms[k]

    # -- substitution ------------------------------------------------------

    def substitute(self, var: str, repl: "MultiPoly") -> "MultiPoly":
        """Image of self under var -> repl; repl must not contain var."""
        if var in repl.variables():
            raise ValueError(f"substitution image contains {var!r}")
        return self._subst(var, repl)

    def subst_general(self, var: str, repl: "MultiPoly") -> "MultiPoly":
        """Like substitute, but repl may itself contain var (single pass)."""
        return self._subst(var, repl)

    def _subst(self, var: str, repl: "MultiPoly") -> "MultiPoly":
        shift = _VAR_SHIFT[var]
        mask = 0xFF << shift
        maxexp = 0
        for k in self.terms:
            e = (k >> shift) & 0xFF
            if e > maxexp:
                maxexp = e
        if maxexp == 0:
            return self
        powers = [MultiPoly({0: ONE})]
        for _ in range(maxexp):
            powers.append(powers[-1] * repl)
        out = MultiPoly({})
        for k, c in self.terms.items():
            e = (k >> shift) & 0xFF
            base = MultiPoly({k & ~mask: c})
            out = out + (base * powers[e] if e else base)
        return out

    def permute_vars(self, sigma: Dict[str, str]) -> "MultiPoly":
        """Relabel variables: the exponent of v moves to sigma[v].

        sigma must be injective on its keys; unmentioned variables stay put.
        """
        img = list(sigma.values())
        if len(set(img)) != len(img):
            raise ValueError("permutation not injective")
        out: Dict[int, Scalar] = {}
        for k, c in self.terms.items():
            nk = k
            moved = 0
            for v, w in sigma.items():
                e = (k >> _VAR_SHIFT[v]) & 0xFF
                if e:
                    nk &= ~(0xFF << _VAR_SHIFT[v])
                    moved |= e << _VAR_SHIFT[w]
            for w in sigma.values():
                if (nk >> _VAR_SHIFT[w]) & 0xFF and w not in sigma:
                    raise ValueError(f"target variable {w!r} already present")
            nk |= moved
            if nk in out:
                raise ValueError("permutation collides")
            out[nk] = c
        return MultiPoly(out)

    def exact_div_by_var(self, var: str) -> "MultiPoly":
        """Divide by var exactly; every term must contain var."""
        shift = _VAR_SHIFT[var]
        out = {}
        for k, c in self.terms.items():
            if not (k >> shift) & 0xFF:
                raise ValueError(f"term not divisible by {var}")
            out[k - (1 << shift)] = c
        return MultiPoly(out)

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact polynomial division; raises ValueError if not a multiple."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead = max(divisor.terms, key=_sort_key)
        lead_c = divisor.terms[lead]
        lead_c_inv = lead_c.inverse()
        rem = dict(self.terms)
        quot: Dict[int, Scalar] = {}
        while rem:
            k = max(rem, key=_sort_key)
            if not _divides(lead, k):
                raise ValueError("polynomial division is not exact")
            qk = _mono_div(k, lead)
            qc = rem[k] * lead_c_inv
            quot[qk] = qc
            for dk, dc in divisor.terms.items():
                t = dk + qk
                prev = rem.get(t)
                s = (prev if prev is not None else ZERO) - dc * qc
                if s.is_zero():
                    if prev is not None:
                        del rem[t]
                else:
                    rem[t] = s
        return MultiPoly(quot)

    # -- display -----------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in sorted(exps.items(), key=lambda t: _VAR_INDEX[t[0]])
            )
            cs = repr(c)
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ")


def _sort_key(k: int) -> Tuple[int, int]:
    # graded, then packed-int lex; only used for canonical orderings
    deg = sum((k >> (8 * i)) & 0xFF for i in range(_NVARS))
    return (deg, k)


def _divides(a: int, b: int) -> bool:
    for i in range(_NVARS):
        if ((a >> (8 * i)) & 0xFF) > ((b >> (8 * i)) & 0xFF):
            return False
    return True


def _mono_div(b: int, a: int) -> int:
    return b - a


# module-level generators, convenient for building structure constants
LAM = MultiPoly.var("lam")
MU = MultiPoly.var("mu")
NU = MultiPoly.var("nu")
D = MultiPoly.var("d")
X1 = MultiPoly.var("x1")
X2 = MultiPoly.var("x2")
X3 = MultiPoly.var("x3")
X4 = MultiPoly.var("x4")
P_ONE = MultiPoly.const(1)
P_ZERO = MultiPoly.zero()
BETA = MultiPoly.const(Scalar.beta())


def poly(c=0) -> MultiPoly:
    """Constant polynomial from an int/Fraction/Scalar."""
    return MultiPoly.const(c)


def random_poly(rng, nvars=4, nterms=4, maxexp=3, scalars=(1, -1, 2, Fraction(1, 2))) -> MultiPoly:
    """Small random polynomial in the first nvars variables (for tests)."""
    out = MultiPoly.zero()
    for _ in range(rng.randrange(nterms + 1)):
        exps = {
            ALPHABET[rng.randrange(nvars)]: rng.randrange(maxexp + 1)
            for _ in range(rng.randrange(1, 3))
        }
        c = rng.choice(scalars)
        if rng.random() < 0.3:
            c = Scalar(c, rng.choice((1, -1)))
        out = out + MultiPoly.monomial(exps, c)
    return out


# -- JSON encoding ----------------------------------------------------------

def poly_to_json(p: MultiPoly) -> list:
    out = []
    for exps, c in p.items():
        out.append(
            {
                "coeff": [
                    c.re.numerator,
                    c.re.denominator,
                    c.im.numerator,
                    c.im.denominator,
                ],
                "exps": {v: e for v, e in sorted(exps.items(), key=lambda t: _VAR_INDEX[t[0]])},
            }
        )
    return out


def poly_from_json(data: Iterable[dict]) -> MultiPoly:
    out = MultiPoly.zero()
    for term in data:
        rn, rd, im_n, im_d = term["coeff"]
        c = Scalar(Fraction(rn, rd), Fraction(im_n, im_d))
        out = out + MultiPoly.monomial({str(v): int(e) for v, e in term["exps"].items()}, c)
    return out
