"""Sign combinatorics of the Grassmann algebra on n odd generators.

Monomials are indexed by subsets of {1..n}, held as bitmasks (bit i-1 set
means generator i occurs).  All products carry the sign (-1)**alpha(I,J)
where alpha counts the adjacent transpositions needed to sort the
juxtaposition I.J; disjointness, complements and derivative signs are all
O(1)-ish bit operations.  Sign errors are the dominant bug class in this
domain, so constructors reject unsorted input instead of sorting it.
"""

from __future__ import annotations

from typing import Iterable, Optional, Tuple

MAX_N = 16


class IndexSet:
    """Strictly increasing index set inside a fixed ambient {1..n}."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, members: Iterable[int] = ()):
        # n = 0 (only the empty monomial) is needed by the W_0/K_0 families
        if not 0 <= n <= MAX_N:
            raise ValueError(f"ambient dimension must be in 0..{MAX_N}, got {n}")
        self.n = n
        mask = 0
        prev = 0
        for i in members:
            if not 1 <= i <= n:
                raise ValueError(f"index {i} outside 1..{n}")
            if i <= prev:
                raise ValueError(f"indices not strictly increasing at {i}")
            mask |= 1 << (i - 1)
            prev = i
        self.mask = mask

    @staticmethod
    def from_mask(n: int, mask: int) -> "IndexSet":
        s = IndexSet(n)
        if mask >> n:
            raise ValueError("mask exceeds ambient dimension")
        s.mask = mask
        return s

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if self.mask >> i & 1)

    @property
    def degree(self) -> int:
        return bin(self.mask).count("1")

    @property
    def parity(self) -> int:
        return self.degree & 1

    def __contains__(self, i: int) -> bool:
        return 1 <= i <= self.n and bool(self.mask >> (i - 1) & 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IndexSet)
            and self.n == other.n
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((self.n, self.mask))

    def __repr__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


class SignedMonomial:
    """A signed Grassmann monomial; the zero product is None, never sign 0."""

    __slots__ = ("sign", "idxset")

    def __init__(self, sign: int, idxset: IndexSet):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.sign = sign
        self.idxset = idxset

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SignedMonomial)
            and self.sign == other.sign
            and self.idxset == other.idxset
        )

    def __hash__(self):
        return hash((self.sign, self.idxset))

    def __repr__(self):
        return f"{'+' if self.sign > 0 else '-'}xi{self.idxset}"


def _check_ambient(a: IndexSet, b: IndexSet):
    if a.n != b.n:
        raise ValueError("ambient dimensions differ")


def alpha(I: IndexSet, J: IndexSet) -> int:
    """Number of adjacent transpositions sorting the juxtaposition I.J.

    Equals the inversion count #{(i,j): i in I, j in J, j < i}; requires
    I and J disjoint.
    """
    _check_ambient(I, J)
    if I.mask & J.mask:
        raise ValueError("alpha undefined for overlapping sets")
    count = 0
    jm = J.mask
    im = I.mask
    for b in range(I.n):
        if im >> b & 1:
            count += bin(jm & ((1 << b) - 1)).count("1")
    return count


def mul(I: IndexSet, J: IndexSet) -> Optional[SignedMonomial]:
    """xi_I * xi_J: None when the sets overlap, else the signed union."""
    _check_ambient(I, J)
    if I.mask & J.mask:
        return None
    sign = -1 if alpha(I, J) & 1 else 1
    return SignedMonomial(sign, IndexSet.from_mask(I.n, I.mask | J.mask))


def eps(i: int, J: IndexSet) -> int:
    """Count of members of J strictly below i; i must belong to J."""
    if i not in J:
        raise ValueError(f"{i} not a member of {J}")
    return bin(J.mask & ((1 << (i - 1)) - 1)).count("1")


def derive(i: int, J: IndexSet) -> Optional[SignedMonomial]:
    """The odd derivation d_i applied to xi_J."""
    if not 1 <= i <= J.n or i not in J:
        return None
    sign = -1 if eps(i, J) & 1 else 1
    return SignedMonomial(sign, IndexSet.from_mask(J.n, J.mask & ~(1 << (i - 1))))


def complement(I: IndexSet) -> IndexSet:
    return IndexSet.from_mask(I.n, ~I.mask & ((1 << I.n) - 1))


def hodge(I: IndexSet) -> SignedMonomial:
    """Signed complement monomial, normalised so xi_I * hodge(I) = xi_1..xi_n."""
    Ic = complement(I)
    sign = -1 if alpha(I, Ic) & 1 else 1
    return SignedMonomial(sign, Ic)


def subsets(n: int):
    """All IndexSets of {1..n} in mask order (the empty set first)."""
    for mask in range(1 << n):
        yield IndexSet.from_mask(n, mask)
