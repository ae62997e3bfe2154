"""Homomorphisms from F_d onto computable quotients.

Three representation variants, all exposing the same group-context
protocol (identity / multiply / invert / apply_letter / project):

  PermRep     a finite quotient Q given by the regular action of Q on its
              own elements; elements are integer indices, identity is 0.
              Produced by Todd-Coxeter coset enumeration over a relator
              list, or by closing a set of explicit point permutations
              into the group they generate.
  AbelianRep  the abelianization Z^d; elements are exponent-sum vectors.
  TrivialRep  the one-element quotient.

The coset table is a flat 2d-column array: column 2(i-1) is generator i,
column 2(i-1)+1 its inverse, so the column of an inverse letter is
col ^ 1.
"""

from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import CosetLimitError, ParameterError, RankMismatchError
from .measures import Distribution
from .words import FreeGroup, Word, alphabet, cyclically_reduce, reduce_letters

DEFAULT_MAX_COSETS = 10**6


def letter_col(letter: int) -> int:
    return ((abs(letter) - 1) << 1) | (letter < 0)


def col_letter(col: int) -> int:
    idx = (col >> 1) + 1
    return -idx if col & 1 else idx


class PermRep:
    """Regular action of a finite quotient of F_d on its elements."""

    __slots__ = ("rank", "size", "_table", "_rep_words", "point_images")

    def __init__(self, rank: int, rows, point_images=None):
        self.rank = rank
        self.size = len(rows)
        ncols = 2 * rank
        flat = array("q")
        for row in rows:
            if len(row) != ncols:
                raise ParameterError("malformed coset table row")
            flat.extend(row)
        self._table = flat
        self._rep_words = None
        self.point_images = point_images

    @property
    def identity(self) -> int:
        return 0

    def validate_element(self, q) -> None:
        if not isinstance(q, int) or not 0 <= q < self.size:
            raise ParameterError(f"{q!r} is not an element index (size {self.size})")

    def apply_col(self, q: int, col: int) -> int:
        return self._table[q * 2 * self.rank + col]

    def apply_letter(self, q: int, letter: int) -> int:
        return self._table[q * 2 * self.rank + letter_col(letter)]

    def project(self, w: Word) -> int:
        if w.rank != self.rank:
            raise RankMismatchError(f"rank mismatch: {w.rank} vs {self.rank}")
        q = 0
        for l in w.letters:
            q = self.apply_letter(q, l)
        return q

    def _ensure_rep_words(self):
        # shortest representative word per element, BFS in canonical order
        if self._rep_words is not None:
            return
        reps: list[tuple[int, ...] | None] = [None] * self.size
        reps[0] = ()
        queue = deque([0])
        letters = alphabet(self.rank)
        while queue:
            q = queue.popleft()
            base = reps[q]
            for l in letters:
                t = self.apply_letter(q, l)
                if reps[t] is None:
                    reps[t] = base + (l,)
                    queue.append(t)
        if any(r is None for r in reps):
            raise ParameterError("coset table is not transitive")
        self._rep_words = reps

    def rep_word(self, q: int) -> Word:
        """A shortest word mapping the identity to element q."""
        self._ensure_rep_words()
        return reduce_letters(self._rep_words[q], self.rank)

    def multiply(self, q1: int, q2: int) -> int:
        self._ensure_rep_words()
        q = q1
        for l in self._rep_words[q2]:
            q = self.apply_letter(q, l)
        return q

    def invert(self, q: int) -> int:
        self._ensure_rep_words()
        r = 0
        for l in reversed(self._rep_words[q]):
            r = self.apply_letter(r, -l)
        return r

    def generator_permutation(self, gen: int) -> tuple[int, ...]:
        """Image of generator `gen` (1-based) as a permutation of elements."""
        col = letter_col(gen)
        return tuple(self.apply_col(q, col) for q in range(self.size))

    def cycle_types(self) -> tuple[tuple[int, ...], ...]:
        """Cycle type of each generator's permutation, for relabeling-
        invariant comparison of enumerations."""
        out = []
        for gen in range(1, self.rank + 1):
            perm = self.generator_permutation(gen)
            seen = [False] * self.size
            lens = []
            for s in range(self.size):
                if not seen[s]:
                    n, t = 0, s
                    while not seen[t]:
                        seen[t] = True
                        t = perm[t]
                        n += 1
                    lens.append(n)
            out.append(tuple(sorted(lens)))
        return tuple(out)

    def element_label(self, q: int) -> str:
        return str(q)

    def describe(self) -> str:
        return f"perm-quotient of size {self.size}"

    def __repr__(self):
        return f"PermRep(rank={self.rank}, size={self.size})"


@dataclass(frozen=True, slots=True)
class AbelianRep:
    """Abelianization F_d -> Z^d; elements are integer vectors."""

    rank: int

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def validate_element(self, q) -> None:
        if (
            not isinstance(q, tuple)
            or len(q) != self.rank
            or not all(isinstance(c, int) for c in q)
        ):
            raise ParameterError(f"{q!r} is not a Z^{self.rank} vector")

    def apply_letter(self, q, letter: int):
        i = abs(letter) - 1
        return q[:i] + (q[i] + (1 if letter > 0 else -1),) + q[i + 1 :]

    def project(self, w: Word):
        if w.rank != self.rank:
            raise RankMismatchError(f"rank mismatch: {w.rank} vs {self.rank}")
        v = [0] * self.rank
        for l in w.letters:
            v[abs(l) - 1] += 1 if l > 0 else -1
        return tuple(v)

    def multiply(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        return tuple(-x for x in a)

    def element_label(self, q) -> str:
        return str(q)

    def describe(self) -> str:
        return f"abelianization Z^{self.rank}"


@dataclass(frozen=True, slots=True)
class TrivialRep:
    """The one-element quotient; the kernel is all of F_d."""

    rank: int
    size = 1

    @property
    def identity(self) -> int:
        return 0

    def validate_element(self, q) -> None:
        if q != 0:
            raise ParameterError("trivial quotient has a single element 0")

    def apply_letter(self, q, letter: int) -> int:
        return 0

    def apply_col(self, q, col: int) -> int:
        return 0

    def project(self, w: Word) -> int:
        if w.rank != self.rank:
            raise RankMismatchError(f"rank mismatch: {w.rank} vs {self.rank}")
        return 0

    def multiply(self, a, b):
        return 0

    def invert(self, a):
        return 0

    def element_label(self, q) -> str:
        return "0"

    def describe(self) -> str:
        return "trivial quotient"


QuotientRep = PermRep | AbelianRep | TrivialRep


def _validate_relators(d: int, relators) -> list[list[int]]:
    rels = []
    for r in relators:
        if not isinstance(r, Word):
            raise ParameterError(f"relator {r!r} is not a Word")
        if r.rank != d:
            raise RankMismatchError(f"relator rank {r.rank} differs from {d}")
        c = cyclically_reduce(r)
        if len(c) == 0:
            raise ParameterError("empty relator")
        rels.append([letter_col(l) for l in c.letters])
    return rels


def coset_enumerate(d: int, relators, max_cosets: int = DEFAULT_MAX_COSETS) -> PermRep:
    """Todd-Coxeter enumeration of the quotient presented by the relators.

    HLT strategy: scan every relator at every live coset in creation
    order, filling undefined entries as needed, then fill the rest of the
    row; coincidences are processed to completion as they appear, with
    the smaller coset number surviving.  Deductions from closing scans
    are recorded in both table directions immediately.  The cap counts
    rows ever defined; exceeding it raises CosetLimitError, the normal
    outcome for an infinite quotient.
    """
    if d < 2:
        raise ParameterError(f"rank must be >= 2, got {d}")
    if max_cosets < 1:
        raise ParameterError("max_cosets must be >= 1")
    rels = _validate_relators(d, relators)
    ncols = 2 * d

    table: list[list[int | None]] = [[None] * ncols]
    p = [0]  # union-find; p[i] <= i, minimum label survives

    def rep(k: int) -> int:
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def define(a: int, col: int) -> int:
        if len(table) >= max_cosets:
            raise CosetLimitError(
                f"coset limit exceeded (max_cosets={max_cosets})"
            )
        b = len(table)
        table.append([None] * ncols)
        p.append(b)
        table[a][col] = b
        table[b][col ^ 1] = a
        return b

    def coincidence(a: int, b: int) -> None:
        queue: deque[int] = deque()

        def merge(u: int, v: int) -> None:
            u, v = rep(u), rep(v)
            if u != v:
                if u > v:
                    u, v = v, u
                p[v] = u
                queue.append(v)

        merge(a, b)
        while queue:
            dead = queue.popleft()
            row = table[dead]
            for col in range(ncols):
                delta = row[col]
                if delta is None:
                    continue
                # clear the mirror edge if it still points at the dead coset
                if table[delta][col ^ 1] == dead:
                    table[delta][col ^ 1] = None
                mu, nu = rep(dead), rep(delta)
                if table[mu][col] is not None:
                    merge(nu, table[mu][col])
                elif table[nu][col ^ 1] is not None:
                    merge(mu, table[nu][col ^ 1])
                else:
                    table[mu][col] = nu
                    table[nu][col ^ 1] = mu

    def scan_and_fill(alpha: int, w: list[int]) -> None:
        f, i = alpha, 0
        b, j = alpha, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] is not None:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                # deduction closing the scan, recorded both ways
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            define(f, w[i])

    alpha = 0
    while alpha < len(table):
        if rep(alpha) == alpha:
            for w in rels:
                scan_and_fill(alpha, w)
                if rep(alpha) != alpha:
                    break
            if rep(alpha) == alpha:
                for col in range(ncols):
                    if table[alpha][col] is None:
                        define(alpha, col)
        alpha += 1

    live = [c for c in range(len(table)) if rep(c) == c]
    index = {c: k for k, c in enumerate(live)}
    rows = []
    for c in live:
        row = []
        for col in range(ncols):
            v = table[c][col]
            if v is None:
                raise ParameterError("incomplete coset table after enumeration")
            row.append(index[rep(v)])
        rows.append(row)
    out = PermRep(d, rows)

    # every relator must act trivially on every coset
    for w in rels:
        for q in range(out.size):
            t = q
            for col in w:
                t = out.apply_col(t, col)
            if t != q:
                raise ParameterError("relator fails to close on the final table")
    return out


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # apply p, then q
    return tuple(q[x] for x in p)


def _invert_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def from_point_permutations(
    d: int, images: dict[int, tuple[int, ...]], max_elements: int = DEFAULT_MAX_COSETS
) -> PermRep:
    """PermRep for the quotient F_d -> <given point permutations>.

    `images` maps generator index (1-based) to a permutation of
    {0..m-1}; missing generators act as the identity.  The returned rep
    is the regular action of the generated group, closed by BFS, so the
    kernel is the kernel of the point homomorphism even when the point
    action is not regular.
    """
    if d < 1:
        raise ParameterError("rank must be >= 1")
    ms = {len(perm) for perm in images.values()}
    if len(ms) > 1:
        raise ParameterError("point permutations act on different point counts")
    m = ms.pop() if ms else 1
    ident = tuple(range(m))
    by_letter: dict[int, tuple[int, ...]] = {}
    for gen in range(1, d + 1):
        perm = tuple(images.get(gen, ident))
        if sorted(perm) != list(range(m)):
            raise ParameterError(f"generator {gen} image is not a permutation")
        by_letter[gen] = perm
        by_letter[-gen] = _invert_perm(perm)

    letters = alphabet(d)
    order = [ident]
    idx = {ident: 0}
    rows: list[list[int]] = []
    at = 0
    while at < len(order):
        base = order[at]
        row = []
        for l in letters:
            prod = _compose(base, by_letter[l])
            k = idx.get(prod)
            if k is None:
                if len(order) >= max_elements:
                    raise CosetLimitError(
                        f"generated permutation group exceeds {max_elements} elements"
                    )
                k = len(order)
                idx[prod] = k
                order.append(prod)
            row.append(k)
        rows.append(row)
        at += 1
    point_images = tuple(by_letter[g] for g in range(1, d + 1))
    return PermRep(d, rows, point_images=point_images)


def project(w: Word, rep: QuotientRep):
    return rep.project(w)


def in_kernel(w: Word, rep: QuotientRep) -> bool:
    return rep.project(w) == rep.identity


def pushforward(mu: Distribution, rep: QuotientRep) -> Distribution:
    """mu'(q) = sum of mu(w) over words projecting to q."""
    ctx = mu.context
    if not isinstance(ctx, FreeGroup) or ctx.rank != rep.rank:
        raise RankMismatchError(
            f"distribution context {ctx!r} does not match rep rank {rep.rank}"
        )
    probs: dict = {}
    for w, pw in mu.items():
        q = rep.project(w)
        probs[q] = probs.get(q, 0.0) + pw
    exact = None
    if mu.exact is not None:
        exact = {}
        for w, frac in mu.exact.items():
            q = rep.project(w)
            exact[q] = exact.get(q, Fraction(0)) + frac
    return Distribution(rep, probs, exact=exact)


__all__ = [
    "AbelianRep",
    "DEFAULT_MAX_COSETS",
    "PermRep",
    "QuotientRep",
    "TrivialRep",
    "col_letter",
    "coset_enumerate",
    "from_point_permutations",
    "in_kernel",
    "letter_col",
    "project",
    "pushforward",
]
