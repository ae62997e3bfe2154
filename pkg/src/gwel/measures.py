"""Finitely supported probability measures on a group context.

A context is any object with identity / multiply / invert / validate_element
(FreeGroup, or a quotient representation).  Probabilities are doubles;
entropy sums go through math.fsum.  Alongside the float channel a
distribution may carry exact rational masses (srw and point masses do),
which the boundary calculus consumes; convolution drops the exact channel
because rational arithmetic blows up in convolution powers.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ContextMismatchError, DistributionError, NotReachedError
from .words import FreeGroup, Word, alphabet

MASS_TOL = 1e-12


class Distribution:
    """Sparse probability measure: context plus element -> mass > 0."""

    __slots__ = ("context", "probs", "exact", "_pow_cache")

    def __init__(self, context, probs, exact=None):
        clean = {}
        for g, p in probs.items():
            if p < 0:
                raise DistributionError(f"negative mass {p} at {g!r}")
            if p > 0:
                context.validate_element(g)
                clean[g] = float(p)
        total = math.fsum(clean.values())
        if abs(total - 1.0) > MASS_TOL:
            raise DistributionError(
                f"total mass {total!r} differs from 1 by more than {MASS_TOL}"
            )
        self.context = context
        self.probs = clean
        # exact: optional element -> Fraction, same support
        if exact is not None:
            exact = {g: Fraction(q) for g, q in exact.items() if q != 0}
            if set(exact) != set(clean):
                raise DistributionError("exact masses do not match support")
            if sum(exact.values()) != 1:
                raise DistributionError("exact masses do not sum to 1")
        self.exact = exact
        self._pow_cache = None

    def prob(self, g) -> float:
        return self.probs.get(g, 0.0)

    def support(self):
        return list(self.probs)

    def __len__(self):
        return len(self.probs)

    def items(self):
        return self.probs.items()

    def exact_items(self):
        """(element, Fraction) pairs; falls back to the exact binary value
        of each stored double when no rational channel is present."""
        if self.exact is not None:
            return list(self.exact.items())
        return [(g, Fraction(p)) for g, p in self.probs.items()]


def point_mass(context, g) -> Distribution:
    context.validate_element(g)
    return Distribution(context, {g: 1.0}, exact={g: Fraction(1)})


def srw(d: int) -> Distribution:
    """Uniform mass 1/(2d) on the 2d length-one words of F_d."""
    if d < 2:
        raise DistributionError(f"rank must be >= 2, got {d}")
    ctx = FreeGroup(d)
    p = 1.0 / (2 * d)
    q = Fraction(1, 2 * d)
    probs = {}
    exact = {}
    for l in alphabet(d):
        w = Word((l,), d)
        probs[w] = p
        exact[w] = q
    return Distribution(ctx, probs, exact=exact)


def convolve(mu: Distribution, nu: Distribution) -> Distribution:
    """(mu*nu)(x) = sum over g.h = x of mu(g) nu(h).

    Iterates the smaller support on the outside; accumulation order is the
    deterministic support order of the operands.
    """
    if mu.context != nu.context:
        raise ContextMismatchError(
            f"context mismatch: {mu.context!r} vs {nu.context!r}"
        )
    ctx = mu.context
    out: dict = {}
    if len(mu) <= len(nu):
        for g, pg in mu.items():
            for h, ph in nu.items():
                x = ctx.multiply(g, h)
                out[x] = out.get(x, 0.0) + pg * ph
    else:
        for h, ph in nu.items():
            for g, pg in mu.items():
                x = ctx.multiply(g, h)
                out[x] = out.get(x, 0.0) + pg * ph
    return Distribution(ctx, out)


def convolve_power(mu: Distribution, n: int) -> Distribution:
    """mu^n by repeated convolution; powers are cached on mu."""
    if n < 0:
        raise DistributionError("negative convolution power")
    if mu._pow_cache is None:
        mu._pow_cache = [point_mass(mu.context, mu.context.identity)]
    cache = mu._pow_cache
    while len(cache) <= n:
        cache.append(convolve(cache[-1], mu))
    return cache[n]


def shannon_entropy(mu: Distribution) -> float:
    """-sum p log p in nats, compensated summation."""
    return math.fsum(-p * math.log(p) for p in mu.probs.values())


def rn_bound(mu: Distribution, g, n_max: int = 16) -> float:
    """M(g) = max(1/mu^k(g^-1), 1/mu^n(g)) over the smallest k, n <= n_max
    whose convolution power charges the element."""
    ctx = mu.context
    ctx.validate_element(g)
    ginv = ctx.invert(g)
    p_fwd = p_inv = None
    for n in range(n_max + 1):
        power = convolve_power(mu, n)
        if p_fwd is None:
            p = power.prob(g)
            if p > 0:
                p_fwd = p
        if p_inv is None:
            p = power.prob(ginv)
            if p > 0:
                p_inv = p
        if p_fwd is not None and p_inv is not None:
            return max(1.0 / p_fwd, 1.0 / p_inv)
    raise NotReachedError(
        f"element not reached within n_max={n_max} convolution powers"
    )


def distribution_rows(mu: Distribution) -> list[dict]:
    """JSON-friendly [{word, p}] sorted by word literal (free contexts) or
    by element label (quotients)."""
    label = getattr(mu.context, "element_label", None)
    if label is None:
        label = str
    rows = [{"word": label(g), "p": p} for g, p in mu.items()]
    rows.sort(key=lambda r: r["word"])
    return rows


def distribution_from_word_probs(d: int, probs: dict) -> Distribution:
    """Build a free-group distribution from {word literal or Word: mass}."""
    from .words import parse_word

    ctx = FreeGroup(d)
    out = {}
    for key, p in probs.items():
        w = key if isinstance(key, Word) else parse_word(key, d)
        out[w] = out.get(w, 0.0) + p
    return Distribution(ctx, out)


__all__ = [
    "Distribution",
    "MASS_TOL",
    "convolve",
    "convolve_power",
    "distribution_from_word_probs",
    "distribution_rows",
    "point_mass",
    "rn_bound",
    "shannon_entropy",
    "srw",
]
