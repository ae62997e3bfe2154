"""Growth of F_d and of kernels of quotient maps.

Sphere and ball counts are closed-form exact integers.  Kernel sphere
counts |N cap S(n)| come from a non-backtracking transfer matrix over
states (element of Q, last letter), with an optional brute-force
enumeration cross-check; both are exact.  The critical exponent of the
kernel is the log of the dominant eigenvalue of that matrix restricted
to states reachable from and co-reachable to identity-ending states.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import (
    ConvergenceError,
    GwelError,
    ParameterError,
    ResourceGuardError,
)
from .quotients import col_letter
from .words import alphabet, ball_size, sphere_size

BRUTE_NODE_LIMIT = 10**8
TRANSFER_STATE_LIMIT = 5 * 10**6


@dataclass(frozen=True)
class GrowthSeries:
    """Exact counts c_0..c_n with a tag saying what is being counted."""

    rank: int
    kind: str  # "ball" | "sphere" | "kernel"
    counts: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("ball", "sphere", "kernel"):
            raise ParameterError(f"unknown series kind {self.kind!r}")
        if any(c < 0 for c in self.counts):
            raise ParameterError("counts must be nonnegative")
        if self.counts and self.counts[0] != 1:
            raise ParameterError("c_0 must be 1 (the identity)")

    def rows(self) -> list[tuple[int, int, float | None]]:
        """(n, count, log(count)/n) rows; the ratio is None at n=0 or count=0."""
        out = []
        for n, c in enumerate(self.counts):
            ratio = math.log(c) / n if n > 0 and c > 0 else None
            out.append((n, c, ratio))
        return out

    def last_ratio(self) -> float | None:
        for n, c, r in reversed(self.rows()):
            if r is not None:
                return r
        return None


def ball_counts(d: int, n: int) -> GrowthSeries:
    """Exact |B(k)| for k <= n."""
    if d < 2:
        raise ParameterError(f"rank must be >= 2, got {d}")
    if n < 0:
        raise ParameterError("radius must be >= 0")
    return GrowthSeries(d, "ball", tuple(ball_size(d, k) for k in range(n + 1)))


def sphere_counts(d: int, n: int) -> GrowthSeries:
    """Exact |S(k)| for k <= n."""
    if d < 2:
        raise ParameterError(f"rank must be >= 2, got {d}")
    if n < 0:
        raise ParameterError("radius must be >= 0")
    return GrowthSeries(d, "sphere", tuple(sphere_size(d, k) for k in range(n + 1)))


def _finite_size(rep) -> int | None:
    return getattr(rep, "size", None)


def _transfer_counts(d: int, rep, n: int) -> list[int]:
    size = rep.size
    nc = 2 * d
    if size * nc > TRANSFER_STATE_LIMIT:
        raise ResourceGuardError(
            f"transfer state space {size * nc} exceeds {TRANSFER_STATE_LIMIT}"
        )
    counts = [1]
    if n == 0:
        return counts
    vec = [0] * (size * nc)
    for col in range(nc):
        vec[rep.apply_col(0, col) * nc + col] += 1
    counts.append(sum(vec[0:nc]))
    for _ in range(2, n + 1):
        new = [0] * (size * nc)
        for q in range(size):
            base = q * nc
            tot = sum(vec[base : base + nc])
            if tot == 0:
                continue
            for col in range(nc):
                # extend by the letter of `col`; forbid backtracking
                val = tot - vec[base + (col ^ 1)]
                if val:
                    new[rep.apply_col(q, col) * nc + col] += val
        vec = new
        counts.append(sum(vec[0:nc]))
    return counts


def _brute_counts(d: int, rep, n: int) -> list[int]:
    if (2 * d - 1) ** n > BRUTE_NODE_LIMIT:
        raise ResourceGuardError(
            f"brute enumeration needs about (2d-1)^{n} nodes, over {BRUTE_NODE_LIMIT}"
        )
    counts = [0] * (n + 1)
    counts[0] = 1
    if n == 0:
        return counts
    ident = rep.identity
    letters = alphabet(d)

    def dfs(q, last, depth):
        nd = depth + 1
        for t in letters:
            if t == -last:
                continue
            q2 = rep.apply_letter(q, t)
            if q2 == ident:
                counts[nd] += 1
            if nd < n:
                dfs(q2, t, nd)

    dfs(ident, 0, 0)
    return counts


def kernel_sphere_counts(d: int, rep, n: int, method: str = "transfer") -> GrowthSeries:
    """Exact counts of reduced words of length k <= n in the kernel.

    `method` is "transfer", "brute", or "both" (computes both and
    requires exact agreement).  Brute enumeration is guarded by node
    count; the transfer evaluator needs a finite-state rep.
    """
    if d < 2:
        raise ParameterError(f"rank must be >= 2, got {d}")
    if n < 0:
        raise ParameterError("radius must be >= 0")
    if rep.rank != d:
        raise ParameterError(f"rep rank {rep.rank} differs from {d}")
    if method not in ("transfer", "brute", "both"):
        raise ParameterError(f"unknown method {method!r}")
    counts = None
    if method in ("transfer", "both"):
        if _finite_size(rep) is None:
            raise ParameterError("transfer method needs a finite-state rep")
        counts = _transfer_counts(d, rep, n)
    if method in ("brute", "both"):
        brute = _brute_counts(d, rep, n)
        if counts is None:
            counts = brute
        elif counts != brute:
            raise GwelError(
                "transfer and brute kernel counts disagree: "
                f"{counts} vs {brute}"
            )
    return GrowthSeries(d, "kernel", tuple(counts))


def abelian_zero_sphere_counts(
    d: int, radius: int, work_budget: int = 4 * 10**6
) -> list[int]:
    """Exact counts of reduced words of length k with zero exponent vector,
    for k = 0 up to the largest radius the work budget affords (at most
    `radius`).  This is the kernel sphere series of the abelianization.

    Dynamic programming over (exponent vector, last letter) with exact
    integer masses; a word of length k cannot leave the radius-k box, so
    truncation never loses mass.
    """
    if d < 2:
        raise ParameterError(f"rank must be >= 2, got {d}")
    if radius < 0:
        raise ParameterError("radius must be >= 0")
    counts = [1]
    if radius == 0:
        return counts
    nc = 2 * d
    zero = (0,) * d
    state: dict[tuple[tuple[int, ...], int], int] = {}
    for col in range(nc):
        t = col_letter(col)
        i = abs(t) - 1
        vec = zero[:i] + ((1 if t > 0 else -1),) + zero[i + 1 :]
        state[(vec, col)] = state.get((vec, col), 0) + 1
    counts.append(sum(c for (v, _), c in state.items() if v == zero))
    work = len(state) * (nc - 1)
    for _ in range(2, radius + 1):
        work += len(state) * (nc - 1)
        if work > work_budget:
            break
        new: dict[tuple[tuple[int, ...], int], int] = {}
        for (vec, col), cnt in state.items():
            for col2 in range(nc):
                if col2 == col ^ 1:
                    continue
                t = col_letter(col2)
                i = abs(t) - 1
                vec2 = vec[:i] + (vec[i] + (1 if t > 0 else -1),) + vec[i + 1 :]
                key = (vec2, col2)
                new[key] = new.get(key, 0) + cnt
        state = new
        counts.append(sum(c for (v, _), c in state.items() if v == zero))
    return counts


def critical_exponent(d: int, rep, tol: float = 1e-10, max_iter: int = 200000) -> float:
    """Critical exponent of the kernel of a finite-state quotient map.

    Log of the dominant eigenvalue of the non-backtracking transfer
    matrix restricted to states both reachable from and co-reachable to
    the identity-ending states.  Power iteration runs on the matrix plus
    the identity, which removes eigenvalue periodicity (relators of even
    length make the path graph bipartite) and shifts the dominant
    eigenvalue by exactly one; all-ones start vector, l1 normalization,
    and the estimate must be stable to relative tol for 10 consecutive
    iterations.
    """
    if d < 2:
        raise ParameterError(f"rank must be >= 2, got {d}")
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if _finite_size(rep) is None:
        raise ParameterError("critical_exponent needs a finite-state rep")
    if rep.rank != d:
        raise ParameterError(f"rep rank {rep.rank} differs from {d}")
    size = rep.size
    nc = 2 * d
    nstates = size * nc
    if nstates > TRANSFER_STATE_LIMIT:
        raise ResourceGuardError(
            f"transfer state space {nstates} exceeds {TRANSFER_STATE_LIMIT}"
        )
    succ: list[list[int]] = [[] for _ in range(nstates)]
    for q in range(size):
        for c in range(nc):
            s = q * nc + c
            for c2 in range(nc):
                if c2 == c ^ 1:
                    continue
                succ[s].append(rep.apply_col(q, c2) * nc + c2)

    anchors = list(range(nc))  # states (identity element, any last letter)

    def bfs(starts, adj):
        seen = [False] * nstates
        queue = deque()
        for s in starts:
            seen[s] = True
            queue.append(s)
        while queue:
            s = queue.popleft()
            for t in adj[s]:
                if not seen[t]:
                    seen[t] = True
                    queue.append(t)
        return seen

    fwd = bfs(anchors, succ)
    pred: list[list[int]] = [[] for _ in range(nstates)]
    for s in range(nstates):
        for t in succ[s]:
            pred[t].append(s)
    bwd = bfs(anchors, pred)
    live = [s for s in range(nstates) if fwd[s] and bwd[s]]
    if not live:
        raise ParameterError("no identity-recurrent transfer states")
    pos = {s: i for i, s in enumerate(live)}
    radj: list[list[int]] = [[] for _ in live]
    for i, s in enumerate(live):
        for t in succ[s]:
            j = pos.get(t)
            if j is not None:
                radj[i].append(j)

    m = len(live)
    x = [1.0 / m] * m
    prev = None
    stable = 0
    for _ in range(max_iter):
        y = x[:]  # identity shift
        for i, row in enumerate(radj):
            xi = x[i]
            for j in row:
                y[j] += xi
        rho = math.fsum(y)
        inv = 1.0 / rho
        x = [v * inv for v in y]
        if prev is not None and abs(rho - prev) <= tol * abs(rho):
            stable += 1
            if stable >= 10:
                lam = rho - 1.0
                if lam <= 0:
                    raise ConvergenceError("degenerate dominant eigenvalue")
                return math.log(lam)
        else:
            stable = 0
        prev = rho
    raise ConvergenceError(
        f"power iteration not stable within {max_iter} iterations"
    )


def grigorchuk_delta(rho: float, d: int) -> float:
    """Critical-exponent prediction from a spectral radius.

    Inverts rho = (sqrt(q)/d) * (alpha/sqrt(q) + sqrt(q)/alpha) / 2 with
    q = 2d-1, taking the root alpha in [sqrt(q), q], and returns
    log(alpha).  Admissible rho lies in [sqrt(q)/d, 1]: the lower
    endpoint gives alpha = sqrt(q) (half the free growth rate), the
    upper gives alpha = q (full growth, the amenable-quotient endpoint).
    """
    if d < 2:
        raise ParameterError(f"rank must be >= 2, got {d}")
    q = 2 * d - 1
    sq = math.sqrt(q)
    lo = sq / d
    if rho < lo - 1e-12 or rho > 1.0 + 1e-12:
        raise ParameterError(f"rho={rho!r} outside admissible [{lo}, 1]")
    rho = min(max(rho, lo), 1.0)
    s = 2.0 * rho * d / sq
    disc = s * s - 4.0
    if disc < 0.0:
        disc = 0.0  # only by rounding at the lower endpoint
    t = (s + math.sqrt(disc)) / 2.0
    return math.log(t * sq)


def half_growth_bound(d: int) -> float:
    """Lower bound v(F_d)/2 = log(2d-1)/2 satisfied by the critical
    exponent of every nontrivial normal subgroup."""
    if d < 2:
        raise ParameterError(f"rank must be >= 2, got {d}")
    return 0.5 * math.log(2 * d - 1)


__all__ = [
    "GrowthSeries",
    "abelian_zero_sphere_counts",
    "ball_counts",
    "critical_exponent",
    "grigorchuk_delta",
    "half_growth_bound",
    "kernel_sphere_counts",
    "sphere_counts",
]
