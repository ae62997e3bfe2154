"""Text formats: quotient specs and the lattice experiment config.

Quotient spec grammar (one line):

    trivial
    abelian
    relators: aa, bb, abAB
    perm: a=(1 2)(3 4); b=(1 3)

Parse errors carry 1-based character positions into the given text.
The lattice config is flat key-value text, one directive per line:
points, weights (uniform | random:SEED | comma list), action (cycle
notation as above), direction (increasing | decreasing), and one
`chain` line per partition (blocks split by '|', points by ',',
1-based).  '#' starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .lattice import FiniteAction, FiniteSpace, Partition, random_weights
from .quotients import (
    DEFAULT_MAX_COSETS,
    AbelianRep,
    PermRep,
    QuotientRep,
    TrivialRep,
    coset_enumerate,
    from_point_permutations,
)
from .words import Word, cyclically_reduce, parse_word

_ALPHA = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class RelatorList:
    """Deferred presentation: coset enumeration runs downstream."""

    rank: int
    relators: tuple[Word, ...]  # cyclically reduced, each nonempty


def _parse_relator_body(body: str, offset: int, rank: int) -> RelatorList:
    if body.strip() == "":
        return RelatorList(rank, ())
    relators = []
    at = 0
    for chunk in body.split(","):
        lead = len(chunk) - len(chunk.lstrip())
        start = offset + at + lead  # 0-based into the full text
        stripped = chunk.strip()
        if stripped == "":
            raise ParseError("empty relator", position=start + 1)
        try:
            w = parse_word(stripped, rank)
        except ParseError as e:
            raise ParseError(e.raw, position=start + e.position) from None
        w = cyclically_reduce(w)
        if len(w) == 0:
            raise ParseError(
                "relator reduces to the identity", position=start + 1
            )
        relators.append(w)
        at += len(chunk) + 1
    return RelatorList(rank, tuple(relators))


def _parse_cycle_assignments(
    text: str, offset: int, max_letters: int
) -> dict[int, list[list[int]]]:
    """Parse `a=(1 2)(3 4); b=(1 3)` starting at `offset` (0-based) in
    the full input; returns generator index -> cycles of 1-based points."""
    out: dict[int, list[list[int]]] = {}
    chunks = text.split(";")
    at = 0
    for idx, chunk in enumerate(chunks):
        base = offset + at
        at += len(chunk) + 1
        if chunk.strip() == "":
            if idx == len(chunks) - 1 and out:
                continue  # allow a trailing semicolon
            raise ParseError("empty generator assignment", position=base + 1)
        i = 0
        while i < len(chunk) and chunk[i].isspace():
            i += 1
        ch = chunk[i]
        if ch not in _ALPHA:
            raise ParseError(f"unknown letter {ch!r}", position=base + i + 1)
        gen = _ALPHA.index(ch) + 1
        if gen > max_letters:
            raise ParseError(
                f"letter {ch!r} exceeds rank {max_letters}", position=base + i + 1
            )
        if gen in out:
            raise ParseError(
                f"generator {ch!r} assigned twice", position=base + i + 1
            )
        i += 1
        while i < len(chunk) and chunk[i].isspace():
            i += 1
        if i >= len(chunk) or chunk[i] != "=":
            raise ParseError(
                f"expected '=' after generator {ch!r}", position=base + i + 1
            )
        i += 1
        cycles: list[list[int]] = []
        seen_points: set[int] = set()
        while True:
            while i < len(chunk) and chunk[i].isspace():
                i += 1
            if i >= len(chunk):
                break
            if chunk[i] != "(":
                raise ParseError(
                    f"malformed cycle: expected '(' not {chunk[i]!r}",
                    position=base + i + 1,
                )
            i += 1
            cycle: list[int] = []
            while True:
                while i < len(chunk) and chunk[i].isspace():
                    i += 1
                if i >= len(chunk):
                    raise ParseError(
                        "malformed cycle: missing ')'", position=base + i + 1
                    )
                if chunk[i] == ")":
                    i += 1
                    break
                if not chunk[i].isdigit():
                    raise ParseError(
                        f"malformed cycle: unexpected {chunk[i]!r}",
                        position=base + i + 1,
                    )
                j = i
                while j < len(chunk) and chunk[j].isdigit():
                    j += 1
                point = int(chunk[i:j])
                if point < 1:
                    raise ParseError(
                        "cycle points are 1-based", position=base + i + 1
                    )
                if point in seen_points:
                    raise ParseError(
                        f"point {point} repeated in cycles", position=base + i + 1
                    )
                seen_points.add(point)
                cycle.append(point)
                i = j
            if not cycle:
                raise ParseError("empty cycle", position=base + i)
            cycles.append(cycle)
        if not cycles:
            raise ParseError(
                f"generator {ch!r} has no cycles", position=base + i + 1
            )
        out[gen] = cycles
    if not out:
        raise ParseError("empty permutation spec", position=offset + 1)
    return out


def _cycles_to_perm(cycles: list[list[int]], m: int) -> tuple[int, ...]:
    perm = list(range(m))
    for cycle in cycles:
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            perm[a - 1] = b - 1
    return tuple(perm)


def parse_quotient_spec(
    text: str, rank: int, max_cosets: int = DEFAULT_MAX_COSETS
) -> QuotientRep | RelatorList:
    """Parse a quotient spec; relator specs come back as a RelatorList
    for downstream enumeration, the other directives as a ready rep."""
    lead = len(text) - len(text.lstrip())
    body = text.strip()
    if body == "trivial":
        return TrivialRep(rank)
    if body == "abelian":
        return AbelianRep(rank)
    if body.startswith("relators:"):
        colon = text.index("relators:") + len("relators:")
        return _parse_relator_body(text[colon:], colon, rank)
    if body.startswith("perm:"):
        colon = text.index("perm:") + len("perm:")
        cycles = _parse_cycle_assignments(text[colon:], colon, rank)
        m = max(p for cyc in cycles.values() for cycle in cyc for p in cycle)
        images = {
            gen: _cycles_to_perm(cyc, m) for gen, cyc in cycles.items()
        }
        return from_point_permutations(rank, images, max_elements=max_cosets)
    head = body.split(":", 1)[0].split()[0] if body else ""
    raise ParseError(
        f"unknown quotient directive {head!r}", position=lead + 1
    )


def resolve_quotient_spec(
    text: str, rank: int, max_cosets: int = DEFAULT_MAX_COSETS
) -> QuotientRep:
    """Parse and, for relator specs, run the coset enumeration."""
    spec = parse_quotient_spec(text, rank, max_cosets=max_cosets)
    if isinstance(spec, RelatorList):
        return coset_enumerate(rank, spec.relators, max_cosets=max_cosets)
    return spec


def describe_quotient_spec(rep) -> str:
    if isinstance(rep, PermRep) and rep.point_images is not None:
        pts = len(rep.point_images[0])
        return f"perm-quotient of size {rep.size} (images on {pts} points)"
    return rep.describe()


@dataclass(frozen=True)
class LatticeConfig:
    space: FiniteSpace
    chain: tuple[Partition, ...]
    direction: str
    action: FiniteAction | None


def _parse_partition_line(value: str, points: int, lineno: int) -> Partition:
    assignment = [-1] * points
    for b, block in enumerate(value.split("|")):
        for tok in block.split(","):
            tok = tok.strip()
            if not tok.isdigit():
                raise ParseError(
                    f"line {lineno}: bad point {tok!r} in chain partition"
                )
            p = int(tok)
            if not 1 <= p <= points:
                raise ParseError(
                    f"line {lineno}: point {p} outside 1..{points}"
                )
            if assignment[p - 1] != -1:
                raise ParseError(
                    f"line {lineno}: point {p} appears in two blocks"
                )
            assignment[p - 1] = b
    if -1 in assignment:
        missing = assignment.index(-1) + 1
        raise ParseError(f"line {lineno}: point {missing} not covered")
    return Partition(assignment)


def parse_lattice_config(text: str) -> LatticeConfig:
    points = None
    weights_value = None
    weights_line = 0
    action_value = None
    action_offset = 0
    direction = None
    chain_lines: list[tuple[int, str]] = []

    offset = 0
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        stripped = line.strip()
        if stripped:
            parts = stripped.split(None, 1)
            key = parts[0]
            value = parts[1] if len(parts) > 1 else ""
            if key == "points":
                if not value.isdigit() or int(value) < 1:
                    raise ParseError(f"line {lineno}: points must be a positive integer")
                points = int(value)
            elif key == "weights":
                weights_value, weights_line = value, lineno
            elif key == "action":
                action_value = value
                action_offset = offset + raw_line.index(value, len("action"))
            elif key == "direction":
                if value not in ("increasing", "decreasing"):
                    raise ParseError(
                        f"line {lineno}: direction must be increasing or decreasing"
                    )
                direction = value
            elif key == "chain":
                chain_lines.append((lineno, value))
            else:
                raise ParseError(f"line {lineno}: unknown directive {key!r}")
        offset += len(raw_line) + 1

    if points is None:
        raise ParseError("config is missing a points line")
    if direction is None:
        raise ParseError("config is missing a direction line")
    if not chain_lines:
        raise ParseError("config needs at least one chain line")

    if weights_value is None or weights_value == "uniform":
        weights = FiniteSpace.uniform(points).weights
    elif weights_value.startswith("random:"):
        seed_text = weights_value[len("random:") :].strip()
        if not seed_text.isdigit():
            raise ParseError(
                f"line {weights_line}: random weights need an integer seed"
            )
        weights = random_weights(points, int(seed_text))
    else:
        vals = []
        for tok in weights_value.split(","):
            try:
                vals.append(float(tok.strip()))
            except ValueError:
                raise ParseError(
                    f"line {weights_line}: bad weight {tok.strip()!r}"
                ) from None
        if len(vals) != points:
            raise ParseError(
                f"line {weights_line}: {len(vals)} weights for {points} points"
            )
        weights = tuple(vals)
    space = FiniteSpace(weights)

    action = None
    if action_value is not None:
        cycles = _parse_cycle_assignments(action_value, action_offset, len(_ALPHA))
        gens = sorted(cycles)
        if gens != list(range(1, len(gens) + 1)):
            raise ParseError(
                "action generators must be consecutive letters from 'a'"
            )
        top = max(p for cyc in cycles.values() for cycle in cyc for p in cycle)
        if top > points:
            raise ParseError(
                f"action uses point {top} but the space has {points} points"
            )
        perms = [_cycles_to_perm(cycles[g], points) for g in gens]
        action = FiniteAction(perms)

    chain = tuple(
        _parse_partition_line(value, points, lineno) for lineno, value in chain_lines
    )
    return LatticeConfig(space=space, chain=chain, direction=direction, action=action)


__all__ = [
    "LatticeConfig",
    "RelatorList",
    "describe_quotient_spec",
    "parse_lattice_config",
    "parse_quotient_spec",
    "resolve_quotient_spec",
]
