"""Repeater-chain evaluation: three distillation rounds with swaps between.

A chain of n_R repeaters (n_R odd, or 0 for the single-link case) starts
with n_R + 1 elementary links at a common input fidelity.  Round 1 distills
every link; adjacent segments are then pairwise swapped, halving the
segment count.  Round 2 distills the merged segments; all remaining
segments are swapped into a single end-to-end link.  Round 3 distills end
to end.  Because swaps multiply Werner parameters, the uniform-fidelity
swap formula only needs the number of swaps inside each surviving segment,
and depolarizing inputs stay depolarizing throughout, so the whole chain
is an exact composition of single-round polynomial maps.

Rate accounting follows the round-by-round matching recursion: the pairs
produced by one round are replicated up to the least common multiple with
the next code's block size, in exact integer arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .codes import builtin_code
from .decoder import LogicalFidelityPolynomial, builtin_polynomial, eval_qec_map
from .werner import swap_fidelity_uniform

__all__ = [
    "SKIP",
    "ChainPlan",
    "RoundAccounting",
    "parse_plan",
    "format_plan",
    "run_chain",
    "rate_accounting",
]

SKIP = None  # rounds entry for "no distillation this round"


@dataclass(frozen=True)
class ChainPlan:
    """Repeater count plus the per-round code choice (or SKIP)."""

    n_repeaters: int
    rounds: tuple[str | None, str | None, str | None]

    def __post_init__(self):
        if self.n_repeaters < 0 or (self.n_repeaters % 2 == 0 and self.n_repeaters != 0):
            raise ValueError(
                f"repeater count must be 0 or odd, got {self.n_repeaters}"
            )
        if len(self.rounds) != 3:
            raise ValueError("a plan has exactly 3 rounds")

    @property
    def segment_counts(self) -> tuple[int, int, int]:
        """Segments entering each round."""
        s1 = self.n_repeaters + 1
        s2 = s1 // 2 if s1 > 1 else 1
        return (s1, s2, 1)

    @property
    def swap_counts(self) -> tuple[int, int, int]:
        """Swaps inside each surviving segment after each round: pairwise
        merge after round 1, full merge after round 2, none after round 3."""
        s1, s2, _ = self.segment_counts
        return (1 if s1 > 1 else 0, s2 - 1, 0)

    @property
    def label(self) -> str:
        return format_plan(self)


_PLAN_RE = re.compile(r"^\s*repeaters\s*=\s*(\d+)\s*;\s*rounds\s*=\s*([\w,]+)\s*$")


def parse_plan(text: str) -> ChainPlan:
    """Parse ``repeaters=3; rounds=913,923,933`` (``skip`` for no coding)."""
    m = _PLAN_RE.match(text)
    if not m:
        raise ValueError(f"malformed plan {text!r}; expected 'repeaters=N; rounds=a,b,c'")
    entries = m.group(2).split(",")
    if len(entries) != 3:
        raise ValueError(f"plan must name exactly 3 rounds, got {len(entries)}")
    rounds = tuple(SKIP if e.lower() == "skip" else e for e in entries)
    return ChainPlan(int(m.group(1)), rounds)


def format_plan(plan: ChainPlan) -> str:
    rounds = ",".join("skip" if r is SKIP else r for r in plan.rounds)
    return f"repeaters={plan.n_repeaters}; rounds={rounds}"


def run_chain(plan: ChainPlan, f_in, polynomials=None):
    """End-to-end output fidelity for a plan, exactly.

    Alternates the per-round fidelity map (identity on SKIP) with the
    uniform swap composition.  ``f_in`` may be a scalar or an array; all
    elementary links share the same input fidelity.  ``polynomials`` maps
    code names to fidelity polynomials (builtin codes by default).
    """
    lookup = _resolve_polynomials(plan, polynomials)
    f = f_in
    for code_name, n_qs in zip(plan.rounds, plan.swap_counts):
        if code_name is not SKIP:
            f = eval_qec_map(lookup[code_name], f)
        f = swap_fidelity_uniform(f, n_qs)
    return f


def _resolve_polynomials(plan, polynomials) -> dict[str, LogicalFidelityPolynomial]:
    lookup = {}
    for name in plan.rounds:
        if name is SKIP:
            continue
        if polynomials is not None and name in polynomials:
            lookup[name] = polynomials[name]
        else:
            lookup[name] = builtin_polynomial(name)
    return lookup


@dataclass(frozen=True)
class RoundAccounting:
    """Exact pair bookkeeping: per round, total Bell pairs consumed and
    pairs produced; ``matching`` holds the lcm multiples used to feed
    round r's output into round r+1."""

    n_in: tuple[int, int, int]
    k_out: tuple[int, int, int]
    matching: tuple[int, int]

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k_out[2], self.n_in[2])


def rate_accounting(plan: ChainPlan) -> RoundAccounting:
    """Three-round rate recursion in exact integers.

    Round 1 consumes (n_R + 1) blocks of n_1 raw pairs and yields k_1.
    Each later round replicates the experiment so the previous output
    count matches its block size:  L = lcm(K_prev, n_next).  SKIP rounds
    are not supported here; the rate study applies to full protocols.
    """
    if any(r is SKIP for r in plan.rounds):
        raise ValueError("rate accounting requires a code in every round")
    codes = [builtin_code(name) for name in plan.rounds]
    n1 = (plan.n_repeaters + 1) * codes[0].n
    k1 = codes[0].k
    l1 = lcm(k1, codes[1].n)
    n2 = (l1 // k1) * n1
    k2 = (l1 // codes[1].n) * codes[1].k
    l2 = lcm(k2, codes[2].n)
    n3 = (l2 // k2) * n2
    k3 = (l2 // codes[2].n) * codes[2].k
    return RoundAccounting((n1, n2, n3), (k1, k2, k3), (l1, l2))
