"""2-to-1 recurrence purification: BBPSSW and DEJMPS.

Single rounds are quadratic maps on the Pauli error components
(P_I, P_X, P_Y, P_Z) of the noisy pair:

    BBPSSW:  P_I' = P_I^2 + P_Z^2   P_X' = P_X^2 + P_Y^2
             P_Y' = 2 P_X P_Y       P_Z' = 2 P_I P_Z

    DEJMPS:  P_I' = P_I^2 + P_Y^2   P_X' = P_X^2 + P_Z^2
             P_Y' = 2 P_X P_Z       P_Z' = 2 P_I P_Y

The shortfall from 1 is the discard probability (mismatched check
measurements) and the survivors are renormalized.  The DEJMPS map is the
BBPSSW map preceded by the X-axis pre-rotations, which act on the error
components as a plain Y/Z relabeling.

Every query runs the recursion directly; the map is effectively step-like
near F = 0.5 so nothing here is ever grid-interpolated.  An independent
16-branch Pauli-frame circuit oracle (:func:`circuit_oracle`) reproduces
the same maps from the actual two-pair circuit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pauli import PauliString, commutes_with

__all__ = [
    "PROTOCOLS",
    "PauliDistribution",
    "PurifyStep",
    "RoundRecord",
    "PurificationTrace",
    "purify_step",
    "twirl",
    "run_rounds",
    "circuit_oracle",
    "bbpssw_closed_form",
]

PROTOCOLS = ("bbpssw", "dejmps")


def _check_protocol(protocol: str) -> str:
    p = protocol.lower()
    if p not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    return p


@dataclass(frozen=True)
class PauliDistribution:
    """Error-component probabilities (P_I, P_X, P_Y, P_Z) of one pair."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float

    @classmethod
    def from_fidelity(cls, f: float) -> "PauliDistribution":
        """Depolarizing distribution at fidelity f: the X/Y/Z components
        share (1-f) equally."""
        if not 0.0 <= f <= 1.0:
            raise ValueError("fidelity must lie in [0, 1]")
        e = (1.0 - f) / 3.0
        return cls(f, e, e, e)

    @property
    def fidelity(self) -> float:
        return self.p_i

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_i, self.p_x, self.p_y, self.p_z)

    def validate(self, tol: float = 1e-9) -> "PauliDistribution":
        values = self.as_tuple()
        if any(v < -tol for v in values):
            raise ValueError(f"negative component in {values}")
        total = sum(values)
        if abs(total - 1.0) > tol:
            raise ValueError(f"components sum to {total}, expected 1")
        return self


@dataclass(frozen=True)
class PurifyStep:
    """One protocol round: survivor components before renormalization,
    the round's discard probability, and the renormalized distribution."""

    raw: tuple[float, float, float, float]
    p_discard: float
    dist: PauliDistribution


def _step_components(protocol: str, p) -> tuple[float, float, float, float]:
    i, x, y, z = p
    if protocol == "bbpssw":
        return (i * i + z * z, x * x + y * y, 2.0 * x * y, 2.0 * i * z)
    return (i * i + y * y, x * x + z * z, 2.0 * x * z, 2.0 * i * y)


def purify_step(protocol: str, dist: PauliDistribution) -> PurifyStep:
    protocol = _check_protocol(protocol)
    raw = _step_components(protocol, dist.as_tuple())
    kept = raw[0] + raw[1] + raw[2] + raw[3]
    p_discard = max(1.0 - kept, 0.0)  # rounding guard; kept <= 1 analytically
    out = PauliDistribution(*(v / kept for v in raw))
    return PurifyStep(raw, p_discard, out)


def twirl(dist: PauliDistribution) -> PauliDistribution:
    """Werner twirl: keep P_I, spread the rest equally over X/Y/Z."""
    e = (1.0 - dist.p_i) / 3.0
    return PauliDistribution(dist.p_i, e, e, e)


@dataclass(frozen=True)
class RoundRecord:
    dist: PauliDistribution
    p_discard: float
    p_total_discard: float
    rate: float


@dataclass(frozen=True)
class PurificationTrace:
    protocol: str
    twirled: bool
    initial: PauliDistribution
    rounds: tuple[RoundRecord, ...]

    def fidelity_after(self, i: int) -> float:
        """Fidelity after i rounds; i = 0 is the input."""
        if i == 0:
            return self.initial.fidelity
        return self.rounds[i - 1].dist.fidelity

    @property
    def fidelities(self) -> tuple[float, ...]:
        return (self.initial.fidelity,) + tuple(r.dist.fidelity for r in self.rounds)


def run_rounds(
    protocol: str,
    rounds: int,
    *,
    f_in: float | None = None,
    dist: PauliDistribution | None = None,
    twirled: bool = False,
) -> PurificationTrace:
    """Iterate the protocol for a number of rounds, tracking the
    per-round and cumulative discard and the total rate.

    Start from a depolarizing distribution at ``f_in`` or from an explicit
    ``dist``.  With ``twirled`` the distribution is re-symmetrized after
    every round.  The rate after round i is (1/2^i)(1 - P_total_discard).
    """
    protocol = _check_protocol(protocol)
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if (f_in is None) == (dist is None):
        raise ValueError("give exactly one of f_in or dist")
    current = PauliDistribution.from_fidelity(f_in) if dist is None else dist.validate()
    initial = current
    records = []
    p_total = 0.0
    for i in range(1, rounds + 1):
        step = purify_step(protocol, current)
        current = twirl(step.dist) if twirled else step.dist
        p_total = p_total + (1.0 - p_total) * step.p_discard
        records.append(RoundRecord(current, step.p_discard, p_total, (1.0 - p_total) / 2.0**i))
    return PurificationTrace(protocol, twirled, initial, tuple(records))


def bbpssw_closed_form(f: float) -> tuple[float, float]:
    """Werner-fidelity recurrence for one twirled round and its discard.

    Returns (F_out, P_discard) with
    F_out = (F^2 + (1-F)^2/9) / (F^2 + 2F(1-F)/3 + 5(1-F)^2/9); the
    denominator is the keep probability.
    """
    g = 1.0 - f
    num = f * f + g * g / 9.0
    den = f * f + 2.0 * f * g / 3.0 + 5.0 * g * g / 9.0
    return num / den, 1.0 - den


# ---------------------------------------------------------------------------
# Independent circuit oracle: propagate the 16 two-pair input errors through
# the protocol circuit in the Pauli frame and apply the measurement-match
# keep rule.  Bell-diagonal inputs make these 16 branches exhaustive.
# ---------------------------------------------------------------------------

_LETTERS = "IXYZ"
# R_X(+-pi/2) conjugation relabels the Y and Z error components (unsigned).
_ROTATE = {"I": "I", "X": "X", "Y": "Z", "Z": "Y"}
_MEASZ = PauliString.from_string("IZ")


def _cnot_conjugate(p: PauliString) -> PauliString:
    """Conjugate a 2-qubit Pauli by CNOT(control=0, target=1): the X part
    of the control spreads to the target, the Z part of the target spreads
    to the control.  Unsigned (phases do not affect keep/discard or the
    surviving component)."""
    x0 = p.x & 1
    z1 = (p.z >> 1) & 1
    return PauliString(2, p.x ^ (x0 << 1), p.z ^ z1).unsigned()


def circuit_oracle(protocol: str, dist: PauliDistribution) -> PurifyStep:
    """Re-derive one protocol round from the circuit itself.

    Each branch puts one Pauli on each noisy half (kept pair = qubit 0,
    measured pair = qubit 1), applies the DEJMPS pre-rotation relabeling
    when applicable, conjugates through the bilateral CNOT, and keeps the
    branch iff the propagated error commutes with the Z check on the
    measured pair.  Must agree with :func:`purify_step` exactly.
    """
    protocol = _check_protocol(protocol)
    dist.validate()
    probs = dict(zip(_LETTERS, dist.as_tuple()))
    acc = {letter: 0.0 for letter in _LETTERS}
    p_discard = 0.0
    for e1 in _LETTERS:
        for e2 in _LETTERS:
            pr = probs[e1] * probs[e2]
            if protocol == "dejmps":
                e1p, e2p = _ROTATE[e1], _ROTATE[e2]
            else:
                e1p, e2p = e1, e2
            propagated = _cnot_conjugate(PauliString.from_string(e1p + e2p))
            if commutes_with(propagated, _MEASZ):
                acc[propagated.letter(0)] += pr
            else:
                p_discard += pr
    raw = (acc["I"], acc["X"], acc["Y"], acc["Z"])
    kept = sum(raw)
    out = PauliDistribution(*(v / kept for v in raw))
    return PurifyStep(raw, p_discard, out)
