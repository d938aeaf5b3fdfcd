"""Registry and validation of the stabilizer codes used by the simulator.

Builtin codes: the three 9-qubit codes (``913``, ``923``, ``933``) plus the
five-qubit code (``513``) and the Steane code (``713``) used in the
round-skipping study.  Codes can also be loaded from a small text format,
so sequences beyond the builtin ones can be plugged into the same pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .pauli import PauliString, commutes_with

__all__ = [
    "StabilizerCode",
    "CheckResult",
    "CodeValidation",
    "builtin_code",
    "builtin_names",
    "validate_code",
    "parse_code_text",
    "format_code_text",
    "load_code",
    "save_code",
]


@dataclass(frozen=True)
class StabilizerCode:
    """An [[n, k, d]] stabilizer code given by generators and logicals.

    ``d`` is stored metadata; :func:`validate_code` can re-derive it
    exhaustively for n <= 9.
    """

    name: str
    n: int
    k: int
    d: int
    stabilizers: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]


def _make_code(name, n, k, d, h_rows, x_rows, z_rows) -> StabilizerCode:
    parse = PauliString.from_string
    return StabilizerCode(
        name=name,
        n=n,
        k=k,
        d=d,
        stabilizers=tuple(parse(r) for r in h_rows),
        logical_x=tuple(parse(r) for r in x_rows),
        logical_z=tuple(parse(r) for r in z_rows),
    )


# The three 9-qubit codes are stored with + signs throughout: the source
# table lists unsigned letter strings and decoding uses unsigned syndromes.
_BUILTINS = {
    "913": dict(
        n=9, k=1, d=3,
        h_rows=(
            "YIZIIIIXY",
            "ZYZIIIIIX",
            "ZZYIIIIXI",
            "IIIXIIIII",
            "IIIIXIIII",
            "IIIIIXIII",
            "IIIIIIXII",
            "IZZIIIIZZ",
        ),
        x_rows=("ZIIIIIIXX",),
        z_rows=("ZZIIIIIIZ",),
    ),
    "923": dict(
        n=9, k=2, d=3,
        h_rows=(
            "YZZZIIXII",
            "ZYZIZIXYY",
            "ZIYZIIXYX",
            "ZIIXIIIIY",
            "IIZIYIIXI",
            "IIIIIXIII",
            "ZZZZZIZZZ",
        ),
        x_rows=("IZZIIIXXI", "IZIZIIXIX"),
        z_rows=("IZZIZIIZI", "IZZZIIIIZ"),
    ),
    "933": dict(
        n=9, k=3, d=3,
        h_rows=(
            "YZIZIIYXX",
            "IXZZIXYIY",
            "ZIYZIXIYX",
            "IZIYIXXYZ",
            "IIIIXIIII",
            "ZZZZIZZZZ",
        ),
        x_rows=("ZZIIIXXII", "IIZZIXIXI", "IZIZIXIIX"),
        z_rows=("ZZIZIIZII", "ZIZZIIIZI", "ZZZIIIIIZ"),
    ),
    # Cyclic five-qubit code, the standard generator set.
    "513": dict(
        n=5, k=1, d=3,
        h_rows=("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"),
        x_rows=("XXXXX",),
        z_rows=("ZZZZZ",),
    ),
    # Steane code in CSS form.
    "713": dict(
        n=7, k=1, d=3,
        h_rows=(
            "IIIXXXX",
            "IXXIIXX",
            "XIXIXIX",
            "IIIZZZZ",
            "IZZIIZZ",
            "ZIZIZIZ",
        ),
        x_rows=("XXXXXXX",),
        z_rows=("ZZZZZZZ",),
    ),
}

_CACHE: dict[str, StabilizerCode] = {}


def builtin_names() -> tuple[str, ...]:
    return tuple(_BUILTINS)


def builtin_code(name) -> StabilizerCode:
    """Return a builtin code by name (``"913"``, ``"923"``, ``"933"``,
    ``"513"`` or ``"713"``; integers are accepted)."""
    key = str(name)
    if key not in _BUILTINS:
        raise ValueError(
            f"unknown code {name!r}; builtin codes are {', '.join(_BUILTINS)}"
        )
    if key not in _CACHE:
        _CACHE[key] = _make_code(key, **_BUILTINS[key])
    return _CACHE[key]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class CodeValidation:
    code_name: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)


def _gf2_rank(rows: list[int]) -> int:
    rank = 0
    basis: list[int] = []
    for r in rows:
        v = r
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            rank += 1
    return rank


def validate_code(code: StabilizerCode, check_distance: bool = False) -> CodeValidation:
    """Check the structural invariants of a code and report per check.

    Checks: operator sizes and counts, mutual commutation of stabilizers,
    generator independence (symplectic rank n-k), logicals commuting with
    the stabilizers, and the logical X/Z anticommutation pattern.  With
    ``check_distance`` the stored d is verified by exhaustive enumeration
    (practical for n <= 9).
    """
    checks: list[CheckResult] = []
    n, k = code.n, code.k
    ops = code.stabilizers + code.logical_x + code.logical_z

    sizes_ok = all(p.n == n for p in ops)
    counts_ok = (
        len(code.stabilizers) == n - k
        and len(code.logical_x) == k
        and len(code.logical_z) == k
    )
    checks.append(
        CheckResult(
            "shape",
            sizes_ok and counts_ok,
            "" if sizes_ok and counts_ok else
            f"expected {n - k} stabilizers and {k}+{k} logicals on {n} qubits",
        )
    )
    if not sizes_ok:
        return CodeValidation(code.name, tuple(checks))

    bad = [
        (i, j)
        for i in range(len(code.stabilizers))
        for j in range(i + 1, len(code.stabilizers))
        if not commutes_with(code.stabilizers[i], code.stabilizers[j])
    ]
    checks.append(
        CheckResult(
            "stabilizers_commute",
            not bad,
            "" if not bad else f"anticommuting generator pairs: {bad}",
        )
    )

    rows = [(p.x << n) | p.z for p in code.stabilizers]
    rank = _gf2_rank(rows)
    checks.append(
        CheckResult(
            "generator_independence",
            rank == n - k,
            "" if rank == n - k else f"symplectic rank {rank}, expected {n - k}",
        )
    )

    bad = [
        (li, si)
        for li, lop in enumerate(code.logical_x + code.logical_z)
        for si, s in enumerate(code.stabilizers)
        if not commutes_with(lop, s)
    ]
    checks.append(
        CheckResult(
            "logicals_commute_with_stabilizers",
            not bad,
            "" if not bad else f"anticommuting (logical, stabilizer) pairs: {bad}",
        )
    )

    bad = [
        (i, j)
        for i in range(len(code.logical_x))
        for j in range(len(code.logical_z))
        if commutes_with(code.logical_x[i], code.logical_z[j]) != (i != j)
    ]
    checks.append(
        CheckResult(
            "logical_pairing",
            not bad,
            "" if not bad else f"wrong X/Z pairing at indices: {bad}",
        )
    )

    if check_distance and all(c.passed for c in checks):
        from .decoder import code_distance  # deferred: decoder builds on codes

        d_actual = code_distance(code)
        checks.append(
            CheckResult(
                "distance",
                d_actual == code.d,
                "" if d_actual == code.d else f"computed d={d_actual}, stored d={code.d}",
            )
        )

    return CodeValidation(code.name, tuple(checks))


# ---------------------------------------------------------------------------
# Text format: `name=`, `n=`, `k=`, `d=` header lines, then sections headed
# `H:`, `X:`, `Z:` with one Pauli letter string per line.
# ---------------------------------------------------------------------------

def parse_code_text(text: str) -> StabilizerCode:
    header: dict[str, str] = {}
    sections: dict[str, list[str]] = {"H": [], "X": [], "Z": []}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.rstrip(":") in sections and line.endswith(":"):
            current = line.rstrip(":")
            continue
        if "=" in line and current is None:
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
            continue
        if current is None:
            raise ValueError(f"line {lineno}: unexpected content outside a section: {raw!r}")
        sections[current].append(line)
    missing = [key for key in ("name", "n", "k", "d") if key not in header]
    if missing:
        raise ValueError(f"missing header lines: {', '.join(missing)}")
    if not sections["H"]:
        raise ValueError("no stabilizer rows in section H")
    return _make_code(
        header["name"],
        int(header["n"]),
        int(header["k"]),
        int(header["d"]),
        sections["H"],
        sections["X"],
        sections["Z"],
    )


def format_code_text(code: StabilizerCode) -> str:
    lines = [
        f"name={code.name}",
        f"n={code.n}",
        f"k={code.k}",
        f"d={code.d}",
        "H:",
        *[p.letters() for p in code.stabilizers],
        "X:",
        *[p.letters() for p in code.logical_x],
        "Z:",
        *[p.letters() for p in code.logical_z],
    ]
    return "\n".join(lines) + "\n"


def load_code(path) -> StabilizerCode:
    return parse_code_text(Path(path).read_text())


def save_code(code: StabilizerCode, path) -> None:
    Path(path).write_text(format_code_text(code))
