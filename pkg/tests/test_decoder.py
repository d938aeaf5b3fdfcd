import itertools
import math
import random

import numpy as np
import pytest

from entdist.codes import StabilizerCode, builtin_code, builtin_names, validate_code
from entdist.decoder import (
    build_lookup_table,
    builtin_polynomial,
    classify_error,
    code_distance,
    eval_qec_map,
    logical_fidelity_polynomial,
    map_rows,
    polynomial_rows,
    syndrome_of,
)
from entdist.pauli import PauliString, canonical_key, multiply

P = PauliString.from_string

THREE_QUBIT = StabilizerCode(
    "threequbit", 3, 1, 1, (P("ZZI"), P("IZZ")), (P("XXX"),), (P("ZII"),)
)


@pytest.fixture(scope="module")
def luts():
    return {name: build_lookup_table(builtin_code(name)) for name in builtin_names()}


@pytest.fixture(scope="module")
def polys(luts):
    return {
        name: logical_fidelity_polynomial(builtin_code(name), luts[name])
        for name in builtin_names()
    }


def test_worked_syndrome_example():
    assert syndrome_of(THREE_QUBIT, P("XII")) == (1, 0)


def test_enumeration_matches_canonical_order():
    from entdist.decoder import _pauli_enumeration

    xb, zb, _, order = _pauli_enumeration(2)
    enumerated = []
    for idx in order:
        x = int(xb[idx, 0]) | (int(xb[idx, 1]) << 1)
        z = int(zb[idx, 0]) | (int(zb[idx, 1]) << 1)
        enumerated.append(PauliString(2, x, z))
    expected = sorted(
        (PauliString(2, x, z) for x in range(4) for z in range(4)), key=canonical_key
    )
    assert enumerated == expected


def test_five_qubit_table_is_identity_plus_weight_one(luts):
    lut = luts["513"]
    assert len(lut) == 16
    leaders = list(lut.entries.values())
    assert sum(1 for p in leaders if p.weight == 0) == 1
    assert sum(1 for p in leaders if p.weight == 1) == 15
    assert lut.entries[(0, 0, 0, 0)] == PauliString.identity(5)


def test_nine_qubit_table_sizes(luts):
    assert len(luts["913"]) == 256
    assert len(luts["923"]) == 128
    assert len(luts["933"]) == 64
    # exhaustive enumeration: the deepest coset leader for 913 has weight 5
    assert max(p.weight for p in luts["913"].entries.values()) == 5


def test_zero_syndrome_maps_to_identity(luts):
    for name, lut in luts.items():
        m = builtin_code(name).n - builtin_code(name).k
        assert lut.entries[(0,) * m].weight == 0


def test_entries_reproduce_their_syndrome(luts):
    for name, lut in luts.items():
        code = builtin_code(name)
        for syndrome, leader in lut.entries.items():
            assert syndrome_of(code, leader) == syndrome


def test_lookup_consistency_on_random_errors(luts):
    rng = random.Random(20240601)
    for name, lut in luts.items():
        code = builtin_code(name)
        for _ in range(1000):
            e = PauliString(code.n, rng.getrandbits(code.n), rng.getrandbits(code.n))
            s = syndrome_of(code, e)
            assert syndrome_of(code, lut.correction_for(s)) == s


def test_coset_leaders_have_minimum_weight(luts):
    # the stored correction is never heavier than any same-syndrome error
    from entdist.decoder import _bit_matrix, _pauli_enumeration, _syndrome_ids

    for name, lut in luts.items():
        code = builtin_code(name)
        xb, zb, w, _ = _pauli_enumeration(code.n)
        sx, sz = _bit_matrix(code.stabilizers, code.n)
        sid = _syndrome_ids(xb, zb, sx, sz)
        min_w = np.full(2 ** (code.n - code.k), code.n + 1, dtype=np.int64)
        np.minimum.at(min_w, sid, w)
        stored_w = np.array(
            [(lut._leader_x[i] | lut._leader_z[i]).sum() for i in range(len(min_w))]
        )
        assert np.array_equal(stored_w, min_w)


def test_classify_identity_corrected(luts):
    for name, lut in luts.items():
        code = builtin_code(name)
        out = classify_error(code, lut, PauliString.identity(code.n))
        assert out.corrected


def test_five_qubit_corrects_all_weight_one(luts):
    code = builtin_code("513")
    lut = luts["513"]
    for j in range(5):
        for letter in "XYZ":
            e = P("".join(letter if i == j else "I" for i in range(5)))
            assert classify_error(code, lut, e).corrected


def test_913_has_weight_two_logical_failure(luts):
    code = builtin_code("913")
    lut = luts["913"]
    ordered = sorted(
        (PauliString(9, x, z) for x, z in _weight_two_pairs(9)), key=canonical_key
    )
    first_failure = None
    for e in ordered:
        out = classify_error(code, lut, e)
        if not out.corrected:
            first_failure = (e, out)
            break
    assert first_failure is not None
    e, out = first_failure
    assert e.weight == 2
    leader = lut.correction_for(syndrome_of(code, e))
    assert leader != e and leader.weight <= 2
    assert any(out.x_anticommutes) or any(out.z_anticommutes)


def _weight_two_pairs(n):
    for i, j in itertools.combinations(range(n), 2):
        for li, lj in itertools.product("XYZ", repeat=2):
            x = z = 0
            for q, letter in ((i, li), (j, lj)):
                if letter in "XY":
                    x |= 1 << q
                if letter in "ZY":
                    z |= 1 << q
            yield x, z


def test_polynomial_basic_invariants(polys):
    for name, poly in polys.items():
        n, k = poly.n, poly.k
        assert poly.counts[0] == 1
        assert len(poly.counts) == n + 1
        for w, a in enumerate(poly.counts):
            assert 0 <= a <= math.comb(n, w) * 3**w
        # corrected errors per syndrome = |stabilizer group|, so the total
        # count is exactly 4^(n-k) (and in particular <= 4^n)
        assert sum(poly.counts) == 4 ** (n - k)


def test_five_qubit_polynomial_vs_scalar_bruteforce(luts, polys):
    code = builtin_code("513")
    lut = luts["513"]
    counts = [0] * 6
    for x in range(32):
        for z in range(32):
            e = PauliString(5, x, z)
            if classify_error(code, lut, e).corrected:
                counts[e.weight] += 1
    assert tuple(counts) == polys["513"].counts


def test_913_beats_923_at_high_fidelity(polys):
    assert eval_qec_map(polys["913"], 0.99) > eval_qec_map(polys["923"], 0.99)


def test_eval_extremes_and_range(polys):
    for poly in polys.values():
        assert eval_qec_map(poly, 1.0) == 1.0
        out = eval_qec_map(poly, np.linspace(0.0, 1.0, 11))
        assert np.all((out >= 0.0) & (out <= 1.0))
    with pytest.raises(ValueError):
        eval_qec_map(polys["913"], 1.5)
    with pytest.raises(ValueError):
        eval_qec_map(polys["913"], -0.1)


def test_probability_conservation_direct_sum():
    from entdist.decoder import _pauli_enumeration

    for name in ("913", "923", "933"):
        n = builtin_code(name).n
        _, _, w, _ = _pauli_enumeration(n)
        for f in (0.3, 0.7, 0.95):
            total = np.sum(f ** (n - w) * ((1.0 - f) / 3.0) ** w)
            assert abs(total - 1.0) < 1e-12


def test_polynomial_matches_direct_summation(luts, polys):
    # re-derive F_out at F = 0.9 by summing over all 4^9 errors
    from entdist.decoder import _bit_matrix, _pauli_enumeration

    code = builtin_code("913")
    lut = luts["913"]
    xb, zb, w, _ = _pauli_enumeration(9)
    res_x = xb ^ lut._leader_x[lut._syn_ids]
    res_z = zb ^ lut._leader_z[lut._syn_ids]
    gx, gz = _bit_matrix(code.logical_x + code.logical_z, 9)
    anti = (res_x.astype(np.int64) @ gz.T + res_z.astype(np.int64) @ gx.T) % 2
    corrected = ~anti.any(axis=1)
    f = 0.9
    direct = np.sum(f ** (9 - w[corrected]) * ((1.0 - f) / 3.0) ** w[corrected])
    assert abs(direct - eval_qec_map(polys["913"], f)) < 1e-12


def test_monte_carlo_oracle_913(polys):
    # sample errors qubit-by-qubit from the depolarizing weights and decode
    code = builtin_code("913")
    lut = build_lookup_table(code)
    f = 0.95
    n_samples = 1_000_000
    rng = np.random.default_rng(987654321)
    letters = rng.choice(4, size=(n_samples, 9), p=[f] + [(1 - f) / 3] * 3)
    xb = ((letters == 1) | (letters == 2)).astype(np.int64)
    zb = ((letters == 2) | (letters == 3)).astype(np.int64)
    from entdist.decoder import _bit_matrix

    sx, sz = _bit_matrix(code.stabilizers, 9)
    syn = (xb @ sz.T + zb @ sx.T) % 2
    sid = syn @ (1 << np.arange(7, -1, -1))
    res_x = xb ^ lut._leader_x[sid]
    res_z = zb ^ lut._leader_z[sid]
    gx, gz = _bit_matrix(code.logical_x + code.logical_z, 9)
    anti = (res_x @ gz.T + res_z @ gx.T) % 2
    p_hat = float(np.mean(~anti.any(axis=1)))
    exact = eval_qec_map(polys["913"], f)
    sigma = math.sqrt(exact * (1 - exact) / n_samples)
    assert abs(p_hat - exact) < 3 * sigma


def test_pseudo_threshold_933_near_reference_value(polys):
    from entdist.hybrid import pseudo_threshold

    thr = pseudo_threshold(polys["933"])
    assert 0.9543 <= thr <= 0.9583


def test_code_distance_matches_stored():
    for name in builtin_names():
        code = builtin_code(name)
        assert code_distance(code) == code.d


def test_build_rejects_invalid_code():
    bad = StabilizerCode("bad", 2, 0, 1, (P("XI"), P("ZI")), (), ())
    with pytest.raises(ValueError, match="failed validation"):
        build_lookup_table(bad)


def test_classify_rejects_wrong_size(luts):
    with pytest.raises(ValueError, match="mismatch|qubits"):
        classify_error(builtin_code("513"), luts["513"], P("XII"))


def test_export_rows(polys):
    rows = polynomial_rows(polys["513"])
    assert rows == [(0, 1), (1, 15), (2, 0), (3, 60), (4, 135), (5, 45)]
    grid_rows = map_rows(polys["913"])
    assert len(grid_rows) == 1000
    assert grid_rows[0][0] == 0.0 and grid_rows[-1] == (1.0, 1.0)


def test_builtin_polynomial_cached():
    assert builtin_polynomial("933") is builtin_polynomial("933")
