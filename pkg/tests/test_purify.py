import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entdist.purify import (
    PROTOCOLS,
    PauliDistribution,
    bbpssw_closed_form,
    circuit_oracle,
    purify_step,
    run_rounds,
    twirl,
)


def random_distribution(rng):
    values = [rng.random() for _ in range(4)]
    total = sum(values)
    return PauliDistribution(*(v / total for v in values))


def test_perfect_input_is_fixed():
    for protocol in PROTOCOLS:
        step = purify_step(protocol, PauliDistribution(1.0, 0.0, 0.0, 0.0))
        assert step.p_discard == 0.0
        assert step.dist == PauliDistribution(1.0, 0.0, 0.0, 0.0)


def test_first_round_values_at_f06():
    for protocol in PROTOCOLS:
        step = purify_step(protocol, PauliDistribution.from_fidelity(0.6))
        assert abs(step.dist.fidelity - 0.620438) < 1e-6
        assert abs(step.p_discard - 0.391111) < 1e-6


def test_half_fidelity_is_a_fixed_point():
    for protocol in PROTOCOLS:
        dist = PauliDistribution.from_fidelity(0.5)
        for _ in range(5):
            dist = purify_step(protocol, dist).dist
            assert abs(dist.fidelity - 0.5) < 1e-12


def test_twirl_examples():
    out = twirl(PauliDistribution(0.7, 0.2, 0.05, 0.05))
    assert out.as_tuple() == pytest.approx((0.7, 0.1, 0.1, 0.1), abs=1e-15)
    dep = PauliDistribution.from_fidelity(0.6)
    assert twirl(dep) == dep


def test_twirled_traces_identical_across_protocols():
    for f in (0.55, 0.7, 0.9):
        tb = run_rounds("bbpssw", 4, f_in=f, twirled=True)
        td = run_rounds("dejmps", 4, f_in=f, twirled=True)
        for i in range(1, 5):
            assert abs(tb.fidelity_after(i) - td.fidelity_after(i)) < 1e-14
            assert abs(
                tb.rounds[i - 1].p_total_discard - td.rounds[i - 1].p_total_discard
            ) < 1e-14


def test_multi_round_reference_points():
    # DEJMPS without twirling from F = 0.6
    trace = run_rounds("dejmps", 3, f_in=0.6)
    assert abs(trace.fidelity_after(2) - 0.688616) < 1e-4
    assert abs(trace.rounds[1].p_total_discard - 0.65661) < 1e-4
    assert abs(trace.fidelity_after(3) - 0.77193) < 1e-4
    assert abs(trace.rounds[2].p_total_discard - 0.78774) < 1e-4
    # BBPSSW with twirling from F = 0.6
    trace = run_rounds("bbpssw", 3, f_in=0.6, twirled=True)
    assert abs(trace.fidelity_after(2) - 0.644639) < 1e-4
    assert abs(trace.rounds[1].p_total_discard - 0.621285) < 1e-4
    assert abs(trace.fidelity_after(3) - 0.67288) < 1e-4
    assert abs(trace.rounds[2].p_total_discard - 0.758215) < 1e-4


def test_closed_form_matches_twirled_round():
    for f in np.linspace(0.01, 1.0, 100):
        f = float(f)
        step = purify_step("bbpssw", PauliDistribution.from_fidelity(f))
        f_ref, discard_ref = bbpssw_closed_form(f)
        assert abs(step.dist.fidelity - f_ref) < 1e-12
        assert abs(step.p_discard - discard_ref) < 1e-12


def test_first_round_identical_across_variants():
    for f in (0.51, 0.6, 0.77, 0.95):
        outs = set()
        for protocol in PROTOCOLS:
            for twirled in (False, True):
                trace = run_rounds(protocol, 1, f_in=f, twirled=twirled)
                outs.add(round(trace.fidelity_after(1), 13))
        assert len(outs) == 1


def test_fidelity_ordering_rounds_two_to_five():
    grid = np.linspace(0.505, 0.995, 50)
    for f in grid:
        f = float(f)
        fids = {
            (p, tw): run_rounds(p, 5, f_in=f, twirled=tw).fidelities
            for p in PROTOCOLS
            for tw in (False, True)
        }
        for i in range(2, 6):
            dn = fids[("dejmps", False)][i]
            dt = fids[("dejmps", True)][i]
            bt = fids[("bbpssw", True)][i]
            bn = fids[("bbpssw", False)][i]
            assert dn >= dt >= f >= bn
            assert abs(dt - bt) < 1e-12


def test_bias_on_z_after_round_two():
    # from a depolarizing start, round 2 of DEJMPS has P_Z == P_X exactly
    # (both 4 e^2 (F^2 + e^2) / T^2); the strict Z dominance holds from
    # round 3 on, and for BBPSSW already from round 2
    for f in (0.55, 0.6, 0.75, 0.9):
        for protocol in PROTOCOLS:
            trace = run_rounds(protocol, 5, f_in=f)
            second = trace.rounds[1].dist
            assert second.p_z >= second.p_x - 1e-12
            assert second.p_z > second.p_y
            for record in trace.rounds[2:]:
                d = record.dist
                assert d.p_z > d.p_x
                assert d.p_z > d.p_y


def test_probability_conservation_per_round():
    rng = random.Random(13)
    for _ in range(50):
        dist = random_distribution(rng)
        for protocol in PROTOCOLS:
            step = purify_step(protocol, dist)
            assert abs(sum(step.raw) + step.p_discard - 1.0) < 1e-15


def test_discard_recurrence_equals_survival_product():
    # the accumulation P <- P + (1-P) p equals 1 - prod(1 - p_i)
    trace = run_rounds("dejmps", 6, f_in=0.62)
    survival = 1.0
    for i, record in enumerate(trace.rounds, start=1):
        survival *= 1.0 - record.p_discard
        assert abs((1.0 - record.p_total_discard) - survival) < 1e-15
        assert record.rate == (1.0 - record.p_total_discard) / 2.0**i


def test_trace_bookkeeping():
    trace = run_rounds("bbpssw", 3, f_in=0.8, twirled=True)
    assert trace.protocol == "bbpssw" and trace.twirled
    assert len(trace.rounds) == 3
    assert trace.fidelity_after(0) == 0.8
    assert trace.fidelities == (0.8,) + tuple(r.dist.fidelity for r in trace.rounds)
    assert all(
        a.p_total_discard <= b.p_total_discard
        for a, b in zip(trace.rounds, trace.rounds[1:])
    )


def test_run_rounds_argument_validation():
    with pytest.raises(ValueError):
        run_rounds("dejmps", 0, f_in=0.6)
    with pytest.raises(ValueError):
        run_rounds("nope", 1, f_in=0.6)
    with pytest.raises(ValueError):
        run_rounds("dejmps", 1)
    with pytest.raises(ValueError):
        run_rounds("dejmps", 1, f_in=0.6, dist=PauliDistribution.from_fidelity(0.6))
    with pytest.raises(ValueError):
        run_rounds("dejmps", 1, dist=PauliDistribution(0.9, 0.3, 0.0, 0.0))


def test_from_fidelity_validation():
    with pytest.raises(ValueError):
        PauliDistribution.from_fidelity(1.5)


# --- independent circuit oracle ------------------------------------------

def test_oracle_equals_recurrence_on_random_inputs():
    rng = random.Random(20240602)
    for _ in range(200):
        dist = random_distribution(rng)
        for protocol in PROTOCOLS:
            a = purify_step(protocol, dist)
            b = circuit_oracle(protocol, dist)
            assert max(abs(x - y) for x, y in zip(a.raw, b.raw)) < 1e-12
            assert abs(a.p_discard - b.p_discard) < 1e-12
            assert max(
                abs(x - y) for x, y in zip(a.dist.as_tuple(), b.dist.as_tuple())
            ) < 1e-12


def test_oracle_on_specific_asymmetric_input():
    dist = PauliDistribution(0.8, 0.1, 0.06, 0.04)
    a = purify_step("dejmps", dist)
    b = circuit_oracle("dejmps", dist)
    assert a.raw == pytest.approx(b.raw, abs=1e-15)
    # closed-form components for this input
    assert a.raw[0] == pytest.approx(0.8**2 + 0.06**2, abs=1e-15)
    assert a.raw[3] == pytest.approx(2 * 0.8 * 0.06, abs=1e-15)


def test_oracle_perfect_input_never_discards():
    for protocol in PROTOCOLS:
        out = circuit_oracle(protocol, PauliDistribution(1.0, 0.0, 0.0, 0.0))
        assert out.p_discard == 0.0


@given(
    st.tuples(
        st.floats(0.01, 1.0),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
    )
)
def test_step_outputs_stay_normalized(raw):
    total = sum(raw)
    dist = PauliDistribution(*(v / total for v in raw))
    for protocol in PROTOCOLS:
        step = purify_step(protocol, dist)
        assert 0.0 <= step.p_discard <= 1.0
        assert math.isclose(sum(step.dist.as_tuple()), 1.0, abs_tol=1e-12)
        assert min(step.dist.as_tuple()) >= 0.0
