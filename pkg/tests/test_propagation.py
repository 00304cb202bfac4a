"""Slab propagation: exactness on pure segments, second-order splitting,
coupling-generator channels, the beyond-the-lumped-limit search, and
profile files."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twinbeam import gaussian, propagation
from twinbeam.configio import ConfigError
from twinbeam.propagation import Slab, SlabProfile


def test_slab_validation():
    with pytest.raises(ValueError):
        Slab(0.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        Slab(0.5, -0.1, 0.0, 0.0)
    with pytest.raises(ValueError):
        Slab(0.5, 0.0, -1.0, 0.0)
    with pytest.raises(ValueError):
        Slab(0.5, 0.0, 0.0, -1.0)


def test_profile_requires_slabs_and_sums_lengths():
    with pytest.raises(ValueError):
        SlabProfile(())
    profile = SlabProfile((Slab(0.25, 0.0, 0.0, 0.0), Slab(0.75, 1.0, 0.0, 0.0)))
    assert profile.total_length == pytest.approx(1.0)


def test_slab_channel_rejects_large_squeeze():
    with pytest.raises(ValueError):
        propagation.slab_channel(Slab(1.0, 0.6, 0.0, 0.0))


def test_pure_gain_segment_is_exact():
    slab = Slab(0.25, 1.2, 0.0, 0.0)
    ch = propagation.slab_channel(slab)
    ref = gaussian.amplifier_channel(float(np.cosh(0.3) ** 2))
    np.testing.assert_allclose(ch.transfer, ref.transfer, atol=1e-14)
    np.testing.assert_allclose(ch.added_noise, ref.added_noise, atol=1e-14)
    # squeeze parameters add, so subdividing changes nothing beyond
    # floating-point roundoff of the repeated composition
    a = propagation.propagate(SlabProfile((slab,)), subdivisions=1)
    b = propagation.propagate(SlabProfile((slab,)), subdivisions=64)
    assert a.gemellity == pytest.approx(b.gemellity, abs=1e-12)
    assert a.g_a == pytest.approx(b.g_a, abs=1e-12)


def test_pure_loss_segment_is_exact():
    slab = Slab(0.5, 0.0, 1.4, 0.8)
    res = propagation.propagate(SlabProfile((slab,)), subdivisions=7)
    assert res.g_a == pytest.approx(np.exp(-1.4 * 0.5), abs=1e-13)
    assert res.g_b == 0.0
    # loss on a coherent seed leaves vacuum noise
    np.testing.assert_allclose(res.state.cov, np.eye(4), atol=1e-12)


def test_loss_then_gain_is_flux_neutral_with_ideal_correlations():
    # attenuate the probe to sech(2r) upstream, then squeeze by r: the
    # total flux returns to one while the pair keeps the full two-mode
    # correlation, so the gemellity is exp(-2r)
    r = 0.75
    profile = SlabProfile(
        (
            Slab(0.5, 0.0, 2.0 * np.log(np.cosh(2.0 * r)), 0.0),
            Slab(0.5, 2.0 * r, 0.0, 0.0),
        )
    )
    res = propagation.propagate(profile, subdivisions=4)
    assert res.sum_transmission == pytest.approx(1.0, abs=1e-12)
    assert res.g_a == pytest.approx(np.cosh(r) ** 2 / np.cosh(2.0 * r), abs=1e-12)
    assert res.g_b == pytest.approx(np.sinh(r) ** 2 / np.cosh(2.0 * r), abs=1e-12)
    assert res.gemellity == pytest.approx(np.exp(-2.0 * r), abs=1e-12)
    # both segments are pure, so any subdivision gives the same answer
    again = propagation.propagate(profile, subdivisions=32)
    assert again.gemellity == pytest.approx(res.gemellity, abs=1e-13)


def test_mixed_slab_error_is_second_order_in_width():
    profile = SlabProfile((Slab(1.0, 0.8, 0.5, 0.3),))
    ref = propagation.propagate(profile, subdivisions=8192).gemellity
    errs = [
        abs(propagation.propagate(profile, subdivisions=n).gemellity - ref)
        for n in (32, 64, 128)
    ]
    assert errs[0] > errs[1] > errs[2] > 0.0
    assert 3.0 < errs[0] / errs[1] < 5.0
    assert 3.0 < errs[1] / errs[2] < 5.0


def test_propagate_validates_subdivisions():
    profile = SlabProfile((Slab(1.0, 0.1, 0.0, 0.0),))
    with pytest.raises(ValueError):
        propagation.propagate(profile, subdivisions=0)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.floats(min_value=0.1, max_value=1.0),
            st.floats(min_value=0.0, max_value=1.5),
            st.floats(min_value=0.0, max_value=3.0),
            st.floats(min_value=0.0, max_value=3.0),
        ),
        min_size=1,
        max_size=3,
    )
)
def test_propagation_always_yields_a_physical_state(raw):
    profile = SlabProfile(tuple(Slab(*r) for r in raw))
    res = propagation.propagate(profile, subdivisions=8)
    assert gaussian.uncertainty_defect(res.state) > -1e-9


def test_coupling_generator_reproduces_two_mode_squeezer():
    k = 0.6
    block = np.array([[0.0, k], [k, 0.0]], dtype=complex)
    res = propagation.propagate_coupling(block, n_slabs=4)
    assert res.g_a == pytest.approx(np.cosh(k) ** 2, abs=1e-10)
    assert res.g_b == pytest.approx(np.sinh(k) ** 2, abs=1e-10)
    assert res.gemellity == pytest.approx(np.exp(-2.0 * k), abs=1e-10)


def test_coupling_generator_reproduces_probe_loss():
    alpha = 1.1
    block = np.array([[-alpha / 2.0, 0.0], [0.0, 0.0]], dtype=complex)
    res = propagation.propagate_coupling(block, n_slabs=16)
    assert res.g_a == pytest.approx(np.exp(-alpha), abs=1e-10)
    assert res.g_b == 0.0
    np.testing.assert_allclose(res.state.cov, np.eye(4), atol=1e-10)


def test_phase_only_generator_adds_no_noise():
    block = np.array([[0.4j, 0.0], [0.0, -0.9j]])
    res = propagation.propagate_coupling(block, n_slabs=8)
    assert res.g_a == pytest.approx(1.0, abs=1e-12)
    assert res.figures.f_a == pytest.approx(1.0, abs=1e-12)
    assert res.figures.f_b == pytest.approx(1.0, abs=1e-12)


def test_coupling_propagation_validates_arguments():
    block = np.zeros((2, 2), dtype=complex)
    with pytest.raises(ValueError):
        propagation.propagate_coupling(block, n_slabs=0)
    with pytest.raises(ValueError):
        propagation.propagate_coupling(block, length=0.0)
    with pytest.raises(ValueError):
        propagation.coupling_slab_channel(np.zeros((3, 3)), 0.1)


def test_refinement_converges_on_a_mixed_profile():
    profile = SlabProfile((Slab(1.0, 0.8, 0.5, 0.3),))
    res, doublings = propagation.refine_until_converged(profile, tol=1e-8)
    assert doublings >= 1
    assert res.subdivisions == 8 * 2**doublings
    tight = propagation.propagate(profile, subdivisions=4 * res.subdivisions)
    assert res.gemellity == pytest.approx(tight.gemellity, abs=1e-7)


def test_refinement_validates_and_reports_failure():
    profile = SlabProfile((Slab(1.0, 0.8, 0.5, 0.3),))
    with pytest.raises(ValueError):
        propagation.refine_until_converged(profile, tol=0.0)
    with pytest.raises(RuntimeError):
        propagation.refine_until_converged(profile, tol=1e-16, max_doublings=2)


def test_search_beats_the_lumped_limit_from_the_seeded_start():
    out = propagation.search_beyond_lumped_limit(
        n_segments=2, seed=7, restarts=1, subdivisions=64
    )
    assert out.found
    assert out.result.gemellity_db < -2.8
    assert abs(out.result.sum_transmission - 1.0) <= 0.01
    assert len(out.profile.slabs) == 2
    assert out.evaluations > 0


def test_search_is_deterministic_for_a_fixed_seed():
    runs = [
        propagation.search_beyond_lumped_limit(
            n_segments=1, seed=11, restarts=2, subdivisions=32
        )
        for _ in range(2)
    ]
    assert runs[0].result.gemellity == runs[1].result.gemellity
    assert runs[0].evaluations == runs[1].evaluations
    assert runs[0].found == runs[1].found


def test_search_validates_arguments():
    with pytest.raises(ValueError):
        propagation.search_beyond_lumped_limit(n_segments=0)
    with pytest.raises(ValueError):
        propagation.search_beyond_lumped_limit(n_segments=9)
    with pytest.raises(ValueError):
        propagation.search_beyond_lumped_limit(rate_bound=0.0)
    with pytest.raises(ValueError):
        propagation.search_beyond_lumped_limit(feasibility_tol=0.0)


def test_profile_text_round_trip(tmp_path):
    profile = SlabProfile(
        (Slab(0.5, 1.25, 0.0, 0.125), Slab(0.5, 0.0, 0.7311, 0.0))
    )
    text = propagation.profile_to_text(profile)
    assert propagation.profile_from_text(text) == profile
    path = tmp_path / "profile.cfg"
    propagation.save_profile(profile, path)
    assert propagation.load_profile(path) == profile


def test_profile_parsing_errors():
    with pytest.raises(ConfigError):
        propagation.profile_from_text("")
    with pytest.raises(ConfigError):
        propagation.profile_from_text("[medium]\ndz = 1\n")
    with pytest.raises(ConfigError):
        propagation.profile_from_text(
            "[segment]\ndz = 1\ng = 0\nalpha_a = 0\nalpha_b = 0\nwidth = 2\n"
        )
    with pytest.raises(ConfigError):
        # alpha_b missing
        propagation.profile_from_text("[segment]\ndz = 1\ng = 0\nalpha_a = 0\n")
    with pytest.raises(ConfigError):
        propagation.profile_from_text(
            "[segment]\ndz = fast\ng = 0\nalpha_a = 0\nalpha_b = 0\n"
        )
    with pytest.raises(ConfigError):
        # negative length is rejected at the dataclass level and rewrapped
        propagation.profile_from_text(
            "[segment]\ndz = -1\ng = 0\nalpha_a = 0\nalpha_b = 0\n"
        )
    with pytest.raises(ConfigError):
        propagation.load_profile("/nonexistent/profile.cfg")
