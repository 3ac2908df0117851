import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from teleglove.errors import FilterError, UndefinedOrientationError, WindowingError
from teleglove.imu import (
    ImuSample,
    ImuWindow,
    LowPassFilter,
    TiltPair,
    gate_dead_zone,
    low_pass,
    tilt_angles,
    window_stream,
)


def make_stream(n, fs=100.0, t0=0.0):
    period = 1000.0 / fs
    return [
        ImuSample(t=t0 + i * period, acc=(0.0, 0.0, 1.0), gyr=(0.0,) * 3, mag=(0.0,) * 3)
        for i in range(n)
    ]


class TestLowPass:
    def test_fixed_point(self):
        assert low_pass((0, 0, 1), (0, 0, 1), alpha=0.2) == (0, 0, 1)

    def test_alpha_one_passthrough(self):
        assert low_pass((0, 0, 0), (1, 0, 0), alpha=1.0) == (1, 0, 0)

    def test_three_applications(self):
        # 1 - 0.8^3 = 0.488
        out = (0.0, 0.0, 0.0)
        for _ in range(3):
            out = low_pass(out, (1, 0, 0), alpha=0.2)
        assert out[0] == pytest.approx(0.488, abs=1e-12)
        assert out[1] == out[2] == 0.0

    def test_rejects_non_finite(self):
        with pytest.raises(FilterError):
            low_pass((0, 0, 0), (math.nan, 0, 0), alpha=0.2)
        with pytest.raises(FilterError):
            low_pass((math.inf, 0, 0), (1, 0, 0), alpha=0.2)

    def test_rejects_bad_alpha(self):
        for alpha in (0.0, -0.1, 1.5):
            with pytest.raises(FilterError):
                low_pass((0, 0, 0), (1, 0, 0), alpha=alpha)

    @given(
        prev=st.tuples(*[st.floats(-10, 10)] * 3),
        raw=st.tuples(*[st.floats(-10, 10)] * 3),
        alpha=st.floats(0.01, 1.0),
    )
    def test_convex_combination(self, prev, raw, alpha):
        out = low_pass(prev, raw, alpha)
        for p, r, o in zip(prev, raw, out):
            lo, hi = min(p, r), max(p, r)
            assert lo - 1e-12 <= o <= hi + 1e-12

    def test_stateful_filter_seeds_then_smooths(self):
        f = LowPassFilter(alpha=0.2)
        assert f.update((1, 0, 0)) == (1, 0, 0)
        out = f.update((0, 0, 0))
        assert out[0] == pytest.approx(0.8)
        f.reset()
        assert f.update((5, 5, 5)) == (5, 5, 5)


class TestTiltAngles:
    def test_flat_hand(self):
        t = tilt_angles((0, 0, 1))
        assert t == TiltPair(0.0, 0.0)

    def test_forty_five_pitch(self):
        t = tilt_angles((1, 0, 1))
        assert t.theta == pytest.approx(45.0)
        assert t.phi == pytest.approx(0.0)

    def test_minus_forty_five_roll(self):
        t = tilt_angles((0, -1, 1))
        assert t.theta == pytest.approx(0.0)
        assert t.phi == pytest.approx(-45.0)

    def test_zero_vector_rejected(self):
        with pytest.raises(UndefinedOrientationError):
            tilt_angles((0.0, 0.0, 0.0))

    @given(
        acc=st.tuples(*[st.floats(-2, 2)] * 3).filter(lambda a: sum(x * x for x in a) > 1e-4),
        k=st.floats(0.01, 100.0),
    )
    def test_scale_invariance(self, acc, k):
        base = tilt_angles(acc)
        scaled = tilt_angles(tuple(k * c for c in acc))
        assert scaled.theta == pytest.approx(base.theta, abs=1e-9)
        assert scaled.phi == pytest.approx(base.phi, abs=1e-9)

    @given(acc=st.tuples(*[st.floats(-2, 2)] * 3).filter(lambda a: sum(x * x for x in a) > 1e-4))
    def test_sign_symmetry(self, acc):
        base = tilt_angles(acc)
        flipped_x = tilt_angles((-acc[0], acc[1], acc[2]))
        assert flipped_x.theta == pytest.approx(-base.theta, abs=1e-9)
        flipped_y = tilt_angles((acc[0], -acc[1], acc[2]))
        assert flipped_y.phi == pytest.approx(-base.phi, abs=1e-9)


class TestDeadZone:
    def test_inside_zone_gives_none(self):
        assert gate_dead_zone(TiltPair(3.0, 2.0), dz=5.0) is None

    def test_zero_dead_zone_passes(self):
        t = TiltPair(0.0, 0.0)
        assert gate_dead_zone(t, dz=0.0) == t

    def test_one_axis_outside_passes(self):
        t = TiltPair(6.0, 1.0)
        assert gate_dead_zone(t, dz=5.0) == t

    @given(theta=st.floats(-45, 45), phi=st.floats(-45, 45), dz=st.floats(0, 20))
    def test_idempotent_on_passthrough(self, theta, phi, dz):
        out = gate_dead_zone(TiltPair(theta, phi), dz)
        if out is not None:
            assert gate_dead_zone(out, dz) == out


class TestWindowStream:
    def test_exactly_one_window(self):
        wins = list(window_stream(make_stream(200), hop_ms=2000))
        assert len(wins) == 1 and len(wins[0].samples) == 200

    def test_two_disjoint_windows(self):
        wins = list(window_stream(make_stream(400), hop_ms=2000))
        assert len(wins) == 2
        assert wins[0].samples[-1].t < wins[1].samples[0].t

    def test_overlapping_hop(self):
        # floor((400 - 200) / 25) + 1 = 9
        wins = list(window_stream(make_stream(400), hop_ms=250))
        assert len(wins) == 9

    def test_short_stream_empty(self):
        assert list(window_stream(make_stream(150), hop_ms=2000)) == []

    def test_unsorted_rejected(self):
        stream = make_stream(10)
        stream[5] = ImuSample(t=stream[3].t, acc=(0, 0, 1), gyr=(0,) * 3, mag=(0,) * 3)
        with pytest.raises(WindowingError):
            list(window_stream(stream, hop_ms=2000))

    def test_fractional_hop_rejected(self):
        with pytest.raises(WindowingError):
            list(window_stream(make_stream(10), hop_ms=3))

    def test_nonoverlapping_windows_reconstruct_prefix(self):
        stream = make_stream(650)
        wins = list(window_stream(stream, hop_ms=2000))
        joined = [s for w in wins for s in w.samples]
        assert joined == stream[:600]


class TestImuWindow:
    def test_wrong_count_rejected(self):
        with pytest.raises(WindowingError):
            ImuWindow(tuple(make_stream(199)))

    def test_uneven_spacing_rejected(self):
        stream = make_stream(200)
        bad = ImuSample(t=stream[49].t + 25.0, acc=(0, 0, 1), gyr=(0,) * 3, mag=(0,) * 3)
        stream[50] = bad
        with pytest.raises(WindowingError):
            ImuWindow(tuple(stream))

    def test_axes_shape_and_order(self):
        s = ImuSample(t=0.0, acc=(1, 2, 3), gyr=(4, 5, 6), mag=(7, 8, 9))
        assert np.array_equal(s.as_row(), np.arange(1.0, 10.0))
        w = ImuWindow(tuple(make_stream(200)))
        assert w.axes().shape == (200, 9)
