import numpy as np
import pytest

from ofdmsync import (CfoEstimate, ChannelConfig, EstimationError, SampleBuffer,
                      SizingError, apply_cfo, correct_cfo, detect_frames,
                      estimate_cfo, plateau_from_event, transmit)

from conftest import random_buffer

PURE_STS_SPAN = (0, 129)  # indices whose correlation windows sit inside the STS
AMBIGUITY_HZ = 625e3      # 1 / (2 * 16 * 50 ns)


# --- estimate_cfo --------------------------------------------------------------

def test_zero_offset_estimates_zero(preamble):
    est = estimate_cfo(preamble, 16, PURE_STS_SPAN)
    assert abs(est.delta_f_hz) < 1e-6
    assert est.plateau_span == PURE_STS_SPAN


@pytest.mark.parametrize("f", [100e3, 200e3])
def test_known_offsets_recovered_within_1hz(preamble, f):
    rx = apply_cfo(preamble, f)
    est = estimate_cfo(rx, 16, PURE_STS_SPAN)
    assert abs(est.delta_f_hz - f) < 1.0
    # autocorrelation phase is -2*pi*f*L*Ts: -0.16*pi at 100 kHz
    expected_phase = -2 * np.pi * f * 16 / 20e6
    assert est.phase_rad == pytest.approx(expected_phase, abs=1e-9)


def test_estimate_within_range_invariant(preamble):
    for f in (-600e3, -310e3, 55e3, 624e3):
        est = estimate_cfo(apply_cfo(preamble, f), 16, PURE_STS_SPAN)
        assert abs(est.delta_f_hz - f) < 1.0
        assert abs(est.delta_f_hz) <= AMBIGUITY_HZ


def test_estimate_wraps_past_ambiguity_bound(preamble):
    delta = 2e3
    est = estimate_cfo(apply_cfo(preamble, AMBIGUITY_HZ + delta), 16, PURE_STS_SPAN)
    assert est.delta_f_hz == pytest.approx(-AMBIGUITY_HZ + delta, abs=1.0)


def test_estimate_scale_invariance(preamble):
    rx = apply_cfo(preamble, 150e3)
    base = estimate_cfo(rx, 16, PURE_STS_SPAN).delta_f_hz
    scaled = SampleBuffer(37.5 * rx.samples, rx.sample_rate)
    assert estimate_cfo(scaled, 16, PURE_STS_SPAN).delta_f_hz == pytest.approx(base, abs=1e-9)


def test_estimate_errors():
    zeros = SampleBuffer(np.zeros(400))
    with pytest.raises(EstimationError):
        estimate_cfo(zeros, 16, (0, 50))
    with pytest.raises(SizingError):
        estimate_cfo(zeros, 16, (50, 50))       # empty span
    with pytest.raises(SizingError):
        estimate_cfo(zeros, 16, (380, 395))     # runs past the buffer


# --- correct_cfo ----------------------------------------------------------------

def test_correct_zero_is_identity(preamble):
    out = correct_cfo(preamble, 0.0)
    assert np.array_equal(out.samples, preamble.samples)


def test_correct_inverts_apply(rng):
    buf = random_buffer(rng, 400)
    back = correct_cfo(apply_cfo(buf, 180e3), 180e3)
    assert np.max(np.abs(back.samples - buf.samples)) < 1e-9


def test_correct_preserves_magnitudes(rng):
    buf = random_buffer(rng, 256)
    out = correct_cfo(buf, 99e3)
    assert np.max(np.abs(np.abs(out.samples) - np.abs(buf.samples))) < 1e-12


# --- closed loop ----------------------------------------------------------------

@pytest.mark.parametrize("f", [0.0, 100e3, 200e3])
def test_estimate_then_correct_residual(preamble, f):
    rx = apply_cfo(preamble, f)
    est = estimate_cfo(rx, 16, PURE_STS_SPAN)
    fixed = correct_cfo(rx, est.delta_f_hz)
    residual = estimate_cfo(fixed, 16, PURE_STS_SPAN)
    assert abs(residual.delta_f_hz) < 1.0


def test_sign_convention_end_to_end(preamble):
    # +f injected by the channel comes back as +f from the estimator, and the
    # corrector's negative exponent undoes the channel rotation
    f = 120e3
    rx = transmit(preamble, ChannelConfig(cfo_hz=f))
    est = estimate_cfo(rx, 16, PURE_STS_SPAN)
    assert est.delta_f_hz == pytest.approx(f, abs=1.0)
    assert est.phase_rad < 0  # Eq-10-style negative rotation of the lag product
    fixed = correct_cfo(rx, est.delta_f_hz)
    assert np.max(np.abs(fixed.samples - preamble.samples)) < 1e-6


def test_roundtrip_sweep_within_unambiguous_range(preamble):
    for f in np.linspace(-620e3, 620e3, 25):
        est = estimate_cfo(apply_cfo(preamble, f), 16, PURE_STS_SPAN)
        assert abs(est.delta_f_hz - f) < 1.0


# --- plateau plumbing -------------------------------------------------------------

def test_plateau_from_event_trims_guard_contamination(preamble):
    rx = apply_cfo(preamble, 200e3)
    events = detect_frames(rx)
    assert len(events) == 1
    span = plateau_from_event(events[0], 16)
    assert span[0] == events[0].start_index
    assert span[1] <= PURE_STS_SPAN[1]  # right edge pulled inside the STS
    est = estimate_cfo(rx, 16, span)
    assert abs(est.delta_f_hz - 200e3) < 1.0


def test_plateau_from_event_never_empty():
    from ofdmsync import FrameEvent
    span = plateau_from_event(FrameEvent(10, 12, 1.0), 16)
    assert span == (10, 11)
