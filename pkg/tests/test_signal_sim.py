import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from faultae.errors import ConfigError, SpecError
from faultae.signal_sim import (
    FaultSpec,
    FaultType,
    SimConfig,
    default_fault_specs,
    generate_clean,
    generate_dataset,
    inject_fault,
)


def quiet(**kw):
    return SimConfig(noise_std=0.0, **kw)


def test_clean_sample_count_and_start():
    sig = generate_clean(quiet(duration=0.1, current_amplitude=100.0))
    assert len(sig) == 2000
    assert sig.current("A")[0] == 0.0
    assert not sig.fault_mask.any()


def test_quarter_cycle_peak():
    # 1/240 s lands on a sample when dt = 1/24000
    sig = generate_clean(quiet(sample_interval=1 / 24000, duration=0.1, current_amplitude=100.0))
    assert sig.current("A")[100] == pytest.approx(100.0, abs=1e-9)


def test_balanced_sum_is_zero():
    sig = generate_clean(quiet())
    total = sig.channels[0] + sig.channels[1] + sig.channels[2]
    assert np.abs(total).max() < 1e-9
    vtotal = sig.channels[3] + sig.channels[4] + sig.channels[5]
    assert np.abs(vtotal).max() < 1e-9 * 20412


def test_rms_over_whole_cycles():
    # 3 cycles of 60 Hz at 24 kHz is exactly 1200 samples
    cfg = quiet(sample_interval=1 / 24000, duration=0.05, current_amplitude=100.0)
    ia = generate_clean(cfg).current("A")
    rms = np.sqrt(np.mean(ia**2))
    assert rms == pytest.approx(100 / np.sqrt(2), rel=1e-3)


def test_phase_order():
    # 300 samples per cycle: B lags A and C leads A by 100 samples
    sig = generate_clean(quiet(sample_interval=1 / 18000, duration=0.05))
    a, b, c = (sig.current(p) for p in "ABC")
    np.testing.assert_allclose(b[100:], a[:-100], atol=1e-9)
    np.testing.assert_allclose(c[:-100], a[100:], atol=1e-9)


@pytest.mark.parametrize(
    "kwargs",
    [dict(sample_interval=0.0), dict(system_frequency=-60.0), dict(duration=0.0),
     dict(duration=0.001), dict(sample_interval=0.005)],
)
def test_bad_config_rejected(kwargs):
    with pytest.raises(ConfigError):
        SimConfig(**kwargs)


def test_noise_is_seeded():
    a = generate_clean(SimConfig(rng_seed=3, duration=0.1))
    b = generate_clean(SimConfig(rng_seed=3, duration=0.1))
    c = generate_clean(SimConfig(rng_seed=4, duration=0.1))
    assert a.equals(b)
    assert not a.equals(c)


def test_lg_fault_changes_only_phase_a_current():
    clean = generate_clean(SimConfig(duration=0.5))
    spec = FaultSpec("LG", 3000, "A", duration_samples=2000, current_scale=8.0)
    faulty = inject_fault(clean, spec)
    inside = slice(3000, 5000)
    outside = np.ones(len(clean), bool)
    outside[inside] = False
    ia = faulty.current("A")
    assert np.abs(ia[inside]).max() >= 4 * np.abs(ia[outside]).max()
    assert faulty.current("B").tobytes() == clean.current("B").tobytes()
    assert faulty.current("C").tobytes() == clean.current("C").tobytes()
    assert faulty.channels[:, outside].tobytes() == clean.channels[:, outside].tobytes()
    assert faulty.fault_mask.sum() == 2000


def test_tlg_alters_all_currents():
    clean = generate_clean(SimConfig(duration=0.5))
    faulty = inject_fault(clean, FaultSpec(FaultType.TLG, 1000))
    for p in "ABC":
        assert not np.array_equal(faulty.current(p)[1000:3000], clean.current(p)[1000:3000])
    assert faulty.fault_mask.sum() == 2000


def test_ll_sags_line_voltage_only():
    clean = generate_clean(quiet(duration=0.5))
    faulty = inject_fault(clean, FaultSpec("LL", 1000, "AB", voltage_sag=0.4))
    sl = slice(1000, 3000)
    vab_clean = clean.voltage("A")[sl] - clean.voltage("B")[sl]
    vab = faulty.voltage("A")[sl] - faulty.voltage("B")[sl]
    np.testing.assert_allclose(vab, 0.4 * vab_clean, rtol=1e-12, atol=1e-9)
    # common-mode component untouched, phase C untouched
    np.testing.assert_allclose(faulty.voltage("A")[sl] + faulty.voltage("B")[sl],
                               clean.voltage("A")[sl] + clean.voltage("B")[sl], atol=1e-9)
    assert faulty.voltage("C").tobytes() == clean.voltage("C").tobytes()


def test_zero_duration_rejected():
    with pytest.raises(SpecError):
        FaultSpec("LG", 100, "A", duration_samples=0)


@pytest.mark.parametrize("ftype,phases", [("LG", "AB"), ("LLG", "A"), ("TLG", "AB"), ("LL", "ABC")])
def test_phase_count_must_match_type(ftype, phases):
    with pytest.raises(SpecError):
        FaultSpec(ftype, 0, phases)


def test_out_of_range_fault():
    clean = generate_clean(SimConfig(duration=0.1))
    with pytest.raises(IndexError):
        inject_fault(clean, FaultSpec("LG", 1500, duration_samples=600))


def test_default_dataset_mask():
    sig = generate_dataset(SimConfig(duration=1.0))
    assert len(sig) == 20000
    assert sig.fault_mask.sum() == 8000
    labels = [s.label for s in sig.fault_specs]
    assert labels == ["AG", "ABG", "ABCG", "AB"]
    starts = [s.start_sample for s in sig.fault_specs]
    assert np.diff(starts).min() - 2000 >= 2000


def test_empty_spec_list_is_clean_signal():
    cfg = SimConfig(rng_seed=9, duration=0.2)
    assert generate_dataset(cfg, []).equals(generate_clean(cfg))


def test_dataset_is_deterministic():
    cfg = SimConfig(rng_seed=5)
    assert generate_dataset(cfg).equals(generate_dataset(cfg))


def test_overlapping_specs_rejected():
    specs = [FaultSpec("LG", 1000), FaultSpec("LL", 2500)]
    with pytest.raises(SpecError):
        generate_dataset(SimConfig(duration=0.5), specs)


def test_fault_spec_parse():
    spec = FaultSpec.parse("llg:ba:400:300")
    assert spec.fault_type is FaultType.LLG
    assert spec.involved_phases == "AB"
    assert (spec.start_sample, spec.duration_samples) == (400, 300)
    with pytest.raises(SpecError):
        FaultSpec.parse("XX:A:1")
    with pytest.raises(SpecError):
        FaultSpec.parse("LG:A")


spec_strategy = st.builds(
    lambda ftype, perm, start, dur: FaultSpec(
        ftype, start, "".join(perm[: FaultType(ftype).n_phases]), duration_samples=dur
    ),
    st.sampled_from(["LG", "LLG", "TLG", "LL"]),
    st.permutations("ABC"),
    st.integers(0, 6000),
    st.integers(1, 3000),
)


@given(st.lists(spec_strategy, max_size=4))
def test_mask_is_exact_union(specs):
    specs = sorted(specs, key=lambda s: s.start_sample)
    kept = []
    for s in specs:
        if (not kept or s.start_sample >= kept[-1].stop_sample) and s.stop_sample <= 10000:
            kept.append(s)
    sig = generate_dataset(SimConfig(duration=0.5), kept)
    expected = np.zeros(10000, np.uint8)
    for s in kept:
        expected[s.start_sample : s.stop_sample] = 1
    np.testing.assert_array_equal(sig.fault_mask, expected)


@given(spec_strategy)
def test_severity_per_cycle_rms(spec):
    cfg = quiet(duration=0.5)
    if spec.stop_sample > cfg.n_samples:
        spec = FaultSpec(spec.fault_type, 0, spec.involved_phases, duration_samples=spec.duration_samples)
    clean = generate_clean(cfg)
    faulty = inject_fault(clean, spec)
    cyc = cfg.samples_per_cycle
    clean_rms = cfg.current_amplitude / np.sqrt(2)
    for p in spec.involved_phases:
        x = faulty.current(p)
        for start in range(spec.start_sample, spec.stop_sample - cyc + 1, cyc):
            rms = np.sqrt(np.mean(x[start : start + cyc] ** 2))
            assert rms >= spec.current_scale * 0.8 * clean_rms


def test_default_specs_need_room():
    with pytest.raises(SpecError):
        default_fault_specs(10000)
