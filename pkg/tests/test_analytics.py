import itertools
import math

import numpy as np
import pytest

from chirpmodem import (
    BerTheoryInput,
    GaussSumParams,
    ModulationConfig,
    Scheme,
    SymbolIndices,
    TheoryMode,
    gauss_sum_brute,
    gauss_sum_closed,
    inner_product_closed,
    interference_power,
    interference_profile,
    modulate,
    papr,
    receiver_complexity,
    spectral_efficiency,
    theoretical_ber,
)
from chirpmodem.analytics import gauss_closed_array
from chirpmodem.detectors import dechirp
from chirpmodem.waveforms import modulate_fields

from oracles import gauss_sum_fsum, inner_product_direct


class TestGaussSums:
    def test_brute_matches_high_precision_summation(self):
        for M, kappa, alpha in [(8, 0, 2), (16, 3, -5), (32, -7, 3), (64, 11, 7)]:
            got = gauss_sum_brute(GaussSumParams(M, kappa, alpha))
            ref = gauss_sum_fsum(M, kappa, alpha)
            assert abs(got - ref) < 1e-10

    def test_zero_alpha_rejected(self):
        with pytest.raises(ValueError):
            GaussSumParams(16, 3, 0)

    def test_parity_rule_for_rate_difference_two(self):
        # |alpha| = 2 is the two-rate-benchmark case: odd kappa annihilates,
        # even kappa gives magnitude 2 sqrt(M/2)
        for M in (8, 16, 32):
            for kappa in range(-M, M + 1):
                for alpha in (2, -2):
                    beta = gauss_sum_closed(GaussSumParams(M, kappa, alpha))
                    if kappa % 2:
                        assert abs(beta) < 1e-9
                    else:
                        assert abs(beta) == pytest.approx(2 * math.sqrt(M / 2), abs=1e-9)

    def test_odd_rate_differences_never_vanish(self):
        # adjacent layers (|alpha| odd) always interfere: |beta| = sqrt(M)
        for M in (16, 64):
            for alpha in (1, -1, 3, 5, 7):
                for kappa in (0, 1, 2, 5, M - 1):
                    beta = gauss_sum_closed(GaussSumParams(M, kappa, alpha))
                    assert abs(beta) == pytest.approx(math.sqrt(M), rel=1e-9)

    def test_closed_equals_brute_exhaustive(self):
        for M in (8, 16, 32):
            for alpha in [a for a in range(-7, 8) if a != 0]:
                kappas = np.arange(-M, M + 1)
                closed = gauss_closed_array(M, kappas, alpha)
                brute = np.array(
                    [gauss_sum_brute(GaussSumParams(M, int(k), alpha)) for k in kappas]
                )
                scale = math.sqrt(M / abs(alpha))
                assert np.max(np.abs(closed - brute)) / scale < 1e-9

    def test_prefactor_magnitude_law(self):
        # |closed| / |remainder sum| = sqrt(M / |alpha|) for every parameter set
        for M in (8, 32):
            for alpha in (1, -3, 4, 7):
                a = abs(alpha)
                n = np.arange(a)
                for kappa in range(-M, M + 1):
                    remainder = np.exp(-1j * np.pi * (2 * kappa * n + M * n * n) / alpha).sum()
                    beta = gauss_sum_closed(GaussSumParams(M, kappa, alpha))
                    assert abs(beta) == pytest.approx(
                        math.sqrt(M / a) * abs(remainder), abs=1e-9
                    )


class TestInnerProducts:
    def test_identical_symbols_give_energy(self):
        cfg = ModulationConfig(Scheme.LCSS, 16, 2)
        idx = SymbolIndices(Scheme.LCSS, (3, 9))
        wave = modulate(cfg, idx)
        got = inner_product_closed(cfg, idx, idx)
        assert got.real == pytest.approx(wave.symbol_energy, rel=1e-9)

    def test_single_layer_tones_are_orthogonal(self):
        cfg = ModulationConfig(Scheme.LCSS, 32, 1)
        got = inner_product_closed(
            cfg, SymbolIndices(Scheme.LCSS, (3,)), SymbolIndices(Scheme.LCSS, (17,))
        )
        assert abs(got) < 1e-9

    def test_all_odd_kappa_orthogonality_construction(self):
        # two-rate schemes (|alpha| = 2 cross terms): making every cross-rate
        # bin difference odd annihilates all Gauss terms, so distinct symbols
        # are exactly orthogonal
        cfg = ModulationConfig(Scheme.TDM_CSS, 8)
        count = 0
        for a1, a2, b1, b2 in itertools.product(range(8), repeat=4):
            if a1 == b1 or a2 == b2:
                continue
            if (a1 - b2) % 2 == 0 or (a2 - b1) % 2 == 0:
                continue
            a = SymbolIndices(Scheme.TDM_CSS, (a1, a2))
            b = SymbolIndices(Scheme.TDM_CSS, (b1, b2))
            assert abs(inner_product_closed(cfg, a, b)) < 1e-9
            wa = modulate(cfg, a).samples
            wb = modulate(cfg, b).samples
            assert abs(inner_product_direct(wa, wb)) < 1e-9
            count += 1
        assert count > 0

    def test_even_kappa_always_interferes_in_two_rate_schemes(self):
        # the complementary case: one even cross difference leaves a
        # 2 sqrt(M/2)-magnitude term
        cfg = ModulationConfig(Scheme.TDM_CSS, 16)
        a = SymbolIndices(Scheme.TDM_CSS, (4, 9))
        b = SymbolIndices(Scheme.TDM_CSS, (7, 2))  # 4-2=2 even, 9-7=2 even
        got = inner_product_closed(cfg, a, b)
        assert abs(got) > 1.0
        wa = modulate(cfg, a).samples
        wb = modulate(cfg, b).samples
        assert got == pytest.approx(inner_product_direct(wa, wb), abs=1e-9)

    @pytest.mark.parametrize(
        "scheme,layers",
        [
            (Scheme.TDM_CSS, 1),
            (Scheme.IQ_TDM_CSS, 1),
            (Scheme.DM_TDM_CSS, 1),
            (Scheme.LCSS, 3),
            (Scheme.LDMCSS, 2),
        ],
    )
    def test_random_cases_match_direct(self, scheme, layers):
        cfg = ModulationConfig(scheme, 64, layers)
        rng = np.random.default_rng(20)
        widths = np.array(cfg.field_widths)
        for _ in range(50):
            a = SymbolIndices(scheme, tuple(int(v) for v in rng.integers(0, 1 << widths)))
            b = SymbolIndices(scheme, tuple(int(v) for v in rng.integers(0, 1 << widths)))
            wa = modulate(cfg, a).samples
            wb = modulate(cfg, b).samples
            ref = inner_product_direct(wa, wb)
            got = inner_product_closed(cfg, a, b)
            assert abs(got - ref) / cfg.M < 1e-8

    def test_scheme_mismatch_rejected(self):
        cfg = ModulationConfig(Scheme.LCSS, 16, 2)
        with pytest.raises(ValueError):
            inner_product_closed(
                cfg, SymbolIndices(Scheme.LORA, (1,)), SymbolIndices(Scheme.LORA, (2,))
            )


class TestInterferenceProfile:
    def test_single_layer_has_no_interference(self):
        cfg = ModulationConfig(Scheme.LCSS, 32, 1)
        idx = SymbolIndices(Scheme.LCSS, (7,))
        for k in range(32):
            prof = interference_profile(cfg, idx, 0, k)
            assert prof.interference == 0
            assert prof.signal == (32.0 if k == 7 else 0.0)

    def test_matched_bin_bounded_by_worst_case_gauss_terms(self):
        cfg = ModulationConfig(Scheme.LCSS, 1024, 8)
        rng = np.random.default_rng(21)
        # per-interferer worst case over all bin differences
        worst = {
            alpha: float(np.abs(gauss_closed_array(1024, np.arange(-1024, 1025), alpha)).max())
            for alpha in range(-7, 8)
            if alpha != 0
        }
        for _ in range(20):
            values = tuple(int(v) for v in rng.integers(0, 1024, size=8))
            idx = SymbolIndices(Scheme.LCSS, values)
            for probed in range(8):
                prof = interference_profile(cfg, idx, probed, values[probed])
                bound = sum(
                    worst[(l + 1) - (probed + 1)] for l in range(8) if l != probed
                )
                assert prof.signal == 1024.0
                assert abs(prof.interference) <= bound + 1e-9

    def test_profile_reconstructs_dechirped_dft(self):
        for scheme, layers in [(Scheme.LCSS, 3), (Scheme.LDMCSS, 2), (Scheme.TDM_CSS, 1)]:
            cfg = ModulationConfig(scheme, 16, layers)
            rng = np.random.default_rng(22)
            widths = np.array(cfg.field_widths)
            for _ in range(10):
                values = tuple(int(v) for v in rng.integers(0, 1 << widths))
                idx = SymbolIndices(scheme, values)
                wave = modulate(cfg, idx)
                for b, branch in enumerate(cfg.branches()):
                    spectrum = np.fft.fft(dechirp(wave.samples, branch.rate, 16))
                    for k in range(16):
                        prof = interference_profile(cfg, idx, b, k)
                        recon = prof.matched_term + prof.interference
                        assert abs(recon - spectrum[k]) / 16 < 1e-8

    def test_exhaustive_ldmcss_toy_sweep(self):
        cfg = ModulationConfig(Scheme.LDMCSS, 16, 2)
        fields = np.array(
            list(itertools.product(range(8), range(8), range(8), range(8))),
            dtype=np.int64,
        )
        waves = modulate_fields(cfg, fields)
        from chirpmodem.analytics import closed_dechirped_spectrum

        for b, branch in enumerate(cfg.branches()):
            direct = np.fft.fft(dechirp(waves, branch.rate, 16), axis=-1)
            closed = closed_dechirped_spectrum(cfg, fields, b)
            assert np.max(np.abs(direct - closed)) / 16 < 1e-8

    def test_range_validation(self):
        cfg = ModulationConfig(Scheme.LCSS, 16, 2)
        idx = SymbolIndices(Scheme.LCSS, (1, 2))
        with pytest.raises(ValueError):
            interference_profile(cfg, idx, 2, 0)
        with pytest.raises(ValueError):
            interference_profile(cfg, idx, 0, 16)


class TestInterferencePower:
    def test_single_layer_is_zero(self):
        assert interference_power(ModulationConfig(Scheme.LCSS, 256, 1), 100, seed=0) == 0.0
        assert interference_power(ModulationConfig(Scheme.LORA, 256), 100, seed=0) == 0.0

    def test_deterministic_for_fixed_seed(self):
        cfg = ModulationConfig(Scheme.LDMCSS, 256, 2)
        a = interference_power(cfg, 2000, seed=3)
        b = interference_power(cfg, 2000, seed=3)
        assert a == b

    def test_non_increasing_in_alphabet_size(self):
        values = [
            interference_power(ModulationConfig(Scheme.LCSS, M, 4), 4000, seed=4)
            for M in (128, 256, 512, 1024)
        ]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_sample_count_validated(self):
        with pytest.raises(ValueError):
            interference_power(ModulationConfig(Scheme.LCSS, 128, 2), 0, seed=0)


class TestBerTheory:
    def test_vanishes_at_high_snr_without_interference(self):
        inp = BerTheoryInput(Scheme.LCSS, TheoryMode.NONCOHERENT, 1024, 1, 1e9, 0.0)
        assert theoretical_ber(inp) < 1e-12
        inp = BerTheoryInput(Scheme.LCSS, TheoryMode.COHERENT_UB, 1024, 4, 1e9, 0.0)
        assert theoretical_ber(inp) < 1e-12

    def test_monotone_in_snr_and_interference(self):
        snrs = np.logspace(1, 4, 30)
        for mode in TheoryMode:
            curve = [
                theoretical_ber(BerTheoryInput(Scheme.LCSS, mode, 1024, 8, s, 1e-4))
                for s in snrs
            ]
            assert all(b <= a + 1e-15 for a, b in zip(curve, curve[1:]))
        interferences = np.linspace(0, 2e-3, 20)
        curve = [
            theoretical_ber(BerTheoryInput(Scheme.LDMCSS, TheoryMode.NONCOHERENT, 1024, 4, 500.0, i))
            for i in interferences
        ]
        assert all(a <= b + 1e-15 for a, b in zip(curve, curve[1:]))

    def test_clamped_to_half(self):
        inp = BerTheoryInput(Scheme.LCSS, TheoryMode.COHERENT_UB, 1024, 8, 0.5, 0.0)
        assert theoretical_ber(inp) == 0.5

    def test_prefactor_variants(self):
        base = dict(scheme=Scheme.LCSS, mode=TheoryMode.NONCOHERENT, M=1024, layers=1,
                    es_over_n0=200.0, interference_i=0.0)
        published = theoretical_ber(BerTheoryInput(paper_exact=True, **base))
        standard = theoretical_ber(BerTheoryInput(paper_exact=False, **base))
        assert standard == pytest.approx(published * 512.0 / 1023.0, rel=1e-12)

    def test_benchmark_schemes_rejected(self):
        with pytest.raises(ValueError):
            BerTheoryInput(Scheme.LORA, TheoryMode.NONCOHERENT, 1024, 1, 10.0)

    def test_invalid_operating_point_rejected(self):
        with pytest.raises(ValueError):
            BerTheoryInput(Scheme.LCSS, TheoryMode.NONCOHERENT, 1024, 1, -1.0)
        with pytest.raises(ValueError):
            BerTheoryInput(Scheme.LCSS, TheoryMode.NONCOHERENT, 1024, 1, 1.0, -0.1)


class TestTables:
    def test_spectral_efficiency_values(self):
        # published table values are truncated to two significant figures
        assert spectral_efficiency(ModulationConfig(Scheme.LORA, 1024)) == pytest.approx(
            0.0097, abs=1e-4
        )
        assert spectral_efficiency(ModulationConfig(Scheme.LCSS, 1024, 8)) == pytest.approx(
            0.0781, abs=5e-5
        )
        assert spectral_efficiency(ModulationConfig(Scheme.LDMCSS, 1024, 4)) == pytest.approx(
            0.0703, abs=5e-5
        )
        assert spectral_efficiency(ModulationConfig(Scheme.TDM_CSS, 1024)) == pytest.approx(
            2 * 10 / 1024
        )
        assert spectral_efficiency(ModulationConfig(Scheme.IQ_TDM_CSS, 1024)) == pytest.approx(
            4 * 10 / 1024
        )
        assert spectral_efficiency(ModulationConfig(Scheme.DM_TDM_CSS, 1024)) == pytest.approx(
            36 / 1024
        )

    def test_receiver_complexity_values(self):
        assert receiver_complexity(ModulationConfig(Scheme.LORA, 1024)) == 34_824
        assert receiver_complexity(ModulationConfig(Scheme.LCSS, 1024, 1)) == 34_824
        assert receiver_complexity(
            ModulationConfig(Scheme.TDM_CSS, 1024)
        ) == 2 * 34_824
        assert receiver_complexity(ModulationConfig(Scheme.LCSS, 1024, 6)) == 6 * 34_824
        assert receiver_complexity(ModulationConfig(Scheme.LDMCSS, 1024, 3)) == 3 * 34_824


class TestPapr:
    def test_single_chirp_is_constant_envelope(self):
        cfg = ModulationConfig(Scheme.LORA, 256)
        wave = modulate(cfg, SymbolIndices(Scheme.LORA, (77,)))
        assert papr(wave) == pytest.approx(1.0, abs=1e-12)

    def test_constant_vector(self):
        assert papr(np.full(64, 2.0 + 0j)) == pytest.approx(1.0)

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError):
            papr(np.zeros(16, dtype=complex))

    def test_layered_symbols_exceed_unity(self):
        cfg = ModulationConfig(Scheme.LCSS, 256, 4)
        rng = np.random.default_rng(30)
        fields = rng.integers(0, 256, size=(100, 4))
        waves = modulate_fields(cfg, fields)
        ratios = [papr(w) for w in waves]
        assert min(ratios) > 1.0
        # direct evaluation agreement
        power = np.abs(waves[0]) ** 2
        assert ratios[0] == pytest.approx(power.max() / power.mean(), rel=1e-12)
