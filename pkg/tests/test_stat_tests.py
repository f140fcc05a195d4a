"""
统计检验：参考向量、边界条件和检验组行为
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bits_of
from lightqrng.domain.exceptions import DomainError, InsufficientInputError
from lightqrng.domain.models.battery import BatteryReport, TestResult, TestStatus
from lightqrng.domain.models.extraction import BitBlock
from lightqrng.domain.stat_tests import (
    SUPPORTED_TESTS,
    ApproximateEntropyTest,
    BlockFrequencyTest,
    CumulativeSumsTest,
    LongestRunOfOnesTest,
    MonobitFrequencyTest,
    RunsTest,
    SerialTest,
    StatisticalTestFactory,
    TestBattery,
    apply_test,
    run_battery,
)
from lightqrng.domain.stat_tests.battery import input_digest
from lightqrng.domain.stat_tests.run_tests import longest_runs
from lightqrng.domain.stat_tests.template_tests import pattern_counts


def random_bits(seed, n=1_000_000):
    return np.random.default_rng(seed).integers(0, 2, n, dtype=np.uint8)


class TestReferenceVectors:
    def test_monobit(self, nist_100):
        assert apply_test("monobit_frequency", nist_100).p_value == pytest.approx(0.109599, abs=1e-6)

    def test_block_frequency(self, nist_100):
        result = apply_test("block_frequency", nist_100, {"block_size": 10})
        assert result.statistic == pytest.approx(7.2)
        assert result.p_value == pytest.approx(0.706438, abs=1e-6)

    def test_runs(self, nist_100):
        result = apply_test("runs", nist_100)
        assert result.statistic == 52
        assert result.p_value == pytest.approx(0.500798, abs=1e-6)

    def test_longest_run(self, nist_128):
        result = apply_test("longest_run_of_ones", nist_128)
        assert result.statistic == pytest.approx(4.882605, abs=1e-5)
        assert result.p_value == pytest.approx(0.180609, abs=1e-4)

    def test_cumulative_sums(self, nist_100):
        result = apply_test("cumulative_sums", nist_100)
        assert CumulativeSumsTest.z_values(nist_100) == (16, 19)
        assert result.sub_p_values == pytest.approx((0.219194, 0.114866), abs=1e-6)
        assert result.p_value == pytest.approx(0.114866, abs=1e-6)

    def test_approximate_entropy(self, nist_100):
        result = apply_test("approximate_entropy", nist_100, {"pattern_length": 2})
        assert result.statistic == pytest.approx(5.550792, abs=1e-5)
        assert result.p_value == pytest.approx(0.235301, abs=1e-6)

    def test_serial(self):
        result = apply_test("serial", bits_of("0011011101"), {"pattern_length": 3})
        assert result.statistic == pytest.approx(1.6)
        assert result.sub_p_values == pytest.approx((0.808792, 0.670320), abs=1e-6)

    def test_discrete_fourier(self, nist_100):
        assert apply_test("discrete_fourier", nist_100).p_value == pytest.approx(0.168669, abs=1e-4)


class TestEdgeCases:
    def test_alternating_monobit(self):
        bits = np.tile([0, 1], 500)
        assert apply_test("monobit_frequency", bits).p_value == 1.0

    def test_all_ones_monobit(self):
        result = apply_test("monobit_frequency", np.ones(1000, dtype=np.uint8))
        assert result.p_value < 1e-15
        assert not result.passed

    def test_too_short_names_test(self):
        with pytest.raises(InsufficientInputError, match="longest_run_of_ones") as info:
            apply_test("longest_run_of_ones", np.ones(100, dtype=np.uint8))
        assert info.value.required == 128
        assert info.value.actual == 100

    @pytest.mark.parametrize(
        "test_id, min_n",
        [
            ("monobit_frequency", 2),
            ("block_frequency", 8),
            ("runs", 2),
            ("longest_run_of_ones", 128),
            ("cumulative_sums", 2),
            ("approximate_entropy", 2),
            ("serial", 2),
            ("discrete_fourier", 2),
        ],
    )
    def test_minimum_lengths(self, test_id, min_n):
        bits = random_bits(0, 1000)
        result = apply_test(test_id, bits[:min_n])
        assert 0.0 <= result.p_value <= 1.0
        with pytest.raises(InsufficientInputError):
            apply_test(test_id, bits[: min_n - 1])

    def test_runs_prerequisite(self):
        bits = np.zeros(1000, dtype=np.uint8)
        bits[:10] = 1
        result = apply_test("runs", bits)
        assert result.p_value == 0.0
        assert result.statistic is None

    def test_block_size_shrinks_for_short_input(self):
        test = BlockFrequencyTest(block_size=128)
        assert test.effective_block_size(100) == 12
        assert test.effective_block_size(1000) == 128
        assert 0.0 <= test.evaluate(random_bits(1, 100)).p_value <= 1.0

    def test_pattern_length_auto(self):
        assert SerialTest().effective_pattern_length(10**6) == 16
        assert SerialTest().effective_pattern_length(100) == 3
        assert SerialTest().effective_pattern_length(4) == 2
        assert ApproximateEntropyTest().effective_pattern_length(10**6) == 10
        assert ApproximateEntropyTest().effective_pattern_length(100) == 1

    def test_pattern_length_too_large(self):
        with pytest.raises(DomainError):
            apply_test("serial", random_bits(2, 100), {"pattern_length": 10})

    def test_unknown_parameter(self):
        with pytest.raises(DomainError):
            MonobitFrequencyTest(block_size=3)
        with pytest.raises(DomainError):
            StatisticalTestFactory.create_test("runs", pattern_length=2)

    def test_unknown_test(self):
        with pytest.raises(DomainError):
            apply_test("birthday_spacings", random_bits(3, 100))

    def test_accepts_bit_block(self, nist_100):
        block = BitBlock.from_bits(nist_100)
        assert apply_test("monobit_frequency", block) == apply_test("monobit_frequency", nist_100)

    def test_non_binary_input(self):
        with pytest.raises(DomainError):
            apply_test("monobit_frequency", [0, 1, 2])

    def test_single_p_value_has_no_sub_values(self, nist_100):
        assert apply_test("runs", nist_100).sub_p_values == ()


class TestHelpers:
    def test_pattern_counts_wrap(self):
        assert pattern_counts(bits_of("0011011101"), 3).tolist() == [0, 1, 1, 2, 1, 2, 2, 1]
        assert pattern_counts(bits_of("0101"), 0).tolist() == [4]

    def test_longest_runs(self):
        rows = np.array([[1, 1, 0, 1], [0, 0, 0, 0], [1, 1, 1, 1], [0, 1, 1, 1]])
        assert longest_runs(rows).tolist() == [2, 0, 4, 3]

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.lists(st.integers(0, 1), min_size=8, max_size=8), min_size=1, max_size=20))
    def test_longest_runs_matches_scan(self, rows):
        def scan(row):
            best = run = 0
            for b in row:
                run = run + 1 if b else 0
                best = max(best, run)
            return best

        assert longest_runs(np.array(rows)).tolist() == [scan(r) for r in rows]

    def test_input_digest(self):
        assert input_digest(np.array([1, 0], dtype=np.uint8)) != input_digest(
            np.array([1, 0, 0], dtype=np.uint8)
        )
        assert len(input_digest(np.ones(5, dtype=np.uint8))) == 64

    def test_result_threshold(self):
        at_alpha = TestResult(test_id="t", p_value=0.01, alpha=0.01, statistic=1.0, n_bits=10)
        below = TestResult(test_id="t", p_value=0.0099, alpha=0.01, statistic=1.0, n_bits=10)
        assert at_alpha.passed
        assert below.status == TestStatus.FAILED

    def test_invalid_p_value(self):
        with pytest.raises(DomainError):
            TestResult(test_id="t", p_value=1.5, alpha=0.01, statistic=None, n_bits=1)


class TestBatteryRun:
    def test_supported_tests(self):
        assert SUPPORTED_TESTS == sorted(
            [
                "approximate_entropy",
                "block_frequency",
                "cumulative_sums",
                "discrete_fourier",
                "longest_run_of_ones",
                "monobit_frequency",
                "runs",
                "serial",
            ]
        )

    def test_all_zero_input_fails(self):
        report = run_battery(np.zeros(1_000_000, dtype=np.uint8))
        assert not report.passed
        for test_id in ("monobit_frequency", "runs", "approximate_entropy"):
            assert report.result(test_id).status == TestStatus.FAILED
        assert report.result("monobit_frequency").p_value < 1e-15
        assert report.result("runs").p_value < 1e-15

    def test_uniform_input_passes(self):
        report = run_battery(random_bits(11))
        assert report.passed
        assert len(report.results) == 8

    def test_idempotent_and_thread_independent(self):
        bits = random_bits(5, 100_000)
        first = run_battery(bits).to_dict()
        assert run_battery(bits).to_dict() == first
        assert run_battery(bits, workers=4).to_dict() == first

    def test_results_sorted(self):
        report = run_battery(random_bits(6, 10_000))
        ids = [r.test_id for r in report.results]
        assert ids == sorted(ids)
        assert BatteryReport.from_dict(report.to_dict()) == report

    def test_complement_symmetry(self):
        bits = random_bits(7, 20_000)
        flipped = 1 - bits
        for test_id in (
            "monobit_frequency",
            "block_frequency",
            "runs",
            "cumulative_sums",
            "serial",
            "approximate_entropy",
            "discrete_fourier",
        ):
            a, b = apply_test(test_id, bits), apply_test(test_id, flipped)
            assert a.p_value == pytest.approx(b.p_value, rel=1e-9, abs=1e-12), test_id

    def test_bias_detected(self):
        rng = np.random.default_rng(8)
        bits = (rng.random(100_000) < 0.52).astype(np.uint8)
        assert not apply_test("monobit_frequency", bits).passed

    def test_short_input_skips(self):
        report = run_battery(random_bits(9, 100))
        assert report.result("longest_run_of_ones").status == TestStatus.SKIPPED
        assert report.result("longest_run_of_ones").p_value is None

    def test_disable_and_params(self):
        report = run_battery(
            random_bits(10, 10_000),
            params={"block_frequency": {"block_size": 100}},
            disabled=["discrete_fourier"],
        )
        assert "discrete_fourier" not in [r.test_id for r in report.results]
        with pytest.raises(DomainError):
            run_battery(random_bits(10, 1000), disabled=["nope"])
        with pytest.raises(DomainError):
            run_battery(random_bits(10, 1000), params={"nope": {}})

    def test_empty_input(self):
        with pytest.raises(DomainError):
            run_battery([])

    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    def test_invalid_alpha(self, alpha):
        with pytest.raises(DomainError):
            run_battery(random_bits(1, 1000), alpha=alpha)

    def test_manage_tests(self):
        battery = TestBattery([RunsTest(), LongestRunOfOnesTest()])
        assert battery.disable_test("runs")
        assert not battery.disable_test("serial")
        assert battery.update_test_params("longest_run_of_ones", {})
        report = battery.run(random_bits(4, 1000))
        assert [r.test_id for r in report.results] == ["longest_run_of_ones"]
        assert battery.remove_test("runs")
        assert battery.get_test("runs") is None

    @pytest.mark.slow
    def test_null_rejection_rate(self):
        failures = {test_id: 0 for test_id in SUPPORTED_TESTS}
        params = {"serial": {"pattern_length": 5}, "approximate_entropy": {"pattern_length": 5}}
        for seed in range(200):
            for result in run_battery(random_bits(seed, 10_000), params=params).results:
                failures[result.test_id] += result.status == TestStatus.FAILED
        for test_id, count in failures.items():
            assert count <= 10, test_id

    def test_monobit_p_value_falls_with_bias(self):
        u = np.random.default_rng(21).random(1_000_000)
        p_values = [
            apply_test("monobit_frequency", (u < 0.5 + bias).astype(np.uint8)).p_value
            for bias in (0.01, 0.05, 0.1)
        ]
        assert all(b <= a for a, b in zip(p_values, p_values[1:]))
        assert p_values[0] < 0.01
