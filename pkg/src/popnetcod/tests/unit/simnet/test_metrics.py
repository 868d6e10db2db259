from popnetcod.domain.models.metrics import InterestOutcome, MetricsLog
from popnetcod.domain.services.simnet.metrics import (
    cache_hit_rate,
    cache_hit_series,
    load_reduction,
    overall_hit_rate,
    record_interest_outcome,
)
from tests.common.base_test import SimulatorBaseTestCase


class TestHitRate(SimulatorBaseTestCase):
    def setUp(self):
        super().setUp()
        self.log = MetricsLog()

    def test_outcome_samples(self):
        expected = {
            InterestOutcome.CS_HIT: 1,
            InterestOutcome.AGGREGATED: 1,
            InterestOutcome.FORWARDED: 0,
            InterestOutcome.DROPPED: 0,
        }
        for i, (outcome, h) in enumerate(expected.items()):
            record_interest_outcome(self.log, "r0", outcome, float(i))
            self.assertEqual(self.log.hit_samples["r0"][-1], (float(i), h))
        self.assertEqual(sum(self.log.outcomes["r0"].values()), 4)
        self.assertEqual(self.log.routers, ["r0"])

    def test_window_rates(self):
        for i in range(4):
            record_interest_outcome(self.log, "r0", InterestOutcome.CS_HIT, 0.5 * i)
        for i in range(4):
            outcome = InterestOutcome.CS_HIT if i % 2 else InterestOutcome.FORWARDED
            record_interest_outcome(self.log, "r0", outcome, 10.0 + i)
        self.assertEqual(cache_hit_rate(self.log, "r0", 0.0, 2.0), 1.0)
        self.assertEqual(cache_hit_rate(self.log, "r0", 10.0, 10.0), 0.5)
        self.assertIsNone(cache_hit_rate(self.log, "r0", 2.0, 5.0))
        self.assertIsNone(cache_hit_rate(self.log, "r1", 0.0, 5.0))
        self.assertAlmostEqual(overall_hit_rate(self.log, "r0"), 0.75)
        self.assertIsNone(overall_hit_rate(self.log, "r1"))

    def test_window_is_half_open(self):
        record_interest_outcome(self.log, "r0", InterestOutcome.CS_HIT, 5.0)
        self.assertIsNone(cache_hit_rate(self.log, "r0", 0.0, 5.0))
        self.assertEqual(cache_hit_rate(self.log, "r0", 5.0, 5.0), 1.0)

    def test_window_must_be_positive(self):
        with self.assertRaises(ValueError):
            cache_hit_rate(self.log, "r0", 0.0, 0.0)
        with self.assertRaises(ValueError):
            cache_hit_series(self.log, "r0", -1.0)

    def test_series_skips_empty_windows(self):
        record_interest_outcome(self.log, "r0", InterestOutcome.CS_HIT, 1.0)
        record_interest_outcome(self.log, "r0", InterestOutcome.FORWARDED, 9.0)
        record_interest_outcome(self.log, "r0", InterestOutcome.FORWARDED, 25.0)
        self.assertEqual(cache_hit_series(self.log, "r0", 10.0), [(0.0, 0.5), (20.0, 0.0)])


class TestLoadReduction(SimulatorBaseTestCase):
    def test_examples(self):
        self.assertEqual(load_reduction(MetricsLog(source_sent=100, client_received=100)), 0.0)
        self.assertEqual(load_reduction(MetricsLog(source_sent=50, client_received=100)), 0.5)
        self.assertIsNone(load_reduction(MetricsLog(source_sent=10, client_received=0)))
