import itertools

import numpy as np

from popnetcod.domain.models.packets import NamePrefix
from popnetcod.domain.services.content_store import CsEntry
from popnetcod.domain.services.popularity import (
    EvictionQueue,
    PopularityState,
    RecentInterests,
    ToCacheTable,
    eviction_allowance,
    placement_score,
    target_cache_count,
)
from popnetcod.domain.services.rlnc import CodingMatrix
from tests.common.base_test import SimulatorBaseTestCase

TARGET = NamePrefix("/video0/seg0/480p", 0)
PREFIXES = {"target": TARGET, "other": NamePrefix("/video1/seg0/480p", 0)}


def fill(recent: RecentInterests, interests: dict, t: float = 0.0) -> None:
    for face, per_prefix in interests.items():
        for label, count in per_prefix.items():
            for _ in range(count):
                recent.record_interest(int(face), PREFIXES[label], t)


def entry_of_rank(rank: int, width: int, sigma: dict | None = None) -> CsEntry | None:
    if rank == 0:
        return None
    matrix = CodingMatrix(width, 1, TARGET)
    for i in range(rank):
        coeffs = np.zeros(width, dtype=np.uint8)
        coeffs[i] = 1
        matrix.append(coeffs, np.array([i], dtype=np.uint8))
    return CsEntry(TARGET, matrix, {int(f): n for f, n in (sigma or {}).items()})


class TestRecentInterests(SimulatorBaseTestCase):
    def setUp(self):
        super().setUp()
        self.cases = self.load_yaml("data/popularity_cases.yaml")

    def test_lambda_fixtures(self):
        for case in self.cases["lambda"]:
            with self.subTest(case["name"]):
                recent = RecentInterests(10.0)
                fill(recent, case["interests"])
                self.assertAlmostEqual(recent.lambda_(case["face"], TARGET), case["expected"], places=9)

    def test_records_are_per_face(self):
        recent = RecentInterests(10.0)
        recent.record_interest(0, TARGET, 1.0)
        recent.record_interest(0, TARGET, 2.0)
        self.assertEqual(recent.total(0), 2)
        self.assertEqual(recent.count(0, TARGET), 2)
        self.assertEqual(recent.total(1), 0)

    def test_expire_boundary(self):
        recent = RecentInterests(10.0)
        evictions = EvictionQueue()
        recent.record_interest(0, PREFIXES["other"], 9.999)
        recent.record_interest(0, TARGET, 10.0)
        recent.record_interest(0, TARGET, 10.001)
        recent.expire(evictions, 20.0)
        self.assertEqual([t for _, t in recent.entries(0)], [10.0, 10.001])
        self.assertEqual(list(evictions), [PREFIXES["other"]])
        self.assertEqual(recent.count(0, PREFIXES["other"]), 0)

    def test_expire_keeps_suffix_within_window(self):
        recent = RecentInterests(5.0)
        evictions = EvictionQueue()
        arrivals = [(0, "target", 0.5), (1, "other", 1.0), (0, "other", 3.0), (0, "target", 6.5), (1, "target", 7.0)]
        for face, label, t in arrivals:
            recent.record_interest(face, PREFIXES[label], t)
        recent.expire(evictions, 9.0)
        self.assertEqual(recent.entries(0), [(TARGET, 6.5)])
        self.assertEqual(recent.entries(1), [(TARGET, 7.0)])
        self.assertEqual(list(evictions), [TARGET, PREFIXES["other"], PREFIXES["other"]])
        self.assertEqual(evictions.pop(), TARGET)
        self.assertEqual(len(evictions), 2)

    def test_shares_sum_to_one(self):
        recent = RecentInterests(10.0)
        names = [NamePrefix(f"/video{v}/seg0/480p", g) for v in range(3) for g in range(2)]
        for i in range(40):
            recent.record_interest(0, names[int(self.rng.integers(len(names)))], float(i))
        self.assertAlmostEqual(sum(recent.lambda_(0, n) for n in names), 1.0, places=9)


class TestToCacheTable(SimulatorBaseTestCase):
    def test_marks_are_consumed_once_each(self):
        table = ToCacheTable()
        table.mark(TARGET)
        table.mark(TARGET)
        self.assertEqual(table.count(TARGET), 2)
        self.assertTrue(table.consume(TARGET))
        self.assertTrue(table.consume(TARGET))
        self.assertFalse(table.consume(TARGET))
        self.assertNotIn(TARGET, table)
        self.assertEqual(len(table), 0)

    def test_consume_absent_prefix(self):
        self.assertFalse(ToCacheTable().consume(TARGET))


class TestEquations(SimulatorBaseTestCase):
    def setUp(self):
        super().setUp()
        self.cases = self.load_yaml("data/popularity_cases.yaml")

    def test_target_cache_count_fixtures(self):
        for case in self.cases["target_cache_count"]:
            with self.subTest(**case):
                got = target_cache_count(case["lam"], case["capacity"], case["gen_size"])
                self.assertAlmostEqual(got, case["expected"], places=9)

    def _state(self, case: dict) -> PopularityState:
        state = PopularityState.create(case["downstream"], case["capacity"], 10.0)
        fill(state.recent, case["interests"])
        return state

    def test_placement_fixtures(self):
        for case in self.cases["placement"]:
            with self.subTest(case["name"]):
                state = self._state(case)
                entry = entry_of_rank(case["rank"], case["gen_size"], case["sigma"])
                score = placement_score(state, entry, TARGET, case["gen_size"], case["arrival"])
                self.assertAlmostEqual(score, case["expected"], places=9)

    def test_placement_ignores_face_order(self):
        case = self.cases["placement"][0]
        entry = entry_of_rank(case["rank"], case["gen_size"], case["sigma"])
        scores = set()
        for order in itertools.permutations(case["downstream"]):
            state = self._state({**case, "downstream": list(order)})
            scores.add(round(placement_score(state, entry, TARGET, case["gen_size"], case["arrival"]), 9))
        self.assertEqual(len(scores), 1)

    def test_eviction_fixtures(self):
        for case in self.cases["eviction"]:
            with self.subTest(case["name"]):
                state = self._state(case)
                entry = entry_of_rank(case["rank"], case["gen_size"])
                allowance = eviction_allowance(state, entry, case["gen_size"])
                self.assertEqual(allowance, case["expected"])
                self.assertLessEqual(allowance, case["rank"])

    def test_eviction_without_entry_or_faces(self):
        state = PopularityState.create([0, 1], 16, 10.0)
        self.assertEqual(eviction_allowance(state, None, 20), 0)
        lonely = PopularityState.create([], 16, 10.0)
        self.assertEqual(eviction_allowance(lonely, entry_of_rank(4, 20), 20), 4)
