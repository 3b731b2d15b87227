import random

import pytest

from tello_arena.events import MissionEvent
from tello_arena.scoring import (
    CoverageTrace,
    EmptySampleSet,
    UnorderedEvents,
    build_coverage_trace,
    judge_landing,
    score_2023,
    score_rings,
)
from scoring_oracle import (
    oracle_2023,
    oracle_rings,
    random_event_list,
    random_trace,
)


def ev(t, kind, **payload):
    return MissionEvent(t, kind, payload)


PERFECT_TRACE = CoverageTrace(1.0, 1.0)


def perfect_run_events():
    return [
        ev(1.0, "TakeOff"),
        ev(5.0, "BehaviorCompleted", behavior="StartRecording"),
        ev(5.1, "RecordingStarted", frames=0),
        ev(10.0, "BehaviorCompleted", behavior="AscendHigh"),
        ev(20.0, "BehaviorCompleted", behavior="Spin360Left"),
        ev(30.0, "VictimPickup"),
        ev(40.0, "BehaviorCompleted", behavior="DescendLow"),
        ev(50.0, "BehaviorCompleted", behavior="Spin360Right"),
        ev(60.0, "BehaviorCompleted", behavior="StopRecording"),
        ev(60.1, "RecordingStopped", frames=550),
        ev(70.0, "Landed", distance_to_goal_cm=6.0),
    ]


class TestRubricFixtures:
    def test_takeoff_only_scores_five(self):
        report = score_2023([ev(0.5, "TakeOff")])
        assert report.autonomous_subtotal == 5
        assert report.total == 5

    def test_two_line_leaves_clamp_to_zero(self):
        report = score_2023([
            ev(1.0, "TakeOff"), ev(2.0, "LineLeave"), ev(3.0, "LineLeave"),
        ])
        assert report.autonomous_subtotal == 0
        assert report.total == 0

    def test_perfect_run_is_eighty(self):
        report = score_2023(perfect_run_events(), PERFECT_TRACE)
        assert report.autonomous_subtotal == 80

    def test_rings_seven_phases(self):
        evs = [ev(float(i), "PhaseComplete", phase=i) for i in range(7)]
        assert score_rings(evs).total == 70

    def test_rings_with_touches(self):
        evs = [ev(float(i), "PhaseComplete", phase=i) for i in range(7)]
        evs += [ev(10.0 + i, "RingTouch", ring=0) for i in range(3)]
        assert score_rings(evs).total == 64

    def test_rings_empty(self):
        assert score_rings([]).total == 0

    def test_interview_added_verbatim(self):
        assert score_2023([ev(0.5, "TakeOff")], interview=30).total == 35
        assert score_rings([], interview=30).total == 30

    def test_interview_range_checked(self):
        with pytest.raises(ValueError):
            score_2023([], interview=31)
        with pytest.raises(ValueError):
            score_rings([], interview=-1)


class TestJudgeLanding:
    def test_perfect(self):
        assert judge_landing((1.0, 1.0), (1.0, 1.0)) == 10

    def test_inside_goal_circle(self):
        assert judge_landing((1.15, 1.0), (1.0, 1.0)) == 5

    def test_outside(self):
        assert judge_landing((1.25, 1.0), (1.0, 1.0)) == 0


class TestRuleDetails:
    def test_duplicate_behavior_scores_once(self):
        evs = [ev(1.0, "TakeOff"),
               ev(2.0, "BehaviorCompleted", behavior="AscendHigh"),
               ev(3.0, "BehaviorCompleted", behavior="AscendHigh")]
        assert score_2023(evs).total == 10

    def test_multiple_takeoffs_warn(self):
        report = score_2023([ev(1.0, "TakeOff"), ev(9.0, "TakeOff")])
        assert report.autonomous_subtotal == 5
        assert report.warnings

    def test_unordered_events(self):
        with pytest.raises(UnorderedEvents):
            score_2023([ev(5.0, "TakeOff"), ev(1.0, "LineLeave")])

    def test_controller_claims_ignored(self):
        evs = [ev(1.0, "TakeOff"),
               MissionEvent(2.0, "BehaviorCompleted",
                            {"behavior": "AscendHigh"}, "controller-claim"),
               MissionEvent(3.0, "VictimPickup", {}, "controller-claim")]
        assert score_2023(evs).total == 5

    def test_recording_needs_order_and_frames(self):
        stopped_first = [ev(1.0, "RecordingStopped", frames=9),
                         ev(2.0, "RecordingStarted", frames=0)]
        assert score_2023(stopped_first).total == 0
        empty = [ev(1.0, "RecordingStarted", frames=0),
                 ev(2.0, "RecordingStopped", frames=0)]
        assert score_2023(empty).total == 0
        good = [ev(1.0, "RecordingStarted", frames=0),
                ev(2.0, "RecordingStopped", frames=7)]
        assert score_2023(good).total == 10

    def test_coverage_tiers(self):
        base = [ev(1.0, "TakeOff")]
        for covered, aligned, want in [
            (1.0, 1.0, 25), (0.96, 0.8, 25), (0.80, 0.9, 20),
            (0.60, 0.85, 15), (0.40, 1.0, 0), (0.99, 0.79, 0),
        ]:
            total = score_2023(base, CoverageTrace(covered, aligned)).total
            assert total == 5 + want, (covered, aligned)

    def test_line_items_cite_rules(self):
        report = score_2023(perfect_run_events(), PERFECT_TRACE)
        rules = {li.rule for li in report.line_items}
        assert rules == {"takeoff", "behavior-ascend-high", "behavior-descend-low",
                         "behavior-spin-left", "behavior-spin-right",
                         "line-following", "recording", "landing", "victim"}


class TestMonotonicity:
    def test_line_leave_never_increases(self):
        rng = random.Random(21)
        for _ in range(200):
            evs = random_event_list(rng)
            trace = random_trace(rng)
            before = score_2023(evs, trace).total
            t = evs[-1].t + 1.0 if evs else 1.0
            after = score_2023(evs + [ev(t, "LineLeave")], trace).total
            assert after <= before

    def test_new_behavior_never_decreases(self):
        rng = random.Random(22)
        for _ in range(200):
            evs = random_event_list(rng)
            trace = random_trace(rng)
            before = score_2023(evs, trace).total
            t = evs[-1].t + 1.0 if evs else 1.0
            after = score_2023(
                evs + [ev(t, "BehaviorCompleted", behavior="DescendLow")], trace
            ).total
            assert after >= before

    def test_subtotal_never_negative(self):
        rng = random.Random(23)
        for _ in range(500):
            evs = random_event_list(rng)
            assert score_2023(evs, random_trace(rng)).autonomous_subtotal >= 0


class TestOracleEquivalence:
    def test_2023_matches_brute_force(self):
        rng = random.Random(99)
        for _ in range(2000):
            evs = random_event_list(rng)
            trace = random_trace(rng)
            interview = rng.choice([0, 7, 30])
            assert score_2023(evs, trace, interview).total == oracle_2023(
                evs, trace, interview
            )

    def test_rings_matches_brute_force(self):
        rng = random.Random(98)
        for _ in range(1000):
            evs = random_event_list(rng)
            interview = rng.choice([0, 15])
            assert score_rings(evs, interview).total == oracle_rings(evs, interview)


class TestCoverageTrace:
    def test_full_line_walk(self, course_2023):
        import math

        pts = course_2023.line.points
        samples = []
        t = 0.0
        for (ax, ay), (bx, by) in zip(pts[:-1], pts[1:]):
            seg = math.hypot(bx - ax, by - ay)
            heading = math.degrees(math.atan2(bx - ax, by - ay))
            n = int(seg / 0.02)
            for i in range(n):
                f = i / n
                samples.append((t, ax + f * (bx - ax), ay + f * (by - ay), heading))
                t += 0.1
        trace = build_coverage_trace(samples, course_2023)
        assert trace.covered_fraction == 1.0
        assert trace.heading_aligned_fraction == 1.0

    def test_hover_covers_one_bin(self, course_2023):
        x, y = course_2023.line.points[0]
        samples = [(0.1 * i, x, y, 0.0) for i in range(50)]
        trace = build_coverage_trace(samples, course_2023)
        assert trace.bins_covered == 1
        assert trace.covered_fraction == pytest.approx(1 / trace.bins_total)

    def test_empty_samples(self, course_2023):
        with pytest.raises(EmptySampleSet):
            build_coverage_trace([], course_2023)

    def test_far_samples_do_not_cover(self, course_2023):
        samples = [(0.1, 2.0, 1.9, 0.0)]  # > 15 cm from any leg
        trace = build_coverage_trace(samples, course_2023)
        assert trace.bins_covered == 0
