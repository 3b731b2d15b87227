"""Event-log evaluation under the 2023 rubric and the ring-course rubric.

Pure functions over immutable event lists. Scoring consumes only
simulator-truth events, except Recording* which come from the controller
and are verified against the recording file by the match harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import config, events
from .arena.course import CourseSpec, line_length, line_nearest


class ScoringError(ValueError):
    pass


class UnorderedEvents(ScoringError):
    pass


class EmptySampleSet(ScoringError):
    pass


@dataclass
class CoverageTrace:
    covered_fraction: float
    heading_aligned_fraction: float   # over covered bins
    bins_total: int = 0
    bins_covered: int = 0


@dataclass
class LineItem:
    rule: str
    label: str
    points: int


@dataclass
class ScoreReport:
    profile: str
    line_items: list
    autonomous_subtotal: int          # clamped at >= 0
    interview_points: int
    total: int
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "profile": self.profile,
            "line_items": [
                {"rule": li.rule, "label": li.label, "points": li.points}
                for li in self.line_items
            ],
            "autonomous_subtotal": self.autonomous_subtotal,
            "interview_points": self.interview_points,
            "total": self.total,
            "warnings": list(self.warnings),
        }


BEHAVIOR_RULES = {
    "AscendHigh": "behavior-ascend-high",
    "DescendLow": "behavior-descend-low",
    "Spin360Left": "behavior-spin-left",
    "Spin360Right": "behavior-spin-right",
}


def _check_order(evs):
    for a, b in zip(evs[:-1], evs[1:]):
        if b.t < a.t:
            raise UnorderedEvents(f"event at t={b.t} after t={a.t}")


def _check_interview(points):
    if not 0 <= points <= 30:
        raise ValueError(f"interview points must be 0..30, got {points}")


def _scorable(evs):
    keep = (events.RECORDING_STARTED, events.RECORDING_STOPPED)
    return [e for e in evs if e.source == events.SIM_TRUTH or e.kind in keep]


def landing_points(distance_cm: float) -> int:
    if distance_cm <= config.LANDING_TIER_10_CM:
        return 10
    if distance_cm <= config.LANDING_TIER_5_CM:
        return 5
    return 0


def judge_landing(final_position, goal_center) -> int:
    """Landing tier from planar drone-center to goal-center distance."""
    dist_cm = 100.0 * math.hypot(final_position[0] - goal_center[0],
                                 final_position[1] - goal_center[1])
    return landing_points(dist_cm)


def coverage_tier(covered: float, aligned: float) -> int:
    if aligned < config.ALIGNED_MIN_FRACTION:
        return 0
    for threshold, points in config.COVERAGE_TIERS:
        if covered >= threshold:
            return points
    return 0


def score_2023(evs, trace: CoverageTrace = None, interview: int = 0) -> ScoreReport:
    """2023 rubric: takeoff 5, four behaviors 5 each, line leaves -5 each,
    following tier 15/20/25, recording 10, landing 5/10, victim 10;
    autonomous subtotal clamped at zero; interview added verbatim."""
    _check_interview(interview)
    _check_order(evs)
    evs = _scorable(evs)
    items = []
    warnings = []

    takeoffs = sum(1 for e in evs if e.kind == events.TAKEOFF)
    if takeoffs:
        items.append(LineItem("takeoff", "successful take-off", 5))
    if takeoffs > 1:
        warnings.append(f"{takeoffs} takeoffs; scored once")

    for behavior, rule in BEHAVIOR_RULES.items():
        if any(e.kind == events.BEHAVIOR_COMPLETED
               and e.payload.get("behavior") == behavior for e in evs):
            items.append(LineItem(rule, f"completed {behavior}", 5))

    leaves = sum(1 for e in evs if e.kind == events.LINE_LEAVE)
    if leaves:
        items.append(LineItem("line-leave", f"left the line {leaves}x",
                              config.LINE_LEAVE_PENALTY * leaves))

    if trace is not None:
        pts = coverage_tier(trace.covered_fraction, trace.heading_aligned_fraction)
        if pts:
            items.append(LineItem(
                "line-following",
                f"covered {trace.covered_fraction:.0%}, "
                f"aligned {trace.heading_aligned_fraction:.0%}",
                pts,
            ))

    started_at = next((i for i, e in enumerate(evs)
                       if e.kind == events.RECORDING_STARTED), None)
    if started_at is not None and any(
        e.kind == events.RECORDING_STOPPED and e.payload.get("frames", 0) > 0
        for e in evs[started_at + 1:]
    ):
        items.append(LineItem("recording", "valid recording", 10))

    landed = next((e for e in evs if e.kind == events.LANDED), None)
    if landed is not None and "distance_to_goal_cm" in landed.payload:
        dist = float(landed.payload["distance_to_goal_cm"])
        pts = landing_points(dist)
        if pts:
            items.append(LineItem("landing", f"landed {dist:.0f} cm from goal", pts))

    if any(e.kind == events.VICTIM_PICKUP for e in evs):
        items.append(LineItem("victim", "victim rescued", 10))

    subtotal = max(0, sum(li.points for li in items))
    return ScoreReport("2023", items, subtotal, interview,
                       subtotal + interview, warnings)


def score_rings(evs, interview: int = 0) -> ScoreReport:
    """Ring-course rubric: 10 points per distinct phase 0..6, -2 per
    ring touch, clamped at zero; interview added verbatim."""
    _check_interview(interview)
    _check_order(evs)
    evs = _scorable(evs)
    items = []

    phases = sorted({int(e.payload.get("phase", -1)) for e in evs
                     if e.kind == events.PHASE_COMPLETE
                     and 0 <= int(e.payload.get("phase", -1)) <= 6})
    for i in phases:
        items.append(LineItem("phase", f"phase {i} complete", 10))

    touches = sum(1 for e in evs if e.kind == events.RING_TOUCH)
    if touches:
        items.append(LineItem("ring-touch", f"touched rings {touches}x",
                              config.RING_TOUCH_PENALTY * touches))

    subtotal = max(0, sum(li.points for li in items))
    return ScoreReport("rings", items, subtotal, interview,
                       subtotal + interview, [])


def build_coverage_trace(samples, course: CourseSpec) -> CoverageTrace:
    """Arclength-bin coverage from ground-truth pose samples (t, x, y, yaw).

    A 5 cm bin counts as covered when some sample projects onto it within
    15 cm; the bin is heading-aligned when such a sample's yaw is within
    30 degrees of the local tangent.
    """
    if not samples:
        raise EmptySampleSet("no pose samples")
    total = line_length(course)
    n_bins = max(1, math.ceil(total / config.COVERAGE_BIN_M))
    covered = [False] * n_bins
    aligned = [False] * n_bins
    for _, x, y, yaw in samples:
        s, dist, tangent = line_nearest(course, (x, y))
        if dist > config.COVERAGE_DIST_TOL_M:
            continue
        b = min(n_bins - 1, int(s / config.COVERAGE_BIN_M))
        covered[b] = True
        err = (yaw - tangent + 180.0) % 360.0 - 180.0
        if abs(err) <= config.HEADING_ALIGN_TOL_DEG:
            aligned[b] = True
    n_cov = sum(covered)
    return CoverageTrace(
        covered_fraction=n_cov / n_bins,
        heading_aligned_fraction=(sum(aligned) / n_cov) if n_cov else 0.0,
        bins_total=n_bins,
        bins_covered=n_cov,
    )
