"""Command-line entry points.

Exit codes: 0 success, 2 usage or input error, 3 partial artifact.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import config, events, scoring
from .arena.course import CourseError, load_course
from .arena.render import course_preview
from .config import ControlGains
from .image import write_ppm
from .match import MatchConfig, load_trace, run_match, write_outputs
from .sim.framing import TruncatedStream, read_frames

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PARTIAL = 3


def _default_ports():
    raw = os.environ.get(config.PORTS_ENV_VAR)
    if not raw:
        return config.COMMAND_PORT, config.VIDEO_PORT
    try:
        cmd, video = (int(v) for v in raw.split(","))
        return cmd, video
    except ValueError:
        raise SystemExit(
            f"{config.PORTS_ENV_VAR} must be '<command>,<video>', got {raw!r}")


def _load_gains(path):
    if not path:
        return None
    doc = json.loads(Path(path).read_text())
    return ControlGains(**doc)


def build_parser():
    p = argparse.ArgumentParser(prog="tello-arena",
                                description="Tello drone emulator, autonomous "
                                            "mission client, and match scoring")
    sub = p.add_subparsers(dest="cmd", required=True)
    cmd_port, video_port = _default_ports()

    sim = sub.add_parser("sim", help="run the emulator as a network service")
    sim.add_argument("--course", required=True)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--port", type=int, default=cmd_port)
    sim.add_argument("--video-port", type=int, default=video_port)
    sim.add_argument("--fast", action="store_true",
                     help="free-run the virtual clock instead of pacing to wall time")
    sim.add_argument("--events", default="sim_events.jsonl")
    sim.add_argument("--max-sim-time", type=float, default=None)

    fly = sub.add_parser("fly", help="fly the autonomous mission over the network")
    fly.add_argument("--host", default="127.0.0.1")
    fly.add_argument("--port", type=int, default=cmd_port)
    fly.add_argument("--video-port", type=int, default=video_port)
    fly.add_argument("--mission", choices=("2023", "rings"), default="2023")
    fly.add_argument("--script", help="mission script (rings)")
    fly.add_argument("--record-dir", default=".")
    fly.add_argument("--gains", help="JSON file overriding control gains")
    fly.add_argument("--rescue", action="store_true",
                     help="attempt the optional victim pickup")
    fly.add_argument("--events-out", default="fly_events.jsonl")
    fly.add_argument("--max-seconds", type=float, default=300.0)

    match = sub.add_parser("match", help="simulate + fly + score in one process")
    match.add_argument("--course", required=True)
    match.add_argument("--seed", type=int, required=True)
    match.add_argument("--mission", choices=("2023", "rings"), default="2023")
    match.add_argument("--script", help="mission script (rings)")
    match.add_argument("--record-dir", default=".")
    match.add_argument("--interview", type=int, default=0)
    match.add_argument("--no-rescue", action="store_true")
    match.add_argument("--gains")
    match.add_argument("--events", default="match_events.jsonl")
    match.add_argument("--trace", default="match_trace.json")
    match.add_argument("--report", default="match_report.json")

    score = sub.add_parser("score", help="re-score a stored event log")
    score.add_argument("--events", required=True)
    score.add_argument("--profile", choices=("2023", "rings"), default="2023")
    score.add_argument("--interview", type=int, default=0)
    score.add_argument("--trace", help="coverage trace JSON (2023)")
    score.add_argument("--report", help="write the report here instead of stdout")

    preview = sub.add_parser("preview", help="render a course to a PPM image")
    preview.add_argument("--course", required=True)
    preview.add_argument("--out", required=True)
    preview.add_argument("--px-per-m", type=int, default=100)

    replay = sub.add_parser("replay", help="unpack a TFRM recording to PPM frames")
    replay.add_argument("--recording", required=True)
    replay.add_argument("--out-dir", required=True)
    return p


def cmd_sim(args) -> int:
    if args.fast and args.seed is None:
        print("error: --fast requires --seed (determinism contract)",
              file=sys.stderr)
        return EXIT_INPUT
    seed = args.seed if args.seed is not None else 0
    try:
        course = load_course(args.course)
    except CourseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    from .sim.server import PortBindFailure, SimServer
    from .sim.world import SimWorld

    world = SimWorld(course, seed=seed)
    try:
        server = SimServer(world, command_port=args.port,
                           video_port=args.video_port, fast=args.fast,
                           events_path=args.events)
    except PortBindFailure as e:
        print(f"error: cannot bind ports: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(f"listening: command udp/{server.command_port} "
          f"video tcp/{server.video_port} course={course.name!r} seed={seed}")
    sys.stdout.flush()
    try:
        server.run(max_sim_time=args.max_sim_time)
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    print(f"event log written to {args.events}")
    return EXIT_OK


def cmd_fly(args) -> int:
    import time

    from . import protocol
    from .mission.controller import MissionController
    from .mission.link import UdpLink
    from .mission.waypoints import CommandRejected, WaypointRunner, \
        load_mission_script

    link = UdpLink(args.host, args.port, args.video_port)
    try:
        if args.mission == "rings":
            if not args.script:
                print("error: --mission rings needs --script", file=sys.stderr)
                return EXIT_INPUT
            try:
                _, lines, checkpoints = load_mission_script(args.script)
            except CommandRejected as e:
                print(f"error: {e}", file=sys.stderr)
                return EXIT_INPUT
            runner = WaypointRunner(link, lines, checkpoints)
            evs = runner.run()
            events.write_events(args.events_out, evs)
            return EXIT_OK if not runner.aborted else EXIT_PARTIAL

        record = str(Path(args.record_dir) / "recording.tfrm")
        controller = MissionController(link, record, rescue=args.rescue,
                                       gains=_load_gains(args.gains))
        link.send_line("command")
        link.send_line("streamon")
        link.connect_video()
        t0 = time.monotonic()
        period = 1.0 / config.VIDEO_FPS
        n = 0
        while not controller.done and time.monotonic() - t0 < args.max_seconds:
            controller.tick()
            n += 1
            target = t0 + n * period
            delay = target - time.monotonic()
            if delay > 0:
                time.sleep(delay)
        controller.finish()
        events.write_events(args.events_out, controller.events)
        print(f"mission ended: {controller.state.phase}; "
              f"events in {args.events_out}")
        return EXIT_OK
    finally:
        link.close()


def cmd_match(args) -> int:
    if args.mission == "rings" and not args.script:
        print("error: --mission rings needs --script", file=sys.stderr)
        return EXIT_INPUT
    try:
        cfg = MatchConfig(
            course_path=args.course,
            seed=args.seed,
            mission=args.mission,
            script_path=args.script,
            record_dir=args.record_dir,
            interview=args.interview,
            rescue=not args.no_rescue,
            gains=_load_gains(args.gains),
        )
        result = run_match(cfg)
    except (CourseError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    write_outputs(result, args.events, args.trace, args.report)
    r = result.report
    print(f"match complete in {result.sim_time:.1f} s simulated")
    for li in r.line_items:
        print(f"  {li.points:+4d}  {li.rule:22} {li.label}")
    print(f"autonomous subtotal: {r.autonomous_subtotal}")
    print(f"total with interview: {r.total}")
    return EXIT_OK


def cmd_score(args) -> int:
    try:
        evs = events.read_events(args.events)
        trace = load_trace(args.trace) if args.trace else None
        if args.profile == "2023":
            report = scoring.score_2023(evs, trace, args.interview)
        else:
            report = scoring.score_rings(evs, args.interview)
    except (events.EventFormatError, scoring.ScoringError, ValueError,
            OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_preview(args) -> int:
    try:
        course = load_course(args.course)
        frame = course_preview(course, args.px_per_m)
    except (CourseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    write_ppm(args.out, frame)
    print(f"wrote {frame.shape[1]}x{frame.shape[0]} preview to {args.out}")
    return EXIT_OK


def cmd_replay(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = 0
    try:
        for seq, t_ms, frame in read_frames(args.recording):
            write_ppm(out_dir / f"frame_{n:04d}.ppm", frame)
            n += 1
    except TruncatedStream as e:
        print(f"warning: truncated recording after {n} frames: {e}",
              file=sys.stderr)
        return EXIT_PARTIAL
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {n} frames to {out_dir}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "sim": cmd_sim,
        "fly": cmd_fly,
        "match": cmd_match,
        "score": cmd_score,
        "preview": cmd_preview,
        "replay": cmd_replay,
    }[args.cmd]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
