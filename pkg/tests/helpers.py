"""Shared generators for randomized protocol tests."""

import random

from tello_arena import protocol as proto


def random_waypoint(rng: random.Random):
    while True:
        x, y, z = (rng.randint(-500, 500) for _ in range(3))
        if max(abs(x), abs(y), abs(z)) >= 20:
            return x, y, z


def random_command(rng: random.Random) -> proto.Command:
    """Uniformly-ish sample every Command variant at valid argument ranges."""
    kind = rng.randrange(15)
    if kind == 0:
        return proto.ModeEnter()
    if kind == 1:
        return proto.TakeOff()
    if kind == 2:
        return proto.Land()
    if kind == 3:
        return proto.StreamOn()
    if kind == 4:
        return proto.StreamOff()
    if kind == 5:
        return proto.Emergency()
    if kind == 6:
        return proto.Move(rng.choice(proto.MOVE_DIRECTIONS), rng.randint(20, 500))
    if kind == 7:
        return proto.Rotate(rng.choice(proto.ROTATE_SENSES), rng.randint(1, 360))
    if kind == 8:
        return proto.Flip(rng.choice(proto.FLIP_DIRECTIONS))
    if kind == 9:
        x, y, z = random_waypoint(rng)
        return proto.Go(x, y, z, rng.randint(10, 100))
    if kind == 10:
        x1, y1, z1 = random_waypoint(rng)
        x2, y2, z2 = random_waypoint(rng)
        return proto.Curve(x1, y1, z1, x2, y2, z2, rng.randint(10, 100))
    if kind == 11:
        return proto.SetSpeed(rng.randint(10, 100))
    if kind == 12:
        return proto.Rc(*(rng.randint(-100, 100) for _ in range(4)))
    if kind == 13:
        ssid = "net" + str(rng.randint(0, 999))
        return proto.Wifi(ssid, "pw" + str(rng.randint(0, 999)))
    return proto.Read(rng.choice(list(proto.ReadQuery)))


def mutate_line(rng: random.Random, line: str) -> str:
    """Corrupt a valid wire line so that it must be rejected."""
    tokens = line.split()
    mode = rng.randrange(4)
    if mode == 0:                       # unknown head token
        tokens[0] = rng.choice(["fwd", "takeof", "hover", "xyzzy", "landd", "up?"])
    elif mode == 1:                     # wrong arity
        if len(tokens) == 1 or rng.random() < 0.5:
            tokens.append("7")
        else:
            tokens.pop()
            if not tokens:
                tokens = ["up"]
    elif mode == 2:                     # malformed number where one is expected
        numeric = [i for i, t in enumerate(tokens[1:], 1) if t.lstrip("+-").isdigit()]
        if not numeric:
            return "up twenty"
        tokens[rng.choice(numeric)] = rng.choice(["12x", "1.5.2", "--3", "nan2"])
    else:                               # out of declared range
        choices = [
            "forward 5", "back 501", "up 19", "cw 0", "ccw 361", "speed 9",
            "speed 101", "rc 120 0 0 0", "rc 0 0 0 -101", "go 10 5 5 50",
            "go 600 0 0 50", "curve 20 0 0 40 40 0 300", "flip q",
        ]
        return rng.choice(choices)
    return " ".join(tokens)
