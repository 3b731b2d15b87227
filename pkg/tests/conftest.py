import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

COURSES = Path(__file__).resolve().parent.parent / "courses"


@pytest.fixture(scope="session")
def course_2023_path():
    return COURSES / "rcj2023.json"


@pytest.fixture(scope="session")
def course_rings_path():
    return COURSES / "rings.json"


@pytest.fixture(scope="session")
def rings_mission_path():
    return COURSES / "rings_mission.json"


@pytest.fixture(scope="session")
def course_2023(course_2023_path):
    from tello_arena.arena.course import load_course

    return load_course(course_2023_path)


@pytest.fixture(scope="session")
def course_rings(course_rings_path):
    from tello_arena.arena.course import load_course

    return load_course(course_rings_path)
