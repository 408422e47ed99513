"""Smoke test for the roughtopo_py extension module."""

import json
import pathlib
import sys
from fractions import Fraction

import roughtopo_py

FIXTURE = pathlib.Path(__file__).resolve().parents[3] / "fixtures" / "four_point.json"


def main() -> int:
    space = roughtopo_py.Space.from_json(FIXTURE.read_text())
    assert len(space) == 4
    assert len(space.family("tau")) == 6
    assert len(space.family("deltap")) == 16

    assert space.accuracy("{u1,u3,u4}", "tau") == Fraction(1, 2)
    assert space.accuracy(["u1", "u3", "u4"], "p") == Fraction(3, 4)
    assert space.accuracy("{u1,u3,u4}", "dp") == 1
    assert space.accuracy("empty") is None

    assert space.lower("{u2,u4}", "p") == ["u4"]
    assert space.upper("{u2,u4}", "dp") == ["u2", "u4"]
    assert space.classify("{u1,u2}", "dp") == ("RD", True)
    assert space.rough_inclusion("{u2,u4}", "{u1,u2,u4}") == (True, True, True)
    assert space.is_member("u2", "{u1,u4}", "tau", strong=False)

    regions = space.regions("{u3,u4}")
    assert len(regions) == 24
    assert regions["boundary"] == ["u1", "u2"]
    assert regions["dp_boundary"] == []

    rows = space.accuracy_table(small_subsets=True)
    assert len(rows) == 14
    assert rows[-1] == (["u2", "u3", "u4"], "1/2", "3/4", "1")
    assert space.partition() == [["u1"], ["u2"], ["u3"], ["u4"]]

    other = roughtopo_py.Space(["a", "b", "c"], [("a", "b"), ("b", "a")])
    try:
        other.partition()
    except ValueError:
        pass
    else:
        raise AssertionError("partition should refuse this space")

    passed, findings = roughtopo_py.audit_sample(7, 20, 5)
    assert passed
    for line in findings.splitlines():
        assert json.loads(line)["seed"] == 7

    print("smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
