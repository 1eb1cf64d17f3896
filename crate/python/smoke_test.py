"""Smoke test for the equigh Python module."""

import math

import equigh


def main():
    x = equigh.GSpace.sample("paper:z3_threepoints")
    y = equigh.GSpace.sample("paper:z3_threepoints_scaled2")
    assert x.exact and len(x) == 3 and x.group_order == 3
    assert equigh.gh(x, y, mode="exact")["value"] == "1/2"
    assert equigh.gh(x.quotient(), y.quotient())["value"] == "0/1"

    pair = equigh.GSpace.from_matrix([["0", "1"], ["1", "0"]], group="Z2", action=[[0, 1], [1, 0]])
    assert pair.sep() == "1/1"
    assert equigh.GSpace.from_json(pair.to_json()).to_json() == pair.to_json()

    six_x = equigh.GSpace.sample("paper:sixpoint_X")
    six_y = equigh.GSpace.sample("paper:sixpoint_Y").pullback(six_x, [0, 2])
    report = equigh.interleaving_lower(six_x, six_y, degrees=[0])
    assert report["certified_lower_bound"] == "1/2"
    minus = [b for b in six_x.eigen_barcodes(1, degrees=[0]) if b["label"]["lambda"] == 1][0]
    assert minus["bars"] == [["0/1", "1/1"]] * 3

    circle = equigh.GSpace.sample("circle_uniform,points=12")
    assert abs(circle.sep() - math.pi) < 1e-12
    assert circle.net(1.0)["cardinality"] >= 2

    assert abs(equigh.zeta(1) - 2 * math.pi / 3) < 1e-15
    assert [equigh.count_homs("Z2", j) for j in range(1, 9)] == [1, 2, 4, 10, 26, 76, 232, 764]
    assert equigh.verify(suite="random", count=20, seed=3)["failures"] == 0

    try:
        equigh.GSpace.from_matrix([[0, 1], [2, 0]])
    except equigh.EquighError as e:
        assert "dist" in str(e) or "symmetric" in str(e)
    else:
        raise AssertionError("asymmetric matrix accepted")
    print("equigh smoke test ok")


if __name__ == "__main__":
    main()
