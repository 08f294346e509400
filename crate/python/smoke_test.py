"""Smoke test for the rote_py extension.

Build and install it first, e.g. `pip install ./crates/py`, then run
`python python/smoke_test.py`.
"""

import json

import rote_py as r


def main():
    q = r.q_prefix(40)
    assert q.startswith("0110010011010011001101"), q
    assert q[11:21] == "1001100110"
    assert r.critical_exponent(r.q_prefix(2000)) == "5/2"
    assert r.factor_complexity(r.q_prefix(2000), 16) == 32
    assert r.abelian_complexity(r.q_prefix(2000), 7) in (2, 3, 4)
    assert r.is_rote(r.q_prefix(500))

    depth, longest = r.search()
    assert depth == 38 and len(longest) == 8

    sys = r.NumerationSystem("dt_q")
    assert sys.recurrence == "X^4-2X^3+X^2-X"
    assert sys.represent(8) == [3, 0, 1]
    assert sys.evaluate([3, 0, 1]) == 8
    assert "".join(sys.letter(n) for n in range(40)) == q

    e = r.Engine("dt_h")
    assert e.eval("Ax,y x+y=y+x")
    assert not e.eval("Ax,y x<=y")
    e.define("even", "Ey x=2*y")
    assert e.params("even") == ["x"]
    assert e.holds("$even(x)", [10]) and not e.holds("$even(x)", [7])
    out = e.run_script('def twon count i "n>=1 & i<2*n"\n')
    assert out[0].startswith("def twon:"), out
    assert e.count("twon", [21]) == "42"

    try:
        e.eval("Ax (")
    except ValueError:
        pass
    else:
        raise AssertionError("syntax errors raise ValueError")

    reports = json.loads(r.run_checks(["lower-bound-38", "reversible-15"]))
    assert [x["verdict"] for x in reports] == ["PASS", "PASS"], reports
    assert "rigidity-16n" in r.check_names()
    print("python smoke test passed")


if __name__ == "__main__":
    main()
