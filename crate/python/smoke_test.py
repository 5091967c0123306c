"""Quick end-to-end check of the Python bindings.

    pip install --no-build-isolation ./crates/python
    python python/smoke_test.py
"""

import json

import abforge


def main():
    f = abforge.fixture_function("three-quarters")
    assert [f([x])[0] for x in range(7)] == [0, 1, 3, 3, 3, 4, 6]

    net = abforge.compile(f, mode="recurrent")
    assert net.is_acyclic() and net.halting() == "acyclic"
    assert net.report()["counts"]["toppler"] == 3
    for x in range(20):
        assert net([x]) == f([x])
    out = net.run([10], schedule="random", seed=7, trace=True)
    assert out["output"] == f([10]) and len(out["trace"]) == out["steps"]

    rep = abforge.verify(f, net, schedules=20)
    assert rep["passed"], rep

    back = abforge.Network.from_json(net.to_json())
    assert back.to_json() == net.to_json()
    assert net.to_dot().startswith("digraph")

    g = abforge.ZilepFunction.from_fn(2, 1, [2, 2], [0, 0], lambda x: [(x[0] + x[1]) // 2])
    assert g.is_zilp() and g([3, 4]) == [3]
    assert abforge.ZilepFunction.from_json(g.to_json()) == g
    assert g([5, 8]) == [abforge.pseudomin([5, 8])]

    toppler = g.to_processor()
    assert toppler.check_abelian() is None
    assert abforge.Processor.from_json(toppler.to_json()).state_count == toppler.state_count

    bad = abforge.Processor([[1, 2, 0], [0, 2, 1]], [[[0]] * 3, [[0]] * 3], 1)
    assert bad.check_abelian() is not None

    names = abforge.fixture_network()
    assert len(names) >= 18
    loop = abforge.fixture_network("delayer-loop")
    assert loop.halting() == "feedback_ok" and loop([5]) == [4]

    try:
        net([1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("arity mismatch accepted")

    print(json.dumps({"ok": True, "fixtures": len(names)}))


if __name__ == "__main__":
    main()
