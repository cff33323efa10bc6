"""Smoke test for the `pcl` extension module.

Build and install it first:  maturin build --release -m crates/pcl-py/Cargo.toml && pip install target/wheels/pcl-*.whl
"""

import tempfile

import pcl


def main():
    r = pcl.predict(211)
    assert (r["residue9"], r["symbol3"], r["u"], r["cl3_k"]) == (4, "≠1", 1, [3]), r
    r = pcl.predict(199)
    assert r["u"] is None and r["cl3_k"] is None, r

    try:
        pcl.predict(11)
    except ValueError:
        pass
    else:
        raise AssertionError("predict(11) should raise ValueError")

    with tempfile.TemporaryDirectory() as cache:
        a = pcl.analyze(61, cache_dir=cache)
        again = pcl.analyze(61, cache_dir=cache)
    assert a == again
    assert (a["cl3_L"], a["cl3_k"], a["u"], a["principal_P"]) == ([3], [3, 3], 3, False), a

    v = pcl.verify(67)
    assert v["verdict"] == "MATCH" and v["exit_code"] == 0, v

    t = pcl.table(3)
    assert t["outcome"] == "MATCH" and len(t["rows"]) == 16, t["outcome"]

    cg = pcl.ClassGroup(7, field="L")
    assert cg.class_number == 3 and cg.invariants == [3] and cg.three_part == [3]
    assert pcl.ClassGroup(2).class_number == 1
    k = pcl.ClassGroup(61, field="k")
    assert k.three_part == [3, 3] and k.rank3 == 2
    c = k.certificate()
    assert 2 ** -0.5 < c["ratio"] < 2 ** 0.5, c
    print("pcl smoke test: ok")


if __name__ == "__main__":
    main()
