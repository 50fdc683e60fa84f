"""Smoke test for the pcmrank Python extension.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

import json

import pcmrank

KENDALL = """1,2,2,1/2,2,2
1/2,1,1/2,2,2,1/2
1/2,2,1,2,2,2
2,1/2,1/2,1,1/2,1/2
1/2,1/2,1/2,2,1,2
1/2,2,1/2,2,1/2,1
"""


def close(xs, ys, tol):
    return all(abs(x - y) <= tol for x, y in zip(xs, ys))


def main():
    a = pcmrank.Pcm.parse(KENDALL)
    assert a.n == 6 and a[0, 3] == 0.5 and a[3, 0] == 2.0

    w, lam = pcmrank.em(a)
    assert close(w, [0.2286, 0.1430, 0.2102, 0.1321, 0.1430, 0.1430], 5e-4), w
    assert abs(lam - 6.8815) < 1e-4
    w2 = pcmrank.weights(pcmrank.power(a, "2"), "em")
    assert close(w2, [0.2640, 0.1267, 0.2261, 0.1297, 0.1267, 0.1267], 5e-4), w2

    assert pcmrank.rank(a, "em") == [0, 2, 1, 3, 2, 2]
    assert pcmrank.rank(a, "flat") == [0] * 6

    b = pcmrank.Pcm([[1, 1, 4], [1, 1, 3], [0.25, 1 / 3, 1]])
    assert close(pcmrank.weights(b, "rgm"), [0.457933978547958, 0.416060631288523, 0.126005390163519], 1e-12)

    ones = pcmrank.aggregate([a, pcmrank.opposite(a)])
    assert ones == pcmrank.Pcm.ones(6)
    assert pcmrank.permute(b, [1, 0, 2])[1, 0] == 1.0

    assert pcmrank.falsify("rgm", "AI", seed=7, trials=2000) is None
    witness = json.loads(pcmrank.falsify("col1", "ANO", trials=2000))
    assert witness["axiom"] == "ANO" and witness["method"] == "col1"

    reports = json.loads(pcmrank.repro())
    assert len(reports) == 8 and all(r["reproduced"] for r in reports)

    chain = json.loads(pcmrank.proof_chain(a, equalize=True))
    ids = chain["identities"]
    assert all(ids[k] is True for k in ("inv_swap", "swap_aggregation", "unit_row_means", "alpha"))

    try:
        pcmrank.Pcm([[1, 2], [0.4, 1]])
    except ValueError as e:
        assert "reciprocal" in str(e)
    else:
        raise AssertionError("non-reciprocal matrix accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
