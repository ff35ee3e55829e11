"""Smoke test for the defquant extension module.

Build and install first, for example:
    maturin build --release -m crates/python/Cargo.toml -o dist && pip install dist/defquant-*.whl
"""

import json

import defquant


def main():
    assert defquant.star("x", "y") == "x*y + (1/2)*h*z"
    assert defquant.star("q", "p", product="moyal-heis") == "q*p + (1/2)*h*e'"
    assert defquant.bracket("q", "p", algebra="heisenberg") == "e'"
    assert defquant.normalize("Y X") == "X*Y - h*Z"
    assert defquant.harm("x^2 + y^2 + z^2")[0] == (1, "1")

    passed, text = defquant.check("semiclassical", algebra="heisenberg", degree=3)
    assert passed, text

    code, out = defquant.run(["tangential", "--product", "weyl", "--ideal", "x^2+y^2+z^2-r^2"])
    report = json.loads(out)
    assert code == 1 and report["status"] == "fail"
    assert report["witnesses"][0]["label"].endswith("h^2")

    code, out = defquant.run(["fuzzy", "--spin", "1", "--h", "1"])
    assert code == 0 and json.loads(out)["result"]["summary"]["image_dimension"] == 9

    for bad in (lambda: defquant.star("x^(-1)", "y"), lambda: defquant.star("x", "w")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    assert defquant.run(["frobnicate"])[0] == 2
    print("smoke test passed")


if __name__ == "__main__":
    main()
