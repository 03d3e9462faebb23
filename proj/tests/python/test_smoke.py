import acyclify


def test_worked_example_types():
    assert acyclify.stratify("x in y & z in y") == {"x": -2, "y": -1, "z": -2}
    assert acyclify.indices("x in y & z in y") == ["x", "y", "z"]


def test_unstratified_is_none():
    assert acyclify.stratify("x in x") is None


def test_translation_is_acyclic():
    src = "x in y & z in y & w in x & w in z"
    assert not acyclify.is_acyclic(src)
    assert acyclify.is_acyclic(acyclify.translate(src))


def test_translate_is_deterministic():
    assert acyclify.translate("x in y") == acyclify.translate("x in y")


def test_verify_agrees():
    report = acyclify.verify("x = y", base_rank=2)
    assert report["agree"]
    assert report["assignments"] == 4


def test_evaluate():
    assert acyclify.evaluate("x in y", "x={} y={{}}")
    assert not acyclify.evaluate("x in y", "x={{}} y={{}}")


def test_parse_error():
    try:
        acyclify.normalize("x in")
    except ValueError:
        return
    raise AssertionError("expected a parse error")


def test_hf_universe_sizes():
    assert len(acyclify.hf_universe(3)) == 4
    assert len(acyclify.hf_universe(2, 2)) == 10
