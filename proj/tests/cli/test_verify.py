import json


def test_verify_twice_identical(uregion, tmp_path):
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    uregion("verify", "--seed", "1", "--out", first)
    uregion("verify", "--seed", "1", "--out", second)
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert report["all_pass"] is True
    assert [c["id"] for c in report["criteria"]] == [f"A{k}" for k in range(1, 11)]
    for c in report["criteria"]:
        assert set(c) == {"id", "pass", "measured", "tolerance", "comparison", "budget_seconds", "detail"}
