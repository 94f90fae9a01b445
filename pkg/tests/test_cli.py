import io
import json

import jsonschema
import pytest

import qmod.cache as cache_mod
from qmod.cache import Cache, CacheEntry
from qmod.cli import main
from qmod.moduli import REPORT_SCHEMA
from qmod.orders import ORDER_SCHEMA


@pytest.fixture(autouse=True)
def _no_env_cache(monkeypatch):
    monkeypatch.delenv("QMOD_CACHE", raising=False)


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


def test_algebra_command():
    code, out = run("algebra", "-a", "-1", "-b", "-1", "--json")
    d = json.loads(out)
    assert code == 0 and d["ramified"] == ["2", "inf"] and d["discriminant"] == 2
    code, out = run("algebra", "-a", "1", "-b", "7", "--json")
    assert code == 0 and json.loads(out)["discriminant"] == 1 and not json.loads(out)["division"]
    assert run("algebra", "-a", "0", "-b", "1")[0] == 2


def test_usage_errors_exit_2():
    assert run("bound", "-D", "7")[0] == 2
    assert run("bound", "-D", "12")[0] == 2
    assert run("algebra", "-a", "x", "-b", "1")[0] == 2
    assert run("tree", "distance", "-p", "4", "--l1", "1,0;0,1", "--l2", "1,0;0,1")[0] == 2
    assert run("tree", "distance", "-p", "3", "--l1", "1,1;1,1", "--l2", "1,0;0,1")[0] == 2
    assert run("bound", "-D", "6", "--K=-3")[0] == 2


def test_tree_distance_example():
    code, out = run("tree", "distance", "-p", "3", "--l1", "1,0;0,9", "--l2", "1,0;0,1")
    assert code == 0 and out.strip() == "2"


def test_bound_json_schema():
    code, out = run("bound", "-D", "6", "--json")
    assert code == 0
    jsonschema.validate(json.loads(out), REPORT_SCHEMA)
    code, out = run("bound", "-D", "10")
    assert code == 0 and "twisting: yes" in out


def test_bound_strict_inconclusive():
    assert run("bound", "-D", "10", "--search-bound", "0", "--strict")[0] == 3
    assert run("bound", "-D", "10", "--search-bound", "0")[0] == 0


def test_order_maximal_and_distance(tmp_path):
    code, out = run("order", "maximal", "-a", "-1", "-b", "-1", "--json")
    d = json.loads(out)
    assert code == 0 and d["reduced_discriminant"] == 2
    jsonschema.validate(d, ORDER_SCHEMA)
    f = tmp_path / "o.json"
    f.write_text(out)
    code, out = run("order", "distance", "--o1", str(f), "--o2", str(f))
    assert code == 0 and out.strip() == "1"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("order", "distance", "--o1", str(bad), "--o2", str(f))[0] == 2


def test_order_basis():
    code, out = run("order", "basis", "-a", "-1", "-b", "-1", "--json")
    assert code == 0 and json.loads(out)["result"] == "found"
    assert run("order", "basis")[0] == 2


def test_warm_cache_is_byte_identical(tmp_path):
    path = tmp_path / "cache.jsonl"
    for argv in (["bound", "-D", "10", "--json"], ["order", "maximal", "-a", "-6", "-b", "2", "--json"]):
        cold = run("--cache", str(path), *argv)
        warm = run("--cache", str(path), *argv)
        assert cold == warm and cold[0] == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    e = CacheEntry.from_line(lines[0])
    assert e.to_line() == lines[0]


def test_cache_semantics(tmp_path, monkeypatch):
    path = tmp_path / "c.jsonl"
    c = Cache(path)
    assert c.get("k") is None
    c.put("k", {"v": 1})
    c.put("k", {"v": 2})
    assert c.get("k") == {"v": 2}
    with path.open("a") as fh:
        fh.write('{"key": "k", "payl')
    assert c.get("k") == {"v": 2}
    monkeypatch.setattr(cache_mod, "__version__", "999")
    assert c.get("k") is None
    monkeypatch.setenv("QMOD_CACHE", str(path))
    assert Cache.from_env().path == path
