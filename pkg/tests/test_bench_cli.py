import csv
import io
import json

from tileroute.bench import COLUMNS, run_benchmark
from tileroute.cli import main
from tileroute.instance import bundled, generate_instance, save_instance, to_json
from tileroute.model import Rect
from tileroute.router import FLAVORS


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_two_tile_bench_dominance():
    rep = run_benchmark(bundled("fig6"), FLAVORS, "bulk", timing=False)
    assert {r.cost for r in rep.rows} == {21}
    popped = [r.popped for r in rep.rows]
    assert popped == sorted(popped, reverse=True)


def test_corridor_incremental_pops_less():
    inst = bundled("corridor")
    bulk = run_benchmark(inst, ["general"], "bulk", timing=False)
    inc = run_benchmark(inst, ["general"], "incremental", timing=False)
    assert inc.total("general") < bulk.total("general")
    assert [r.cost for r in inc.rows] == [9, 39 / 2]


def test_costs_agree_across_flavors():
    for seed in range(5):
        for mode in ("bulk", "incremental"):
            rep = run_benchmark(generate_instance(seed), FLAVORS, mode, timing=False)
            assert rep.inconsistent_nets() == [] and rep.failures() == []


def test_no_timing_is_reproducible():
    inst = generate_instance(7)
    a = run_benchmark(inst, FLAVORS, "incremental", timing=False).to_csv()
    b = run_benchmark(inst, FLAVORS, "incremental", timing=False).to_csv()
    assert a == b
    assert _rows(a)[0].keys() == set(COLUMNS)


def test_cli_empty_instance(tmp_path, capsys):
    d = to_json(bundled("fig6"))
    d["nets"] = []
    f = tmp_path / "empty.json"
    f.write_text(json.dumps(d))
    out = tmp_path / "out.csv"
    assert main(["bench", str(f), "-o", str(out)]) == 0
    assert out.read_text().strip() == ",".join(COLUMNS)


def test_cli_gen_check_bench(tmp_path):
    f = tmp_path / "g.json"
    assert main(["gen", "--seed", "3", "--nets", "2", "-o", str(f)]) == 0
    assert main(["check", str(f)]) == 0
    out, fig = tmp_path / "b.csv", tmp_path / "b.png"
    assert main(["bench", str(f), "--flavors", "zero,general", "--mode", "incremental",
                 "--no-timing", "-o", str(out), "--figure", str(fig)]) == 0
    rows = _rows(out.read_text())
    assert len(rows) == 4 and {r["prep_us"] for r in rows} == {"0.0"}
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_cli_route(capsys):
    assert main(["route", "@corridor", "--delta", "3/4"]) == 0
    assert "flip: cost 9" in capsys.readouterr().out
    assert main(["route", "@corridor", "--flavor", "l1"]) == 0
    assert "flip: cost 10" in capsys.readouterr().out


def test_cli_invalid_input(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{\n  nope\n}")
    assert main(["check", str(f)]) == 1
    assert "line 2" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.json")]) == 1
    assert main(["bench", "@fig6", "--flavors", "astar"]) == 1
    assert main(["gen", "--seed", "1", "--t", "1"]) == 1


def test_cli_search_failure(tmp_path, capsys):
    inst = bundled("corridor")
    inst.blocked.append(Rect(0, 8, 1, 1, 1))
    inst.blocked.append(Rect(1, 7, -2, -2, 1))
    f = tmp_path / "cut.json"
    save_instance(inst, f)
    assert main(["route", str(f)]) == 2
    assert "FAILED" in capsys.readouterr().out
