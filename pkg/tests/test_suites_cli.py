import csv
import io
import json
import os
import subprocess
import sys
import warnings

import pytest

from homlab import cli
from homlab.cache import CacheCorruptionWarning, MatrixCache
from homlab.errors import InputError
from homlab.lattice import LatticeParams
from homlab.linalg.matrix import SparseRationalMatrix
from homlab.report import REPORT_SCHEMA, Report, make_check, skipped, strip_timing
from homlab.suites import DIMS_HEADER, SuiteConfig, dims_table, run_many, run_suite

FAST = ("lattice", "ring", "fox")


def run_doc(**kw):
    return strip_timing(run_suite(SuiteConfig(**kw)).to_json())


class TestConfig:
    @pytest.mark.parametrize("kw", [{"suites": ("nope",)}, {"mode": "float"}, {"sample_count": 0},
                                    {"worker_count": 0}])
    def test_rejects(self, kw):
        with pytest.raises(InputError):
            SuiteConfig(1, 2, **kw)

    def test_selected(self):
        assert SuiteConfig(1, 2, suites=("fox", "lattice")).selected == ("lattice", "fox")


class TestDeterminism:
    def test_same_seed_same_report(self):
        a = run_doc(g=1, L=3, suites=FAST, seed=4, sample_count=50)
        b = run_doc(g=1, L=3, suites=FAST, seed=4, sample_count=50)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_thread_count_does_not_matter(self):
        a = run_doc(g=2, L=2, suites=FAST, sample_count=50)
        b = run_doc(g=2, L=2, suites=FAST, sample_count=50, worker_count=4)
        assert a["checks"] == b["checks"]

    def test_full_run_at_12(self, tmp_path):
        path = tmp_path / "r.json"
        rep = run_suite(SuiteConfig(1, 2, report_path=str(path)))
        assert rep.ok and rep.summary["skipped"] == 0
        doc = json.loads(path.read_text())
        assert doc["schema_version"] == "1"
        assert all(c["name"].startswith("g1_L2/") for c in doc["checks"])

    def test_run_many_merges(self):
        rep = run_many([SuiteConfig(1, 2, suites=("lattice",)), SuiteConfig(1, 3, suites=("lattice",))])
        assert len(rep.config["configurations"]) == 2
        names = [c.name for c in rep.checks]
        assert any(n.startswith("g1_L2/") for n in names) and any(n.startswith("g1_L3/") for n in names)


class TestReport:
    def test_schema_rejects_bad_status(self):
        import jsonschema
        doc = Report({"g": 1}, [make_check("x", 1, 1)]).to_json()
        doc["checks"][0]["status"] = "maybe"
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(doc, REPORT_SCHEMA)

    def test_summary_and_ok(self):
        rep = Report({}, [make_check("a", 1, 1), make_check("b", 1, 2), skipped("c", "budget")])
        assert rep.summary == {"total": 3, "passed": 1, "failed": 1, "skipped": 1}
        assert not rep.ok
        assert rep.check("b").actual == 2


class TestCache:
    def test_roundtrip_and_hits(self, tmp_path):
        cache = MatrixCache(tmp_path)
        p = LatticeParams(1, 2)
        m = SparseRationalMatrix.identity(3)
        assert cache.get(p, "eye", lambda: m) == m
        assert cache.get(p, "eye", lambda: None) == m
        assert (cache.builds, cache.hits) == (1, 1)
        assert cache.path(p, "eye").name == "eye.v1.triplets"

    def test_corruption_rebuilds_with_warning(self, tmp_path):
        cache = MatrixCache(tmp_path)
        p = LatticeParams(1, 2)
        m = SparseRationalMatrix.identity(2)
        cache.store(p, "eye", m)
        cache.path(p, "eye").write_text("2 2 5\n0 0 1\n")
        with pytest.warns(CacheCorruptionWarning):
            assert cache.get(p, "eye", lambda: m) == m
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert cache.load(p, "eye") == m

    def test_bad_name(self, tmp_path):
        with pytest.raises(InputError):
            MatrixCache(tmp_path).path(LatticeParams(1, 2), "../x")

    def test_dims_uses_cache(self, tmp_path):
        first = dims_table([1], [2], cache_dir=tmp_path)
        assert (tmp_path / "g1_L2" / "relator_translates.v1.triplets").exists()
        assert dims_table([1], [2], cache_dir=tmp_path) == first


class TestDims:
    def test_rows(self):
        rows = list(csv.DictReader(io.StringIO(dims_table([1, 2], [2]))))
        assert tuple(rows[0]) == DIMS_HEADER
        cells = [[r[k] for k in DIMS_HEADER[2:]] for r in rows]
        assert cells[0] == ["2", "0", "5", "3", "3", "2", "2", "0", "4", "0"]
        assert cells[1] == ["34", "30", "49", "45", "15", "2", "2", "9", "7", "15"]

    def test_budget_cell(self):
        row = next(csv.DictReader(io.StringIO(dims_table([2], [2], exact_col_cap=100))))
        assert row["quotient_dim_v"] == "skipped-budget"
        assert row["h1_closed"] == "34"


class TestCli:
    def test_run_exit_zero_and_report(self, tmp_path, capsys):
        path = tmp_path / "out.json"
        code = cli.main(["run", "--g", "1", "--L", "2", "--suite", "lattice", "--report", str(path), "--show", "all"])
        assert code == 0
        out = capsys.readouterr().out
        assert "g1_L2/lattice.orbit-count" in out and "failed=0" in out
        assert json.loads(path.read_text())["summary"]["failed"] == 0

    def test_dims_output(self, tmp_path):
        path = tmp_path / "d.csv"
        assert cli.main(["dims", "--g", "1", "--L", "2", "--output", str(path)]) == 0
        assert path.read_text().splitlines()[1] == "1,2,2,0,5,3,3,2,2,0,4,0"

    def test_class(self, capsys):
        assert cli.main(["class", "--g", "1", "--L", "2", "--word", "a1 a1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["surface"] == "closed" and doc["word"] == "a1 a1"

    def test_class_rejects_non_kernel_word(self, capsys):
        assert cli.main(["class", "--g", "1", "--L", "2", "--word", "a1"]) == 2
        assert "error" in capsys.readouterr().err

    def test_bad_parameters_exit_two(self, capsys):
        assert cli.main(["run", "--g", "1", "--L", "1"]) == 2

    def test_budget_skip_is_not_failure(self):
        assert cli.main(["run", "--g", "2", "--L", "2", "--suite", "presentation", "--mode", "exact",
                         "--exact-col-cap", "100", "--show", "none"]) == 0


def test_pure_python_fallback_agrees():
    code = (
        "import json, random\n"
        "from homlab.fox import chains\n"
        "from homlab.linalg import modular\n"
        "from homlab.fox.words import letters_array, random_word\n"
        "from homlab.lattice import LatticeParams\n"
        "from homlab.suites import dims_table\n"
        "p = LatticeParams(2, 2)\n"
        "arr = letters_array([random_word(p, random.Random(1), 12) for _ in range(40)])\n"
        "c, e = chains.fox_chains(arr, 2, 2)\n"
        "print(json.dumps([chains.BACKEND, modular.BACKEND, int(c.sum()), int(abs(c).sum()), e.tolist(),"
        " dims_table([2], [2])]))\n"
    )
    outs = []
    for pure in ("1", "0"):
        env = dict(os.environ, HOMLAB_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outs.append(json.loads(res.stdout))
    assert outs[0][:2] == ["python", "python"]
    assert outs[0][2:] == outs[1][2:]
