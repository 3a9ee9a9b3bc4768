import json

from perronval.cli import main
from perronval.reduce import replay_matches

CUSP = {
    "version": 1,
    "kind": "arc",
    "ring": {"m": 2, "char": 0, "n": 1},
    "f": "x2^2 - x1^3",
    "arc": {"x1": "t^2", "x2": "t^3"},
    "trunc": 40,
}

WEIGHTS = {
    "version": 1,
    "kind": "monomial",
    "ring": {"m": 2, "n": 2, "char": 0},
    "generators": {"kind": "quadratic", "d": 2},
    "weights": ["1", "sqrt(2)"],
}

CHAIN = {
    "version": 1,
    "kind": "chain",
    "ring": {"m": 2, "char": 0, "n": 1},
    "x1_value": "1",
    "steps": [{"phi": "x2", "gamma": "3/2"}],
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestValuate:
    def test_finite_value(self, tmp_path, capsys):
        oracle = write(tmp_path, "cusp.json", CUSP)
        assert main(["valuate", "--oracle", oracle, "--poly", "x2"]) == 0
        assert capsys.readouterr().out.strip() == "3"

    def test_infinite(self, tmp_path, capsys):
        oracle = write(tmp_path, "cusp.json", CUSP)
        assert main(["valuate", "--oracle", oracle, "--poly", "x2^2-x1^3"]) == 0
        assert capsys.readouterr().out.strip() == "INFINITE"

    def test_malformed_poly_exits_2(self, tmp_path, capsys):
        oracle = write(tmp_path, "cusp.json", CUSP)
        assert main(["valuate", "--oracle", oracle, "--poly", "x2^^"]) == 2
        assert "error" in capsys.readouterr().err

    def test_above_truncation_prints_and_exits_0(self, tmp_path, capsys):
        doc = dict(CUSP)
        doc["trunc"] = 10
        oracle = write(tmp_path, "cusp10.json", doc)
        assert main(["valuate", "--oracle", oracle,
                     "--poly", "x2^2 - x1^3 + x1^10"]) == 0
        assert capsys.readouterr().out.strip().startswith("ABOVE-TRUNCATION(")


class TestReduce:
    def test_cusp_trace(self, tmp_path, capsys):
        oracle = write(tmp_path, "cusp.json", CUSP)
        out = tmp_path / "trace.json"
        assert main(["reduce", "--oracle", oracle, "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["status"] == "REDUCED-TO-SMOOTH"
        matrices = [s["transform"]["matrix"] for s in doc["steps"] if s["kind"] == "A1"]
        assert matrices == [[[2, 1], [3, 2]]]
        assert replay_matches(doc)

    def test_defect_curve_exits_3(self, tmp_path, capsys):
        terms = " + ".join(f"t^{1 + 2**i}" for i in range(6))
        doc = {
            "version": 1, "kind": "arc",
            "ring": {"m": 2, "char": 2, "n": 1},
            "f": "x2^2 + x1*x2 + x1^3",
            "arc": {"x1": "t", "x2": terms},
            "trunc": 40,
        }
        oracle = write(tmp_path, "defect.json", doc)
        assert main(["reduce", "--oracle", oracle]) == 3
        trace = json.loads(capsys.readouterr().out)
        assert trace["status"] == "DEFECT-SUSPECTED"
        assert trace["diagnostics"]["ladder"][:4] == ["2", "3", "5", "9"]

    def test_inconsistent_arc_exits_2(self, tmp_path, capsys):
        doc = dict(CUSP)
        doc["f"] = "x2^2 - x1^5"
        oracle = write(tmp_path, "bad.json", doc)
        assert main(["reduce", "--oracle", oracle]) == 2

    def test_translation_bound_exits_4(self, tmp_path, capsys):
        doc = {
            "version": 1, "kind": "arc",
            "ring": {"m": 2, "char": 2, "n": 1},
            "f": "x2^2 + x1^2 + x1^4 + x1^5",
            "arc": {"x1": "t", "x2": "t + t^2 + t^(5/2)"},
            "trunc": 40,
        }
        oracle = write(tmp_path, "c.json", doc)
        assert main(["reduce", "--oracle", oracle, "--max-translations", "0"]) == 4


class TestPerron:
    def test_divide_document(self, tmp_path, capsys):
        weights = write(tmp_path, "w.json", WEIGHTS)
        assert main(["perron", "divide", "--weights", weights,
                     "--m1", "x1", "--m2", "x2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["kind"] == "A6" and doc["matrix"] == [[1, 0], [1, 1]]

    def test_divide_precondition_exits_2(self, tmp_path, capsys):
        weights = write(tmp_path, "w.json", WEIGHTS)
        assert main(["perron", "divide", "--weights", weights,
                     "--m1", "x2", "--m2", "x1"]) == 2

    def test_monomialize(self, tmp_path, capsys):
        weights = write(tmp_path, "w.json", WEIGHTS)
        assert main(["perron", "monomialize", "--weights", weights,
                     "--poly", "x1 + x2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["exponents"] == [1, 0]
        assert doc["unit"] == "x2(1) + 1"
        assert [t["matrix"] for t in doc["transforms"]] == [[[1, 0], [1, 1]]]


class TestDefectCommand:
    def test_char2_cusp(self, capsys):
        assert main(["defect", "--degree", "2", "--e", "2", "--f", "1", "--p", "2"]) == 0
        assert capsys.readouterr().out.strip() == "delta=0"

    def test_defect_one_with_families(self, capsys):
        assert main(["defect", "--degree", "2", "--e", "1", "--f", "1", "--p", "2",
                     "--family", "1:1", "--family", "2:2"]) == 0
        out = capsys.readouterr().out
        assert "delta=1" in out and "jump_total=2" in out and "consistent=true" in out

    def test_not_ostrowski_exits_2(self, capsys):
        assert main(["defect", "--degree", "6", "--e", "2", "--f", "1", "--p", "2"]) == 2
        assert "NOT-OSTROWSKI" in capsys.readouterr().err


class TestChainCommand:
    def test_chain_value(self, tmp_path, capsys):
        oracle = write(tmp_path, "chain.json", CHAIN)
        assert main(["chain", "value", "--oracle", oracle,
                     "--poly", "x2^2 - x1^3"]) == 0
        assert capsys.readouterr().out.strip() == "3"

    def test_chain_rejects_arc_doc(self, tmp_path, capsys):
        oracle = write(tmp_path, "cusp.json", CUSP)
        assert main(["chain", "value", "--oracle", oracle, "--poly", "x2"]) == 2


class TestRoundTrip:
    def test_emitted_trace_replays(self, tmp_path):
        docs = [
            CUSP,
            {
                "version": 1, "kind": "arc",
                "ring": {"m": 2, "char": 0, "n": 1},
                "f": "x2^2 - 2*x1*x2 + x1^2 - x1^5",
                "arc": {"x1": "t", "x2": "t + t^(5/2)"},
                "trunc": 40,
            },
        ]
        for i, doc in enumerate(docs):
            oracle = write(tmp_path, f"curve{i}.json", doc)
            out = tmp_path / f"trace{i}.json"
            assert main(["reduce", "--oracle", oracle, "--out", str(out)]) == 0
            emitted = json.loads(out.read_text())
            assert replay_matches(emitted)
