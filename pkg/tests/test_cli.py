import json

import pytest

from eternal_guard.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def cactus_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("a b\nb c\nc a\na x\nx y\nc p\nc q\n")
    return str(path)


class TestSolve:
    def test_single_edge(self, tmp_path, capsys):
        p = tmp_path / "e.txt"
        p.write_text("a b\n")
        code, out, _ = run(capsys, "solve", str(p))
        assert code == 0 and out.strip() == "1"

    def test_c9(self, tmp_path, capsys):
        p = tmp_path / "c9.txt"
        p.write_text("\n".join(f"v{i} v{(i+1)%9}" for i in range(9)))
        code, out, _ = run(capsys, "solve", str(p))
        assert code == 0 and out.strip() == "3"

    def test_star5(self, tmp_path, capsys):
        p = tmp_path / "s.txt"
        p.write_text("\n".join(f"c l{i}" for i in range(5)))
        code, out, _ = run(capsys, "solve", str(p))
        assert code == 0 and out.strip() == "2"

    def test_parse_error_exit_1(self, tmp_path, capsys):
        p = tmp_path / "bad.txt"
        p.write_text("a b c\n")
        code, _, err = run(capsys, "solve", str(p))
        assert code == 1 and "bad graph" in err

    def test_non_cactus_exit_2(self, tmp_path, capsys):
        p = tmp_path / "k4.txt"
        p.write_text("a b\na c\na d\nb c\nb d\nc d\n")
        code, _, err = run(capsys, "solve", str(p))
        assert code == 2


class TestOracle:
    def test_p3(self, tmp_path, capsys):
        p = tmp_path / "p3.txt"
        p.write_text("a b\nb c\n")
        code, out, _ = run(capsys, "oracle", str(p))
        assert code == 0 and out.strip() == "2"

    def test_modes_agree_on_c4(self, tmp_path, capsys):
        p = tmp_path / "c4.txt"
        p.write_text("a b\nb c\nc d\nd a\n")
        _, out1, _ = run(capsys, "oracle", str(p), "--mode", "edn")
        _, out2, _ = run(capsys, "oracle", str(p), "--mode", "egc")
        assert out1 == out2

    def test_works_on_non_cactus(self, tmp_path, capsys):
        p = tmp_path / "k4.txt"
        p.write_text("a b\na c\na d\nb c\nb d\nc d\n")
        code, out, _ = run(capsys, "oracle", str(p))
        assert code == 0 and out.strip() == "1"

    def test_cap_exit_3(self, tmp_path, capsys):
        p = tmp_path / "c8.txt"
        p.write_text("\n".join(f"v{i} v{(i+1)%8}" for i in range(8)))
        code, _, err = run(capsys, "oracle", str(p), "--max-configs", "3")
        assert code == 3


class TestVerifySimulateExport:
    def test_pipeline(self, cactus_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.json")
        trace = str(tmp_path / "trace.json")
        code, out, _ = run(capsys, "solve", cactus_file, "--certificate", cert, "--trace", trace)
        assert code == 0
        code, out, _ = run(capsys, "verify", cactus_file, cert, "--proper", "--trace", trace)
        assert code == 0
        report = json.loads(out)
        assert report["valid"] and report["defending"] and report["proper"]["ok"]

    def test_verify_detects_tampering(self, cactus_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.json")
        run(capsys, "solve", cactus_file, "--certificate", cert)
        doc = json.loads(open(cert).read())
        key = sorted(doc["transitions"])[0]
        if doc["transitions"][key]:
            doc["transitions"][key] = doc["transitions"][key][:-1]
        open(cert, "w").write(json.dumps(doc))
        code, out, err = run(capsys, "verify", cactus_file, cert)
        assert code == 2

    def test_verify_wrong_graph(self, cactus_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.json")
        run(capsys, "solve", cactus_file, "--certificate", cert)
        other = tmp_path / "other.txt"
        other.write_text("a b\n")
        code, _, err = run(capsys, "verify", str(other), cert)
        assert code == 2 and "different graph" in err

    def test_simulate_random(self, cactus_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.json")
        run(capsys, "solve", cactus_file, "--certificate", cert)
        code, out, _ = run(
            capsys, "simulate", cactus_file, cert, "--random", "100", "--seed", "5"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["failure"] is None
        assert len(doc["transcript"]) == 100
        # attacking an occupied vertex keeps the state
        first = doc["transcript"][0]
        for turn in doc["transcript"]:
            if all(a == b for a, b in turn["moves"]):
                assert turn["state"] == turn["next"]

    def test_simulate_scripted(self, cactus_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.json")
        run(capsys, "solve", cactus_file, "--certificate", cert)
        code, out, _ = run(capsys, "simulate", cactus_file, cert, "--attacks", "x,y,p,q")
        assert code == 0

    def test_export_bundle(self, cactus_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.json")
        bundle = str(tmp_path / "arena.json")
        run(capsys, "solve", cactus_file, "--certificate", cert)
        code, _, _ = run(capsys, "export", cactus_file, cert, "--out", bundle)
        assert code == 0
        doc = json.loads(open(bundle).read())
        assert doc["version"] == "arena/1"
        assert doc["initial"] in doc["states"]

    def test_export_refuses_broken(self, cactus_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.json")
        run(capsys, "solve", cactus_file, "--certificate", cert)
        doc = json.loads(open(cert).read())
        victim = sorted(doc["states"])[0]
        doc["states"][victim] = doc["states"][victim][:-1]
        open(cert, "w").write(json.dumps(doc))
        code, _, err = run(capsys, "export", cactus_file, cert)
        assert code == 2

    def test_bundle_roundtrip_verifies(self, cactus_file, tmp_path, capsys):
        cert = str(tmp_path / "cert.json")
        bundle = tmp_path / "arena.json"
        run(capsys, "solve", cactus_file, "--certificate", cert)
        run(capsys, "export", cactus_file, cert, "--out", str(bundle))
        doc = json.loads(bundle.read_text())
        doc.pop("version")
        doc["complete"] = False
        reimport = tmp_path / "re.json"
        init = doc.pop("initial")
        reimport.write_text(json.dumps(doc))
        code, _, _ = run(capsys, "verify", cactus_file, str(reimport))
        assert code == 0


class TestGen:
    def test_deterministic(self, capsys):
        _, out1, _ = run(capsys, "gen", "--vertices", "9", "--seed", "4")
        _, out2, _ = run(capsys, "gen", "--vertices", "9", "--seed", "4")
        assert out1 == out2

    def test_single_vertex(self, capsys):
        code, out, _ = run(capsys, "gen", "--vertices", "1")
        assert code == 0 and out.strip() == "v0"
