import json
import random

import pytest

from msa.cli import main
from msa.exprparse import ParseError, parse_element
from msa.hopf import GENERIC, SteenrodContext
from msa.mgl import MglContext
from msa.operations import Operation, P_op, scalar_op


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_delta_text(capsys):
    code, out, _ = run(capsys, "delta", "xi1", "--ell", "2", "--max-p", "8")
    assert code == 0
    assert "left=xi1" in out and "left=1" in out


def test_pair_and_op_product(capsys):
    code, out, _ = run(capsys, "pair", "Q0", "tau0", "--max-p", "8")
    assert code == 0 and "result: 1" in out
    code, out, _ = run(capsys, "op-product", "Q0", "Q1", "--max-p", "12",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["result"] == "Q0Q1"


def test_exit_code_2_on_config_errors(capsys):
    code, _, err = run(capsys, "delta", "xi1", "--ell", "9")
    assert code == 2 and "prime" in err
    code, _, err = run(capsys, "cartan", "--ell", "7", "--max-p", "10")
    assert code == 2 and "window" in err
    code, _, err = run(capsys, "delta", "xi1 *", "--ell", "2")
    assert code == 2
    code, _, err = run(capsys, "verify", "--suite", "nosuch")
    assert code == 2


def test_env_var_default_ell(capsys, monkeypatch):
    monkeypatch.setenv("MSA_ELL", "3")
    code, out, _ = run(capsys, "delta", "xi1", "--format", "json")
    assert code == 0
    # at ell=3 xi1 sits in bidegree (4, 2); no tau-term appears
    assert "tau" not in out


def test_config_file_merge(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"ell": 3, "format": "json"}))
    code, out, _ = run(capsys, "delta", "xi1", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["input"] == "xi1"
    # flags beat the config file
    code, out, _ = run(capsys, "delta", "xi1", "--config", str(cfg),
                       "--format", "text")
    assert code == 0 and "input: xi1" in out
    cfg.write_text(json.dumps({"nonsense": 1}))
    code, _, err = run(capsys, "delta", "xi1", "--config", str(cfg))
    assert code == 2


def test_json_determinism(capsys):
    argv = ("verify", "--suite", "psf", "--format", "json",
            "--stable-output")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_small_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "fgl,adequacy,psf",
                       "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and all(c["ok"] for c in rep["rows"])


def test_csv_output(capsys):
    code, out, _ = run(capsys, "delta", "xi1", "--ell", "2", "--max-p", "8",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "left,right,coeff"


def test_lazard_and_gens_round_trip(tmp_path, capsys):
    out_path = tmp_path / "gens.json"
    code, _, _ = run(capsys, "lazard", "--max-weight", "8", "--out",
                     str(out_path))
    assert code == 0
    code, out, _ = run(capsys, "mgl", "--gtilde", "--weight", "3",
                       "--gens", str(out_path), "--ell", "2",
                       "--format", "json", "--stable-output")
    assert code == 0
    assert json.loads(out)["invertible"]


def random_gamma_expr(rng, ctx):
    # the top tau index is cap-only headroom with no rewrite
    names = [n for n in ctx.table.names()
             if n != f"tau{ctx.max_tau}"]
    terms = []
    for _ in range(rng.randint(1, 4)):
        factors = []
        for _ in range(rng.randint(1, 3)):
            name = rng.choice(names)
            # repeated tau squares cascade beyond the window's rewrites
            e = 1 if name.startswith("tau") and name[3:].isdigit() \
                else rng.randint(1, 2)
            factors.append(f"{name}^{e}")
        terms.append(str(rng.randint(1, 6)) + "*" + "*".join(factors))
    return " + ".join(terms)


def test_parser_round_trip_random():
    rng = random.Random(7)
    ctx = SteenrodContext(2, GENERIC, 12)
    mgl = MglContext(2, 8)
    for _ in range(200):
        src = random_gamma_expr(rng, ctx)
        x = parse_element(src, ctx)
        y = parse_element(str(x), ctx)
        assert (x - y).is_zero(), src
    for _ in range(50):
        mm = [f"b{rng.randint(1, 4)}^{rng.randint(1, 2)}"
              for _ in range(rng.randint(1, 2))]
        src = "*".join(mm)
        x = parse_element(src, ctx, mgl)
        y = parse_element(str(x), ctx, mgl)
        assert (x - y).is_zero(), src


def test_parser_operation_round_trip():
    ctx = SteenrodContext(2, GENERIC, 16)
    rng = random.Random(3)
    for _ in range(100):
        terms = []
        for _ in range(rng.randint(1, 3)):
            qs = "".join(f"Q{i}" for i in sorted(rng.sample(range(2),
                                                 rng.randint(0, 2))))
            ps = "P" + str([rng.randint(0, 2)
                            for _ in range(rng.randint(0, 1))]).replace(" ", "")
            terms.append((qs + "*" + ps).strip("*"))
        src = " + ".join(terms)
        x = parse_element(src, ctx)
        assert isinstance(x, Operation)
        y = parse_element(str(x), ctx)
        assert (x - y).is_zero(), (src, str(x))
