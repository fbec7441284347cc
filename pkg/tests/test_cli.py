import json

import pytest

import run_cli
from python.calculus.symalg import AWSymbol, ExactCoeff, WeylSymbol, WickSymbol, symbol_from_json
from python.helpers.errors import ConvergenceError, DimensionMismatchError, MalformedInputError, exit_code
from python.helpers.print_style import PrintStyle

z = WickSymbol.first_var(1, 0)
wb = WickSymbol.second_var(1, 0)


def write_symbol(path, symbol):
    path.write_text(json.dumps(symbol.to_json()))
    return str(path)


def read_json(path):
    return json.loads(path.read_text())


def test_counterexample(tmp_path):
    out = tmp_path / "counter.json"
    assert run_cli.run(["counterexample", "--out", str(out)]) == 0
    payload = read_json(out)
    assert ExactCoeff.from_json(payload["quadratic_form"]) == -1
    assert payload["berezin_diag_form"] == "(1-|w|^2)^2+|w|^4"


def test_to_wick_of_harmonic_oscillator(tmp_path):
    x, xi = WeylSymbol.first_var(1, 0), WeylSymbol.second_var(1, 0)
    sym = write_symbol(tmp_path / "h.json", x * x + xi * xi)
    out = tmp_path / "wick.json"
    assert run_cli.run(["to-wick", "--sym", sym, "--out", str(out)]) == 0
    assert symbol_from_json(read_json(out)) == 2 * z * wb + 1


def test_to_weyl_round_trip(tmp_path):
    sym = write_symbol(tmp_path / "a.json", z * wb)
    out = tmp_path / "weyl.json"
    assert run_cli.run(["to-weyl", "--sym", sym, "--out", str(out)]) == 0
    x, xi = WeylSymbol.first_var(1, 0), WeylSymbol.second_var(1, 0)
    assert symbol_from_json(read_json(out)) == (x * x + xi * xi - 1).scale("1/2")


def test_compose_with_matrix_check(tmp_path):
    a = write_symbol(tmp_path / "a.json", wb)
    b = write_symbol(tmp_path / "b.json", z)
    out = tmp_path / "product.json"
    assert run_cli.run(["compose", "--a", a, "--b", b, "--check-matrix", "16", "--out", str(out)]) == 0
    payload = read_json(out)
    assert symbol_from_json(payload["product"]) == z * wb + 1
    assert payload["homomorphism"]["holds"] is True


def test_quantize_writes_csv(tmp_path):
    sym = write_symbol(tmp_path / "n.json", z * wb)
    out = tmp_path / "matrix.csv"
    assert run_cli.run(["quantize", "--sym", sym, "--cutoff", "2", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "row,(0),(1),(2)"
    assert lines[2] == "(1),0+0i,1+0i,0+0i"


def test_selftest(tmp_path):
    out = tmp_path / "selftest.json"
    assert run_cli.run(["selftest", "--count", "2", "--seed", "3", "--out", str(out)]) == 0
    payload = read_json(out)
    assert payload["seed"] == 3
    assert all(r["failed"] == 0 for r in payload["checks"].values())


def test_unknown_command():
    assert run_cli.run(["integrate"]) == 1
    assert run_cli.run([]) == 1


def test_malformed_inputs(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run_cli.run(["to-wick", "--sym", str(broken)]) == 1
    assert run_cli.run(["to-wick"]) == 1
    wrong = write_symbol(tmp_path / "wick.json", z)
    assert run_cli.run(["to-wick", "--sym", wrong]) == 1


def test_garding_precondition_exit_code(tmp_path):
    sym = write_symbol(tmp_path / "neg.json", -(z * wb))
    assert run_cli.run(["garding", "--sym", sym, "--cutoffs", "4,8"]) == 2


def test_garding_trace_csv(tmp_path):
    sym = write_symbol(tmp_path / "n.json", 2 * z * wb)
    out = tmp_path / "trace.csv"
    assert run_cli.run(["garding", "--sym", sym, "--cutoffs", "4,8,12", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("cutoff")
    assert len(lines) == 4


@pytest.mark.parametrize(
    "error, code",
    [
        (MalformedInputError("bad"), 1),
        (DimensionMismatchError(1, 2), 1),
        (ConvergenceError("slow"), 3),
        (RuntimeError("boom"), 70),
    ],
)
def test_exit_codes(error, code):
    assert exit_code(error) == code


def test_berezin_and_aw_expand(tmp_path):
    sym = write_symbol(tmp_path / "a.json", z * wb)
    out = tmp_path / "diag.json"
    assert run_cli.run(["berezin", "--sym", sym, "--out", str(out)]) == 0
    diag = symbol_from_json(read_json(out))
    assert diag.KIND == "aw" and diag.degree == 2

    out = tmp_path / "expansion.json"
    assert run_cli.run(["aw-expand", "--sym", sym, "--check-matrix", "8", "--out", str(out)]) == 0
    assert read_json(out)["reconstruction"]["matches"] is True


def test_elliptic_command(tmp_path):
    x, xi = WeylSymbol.first_var(1, 0), WeylSymbol.second_var(1, 0)
    sym = write_symbol(tmp_path / "h.json", x * x + xi * xi)
    out = tmp_path / "elliptic.json"
    assert run_cli.run(["elliptic", "--sym", sym, "--out", str(out)]) == 0
    payload = read_json(out)
    assert payload["agree"] is True
    assert payload["positive"] == {"weyl": True, "wick": True}


def test_detect_poly_command(tmp_path):
    sym = write_symbol(tmp_path / "a.json", 2 * z * wb + 1)
    out = tmp_path / "detector.json"
    assert run_cli.run(["detect-poly", "--sym", sym, "--out", str(out)]) == 0
    assert read_json(out)["is_polynomial"] is True
    assert run_cli.run(["detect-poly", "--sym", sym, "--form", "fourier"]) == 1


def test_diagnostics_stay_off_stdout(tmp_path, capsys):
    sym = write_symbol(tmp_path / "a.json", z * wb)
    assert run_cli.run(["to-weyl", "--sym", sym]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["kind"] == "weyl"
    assert "to-weyl" in captured.err


def test_verdict_line(capsys):
    PrintStyle.verdict("shubin", False, {"C": float("inf")})
    err = capsys.readouterr().err
    assert "FAIL shubin" in err and "C=inf" in err


def test_certify_wick_and_antiwick(tmp_path):
    sym = write_symbol(tmp_path / "h.json", 2 * z * wb + 1)
    out = tmp_path / "cert.json"
    assert run_cli.run(["certify", "--sym", sym, "--form", "shubin", "--weight", "poly:2", "--out", str(out)]) == 0
    payload = read_json(out)
    assert payload["form"] == "shubin" and payload["passed"] is True

    w = AWSymbol.first_var(1, 0)
    sym = write_symbol(tmp_path / "aw.json", w * w.conj())
    out = tmp_path / "envelope.json"
    assert run_cli.run(["certify", "--sym", sym, "--form", "omega", "--weight", "poly:2", "--out", str(out)]) == 0
    payload = read_json(out)
    assert payload["meta"]["path"] == "polarized"
    assert payload["constants"]["max_exact_error"] < 1e-8


def test_hypo_command(tmp_path):
    sym = write_symbol(tmp_path / "h.json", 2 * z * wb + 1)
    out = tmp_path / "hypo.json"
    assert run_cli.run(["hypo", "--sym", sym, "--rho", "1", "--weight", "poly:2", "--out", str(out)]) == 0
    assert read_json(out)["hypoelliptic"]["kind"] == "hypoelliptic"

    sym = write_symbol(tmp_path / "lin.json", z + wb)
    assert run_cli.run(["hypo", "--sym", sym, "--rho", "1", "--weight", "poly:1", "--out", str(out)]) == 0
    assert read_json(out)["hypoelliptic"]["kind"] == "fail"


def test_bargmann_check_command(tmp_path):
    out = tmp_path / "bargmann.json"
    assert run_cli.run(["bargmann-check", "--out", str(out)]) == 0
    payload = read_json(out)
    assert payload["passed"] is True
    assert set(payload) >= {"bargmann_paths", "factorization", "assignment_stft", "moyal"}


def test_aw_to_wick_command(tmp_path):
    w = AWSymbol.first_var(1, 0)
    r2 = w * w.conj()
    sym = write_symbol(tmp_path / "r4.json", r2 * r2)
    out = tmp_path / "wick.json"
    assert run_cli.run(["aw-to-wick", "--sym", sym, "--out", str(out)]) == 0
    assert symbol_from_json(read_json(out)) == z * z * wb * wb + 4 * z * wb + 2


def test_dequantize_command(tmp_path):
    sym = write_symbol(tmp_path / "n.json", z * wb)
    out = tmp_path / "weyl.json"
    assert run_cli.run(["dequantize", "--sym", sym, "--out", str(out)]) == 0
    x, xi = WeylSymbol.first_var(1, 0), WeylSymbol.second_var(1, 0)
    assert symbol_from_json(read_json(out)) == (x * x + xi * xi - 1).scale("1/2")


def test_wildcard_command_is_unknown():
    assert run_cli.run(["*"]) == 1
    assert run_cli.run(["to-*"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["selftest", "--count", "2", "--seed", "5"],
        ["to-weyl", "--sym", "{sym}"],
        ["hypo", "--sym", "{sym}", "--weight", "poly:2"],
        ["compose", "--a", "{sym}", "--b", "{sym}", "--check-matrix", "6"],
    ],
)
def test_output_is_byte_identical_between_runs(tmp_path, argv):
    sym = write_symbol(tmp_path / "a.json", 2 * z * wb + 1)
    argv = [arg.format(sym=sym) for arg in argv]
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert run_cli.run(argv + ["--out", str(first)]) == 0
    assert run_cli.run(argv + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def embedded_symbols(payload):
    if isinstance(payload, dict):
        if {"dim", "kind", "terms"} <= set(payload):
            yield payload
        else:
            for value in payload.values():
                yield from embedded_symbols(value)
    elif isinstance(payload, list):
        for value in payload:
            yield from embedded_symbols(value)


@pytest.mark.parametrize(
    "argv, count",
    [
        (["to-weyl", "--sym", "{wick}"], 1),
        (["dequantize", "--sym", "{wick}"], 1),
        (["to-wick", "--sym", "{weyl}"], 1),
        (["aw-to-wick", "--sym", "{aw}"], 1),
        (["berezin", "--sym", "{wick}"], 1),
        (["compose", "--a", "{wick}", "--b", "{wick}"], 1),
        (["aw-expand", "--sym", "{wick}"], 3),
        (["counterexample"], 2),
    ],
)
def test_json_output_reparses_as_symbols(tmp_path, argv, count):
    x, xi = WeylSymbol.first_var(1, 0), WeylSymbol.second_var(1, 0)
    w = AWSymbol.first_var(1, 0)
    paths = {
        "wick": write_symbol(tmp_path / "wick.json", z * wb + z),
        "weyl": write_symbol(tmp_path / "weyl.json", x * xi),
        "aw": write_symbol(tmp_path / "aw.json", w * w.conj()),
    }
    out = tmp_path / "out.json"
    assert run_cli.run([arg.format(**paths) for arg in argv] + ["--out", str(out)]) == 0
    found = list(embedded_symbols(read_json(out)))
    assert len(found) == count
    for data in found:
        assert symbol_from_json(data).to_json() == data
