#!/usr/bin/env python3
"""Tests for the schord command line"""

import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout

from app.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue().strip(), err.getvalue()


def test_hh():
    code, out, _ = run("hh", "--algebra", "mat2", "--degree", "1")
    assert code == 0
    assert out == "dim HH^1(mat2) = 0"
    code, out, _ = run("--json", "hh", "--algebra", "trunc_poly:3", "--degree", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 2
    assert payload["variant"] == "normalized"
    print("   ✓ hh command")


def test_classify_and_validate():
    code, out, _ = run("diagram", "classify", "cup")
    assert (code, out) == (0, "(g=0, n=2, m=1)")
    code, out, _ = run("algebra", "validate", "dual_numbers")
    assert (code, out) == (0, "valid: dual_numbers")
    code, out, _ = run("compose", "tau", "tau")
    assert code == 0 and out.startswith("1 * ")


def test_errors_exit_with_input_code():
    code, _, err = run("diagram", "classify", "missing.json")
    assert code == 2
    assert "file not found" in err
    code, out, _ = run("--json", "diagram", "classify", "pentagon")
    assert code == 2
    assert json.loads(out)["type"] == "InputError"
    code, _, _ = run("frobnicate")
    assert code == 2


def test_act_reads_cochain_files():
    data = {"algebra": "dual_numbers", "components": {"1": [[1, 0, 1]]}}
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "f.json")
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(data, handle)
        code, out, _ = run("--json", "act", "reverse", "--inputs", path)
    assert code == 0
    payload = json.loads(out)
    assert payload["shape"] == 1
    assert payload["form"] == "primal"
    # degree-one reversal carries a minus sign
    assert payload["terms"] == [["-1", [[1, 0]]]]


def test_verify_command():
    code, out, _ = run("--seed", "3", "verify", "--checks", "worked-example")
    assert code == 0
    assert out.endswith("1/1 checks passed (seed 3)")


def main_tests():
    print("\nCommand line tests\n")
    test_hh()
    test_classify_and_validate()
    test_errors_exit_with_input_code()
    test_act_reads_cochain_files()
    test_verify_command()
    print("\n✓ cli tests completed")


if __name__ == "__main__":
    main_tests()
