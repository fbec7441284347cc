import argparse
from typing import Sequence

parser = argparse.ArgumentParser(prog="run_cli.py", description="Bargmann-Fock operator calculus", allow_abbrev=False)
args: dict = {}


def _build_parser(p: argparse.ArgumentParser):
    p.add_argument("command", nargs="?", default=None, help="command to run, e.g. to-wick")
    p.add_argument("--sym", type=str, default=None, help="symbol JSON file")
    p.add_argument("--a", type=str, default=None, help="first operand JSON file")
    p.add_argument("--b", type=str, default=None, help="second operand JSON file")
    p.add_argument("--out", type=str, default=None, help="write the payload here instead of stdout")
    p.add_argument("--cutoff", type=int, default=None, help="Fock cutoff degree D")
    p.add_argument("--cutoffs", type=str, default=None, help="comma separated cutoffs")
    p.add_argument("--grid", type=str, default=None, help="Rmin,Rmax,radial,angular")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized suites")
    p.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
    p.add_argument("--config", type=str, default=None, help="settings JSON file")
    p.add_argument("--kind", type=str, default=None, help="symbol kind when the file omits it")
    p.add_argument("--order", type=int, default=None, help="expansion order")
    p.add_argument("--weyl", action="store_true", help="compose Weyl symbols")
    p.add_argument("--check-matrix", dest="check_matrix", type=int, default=None, help="cutoff for the matrix homomorphism check")
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--rho0", type=float, default=None)
    p.add_argument("--weight", type=str, default=None, help="'1', 'poly:s' or 'exp:r:s'")
    p.add_argument("--form", type=str, default=None, help="estimate template")
    p.add_argument("--count", type=int, default=None, help="number of random cases")
    p.add_argument("--n", dest="N", type=float, default=None, help="decay exponent N of the certificate")
    p.add_argument("--r", type=float, default=None, help="envelope parameter r")
    p.add_argument("--r1", type=float, default=None)
    p.add_argument("--r2", type=float, default=None)
    p.add_argument("--s", type=float, default=None, help="Gevrey index s")
    p.add_argument("--debug", action="store_true", help="debug logging")


_build_parser(parser)


def initialize(argv: Sequence[str] | None = None) -> dict:
    global args
    known, unknown = parser.parse_known_args(argv)
    args = vars(known)
    for arg in unknown:
        if "=" in arg:
            key, value = arg.split("=", 1)
            key = key.lstrip("-").replace("-", "_")
            args[key] = value
    return args


def parse_int_list(text: str | None) -> list[int] | None:
    if not text:
        return None
    return [int(p) for p in text.split(",") if p.strip()]
