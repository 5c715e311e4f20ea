"""Command-line front end.

Every subcommand writes one JSON document with the keys ``tool_version``,
``subcommand``, ``inputs``, ``outputs``, ``seed`` and ``mode`` (``bell-scan``
defaults to a CSV table instead).  Exit status is 0 on success, 2 when the
computation succeeded but the tested proposition failed (violated,
infeasible, zero state, not permutable), and 1 on usage or input errors.

The ``inputs`` object is normalized (angles in radians within ``[0, 2 pi)``)
and can be replayed with ``--replay FILE``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .coupling import (
    LhvProblem,
    anticorrelated_variant,
    as_pi_fraction,
    bell_check,
    bell_scan,
    exact_sin_squared,
    lhv_feasibility,
)
from .experiments import (
    DeuteronModel,
    deuteron_exact,
    deuteron_simulate,
    discrimination_power,
    fermi_ground_energy,
    mgf_check,
    sample_measurements,
)
from .hilbert import Ket, basis_minus, basis_plus, norm, orthogonal_spinor, spinor, tensor
from .spin import (
    conjugate_second,
    default_grid,
    invariance_residual,
    is_isc_form,
    make_parallel_isc,
    make_singlet,
    make_state2,
    spectral_probability,
)
from .statistics import (
    FockSpinState,
    Kind,
    antisymmetrize,
    classify_permutable,
    compose_statistics,
    fock_inner,
    fock_opposite,
    fock_same,
    parse_statistics,
    symmetrize,
    fock_antisymmetrize,
)

OUTPUT_DIR_ENV = "SPINCOUPLE_OUTPUT_DIR"
TWO_PI = 2 * math.pi

STATES: dict[str, Callable[[], Ket]] = {
    "singlet": make_singlet,
    "parallel": make_parallel_isc,
    "state2": make_state2,
    "plus-plus": lambda: tensor(basis_plus(), basis_plus()),
    "improper": lambda: conjugate_second(make_parallel_isc()),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers -----------------------------------------------------------------


def canonical_angle(theta: float) -> float:
    t = math.fmod(float(theta), TWO_PI)
    if t < 0:
        t += TWO_PI
    # fmod of an exact multiple of 2 pi can land just below 2 pi
    return 0.0 if math.isclose(t, TWO_PI, rel_tol=0, abs_tol=1e-15) else t


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _angles(text: str, degrees: bool) -> list[float]:
    vals = _floats(text)
    return [canonical_angle(math.radians(v) if degrees else v) for v in vals]


def _ket_json(k: Ket) -> dict:
    amps = k.amplitudes
    out = {"dims": list(k.dims), "re": [float(a.real) for a in amps]}
    if any(a.imag != 0 for a in amps):
        out["im"] = [float(a.imag) for a in amps]
    out["norm"] = norm(k)
    return out


def _num(v):
    return float(v) if isinstance(v, Fraction) else v


def _exact_angles(angles, c) -> tuple[list[Fraction], Fraction] | None:
    """Rational multiples of pi for ``angles`` and ``c`` if every needed
    ``sin^2`` is rational, else ``None``."""
    qs = [as_pi_fraction(a) for a in angles]
    cq = Fraction(c).limit_denominator(1000)
    if any(q is None for q in qs) or abs(float(cq) - c) > 1e-12:
        return None
    try:
        for a in qs:
            for b in qs:
                exact_sin_squared(cq * abs(a - b))
    except ValueError:
        return None
    return qs, cq


def _outcome_key(o: tuple[int, ...]) -> str:
    return ",".join("+" if v > 0 else "-" for v in o)


def _spinor_token(tok: str, c: float) -> Ket:
    tok = tok.strip()
    if tok == "+":
        return basis_plus()
    if tok == "-":
        return basis_minus()
    return spinor(float(tok), c)


# -- subcommands -------------------------------------------------------------
# each handler maps an inputs dict to (outputs, negative, mode)


def run_state(inp):
    k = STATES[inp["state"]]()
    grid = default_grid(inp["grid"], inp["random_points"])
    resid = invariance_residual(k, inp["c"], grid)
    invariant = resid < inp["tol"]
    isc = is_isc_form(k, inp["c"], grid, inp["tol"]) if k.factors == 2 else False
    out = {"state": _ket_json(k), "invariance_residual": resid,
           "rotationally_invariant": invariant, "isc_form": isc}
    return out, not (invariant and isc), "float"


def run_bell(inp):
    ang = [inp["theta_i"], inp["theta_j"], inp["theta_k"]]
    ex = _exact_angles(ang, inp["c"])
    if ex:
        r = bell_check(*ex[0], ex[1])
        mode = "exact"
    else:
        r = bell_check(*ang, inp["c"], inp["tol"])
        mode = "float"
    out = {"lhs": _num(r.lhs), "rhs": _num(r.rhs), "margin": _num(r.margin), "violated": r.violated}
    if mode == "exact":
        out["exact"] = {"lhs": str(r.lhs), "rhs": str(r.rhs)}
    return out, r.violated, mode


def _scan_grid(inp) -> list[float]:
    if inp.get("angles"):
        return list(inp["angles"])
    n = inp["grid"]
    return [TWO_PI * i / n for i in range(n)]


def run_bell_scan(inp):
    reports = bell_scan(_scan_grid(inp), inp["c"], inp["tol"])
    rows = [{"theta_i": r.theta_i, "theta_j": r.theta_j, "theta_k": r.theta_k, "c": r.c,
             "lhs": r.lhs, "rhs": r.rhs, "margin": r.margin, "violated": r.violated}
            for r in reports]
    violations = sum(r["violated"] for r in rows)
    return {"rows": rows, "triples": len(rows), "violations": violations}, violations > 0, "float"


def run_lhv(inp):
    angles, c = inp["angles"], inp["c"]
    mode = inp["mode"]
    ex = _exact_angles(angles, c) if mode in ("auto", "exact") else None
    if mode == "exact" and ex is None:
        raise ValueError("exact mode needs angles whose sin^2 values are rational")
    if ex:
        problem, mode = LhvProblem.from_angles(ex[0], ex[1]), "exact"
    else:
        problem, mode = LhvProblem.from_angles(angles, c), "float"
    if inp.get("flip") is not None:
        problem = anticorrelated_variant(problem, inp["flip"])
    res = lhv_feasibility(problem, mode, inp["tol"] if mode == "float" else 1e-9)
    out = {
        "disagreement": {f"{a},{b}": _num(p) for (a, b), p in problem.disagreement.items()},
        "feasible": res.feasible,
        "verified": res.verify(),
    }
    if res.feasible:
        out["distribution"] = {_outcome_key(s): _num(v) for s, v in sorted(res.distribution.items(), reverse=True)}
    else:
        out["farkas"] = [_num(v) for v in res.farkas]
        out["violated_inequalities"] = res.violated_inequalities
    if mode == "exact" and res.feasible:
        out["exact"] = {_outcome_key(s): str(v) for s, v in sorted(res.distribution.items(), reverse=True)}
    elif mode == "exact":
        out["exact"] = {"farkas": [str(v) for v in res.farkas]}
    return out, not res.feasible, mode


def run_antisym(inp, sym=False):
    parts = [_spinor_token(t, inp["c"]) for t in inp["parts"]]
    k = symmetrize(parts) if sym else antisymmetrize(parts)
    zero = k.is_zero(inp["tol"])
    out = {"state": _ket_json(k), "zero": zero}
    return out, (zero and not sym), "float"


def run_classify(inp):
    coeffs = list(inp["coefficients"])
    if inp.get("signs"):
        w = 1 / math.sqrt(len(coeffs))
        coeffs = [w * c for c in coeffs]
    label = classify_permutable(coeffs, inp["tol"])
    return {"kind": label.kind.value, "n": len(label.block)}, label.kind is Kind.NOT_PERMUTABLE, "float"


def run_fock(inp):
    dirs, c = inp["directions"], inp["c"]
    states = []
    for spec in inp["states"]:
        if len(spec) != len(dirs):
            raise ValueError(f"state {spec!r} needs one entry per direction")
        sp = []
        for tok, d in zip(spec, dirs):
            s = spinor(d, c)
            sp.append(s if tok == "+" else orthogonal_spinor(s))
        states.append(FockSpinState(dirs, sp))
    k = fock_antisymmetrize(states)
    zero = k.is_zero(inp["tol"])
    pairs = {}
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            pairs[f"{i},{j}"] = {"inner": float(fock_inner(states[i], states[j])),
                                 "same": fock_same(states[i], states[j]),
                                 "opposite": fock_opposite(states[i], states[j])}
    return {"state": _ket_json(k), "zero": zero, "pairs": pairs}, zero, "float"


def run_compose(inp):
    label = parse_statistics(inp["expr"])
    group = compose_statistics(label)
    out = {"expr": str(label), "order": len(group), "closure_verified": True,
           "even_character": sum(1 for _, ch in group if ch == 1)}
    if inp.get("list"):
        out["elements"] = [{"mapping": list(p.mapping), "character": ch} for p, ch in group]
    return out, False, "exact"


def run_energy(inp):
    levels = [Fraction(v) for v in inp["levels"]]
    e = fermi_ground_energy(levels, inp["particles"])
    return {"energy": float(e), "exact": str(e)}, False, "exact"


def run_deuteron(inp):
    if inp["exact"]:
        d = deuteron_exact(inp["model"])
        out = {f"{k:+d}" if k else "0": float(v) for k, v in d.items()}
        return out, False, "exact"
    r = deuteron_simulate(inp["model"], inp["samples"], inp["seed"])
    key = lambda k: f"{k:+d}" if k else "0"
    out = {"counts": {key(k): v for k, v in r.counts.items()},
           "frequencies": {key(k): v for k, v in r.frequencies.items()},
           "chi2": r.chi2, "p_values": r.p_values}
    return out, False, "monte-carlo"


def run_power(inp):
    r = discrimination_power(inp["samples"], inp["alpha"], inp["trials"], inp["seed"])
    out = {"reject_conventional": r.reject_conventional, "reject_independent": r.reject_independent,
           "noncentral_conventional": r.noncentral_conventional,
           "noncentral_independent": r.noncentral_independent}
    return out, False, "monte-carlo"


def run_mgf(inp):
    r = mgf_check(inp["t"])
    out = {"marginal": r.marginal, "product_of_marginals": r.product_of_marginals,
           "independent_product": r.independent_product, "coupled_value": r.coupled_value,
           "independent_holds": r.independent_holds, "coupled_holds": r.coupled_holds}
    return out, False, "float"


def run_sample(inp):
    k = STATES[inp["state"]]()
    counts = sample_measurements(k, inp["axes"], inp["samples"], inp["seed"], inp["c"])
    exact = spectral_probability(k, inp["axes"], inp["c"])
    out = {"counts": {_outcome_key(o): n for o, n in sorted(counts.items(), reverse=True)},
           "born": {_outcome_key(o): p for o, p in exact}}
    return out, False, "monte-carlo"


HANDLERS: dict[str, Callable[[dict], tuple[dict, bool, str]]] = {
    "state": run_state,
    "bell": run_bell,
    "bell-scan": run_bell_scan,
    "lhv": run_lhv,
    "antisym": run_antisym,
    "sym": lambda inp: run_antisym(inp, sym=True),
    "classify": run_classify,
    "fock": run_fock,
    "compose": run_compose,
    "energy": run_energy,
    "deuteron": run_deuteron,
    "power": run_power,
    "mgf": run_mgf,
    "sample": run_sample,
}


def execute(subcommand: str, inputs: dict) -> dict:
    """Run ``subcommand`` on a normalized inputs dict and build the report."""
    if subcommand not in HANDLERS:
        raise UsageError(f"unknown subcommand {subcommand!r}")
    outputs, negative, mode = HANDLERS[subcommand](inputs)
    outputs["negative"] = bool(negative)
    return {
        "tool_version": __version__,
        "subcommand": subcommand,
        "inputs": inputs,
        "outputs": outputs,
        "seed": inputs["seed"],
        "mode": mode,
    }


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--c", type=float, default=0.5, help="spin constant (0.5 spin-1/2, 1 photon)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--degrees", action="store_true", help="angles are in degrees")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    parser = _Parser(prog="spincouple", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--replay", metavar="FILE", help="re-run the inputs of a saved JSON report")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("state", "rotational invariance and ISC form of a named two-particle state")
    p.add_argument("--state", choices=sorted(STATES), default="singlet")
    p.add_argument("--grid", type=int, default=64, help="uniform grid points")
    p.add_argument("--random-points", type=int, default=16)

    p = add("bell", "single Bell/Wigner inequality check")
    p.add_argument("--ti", type=float, required=True)
    p.add_argument("--tj", type=float, required=True)
    p.add_argument("--tk", type=float, required=True)

    p = add("bell-scan", "Bell check on every ordered triple of a grid")
    p.add_argument("--grid", type=int, default=12, help="uniform points in [0, 2 pi)")
    p.add_argument("--angles", help="explicit comma-separated angles instead of --grid")

    p = add("lhv", "local hidden variable feasibility for parallel-correlated spins")
    p.add_argument("--angles", required=True, help="comma-separated measurement directions")
    p.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    p.add_argument("--flip", type=int, help="flip the sign convention of this particle (0-based)")

    for name, h in (("antisym", "antisymmetrized product of spinors"),
                    ("sym", "symmetrized product of spinors")):
        p = add(name, h)
        p.add_argument("--parts", required=True,
                       help="comma-separated '+', '-' or angles (spinor along that angle)")

    p = add("classify", "Fermi/Bose classification of permutation coefficients")
    p.add_argument("--coefficients", required=True, help="n! comma-separated values, lexicographic order")
    p.add_argument("--signs", action="store_true", help="scale the values by 1/sqrt(n!)")

    p = add("fock", "antisymmetrized Fock spin states")
    p.add_argument("--directions", required=True)
    p.add_argument("--states", required=True,
                   help="';'-separated states, each a ','-separated +/- per direction")

    p = add("compose", "mixed statistics group, e.g. 's3o(a2xa2xa2)'")
    p.add_argument("--expr", required=True)
    p.add_argument("--list", action="store_true", help="include every group element")

    p = add("energy", "ground energy of 2n spin-paired fermions")
    p.add_argument("--levels", required=True, help="ascending energies (fractions allowed)")
    p.add_argument("--particles", type=int, required=True)

    p = add("deuteron", "deuteron spin-split distribution")
    p.add_argument("--model", default="independent",
                   choices=("independent", "paper", "conventional"))
    p.add_argument("--exact", action="store_true")
    p.add_argument("--samples", type=int, default=10**6)

    p = add("power", "chi-square discrimination power between the deuteron models")
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--trials", type=int, default=1000)

    p = add("mgf", "moment generating function product rule")
    p.add_argument("--t", type=float, required=True)

    p = add("sample", "Monte Carlo spin measurements of a named state")
    p.add_argument("--state", choices=sorted(STATES), default="singlet")
    p.add_argument("--axes", required=True)
    p.add_argument("--samples", type=int, default=10**5)
    return parser


def inputs_from_args(ns: argparse.Namespace) -> dict:
    """Normalize parsed arguments into the replayable inputs dict."""
    cmd = ns.subcommand
    inp: dict[str, Any] = {"c": ns.c, "seed": ns.seed, "tol": ns.tol}
    deg = ns.degrees
    if cmd == "state":
        inp.update(state=ns.state, grid=ns.grid, random_points=ns.random_points)
    elif cmd == "bell":
        ti, tj, tk = _angles(f"{ns.ti},{ns.tj},{ns.tk}", deg)
        inp.update(theta_i=ti, theta_j=tj, theta_k=tk)
    elif cmd == "bell-scan":
        inp.update(grid=ns.grid, angles=_angles(ns.angles, deg) if ns.angles else None)
    elif cmd == "lhv":
        inp.update(angles=_angles(ns.angles, deg), mode=ns.mode, flip=ns.flip)
    elif cmd in ("antisym", "sym"):
        parts = []
        for tok in ns.parts.split(","):
            tok = tok.strip()
            if tok not in ("+", "-"):
                tok = repr(canonical_angle(math.radians(float(tok)) if deg else float(tok)))
            parts.append(tok)
        inp.update(parts=parts)
    elif cmd == "classify":
        inp.update(coefficients=_floats(ns.coefficients), signs=ns.signs)
    elif cmd == "fock":
        states = [[t.strip() for t in s.split(",")] for s in ns.states.split(";") if s.strip()]
        for s in states:
            if any(t not in ("+", "-") for t in s):
                raise UsageError(f"Fock state entries must be '+' or '-': {s}")
        inp.update(directions=_angles(ns.directions, deg), states=states)
    elif cmd == "compose":
        inp.update(expr=ns.expr, list=ns.list)
    elif cmd == "energy":
        inp.update(levels=[str(Fraction(v.strip())) for v in ns.levels.split(",")], particles=ns.particles)
    elif cmd == "deuteron":
        inp.update(model=DeuteronModel(ns.model).value, exact=ns.exact, samples=ns.samples)
    elif cmd == "power":
        inp.update(samples=ns.samples, alpha=ns.alpha, trials=ns.trials)
    elif cmd == "mgf":
        inp.update(t=ns.t)
    elif cmd == "sample":
        inp.update(state=ns.state, axes=_angles(ns.axes, deg), samples=ns.samples)
    return inp


def render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        if report["subcommand"] != "bell-scan":
            raise UsageError("csv output is only available for bell-scan")
        buf = io.StringIO()
        cols = ["theta_i", "theta_j", "theta_k", "c", "lhs", "rhs", "margin", "violated"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for row in report["outputs"]["rows"]:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        return buf.getvalue()
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _output_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    """Entry point returning the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        parser = build_parser()
        ns = parser.parse_args(argv)
        if ns.replay:
            saved = json.loads(Path(ns.replay).read_text())
            report = execute(saved["subcommand"], saved["inputs"])
            fmt, out_path = "json", None
        else:
            if not ns.subcommand:
                raise UsageError("a subcommand is required")
            report = execute(ns.subcommand, inputs_from_args(ns))
            fmt = ns.format or ("csv" if ns.subcommand == "bell-scan" else "json")
            out_path = ns.output
        text = render(report, fmt)
    except UsageError as exc:
        print(f"spincouple: usage error: {exc}", file=stderr)
        return 1
    except (ValueError, TypeError, IndexError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"spincouple: error: {exc}", file=stderr)
        return 1
    if out_path:
        p = _output_path(out_path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    else:
        stdout.write(text)
    return 2 if report["outputs"]["negative"] else 0


def main() -> None:
    sys.exit(run())
