"""Command line front end: config loading, dispatch and JSON reports."""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import click

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .appendix import appendix_test_vector_search
from .cuspidal import APPENDIX, DEFAULT, build_datum
from .errors import ConfigError, NotApplicable, OutOfTableRange, StarViolated, ToricError
from .instances import CASES, case_datum, case_problems, central_omega, trivial
from .orbital import TestFunction, archimedean_orbital_exact, orbital_xi, orbital_zero, x_for_xi
from .padic import Context
from .periods import (TOLERANCE, PeriodProblem, conductor_rs, existence_routes, geometric_existence,
                      matching_character, period_integral, tunnell_epsilon)
from .quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra
from .quaternion import DIVISION, MATRIX

SECTIONS = ("context", "L", "theta", "E", "chi", "run")
KINDS = (INERT, RAMIFIED, SPLIT)


# -- config ---------------------------------------------------------------------------------

def _rational(value, where: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{where}: expected a rational such as 2/25, got {value!r}") from None


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _kind(value, where: str) -> str:
    if value not in KINDS:
        raise ConfigError(f"{where}: kind must be one of {', '.join(KINDS)}, got {value!r}")
    return value


@dataclass
class RunConfig:
    p: int = 5
    precision: int | None = None
    case: int | None = None
    n: int = 1
    L_kind: str = INERT
    L_D: Fraction | None = None
    theta_b: Fraction = Fraction(1, 25)
    theta_real: Fraction = Fraction(0)
    E_same: bool = True
    E_kind: str = INERT
    E_D: Fraction | None = None
    chi_b: Fraction = Fraction(0)
    chi_real: Fraction = Fraction(0)
    chi_choice: int = 0
    side: str | None = None
    polarization: str = DEFAULT
    depth: int | None = None
    sweep: bool = False
    xi: list[Fraction] = field(default_factory=list)
    weight: tuple[int, int] | None = None
    arch_xi: list[Fraction] = field(default_factory=list)
    suite: str = "acceptance"

    def echo(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, Fraction):
                v = _q(v)
            elif isinstance(v, list):
                v = [_q(x) if isinstance(x, Fraction) else x for x in v]
            out[k] = v
        return out


def parse_config(data: dict) -> RunConfig:
    """Validate a parsed TOML mapping into a RunConfig; ConfigError names the offending field."""
    unknown = set(data) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    cfg = RunConfig()
    ctx = data.get("context", {})
    if "p" in ctx:
        cfg.p = _integer(ctx["p"], "[context].p")
    if "precision" in ctx:
        cfg.precision = _integer(ctx["precision"], "[context].precision")
    if cfg.p < 5:
        raise ConfigError("[context].p: residue characteristic must be at least 5")
    run = data.get("run", {})
    if "case" in run:
        cfg.case = _integer(run["case"], "[run].case")
        if cfg.case not in CASES:
            raise ConfigError("[run].case: must be 1..6")
        cfg.n = _integer(run.get("n", 1), "[run].n")
        if cfg.n < 1:
            raise ConfigError("[run].n: must be positive")
    L = data.get("L", {})
    cfg.L_kind = _kind(L.get("kind", INERT), "[L].kind")
    if cfg.L_kind == SPLIT:
        raise ConfigError("[L].kind: the inducing field must be a field (inert or ramified)")
    if "D" in L:
        cfg.L_D = _rational(L["D"], "[L].D")
    theta = data.get("theta", {})
    if "b" in theta:
        cfg.theta_b = _rational(theta["b"], "[theta].b")
    if "real" in theta:
        cfg.theta_real = _rational(theta["real"], "[theta].real")
    E = data.get("E", {})
    if "kind" in E:
        cfg.E_same = False
        cfg.E_kind = _kind(E["kind"], "[E].kind")
        if "D" in E:
            cfg.E_D = _rational(E["D"], "[E].D")
    if E.get("same") is True:
        cfg.E_same = True
    chi = data.get("chi", {})
    if "b" in chi:
        cfg.chi_b = _rational(chi["b"], "[chi].b")
    if "real" in chi:
        cfg.chi_real = _rational(chi["real"], "[chi].real")
    if "choice" in chi:
        cfg.chi_choice = _integer(chi["choice"], "[chi].choice")
    if "side" in run:
        cfg.side = run["side"]
    if "polarization" in run:
        cfg.polarization = run["polarization"]
    if "depth" in run:
        cfg.depth = _integer(run["depth"], "[run].depth")
    if "sweep" in run:
        cfg.sweep = bool(run["sweep"])
    if "xi" in run:
        cfg.xi = [_rational(x, "[run].xi") for x in run["xi"]]
    if "k" in run or "m" in run:
        cfg.weight = (_integer(run.get("k"), "[run].k"), _integer(run.get("m"), "[run].m"))
        cfg.arch_xi = [_rational(x, "[run].arch_xi") for x in run.get("arch_xi", [-1])]
    if "suite" in run:
        cfg.suite = run["suite"]
    _check_choices(cfg)
    return cfg


def _check_choices(cfg: RunConfig):
    if cfg.side not in (None, MATRIX, DIVISION):
        raise ConfigError(f"[run].side: must be matrix or division, got {cfg.side!r}")
    if cfg.polarization not in (DEFAULT, APPENDIX):
        raise ConfigError(f"[run].polarization: must be default or appendix, got {cfg.polarization!r}")
    if cfg.depth is not None and cfg.depth < 1:
        raise ConfigError("[run].depth: must be at least 1")


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return parse_config({})
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data)


# -- building problems ----------------------------------------------------------------------

def build_datum_from(cfg: RunConfig):
    if cfg.case is not None:
        d = case_datum(cfg.p, cfg.case, cfg.n, precision=cfg.precision)
        if cfg.side is not None and cfg.side != d.side:
            raise ConfigError(f"[run].side: case {cfg.case} lives on the {d.side} side")
        if cfg.polarization != DEFAULT:
            d = build_datum(d.L, d.theta, d.side, polarization=cfg.polarization)
        return d
    ctx = Context(cfg.p, cfg.precision or 16)
    try:
        L = QuadAlgebra(ctx, cfg.L_kind, cfg.L_D)
        theta = matching_character(L, trivial, b=cfg.theta_b, real=cfg.theta_real)
        return build_datum(L, theta, cfg.side or MATRIX, polarization=cfg.polarization)
    except (ToricError, ValueError) as exc:
        raise ConfigError(f"[L]/[theta]: {exc}") from None


def build_problem_from(cfg: RunConfig) -> PeriodProblem:
    d = build_datum_from(cfg)
    try:
        if cfg.E_same:
            E = d.L
        else:
            E = QuadAlgebra(d.ctx, cfg.E_kind, cfg.E_D)
            if E.is_field and E.isomorphic(d.L):
                E = d.L
        chi = matching_character(E, central_omega(d), b=cfg.chi_b, real=cfg.chi_real,
                                 choice=cfg.chi_choice)
        return PeriodProblem(d, E, chi)
    except (ToricError, ValueError) as exc:
        raise ConfigError(f"[E]/[chi]: {exc}") from None


# -- serialization --------------------------------------------------------------------------

def _q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _c(z: complex) -> list[float]:
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


class VerificationFailure(Exception):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


# -- commands -------------------------------------------------------------------------------

def cmd_conductor(cfg: RunConfig) -> dict:
    pr = build_problem_from(cfg)
    cr = conductor_rs(pr)
    return {"c_pi": cr.c_pi, "c_pi_chi": cr.c_pi_chi, "c_rs": cr.c_rs, "l": cr.l,
            "norm_route": cr.norm_route, "case_route": cr.case_route,
            "routes_agree": cr.norm_route == cr.case_route}


def cmd_epsilon(cfg: RunConfig) -> dict:
    pr = build_problem_from(cfg)
    try:
        return {"epsilon": tunnell_epsilon(pr)}
    except (OutOfTableRange, StarViolated) as exc:
        return {"epsilon": None, "reason": str(exc)}


def cmd_existence(cfg: RunConfig) -> dict:
    pr = build_problem_from(cfg)
    pr.require_star()
    out = {}
    for side in (MATRIX, DIVISION):
        by_L, by_E = existence_routes(pr, side)
        out[side] = {"L_route": by_L, "E_route": by_E}
    sides = [s for s in (MATRIX, DIVISION) if out[s]["L_route"]]
    out["side_with_period"] = sides[0] if len(sides) == 1 else None
    out["dichotomy"] = len(sides) == 1 and all(v["L_route"] == v["E_route"]
                                               for v in (out[MATRIX], out[DIVISION]))
    return out


def _integral_report(pr: PeriodProblem, depth) -> dict:
    rep = period_integral(pr, depth=depth)
    return {"predicted": [_q(v) for v in rep.predicted], "brute": _c(rep.brute_value),
            "tolerance": TOLERANCE, "all_phases_zero": rep.all_phases_zero,
            "support_measure": _q(rep.support_measure), "depth": rep.depth, "match": rep.match,
            "l": rep.notes.get("l"), "aligned": rep.notes.get("aligned")}


def cmd_integrate(cfg: RunConfig) -> dict:
    if cfg.sweep:
        d = build_datum_from(cfg)
        if cfg.case is None:
            raise ConfigError("--sweep needs [run].case")
        rows, bad = 0, 0
        for pr in case_problems(cfg.p, cfg.case, cfg.n):
            try:
                rep = period_integral(pr, depth=cfg.depth)
            except (NotApplicable, OutOfTableRange):
                continue
            rows += 1
            bad += not rep.match
        out = {"case": cfg.case, "n": cfg.n, "side": d.side, "problems": rows, "mismatches": bad}
        if bad:
            raise VerificationFailure(out)
        return out
    pr = build_problem_from(cfg)
    pr.require_star()
    out = _integral_report(pr, cfg.depth)
    out["side"] = pr.datum.side
    out["existence"] = geometric_existence(pr, pr.datum.side)
    if not out["match"]:
        raise VerificationFailure(out)
    return out


def cmd_find_test_vector(cfg: RunConfig) -> dict:
    pr = build_problem_from(cfg)
    res = appendix_test_vector_search(pr, verify=1)
    out = {"found": res.found, "solutions": len(res.solutions),
           "modulus_exponent": res.modulus_exponent, "orientation_counts": res.orientation_counts,
           "first": [{"u": s.u, "v": s.v, "level": s.level, "value": _q(s.value)}
                     for s in res.solutions[:5]],
           "verified": [{"u": s.u, "v": s.v, "brute": _c(v["brute_value"]), "match": v["match"]}
                        for s, v in res.verified]}
    if res.reason:
        out["reason"] = res.reason
    if not all(v["match"] for v in out["verified"]):
        raise VerificationFailure(out)
    return out


def cmd_orbital(cfg: RunConfig) -> dict:
    out: dict = {}
    if cfg.weight is not None:
        k, m = cfg.weight
        out["archimedean"] = [{"xi": _q(x), "value": _q(archimedean_orbital_exact(k, m, x))}
                              for x in cfg.arch_xi]
        if cfg.case is None and not cfg.xi:
            return out
    pr = build_problem_from(cfg)
    if pr.datum.side != MATRIX:
        raise ConfigError("[run].side: orbital integrals use the matrix-side test function")
    report = period_integral(pr)
    tf = TestFunction(pr.datum)
    out["normalization"] = _q(tf.normalization)
    out["period"] = _c(report.brute_value)
    out["I0"] = _c(orbital_zero(tf, pr))
    rows = []
    for xi in cfg.xi:
        try:
            x = x_for_xi(pr.embedding, xi)
        except ToricError as exc:
            rows.append({"xi": _q(xi), "skipped": str(exc)})
            continue
        try:
            r = orbital_xi(tf, pr, x)
        except ValueError as exc:
            rows.append({"xi": _q(xi), "skipped": str(exc)})
            continue
        rows.append({"xi": _q(xi), "value": _c(r.value), "d": r.d, "m": r.m,
                     "envelope_exponent": _q(r.envelope_exponent),
                     "measured_constant": None if r.measured_constant is None
                     else round(r.measured_constant, 9)})
    out["xi"] = rows
    return out


def cmd_verify_suite(cfg: RunConfig) -> dict:
    from .acceptance import SUITES, run_suite
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    results = run_suite(cfg.suite)
    out = {"suite": cfg.suite,
           "criteria": [{"id": r.ident, "name": r.name, "passed": r.passed, "detail": r.detail}
                        for r in results],
           "all_passed": all(r.passed for r in results)}
    if not out["all_passed"]:
        raise VerificationFailure(out)
    return out


COMMANDS = {
    "conductor": cmd_conductor,
    "epsilon": cmd_epsilon,
    "existence": cmd_existence,
    "integrate": cmd_integrate,
    "find-test-vector": cmd_find_test_vector,
    "orbital": cmd_orbital,
    "verify-suite": cmd_verify_suite,
}


def run_command(name: str, cfg: RunConfig) -> dict:
    return {"command": name, "config": cfg.echo(), "result": COMMANDS[name](cfg)}


# -- click ----------------------------------------------------------------------------------

def _pretty(report: dict) -> str:
    lines = [f"command: {report['command']}"]

    def walk(obj, prefix):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(v, f"{prefix}{k}.")
        elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
            for i, v in enumerate(obj):
                walk(v, f"{prefix}{i}.")
        else:
            lines.append(f"  {prefix[:-1]:<40} {obj}")

    walk(report["result"], "")
    return "\n".join(lines)


def _emit(report: dict, out: str | None, pretty: bool):
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(_pretty(report) if pretty else text)


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(sorted(COMMANDS)))
@click.argument("suite", required=False)
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="TOML config file.")
@click.option("--p", "p", type=int, help="Residue characteristic (overrides [context].p).")
@click.option("--precision", type=int, help="p-adic precision N.")
@click.option("--depth", type=int, help="Coset depth M for brute-force sums.")
@click.option("--side", type=click.Choice([MATRIX, DIVISION]))
@click.option("--polarization", type=click.Choice([DEFAULT, APPENDIX]))
@click.option("--sweep", is_flag=True, help="Run over every torus and character class of the case.")
@click.option("--out", "out", type=click.Path(dir_okay=False), help="Also write the JSON report here.")
@click.option("--pretty", is_flag=True, help="Human-readable table instead of JSON.")
def main(command, suite, config_path, p, precision, depth, side, polarization, sweep, out, pretty):
    """Toric period toolkit: conductors, epsilon, existence, integrals, test vectors, orbital integrals."""
    try:
        cfg = load_config(config_path)
        if p is not None:
            cfg.p = p
            if p < 5:
                raise ConfigError("--p: residue characteristic must be at least 5")
        if precision is not None:
            cfg.precision = precision
        if depth is not None:
            cfg.depth = depth
        if side is not None:
            cfg.side = side
        if polarization is not None:
            cfg.polarization = polarization
        if sweep:
            cfg.sweep = True
        if suite is not None:
            cfg.suite = suite
        _check_choices(cfg)
        report = run_command(command, cfg)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except StarViolated as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except VerificationFailure as exc:
        _emit({"command": command, "config": cfg.echo(), "result": exc.report}, out, pretty)
        sys.exit(3)
    _emit(report, out, pretty)


if __name__ == "__main__":  # pragma: no cover
    main()
