"""Command-line entry point.

Every subcommand builds a :class:`RunConfig` from an optional flat
``key = value`` file and command-line overrides, runs one pipeline and
writes CSV or JSON.  Exit codes: 0 success, 2 usage, 3 numerical failure,
4 unsupported condition.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from .classifier import Condition, classify, omega_leading, triple_sum_T
from .errors import NumericalError, TLSFloquetError, UnsupportedError
from .expansion import MAX_ORDER, expand
from .interaction import Interaction, parse_harmonics
from .oracle import integrate, monodromy_omega
from .propagator import build_U, log_biased_cycles
from .special import j0_zero

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_UNSUPPORTED = 4


def fmt(x: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    """All inputs of one run; serialises to a flat dict."""

    omega: float | None = None
    f0: float = 0.0
    harmonic: list = field(default_factory=list)
    phi: float | None = None
    j0_zero: int | None = None
    epsilon: float = 0.1
    order: int = 6
    cycles: float = 1.6e6
    samples: int = 2000
    tol: float = 1e-9
    ode_tol: float = 1e-12
    out: str | None = None
    format: str = "csv"
    eps_list: list = field(default_factory=lambda: [0.05, 0.1, 0.2])
    zeros: int = 15
    grid: str = "log"

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def interaction(self) -> Interaction:
        if self.omega is None:
            raise ConfigError("omega", "drive frequency is required")
        if not self.omega > 0:
            raise ConfigError("omega", "must be positive")
        harmonics = list(parse_harmonics(self.harmonic))
        if self.j0_zero is not None and self.phi is not None:
            raise ConfigError("phi", "give either phi or j0_zero, not both")
        phi = self.phi
        if self.j0_zero is not None:
            phi = 0.5 * self.omega * j0_zero(self.j0_zero)
        if phi is not None:
            harmonics.append((1, complex(0.5 * phi)))
        return Interaction(self.omega, self.f0, tuple(harmonics))


class ConfigError(ValueError):
    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.name = name


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_LISTS = {"harmonic", "eps_list"}


def _coerce(name: str, raw):
    kind = _FIELDS[name].type
    try:
        if name in _LISTS:
            items = raw if isinstance(raw, list) else [s for s in str(raw).replace(",", " ").split() if s]
            return [float(s) for s in items] if name == "eps_list" else [str(s) for s in items]
        if raw is None:
            return None
        if "int" in kind and "float" not in kind:
            return int(raw)
        if "float" in kind:
            return float(raw)
        return str(raw)
    except ValueError as exc:
        raise ConfigError(name, f"cannot parse {raw!r}") from exc


def read_config_file(path: str) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}", "expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FIELDS:
                raise ConfigError(key, "unknown configuration key")
            out[key] = _coerce(key, value)
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for name in _FIELDS:
        raw = getattr(args, name, None)
        if raw is None or (name in _LISTS and raw == []):
            continue
        values[name] = _coerce(name, raw)
    cfg = RunConfig(**values)
    if not 1 <= cfg.order <= MAX_ORDER:
        raise ConfigError("order", f"must lie in 1..{MAX_ORDER}")
    if cfg.samples < 1:
        raise ConfigError("samples", "must be positive")
    if not cfg.cycles > 0:
        raise ConfigError("cycles", "must be positive")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format", "must be csv or json")
    return cfg


def _complex_pair(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _csv_text(header: list, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- subcommands ---------------------------------------------------------

def cmd_classify(cfg: RunConfig) -> str:
    f = cfg.interaction()
    report = classify(f, cfg.tol)
    out = report.to_dict()
    if report.condition is not Condition.UNSUPPORTED:
        out["omega_leading"] = _complex_pair(omega_leading(f, cfg.epsilon, report))
    out["config"] = cfg.to_dict()
    return _json_text(out)


def cmd_expand(cfg: RunConfig) -> str:
    f = cfg.interaction()
    exp = expand(f, cfg.order, cfg.tol)
    if cfg.format == "csv":
        rows = []
        for n, v in enumerate(exp.v, 1):
            for m, c in sorted(v.coeffs.items()):
                rows.append((n, m, float(abs(c))))
        return _csv_text(["n", "m", "abs_coeff"], rows)
    out = exp.to_dict()
    out["config"] = cfg.to_dict()
    return _json_text(out)


def _setup_propagator(cfg: RunConfig):
    f = cfg.interaction()
    exp = expand(f, cfg.order, cfg.tol)
    return f, exp, build_U(f, exp, cfg.epsilon)


def cmd_propagate(cfg: RunConfig) -> str:
    f, exp, U = _setup_propagator(cfg)
    if cfg.grid == "log":
        cycles = log_biased_cycles(cfg.cycles, cfg.samples)
    else:
        cycles = np.linspace(0.0, cfg.cycles, cfg.samples)
    U11, U12 = U.evaluate_cycles(cycles)
    P = np.abs(U12) ** 2
    defect = np.abs(U11) ** 2 + P - 1.0
    t = cycles * (2.0 * math.pi / f.omega)
    if cfg.format == "json":
        return _json_text({
            "Omega": U.Omega,
            "condition": exp.condition.value,
            "max_abs_defect": float(np.abs(defect).max()),
            "max_P": float(P.max()),
            "samples": int(cycles.size),
            "config": cfg.to_dict(),
        })
    rows = zip(t, P, defect, U11.real, U11.imag, U12.real, U12.imag)
    return _csv_text(["t", "P", "N_minus_1", "re_U11", "im_U11", "re_U12", "im_U12"], rows)


def cmd_compare(cfg: RunConfig) -> str:
    f, exp, U = _setup_propagator(cfg)
    t = np.linspace(0.0, cfg.cycles * 2.0 * math.pi / f.omega, cfg.samples)
    U11, U12 = U.evaluate(t)
    traj = integrate(f, cfg.epsilon, t, cfg.ode_tol)
    d11 = np.abs(U11 - traj.u11)
    d12 = np.abs(U12 - traj.u12)
    if cfg.format == "json":
        return _json_text({
            "max_abs_dU11": float(d11.max()),
            "max_abs_dU12": float(d12.max()),
            "ode_steps": traj.steps,
            "config": cfg.to_dict(),
        })
    rows = zip(t, d11, d12, np.abs(U12) ** 2, traj.probability)
    return _csv_text(["t", "abs_dU11", "abs_dU12", "P_pert", "P_ode"], rows)


def cmd_sweep(cfg: RunConfig, kind: str) -> str:
    if kind == "triple":
        rows = []
        for a in range(1, cfg.zeros + 1):
            x = j0_zero(a)
            T = triple_sum_T(x)
            rows.append((a, x, T, abs(T)))
        if cfg.format == "json":
            return _json_text({"rows": [list(map(float, r)) for r in rows], "config": cfg.to_dict()})
        return _csv_text(["a", "x_a", "T", "abs_T"], rows)
    f = cfg.interaction()
    exp = expand(f, cfg.order, cfg.tol)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for eps in cfg.eps_list:
            Om = build_U(f, exp, eps).Omega
            rows.append((eps, Om, monodromy_omega(f, eps, reference=Om, tol=cfg.ode_tol)))
    if cfg.format == "json":
        return _json_text({"rows": [list(map(float, r)) for r in rows], "config": cfg.to_dict()})
    return _csv_text(["epsilon", "Omega_pert", "Omega_monodromy"], rows)


def cmd_bessel_check(cfg: RunConfig) -> str:
    from .classifier import bessel_identity_rhs, shifted_square_sum

    xs = [j0_zero(1), j0_zero(2), 1.0, 5.0]
    rows = []
    for m in range(4):
        for x in xs:
            lhs = shifted_square_sum(m, x)
            rhs = bessel_identity_rhs(m, x)
            rows.append((m, x, lhs, rhs, abs(lhs - rhs)))
    if cfg.format == "json":
        return _json_text({"rows": [list(map(float, r)) for r in rows], "config": cfg.to_dict()})
    return _csv_text(["m", "x", "lhs", "rhs", "residual"], rows)


# -- argument parsing ----------------------------------------------------

def _drive_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--omega", type=float, help="drive angular frequency")
    p.add_argument("--f0", type=float, help="static field component")
    p.add_argument("--harmonic", action="append", default=[], metavar="n:re:im",
                   help="Fourier amplitude F_n of the drive (repeatable)")
    p.add_argument("--phi", type=float, help="amplitude of a cos(omega t) term")
    p.add_argument("--j0-zero", dest="j0_zero", type=int, metavar="A",
                   help="set phi = omega x_A / 2 with x_A the A-th zero of J0")
    p.add_argument("--tol", type=float, help="classification tolerance on mean values")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"])


def _run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float)
    p.add_argument("--order", type=int)
    p.add_argument("--cycles", type=float, help="horizon in drive periods")
    p.add_argument("--samples", type=int)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tlsfloquet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="resonance condition of a drive")
    _drive_args(p)
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("expand", help="kappa constants and Omega coefficients")
    _drive_args(p)
    p.add_argument("--order", type=int)

    p = sub.add_parser("propagate", help="P(t) and N(t) - 1 over a horizon")
    _drive_args(p)
    _run_args(p)
    p.add_argument("--grid", choices=["log", "linear"])

    p = sub.add_parser("compare", help="perturbative propagator against the ODE integrator")
    _drive_args(p)
    _run_args(p)
    p.add_argument("--ode-tol", dest="ode_tol", type=float)

    p = sub.add_parser("sweep", help="Omega versus epsilon, or the triple Bessel sum at J0 zeros")
    _drive_args(p)
    p.add_argument("kind", choices=["omega", "triple"])
    p.add_argument("--order", type=int)
    p.add_argument("--eps-list", dest="eps_list", nargs="+", type=float)
    p.add_argument("--zeros", type=int)
    p.add_argument("--ode-tol", dest="ode_tol", type=float)

    p = sub.add_parser("bessel-check", help="residuals of the shifted Bessel square-sum identity")
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"])
    return parser


def _origin(exc: BaseException) -> str:
    tb = exc.__traceback__
    name = "tlsfloquet"
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("tlsfloquet"):
            name = mod
        tb = tb.tb_next
    return name


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        cmd = args.command
        if cmd == "classify":
            text = cmd_classify(cfg)
        elif cmd == "expand":
            if args.format is None and "format" not in (read_config_file(args.config) if args.config else {}):
                cfg.format = "json"
            text = cmd_expand(cfg)
        elif cmd == "propagate":
            text = cmd_propagate(cfg)
        elif cmd == "compare":
            text = cmd_compare(cfg)
        elif cmd == "sweep":
            text = cmd_sweep(cfg, args.kind)
        else:
            text = cmd_bessel_check(cfg)
    except (ConfigError, OverflowError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedError as exc:
        print(f"unsupported [{_origin(exc)}]: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (NumericalError, TLSFloquetError) as exc:
        print(f"numerical error [{_origin(exc)}]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"usage error [{_origin(exc)}]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
