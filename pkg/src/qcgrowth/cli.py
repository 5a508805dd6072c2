"""Command-line front end: ``qcg analyze|verify|lemma5|ring-check|families``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from ._gauss import QuadratureSettings
from .bounds import (
    THEOREMS,
    GrowthReport,
    extremal_eta,
    geometric_grid,
    liminf_verdict,
    random_admissible_eta,
    ring_inequality_check,
    sweep,
)
from .core import AnnulusSpec, PlanePoint, load_radial_table, read_two_column_csv
from .errors import ConvergenceError, QCGError
from .families import CATALOG, make_profile, profile_from_field
from .weights import WeightSpec, iterated_exp, lemma5_check

log = logging.getLogger("qcgrowth")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_DECAY = 3
EXIT_INCONCLUSIVE = 4

VERDICT_EXIT = {"bounded-below": EXIT_OK, "tends-to-zero": EXIT_DECAY,
                "inconclusive": EXIT_INCONCLUSIVE}

CSV_COLUMNS = ("R", "M_R", "I_R", "Lambda_R", "envelope", "ratio", "floor", "status")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    family: Optional[str] = None
    alpha: Optional[float] = None
    gamma: Optional[float] = None
    field_path: Optional[str] = None
    z0_re: float = 0.0
    z0_im: float = 0.0
    r0: Optional[float] = None
    weight: str = "canonical"
    weight_N: int = 0
    weight_value: float = 1.0
    weight_path: Optional[str] = None
    R_min: float = 10.0
    R_max: float = 1e6
    count: int = 13
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2**20
    angular_nodes_initial: int = 16
    theorem: str = "lemma3"
    c: Optional[float] = None
    p: float = 1.0
    K: Optional[float] = None
    tail_fraction: float = 0.25
    floor: Optional[float] = None
    reports_path: Optional[str] = None
    r1: float = 1.0
    r2: float = math.e
    output: Optional[str] = None
    format: str = "csv"

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**raw)

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file {path} does not exist")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: config must be a flat JSON object")
        return cls.from_dict(raw)

    @property
    def center(self) -> PlanePoint:
        return PlanePoint(float(self.z0_re), float(self.z0_im))

    def quad(self) -> QuadratureSettings:
        settings = QuadratureSettings(self.rel_tol, self.abs_tol, int(self.max_subdivisions),
                                      int(self.angular_nodes_initial))
        return QuadratureSettings.from_env(**asdict(settings))

    def weight_spec(self) -> WeightSpec:
        if self.weight_path:
            ts, ps = read_two_column_csv(self.weight_path)
            return WeightSpec.tabulated(ts, ps)
        if self.weight == "canonical":
            return WeightSpec.canonical(int(self.weight_N))
        if self.weight == "reciprocal":
            return WeightSpec.reciprocal()
        if self.weight == "constant":
            return WeightSpec.constant(float(self.weight_value))
        raise ConfigError(f"unknown weight {self.weight!r}")

    def lower_radius(self, w: WeightSpec) -> float:
        if self.r0 is not None:
            return float(self.r0)
        if w.kind == "canonical":
            return iterated_exp(w.N)
        return 1.0

    def profile(self):
        if self.field_path:
            return profile_from_field(load_radial_table(self.field_path, self.center))
        if not self.family:
            raise ConfigError("config needs either 'family' or 'field_path'")
        param = self.alpha if self.family == "power" else self.gamma
        return make_profile(self.family, param, self.center)

    def validate(self, need_grid: bool = True) -> None:
        for key in ("field_path", "weight_path", "reports_path"):
            value = getattr(self, key)
            if value is not None and not Path(value).is_file():
                raise ConfigError(f"{key} {value!r} does not exist")
        if self.theorem not in THEOREMS:
            raise ConfigError(f"theorem must be one of {THEOREMS}, got {self.theorem!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if not need_grid:
            return
        w = self.weight_spec()
        r0 = self.lower_radius(w)
        if not r0 > 0:
            raise ConfigError("r0 must be positive")
        if not self.R_min > r0:
            raise ConfigError(f"R_min = {self.R_min} must exceed r0 = {r0}")
        if not self.R_max > self.R_min:
            raise ConfigError("R_max must exceed R_min")
        if int(self.count) < 8:
            raise ConfigError(f"count must be >= 8, got {self.count}")
        if self.theorem == "thm2" and w.kind != "canonical":
            raise ConfigError("thm2 needs weight 'canonical'")


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.16e}"


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow([_fmt(r.R), _fmt(r.M_R), _fmt(r.I_R), _fmt(r.Lambda_R),
                         _fmt(r.envelope), _fmt(r.ratio), _fmt(r.floor),
                         "ok" if r.converged else "nonconverged"])
    return buf.getvalue()


def reports_from_csv(text: str) -> list:
    reports = []
    for row in csv.DictReader(io.StringIO(text)):
        floor = row.get("floor") or ""
        reports.append(GrowthReport(
            float(row["R"]), float(row["M_R"]), float(row["I_R"]), float(row["Lambda_R"]),
            float(row["envelope"]), float(row["ratio"]),
            float(floor) if floor.strip() else None,
            (row.get("status") or "ok") == "ok",
        ))
    return reports


def reports_to_json(result) -> str:
    doc = {
        "theorem": result.theorem,
        "constant": result.constant,
        "floor": result.floor,
        "reports": [asdict(r) for r in result.reports],
    }
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run_sweep(cfg: RunConfig):
    w = cfg.weight_spec()
    r0 = cfg.lower_radius(w)
    profile = cfg.profile()
    grid = geometric_grid(float(cfg.R_min), float(cfg.R_max), int(cfg.count))
    field = profile.field if profile.kind == "integrated" else None
    return sweep(profile, w, r0, grid, cfg.theorem, c=cfg.c, p=float(cfg.p), K=cfg.K,
                 field=field, quad=cfg.quad())


def cmd_analyze(cfg: RunConfig, out: Optional[str] = None, fmt: Optional[str] = None) -> int:
    cfg.validate()
    out = out or cfg.output
    fmt = fmt or cfg.format
    result = _run_sweep(cfg)
    text = reports_to_csv(result.reports) if fmt == "csv" else reports_to_json(result)
    _emit(text, out)
    if not result.all_converged:
        bad = [r.R for r in result.reports if not r.converged]
        log.error("quadrature did not converge at R = %s", bad)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out: Optional[str] = None) -> int:
    cfg.validate(need_grid=cfg.reports_path is None)
    out = out or cfg.output
    constant = None
    if cfg.reports_path:
        reports = reports_from_csv(Path(cfg.reports_path).read_text())
        floor = cfg.floor
        converged = all(r.converged for r in reports)
    else:
        result = _run_sweep(cfg)
        reports, constant, converged = result.reports, result.constant, result.all_converged
        floor = cfg.floor if cfg.floor is not None else result.floor
    quantity = "envelope" if cfg.theorem == "lemma3" else "ratio"
    verdict = liminf_verdict(reports, cfg.tail_fraction, floor, quantity)
    summary = {
        "theorem": cfg.theorem,
        "kind": verdict.kind,
        "tail_min": verdict.tail_min,
        "threshold": verdict.threshold,
        "tail_size": verdict.tail_size,
        "constant": constant,
        "converged": converged,
    }
    print(f"theorem:   {cfg.theorem}")
    print(f"verdict:   {verdict.kind}")
    print(f"tail_min:  {verdict.tail_min:.16e}")
    print(f"threshold: {verdict.threshold:.16e}")
    if constant is not None:
        print(f"constant:  {constant:.16e}")
    text = json.dumps(summary, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if not converged:
        return EXIT_NUMERICAL
    return VERDICT_EXIT[verdict.kind]


def cmd_lemma5(N: int, R: float) -> int:
    numeric, closed, err = lemma5_check(N, R, QuadratureSettings.from_env())
    tol = max(1e-8, 1e-8 * abs(closed))
    print(f"numeric:     {numeric:.16e}")
    print(f"closed_form: {closed:.16e}")
    print(f"abs_error:   {err:.3e}")
    return EXIT_OK if err <= tol else EXIT_NUMERICAL


def cmd_ring_check(cfg: RunConfig, trials: int, seed: int, out: Optional[str] = None) -> int:
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    cfg.validate(need_grid=False)
    profile = cfg.profile()
    r1, r2 = float(cfg.r1), float(cfg.r2)
    ann = AnnulusSpec(cfg.center, r1, r2)
    rng = np.random.default_rng(seed)
    etas = [extremal_eta(r1, r2)] + [random_admissible_eta(r1, r2, rng) for _ in range(trials)]
    rows = ring_inequality_check(profile, ann, etas, cfg.quad())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("trial", "eta", "lhs", "rhs", "holds"))
    for i, (eta, (lhs, rhs, holds)) in enumerate(zip(etas, rows)):
        writer.writerow((i, eta.label, _fmt(lhs), _fmt(rhs), str(holds).lower()))
    _emit(buf.getvalue(), out or cfg.output)
    return EXIT_OK if all(h for _, _, h in rows) else EXIT_NUMERICAL


def cmd_families() -> int:
    for name, rho, k in CATALOG:
        print(f"{name:12s} {rho}\n{'':12s} {k}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcg", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="growth report table over an R grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("verify", help="liminf verdict for one theorem")
    p.add_argument("--config", required=True)
    p.add_argument("--out")

    p = sub.add_parser("lemma5", help="quadrature check of the iterated-log identity")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--R", type=float, required=True)

    p = sub.add_parser("ring-check", help="ring inequality with random admissible eta")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    sub.add_parser("families", help="list the exact radial families")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.verb == "analyze":
            return cmd_analyze(RunConfig.load(args.config), args.out, args.format)
        if args.verb == "verify":
            return cmd_verify(RunConfig.load(args.config), args.out)
        if args.verb == "lemma5":
            return cmd_lemma5(args.N, args.R)
        if args.verb == "ring-check":
            return cmd_ring_check(RunConfig.load(args.config), args.trials, args.seed, args.out)
        return cmd_families()
    except ConvergenceError as exc:
        print(f"error: {exc} (estimate {exc.estimate}, error bound {exc.error_bound})",
              file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, QCGError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
