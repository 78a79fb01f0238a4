"""Command-line front end.

Usage: ``multiphoton <command> --config run.ini --out results/`` with command one
of spectrum, algebra, coherent, uncertainty, potential, oracle.

Exit codes: 0 success, 2 configuration or validation error, 3 numeric
failure, 4 oracle check failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from . import ladder, position_space, susy
from .coherent import CoherentStateSpec, coefficients
from .errors import ConfigError, DimensionTooSmall, MissingLevel, MultiphotonError
from .oracle import DEFAULT_DIM, build, check_commutators, compare
from .spectrum import ModelSpec, validate
from .susy import Iso, SusyConfig
from .uncertainty import QuadratureKind, radial_grid, scan, square_grid

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ORACLE = 0, 2, 3, 4
COMMANDS = ("spectrum", "algebra", "coherent", "uncertainty", "potential", "oracle")


# -- config ------------------------------------------------------------------

class RunConfig:
    """Thin typed view over a configparser document."""

    def __init__(self, parser: configparser.ConfigParser, source: str = "<string>"):
        self.parser = parser
        self.source = source

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";",))
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc
        return cls(parser, str(path))

    @classmethod
    def from_string(cls, text: str) -> "RunConfig":
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";",))
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}") from exc
        return cls(parser)

    def has(self, section: str) -> bool:
        return self.parser.has_section(section)

    def require(self, section: str):
        if not self.has(section):
            raise ConfigError(f"config is missing the [{section}] block")

    def _raw(self, section, key):
        if not self.parser.has_option(section, key):
            return None
        return self.parser.get(section, key).strip()

    def get(self, section, key, cast, default=None, required=False):
        raw = self._raw(section, key)
        if raw is None or raw == "":
            if required:
                raise ConfigError(f"[{section}] needs '{key}'")
            return default
        try:
            return cast(raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc

    # typed blocks

    def model(self) -> ModelSpec:
        self.require("model")
        kind = self.get("model", "kind", str, required=True)
        nu = self.get("model", "nu", float)
        levels = self.get("model", "levels", _float_list)
        return ModelSpec(kind, nu=nu, levels=tuple(levels) if levels is not None else None)

    def susy(self, model: ModelSpec) -> Optional[SusyConfig]:
        if not self.has("susy"):
            return None
        eps = self.get("susy", "epsilons", _float_list, required=True)
        return SusyConfig(eps, model)

    def m(self) -> int:
        return self.get("ladder", "m", _positive_int, default=1)

    def alpha(self) -> float:
        return self.get("ladder", "alpha", float, default=0.0)

    def coherent_spec(self, model, cfg) -> CoherentStateSpec:
        self.require("coherent")
        return CoherentStateSpec(
            model=model, m=self.m(), j=self.get("coherent", "j", int, default=0),
            z=self.get("coherent", "z", _complex, default=0j), cfg=cfg, alpha=self.alpha(),
            tol=self.get("coherent", "tol", float, default=1e-12),
            n_cap=self.get("coherent", "n_cap", int, default=512),
        )

    def grid(self) -> position_space.Grid:
        self.require("grid")
        return position_space.Grid(
            self.get("grid", "xmin", float, required=True),
            self.get("grid", "xmax", float, required=True),
            self.get("grid", "points", int, default=801),
        )


def _float_list(text: str) -> List[float]:
    value = json.loads(text)
    if isinstance(value, (int, float)):
        value = [value]
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) for v in value):
        raise ValueError("expected a JSON list of numbers")
    return [float(v) for v in value]


def _complex_list(text: str) -> List[complex]:
    value = json.loads(text)
    if not isinstance(value, list):
        raise ValueError("expected a JSON list")
    return [_complex(str(v)) if not isinstance(v, list) else complex(*v) for v in value]


def _init_pairs(text: str) -> List[tuple]:
    value = json.loads(text)
    if not isinstance(value, list) or not all(isinstance(p, list) and len(p) == 2 for p in value):
        raise ValueError("expected a JSON list of [u, u'] pairs")
    return [(float(a), float(b)) for a, b in value]


def _complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError("must be a positive integer")
    return value


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


# -- writers -----------------------------------------------------------------

def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return f"{format(value.real, '.17g')}{'+' if value.imag >= 0 or math.isnan(value.imag) else '-'}{format(abs(value.imag), '.17g')}j"
    if hasattr(value, "item"):
        return fmt(value.item())
    return str(value)


def write_csv(path: Path, meta: Dict[str, object], header: Sequence[str], rows: Iterable[Sequence]):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for key, val in meta.items():
            fh.write(f"# {key}: {fmt(val)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([fmt(v) for v in row] for row in rows)
    return path


def write_svg(path: Path, series, xlabel: str, ylabel: str, title: str = ""):
    """Minimal line chart: one polyline per (label, xs, ys), finite points only."""
    width, height, pad = 640, 420, 60
    pts_all = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys)
               if y is not None and math.isfinite(y)]
    if not pts_all:
        pts_all = [(0.0, 0.0), (1.0, 1.0)]
    x0, x1 = min(p[0] for p in pts_all), max(p[0] for p in pts_all)
    y0, y1 = min(p[1] for p in pts_all), max(p[1] for p in pts_all)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    colours = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle">{xlabel}</text>',
        f'<text x="15" y="{height / 2:.1f}" transform="rotate(-90 15 {height / 2:.1f})" '
        f'text-anchor="middle">{ylabel}</text>',
        f'<text x="{pad}" y="{height - pad + 18}" font-size="11">{x0:.4g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 18}" font-size="11" text-anchor="end">{x1:.4g}</text>',
        f'<text x="{pad - 5}" y="{height - pad}" font-size="11" text-anchor="end">{y0:.4g}</text>',
        f'<text x="{pad - 5}" y="{pad + 4}" font-size="11" text-anchor="end">{y1:.4g}</text>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="25" text-anchor="middle">{title}</text>')
    for i, (label, xs, ys) in enumerate(series):
        colour = colours[i % len(colours)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys)
                       if y is not None and math.isfinite(y))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{width - pad - 5}" y="{pad + 16 * (i + 1)}" fill="{colour}" '
                   f'text-anchor="end" font-size="12">{label}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
    return path


def _model_meta(model: ModelSpec, cfg: Optional[SusyConfig]) -> Dict[str, object]:
    meta = {"model": model.describe()}
    meta["k"] = 0 if cfg is None else cfg.k
    meta["epsilons"] = "[]" if cfg is None else "[" + ";".join(fmt(e) for e in cfg.epsilons) + "]"
    return meta


# -- commands ----------------------------------------------------------------

def cmd_spectrum(conf: RunConfig, out: Path) -> int:
    model = conf.model()
    cfg = conf.susy(model)
    m = conf.m()
    default_n = len(model.levels) - 1 if model.kind == "custom" else 20
    n_max = conf.get("spectrum", "n_max", int, default=default_n)
    report = validate(model, max(n_max, 1))
    if not report.ok:
        raise ConfigError(f"spectrum check failed: {report.message}")
    spectrum = susy.partner_spectrum(model, cfg, m)

    def gap_or_nan(n, step):
        try:
            return model.energy(n + step) - model.energy(n)
        except MissingLevel:
            return math.nan

    rows = []
    for label, e in spectrum.levels(n_max):
        tag, step = spectrum.ladder_of(label)
        if isinstance(label, Iso):
            rows.append((label.n, e, tag, step, gap_or_nan(label.n, 1), gap_or_nan(label.n, m)))
        else:
            rows.append(("isolated", e, tag, step, None, None))
    meta = _model_meta(model, cfg)
    meta.update(m=m, n_max=n_max)
    write_csv(out / "spectrum.csv", meta, ("n", "E", "ladder_j", "step", "gap", "gap_m"), rows)
    return EXIT_OK


def cmd_algebra(conf: RunConfig, out: Path) -> int:
    model = conf.model()
    cfg = conf.susy(model)
    m = conf.m()
    default_n = len(model.levels) - 1 - m if model.kind == "custom" else 20
    n_max = conf.get("algebra", "n_max", int, default=default_n)
    if n_max < 0:
        raise ConfigError("algebra n_max must be >= 0 (custom table too short for this m)")
    report = validate(model, max(n_max + m, 1))
    if not report.ok:
        raise ConfigError(f"spectrum check failed: {report.message}")

    def factors(n):
        try:
            create = model.energy(n) - model.energy(n - m)
        except MissingLevel:
            create = math.nan
        return create, model.energy(n + m) - model.energy(n)

    meta = _model_meta(model, None)
    meta.update(m=m, n_max=n_max)
    rows = [(n, ladder.commutator_structure(model, m, n), *factors(n)) for n in range(n_max + 1)]
    write_csv(out / "algebra.csv", meta,
              ("n", "comm_aa", "comm_H_create_factor", "comm_H_annih_factor"), rows)
    if cfg is not None:
        meta = _model_meta(model, cfg)
        meta.update(m=m, n_max=n_max)
        rows = [(n, susy.commutator_structure_susy(model, cfg, m, n), *factors(n))
                for n in range(n_max + 1)]
        write_csv(out / "algebra_susy.csv", meta,
                  ("n", "comm_ll", "comm_Hk_create_factor", "comm_Hk_annih_factor"), rows)
    return EXIT_OK


def cmd_coherent(conf: RunConfig, out: Path) -> int:
    model = conf.model()
    cfg = conf.susy(model)
    spec = conf.coherent_spec(model, cfg)
    vec = coefficients(spec)
    meta = _model_meta(model, cfg)
    meta.update(m=spec.m, j=spec.j, z=spec.z, alpha=spec.alpha, tol=spec.tol,
                n_trunc=vec.n_trunc, tail_bound=vec.tail_bound)
    rows = [(int(l), float(c.real), float(c.imag), float(abs(c) ** 2))
            for l, c in zip(vec.levels, vec.amplitudes)]
    write_csv(out / "coherent.csv", meta, ("level", "re_c", "im_c", "abs_c2"), rows)
    return EXIT_OK


def _scan_rows(points):
    return [(p.z.real, p.z.imag, math.nan if p.product is None else p.product) for p in points]


def cmd_uncertainty(conf: RunConfig, out: Path) -> int:
    model = conf.model()
    cfg = conf.susy(model)
    default_kind = "natural-hk" if cfg is not None else "intrinsic-h0"
    kind = QuadratureKind.parse(conf.get("uncertainty", "kind", str, default=default_kind))
    z_max = conf.get("uncertainty", "z_max", float, default=2.0)
    points = conf.get("uncertainty", "points", int, default=201)
    angle = conf.get("uncertainty", "angle", float, default=0.0)
    square = conf.get("uncertainty", "square_points", int, default=0)
    literal = conf.get("uncertainty", "literal_cross_term", _bool, default=False)
    if z_max < 0:
        raise ConfigError("z_max must be non-negative")
    base = conf.coherent_spec(model, cfg) if conf.has("coherent") else CoherentStateSpec(
        model, conf.m(), 0, 0j, cfg, conf.alpha())

    meta = _model_meta(model, cfg)
    meta.update(kind=kind.value, m=base.m, j=base.j, alpha=base.alpha, tol=base.tol,
                literal_cross_term=literal)
    failures = []

    def run(name, grid, extra):
        pts = scan(base, grid, kind, literal)
        failures.extend(p for p in pts if p.error is not None)
        write_csv(out / f"{name}.csv", {**meta, **extra}, ("re_z", "im_z", "product"), _scan_rows(pts))
        return pts

    main = run("uncertainty", radial_grid(z_max, points, angle), {"grid": "radial", "angle": angle})
    series = [(f"arg z = {angle:.4g}", [abs(p.z) for p in main], [p.product for p in main])]
    if base.m == 2:
        re_axis = run("uncertainty_real_axis", [complex(float(x), 0.0) for x in _symmetric(z_max, points)],
                      {"grid": "real-axis"})
        im_axis = run("uncertainty_imag_axis", [complex(0.0, float(y)) for y in _symmetric(z_max, points)],
                      {"grid": "imag-axis"})
        series = [("Re z axis", [p.z.real for p in re_axis], [p.product for p in re_axis]),
                  ("Im z axis", [p.z.imag for p in im_axis], [p.product for p in im_axis])]
        write_svg(out / "uncertainty.svg", series, "Re z or Im z", "product",
                  f"{kind.value}, m=2, j={base.j}")
    else:
        write_svg(out / "uncertainty.svg", series, "|z|", "product", f"{kind.value}, m={base.m}, j={base.j}")
    if square > 0:
        run("uncertainty_square", square_grid(z_max, square), {"grid": "square"})
    if failures:
        for p in failures[:10]:
            print(f"z = {fmt(p.z)}: {p.error}", file=sys.stderr)
        print(f"{len(failures)} scan point(s) failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _symmetric(z_max, points):
    if points < 2:
        return [0.0]
    return [-z_max + 2.0 * z_max * i / (points - 1) for i in range(points)]


def cmd_potential(conf: RunConfig, out: Path) -> int:
    model = conf.model()
    conf.require("susy")
    cfg = conf.susy(model)
    grid = conf.grid().check_model(model)
    n_states = conf.get("potential", "eigenstates", int, default=3)
    inits = conf.get("potential", "inits", _init_pairs)
    if inits is not None and len(inits) != cfg.k:
        raise ConfigError(f"[potential] inits needs {cfg.k} (u, u') pairs, got {len(inits)}")
    chain = position_space.build_chain(model, cfg, grid, inits)
    table = position_space.partner_potential(model, chain)
    meta = _model_meta(model, cfg)
    meta.update(xmin=grid.x_min, xmax=grid.x_max, points=grid.n_points,
                max_discrepancy=table.max_discrepancy)
    rows = zip(table.x.tolist(), table.v0.tolist(), table.vk_sum.tolist(), table.vk_wronskian.tolist())
    write_csv(out / "potential.csv", meta, ("x", "V0", "Vk_sum_form", "Vk_wronskian_form"), rows)
    x = grid.x
    for n in range(n_states):
        e_n = model.energy(n)
        psi = position_space.transform_eigenfunction(model, chain, position_space.eigenfunction(model, n, x), e_n)
        write_csv(out / f"psi_{n}.csv", {**meta, "state": f"iso n={n}", "energy": e_n},
                  ("x", "psi"), zip(x.tolist(), psi.tolist()))
    if cfg.k == 1:
        psi, ok = position_space.isolated_state(chain.seeds[0])
        write_csv(out / "psi_isolated.csv",
                  {**meta, "state": "isolated", "energy": cfg.epsilons[0], "normalizable": ok},
                  ("x", "psi"), zip(x.tolist(), psi.tolist()))
    return EXIT_OK


DEFAULT_ORACLE_Z = (0j, 0.7 + 0.4j, -1.1 + 0.9j, 1.8 - 0.6j)


def _oracle_suite(conf: RunConfig):
    """(model, cfg, m) triples to check: the configured model, or the built-in suite."""
    if conf.has("model"):
        model = conf.model()
        ms = [conf.m()] if conf.has("ladder") else [1, 2, 3]
        return [(model, conf.susy(model), m) for m in ms]
    suite = []
    for model in (ModelSpec.harmonic(), ModelSpec.poschl_teller(2.0)):
        for cfg in (None, SusyConfig([-0.5]), SusyConfig([-0.5, -1.5])):
            for m in (1, 2, 3):
                suite.append((model, cfg, m))
    return suite


def cmd_oracle(conf: RunConfig, out: Path) -> int:
    dim = conf.get("oracle", "dim", int, default=DEFAULT_DIM)
    comm_thr = conf.get("oracle", "commutator_threshold", float, default=1e-10)
    unc_thr = conf.get("oracle", "uncertainty_threshold", float, default=1e-7)
    z_values = conf.get("oracle", "z_values", _complex_list, default=list(DEFAULT_ORACLE_Z))
    alpha = conf.alpha()
    rows = []
    for model, cfg, m in _oracle_suite(conf):
        label = f"{model.describe()} k={0 if cfg is None else cfg.k} m={m}"
        ops = build(model, cfg, alpha, dim, m)
        for res in check_commutators(ops):
            rows.append((label, res.name, res.dim, res.margin, res.max_deviation, comm_thr))
        kinds = ([QuadratureKind.NATURAL_HK, QuadratureKind.MULTIPHOTON_HK] if cfg is not None
                 else [QuadratureKind.INTRINSIC_H0, QuadratureKind.MULTIPHOTON_H0])
        for j in range(m):
            for z in z_values:
                spec = CoherentStateSpec(model, m, j, z, cfg, alpha)
                for kind in kinds:
                    dev = compare(spec, kind, dim)
                    rows.append((label, f"{kind.value} j={j} z={complex(z):g}", dim, 0, dev, unc_thr))
    table = [(*r, r[4] < r[5]) for r in rows]
    write_csv(out / "oracle_report.csv", {"dim": dim, "alpha": alpha},
              ("suite", "check", "D", "margin", "max_deviation", "threshold", "passed"), table)
    width = max(len(f"{r[0]} | {r[1]}") for r in table)
    print(f"{'check'.ljust(width)}  {'D':>4} {'margin':>6} {'max dev':>10}  result")
    for suite, name, d, margin, dev, thr, ok in table:
        print(f"{f'{suite} | {name}'.ljust(width)}  {d:>4} {margin:>6} {dev:>10.3e}  "
              f"{'pass' if ok else 'FAIL'} (< {thr:.0e})")
    failed = sum(1 for r in table if not r[6])
    print(f"{len(table) - failed}/{len(table)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_ORACLE


HANDLERS = {
    "spectrum": cmd_spectrum, "algebra": cmd_algebra, "coherent": cmd_coherent,
    "uncertainty": cmd_uncertainty, "potential": cmd_potential, "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multiphoton", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="INI-style run configuration")
    parser.add_argument("--out", default=".", help="output directory (created if missing)")
    return parser


def run(command: str, conf: RunConfig, out) -> int:
    """Dispatch with the exit-code contract; errors go to stderr."""
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        return HANDLERS[command](conf, out)
    except (ConfigError, DimensionTooSmall, MissingLevel) as exc:
        where = getattr(exc, "locations", None)
        print(f"config error: {exc}", file=sys.stderr)
        if where:
            print("locations: " + ", ".join(fmt(float(x)) for x in where), file=sys.stderr)
        return EXIT_CONFIG
    except MultiphotonError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        where = getattr(exc, "locations", None)
        if where:
            print("locations: " + ", ".join(fmt(float(x)) for x in where), file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        conf = RunConfig.from_file(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(args.command, conf, args.out)


if __name__ == "__main__":
    sys.exit(main())
