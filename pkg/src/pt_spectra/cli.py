"""Command-line interface: ``pt-spectra coeffs|predict|solve|verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numerical failure.
"""
from __future__ import annotations

import csv
import dataclasses
import datetime as _dt
import functools
import hashlib
import io
import json
import math
import re
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .errors import InvalidDegreeError, PTSpectraError, UnsupportedOrderError
from .expansion import build_table, compute_c_m3, compute_d_m3, lambda0, predict_expansion, predict_quantization
from .kernels import NUMBA_ENABLED
from .potential import Potential, rotate_coeffs
from .quadrature import QuadratureConfig, K_mj
from .series import compute_b, compute_bjk, compute_mu_nu, ladder_depth
from .shooting import ShootingConfig, enumerate_eigenvalues
from .verify import SUITES, check_monotonic, check_reality, check_residual, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

_UNUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(
    rf"^(?:(?P<re>[+-]?{_UNUM})(?:(?P<im>[+-](?:{_UNUM})?)[ij])?|(?P<pim>[+-]?(?:{_UNUM})?)[ij])$"
)


# ---------------------------------------------------------------- parsing

def _imag(text):
    return float(text + "1") if text in ("", "+", "-") else float(text)


def parse_complex(text):
    """Parse ``re``, ``re+im i``, ``re-im i`` or ``im i`` into a complex number."""
    mt = _COMPLEX.match(text.strip().replace(" ", ""))
    if not mt:
        raise ValueError(f"cannot parse {text!r} as a complex literal re[+im i]")
    if mt.group("re") is None:
        return complex(0.0, _imag(mt.group("pim")))
    im = mt.group("im")
    return complex(float(mt.group("re")), 0.0 if im is None else _imag(im))


def parse_coeffs(text):
    if text is None or text.strip() == "":
        return None
    return tuple(parse_complex(t) for t in text.split(","))


def _typed(field, raw):
    kind = field.type if isinstance(field.type, str) else field.type.__name__
    if raw.strip().lower() in ("none", "auto", "") and "None" in kind:
        return None
    if kind.startswith("int"):
        return int(raw)
    return float(raw)


def load_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def build_configs(settings):
    """ShootingConfig and QuadratureConfig from a {field: text} mapping."""
    shoot = {f.name: f for f in dataclasses.fields(ShootingConfig)}
    quad = {f.name: f for f in dataclasses.fields(QuadratureConfig)}
    s_kw, q_kw = {}, {}
    for key, raw in settings.items():
        name = key.split(".", 1)[-1]
        if name in shoot:
            s_kw[name] = _typed(shoot[name], raw)
        elif name in quad:
            q_kw[name] = _typed(quad[name], raw)
        else:
            raise ValueError(f"unknown config key {key!r}")
    return ShootingConfig(**s_kw), QuadratureConfig(**q_kw)


# ---------------------------------------------------------------- output

def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x + 0.0, ".17g")
    return str(x)


def to_jsonable(x):
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, dict):
        return {k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def write_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def coeff_hash(a):
    key = ",".join(f"{c.real:.17g}{c.imag:+.17g}i" for c in a)
    return hashlib.sha256(key.encode()).hexdigest()[:12]


def _split(z):
    if z is None:
        return [None, None]
    z = complex(z)
    return [z.real, z.imag]


class Run:
    """Per-invocation state: potential, configs and output location."""

    def __init__(self, command, p, scfg, qcfg, out_dir):
        self.command, self.p, self.scfg, self.qcfg = command, p, scfg, qcfg
        self.out_dir = Path(out_dir) if out_dir else None

    def manifest(self, filename):
        return {
            "command": self.command,
            "argv": sys.argv[1:],
            "m": self.p.degree,
            "a": [f"{c.real:.17g}{c.imag:+.17g}i" for c in self.p.coeffs],
            "config": {
                "shooting": dataclasses.asdict(self.scfg),
                "quadrature": dataclasses.asdict(self.qcfg),
            },
            "numba": NUMBA_ENABLED,
            "version": __version__,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "output": filename,
        }

    def emit(self, text, ext, echo=True):
        if echo:
            click.echo(text, nl=not text.endswith("\n"))
        if self.out_dir is None:
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        name = f"{self.command}_m{self.p.degree}_{coeff_hash(self.p.coeffs)}.{ext}"
        (self.out_dir / name).write_text(text, newline="")
        side = self.out_dir / (name + ".manifest.json")
        side.write_text(json.dumps(to_jsonable(self.manifest(name)), indent=2) + "\n")


# ---------------------------------------------------------------- commands

def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (InvalidDegreeError, UnsupportedOrderError) as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except PTSpectraError as exc:
            click.echo(f"numerical failure: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)
        except (ValueError, OSError) as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(EXIT_USAGE)

    return wrapper


def _common(fn):
    opts = [
        click.option("-m", "--degree", "m", type=int, required=True, help="Degree m >= 3."),
        click.option("-a", "--coeffs", "a", default=None,
                     help="Comma-separated a_1..a_{m-1}, each re[+im i]; default all zero."),
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     help="Flat key=value file of ShootingConfig/QuadratureConfig fields."),
        click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                     help="Override one config field; beats --config."),
        click.option("--threads", type=int, default=None,
                     help="Thread cap (default: $PT_SPECTRA_THREADS or 1)."),
        click.option("-o", "--out-dir", type=click.Path(file_okay=False),
                     help="Also write <command>_m<m>_<hash>.<ext> plus a manifest here."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _setup(command, m, a, config_path, overrides, threads, out_dir):
    coeffs = parse_coeffs(a)
    if coeffs is None:
        coeffs = (0,) * max(m - 1, 0)
    p = Potential(m, coeffs)
    settings = load_config(config_path) if config_path else {}
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        settings[k.strip()] = v.strip()
    if threads is not None:
        settings["threads"] = str(threads)
    scfg, qcfg = build_configs(settings)
    return Run(command, p, scfg, qcfg, out_dir)


_AUDIT_NOTE = (
    "even m: at slot j = m/2+1 the d-coefficient uses the nu-corrected "
    "c-constant; the plain formula is not used there"
)


@click.group()
@click.version_option(__version__)
def main():
    """Eigenvalues of -u'' - [(iz)^m + P(iz)] u = lambda u."""


@main.command()
@_common
@click.option("--order", "J", type=int, default=None, help="Highest b_j to print (default m).")
@click.option("--csv", "as_csv", is_flag=True, help="Print the per-slot table as CSV instead of JSON.")
@click.option("--audit", is_flag=True, help="Record which d-coefficient reading was used.")
@_guard
def coeffs(m, a, config_path, overrides, threads, out_dir, J, as_csv, audit):
    """Coefficient ladder b_j, b_jk, mu, nu, K_mj, c, d, e."""
    run = _setup("coeffs", m, a, config_path, overrides, threads, out_dir)
    p = run.p
    table = build_table(p, run.qcfg)
    mu, nu, r_m = compute_mu_nu(p)
    depth = ladder_depth(m)
    doc = {
        "m": m,
        "a": list(p.coeffs),
        "b": [{"const": c, "lambda_coeff": s} for c, s in compute_b(p, J or m)],
        "b_jk": [compute_bjk(p, j) for j in range(1, depth + 1)],
        "mu": mu, "nu": nu, "r_m": r_m,
        "K_m": table.Km,
        "K_mj": [K_mj(p, j, run.qcfg) for j in range(1, depth + 1)],
        "K_mj_G": list(table.Kmj_plus),
        "K_mj_Ginv": list(table.Kmj_minus),
        "c": list(table.c), "d": list(table.d), "e": list(table.e),
    }
    if m == 3:
        g4, g2 = rotate_coeffs(p, 4), rotate_coeffs(p, 2)
        c3 = compute_c_m3([K_mj(g4, j, run.qcfg) for j in (1, 2)],
                          [K_mj(g2, j, run.qcfg) for j in (1, 2)])
        doc["c_m3_branch"] = c3
        doc["d_m3_branch"] = compute_d_m3(c3, table.Km)
    if audit:
        doc["audit"] = [_AUDIT_NOTE] if m % 2 == 0 else ["odd m: no logarithmic slot"]
    if as_csv:
        rows = [[j, *_split(table.c[j - 1]), *_split(table.d[j - 1]), *_split(table.e[j - 1])]
                for j in range(1, depth + 1)]
        run.emit(write_csv(["j", "c_re", "c_im", "d_re", "d_im", "e_re", "e_im"], rows), "csv")
    else:
        run.emit(json.dumps(to_jsonable(doc), indent=2) + "\n", "json")


@main.command()
@_common
@click.option("--n-min", type=int, default=0, show_default=True)
@click.option("--n-max", type=int, default=10, show_default=True)
@click.option("--method", type=click.Choice(["expansion", "quantization", "both"]), default="both",
              show_default=True)
@_guard
def predict(m, a, config_path, overrides, threads, out_dir, n_min, n_max, method):
    """Asymptotic eigenvalue predictions for n_min..n_max."""
    if n_min < 0 or n_max < n_min:
        raise click.BadParameter("need 0 <= n-min <= n-max")
    run = _setup("predict", m, a, config_path, overrides, threads, out_dir)
    table = build_table(run.p, run.qcfg)
    header = ["n", "lambda0"]
    if method in ("expansion", "both"):
        header += ["expansion_re", "expansion_im"]
    if method in ("quantization", "both"):
        header += ["quantization_re", "quantization_im"]
    if method == "both":
        header.append("gap")
    rows = []
    for n in range(n_min, n_max + 1):
        l0 = lambda0(m, n, table.Km)
        row = [n, l0]
        ex = predict_expansion(table, n) if method != "quantization" else None
        qu = predict_quantization(table, n) if method != "expansion" else None
        if ex is not None:
            row += _split(ex)
        if qu is not None:
            row += _split(qu)
        if method == "both":
            row.append(abs(ex - qu) / l0 ** (0.5 - 1 / m))
        rows.append(row)
    run.emit(write_csv(header, rows), "csv")


_SOLVE_HEADER = [
    "n", "lambda_pred_re", "lambda_pred_im", "lambda_shoot_re", "lambda_shoot_im",
    "residual", "classification", "det_at_root", "flags", "error",
]


@main.command()
@_common
@click.option("--n-min", type=int, default=0, show_default=True)
@click.option("--n-max", "N", type=int, default=10, show_default=True)
@_guard
def solve(m, a, config_path, overrides, threads, out_dir, n_min, N):
    """Shooting eigenvalues for n_min..n_max, one CSV row per root."""
    run = _setup("solve", m, a, config_path, overrides, threads, out_dir)
    table = build_table(run.p, run.qcfg)
    recs = enumerate_eigenvalues(run.p, N, run.scfg, n_min=n_min, table=table)
    rows = [
        [r.n, *_split(r.lambda_pred), *_split(r.lambda_shoot), r.residual, r.classification,
         r.det_at_root, ";".join(r.flags), r.error or ""]
        for r in recs
    ]
    run.emit(write_csv(_SOLVE_HEADER, rows), "csv")
    if any(r.lambda_shoot is None for r in recs):
        sys.exit(EXIT_NUMERIC)


@main.command()
@_common
@click.option("--suite", "suites", type=click.Choice(SUITES), multiple=True, required=True,
              help="Check to run; repeat for several.")
@click.option("--n-max", type=int, default=None, help="Highest index for root-based suites.")
@_guard
def verify(m, a, config_path, overrides, threads, out_dir, suites, n_max):
    """Run self-checks and print a pass/fail report."""
    run = _setup("verify", m, a, config_path, overrides, threads, out_dir)
    root_suites = {"reality": 15, "monotonic": 15, "residual": 20}
    wanted = [s for s in suites if s in root_suites]
    records = None
    if wanted:
        top = n_max or max(root_suites[s] for s in wanted)
        records = enumerate_eigenvalues(run.p, top, run.scfg, table=build_table(run.p, run.qcfg))
    results = []
    for name in dict.fromkeys(suites):
        if name == "reality":
            res = check_reality(run.p, cfg=run.scfg, records=records)
        elif name == "monotonic":
            res = check_monotonic(run.p, cfg=run.scfg, records=records)
        elif name == "residual":
            res = check_residual(run.p, n_max=n_max or 20, cfg=run.scfg, records=records)
        else:
            res = run_suite(name, run.p, cfg=run.scfg)
        results.append(res)
    report = {"m": m, "a": list(run.p.coeffs),
              "results": [dataclasses.asdict(r) for r in results]}
    for r in results:
        click.echo("\n".join(r.lines()))
    run.emit(json.dumps(to_jsonable(report), indent=2) + "\n", "json", echo=False)
    sys.exit(EXIT_OK if all(r.passed for r in results) else EXIT_FAIL)


if __name__ == "__main__":
    main()
