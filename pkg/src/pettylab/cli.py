"""Command line front end.

Exit codes: 0 when every verdict is consistent or inconclusive, 2 when any
verdict is violated (or a kernel check fails), 1 for usage and config
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .bodies import GeometryError, Zonotope, body_from_literal, volume, zonotope_to_vpolytope
from .harness import (
    ConfigError,
    RUNNERS,
    report_to_csv,
    report_to_json,
    resolve_threads,
)
from .projections import QuadratureSpec, petty_product
from .symmetrize import rearrange_body, steiner_symmetrize
from . import verify as verify_mod


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="pettylab", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    def add(name, help_text, config_required=True, trials=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=config_required, help="JSON config path")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        if trials:
            p.add_argument("--trials", type=int, default=None)
            p.add_argument("--threads", type=int, default=None)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        return p

    sub.add_parser("verify-kernel", help="run the kernel oracle suite")
    add("petty", "deterministic projection-volume product of one body",
        trials=False)
    for name in ("thm12", "thm11", "cor13", "empmixed", "emppetty2", "lln"):
        add(name, f"run the {name} experiment")
    add("symmetrize", "iterated Steiner symmetrization trace", trials=False)
    return parser


def _load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        raise ConfigError("config root must be a JSON object")
    return config


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _body_literal_of(config: dict) -> dict:
    if "type" in config:
        return config
    if "body" in config:
        return config["body"]
    raise ConfigError("petty config needs a body literal (or a 'body' field)")


def run_petty(config: dict) -> dict:
    lit = _body_literal_of(config)
    K = body_from_literal(lit)
    method = config.get("method", "auto")
    q = config.get("quadrature") or {}
    quad = QuadratureSpec(nodes=q.get("nodes"), certify=bool(q.get("certify", False)))
    product = petty_product(K, method=method, quad=quad)
    dim = K.dim
    ball_bound = math.pi**2 / 4.0 if dim == 2 else 64.0 / 27.0
    body = zonotope_to_vpolytope(K) if isinstance(K, Zonotope) else K
    verdict = "consistent" if product <= ball_bound * (1.0 + 1e-9) else "violated"
    return {
        "functional": "petty",
        "dim": dim,
        "volume": volume(body),
        "product": product,
        "ball_bound": ball_bound,
        "method": method,
        "verdict": verdict,
    }


def _petty_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dim", "volume", "product", "ball_bound", "verdict"])
    w.writerow([report["dim"], report["volume"], report["product"],
                report["ball_bound"], report["verdict"]])
    return buf.getvalue()


def run_symmetrize(config: dict) -> dict:
    lit = _body_literal_of(config)
    K = body_from_literal(lit)
    if isinstance(K, Zonotope):
        K = zonotope_to_vpolytope(K)
    iterations = int(config.get("iterations", 10))
    seed = int(config.get("seed", 0))
    gen = np.random.default_rng(seed)
    vol0 = volume(K)
    ball = rearrange_body(K)
    radius = float(np.linalg.norm(ball.vertices[0]))
    steps = []
    body = K
    worst_drift = 0.0
    for i in range(iterations):
        u = gen.normal(size=K.dim)
        u /= np.linalg.norm(u)
        body = steiner_symmetrize(body, u)
        vol = volume(body)
        drift = abs(vol - vol0) / vol0
        worst_drift = max(worst_drift, drift)
        steps.append(
            {
                "iteration": i + 1,
                "direction": u.tolist(),
                "volume": vol,
                "volume_drift": drift,
                "max_vertex_norm": float(np.linalg.norm(body.vertices, axis=1).max()),
            }
        )
    verdict = "consistent" if worst_drift <= 1e-6 else "violated"
    return {
        "functional": "symmetrize",
        "dim": K.dim,
        "iterations": iterations,
        "seed": seed,
        "initial_volume": vol0,
        "ball_radius": radius,
        "steps": steps,
        "worst_volume_drift": worst_drift,
        "verdict": verdict,
    }


def _symmetrize_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iteration", "volume", "volume_drift", "max_vertex_norm"])
    for s in report["steps"]:
        w.writerow([s["iteration"], s["volume"], s["volume_drift"],
                    s["max_vertex_norm"]])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(str(exc) + "\n")
        return 1
    if args.command is None:
        sys.stderr.write(parser.format_usage())
        return 1
    try:
        if args.command == "verify-kernel":
            ok = verify_mod.run_all(emit=print)
            return 0 if ok else 2
        config = _load_config(args.config)
        if getattr(args, "seed", None) is not None:
            config["seed"] = args.seed
        if getattr(args, "trials", None) is not None:
            config["trials"] = args.trials
        if args.command == "petty":
            report = run_petty(config)
            text = (report_to_json(report) if args.format == "json"
                    else _petty_csv(report))
        elif args.command == "symmetrize":
            report = run_symmetrize(config)
            text = (report_to_json(report) if args.format == "json"
                    else _symmetrize_csv(report))
        else:
            threads = resolve_threads(getattr(args, "threads", None))
            report = RUNNERS[args.command](config, threads=threads)
            text = (report_to_json(report) if args.format == "json"
                    else report_to_csv(report))
        _emit(text, args.out)
        return 2 if report.get("verdict") == "violated" else 0
    except (ConfigError, GeometryError, OSError, json.JSONDecodeError, KeyError,
            ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
