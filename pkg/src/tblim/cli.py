"""Command-line surface: build operators, print spectra, run the
verification suite, solve Bethe equations, and reconstruct signals.

All outputs are deterministic for a fixed configuration and seed (canonical
key order, %.17g floats).  Exit codes: 0 success, 1 verification or matching
failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bethe import AnsatzVariant, SolverConfig, solve_bethe
from .core_model import ModelParams, Parity
from .errors import SupportError, TblimError
from .operators import heun_tb, heun_tb_momentum, leonard_pair, projector_band, projector_time, tb_operator
from .recon import reconstruct_signal
from .serialize import canonical_json, csv_lines, pack_operator, unpack_operator
from .spectral import joint_spectrum
from .verify import run_suite

log = logging.getLogger("tblim")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


@dataclass
class RunConfig:
    command: str
    n: int
    K: int
    L: int
    parity: Parity | None
    ansatz: str | None
    fmt: str
    out: str | None
    seed: int
    tol: float | None
    signal: str | None
    operators: str | None
    sweep: str | None

    def params(self, parity=None):
        parity = parity or self.parity
        if parity is None:
            raise TblimError("this command requires --parity")
        return ModelParams(n=self.n, K=self.K, L=self.L, parity=parity)

    def params_dict(self):
        return {
            "n": self.n, "K": self.K, "L": self.L,
            "parity": self.parity.value if self.parity else "both",
            "seed": self.seed,
        }


def _setup_logging():
    level = os.environ.get("TBLIM_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=levels.get(level, logging.ERROR),
                        format="tblim %(levelname)s: %(message)s")


def _write(cfg, text):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _operator_payloads(p):
    a, astar = leonard_pair(p)
    return {
        "A": pack_operator(a.to_dense()),
        "A_star": pack_operator(astar.to_dense()),
        "pi1": pack_operator(projector_time(p)),
        "pi2": pack_operator(projector_band(p)),
        "Q": pack_operator(tb_operator(p)),
        "T_position": pack_operator(heun_tb(p).to_dense()),
        "T_momentum": pack_operator(heun_tb_momentum(p).to_dense()),
    }


def cmd_build(cfg):
    p = cfg.params()
    doc = {"command": "build", "params": cfg.params_dict(), "operators": _operator_payloads(p)}
    _write(cfg, canonical_json(doc))
    return EXIT_OK


def _spectrum_rows(p):
    return [(ell, m.t, m.q, m.residual) for ell, m in enumerate(joint_spectrum(p))]


def _parse_sweep(expr, n):
    m = re.fullmatch(r"([KL])=(\d+)\.\.(\d+|n)", expr)
    if not m:
        raise TblimError(f"bad sweep expression {expr!r}; expected K=a..b or L=a..b")
    lo = int(m.group(2))
    hi = n if m.group(3) == "n" else int(m.group(3))
    return m.group(1), list(range(lo, hi + 1))


def cmd_spectrum(cfg):
    if cfg.sweep:
        var, values = _parse_sweep(cfg.sweep, cfg.n)
        def one(v):
            kw = {"n": cfg.n, "K": cfg.K, "L": cfg.L, "parity": cfg.parity}
            kw[var] = v
            return v, _spectrum_rows(ModelParams(**kw))
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(one, values))  # ordered by parameter tuple
        if cfg.fmt == "csv":
            rows = [(v, *row) for v, per in results for row in per]
            _write(cfg, csv_lines([var, "ell", "t", "q", "residual"], rows))
        else:
            doc = {"command": "spectrum_sweep", "params": cfg.params_dict(), "sweep": cfg.sweep,
                   "results": [{"value": v,
                                "modes": [{"ell": e, "t": t, "q": q, "residual": r}
                                          for e, t, q, r in per]}
                               for v, per in results]}
            _write(cfg, canonical_json(doc))
        return EXIT_OK
    rows = _spectrum_rows(cfg.params())
    if cfg.fmt == "csv":
        _write(cfg, csv_lines(["ell", "t", "q", "residual"], rows))
    else:
        doc = {"command": "spectrum", "params": cfg.params_dict(),
               "modes": [{"ell": e, "t": t, "q": q, "residual": r} for e, t, q, r in rows]}
        _write(cfg, canonical_json(doc))
    return EXIT_OK


def _compare_stored(cfg, p, checks):
    try:
        with open(cfg.operators) as fh:
            stored = json.load(fh)
        payloads = stored["operators"]
    except (OSError, ValueError, KeyError) as exc:
        raise TblimError(f"cannot read operator file {cfg.operators!r}: {exc}") from exc
    fresh = _operator_payloads(p)
    from .verify import CheckResult

    for name, payload in sorted(payloads.items()):
        if name not in fresh:
            checks.append(CheckResult(f"stored_{name}", np.inf, 1e-15, False, note="unknown matrix"))
            continue
        try:
            loaded = unpack_operator(payload)
            want = unpack_operator(fresh[name])
            diff = float(np.max(np.abs(loaded.entries - want.entries))) if loaded.dim else 0.0
            same_shape = loaded.dim == want.dim and loaded.basis is want.basis
            checks.append(CheckResult(f"stored_{name}", diff if same_shape else np.inf,
                                      1e-15, same_shape and diff < 1e-15))
        except (TblimError, ValueError, KeyError) as exc:
            checks.append(CheckResult(f"stored_{name}", np.inf, 1e-15, False, note=str(exc)))


def cmd_verify(cfg):
    p = cfg.params()
    checks = run_suite(p, np.random.default_rng(cfg.seed))
    if cfg.operators:
        _compare_stored(cfg, p, checks)
    for c in checks:
        if c.skipped:
            print(f"SKIP {c.name} ({c.note})")
        else:
            word = "PASS" if c.passed else "FAIL"
            print(f"{word} {c.name} residual={c.residual:.3e} tol={c.tolerance:.1e}")
    payload = {
        "command": "verify",
        "params": cfg.params_dict(),
        "checks": [
            {"name": c.name, "residual": c.residual, "tolerance": c.tolerance,
             "passed": c.passed, "skipped": c.skipped, "note": c.note}
            for c in checks
        ],
        "all_passed": all(c.passed for c in checks),
    }
    if cfg.out:
        _write(cfg, canonical_json(payload))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILURE


def cmd_bethe(cfg):
    if cfg.ansatz is None:
        raise TblimError("bethe requires --ansatz {first,second,plus}")
    variant = AnsatzVariant(cfg.ansatz)
    p = cfg.params(variant.parity)
    if cfg.parity is not None and cfg.parity is not variant.parity:
        raise TblimError(f"ansatz {cfg.ansatz!r} lives on parity {variant.parity.value}")
    config = SolverConfig(rng_seed=cfg.seed) if cfg.tol is None \
        else SolverConfig(rng_seed=cfg.seed, residual_tol=cfg.tol)
    result = solve_bethe(p, variant, config)
    rows = []
    for rs in result.root_sets:
        roots = ";".join(f"{x.real:.17g}{x.imag:+.17g}j" for x in rs.roots)
        rows.append((rs.level, rs.eigenvalue.real, rs.t_spectral,
                     abs(rs.eigenvalue.real - rs.t_spectral), rs.residual, rs.u_spread, roots))
    if cfg.fmt == "csv":
        _write(cfg, csv_lines(
            ["ell", "t_bethe", "t_spectral", "abs_dt", "residual", "u_spread", "roots"], rows))
    else:
        doc = {
            "command": "bethe", "params": cfg.params_dict(), "ansatz": variant.value,
            "levels": [
                {"ell": rs.level, "t_bethe": rs.eigenvalue.real, "t_spectral": rs.t_spectral,
                 "abs_dt": abs(rs.eigenvalue.real - rs.t_spectral),
                 "residual": rs.residual, "u_spread": rs.u_spread,
                 "roots": [[x.real, x.imag] for x in rs.roots]}
                for rs in result.root_sets
            ],
            "missing_levels": result.missing_levels,
            "extra_matches": result.extra_matches,
            "starts_used": result.starts_used,
        }
        _write(cfg, canonical_json(doc))
    if result.missing_levels:
        log.error("unmatched window levels: %s", result.missing_levels)
        return EXIT_FAILURE
    return EXIT_OK


def _read_signal_csv(path, n):
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise TblimError(f"cannot read signal file {path!r}: {exc}") from exc
    values = np.zeros(2 * n, dtype=complex)
    seen = np.zeros(2 * n, dtype=bool)
    start = 1 if lines and lines[0].lower().replace(" ", "").startswith("index") else 0
    for ln in lines[start:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise TblimError(f"malformed signal row {ln!r}; expected index,re,im")
        try:
            idx = int(parts[0])
            re_v = float(parts[1])
            im_v = float(parts[2])
        except ValueError as exc:
            raise TblimError(f"malformed signal row {ln!r}: {exc}") from exc
        if not 0 <= idx < 2 * n:
            raise TblimError(f"signal index {idx} outside 0..{2 * n - 1}")
        values[idx] = complex(re_v, im_v)
        seen[idx] = True
    if not seen.all():
        missing = int(np.count_nonzero(~seen))
        raise TblimError(f"signal file misses {missing} of {2 * n} samples")
    return values


def cmd_reconstruct(cfg):
    if not cfg.signal:
        raise TblimError("reconstruct requires --signal PATH")
    values = _read_signal_csv(cfg.signal, cfg.n)
    rep_plus, rep_minus, f_hat = reconstruct_signal(values, cfg.n, cfg.K, cfg.L, cfg.tol)

    def report_doc(rep):
        return {
            "verdict": rep.verdict.value,
            "singular_values": [float(s) for s in rep.singular_values],
            "kept_modes": rep.kept_modes,
            "discarded_modes": rep.discarded_modes,
            "worst_kept_sigma": rep.worst_kept_sigma,
        }

    err = float(np.linalg.norm(f_hat - values))
    nrm = float(np.linalg.norm(values))
    doc = {
        "command": "reconstruct",
        "params": cfg.params_dict(),
        "plus": report_doc(rep_plus),
        "minus": report_doc(rep_minus),
        "f_hat": [[z.real, z.imag] for z in f_hat],
        "residual_norm": err,
        "relative_error": err / nrm if nrm else 0.0,
    }
    _write(cfg, canonical_json(doc))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="tblim", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("build", "spectrum", "verify", "bethe", "reconstruct"):
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--K", type=int, required=True)
        sp.add_argument("--L", type=int, required=True)
        sp.add_argument("--parity", choices=["plus", "minus"],
                        required=name not in ("bethe", "reconstruct"))
        sp.add_argument("--ansatz", choices=["first", "second", "plus"])
        sp.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=None)
        if name == "spectrum":
            sp.add_argument("--sweep", default=None, help="K=a..b or L=a..b")
        if name == "verify":
            sp.add_argument("--operators", default=None, help="built operator file to re-check")
        if name == "reconstruct":
            sp.add_argument("--signal", default=None, help="CSV signal file: index,re,im")
    return ap


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        n=args.n, K=args.K, L=args.L,
        parity=Parity(args.parity) if args.parity else None,
        ansatz=args.ansatz,
        fmt=args.fmt,
        out=args.out,
        seed=args.seed,
        tol=args.tol,
        signal=getattr(args, "signal", None),
        operators=getattr(args, "operators", None),
        sweep=getattr(args, "sweep", None),
    )
    handlers = {
        "build": cmd_build,
        "spectrum": cmd_spectrum,
        "verify": cmd_verify,
        "bethe": cmd_bethe,
        "reconstruct": cmd_reconstruct,
    }
    try:
        return handlers[cfg.command](cfg)
    except SupportError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TblimError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
