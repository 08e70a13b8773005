"""Batch experiment harness.

Usage::

    atomdyn <command> [--config cfg.json] [--seed N] [--out report.csv]
                      [--format csv|json]

Commands: verify, chernoff, cesaro, walk-decay, semigroup, dephase.

Reports embed the effective config, the seed, and the package version, and
are byte-identical for identical (config, seed) regardless of worker
count: sweep points draw from pre-assigned Philox substreams indexed by
row.  Wall-clock runtime goes to a ``<out>.meta.json`` sidecar (stderr
when writing to stdout) so the report itself stays reproducible.

Exit codes: 0 all checks pass, 1 a verification check failed, 2 bad
configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .atoms import AtomicVector, deserialize, inner, make_vector, norm, unit_atom
from .trig import (
    CesaroQuadratureConfig,
    auto_config,
    cesaro_inner_analytic,
    cesaro_inner_numeric,
    harmonic,
    fourier,
    make_polynomial,
    modulation_gap_numeric,
)
from .algebra import (
    AlgebraElement,
    apply_shift,
    indicator,
    weyl_residual,
)
from .rand import (
    Cauchy,
    ConvolutionFamily,
    Distribution,
    Gaussian,
    Rademacher,
    SeededRng,
    chernoff_error,
    distribution_from_json,
)
from .channels import (
    AveragedState,
    MixedState,
    NormalState,
    PureState,
    averaged_Phi,
    averaged_T,
    dephasing_kernel,
    evaluate,
    normality_witness,
    projector_value,
    semigroup_Phi,
    semigroup_T,
    yosida_hewitt_split,
)

SEED_ENV = "ATOMDYN_SEED"


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# Report plumbing


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def render_csv(command: str, seed: int, config: dict, columns: Sequence[str],
               rows: Sequence[dict]) -> str:
    lines = [
        "# atomdyn report v1",
        f"# command={command}",
        f"# seed={seed}",
        f"# version={__version__}",
        f"# config={json.dumps(config, sort_keys=True)}",
        ",".join(columns),
    ]
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def render_json(command: str, seed: int, config: dict, columns: Sequence[str],
                rows: Sequence[dict]) -> str:
    doc = {
        "report_version": 1,
        "command": command,
        "seed": seed,
        "version": __version__,
        "config": config,
        "columns": list(columns),
        "rows": [{c: row.get(c) for c in columns} for row in rows],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_report(out: Optional[str], fmt: str, command: str, seed: int,
                 config: dict, columns, rows, runtime_s: float) -> None:
    # execution knobs must not leak into reports: the bytes are promised to
    # be identical regardless of how the run was parallelised
    config = {k: v for k, v in config.items() if k != "workers"}
    text = (render_csv if fmt == "csv" else render_json)(
        command, seed, config, columns, rows
    )
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        with open(out + ".meta.json", "w") as fh:
            json.dump({"runtime_s": runtime_s}, fh)
            fh.write("\n")
    else:
        sys.stdout.write(text)
        print(f"runtime_s={runtime_s:.3f}", file=sys.stderr)


def _map_rows(worker: Callable[[int], dict], count: int, workers: int) -> List[dict]:
    """Evaluate sweep points, preserving row order for any worker count."""
    if workers <= 1:
        return [worker(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, range(count)))


def _load_distribution(config: dict, default: dict) -> Distribution:
    doc = config.get("distribution", default)
    if isinstance(doc, str):
        with open(doc) as fh:
            doc = json.load(fh)
    try:
        return distribution_from_json(doc)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad distribution document: {exc}") from exc


def _family(config: dict) -> ConvolutionFamily:
    kind = config.get("family", "gaussian")
    try:
        return ConvolutionFamily(kind)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# verify


def _random_vector(gen, max_atoms=6, span=10.0) -> AtomicVector:
    k = int(gen.integers(1, max_atoms + 1))
    ps = gen.uniform(-span, span, k)
    cs = gen.normal(size=k) + 1j * gen.normal(size=k)
    return make_vector(list(zip(ps, cs)))


def _random_density(gen, m: int):
    a = gen.normal(size=(m, m)) + 1j * gen.normal(size=(m, m))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    support = tuple(np.sort(gen.uniform(-5.0, 5.0, m)))
    return NormalState(support, rho)


DEFAULT_TOLERANCES = {
    "weyl": 1e-12,
    "fourier_isometry": 0.0,
    "isometry": 1e-14,
    "dephase_hermitian": 1e-12,
    "dephase_trace": 1e-12,
    "dephase_psd": 1e-10,
    "semigroup_T": 1e-10,
    "semigroup_Phi": 1e-12,
    "shift_invariance": 0.0,
    "singularity": 0.0,
}


def run_verify(config: dict, seed: int) -> Tuple[List[str], List[dict], int]:
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(config.get("tolerances", {}))
    rng = SeededRng(seed)
    rows = []

    def check(name: str, residual: float):
        tol = float(tols[name])
        rows.append(
            {
                "check": name,
                "residual": float(residual),
                "tolerance": tol,
                "passed": residual <= tol,
            }
        )

    gen = rng.stream(0)
    res = 0.0
    for _ in range(200):
        u = _random_vector(gen)
        h, a = gen.uniform(-5, 5, 2)
        res = max(res, weyl_residual(float(h), float(a), u))
    check("weyl", res)

    gen = rng.stream(1)
    res = 0.0
    for _ in range(200):
        u = make_polynomial(
            [(p, complex(c, s)) for p, c, s in
             zip(gen.uniform(-5, 5, 3), gen.normal(size=3), gen.normal(size=3))]
        )
        v = make_polynomial(
            [(p, complex(c, s)) for p, c, s in
             zip(list(gen.uniform(-5, 5, 2)) + [u.terms[0].p if u.terms else 0.0],
                 gen.normal(size=3), gen.normal(size=3))]
        )
        res = max(res, abs(cesaro_inner_analytic(u, v) - inner(fourier(u), fourier(v))))
    check("fourier_isometry", res)

    gen = rng.stream(2)
    res = 0.0
    from .algebra import apply_mod
    for _ in range(200):
        u = _random_vector(gen)
        h = float(gen.uniform(-5, 5))
        n0 = norm(u)
        res = max(res, abs(norm(apply_shift(h, u)) - n0) / n0,
                  abs(norm(apply_mod(h, u)) - n0) / n0)
    check("isometry", res)

    gen = rng.stream(3)
    herm = tr = psd = 0.0
    for _ in range(100):
        m = int(gen.integers(2, 7))
        s = _random_density(gen, m)
        out = averaged_Phi(Gaussian(1.0), s)
        herm = max(herm, float(np.max(np.abs(out.matrix - out.matrix.conj().T))))
        tr = max(tr, abs(float(np.trace(out.matrix).real) - 1.0))
        psd = max(psd, max(0.0, -float(np.linalg.eigvalsh(out.matrix).min())))
    check("dephase_hermitian", herm)
    check("dephase_trace", tr)
    check("dephase_psd", psd)

    probe_sets = [AlgebraElement.shift(1.0), AlgebraElement.mult(indicator(0.0, 1.0))]
    rho = PureState(make_vector([(0.0, 2 ** -0.5), (1.0, 2 ** -0.5)]))
    res_t = 0.0
    res_phi = 0.0
    grid = [0.0, 0.1, 0.5, 1.0, 2.0]
    for kind in ("gaussian", "cauchy"):
        fam = ConvolutionFamily(kind)
        for t in grid:
            for s_ in grid:
                lhs = semigroup_T(fam, t, semigroup_T(fam, s_, rho))
                rhs = semigroup_T(fam, t + s_, rho)
                for A in probe_sets:
                    res_t = max(res_t, abs(evaluate(lhs, A) - evaluate(rhs, A)))
        rho_n = NormalState(
            (0.0, 1.0), np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
        )
        for t in grid:
            for s_ in grid:
                m1 = semigroup_Phi(fam, t, semigroup_Phi(fam, s_, rho_n)).matrix
                m2 = semigroup_Phi(fam, t + s_, rho_n).matrix
                res_phi = max(res_phi, float(np.max(np.abs(m1 - m2))))
    check("semigroup_T", res_t)
    check("semigroup_Phi", res_phi)

    gen = rng.stream(4)
    res = 0.0
    for _ in range(100):
        u = _random_vector(gen)
        u = (1.0 / norm(u)) * u
        rho_p = PureState(u)
        a = float(gen.uniform(-3, 3))
        d = Gaussian(float(gen.uniform(0.5, 2.0)))
        A = AlgebraElement.shift(a)
        res = max(res, abs(evaluate(averaged_T(d, rho_p), A) - evaluate(rho_p, A)))
    check("shift_invariance", res)

    gen = rng.stream(5)
    res = 0.0
    for _ in range(50):
        u = _random_vector(gen)
        u = (1.0 / norm(u)) * u
        v = _random_vector(gen)
        v = (1.0 / norm(v)) * v
        avg = averaged_T(Gaussian(1.0), PureState(u))
        res = max(res, projector_value(avg, v))
        res = max(res, projector_value(avg, v, method="mc", mc_samples=200,
                                       gen=rng.stream(100)))
    check("singularity", res)

    failed = [r for r in rows if not r["passed"]]
    return (
        ["check", "passed", "residual", "tolerance"],
        rows,
        1 if failed else 0,
    )


# ---------------------------------------------------------------------------
# chernoff


def run_chernoff(config: dict, seed: int) -> Tuple[List[str], List[dict], int]:
    d = _load_distribution(config, {"kind": "rademacher"})
    if not (math.isfinite(d.variance) and d.variance > 0):
        raise ConfigError(
            "the product-formula hypotheses need a centered law with finite "
            f"positive variance; {d.to_json()} has variance {d.variance!r}"
        )
    t = float(config.get("t", 1.0))
    probes = [float(x) for x in config.get("probes", [0.5, 1.0, 2.0, 3.0])]
    n_list = [int(n) for n in config.get("n_list", [10, 100, 1000, 10000])]
    if not n_list or not probes:
        raise ConfigError("n_list and probes must be non-empty")
    workers = int(config.get("workers", 1))

    errors = _map_rows(
        lambda i: {"err": chernoff_error(d, t, n_list[i], probes)},
        len(n_list), workers,
    )
    err_by_n = {n: e["err"] for n, e in zip(n_list, errors)}
    rows = []
    for n in n_list:
        rate = None
        if 2 * n in err_by_n and err_by_n[2 * n] > 0 and err_by_n[n] > 0:
            rate = math.log2(err_by_n[n] / err_by_n[2 * n])
        rows.append({"n": n, "sup_error": err_by_n[n], "rate_estimate": rate})
    return ["n", "sup_error", "rate_estimate"], rows, 0


# ---------------------------------------------------------------------------
# cesaro


def run_cesaro(config: dict, seed: int) -> Tuple[List[str], List[dict], int]:
    dp = float(config.get("delta_p", 1.0))
    x_list = [float(x) for x in config.get("X_list", [1e2, 1e3, 1e4])]
    gap_s = float(config.get("gap_s", 1.0))
    workers = int(config.get("workers", 1))
    u = harmonic(0.0)
    v = harmonic(dp)
    kron = cesaro_inner_analytic(u, v)

    def point(i: int) -> dict:
        X = x_list[i]
        cfg = auto_config(X, u, v)
        num = cesaro_inner_numeric(u, v, cfg)
        gap_cfg = CesaroQuadratureConfig(
            X, max(cfg.steps, int(40 * X * abs(gap_s) / (2 * math.pi)) + 1)
        )
        gap = modulation_gap_numeric(gap_s, 0.0, gap_cfg)
        return {"X": X, "abs_error": abs(num - kron), "mod_gap": gap}

    rows = _map_rows(point, len(x_list), workers)
    return ["X", "abs_error", "mod_gap"], rows, 0


# ---------------------------------------------------------------------------
# walk-decay


def run_walk_decay(config: dict, seed: int) -> Tuple[List[str], List[dict], int]:
    d = _load_distribution(config, {"kind": "gaussian", "D": 1.0})
    if d.has_discrete_part:
        print(
            "warning: the zero-mean-shift hypothesis needs a law without a "
            "discrete part; running anyway",
            file=sys.stderr,
        )
    n_list = [int(n) for n in config.get("N_list", [100, 1000, 10000])]
    probe_p = float(config.get("probe_p", 1.0))
    u_doc = config.get("u")
    v_doc = config.get("v")
    u = deserialize(json.dumps(u_doc)) if u_doc else unit_atom(0.0)
    v = deserialize(json.dumps(v_doc)) if v_doc else unit_atom(1.0)
    workers = int(config.get("workers", 1))
    rng = SeededRng(seed)

    def point(i: int) -> dict:
        n = n_list[i]
        gen = rng.stream(i)
        xs = d.sample(gen, n)
        overlaps = np.array([inner(apply_shift(float(x), u), v) for x in xs])
        mean_overlap = complex(overlaps.mean())
        stderr = float(
            math.sqrt(np.mean(np.abs(overlaps - mean_overlap) ** 2) / n)
        )
        phases = np.exp(1j * probe_p * xs)
        mod_err = abs(complex(phases.mean()) - d.chi(probe_p))
        return {
            "N": n,
            "shift_overlap_abs": abs(mean_overlap),
            "shift_stderr": stderr,
            "mod_mean_error": mod_err,
            "clt_band": 4.0 / math.sqrt(n),
        }

    rows = _map_rows(point, len(n_list), workers)
    cols = ["N", "shift_overlap_abs", "shift_stderr", "mod_mean_error", "clt_band"]
    return cols, rows, 0


# ---------------------------------------------------------------------------
# semigroup


def run_semigroup(config: dict, seed: int) -> Tuple[List[str], List[dict], int]:
    fam = _family(config)
    t_list = [float(t) for t in config.get("t_list", [0.0, 0.1, 0.5, 1.0, 2.0])]
    s_list = [float(t) for t in config.get("s_list", t_list)]
    workers = int(config.get("workers", 1))
    rho = PureState(make_vector([(0.0, 2 ** -0.5), (1.0, 2 ** -0.5)]))
    rho_n = NormalState((0.0, 1.0), np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex))
    probes = {
        "shift(1)": AlgebraElement.shift(1.0),
        "ind[0,1]": AlgebraElement.mult(indicator(0.0, 1.0)),
    }
    grid = [(t, s) for t in t_list for s in s_list]

    def point(i: int) -> dict:
        t, s = grid[i]
        res_t = 0.0
        for A in probes.values():
            lhs = semigroup_T(fam, t, semigroup_T(fam, s, rho))
            rhs = semigroup_T(fam, t + s, rho)
            res_t = max(res_t, abs(evaluate(lhs, A) - evaluate(rhs, A)))
        m1 = semigroup_Phi(fam, t, semigroup_Phi(fam, s, rho_n)).matrix
        m2 = semigroup_Phi(fam, t + s, rho_n).matrix
        res_phi = float(np.max(np.abs(m1 - m2)))
        return {"t": t, "s": s, "residual_T": res_t, "residual_Phi": res_phi}

    rows = _map_rows(point, len(grid), workers)
    return ["t", "s", "residual_T", "residual_Phi"], rows, 0


# ---------------------------------------------------------------------------
# dephase


def run_dephase(config: dict, seed: int) -> Tuple[List[str], List[dict], int]:
    fam = _family(config)
    dp = float(config.get("delta_p", 1.0))
    t_list = [float(t) for t in config.get("t_list", [0.0, 0.5, 1.0, 2.0, 4.0])]
    workers = int(config.get("workers", 1))
    rho = NormalState((0.0, dp), np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex))

    def point(i: int) -> dict:
        t = t_list[i]
        out = semigroup_Phi(fam, t, rho)
        off = abs(complex(out.matrix[0, 1]))
        analytic = 0.5 * abs(fam.at(t).chi(dp))
        return {
            "t": t,
            "delta_p": dp,
            "offdiag_abs": off,
            "analytic": analytic,
            "abs_error": abs(off - analytic),
        }

    rows = _map_rows(point, len(t_list), workers)
    return ["t", "delta_p", "offdiag_abs", "analytic", "abs_error"], rows, 0


# ---------------------------------------------------------------------------
# entry point


COMMANDS = {
    "verify": run_verify,
    "chernoff": run_chernoff,
    "cesaro": run_cesaro,
    "walk-decay": run_walk_decay,
    "semigroup": run_semigroup,
    "dephase": run_dephase,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="atomdyn", description="verification and sweep harness"
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument(
        "--seed", type=int,
        default=int(os.environ.get(SEED_ENV, "0")),
        help=f"RNG seed (default: ${SEED_ENV} or 0)",
    )
    parser.add_argument("--out", help="report path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    args = parser.parse_args(argv)

    config: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
        if not isinstance(config, dict):
            print("error: config must be a JSON object", file=sys.stderr)
            return 2

    started = time.monotonic()
    try:
        columns, rows, status = COMMANDS[args.command](config, args.seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    runtime = time.monotonic() - started
    write_report(
        args.out, args.format, args.command, args.seed, config, columns, rows,
        runtime,
    )
    return status


if __name__ == "__main__":
    sys.exit(main())
