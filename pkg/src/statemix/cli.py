"""Command-line interface.

One subcommand per toolkit area; every command takes ``--seed`` (default 0)
where randomness is involved and writes JSON/CSV artifacts, rendering a PNG
figure next to each report CSV unless ``--no-figures`` is given.  Identical
argv and seed reproduce identical output bytes.  Exit codes: 0 success,
1 domain error (one-line diagnostic naming the error), 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import coins as coinlab
from . import decomposition as dc
from . import dynamics as dyn
from . import equilibrium as eq
from . import measures as ms
from . import serialize as io
from .demo import SKIP_TOKENS, demo_all
from .errors import ParseError, StatemixError, VerificationError
from .operators import expectation, make_hermitian, max_abs, validate_state_operator
from .seeding import STREAM_COINS, STREAM_DECOMPOSE, STREAM_MEASURE, stream


def _positive_float(text: str) -> float:
    value = float(text)
    if not (value > 0.0) or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _load_state(path, tol: float):
    return validate_state_operator(io.matrix_from_json(io.load_json(path)), tol=tol)


def _load_hermitian(path):
    return make_hermitian(io.matrix_from_json(io.load_json(path)))


def cmd_decompose(args) -> int:
    w = _load_state(args.input, args.tol)
    rng = stream(args.seed, STREAM_DECOMPOSE)
    if args.mode == "spectral":
        d = dc.spectral_decomposition(w)
    elif args.mode == "vector":
        if not args.vector:
            raise ParseError("--mode vector requires --vector FILE")
        alpha = io.vector_from_json(io.load_json(args.vector))
        d = dc.complete_from_vector(w, alpha)
    elif args.mode == "random":
        alpha = dc.haar_vector(w.dim, rng)
        d = dc.complete_from_vector(w, alpha, rng=rng)
    else:  # isometry
        rank = dc.range_restrict(w).rank
        cols = args.columns or rank
        u = dc.haar_isometry(rank, cols, rng)
        d = dc.isometry_decomposition(w, u)
    io.dump_json(io.decomposition_to_json(d), args.out)
    residual = max_abs(dc.rebuild_matrix(d.weights, d.vectors) - w.matrix)
    print(f"wrote {len(d)} components to {args.out} (residual {residual:.3e})")
    return 0


def cmd_park_example(args) -> int:
    spectral, alternative = dc.park_qubit_example(args.p)
    a = 1.0 / (1.0 - 2.0 * args.p)
    w = 2.0 * args.p * (1.0 - args.p)
    io.dump_json(
        {
            "p": args.p,
            "a": a,
            "w": w,
            "spectral": io.decomposition_to_json(spectral),
            "alternative": io.decomposition_to_json(alternative),
        },
        args.out,
    )
    print(f"w={w:g}, a={a:g}")
    print(f"wrote both decompositions to {args.out}")
    return 0


def cmd_verify(args) -> int:
    w = _load_state(args.input, args.tol)
    d = io.decomposition_from_json(io.load_json(args.decomposition))
    residual = max_abs(dc.rebuild_matrix(d.weights, d.vectors) - w.matrix)
    print(f"max residual {residual:.3e}")
    if residual > args.tol:
        raise VerificationError(
            f"decomposition misses the operator by {residual:.3e} (> {args.tol:.1e})"
        )
    return 0


def cmd_measure(args) -> int:
    mu_a = io.measure_from_json(io.load_json(args.a))
    if args.b is None:
        bary = ms.barycenter(mu_a)
        report = eq.entropy_report(mu_a)
        io.dump_json(io.state_to_json(bary), Path(args.out).with_suffix(".barycenter.json"))
        io.dump_json(
            {
                "atoms": len(mu_a),
                "total": report.total,
                "barycenter_entropy": report.barycenter_entropy,
                "mean_component_entropy": report.mean_component_entropy,
                "mixing_shannon": report.mixing_shannon,
            },
            args.out,
        )
        print(f"barycenter entropy {report.barycenter_entropy:.6f} "
              f"(mixing {report.mixing_shannon:.6f})")
        return 0
    mu_b = io.measure_from_json(io.load_json(args.b))
    comparison = ms.single_shot_indistinguishable(
        mu_a, mu_b, trials=args.trials, seed=stream(args.seed, STREAM_MEASURE),
        n_observables=args.observables,
    )
    out = Path(args.out)
    header = ["observable_id", "outcome", "count", "expected_probability", "z_score"]
    for label in ("a", "b"):
        rows = [
            (r.observable_id, r.outcome, r.count, r.expected_probability, r.z_score)
            for r in comparison.rows
            if r.measure == label
        ]
        io.write_csv(out.with_suffix(f".{label}.csv"), header, rows)
    io.dump_json(
        {
            "trials": comparison.trials,
            "observables": comparison.n_observables,
            "max_abs_z": comparison.max_abs_z,
            "indistinguishable": comparison.indistinguishable,
            "measures_equal": ms.measures_equal(mu_a, mu_b),
        },
        out,
    )
    if not args.no_figures:
        from .figures import save_measure_figure

        save_measure_figure(comparison, out.with_suffix(".png"))
    print(f"max |z| = {comparison.max_abs_z:.3f} over {comparison.trials} trials; "
          f"indistinguishable={comparison.indistinguishable}")
    return 0


def cmd_coins(args) -> int:
    prep = coinlab.CoinPreparation(p_a=args.pa, p_b=args.pb, w=args.w)
    p_hat, stderr = coinlab.single_toss_frequency(
        prep, args.coins, stream(args.seed, STREAM_COINS, 0)
    )
    summary = {"p_hat": p_hat, "stderr": stderr}
    out = Path(args.out)
    if prep.p_a != prep.p_b:
        result = coinlab.repeated_toss_classify(
            prep, args.k, args.coins, stream(args.seed, STREAM_COINS, 1)
        )
        io.write_csv(
            out.with_suffix(".csv"),
            ["coin_index", "true_type", "heads", "k", "posterior_A", "decision"],
            (
                (i, "A" if t else "B", int(h), result.k, float(p), "A" if d else "B")
                for i, (t, h, p, d) in enumerate(
                    zip(result.is_type_a, result.heads, result.posterior_a,
                        result.decision_a)
                )
            ),
        )
        marginal = prep.single_toss_marginal
        fair = coinlab.CoinPreparation(p_a=marginal, p_b=marginal, w=0.5)
        verdict = coinlab.distinguish_boxes(
            prep, fair, args.k, args.coins, stream(args.seed, STREAM_COINS, 2)
        )
        summary.update(
            accuracy=result.accuracy,
            log_lr=verdict.statistic,
            p_value_proxy=verdict.p_value_proxy,
            decision=verdict.decision,
        )
        if not args.no_figures:
            from .figures import save_coin_figure

            save_coin_figure(result, out.with_suffix(".png"))
    io.dump_json(summary, out)
    print(f"p_hat={p_hat:.6f} (stderr {stderr:.6f})"
          + (f", accuracy={summary['accuracy']:.4f}, decision={summary['decision']}"
             if "accuracy" in summary else ""))
    return 0


def cmd_equilibrium(args) -> int:
    h = _load_hermitian(args.hamiltonian)
    if args.beta is not None:
        beta = args.beta
    else:
        beta = eq.solve_beta(h, args.energy)
    state = eq.canonical_state(h, beta)
    energy = expectation(state, h)
    entropy = eq.von_neumann_entropy(state)
    io.dump_json(io.state_to_json(state), Path(args.out).with_suffix(".state.json"))
    io.dump_json({"beta": beta, "energy": energy, "entropy": entropy}, args.out)
    print(f"beta={beta:.12g} energy={energy:.12g} entropy={entropy:.12g}")
    return 0


def cmd_evolve(args) -> int:
    rho0 = _load_state(args.rho0, 1e-10)
    h = _load_hermitian(args.hamiltonian)
    cfg = dyn.SeaConfig(
        tau=args.tau, dt=args.dt, t_final=args.tfinal, record_every=args.record_every
    )
    traj = dyn.sea_evolve(rho0, h, cfg)
    rows = []
    dists = []
    for i in range(len(traj)):
        _, target = dyn.canonical_on_range(traj.states[i], h)
        dist = max_abs(traj.states[i].matrix - target)
        dists.append(dist)
        rows.append(
            (float(traj.times[i]), float(traj.entropy[i]), float(traj.energy[i]),
             float(traj.trace_error[i]), float(traj.entropy_production[i]), dist)
        )
    out = Path(args.out)
    io.write_csv(
        out,
        ["t", "entropy", "energy", "trace_error", "entropy_production",
         "dist_to_canonical"],
        rows,
    )
    io.dump_json(io.state_to_json(traj.final), out.with_suffix(".final.json"))
    if not args.no_figures:
        from .figures import save_trajectory_figure

        save_trajectory_figure(traj.times, traj.entropy, traj.energy, dists,
                               out.with_suffix(".png"))
    report = dyn.asymptote_check(traj, h)
    print(f"recorded {len(traj)} points to {out}; final distance to "
          f"(partially) canonical {report.distance:.3e} at beta_hat={report.beta_hat:.6g}")
    return 0


def cmd_demo_all(args) -> int:
    report = demo_all(args.seed, args.out, skip=args.skip,
                      make_figures=not args.no_figures)
    print(report.table())
    return 1 if report.failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statemix",
        description="Density-operator decompositions, preparation measures, "
                    "canonical states, and entropy-ascent relaxation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="resolve a density operator into projectors")
    p.add_argument("--input", required=True, help="operator JSON file")
    p.add_argument("--mode", choices=["spectral", "vector", "random", "isometry"],
                   default="spectral")
    p.add_argument("--vector", help="vector JSON file (mode=vector)")
    p.add_argument("--columns", type=int, help="isometry columns (mode=isometry)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_positive_float, default=1e-10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("park-example", help="two resolutions of diag(1-p, p)")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_park_example)

    p = sub.add_parser("verify", help="check a decomposition against an operator")
    p.add_argument("--input", required=True, help="operator JSON file")
    p.add_argument("--decomposition", required=True, help="decomposition JSON file")
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("measure", help="barycenter/entropy of a measure, or compare two")
    p.add_argument("--a", required=True, help="measure JSON file")
    p.add_argument("--b", help="second measure JSON file (enables comparison)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--observables", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True, help="summary JSON path")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("coins", help="biased-coin preparation experiments")
    p.add_argument("--pa", type=float, required=True)
    p.add_argument("--pb", type=float, required=True)
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--k", type=int, default=1, help="tosses per coin")
    p.add_argument("--coins", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True, help="summary JSON path")
    p.set_defaults(func=cmd_coins)

    p = sub.add_parser("equilibrium", help="canonical state from beta or energy")
    p.add_argument("--hamiltonian", required=True, help="operator JSON file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=float)
    group.add_argument("--energy", type=float)
    p.add_argument("--out", required=True, help="summary JSON path")
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("evolve", help="unitary + entropy-ascent evolution")
    p.add_argument("--rho0", required=True, help="state operator JSON file")
    p.add_argument("--hamiltonian", required=True, help="operator JSON file")
    p.add_argument("--tau", type=_positive_float, required=True)
    p.add_argument("--dt", type=_positive_float, required=True)
    p.add_argument("--tfinal", type=_positive_float, required=True)
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True, help="trajectory CSV path")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("demo-all", help="run every worked example end to end")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--skip", action="append", default=[], choices=sorted(SKIP_TOKENS))
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_demo_all)

    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StatemixError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
