"""Command-line driver: config ingestion, the three computation routes,
additivity checking, parameter sweeps, and CSV emission for the standard
figures.

Exit codes: 0 success, 2 invalid configuration, 3 closed-form request on a
non-additive game, 4 solver non-convergence.  Every emitted file starts with
``# key=value`` metadata lines (config hash, seed, method, version) that pin
down the run, so re-running the printed command reproduces the file
bit-identically.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from importlib import resources

import jsonschema
import numpy as np

from . import __version__
from .additivity import Additive, check_additivity, pgg_delta
from .closed_form import (
    group_cooperation,
    pgg_cooperation_probability,
    player_cooperation_probability,
    product_measure,
)
from .exact import (
    ConvergenceError,
    build_transition_matrix,
    cooperation_probability,
    stationary_distribution,
    write_stationary_csv,
)
from .model import (
    BimatrixGame,
    DonationGame,
    PlayerParams,
    Population,
    PublicGoodsGame,
    TableGame,
    display_order,
    state_label,
)
from .simulate import (
    RNG_ALGORITHM,
    SimulationConfig,
    run_chain,
    write_replicates_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_ADDITIVE = 3
EXIT_NO_CONVERGENCE = 4

OUT_DIR_ENV = "INTRODYN_OUT_DIR"

FIGURE_NAMES = ("fig1", "fig2", "fig3", "table1")


class ConfigError(Exception):
    """Configuration rejected before any computation ran."""


# ----------------------------------------------------------------- config --

def load_schema() -> dict:
    text = resources.files("introdyn").joinpath("config_schema.json").read_text()
    return json.loads(text)


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.path) or "<root>"
        raise ConfigError(f"config does not match the schema at {where}: "
                          f"{first.message}")
    return cfg


def build_game(game_cfg: dict):
    kind = game_cfg["kind"]
    try:
        if kind == "public_goods":
            return PublicGoodsGame(alphas=game_cfg["alphas"],
                                   multipliers=game_cfg["multipliers"])
        if kind == "donation":
            return DonationGame(benefit=game_cfg["benefit"],
                                costs=game_cfg["costs"])
        if kind == "stag_hunt":
            return BimatrixGame.stag_hunt(game_cfg["benefit"],
                                          game_cfg["cost_1"],
                                          game_cfg["cost_2"])
        if kind == "rpst":
            return BimatrixGame.from_rpst(game_cfg["reward"],
                                          game_cfg["punishment"],
                                          game_cfg["sucker"],
                                          game_cfg["temptation"])
        if kind == "table":
            return TableGame(game_cfg["payoffs"])
    except ValueError as exc:
        raise ConfigError(f"invalid {kind} game: {exc}") from exc
    raise ConfigError(f"unknown game kind {kind!r}")


def _broadcast(value, n, name):
    if isinstance(value, (int, float)):
        return [float(value)] * n
    if len(value) != n:
        raise ConfigError(
            f"players.{name} has {len(value)} entries for {n} players")
    return [float(v) for v in value]


def build_players(players_cfg: dict | None, n: int) -> list:
    players_cfg = players_cfg or {}
    if "beta" not in players_cfg:
        raise ConfigError("players.beta is required")
    betas = _broadcast(players_cfg["beta"], n, "beta")
    mu_cs = _broadcast(players_cfg.get("mu_c", 0.0), n, "mu_c")
    mu_ds = _broadcast(players_cfg.get("mu_d", 0.0), n, "mu_d")
    try:
        return [PlayerParams(beta=b, mu_c=c, mu_d=d)
                for b, c, d in zip(betas, mu_cs, mu_ds)]
    except ValueError as exc:
        raise ConfigError(f"invalid player parameters: {exc}") from exc


def config_hash(cfg: dict) -> str:
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _out_path(out_dir: str, name: str) -> str:
    if os.path.isabs(name):
        return name
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def _fmt(x) -> str:
    return repr(float(x))


# ------------------------------------------------------------------ check --

def _verdict_lines(report) -> list:
    lines = []
    for i, verdict in enumerate(report.per_player, start=1):
        if isinstance(verdict, Additive):
            lines.append(f"player {i}: additive, delta = {_fmt(verdict.delta)}")
        else:
            lines.append(f"player {i}: not additive")
            lines.append(f"  context {verdict.context_a.label} -> "
                         f"payoff difference {_fmt(verdict.diff_a)}")
            lines.append(f"  context {verdict.context_b.label} -> "
                         f"payoff difference {_fmt(verdict.diff_b)}")
    if report.game_additive:
        deltas = ", ".join(_fmt(d) for d in report.deltas)
        lines.append(f"verdict: additive, deltas = [{deltas}]")
    else:
        lines.append("verdict: NOT additive")
    return lines


def cmd_check(cfg: dict) -> int:
    game = build_game(cfg["game"])
    report = check_additivity(game)
    print(f"game: {cfg['game']['kind']}, {game.n_players} players")
    for line in _verdict_lines(report):
        print(line)
    return EXIT_OK


# ------------------------------------------------------------------ solve --

def _closed_form_distribution(game, players):
    """Closed-form route shared by cmd_solve and the table figure: additivity
    scan, per-player probabilities, product distribution."""
    report = check_additivity(game)
    if not report.game_additive:
        return report, None, None
    ps = [player_cooperation_probability(delta, params).p
          for delta, params in zip(report.deltas, players)]
    return report, ps, product_measure(ps)


def _exact_distribution(game, players, exact_cfg: dict):
    try:
        t = build_transition_matrix(Population(game, players))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    solver = exact_cfg.get("solver", "direct")
    kwargs = {}
    if "tolerance" in exact_cfg:
        kwargs["tolerance"] = exact_cfg["tolerance"]
    if "max_iterations" in exact_cfg:
        kwargs["max_iterations"] = exact_cfg["max_iterations"]
    try:
        return stationary_distribution(t, method=solver, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _simulation_config(cfg: dict) -> SimulationConfig:
    sim = cfg.get("simulation")
    if not sim or "steps" not in sim:
        raise ConfigError("method 'simulate' needs a simulation section "
                          "with at least steps")
    try:
        return SimulationConfig(**sim)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid simulation section: {exc}") from exc


def _solve_distribution(cfg, game, players, meta):
    """Run closed_form or exact and return (pi, extra_meta) or an exit code."""
    if cfg["method"] == "closed_form":
        report, ps, pi = _closed_form_distribution(game, players)
        if pi is None:
            print("error: closed-form request on a game that is not additive",
                  file=sys.stderr)
            for line in _verdict_lines(report):
                print(line, file=sys.stderr)
            return EXIT_NOT_ADDITIVE, None
        meta["p_C"] = float(group_cooperation(ps))
        return EXIT_OK, pi
    exact_cfg = cfg.get("exact", {})
    try:
        pi = _exact_distribution(game, players, exact_cfg)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE, None
    meta["solver"] = exact_cfg.get("solver", "direct")
    meta["p_C"] = float(cooperation_probability(pi))
    return EXIT_OK, pi


def _write_solve_json(path, meta, pi, n):
    states = [{"label": state_label(int(s), n), "index": int(s),
               "probability": float(pi[s])} for s in display_order(n)]
    doc = {"metadata": meta, "states": states}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sweep_point_config(cfg: dict, parameter: str, value: float) -> dict:
    point = json.loads(json.dumps(cfg))   # deep copy of plain JSON data
    point.pop("sweep", None)
    if parameter in ("beta", "mu_c", "mu_d"):
        point.setdefault("players", {})[parameter] = value
        return point
    if point["game"]["kind"] != "public_goods":
        raise ConfigError(
            f"sweep parameter {parameter!r} needs a public_goods game")
    n = len(point["game"]["alphas"])
    key = "alphas" if parameter == "alpha" else "multipliers"
    point["game"][key] = [value] * n
    return point


def _run_sweep(cfg, out_dir, threads, meta) -> int:
    parameter = cfg["sweep"]["parameter"]
    values = cfg["sweep"]["values"]
    method = cfg["method"]
    meta["sweep_parameter"] = parameter
    rows = []
    for k, value in enumerate(values):
        point = _sweep_point_config(cfg, parameter, value)
        game = build_game(point["game"])
        players = build_players(point.get("players"), game.n_players)
        if method == "simulate":
            sim_cfg = _simulation_config(point)
            if len(values) > 1:
                child = np.random.SeedSequence((sim_cfg.seed, k))
                sim_cfg = SimulationConfig(
                    steps=sim_cfg.steps, warmup=sim_cfg.warmup,
                    replicates=sim_cfg.replicates,
                    seed=int(child.generate_state(1, np.uint64)[0]),
                    initial_state=sim_cfg.initial_state,
                    batches=sim_cfg.batches)
            res = run_chain(Population(game, players), sim_cfg, threads=threads)
            rows.append((value, res.mean, *res.quartiles, res.min, res.max))
        else:
            code, pi = _solve_distribution(point, game, players, dict(meta))
            if code != EXIT_OK:
                return code
            rows.append((value, cooperation_probability(pi)))

    out = cfg.get("output", {})
    fmt = out.get("format", "csv")
    path = _out_path(out_dir, out.get("path", f"sweep.{fmt}"))
    header = ["value", "p_C"]
    if method == "simulate":
        header += ["q1", "median", "q3", "min", "max"]
    if fmt == "json":
        doc = {"metadata": meta,
               "rows": [dict(zip(["value", "p_C", "q1", "median", "q3",
                                  "min", "max"], row)) for row in rows]}
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        with open(path, "w") as fh:
            for key, val in meta.items():
                fh.write(f"# {key}={val}\n")
            fh.write("parameter," + ",".join(header) + "\n")
            for row in rows:
                fh.write(parameter + "," + ",".join(_fmt(v) for v in row) + "\n")
    print(path)
    return EXIT_OK


def cmd_solve(cfg: dict, out_dir: str, threads: int = 1) -> int:
    game = build_game(cfg["game"])
    players = build_players(cfg.get("players"), game.n_players)
    method = cfg["method"]
    meta = {
        "config_hash": config_hash(cfg),
        "method": method,
        "version": __version__,
        "game": cfg["game"]["kind"],
        "n_players": game.n_players,
    }

    if "sweep" in cfg:
        return _run_sweep(cfg, out_dir, threads, meta)

    out = cfg.get("output", {})
    fmt = out.get("format", "csv")

    if method == "simulate":
        sim_cfg = _simulation_config(cfg)
        res = run_chain(Population(game, players), sim_cfg, threads=threads)
        meta.update(rng=RNG_ALGORITHM, seed=sim_cfg.seed, steps=sim_cfg.steps,
                    warmup=sim_cfg.warmup, replicates=sim_cfg.replicates,
                    initial_state=sim_cfg.initial_state,
                    mean=float(res.mean), q1=float(res.quartiles[0]),
                    median=float(res.quartiles[1]), q3=float(res.quartiles[2]),
                    min=float(res.min), max=float(res.max))
        path = _out_path(out_dir, out.get("path", f"simulate.{fmt}"))
        if fmt == "json":
            doc = {"metadata": meta,
                   "per_replicate_pC": list(res.per_replicate_pC),
                   "child_seeds": list(res.child_seeds)}
            with open(path, "w") as fh:
                json.dump(doc, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            write_replicates_csv(path, res, metadata=meta)
        print(path)
        return EXIT_OK

    code, pi = _solve_distribution(cfg, game, players, meta)
    if code != EXIT_OK:
        return code
    path = _out_path(out_dir, out.get("path", f"{method}.{fmt}"))
    if fmt == "json":
        _write_solve_json(path, meta, pi, game.n_players)
    else:
        write_stationary_csv(path, pi, metadata=meta)
    print(path)
    return EXIT_OK


# ----------------------------------------------------------------- figure --

def _figure_meta(name: str, params: dict) -> dict:
    meta = {"figure": name, "config_hash": config_hash(params),
            "version": __version__}
    meta.update(params)
    return meta


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return _fmt(v)


def _write_rows_csv(path, meta, header, rows):
    with open(path, "w") as fh:
        for key, val in meta.items():
            fh.write(f"# {key}={val}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")
    print(path)


def _figure_population(n: int, r_value: float):
    game = PublicGoodsGame(alphas=np.arange(1.0, n + 1),
                           multipliers=np.full(n, r_value))
    players = [PlayerParams(beta=0.5, mu_c=0.05, mu_d=0.15)] * n
    return game, players


def _figure_fig1(out_dir, seed, n_max, steps, replicates, threads) -> int:
    """Group-size sweep: formula curve, exact dots where feasible, and the
    replicate box statistics, for enhanced (r=2N) and diminished (r=N/2)
    pools."""
    warmup = steps // 10
    exact_n_max = min(n_max, 14)
    params = {"alpha_rule": "alpha_i=i", "beta": 0.5, "mu_c": 0.05,
              "mu_d": 0.15, "n_grid": f"2..{n_max}",
              "exact_grid": f"2..{exact_n_max}", "steps": steps,
              "warmup": warmup, "replicates": replicates, "seed": seed,
              "rng": RNG_ALGORITHM, "initial_state": "uniform_random"}
    rows = []
    for panel_idx, (panel, factor) in enumerate((("r=2N", 2.0), ("r=N/2", 0.5))):
        for n in range(2, n_max + 1):
            game, players = _figure_population(n, factor * n)
            closed = pgg_cooperation_probability(game, players)
            exact_pc = None
            if n <= exact_n_max:
                t = build_transition_matrix(Population(game, players))
                solver = "direct" if n <= 12 else "power"
                exact_pc = cooperation_probability(
                    stationary_distribution(t, method=solver))
            cell_seed = int(np.random.SeedSequence(
                (seed, panel_idx, n)).generate_state(1, np.uint64)[0])
            res = run_chain(
                Population(game, players),
                SimulationConfig(steps=steps, warmup=warmup,
                                 replicates=replicates, seed=cell_seed),
                threads=threads)
            rows.append((panel, n, closed, exact_pc, res.mean,
                         res.quartiles[0], res.quartiles[1], res.quartiles[2],
                         res.min, res.max))
    _write_rows_csv(_out_path(out_dir, "fig1.csv"),
                    _figure_meta("fig1", params),
                    ["panel", "n", "p_closed", "p_exact", "sim_mean",
                     "sim_q1", "sim_median", "sim_q3", "sim_min", "sim_max"],
                    rows)
    return EXIT_OK


def _single_player_p(alpha, r, n, beta, mu):
    params = PlayerParams(beta=beta, mu_c=mu, mu_d=mu)
    return player_cooperation_probability(pgg_delta(alpha, r, n), params).p


def _figure_fig2(out_dir) -> int:
    """Structural panels for one player at N=5, symmetric mu=0.1: switching
    propensity against beta, against alpha, and the flat beta=0 surface."""
    n, mu = 5, 0.1
    params = {"n": n, "mu": mu, "guide_r_equals_n": float(n)}
    meta = _figure_meta("fig2", params)

    betas = np.linspace(0.0, 10.0, 51)
    rows = [(r, b, _single_player_p(2.0, r, n, b, mu))
            for r in (2.5, 5.0, 7.5) for b in betas]
    _write_rows_csv(_out_path(out_dir, "fig2_left.csv"), meta,
                    ["r", "beta", "p"], rows)

    alphas = np.linspace(0.05, 4.0, 80)
    rows = [(r, b, a, _single_player_p(a, r, n, b, mu))
            for r in (2.5, 7.5) for b in (1.0, 5.0) for a in alphas]
    _write_rows_csv(_out_path(out_dir, "fig2_centre.csv"), meta,
                    ["r", "beta", "alpha", "p"], rows)

    grid_alphas = np.linspace(0.05, 4.0, 40)
    grid_rs = np.linspace(0.5, 10.0, 40)
    rows = [(a, r, _single_player_p(a, r, n, 0.0, mu))
            for a in grid_alphas for r in grid_rs]
    _write_rows_csv(_out_path(out_dir, "fig2_right.csv"), meta,
                    ["alpha", "r", "p"], rows)
    return EXIT_OK


def _figure_fig3(out_dir) -> int:
    """Mutation effect for one player (alpha=2, r=7) across beta, at a group
    size where cooperation is favoured (N=5) and one where it is not (N=200)."""
    alpha, r = 2.0, 7.0
    params = {"alpha": alpha, "r": r, "mu_values": "0,0.1,0.25",
              "n_values": "5,200"}
    betas = np.linspace(0.0, 10.0, 101)
    rows = [(n, mu, b, _single_player_p(alpha, r, n, b, mu))
            for n in (5, 200) for mu in (0.0, 0.1, 0.25) for b in betas]
    _write_rows_csv(_out_path(out_dir, "fig3.csv"),
                    _figure_meta("fig3", params),
                    ["n", "mu", "beta", "p"], rows)
    return EXIT_OK


def _figure_table1(out_dir) -> int:
    """Eight-state comparison of the product formula against the exact solve
    on the heterogeneous three-player pool."""
    game = PublicGoodsGame(alphas=[1.0, 2.0, 3.0], multipliers=[1.0, 3.0, 9.0])
    players = [PlayerParams(beta=2.0, mu_c=0.1, mu_d=0.1)] * 3
    params = {"alphas": "1,2,3", "multipliers": "1,3,9", "beta": 2.0,
              "mu_c": 0.1, "mu_d": 0.1}
    _, _, formula = _closed_form_distribution(game, players)
    exact_pi = stationary_distribution(
        build_transition_matrix(Population(game, players)), method="direct")
    rows = [(state_label(int(s), 3), int(s), formula[s], exact_pi[s])
            for s in display_order(3)]
    _write_rows_csv(_out_path(out_dir, "table1.csv"),
                    _figure_meta("table1", params),
                    ["state_label", "state_index", "formula", "exact"],
                    rows)
    return EXIT_OK


def cmd_figure(name, out_dir, seed, n_max, steps, replicates, threads) -> int:
    if name == "fig1":
        if steps < 10:
            raise ConfigError(f"fig1 needs at least 10 steps, got {steps}")
        return _figure_fig1(out_dir, seed, n_max, steps, replicates, threads)
    if name == "fig2":
        return _figure_fig2(out_dir)
    if name == "fig3":
        return _figure_fig3(out_dir)
    return _figure_table1(out_dir)


# ------------------------------------------------------------------- main --

def _add_common(parser, with_method=True):
    parser.add_argument("--config", required=True, help="path to a JSON run config")
    parser.add_argument("--out", help="output directory (default: "
                        f"${OUT_DIR_ENV} or the working directory)")
    parser.add_argument("--seed", type=int, help="override the simulation seed")
    if with_method:
        parser.add_argument("--method",
                            choices=["closed_form", "exact", "simulate"],
                            help="override the configured method")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for replicates")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="introdyn",
        description="Stationary cooperation of introspective learners with "
                    "mutation: closed form, exact solve, and simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("solve", help="run one configured computation"))
    check = sub.add_parser("check", help="report per-player additivity")
    check.add_argument("--config", required=True)
    _add_common(sub.add_parser("simulate", help="Monte Carlo run "
                               "(solve with method=simulate)"),
                with_method=False)

    fig = sub.add_parser("figure", help="emit the CSV bundle for one figure")
    fig.add_argument("name", choices=FIGURE_NAMES)
    fig.add_argument("--out", help="output directory")
    fig.add_argument("--seed", type=int, default=1)
    fig.add_argument("--n-max", type=int, default=50,
                     help="largest group size in the fig1 sweep")
    fig.add_argument("--steps", type=int, default=5000,
                     help="simulation steps per fig1 replicate")
    fig.add_argument("--replicates", type=int, default=19,
                     help="fig1 replicates per group size")
    fig.add_argument("--threads", type=int, default=1)

    args = parser.parse_args(argv)
    out_dir = getattr(args, "out", None) or os.environ.get(OUT_DIR_ENV) or "."

    try:
        if args.command == "check":
            return cmd_check(load_config(args.config))
        if args.command == "figure":
            return cmd_figure(args.name, out_dir, args.seed, args.n_max,
                              args.steps, args.replicates, args.threads)
        cfg = load_config(args.config)
        if args.command == "simulate":
            cfg["method"] = "simulate"
        elif args.method:
            cfg["method"] = args.method
        if args.seed is not None:
            cfg.setdefault("simulation", {})["seed"] = args.seed
        return cmd_solve(cfg, out_dir, threads=args.threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
