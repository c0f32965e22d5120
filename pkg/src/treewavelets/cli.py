"""Command-line interface.

Subcommands
-----------
gen         write a graph (and point coordinates, for geometric families)
basis       build a spanning-tree wavelet basis and report its invariants
resistance  compute exact effective resistances, optionally cross-checked
experiment  run a power / sparsity / concentration experiment from a config
validate    fast self-check battery with one PASS/FAIL line per invariant

Exit codes: 0 success, 1 a computed validation failed, 2 bad input or usage.
Commands that write files also write a ``*.manifest.json`` (or
``manifest.json`` inside an experiment directory) recording the resolved
parameters, the seed, and sha256 digests of inputs and outputs; the manifest
is written before computation starts and rewritten with output digests once
the run finishes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .detection import (
    NoiseModel,
    gen_two_level_signal,
    snr_condition,
    threshold,
)
from .errors import DisconnectedGraphError
from .experiments import TreeSource, preset_config, run_experiment, run_trial
from .graphs import (
    build_graph,
    cut_size,
    gen_complete,
    gen_epsilon,
    gen_knn,
    gen_torus,
    read_edge_list,
    require_connected,
    write_edge_list,
    write_points,
)
from .resistance import all_edge_resistances, write_resistance_csv
from .trees import (
    bfs_spanning_tree,
    find_balance,
    sample_ust,
    tree_cut_size,
    validate_spanning_tree,
    write_tree,
)
from .wavelets import (
    activation_bound,
    apply_basis,
    basis_sparsity,
    build_basis,
    edge_activations,
    write_basis_csv,
)

__all__ = ["main"]


# =============================================================================
# Manifest helpers
# =============================================================================


def _sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(
    path: Path,
    command: str,
    params: dict,
    seed: int | None,
    inputs: dict[str, str],
    outputs: dict[str, str] | None,
) -> None:
    doc = {
        "command": command,
        "params": params,
        "seed": seed,
        "version": __version__,
        "inputs": inputs,
        "outputs": outputs,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _digest_outputs(paths: list[Path]) -> dict[str, str]:
    return {p.name: _sha256_file(p) for p in sorted(paths)}


# =============================================================================
# gen
# =============================================================================


def _cmd_gen(args: argparse.Namespace) -> int:
    out = Path(args.out)
    family = args.family
    params: dict = {"family": family, "out": str(out)}
    comments = []
    points = None
    if family == "torus":
        params.update(side=args.side, dims=args.dims)
        comments.append(f"torus side={args.side} dims={args.dims}")
        make = lambda: (gen_torus(args.side, args.dims), None)
    elif family == "complete":
        params.update(n=args.n)
        comments.append(f"complete n={args.n}")
        make = lambda: (gen_complete(args.n), None)
    elif family == "knn":
        params.update(n=args.n, k=args.k, dim=args.dim, seed=args.seed)
        comments.append(f"knn n={args.n} k={args.k} dim={args.dim} seed={args.seed}")
        make = lambda: gen_knn(args.n, args.k, args.dim, args.seed)
    else:
        params.update(n=args.n, eps=args.eps, dim=args.dim, seed=args.seed)
        comments.append(
            f"epsilon n={args.n} eps={args.eps} dim={args.dim} seed={args.seed}"
        )
        make = lambda: gen_epsilon(args.n, args.eps, args.dim, args.seed)

    manifest = out.parent / (out.name + ".manifest.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    seed = getattr(args, "seed", None)
    _write_manifest(manifest, "gen", params, seed, {}, None)

    g, pts = make()
    write_edge_list(g, out, comments=comments)
    written = [out]
    if pts is not None:
        points = args.points or str(out.parent / (out.stem + ".points.csv"))
        write_points(pts, points)
        params["points"] = points
        written.append(Path(points))
    _write_manifest(manifest, "gen", params, seed, {}, _digest_outputs(written))

    print(f"wrote {out} (n={g.n}, m={g.m})")
    if points:
        print(f"wrote {points}")
    return 0


# =============================================================================
# basis
# =============================================================================

_ORTHO_LIMIT = 1e-10


def _cmd_basis(args: argparse.Namespace) -> int:
    g = read_edge_list(args.graph)
    require_connected(g)
    if args.tree == "ust":
        if args.seed is None:
            print("error: --tree ust requires --seed", file=sys.stderr)
            return 2
        tree = sample_ust(g, args.seed)
    else:
        tree = bfs_spanning_tree(g, args.root)

    params = {
        "graph": args.graph,
        "tree": args.tree,
        "root": args.root,
        "out": args.out,
        "tree_out": args.tree_out,
    }
    inputs = {Path(args.graph).name: _sha256_file(args.graph)}
    manifest = None
    if args.out:
        manifest = Path(args.out).parent / (Path(args.out).name + ".manifest.json")
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        _write_manifest(manifest, "basis", params, args.seed, inputs, None)

    basis = build_basis(tree)
    dense = basis.to_dense()
    gram = dense @ dense.T
    residual = float(np.max(np.abs(gram - np.eye(g.n))))
    acts = edge_activations(basis, tree)
    max_act = int(acts.max()) if acts.size else 0
    bound = activation_bound(tree)

    ok_ortho = residual <= _ORTHO_LIMIT
    ok_act = max_act <= bound
    print(f"elements: {len(basis)}")
    print(
        f"orthonormality residual: {residual:.3e} "
        f"(limit {_ORTHO_LIMIT:.0e}) [{'ok' if ok_ortho else 'FAIL'}]"
    )
    print(
        f"max edge activations: {max_act} (bound {bound}) "
        f"[{'ok' if ok_act else 'FAIL'}]"
    )

    written = []
    if args.out:
        write_basis_csv(basis, args.out)
        written.append(Path(args.out))
        print(f"wrote {args.out}")
    if args.tree_out:
        write_tree(tree, args.tree_out)
        written.append(Path(args.tree_out))
        print(f"wrote {args.tree_out}")
    if manifest is not None:
        _write_manifest(
            manifest, "basis", params, args.seed, inputs, _digest_outputs(written)
        )
    return 0 if (ok_ortho and ok_act) else 1


# =============================================================================
# resistance
# =============================================================================


def _cmd_resistance(args: argparse.Namespace) -> int:
    g = read_edge_list(args.graph)
    profile = all_edge_resistances(g)

    params = {
        "graph": args.graph,
        "out": args.out,
        "validate_foster": args.validate_foster,
        "validate_mtt": args.validate_mtt,
    }
    inputs = {Path(args.graph).name: _sha256_file(args.graph)}
    manifest = Path(args.out).parent / (Path(args.out).name + ".manifest.json")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    _write_manifest(manifest, "resistance", params, args.seed, inputs, None)

    write_resistance_csv(profile, args.out)
    _write_manifest(
        manifest, "resistance", params, args.seed, inputs,
        _digest_outputs([Path(args.out)]),
    )
    print(f"wrote {args.out} ({g.m} edges)")
    print(f"total resistance: {profile.total!r}")
    print(f"max edge resistance: {profile.max_edge_resistance!r}")

    failed = False
    if args.validate_foster:
        target = g.n - 1
        err = abs(profile.total - target)
        ok = err <= 1e-8 * max(1.0, target)
        failed |= not ok
        print(
            f"foster check: sum={profile.total!r} target={target} "
            f"[{'ok' if ok else 'FAIL'}]"
        )
    if args.validate_mtt:
        if args.seed is None:
            print("error: --validate-mtt requires --seed", file=sys.stderr)
            return 2
        draws = args.validate_mtt
        rng = np.random.default_rng(args.seed)
        counts = np.zeros(g.m, dtype=np.int64)
        for _ in range(draws):
            t = sample_ust(g, int(rng.integers(2**32)))
            for e in t.edges:
                counts[g.edge_index[e]] += 1
        freq = counts / draws
        p = profile.edge_resistances
        se = np.sqrt(np.maximum(p * (1.0 - p), 1e-12) / draws)
        within = np.abs(freq - p) <= 3.0 * se
        frac = float(within.mean())
        ok = frac >= 0.99
        failed |= not ok
        print(
            f"tree-marginal check: {within.sum()}/{g.m} edges within 3 SE "
            f"({frac:.4f}) [{'ok' if ok else 'FAIL'}]"
        )
    return 1 if failed else 0


# =============================================================================
# experiment
# =============================================================================


def _cmd_experiment(args: argparse.Namespace) -> int:
    inputs: dict[str, str] = {}
    if args.config:
        config = json.loads(Path(args.config).read_text())
        if not isinstance(config, dict):
            print("error: config must be a JSON object", file=sys.stderr)
            return 2
        if args.seed is not None:
            config["seed"] = args.seed
        inputs[Path(args.config).name] = _sha256_file(args.config)
    else:
        if args.seed is None:
            print("error: --preset requires --seed", file=sys.stderr)
            return 2
        config = preset_config(args.preset, args.seed)
    if not isinstance(config.get("seed"), int):
        print("error: no master seed (pass --seed or put 'seed' in the config)",
              file=sys.stderr)
        return 2

    workers = args.threads
    if workers is None:
        workers = int(os.environ.get("TREEWAVELETS_THREADS", "1"))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = out / "manifest.json"
    params = {"config": config, "out": str(out), "workers": workers}
    _write_manifest(manifest, "experiment", params, config["seed"], inputs, None)

    result = run_experiment(config, out, workers=workers)

    produced = [p for p in out.iterdir() if p.is_file() and p.name != "manifest.json"]
    _write_manifest(
        manifest, "experiment", params, config["seed"], inputs,
        _digest_outputs(produced),
    )
    print(f"experiment kind: {result.kind}")
    for key, val in result.summary.items():
        print(f"  {key}: {val}")
    print(f"wrote {len(produced)} files to {out}")
    return 0


# =============================================================================
# validate
# =============================================================================


def _check(name: str, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def _components_after_removal(tree, v: int) -> list[int]:
    """Component sizes of the tree with vertex v deleted (plain BFS)."""
    adj = tree.adjacency
    seen = {v}
    sizes = []
    for start in range(tree.n):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        size = 0
        while stack:
            u = stack.pop()
            size += 1
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        sizes.append(size)
    return sizes


def _cmd_validate(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    ok = True

    graphs = [
        ("torus-4x4", gen_torus(4, 2)),
        ("complete-10", gen_complete(10)),
        ("knn-40-4", gen_knn(40, 4, 2, int(rng.integers(2**32)))[0]),
    ]

    # Basis invariants: orthonormality, completeness, energy preservation.
    worst = 0.0
    worst_pars = 0.0
    for _, g in graphs:
        for tree in (bfs_spanning_tree(g), sample_ust(g, int(rng.integers(2**32)))):
            basis = build_basis(tree)
            dense = basis.to_dense()
            worst = max(worst, float(np.abs(dense @ dense.T - np.eye(g.n)).max()))
            z = rng.standard_normal(g.n)
            coef = apply_basis(basis, z)
            worst_pars = max(
                worst_pars,
                abs(float(coef @ coef) - float(z @ z)) / float(z @ z),
            )
    ok &= _check("orthonormality", worst <= 1e-10, f"max residual {worst:.2e}")
    ok &= _check("energy preservation", worst_pars <= 1e-8,
                 f"max relative error {worst_pars:.2e}")

    # Balance guarantee on uniform random trees.
    bad = 0
    trees = 0
    for n in (8, 23, 60):
        kn = gen_complete(n)
        for _ in range(60):
            t = sample_ust(kn, int(rng.integers(2**32)))
            v = find_balance(t)
            sizes = _components_after_removal(t, v)
            trees += 1
            if sizes and max(sizes) > -(-n // 2):
                bad += 1
    ok &= _check("balance guarantee", bad == 0,
                 f"{trees} random trees, {bad} over ceil(n/2)")

    # Sparsity bound: cut * activation budget, mean-zero signals.
    viol = 0
    checked = 0
    g = gen_torus(8, 2)
    for _ in range(120):
        t = sample_ust(g, int(rng.integers(2**32)))
        basis = build_basis(t)
        x = gen_two_level_signal(g, 16, 1.0, rng).values
        budget = cut_size(g, x) * activation_bound(t)
        checked += 1
        if basis_sparsity(basis, x) > budget:
            viol += 1
    ok &= _check("sparsity bound", viol == 0, f"{checked} pairs, {viol} violations")

    # Exact resistance identities.
    tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    r_tri = all_edge_resistances(tri).edge_resistances
    foster_err = 0.0
    for _, gg in graphs:
        prof = all_edge_resistances(gg)
        foster_err = max(foster_err, abs(prof.total - (gg.n - 1)))
    ok &= _check("triangle resistance", np.allclose(r_tri, 2.0 / 3.0, atol=1e-12),
                 f"edges -> {r_tri.tolist()}")
    ok &= _check("resistance sum", foster_err <= 1e-8,
                 f"max |sum - (n-1)| = {foster_err:.2e}")

    # Tree marginals on the 4-cycle: every edge appears in 3 of 4 trees.
    c4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    draws = 2000
    counts = np.zeros(4)
    for _ in range(draws):
        t = sample_ust(c4, int(rng.integers(2**32)))
        validate_spanning_tree(t)
        for e in t.edges:
            counts[c4.edge_index[e]] += 1
    freq = counts / draws
    se = math.sqrt(0.75 * 0.25 / draws)
    ok &= _check("tree marginals", bool(np.all(np.abs(freq - 0.75) <= 3 * se)),
                 f"4-cycle edge rates {np.round(freq, 3).tolist()} target 0.75")

    # Detection: null rate under the threshold, power at twice the
    # sufficient signal size.
    g = gen_torus(4, 2)
    delta = 0.05
    noise = NoiseModel(sigma=1.0)
    nulls = 200
    rej = 0
    zero = np.zeros(g.n)
    for i in range(nulls):
        rec = run_trial(g, TreeSource.ust(), zero, noise, delta,
                        int(rng.integers(2**32)))
        rej += rec.reject
    null_rate = rej / nulls
    limit = delta + 3 * math.sqrt(delta * (1 - delta) / nulls)
    ok &= _check("null rejection rate", null_rate <= limit,
                 f"{null_rate:.3f} <= {limit:.3f} over {nulls} trials")

    t = bfs_spanning_tree(g)
    hits = 0
    power_trials = 100
    for i in range(power_trials):
        x = gen_two_level_signal(g, 8, 1.0, rng)
        mu = 2.0 * snr_condition(
            "remark1", n=g.n, d=t.max_degree, delta=delta,
            rho=tree_cut_size(t, x.values),
        )
        rec = run_trial(
            g, TreeSource.fixed_tree(t), x.scale(mu), noise, delta,
            int(rng.integers(2**32)),
        )
        hits += rec.reject
    power = hits / power_trials
    ok &= _check("power at 2x sufficient size", power >= 0.9,
                 f"{power:.2f} over {power_trials} trials")

    thr = threshold(1.0, 1024, 0.05)
    direct = math.sqrt(2.0 * math.log(1024 / 0.05))
    ok &= _check("threshold formula", abs(thr - direct) < 1e-12,
                 f"threshold(1, 1024, 0.05) = {thr!r}")

    print("validate:", "all checks passed" if ok else "FAILURES above")
    return 0 if ok else 1


# =============================================================================
# Parser
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treewavelets",
        description="Spanning-tree wavelet detection of clustered graph signals.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a graph")
    fam = p_gen.add_subparsers(dest="family", required=True)
    p_torus = fam.add_parser("torus", help="d-dimensional torus lattice")
    p_torus.add_argument("--side", type=int, required=True)
    p_torus.add_argument("--dims", type=int, default=2)
    p_complete = fam.add_parser("complete", help="complete graph")
    p_complete.add_argument("--n", type=int, required=True)
    p_knn = fam.add_parser("knn", help="symmetrized k-nearest-neighbor graph")
    p_knn.add_argument("--n", type=int, required=True)
    p_knn.add_argument("--k", type=int, required=True)
    p_knn.add_argument("--dim", type=int, default=2)
    p_knn.add_argument("--seed", type=int, required=True)
    p_eps = fam.add_parser("epsilon", help="fixed-radius geometric graph")
    p_eps.add_argument("--n", type=int, required=True)
    p_eps.add_argument("--eps", type=float, required=True)
    p_eps.add_argument("--dim", type=int, default=2)
    p_eps.add_argument("--seed", type=int, required=True)
    for p in (p_torus, p_complete, p_knn, p_eps):
        p.add_argument("--out", required=True, help="edge-list output path")
    for p in (p_knn, p_eps):
        p.add_argument("--points", help="coordinate CSV path (default: alongside)")
    p_gen.set_defaults(func=_cmd_gen)

    p_basis = sub.add_parser("basis", help="build a wavelet basis and check it")
    p_basis.add_argument("--graph", required=True, help="edge-list input path")
    p_basis.add_argument("--tree", choices=["ust", "bfs"], default="ust")
    p_basis.add_argument("--seed", type=int, help="tree seed (required for ust)")
    p_basis.add_argument("--root", type=int, default=0, help="root for bfs trees")
    p_basis.add_argument("--out", help="basis CSV output path")
    p_basis.add_argument("--tree-out", help="spanning-tree edge-list output path")
    p_basis.set_defaults(func=_cmd_basis)

    p_res = sub.add_parser("resistance", help="exact effective resistances")
    p_res.add_argument("--graph", required=True, help="edge-list input path")
    p_res.add_argument("--out", required=True, help="resistance CSV output path")
    p_res.add_argument("--validate-foster", action="store_true",
                       help="check the resistance sum equals n - 1")
    p_res.add_argument("--validate-mtt", type=int, metavar="DRAWS",
                       help="check tree edge marginals over DRAWS samples")
    p_res.add_argument("--seed", type=int, help="seed for --validate-mtt")
    p_res.set_defaults(func=_cmd_resistance)

    p_exp = sub.add_parser("experiment", help="run an experiment config")
    src = p_exp.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="JSON config path")
    src.add_argument("--preset", choices=["paper-fig1", "paper-fig2", "concentration"],
                     help="built-in configuration")
    p_exp.add_argument("--out", required=True, help="output directory")
    p_exp.add_argument("--seed", type=int, help="master seed (overrides config)")
    p_exp.add_argument("--threads", type=int,
                       help="worker processes (default $TREEWAVELETS_THREADS or 1)")
    p_exp.set_defaults(func=_cmd_experiment)

    p_val = sub.add_parser("validate", help="fast invariant battery")
    p_val.add_argument("--seed", type=int, default=0)
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DisconnectedGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
