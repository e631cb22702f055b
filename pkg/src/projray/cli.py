"""Command-line entry point: ``projray <command> --input in.json [--output out.json]``.

Exit status is 0 on success, 2 when a numeric precondition fails (the
report is then an error object ``{code, message, context}``) and 1 on I/O
or parse errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

import numpy as np

from . import jsonio
from .components import indecomposable_components
from .continuity import (
    BlockRepresentation,
    adversarial_null_sequence,
    block_to_json,
    component_of,
    default_sequences,
    continuous_ray_components,
    orbit_continuity_probe,
    overall_verdict,
    parse_block,
    tame_null_sequence,
)
from .covariance import (
    CovariantPair,
    borchers_arveson_split,
    commutant,
    generate_star_algebra,
    irreducibility_descent_check,
    minimal_energy_shift,
    spectral_rigidity_check,
    verify_covariant_pair,
)
from .errors import ProjrayError
from .geometry import (
    TOL_ORTH,
    chordal_distance,
    dyadic_chain,
    midpoint,
    phase_normalized_section,
    projector_distance,
    riemannian_distance,
)
from .linalg import Ray
from .separation import find_unresolved_pair, separates_ball
from .sweeps import DEFAULT_SUITES, run_sweep


class InputError(Exception):
    """Input that does not follow the JSON conventions."""


def _field(data, *names):
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    for name in names:
        if name in data:
            return data[name]
    raise InputError(f"missing field {names[0]!r}")


def _ray(data, name) -> Ray:
    return Ray(jsonio.parse_vector(_field(data, name)))


def _vectors(data) -> np.ndarray:
    raw = data if isinstance(data, list) else _field(data, "vectors", "frame", "rays")
    if not raw:
        raise InputError("need at least one vector")
    vecs = [jsonio.parse_vector(v) for v in raw]
    if len({v.shape for v in vecs}) != 1:
        raise InputError("vectors have different lengths")
    return np.stack(vecs)


def _matrices(raw) -> list[np.ndarray]:
    if not isinstance(raw, list) or not raw:
        raise InputError("expected a nonempty list of matrices")
    return [jsonio.parse_matrix(m) for m in raw]


def _algebra(data):
    """The *-algebra named by ``algebra`` (a spanning set) or ``generators``."""
    mats = _matrices(_field(data, "algebra", "generators"))
    return generate_star_algebra(mats)


def _pair_json(pair) -> dict:
    return {"w1": pair.w1.rep, "w2": pair.w2.rep, "certificate": pair.certificate,
            "ball_distance": pair.distance}


# --- commands ---------------------------------------------------------------

def cmd_metric(data, args):
    x, y = _ray(data, "x"), _ray(data, "y")
    return {"chordal": chordal_distance(x, y), "riemannian": riemannian_distance(x, y),
            "projector": projector_distance(x, y)}


def cmd_midpoint(data, args):
    x, y = _ray(data, "x"), _ray(data, "y")
    m = midpoint(x, y, args.tol_orth)
    return {"midpoint": m.rep, "d_x_mid": riemannian_distance(x, m),
            "d_mid_y": riemannian_distance(m, y), "d_x_y": riemannian_distance(x, y)}


def cmd_chain(data, args):
    x, y = _ray(data, "x"), _ray(data, "y")
    depth = int(data.get("depth", 3))
    chain = dyadic_chain(x, y, depth, args.tol_orth)
    steps = 2 ** depth
    return {"depth": depth, "parameters": [k / steps for k in range(steps + 1)],
            "rays": [r.rep for r in chain]}


def cmd_section(data, args):
    g = jsonio.parse_matrix(_field(data, "g"))
    v0 = jsonio.parse_vector(_field(data, "v0"))
    return {"section": phase_normalized_section(g, v0)}


def cmd_separation_test(data, args):
    E = _vectors(data)
    rep = separates_ball(E, seed=args.seed)
    out = {"rank": rep.projector_rank, "full_rank": rep.full_rank,
           "separates_ball": rep.separates_ball, "status": rep.status}
    if rep.witness is not None:
        out["witness"] = _pair_json(rep.witness)
        out["h_gap"] = rep.witness.h_gap(E)
    elif rep.certificate is not None:
        out["certificate"] = rep.certificate
        out["details"] = rep.details
    return out


def cmd_counterexample(data, args):
    E = _vectors(data)
    pair = find_unresolved_pair(E, seed=args.seed)
    if pair is None:
        return {"status": "separates", "witness": None}
    return {"status": "witness", "witness": _pair_json(pair), "h_gap": pair.h_gap(E)}


def cmd_components(data, args):
    dec = indecomposable_components(_vectors(data), args.tol_orth)
    return {
        "partition": [list(c.indices) for c in dec.components],
        "bases": [c.basis.T for c in dec.components],
        "min_coupling": dec.min_coupling,
        "max_cross_overlap": dec.max_cross_overlap,
        "subspace_cross_overlap": dec.subspace_cross_overlap(),
    }


def cmd_ba_split(data, args):
    H = jsonio.parse_matrix(_field(data, "H"))
    M = _algebra(data)
    res = borchers_arveson_split(H, M)
    return {"A": res.A, "B": res.B, "mu0": res.mu0, "algebra_dim": M.dim,
            "residuals": res.residuals(H, M, commutant(M))}


def cmd_min_energy(data, args):
    mu0, H0 = minimal_energy_shift(jsonio.parse_matrix(_field(data, "H")))
    return {"mu0": mu0, "H_shifted": H0, "lambda_min": float(np.linalg.eigvalsh(H0)[0])}


def cmd_commutant(data, args):
    M = _algebra(data)
    C = commutant(M)
    return {"algebra_dim": M.dim, "commutant_dim": C.dim, "irreducible": C.dim == 1,
            "basis": list(C.basis)}


def cmd_descent_check(data, args):
    pair = CovariantPair(_matrices(_field(data, "generators")),
                         jsonio.parse_matrix(_field(data, "H")))
    out = irreducibility_descent_check(pair)
    out["covariance"] = verify_covariant_pair(pair)
    return out


def cmd_rigidity_check(data, args):
    return spectral_rigidity_check(jsonio.parse_matrix(_field(data, "X")),
                                   jsonio.parse_matrix(_field(data, "Y")))


def cmd_continuity_probe(data, args):
    blocks = _field(data, "blocks")
    if not isinstance(blocks, list) or not blocks:
        raise InputError("blocks must be a nonempty list")
    rep = BlockRepresentation([parse_block(b) for b in blocks])
    v = jsonio.parse_vector(_field(data, "ray"))
    params = data.get("sequence", {})
    length = int(params.get("length", 12))
    if "twist" in params:
        seqs = [tame_null_sequence(min(length, 10)),
                adversarial_null_sequence(length, Fraction(str(params["twist"])))]
    else:
        seqs = default_sequences(rep, length)
    verdicts = orbit_continuity_probe(rep, v, seqs, float(params.get("tol", 1e-3)))
    comps = continuous_ray_components(rep)
    return {
        "blocks": [block_to_json(b) for b in rep.blocks],
        "verdict": overall_verdict(verdicts),
        "sequences": [{"label": p.label, "verdict": p.verdict, "tail_sup": p.tail_sup,
                       "tail_min": p.tail_min, "gaps": list(p.gaps)} for p in verdicts],
        "components": [Q.T for Q in comps],
        "ray_component": component_of(comps, v),
    }


def cmd_sweep(data, args):
    data = data or {}
    suites = data.get("suites", list(DEFAULT_SUITES))
    seed = args.seed if args.seed_given else int(data.get("seed", 0))
    trials = args.trials if args.trials is not None else data.get("trials")
    dims = args.dims if args.dims is not None else data.get("dims")
    return run_sweep(suites, seed=seed, trials=trials, dims=dims)


COMMANDS = {
    "metric": cmd_metric,
    "midpoint": cmd_midpoint,
    "chain": cmd_chain,
    "section": cmd_section,
    "separation-test": cmd_separation_test,
    "counterexample": cmd_counterexample,
    "components": cmd_components,
    "ba-split": cmd_ba_split,
    "min-energy": cmd_min_energy,
    "commutant": cmd_commutant,
    "descent-check": cmd_descent_check,
    "rigidity-check": cmd_rigidity_check,
    "continuity-probe": cmd_continuity_probe,
    "sweep": cmd_sweep,
}


def _dims(text: str) -> list[int]:
    try:
        dims = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from exc
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError("dimensions must be positive integers")
    return dims


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="projray", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", "-i", help="input JSON file ('-' for stdin)")
    p.add_argument("--output", "-o", help="report path (default stdout)")
    p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p.add_argument("--tol-orth", type=float, default=TOL_ORTH,
                   help="overlap below which rays count as orthogonal")
    p.add_argument("--trials", type=int, default=None, help="trials per sweep suite")
    p.add_argument("--dims", type=_dims, default=None, help="comma-separated dimensions for sweep")
    return p


def _read_input(path):
    if path is None:
        return None
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return json.loads(text)


def _emit(report, path) -> None:
    text = jsonio.dumps(report)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("PROJRAY_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = 0
    try:
        data = _read_input(args.input)
        if data is None and args.command != "sweep":
            raise InputError(f"{args.command} needs --input")
        report = COMMANDS[args.command](data, args)
    except ProjrayError as exc:
        err = exc.to_dict()
        if getattr(exc, "certificate", None) is not None:
            err["context"]["certificate"] = exc.certificate
        try:
            _emit(err, args.output)
        except OSError as io_exc:
            print(f"projray: {io_exc}", file=sys.stderr)
            return 1
        return 2
    except (OSError, json.JSONDecodeError, InputError, KeyError, TypeError, ValueError) as exc:
        print(f"projray: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    try:
        _emit(report, args.output)
    except OSError as exc:
        print(f"projray: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
