"""Command-line entry point: ``cyclic-concurrence <command> [options]``.

Exit status is 0 on success, 2 for invalid arguments and 3 when a numerical
validation check fails.  Errors are reported as one line on stderr.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import extremal as ex
from .concurrence import extract_x, pair_rdm, spacing_subconcurrences, subconcurrence
from .csx import BRANCHES, branches_from_amplitudes, subconcurrences_from_branches
from .errors import ValidationError
from .sampler import SampleSpec, random_amplitudes, scatter
from .states import CSState, relabel_batch
from .svg import plot_svg

EXIT_USAGE = 2
EXIT_VALIDATION = 3


class CheckFailed(Exception):
    def __init__(self, check, message):
        super().__init__(message)
        self.check = check


def _sig(obj):
    """Round every float to 12 significant digits for serialization."""
    if isinstance(obj, float):
        return obj if not math.isfinite(obj) else float(f"{obj:.12g}")
    if isinstance(obj, (np.floating, np.integer)):
        return _sig(obj.item())
    if isinstance(obj, np.ndarray):
        return _sig(obj.tolist())
    if isinstance(obj, dict):
        return {k: _sig(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sig(v) for v in obj]
    return obj


def _dumps(obj):
    return json.dumps(_sig(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _config(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out") and v is not None}
    cfg["version"] = __version__
    return cfg


def _cmd_sample(args):
    spec = SampleSpec(args.n, args.subspace, args.count, args.seed)
    data = scatter(spec, args.mode)
    cfg = _config(args)
    if args.format == "csv":
        _emit(data.to_csv(), args.out)
        if args.out not in (None, "-"):
            meta = dict(data.metadata(), config=cfg)
            Path(args.out).with_suffix(".meta.json").write_text(_dumps(meta))
    elif args.format == "json":
        _emit(_dumps({"config": cfg, "metadata": data.metadata(), "points": data.points}), args.out)
    else:
        curves = []
        if args.overlay and spec.n in (4, 5):
            curves = [ex.envelope(ex.region_curves(spec.n, args.resolution)).as_curve()]
        title = f"n={spec.n} {spec.subspace} {args.mode}, {spec.count} samples"
        _emit(plot_svg(data.points, curves, title, metadata=json.dumps(_sig(cfg))), args.out)


def _parse_coeffs(text):
    out = {}
    for item in text.split(","):
        name, _, value = item.partition("=")
        if not value:
            raise ValueError(f"malformed coefficient {item!r}; expected name=value")
        out[name.strip()] = complex(value.strip().replace("i", "j"))
    return out


def _cmd_eval(args):
    if args.state:
        state = CSState.from_json(Path(args.state).read_text(), normalize=args.normalize)
    elif args.coeffs:
        if args.n not in (4, 5):
            raise ValueError("--coeffs takes CSX coefficients, so --n must be 4 or 5")
        coeffs = _parse_coeffs(args.coeffs)
        if not args.normalize:
            norm = math.sqrt(sum(abs(v) ** 2 for v in coeffs.values()))
            if abs(norm - 1) > 1e-12:
                raise ValidationError(f"coefficient norm is {norm!r}; pass --normalize to rescale")
        state = ex.csx_state(args.n, coeffs)
    else:
        raise ValueError("eval needs --coeffs or --state")
    result = {"config": _config(args), "state": state.to_dict()}
    sub = {str(k): subconcurrence(pair_rdm(state, k)) for k in range(1, state.n // 2 + 1)}
    result["subconcurrence"] = sub
    result["concurrence"] = {k: max(0.0, v) for k, v in sub.items()}
    if state.n in (4, 5) and state.is_csx:
        b = branches_from_amplitudes(state.n, state.amplitudes)
        result["branches"] = dict(zip(BRANCHES, b.tolist()))
    _emit(_dumps(result), args.out)


def _cmd_maxima(args):
    found = [dict(ex.maximize_branch(b, args.n, grid=args.grid).to_dict(), branch=b)
             for b in ("1mu", "1nu")]
    _emit(_dumps({"config": _config(args), "maxima": found}), args.out)


def _cmd_thresholds(args):
    found = [t.to_dict() for t in ex.thresholds(args.n, args.resolution)]
    _emit(_dumps({"config": _config(args), "thresholds": found}), args.out)


def _cmd_boundary(args):
    curves = ex.region_curves(args.n, args.resolution)
    env = ex.envelope(curves)
    if args.format == "csv":
        _emit(ex.curves_to_csv(curves + [env.as_curve()]), args.out)
        return
    if args.format == "svg":
        title = f"n={args.n} CSX boundary candidates"
        _emit(plot_svg(None, curves + [env.as_curve()], title, metadata=json.dumps(_sig(_config(args)))), args.out)
        return
    result = {
        "config": _config(args),
        "curves": [
            {"source": c.source, "param_id": c.parametrization_id, "points": len(c)} for c in curves
        ],
        "envelope": {"s1_bin_right_edge": env.as_curve().points[:, 0], "s2_upper": env.as_curve().points[:, 1]},
        "thresholds": [t.to_dict() for t in ex.thresholds(args.n, curves=curves)],
    }
    if args.n == 4:
        result["eq49_comparison"] = ex.eq49_report(env=env)
    _emit(_dumps(result), args.out)


def _theorem1_pairs(n, k):
    if k is not None:
        return [(n, k)]
    return {4: [(4, 2)], 6: [(6, 2), (6, 3)]}.get(n, [])


def _cmd_theorem1(args):
    pairs = _theorem1_pairs(args.n, args.k)
    if not pairs:
        raise ValueError(f"no interleaved product is defined for n={args.n}; use n=4 or n=6")
    reports = []
    for n, k in pairs:
        r = ex.theorem1_report(n, k)
        reports.append({"n": n, "k": k, "residual": r.residual, "expected": r.expected,
                        "concurrence": {str(s): v for s, v in r.concurrences.items()}})
    _emit(_dumps({"config": _config(args), "reports": reports}), args.out)


def _cmd_theorem2(args):
    r = ex.theorem2_check(args.epsilon, args.trials, args.seed)
    _emit(_dumps({"config": _config(args), "max_concurrence": r.max_concurrence,
                  "max_subconcurrence": r.max_subconcurrence}), args.out)


def _verify_checks(seed):
    def oracle():
        worst = 0.0
        for n in (4, 5):
            amps = random_amplitudes(SampleSpec(n, "CSX", 2000, seed))
            closed = np.maximum(subconcurrences_from_branches(branches_from_amplitudes(n, amps)), 0)
            generic = np.maximum(spacing_subconcurrences(n, amps), 0)
            worst = max(worst, float(np.max(np.abs(closed - generic))))
        return worst <= 1e-9, f"max deviation {worst:.3g}"

    def x_form():
        amps = random_amplitudes(SampleSpec(5, "CSX", 200, seed))
        for a in amps:
            state = CSState(5, a)
            for k in (1, 2):
                extract_x(pair_rdm(state, k))
        return True, "200 states, spacings 1 and 2"

    def relabel_symmetry():
        amps = random_amplitudes(SampleSpec(5, "CS", 2000, seed))
        p = spacing_subconcurrences(5, amps)
        q = spacing_subconcurrences(5, relabel_batch(5, amps, 2))
        worst = float(np.max(np.abs(p[:, ::-1] - q)))
        return worst <= 1e-10, f"max deviation {worst:.3g}"

    def theorem1():
        worst = 0.0
        for n, k in ((4, 2), (6, 2), (6, 3)):
            r = ex.theorem1_report(n, k)
            worst = max(worst, abs(r.concurrences[k] - r.expected))
            if any(v != 0.0 for s, v in r.concurrences.items() if s != k):
                return False, f"nonzero off-spacing concurrence for n={n}, k={k}"
        return worst <= 1e-10, f"max deviation {worst:.3g}"

    def theorem2():
        r = ex.theorem2_check(1e-3, 1000, seed)
        return r.max_subconcurrence < 0, f"max subconcurrence {r.max_subconcurrence:.6g}"

    def thresholds4():
        th = ex.thresholds(4, 256)
        worst = max(abs(t.value - t.closed_form) for t in th)
        return worst <= 1e-6, f"max deviation {worst:.3g}"

    def containment():
        worst = -np.inf
        for n in (4, 5):
            env = ex.envelope(ex.region_curves(n, 256))
            p = scatter(SampleSpec(n, "CSX", 5000, seed)).points
            worst = max(worst, float(np.max(p[:, 1] - env.upper_at(p[:, 0]))),
                        float(np.max(p[:, 0] - env.right_at(p[:, 1]))))
        return worst <= 1e-6, f"largest excess over envelope {worst:.3g}"

    return [
        ("oracle-equivalence", oracle),
        ("csx-x-form", x_form),
        ("relabel-symmetry-5", relabel_symmetry),
        ("theorem1", theorem1),
        ("theorem2", theorem2),
        ("thresholds-4", thresholds4),
        ("envelope-containment", containment),
    ]


def _cmd_verify(args):
    failed = []
    lines = []
    for name, check in _verify_checks(args.seed):
        try:
            ok, detail = check()
        except ValidationError as err:
            ok, detail = False, str(err)
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        print(lines[-1], flush=True)
        if not ok:
            failed.append(name)
    if args.out not in (None, "-"):
        Path(args.out).write_text("\n".join(lines) + "\n")
    if failed:
        raise CheckFailed(failed[0], f"{len(failed)} check(s) failed: {', '.join(failed)}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cyclic-concurrence",
        description="Pairwise concurrence of cyclically symmetric qubit states.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")

    def add(name, func, help_text, n_choices=(4, 5), n_default=4):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if n_choices:
            p.add_argument("--n", type=int, choices=n_choices, default=n_default)
        p.set_defaults(func=func)
        return p

    p = add("sample", _cmd_sample, "sample random states and write (sC1, sC2) points")
    p.add_argument("--subspace", type=str.upper, choices=["CS", "CSX"], default="CS")
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["subconcurrence", "concurrence"], default="subconcurrence")
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.add_argument("--overlay", action="store_true", help="draw the traced CSX envelope (svg only)")
    p.add_argument("--resolution", type=int, default=512)

    p = add("eval", _cmd_eval, "evaluate subconcurrences of one state", n_choices=(2, 3, 4, 5, 6))
    p.add_argument("--coeffs", help="CSX coefficients, e.g. a=0.5,c=0.5,d=0.7071,f=0.5")
    p.add_argument("--state", help="CS state JSON file")
    p.add_argument("--normalize", action="store_true")

    p = add("maxima", _cmd_maxima, "maximize the spacing-1 branches over real CSX states")
    p.add_argument("--grid", type=int, default=200)

    p = add("thresholds", _cmd_thresholds, "traced monogamy thresholds")
    p.add_argument("--resolution", type=int, default=512)

    p = add("boundary", _cmd_boundary, "trace candidate boundary curves and their envelope")
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--format", choices=["csv", "json", "svg"], default="json")

    p = add("theorem1", _cmd_theorem1, "check the interleaved product construction",
            n_choices=(4, 6), n_default=6)
    p.add_argument("--k", type=int)

    p = add("theorem2", _cmd_theorem2, "perturb the 4-qubit spacing-2 product state", n_choices=None)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    p = add("verify", _cmd_verify, "run oracle-equivalence and invariant checks", n_choices=None)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CheckFailed as err:
        print(f"error: validation failed [{err.check}]: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as err:
        print(f"error: validation failed [{args.command}]: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, OSError) as err:
        print(f"error: usage: {err}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
