"""Command-line front end.

Every subcommand loads a manifold spec (or the built-in example), runs a
computation or verification at a point (--at) or over a seeded sample of
admissible points (--sample/--seed), and emits a human-readable or JSON
report. Exit codes: 0 all verdicts pass, 1 a verification verdict
failed, 2 usage or parse error, 3 metric positivity or domain violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import __version__
from .curvature import (
    COMPONENT_INDEX,
    check_equal_sectional_curvatures,
    check_q_invariance,
    check_sectional_combination_formula,
    check_sectional_difference_formula,
    christoffel_from_metric,
    closed_form_from_metric,
    is_flat,
    riemann_from_metric,
    sectional_curvature,
)
from .errors import (
    CirculantError,
    ConstructionFailed,
    DegeneratePlane,
    DomainViolation,
    EvalDomainError,
    ExprSyntaxError,
    IdentityRNotSatisfied,
    NotAQBasis,
    PositivityViolation,
    SamplingExhausted,
    SpecFileError,
)
from .expressions import eval_value
from .metric import check_positive_definite, inner, metric_at
from .parallelism import (
    christoffel_equalities_from_table,
    nabla_q_from_table,
    parallel_residual_from_metric,
)
from .qstructure import (
    apply_q,
    construct_orthogonal_vector,
    induces_q_basis,
    q_basis_angles,
    q_basis_defect,
)
from .sampling import sample_admissible_points
from .specfile import builtin_example, example_diagonal_value, load_spec


class UsageError(Exception):
    """Bad command-line input (maps to exit code 2)."""


POINT_COMMANDS = (
    "validate",
    "christoffel",
    "riemann",
    "closed-form",
    "compare-curvature",
    "sectional",
    "angles",
    "qbasis",
    "orthobasis",
    "check-identity",
    "check-parallel",
    "nabla-q",
    "verify-theorems",
    "example-m5",
)
SAMPLED_OK = {
    "validate",
    "riemann",
    "closed-form",
    "compare-curvature",
    "orthobasis",
    "check-identity",
    "check-parallel",
    "nabla-q",
    "verify-theorems",
    "example-m5",
}

DEFAULT_TOL = {
    "compare-curvature": 1e-7,
    "verify-theorems": 1e-8,
}


def _parse_triple(text: str, what: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"{what} must be three comma-separated numbers, got {text!r}")
    try:
        return np.array([float(v) for v in parts])
    except ValueError as exc:
        raise UsageError(f"bad number in {what} {text!r}: {exc}") from exc


def _parse_box(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--box needs three low:high intervals, got {text!r}")
    box = []
    for part in parts:
        bounds = part.split(":")
        if len(bounds) != 2:
            raise UsageError(f"interval must be low:high, got {part!r}")
        try:
            lo, hi = float(bounds[0]), float(bounds[1])
        except ValueError as exc:
            raise UsageError(f"bad bound in {part!r}: {exc}") from exc
        if not lo < hi:
            raise UsageError(f"empty interval {part!r}")
        box.append((lo, hi))
    return tuple(box)


def _py(obj):
    """Convert report values to builtin types for deterministic JSON."""
    if isinstance(obj, dict):
        return {k: _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_py(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _verdict(passed, residual, tol):
    return {"pass": bool(passed), "residual": float(residual), "tol": float(tol)}


def _vector_echo(args):
    if args.vector is None:
        return None
    return list(_parse_triple(args.vector, "--vector"))


def _all_pass(verdicts) -> bool:
    return all(v["pass"] for v in verdicts.values())


# -- command cores ------------------------------------------------------------
# Each core maps (spec, point, args) to (results, verdicts).


def _metric(spec, p, args):
    return metric_at(spec.metric, p, allow_weak=args.allow_weak_metric)


def _cmd_validate(spec, p, args):
    A = eval_value(spec.metric.A, p)
    B = eval_value(spec.metric.B, p)
    violations = []
    if not A > B > 0.0:
        violations.append(f"A > B > 0 fails (A={A!r}, B={B!r})")
    constraints_ok = True
    for c in spec.metric.domain_constraints:
        val = eval_value(c, p)
        if not val > 0.0:
            constraints_ok = False
            violations.append(f"constraint '{c.source}' is {val!r} <= 0")
    admissible = not violations
    pd = check_positive_definite(A, B)
    results = {
        "A": A,
        "B": B,
        "D": (A - B) * (A + 2 * B),
        "g": None,
        "minors": list(pd.minors),
        "violations": violations,
    }
    inv_residual = None
    usable = admissible or (constraints_ok and args.allow_weak_metric and pd.positive_definite)
    if usable:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            M = metric_at(spec.metric, p, allow_weak=True)
        results["g"] = M.g
        inv_residual = float(np.max(np.abs(M.g @ M.g_inv - np.eye(3))))
    verdicts = {
        "admissible": _verdict(admissible, 0.0 if admissible else 1.0, 0.5),
        "positive_definite": _verdict(pd.positive_definite, min(pd.minors), 0.0),
        "inverse_consistent": _verdict(
            inv_residual is not None and inv_residual <= 1e-12,
            1.0 if inv_residual is None else inv_residual,
            1e-12,
        ),
    }
    return results, verdicts


def _cmd_christoffel(spec, p, args):
    M = _metric(spec, p, args)
    ct = christoffel_from_metric(M)
    results = {
        "gamma": ct.gamma,
        "dgamma_max_abs": float(np.max(np.abs(ct.dgamma))),
    }
    verdicts = {}
    if args.fd_check:
        h = 1e-5
        fd = np.empty((3, 3, 3, 3))
        for k in range(3):
            e = np.zeros(3)
            e[k] = h
            gp = christoffel_from_metric(_metric(spec, np.asarray(p) + e, args)).gamma
            gm = christoffel_from_metric(_metric(spec, np.asarray(p) - e, args)).gamma
            fd[k] = (gp - gm) / (2 * h)
        residual = float(np.max(np.abs(fd - ct.dgamma)))
        verdicts["fd_consistent"] = _verdict(residual <= 1e-5, residual, 1e-5)
    return results, verdicts


def _symmetry_verdicts(low, tol):
    scale = tol * (1.0 + float(np.max(np.abs(low))))
    anti_ij = float(np.max(np.abs(low + np.einsum("ijkh->jikh", low))))
    anti_kh = float(np.max(np.abs(low + np.einsum("ijkh->ijhk", low))))
    pair = float(np.max(np.abs(low - np.einsum("ijkh->khij", low))))
    bianchi = float(
        np.max(np.abs(low + np.einsum("ijkh->jkih", low) + np.einsum("ijkh->kijh", low)))
    )
    return {
        "antisymmetry_first_pair": _verdict(anti_ij <= scale, anti_ij, scale),
        "antisymmetry_second_pair": _verdict(anti_kh <= scale, anti_kh, scale),
        "pair_symmetry": _verdict(pair <= scale, pair, scale),
        "first_bianchi": _verdict(bianchi <= scale, bianchi, scale),
    }


def _components(low):
    return {name: float(low[i, j, k, h]) for name, (i, j, k, h) in COMPONENT_INDEX.items()}


def _cmd_riemann(spec, p, args):
    tol = args.tol or 1e-9
    M = _metric(spec, p, args)
    R = riemann_from_metric(M)
    results = {"components": _components(R.low)}
    return results, _symmetry_verdicts(R.low, tol)


def _cmd_closed_form(spec, p, args):
    M = _metric(spec, p, args)
    cf = closed_form_from_metric(M)
    return {"components": cf.as_dict()}, {}


def _cmd_compare_curvature(spec, p, args):
    tol = args.tol or DEFAULT_TOL["compare-curvature"]
    M = _metric(spec, p, args)
    R = riemann_from_metric(M)
    cf = closed_form_from_metric(M).as_dict()
    numeric = _components(R.low)
    scale = max(abs(v) for v in numeric.values())
    rel = {
        name: abs(cf[name] - numeric[name]) / (1.0 + scale) for name in COMPONENT_INDEX
    }
    worst = max(rel.values())
    results = {"numeric": numeric, "closed_form": cf, "relative_difference": rel}
    verdicts = {"closed_form_matches_numeric": _verdict(worst <= tol, worst, tol)}
    return results, verdicts


def _cmd_sectional(spec, p, args):
    if args.x is None or args.y is None:
        raise UsageError("sectional needs --x and --y plane vectors")
    x = _parse_triple(args.x, "--x")
    y = _parse_triple(args.y, "--y")
    M = _metric(spec, p, args)
    R = riemann_from_metric(M)
    mu = sectional_curvature(M, R, x, y)
    gram = inner(M, x, x) * inner(M, y, y) - inner(M, x, y) ** 2
    return {"mu": mu, "gram_determinant": gram}, {}


def _cmd_angles(spec, p, args):
    if args.vector is None:
        raise UsageError("angles needs --vector")
    x = _parse_triple(args.vector, "--vector")
    M = _metric(spec, p, args)
    rep = q_basis_angles(M, x)
    chain = max(
        abs(rep.cos_phi_x_qx - rep.cos_theta_qx_q2x),
        abs(rep.cos_phi_x_qx + rep.cos_phi_x_q2x),
    )
    results = {
        "a": rep.a,
        "b": rep.b,
        "cos_phi_x_qx": rep.cos_phi_x_qx,
        "cos_phi_x_q2x": rep.cos_phi_x_q2x,
        "cos_theta_qx_q2x": rep.cos_theta_qx_q2x,
        "angles_rad": list(rep.angles),
    }
    return results, {"cosine_chain": _verdict(chain <= 1e-12, chain, 1e-12)}


def _cmd_qbasis(spec, p, args):
    if args.vector is None:
        raise UsageError("qbasis needs --vector")
    x = _parse_triple(args.vector, "--vector")
    defect = q_basis_defect(x)
    ok = induces_q_basis(x)
    scale = 1e-10 * max(1.0, float(np.linalg.norm(x)) ** 3)
    results = {"cubic": defect, "threshold": scale}
    return results, {"induces_q_basis": _verdict(ok, abs(defect), scale)}


def _cmd_orthobasis(spec, p, args):
    tol = args.tol or 1e-9
    M = _metric(spec, p, args)
    x = construct_orthogonal_vector(M.A, M.B)
    qx = apply_q(x)
    q2x = apply_q(qx)
    gxx = inner(M, x, x)
    pairs = {
        "g_x_qx": inner(M, x, qx),
        "g_x_q2x": inner(M, x, q2x),
        "g_qx_q2x": inner(M, qx, q2x),
    }
    worst = max(abs(v) for v in pairs.values())
    results = {"vector": x, "norm_sq": gxx, **pairs}
    verdicts = {
        "orthogonal": _verdict(worst <= tol * gxx, worst, tol * gxx),
        "induces_q_basis": _verdict(induces_q_basis(x), abs(q_basis_defect(x)), 0.0),
    }
    return results, verdicts


def _cmd_check_identity(spec, p, args):
    tol = args.tol or 1e-9
    M = _metric(spec, p, args)
    R = riemann_from_metric(M)
    chk = check_q_invariance(R, tol=tol, seed=args.seed or 0)
    threshold = tol * (1.0 + chk.scale)
    results = {
        "diagonal_residual": chk.diagonal_residual,
        "cross_residual": chk.cross_residual,
        "sampled_residual": chk.sampled_residual,
        "scale": chk.scale,
    }
    verdicts = {
        "identity": _verdict(chk.passed, max(chk.diagonal_residual, chk.cross_residual), threshold),
        "sampled_identity": _verdict(chk.sampled_passed, chk.sampled_residual, threshold),
        "routes_agree": _verdict(chk.passed == chk.sampled_passed, 0.0 if chk.passed == chk.sampled_passed else 1.0, 0.5),
    }
    return results, verdicts


def _cmd_check_parallel(spec, p, args):
    tol = args.tol or 1e-9
    M = _metric(spec, p, args)
    ct = christoffel_from_metric(M)
    grad_res = parallel_residual_from_metric(M)
    grad_norm = float(np.max(np.abs(grad_res)))
    gamma_res = christoffel_equalities_from_table(ct)
    nq_max = nabla_q_from_table(ct).max_abs
    results = {
        "gradient_residual": grad_res,
        "gradient_residual_max": grad_norm,
        "christoffel_equalities_residual": gamma_res,
        "nabla_q_max": nq_max,
    }
    agree = (grad_norm <= tol) == (nq_max <= tol)
    verdicts = {
        "parallel": _verdict(max(grad_norm, nq_max, gamma_res) <= tol, max(grad_norm, nq_max, gamma_res), tol),
        "routes_agree": _verdict(agree, 0.0 if agree else 1.0, 0.5),
    }
    return results, verdicts


def _cmd_nabla_q(spec, p, args):
    M = _metric(spec, p, args)
    nq = nabla_q_from_table(christoffel_from_metric(M))
    return {"nabla_q": nq.nq, "max_abs": nq.max_abs}, {}


def _random_q_basis_vectors(rng, count):
    out = []
    for _ in range(100 * count):
        v = rng.standard_normal(3)
        if induces_q_basis(v):
            out.append(v)
            if len(out) == count:
                return out
    raise ConstructionFailed("could not draw q-basis vectors")


def _cmd_verify_theorems(spec, p, args):
    tol = args.tol or DEFAULT_TOL["verify-theorems"]
    if args.vector is not None:
        vectors = [_parse_triple(args.vector, "--vector")]
    else:
        rng = np.random.default_rng([args.seed or 0, 7])
        vectors = _random_q_basis_vectors(rng, args.n_vectors)
    worst = {"sectional_difference": 0.0, "sectional_combination": 0.0, "equal_sectional": 0.0}
    for u in vectors:
        d = check_sectional_difference_formula(spec.metric, p, u)
        worst["sectional_difference"] = max(
            worst["sectional_difference"], d.residual / (1.0 + abs(d.lhs))
        )
        c = check_sectional_combination_formula(spec.metric, p, u)
        worst["sectional_combination"] = max(
            worst["sectional_combination"], c.residual / (1.0 + abs(c.lhs))
        )
        e = check_equal_sectional_curvatures(spec.metric, p, u)
        r1, r2 = e.residuals
        worst["equal_sectional"] = max(
            worst["equal_sectional"], max(r1, r2) / (1.0 + abs(e.mu_u_qu))
        )
    results = {"n_vectors": len(vectors), "max_scaled_residuals": dict(worst)}
    verdicts = {name: _verdict(val <= tol, val, tol) for name, val in worst.items()}
    return results, verdicts


def _cmd_example_m5(spec, p, args):
    tol = args.tol or 1e-9
    M = _metric(spec, p, args)
    R = riemann_from_metric(M)
    comps = _components(R.low)
    cf = closed_form_from_metric(M).as_dict()
    formula = example_diagonal_value(p)
    nq_max = nabla_q_from_table(christoffel_from_metric(M)).max_abs
    chk = check_q_invariance(R, tol=tol)

    diag = [comps[n] for n in ("R1212", "R1313", "R2323")]
    diag_residual = max(abs(v - formula) / abs(formula) for v in diag)
    closed_diag_residual = max(
        abs(cf[n] - comps[n]) / (1.0 + abs(comps[n])) for n in ("R1212", "R1313", "R2323")
    )
    cross = max(abs(comps[n]) for n in ("R1213", "R1323", "R1223"))
    flat_scale = float(np.max(np.abs(R.low)))
    results = {
        "A": M.A,
        "B": M.B,
        "D": M.D,
        "components": comps,
        "closed_form": cf,
        "diagonal_formula_value": formula,
        "nabla_q_max": nq_max,
    }
    identity_threshold = tol * (1.0 + chk.scale)
    verdicts = {
        "diagonal_matches_formula": _verdict(diag_residual <= 1e-8, diag_residual, 1e-8),
        "closed_form_diagonal_match": _verdict(closed_diag_residual <= 1e-7, closed_diag_residual, 1e-7),
        "cross_components_zero": _verdict(cross < 1e-10, cross, 1e-10),
        "identity_q_invariance": _verdict(
            chk.passed, max(chk.diagonal_residual, chk.cross_residual), identity_threshold
        ),
        "not_parallel": _verdict(nq_max > 1e-6, nq_max, 1e-6),
        "not_flat": _verdict(not is_flat(R, 1e-9), flat_scale, 1e-9),
    }
    return results, verdicts


_CORES = {
    "validate": _cmd_validate,
    "christoffel": _cmd_christoffel,
    "riemann": _cmd_riemann,
    "closed-form": _cmd_closed_form,
    "compare-curvature": _cmd_compare_curvature,
    "sectional": _cmd_sectional,
    "angles": _cmd_angles,
    "qbasis": _cmd_qbasis,
    "orthobasis": _cmd_orthobasis,
    "check-identity": _cmd_check_identity,
    "check-parallel": _cmd_check_parallel,
    "nabla-q": _cmd_nabla_q,
    "verify-theorems": _cmd_verify_theorems,
    "example-m5": _cmd_example_m5,
}


# -- dispatch -----------------------------------------------------------------


def _load_spec(args):
    if args.command == "example-m5":
        if args.spec is not None:
            raise UsageError("example-m5 uses the built-in manifold; drop --spec")
        return builtin_example()
    if args.command == "qbasis" and args.spec is None:
        return builtin_example()  # metric is irrelevant for the cubic criterion
    if args.spec is None:
        raise UsageError(f"{args.command} needs --spec FILE")
    return load_spec(args.spec)


def _run(args):
    spec = _load_spec(args)
    core = _CORES[args.command]

    needs_point = args.command not in ("qbasis",)
    sampled = args.sample is not None

    if sampled:
        if args.command not in SAMPLED_OK:
            raise UsageError(f"{args.command} does not support --sample")
        if args.at is not None:
            raise UsageError("give either --at or --sample, not both")
        box = _parse_box(args.box) if args.box else spec.sample_box
        if box is None:
            raise UsageError("sampling needs [sample] in the spec file or --box")
        seed = args.seed if args.seed is not None else 0
        points = sample_admissible_points(spec.metric, box, args.sample, seed)
        pass_counts: dict[str, int] = {}
        max_residuals: dict[str, float] = {}
        tols: dict[str, float] = {}
        for point in points:
            _, verdicts = core(spec, point, args)
            for name, v in verdicts.items():
                pass_counts[name] = pass_counts.get(name, 0) + (1 if v["pass"] else 0)
                max_residuals[name] = max(max_residuals.get(name, 0.0), v["residual"])
                tols[name] = max(tols.get(name, 0.0), v["tol"])
        n = len(points)
        results = {"points_accepted": n, "pass_counts": pass_counts, "max_residuals": max_residuals}
        verdicts = {
            name: _verdict(pass_counts[name] == n, max_residuals[name], tols[name])
            for name in pass_counts
        }
        inputs = {"box": [list(b) for b in box], "point": None, "vector": _vector_echo(args)}
        meta = {"seed": seed, "n": n}
    else:
        if args.at is not None:
            point = _parse_triple(args.at, "--at")
        elif needs_point:
            raise UsageError(f"{args.command} needs --at X1,X2,X3 (or --sample N)")
        else:
            point = None
        results, verdicts = core(spec, point, args)
        inputs = {
            "box": None,
            "point": None if point is None else list(point),
            "vector": _vector_echo(args),
        }
        meta = {"seed": args.seed, "n": 1}

    report = {
        "command": args.command,
        "spec_name": spec.name,
        "inputs": inputs,
        "results": results,
        "verdicts": verdicts,
        "meta": meta,
    }
    return _py(report)


def _print_report(report, as_json: bool):
    if as_json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
        return
    print(f"command: {report['command']}   spec: {report['spec_name']}")
    for key, value in report["inputs"].items():
        if value is not None:
            print(f"  {key} = {value}")
    for key, value in report["results"].items():
        if isinstance(value, dict):
            print(f"  {key}:")
            for k2, v2 in value.items():
                print(f"    {k2} = {v2}")
        else:
            print(f"  {key} = {value}")
    for name, v in report["verdicts"].items():
        tag = "PASS" if v["pass"] else "FAIL"
        print(f"[{tag}] {name}  residual={v['residual']:.3e}  tol={v['tol']:.3e}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circulant3",
        description=(
            "Numerical tensor calculus on 3D Riemannian manifolds with a "
            "circulant metric (diagonal A, off-diagonal B) and the cubic "
            "structure q with q^3 = -id. Expressions use coordinates x1, x2, "
            "x3; note -x1^2 parses as -(x1^2)."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in POINT_COMMANDS:
        p = sub.add_parser(name, help=f"run {name}")
        p.add_argument("--spec", help="manifold spec file (TOML subset)")
        p.add_argument("--at", help="evaluation point X1,X2,X3")
        p.add_argument("--sample", type=int, help="sample N admissible points instead of --at")
        p.add_argument("--seed", type=int, help="PRNG seed for sampling (default 0)")
        p.add_argument("--box", help="sampling box lo:hi,lo:hi,lo:hi (overrides spec)")
        p.add_argument("--tol", type=float, help="verdict tolerance override")
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument(
            "--allow-weak-metric",
            action="store_true",
            help="warn instead of failing when A > B > 0 fails but g is positive definite",
        )
        p.add_argument("--vector", help="vector X1,X2,X3 (angles, qbasis, verify-theorems)")
        if name == "sectional":
            p.add_argument("--x", help="first plane vector")
            p.add_argument("--y", help="second plane vector")
        if name == "christoffel":
            p.add_argument("--fd-check", action="store_true", help="cross-check dGamma by finite differences")
        if name == "verify-theorems":
            p.add_argument("--n-vectors", type=int, default=5, help="random q-basis vectors per point")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        report = _run(args)
    except (UsageError, SpecFileError, ExprSyntaxError, NotAQBasis, DegeneratePlane,
            ConstructionFailed, OSError) as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return 2
    except (PositivityViolation, DomainViolation, EvalDomainError, SamplingExhausted) as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return 3
    except IdentityRNotSatisfied as exc:
        print(
            f"error ({args.command}): {exc}\n"
            "the requested check assumes the curvature q-invariance identity; "
            "it does not hold at this point, so the verification is refused",
            file=sys.stderr,
        )
        return 1
    except CirculantError as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return 2
    _print_report(report, args.json)
    if _all_pass(report["verdicts"]):
        return 0
    if args.command == "validate" and not report["verdicts"]["admissible"]["pass"]:
        return 3  # positivity/domain violation, reported instead of raised
    return 1


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
