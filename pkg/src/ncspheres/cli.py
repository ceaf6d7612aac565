"""Command-line driver: catalog points, verification pipelines, reports.

Tasks run in dependency order (conditions -> algebra -> sphere -> {chern,
coaction}); prerequisites are added to a run automatically and a failing
prerequisite skips everything downstream, with the failure recorded in the
report.  Exact-mode reports are canonical: sorted keys, exact scalars
rendered as strings, no timings (those go to stderr), so two runs over the
same spec produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .errors import (IrrationalEigenvalue, InvalidSpec, NCSpheresError,
                     TaskFailure)
from .homology import (B_boundary, ChainContext, b_boundary, chern_even,
                       chern_odd, check_vanzz_equivalence)
from .ncalg import Algebra, basis_size, confluence_check
from .quatlin import embed_M2
from .rmatrix import DeformParams, build_R_quaternionic, check_all_conditions
from .scalars import EXACT, GaussRational, float_backend
from .spheres import (build_projection, build_sphere, check_normality,
                      compute_Y, diagonalize_lambda, lambda_reports,
                      projection_checks, suspension_reports,
                      three_sphere_context, verify_Y_relations, y0_flip_check)

SCHEMA_VERSION = 1

TASKS = ("conditions", "algebra", "sphere", "chern", "coaction")

# prerequisites per task, in execution order
_REQUIRES = {
    "conditions": (),
    "algebra": ("conditions",),
    "sphere": ("conditions", "algebra"),
    "chern": ("conditions", "algebra", "sphere"),
    "coaction": ("conditions", "algebra", "sphere"),
}

# rational points on the parameter sphere; the Pythagorean ones also admit
# an exact eigenphase
CATALOG = (
    "1,0,0",
    "3/5,4/5,0",
    "3/5,0,4/5",
    "1/3,2/3,2/3",
    "7/25,24/25,0",
    "4/5,3/5,0",
)

_VERB_TASKS = {
    "check": ("conditions",),
    "sphere": ("sphere",),
    "chern": ("chern",),
    "coaction": ("coaction",),
    "report": TASKS,
    "sweep": ("conditions", "algebra", "sphere", "coaction"),
}


@dataclass
class RunSpec:
    """One verification run: a parameter point, a backend, and tasks."""

    params: DeformParams
    backend_name: str = "exact"
    tasks: tuple = ("conditions",)
    tol: float = 1e-9
    degree_cap: int = 12

    def validate(self) -> None:
        if self.backend_name not in ("exact", "float"):
            raise InvalidSpec(f"unknown backend {self.backend_name!r}")
        if not self.tasks:
            raise InvalidSpec("tasks must be nonempty")
        for t in self.tasks:
            if t not in TASKS:
                raise InvalidSpec(f"unknown task {t!r}")
        if self.degree_cap < 4:
            raise InvalidSpec("degree cap below the quadratic relations")
        self.params.validate(self.backend())

    def backend(self):
        return EXACT if self.backend_name == "exact" else float_backend(self.tol)

    def closure(self) -> tuple:
        """Requested tasks plus their prerequisites, in execution order."""
        wanted = set(self.tasks)
        for t in self.tasks:
            wanted.update(_REQUIRES[t])
        return tuple(t for t in TASKS if t in wanted)

    def echo(self) -> dict:
        return {
            "params": self.params.label(),
            "backend": self.backend_name,
            "tasks": list(self.closure()),
            "tol": self.tol,
            "degree_cap": self.degree_cap,
        }


def _jsonable(value):
    """Render report payloads with exact scalars as canonical strings."""
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, GaussRational):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


def canonical_json(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def _report_list(reports) -> list:
    return [r.to_dict() for r in reports]


def _task_conditions(spec: RunSpec, state: dict) -> dict:
    be = spec.backend()
    R = build_R_quaternionic(spec.params, be)
    state["R"] = R
    reports = check_all_conditions(R)
    return {"passed": all(r.passed for r in reports), "reports": _report_list(reports)}


def _task_algebra(spec: RunSpec, state: dict) -> dict:
    alg = Algebra(state["R"], spec.backend())
    state["alg"] = alg
    rep = confluence_check(alg, max_len=4, trials=60, seed=0)
    dims = {str(n): basis_size(n) for n in range(1, 6)}
    return {
        "passed": rep["passed"],
        "confluent": rep["passed"],
        "witness": rep.get("witness"),
        "dims": dims,
    }


def _task_sphere(spec: RunSpec, state: dict) -> dict:
    alg = state["alg"]
    s = build_sphere(alg, "seven_sphere", params=spec.params,
                     degree_cap=spec.degree_cap)
    state["sphere"] = s
    ys = compute_Y(s)
    state["ys"] = ys
    reports = []
    reports.extend(projection_checks(s))
    reports.extend(verify_Y_relations(s, ys))
    reports.extend(lambda_reports(alg, ys))
    reports.append(y0_flip_check(s, ys))
    s3 = three_sphere_context(s, ys, degree_cap=spec.degree_cap)
    state["s3"] = s3
    reports.extend(suspension_reports(s3, ys))
    norm = check_normality(s, ys)
    # sharp boundary: the generators are normal exactly when Lambda is
    # diagonal, which happens exactly at u2 = 0
    u2_zero = spec.params.u2 == 0
    norm_ok = (norm["lambda_diagonal"] == u2_zero
               and norm["all_normal"] == u2_zero
               and norm["all_non_normal"] == (not u2_zero))
    out = {
        "passed": all(r.passed for r in reports) and norm_ok,
        "reports": _report_list(reports),
        "normality": norm,
        "normality_matches_boundary": norm_ok,
    }
    try:
        diag = diagonalize_lambda(ys, spec.backend())
        out["theta"] = diag["theta"]
        out["theta_note"] = None
    except IrrationalEigenvalue:
        out["theta"] = None
        out["theta_note"] = "eigenphase irrational at this point"
    state["theta"] = out["theta"]
    return out


def _task_chern(spec: RunSpec, state: dict) -> dict:
    s = state["sphere"]
    ys = state["ys"]
    ctx = ChainContext(s)
    ctx3 = ChainContext(state["s3"])
    p = build_projection(s)
    ch0 = chern_even(ctx, p, 0)
    ch1 = chern_even(ctx, p, 1)
    ch2 = chern_even(ctx, p, 2)
    U = embed_M2(ys.Y, s.base.backend.i)
    chh = chern_odd(ctx3, U, 0)
    ch32 = chern_odd(ctx3, U, 1)
    closures = {
        "b_ch2_zero": b_boundary(ch2).is_zero(),
        "b_ch32_zero": b_boundary(ch32).is_zero(),
        "B_ch0_equals_b_ch1": B_boundary(ch0) == b_boundary(ch1),
    }
    components = {
        "ch0": ch0.digest(),
        "ch_half": chh.digest(),
        "ch1": ch1.digest(),
        "ch2": ch2.digest(),
        "ch_3half": ch32.digest(),
    }
    vanishing = {
        "ch0_zero": ch0.is_zero(),
        "ch_half_zero": chh.is_zero(),
        "ch1_zero": ch1.is_zero(),
        "ch2_nonzero": not ch2.is_zero(),
        "ch_3half_nonzero": not ch32.is_zero(),
    }
    vanzz = check_vanzz_equivalence(ctx, ys)
    passed = (all(vanishing.values()) and all(closures.values())
              and vanzz["agree"])
    return {
        "passed": passed,
        "components": components,
        "vanishing": vanishing,
        "closures": closures,
        "star_chain_equivalence": vanzz,
    }


def _task_coaction(spec: RunSpec, state: dict) -> dict:
    from .coaction import (canonical_witness, check_comodule_algebra,
                           check_hopf_axioms, coinvariant_report,
                           derivation_reports, diagonal_coaction,
                           one_sided_left_coaction)

    s = state["sphere"]
    ys = state["ys"]
    be = spec.backend()
    hopf = check_hopf_axioms(be)
    co = diagonal_coaction(s)
    comodule = check_comodule_algebra(co)
    derivs = derivation_reports(s, ys)
    coinv = coinvariant_report(s, ys, co)
    witness = canonical_witness(co)
    fault = check_comodule_algebra(one_sided_left_coaction(s))
    passed = (all(r.passed for r in hopf) and comodule["passed"]
              and all(r.passed for r in derivs)
              and coinv["dim_degree_2"] == 6 and coinv["equals_y_span"]
              and coinv.get("delta_fixes_kernel", True)
              and witness["passed"])
    return {
        "passed": passed,
        "hopf": _report_list(hopf),
        "comodule": comodule,
        "derivations": _report_list(derivs),
        "coinvariants": coinv,
        "canonical_witness": witness,
        "one_sided_fault": {
            "relations_preserved": fault["relations_preserved"],
            "failures": fault["failures"],
        },
    }


_TASK_FNS = {
    "conditions": _task_conditions,
    "algebra": _task_algebra,
    "sphere": _task_sphere,
    "chern": _task_chern,
    "coaction": _task_coaction,
}


def run(spec: RunSpec):
    """Execute one run; returns (report, timings in seconds)."""
    spec.validate()
    report = {
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "spec": spec.echo(),
        "tasks": {},
        "passed": True,
    }
    timings = {}
    state: dict = {}
    failed_at = None
    for task in spec.closure():
        if failed_at is not None:
            report["tasks"][task] = {
                "skipped": True,
                "reason": f"prerequisite {failed_at!r} failed",
            }
            report["passed"] = False
            continue
        t0 = time.perf_counter()
        try:
            result = _TASK_FNS[task](spec, state)
        except TaskFailure as exc:
            result = {"passed": False,
                      "error": {"type": "TaskFailure", "task": exc.task,
                                "detail": exc.detail}}
        except NCSpheresError as exc:
            result = {"passed": False,
                      "error": {"type": type(exc).__name__, "detail": str(exc)}}
        timings[task] = time.perf_counter() - t0
        report["tasks"][task] = result
        if not result["passed"]:
            report["passed"] = False
            failed_at = task
    return report, timings


def sweep(points, tasks=_VERB_TASKS["sweep"], backend_name="exact",
          tol=1e-9, degree_cap=12, max_workers=None):
    """Run the pipeline at each point in parallel; order follows the input."""
    if not points:
        raise InvalidSpec("sweep needs at least one parameter point")
    specs = [RunSpec(params=p, backend_name=backend_name, tasks=tuple(tasks),
                     tol=tol, degree_cap=degree_cap) for p in points]
    for s in specs:
        s.validate()
    workers = max_workers or min(len(specs), os.cpu_count() or 1)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(run, specs))
    return results


def sweep_csv(points, results) -> str:
    """Summary table: point, commutative flag, pass/fail bits, theta."""
    task_cols = sorted({t for report, _ in results for t in report["tasks"]},
                       key=TASKS.index)
    lines = ["point,commutative," + ",".join(task_cols) + ",theta"]
    for p, (report, _) in zip(points, results):
        commutative = "commutative" if (p.u1 == 0 and p.u2 == 0) else ""
        bits = []
        for t in task_cols:
            entry = report["tasks"].get(t)
            if entry is None:
                bits.append("")
            elif entry.get("skipped"):
                bits.append("skipped")
            else:
                bits.append("pass" if entry["passed"] else "fail")
        theta = report["tasks"].get("sphere", {}).get("theta")
        if theta is None:
            theta_txt = ""
        elif isinstance(theta, complex):
            theta_txt = f"{theta.real}{theta.imag:+}j"
        else:
            theta_txt = str(theta)
        lines.append(f"\"{p.label()}\",{commutative}," + ",".join(bits)
                     + f",\"{theta_txt}\"")
    return "\n".join(lines) + "\n"


def _emit_report(report, timings, args):
    if not args.quiet:
        spec = report["spec"]
        print(f"point {spec['params']}  backend {spec['backend']}")
        for task, entry in report["tasks"].items():
            if entry.get("skipped"):
                print(f"  {task}: SKIPPED ({entry['reason']})")
            elif entry["passed"]:
                print(f"  {task}: PASS")
            else:
                detail = entry.get("error", {}).get("detail", "")
                print(f"  {task}: FAIL {detail}")
        print("PASS" if report["passed"] else "FAIL")
    for task, dt in timings.items():
        print(f"[time] {report['spec']['params']} {task} {dt:.2f}s",
              file=sys.stderr)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ncspheres",
        description="Exact verification of the deformed-sphere algebras.")
    parser.add_argument("verb", choices=sorted(_VERB_TASKS),
                        help="which pipeline to run")
    parser.add_argument("--params", default="3/5,4/5,0",
                        help="parameter point u0,u1,u2 (rationals)")
    parser.add_argument("--backend", default="exact",
                        choices=("exact", "float"))
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="float-backend zero tolerance")
    parser.add_argument("--degree-cap", type=int, default=12,
                        help="largest degree the reduction contexts accept")
    parser.add_argument("--json", metavar="PATH", default=None,
                        help="write the canonical JSON report here")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress the human-readable summary")
    args = parser.parse_args(argv)

    try:
        if args.verb == "sweep":
            points = [DeformParams.parse(lbl) for lbl in CATALOG]
            results = sweep(points, backend_name=args.backend, tol=args.tol,
                            degree_cap=args.degree_cap)
            print(sweep_csv(points, results), end="")
            if args.json:
                reports = [r for r, _ in results]
                with open(args.json, "w") as fh:
                    fh.write(canonical_json(reports))
            for report, timings in results:
                for task, dt in timings.items():
                    print(f"[time] {report['spec']['params']} {task} {dt:.2f}s",
                          file=sys.stderr)
            return 0 if all(r["passed"] for r, _ in results) else 1

        spec = RunSpec(params=DeformParams.parse(args.params),
                       backend_name=args.backend,
                       tasks=_VERB_TASKS[args.verb],
                       tol=args.tol,
                       degree_cap=args.degree_cap)
        report, timings = run(spec)
        _emit_report(report, timings, args)
        if args.json:
            with open(args.json, "w") as fh:
                fh.write(canonical_json(report))
        return 0 if report["passed"] else 1
    except NCSpheresError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
