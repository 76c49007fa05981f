"""Command-line front end.

Exit codes: 0 when everything passed or a decision was computed, 1 when a
verification failed, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import linalg as la
from .congruence import are_congruent, automorphism_group, orbit_count
from .geometry import (HypothesisError, Subspace, austere_search, find_collinear_witness,
                       focal_spectrum, has_constant_principal_curvatures, is_austere, is_minimal,
                       jacobi_eigenvalue_check, jacobi_eta_check, mean_curvature_vector,
                       non_austere_sufficient, symbolic_focal_spectrum, tube_mean_curvature,
                       tube_spectrum)
from .rootsys import SpaceSpec, SpecError, build_root_datum, check_axioms, dual_vector, positive_root, preset
from .verify import SampleConfig, genericity_experiment, example_fixtures, verify_collinear_all

SCHEMA = "1"
GENERICITY_BAR = Fraction(1, 100)


class InputError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def load_spec(args) -> SpaceSpec:
    if getattr(args, "preset", None):
        return preset(args.preset)
    if not getattr(args, "spec", None):
        raise InputError("one of --spec or --preset is required")
    return SpaceSpec.from_json(_load_json(args.spec))


def subspace_from_json(datum, obj) -> Subspace:
    """Build b from {"vectors": [...], "simple": [...], "roots": [...], "hdelta": bool}."""
    if not isinstance(obj, dict):
        raise InputError("subspace file must hold a JSON object")
    unknown = set(obj) - {"vectors", "simple", "roots", "hdelta"}
    if unknown:
        raise InputError(f"unknown subspace field(s): {sorted(unknown)}")
    vecs = []
    try:
        for v in obj.get("vectors", []):
            vecs.append(tuple(la.parse_q(x) for x in v))
        for c in obj.get("simple", []):
            vecs.append(dual_vector(datum, c))
        for c in obj.get("roots", []):
            vecs.append(positive_root(datum, [int(x) for x in c]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad subspace entry: {e}") from None
    if obj.get("hdelta"):
        vecs.append(datum.hdelta)
    try:
        return Subspace(datum, vecs)
    except ValueError as e:
        raise InputError(str(e)) from None


def _parse_vec(s: str):
    try:
        return tuple(la.parse_q(x.strip()) for x in s.split(","))
    except (ValueError, ZeroDivisionError, TypeError):
        raise InputError(f"cannot parse vector {s!r}; expected comma-separated rationals") from None


def _parse_q(s: str) -> Fraction:
    try:
        return la.parse_q(s)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse rational {s!r}") from None


def _vec_json(v):
    return [la.fmt(x) for x in v]


# ---------------------------------------------------------------------------
# commands; each returns (exit_code, report_dict, text_lines)


def cmd_build(args):
    spec = load_spec(args)
    datum = build_root_datum(spec)
    ax = check_axioms(datum)
    report = {"spec": spec.to_json(), "datum": datum.summary(), "axioms": ax.to_json()}
    lines = [f"space: {spec.label}", f"rank: {datum.rank}  ambient: {datum.ambient_dim}",
             f"roots: {len(datum.roots)}  positive: {len(datum.positive)}  dim n: {len(datum.slots)}",
             f"H_delta: {_vec_json(datum.hdelta)}", f"axioms: {'ok' if ax.ok else 'FAILED ' + ax.violation}"]
    for i, r in enumerate(datum.simple):
        lines.append(f"  a{i + 1} = {_vec_json(r.hvec)}  mult {r.mult}")
    return (0 if ax.ok else 1), report, lines


def cmd_analyze(args):
    datum = build_root_datum(load_spec(args))
    b = subspace_from_json(datum, _load_json(args.subspace))
    t = _parse_q(args.t) if args.t else Fraction(1)
    if t <= 0:
        raise InputError("--t must be positive")
    report = {"space": datum.spec.label, "subspace": b.to_json(), "rank": datum.rank,
              "dim_b": b.dim, "codim_b": b.codim}
    notes = []
    minimal = is_minimal(b)
    aus = is_austere(b)
    report["minimal"] = minimal
    report["mean_curvature_vector"] = _vec_json(mean_curvature_vector(b))
    report["austere"] = aus.austere
    report["austere_witness"] = aus.witness.to_json() if aus.witness else None
    lam = find_collinear_witness(datum)
    report["non_collinear_root"] = datum.root_name(lam) if lam is not None else None
    if lam is not None:
        report["sufficient_non_austere"] = non_austere_sufficient(b, lam)
    report["symbolic_spectrum"] = symbolic_focal_spectrum(b).to_json()

    if b.codim == 0:
        notes.append("b = a: no normal directions")
    else:
        xi = _parse_vec(args.xi) if args.xi else b.complement[0]
        try:
            report["xi"] = _vec_json(xi)
            report["focal_spectrum"] = focal_spectrum(b, xi).to_json()
            if minimal:
                ts = tube_spectrum(b, xi, t)
                report["tube"] = {
                    "t": la.fmt(t),
                    "spectrum": ts.to_json(),
                    "mean_curvature": la.fmt(ts.trace),
                    "formula": f"-(dim b_perp - 1)/t = -({b.codim} - 1)/{la.fmt(t)} = {la.fmt(tube_mean_curvature(b, t))}",
                }
            else:
                notes.append("H_delta not in b: tubes are not the isoparametric family")
        except HypothesisError as e:
            raise InputError(f"{e.code}: {e}") from None
        cpc = has_constant_principal_curvatures(b)
        report["constant_principal_curvatures"] = cpc.constant
        report["inhomogeneity_witness"] = cpc.witness.to_json() if cpc.witness else None
        if cpc.note:
            notes.append(cpc.note)
    if b.codim < 2:
        notes.append(f"codim(b) = {b.codim} < 2: outside the isoparametric construction")
    if datum.rank < 3:
        notes.append(f"rank {datum.rank} < 3: outside the isoparametric construction")
    report["notes"] = notes

    lines = [f"space: {datum.spec.label}  dim b: {b.dim}  codim b: {b.codim}",
             f"minimal: {minimal}", f"austere: {aus.austere}"]
    if aus.witness:
        lines.append(f"  pairing: {aus.witness.to_json()}")
    lines.append(f"mean curvature vector: {report['mean_curvature_vector']}")
    if "focal_spectrum" in report:
        lines.append(f"xi: {report['xi']}")
        lines.append("focal spectrum: " + _spec_text(report["focal_spectrum"]))
    if "tube" in report:
        lines.append(f"tube spectrum (t = {la.fmt(t)}): " + _spec_text(report["tube"]["spectrum"]))
        lines.append(f"tube mean curvature: {report['tube']['formula']}")
    if report.get("inhomogeneity_witness"):
        lines.append(f"inhomogeneity witness: root {datum.root_name(report['inhomogeneity_witness']['root'])}")
    lines += [f"note: {n}" for n in notes]
    return 0, report, lines


def _spec_text(sj):
    return ", ".join(f"{e['value']}^{e['mult']}" for e in sj["entries"])


def cmd_austere_search(args):
    datum = build_root_datum(load_spec(args))
    if not 1 <= args.dim <= datum.rank:
        raise InputError(f"--dim must be between 1 and {datum.rank}")
    found = list(austere_search(datum, args.dim, require_hdelta=not args.no_hdelta, limit=args.limit))
    orbits = orbit_count([b for b, _ in found])
    report = {"space": datum.spec.label, "dim": args.dim, "require_hdelta": not args.no_hdelta,
              "found": [{"basis": b.to_json()["basis"], "pairing": w.to_json()} for b, w in found],
              "congruence_classes": orbits.to_json()}
    lines = [f"{len(found)} austere subspaces of dimension {args.dim}, {len(orbits.classes)} congruence classes"]
    for cls, rep in zip(orbits.classes, orbits.representatives):
        lines.append(f"  class {list(cls)}: {[_vec_json(r) for r in rep]}")
    return 0, report, lines


def cmd_congruence(args):
    datum = build_root_datum(load_spec(args))
    b1 = subspace_from_json(datum, _load_json(args.b1))
    b2 = subspace_from_json(datum, _load_json(args.b2))
    group = automorphism_group(datum)
    w = are_congruent(b1, b2)
    report = {"space": datum.spec.label, "group_order": len(group), "congruent": w is not None,
              "witness": w.to_json() if w else None, "kind": "diagram-symmetry congruence"}
    lines = [f"group order: {len(group)}", f"congruent: {w is not None}"]
    if w:
        lines.append(f"  root permutation: {list(w.root_permutation)}")
    return 0, report, lines


def cmd_verify_collinear(args):
    if not 3 <= args.max_rank <= 8:
        raise InputError("--max-rank must be between 3 and 8")
    rep = verify_collinear_all(args.max_rank, args.reducible, args.random_passes, args.seed)
    lines = [f"{'space':<28}{'pass':<10}{'witness':<22}status"]
    for r in rep.rows:
        alias = f" (alias of {r['alias_of']})" if "alias_of" in r else ""
        lines.append(f"{r['space'] + alias:<28}{r['pass']:<10}{str(r['witness']):<22}{r['status']}")
    lines.append(f"checked {len(rep.rows)}, failures {len(rep.failures)}")
    return (1 if rep.failures else 0), rep.to_json(), lines


def cmd_genericity(args):
    spec = load_spec(args)
    try:
        cfg = SampleConfig(args.seed, args.count, args.bound, args.codim)
        rep = genericity_experiment(spec, cfg)
    except ValueError as e:
        raise InputError(str(e)) from None
    report = rep.to_json()
    ok = rep.minimal_count == rep.sampled and rep.austere_fraction <= GENERICITY_BAR
    report["passed"] = ok
    lines = [f"space: {rep.space}  seed: {cfg.seed}  codim: {cfg.codim}  bound: {cfg.coeff_bound}",
             f"sampled: {rep.sampled}  draws: {rep.draws}",
             f"minimal: {rep.minimal_count}/{rep.sampled}",
             f"austere: {rep.austere_count}/{rep.sampled} ({la.fmt(rep.austere_fraction)})",
             f"sufficient non-austere test passed: {rep.sufficient_count}/{rep.sampled}"]
    for s in rep.austere_samples:
        lines.append(f"  austere sample: {s}")
    return (0 if ok else 1), report, lines


def cmd_fixtures(args):
    res = example_fixtures()
    report = {"fixtures": [r.to_json() for r in res], "failures": sum(not r.passed for r in res)}
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}" + (f"  [{r.detail}]" if r.detail else "") for r in res]
    return (0 if all(r.passed for r in res) else 1), report, lines


def cmd_jacobi(args):
    rows = []
    for c in range(-3, 4):
        for t in (Fraction(1, 4), Fraction(1), Fraction(4)):
            cf, num = jacobi_eigenvalue_check(c, t)
            rows.append({"c": la.fmt(cf), "t": la.fmt(t), "closed_form": la.fmt(cf), "numeric": num})
    for t in (Fraction(1, 4), Fraction(1), Fraction(4)):
        cf, num = jacobi_eta_check(t)
        rows.append({"family": "normal", "t": la.fmt(t), "closed_form": la.fmt(cf), "numeric": num})
    ok = all(abs(float(Fraction(r["closed_form"])) - r["numeric"]) < 1e-5 for r in rows)
    lines = [f"t={r['t']:<5} closed={r['closed_form']:<6} numeric={r['numeric']:.9f}" for r in rows]
    return (0 if ok else 1), {"numeric_cross_check": rows, "passed": ok}, lines


COMMANDS = {
    "build": cmd_build,
    "analyze": cmd_analyze,
    "austere-search": cmd_austere_search,
    "congruence": cmd_congruence,
    "verify-collinear": cmd_verify_collinear,
    "genericity": cmd_genericity,
    "fixtures": cmd_fixtures,
    "jacobi": cmd_jacobi,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    spec_args = argparse.ArgumentParser(add_help=False)
    spec_args.add_argument("--spec", help="space spec JSON file")
    spec_args.add_argument("--preset", help="named space, e.g. SL5/SO5 or (RH2)^4")

    p = argparse.ArgumentParser(prog="isoparam", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common, spec_args], help="validate a spec and show its root datum")
    a = sub.add_parser("analyze", parents=[common, spec_args], help="geometry of the orbit for a subspace b")
    a.add_argument("--subspace", required=True)
    a.add_argument("--xi", help="normal vector, comma-separated ambient coordinates")
    a.add_argument("--t", help="tube radius (rational), default 1")
    s = sub.add_parser("austere-search", parents=[common, spec_args], help="search austere subspaces")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--no-hdelta", action="store_true", help="do not require H_delta in b")
    s.add_argument("--limit", type=int)
    c = sub.add_parser("congruence", parents=[common, spec_args], help="decide congruence of two subspaces")
    c.add_argument("--b1", required=True)
    c.add_argument("--b2", required=True)
    v = sub.add_parser("verify-collinear", parents=[common], help="non-collinearity sweep")
    v.add_argument("--max-rank", type=int, required=True)
    v.add_argument("--reducible", action="store_true")
    v.add_argument("--random-passes", type=int, default=1)
    v.add_argument("--seed", type=int, default=0)
    g = sub.add_parser("genericity", parents=[common, spec_args], help="sample minimal orbits, count austere ones")
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--codim", type=int, required=True)
    g.add_argument("--bound", type=int, default=10)
    sub.add_parser("fixtures", parents=[common], help="run the explicit example fixtures")
    sub.add_parser("jacobi", parents=[common], help="numeric cross-check of the Jacobi eigenvalues")
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        code, report, lines = COMMANDS[args.command](args)
    except (InputError, SpecError, HypothesisError) as e:
        print(f"error: {e}", file=err)
        return 2
    if args.json:
        payload = {"schema": SCHEMA, "command": args.command, "exit_code": code}
        payload.update(report)
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
