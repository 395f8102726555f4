"""Batch command-line front end.

Exit codes: 0 success, 1 input error (io/syntax/reference/dimension/axiom),
2 mathematical failure (failed validation report, nonzero obstruction for
`deform`, non-invertible morphism for `invert`).  Human-readable summary
goes to stdout; `--out` writes a stable machine-readable JSON report.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .cohomology import Cochain, ComplexSpec
from .coalgebra import Coalgebra
from .convolution import takeuchi_invert
from .deformation import (
    classify,
    mc_solve,
    series_deform,
    unit_gauge,
)
from .errors import ConvDefError, NotInvertible, SpecFileError
from .extension import Comodule, build_extension
from .linalg import Subspace
from .specfile import (
    SpecFile,
    cochain_to_obj,
    morphism_to_obj,
    parse_path,
    render_report,
)


class MathFailure(Exception):
    """A mathematically negative answer (exit code 2)."""


def _pick(table: dict, kind: str, task: dict, cli_value: Optional[str]):
    name = cli_value or task.get(kind)
    if name is not None:
        if name not in table:
            raise SpecFileError("reference", f"unknown {kind} {name!r}")
        return name, table[name]
    if len(table) == 1:
        return next(iter(table.items()))
    raise SpecFileError(
        "reference",
        f"{kind} block required ({'none' if not table else 'several'} defined; pick one)",
    )


def _default_comodule(c: Coalgebra) -> Comodule:
    # Hochschild case: over the trivial one-dimensional coalgebra the free
    # rank-one comodule is canonical.
    f = c.field
    if c.dim == 1 and c.delta[0] == ((0, 0, f.one),) and c.counit[0] == f.one:
        return Comodule(c, 1, [[(0, 0, 1)]])
    raise SpecFileError("reference", "a comodule block is required for this coalgebra")


def _int_param(task: dict, key: str, cli_value: Optional[int], what: str) -> int:
    v = cli_value if cli_value is not None else task.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SpecFileError("dimension", f"{what} required (flag --{key.replace('_', '-')})")
    return v


def _write_out(path: Optional[str], payload: dict) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_report(payload))


def _load_filtration(spec_arg: str, c: Coalgebra) -> list[Subspace]:
    if spec_arg == "grading":
        return c.grading_filtration()
    if spec_arg.startswith("file:"):
        path = spec_arg[5:]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise SpecFileError("io", f"cannot read filtration file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SpecFileError("syntax", f"filtration file: {exc.msg}", exc.lineno, exc.colno) from exc
        layers = doc.get("layers")
        if not isinstance(layers, list) or not layers:
            raise SpecFileError("dimension", "filtration file needs a nonempty 'layers' list")
        f = c.field
        out = []
        for layer in layers:
            vecs = [[f.coerce(x) for x in v] for v in layer]
            out.append(Subspace.span(f, c.dim, vecs))
        return out
    raise SpecFileError("syntax", f"bad --filtration value {spec_arg!r}")


def _load_user_cochains(path: str) -> dict[int, list]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecFileError("io", f"cannot read cochain file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFileError("syntax", f"cochain file: {exc.msg}", exc.lineno, exc.colno) from exc
    out = {}
    for key, mats in doc.items():
        out[int(key)] = mats
    return out


def _report_header(sf: SpecFile, command: str) -> dict:
    return {"command": command, "field": sf.field.name}


def cmd_validate(sf: SpecFile, failures: list[str], args) -> dict:
    lines = []
    objects = {}
    for name, c in sorted(sf.coalgebras.items()):
        rep = c.validate()
        objects[f"coalgebra:{name}"] = {
            "coassociative": rep.coassociative,
            "counit_left": rep.counit_left,
            "counit_right": rep.counit_right,
            "cocommutative": rep.cocommutative,
            "grading_compatible": rep.grading_compatible,
        }
        lines.append(f"coalgebra {name}: {'ok' if rep.ok else 'FAILED'}"
                     f" (cocommutative: {'yes' if rep.cocommutative else 'no'})")
    for name, com in sorted(sf.comodules.items()):
        bad = com.validate()
        objects[f"comodule:{name}"] = {"failures": bad}
        lines.append(f"comodule {name}: {'ok' if not bad else 'FAILED: ' + ', '.join(bad)}")
    for name, w in sorted(sf.cocycles.items()):
        bad = w.validate()
        objects[f"cocycle:{name}"] = {"failures": bad}
        lines.append(f"cocycle {name}: {'ok' if not bad else 'FAILED: ' + ', '.join(bad)}")
    from .cohomology import is_associative
    from .deformation import is_unit_of

    for name, alg in sorted(sf.algebras.items()):
        bad = []
        if not is_associative(alg.m):
            bad.append("associativity")
        if alg.unit is not None and not is_unit_of(alg.m, alg.unit):
            bad.append("unit axioms")
        objects[f"algebra:{name}"] = {"failures": bad}
        lines.append(f"algebra {name}: {'ok' if not bad else 'FAILED: ' + ', '.join(bad)}")
    print("\n".join(lines) if lines else "nothing to validate")
    if failures:
        raise MathFailure("validation failed: " + "; ".join(failures))
    return {"objects": objects, "ok": True}


def cmd_cohomology(sf: SpecFile, args) -> dict:
    aname, alg = _pick(sf.algebras, "algebra", sf.task, args.algebra)
    degree = _int_param(sf.task, "degree", args.degree, "cohomology degree")
    if sf.comodules or args.comodule or "comodule" in sf.task:
        xname, com = _pick(sf.comodules, "comodule", sf.task, args.comodule)
    else:
        xname, com = "(trivial)", _default_comodule(alg.coalgebra)
    spec = ComplexSpec(alg.m, com)
    res = spec.cohomology(degree)
    print(f"dim Z^{degree} = {res.dim_z}")
    print(f"dim B^{degree} = {res.dim_b}")
    print(f"dim H^{degree} = {res.dim_h}")
    return {
        "algebra": aname,
        "comodule": xname,
        "degree": degree,
        "dim_z": res.dim_z,
        "dim_b": res.dim_b,
        "dim_h": res.dim_h,
        "representatives": [cochain_to_obj(r) for r in res.representatives],
    }


def _extension_setup(sf: SpecFile, args):
    aname, alg = _pick(sf.algebras, "algebra", sf.task, args.algebra)
    wname, w = _pick(sf.cocycles, "cocycle", sf.task, getattr(args, "cocycle", None))
    if alg.coalgebra != w.comodule.base:
        raise SpecFileError(
            "reference", f"algebra {aname!r} and cocycle {wname!r} live over different coalgebras"
        )
    ext = build_extension(w)
    return aname, alg, wname, ext


def cmd_obstruct(sf: SpecFile, args) -> dict:
    aname, alg, wname, ext = _extension_setup(sf, args)
    report = mc_solve(alg, ext)
    print(f"obstruction 3-cocycle computed; d^3(zeta) = 0 holds")
    print(f"zeta is {'zero' if report.zeta.is_zero() else 'nonzero'}; "
          f"class {'vanishes (coboundary)' if report.obstruction_vanishes else 'NONZERO'}")
    payload = {
        "algebra": aname,
        "cocycle": wname,
        "zeta": cochain_to_obj(report.zeta),
        "zeta_is_zero": report.zeta.is_zero(),
        "class_vanishes": report.obstruction_vanishes,
    }
    if report.zeta_class_rep is not None:
        payload["class_representative"] = cochain_to_obj(report.zeta_class_rep)
    return payload


def cmd_deform(sf: SpecFile, args) -> dict:
    aname, alg, wname, ext = _extension_setup(sf, args)
    report = mc_solve(alg, ext)
    payload = {
        "algebra": aname,
        "cocycle": wname,
        "obstruction_vanishes": report.obstruction_vanishes,
        "dim_z2": report.dim_z2,
        "dim_b2": report.dim_b2,
        "dim_h2": report.dim_h2,
    }
    if not report.obstruction_vanishes:
        payload["class_representative"] = cochain_to_obj(report.zeta_class_rep)
        _write_out(args.out, dict(_report_header(sf, "deform"), **payload))
        raise MathFailure(
            "obstruction class is nonzero in H^3; no deformation exists "
            "(canonical class representative in the report)"
        )
    payload["base_solution"] = cochain_to_obj(report.base_solution)
    payload["nu0"] = cochain_to_obj(report.nu0)
    if report.coset_count is not None:
        payload["coset_count"] = report.coset_count
    print(f"Maurer-Cartan solvable: solution set = base + Z^2, dim Z^2 = {report.dim_z2}")
    print(f"equivalence classes: dim H^2 = {report.dim_h2}")
    return payload


def cmd_classify(sf: SpecFile, args) -> dict:
    aname, alg, wname, ext = _extension_setup(sf, args)
    result = classify(alg, ext)
    report = result.report
    payload = {
        "algebra": aname,
        "cocycle": wname,
        "obstruction_vanishes": report.obstruction_vanishes,
        "dim_z2": report.dim_z2,
        "dim_b2": report.dim_b2,
        "dim_h2": report.dim_h2,
        "representatives": [morphism_to_obj(d.mtilde) for d in result.representatives],
    }
    if report.coset_count is not None:
        payload["coset_count"] = report.coset_count
    print(f"dim H^2 = {report.dim_h2}; {len(result.representatives)} representative(s) materialized")
    return payload


def cmd_series(sf: SpecFile, args) -> dict:
    aname, alg = _pick(sf.algebras, "algebra", sf.task, args.algebra)
    dname, d_coalg = _pick(sf.coalgebras, "coalgebra", sf.task, args.coalgebra)
    if alg.coalgebra.dim != 1:
        raise SpecFileError("reference", "series needs the base algebra over a one-dimensional coalgebra")
    n_max = _int_param(sf.task, "max_degree", args.max_degree, "maximum degree")
    strategy = args.strategy or sf.task.get("strategy", "first")
    user_cochains = None
    if strategy.startswith("file:"):
        raw = _load_user_cochains(strategy[5:])
        user_cochains = {}
        from .convolution import MultiMap
        from .linalg import Matrix

        for degree, mats in raw.items():
            layer = d_coalg.degree_indices(degree)
            if not isinstance(mats, list) or len(mats) != len(layer):
                raise SpecFileError(
                    "dimension", f"cochain file: degree {degree} needs one matrix per layer element"
                )
            try:
                maps = tuple(
                    MultiMap(alg.a_dim, 2, 1, Matrix.from_rows(sf.field, mats[s]))
                    for s in range(len(layer))
                )
            except (TypeError, ValueError) as exc:
                raise SpecFileError("syntax", f"cochain file: bad scalar ({exc})") from exc
            user_cochains[degree] = Cochain(2, maps)
        strategy = "user"
    m0 = alg.m.components[0]
    result = series_deform(m0, d_coalg, n_max, strategy=strategy, user_cochains=user_cochains)
    branch = result.primary
    steps_payload = []
    for step in branch.steps:
        line = {
            "degree": step.degree,
            "obstruction_vanishes": step.report.obstruction_vanishes,
            "dim_z2": step.report.dim_z2,
            "dim_h2": step.report.dim_h2,
        }
        if step.chosen is not None:
            line["chosen"] = cochain_to_obj(step.chosen)
        steps_payload.append(line)
        status = "ok" if step.report.obstruction_vanishes else "OBSTRUCTED"
        print(f"degree {step.degree}: {status}, dim Z^2 = {step.report.dim_z2}, "
              f"dim H^2 = {step.report.dim_h2}")
    payload = {
        "algebra": aname,
        "coalgebra": dname,
        "max_degree": n_max,
        "strategy": strategy,
        "steps": steps_payload,
        "stopped_at": branch.stopped_at,
        "final_multiplication": morphism_to_obj(branch.final.m),
    }
    if branch.stopped_at is not None:
        _write_out(args.out, dict(_report_header(sf, "series"), **payload))
        raise MathFailure(f"obstruction class nonzero at degree {branch.stopped_at}")
    return payload


def cmd_unit_gauge(sf: SpecFile, args) -> dict:
    aname, alg = _pick(sf.algebras, "algebra", sf.task, args.algebra)
    base_name = args.base_algebra or sf.task.get("base_algebra")
    if base_name is None or base_name not in sf.algebras:
        raise SpecFileError("reference", "unit-gauge needs a base_algebra block with the unit")
    base = sf.algebras[base_name]
    if base.unit is None:
        raise SpecFileError("reference", f"base algebra {base_name!r} carries no unit")
    result = unit_gauge(alg.m, base.unit)
    print("unit normalized: u o lambda is a two-sided unit of the transported multiplication")
    return {
        "algebra": aname,
        "base_algebra": base_name,
        "gauge": morphism_to_obj(result.gauge),
        "transported_multiplication": morphism_to_obj(result.m_f),
        "unit_of_original": morphism_to_obj(result.u_tilde),
    }


def cmd_invert(sf: SpecFile, args) -> dict:
    mname, mor = _pick(sf.morphisms, "morphism", sf.task, args.morphism)
    filt_arg = args.filtration or sf.task.get("filtration", "grading")
    filtration = _load_filtration(filt_arg, mor.coalgebra)
    try:
        inv = takeuchi_invert(mor, filtration)
    except NotInvertible as exc:
        raise MathFailure(str(exc)) from exc
    print(f"morphism {mname} inverted; both inverse identities verified exactly")
    return {"morphism": mname, "inverse": morphism_to_obj(inv)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convdef",
        description="Exact deformation computations over coalgebra extensions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **extra):
        p = sub.add_parser(name)
        p.add_argument("specfile")
        p.add_argument("--out", help="write a machine-readable JSON report here")
        p.add_argument("--algebra", help="algebra block to use")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate)
    p = add("cohomology", cmd_cohomology)
    p.add_argument("--degree", type=int)
    p.add_argument("--comodule")
    for name, fn in (("obstruct", cmd_obstruct), ("deform", cmd_deform), ("classify", cmd_classify)):
        p = add(name, fn)
        p.add_argument("--cocycle")
    p = add("series", cmd_series)
    p.add_argument("--max-degree", dest="max_degree", type=int)
    p.add_argument("--strategy", help="first | all | file:<cochain-path>")
    p.add_argument("--coalgebra")
    p = add("unit-gauge", cmd_unit_gauge)
    p.add_argument("--base-algebra", dest="base_algebra")
    p = add("invert", cmd_invert)
    p.add_argument("--morphism")
    p.add_argument("--filtration", help="grading | file:<path>")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        strict = args.command != "validate"
        sf, failures = parse_path(args.specfile, strict=strict)
        if args.command == "validate":
            payload = cmd_validate(sf, failures, args)
        else:
            payload = args.fn(sf, args)
        _write_out(args.out, dict(_report_header(sf, args.command), **payload))
        return 0
    except SpecFileError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except MathFailure as exc:
        print(f"no: {exc}", file=sys.stderr)
        return 2
    except ConvDefError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
