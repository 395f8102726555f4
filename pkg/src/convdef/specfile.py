"""The batch input format: a self-contained JSON document.

One file declares a base field, named coalgebras (sparse Delta triples by
basis name), comodules, 2-cocycles, algebras (per-basis multiplication
matrices), morphisms, and a task block with command defaults.  Scalars
are exact: integers or strings like "3/2".  `parse` returns a validated
object graph or a SpecFileError whose kind distinguishes io, syntax,
reference, dimension and axiom failures; `serialize` is the exact
inverse on domain objects and is byte-deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any

from .coalgebra import Coalgebra
from .cohomology import Cochain
from .convolution import ConvMorphism, MultiMap
from .deformation import AlgebraMC, is_unit_of
from .cohomology import is_associative
from .errors import ConvDefError, SpecFileError
from .extension import Cocycle2, Comodule
from .fields import Field, field_by_name
from .linalg import Matrix

SCHEMA = "convdef-spec v1"
REPORT_SCHEMA = "convdef-report v1"


@dataclass
class SpecFile:
    field: Field
    coalgebras: dict[str, Coalgebra] = dc_field(default_factory=dict)
    comodules: dict[str, Comodule] = dc_field(default_factory=dict)
    cocycles: dict[str, Cocycle2] = dc_field(default_factory=dict)
    algebras: dict[str, AlgebraMC] = dc_field(default_factory=dict)
    morphisms: dict[str, ConvMorphism] = dc_field(default_factory=dict)
    task: dict[str, Any] = dc_field(default_factory=dict)


def _need(obj: dict, key: str, kind: str, where: str):
    if key not in obj:
        raise SpecFileError(kind, f"missing key {key!r} in {where}")
    return obj[key]


def _scalar(f: Field, x, where: str):
    if isinstance(x, bool) or isinstance(x, float):
        raise SpecFileError("syntax", f"non-exact scalar literal {x!r} in {where}")
    if not isinstance(x, (int, str)):
        raise SpecFileError("syntax", f"bad scalar literal {x!r} in {where}")
    try:
        return f.coerce(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SpecFileError("syntax", f"bad scalar {x!r} in {where}: {exc}") from exc


def _matrix(f: Field, rows_spec, nrows: int, ncols: int, where: str) -> Matrix:
    if not isinstance(rows_spec, list) or len(rows_spec) != nrows:
        raise SpecFileError("dimension", f"{where} must be a {nrows}x{ncols} matrix")
    rows = []
    for r in rows_spec:
        if not isinstance(r, list) or len(r) != ncols:
            raise SpecFileError("dimension", f"{where} must be a {nrows}x{ncols} matrix")
        rows.append([_scalar(f, x, where) for x in r])
    return Matrix.from_rows(f, rows)


def _vector(f: Field, vec_spec, n: int, where: str):
    if not isinstance(vec_spec, list) or len(vec_spec) != n:
        raise SpecFileError("dimension", f"{where} must be a vector of length {n}")
    return [_scalar(f, x, where) for x in vec_spec]


def _parse_coalgebra(f: Field, name: str, block: dict) -> Coalgebra:
    where = f"coalgebra {name!r}"
    basis = _need(block, "basis", "dimension", where)
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis) or not basis:
        raise SpecFileError("dimension", f"{where}: basis must be a nonempty list of names")
    if len(set(basis)) != len(basis):
        raise SpecFileError("reference", f"{where}: duplicate basis names")
    index = {b: i for i, b in enumerate(basis)}

    def look(n_: str, what: str) -> int:
        if n_ not in index:
            raise SpecFileError("reference", f"{where}: {what} references unknown basis name {n_!r}")
        return index[n_]

    delta = [[] for _ in basis]
    for triple in _need(block, "delta", "dimension", where):
        if not isinstance(triple, list) or len(triple) != 4:
            raise SpecFileError("dimension", f"{where}: delta entries are [src, left, right, coeff]")
        src, left, right, coeff = triple
        delta[look(src, "delta")].append(
            (look(left, "delta"), look(right, "delta"), _scalar(f, coeff, where))
        )
    counit_spec = block.get("counit", {})
    if not isinstance(counit_spec, dict):
        raise SpecFileError("dimension", f"{where}: counit must map basis names to scalars")
    counit = [f.zero] * len(basis)
    for n_, v in counit_spec.items():
        counit[look(n_, "counit")] = _scalar(f, v, where)
    grading = None
    if "degrees" in block:
        deg_spec = block["degrees"]
        if not isinstance(deg_spec, dict):
            raise SpecFileError("dimension", f"{where}: degrees must map basis names to integers")
        grading = [0] * len(basis)
        for n_, v in deg_spec.items():
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise SpecFileError("dimension", f"{where}: degree of {n_!r} must be a nonnegative int")
            grading[look(n_, "degrees")] = v
    return Coalgebra(f, basis, delta, counit, grading=grading)


def _parse_comodule(f: Field, name: str, block: dict, coalgebras: dict[str, Coalgebra]) -> Comodule:
    where = f"comodule {name!r}"
    base_name = _need(block, "base", "reference", where)
    if base_name not in coalgebras:
        raise SpecFileError("reference", f"{where}: unknown coalgebra {base_name!r}")
    base = coalgebras[base_name]
    basis = _need(block, "basis", "dimension", where)
    if not isinstance(basis, list) or not basis:
        raise SpecFileError("dimension", f"{where}: basis must be a nonempty list of names")
    xindex = {b: i for i, b in enumerate(basis)}
    cindex = {b: i for i, b in enumerate(base.names)}
    coaction = [[] for _ in basis]
    for triple in _need(block, "coaction", "dimension", where):
        if not isinstance(triple, list) or len(triple) != 4:
            raise SpecFileError("dimension", f"{where}: coaction entries are [src, x, c, coeff]")
        src, xo, co, coeff = triple
        if src not in xindex or xo not in xindex:
            raise SpecFileError("reference", f"{where}: unknown X basis name in {triple[:3]!r}")
        if co not in cindex:
            raise SpecFileError("reference", f"{where}: unknown coalgebra basis name {co!r}")
        coaction[xindex[src]].append((xindex[xo], cindex[co], _scalar(f, coeff, where)))
    return Comodule(base, len(basis), coaction)


def _parse_cocycle(
    f: Field, name: str, block: dict, comodules: dict[str, Comodule], xnames: dict[str, list[str]]
) -> Cocycle2:
    where = f"cocycle {name!r}"
    com_name = _need(block, "comodule", "reference", where)
    if com_name not in comodules:
        raise SpecFileError("reference", f"{where}: unknown comodule {com_name!r}")
    com = comodules[com_name]
    names = xnames[com_name]
    xindex = {b: i for i, b in enumerate(names)}
    cindex = {b: i for i, b in enumerate(com.base.names)}
    omega = [[] for _ in range(com.dim)]
    for triple in block.get("omega", []):
        if not isinstance(triple, list) or len(triple) != 4:
            raise SpecFileError("dimension", f"{where}: omega entries are [src, c, c, coeff]")
        src, ca, cb, coeff = triple
        if src not in xindex:
            raise SpecFileError("reference", f"{where}: unknown X basis name {src!r}")
        if ca not in cindex or cb not in cindex:
            raise SpecFileError("reference", f"{where}: unknown coalgebra basis name in {triple!r}")
        omega[xindex[src]].append((cindex[ca], cindex[cb], _scalar(f, coeff, where)))
    return Cocycle2(com, omega)


def _parse_algebra(f: Field, name: str, block: dict, coalgebras: dict[str, Coalgebra]) -> AlgebraMC:
    where = f"algebra {name!r}"
    over = _need(block, "over", "reference", where)
    if over not in coalgebras:
        raise SpecFileError("reference", f"{where}: unknown coalgebra {over!r}")
    c = coalgebras[over]
    dim = block.get("dim")
    if dim is None and "basis" in block:
        dim = len(block["basis"])
    if not isinstance(dim, int) or dim < 1:
        raise SpecFileError("dimension", f"{where}: positive dimension required (dim or basis)")
    mult = block.get("mult", {})
    if not isinstance(mult, dict):
        raise SpecFileError("dimension", f"{where}: mult must map coalgebra basis names to matrices")
    comps = []
    for i, cname in enumerate(c.names):
        if cname in mult:
            comps.append(MultiMap(dim, 2, 1, _matrix(f, mult[cname], dim, dim * dim, f"{where}.mult[{cname}]")))
        else:
            comps.append(MultiMap.zero(f, dim, 2, 1))
    for key in mult:
        if key not in c.names:
            raise SpecFileError("reference", f"{where}: mult references unknown basis name {key!r}")
    m = ConvMorphism(c, tuple(comps))
    unit = None
    if "unit" in block:
        unit_spec = block["unit"]
        if not isinstance(unit_spec, dict):
            raise SpecFileError("dimension", f"{where}: unit must map basis names to vectors")
        ucomps = []
        for cname in c.names:
            if cname in unit_spec:
                vec = _vector(f, unit_spec[cname], dim, f"{where}.unit[{cname}]")
                ucomps.append(MultiMap(dim, 0, 1, Matrix.column(f, vec)))
            else:
                ucomps.append(MultiMap.zero(f, dim, 0, 1))
        for key in unit_spec:
            if key not in c.names:
                raise SpecFileError("reference", f"{where}: unit references unknown basis name {key!r}")
        unit = ConvMorphism(c, tuple(ucomps))
    return AlgebraMC(m=m, unit=unit)


def _parse_morphism(f: Field, name: str, block: dict, coalgebras: dict[str, Coalgebra]) -> ConvMorphism:
    where = f"morphism {name!r}"
    over = _need(block, "over", "reference", where)
    if over not in coalgebras:
        raise SpecFileError("reference", f"{where}: unknown coalgebra {over!r}")
    c = coalgebras[over]
    a_dim = _need(block, "a_dim", "dimension", where)
    p = block.get("source_arity", 1)
    q = block.get("target_arity", 1)
    if not all(isinstance(v, int) and v >= 0 for v in (a_dim, p, q)) or a_dim < 1:
        raise SpecFileError("dimension", f"{where}: a_dim, source_arity, target_arity must be ints")
    comp_spec = block.get("components", {})
    comps = []
    for cname in c.names:
        if cname in comp_spec:
            comps.append(
                MultiMap(a_dim, p, q, _matrix(f, comp_spec[cname], a_dim**q, a_dim**p, f"{where}[{cname}]"))
            )
        else:
            comps.append(MultiMap.zero(f, a_dim, p, q))
    for key in comp_spec:
        if key not in c.names:
            raise SpecFileError("reference", f"{where}: component for unknown basis name {key!r}")
    return ConvMorphism(c, tuple(comps))


def _axiom_failures(sf: SpecFile) -> list[str]:
    failures = []
    for name, c in sf.coalgebras.items():
        report = c.validate()
        for item in report.failures():
            failures.append(f"coalgebra {name!r}: {item}")
    for name, com in sf.comodules.items():
        for item in com.validate():
            failures.append(f"comodule {name!r}: {item}")
    for name, w in sf.cocycles.items():
        for item in w.validate():
            failures.append(f"cocycle {name!r}: {item}")
    for name, alg in sf.algebras.items():
        if not is_associative(alg.m):
            failures.append(f"algebra {name!r}: associativity")
        if alg.unit is not None and not is_unit_of(alg.m, alg.unit):
            failures.append(f"algebra {name!r}: unit axioms")
    return failures


def parse_text(text: str, strict: bool = True) -> tuple[SpecFile, list[str]]:
    """Parse and validate a spec document.

    Returns (specfile, axiom_failures).  With strict=True any axiom
    failure raises; structural problems (syntax, references, dimensions)
    always raise.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError("syntax", exc.msg, line=exc.lineno, col=exc.colno) from exc
    if not isinstance(doc, dict):
        raise SpecFileError("syntax", "top level must be an object", line=1, col=1)
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise SpecFileError("syntax", f"unknown schema {doc.get('schema')!r}")
    fname = _need(doc, "field", "syntax", "document")
    try:
        f = field_by_name(fname) if isinstance(fname, str) else None
    except ValueError as exc:
        raise SpecFileError("syntax", str(exc)) from exc
    if f is None:
        raise SpecFileError("syntax", f"bad field block {fname!r}")
    coalgebras: dict[str, Coalgebra] = {}
    for name, block in sorted(doc.get("coalgebras", {}).items()):
        coalgebras[name] = _parse_coalgebra(f, name, block)
    comodules: dict[str, Comodule] = {}
    xnames: dict[str, list[str]] = {}
    for name, block in sorted(doc.get("comodules", {}).items()):
        comodules[name] = _parse_comodule(f, name, block, coalgebras)
        xnames[name] = list(block["basis"])
    cocycles: dict[str, Cocycle2] = {}
    for name, block in sorted(doc.get("cocycles", {}).items()):
        cocycles[name] = _parse_cocycle(f, name, block, comodules, xnames)
    algebras: dict[str, AlgebraMC] = {}
    for name, block in sorted(doc.get("algebras", {}).items()):
        algebras[name] = _parse_algebra(f, name, block, coalgebras)
    morphisms: dict[str, ConvMorphism] = {}
    for name, block in sorted(doc.get("morphisms", {}).items()):
        morphisms[name] = _parse_morphism(f, name, block, coalgebras)
    task = doc.get("task", {})
    if not isinstance(task, dict):
        raise SpecFileError("syntax", "task block must be an object")
    sf = SpecFile(
        field=f,
        coalgebras=coalgebras,
        comodules=comodules,
        cocycles=cocycles,
        algebras=algebras,
        morphisms=morphisms,
        task=task,
    )
    failures = _axiom_failures(sf)
    if strict and failures:
        raise SpecFileError("axiom", "; ".join(failures))
    return sf, failures


def parse_path(path: str, strict: bool = True) -> tuple[SpecFile, list[str]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecFileError("io", f"cannot read {path}: {exc}") from exc
    return parse_text(text, strict=strict)


# -- serialization ----------------------------------------------------------


def _fmt_matrix(f: Field, m: Matrix) -> list[list[str]]:
    return [[f.fmt(x) for x in row] for row in m.data]


def _coalgebra_dict(c: Coalgebra) -> dict:
    f = c.field
    out: dict[str, Any] = {
        "basis": list(c.names),
        "delta": [
            [c.names[i], c.names[j], c.names[k], f.fmt(v)]
            for i in range(c.dim)
            for j, k, v in c.delta[i]
        ],
        "counit": {c.names[i]: f.fmt(v) for i, v in enumerate(c.counit) if not f.is_zero(v)},
    }
    if c.grading is not None:
        out["degrees"] = {c.names[i]: c.grading[i] for i in range(c.dim)}
    return out


def _comodule_dict(com: Comodule, coalgebras: dict[str, Coalgebra]) -> dict:
    f = com.base.field
    base_name = _name_of(com.base, coalgebras, "comodule base")
    names = [f"x{i}" for i in range(com.dim)]
    return {
        "base": base_name,
        "basis": names,
        "coaction": [
            [names[s], names[t], com.base.names[u], f.fmt(v)]
            for s in range(com.dim)
            for t, u, v in com.coaction[s]
        ],
    }


def _name_of(obj, table: dict, what: str) -> str:
    for name, cand in table.items():
        if cand == obj:
            return name
    raise ConvDefError(f"cannot serialize: {what} is not a named block")


def specfile_to_dict(sf: SpecFile) -> dict:
    f = sf.field
    doc: dict[str, Any] = {"schema": SCHEMA, "field": f.name}
    if sf.coalgebras:
        doc["coalgebras"] = {n: _coalgebra_dict(c) for n, c in sorted(sf.coalgebras.items())}
    if sf.comodules:
        doc["comodules"] = {
            n: _comodule_dict(c, sf.coalgebras) for n, c in sorted(sf.comodules.items())
        }
    if sf.cocycles:
        doc["cocycles"] = {}
        for n, w in sorted(sf.cocycles.items()):
            com_name = _name_of(w.comodule, sf.comodules, "cocycle comodule")
            xn = [f"x{i}" for i in range(w.comodule.dim)]
            doc["cocycles"][n] = {
                "comodule": com_name,
                "omega": [
                    [xn[s], w.comodule.base.names[j], w.comodule.base.names[k], f.fmt(v)]
                    for s in range(w.comodule.dim)
                    for j, k, v in w.omega[s]
                ],
            }
    if sf.algebras:
        doc["algebras"] = {}
        for n, alg in sorted(sf.algebras.items()):
            over = _name_of(alg.coalgebra, sf.coalgebras, "algebra base coalgebra")
            block: dict[str, Any] = {"over": over, "dim": alg.a_dim, "mult": {}}
            for cname, comp in zip(alg.coalgebra.names, alg.m.components):
                if not comp.is_zero():
                    block["mult"][cname] = _fmt_matrix(f, comp.mat)
            if alg.unit is not None:
                block["unit"] = {}
                for cname, comp in zip(alg.coalgebra.names, alg.unit.components):
                    if not comp.is_zero():
                        block["unit"][cname] = [f.fmt(x) for x in comp.mat.col(0)]
            doc["algebras"][n] = block
    if sf.morphisms:
        doc["morphisms"] = {}
        for n, mor in sorted(sf.morphisms.items()):
            over = _name_of(mor.coalgebra, sf.coalgebras, "morphism base coalgebra")
            block = {
                "over": over,
                "a_dim": mor.a_dim,
                "source_arity": mor.src_arity,
                "target_arity": mor.tgt_arity,
                "components": {},
            }
            for cname, comp in zip(mor.coalgebra.names, mor.components):
                if not comp.is_zero():
                    block["components"][cname] = _fmt_matrix(f, comp.mat)
            doc["morphisms"][n] = block
    if sf.task:
        doc["task"] = sf.task
    return doc


def serialize(sf: SpecFile) -> str:
    return json.dumps(specfile_to_dict(sf), sort_keys=True, indent=2) + "\n"


# -- report helpers ---------------------------------------------------------


def cochain_to_obj(nu: Cochain) -> list[list[list[str]]]:
    f = nu.field
    return [_fmt_matrix(f, m.mat) for m in nu.maps]


def morphism_to_obj(mor: ConvMorphism) -> dict[str, list[list[str]]]:
    f = mor.field
    return {
        name: _fmt_matrix(f, comp.mat)
        for name, comp in zip(mor.coalgebra.names, mor.components)
    }


def render_report(payload: dict) -> str:
    """Stable machine-readable report: versioned, sorted, all scalars exact strings."""
    doc = {"schema_version": REPORT_SCHEMA}
    doc.update(payload)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
