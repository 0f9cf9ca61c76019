"""JSON interchange and LaTeX emission for tables and coproducts.

The JSON schema is flat and order-canonical (generators then table rows
sorted lexicographically, polynomial terms graded-lex), so emitted files
diff cleanly:

  structure:  {"format_version": 1, "type": "lambda_structure",
               "kind": ..., "name": ...,
               "generators": [{"id": ..., "parity": 0|1}, ...],
               "table": [{"left": id, "right": id,
                          "terms": [{"gen": id, "poly": [...]}, ...]}, ...]}
  coproduct:  {..., "type": "coproduct",
               "table": [{"gen": id,
                          "pairs": [{"left": id, "right": id,
                                     "poly": [...]}, ...]}, ...]}

Polynomials use the coefficient encoding of the poly module.
"""

from __future__ import annotations

import json
from typing import Dict, List, Tuple

from .coalgebra import Coproduct
from .conformal import Generator, LambdaStructure, StructureError
from .poly import MultiPoly, poly_from_json, poly_to_json

FORMAT_VERSION = 1


def structure_to_json(S: LambdaStructure) -> dict:
    order = sorted(range(S.rank), key=lambda i: S.generators[i].id)
    rows = []
    for i in order:
        for j in order:
            entries = S.table[(i, j)]
            if not entries:
                continue
            rows.append(
                {
                    "left": S.generators[i].id,
                    "right": S.generators[j].id,
                    "terms": [
                        {"gen": S.generators[k].id, "poly": poly_to_json(p)}
                        for k, p in sorted(
                            entries, key=lambda t: S.generators[t[0]].id
                        )
                    ],
                }
            )
    return {
        "format_version": FORMAT_VERSION,
        "type": "lambda_structure",
        "kind": S.kind,
        "name": S.name,
        "generators": [
            {"id": S.generators[i].id, "parity": S.generators[i].parity}
            for i in order
        ],
        "table": rows,
    }


def structure_from_json(data: dict) -> LambdaStructure:
    if data.get("type") != "lambda_structure":
        raise StructureError("not a lambda_structure document")
    gens = [Generator(g["id"], int(g["parity"])) for g in data["generators"]]
    index = {g.id: i for i, g in enumerate(gens)}
    table: Dict[Tuple[int, int], List[Tuple[int, MultiPoly]]] = {}
    for row in data["table"]:
        key = (index[row["left"]], index[row["right"]])
        table[key] = [
            (index[t["gen"]], poly_from_json(t["poly"])) for t in row["terms"]
        ]
    return LambdaStructure(
        data.get("kind", "lie"), gens, table, name=data.get("name", "imported")
    )


def coproduct_to_json(C: Coproduct) -> dict:
    order = sorted(range(C.rank), key=lambda i: C.generators[i].id)
    rows = []
    for k in order:
        entries = C.table[k]
        if not entries:
            continue
        rows.append(
            {
                "gen": C.generators[k].id,
                "pairs": [
                    {
                        "left": C.generators[i].id,
                        "right": C.generators[j].id,
                        "poly": poly_to_json(q),
                    }
                    for i, j, q in sorted(
                        entries,
                        key=lambda t: (C.generators[t[0]].id, C.generators[t[1]].id),
                    )
                ],
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "type": "coproduct",
        "kind": C.kind,
        "name": C.name,
        "generators": [
            {"id": C.generators[i].id, "parity": C.generators[i].parity}
            for i in order
        ],
        "table": rows,
    }


def coproduct_from_json(data: dict) -> Coproduct:
    if data.get("type") != "coproduct":
        raise StructureError("not a coproduct document")
    gens = [Generator(g["id"], int(g["parity"])) for g in data["generators"]]
    index = {g.id: i for i, g in enumerate(gens)}
    table: Dict[int, List[Tuple[int, int, MultiPoly]]] = {}
    for row in data["table"]:
        table[index[row["gen"]]] = [
            (index[p["left"]], index[p["right"]], poly_from_json(p["poly"]))
            for p in row["pairs"]
        ]
    return Coproduct(
        data.get("kind", "lie"), gens, table, name=data.get("name", "imported")
    )


def dumps(obj) -> str:
    if isinstance(obj, LambdaStructure):
        doc = structure_to_json(obj)
    elif isinstance(obj, Coproduct):
        doc = coproduct_to_json(obj)
    else:
        doc = obj
    return json.dumps(doc, indent=2, sort_keys=False)


def loads(text: str):
    data = json.loads(text)
    if data.get("type") == "lambda_structure":
        return structure_from_json(data)
    if data.get("type") == "coproduct":
        return coproduct_from_json(data)
    raise StructureError("unknown document type")


# ---------------------------------------------------------------------------
# LaTeX


_VAR_TEX = {
    "lam": r"\lambda", "mu": r"\mu", "nu": r"\nu", "d": r"\partial",
    "x1": "x_1", "x2": "x_2", "x3": "x_3", "x4": "x_4",
}


def _coeff_tex(c) -> str:
    from fractions import Fraction

    def frac(f: Fraction) -> str:
        if f.denominator == 1:
            return str(f.numerator)
        return r"\tfrac{%d}{%d}" % (f.numerator, f.denominator)

    if c.im == 0:
        return frac(c.re)
    bpart = r"\beta" if abs(c.im) == 1 else frac(abs(c.im)) + r"\beta"
    if c.im < 0:
        bpart = "-" + bpart
    if c.re == 0:
        return bpart
    return "(%s%s%s)" % (frac(c.re), "+" if c.im > 0 else "", bpart)


def poly_tex(p: MultiPoly, scalar_only=False) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.items():
        mono = "".join(
            _VAR_TEX[v] + ("" if e == 1 else "^{%d}" % e)
            for v, e in sorted(exps.items())
        )
        cs = _coeff_tex(c)
        if mono:
            if cs == "1":
                cs = ""
            elif cs == "-1":
                cs = "-"
            parts.append(cs + mono)
        else:
            parts.append(cs)
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def _gen_tex(g: Generator) -> str:
    return g.latex if g.latex else g.id


def structure_tex(S: LambdaStructure) -> str:
    """One display line per nonzero bracket, in the lambda-bracket notation."""
    lines = []
    op = "[%s_\\lambda\\, %s]" if S.kind == "lie" else "%s_\\lambda\\, %s"
    order = sorted(range(S.rank), key=lambda i: S.generators[i].id)
    for i in order:
        for j in order:
            entries = S.table[(i, j)]
            if not entries:
                continue
            lhs = op % (_gen_tex(S.generators[i]), _gen_tex(S.generators[j]))
            terms = []
            for k, p in sorted(entries, key=lambda t: S.generators[t[0]].id):
                pt = poly_tex(p)
                gt = _gen_tex(S.generators[k])
                if pt == "1":
                    terms.append(gt)
                elif "+" in pt[1:] or "-" in pt[1:]:
                    terms.append("(%s)%s" % (pt, gt))
                else:
                    terms.append("%s\\,%s" % (pt, gt))
            rhs = terms[0]
            for t in terms[1:]:
                rhs += t if t.startswith("-") else "+" + t
            lines.append("%s = %s" % (lhs, rhs))
    return "\n".join(lines)


def _dual_tex(g: Generator) -> str:
    base = g.latex if g.latex else g.id
    if base.endswith("^*"):
        return base
    return base + "^*"


def coproduct_tex(C: Coproduct) -> str:
    r"""delta(g^*) displays: each Q(x1, x2) term becomes d^a g_i^* \otimes d^b g_j^*."""
    sym = r"\delta" if C.kind == "lie" else r"\Delta"
    lines = []
    order = sorted(range(C.rank), key=lambda i: C.generators[i].id)
    for k in order:
        merged = C.normalized(k)
        if not merged:
            continue
        terms = []
        for (i, j) in sorted(
            merged, key=lambda t: (C.generators[t[0]].id, C.generators[t[1]].id)
        ):
            q = merged[(i, j)]
            for exps, c in q.items():
                a = exps.get("x1", 0)
                b = exps.get("x2", 0)
                cs = _coeff_tex(c)
                if cs == "1":
                    cs = ""
                elif cs == "-1":
                    cs = "-"
                lt = _pow_d(a) + _dual_tex(C.generators[i])
                rt = _pow_d(b) + _dual_tex(C.generators[j])
                sep = "\\," if cs not in ("", "-") else ""
                terms.append("%s%s\\otimes %s" % (cs + sep, lt, rt))
        rhs = terms[0]
        for t in terms[1:]:
            rhs += t if t.startswith("-") else "+" + t
        lines.append("%s(%s) = %s" % (sym, _dual_tex(C.generators[k]), rhs))
    return "\n".join(lines)


def _pow_d(e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return r"\partial "
    return r"\partial^{%d} " % e
