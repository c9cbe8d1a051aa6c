"""Fixed-format MPS export and a reference reader for round-trips.

The writer emits NAME, OBJSENSE, ROWS, COLUMNS (with INTORG/INTEND markers),
RHS, BOUNDS and ENDATA. One coefficient per COLUMNS line keeps the value
field free of the classic 12-character limit so float64 values survive a
round-trip exactly. Binaries are declared through BV bound records; general
integers get explicit LO/UP (or PL) records inside the integrality markers.
"""

from __future__ import annotations

import math

from .model import MilpModel, Relation, Sense, VarKind

_ROW_TYPE = {Relation.LE: "L", Relation.GE: "G", Relation.EQ: "E"}
_TYPE_ROW = {"L": Relation.LE, "G": Relation.GE, "E": Relation.EQ}


def _row_name(cid: int) -> str:
    return f"R{cid:07d}"


def _col_name(vid: int) -> str:
    return f"C{vid:07d}"


def _num(x: float) -> str:
    return f"{x:.17g}"


def _entry(col: str, row: str, value: float) -> str:
    return f"    {col:<10}{row:<10}{_num(value)}"


def write_mps(model: MilpModel, name: str | None = None) -> str:
    """Serialize the model; ``parse_mps`` recovers an identical matrix."""
    lines = [f"NAME          {name or model.name}"]
    lines.append("OBJSENSE")
    lines.append(f"    {'MAX' if model.sense is Sense.MAX else 'MIN'}")
    lines.append("ROWS")
    lines.append(" N  OBJ")
    for c in model.constraints:
        lines.append(f" {_ROW_TYPE[c.relation]}  {_row_name(c.cid)}")

    by_col: dict[int, list[tuple[str, float]]] = {v.vid: [] for v in model.variables}
    for c in model.constraints:
        for vid, coef in sorted(c.coeffs.items()):
            by_col[vid].append((_row_name(c.cid), coef))

    lines.append("COLUMNS")
    in_int = False
    marker = 0
    for v in model.variables:
        want_int = v.is_integer
        if want_int != in_int:
            tag = "INTORG" if want_int else "INTEND"
            lines.append(f"    MARKER{marker:04d}{'':4}'MARKER'{'':17}'{tag}'")
            marker += 1
            in_int = want_int
        cname = _col_name(v.vid)
        lines.append(_entry(cname, "OBJ", v.obj))
        for rname, coef in by_col[v.vid]:
            lines.append(_entry(cname, rname, coef))
    if in_int:
        lines.append(f"    MARKER{marker:04d}{'':4}'MARKER'{'':17}'INTEND'")

    lines.append("RHS")
    for c in model.constraints:
        if c.rhs != 0.0:
            lines.append(_entry("RHS", _row_name(c.cid), c.rhs))

    lines.append("BOUNDS")
    for v in model.variables:
        cname = _col_name(v.vid)
        if v.kind is VarKind.BINARY and v.lb == 0.0 and v.ub == 1.0:
            lines.append(f" BV BND       {cname}")
            continue
        if v.lb == v.ub:
            lines.append(f" FX BND       {cname:<10}{_num(v.lb)}")
            continue
        if math.isinf(v.lb) and v.lb < 0:
            lines.append(f" MI BND       {cname}")
        elif v.lb != 0.0 or v.is_integer:
            lines.append(f" LO BND       {cname:<10}{_num(v.lb)}")
        if math.isinf(v.ub):
            if v.is_integer:
                lines.append(f" PL BND       {cname}")
        else:
            lines.append(f" UP BND       {cname:<10}{_num(v.ub)}")

    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def parse_mps(text: str) -> MilpModel:
    """Read the dialect produced by write_mps (whitespace-tolerant)."""
    sense = Sense.MIN
    rows: list[tuple[str, str]] = []          # (type, name) in order
    col_order: list[str] = []
    col_int: dict[str, bool] = {}
    col_coeffs: dict[str, dict[str, float]] = {}
    col_obj: dict[str, float] = {}
    rhs: dict[str, float] = {}
    bounds: dict[str, dict[str, float | bool]] = {}
    obj_name: str | None = None

    section = None
    expect_objsense = False
    in_int = False
    for raw in text.splitlines():
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        if raw[0] not in " \t":
            head = raw.split()
            section = head[0].upper()
            expect_objsense = section == "OBJSENSE"
            if section == "OBJSENSE" and len(head) > 1:
                sense = Sense.MAX if head[1].upper() == "MAX" else Sense.MIN
                expect_objsense = False
            if section == "ENDATA":
                break
            continue
        parts = raw.split()
        if expect_objsense:
            sense = Sense.MAX if parts[0].upper() == "MAX" else Sense.MIN
            expect_objsense = False
            continue
        if section == "ROWS":
            rtype, rname = parts[0].upper(), parts[1]
            if rtype == "N":
                if obj_name is None:
                    obj_name = rname
            else:
                rows.append((rtype, rname))
        elif section == "COLUMNS":
            if "'MARKER'" in raw:
                in_int = "'INTORG'" in raw
                continue
            cname = parts[0]
            if cname not in col_coeffs:
                col_order.append(cname)
                col_coeffs[cname] = {}
                col_obj[cname] = 0.0
                col_int[cname] = in_int
            for rname, val in zip(parts[1::2], parts[2::2]):
                if rname == obj_name:
                    col_obj[cname] += float(val)
                else:
                    col_coeffs[cname][rname] = col_coeffs[cname].get(rname, 0.0) + float(val)
        elif section == "RHS":
            for rname, val in zip(parts[1::2], parts[2::2]):
                rhs[rname] = float(val)
        elif section == "BOUNDS":
            btype = parts[0].upper()
            cname = parts[2]
            spec = bounds.setdefault(cname, {})
            if btype == "BV":
                spec["binary"] = True
            elif btype == "FX":
                spec["lb"] = spec["ub"] = float(parts[3])
            elif btype in ("LO", "LI"):
                spec["lb"] = float(parts[3])
            elif btype in ("UP", "UI"):
                spec["ub"] = float(parts[3])
            elif btype == "MI":
                spec["lb"] = -math.inf
            elif btype == "PL":
                spec["ub"] = math.inf

    model = MilpModel(sense=sense)
    name_to_vid: dict[str, int] = {}
    for cname in col_order:
        spec = bounds.get(cname, {})
        if spec.get("binary"):
            kind, lb, ub = VarKind.BINARY, 0.0, 1.0
        else:
            kind = VarKind.INTEGER if col_int[cname] else VarKind.CONTINUOUS
            lb = float(spec.get("lb", 0.0))
            ub = float(spec.get("ub", math.inf))
        name_to_vid[cname] = model.add_variable(
            kind, lb=lb, ub=ub, obj=col_obj[cname], name=cname
        )
    for rtype, rname in rows:
        coeffs = {
            name_to_vid[cname]: col_coeffs[cname][rname]
            for cname in col_order
            if rname in col_coeffs[cname]
        }
        model.add_constraint(coeffs, _TYPE_ROW[rtype], rhs.get(rname, 0.0), name=rname)
    return model
