"""Text and JSON formats: Grassmann expressions, supermatrices, multivectors, coordinates."""
from __future__ import annotations

import re
from fractions import Fraction

from .galgebra import EVEN, ODD, GrassmannElement, zero
from .smatrix import SuperMatrix, SuperShape


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, diagnostics=None):
        self.message = message
        self.position = position
        self.diagnostics = diagnostics or ([(position, message)] if position is not None else [])
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<gen>t\d+)|(?P<op>[+\-*]))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos + (len(text[pos:]) - len(text[pos:].lstrip())))
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def max_generator(text: str) -> int:
    return max((int(g) for g in re.findall(r"t(\d+)", text)), default=0)


def parse_expr(text: str, n: int | None = None) -> GrassmannElement:
    """Parse 'term (('+'|'-') term)*' where a term is a rational times generators.

    n is the generator budget; by default the largest index that occurs.
    """
    if n is None:
        n = max_generator(text)
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty expression", 0)
    i = 0
    total = zero(n)
    first = True
    while i < len(toks):
        sign = 1
        if toks[i][0] == "op" and toks[i][1] in "+-":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError("expected '+' or '-'", toks[i][2])
        first = False
        if i >= len(toks):
            raise ParseError("missing term", len(text))
        coeff = Fraction(1)
        gens = []
        seen_factor = False
        while i < len(toks):
            kind, val, pos = toks[i]
            if kind == "op" and val == "*":
                if not seen_factor or i + 1 >= len(toks) or toks[i + 1][0] == "op":
                    raise ParseError("dangling '*'", pos)
                i += 1
                continue
            if kind == "op":
                break
            if kind == "num":
                if gens or (seen_factor and toks[i - 1][1] != "*"):
                    raise ParseError("rational must lead the term", pos)
                if seen_factor:
                    raise ParseError("only one rational per term", pos)
                num, _, den = val.partition("/")
                if den and int(den) == 0:
                    raise ParseError("zero denominator", pos)
                coeff = Fraction(int(num), int(den) if den else 1)
            else:
                g = int(val[1:])
                if g < 1 or g > n:
                    raise ParseError(f"unknown generator t{g} (context has {n})", pos)
                if g in gens:
                    raise ParseError(f"repeated generator t{g} in one monomial", pos)
                gens.append(g)
            seen_factor = True
            i += 1
        if not seen_factor:
            raise ParseError("missing term", toks[i][2] if i < len(toks) else len(text))
        total = total + GrassmannElement.monomial(gens, n, coeff * sign)
    return total


def format_expr(x: GrassmannElement) -> str:
    return str(x)


# supermatrices

_PARITY_CODES = {"e": EVEN, "o": ODD, "0": EVEN, "1": ODD}


def _parities(labels, what):
    try:
        return [_PARITY_CODES[str(p)] for p in labels]
    except KeyError as exc:
        raise ParseError(f"bad parity label {exc.args[0]!r} in {what}") from None


def parse_matrix(doc: dict, n: int | None = None, strict: bool = False) -> SuperMatrix:
    rows = _parities(doc.get("row_parities", []), "row_parities")
    cols = _parities(doc.get("col_parities", []), "col_parities")
    texts = doc.get("entries", [])
    if len(texts) != len(rows):
        raise ParseError(f"shape mismatch: {len(texts)} rows for {len(rows)} row parities")
    for k, r in enumerate(texts):
        if len(r) != len(cols):
            raise ParseError(f"shape mismatch: row {k} has {len(r)} entries for {len(cols)} columns")
    if n is None:
        n = doc.get("generators")
    if n is None:
        n = max((max_generator(str(x)) for r in texts for x in r), default=0)
    entries = []
    for i, r in enumerate(texts):
        row = []
        for j, x in enumerate(r):
            try:
                row.append(parse_expr(str(x), n))
            except ParseError as exc:
                raise ParseError(f"entry ({i},{j}): {exc.message}", exc.position) from None
        entries.append(row)
    M = SuperMatrix(rows, cols, entries, n)
    if strict:
        bad = M.parity_violations()
        if bad:
            cells = ", ".join(f"({i},{j})" for i, j in bad)
            raise ParseError(f"parity violation in cells {cells}", diagnostics=[(None, f"cell {c}") for c in bad])
    return M


def matrix_to_json(M: SuperMatrix) -> dict:
    code = {EVEN: "e", ODD: "o"}
    return {
        "generators": M.n,
        "row_parities": [code[p] for p in M.rows],
        "col_parities": [code[p] for p in M.cols],
        "entries": [[str(x) for x in r] for r in M.entries],
    }


def parse_shape(text: str) -> SuperShape:
    try:
        return SuperShape.parse(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def element_json(x):
    return None if x is None else str(x)


def _parse_entry(text, n, where):
    if text is None:
        return None
    try:
        return parse_expr(str(text), n)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc.message}", exc.position) from None


def _max_gen(values) -> int:
    return max((max_generator(str(v)) for v in values if v is not None), default=0)


# multivectors


def multivector_to_json(T) -> dict:
    from .plucker_algebraic import format_tuple

    return {
        "degree": T.degree,
        "ambient": str(T.ambient),
        "generators": T.gens,
        "components": {format_tuple(t): str(x) for t, x in sorted(T.components.items())},
    }


def parse_multivector(doc: dict):
    from .plucker_algebraic import Multivector, parse_tuple

    try:
        k = int(doc["degree"])
        ambient = parse_shape(str(doc["ambient"]))
        comps = doc.get("components", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad multivector document: {exc}") from None
    n = doc.get("generators")
    if n is None:
        n = _max_gen(comps.values())
    parsed = {}
    for key, text in comps.items():
        try:
            t = parse_tuple(key)
        except ValueError:
            raise ParseError(f"bad tuple key {key!r}") from None
        parsed[t] = _parse_entry(text, n, f"component {key}")
    try:
        return Multivector(k, ambient, n, parsed)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# essential coordinates


def coords_to_json(c) -> dict:
    from .plucker_general import FAMILIES, format_key

    out = {"ambient": str(c.ambient), "shape": str(c.shape), "generators": c.gens}
    for name in FAMILIES:
        out[name] = {format_key(k): element_json(v) for k, v in c.family(name).items()}
    return out


def parse_coords(doc: dict):
    from .plucker_general import FAMILIES, EssentialCoords, coordinate_keys, parse_key

    try:
        ambient = parse_shape(str(doc["ambient"]))
        shape = parse_shape(str(doc["shape"]))
    except KeyError as exc:
        raise ParseError(f"coordinates document lacks {exc}") from None
    n = doc.get("generators")
    if n is None:
        n = _max_gen(v for f in FAMILIES for v in doc.get(f, {}).values())
    c = EssentialCoords(ambient, shape, n)
    expected = coordinate_keys(shape, ambient)
    for name in FAMILIES:
        allowed = set(expected[name])
        for key, text in doc.get(name, {}).items():
            try:
                k = parse_key(key)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
            if k not in allowed:
                raise ParseError(f"{name}: {key!r} is not a canonical key for shape {shape} in {ambient}")
            c.family(name)[k] = _parse_entry(text, n, f"{name} {key}")
        missing = allowed - set(c.family(name))
        if missing:
            from .plucker_general import format_key

            raise ParseError(f"{name}: missing {len(missing)} entries, e.g. {format_key(sorted(missing)[0])}")
    return c


# cluster states


def cluster_to_json(state, case: str | None = None) -> dict:
    from .clusters import sort_symbols

    values = state.assignment
    gens = next(iter(values.values())).n if values else 0
    doc = {"cluster": str(state.label), "generators": gens, "values": {k: str(values[k]) for k in sort_symbols(values)}}
    if case is not None:
        doc = {"case": case, **doc}
    return doc


def parse_cluster_label(text: str):
    """'T13,T14|th1,th4' (parentheses and spaces optional)."""
    from .clusters import ClusterLabel, parse_symbol

    body = text.strip().strip("()")
    if "|" not in body:
        raise ParseError(f"bad cluster {text!r}; expected 'T13,T14|th1,th4'")
    ev, od = body.split("|", 1)
    try:
        diag = [parse_symbol(x)[1:] for x in ev.split(",") if x.strip()]
        odd = [parse_symbol(x)[1] for x in od.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return ClusterLabel.make(diag, odd)


def parse_cluster_state(doc: dict, graph):
    from .clusters import make_cluster

    label = parse_cluster_label(doc["cluster"])
    values = doc.get("values", {})
    n = doc.get("generators")
    if n is None:
        n = _max_gen(values.values())
    vals = {k: _parse_entry(v, n, k) for k, v in values.items()}
    return make_cluster(graph, label, vals)


__all__ = [
    "ParseError",
    "cluster_to_json",
    "coords_to_json",
    "multivector_to_json",
    "parse_cluster_label",
    "parse_cluster_state",
    "parse_coords",
    "parse_multivector",
    "parse_expr",
    "format_expr",
    "parse_matrix",
    "matrix_to_json",
    "parse_shape",
]
