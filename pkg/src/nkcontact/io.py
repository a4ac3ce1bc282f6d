"""Reading and writing manifold spec files.

A spec file is UTF-8 JSON::

    {
      "m": 1,
      "metric": "identity",
      "brackets": [{"i": 1, "j": 2, "k": 3, "c": "3/2"}, ...],
      "contact": {"zeta": ["1", "0", "0"],
                  "phi": [["0","0","0"], ["0","0","-1"], ["0","1","0"]],
                  "eta": ["1", "0", "0"]},
      "soliton": {"kind": "star-conformal-einstein", "V": "unknown",
                  "omega": "unknown", "p": "0"}
    }

Indices are 1-based.  Only ``i < j`` bracket entries are listed; repeated
``(i, j, k)`` entries are summed.  ``phi[a][b]`` is the ``e_a`` component of
``φ(e_b)``.  ``eta`` defaults to the metric dual of ``zeta``; ``soliton`` is
optional.  Rationals are strings (``"p/q"``) or integers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .contact import ContactStructure, build_standard_example, validate_structure
from .exact import Tensor, format_rational, parse_rational
from .frame import FrameManifold, GeometryError, jacobi_check
from .soliton import SolitonKind, SolitonSpec


class SpecError(ValueError):
    """Malformed or invalid spec file.  ``where`` locates the problem, either
    ``line L, column C`` or a JSON path such as ``brackets[2].c``."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


_KIND_ALIASES = {
    "e": SolitonKind.EINSTEIN,
    "ce": SolitonKind.CONFORMAL_EINSTEIN,
    "*-ricci": SolitonKind.STAR_RICCI,
    "*-ce": SolitonKind.STAR_CONFORMAL_EINSTEIN,
    "*-cge": SolitonKind.STAR_CONFORMAL_GRADIENT_EINSTEIN,
}


def bundled_specs() -> list[str]:
    root = resources.files("nkcontact") / "data"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def _read_text(path) -> tuple[str, str]:
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8"), str(p)
    name = p.name if p.suffix else p.name + ".json"
    if p.parent == Path(".") and name in bundled_specs():
        return (resources.files("nkcontact") / "data" / name).read_text(encoding="utf-8"), name
    raise SpecError(f"no such spec file: {path}")


def _rational(value, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except (TypeError, ValueError) as exc:
        raise SpecError(str(exc), where) from None


def _rational_list(values, n: int, where: str) -> list[Fraction]:
    if not isinstance(values, list) or len(values) != n:
        raise SpecError(f"expected a list of {n} rationals", where)
    return [_rational(v, f"{where}[{i}]") for i, v in enumerate(values)]


def _int(value, where: str, lo: int, hi: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError("expected an integer", where)
    if value < lo or (hi is not None and value > hi):
        raise SpecError(f"{value} out of range [{lo}, {hi if hi is not None else '...'}]", where)
    return value


def _parse_manifold(doc: dict) -> FrameManifold:
    if "m" not in doc:
        raise SpecError("missing key", "m")
    m = _int(doc["m"], "m", 1)
    n = 2 * m + 1
    metric = doc.get("metric", "identity")
    if metric != "identity":
        raise SpecError("only the identity metric (orthonormal frame) is supported", "metric")
    entries = doc.get("brackets", [])
    if not isinstance(entries, list):
        raise SpecError("expected a list", "brackets")
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for idx, entry in enumerate(entries):
        where = f"brackets[{idx}]"
        if not isinstance(entry, dict) or set(entry) != {"i", "j", "k", "c"}:
            raise SpecError('expected an object with keys "i", "j", "k", "c"', where)
        i = _int(entry["i"], where + ".i", 1, n)
        j = _int(entry["j"], where + ".j", 1, n)
        k = _int(entry["k"], where + ".k", 1, n)
        if i >= j:
            raise SpecError("list only entries with i < j", where)
        coeffs = table.setdefault((i, j), {})
        coeffs[k] = coeffs.get(k, Fraction(0)) + _rational(entry["c"], where + ".c")
    try:
        M = FrameManifold.from_brackets(m, table)
    except GeometryError as exc:
        raise SpecError(str(exc), "brackets") from None
    ok, bad = jacobi_check(M)
    if not ok:
        i, j, k = bad[0]
        raise SpecError(f"Jacobi identity fails for (e{i}, e{j}, e{k})", "brackets")
    return M


def _parse_contact(doc: dict, M: FrameManifold) -> ContactStructure:
    c = doc.get("contact")
    if not isinstance(c, dict):
        raise SpecError("missing or malformed contact section", "contact")
    n = M.dim
    zeta = _rational_list(c.get("zeta"), n, "contact.zeta")
    rows = c.get("phi")
    if not isinstance(rows, list) or len(rows) != n:
        raise SpecError(f"expected {n} rows", "contact.phi")
    phi = [_rational_list(r, n, f"contact.phi[{a}]") for a, r in enumerate(rows)]
    eta = _rational_list(c["eta"], n, "contact.eta") if "eta" in c else None
    return ContactStructure.from_data(M, phi, zeta, eta)


def _parse_soliton(doc: dict, n: int) -> SolitonSpec | None:
    s = doc.get("soliton")
    if s is None:
        return None
    if not isinstance(s, dict):
        raise SpecError("expected an object", "soliton")
    raw = str(s.get("kind", SolitonKind.STAR_CONFORMAL_EINSTEIN.value)).lower()
    try:
        kind = _KIND_ALIASES.get(raw) or SolitonKind(raw)
    except ValueError:
        choices = ", ".join(k.value for k in SolitonKind)
        raise SpecError(f"unknown kind {raw!r} (choose from {choices})", "soliton.kind") from None
    V = s.get("V", "unknown")
    V = None if V == "unknown" else Tensor.vector(_rational_list(V, n, "soliton.V"))
    omega = s.get("omega", "unknown")
    omega = None if omega == "unknown" else _rational(omega, "soliton.omega")
    p = _rational(s.get("p", 0), "soliton.p")
    return SolitonSpec(kind, V, omega, p)


def parse_spec(text: str, strict: bool = True):
    """Parse spec text into ``(FrameManifold, ContactStructure, SolitonSpec | None)``.

    With ``strict`` the structure equations are enforced at load and the first
    violated one is named in the error.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise SpecError("top level must be an object", "line 1, column 1")
    M = _parse_manifold(doc)
    try:
        S = _parse_contact(doc, M)
    except GeometryError as exc:
        raise SpecError(str(exc), "contact") from None
    if strict:
        bad = validate_structure(M, S).first_failure()
        if bad is not None:
            raise SpecError(f"{bad.tag} violated: {bad.name} (residual {format_rational(bad.residual)})",
                            "contact")
    return M, S, _parse_soliton(doc, M.dim)


def load_spec(path, strict: bool = True):
    """Load a spec file, or a bundled spec by name (``"standard-delta-half"``)."""
    text, _ = _read_text(path)
    return parse_spec(text, strict)


def _bracket_entries(M: FrameManifold) -> list[dict]:
    out = []
    n = M.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                c = M.structure[i, j, k]
                if c != 0:
                    out.append({"i": i + 1, "j": j + 1, "k": k + 1, "c": format_rational(c)})
    return out


def spec_document(M: FrameManifold, S: ContactStructure, soliton: SolitonSpec | None = None) -> dict:
    phi = S.phi.components.T
    doc = {
        "m": M.m,
        "metric": "identity",
        "brackets": _bracket_entries(M),
        "contact": {
            "zeta": [format_rational(x) for x in S.zeta.components],
            "phi": [[format_rational(x) for x in row] for row in phi],
            "eta": [format_rational(x) for x in S.eta.components],
        },
    }
    if soliton is not None:
        doc["soliton"] = {
            "kind": soliton.kind.value,
            "V": "unknown" if soliton.V is None else [format_rational(x) for x in soliton.V.components],
            "omega": "unknown" if soliton.omega is None else format_rational(soliton.omega),
            "p": format_rational(soliton.p),
        }
    return doc


def dump_spec(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def emit_standard_spec(delta, soliton: SolitonSpec | None = None) -> str:
    """Spec text for the three-dimensional N(1-δ²) frame."""
    ex = build_standard_example(delta)
    if soliton is None:
        soliton = SolitonSpec(SolitonKind.STAR_CONFORMAL_EINSTEIN)
    return dump_spec(spec_document(ex.manifold, ex.structure, soliton))

