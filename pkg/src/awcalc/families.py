"""Family-spec documents: JSON descriptions of an OPS accepted by the CLI.

    {"t": "1/2", "type": "recurrence", "B": [...], "C": [...]}
    {"t": "1/2", "type": "askey-wilson", "a": [a1, a2, a3, a4]}
    {"t": "1/2", "type": "corollary", "case": "I" | "II-a" | "II-b",
     "B0": ..., "B1": ..., "k": 1, "C1": ...}
    {"t": "1/2", "type": "pearson", "phi": [c0, c1, c2], "psi": [e, d]}

Scalars are ints or "num/den" strings.  Polynomial coefficient lists run from
the constant term upwards.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .algebra import QParam, XPoly, to_scalar
from .awfamily import AWParams, PearsonPair, aw_rec, ismail_coeffs, pearson_rec
from .errors import AWCalcError, FamilySpecError
from .opseq import RecurrencePair
from .structrel import CorollaryFamily, classify_case, corollary_family

TYPES = ("recurrence", "askey-wilson", "corollary", "pearson")


def _scalar(value, field: str):
    try:
        return to_scalar(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FamilySpecError(field, f"not a rational scalar ({exc})") from None


def _scalars(values, field: str) -> list:
    if not isinstance(values, list):
        raise FamilySpecError(field, "expected a list")
    return [_scalar(v, f"{field}[{i}]") for i, v in enumerate(values)]


@dataclass
class Family:
    kind: str
    qp: QParam
    doc: dict
    horizon: int
    aw: Optional[AWParams] = None
    corollary: Optional[CorollaryFamily] = None
    given_pair: Optional[PearsonPair] = None
    given_rec: Optional[RecurrencePair] = None

    def recurrence(self, N: int) -> RecurrencePair:
        """B_0..B_{N-1} and C_1..C_N."""
        if self.kind == "recurrence":
            rec = self.given_rec
            if len(rec.B) < N:
                raise FamilySpecError("B", f"needs at least {N} entries, has {len(rec.B)}")
            if len(rec.C) < N:
                raise FamilySpecError("C", f"needs at least {N} entries, has {len(rec.C)}")
            return RecurrencePair(rec.B[:N], rec.C[:N])
        if self.kind == "askey-wilson":
            return aw_rec(self.aw, N)
        if self.kind == "corollary":
            if N > self.corollary.N + 2:
                raise FamilySpecError("n", f"corollary family materialized to {self.corollary.N + 2}")
            return RecurrencePair(self.corollary.rec.B[:N], self.corollary.rec.C[:N])
        return pearson_rec(self.given_pair, N)

    def pearson_pair(self) -> Optional[PearsonPair]:
        """A pair with D_q(phi u) = S_q(psi u), psi monic, when the family has one."""
        if self.kind == "askey-wilson":
            phi, psi, _ = ismail_coeffs(self.aw)
            return PearsonPair(phi, psi, self.qp).normalized()
        if self.kind == "corollary":
            return self.corollary.pair
        if self.kind == "pearson":
            return self.given_pair.normalized()
        return None

    def describe(self) -> dict:
        return {"type": self.kind, **{k: v for k, v in self.doc.items() if k != "type"}}


def parse_family(doc: dict, horizon: int = 8) -> Family:
    if not isinstance(doc, dict):
        raise FamilySpecError("(root)", "expected a JSON object")
    if "t" not in doc:
        raise FamilySpecError("t", "missing")
    t = _scalar(doc["t"], "t")
    if not 0 < t < 1:
        raise FamilySpecError("t", f"must lie in (0, 1), got {t}")
    qp = QParam(t)
    kind = doc.get("type")
    if kind not in TYPES:
        raise FamilySpecError("type", f"expected one of {', '.join(TYPES)}, got {kind!r}")

    fam = Family(kind, qp, doc, horizon)
    if kind == "recurrence":
        for key in ("B", "C"):
            if key not in doc:
                raise FamilySpecError(key, "missing")
        B, C = _scalars(doc["B"], "B"), _scalars(doc["C"], "C")
        try:
            fam.given_rec = RecurrencePair(B, C)
        except AWCalcError as exc:
            raise FamilySpecError("C", str(exc)) from None
    elif kind == "askey-wilson":
        a = _scalars(doc.get("a"), "a")
        if len(a) != 4:
            raise FamilySpecError("a", f"expected four parameters, got {len(a)}")
        fam.aw = AWParams(a, qp)
    elif kind == "corollary":
        fam.corollary = _corollary(doc, qp, horizon)
    else:
        phi = XPoly(_scalars(doc.get("phi"), "phi"))
        psi = XPoly(_scalars(doc.get("psi"), "psi"))
        if phi.degree > 2:
            raise FamilySpecError("phi", "degree must be at most 2")
        if psi.degree != 1:
            raise FamilySpecError("psi", "degree must be exactly 1")
        fam.given_pair = PearsonPair(phi, psi, qp)
    return fam


def _corollary(doc: dict, qp: QParam, horizon: int) -> CorollaryFamily:
    case = doc.get("case")
    if case not in ("I", "II-a", "II-b"):
        raise FamilySpecError("case", f"expected I, II-a or II-b, got {case!r}")
    k = doc.get("k")
    if k is not None and k not in (1, -1):
        raise FamilySpecError("k", f"must be 1 or -1, got {k!r}")
    al = qp.alpha
    if case == "II-a" and k is None:
        raise FamilySpecError("k", "required for case II-a")
    if "B0" in doc:
        B0 = _scalar(doc["B0"], "B0")
    elif case == "II-a":
        B0 = k * al
    else:
        raise FamilySpecError("B0", "missing")
    if "B1" in doc:
        B1 = _scalar(doc["B1"], "B1")
    elif case == "I":
        B1 = -B0
    elif case == "II-a":
        B1 = (1 - 4 * al * al) * B0
    else:
        raise FamilySpecError("B1", "missing")
    C1 = _scalar(doc["C1"], "C1") if "C1" in doc else None
    actual = classify_case(B0, B1, qp)
    if actual != case:
        raise FamilySpecError("case", f"(B0, B1) = ({B0}, {B1}) belongs to case {actual}, not {case}")
    return corollary_family(B0, B1, qp, k=k, N=horizon, C1=C1)


def load_family(source: Union[str, Path, dict], horizon: int = 8) -> Family:
    if isinstance(source, dict):
        return parse_family(source, horizon)
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise FamilySpecError("--family", f"cannot read {source}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilySpecError("(root)", f"invalid JSON: {exc}") from None
    return parse_family(doc, horizon)
