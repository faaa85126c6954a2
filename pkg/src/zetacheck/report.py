"""Verdict and report records with JSON, CSV and text serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace

from .errors import ParameterError
from .weights import WeightFunction
from .weyl import format_word, parse_word
from .zeta import ZetaVector

ALL_POSITIVE = "all_positive"
COUNTEREXAMPLE = "counterexample"


@dataclass(frozen=True)
class Counterexample:
    """``word`` and ``gamma`` are 0-based internally; serialization is 1-based."""

    word: tuple[int, ...]
    gamma: int
    zeta: ZetaVector
    twisted: bool = False

    def key(self):
        return (len(self.word), self.word, self.twisted, self.gamma)

    def to_dict(self) -> dict:
        out = {"word": format_word(self.word), "gamma_index": self.gamma + 1, "zeta": str(self.zeta)}
        if self.twisted:
            out["twisted"] = True
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Counterexample":
        return cls(parse_word(d["word"]), int(d["gamma_index"]) - 1,
                   ZetaVector.parse(d["zeta"]), bool(d.get("twisted", False)))


@dataclass(frozen=True)
class Verdict:
    weighting: WeightFunction
    distinguished_cardinality: bool
    distinguished_closed_form: bool | None
    counterexample: Counterexample | None
    scanned: int
    wall_ms: float = field(default=0.0, compare=False)

    @property
    def outcome(self) -> str:
        return ALL_POSITIVE if self.counterexample is None else COUNTEREXAMPLE

    @property
    def all_positive(self) -> bool:
        return self.counterexample is None

    @property
    def consistent(self) -> bool:
        return self.all_positive == self.distinguished_cardinality

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "rho": str(self.weighting),
            "distinguished": self.distinguished_cardinality,
            "bala_carter": self.distinguished_closed_form,
            "outcome": self.outcome,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_dict()
        out["scanned"] = self.scanned
        if timing:
            out["wall_ms"] = round(self.wall_ms, 3)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        ce = d.get("counterexample")
        v = cls(WeightFunction.from_string(d["rho"]), bool(d["distinguished"]),
                d.get("bala_carter"), Counterexample.from_dict(ce) if ce else None,
                int(d["scanned"]), float(d.get("wall_ms", 0.0)))
        if v.outcome != d["outcome"]:
            raise ParameterError(f"outcome {d['outcome']!r} disagrees with counterexample field")
        return v


@dataclass(frozen=True)
class Report:
    family: str
    rank: int
    verdicts: tuple[Verdict, ...]

    @property
    def theorem_holds(self) -> bool:
        return all(v.consistent for v in self.verdicts)

    @property
    def distinguished_count(self) -> int:
        return sum(v.distinguished_cardinality for v in self.verdicts)

    @property
    def total_scanned(self) -> int:
        return sum(v.scanned for v in self.verdicts)

    def without_timing(self) -> "Report":
        return replace(self, verdicts=tuple(replace(v, wall_ms=0.0) for v in self.verdicts))

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "weightings": [v.to_dict(timing) for v in self.verdicts],
            "theorem_holds": self.theorem_holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        rep = cls(d["family"], int(d["rank"]), tuple(Verdict.from_dict(v) for v in d["weightings"]))
        if "theorem_holds" in d and bool(d["theorem_holds"]) != rep.theorem_holds:
            raise ParameterError("theorem_holds disagrees with the verdicts")
        return rep


def to_json(report: Report, timing: bool = True) -> str:
    return json.dumps(report.to_dict(timing), indent=2) + "\n"


def from_json(text: str) -> Report:
    return Report.from_dict(json.loads(text))


CSV_FIELDS = ("rho", "distinguished", "bala_carter", "outcome", "word",
              "gamma_index", "zeta", "twisted", "scanned", "wall_ms")


def to_csv(report: Report, timing: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for v in report.verdicts:
        d = v.to_dict(timing)
        ce = d.pop("counterexample", {})
        row = {**d, "word": ce.get("word", ""), "gamma_index": ce.get("gamma_index", ""),
               "zeta": ce.get("zeta", ""), "twisted": ce.get("twisted", False) if ce else ""}
        row["bala_carter"] = "" if d["bala_carter"] is None else d["bala_carter"]
        writer.writerow(row)
    return buf.getvalue()


def counterexample_line(v: Verdict) -> str:
    ce = v.counterexample
    if ce is None:
        return f'rho="{v.weighting}": all positive'
    twist = ", twisted" if ce.twisted else ""
    return f'rho="{v.weighting}": word="{format_word(ce.word)}", gamma={ce.gamma + 1}, zeta={ce.zeta}{twist}'


def to_text(report: Report, timing: bool = True) -> str:
    lines = [f"{report.family}{report.rank}: {len(report.verdicts)} weightings, "
             f"{report.distinguished_count} distinguished, theorem_holds={report.theorem_holds}"]
    for v in report.verdicts:
        bc = "-" if v.distinguished_closed_form is None else str(v.distinguished_closed_form)
        line = (f"  {v.weighting}  distinguished={v.distinguished_cardinality} closed_form={bc} "
                f"scanned={v.scanned}  {counterexample_line(v)}")
        if timing:
            line += f"  ({v.wall_ms:.1f} ms)"
        lines.append(line)
    return "\n".join(lines) + "\n"


FORMATTERS = {"json": to_json, "csv": to_csv, "text": to_text}
