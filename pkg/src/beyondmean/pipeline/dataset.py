"""Two-arm experiment datasets and their CSV ingestion format.

Between-subjects CSV::

    subject,group,score
    s1,A,0.42
    ...

Within-subjects CSV (exactly two rows per subject, one per treatment)::

    subject,treatment,score
    p1,ITL,0.50
    p1,TDD,0.33
    ...

Scores use ``.`` as the decimal separator. The first label to appear
becomes the control arm unless the analysis names another one.
"""

import csv
import io
import math
from dataclasses import dataclass
from typing import BinaryIO, Iterable

from ..descriptives import GroupSample
from ..errors import (
    DataError,
    HeaderError,
    LabelCountError,
    PairingError,
    ParseError,
    ScoreParseError,
    UsageError,
)

BETWEEN = "between_subjects"
WITHIN = "within_subjects"
_DESIGN_ALIASES = {"between": BETWEEN, BETWEEN: BETWEEN, "within": WITHIN, WITHIN: WITHIN}
_HEADERS = {BETWEEN: ["subject", "group", "score"], WITHIN: ["subject", "treatment", "score"]}


def normalize_design(design: str) -> str:
    try:
        return _DESIGN_ALIASES[design]
    except KeyError:
        raise UsageError(f"design must be 'between' or 'within', got {design!r}") from None


@dataclass(frozen=True)
class ExperimentDataset:
    """Control and treatment arms with the subject identifier of every score.

    For within-subjects designs the two subject tuples are identical, so
    ``control.scores[i]`` and ``treatment.scores[i]`` belong to the same person.
    """

    design: str
    control: GroupSample
    treatment: GroupSample
    control_subjects: tuple[str, ...]
    treatment_subjects: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "design", normalize_design(self.design))
        if self.control.label == self.treatment.label:
            raise DataError(f"arm labels must differ, both are {self.control.label!r}")
        if len(self.control_subjects) != len(self.control) or len(self.treatment_subjects) != len(self.treatment):
            raise DataError("one subject identifier is required per score")
        if self.design == WITHIN and self.control_subjects != self.treatment_subjects:
            raise PairingError("within-subjects arms must list the same subjects in the same order")

    @property
    def labels(self) -> tuple[str, str]:
        return self.control.label, self.treatment.label

    def pairs(self) -> list[tuple[float, float]]:
        """(control, treatment) score per subject; within-subjects only."""
        if self.design != WITHIN:
            raise UsageError("pairs are only defined for within-subjects datasets")
        return list(zip(self.control.scores, self.treatment.scores))

    def with_control(self, label: str) -> "ExperimentDataset":
        """Return the dataset with ``label`` as the control arm."""
        if label == self.control.label:
            return self
        if label == self.treatment.label:
            return ExperimentDataset(self.design, self.treatment, self.control,
                                     self.treatment_subjects, self.control_subjects)
        raise UsageError(f"control label {label!r} not found; labels are {list(self.labels)}")


def _parse_score(text: str, line: int) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ScoreParseError(f"score {text!r} is not a decimal number (use '.' as separator)", line) from None
    if not math.isfinite(value):
        raise ScoreParseError(f"score {text!r} is not finite", line)
    return value


def _rows(text: str) -> Iterable[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        yield reader.line_num, row


def parse_dataset(source: bytes | str | BinaryIO, design: str) -> ExperimentDataset:
    """Parse a UTF-8 CSV into a validated :class:`ExperimentDataset`.

    Raises:
        HeaderError, ScoreParseError, LabelCountError, PairingError: each
            carrying the 1-based line number the problem was found on.
    """
    design = normalize_design(design)
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    expected = _HEADERS[design]
    rows = iter(_rows(source))
    try:
        header_line, header = next(rows)
    except StopIteration:
        raise HeaderError("input is empty; expected header " + ",".join(expected), 1) from None
    if [h.strip() for h in header] != expected:
        raise HeaderError(
            f"header must be exactly {','.join(expected)!r}, got {','.join(header)!r}", header_line
        )

    records = []  # (line, subject, label, score)
    for line, row in rows:
        if len(row) == 4 and row[2].strip().lstrip("+-").isdigit() and row[3].strip().isdigit():
            raise ScoreParseError(
                f"score {row[2].strip() + ',' + row[3].strip()!r} is not a decimal number "
                "(use '.' as separator)", line)
        if len(row) != 3:
            raise ParseError(f"expected 3 columns, found {len(row)}", line)
        subject, label, score = (cell.strip() for cell in row)
        if not subject:
            raise ParseError("empty subject identifier", line)
        if not label:
            raise ParseError("empty group label", line)
        records.append((line, subject, label, _parse_score(score, line)))

    labels = list(dict.fromkeys(r[2] for r in records))
    if len(labels) != 2:
        last_line = records[-1][0] if records else header_line
        raise LabelCountError(f"expected exactly 2 distinct labels, found {len(labels)}: {labels}", last_line)

    if design == BETWEEN:
        arms = {lab: ([], []) for lab in labels}
        for _, subject, label, score in records:
            arms[label][0].append(subject)
            arms[label][1].append(score)
        (cs, cv), (ts, tv) = arms[labels[0]], arms[labels[1]]
        return ExperimentDataset(BETWEEN, GroupSample(labels[0], tuple(cv)), GroupSample(labels[1], tuple(tv)),
                                 tuple(cs), tuple(ts))

    by_subject: dict[str, dict[str, float]] = {}
    first_line: dict[str, int] = {}
    for line, subject, label, score in records:
        entry = by_subject.setdefault(subject, {})
        first_line.setdefault(subject, line)
        if label in entry:
            raise PairingError(f"subject {subject!r} has more than one {label!r} score", line)
        entry[label] = score
    for subject, entry in by_subject.items():
        if len(entry) != 2:
            missing = [lab for lab in labels if lab not in entry]
            raise PairingError(f"subject {subject!r} has no {missing[0]!r} score", first_line[subject])
    subjects = tuple(by_subject)
    return ExperimentDataset(
        WITHIN,
        GroupSample(labels[0], tuple(by_subject[s][labels[0]] for s in subjects)),
        GroupSample(labels[1], tuple(by_subject[s][labels[1]] for s in subjects)),
        subjects,
        subjects,
    )


def dataset_to_csv(d: ExperimentDataset) -> str:
    """Serialize back to the ingestion format; scores at full precision."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_HEADERS[d.design])
    if d.design == BETWEEN:
        for arm, subjects in ((d.control, d.control_subjects), (d.treatment, d.treatment_subjects)):
            for subject, score in zip(subjects, arm.scores):
                writer.writerow([subject, arm.label, repr(score)])
    else:
        for subject, c, t in zip(d.control_subjects, d.control.scores, d.treatment.scores):
            writer.writerow([subject, d.control.label, repr(c)])
            writer.writerow([subject, d.treatment.label, repr(t)])
    return out.getvalue()
