"""Named, family-tagged feature vectors and their assembly."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, EmptyInputError


class FeatureFamily(str, enum.Enum):
    INST = "inst"
    HOC = "hoc"
    CYC = "cyc"
    WAV = "wav"

    @classmethod
    def parse_set(cls, text) -> frozenset:
        if isinstance(text, str):
            items = [t for t in (s.strip() for s in text.split(",")) if t]
        else:
            items = list(text)
        out = set()
        for item in items:
            if isinstance(item, cls):
                out.add(item)
                continue
            try:
                out.add(cls(item.lower()))
            except ValueError:
                raise DomainError(f"unknown feature family {item!r}") from None
        return frozenset(out)


CANONICAL_ORDER = (FeatureFamily.INST, FeatureFamily.HOC, FeatureFamily.CYC, FeatureFamily.WAV)


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    names: tuple
    groups: tuple

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        names = tuple(self.names)
        groups = tuple(FeatureFamily(g) for g in self.groups)
        if not (values.ndim == 1 and values.size == len(names) == len(groups)):
            raise DomainError("values, names and groups must have equal length")
        if len(set(names)) != len(names):
            raise DomainError("feature names must be unique")
        if not np.all(np.isfinite(values)):
            raise DomainError("feature values must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "groups", groups)

    @classmethod
    def of(cls, family: FeatureFamily, names, values) -> "FeatureVector":
        return cls(np.asarray(values, dtype=float), tuple(names), (family,) * len(names))

    def __len__(self):
        return self.values.size

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values.tolist()))

    def families(self) -> frozenset:
        return frozenset(self.groups)


def assemble(selection, parts) -> FeatureVector:
    """Concatenate the selected families in canonical INST, HOC, CYC, WAV order."""
    selection = FeatureFamily.parse_set(selection) if not isinstance(selection, frozenset) else selection
    if not selection:
        raise EmptyInputError("feature selection is empty")
    by_family: dict = {}
    for part in parts:
        for value, name, group in zip(part.values, part.names, part.groups):
            by_family.setdefault(group, []).append((name, value))
    values, names, groups = [], [], []
    for fam in CANONICAL_ORDER:
        if fam not in selection:
            continue
        if fam not in by_family:
            raise DomainError(f"no {fam.name} features among the parts")
        for name, value in by_family[fam]:
            names.append(name)
            values.append(value)
            groups.append(fam)
    return FeatureVector(np.array(values), tuple(names), tuple(groups))
