"""Kind taxonomy paths, variable ranges and the registered kind universe.

A kind is a path of tags from general to specific, e.g.
``automaton/turing_machine/one_tape``, optionally carrying bound parameters
(``automaton/turing_machine with tapes=2``).  A kind belongs to a class named
by a path when that path is a prefix of the kind's path.
"""
from __future__ import annotations

import json
import os
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

SORTS = ("node", "port", "link")
PARAM = "param"

ParamValue = Union[int, str]


def _param_key(v: ParamValue) -> tuple[int, int | str]:
    return (0, v) if isinstance(v, int) else (1, v)


@dataclass(frozen=True, order=True)
class Kind:
    path: tuple[str, ...]
    params: tuple[tuple[str, ParamValue], ...] = ()

    def __post_init__(self):
        if not self.path:
            raise ValueError("a kind path must be nonempty")
        object.__setattr__(self, "path", tuple(self.path))
        object.__setattr__(self, "params", tuple(sorted(self.params)))

    @classmethod
    def parse(cls, text: str) -> "Kind":
        return cls(tuple(t for t in text.strip().split("/") if t))

    def is_a(self, cls_path: tuple[str, ...]) -> bool:
        return self.path[: len(cls_path)] == tuple(cls_path)

    def __str__(self) -> str:
        s = "/".join(self.path)
        if self.params:
            s += " with " + ", ".join(f"{k}={v}" for k, v in self.params)
        return s


def covers_path(general: tuple[str, ...], specific: tuple[str, ...]) -> bool:
    return specific[: len(general)] == general


@dataclass(frozen=True)
class KindSet:
    """A finite union of kind classes, kept in canonical (antichain) form."""

    paths: frozenset[tuple[str, ...]]

    def __post_init__(self):
        ps = {tuple(p) for p in self.paths}
        canonical = frozenset(
            p for p in ps if not any(q != p and covers_path(q, p) for q in ps)
        )
        object.__setattr__(self, "paths", canonical)

    def contains_kind(self, kind: Kind) -> bool:
        return any(kind.is_a(p) for p in self.paths)

    def contains_path(self, path: tuple[str, ...]) -> bool:
        return any(covers_path(p, path) for p in self.paths)

    def sorted_paths(self) -> list[tuple[str, ...]]:
        return sorted(self.paths)

    def __str__(self) -> str:
        return "{" + ", ".join("/".join(p) for p in self.sorted_paths()) + "}"


@dataclass(frozen=True)
class Universal:
    sort: str

    def __str__(self) -> str:
        return "*"


@dataclass(frozen=True)
class ParamRange:
    values: frozenset[ParamValue]

    def sorted_values(self) -> list[ParamValue]:
        return sorted(self.values, key=_param_key)

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.sorted_values()) + "}"


RangeDescriptor = Union[KindSet, Universal, ParamRange]


def kind_set(*paths: str | tuple[str, ...]) -> KindSet:
    return KindSet(
        frozenset(tuple(p.split("/")) if isinstance(p, str) else tuple(p) for p in paths)
    )


def range_is_empty(r: RangeDescriptor) -> bool:
    if isinstance(r, KindSet):
        return not r.paths
    if isinstance(r, ParamRange):
        return not r.values
    return False


def range_contains(r: RangeDescriptor, value: Kind | ParamValue) -> bool:
    if isinstance(r, Universal):
        return isinstance(value, Kind)
    if isinstance(r, KindSet):
        return isinstance(value, Kind) and r.contains_kind(value)
    return not isinstance(value, Kind) and value in r.values


def range_subset(small: RangeDescriptor, big: RangeDescriptor) -> bool:
    """Symbolic inclusion; ``Universal`` is only included in ``Universal`` of the same sort."""
    if isinstance(big, Universal):
        return isinstance(small, (Universal, KindSet)) and (
            not isinstance(small, Universal) or small.sort == big.sort
        )
    if isinstance(big, KindSet):
        return isinstance(small, KindSet) and all(big.contains_path(p) for p in small.paths)
    return isinstance(small, ParamRange) and small.values <= big.values


def format_range(r: RangeDescriptor) -> str:
    return str(r)


@dataclass
class KindUniverse:
    """Finite registry of kinds per sort, used to enumerate variable ranges."""

    kinds: dict[str, set[tuple[str, ...]]] = field(
        default_factory=lambda: {s: set() for s in SORTS}
    )

    def register(self, sort: str, *paths: str | tuple[str, ...]) -> None:
        for p in paths:
            self.kinds.setdefault(sort, set()).add(
                tuple(p.split("/")) if isinstance(p, str) else tuple(p)
            )

    def merged(self, other: "KindUniverse") -> "KindUniverse":
        out = KindUniverse()
        for src in (self, other):
            for sort, paths in src.kinds.items():
                out.register(sort, *paths)
        return out

    def members(self, r: RangeDescriptor, sort: str) -> list[Kind | ParamValue]:
        """Enumerate a range; kind sets also yield their own class paths."""
        if isinstance(r, ParamRange):
            return list(r.sorted_values())
        if isinstance(r, Universal):
            paths = set(self.kinds.get(r.sort, ()))
        else:
            paths = {p for p in self.kinds.get(sort, ()) if r.contains_path(p)}
            paths |= set(r.paths)
        return [Kind(p) for p in sorted(paths)]

    def to_json(self) -> str:
        return json.dumps(
            {s: sorted("/".join(p) for p in ps) for s, ps in sorted(self.kinds.items())},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "KindUniverse":
        data = json.loads(text)
        u = cls()
        for sort, paths in data.items():
            u.register(sort, *paths)
        return u

    @classmethod
    def from_env(cls, var: str = "SCHEMA_KIND_UNIVERSE") -> "KindUniverse":
        path = os.environ.get(var)
        if not path:
            return cls()
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def universe_of(paths_by_sort: Iterable[tuple[str, tuple[str, ...]]]) -> KindUniverse:
    u = KindUniverse()
    for sort, p in paths_by_sort:
        u.register(sort, p)
    return u
