"""Domain types of the metadata model: entities, groupings, groups, links,
processes, plus the constructors that enforce their local invariants.

Whole-catalog rules (dangling references, partition disjointness, lineage
acyclicity) live in :mod:`goldmedal.catalog`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    EmptyName,
    EmptyOutputs,
    InputOutputOverlap,
    KindMismatch,
    MalformedProperty,
    MixedEndpoints,
    SelfLoop,
)
from .ids import EntityId, GroupId, GroupingId, LinkId, ObjectId, ProcessId
from .values import PropertyValue, now_ms

# Link endpoint kinds: both endpoints are entities, or both are groups.
ENTITY_LEVEL = "entity"
GROUP_LEVEL = "group"

# Reserved link label for granularity containment (file ⊃ tuple and friends).
CONTAINS_LABEL = "contains"


@dataclass(frozen=True)
class DataEntity:
    id: EntityId
    name: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)
    created_rev: int = 0


@dataclass(frozen=True)
class Grouping:
    id: GroupingId
    name: str
    is_partition: bool = False


@dataclass(frozen=True)
class Group:
    id: GroupId
    grouping: GroupingId
    label: str
    members: frozenset[EntityId] = frozenset()


@dataclass(frozen=True)
class Link:
    id: LinkId
    endpoint_kind: str  # ENTITY_LEVEL or GROUP_LEVEL
    source: ObjectId
    target: ObjectId
    directed: bool
    label: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)

    def endpoints(self) -> tuple[ObjectId, ObjectId]:
        return (self.source, self.target)


@dataclass(frozen=True)
class Process:
    id: ProcessId
    name: str
    inputs: frozenset[EntityId]
    outputs: frozenset[EntityId]
    definition: str = ""
    properties: dict[str, PropertyValue] = field(default_factory=dict)
    executed_at: int = 0  # epoch milliseconds, UTC


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...] = ()

    @staticmethod
    def from_violations(violations: Iterable[Violation]) -> "ValidationReport":
        vs = tuple(violations)
        return ValidationReport(ok=not vs, violations=vs)


def _coerce_properties(properties: "Mapping[str, object] | None") -> dict[str, PropertyValue]:
    out: dict[str, PropertyValue] = {}
    for label, raw in (properties or {}).items():
        if not isinstance(label, str) or not label:
            raise MalformedProperty("label must be a non-empty string", label=str(label))
        try:
            out[label] = PropertyValue.of(raw)
        except MalformedProperty as exc:
            raise MalformedProperty(str(exc), label=label) from exc
    return out


def mk_entity(name: str, properties: "Mapping[str, object] | None" = None) -> DataEntity:
    if not name:
        raise EmptyName("entity name must be non-empty")
    return DataEntity(id=EntityId.fresh(), name=name, properties=_coerce_properties(properties))


def mk_grouping(name: str, is_partition: bool = False) -> Grouping:
    if not name:
        raise EmptyName("grouping name must be non-empty")
    return Grouping(id=GroupingId.fresh(), name=name, is_partition=is_partition)


def mk_group(grouping: "Grouping | GroupingId", label: str, members: Iterable[EntityId] = ()) -> Group:
    if not label:
        raise EmptyName("group label must be non-empty")
    gid = grouping.id if isinstance(grouping, Grouping) else grouping
    if not isinstance(gid, GroupingId):
        raise KindMismatch(f"group needs a GroupingId, got {type(gid).__name__}")
    members = frozenset(members)
    for m in members:
        if not isinstance(m, EntityId):
            raise KindMismatch(f"group members must be EntityId, got {type(m).__name__}")
    return Group(id=GroupId.fresh(), grouping=gid, label=label, members=members)


def mk_link(
    kind: str,
    source: ObjectId,
    target: ObjectId,
    directed: bool,
    label: str,
    properties: "Mapping[str, object] | None" = None,
) -> Link:
    if not label:
        raise EmptyName("link label must be non-empty")
    if kind not in (ENTITY_LEVEL, GROUP_LEVEL):
        raise KindMismatch(f"endpoint kind must be {ENTITY_LEVEL!r} or {GROUP_LEVEL!r}, got {kind!r}")
    src_e, tgt_e = isinstance(source, EntityId), isinstance(target, EntityId)
    src_g, tgt_g = isinstance(source, GroupId), isinstance(target, GroupId)
    if (src_e and tgt_g) or (src_g and tgt_e):
        raise MixedEndpoints("a link joins two entities or two groups, never one of each")
    want_entity = kind == ENTITY_LEVEL
    if want_entity and not (src_e and tgt_e):
        raise KindMismatch("entity-level link requires EntityId endpoints")
    if not want_entity and not (src_g and tgt_g):
        raise KindMismatch("group-level link requires GroupId endpoints")
    if source == target:
        raise SelfLoop(f"link endpoints must differ, got {source}")
    if not directed and target.value < source.value:
        source, target = target, source  # undirected pairs stored in ascending id order
    return Link(
        id=LinkId.fresh(),
        endpoint_kind=kind,
        source=source,
        target=target,
        directed=directed,
        label=label,
        properties=_coerce_properties(properties),
    )


def mk_process(
    name: str,
    inputs: Iterable[EntityId],
    outputs: Iterable[EntityId],
    definition: str = "",
    properties: "Mapping[str, object] | None" = None,
    executed_at: "int | None" = None,
) -> Process:
    if not name:
        raise EmptyName("process name must be non-empty")
    ins, outs = frozenset(inputs), frozenset(outputs)
    for e in ins | outs:
        if not isinstance(e, EntityId):
            raise KindMismatch(f"process endpoints must be EntityId, got {type(e).__name__}")
    if not outs:
        raise EmptyOutputs("a process must produce at least one entity")
    overlap = ins & outs
    if overlap:
        raise InputOutputOverlap(f"inputs and outputs overlap: {sorted(str(e) for e in overlap)}")
    return Process(
        id=ProcessId.fresh(),
        name=name,
        inputs=ins,
        outputs=outs,
        definition=definition,
        properties=_coerce_properties(properties),
        executed_at=now_ms() if executed_at is None else executed_at,
    )
