"""In-memory hypergraph catalog: primary object maps plus the incident-link,
membership and lineage indexes, and whole-catalog validation.

A committed catalog is treated as immutable; mutation happens on a structural
copy which the store publishes atomically. Indexes are sparse (only non-empty
entries are stored) so an incrementally maintained index always equals one
rebuilt from scratch, a property the test suite fuzzes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .ids import EntityId, GroupId, GroupingId, LinkId, ObjectId, ProcessId
from .model import (
    ENTITY_LEVEL,
    DataEntity,
    Group,
    Grouping,
    Link,
    Process,
    ValidationReport,
    Violation,
)

CatalogObject = "DataEntity | Grouping | Group | Link | Process"

KINDS = ("entity", "grouping", "group", "link", "process")

_KIND_ATTR = {
    "entity": "entities",
    "grouping": "groupings",
    "group": "groups",
    "link": "links",
    "process": "processes",
}


@dataclass(frozen=True)
class Put:
    obj: "DataEntity | Grouping | Group | Link | Process"


@dataclass(frozen=True)
class Delete:
    id: ObjectId


Mutation = "Put | Delete"


@dataclass
class Batch:
    """Ordered list of mutations, applied atomically at commit."""

    ops: "list[Put | Delete]"

    def __init__(self, ops: "Iterable[Put | Delete]" = ()):
        self.ops = list(ops)

    def put(self, obj) -> "Batch":
        self.ops.append(Put(obj))
        return self

    def delete(self, oid: ObjectId) -> "Batch":
        self.ops.append(Delete(oid))
        return self

    def extend(self, other: "Batch") -> "Batch":
        self.ops.extend(other.ops)
        return self

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


def kind_of(obj) -> str:
    if isinstance(obj, DataEntity):
        return "entity"
    if isinstance(obj, Grouping):
        return "grouping"
    if isinstance(obj, Group):
        return "group"
    if isinstance(obj, Link):
        return "link"
    if isinstance(obj, Process):
        return "process"
    raise TypeError(f"not a catalog object: {type(obj).__name__}")


def kind_of_id(oid: ObjectId) -> str:
    if isinstance(oid, EntityId):
        return "entity"
    if isinstance(oid, GroupingId):
        return "grouping"
    if isinstance(oid, GroupId):
        return "group"
    if isinstance(oid, LinkId):
        return "link"
    if isinstance(oid, ProcessId):
        return "process"
    raise TypeError(f"not a typed id: {type(oid).__name__}")


class ApplyError(Exception):
    """Internal: a mutation could not be applied; surfaced as a violation."""

    def __init__(self, rule: str, subject: str, message: str):
        super().__init__(message)
        self.violation = Violation(rule, subject, message)


def _index_add(index: dict, key, value) -> None:
    index.setdefault(key, set()).add(value)


def _index_discard(index: dict, key, value) -> None:
    bucket = index.get(key)
    if bucket is None:
        return
    bucket.discard(value)
    if not bucket:
        del index[key]


class Catalog:
    """The complete hypergraph with integrity indexes and a revision counter."""

    def __init__(self) -> None:
        self.entities: dict[EntityId, DataEntity] = {}
        self.groupings: dict[GroupingId, Grouping] = {}
        self.groups: dict[GroupId, Group] = {}
        self.links: dict[LinkId, Link] = {}
        self.processes: dict[ProcessId, Process] = {}
        # sparse indexes: only ids with at least one incident object appear
        self.entity_links: dict[EntityId, set[LinkId]] = {}
        self.entity_groups: dict[EntityId, set[GroupId]] = {}
        self.produced_by: dict[EntityId, set[ProcessId]] = {}
        self.consumed_by: dict[EntityId, set[ProcessId]] = {}
        self.revision: int = 0

    # --- views ------------------------------------------------------------

    def map_for(self, kind: str) -> dict:
        try:
            attr = _KIND_ATTR[kind]
        except KeyError:
            raise KeyError(f"unknown object kind {kind!r}") from None
        return getattr(self, attr)

    def get(self, oid: ObjectId):
        return self.map_for(kind_of_id(oid)).get(oid)

    def find(self, raw: str):
        """Look an object up by its hex string across all kinds."""
        for kind in KINDS:
            for oid, obj in self.map_for(kind).items():
                if oid.value == raw:
                    return obj
        return None

    def size(self) -> int:
        return (
            len(self.entities)
            + len(self.groupings)
            + len(self.groups)
            + len(self.links)
            + len(self.processes)
        )

    def links_of(self, eid: EntityId) -> frozenset[LinkId]:
        return frozenset(self.entity_links.get(eid, ()))

    def groups_of(self, eid: EntityId) -> frozenset[GroupId]:
        return frozenset(self.entity_groups.get(eid, ()))

    def producers_of(self, eid: EntityId) -> frozenset[ProcessId]:
        return frozenset(self.produced_by.get(eid, ()))

    def consumers_of(self, eid: EntityId) -> frozenset[ProcessId]:
        return frozenset(self.consumed_by.get(eid, ()))

    def grouping_by_name(self, name: str) -> "Grouping | None":
        for grouping in self.groupings.values():
            if grouping.name == name:
                return grouping
        return None

    def group_by_label(self, grouping_id: GroupingId, label: str) -> "Group | None":
        for group in self.groups.values():
            if group.grouping == grouping_id and group.label == label:
                return group
        return None

    # --- copy ---------------------------------------------------------------

    def copy(self) -> "Catalog":
        new = Catalog()
        new.entities = dict(self.entities)
        new.groupings = dict(self.groupings)
        new.groups = dict(self.groups)
        new.links = dict(self.links)
        new.processes = dict(self.processes)
        new.entity_links = {k: set(v) for k, v in self.entity_links.items()}
        new.entity_groups = {k: set(v) for k, v in self.entity_groups.items()}
        new.produced_by = {k: set(v) for k, v in self.produced_by.items()}
        new.consumed_by = {k: set(v) for k, v in self.consumed_by.items()}
        new.revision = self.revision
        return new

    # --- mutation (index-maintaining) ----------------------------------------

    def _deindex(self, obj) -> None:
        if isinstance(obj, Group):
            for m in obj.members:
                _index_discard(self.entity_groups, m, obj.id)
        elif isinstance(obj, Link):
            if obj.endpoint_kind == ENTITY_LEVEL:
                _index_discard(self.entity_links, obj.source, obj.id)
                _index_discard(self.entity_links, obj.target, obj.id)
        elif isinstance(obj, Process):
            for e in obj.inputs:
                _index_discard(self.consumed_by, e, obj.id)
            for e in obj.outputs:
                _index_discard(self.produced_by, e, obj.id)

    def _index(self, obj) -> None:
        if isinstance(obj, Group):
            for m in obj.members:
                _index_add(self.entity_groups, m, obj.id)
        elif isinstance(obj, Link):
            if obj.endpoint_kind == ENTITY_LEVEL:
                _index_add(self.entity_links, obj.source, obj.id)
                _index_add(self.entity_links, obj.target, obj.id)
        elif isinstance(obj, Process):
            for e in obj.inputs:
                _index_add(self.consumed_by, e, obj.id)
            for e in obj.outputs:
                _index_add(self.produced_by, e, obj.id)

    def apply(self, op: "Put | Delete") -> None:
        """Apply one mutation in place, keeping indexes exact."""
        if isinstance(op, Put):
            table = self.map_for(kind_of(op.obj))
            old = table.get(op.obj.id)
            if old is not None:
                self._deindex(old)
            table[op.obj.id] = op.obj
            self._index(op.obj)
        elif isinstance(op, Delete):
            table = self.map_for(kind_of_id(op.id))
            old = table.pop(op.id, None)
            if old is None:
                raise ApplyError("MISSING_DELETE_TARGET", str(op.id), "delete of unknown id")
            self._deindex(old)
        else:
            raise TypeError(f"not a mutation: {type(op).__name__}")

    # --- index coherence ------------------------------------------------------

    def rebuilt_indexes(self) -> tuple[dict, dict, dict, dict]:
        """Recompute all four indexes from the primary maps alone."""
        entity_links: dict[EntityId, set[LinkId]] = {}
        entity_groups: dict[EntityId, set[GroupId]] = {}
        produced_by: dict[EntityId, set[ProcessId]] = {}
        consumed_by: dict[EntityId, set[ProcessId]] = {}
        for link in self.links.values():
            if link.endpoint_kind == ENTITY_LEVEL:
                _index_add(entity_links, link.source, link.id)
                _index_add(entity_links, link.target, link.id)
        for group in self.groups.values():
            for m in group.members:
                _index_add(entity_groups, m, group.id)
        for proc in self.processes.values():
            for e in proc.inputs:
                _index_add(consumed_by, e, proc.id)
            for e in proc.outputs:
                _index_add(produced_by, e, proc.id)
        return entity_links, entity_groups, produced_by, consumed_by

    def indexes_consistent(self) -> bool:
        rebuilt = self.rebuilt_indexes()
        current = (self.entity_links, self.entity_groups, self.produced_by, self.consumed_by)
        return all(a == b for a, b in zip(current, rebuilt))

    # --- lineage relation -------------------------------------------------------

    def lineage_successors(self) -> dict[EntityId, set[EntityId]]:
        """Entity adjacency induced by processes: input -> every output."""
        adj: dict[EntityId, set[EntityId]] = {}
        for proc in self.processes.values():
            for i in proc.inputs:
                adj.setdefault(i, set()).update(proc.outputs)
        return adj


def _find_lineage_cycle(catalog: Catalog) -> "EntityId | None":
    """Iterative three-color DFS over the process-induced entity relation."""
    adj = catalog.lineage_successors()
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[EntityId, int] = {}
    for start in adj:
        if color.get(start, WHITE) != WHITE:
            continue
        stack: list[tuple[EntityId, Iterator[EntityId]]] = [(start, iter(sorted(adj.get(start, ()))))]
        color[start] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color.get(nxt, WHITE)
                if c == GREY:
                    return nxt
                if c == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(sorted(adj.get(nxt, ())))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return None


def validate(catalog: Catalog) -> ValidationReport:
    """Check every model invariant over the whole catalog.

    Violations are reported, never thrown; an empty report means the catalog
    is internally consistent.
    """
    out: list[Violation] = []
    add = out.append

    for entity in catalog.entities.values():
        if not entity.name:
            add(Violation("EMPTY_NAME", str(entity.id), "entity name empty"))
        for label in entity.properties:
            if not label:
                add(Violation("BAD_PROPERTY", str(entity.id), "empty property label"))

    seen_names: dict[str, GroupingId] = {}
    for grouping in catalog.groupings.values():
        if not grouping.name:
            add(Violation("EMPTY_NAME", str(grouping.id), "grouping name empty"))
        elif grouping.name in seen_names:
            add(Violation("DUP_GROUPING_NAME", str(grouping.id),
                          f"grouping name {grouping.name!r} already used by {seen_names[grouping.name]}"))
        else:
            seen_names[grouping.name] = grouping.id

    seen_labels: dict[tuple[GroupingId, str], GroupId] = {}
    for group in catalog.groups.values():
        if not group.label:
            add(Violation("EMPTY_NAME", str(group.id), "group label empty"))
        if group.grouping not in catalog.groupings:
            add(Violation("DANGLING_GROUPING", str(group.id),
                          f"group references unknown grouping {group.grouping}"))
        key = (group.grouping, group.label)
        if key in seen_labels:
            add(Violation("DUP_GROUP_LABEL", str(group.id),
                          f"label {group.label!r} already used in grouping by {seen_labels[key]}"))
        else:
            seen_labels[key] = group.id
        for m in group.members:
            if m not in catalog.entities:
                add(Violation("DANGLING_MEMBER", str(group.id), f"member {m} does not exist"))

    for link in catalog.links.values():
        if not link.label:
            add(Violation("EMPTY_NAME", str(link.id), "link label empty"))
        if link.source == link.target:
            add(Violation("SELF_LOOP", str(link.id), "link endpoints are equal"))
        table = catalog.entities if link.endpoint_kind == ENTITY_LEVEL else catalog.groups
        for end in (link.source, link.target):
            if end not in table:
                add(Violation("DANGLING_ENDPOINT", str(link.id), f"endpoint {end} does not exist"))
        if not link.directed and link.target.value < link.source.value:
            add(Violation("UNNORMALIZED_UNDIRECTED", str(link.id),
                          "undirected endpoints not in ascending id order"))

    for proc in catalog.processes.values():
        if not proc.name:
            add(Violation("EMPTY_NAME", str(proc.id), "process name empty"))
        if not proc.outputs:
            add(Violation("EMPTY_OUTPUTS", str(proc.id), "process has no outputs"))
        overlap = proc.inputs & proc.outputs
        if overlap:
            add(Violation("IO_OVERLAP", str(proc.id),
                          f"entities appear on both sides: {sorted(str(e) for e in overlap)}"))
        for e in proc.inputs | proc.outputs:
            if e not in catalog.entities:
                add(Violation("DANGLING_PROCESS_REF", str(proc.id), f"entity {e} does not exist"))

    # partition groupings: no entity may sit in two groups of the same grouping
    partition_groups: dict[GroupingId, list[Group]] = {}
    for group in catalog.groups.values():
        grouping = catalog.groupings.get(group.grouping)
        if grouping is not None and grouping.is_partition:
            partition_groups.setdefault(grouping.id, []).append(group)
    for gid, members_groups in partition_groups.items():
        seen: dict[EntityId, GroupId] = {}
        for group in sorted(members_groups, key=lambda g: g.id.value):
            for m in sorted(group.members, key=lambda e: e.value):
                if m in seen and seen[m] != group.id:
                    add(Violation("PARTITION_OVERLAP", str(m),
                                  f"entity in groups {seen[m]} and {group.id} of partition grouping {gid}"))
                else:
                    seen[m] = group.id

    cycle_node = _find_lineage_cycle(catalog)
    if cycle_node is not None:
        add(Violation("LINEAGE_CYCLE", str(cycle_node), "process lineage contains a cycle"))

    return ValidationReport.from_violations(out)


def neighbors(
    catalog: Catalog,
    entity_id: EntityId,
    label: "str | None" = None,
    direction: str = "any",
) -> list[EntityId]:
    """Adjacent entities over entity-level links, honoring direction.

    ``direction``: "out" follows directed links source->target, "in" the
    reverse, "any" both; undirected links match every direction. Results are
    sorted by id and deduplicated.
    """
    if direction not in ("any", "out", "in"):
        raise ValueError(f"direction must be any/out/in, got {direction!r}")
    found: set[EntityId] = set()
    for lid in catalog.links_of(entity_id):
        link = catalog.links[lid]
        if label is not None and link.label != label:
            continue
        if not link.directed:
            other = link.target if link.source == entity_id else link.source
            found.add(other)
        elif direction in ("any", "out") and link.source == entity_id:
            found.add(link.target)
        elif direction in ("any", "in") and link.target == entity_id:
            found.add(link.source)
    return sorted(found, key=lambda e: e.value)


def list_ids(catalog: Catalog, kind: str, predicate: "Callable[[object], bool] | None" = None) -> list[ObjectId]:
    table = catalog.map_for(kind)
    ids = [oid for oid, obj in table.items() if predicate is None or predicate(obj)]
    return sorted(ids, key=lambda o: o.value)
