"""Catalog interchange: canonical JSON documents and GraphML export.

The JSON form is canonical: arrays in ascending id order, property maps
key-sorted, fixed field order, UTF-8 with LF newlines. Exporting the same
catalog twice is byte-identical, which the store's snapshot checksums and the
round-trip tests rely on.

GraphML has binary edges only, so groups and processes are reified as typed
nodes: membership becomes a "member" edge group->entity, process I/O becomes
"input"/"output" edges through the process node.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from typing import Any

from .catalog import Catalog, Put, validate
from .errors import IntegrityViolation, ParseError, SchemaError
from .ids import EntityId, GroupId, GroupingId, LinkId, ProcessId
from .model import (
    ENTITY_LEVEL,
    GROUP_LEVEL,
    DataEntity,
    Group,
    Grouping,
    Link,
    Process,
)
from .values import PropertyValue

FORMAT_VERSION = "1"


# --- object codecs ------------------------------------------------------------

def _props_to_json(props: dict[str, PropertyValue]) -> dict:
    return {label: props[label].to_json() for label in sorted(props)}


def entity_to_json(e: DataEntity) -> dict:
    return {
        "id": e.id.value,
        "name": e.name,
        "properties": _props_to_json(e.properties),
        "created_rev": e.created_rev,
    }


def grouping_to_json(g: Grouping) -> dict:
    return {"id": g.id.value, "name": g.name, "is_partition": g.is_partition}


def group_to_json(g: Group) -> dict:
    return {
        "id": g.id.value,
        "grouping": g.grouping.value,
        "label": g.label,
        "members": sorted(m.value for m in g.members),
    }


def link_to_json(l: Link) -> dict:
    return {
        "id": l.id.value,
        "endpoint_kind": l.endpoint_kind,
        "source": l.source.value,
        "target": l.target.value,
        "directed": l.directed,
        "label": l.label,
        "properties": _props_to_json(l.properties),
    }


def process_to_json(p: Process) -> dict:
    return {
        "id": p.id.value,
        "name": p.name,
        "inputs": sorted(e.value for e in p.inputs),
        "outputs": sorted(e.value for e in p.outputs),
        "definition": p.definition,
        "properties": _props_to_json(p.properties),
        "executed_at": p.executed_at,
    }


def _want(obj: dict, key: str, types, path: str):
    if key not in obj:
        raise SchemaError(f"{path}/{key}", "missing field")
    value = obj[key]
    if not isinstance(value, types) or (types is int and isinstance(value, bool)):
        raise SchemaError(f"{path}/{key}", f"expected {getattr(types, '__name__', types)}")
    return value


def _want_id(obj: dict, key: str, id_cls, path: str):
    raw = _want(obj, key, str, path)
    try:
        return id_cls(raw)
    except ValueError as exc:
        raise SchemaError(f"{path}/{key}", str(exc)) from exc


def _want_int(obj: dict, key: str, path: str) -> int:
    value = _want(obj, key, int, path)
    if isinstance(value, bool):
        raise SchemaError(f"{path}/{key}", "expected int")
    return value


def _props_from_json(obj: dict, path: str) -> dict[str, PropertyValue]:
    raw = _want(obj, "properties", dict, path)
    out: dict[str, PropertyValue] = {}
    for label in raw:
        if not isinstance(label, str) or not label:
            raise SchemaError(f"{path}/properties", "property labels must be non-empty strings")
        out[label] = PropertyValue.from_json(raw[label], f"{path}/properties/{label}")
    return out


def _check_keys(obj: dict, allowed: tuple[str, ...], path: str) -> None:
    extra = set(obj) - set(allowed)
    if extra:
        raise SchemaError(path, f"unknown fields: {sorted(extra)}")


def entity_from_json(obj: Any, path: str) -> DataEntity:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected object")
    _check_keys(obj, ("id", "name", "properties", "created_rev"), path)
    name = _want(obj, "name", str, path)
    if not name:
        raise SchemaError(f"{path}/name", "must be non-empty")
    return DataEntity(
        id=_want_id(obj, "id", EntityId, path),
        name=name,
        properties=_props_from_json(obj, path),
        created_rev=_want_int(obj, "created_rev", path),
    )


def grouping_from_json(obj: Any, path: str) -> Grouping:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected object")
    _check_keys(obj, ("id", "name", "is_partition"), path)
    name = _want(obj, "name", str, path)
    if not name:
        raise SchemaError(f"{path}/name", "must be non-empty")
    return Grouping(
        id=_want_id(obj, "id", GroupingId, path),
        name=name,
        is_partition=_want(obj, "is_partition", bool, path),
    )


def group_from_json(obj: Any, path: str) -> Group:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected object")
    _check_keys(obj, ("id", "grouping", "label", "members"), path)
    label = _want(obj, "label", str, path)
    if not label:
        raise SchemaError(f"{path}/label", "must be non-empty")
    members_raw = _want(obj, "members", list, path)
    members = set()
    for i, m in enumerate(members_raw):
        try:
            members.add(EntityId(m if isinstance(m, str) else ""))
        except ValueError as exc:
            raise SchemaError(f"{path}/members/{i}", str(exc)) from exc
    return Group(
        id=_want_id(obj, "id", GroupId, path),
        grouping=_want_id(obj, "grouping", GroupingId, path),
        label=label,
        members=frozenset(members),
    )


def link_from_json(obj: Any, path: str) -> Link:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected object")
    _check_keys(obj, ("id", "endpoint_kind", "source", "target", "directed", "label", "properties"), path)
    kind = _want(obj, "endpoint_kind", str, path)
    if kind not in (ENTITY_LEVEL, GROUP_LEVEL):
        raise SchemaError(f"{path}/endpoint_kind", f"must be {ENTITY_LEVEL!r} or {GROUP_LEVEL!r}")
    id_cls = EntityId if kind == ENTITY_LEVEL else GroupId
    label = _want(obj, "label", str, path)
    if not label:
        raise SchemaError(f"{path}/label", "must be non-empty")
    source = _want_id(obj, "source", id_cls, path)
    target = _want_id(obj, "target", id_cls, path)
    directed = _want(obj, "directed", bool, path)
    if source == target:
        raise SchemaError(path, "link endpoints must differ")
    if not directed and target.value < source.value:
        raise SchemaError(path, "undirected endpoints must be in ascending id order")
    return Link(
        id=_want_id(obj, "id", LinkId, path),
        endpoint_kind=kind,
        source=source,
        target=target,
        directed=directed,
        label=label,
        properties=_props_from_json(obj, path),
    )


def process_from_json(obj: Any, path: str) -> Process:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected object")
    _check_keys(obj, ("id", "name", "inputs", "outputs", "definition", "properties", "executed_at"), path)
    name = _want(obj, "name", str, path)
    if not name:
        raise SchemaError(f"{path}/name", "must be non-empty")

    def id_set(key: str) -> frozenset[EntityId]:
        raw = _want(obj, key, list, path)
        out = set()
        for i, e in enumerate(raw):
            try:
                out.add(EntityId(e if isinstance(e, str) else ""))
            except ValueError as exc:
                raise SchemaError(f"{path}/{key}/{i}", str(exc)) from exc
        return frozenset(out)

    inputs, outputs = id_set("inputs"), id_set("outputs")
    if not outputs:
        raise SchemaError(f"{path}/outputs", "must be non-empty")
    if inputs & outputs:
        raise SchemaError(path, "inputs and outputs overlap")
    return Process(
        id=_want_id(obj, "id", ProcessId, path),
        name=name,
        inputs=inputs,
        outputs=outputs,
        definition=_want(obj, "definition", str, path),
        properties=_props_from_json(obj, path),
        executed_at=_want_int(obj, "executed_at", path),
    )


_SECTIONS = (
    ("entities", entity_to_json, entity_from_json, "entities"),
    ("groupings", grouping_to_json, grouping_from_json, "groupings"),
    ("groups", group_to_json, group_from_json, "groups"),
    ("links", link_to_json, link_from_json, "links"),
    ("processes", process_to_json, process_from_json, "processes"),
)


# --- whole-document export/import ------------------------------------------------

def export_json(catalog: Catalog, *, revision: "int | None" = None) -> str:
    """Render the catalog as a canonical UTF-8 JSON document.

    ``revision`` is included only by store snapshots; plain exports omit it so
    equal catalogs always serialize byte-identically.
    """
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION}
    if revision is not None:
        doc["revision"] = revision
    for field, to_json, _, attr in _SECTIONS:
        table = getattr(catalog, attr)
        doc[field] = [to_json(table[oid]) for oid in sorted(table, key=lambda o: o.value)]
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def read_document(text: str) -> "tuple[Catalog, int | None]":
    """Parse a catalog document; returns the catalog and its revision field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "document must be a JSON object")
    allowed = ("format_version", "revision") + tuple(s[0] for s in _SECTIONS)
    _check_keys(doc, allowed, "$")
    version = _want(doc, "format_version", str, "$")
    if version != FORMAT_VERSION:
        raise SchemaError("$/format_version", f"unsupported format_version {version!r}")
    revision = doc.get("revision")
    if revision is not None and (not isinstance(revision, int) or isinstance(revision, bool) or revision < 0):
        raise SchemaError("$/revision", "must be a non-negative integer")

    catalog = Catalog()
    for field, _, from_json, attr in _SECTIONS:
        items = _want(doc, field, list, "$")
        table = getattr(catalog, attr)
        for i, raw in enumerate(items):
            obj = from_json(raw, f"$/{field}/{i}")
            if obj.id in table:
                raise SchemaError(f"$/{field}/{i}/id", f"duplicate id {obj.id}")
            catalog.apply(Put(obj))
    report = validate(catalog)
    if not report.ok:
        raise IntegrityViolation(report)
    return catalog, revision


def import_json(text: str) -> Catalog:
    """Build a validated catalog from a document, preserving every id."""
    catalog, _ = read_document(text)
    return catalog


# --- GraphML ---------------------------------------------------------------------

_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_NODE_KEYS = (
    ("kind", "string"),
    ("name", "string"),
    ("grouping", "string"),
    ("is_partition", "boolean"),
)
_EDGE_KEYS = (("label", "string"),)


def export_graphml(catalog: Catalog) -> str:
    """Export the catalog as GraphML with reified hyperedges.

    One node per entity, per group and per process; group membership and
    process input/output become labeled binary edges. Catalog links export
    directly, carrying their direction in the edge's ``directed`` attribute.
    """
    ET.register_namespace("", _GRAPHML_NS)
    root = ET.Element(f"{{{_GRAPHML_NS}}}graphml")
    for key, ktype in _NODE_KEYS:
        ET.SubElement(root, f"{{{_GRAPHML_NS}}}key",
                      {"id": key, "for": "node", "attr.name": key, "attr.type": ktype})
    for key, ktype in _EDGE_KEYS:
        ET.SubElement(root, f"{{{_GRAPHML_NS}}}key",
                      {"id": key, "for": "edge", "attr.name": key, "attr.type": ktype})
    graph = ET.SubElement(root, f"{{{_GRAPHML_NS}}}graph",
                          {"id": "catalog", "edgedefault": "directed"})

    def data(parent: ET.Element, key: str, value: str) -> None:
        el = ET.SubElement(parent, f"{{{_GRAPHML_NS}}}data", {"key": key})
        el.text = value

    def node(oid: str, kind: str, name: str) -> ET.Element:
        el = ET.SubElement(graph, f"{{{_GRAPHML_NS}}}node", {"id": oid})
        data(el, "kind", kind)
        data(el, "name", name)
        return el

    def edge(source: str, target: str, label: str, directed: bool, edge_id: "str | None" = None) -> None:
        attrs = {"source": source, "target": target, "directed": "true" if directed else "false"}
        if edge_id is not None:
            attrs = {"id": edge_id, **attrs}
        el = ET.SubElement(graph, f"{{{_GRAPHML_NS}}}edge", attrs)
        data(el, "label", label)

    for eid in sorted(catalog.entities, key=lambda o: o.value):
        node(eid.value, "entity", catalog.entities[eid].name)
    for gid in sorted(catalog.groups, key=lambda o: o.value):
        group = catalog.groups[gid]
        el = node(gid.value, "group", group.label)
        grouping = catalog.groupings.get(group.grouping)
        if grouping is not None:
            data(el, "grouping", grouping.name)
            data(el, "is_partition", "true" if grouping.is_partition else "false")
    for pid in sorted(catalog.processes, key=lambda o: o.value):
        node(pid.value, "process", catalog.processes[pid].name)

    for lid in sorted(catalog.links, key=lambda o: o.value):
        link = catalog.links[lid]
        edge(link.source.value, link.target.value, link.label, link.directed, edge_id=lid.value)
    for gid in sorted(catalog.groups, key=lambda o: o.value):
        for m in sorted(catalog.groups[gid].members, key=lambda e: e.value):
            edge(gid.value, m.value, "member", True)
    for pid in sorted(catalog.processes, key=lambda o: o.value):
        proc = catalog.processes[pid]
        for e in sorted(proc.inputs, key=lambda x: x.value):
            edge(e.value, pid.value, "input", True)
        for e in sorted(proc.outputs, key=lambda x: x.value):
            edge(pid.value, e.value, "output", True)

    ET.indent(root)
    body = ET.tostring(root, encoding="unicode", xml_declaration=True)
    return body if body.endswith("\n") else body + "\n"
