"""Tagged property values attached to entities, links and processes.

Supported kinds: text, integer (signed 64-bit), real (finite 64-bit float),
boolean, timestamp (UTC epoch milliseconds), and homogeneous lists nested at
most two deep. Values are immutable and carry their kind tag explicitly so
serialization never has to guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any

from .errors import MalformedProperty, SchemaError

TAGS = ("text", "integer", "real", "boolean", "timestamp", "list")

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class PropertyValue:
    tag: str
    value: Any

    def __post_init__(self) -> None:
        tag, value = self.tag, self.value
        if tag == "text":
            if not isinstance(value, str):
                raise MalformedProperty(f"text value must be str, got {type(value).__name__}")
        elif tag == "integer":
            if not isinstance(value, int) or isinstance(value, bool):
                raise MalformedProperty(f"integer value must be int, got {type(value).__name__}")
            if not _INT64_MIN <= value <= _INT64_MAX:
                raise MalformedProperty(f"integer out of 64-bit range: {value}")
        elif tag == "real":
            if not isinstance(value, float):
                raise MalformedProperty(f"real value must be float, got {type(value).__name__}")
            if not math.isfinite(value):
                raise MalformedProperty(f"real must be finite, got {value!r}")
        elif tag == "boolean":
            if not isinstance(value, bool):
                raise MalformedProperty(f"boolean value must be bool, got {type(value).__name__}")
        elif tag == "timestamp":
            if not isinstance(value, int) or isinstance(value, bool):
                raise MalformedProperty("timestamp value must be epoch milliseconds (int)")
            if not _INT64_MIN <= value <= _INT64_MAX:
                raise MalformedProperty(f"timestamp out of 64-bit range: {value}")
        elif tag == "list":
            if not isinstance(value, tuple):
                raise MalformedProperty("list value must be a tuple of PropertyValue")
            for item in value:
                if not isinstance(item, PropertyValue):
                    raise MalformedProperty("list items must be PropertyValue")
            tags = {item.tag for item in value}
            if len(tags) > 1:
                raise MalformedProperty(f"list items must share one kind, got {sorted(tags)}")
            # depth limit: a list may contain lists of scalars, nothing deeper
            for item in value:
                if item.tag == "list":
                    for inner in item.value:
                        if inner.tag == "list":
                            raise MalformedProperty("lists may nest at most two deep")
        else:
            raise MalformedProperty(f"unknown value kind {tag!r}")

    # --- constructors ---------------------------------------------------

    @staticmethod
    def text(value: str) -> "PropertyValue":
        return PropertyValue("text", value)

    @staticmethod
    def integer(value: int) -> "PropertyValue":
        return PropertyValue("integer", value)

    @staticmethod
    def real(value: float) -> "PropertyValue":
        return PropertyValue("real", value)

    @staticmethod
    def boolean(value: bool) -> "PropertyValue":
        return PropertyValue("boolean", value)

    @staticmethod
    def timestamp(value: "int | datetime") -> "PropertyValue":
        if isinstance(value, datetime):
            if value.tzinfo is None:
                value = value.replace(tzinfo=timezone.utc)
            value = int(value.timestamp() * 1000)
        return PropertyValue("timestamp", value)

    @staticmethod
    def list_of(items) -> "PropertyValue":
        return PropertyValue("list", tuple(items))

    @staticmethod
    def of(value: Any) -> "PropertyValue":
        """Coerce a plain Python value to a PropertyValue (bool before int)."""
        if isinstance(value, PropertyValue):
            return value
        if isinstance(value, bool):
            return PropertyValue.boolean(value)
        if isinstance(value, int):
            return PropertyValue.integer(value)
        if isinstance(value, float):
            return PropertyValue.real(value)
        if isinstance(value, str):
            return PropertyValue.text(value)
        if isinstance(value, datetime):
            return PropertyValue.timestamp(value)
        if isinstance(value, (list, tuple)):
            return PropertyValue.list_of(PropertyValue.of(v) for v in value)
        raise MalformedProperty(f"cannot carry value of type {type(value).__name__}")

    # --- serialization --------------------------------------------------

    def to_json(self) -> dict:
        if self.tag == "list":
            return {"type": "list", "value": [item.to_json() for item in self.value]}
        return {"type": self.tag, "value": self.value}

    @staticmethod
    def from_json(obj: Any, path: str = "$") -> "PropertyValue":
        if not isinstance(obj, dict) or set(obj) != {"type", "value"}:
            raise SchemaError(path, "property value must be {type, value}")
        tag, raw = obj["type"], obj["value"]
        try:
            if tag == "list":
                if not isinstance(raw, list):
                    raise SchemaError(path, "list value must be an array")
                return PropertyValue.list_of(
                    PropertyValue.from_json(item, f"{path}/{i}") for i, item in enumerate(raw)
                )
            if tag == "real" and isinstance(raw, int) and not isinstance(raw, bool):
                raw = float(raw)
            return PropertyValue(tag, raw)
        except MalformedProperty as exc:
            raise SchemaError(path, str(exc)) from exc

    # --- datetime convenience -------------------------------------------

    def as_datetime(self) -> datetime:
        if self.tag != "timestamp":
            raise MalformedProperty(f"not a timestamp: {self.tag}")
        return datetime.fromtimestamp(self.value / 1000, tz=timezone.utc)


def now_ms() -> int:
    return int(datetime.now(timezone.utc).timestamp() * 1000)


# --- comparison semantics used by the query DSL -------------------------

_NUMERIC = ("integer", "real")


def values_equal(a: PropertyValue, b: PropertyValue) -> bool:
    """Equality across the numeric family; strict tag match otherwise."""
    if a.tag in _NUMERIC and b.tag in _NUMERIC:
        return float(a.value) == float(b.value) if ("real" in (a.tag, b.tag)) else a.value == b.value
    return a.tag == b.tag and a.value == b.value


def values_ordered(a: PropertyValue, b: PropertyValue) -> "int | None":
    """Return -1/0/1 when a and b are order-comparable, None otherwise.

    Comparable pairs: numeric with numeric, text with text, timestamp with
    timestamp. Booleans and lists are equality-only.
    """
    if a.tag in _NUMERIC and b.tag in _NUMERIC:
        av, bv = a.value, b.value
    elif a.tag == b.tag and a.tag in ("text", "timestamp"):
        av, bv = a.value, b.value
    else:
        return None
    return (av > bv) - (av < bv)


def value_contains(a: PropertyValue, b: PropertyValue) -> bool:
    """Substring test for text, membership test for lists."""
    if a.tag == "text" and b.tag == "text":
        return b.value in a.value
    if a.tag == "list":
        return any(values_equal(item, b) for item in a.value)
    return False
