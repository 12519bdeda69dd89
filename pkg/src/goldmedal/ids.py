"""Typed object identifiers.

Ids are engine-generated random 128-bit values rendered as 32 lowercase hex
characters. Each object kind gets its own id type so an EntityId can never be
passed where a GroupId is required; equality and hashing are kind-sensitive.
"""

from __future__ import annotations

import re
import secrets
from dataclasses import dataclass

_HEX32 = re.compile(r"^[0-9a-f]{32}$")


@dataclass(frozen=True)
class ObjectId:
    value: str

    def __post_init__(self) -> None:
        if not isinstance(self.value, str) or not _HEX32.match(self.value):
            raise ValueError(f"id must be 32 lowercase hex chars, got {self.value!r}")

    @classmethod
    def fresh(cls):
        return cls(secrets.token_hex(16))

    def __str__(self) -> str:
        return self.value

    def __lt__(self, other: "ObjectId") -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.value < other.value


class EntityId(ObjectId):
    pass


class GroupingId(ObjectId):
    pass


class GroupId(ObjectId):
    pass


class LinkId(ObjectId):
    pass


class ProcessId(ObjectId):
    pass


ID_KINDS = {
    "entity": EntityId,
    "grouping": GroupingId,
    "group": GroupId,
    "link": LinkId,
    "process": ProcessId,
}

KIND_OF_ID = {cls: kind for kind, cls in ID_KINDS.items()}
