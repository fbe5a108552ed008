"""The verdict record returned by every decision procedure."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable


class Status(str, enum.Enum):
    SOLVABLE = "Solvable"
    UNSOLVABLE = "Unsolvable"
    LOCALLY_UNSOLVABLE = "LocallyUnsolvable"
    UNKNOWN_WITNESS = "UnknownWitness"


@dataclass(frozen=True)
class Certificate:
    """The character that obstructs, with the value its product takes."""

    character: str
    value: int

    def as_dict(self) -> dict[str, Any]:
        return {"character": self.character, "value": self.value}


@dataclass(frozen=True)
class Decision:
    status: Status
    witness: tuple[int, ...] | None = None
    certificate: Certificate | None = None
    place: int | str | None = None

    @classmethod
    def solvable(
        cls,
        witness: tuple[int, ...] | None = None,
        check: Callable[[tuple[int, ...]], bool] | None = None,
    ) -> Decision:
        """A positive verdict; ``check`` re-verifies the witness exactly."""
        if witness is not None:
            witness = tuple(int(w) for w in witness)
            if check is not None and not check(witness):
                raise ArithmeticError(f"witness {witness} does not satisfy its equation")
        return cls(Status.SOLVABLE, witness)

    @classmethod
    def unsolvable(cls, certificate: Certificate | None = None) -> Decision:
        return cls(Status.UNSOLVABLE, certificate=certificate)

    @classmethod
    def locally_unsolvable(cls, place: int | str) -> Decision:
        return cls(Status.LOCALLY_UNSOLVABLE, place=place)

    @classmethod
    def unknown_witness(cls) -> Decision:
        return cls(Status.UNKNOWN_WITNESS)

    @property
    def is_solvable(self) -> bool:
        return self.status is Status.SOLVABLE

    def as_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "place": self.place,
            "witness": list(self.witness) if self.witness is not None else None,
            "certificate": self.certificate.as_dict() if self.certificate else None,
        }
