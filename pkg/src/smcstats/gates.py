"""Gate kinds and gate instances submitted to the engine's batch scheduler."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class GateKind(str, Enum):
    MUL = "mul"
    DIV_INT = "div_int"
    DIV_FIXED = "div_fixed"
    INT_TO_FIXED = "int_to_fixed"
    TRUNC_FIXED = "trunc_fixed"
    ADD_FIXED = "add_fixed"
    OPEN = "open"

    def __str__(self):
        return self.value


# Gates the dealer evaluates on reconstructed plaintext.
IDEAL_KINDS = frozenset({GateKind.DIV_INT, GateKind.DIV_FIXED, GateKind.INT_TO_FIXED, GateKind.TRUNC_FIXED})


@dataclass(eq=False)
class Gate:
    """One gate instance.

    ``inputs`` hold secret handles, or other :class:`Gate` objects standing
    for their (already computed) results.  ``bits`` optionally declares the
    bitlength of the result variable, as a typed program variable would.
    """

    kind: GateKind
    inputs: tuple
    bits: int | None = None
    result: Any = field(default=None, repr=False)
    done: bool = field(default=False, repr=False)
