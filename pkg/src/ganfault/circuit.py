"""Bit vectors, classical logic gates, and layered combinational circuits.

A circuit maps an N-bit input to an N-bit output through ordered layers of
gate slots.  A slot is either a unary gate on a single bit position or a
binary gate on an aligned adjacent pair (1,2), (3,4), ...; a binary gate
writes its output bit to *both* positions of its pair, so evaluation always
preserves width but is in general not injective.

Bit positions are indexed j = 1..N with j = 1 the leftmost bit of the
string form.  Integer encodings weight bit j by 2**j, so an N-bit vector
encodes into [0, 2**(N+1) - 2].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

MAX_WIDTH = 64


class GateKind(enum.Enum):
    """The seven classical logic gates plus the identity BUFFER.

    NOT and BUFFER are unary; the rest take two inputs.  BUFFER is the
    pass-through gate used to model missing devices and the polarity
    reversal of NOT.
    """

    NOT = "not"
    BUFFER = "buffer"
    AND = "and"
    OR = "or"
    NAND = "nand"
    NOR = "nor"
    XOR = "xor"
    XNOR = "xnor"

    @property
    def arity(self) -> int:
        return 1 if self in (GateKind.NOT, GateKind.BUFFER) else 2

    def __str__(self) -> str:
        return self.value


GATES_BY_NAME = {kind.value: kind for kind in GateKind}

_UNARY_TRUTH = {
    GateKind.NOT: lambda a: 1 - a,
    GateKind.BUFFER: lambda a: a,
}

_BINARY_TRUTH = {
    GateKind.AND: lambda a, b: a & b,
    GateKind.OR: lambda a, b: a | b,
    GateKind.NAND: lambda a, b: 1 - (a & b),
    GateKind.NOR: lambda a, b: 1 - (a | b),
    GateKind.XOR: lambda a, b: a ^ b,
    GateKind.XNOR: lambda a, b: 1 - (a ^ b),
}


def _check_bit(x: int, name: str) -> int:
    if x not in (0, 1):
        raise ValueError(f"{name} must be 0 or 1, got {x!r}")
    return x


def eval_gate(kind: GateKind, a: int, b: int | None = None) -> int:
    """Standard truth-table value of one gate.

    ``b`` must be supplied exactly when ``kind`` is binary; a mismatch
    raises ``ValueError`` mentioning "gate arity".
    """
    _check_bit(a, "a")
    if kind.arity == 1:
        if b is not None:
            raise ValueError(f"gate arity: {kind} is unary but got two inputs")
        return _UNARY_TRUTH[kind](a)
    if b is None:
        raise ValueError(f"gate arity: {kind} is binary but got one input")
    _check_bit(b, "b")
    return _BINARY_TRUTH[kind](a, b)


@dataclass(frozen=True)
class BitVector:
    """An immutable N-bit binary signal, 1 <= N <= 64.

    Internally bit j is stored at integer bit position j - 1 of ``value``,
    so the leftmost bit of the string form is the least significant stored
    bit.
    """

    width: int
    value: int

    def __post_init__(self) -> None:
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        bits = tuple(bits)
        value = 0
        for j, bit in enumerate(bits, start=1):
            _check_bit(bit, f"bit {j}")
            value |= bit << (j - 1)
        return cls(len(bits), value)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        return cls.from_bits(int(ch) for ch in text)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (j - 1)) & 1 for j in range(1, self.width + 1))

    def bit(self, j: int) -> int:
        """Bit at 1-based position j."""
        if not 1 <= j <= self.width:
            raise ValueError(f"position {j} out of range 1..{self.width}")
        return (self.value >> (j - 1)) & 1

    def popcount(self) -> int:
        return self.value.bit_count()

    def hamming(self, other: "BitVector") -> int:
        if self.width != other.width:
            raise ValueError(f"width mismatch: {self.width} vs {other.width}")
        return (self.value ^ other.value).bit_count()

    def complement(self) -> "BitVector":
        return BitVector(self.width, self.value ^ ((1 << self.width) - 1))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def encode_int(v: BitVector) -> int:
    """Encode a bit vector as sum_j bits[j] * 2**j (weights start at 2**1)."""
    return v.value << 1


def decode_int(encoded: int, width: int) -> BitVector:
    """Inverse of :func:`encode_int` for a known width."""
    if encoded & 1:
        raise ValueError(f"{encoded} is not a valid encoding (odd)")
    return BitVector(width, encoded >> 1)


@dataclass(frozen=True)
class GateSlot:
    """One gate occupying one position (unary) or the pair (p, p+1) (binary).

    ``position`` is the lowest covered 1-based bit position; binary slots
    must start on an odd position so pairs stay aligned to (2k-1, 2k).
    """

    kind: GateKind
    position: int

    def __post_init__(self) -> None:
        if self.position < 1:
            raise ValueError(f"position {self.position} out of range")
        if self.kind.arity == 2 and self.position % 2 == 0:
            raise ValueError(
                f"alignment: binary gate {self.kind} must start on an odd "
                f"position, got {self.position}"
            )

    @property
    def positions(self) -> tuple[int, ...]:
        if self.kind.arity == 1:
            return (self.position,)
        return (self.position, self.position + 1)


@dataclass(frozen=True)
class Layer:
    """One layer of gate slots, kept sorted by lowest covered position."""

    slots: tuple[GateSlot, ...]

    def __init__(self, slots: Iterable[GateSlot]) -> None:
        ordered = tuple(sorted(slots, key=lambda s: s.position))
        object.__setattr__(self, "slots", ordered)


@dataclass(frozen=True)
class _LayerPlan:
    unary_mask: int
    not_flip_mask: int
    binary_groups: tuple[tuple[GateKind, int], ...]


def _apply_binary_packed(kind: GateKind, a, b, mask):
    # a and b carry the pair's two input bits aligned at the pair's low
    # position; complemented gates XOR against the group mask.
    if kind is GateKind.AND:
        return a & b
    if kind is GateKind.OR:
        return a | b
    if kind is GateKind.XOR:
        return a ^ b
    if kind is GateKind.NAND:
        return (a & b) ^ mask
    if kind is GateKind.NOR:
        return (a | b) ^ mask
    return (a ^ b) ^ mask  # XNOR


@dataclass(frozen=True)
class Circuit:
    """An ordered stack of layers over a fixed width.

    Every layer must cover the positions {1, ..., width} exactly once;
    construction validates coverage, ranges, and pair alignment.
    """

    width: int
    layers: tuple[Layer, ...]

    def __init__(self, width: int, layers: Iterable[Layer]) -> None:
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "layers", tuple(layers))
        self._validate()

    def _validate(self) -> None:
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {self.width}")
        if not self.layers:
            raise ValueError("circuit needs at least one layer")
        for li, layer in enumerate(self.layers, start=1):
            covered: set[int] = set()
            for slot in layer.slots:
                for p in slot.positions:
                    if not 1 <= p <= self.width:
                        raise ValueError(
                            f"position {p} out of range 1..{self.width} "
                            f"in layer {li}"
                        )
                    if p in covered:
                        raise ValueError(
                            f"coverage: position {p} covered twice in layer {li}"
                        )
                    covered.add(p)
            missing = set(range(1, self.width + 1)) - covered
            if missing:
                raise ValueError(
                    f"coverage: layer {li} leaves positions "
                    f"{sorted(missing)} uncovered"
                )

    @cached_property
    def _plans(self) -> tuple[_LayerPlan, ...]:
        plans = []
        for layer in self.layers:
            unary_mask = 0
            not_flip = 0
            groups: dict[GateKind, int] = {}
            for slot in layer.slots:
                low = 1 << (slot.position - 1)
                if slot.kind.arity == 1:
                    unary_mask |= low
                    if slot.kind is GateKind.NOT:
                        not_flip |= low
                else:
                    groups[slot.kind] = groups.get(slot.kind, 0) | low
            plans.append(_LayerPlan(unary_mask, not_flip, tuple(groups.items())))
        return tuple(plans)

    def evaluate_packed(self, value):
        """Evaluate on a packed integer (or numpy uint64 array) of bits.

        Works identically for a Python int and for an ndarray of dtype
        uint64, which is what the sampler's batched rejection loop uses.
        """
        v = value
        for plan in self._plans:
            out = (v ^ plan.not_flip_mask) & plan.unary_mask
            for kind, mask in plan.binary_groups:
                a = v & mask
                b = (v >> 1) & mask
                r = _apply_binary_packed(kind, a, b, mask)
                out = out | r | (r << 1)
            v = out
        return v

    def evaluate(self, v: BitVector) -> BitVector:
        if v.width != self.width:
            raise ValueError(
                f"width mismatch: input has {v.width} bits, "
                f"circuit expects {self.width}"
            )
        return BitVector(self.width, int(self.evaluate_packed(v.value)))

    def evaluate_batch(self, values: np.ndarray) -> np.ndarray:
        """Evaluate on an array of packed inputs, dtype uint64."""
        return self.evaluate_packed(values.astype(np.uint64, copy=False))

    def slot_at(self, layer_index: int, position: int) -> GateSlot:
        """Slot whose lowest covered position is ``position`` (1-based layer)."""
        if not 1 <= layer_index <= len(self.layers):
            raise ValueError(f"slot: layer {layer_index} out of range")
        for slot in self.layers[layer_index - 1].slots:
            if slot.position == position:
                return slot
        raise ValueError(
            f"slot: no slot starts at position {position} in layer {layer_index}"
        )

    @property
    def gate_names(self) -> tuple[str, ...]:
        names = {slot.kind.value for layer in self.layers for slot in layer.slots}
        return tuple(sorted(names))


def eval_circuit(c: Circuit, input_vector: BitVector) -> BitVector:
    """Functional form of :meth:`Circuit.evaluate`."""
    return c.evaluate(input_vector)


def unary_layer(kind: GateKind, width: int) -> Layer:
    """A layer applying one unary gate to every position."""
    if kind.arity != 1:
        raise ValueError(f"gate arity: {kind} is not unary")
    return Layer(GateSlot(kind, p) for p in range(1, width + 1))


def pair_layer(kind: GateKind, width: int) -> Layer:
    """A layer applying one binary gate to every aligned pair."""
    if kind.arity != 2:
        raise ValueError(f"gate arity: {kind} is not binary")
    if width % 2:
        raise ValueError(f"alignment: pair layer needs even width, got {width}")
    return Layer(GateSlot(kind, p) for p in range(1, width + 1, 2))


def identity_circuit(width: int) -> Circuit:
    """All-BUFFER single-layer circuit: the identity map."""
    return Circuit(width, [unary_layer(GateKind.BUFFER, width)])
