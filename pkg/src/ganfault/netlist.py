"""Line-oriented text format for circuits (``.ckt`` files).

Grammar::

    width <N>          # once, before any layer
    layer              # opens a layer block
    <gate> <pos>       # unary slot: gate in {not, buffer}
    <gate> <pos> <pos+1>   # binary slot on an aligned pair, pos odd

Gate names are lowercase; positions are 1-based.  ``#`` starts a comment;
blank lines are ignored.  :func:`serialize_netlist` emits the canonical
form (slots sorted by lowest position, no comments), and parsing is its
exact inverse.
"""

from __future__ import annotations

from .circuit import GATES_BY_NAME, Circuit, GateSlot, Layer


class NetlistError(ValueError):
    """Parse or structure error, carrying the 1-based source line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} at line {line}")
        self.line = line


def parse_netlist(text: str) -> Circuit:
    """Parse netlist text into a validated :class:`Circuit`.

    Any malformed input raises :class:`NetlistError` with a line number;
    no other exception escapes for arbitrary string input.
    """
    width: int | None = None
    layers: list[Layer] = []
    open_slots: list[tuple[GateSlot, int]] | None = None  # (slot, line)

    def close_layer(line: int) -> None:
        nonlocal open_slots
        if open_slots is None:
            return
        _check_coverage(width, open_slots, line)
        layers.append(Layer(slot for slot, _ in open_slots))
        open_slots = None

    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key = tokens[0]
        if key == "width":
            if width is not None:
                raise NetlistError("duplicate width declaration", lineno)
            if open_slots is not None or layers:
                raise NetlistError("width must precede layer blocks", lineno)
            if len(tokens) != 2:
                raise NetlistError("width takes one integer", lineno)
            width = _int_token(tokens[1], lineno)
            if not 1 <= width <= 64:
                raise NetlistError(f"width {width} out of range 1..64", lineno)
        elif key == "layer":
            if len(tokens) != 1:
                raise NetlistError("layer takes no arguments", lineno)
            if width is None:
                raise NetlistError("layer before width declaration", lineno)
            close_layer(lineno)
            open_slots = []
        else:
            if width is None or open_slots is None:
                raise NetlistError(f"slot line outside a layer block: {key!r}", lineno)
            open_slots.append((_parse_slot(tokens, width, lineno), lineno))
    close_layer(lineno + 1)
    if width is None:
        raise NetlistError("missing width declaration", max(lineno, 1))
    if not layers:
        raise NetlistError("document has no layer blocks", max(lineno, 1))
    try:
        return Circuit(width, layers)
    except ValueError as exc:  # pragma: no cover - coverage caught per layer
        raise NetlistError(str(exc), max(lineno, 1)) from exc


def _int_token(token: str, lineno: int) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise NetlistError(f"expected integer, got {token!r}", lineno) from None


def _parse_slot(tokens: list[str], width: int, lineno: int) -> GateSlot:
    kind = GATES_BY_NAME.get(tokens[0])
    if kind is None:
        raise NetlistError(f"unknown gate {tokens[0]!r}", lineno)
    positions = [_int_token(t, lineno) for t in tokens[1:]]
    if len(positions) != kind.arity:
        raise NetlistError(
            f"gate arity: {kind} takes {kind.arity} position(s), "
            f"got {len(positions)}",
            lineno,
        )
    for p in positions:
        if not 1 <= p <= width:
            raise NetlistError(f"position {p} out of range 1..{width}", lineno)
    if kind.arity == 2:
        lo, hi = positions
        if hi != lo + 1 or lo % 2 == 0:
            raise NetlistError(
                f"alignment: binary gate needs an aligned pair "
                f"(odd, odd+1), got ({lo}, {hi})",
                lineno,
            )
    return GateSlot(kind, positions[0])


def _check_coverage(
    width: int | None, slots: list[tuple[GateSlot, int]], close_line: int
) -> None:
    assert width is not None
    covered: dict[int, int] = {}
    for slot, line in slots:
        for p in slot.positions:
            if p in covered:
                raise NetlistError(
                    f"coverage: position {p} already covered "
                    f"(first at line {covered[p]})",
                    line,
                )
            covered[p] = line
    missing = sorted(set(range(1, width + 1)) - covered.keys())
    if missing:
        raise NetlistError(
            f"coverage: positions {missing} uncovered in layer", close_line
        )


def serialize_netlist(circuit: Circuit) -> str:
    """Canonical text form of a circuit; ``parse_netlist`` is its inverse."""
    lines = [f"width {circuit.width}"]
    for layer in circuit.layers:
        lines.append("layer")
        for slot in layer.slots:  # already sorted by position
            lines.append(" ".join([slot.kind.value] + [str(p) for p in slot.positions]))
    return "\n".join(lines) + "\n"
