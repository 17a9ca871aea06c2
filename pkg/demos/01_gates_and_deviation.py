"""
Gates, layered circuits, and the complex deviation measure
===========================================================

A quick tour of the building blocks: the eight gate kinds, bit vectors,
layered circuits, and how a pair of signals becomes one point in the
complex plane.
"""

from ganfault import (
    BitVector,
    Circuit,
    GateKind,
    deviation,
    encode_int,
    eval_gate,
    pair_layer,
    relative_uncertainty,
    unary_layer,
)

# Every gate is a plain truth table.  NAND(1,1) complements AND(1,1).
print("AND(1,1) =", eval_gate(GateKind.AND, 1, 1))
print("NAND(1,1) =", eval_gate(GateKind.NAND, 1, 1))
print("XNOR(0,0) =", eval_gate(GateKind.XNOR, 0, 0))

# Bit vectors are immutable strings of 0/1 with 1-based positions; bit j
# carries integer weight 2**j, so "1010" encodes to 2 + 8 = 10.
v = BitVector.from_string("1010")
print("\nbits:", v.bits, " encoded:", encode_int(v))

# A circuit is a stack of layers.  A binary gate sits on an aligned pair
# (1,2), (3,4), ... and writes its output bit to both positions, so the
# map keeps its width but loses information.
c = Circuit(4, [pair_layer(GateKind.AND, 4), unary_layer(GateKind.NOT, 4)])
for text in ("1111", "1010", "0011"):
    x = BitVector.from_string(text)
    print(f"AND-pairs then NOT: {text} -> {c.evaluate(x)}")

# The deviation measure turns a (modulated, reference) pair into a complex
# integer: the real part encodes what the circuit produced, the imaginary
# part what was expected.  Matching signals land on the re == im diagonal.
modulated = c.evaluate(BitVector.from_string("1010"))
reference = BitVector.from_string("0101")
re, im = deviation(modulated, reference)
print("\ndeviation point:", (re, im))
print("relative uncertainty:", relative_uncertainty(modulated, reference))
