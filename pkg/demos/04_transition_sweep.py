"""
Locating the linear-to-chaotic transition
=========================================

Sweeping the uncertainty level with an interchanged device shows the
deviation scatter leaving the diagonal: at small eps accepted outputs must
match the target, at larger eps they spread through a widening Hamming
ball.  The transition point is the first level whose normalized residual
rho exceeds the threshold, and it reads off as the fault tolerance.
"""

from pathlib import Path

from ganfault import (
    Circuit,
    ComparisonMode,
    ExperimentConfig,
    GateKind,
    Swap,
    detect_transition,
    render_scatter,
    run_sweep,
    unary_layer,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# A 16-bit single layer of NOT gates with one device swapped for a buffer.
circuit = Circuit(16, [unary_layer(GateKind.NOT, 16)])
cfg = ExperimentConfig(
    circuit=circuit,
    epsilon=0.0,
    trials=800,
    seed=1,
    faults=(Swap(1, 1, GateKind.BUFFER),),
    mode=ComparisonMode.TARGET_SEARCH,
    max_iterations=500_000,
)

sweep = run_sweep(cfg)
print(f"{'eps':>6} {'accepted':>9} {'rho':>9} {'mean iters':>11}")
for p in sweep.points:
    rho = f"{p.rho:9.4f}" if p.rho is not None else "        -"
    mean = f"{p.mean_iterations:11.1f}" if p.mean_iterations else "          -"
    print(f"{p.epsilon:6.2f} {p.accepted_count:9d} {rho} {mean}")

estimate = detect_transition(sweep, tau=0.05, min_samples=200)
print(f"\ntransition epsilon* = {estimate.epsilon_star}  (tau={estimate.tau})")

# Scatter plots before and after the transition: the first hugs the
# diagonal, the second fans out into a chaotic band.
for p in sweep.points:
    if p.epsilon in (0.05, 0.30):
        path = OUT / f"scatter_eps{int(p.epsilon * 100):02d}.svg"
        path.write_text(render_scatter(p.samples, sweep.width))
        print(f"wrote {path}")
