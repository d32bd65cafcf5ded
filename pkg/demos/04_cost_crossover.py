"""Where does the multiplexor SELECT stop beating unary iteration?

Both cost models count CX gates for a SELECT over 2^k terms acting on n
system qubits:

    multiplexor      2^k (2n + 1) - n - 2
    unary iteration  2^(k-1) (4n + 17) - 31

Their difference is 15 * 2^(k-1) + n - 29, which is positive for every k >= 2
and n >= 1. Taken literally, the multiplexor is never the more expensive
option, so a crossover near n = 12 does not come out of these formulas.
"""

from lcu_taylor.synth import crossover_report, multiplexor_cost, unary_iteration_cost

print(f"{'k':>3} " + " ".join(f"{'n=' + str(n):>13}" for n in (1, 5, 12, 13, 40)))
for k in (2, 4, 6, 8):
    cells = [f"{multiplexor_cost(k, n)}/{unary_iteration_cost(k, n)}".rjust(13) for n in (1, 5, 12, 13, 40)]
    print(f"{k:>3} " + " ".join(cells))
print("(multiplexor / unary iteration)")

report = crossover_report()
print(f"claim 'multiplexor cheaper only for n <= 12' holds: {report['claim_holds']}; "
      f"{len(report['mismatches'])} (k, n) cells disagree with it")
