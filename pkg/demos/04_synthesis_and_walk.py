"""Synthesize a controller, save it, reload it, and walk it.

The walk session steps forward with chosen inputs, moves backward, and
reports violated assumptions when the environment breaks its promises.
"""

from spectra.game import to_gr1
from spectra.gr1 import enumerate_concrete, solve, synthesize_symbolic
from spectra.lowering import lower
from spectra.runtime import (AssumptionViolation, WalkSession, handle_of,
                             load, save)
from spectra.semcheck import check
from spectra.syntax import parse

SOURCE = """spec Pump
env boolean sensorWet;
sys boolean pumpOn;
asm drying: trans (pumpOn -> !next(sensorWet));
gar react: alw (pumpOn <-> sensorWet);
"""

game = to_gr1(lower(check(parse(SOURCE, "pump.spectra"))))
realizable, memo = solve(game)
print("realizable:", realizable)

ctrl = synthesize_symbolic(game, memo)
conc = enumerate_concrete(ctrl)
print(f"concrete automaton: {len(conc.states)} states, "
      f"{len(conc.transitions)} transitions")

blob = save(handle_of(ctrl))
print(f"controller file: {len(blob)} bytes")
session = WalkSession(load(blob))

print("\nwalking:")
print("  inputs allowed initially:", session.env_options()[0])
print("  step sensorWet=1 ->", session.step({"sensorWet": True}))
try:
    session.step({"sensorWet": True})
except AssumptionViolation as violation:
    print("  stepping wet again violates:",
          [a.label for a in violation.violated])
print("  step sensorWet=0 ->", session.step({"sensorWet": False}))
session.back()
print("  after back, cursor:", session.cursor)
print("\ntrace so far:")
print(session.trace_csv())
