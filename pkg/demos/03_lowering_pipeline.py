"""Watch a rich specification lower to the boolean kernel.

Defines inline, the monitor becomes a system variable with guarantees,
state invariants split into initial + safety pairs, the past operator
gets an auxiliary variable, and the enum is bit-blasted with a validity
constraint (three of the four codes are legal).
"""

from spectra.lowering import lower
from spectra.semcheck import check
from spectra.syntax import parse

SOURCE = """spec Cart
env boolean ack;
sys {FWD, STOP, BWD} motor;

define halted := motor = STOP;

monitor boolean busy {
  ini !busy;
  trans (next(busy) <-> (!next(ack) & (busy | !halted)));
}

gar calmDown: alw (busy -> !(motor = FWD));
gar recall: alw ((Y busy) -> halted);
gar progress: alwEv halted;
"""

low = lower(check(parse(SOURCE, "cart.spectra")))
print("kernel variables:", [v.name for v in low.kernel.vars])
print("\nmotor encoding:")
enc = low.encodings["motor"]
for value in enc.domain():
    bits = enc.encode(value)
    print(f"  {value:>4} -> " + "".join(str(int(bits[b]))
                                        for b in reversed(enc.bits)))
print("\nlowered kernel:")
print(low.kernel.pretty())
