"""Quality analyses: unrealizable cores, trivial constraints, monitors.

ddmin shrinks the guarantee list to a locally minimal unrealizable
subset; the trivial-constraint scan finds constant constraints; the
monitor check catches update rules that are not deterministic/complete.
"""

from spectra.analyses import check_monitor, find_trivial, unrealizable_core
from spectra.semcheck import check
from spectra.syntax import parse

UNREALIZABLE = """spec Conflicted
env boolean alarm;
sys boolean door;
gar keepShut: alw !door;
gar keepOpen: alw door;
gar idle: alwEv !alarm | true;
gar sane: ini (alarm | !alarm);
"""

checked = check(parse(UNREALIZABLE, "conflicted.spectra"))
report = unrealizable_core(checked)
print("unrealizable core:", [g.label for g in report.core],
      f"({report.checks_performed} solver calls, minimal={report.minimal})")

for finding in find_trivial(checked):
    print("trivial:", finding.label, "is", finding.verdict)

MONITORED = """spec Watch
env boolean tick;
sys boolean beep;
monitor boolean odd {
  ini !odd;
  trans (next(odd) <-> (odd <-> !next(tick)));
}
monitor boolean stuck {
  ini !stuck;
  trans (next(stuck) & stuck);
}
gar g: alw (beep <-> odd);
"""
checked2 = check(parse(MONITORED, "watch.spectra"))
for name in ("odd", "stuck"):
    verdict = check_monitor(checked2, name)
    print(f"monitor {name}: deterministic={verdict.deterministic} "
          f"complete={verdict.complete}"
          + (f" witness={verdict.witness}" if verdict.witness else ""))
