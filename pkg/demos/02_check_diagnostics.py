"""The checker enforces the well-formedness rules with source positions.

Initial assumptions cannot mention system variables, next cannot nest,
enum values admit only equality, and so on.
"""

from spectra.diagnostics import DiagnosticsError, SourceCatalog
from spectra.semcheck import check
from spectra.syntax import parse

BROKEN = """spec Broken
env boolean request;
sys boolean grant;
asm oops: ini grant;
gar nested: trans next(next(request));
gar typed: ini (grant = 3);
"""

catalog = SourceCatalog()
catalog.add("broken.spectra", BROKEN)
try:
    check(parse(BROKEN, "broken.spectra"))
except DiagnosticsError as err:
    print(f"{len(err.diagnostics)} diagnostics:")
    for d in err.diagnostics:
        print(" ", d.render(catalog))
