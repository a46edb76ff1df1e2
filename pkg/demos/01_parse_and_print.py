"""Parse a specification, inspect the tree, and print it back.

The printer emits short keywords and minimal parentheses; reparsing its
output always reproduces the same tree.
"""

from spectra.syntax import parse, print_spec, parse_expression, print_expr

SOURCE = """
spec TrafficLight
env boolean carWaiting;
sys {RED, GREEN} light;

asm impatient: alwEv carWaiting;
gar serveCars: alwEv (light = GREEN | !carWaiting);
gar startSafe: ini (light = RED);
"""

ast = parse(SOURCE, "traffic.spectra")
print(f"specification {ast.name!r} with {len(ast.elements)} elements:")
for elem in ast.elements:
    print("  -", type(elem).__name__)

print("\npretty-printed:")
print(print_spec(ast))

roundtrip = parse(print_spec(ast), "traffic.spectra")
print("reparse identical:", roundtrip == ast)

e = parse_expression("a -> b -> c & !d")
print("\nprecedence demo:", print_expr(e))
