"""Controller persistence and execution.

The .spcc file is little-endian binary: a magic/version header, the bit
variable table (BDD declaration order), the source-variable table with
bit mappings for decoding, the named environment assumptions (so a loaded
controller can still report which assumption an input violated), a
topologically ordered node table of fixed 16-byte records, and the init
and trans roots.

A WalkSession executes a controller step by step, forward and backward,
keeping the full history; stepping after back() follows the retained
future while inputs match and discards it on divergence.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass

from .bdd import BddManager, BddRef
from .gr1 import SymbolicController
from .lowering import VarEncoding

MAGIC = b"SPCC"
VERSION = 1
_TERMINAL_MARK = 0xFFFFFFFF


class ControllerFormatError(Exception):
    pass


class WalkError(Exception):
    pass


class IncompleteInputError(WalkError):
    pass


@dataclass
class AssumptionInfo:
    label: str
    kind: str  # "ini" | "trans"
    bdd: BddRef
    file: str = ""
    start: int = 0
    end: int = 0


class AssumptionViolation(Exception):
    """The provided environment input violates assumptions; execution
    halts rather than treating the controller as unconstrained."""

    def __init__(self, kind: str, violated: list[AssumptionInfo]):
        self.kind = kind
        self.violated = violated
        names = ", ".join(a.label for a in violated)
        super().__init__(f"{kind} assumption(s) violated: {names}")


@dataclass
class ControllerHandle:
    """Everything a walker needs, whether fresh or loaded from disk."""

    manager: BddManager
    x_vars: list  # (name, var id)
    y_vars: list  # (name, var id), memory bits excluded
    mem_vars: list
    init: BddRef
    trans: BddRef
    ini_assumptions: list
    trans_assumptions: list
    encodings: dict[str, VarEncoding]

    @property
    def var_ids(self) -> dict[str, int]:
        return {name: vid
                for name, vid in self.x_vars + self.y_vars + self.mem_vars}

    def level_of(self, name: str, primed=False) -> int:
        return self.manager.level_of(self.var_ids[name], primed)

    @property
    def env_encodings(self):
        return [e for e in self.encodings.values() if e.kind == "env"]

    @property
    def sys_encodings(self):
        return [e for e in self.encodings.values() if e.kind == "sys"]


def _identity_encodings(vars_, kind_of):
    return {name: VarEncoding(name, kind_of(name), ("bool",), (name,))
            for name, _ in vars_}


def handle_of(ctrl: SymbolicController) -> ControllerHandle:
    game = ctrl.game
    encodings = game.encodings
    if encodings is None:
        encodings = {}
        for name, _ in game.x_vars:
            encodings[name] = VarEncoding(name, "env", ("bool",), (name,))
        for name, _ in game.y_vars:
            encodings[name] = VarEncoding(name, "sys", ("bool",), (name,))
    def infos(kind):
        out = []
        for a in game.assumptions(kind):
            span = a.constraint.span
            out.append(AssumptionInfo(a.label, kind, a.bdd,
                                      span.file, span.start, span.end))
        return out
    return ControllerHandle(game.manager, list(game.x_vars),
                            list(game.y_vars), list(ctrl.mem_vars),
                            ctrl.init, ctrl.trans,
                            infos("ini"), infos("trans"), dict(encodings))


# ---------------------------------------------------------------------------
# serialization


def _w_str(out, s: str):
    data = s.encode("utf-8")
    out.write(struct.pack("<H", len(data)))
    out.write(data)


def _r_str(buf) -> str:
    (n,) = struct.unpack("<H", _take(buf, 2))
    return _take(buf, n).decode("utf-8")


def _take(buf: io.BytesIO, n: int) -> bytes:
    data = buf.read(n)
    if len(data) != n:
        raise ControllerFormatError("truncated controller file")
    return data


def save(handle: ControllerHandle | SymbolicController) -> bytes:
    """Serialize; load(save(c)) is semantically identical to c."""
    if isinstance(handle, SymbolicController):
        handle = handle_of(handle)
    m = handle.manager
    out = io.BytesIO()
    out.write(MAGIC)
    out.write(struct.pack("<H", VERSION))

    # bit table in manager declaration order; node levels are remapped to
    # the dense numbering of this table (the manager may own unrelated
    # variables, e.g. from an earlier extraction on the same game)
    bit_vars = sorted(handle.x_vars + handle.y_vars + handle.mem_vars,
                      key=lambda nv: nv[1])
    level_map = {}
    for i, (_, vid) in enumerate(bit_vars):
        level_map[2 * vid] = 2 * i
        level_map[2 * vid + 1] = 2 * i + 1
    env_names = {name for name, _ in handle.x_vars}
    out.write(struct.pack("<I", len(bit_vars)))
    for name, _ in bit_vars:
        _w_str(out, name)
        out.write(struct.pack("<B", 0 if name in env_names else 1))
    out.write(struct.pack("<H", len(handle.mem_vars)))

    bit_index = {name: i for i, (name, _) in enumerate(bit_vars)}
    encs = list(handle.encodings.values())
    out.write(struct.pack("<I", len(encs)))
    for enc in encs:
        _w_str(out, enc.name)
        out.write(struct.pack("<B", 0 if enc.kind == "env" else 1))
        if enc.ty[0] == "bool":
            out.write(struct.pack("<B", 0))
        elif enc.ty[0] == "enum":
            out.write(struct.pack("<B", 1))
            out.write(struct.pack("<H", len(enc.ty[1])))
            for v in enc.ty[1]:
                _w_str(out, v)
        else:
            out.write(struct.pack("<B", 2))
            out.write(struct.pack("<qq", enc.ty[1], enc.ty[2]))
        out.write(struct.pack("<H", len(enc.bits)))
        for b in enc.bits:
            out.write(struct.pack("<I", bit_index[b]))

    # node table: children before parents, dense ids, terminals are 0/1
    roots = [handle.init, handle.trans]
    assumption_entries = handle.ini_assumptions + handle.trans_assumptions
    roots.extend(a.bdd for a in assumption_entries)
    order: list[int] = []
    seen = {0, 1}

    def visit(nd):
        if nd in seen:
            return
        seen.add(nd)
        _, lo, hi = m._nodes[nd]
        visit(lo)
        visit(hi)
        order.append(nd)

    for r in roots:
        visit(r.node)
    ids = {0: 0, 1: 1}
    for i, nd in enumerate(order):
        ids[nd] = i + 2

    out.write(struct.pack("<I", len(order) + 2))
    out.write(struct.pack("<IIII", 0, _TERMINAL_MARK, 0, 0))
    out.write(struct.pack("<IIII", 1, _TERMINAL_MARK, 1, 1))
    for nd in order:
        level, lo, hi = m._nodes[nd]
        if level not in level_map:
            raise ControllerFormatError(
                "controller references a variable outside its own table")
        out.write(struct.pack("<IIII", ids[nd], level_map[level],
                              ids[lo], ids[hi]))

    out.write(struct.pack("<II", ids[handle.init.node],
                          ids[handle.trans.node]))
    out.write(struct.pack("<I", len(assumption_entries)))
    for a in assumption_entries:
        _w_str(out, a.label)
        out.write(struct.pack("<B", 0 if a.kind == "ini" else 1))
        out.write(struct.pack("<I", ids[a.bdd.node]))
        _w_str(out, a.file)
        out.write(struct.pack("<II", a.start, a.end))
    return out.getvalue()


def load(data: bytes) -> ControllerHandle:
    buf = io.BytesIO(data)
    if _take(buf, 4) != MAGIC:
        raise ControllerFormatError("not a controller file (bad magic)")
    (version,) = struct.unpack("<H", _take(buf, 2))
    if version != VERSION:
        raise ControllerFormatError(f"unsupported version {version}")

    (n_bits,) = struct.unpack("<I", _take(buf, 4))
    m = BddManager()
    bit_vars = []
    for _ in range(n_bits):
        name = _r_str(buf)
        (role,) = struct.unpack("<B", _take(buf, 1))
        vid = m.declare(name)
        bit_vars.append((name, vid, role))
    (n_mem,) = struct.unpack("<H", _take(buf, 2))
    mem_vars = [(nm, vid) for nm, vid, _ in bit_vars[n_bits - n_mem:]] \
        if n_mem else []
    rest = bit_vars[:n_bits - n_mem] if n_mem else bit_vars
    x_vars = [(nm, vid) for nm, vid, role in rest if role == 0]
    y_vars = [(nm, vid) for nm, vid, role in rest if role == 1]

    (n_encs,) = struct.unpack("<I", _take(buf, 4))
    encodings = {}
    bit_names = [nm for nm, _, _ in bit_vars]
    for _ in range(n_encs):
        name = _r_str(buf)
        (kind_b,) = struct.unpack("<B", _take(buf, 1))
        (tag,) = struct.unpack("<B", _take(buf, 1))
        if tag == 0:
            ty = ("bool",)
        elif tag == 1:
            (cnt,) = struct.unpack("<H", _take(buf, 2))
            ty = ("enum", tuple(_r_str(buf) for _ in range(cnt)))
        elif tag == 2:
            lo, hi = struct.unpack("<qq", _take(buf, 16))
            ty = ("int", lo, hi)
        else:
            raise ControllerFormatError(f"unknown type tag {tag}")
        (width,) = struct.unpack("<H", _take(buf, 2))
        bits = []
        for _ in range(width):
            (bi,) = struct.unpack("<I", _take(buf, 4))
            if bi >= len(bit_names):
                raise ControllerFormatError(
                    f"variable '{name}' references missing bit {bi}")
            bits.append(bit_names[bi])
        encodings[name] = VarEncoding(
            name, "env" if kind_b == 0 else "sys", ty, tuple(bits))

    (n_nodes,) = struct.unpack("<I", _take(buf, 4))
    if n_nodes < 2:
        raise ControllerFormatError("node table must contain the terminals")
    refs: dict[int, BddRef] = {}
    for rec in range(n_nodes):
        nid, level, lo, hi = struct.unpack("<IIII", _take(buf, 16))
        if nid != rec:
            raise ControllerFormatError(
                f"node ids must be dense: expected {rec}, found {nid}")
        if rec < 2:
            if level != _TERMINAL_MARK:
                raise ControllerFormatError("terminals must come first")
            refs[rec] = m.false if rec == 0 else m.true
            continue
        if lo >= rec or hi >= rec:
            raise ControllerFormatError(
                f"node {nid} references forward/dangling child "
                f"({lo}, {hi})")
        if level >= 2 * n_bits:
            raise ControllerFormatError(
                f"node {nid} references unknown level {level}")
        var, primed = m.var_at_level(level)
        v = m.mk_var(var, primed)
        refs[rec] = m.ite(v, refs[hi], refs[lo])

    init_id, trans_id = struct.unpack("<II", _take(buf, 8))
    for rid in (init_id, trans_id):
        if rid >= n_nodes:
            raise ControllerFormatError(f"dangling root id {rid}")
    (n_asm,) = struct.unpack("<I", _take(buf, 4))
    ini_assumptions, trans_assumptions = [], []
    for _ in range(n_asm):
        label = _r_str(buf)
        (kind_b,) = struct.unpack("<B", _take(buf, 1))
        (root,) = struct.unpack("<I", _take(buf, 4))
        if root >= n_nodes:
            raise ControllerFormatError(
                f"assumption '{label}' has dangling root {root}")
        file = _r_str(buf)
        start, end = struct.unpack("<II", _take(buf, 8))
        info = AssumptionInfo(label, "ini" if kind_b == 0 else "trans",
                              refs[root], file, start, end)
        (ini_assumptions if kind_b == 0 else trans_assumptions).append(info)

    return ControllerHandle(m, x_vars, y_vars, mem_vars,
                            refs[init_id], refs[trans_id],
                            ini_assumptions, trans_assumptions, encodings)


def save_file(handle, path: str):
    with open(path, "wb") as f:
        f.write(save(handle))


def load_file(path: str) -> ControllerHandle:
    with open(path, "rb") as f:
        return load(f.read())


# ---------------------------------------------------------------------------
# walking


class WalkSession:
    """History-carrying execution: consecutive entries satisfy trans,
    entry 0 satisfies init, and the cursor can move backwards."""

    def __init__(self, handle: ControllerHandle):
        self.handle = handle
        self.history: list[dict[int, bool]] = []
        self.cursor = -1

    # -- encoding helpers -----------------------------------------------------

    def _encode_inputs(self, inputs: dict, primed: bool) -> dict[int, bool]:
        h = self.handle
        bits: dict[int, bool] = {}
        missing = []
        for enc in h.env_encodings:
            if enc.name not in inputs:
                missing.append(enc.name)
                continue
            for bit, val in enc.encode(inputs[enc.name]).items():
                bits[h.level_of(bit, primed)] = val
        if missing:
            raise IncompleteInputError(
                f"missing environment input(s): {', '.join(missing)}")
        unknown = set(inputs) - {e.name for e in h.env_encodings}
        if unknown:
            raise IncompleteInputError(
                f"unknown environment variable(s): {', '.join(sorted(unknown))}")
        return bits

    def decode_state(self, state: dict[int, bool]) -> dict:
        h = self.handle
        out = {}
        for enc in h.encodings.values():
            assignment = {b: state[h.level_of(b)] for b in enc.bits}
            out[enc.name] = enc.decode(assignment)
        return out

    def _decode_outputs(self, state) -> dict:
        decoded = self.decode_state(state)
        return {e.name: decoded[e.name] for e in self.handle.sys_encodings}

    # -- queries -------------------------------------------------------------------

    @property
    def current(self) -> dict[int, bool] | None:
        if self.cursor < 0:
            return None
        return self.history[self.cursor]

    def current_decoded(self):
        state = self.current
        return None if state is None else self.decode_state(state)

    def env_options(self, cap: int = 256):
        """Environment inputs allowed at the current state (initial inputs
        allowed by theta_e when no step was taken yet)."""
        h = self.handle
        m = h.manager
        if self.cursor < 0:
            allowed = m.true
            for a in h.ini_assumptions:
                allowed = allowed & a.bdd
            levels = [h.level_of(b)
                      for e in h.env_encodings for b in e.bits]
            primed = False
        else:
            allowed = m.true
            for a in h.trans_assumptions:
                allowed = allowed & a.bdd
            allowed = m.restrict(allowed, self.current)
            levels = [h.level_of(b, True)
                      for e in h.env_encodings for b in e.bits]
            primed = True
        options = []
        truncated = False
        for assign in m.sat_all(allowed, levels):
            if len(options) >= cap:
                truncated = True
                break
            unprimed = {lv - 1 if primed else lv: v
                        for lv, v in assign.items()}
            decoded = {}
            ok = True
            for enc in h.env_encodings:
                try:
                    decoded[enc.name] = enc.decode(
                        {b: unprimed[h.level_of(b)] for b in enc.bits})
                except ValueError:
                    ok = False  # invalid encoding: not a real option
                    break
            if ok:
                options.append(decoded)
        # deterministic, declaration-order presentation
        encs = h.env_encodings
        options.sort(key=lambda opt: tuple(
            e.domain().index(opt[e.name]) for e in encs))
        return options, truncated

    # -- stepping --------------------------------------------------------------------

    def initial(self, inputs: dict) -> dict:
        if self.history:
            raise WalkError("session already started; use step or reset")
        h = self.handle
        m = h.manager
        bits = self._encode_inputs(inputs, primed=False)
        violated = [a for a in h.ini_assumptions if not m.eval(a.bdd, bits)]
        if violated:
            raise AssumptionViolation("initial", violated)
        yz_levels = [h.level_of(name) for name, _ in h.y_vars + h.mem_vars]
        choice = m.sat_one(m.restrict(h.init, bits), yz_levels)
        if choice is None:
            raise WalkError("controller has no initial state for this input")
        state = {**bits, **choice}
        self.history = [state]
        self.cursor = 0
        return self._decode_outputs(state)

    def step(self, inputs: dict) -> dict:
        if self.cursor < 0:
            return self.initial(inputs)
        h = self.handle
        m = h.manager
        bits_p = self._encode_inputs(inputs, primed=True)
        # redo: follow the retained future while the inputs match
        if self.cursor + 1 < len(self.history):
            nxt = self.history[self.cursor + 1]
            if all(nxt[lv - 1] == v for lv, v in bits_p.items()):
                self.cursor += 1
                return self._decode_outputs(nxt)
        current = self.current
        step_env = {**current, **bits_p}
        violated = [a for a in h.trans_assumptions
                    if not m.eval(a.bdd, step_env)]
        if violated:
            raise AssumptionViolation("safety", violated)
        yz_levels_p = [h.level_of(name, True)
                       for name, _ in h.y_vars + h.mem_vars]
        choice = m.sat_one(
            m.restrict(m.restrict(h.trans, current), bits_p), yz_levels_p)
        if choice is None:
            raise WalkError("controller has no transition for this input")
        state = {lv - 1: v for lv, v in {**bits_p, **choice}.items()}
        del self.history[self.cursor + 1:]
        self.history.append(state)
        self.cursor += 1
        return self._decode_outputs(state)

    def back(self) -> dict:
        if self.cursor <= 0:
            raise WalkError("already at the initial state")
        self.cursor -= 1
        return self.decode_state(self.current)

    # -- export -----------------------------------------------------------------------

    def trace_csv(self) -> str:
        h = self.handle
        names = [e.name for e in h.encodings.values()]
        lines = [",".join(["step"] + names)]
        for i, state in enumerate(self.history):
            decoded = self.decode_state(state)
            row = [str(i)]
            for name in names:
                v = decoded[name]
                row.append(str(v).lower() if isinstance(v, bool) else str(v))
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"
