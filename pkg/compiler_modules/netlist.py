"""
Netlist Elaboration Module

This module turns a validated geometry and a technology profile into the
structural netlist of one memory instance and writes it out in two formats.

Structure of an instance:
    - M x N MemCell1T1R between bitline pairs P<col>/N<col>, gated by WL<row>
    - M x B RefCell on the reference lines REFP<b>
    - P multiplexer of 2^X + 1 MuxBlocks and N multiplexer of 2^X MuxBlocks,
      each block holding B MuxSwitch children; the extra P block connects
      the reference lines to the sense amplifier reference inputs during READ
    - B WriteDriver, SenseAmp and TriStateBuffer, one per IO line
    - five LevelDown circuits copying READ, WRITE, DVLP, PRE, EN_SA into the
      VDDL domain as <name>_L
    - one Controller and one-hot DecoderX / DecoderY

Formats:
    emit_structural / parse_structural: versioned line format (FILE_FORMATS.md)
    emit_spice: flat behavioral deck with one subcircuit per cell kind

Usage:
    from compiler_modules.netlist import elaborate, emit_structural, stats

    netlist = elaborate(validate_geometry(32, 32, 4), default_profile())
    print(stats(netlist)["MuxSwitch"])    # 68
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .exceptions import NetlistError
from .geometry import MemoryGeometry
from .technology import TechnologyProfile

logger = logging.getLogger(__name__)

STRUCTURAL_VERSION = 1
UNPROGRAMMED_RESISTANCE = 1e6

SUPPLY_NETS = ("VDDL", "VDDH", "VDDW", "GND")
INPUT_NETS = ("CLK", "EN", "RW", "RESET")
CONTROL_NETS = ("READ", "WRITE", "DVLP", "PRE", "EN_SA", "DEC_EN", "IO_DRIVE")
LEVEL_DOWN_NETS = ("READ", "WRITE", "DVLP", "PRE", "EN_SA")


class CellKind(Enum):
    """Closed set of instance kinds; PORTS documents each kind's port list."""
    MemCell1T1R = "MemCell1T1R"
    RefCell = "RefCell"
    MuxSwitch = "MuxSwitch"
    MuxBlock = "MuxBlock"
    WriteDriver = "WriteDriver"
    SenseAmp = "SenseAmp"
    LevelDown = "LevelDown"
    TriStateBuffer = "TriStateBuffer"
    Controller = "Controller"
    DecoderX = "DecoderX"
    DecoderY = "DecoderY"


PORTS: Dict[CellKind, Tuple[str, ...]] = {
    CellKind.MemCell1T1R: ("P", "N", "WL"),
    CellKind.RefCell: ("REF", "WL", "GND"),
    CellKind.MuxSwitch: ("A", "Y", "SEL", "GND"),
    CellKind.MuxBlock: ("SEL",),
    CellKind.WriteDriver: ("D", "WE", "P", "N", "VDDW", "GND"),
    CellKind.SenseAmp: ("IN", "REF", "READ", "WRITE", "DVLP", "PRE", "EN_SA", "OUT", "VDDL", "GND"),
    CellKind.LevelDown: ("A", "Y", "VDDH", "VDDL", "GND"),
    CellKind.TriStateBuffer: ("A", "EN", "Y", "VDDH", "GND"),
    CellKind.Controller: ("CLK", "EN", "RW", "RESET") + CONTROL_NETS + ("VDDH", "GND"),
    # decoders: EN, A0..A<bits-1>, Y0..Y<2^bits-1>, VDDH, GND
    CellKind.DecoderX: (),
    CellKind.DecoderY: (),
}


def decoder_ports(bits: int) -> Tuple[str, ...]:
    return (("EN",) + tuple(f"A{i}" for i in range(bits))
            + tuple(f"Y{j}" for j in range(1 << bits)) + ("VDDH", "GND"))


@dataclass(frozen=True)
class Net:
    name: str
    supply: bool = False


@dataclass(frozen=True)
class Instance:
    """
    One placed cell.

    Attributes:
        name (str): unique instance name
        kind (CellKind): cell kind
        parent (str, optional): enclosing instance (mux switches sit in blocks)
        params (tuple): (name, text value) pairs, sorted by name
        ports (tuple): (port, net) pairs in port-list order
    """
    name: str
    kind: CellKind
    parent: Optional[str]
    params: Tuple[Tuple[str, str], ...]
    ports: Tuple[Tuple[str, str], ...]

    def port(self, name: str) -> str:
        return dict(self.ports)[name]

    def param(self, name: str) -> str:
        return dict(self.params)[name]


@dataclass(frozen=True)
class Netlist:
    design: str
    nets: Tuple[Net, ...]
    instances: Tuple[Instance, ...]

    def net_names(self) -> List[str]:
        return [n.name for n in self.nets]

    def by_kind(self, kind: CellKind) -> List[Instance]:
        return [i for i in self.instances if i.kind is kind]

    def validate(self):
        """
        Check the structural invariants.

        Raises:
            NetlistError: On duplicate names, unknown or doubly-bound ports,
                ports on undeclared nets, or a net declared both supply and signal
        """
        supply = {}
        for net in self.nets:
            if net.name in supply and supply[net.name] != net.supply:
                raise NetlistError(f"net {net.name} declared both supply and signal")
            if net.name in supply:
                raise NetlistError(f"net {net.name} declared twice")
            supply[net.name] = net.supply

        seen = set()
        for inst in self.instances:
            if inst.name in seen:
                raise NetlistError(f"duplicate instance name {inst.name}")
            if inst.parent is not None and inst.parent not in seen:
                raise NetlistError(f"{inst.name}: parent {inst.parent} is not defined before it")
            seen.add(inst.name)
            expected = _expected_ports(inst)
            bound = [p for p, _ in inst.ports]
            if len(bound) != len(set(bound)):
                raise NetlistError(f"{inst.name}: a port is bound more than once")
            if tuple(bound) != expected:
                raise NetlistError(f"{inst.name}: ports {bound} do not match {inst.kind.value} ports {list(expected)}")
            for port, net in inst.ports:
                if net not in supply:
                    raise NetlistError(f"{inst.name}.{port} bound to undeclared net {net}")


def _expected_ports(inst: Instance) -> Tuple[str, ...]:
    if inst.kind in (CellKind.DecoderX, CellKind.DecoderY):
        return decoder_ports(int(inst.param("bits")))
    return PORTS[inst.kind]


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".12g")


def _inst(name, kind, nets, params=None, parent=None) -> Instance:
    return Instance(
        name=name,
        kind=kind,
        parent=parent,
        params=tuple(sorted((k, _fmt(v)) for k, v in (params or {}).items())),
        ports=tuple(zip(PORTS[kind], nets)),
    )


def elaborate(g: MemoryGeometry, t: TechnologyProfile) -> Netlist:
    """
    Build the structural netlist of one memory instance.

    Args:
        g (MemoryGeometry): validated geometry
        t (TechnologyProfile): technology supplying the instance parameters

    Returns:
        Netlist: immutable, validated netlist
    """
    M, N, B, X, Y = g.M, g.N, g.B, g.X, g.Y
    cols = 1 << X

    nets = [Net(name, supply=True) for name in SUPPLY_NETS]
    signal_names = (
        list(INPUT_NETS) + list(CONTROL_NETS) + [f"{s}_L" for s in LEVEL_DOWN_NETS]
        + [f"XA{i}" for i in range(X)] + [f"YA{i}" for i in range(Y)]
        + [f"XSEL{i}" for i in range(cols)] + [f"WL{r}" for r in range(M)]
        + [f"P{c}" for c in range(N)] + [f"N{c}" for c in range(N)]
    )
    for prefix in ("REFP", "SA_REF", "PMUX_OUT", "NMUX_OUT", "SA_OUT", "IO"):
        signal_names += [f"{prefix}{b}" for b in range(B)]
    nets += [Net(name) for name in signal_names]

    insts = [
        _inst("CTRL", CellKind.Controller, INPUT_NETS + CONTROL_NETS + ("VDDH", "GND"),
              {"write_cycles": t.write_cycles, "read_phase_cycles": t.read_phase_cycles}),
    ]
    for kind, name, bits, addr, outputs in (
        (CellKind.DecoderX, "XDEC", X, "XA", [f"XSEL{i}" for i in range(cols)]),
        (CellKind.DecoderY, "YDEC", Y, "YA", [f"WL{r}" for r in range(M)]),
    ):
        nets_bound = ["DEC_EN"] + [f"{addr}{i}" for i in range(bits)] + outputs + ["VDDH", "GND"]
        insts.append(Instance(
            name=name, kind=kind, parent=None,
            params=(("bits", str(bits)),),
            ports=tuple(zip(decoder_ports(bits), nets_bound)),
        ))

    for sig in LEVEL_DOWN_NETS:
        insts.append(_inst(f"LD_{sig}", CellKind.LevelDown, (sig, f"{sig}_L", "VDDH", "VDDL", "GND"),
                           {"delay": t.level_down_delay, "fanout_delay": t.level_down_fanout_delay,
                            "vddl": t.vddl}))

    for r in range(M):
        for c in range(N):
            insts.append(_inst(f"MC_R{r}_C{c}", CellKind.MemCell1T1R, (f"P{c}", f"N{c}", f"WL{r}"),
                               {"r_access": t.r_on_access, "r_mem": UNPROGRAMMED_RESISTANCE}))
    for r in range(M):
        for b in range(B):
            insts.append(_inst(f"RC_R{r}_B{b}", CellKind.RefCell, (f"REFP{b}", f"WL{r}", "GND"),
                               {"r_access": t.r_on_access, "r_ref": t.r_ref}))

    for mux, line, out in (("PMUX", "P", "PMUX_OUT"), ("NMUX", "N", "NMUX_OUT")):
        blocks = cols + 1 if mux == "PMUX" else cols
        for i in range(blocks):
            block = f"{mux}_BLK{i}"
            sel = f"XSEL{i}" if i < cols else "READ"
            insts.append(_inst(block, CellKind.MuxBlock, (sel,), {"width": B}))
            for b in range(B):
                src = f"{line}{g.column(i, b)}" if i < cols else f"REFP{b}"
                dst = f"{out}{b}" if i < cols else f"SA_REF{b}"
                insts.append(_inst(f"{block}_SW{b}", CellKind.MuxSwitch, (src, dst, sel, "GND"),
                                   {"r_on": t.r_mux_on}, parent=block))

    for b in range(B):
        insts.append(_inst(f"WDRV{b}", CellKind.WriteDriver,
                           (f"IO{b}", "WRITE", f"PMUX_OUT{b}", f"NMUX_OUT{b}", "VDDW", "GND"),
                           {"r_out": t.r_driver, "vddw": t.vddw}))
    for b in range(B):
        insts.append(_inst(f"SA{b}", CellKind.SenseAmp,
                           (f"PMUX_OUT{b}", f"SA_REF{b}", "READ_L", "WRITE_L", "DVLP_L", "PRE_L", "EN_SA_L",
                            f"SA_OUT{b}", "VDDL", "GND"),
                           {"c_sense": t.c_sense, "offset": t.sense_offset,
                            "vbias": t.read_bias * t.vddl, "vddl": t.vddl}))
    for b in range(B):
        insts.append(_inst(f"TBUF{b}", CellKind.TriStateBuffer,
                           (f"SA_OUT{b}", "IO_DRIVE", f"IO{b}", "VDDH", "GND"), {"vddh": t.vddh}))

    netlist = Netlist(design=f"rram_{g.label()}", nets=tuple(nets), instances=tuple(insts))
    netlist.validate()
    logger.debug(f"Elaborated {netlist.design}: {len(netlist.instances)} instances, {len(netlist.nets)} nets")
    return netlist


def expected_counts(g: MemoryGeometry) -> Dict[str, int]:
    """Closed-form instance count per cell kind."""
    cols = 1 << g.X
    return {
        CellKind.MemCell1T1R.value: g.M * g.N,
        CellKind.RefCell.value: g.M * g.B,
        CellKind.MuxSwitch.value: g.B * (2 * cols + 1),
        CellKind.MuxBlock.value: 2 * cols + 1,
        CellKind.WriteDriver.value: g.B,
        CellKind.SenseAmp.value: g.B,
        CellKind.LevelDown.value: len(LEVEL_DOWN_NETS),
        CellKind.TriStateBuffer.value: g.B,
        CellKind.Controller.value: 1,
        CellKind.DecoderX.value: 1,
        CellKind.DecoderY.value: 1,
    }


def stats(n: Netlist) -> Dict[str, int]:
    """Instance count per cell kind (in CellKind order) plus net and wordline totals."""
    counts = {kind.value: len(n.by_kind(kind)) for kind in CellKind}
    names = n.net_names()
    counts["nets"] = len(names)
    counts["wordlines"] = sum(1 for name in names if name.startswith("WL"))
    counts["instances"] = len(n.instances)
    return counts


# ---------------------------------------------------------------------------
# Structural format
# ---------------------------------------------------------------------------

def emit_structural(n: Netlist) -> str:
    lines = [f"netlist {STRUCTURAL_VERSION} {n.design}"]
    for net in n.nets:
        lines.append(f"net {net.name} {'supply' if net.supply else 'signal'}")
    for inst in n.instances:
        fields = [inst.name, inst.kind.value, inst.parent or "-"]
        fields += [f"{k}={v}" for k, v in inst.params]
        fields.append(":")
        fields += [f"{p}={net}" for p, net in inst.ports]
        lines.append("inst " + " ".join(fields))
    lines.append("end")
    return "\n".join(lines) + "\n"


def _pairs(tokens: List[str], lineno: int, what: str) -> Tuple[Tuple[str, str], ...]:
    out = []
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or not key or not value:
            raise NetlistError(f"line {lineno}: malformed {what} {token!r}")
        out.append((key, value))
    return tuple(out)


def parse_structural(text: str) -> Netlist:
    """
    Parse the structural format back into a validated Netlist.

    Raises:
        NetlistError: On any syntax or consistency error, naming the line
    """
    lines = text.splitlines()
    if not lines:
        raise NetlistError("empty netlist")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "netlist":
        raise NetlistError("line 1: expected 'netlist <version> <design>'")
    if header[1] != str(STRUCTURAL_VERSION):
        raise NetlistError(f"line 1: unsupported netlist version {header[1]}")

    nets, insts = [], []
    ended = False
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if not tokens:
            continue
        if ended:
            raise NetlistError(f"line {lineno}: content after 'end'")
        if tokens[0] == "end":
            ended = True
        elif tokens[0] == "net":
            if len(tokens) != 3 or tokens[2] not in ("supply", "signal"):
                raise NetlistError(f"line {lineno}: expected 'net <name> supply|signal'")
            nets.append(Net(tokens[1], tokens[2] == "supply"))
        elif tokens[0] == "inst":
            if ":" not in tokens or len(tokens) < 5:
                raise NetlistError(f"line {lineno}: expected 'inst <name> <kind> <parent> [k=v ...] : [PORT=net ...]'")
            split = tokens.index(":")
            name, kind_text, parent = tokens[1:4]
            try:
                kind = CellKind(kind_text)
            except ValueError:
                raise NetlistError(f"line {lineno}: unknown cell kind {kind_text!r}")
            insts.append(Instance(
                name=name,
                kind=kind,
                parent=None if parent == "-" else parent,
                params=_pairs(tokens[4:split], lineno, "parameter"),
                ports=_pairs(tokens[split + 1:], lineno, "port binding"),
            ))
        else:
            raise NetlistError(f"line {lineno}: unknown record {tokens[0]!r}")
    if not ended:
        raise NetlistError("missing 'end'")

    netlist = Netlist(design=header[2], nets=tuple(nets), instances=tuple(insts))
    netlist.validate()
    return netlist


# ---------------------------------------------------------------------------
# SPICE deck
# ---------------------------------------------------------------------------

_HIGH = "1.65"
_SUBCKT_BODIES: Dict[CellKind, Tuple[str, ...]] = {
    CellKind.MemCell1T1R: (
        "S1 P A WL 0 SW_NMOS",
        "RA A M {r_access}",
        "RM M N {r_mem}",
    ),
    CellKind.RefCell: (
        "S1 REF A WL 0 SW_NMOS",
        "RA A R {r_access}",
        "RR R GND {r_ref}",
    ),
    CellKind.MuxSwitch: (
        "S1 A T SEL 0 SW_NMOS",
        "RT T Y {r_on}",
        "S2 A GND 0 SEL SW_GND",
    ),
    CellKind.WriteDriver: (
        f"BP PI 0 V = V(WE) > {_HIGH} ? (V(D) > {_HIGH} ? 0 : {{vddw}}) : 0",
        "RP PI P {r_out}",
        f"BN NI 0 V = V(WE) > {_HIGH} ? (V(D) > {_HIGH} ? {{vddw}} : 0) : 0",
        "RN NI N {r_out}",
    ),
    CellKind.SenseAmp: (
        "VB BI 0 DC {vbias}",
        "RI BI IN 1",
        "RR BI REF 1",
        "BO OUT 0 V = V(EN_SA) > 0.9 ? (V(BI,REF) > V(BI,IN) ? {vddl} : 0) : {vddl}",
    ),
    CellKind.LevelDown: (
        f"BY Y 0 V = V(A) > {_HIGH} ? {{vddl}} : 0",
    ),
    CellKind.TriStateBuffer: (
        "BX X 0 V = V(A) > 0.9 ? {vddh} : 0",
        "S1 X Y EN 0 SW_NMOS",
    ),
    CellKind.Controller: (),
    CellKind.MuxBlock: (),
}


def _decoder_body(bits: int) -> Tuple[str, ...]:
    body = []
    for j in range(1 << bits):
        terms = [f"V(EN) > {_HIGH}"]
        terms += [f"V(A{i}) {'>' if (j >> i) & 1 else '<'} {_HIGH}" for i in range(bits)]
        body.append(f"B{j} Y{j} 0 V = ({' && '.join(terms)}) ? 3.3 : 0")
    return tuple(body)


def _body(inst: Instance) -> Tuple[str, ...]:
    if inst.kind in (CellKind.DecoderX, CellKind.DecoderY):
        return _decoder_body(int(inst.param("bits")))
    return _SUBCKT_BODIES[inst.kind]


def spice_element_count(n: Netlist) -> int:
    """Primitive elements in the expanded deck: supply sources plus every leaf's subcircuit body."""
    return (len(SUPPLY_NETS) - 1) + sum(len(_body(inst)) for inst in n.instances)


def _spice_net(name: str) -> str:
    return "0" if name == "GND" else name


def emit_spice(n: Netlist, t: TechnologyProfile) -> str:
    """
    Flat behavioral SPICE deck.

    Transistors are voltage-controlled switches, memristors and reference
    devices are resistors and the digital blocks are behavioral sources.
    The controller is digital and left to the external stimulus.
    """
    lines = [
        f"* {n.design} behavioral deck",
        ".model SW_NMOS sw vt=1.65 vh=0.1 ron=1 roff=1e12",
        ".model SW_GND sw vt=-1.65 vh=0.1 ron=1 roff=1e12",
        f"VVDDL VDDL 0 DC {_fmt(t.vddl)}",
        f"VVDDH VDDH 0 DC {_fmt(t.vddh)}",
        f"VVDDW VDDW 0 DC {_fmt(t.vddw)}",
    ]

    emitted = set()
    for inst in n.instances:
        if inst.kind is CellKind.MuxBlock or inst.kind in emitted:
            continue
        emitted.add(inst.kind)
        ports = " ".join(p for p, _ in inst.ports)
        params = " ".join(f"{k}={v}" for k, v in inst.params)
        lines.append("")
        lines.append(f".subckt {inst.kind.value} {ports}" + (f" params: {params}" if params else ""))
        if inst.kind is CellKind.Controller:
            lines.append("* digital controller; driven by the simulation stimulus")
        lines.extend(_body(inst))
        lines.append(f".ends {inst.kind.value}")

    lines.append("")
    for inst in n.instances:
        if inst.kind is CellKind.MuxBlock:
            lines.append(f"* {inst.name}: select {inst.port('SEL')}")
            continue
        nets = " ".join(_spice_net(net) for _, net in inst.ports)
        params = " ".join(f"{k}={v}" for k, v in inst.params)
        lines.append(f"X{inst.name} {nets} {inst.kind.value}" + (f" {params}" if params else ""))
    lines.append(".end")
    return "\n".join(lines) + "\n"
