"""Translation of analyzed projects into contractor calls, and code emission.

The IR is a per-network, per-environment list of ncon-call descriptors that
all emitters share: tensor variable names (or the dimension of an identity
tensor to synthesize in place), integer label lists, and the contraction
order.  Emission is plain deterministic text generation; the same IR and
target always produce byte-identical files (LF line endings).

The emitted function takes ``(tensors, which_net, which_env)``.  ``tensors``
holds the unique project tensors ordered by first appearance when scanning
networks 1 to 4 (copies appear once); ``which_net`` falls back to the first
valid network when omitted or 0; ``which_env = 0`` evaluates the network as
drawn, and ``which_env = M`` the environment of its M-th tensor, defined for
closed networks only.  Generated code needs an ``ncon`` contractor on the
caller's path, nothing else (plus numpy in the Python dialect when identity
tensors must be synthesized).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .model import NAME_RE, LabeledNetwork, Project
from .reserved import RESERVED_WORDS
from .search import ContractionTree, CostReport

GENERATOR = "ttc 0.1.0"
TARGETS = ("python", "matlab", "julia")


class EmissionError(ValueError):
    pass


@dataclass(frozen=True)
class NconCallIR:
    refs: tuple[Union[str, int], ...]  # variable name, or dim of an identity
    labels: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]


@dataclass(frozen=True)
class EnvBranchIR:
    m: int
    call: NconCallIR


@dataclass(frozen=True)
class NetworkIR:
    number: int
    tensor_count: int
    open_count: int
    closed: bool
    summary: str
    call: NconCallIR
    envs: tuple[EnvBranchIR, ...]


@dataclass(frozen=True)
class ContractionProgramIR:
    function_name: str
    unique_tensors: tuple[str, ...]
    networks: tuple[NetworkIR, ...]
    default_net: int


def _call_ir(net: LabeledNetwork, tree: ContractionTree) -> NconCallIR:
    refs: list[Union[str, int]] = list(net.names)
    refs.extend(s.dim for s in net.synthetic)
    return NconCallIR(refs=tuple(refs), labels=net.all_label_lists(),
                      order=tree.ncon_order())


def build_ir(project: Project,
             function_name: str,
             nets: Mapping[int, LabeledNetwork],
             trees: Mapping[int, ContractionTree],
             reports: Mapping[int, CostReport],
             env_nets: Mapping[int, Mapping[int, LabeledNetwork]],
             env_trees: Mapping[int, Mapping[int, ContractionTree]],
             ) -> ContractionProgramIR:
    """Assemble the shared IR for one project.

    ``nets``/``trees``/``reports`` must cover every assigned network (any
    invalid network aborts analysis before reaching here); ``env_nets`` and
    ``env_trees`` hold, for each closed network, the environment network and
    contraction tree per 1-based tensor position.
    """
    if not NAME_RE.match(function_name) or function_name in RESERVED_WORDS:
        raise EmissionError(
            f"function name {function_name!r} is not usable in every "
            f"emission dialect")
    numbers = sorted(nets)
    if not numbers:
        raise EmissionError("project defines no networks")

    unique: list[str] = []
    for no in numbers:
        for name in nets[no].names:
            if name not in unique:
                unique.append(name)
    if function_name in unique:
        raise EmissionError(
            f"function name {function_name!r} collides with a tensor name")

    networks = []
    for no in numbers:
        net = nets[no]
        report = reports[no]
        envs = []
        for m in sorted(env_trees.get(no, {})):
            envs.append(EnvBranchIR(
                m=m, call=_call_ir(env_nets[no][m], env_trees[no][m])))
        bits = [f"network {no}: {net.n} tensors"]
        bits.append("closed" if net.closed else f"{net.open_count} open indices")
        bits.append(f"total {report.total_mults} multiplications")
        summary = ", ".join(bits)
        if envs:
            summary += f"; environments via which_env=1..{net.n}"
        networks.append(NetworkIR(
            number=no, tensor_count=net.n, open_count=net.open_count,
            closed=net.closed, summary=summary,
            call=_call_ir(net, trees[no]), envs=tuple(envs)))

    return ContractionProgramIR(
        function_name=function_name,
        unique_tensors=tuple(unique),
        networks=tuple(networks),
        default_net=numbers[0],
    )


def _header_lines(ir: ContractionProgramIR) -> list[str]:
    lines = [
        f"{ir.function_name}: tensor-network contraction function",
        f"generated by {GENERATOR}",
        "",
        "tensors, in order: " + ", ".join(ir.unique_tensors),
    ]
    for net in ir.networks:
        lines.append("  " + net.summary)
    lines += [
        "",
        f"usage: result = {ir.function_name}(tensors, which_net, which_env)",
        "  tensors: the unique project tensors, ordered as listed above",
        f"  which_net: network to contract (omitted or 0: first valid, here {ir.default_net})",
        "  which_env: 0 contracts the network as drawn; M > 0 contracts the",
        "    single-tensor environment of the M-th tensor (closed networks only)",
        "",
        "requires the ncon network contractor.",
    ]
    return lines


def _needs_numpy(ir: ContractionProgramIR) -> bool:
    return any(isinstance(r, int)
               for net in ir.networks
               for env in net.envs
               for r in env.call.refs)


def _int_list(vals) -> str:
    return "[" + ", ".join(str(v) for v in vals) + "]"


def emit(ir: ContractionProgramIR, target: str) -> str:
    """Emit the single function file for one dialect; byte-deterministic."""
    if target == "python":
        return _emit_python(ir)
    if target == "matlab":
        return _emit_matlab(ir)
    if target == "julia":
        return _emit_julia(ir)
    raise EmissionError(f"unknown emission target {target!r}; "
                        f"expected one of {', '.join(TARGETS)}")


# -- Python -----------------------------------------------------------------

def _py_ref(ref: Union[str, int]) -> str:
    return f"np.eye({ref})" if isinstance(ref, int) else ref


def _py_call(call: NconCallIR) -> str:
    tensors = "[" + ", ".join(_py_ref(r) for r in call.refs) + "]"
    labels = "[" + ", ".join(_int_list(l) for l in call.labels) + "]"
    return f"ncon({tensors}, {labels}, order={_int_list(call.order)})"


def _emit_python(ir: ContractionProgramIR) -> str:
    out = ["# " + l if l else "#" for l in _header_lines(ir)]
    out.append("")
    if _needs_numpy(ir):
        out.append("import numpy as np")
    out.append("from ncon import ncon")
    out += ["", ""]
    out.append(f"def {ir.function_name}(tensors, which_net=0, which_env=0):")
    out.append(f"    if not which_net:")
    out.append(f"        which_net = {ir.default_net}")
    for net in ir.networks:
        out.append(f"    if which_net == {net.number}:")
        for name in _branch_names(ir, net):
            out.append(f"        {name} = tensors[{ir.unique_tensors.index(name)}]")
        out.append(f"        if which_env == 0:")
        out.append(f"            return {_py_call(net.call)}")
        for env in net.envs:
            out.append(f"        if which_env == {env.m}:")
            out.append(f"            return {_py_call(env.call)}")
        if net.envs:
            out.append(f"        raise ValueError(\"which_env must be an "
                       f"integer in 0..{net.tensor_count} for network {net.number}\")")
        else:
            out.append(f"        raise ValueError(\"{_no_env_reason(net)}\")")
    nums = ", ".join(str(n.number) for n in ir.networks)
    out.append(f"    raise ValueError(\"which_net must name one of the "
               f"defined networks: {nums}\")")
    return "\n".join(out) + "\n"


def _no_env_reason(net: NetworkIR) -> str:
    if net.closed:
        return (f"network {net.number} has a single tensor: "
                f"which_env must be 0")
    return f"network {net.number} is open: which_env must be 0"


def _branch_names(ir: ContractionProgramIR, net: NetworkIR) -> list[str]:
    used = []
    for name in ir.unique_tensors:
        if name in net.call.refs and name not in used:
            used.append(name)
    return used


# -- MATLAB -----------------------------------------------------------------

def _m_ref(ref: Union[str, int]) -> str:
    return f"eye({ref})" if isinstance(ref, int) else ref


def _m_call(call: NconCallIR) -> str:
    tensors = "{" + ", ".join(_m_ref(r) for r in call.refs) + "}"
    labels = "{" + ", ".join(_int_list(l) for l in call.labels) + "}"
    return f"ncon({tensors}, {labels}, {_int_list(call.order)})"


def _emit_matlab(ir: ContractionProgramIR) -> str:
    out = [f"function T = {ir.function_name}(tensors, which_net, which_env)"]
    out += ["% " + l if l else "%" for l in _header_lines(ir)]
    out.append("")
    out.append("if nargin < 2 || isempty(which_net) || which_net == 0")
    out.append(f"  which_net = {ir.default_net};")
    out.append("end")
    out.append("if nargin < 3 || isempty(which_env)")
    out.append("  which_env = 0;")
    out.append("end")
    for net in ir.networks:
        out.append(f"if which_net == {net.number}")
        for name in _branch_names(ir, net):
            out.append(f"  {name} = tensors{{{ir.unique_tensors.index(name) + 1}}};")
        out.append("  if which_env == 0")
        out.append(f"    T = {_m_call(net.call)};")
        out.append("    return")
        out.append("  end")
        for env in net.envs:
            out.append(f"  if which_env == {env.m}")
            out.append(f"    T = {_m_call(env.call)};")
            out.append("    return")
            out.append("  end")
        if net.envs:
            out.append(f"  error('which_env must be an integer in "
                       f"0..{net.tensor_count} for network {net.number}');")
        else:
            out.append(f"  error('{_no_env_reason(net)}');")
        out.append("end")
    nums = ", ".join(str(n.number) for n in ir.networks)
    out.append(f"error('which_net must name one of the defined networks: {nums}');")
    out.append("end")
    return "\n".join(out) + "\n"


# -- Julia ------------------------------------------------------------------

def _jl_ref(ref: Union[str, int]) -> str:
    if isinstance(ref, int):
        return f"Float64[ii == jj for ii in 1:{ref}, jj in 1:{ref}]"
    return ref


def _jl_call(call: NconCallIR) -> str:
    tensors = "Any[" + ", ".join(_jl_ref(r) for r in call.refs) + "]"
    labels = "Any[" + ", ".join(_int_list(l) for l in call.labels) + "]"
    return f"ncon({tensors}, {labels}, {_int_list(call.order)})"


def _emit_julia(ir: ContractionProgramIR) -> str:
    out = ["# " + l if l else "#" for l in _header_lines(ir)]
    out.append("")
    out.append(f"function {ir.function_name}(tensors, which_net=0, which_env=0)")
    out.append("    if which_net == 0")
    out.append(f"        which_net = {ir.default_net}")
    out.append("    end")
    for net in ir.networks:
        out.append(f"    if which_net == {net.number}")
        for name in _branch_names(ir, net):
            out.append(f"        {name} = tensors[{ir.unique_tensors.index(name) + 1}]")
        out.append("        if which_env == 0")
        out.append(f"            return {_jl_call(net.call)}")
        out.append("        end")
        for env in net.envs:
            out.append(f"        if which_env == {env.m}")
            out.append(f"            return {_jl_call(env.call)}")
            out.append("        end")
        if net.envs:
            out.append(f"        error(\"which_env must be an integer in "
                       f"0..{net.tensor_count} for network {net.number}\")")
        else:
            out.append(f"        error(\"{_no_env_reason(net)}\")")
        out.append("    end")
    nums = ", ".join(str(n.number) for n in ir.networks)
    out.append(f"    error(\"which_net must name one of the defined networks: {nums}\")")
    out.append("end")
    return "\n".join(out) + "\n"
