"""Command-line front end: build resolutions, run checks, write dumps and reports."""
import argparse
import logging
import re
import sys
from pathlib import Path
from typing import Optional

import config
from cocycle import CocycleData, InnerCrossedModule, automorphism_oracle, build_extension, verify_cocycle
from constructions import (
    AmalgamData,
    HnnData,
    amalgam_resolution,
    cyclic_resolution,
    cylinder,
    hnn_resolution,
    lift_morphism,
    presentation_complex,
    retract_to_vertex,
    standard_resolution,
    tensor_product,
)
from crossed_complex import CrossedComplex, check_complex_axioms, format_dump, identities_presentation, parse_dump
from errors import NotFiniteWithinBound, OracleMismatch, XresError
from group_oracle import FreeOracle, GroupOracle, InfiniteCyclicOracle, RewritingOracle, build_finite_oracle
from models import ExactnessReport
from presentation import Presentation, parse_presentation, parse_word
from verify import check_exactness, group_homology, to_chain_complex

logger = logging.getLogger("xres")

CYCLIC = re.compile(r"^C(\d+)$")


def load_presentation(path: str) -> Presentation:
    return parse_presentation(Path(path).read_text())


def oracle_for(p: Presentation, bound: int) -> GroupOracle:
    """Finite table when enumeration succeeds within bound, else free or rewriting."""
    if not p.relators:
        if len(p.generators) == 1 and p.is_reduced():
            return InfiniteCyclicOracle(p.generators[0])
        return FreeOracle(p.generators)
    if p.is_reduced():
        try:
            return build_finite_oracle(p, bound)
        except NotFiniteWithinBound:
            logger.info("no finite table within %d elements, using rewriting", bound)
    return RewritingOracle(p.generators, list(p.relators.values()))


def load_complex(source: str, max_dim: int, bound: int) -> CrossedComplex:
    """`C<p>`, `Z`, a `.xc` dump or a `.gp` presentation."""
    match = CYCLIC.match(source)
    if match:
        return cyclic_resolution(int(match.group(1)), max_dim)
    if source == "Z":
        p = parse_presentation("gp< a >")
        return presentation_complex(p, oracle_for(p, bound), label="Z")
    text = Path(source).read_text()
    if source.endswith(".xc"):
        return parse_dump(text, bound)
    p = parse_presentation(text)
    return presentation_complex(p, oracle_for(p, bound), label=Path(source).stem)


def parse_images(text: Optional[str], src: CrossedComplex, dst: CrossedComplex) -> dict:
    """`a -> a^3, b -> b^-1` into dimension-1 images in dst."""
    images = {}
    targets = dst.generators(1)
    for item in filter(None, (s.strip() for s in re.split(r"[;,]", text or ""))):
        name, _, word = item.partition("->")
        images[name.strip()] = parse_word(word.strip(), targets)
    for gen in src.generators(1):
        if gen.name not in images and gen.name in dst.gens.get(1, {}):
            images[gen.name] = parse_word(gen.name, targets)
    return images


def parse_cocycle(
    k1_text: Optional[str], k2_text: Optional[str], resolution: CrossedComplex, m: InnerCrossedModule
) -> CocycleData:
    """k1 as `x: a -> a^-1, b -> b; y: ...`, k2 as `r = a^2; s = 1`; missing values are trivial."""
    kgens = list(m.kernel.generators.values())
    k1 = {gen.name: m.identity for gen in resolution.generators(1)}
    for block in filter(None, (s.strip() for s in (k1_text or "").split(";"))):
        name, _, body = block.partition(":")
        images = {}
        for item in filter(None, (s.strip() for s in body.split(","))):
            gen, _, word = item.partition("->")
            images[gen.strip()] = parse_word(word.strip(), kgens)
        k1[name.strip()] = m.automorphism(images)
    k2 = {gen.name: 0 for gen in resolution.generators(2)}
    for block in filter(None, (s.strip() for s in (k2_text or "").split(";"))):
        name, _, word = block.partition("=")
        k2[name.strip()] = m.element(parse_word(word.strip(), kgens))
    return CocycleData(k1, k2)


def emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
        print(f"Wrote {args.out}")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def emit_report(args: argparse.Namespace, report, text: str) -> None:
    emit(args, report.model_dump_json(indent=2) + "\n" if args.json else text)


def cmd_resolve_standard(args: argparse.Namespace) -> Optional[int]:
    p = load_presentation(args.group)
    o = build_finite_oracle(p, args.bound)
    emit(args, format_dump(standard_resolution(o, args.dim)))


def cmd_tensor(args: argparse.Namespace) -> Optional[int]:
    left = load_complex(args.left, args.dim, args.bound)
    right = load_complex(args.right, args.dim, args.bound)
    emit(args, format_dump(tensor_product(left, right, args.dim)))


def cmd_cylinder(args: argparse.Namespace) -> Optional[int]:
    emit(args, format_dump(cylinder(load_complex(args.input, args.dim, args.bound), args.dim)))


def cmd_amalgam(args: argparse.Namespace) -> Optional[int]:
    a, b, c = (load_complex(x, args.dim, args.bound) for x in (args.a, args.b, args.c))
    i = lift_morphism(parse_images(args.i, c, a), c, a, args.dim - 1)
    j = lift_morphism(parse_images(args.j, c, b), c, b, args.dim - 1)
    result = amalgam_resolution(AmalgamData(a, b, c, i, j), args.dim)
    if args.retract:
        result = retract_to_vertex(result, "0")
    emit(args, format_dump(result))


def cmd_hnn(args: argparse.Namespace) -> Optional[int]:
    g = load_complex(args.group, args.dim, args.bound)
    a = load_complex(args.sub, args.dim - 1, args.bound)
    k0 = lift_morphism(parse_images(args.iso, a, g), a, g, args.dim - 1)
    k1 = lift_morphism(parse_images(args.iso1, a, g), a, g, args.dim - 1)
    emit(args, format_dump(hnn_resolution(HnnData(g, a, k0, k1), args.dim)))


def cmd_retract(args: argparse.Namespace) -> Optional[int]:
    emit(args, format_dump(retract_to_vertex(load_complex(args.input, args.dim, args.bound), args.keep)))


def cmd_check(args: argparse.Namespace) -> Optional[int]:
    report = check_complex_axioms(load_complex(args.input, args.dim, args.bound), args.dim)
    lines = [f"checked {report.checked} generators to dimension {report.max_dim}: {'ok' if report.ok else 'FAILED'}"]
    if not report.exact:
        lines.append("note: coefficient oracle is not exact; passes are sound, failures may be spurious")
    lines += report.messages
    emit_report(args, report, "\n".join(lines) + "\n")
    return 0 if report.ok else 2


def cmd_homology(args: argparse.Namespace) -> Optional[int]:
    complex_ = load_complex(args.input, args.dim, args.bound)
    cc = to_chain_complex(complex_, max_dim=args.dim)
    lo, _, hi = args.dims.partition("-")
    dims = range(int(lo), int(hi or lo) + 1)
    if args.group_homology:
        groups = group_homology(cc, dims)
        report = ExactnessReport(dims=list(dims), homology=groups, exact=all(h.is_zero() for h in groups))
    else:
        report = check_exactness(cc, dims)
    text = "\n".join(f"H{h.dim} = {h}" for h in report.homology) + "\n"
    emit_report(args, report, text)


def cmd_identities(args: argparse.Namespace) -> Optional[int]:
    emit(args, str(identities_presentation(load_complex(args.input, args.dim, args.bound))) + "\n")


def _cocycle_inputs(args):
    resolution = load_complex(args.resolution, args.dim, args.bound)
    kernel = load_presentation(args.kernel)
    if len(kernel.objects) > 1:
        raise OracleMismatch("the kernel must be a group")
    m = automorphism_oracle(build_finite_oracle(kernel, args.bound), list(kernel.relators.values()),
                            Path(args.kernel).stem)
    return resolution, m, parse_cocycle(args.k1, args.k2, resolution, m)


def cmd_cocycle_verify(args: argparse.Namespace) -> Optional[int]:
    resolution, m, c = _cocycle_inputs(args)
    report = verify_cocycle(c, resolution, m)
    text = f"checked {report.checked} generators: {'ok' if report.ok else 'FAILED at ' + str(report.witness)}\n"
    emit_report(args, report, text)
    return 0 if report.ok else 2


def cmd_extension(args: argparse.Namespace) -> Optional[int]:
    resolution, m, c = _cocycle_inputs(args)
    report = build_extension(c, resolution, m)
    lines = []
    if report.order is not None:
        lines.append(f"|E| = {report.order}")
    if report.isomorphism_type:
        lines.append(f"E is isomorphic to {report.isomorphism_type}")
    lines.append(f"presentation: {report.presentation}")
    lines += report.messages
    emit_report(args, report, "\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xres", description="Free crossed resolutions of groups and groupoids")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dim", type=int, default=config.MAXDIM)
        p.add_argument("--bound", type=int, default=config.ENUM_BOUND)
        p.add_argument("--out", help="write output to this file")
        p.add_argument("--json", action="store_true", help="print reports as JSON")
        p.set_defaults(fn=fn)
        return p

    p = verb("resolve-standard", cmd_resolve_standard, "standard resolution of a finite group")
    p.add_argument("--group", required=True)
    p = verb("tensor", cmd_tensor, "tensor product of two complexes")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p = verb("cylinder", cmd_cylinder, "cylinder I tensor B")
    p.add_argument("--in", dest="input", required=True)
    p = verb("amalgam", cmd_amalgam, "resolution of A *_C B")
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", required=True)
    p.add_argument("--i", required=True, help="images of C generators in A, e.g. 'c -> a^3'")
    p.add_argument("--j", required=True, help="images of C generators in B")
    p.add_argument("--retract", action="store_true", help="retract to the vertex group at 0")
    p = verb("hnn", cmd_hnn, "resolution of the HNN extension *_k G")
    p.add_argument("--group", required=True)
    p.add_argument("--sub", required=True)
    p.add_argument("--iso", required=True, help="images at the 0 end, e.g. 'a -> a^-1'")
    p.add_argument("--iso1", default="", help="images at the 1 end (default: same names)")
    p = verb("retract", cmd_retract, "retract a two-object complex to one vertex")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--keep", default="0")
    p = verb("check", cmd_check, "crossed complex axioms")
    p.add_argument("--in", dest="input", required=True)
    p = verb("homology", cmd_homology, "homology of the chain complex")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--dims", default="1-3")
    p.add_argument("--group-homology", action="store_true", help="apply Z tensor_G first")
    p = verb("identities", cmd_identities, "module of identities among relations")
    p.add_argument("--in", dest="input", required=True)
    for name, fn in (("cocycle-verify", cmd_cocycle_verify), ("extension", cmd_extension)):
        p = verb(name, fn, "non-abelian 2-cocycle" if name == "cocycle-verify" else "extension from a cocycle")
        p.add_argument("--resolution", required=True)
        p.add_argument("--kernel", required=True)
        p.add_argument("--k1", default="")
        p.add_argument("--k2", default="")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else config.LOG_LEVEL,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        status = args.fn(args)
    except XresError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cli: {exc}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
