"""Command-line front end: ``circleray <command> ...``.

Exit status: 0 success or witness found, 1 proven none (or a check that
fails), 2 malformed input or a solver guard.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Optional

from .chord_graph import (
    ChordDiagram,
    Graph,
    all_diagrams,
    canonical_form,
    hamiltonian_cycle,
    hamiltonian_path,
    intersection_graph,
    is_hamiltonian_path,
)
from .cover_solver import (
    CoverWitness,
    GuardError,
    Polyline,
    extract_hamiltonian_path,
    solve_cover,
    verify_cover,
)
from .curve_simplify import (
    SimplificationInstance,
    build_dcs_instance,
    check_cone_structure,
    directed_hausdorff_leq,
    same_image,
    usable_delta,
)
from .exact_geom import format_rational, parse_rational
from .needle_reduce import CoverInstance, build_cover_instance
from .ray_embed import RayEmbedding, check_theorem1_properties, embed, ray_graph
from .render import render

OK, NONE, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


# -- input helpers -----------------------------------------------------------


def random_diagram(n: int, seed: int) -> ChordDiagram:
    rng = random.Random(seed)
    order = [label for label in range(1, n + 1) for _ in range(2)]
    rng.shuffle(order)
    return ChordDiagram(canonical_form(order))


def diagram_arg(text: str, seed: int) -> ChordDiagram:
    """``"1 2 1 2"`` or ``random:<n>``."""
    if text.startswith("random:"):
        n = int(text.split(":", 1)[1])
        if n < 0:
            raise InputError("random diagram size must be non-negative")
        return random_diagram(n, seed)
    return ChordDiagram.parse(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _load_cover(args) -> CoverInstance:
    if args.instance:
        return CoverInstance.parse(_read(args.instance))
    if args.diagram:
        return build_cover_instance(embed(diagram_arg(args.diagram, args.seed), args.start))
    raise InputError("give --instance FILE or --diagram")


# -- commands ----------------------------------------------------------------


def cmd_embed(args) -> int:
    d = diagram_arg(args.diagram, args.seed)
    _emit(embed(d, args.start).to_text(), args.out)
    return OK


def cmd_reduce_cover(args) -> int:
    if args.embedding:
        e = RayEmbedding.parse(_read(args.embedding))
    elif args.diagram:
        e = embed(diagram_arg(args.diagram, args.seed), args.start)
    else:
        raise InputError("give --embedding FILE or --diagram")
    _emit(build_cover_instance(e).to_text(), args.out)
    return OK


def cmd_reduce_dcs(args) -> int:
    ci = _load_cover(args)
    delta = parse_rational(args.delta) if args.delta else Fraction(0)
    _emit(build_dcs_instance(ci, delta).to_text(), args.out)
    return OK


def cmd_solve_hp(args) -> int:
    if args.graph:
        g = Graph.parse(_read(args.graph))
    elif args.diagram:
        g = intersection_graph(diagram_arg(args.diagram, args.seed))
    else:
        raise InputError("give --graph FILE or --diagram")
    if g.vertex_count < 1:
        raise InputError("graph has no vertices")
    found = hamiltonian_cycle(g) if args.cycle else hamiltonian_path(g)
    if found is None:
        _emit("none\n", args.out)
        return NONE
    _emit(" ".join(map(str, found)) + "\n", args.out)
    return OK


def cmd_solve_cover(args) -> int:
    ci = _load_cover(args)
    if args.k is not None:
        ci = CoverInstance(ci.segments, ci.labels, args.k, ci.meta)
    w = solve_cover(ci, pruned=False if args.unpruned else None, threads=args.threads)
    if w is None:
        _emit("none\n", args.out)
        return NONE
    _emit(w.to_text(), args.out)
    return OK


def cmd_verify_cover(args) -> int:
    ci = CoverInstance.parse(_read(args.instance))
    w = CoverWitness.parse(_read(args.witness))
    ok = verify_cover(ci, w.polyline)
    print("valid" if ok else "invalid")
    return OK if ok else NONE


def _polyline_arg(path: str) -> Polyline:
    text = _read(path)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if lines and lines[0].lstrip().startswith("k="):
        return SimplificationInstance.parse(text).input
    if lines and lines[0].lstrip().startswith("vertex"):
        return CoverWitness.parse(text).polyline
    return Polyline.parse(text)


def cmd_hausdorff(args) -> int:
    p, q = _polyline_arg(args.p), _polyline_arg(args.q)
    delta = parse_rational(args.delta) if args.delta else Fraction(0)
    ok = directed_hausdorff_leq(p, q, delta)
    print("true" if ok else "false")
    return OK if ok else NONE


def cmd_delta_bound(args) -> int:
    if args.n < 1:
        raise InputError("--n must be at least 1")
    # unreduced on purpose: the shape 3/(4 n!) stays readable
    print(f"3/{4 * factorial(args.n)}")
    print(f"usable {format_rational(Fraction(3, 8 * factorial(args.n)))}")
    return OK


def _cone_line(name: str, ci: CoverInstance, delta: Fraction) -> tuple[bool, str]:
    r = check_cone_structure(ci, delta)
    margin = r.binding_margin
    line = (
        f"{name}: {'ok' if r.ok else 'VIOLATED'} delta={format_rational(delta)} "
        f"needle_violations={len(r.violations)} leading_violations={len(r.leading_violations)}"
    )
    if margin is not None:
        line += f" margin={format_rational(margin)}"
    return r.ok, line


def cmd_check_cones(args) -> int:
    lines = []
    all_ok = True
    if args.instance or args.diagram:
        ci = _load_cover(args)
        delta = parse_rational(args.delta) if args.delta else usable_delta(ci)
        ok, line = _cone_line(args.instance or args.diagram, ci, delta)
        all_ok, lines = ok, [line]
    else:
        for n in range(1, args.max_n + 1):
            for d in all_diagrams(n):
                ci = build_cover_instance(embed(d))
                delta = parse_rational(args.delta) if args.delta else usable_delta(ci)
                ok, line = _cone_line(str(d), ci, delta)
                all_ok &= ok
                lines.append(line)
    _emit("\n".join(lines) + "\n", args.out)
    return OK if all_ok else NONE


def cmd_render(args) -> int:
    witness = CoverWitness.parse(_read(args.witness)) if args.witness else None
    if args.instance:
        text = _read(args.instance)
        first = next((ln for ln in text.splitlines() if ln.strip()), "")
        if " delta=" in first:
            obj = SimplificationInstance.parse(text)
        else:
            obj = CoverInstance.parse(text)
    elif args.embedding:
        obj = RayEmbedding.parse(_read(args.embedding))
    elif args.diagram:
        obj = embed(diagram_arg(args.diagram, args.seed), args.start)
    elif witness is not None:
        obj, witness = witness.polyline, None
    else:
        raise InputError("nothing to render")
    _emit(render(obj, witness), args.out)
    return OK


# -- pipeline ----------------------------------------------------------------


@dataclass
class Stage:
    name: str
    input_sha256: str
    output_sha256: str
    uses: dict = field(default_factory=dict)  # extra stage outputs consumed


@dataclass
class PipelineRun:
    diagram: str
    start: int
    embedding: str = ""
    cover_instance: str = ""
    dcs_instance: str = ""
    witness: Optional[str] = None
    verdicts: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    stages: list = field(default_factory=list)
    verdict: str = ""

    def record(self, name: str, consumed: str, produced: str, **uses: str) -> None:
        self.stages.append(
            Stage(name, _sha(consumed), _sha(produced), {k: _sha(v) for k, v in uses.items()})
        )

    def chain_ok(self) -> bool:
        outputs = {}
        for prev, cur in zip([None] + self.stages, self.stages):
            if prev is not None and cur.input_sha256 != prev.output_sha256:
                return False
            if any(outputs.get(k) != v for k, v in cur.uses.items()):
                return False
            outputs[cur.name] = cur.output_sha256
        return True

    def to_json(self) -> str:
        doc = {
            "diagram": self.diagram,
            "start": self.start,
            "verdict": self.verdict,
            "verdicts": self.verdicts,
            "reports": self.reports,
            "artifacts": {
                "embedding": self.embedding,
                "cover_instance": self.cover_instance,
                "dcs_instance": self.dcs_instance,
                "witness": self.witness,
            },
            "stages": [
                {
                    "name": s.name,
                    "input_sha256": s.input_sha256,
                    "output_sha256": s.output_sha256,
                    "uses": s.uses,
                }
                for s in self.stages
            ],
            "chain_ok": self.chain_ok(),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run_pipeline(
    d: ChordDiagram, start: int = 1, threads: int = 1, max_n: int = 4
) -> PipelineRun:
    diagram_text = str(d) + "\n"
    run = PipelineRun(str(d), start)
    run.record("diagram", diagram_text, diagram_text)

    e = embed(d, start)
    run.embedding = e.to_text()
    run.record("embed", diagram_text, run.embedding)
    t1 = check_theorem1_properties(e)
    graph_ok = ray_graph(e) == intersection_graph(d)
    run.reports["embedding"] = {
        "graph_matches": graph_ok,
        "grounded": t1.grounded,
        "upper_right": t1.upper_right,
        "max_bits": t1.max_bits,
        "bit_bound_ok": t1.bit_bound_ok,
    }

    ci = build_cover_instance(e)
    run.cover_instance = ci.to_text()
    run.record("reduce-cover", run.embedding, run.cover_instance)

    si = build_dcs_instance(ci, 0)
    run.dcs_instance = si.to_text()
    run.record("reduce-dcs", run.cover_instance, run.dcs_instance)
    image_ok = same_image(si.input, ci.segments)

    w = solve_cover(ci, threads=threads)
    run.witness = None if w is None else w.to_text()
    solved = run.witness or "none\n"
    run.record("solve", run.dcs_instance, solved, **{"reduce-cover": run.cover_instance})

    checks = {"image_matches": image_ok}
    if w is not None:
        checks["links"] = len(w.polyline)
        checks["cover_valid"] = verify_cover(ci, w.polyline)
        checks["hausdorff_zero"] = directed_hausdorff_leq(si.input, w.polyline, 0)
        path = extract_hamiltonian_path(w, ci)
        checks["extracted_path"] = path
        checks["extracted_path_valid"] = is_hamiltonian_path(intersection_graph(d), path)
    verified = json.dumps(checks, sort_keys=True) + "\n"
    run.record("verify", solved, verified, **{"reduce-cover": run.cover_instance})

    hp = hamiltonian_path(intersection_graph(d))
    run.verdicts = {"hamiltonian_path": hp, "cover_witness": w is not None, **checks}
    if d.n <= max_n:
        cones = check_cone_structure(ci, usable_delta(ci))
        run.reports["cones"] = {
            "delta": format_rational(cones.delta),
            "ok": cones.ok,
            "needle_violations": len(cones.violations),
            "leading_violations": len(cones.leading_violations),
        }

    stage_ok = graph_ok and image_ok
    if w is not None:
        stage_ok = stage_ok and all(
            checks[k] for k in ("cover_valid", "hausdorff_zero", "extracted_path_valid")
        )
    if not stage_ok or (hp is None) != (w is None):
        run.verdict = "inconsistent"
    else:
        run.verdict = "HP exists" if hp is not None else "no HP"
    run.record("decide", verified, run.verdict + "\n", diagram=diagram_text)
    return run


def cmd_pipeline(args) -> int:
    d = diagram_arg(args.diagram, args.seed)
    if d.n < 1:
        raise InputError("pipeline needs at least one chord")
    run = run_pipeline(d, args.start, args.threads, args.max_n)
    _emit(run.to_json(), args.out)
    if run.verdict == "inconsistent":
        print("pipeline stages disagree", file=sys.stderr)
        return INPUT_ERROR
    return OK if run.verdict == "HP exists" else NONE


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circleray",
        description="Circle graph ray embeddings and the cover / simplification reductions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, diagram=True):
        if diagram:
            p.add_argument("--diagram", help='chord diagram like "1 2 1 2", or random:<n>')
            p.add_argument("--start", type=int, default=1, help="endpoint where the circle is cut")
        p.add_argument("--seed", type=int, default=0, help="seed for random:<n> diagrams")
        p.add_argument("--out", help="output file (default: stdout)")
        return p

    p = common(sub.add_parser("embed", help="chord diagram -> rays on y = x!"))
    p.set_defaults(func=cmd_embed)

    p = common(sub.add_parser("reduce-cover", help="rays -> segment cover instance"))
    p.add_argument("--embedding", help="embedding file")
    p.set_defaults(func=cmd_reduce_cover)

    p = common(sub.add_parser("reduce-dcs", help="cover instance -> simplification instance"))
    p.add_argument("--instance", help="cover instance file")
    p.add_argument("--delta", help="tolerance (rational), default 0")
    p.set_defaults(func=cmd_reduce_dcs)

    p = common(sub.add_parser("solve-hp", help="Hamiltonian path (or cycle) of a graph"))
    p.add_argument("--graph", help="graph file")
    p.add_argument("--cycle", action="store_true", help="look for a Hamiltonian cycle")
    p.set_defaults(func=cmd_solve_hp)

    p = common(sub.add_parser("solve-cover", help="exact segment cover solver"))
    p.add_argument("--instance", help="cover instance file")
    p.add_argument("--k", type=int, help="override the link budget")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--unpruned", action="store_true", help="search all segment orders")
    p.set_defaults(func=cmd_solve_cover)

    p = common(sub.add_parser("verify-cover", help="check a witness against an instance"), False)
    p.add_argument("--instance", required=True)
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_verify_cover)

    p = common(sub.add_parser("hausdorff", help="is H(P -> Q) <= delta?"), False)
    p.add_argument("--p", required=True, help="polyline P file")
    p.add_argument("--q", required=True, help="polyline Q file")
    p.add_argument("--delta", help="tolerance (rational), default 0")
    p.set_defaults(func=cmd_hausdorff)

    p = sub.add_parser("delta-bound", help="exclusive tolerance bound 3/(4 n!)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_delta_bound)

    p = common(sub.add_parser("check-cones", help="enlarged cone structure check"))
    p.add_argument("--instance", help="cover instance file")
    p.add_argument("--delta", help="tolerance (default: 3/(8 n!))")
    p.add_argument("--max-n", type=int, default=4, help="survey all diagrams up to this size")
    p.set_defaults(func=cmd_check_cones)

    p = common(sub.add_parser("render", help="SVG figure of a stage output"))
    p.add_argument("--embedding")
    p.add_argument("--instance", help="cover or simplification instance file")
    p.add_argument("--witness", help="cover witness to overlay")
    p.set_defaults(func=cmd_render)

    p = common(sub.add_parser("pipeline", help="diagram -> embed -> reduce -> solve -> verify"))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-n", type=int, default=4, help="largest n for the cone report")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "diagram", "") is None and args.command in ("embed", "pipeline"):
        print("error: --diagram is required", file=sys.stderr)
        return INPUT_ERROR
    try:
        return args.func(args)
    except (InputError, GuardError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
