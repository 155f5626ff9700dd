"""Scenario text format, built-in examples, and run helpers.

A scenario is a line-oriented keyword file.  Rationals are written "p/q",
as integers, or as decimals (converted exactly); '#' starts a comment.

    scenario <id>
    space interval (a, b)            # any mix of ( [ and ) ] ends
    space finite <n>                 # followed by points / dist lines
    points <l1> <l2> ... <ln>
    dist <p> <q> <rational>
    branch <piece> -> set {e1, e2}   # piece: interval, or {q1, q2} points
    branch <piece> -> interval [e1, e2]
    map <label> -> {l1, l2}          # finite spaces
    alpha indicator [a, b] | alpha constant <q> | alpha table
    alphaval <p> <q> <rational>      # table entries; unlisted pairs are 0
    graph region [a, b] | graph edges
    edge <p> <q>
    zeta <expr in t, s>
    gfun <expr in s, t>
    cg <rational>
    start x0=<point> [x1=<point>]
    declare alpha-complete true|false
    declare alpha-continuous true|false
    declare route continuity|iv-prime
    tol <q> ; max-iter <n> ; grid-step <q> ; seed <n>

Image and branch expressions are affine in x.  Parsing validates the whole
scenario (branch partition, image containment, alpha table shape), and
emit_scenario renders a canonical text that reparses to an equal value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .admissibility import AlphaFn, Branch, MultiMap
from .certifier import CertificationReport, PairSource, certify_generalized, certify_plain
from .contraction import (ContractionFamily, check_c_class, check_property_cg,
                          check_zeta_condition_a, check_zeta_condition_b,
                          default_grid, standard_sequence_pairs)
from .errors import DomainError, InputError, MvfixError, ParseError
from .expressions import parse_expression, parse_rational, unparse
from .graphspace import GraphSpace, certify_eg, indicator_alpha
from .hyperspace import INF, Piece, PointSet, Space
from .solver import Orbit, analytic_fixed_points, enumerate_fixed_points, iterate

DEFAULT_TOL = Fraction(1, 10**9)
DEFAULT_MAX_ITER = 500
DEFAULT_GRID_STEP = Fraction(1, 8)
DEFAULT_SEED = 0


@dataclass
class Scenario:
    """A fully validated problem instance."""

    name: str
    space: Space
    tmap: MultiMap
    alpha: AlphaFn | None
    graph: GraphSpace | None
    family: ContractionFamily
    x0: object | None = None
    x1: object | None = None
    tol: Fraction = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    grid_step: Fraction = DEFAULT_GRID_STEP
    seed: int = DEFAULT_SEED
    alpha_complete: bool = False
    alpha_continuous: bool = False
    route: str = "continuity"

    def gating_alpha(self) -> AlphaFn:
        if self.alpha is not None:
            return self.alpha
        return indicator_alpha(self.graph)


# ---------------------------------------------------------------------------
# parsing

def _strip_comment(line: str) -> str:
    hash_pos = line.find("#")
    return line if hash_pos < 0 else line[:hash_pos]


def _parse_endpoint(text: str, line: int):
    text = text.strip()
    if text == "inf":
        return INF
    if text == "-inf":
        return -INF
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise ParseError(exc.message, line=line) from None


def _parse_piece(text: str, line: int) -> Piece:
    text = text.strip()
    if len(text) < 3 or text[0] not in "([" or text[-1] not in ")]":
        raise ParseError(f"expected an interval like (a, b) or [a, b], found {text!r}",
                         line=line)
    inner = text[1:-1].split(",")
    if len(inner) != 2:
        raise ParseError(f"expected two endpoints in {text!r}", line=line)
    lo = _parse_endpoint(inner[0], line)
    hi = _parse_endpoint(inner[1], line)
    try:
        return Piece(lo, hi, lo_closed=text[0] == "[", hi_closed=text[-1] == "]")
    except MvfixError as exc:
        raise ParseError(str(exc), line=line) from None


def _split_top_level(text: str, line: int) -> list[str]:
    """Split on commas outside parentheses."""
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced parentheses", line=line)
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts]


def _parse_image(text: str, line: int) -> tuple[str, list]:
    text = text.strip()
    if text.startswith("set"):
        body = text[3:].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError("expected set {e1, e2, ...}", line=line)
        exprs = _split_top_level(body[1:-1], line)
        if exprs == [""]:
            raise ParseError("empty image set", line=line)
        return "set", exprs
    if text.startswith("interval"):
        body = text[8:].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ParseError("expected interval [e1, e2]", line=line)
        exprs = _split_top_level(body[1:-1], line)
        if len(exprs) != 2:
            raise ParseError("an interval image needs exactly two expressions", line=line)
        return "interval", exprs
    raise ParseError(f"expected 'set' or 'interval', found {text.split()[0] if text else 'nothing'!r}",
                     line=line)


def _parse_branch_domain(text: str, line: int) -> tuple[Piece, ...]:
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        values = [_parse_endpoint(v, line) for v in _split_top_level(text[1:-1], line)]
        if not values:
            raise ParseError("empty branch point list", line=line)
        return tuple(Piece(v, v) for v in values)
    return (_parse_piece(text, line),)


def _parse_expr(text: str, variables, line: int):
    try:
        return parse_expression(text, variables=variables)
    except ParseError as exc:
        raise ParseError(exc.message, line=line, column=exc.column) from None


def _bool(text: str, line: int) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise ParseError(f"expected true or false, found {text!r}", line=line)


_KEYWORDS = ("scenario", "space", "points", "dist", "branch", "map", "alpha",
             "alphaval", "graph", "edge", "zeta", "gfun", "cg", "start",
             "declare", "tol", "max-iter", "grid-step", "seed")


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario text; errors carry line positions."""
    entries: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(raw).strip()
        if not stripped:
            continue
        keyword, _, rest = stripped.partition(" ")
        if keyword not in _KEYWORDS:
            raise ParseError(f"unknown keyword {keyword!r}; expected one of: "
                             + ", ".join(_KEYWORDS), line=lineno)
        entries.append((lineno, keyword, rest.strip()))

    def collect(keyword):
        return [(ln, rest) for ln, kw, rest in entries if kw == keyword]

    def single(keyword, required=True):
        found = collect(keyword)
        if len(found) > 1:
            raise ParseError(f"duplicate {keyword!r} line", line=found[1][0])
        if not found:
            if required:
                last = entries[-1][0] if entries else 1
                raise ParseError(f"missing {keyword!r} line", line=last)
            return None
        return found[0]

    name_entry = single("scenario", required=False)
    name = name_entry[1] if name_entry else "adhoc"
    if name_entry and not name:
        raise ParseError("scenario line needs an identifier", line=name_entry[0])

    # --- space
    space_line, space_rest = single("space")
    tokens = space_rest.split(None, 1)
    if not tokens:
        raise ParseError("expected 'interval' or 'finite'", line=space_line)
    if tokens[0] == "interval":
        if len(tokens) < 2:
            raise ParseError("expected interval bounds", line=space_line)
        bounds = _parse_piece(tokens[1], space_line)
        try:
            space = Space.interval(bounds.lo, bounds.hi, bounds.lo_closed, bounds.hi_closed)
        except MvfixError as exc:
            raise ParseError(str(exc), line=space_line) from None
    elif tokens[0] == "finite":
        if len(tokens) < 2 or not tokens[1].isdigit():
            raise ParseError("expected a point count after 'finite'", line=space_line)
        count = int(tokens[1])
        points_entry = single("points")
        labels = points_entry[1].split()
        if len(labels) != count:
            raise ParseError(f"expected {count} labels, found {len(labels)}",
                             line=points_entry[0])
        distances = {}
        for ln, rest in collect("dist"):
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError("expected: dist <p> <q> <value>", line=ln)
            if parts[0] not in labels or parts[1] not in labels:
                raise ParseError(f"unknown point in dist line", line=ln)
            try:
                distances[(parts[0], parts[1])] = parse_rational(parts[2])
            except ParseError as exc:
                raise ParseError(exc.message, line=ln) from None
        for label in labels:
            distances.setdefault((label, label), Fraction(0))
        try:
            space = Space.finite(distances)
        except MvfixError as exc:
            raise ParseError(str(exc), line=space_line) from None
    else:
        raise ParseError(f"expected 'interval' or 'finite', found {tokens[0]!r}",
                         line=space_line)

    # --- map
    branch_lines = collect("branch")
    map_lines = collect("map")
    if space.is_finite:
        if branch_lines:
            raise ParseError("finite spaces use 'map' lines, not 'branch'",
                             line=branch_lines[0][0])
        if not map_lines:
            raise ParseError("missing map definition ('map' lines)", line=space_line)
        mapping = {}
        for ln, rest in map_lines:
            head, arrow, body = rest.partition("->")
            if not arrow:
                raise ParseError("expected: map <label> -> {l1, l2}", line=ln)
            label = head.strip()
            body = body.strip()
            if not (body.startswith("{") and body.endswith("}")):
                raise ParseError("expected an image like {l1, l2}", line=ln)
            targets = [t.strip() for t in body[1:-1].split(",")]
            try:
                mapping[label] = PointSet.of_points(space, targets)
            except MvfixError as exc:
                raise ParseError(str(exc), line=ln) from None
        try:
            tmap = MultiMap.from_table(space, mapping)
        except MvfixError as exc:
            raise ParseError(str(exc), line=map_lines[0][0]) from None
    else:
        if map_lines:
            raise ParseError("interval spaces use 'branch' lines, not 'map'",
                             line=map_lines[0][0])
        if not branch_lines:
            raise ParseError("missing map definition ('branch' lines)", line=space_line)
        branches = []
        for ln, rest in branch_lines:
            head, arrow, body = rest.partition("->")
            if not arrow:
                raise ParseError("expected: branch <piece> -> set {...} | interval [...]",
                                 line=ln)
            pieces = _parse_branch_domain(head, ln)
            image_kind, expr_texts = _parse_image(body, ln)
            exprs = [_parse_expr(e, ("x",), ln) for e in expr_texts]
            try:
                branches.append(Branch.build(pieces, image_kind, exprs))
            except MvfixError as exc:
                raise ParseError(str(exc), line=ln) from None
        try:
            tmap = MultiMap.piecewise(space, branches)
        except MvfixError as exc:
            raise ParseError(str(exc), line=branch_lines[0][0]) from None

    # --- alpha or graph
    alpha_entry = single("alpha", required=False)
    graph_entry = single("graph", required=False)
    if alpha_entry and graph_entry:
        raise ParseError("a scenario has either an alpha or a graph, not both",
                         line=graph_entry[0])
    if not alpha_entry and not graph_entry:
        raise ParseError("missing 'alpha' or 'graph' line",
                         line=entries[-1][0] if entries else 1)
    alpha = graph = None
    if alpha_entry:
        ln, rest = alpha_entry
        tokens = rest.split(None, 1)
        kind = tokens[0] if tokens else ""
        if kind == "indicator":
            if len(tokens) < 2:
                raise ParseError("expected a region interval", line=ln)
            piece = _parse_piece(tokens[1], ln)
            if not (piece.lo_closed and piece.hi_closed):
                raise ParseError("indicator regions are closed intervals [a, b]", line=ln)
            try:
                alpha = AlphaFn.indicator(PointSet.of_intervals(space, [(piece.lo, piece.hi)]))
            except MvfixError as exc:
                raise ParseError(str(exc), line=ln) from None
        elif kind == "constant":
            if len(tokens) < 2:
                raise ParseError("expected a constant value", line=ln)
            try:
                alpha = AlphaFn.constant(parse_rational(tokens[1]))
            except MvfixError as exc:
                raise ParseError(str(exc), line=ln) from None
        elif kind == "table":
            entries_map = {}
            for vln, vrest in collect("alphaval"):
                parts = vrest.split()
                if len(parts) != 3:
                    raise ParseError("expected: alphaval <p> <q> <value>", line=vln)
                try:
                    entries_map[(parts[0], parts[1])] = parse_rational(parts[2])
                except ParseError as exc:
                    raise ParseError(exc.message, line=vln) from None
            try:
                alpha = AlphaFn.from_table(space, entries_map)
            except MvfixError as exc:
                raise ParseError(str(exc), line=ln) from None
        else:
            raise ParseError(f"expected indicator, constant, or table; found {kind!r}",
                             line=ln)
    else:
        ln, rest = graph_entry
        tokens = rest.split(None, 1)
        kind = tokens[0] if tokens else ""
        if kind == "region":
            if len(tokens) < 2:
                raise ParseError("expected a region interval", line=ln)
            piece = _parse_piece(tokens[1], ln)
            if not (piece.lo_closed and piece.hi_closed):
                raise ParseError("edge regions are closed intervals [a, b]", line=ln)
            try:
                graph = GraphSpace.from_region(
                    space, PointSet.of_intervals(space, [(piece.lo, piece.hi)]))
            except MvfixError as exc:
                raise ParseError(str(exc), line=ln) from None
        elif kind == "edges":
            pairs = []
            for eln, erest in collect("edge"):
                parts = erest.split()
                if len(parts) != 2:
                    raise ParseError("expected: edge <p> <q>", line=eln)
                if space.is_finite:
                    pairs.append((parts[0], parts[1]))
                else:
                    try:
                        pairs.append((parse_rational(parts[0]), parse_rational(parts[1])))
                    except ParseError as exc:
                        raise ParseError(exc.message, line=eln) from None
            try:
                graph = GraphSpace.from_edges(space, pairs)
            except MvfixError as exc:
                raise ParseError(str(exc), line=ln) from None
        else:
            raise ParseError(f"expected region or edges, found {kind!r}", line=ln)

    # --- family
    zeta_line, zeta_text = single("zeta")
    gfun_line, gfun_text = single("gfun")
    cg_line, cg_text = single("cg")
    zeta = _parse_expr(zeta_text, ("t", "s"), zeta_line)
    gfun = _parse_expr(gfun_text, ("t", "s"), gfun_line)
    try:
        family = ContractionFamily.from_exprs(zeta, gfun, parse_rational(cg_text))
    except MvfixError as exc:
        raise ParseError(str(exc), line=cg_line) from None

    # --- start and controls
    x0 = x1 = None
    start_entry = single("start", required=False)
    if start_entry:
        ln, rest = start_entry
        for token in rest.split():
            key, eq, value = token.partition("=")
            if not eq or key not in ("x0", "x1"):
                raise ParseError("expected: start x0=<point> [x1=<point>]", line=ln)
            try:
                point = value if space.is_finite else parse_rational(value)
            except ParseError as exc:
                raise ParseError(exc.message, line=ln) from None
            if not space.contains(point):
                raise ParseError(f"start point {value} is not in the space", line=ln)
            if key == "x0":
                x0 = point
            else:
                x1 = point
        if x0 is None:
            raise ParseError("start line needs x0", line=ln)

    scenario = Scenario(name=name, space=space, tmap=tmap, alpha=alpha, graph=graph,
                        family=family, x0=x0, x1=x1)

    for key, attr, conv in (("tol", "tol", parse_rational),
                            ("grid-step", "grid_step", parse_rational)):
        entry = single(key, required=False)
        if entry:
            try:
                value = conv(entry[1])
            except ParseError as exc:
                raise ParseError(exc.message, line=entry[0]) from None
            if value <= 0:
                raise ParseError(f"{key} must be positive", line=entry[0])
            setattr(scenario, attr, value)
    for key, attr in (("max-iter", "max_iter"), ("seed", "seed")):
        entry = single(key, required=False)
        if entry:
            if not entry[1].isdigit():
                raise ParseError(f"{key} takes a nonnegative integer", line=entry[0])
            setattr(scenario, attr, int(entry[1]))
    if scenario.max_iter < 1:
        raise ParseError("max-iter must be at least 1")

    for ln, rest in collect("declare"):
        parts = rest.split()
        if len(parts) != 2:
            raise ParseError("expected: declare <attribute> <value>", line=ln)
        key, value = parts
        if key == "alpha-complete":
            scenario.alpha_complete = _bool(value, ln)
        elif key == "alpha-continuous":
            scenario.alpha_continuous = _bool(value, ln)
        elif key == "route":
            if value not in ("continuity", "iv-prime"):
                raise ParseError("route is continuity or iv-prime", line=ln)
            scenario.route = value
        else:
            raise ParseError(f"unknown declared attribute {key!r}", line=ln)
    return scenario


# ---------------------------------------------------------------------------
# emission

def _emit_piece(piece: Piece) -> str:
    left = "[" if piece.lo_closed else "("
    right = "]" if piece.hi_closed else ")"
    lo = "-inf" if isinstance(piece.lo, float) else str(piece.lo)
    hi = "inf" if isinstance(piece.hi, float) else str(piece.hi)
    return f"{left}{lo}, {hi}{right}"


def _emit_branch(branch: Branch) -> str:
    if len(branch.pieces) > 1 or branch.pieces[0].degenerate:
        if not all(p.degenerate for p in branch.pieces):
            raise InputError("cannot emit a branch mixing interval and point domains")
        domain = "{" + ", ".join(str(p.lo) for p in branch.pieces) + "}"
    else:
        domain = _emit_piece(branch.pieces[0])
    if branch.image_kind == "set":
        image = "set {" + ", ".join(unparse(e) for e in branch.exprs) + "}"
    else:
        image = f"interval [{unparse(branch.exprs[0])}, {unparse(branch.exprs[1])}]"
    return f"branch {domain} -> {image}"


def emit_scenario(sc: Scenario) -> str:
    """Render canonical text; parse_scenario(emit_scenario(sc)) equals sc."""
    lines = [f"scenario {sc.name}"]
    space = sc.space
    if space.is_finite:
        lines.append(f"space finite {len(space.labels)}")
        lines.append("points " + " ".join(space.labels))
        for i, a in enumerate(space.labels):
            for j in range(i + 1, len(space.labels)):
                lines.append(f"dist {a} {space.labels[j]} {space.table[i][j]}")
        for label, image in zip(space.labels, sc.tmap.images):
            lines.append(f"map {label} -> {{" + ", ".join(image.members) + "}")
    else:
        lines.append(f"space interval {_emit_piece(space.bounds)}")
        for branch in sc.tmap.branches:
            lines.append(_emit_branch(branch))
    if sc.alpha is not None:
        alpha = sc.alpha
        if alpha.kind == "indicator":
            lo, hi = alpha.region.intervals[0]
            lines.append(f"alpha indicator [{lo}, {hi}]")
        elif alpha.kind == "constant":
            lines.append(f"alpha constant {alpha.value}")
        else:
            lines.append("alpha table")
            for i, a in enumerate(alpha.space.labels):
                for j, b in enumerate(alpha.space.labels):
                    if alpha.table[i][j] != 0:
                        lines.append(f"alphaval {a} {b} {alpha.table[i][j]}")
    else:
        graph = sc.graph
        if graph.kind == "region":
            lo, hi = graph.region.intervals[0]
            lines.append(f"graph region [{lo}, {hi}]")
        else:
            lines.append("graph edges")
            for x, y in sorted(graph.edges):
                lines.append(f"edge {x} {y}")
    lines.append(f"zeta {unparse(sc.family.zeta)}")
    lines.append(f"gfun {unparse(sc.family.gfun)}")
    lines.append(f"cg {sc.family.cg}")
    if sc.x0 is not None:
        start = f"start x0={sc.x0}"
        if sc.x1 is not None:
            start += f" x1={sc.x1}"
        lines.append(start)
    lines.append(f"tol {sc.tol}")
    lines.append(f"max-iter {sc.max_iter}")
    lines.append(f"grid-step {sc.grid_step}")
    lines.append(f"seed {sc.seed}")
    lines.append(f"declare alpha-complete {'true' if sc.alpha_complete else 'false'}")
    lines.append(f"declare alpha-continuous {'true' if sc.alpha_continuous else 'false'}")
    lines.append(f"declare route {sc.route}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# built-in examples

EXAMPLE_1_TEXT = """\
scenario example-1
space interval (-10, 10)
branch (-10, 0) -> set {-2}
branch [0, 2] -> interval [0, 5*x/6]
branch (2, 5] -> interval [0, 2*x - 5/3]
branch (5, 10) -> set {9}
alpha indicator [0, 2]
zeta 5/6*s - t
gfun s - t
cg 0
start x0=2 x1=5/3
declare alpha-complete true
declare alpha-continuous true
declare route continuity
"""

EXAMPLE_2_TEXT = """\
scenario example-2
space interval (0, 1]
branch (0, 1/2) -> set {1/10}
branch [1/2, 3/4] -> set {3/5, 3/4}
branch (3/4, 1] -> set {4/5}
alpha indicator [1/2, 1]
zeta 5/6*s - t
gfun s - t
cg 0
start x0=1/2 x1=3/4
declare alpha-complete true
declare alpha-continuous false
declare route iv-prime
"""

_BUILTINS = {1: EXAMPLE_1_TEXT, 2: EXAMPLE_2_TEXT}


def builtin_example(example_id: int) -> Scenario:
    """The two bundled example scenarios, parsed fresh."""
    if example_id not in _BUILTINS:
        raise InputError("example id must be 1 or 2")
    return parse_scenario(_BUILTINS[example_id])


# ---------------------------------------------------------------------------
# run helpers

def run_certify(sc: Scenario, mode: str = "plain", grid_step=None,
                boundary_offset=None) -> CertificationReport:
    if mode not in ("plain", "generalized"):
        raise InputError(f"unknown certification mode {mode!r}")
    step = grid_step if grid_step is not None else sc.grid_step
    kwargs = {}
    if boundary_offset is not None:
        kwargs["boundary_offset"] = boundary_offset
    if sc.space.is_finite:
        pairs = PairSource.exhaustive(sc.space)
    else:
        pairs = PairSource.grid(sc.space, sc.tmap, step, alpha=sc.gating_alpha(), **kwargs)
    if sc.graph is not None:
        return certify_eg(sc.graph, sc.tmap, sc.family, pairs, mode=mode, scenario=sc.name)
    certify = certify_plain if mode == "plain" else certify_generalized
    return certify(sc.space, sc.tmap, sc.alpha, sc.family, pairs, scenario=sc.name)


def run_solve(sc: Scenario, tol=None, max_iter=None, x1=None, policy="nearest") -> Orbit:
    if sc.x0 is None:
        raise InputError(f"scenario {sc.name!r} has no start point")
    start_x1 = x1 if x1 is not None else sc.x1
    return iterate(sc.space, sc.tmap, sc.gating_alpha(), sc.x0, x1=start_x1,
                   tol=tol if tol is not None else sc.tol,
                   max_iter=max_iter if max_iter is not None else sc.max_iter,
                   route=sc.route, policy=policy)


def run_enumerate(sc: Scenario, analytic: bool = True, grid_step=None):
    if sc.space.is_finite:
        return enumerate_fixed_points(sc.space, sc.tmap)
    if analytic and grid_step is None:
        return analytic_fixed_points(sc.space, sc.tmap)
    step = grid_step if grid_step is not None else sc.grid_step
    return enumerate_fixed_points(sc.space, sc.tmap, grid_step=step)


def run_check_classes(sc: Scenario):
    grid = default_grid(seed=sc.seed)
    return [
        check_c_class(sc.family, grid),
        check_property_cg(sc.family, grid),
        check_zeta_condition_a(sc.family, grid),
        check_zeta_condition_b(sc.family, standard_sequence_pairs()),
    ]


def run_paper_example(example_id: int, command: str, **kwargs):
    """Dispatch a command against a built-in example scenario."""
    sc = builtin_example(example_id)
    if command == "certify":
        return run_certify(sc, **kwargs)
    if command == "solve":
        return run_solve(sc, **kwargs)
    if command == "enumerate":
        return run_enumerate(sc, **kwargs)
    if command == "check-classes":
        return run_check_classes(sc)
    raise InputError(f"unknown command {command!r}")
