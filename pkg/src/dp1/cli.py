"""The ``dp1`` command line.

Every command prints one JSON document ``{"schema", "command", "result"}``.
Integers that do not fit in a double, and all rationals, are written as strings.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from fractions import Fraction

import click
import numpy as np

from . import __version__

SCHEMA = "dp1/1"
_SAFE = 2 ** 53


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        x = int(x)
        return str(x) if abs(x) >= _SAFE else x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def emit(command: str, result, out: str | None = None) -> None:
    text = json.dumps({"schema": SCHEMA, "command": command, "result": _jsonable(result)},
                      indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
        click.echo(json.dumps({"schema": SCHEMA, "command": command, "written": out}))
    else:
        click.echo(text)


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_config(path: str):
    from .geometry import PointConfiguration, ProjPoint
    data = _read_json(path)
    pts = data["points"] if isinstance(data, dict) else data
    return PointConfiguration([ProjPoint(*[Fraction(str(c)) for c in p]) for p in pts])


def _parse_point(text: str):
    from .geometry import ProjPoint
    return ProjPoint.parse(text)


def _members(data) -> tuple[int, ...]:
    """Class indices from a JSON list of labels ("L:1,2") or integers."""
    from . import e8
    if isinstance(data, dict):
        data = data.get("members") or data.get("labels") or data.get("representative")
    return tuple(sorted(int(s) if isinstance(s, int) or str(s).isdigit() else e8.index_of(str(s))
                        for s in data))


@click.group()
@click.version_option(__version__)
@click.option("--threads", type=int, default=None, envvar="DP1_THREADS",
              help="Worker processes for parallel stages (env DP1_THREADS).")
@click.option("-v", "--verbose", is_flag=True, help="Progress logging on stderr.")
@click.pass_context
def main(ctx, threads, verbose):
    """Exceptional curves on degree-1 del Pezzo surfaces: lattice, cliques, orbits, fibers."""
    ctx.obj = {"threads": threads}
    if threads is not None:
        os.environ["DP1_THREADS"] = str(threads)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s", stream=sys.stderr)
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)


@main.command()
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def classes(fmt):
    """The 240 exceptional classes with their labels."""
    from . import e8
    rows = [{"index": i, "label": lab.key, "name": str(lab), "family": lab.family,
             "vector": list(c.vector())} for i, (c, lab) in enumerate(e8.enumerate_exceptional_classes())]
    if fmt == "text":
        for r in rows:
            click.echo(f"{r['index']:3d}  {r['label']:<10} {r['vector']}")
        return
    emit("classes", {"count": len(rows), "families": e8.family_sizes(), "classes": rows})


@main.command()
@click.option("--size", type=int, required=True)
@click.option("--weights", default="1,2", show_default=True)
@click.option("--anchor", "anchor_file", type=click.Path(exists=True), default=None,
              help="JSON list of anchor classes; default is the pair L:1,2, L:3,4.")
@click.option("--no-anchor", is_flag=True, help="Enumerate cliques of the whole graph.")
@click.option("--count-only", is_flag=True)
@click.option("--out", type=click.Path(), default=None, help="Write cliques (.npy or .json).")
@click.option("--checkpoint", type=click.Path(), default=None)
@click.option("--resume", is_flag=True)
@click.pass_context
def cliques(ctx, size, weights, anchor_file, no_anchor, count_only, out, checkpoint, resume):
    """Count or list cliques of G with the given intersection weights."""
    from . import cliques as cl
    from . import e8
    allowed = tuple(int(w) for w in weights.split(","))
    anchor = () if no_anchor else (_members(_read_json(anchor_file)) if anchor_file
                                   else cl.default_anchor())
    threads = ctx.obj["threads"]
    if count_only:
        n = cl.count_cliques(allowed, size, anchor, threads)
        emit("cliques", {"size": size, "weights": list(allowed), "anchor": e8.describe(anchor),
                         "count": n})
        return
    cached = os.path.join(checkpoint, f"cliques-{size}-{'-'.join(map(str, allowed))}.npy") \
        if checkpoint else None
    if cached and resume and os.path.exists(cached):
        rows = np.load(cached)
    else:
        rows = cl.clique_array(allowed, size, anchor, threads)
        if cached:
            os.makedirs(checkpoint, exist_ok=True)
            np.save(cached, rows)
    res = {"size": size, "weights": list(allowed), "anchor": e8.describe(anchor),
           "count": int(len(rows))}
    if out and out.endswith(".npy"):
        np.save(out, rows)
        res["written"] = out
        emit("cliques", res)
        return
    res["cliques"] = rows.tolist() if len(rows) <= 100000 else None
    if res["cliques"] is None:
        res["note"] = "too many to print; use --out FILE.npy"
    emit("cliques", res, out)


@main.command()
@click.option("--size", type=int, default=8, show_default=True,
              help="Clique size for the full classification.")
@click.option("--maximal", "maximal", is_flag=True,
              help="Classify maximal cliques of size >= 9 instead.")
@click.option("--budget", type=float, default=None, help="Wall-clock seconds.")
@click.option("--checkpoint", type=click.Path(), default=None)
@click.option("--resume", is_flag=True)
@click.option("--plot", "plot_dir", type=click.Path(), default=None,
              help="Directory for the type gallery and stabilizer histogram.")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def orbits(ctx, size, maximal, budget, checkpoint, resume, plot_dir, out):
    """W8-orbit classification of anchored {1,2}-cliques."""
    from . import orbits as ob
    from .cliques import clique_array, default_anchor
    if maximal:
        try:
            recs = ob.classify_maximal_cliques(9, budget)
        except ob.BudgetExhausted as exc:
            emit("orbits", {"status": "budget-exhausted", "stage": str(exc)}, out)
            sys.exit(3)
        res = {"status": "complete", "orbit_count": len(recs),
               "orbits": [r.to_json() for r in recs]}
    else:
        if size == 8:
            cls = ob.classify_size8_orbits(budget, checkpoint, resume, ctx.obj["threads"])
        else:
            rows = clique_array((1, 2), size, default_anchor(), ctx.obj["threads"])
            cls = ob.classify(rows, budget=budget, checkpoint=checkpoint, resume=resume,
                              tag=f"size{size}")
        recs = cls.orbits
        res = cls.to_json()
    if plot_dir and recs:
        from .plotting import orbit_report
        res["figures"] = orbit_report(recs, plot_dir, "maximal" if maximal else f"size{size}")
    emit("orbits", res, out)
    if res["status"] != "complete":
        sys.exit(3)


@main.command()
@click.option("--rep", "rep_file", type=click.Path(exists=True), default=None,
              help="JSON list of class labels or indices.")
@click.option("--all-maximal", is_flag=True, help="All 18 maximal-clique representatives.")
def kernels(rep_file, all_maximal):
    """Gram matrix, integer kernel and torsion-forcing vector of cliques."""
    from . import relations
    if not (rep_file or all_maximal):
        raise click.UsageError("give --rep FILE or --all-maximal")
    out = []
    if rep_file:
        m = _members(_read_json(rep_file))
        rep = relations.gram_report(m).to_json()
        hit = relations.match_table(m)
        rep["table_row"] = hit[0] if hit else None
        out.append(rep)
    if all_maximal:
        from .orbits import classify_maximal_cliques
        recs = classify_maximal_cliques(9)
        assign = relations.table_assignment([r.representative for r in recs])
        for i, r in enumerate(recs):
            rep = relations.gram_report(r.representative).to_json()
            name = assign[i]
            pi = relations.match_lattice_up_to_permutation(
                relations.kernel_lattice(r.representative).basis, relations.TABLE1[name])
            rep |= {"table_row": name, "permutation": list(pi) if pi else None,
                    "stabilizer_order": r.stabilizer_order}
            out.append(rep)
    emit("kernels", {"reports": out})


@main.command()
@click.option("--config", "config_file", type=click.Path(exists=True), required=True)
@click.option("--label", "labels", multiple=True, help="Curve label such as C:1,2 (repeatable).")
@click.option("--point", default=None, help="Also evaluate the curves at x,y,z.")
def curves(config_file, labels, point):
    """General position check and plane models of exceptional curves."""
    from .geometry import CurveSystemError, curve_through, general_position
    cfg = _load_config(config_file)
    gp = general_position(cfg)
    res = {"general_position": gp.to_json(), "curves": []}
    p = _parse_point(point) if point else None
    for lab in labels:
        try:
            c = curve_through(lab, cfg)
        except CurveSystemError as exc:
            res["curves"].append({"label": lab, "error": str(exc)})
            continue
        entry = {"label": lab} | c.to_json()
        if p is not None:
            entry["through_point"] = c(p) == 0
        res["curves"].append(entry)
    emit("curves", res)


@main.command()
@click.option("--config", "config_file", type=click.Path(exists=True), required=True)
@click.option("--point", required=True, help="x,y,z")
@click.option("--label", "labels", multiple=True, help="Curves to test for concurrency.")
@click.option("--bad-primes", is_flag=True, help="Report primes of bad reduction.")
def torsion(config_file, point, labels, bad_primes):
    """Fiber through a point and its torsion verdict."""
    from . import fiber
    cfg = _load_config(config_file)
    q = _parse_point(point)
    res = fiber.torsion_verdict(cfg, q, list(labels) or None).to_json()
    if bad_primes:
        res["bad_primes"] = fiber.bad_primes(cfg, q)
    emit("torsion", res)


@main.command()
@click.option("--params", required=True, help="c,u,v,m as rationals, e.g. -1/3,-1/6,1/2,-1")
@click.option("--verify", is_flag=True, help="Also run the fiber and torsion verdict.")
def generate(params, verify):
    """Eight points with six curves concurrent at (0:0:1)."""
    from . import factory
    vals = [Fraction(s) for s in params.split(",")]
    if len(vals) != 4:
        raise click.UsageError("--params takes four values c,u,v,m")
    try:
        pc = factory.ParamConfig.from_cuvm(*vals)
        gen = factory.generate_configuration(pc)
    except factory.ParameterError as exc:
        emit("generate", {"error": str(exc)})
        sys.exit(2)
    res = gen.to_json()
    if verify:
        from .fiber import verify_configuration
        res["verdict"] = verify_configuration(gen.config, factory.ORIGIN, list(factory.SIX_CURVES))
    emit("generate", res)


@main.command()
@click.option("--height", type=int, default=200, show_default=True)
@click.option("--budget", type=float, default=60.0, show_default=True, help="Seconds.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--exhaustive", is_flag=True, help="Walk parameters in height order, no seed.")
@click.option("--families", default="Quartic", show_default=True,
              help="Comma-separated curve families, e.g. Quartic,Cubic.")
@click.option("--max-candidates", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
def search(height, budget, seed, exhaustive, families, max_candidates, out):
    """Search parameters for a seventh concurrent exceptional curve."""
    from . import factory
    res = factory.search_seventh_curve(height, budget, None if exhaustive else seed,
                                       tuple(f.strip() for f in families.split(",")),
                                       max_candidates)
    emit("search", res, out)


@main.command("verify-example")
@click.argument("fixture")
def verify_example(fixture):
    """Run a bundled example (ex7lines, ex7lines2, ex6lines) or a fixture file."""
    from .examples import load_fixture, verify_example as run
    rep = run(load_fixture(fixture))
    emit("verify-example", rep.to_json())
    sys.exit(0 if rep.ok else 1)


@main.command()
@click.argument("name", type=click.Choice(["counts", "kernels", "orbits", "examples",
                                           "properties"]))
@click.option("--checkpoint", type=click.Path(), default=None)
@click.option("--resume", is_flag=True)
@click.pass_context
def suite(ctx, name, checkpoint, resume):
    """Run a named acceptance suite."""
    from .suites import run_suite
    rep = run_suite(name, checkpoint=checkpoint, resume=resume, threads=ctx.obj["threads"])
    emit("suite", rep.to_json())
    sys.exit(0 if rep.passed else 1)


if __name__ == "__main__":
    main()
