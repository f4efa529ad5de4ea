"""``ternhad`` command line.

CODE arguments accept a code file (``format_code`` layout) or a name:
``NV(p,a)``, ``QR(p)``, ``P(q)``, ``C1``..``C3``.  MATRIX arguments accept a
sign-text file, an octal file (``--format octal`` or auto-detected), or a
name: ``H_NV(p,a)``, ``H_SDS(p,a)``, ``Paley_I(q)``, ``Paley_II(q)``,
``H_NV2``.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click
import numpy as np

from . import constructions as cons
from . import equivalence as eq
from . import hadamard as hd
from . import recipes as rc
from . import search as se
from .gf3 import (format_code, format_signs, is_self_dual, is_self_orthogonal,
                  parse_code, parse_matrix_text)


# ------------------------------------------------------------ argument resolution

def resolve_code(arg: str):
    s = arg.replace(" ", "")
    if m := re.fullmatch(r"NV\((\d+),([+-]?1)\)", s):
        return arg, cons.build_nv_code(int(m.group(1)), int(m.group(2)))
    if m := re.fullmatch(r"QR\((\d+)\)", s):
        return arg, cons.build_extended_qr(int(m.group(1)))
    if m := re.fullmatch(r"P\((\d+)\)", s):
        return arg, cons.build_pless_symmetry(int(m.group(1)))
    if m := re.fullmatch(r"C_?(\d)", s):
        return arg, cons.build_length60_negacirculant(int(m.group(1)))
    path = Path(arg)
    if not path.exists():
        raise click.BadParameter(f"{arg!r} is neither a file nor a known code name")
    name, code = parse_code(path.read_text())
    return name or path.stem, code


def _looks_octal(text: str) -> bool:
    body = "".join(l for l in text.splitlines() if not l.lstrip().startswith("#"))
    body = re.sub(r"\s+", "", body)
    return bool(body) and not re.search(r"[^0-7]", body) and re.search(r"[3-7]", body) is not None


def resolve_matrix(arg: str, fmt: str = "auto") -> hd.HadamardMatrix:
    s = arg.replace(" ", "")
    if m := re.fullmatch(r"H_NV\((\d+),([+-]?1)\)", s):
        return hd.build_h_nv(int(m.group(1)), int(m.group(2)))
    if m := re.fullmatch(r"H_SDS\((\d+),([+-]?1)\)", s):
        p = int(m.group(1))
        d1, d2 = hd.sds_for_theorem(p, int(m.group(2)))
        return hd.build_h_sds(d1, d2, v=p)
    if m := re.fullmatch(r"Paley_(I|II)\((\d+)\)", s):
        return hd.build_paley(int(m.group(2)), m.group(1))
    if s == "H_NV2":
        return hd.figure2_hadamard()
    path = Path(arg)
    if not path.exists():
        raise click.BadParameter(f"{arg!r} is neither a file nor a known matrix name")
    text = path.read_text()
    if fmt == "octal" or (fmt == "auto" and _looks_octal(text)):
        body = "\n".join(l for l in text.splitlines() if not l.lstrip().startswith("#"))
        return hd.HadamardMatrix(hd.from_binary(hd.octal_decode(body)))
    _, a = parse_matrix_text(text)
    return hd.HadamardMatrix.from_array(a)


def emit(ctx: click.Context, data: dict, text: str | None = None) -> None:
    if ctx.obj["json"] or text is None:
        click.echo(json.dumps(data, indent=2, sort_keys=True, default=_default))
    else:
        click.echo(text)


def _default(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x).__name__)


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


# ------------------------------------------------------------ root

@click.group()
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("--threads", type=int, default=None, envvar=se.THREADS_ENV,
              help=f"Worker cap (default from ${se.THREADS_ENV}, else 1).")
@click.pass_context
def main(ctx: click.Context, as_json: bool, threads: int | None) -> None:
    """Ternary self-dual codes and the Hadamard matrices inside them."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json
    ctx.obj["threads"] = threads


# ------------------------------------------------------------ construct / verify

@main.command()
@click.argument("name")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the generator here.")
@click.pass_context
def construct(ctx, name, output):
    """Build a named code: NV(29,+1), QR(47), P(17), C2 and so on."""
    label, code = resolve_code(name)
    text = format_code(code, label)
    _write(output, text)
    data = {"name": label, "n": code.n, "k": code.k, "self_dual": is_self_dual(code)}
    if output:
        data["output"] = output
    emit(ctx, data, None if output else text.rstrip())


@main.command()
@click.argument("code")
@click.pass_context
def verify(ctx, code):
    """Self-orthogonality, self-duality and (for k <= 14) minimum weight."""
    label, c = resolve_code(code)
    data = {"name": label, "n": c.n, "k": c.k, "self_orthogonal": is_self_orthogonal(c),
            "self_dual": is_self_dual(c)}
    if c.k <= 14:
        data["d"] = se.min_weight_bz(c).value
    emit(ctx, data)


# ------------------------------------------------------------ hadamard

@main.group()
def hadamard():
    """Build, verify and convert Hadamard matrices."""


def _hadamard_summary(h: hd.HadamardMatrix) -> dict:
    return {"order": h.order, "hadamard": hd.is_hadamard(h), "skew": hd.is_skew(h),
            "skew_negated": hd.is_skew(-h.array), "rank3": hd.hadamard_rank3(h)}


def _emit_matrix(ctx, h: hd.HadamardMatrix, output: str | None, label: str) -> None:
    text = format_signs(h.array, {"name": label, "order": h.order})
    _write(output, text)
    data = _hadamard_summary(h)
    data["name"] = label
    if output:
        data["output"] = output
    emit(ctx, data, None if output else text.rstrip())


@hadamard.command("build-nv")
@click.argument("p", type=int)
@click.argument("a", type=click.Choice(["1", "-1", "+1"]))
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.pass_context
def build_nv(ctx, p, a, output):
    """H_NV^(a)(p) for p = 5 mod 24."""
    a = int(a)
    _emit_matrix(ctx, hd.build_h_nv(p, a), output, f"H_NV({p},{a:+d})")


@hadamard.command("build-sds")
@click.argument("p", type=int)
@click.argument("a", type=click.Choice(["1", "-1", "+1"]))
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.pass_context
def build_sds(ctx, p, a, output):
    """Bordered matrix from the cyclotomic SDS pair matching H_NV^(a)(p)."""
    a = int(a)
    d1, d2 = hd.sds_for_theorem(p, a)
    _emit_matrix(ctx, hd.build_h_sds(d1, d2, v=p), output, f"H_SDS({p},{a:+d})")


@hadamard.command("paley")
@click.argument("q", type=int)
@click.option("--kind", type=click.Choice(["I", "II"]), default="I")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.pass_context
def paley(ctx, q, kind, output):
    """Paley type I or II matrix."""
    _emit_matrix(ctx, hd.build_paley(q, kind), output, f"Paley_{kind}({q})")


@hadamard.command("verify")
@click.argument("matrix")
@click.option("--code", "code_arg", help="Also check that every row lies in this code.")
@click.option("--format", "fmt", type=click.Choice(["auto", "sign", "octal"]), default="auto")
@click.pass_context
def hverify(ctx, matrix, code_arg, fmt):
    """Check a matrix; exits non-zero if it is not Hadamard."""
    try:
        h = resolve_matrix(matrix, fmt)
    except hd.NotHadamardError as exc:
        emit(ctx, {"hadamard": False, "error": str(exc)})
        ctx.exit(1)
    data = _hadamard_summary(h)
    if code_arg:
        label, code = resolve_code(code_arg)
        data["code"] = label
        data["rows_in_code"] = hd.rows_in_code(h, code)
    emit(ctx, data)


@hadamard.group()
def octal():
    """Convert between sign text and the 3-bits-per-digit octal listing."""


@octal.command("encode")
@click.argument("matrix")
@click.option("--per-line", type=int, default=None)
def octal_encode(matrix, per_line):
    h = resolve_matrix(matrix, "sign")
    click.echo(hd.octal_encode(hd.to_binary(h), per_line), nl=False)


@octal.command("decode")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--order", type=int, default=None)
def octal_decode(path, order):
    body = "\n".join(l for l in Path(path).read_text().splitlines() if not l.lstrip().startswith("#"))
    s = hd.from_binary(hd.octal_decode(body, order))
    click.echo(format_signs(s.array).rstrip())


# ------------------------------------------------------------ search

@main.group()
def search():
    """Full-weight enumeration, clique search and minimum weight."""


@search.command("fullweight")
@click.argument("code")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the sorted words here.")
@click.pass_context
def fullweight(ctx, code, output):
    label, c = resolve_code(code)
    r = se.enumerate_full_weight(c, threads=ctx.obj["threads"])
    if output:
        from .gf3 import format_gf3
        _write(output, format_gf3(r.words, {"name": f"full-weight words of {label}", "count": r.count}))
    emit(ctx, {"code": label, "length": r.length, "count": r.count,
               "normalized": len(se.sign_normalize(r.words))})


@search.command("clique")
@click.argument("code")
@click.option("--size", type=int, required=True)
@click.option("--budget", type=int, default=10**7, show_default=True, help="Search-tree node cap.")
@click.option("--seed-rows", type=click.Path(exists=True, dir_okay=False),
              help="Sign-text rows that every clique must contain.")
@click.option("--max-cliques", type=int, default=1000, show_default=True)
@click.option("-o", "--output", type=click.Path(file_okay=False), help="Directory for clique matrices.")
@click.pass_context
def clique(ctx, code, size, budget, seed_rows, max_cliques, output):
    label, c = resolve_code(code)
    words = se.enumerate_full_weight(c, threads=ctx.obj["threads"]).words
    vs = se.sign_normalize(words)
    g = se.build_ortho_graph(vs)
    seed = []
    if seed_rows:
        _, rows = parse_matrix_text(Path(seed_rows).read_text())
        seed = _locate_rows(vs, rows)
    r = se.find_cliques(g, size, budget=budget, seed=seed, max_cliques=max_cliques)
    if output:
        out = Path(output)
        out.mkdir(parents=True, exist_ok=True)
        for i, cl in enumerate(r.cliques):
            (out / f"clique_{i:04d}.txt").write_text(format_signs(se.clique_matrix(g, cl)))
    emit(ctx, {"code": label, "vertices": g.order, "size": size, "found": r.total_found,
               "kept": len(r.cliques), "status": r.status, "nodes": r.nodes})


def _locate_rows(vs: se.SignVectorSet, rows: np.ndarray) -> list[int]:
    index = {bytes(v.astype(np.int8)): i for i, v in enumerate(vs.vectors)}
    out = []
    for r in rows:
        r = np.asarray(r, dtype=np.int8)
        r = r * r[0]
        key = bytes(r)
        if key not in index:
            raise click.BadParameter("a seed row is not a full-weight codeword of the code")
        out.append(index[key])
    return out


@search.command("minweight")
@click.argument("code")
@click.option("--budget", type=int, default=None, help="Cap on enumerated messages.")
@click.pass_context
def minweight(ctx, code, budget):
    label, c = resolve_code(code)
    r = se.min_weight_bz(c, budget=budget)
    emit(ctx, {"code": label, "d": r.value, "exact": r.exact, "lower_bound": r.lower_bound,
               "upper_bound": r.upper_bound, "information_sets": r.information_sets,
               "enumerated": r.enumerated})


# ------------------------------------------------------------ equivalence

@main.group()
def equiv():
    """Hadamard equivalence, canonical forms and automorphism orders."""


_fmt_option = click.option("--format", "fmt", type=click.Choice(["auto", "sign", "octal"]), default="auto")


@equiv.command("check")
@click.argument("a")
@click.argument("b")
@_fmt_option
@click.pass_context
def equiv_check(ctx, a, b, fmt):
    r = eq.are_equivalent(resolve_matrix(a, fmt), resolve_matrix(b, fmt))
    data = r.to_json()
    data["convention_note"] = "equivalence means K = P H Q with signed permutation matrices P, Q"
    emit(ctx, data)


@equiv.command("canon")
@click.argument("a")
@_fmt_option
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.pass_context
def equiv_canon(ctx, a, fmt, output):
    canon, pair = eq.canonical_form(resolve_matrix(a, fmt))
    text = format_signs(canon.array)
    _write(output, text)
    data = {"order": canon.order, "pair": pair.to_json()}
    if output:
        data["output"] = output
    emit(ctx, data, None if output else text.rstrip())


@equiv.command("autorder")
@click.argument("a")
@_fmt_option
@click.pass_context
def equiv_autorder(ctx, a, fmt):
    r = eq.automorphism_group(resolve_matrix(a, fmt))
    emit(ctx, {"aut_order": r.order, "aut_order_mod_negation": r.order_mod_negation,
               "convention_note": r.convention})


# ------------------------------------------------------------ recipes

@main.group()
def recipe():
    """Bundled, replayable experiment recipes."""


@recipe.command("list")
def recipe_list():
    for name, r in rc.bundled_recipes().items():
        click.echo(f"{name:22s} {r.tier:5s} {r.description}")


@recipe.command("run")
@click.argument("name")
@click.option("--tier", type=click.Choice(["fast", "long"]), default="fast", show_default=True)
@click.pass_context
def recipe_run(ctx, name, tier):
    """Run a bundled recipe (or a recipe file); exit code 1 on any failed assertion."""
    try:
        r = rc.load_recipe(name)
    except rc.RecipeError as exc:
        raise click.ClickException(str(exc))
    report = rc.run_recipe(r, tier=tier, threads=ctx.obj["threads"])
    click.echo(rc.report_json(report))
    if not report["passed"]:
        ctx.exit(1)


@main.command()
@click.argument("name")
def describe(name):
    """Parameters and invariant checklist of a registered construction."""
    try:
        click.echo(rc.describe(name))
    except rc.RecipeError as exc:
        raise click.ClickException(str(exc))
    except (cons.ConstructionError, hd.NotHadamardError) as exc:
        raise click.ClickException(str(exc))


if __name__ == "__main__":
    sys.exit(main())
