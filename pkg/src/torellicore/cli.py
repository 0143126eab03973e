"""Command-line front end.

    torellicore [--format json|text] [--seed N] COMMAND ...

Commands
--------
enumerate supersets|h2prime   maximal multisets or five-element cells through A
eval sigma|psi|nu|classify    evaluate a homomorphism or classify a multiset
verify SUITE... | all         run acceptance suites
descent sigma|lambda|case2|kernel
report                        every suite plus environment, as one document

Exit status is 0 when every check passes, 1 when some check fails and 2 on
a usage error (bad flag, malformed JSON, input outside the domain).
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path
from typing import Any, Iterable, List, Sequence

import click

from . import __version__, acceptance as ac, bcj, cyclecomplex as cc, descent as de, gf2
from . import quadbool as qb, stabrep as sr
from .homlattice import RANK, combo, mod2

EXIT_FAIL = 1


# ---------------------------------------------------------------- parsing helpers


def _json_arg(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"{what} is not valid JSON ({exc.msg})") from None


def _hclass(obj: Any, what: str) -> tuple:
    if not isinstance(obj, list) or len(obj) != RANK or not all(isinstance(v, int) for v in obj):
        raise click.BadParameter(f"{what} must be a list of {RANK} integers")
    return tuple(obj)


def _hclasses(text: str, what: str) -> List[tuple]:
    obj = _json_arg(text, what)
    if not isinstance(obj, list) or not obj:
        raise click.BadParameter(f"{what} must be a non-empty list of classes")
    return [_hclass(v, f"element of {what}") for v in obj]


def _x_or_sum(x_text: str | None, A: Sequence[tuple]) -> tuple:
    if x_text is not None:
        return _hclass(_json_arg(x_text, "--x"), "--x")
    return combo([1] * len(A), A)


def _load_form(path: str | None, rng: random.Random, x: tuple) -> de.FLinearForm:
    if path is None:
        return de.FLinearForm.random(rng, x)
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise click.BadParameter(f"cannot read --f: {exc}") from None
    obj = _json_arg(text, "--f")
    if isinstance(obj, list):
        obj = {"functionals": obj}
    try:
        return de.FLinearForm.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise click.BadParameter(f"--f has the wrong shape ({exc})") from None


def _domain(fn, *args):
    """Run a library call, turning input-domain errors into usage errors."""
    try:
        return fn(*args)
    except (ValueError, KeyError) as exc:
        raise click.UsageError(str(exc)) from None


# ---------------------------------------------------------------- output


def _emit(ctx: click.Context, payload: Any, text: str, ok: bool = True) -> None:
    if ctx.obj["format"] == "json":
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(text)
    if not ok:
        ctx.exit(EXIT_FAIL)


def _fmt_classes(vs: Iterable[Sequence[int]]) -> str:
    return "{" + ", ".join("(" + ",".join(str(c) for c in v) + ")" for v in vs) + "}"


@click.group()
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
@click.option("--seed", type=int, default=ac.DEFAULT_SEED, show_default=True, help="Seed for all randomness.")
@click.version_option(__version__, prog_name="torellicore")
@click.pass_context
def cli(ctx: click.Context, fmt: str, seed: int) -> None:
    """Exact models of the genus-3 cycle complex and its verification suites."""
    ctx.ensure_object(dict)
    ctx.obj.update(format=fmt, seed=seed)


# ---------------------------------------------------------------- enumerate


@cli.group("enumerate")
def enumerate_() -> None:
    """Enumerate multisets through a vertex set."""


@enumerate_.command("supersets")
@click.option("--A", "A_text", required=True, help="JSON list of three classes.")
@click.option("--x", "x_text", default=None, help="JSON class; defaults to the sum of A.")
@click.pass_context
def enumerate_supersets(ctx: click.Context, A_text: str, x_text: str | None) -> None:
    """The maximal multisets of the cell set that contain A."""
    A = _hclasses(A_text, "--A")
    x = _x_or_sum(x_text, A)
    items = _domain(cc.supersets_in_H, A, x)
    payload = {"A": [list(a) for a in A], "x": list(x), "count": len(items),
               "items": [cc.multiset_to_json(E) for E in items]}
    text = "\n".join([f"{len(items)} maximal multisets"] + [_fmt_classes(E) for E in items])
    _emit(ctx, payload, text)


@enumerate_.command("h2prime")
@click.option("--A", "A_text", required=True, help="JSON list of classes (a vertex set or a multiset containing one).")
@click.option("--x", "x_text", default=None, help="JSON class; defaults to the sum of A.")
@click.pass_context
def enumerate_h2prime(ctx: click.Context, A_text: str, x_text: str | None) -> None:
    """Five-element cells with two pants relations containing A."""
    A = _hclasses(A_text, "--A")
    x = _x_or_sum(x_text, A[:3])
    items = _domain(cc.h2prime_containing, A, x)
    rows = []
    for D in items:
        cls = cc.classify(D)
        rows.append({"cell": cc.multiset_to_json(D), "principal": list(cls.principal)})
    payload = {"A": [list(a) for a in A], "x": list(x), "count": len(items), "items": rows}
    text = "\n".join([f"{len(items)} cells"] + [
        f"{_fmt_classes(D)}  principal {tuple(cc.classify(D).principal)}" for D in items
    ])
    _emit(ctx, payload, text)


# ---------------------------------------------------------------- eval


@cli.group("eval")
def eval_() -> None:
    """Evaluate homomorphisms on generators and words."""


def _generators(text: str) -> List[bcj.SymbolicGenerator]:
    obj = _json_arg(text, "--gen")
    items = obj if isinstance(obj, list) else [obj]
    try:
        return [bcj.SymbolicGenerator.from_json(g) for g in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise click.UsageError(f"bad generator: {exc}") from None


@eval_.command("sigma")
@click.option("--gen", "gen_text", required=True, help="JSON generator or list of generators (a word).")
@click.option("--A", "A_text", default=None, help="JSON vertex set; adds the rho-vector over its four forms.")
@click.option("--hat/--no-hat", default=False, help="Use the extension that accepts the involution.")
@click.pass_context
def eval_sigma(ctx: click.Context, gen_text: str, A_text: str | None, hat: bool) -> None:
    """sigma (or sigma-hat) of a generator word, as a table on the Arf-zero forms."""
    word = _generators(gen_text)
    e = _domain(bcj.sigma_hat_word if hat else bcj.sigma_word, word)
    payload: dict = {"table": e.to_json(), "degree": qb.degree(e), "in_B3": qb.in_Bk(e, 3)}
    text = f"sigma = {e.to_json()}  degree {payload['degree']}  in B'_3: {payload['in_B3']}"
    if A_text is not None:
        A = _hclasses(A_text, "--A")
        fam = _domain(qb.four_forms, [mod2(a) for a in A])
        payload["rho"] = list(fam.rho_vector(e))
        text += f"\nrho = {tuple(payload['rho'])}"
    _emit(ctx, payload, text)


@eval_.command("psi")
@click.option("--word", "word_text", default=None, help="JSON z-word [[\"z1\", e], ...] or w-word [[k, e], ...].")
@click.option("--iota-z3", is_flag=True, help="Evaluate the decomposition of [iota, z3].")
@click.pass_context
def eval_psi(ctx: click.Context, word_text: str | None, iota_z3: bool) -> None:
    """psi on a kernel element, through the rho-tables (and nu/2 for w-words)."""
    if iota_z3 == (word_text is not None):
        raise click.UsageError("give exactly one of --word and --iota-z3")
    if iota_z3:
        d = sr.iota_z3_decomposition()
        v = sr.psi_M(d)
        _emit(ctx, {"decomposition": d.to_json(), "psi": v}, f"psi([iota, z3]) = {v}")
        return
    obj = _json_arg(word_text, "--word")
    if not isinstance(obj, list):
        raise click.BadParameter("--word must be a JSON list of [letter, exponent] pairs")
    if obj and all(isinstance(p, list) and p and isinstance(p[0], int) for p in obj):
        w = _domain(sr.FiveCurveWord.from_json, obj)
        via_nu = _domain(sr.psi_on_CK, w)
        via_rho = _domain(lambda: sr.psi_M(sr.canonical_decomposition_ck(w)))
        payload = {"word": w.to_json(), "nu": w.nu(), "psi_nu": via_nu, "psi_rho": via_rho}
        text = f"nu = {w.nu()}  psi (nu/2) = {via_nu}  psi (rho) = {via_rho}"
        _emit(ctx, payload, text, ok=via_nu == via_rho)
        return
    w = _domain(sr.TypeOneWord.from_json, obj)
    d = _domain(sr.canonical_decomposition, w)
    v = sr.psi_M(d)
    _emit(ctx, {"word": w.to_json(), "decomposition": d.to_json(), "psi": v}, f"psi = {v}")


@eval_.command("nu")
@click.option("--gen", "gen_text", required=True, help="JSON generator or list of generators.")
@click.option("--gamma", required=True, help="Curve name (as tagged on the generator) or JSON class.")
@click.pass_context
def eval_nu(ctx: click.Context, gen_text: str, gamma: str) -> None:
    """nu_gamma of a generator word."""
    word = _generators(gen_text)
    try:
        g = tuple(json.loads(gamma))
    except (json.JSONDecodeError, TypeError):
        g = gamma
    v = _domain(sr.nu_word, word, g)
    _emit(ctx, {"gamma": gamma, "nu": v}, f"nu = {v}")


@eval_.command("classify")
@click.option("--C", "C_text", required=True, help="JSON multiset of classes.")
@click.pass_context
def eval_classify(ctx: click.Context, C_text: str) -> None:
    """Taxonomy tag, dimension and distinguished element of a multiset."""
    C = _hclasses(C_text, "--C")
    cls = _domain(cc.classify, cc.multiset(C))
    _emit(ctx, cls.to_json(), json.dumps(cls.to_json(), sort_keys=True))


# ---------------------------------------------------------------- verify and report


def _run_suites(names: Sequence[str], seed: int) -> List[ac.SuiteResult]:
    out = []
    for name in names:
        r = ac.run_suite(name, seed)
        out.append(r)
    return out


@cli.command()
@click.argument("suites", nargs=-1, required=True)
@click.option("--timings", is_flag=True, help="Include wall times in JSON (breaks byte-identical output).")
@click.option("--verbose", "-v", is_flag=True, help="List every check in text output.")
@click.pass_context
def verify(ctx: click.Context, suites: Sequence[str], timings: bool, verbose: bool) -> None:
    """Run named acceptance suites, or `all`."""
    names = list(ac.ORDER) if "all" in suites else list(suites)
    unknown = [n for n in names if n not in ac.SUITES]
    if unknown:
        raise click.UsageError(f"unknown suite(s) {', '.join(unknown)}; choose from all, {', '.join(ac.ORDER)}")
    results = _run_suites(names, ctx.obj["seed"])
    ok = all(r.ok for r in results)
    payload = {"seed": ctx.obj["seed"], "ok": ok, "suites": [r.to_json(timings) for r in results]}
    text = "\n".join(r.to_text(verbose) for r in results)
    _emit(ctx, payload, text, ok=ok)


@cli.command()
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Also write the JSON report to this file.")
@click.pass_context
def report(ctx: click.Context, output: str | None) -> None:
    """Every suite with timings and budgets, plus the environment."""
    results = _run_suites(ac.ORDER, ctx.obj["seed"])
    ok = all(r.ok and r.within_budget for r in results)
    payload = {
        "version": __version__,
        "gf2_backend": gf2.BACKEND,
        "python": sys.version.split()[0],
        "seed": ctx.obj["seed"],
        "ok": ok,
        "suites": [r.to_json(timings=True) for r in results],
    }
    if output:
        Path(output).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    text = "\n".join([f"torellicore {__version__} (gf2 backend: {gf2.BACKEND}, seed {ctx.obj['seed']})"]
                     + [r.summary_line() for r in results])
    _emit(ctx, payload, text, ok=ok)


# ---------------------------------------------------------------- descent


@cli.group()
def descent() -> None:
    """Replay descent steps and bounded global solves."""


@descent.command("sigma")
@click.option("--A0", "A_text", required=True, help="JSON list of three classes.")
@click.option("--x", "x_text", default=None, help="JSON class; defaults to the sum of A0.")
@click.pass_context
def descent_sigma(ctx: click.Context, A_text: str, x_text: str | None) -> None:
    """The sigma induction step at A0."""
    A = _hclasses(A_text, "--A0")
    x = _x_or_sum(x_text, A)
    rep = _domain(de.verify_sigma_descent, A, x)
    _emit(ctx, rep.to_json(), rep.to_text(), rep.ok)


@descent.command("lambda")
@click.option("--A0", "A_text", required=True, help="JSON list of three classes.")
@click.option("--x", "x_text", default=None, help="JSON class; defaults to the sum of A0.")
@click.option("--f", "f_path", default=None, help="JSON file with five covectors; random (from --seed) if omitted.")
@click.pass_context
def descent_lambda(ctx: click.Context, A_text: str, x_text: str | None, f_path: str | None) -> None:
    """The lambda induction step at a three-element A0."""
    A = _hclasses(A_text, "--A0")
    x = _x_or_sum(x_text, A)
    f = _domain(_load_form, f_path, random.Random(ctx.obj["seed"]), x)
    rep = _domain(de.verify_lambda_descent_case1, A, x, f)
    rep.data["f"] = f.to_json()
    _emit(ctx, rep.to_json(), rep.to_text(), rep.ok)


@descent.command("case2")
@click.option("--a1", "a1_text", required=True, help="JSON class.")
@click.option("--a2", "a2_text", required=True, help="JSON class.")
@click.option("--c", "c_text", required=True, help="JSON class completing a1, a2 to a Lagrangian basis.")
@click.option("--x", "x_text", default=None, help="JSON class; defaults to a1 + a2.")
@click.option("--f", "f_path", default=None, help="JSON file with five covectors; random if omitted.")
@click.pass_context
def descent_case2(ctx: click.Context, a1_text, a2_text, c_text, x_text, f_path) -> None:
    """The single step of the lambda descent at a two-element vertex set."""
    a1 = _hclass(_json_arg(a1_text, "--a1"), "--a1")
    a2 = _hclass(_json_arg(a2_text, "--a2"), "--a2")
    c = _hclass(_json_arg(c_text, "--c"), "--c")
    x = _x_or_sum(x_text, [a1, a2])
    f = _domain(_load_form, f_path, random.Random(ctx.obj["seed"]), x)
    rep = _domain(de.lambda_case2_step, a1, a2, c, f, x)
    rep.data["f"] = f.to_json()
    _emit(ctx, rep.to_json(), rep.to_text(), rep.ok)


@descent.command("kernel")
@click.option("--system", type=click.Choice(["sigma", "lambda"]), required=True)
@click.option("--bound", type=click.IntRange(min=0), default=8, show_default=True)
@click.option("--radius", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--x", "x_text", default=None, help="JSON class; defaults to a1 + a2 + a3.")
@click.pass_context
def descent_kernel(ctx: click.Context, system: str, bound: int, radius: int, x_text: str | None) -> None:
    """Kernel of the bounded linear system on the covered unknowns."""
    x = _hclass(_json_arg(x_text, "--x"), "--x") if x_text else (1, 1, 1, 0, 0, 0)
    rep = _domain(de.bounded_kernel_check, system, bound, x, radius)
    _emit(ctx, rep.to_json(), rep.to_text(), rep.ok)


def main(argv: Sequence[str] | None = None) -> None:
    """Console entry point (exits with the command's status)."""
    cli.main(args=list(argv) if argv is not None else None, prog_name="torellicore")


__all__ = ["cli", "main"]
